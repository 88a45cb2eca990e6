//! The five-panel policy dictionary and the target-sentence filter.
//!
//! Panels A1 and B1 hold policy-relevant noun phrases, A2 and B2 hold
//! direction verbs, and panel C holds negation phrases. A sentence is a
//! "target" sentence when it contains at least one A1 or B1 phrase; the
//! corpus filter keeps exactly the target sentences, and the speech-title
//! filter keeps exactly the speeches whose title is itself a target
//! sentence.
//!
//! Matching semantics (applied uniformly everywhere the dictionary is
//! consulted):
//!
//! - the sentence is lowercased and tokenized on non-alphanumeric characters,
//!   keeping apostrophes inside tokens;
//! - a single-word term matches any token it is a prefix of, so the listed
//!   stem `decline` covers `declined`, `declines`, and `declining`. No
//!   other stemming is performed, which is why irregular and e-drop forms
//!   (`fell`, `easing`, `pausing`, `rising`) are listed explicitly;
//! - a multi-word phrase matches a consecutive token run, with a trailing
//!   `s` allowed on the final token (`inflation expectations` matches
//!   `inflation expectation`);
//! - panel C phrases contain apostrophes and spaces that tokenize awkwardly,
//!   so they are matched as substrings of the lowercased raw text.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, DocumentKind};
use crate::error::Error;
use crate::provenance;
use crate::Result;

/// Identifier of one dictionary panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PanelId {
    A1,
    B1,
    A2,
    B2,
    C,
}

impl PanelId {
    pub fn as_str(self) -> &'static str {
        match self {
            PanelId::A1 => "A1",
            PanelId::B1 => "B1",
            PanelId::A2 => "A2",
            PanelId::B2 => "B2",
            PanelId::C => "C",
        }
    }
}

impl FromStr for PanelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A1" => Ok(PanelId::A1),
            "B1" => Ok(PanelId::B1),
            "A2" => Ok(PanelId::A2),
            "B2" => Ok(PanelId::B2),
            "C" => Ok(PanelId::C),
            other => Err(Error::Parse {
                what: "panel id",
                value: other.to_string(),
            }),
        }
    }
}

impl fmt::Display for PanelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The dictionary: five phrase panels plus the ordered contrast keywords used
/// by sentence splitting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexicon {
    pub panel_a1: BTreeSet<String>,
    pub panel_b1: BTreeSet<String>,
    pub panel_a2: BTreeSet<String>,
    pub panel_b2: BTreeSet<String>,
    pub panel_c: BTreeSet<String>,
    pub split_keywords: Vec<String>,
}

fn phrase_set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon {
            panel_a1: phrase_set(&[
                "inflation expectation",
                "interest rate",
                "bank rate",
                "fund rate",
                "price",
                "economic activity",
                "inflation",
                "employment",
            ]),
            panel_b1: phrase_set(&[
                "unemployment",
                "growth",
                "exchange rate",
                "productivity",
                "deficit",
                "demand",
                "job market",
                "monetary policy",
            ]),
            panel_a2: phrase_set(&[
                "anchor",
                "cut",
                "subdue",
                "decline",
                "decrease",
                "reduce",
                "low",
                "drop",
                "fall",
                "fell",
                "decelerate",
                "slow",
                "pause",
                "pausing",
                "stable",
                "non-accelerating",
                "downward",
                "tighten",
            ]),
            panel_b2: phrase_set(&[
                "ease", "easing", "rise", "rising", "increase", "expand", "improve", "strong",
                "upward", "raise", "high", "rapid",
            ]),
            panel_c: phrase_set(&[
                "weren't", "were not", "wasn't", "was not", "did not", "didn't", "do not", "don't",
                "will not", "won't",
            ]),
            split_keywords: ["but", "however", "even though", "although", "while", ";"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }
}

impl Lexicon {
    pub fn panel(&self, id: PanelId) -> &BTreeSet<String> {
        match id {
            PanelId::A1 => &self.panel_a1,
            PanelId::B1 => &self.panel_b1,
            PanelId::A2 => &self.panel_a2,
            PanelId::B2 => &self.panel_b2,
            PanelId::C => &self.panel_c,
        }
    }

    /// Panels must be pairwise disjoint and split keywords non-empty.
    pub fn validate(&self) -> Result<()> {
        let panels = [
            PanelId::A1,
            PanelId::B1,
            PanelId::A2,
            PanelId::B2,
            PanelId::C,
        ];
        for (i, &a) in panels.iter().enumerate() {
            for &b in &panels[i + 1..] {
                if let Some(shared) = self.panel(a).intersection(self.panel(b)).next() {
                    return Err(Error::Lexicon(format!(
                        "panels {a} and {b} both contain `{shared}`"
                    )));
                }
            }
        }
        if self.split_keywords.iter().any(|k| k.trim().is_empty()) {
            return Err(Error::Lexicon("empty split keyword".into()));
        }
        Ok(())
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let lexicon: Lexicon = serde_json::from_str(&raw)
            .map_err(|e| Error::Lexicon(format!("{}: {e}", path.display())))?;
        lexicon.validate()?;
        Ok(lexicon)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("lexicon serializes")
    }

    /// Stable content fingerprint for provenance headers.
    pub fn fingerprint(&self) -> String {
        provenance::fingerprint(self.to_json_string().as_bytes())
    }

    /// Matched phrases of one panel in a sentence; see the module docs for
    /// the matching semantics.
    pub fn match_panel(&self, sentence: &str, panel: PanelId) -> BTreeSet<String> {
        let phrases = self.panel(panel);
        if panel == PanelId::C {
            let lowered = sentence.to_lowercase();
            return phrases
                .iter()
                .filter(|p| lowered.contains(p.as_str()))
                .cloned()
                .collect();
        }
        let tokens = term_tokens(sentence);
        phrases
            .iter()
            .filter(|phrase| phrase_matches(&tokens, phrase))
            .cloned()
            .collect()
    }

    pub fn matches_panel(&self, sentence: &str, panel: PanelId) -> bool {
        !self.match_panel(sentence, panel).is_empty()
    }

    /// A target sentence contains at least one A1 or B1 phrase.
    pub fn is_target_sentence(&self, sentence: &str) -> bool {
        self.matches_panel(sentence, PanelId::A1) || self.matches_panel(sentence, PanelId::B1)
    }

    /// Union of A1 and B1 matches; the filter records these as evidence.
    pub fn target_evidence(&self, sentence: &str) -> BTreeSet<String> {
        let mut out = self.match_panel(sentence, PanelId::A1);
        out.extend(self.match_panel(sentence, PanelId::B1));
        out
    }

    /// True when any phrase of any of the given panels matches.
    pub fn matches_any_panel(&self, sentence: &str, panels: &[PanelId]) -> bool {
        panels.iter().any(|&p| self.matches_panel(sentence, p))
    }
}

/// Lowercase tokens split on non-alphanumerics, apostrophes kept inside
/// tokens. This is the exact tokenization the matcher applies to sentences
/// and to dictionary phrases.
pub fn term_tokens(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for c in text.chars() {
        if c.is_alphanumeric() || c == '\'' || c == '\u{2019}' {
            current.extend(c.to_lowercase());
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    // Apostrophes are kept only inside tokens; strip stray edges.
    tokens
        .into_iter()
        .map(|t| t.trim_matches(|c| c == '\'' || c == '\u{2019}').to_string())
        .filter(|t| !t.is_empty())
        .collect()
}

fn phrase_matches(tokens: &[String], phrase: &str) -> bool {
    let parts = term_tokens(phrase);
    match parts.as_slice() {
        [] => false,
        [single] => tokens.iter().any(|t| t.starts_with(single.as_str())),
        multi => {
            let k = multi.len();
            if tokens.len() < k {
                return false;
            }
            (0..=tokens.len() - k).any(|i| {
                multi[..k - 1].iter().zip(&tokens[i..]).all(|(p, t)| p == t)
                    && final_token_matches(&tokens[i + k - 1], &multi[k - 1])
            })
        }
    }
}

/// Final token of a multi-word phrase: exact, or the listed singular plus a
/// trailing `s`.
fn final_token_matches(token: &str, part: &str) -> bool {
    token == part
        || (token.len() == part.len() + 1 && token.starts_with(part) && token.ends_with('s'))
}

// ---------------------------------------------------------------------------
// Corpus filtering
// ---------------------------------------------------------------------------

/// Outcome of the target-sentence filter.
#[derive(Debug, Clone, Serialize)]
pub struct FilterReport {
    pub kept: usize,
    pub dropped: usize,
    pub kept_per_file: BTreeMap<String, usize>,
    /// Documents whose sentences were all filtered out; they stay in the
    /// corpus with empty sentence lists.
    pub empty_documents: Vec<String>,
    /// Matched A1/B1 phrases per kept sentence, keyed by sentence key.
    pub evidence: BTreeMap<String, Vec<String>>,
}

/// Keep exactly the target sentences of every document.
///
/// The document set is unchanged; documents left with zero sentences are
/// flagged rather than removed so downstream stages can report them.
pub fn filter_corpus(corpus: &Corpus, lexicon: &Lexicon) -> (Corpus, FilterReport) {
    let mut kept = 0;
    let mut dropped = 0;
    let mut kept_per_file = BTreeMap::new();
    let mut empty_documents = Vec::new();
    let mut evidence = BTreeMap::new();

    let mut documents = Vec::with_capacity(corpus.len());
    for doc in corpus.documents() {
        let mut new_doc = doc.clone();
        new_doc.sentences = Vec::new();
        for s in &doc.sentences {
            let hits = lexicon.target_evidence(&s.text);
            if hits.is_empty() {
                dropped += 1;
            } else {
                kept += 1;
                evidence.insert(s.key(), hits.into_iter().collect());
                new_doc.sentences.push(s.clone());
            }
        }
        kept_per_file.insert(doc.id.clone(), new_doc.sentences.len());
        if new_doc.sentences.is_empty() {
            new_doc.filtered_empty = true;
            empty_documents.push(doc.id.clone());
        }
        documents.push(new_doc);
    }

    let filtered = Corpus::new(documents).expect("ids unchanged by filtering");
    (
        filtered,
        FilterReport {
            kept,
            dropped,
            kept_per_file,
            empty_documents,
            evidence,
        },
    )
}

/// Per-group statistics of the speech-title filter, mirroring the target
/// density comparison used to justify it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TitleGroupStats {
    pub files: usize,
    pub sentences: usize,
    pub target_sentences: usize,
    pub target_per_file: f64,
}

impl TitleGroupStats {
    fn from_counts(files: usize, sentences: usize, target_sentences: usize) -> Self {
        TitleGroupStats {
            files,
            sentences,
            target_sentences,
            target_per_file: if files == 0 {
                0.0
            } else {
                target_sentences as f64 / files as f64
            },
        }
    }
}

/// Outcome of the speech-title filter.
#[derive(Debug, Clone, Serialize)]
pub struct TitleFilterReport {
    pub all: TitleGroupStats,
    pub kept: TitleGroupStats,
    pub dropped: TitleGroupStats,
    /// Speeches without a title; always dropped.
    pub untitled: Vec<String>,
}

/// Keep the speeches whose title is itself a target sentence.
///
/// Every document must be a speech; titleless speeches are dropped and
/// flagged.
pub fn filter_speech_titles(
    corpus: &Corpus,
    lexicon: &Lexicon,
) -> Result<(Corpus, TitleFilterReport)> {
    for doc in corpus.documents() {
        if doc.kind != DocumentKind::Speech {
            return Err(Error::Invalid(format!(
                "speech-title filter applied to {} document {}",
                doc.kind, doc.id
            )));
        }
    }

    let count_targets = |doc: &crate::corpus::Document| {
        doc.sentences
            .iter()
            .filter(|s| lexicon.is_target_sentence(&s.text))
            .count()
    };

    let mut kept_docs = Vec::new();
    let mut untitled = Vec::new();
    let mut tally = BTreeMap::from([
        ("all", (0, 0, 0)),
        ("kept", (0, 0, 0)),
        ("dropped", (0, 0, 0)),
    ]);
    let mut add = |group: &str, doc_sentences: usize, doc_targets: usize| {
        let entry = tally.get_mut(group).expect("known group");
        entry.0 += 1;
        entry.1 += doc_sentences;
        entry.2 += doc_targets;
    };

    for doc in corpus.documents() {
        let sentences = doc.sentences.len();
        let targets = count_targets(doc);
        add("all", sentences, targets);
        let keep = match &doc.title {
            Some(title) => lexicon.is_target_sentence(title),
            None => {
                untitled.push(doc.id.clone());
                false
            }
        };
        if keep {
            add("kept", sentences, targets);
            kept_docs.push(doc.clone());
        } else {
            add("dropped", sentences, targets);
        }
    }

    let stats = |group: &str| {
        let (f, s, t) = tally[group];
        TitleGroupStats::from_counts(f, s, t)
    };
    let report = TitleFilterReport {
        all: stats("all"),
        kept: stats("kept"),
        dropped: stats("dropped"),
        untitled,
    };
    Ok((
        Corpus::new(kept_docs).expect("subset of unique ids"),
        report,
    ))
}
