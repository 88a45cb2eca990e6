//! Rule-based hawkish/dovish/neutral classification.
//!
//! The classifier fires on panel combinations: a sentence with an A1 phrase
//! and an A2 phrase (or B1 and B2) is provisionally dovish; A1 with B2 (or
//! A2 with B1) is provisionally hawkish. When exactly one polarity fires the
//! sentence takes that label; when both or neither fire it is neutral under
//! the default tie rule. A panel C negation phrase flips a non-neutral
//! provisional label.
//!
//! [`LabelSource`] abstracts over this rule set and externally supplied
//! prediction files, so the measure and evaluation stages run unchanged on
//! model output.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::{sentence_key, Corpus, DocumentKind, StanceLabel};
use crate::error::Error;
use crate::lexicon::{Lexicon, PanelId};
use crate::Result;

/// Panel combination that fired for one polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum PanelPair {
    A1A2,
    B1B2,
    A1B2,
    A2B1,
}

impl PanelPair {
    pub fn as_str(self) -> &'static str {
        match self {
            PanelPair::A1A2 => "A1+A2",
            PanelPair::B1B2 => "B1+B2",
            PanelPair::A1B2 => "A1+B2",
            PanelPair::A2B1 => "A2+B1",
        }
    }
}

impl fmt::Display for PanelPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Phrases behind one fired combination.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairEvidence {
    pub pair: PanelPair,
    pub phrases: BTreeSet<String>,
}

/// Full audit trail of one rule classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleVerdict {
    pub label: StanceLabel,
    pub dovish_evidence: Vec<PairEvidence>,
    pub hawkish_evidence: Vec<PairEvidence>,
    pub negation_flipped: bool,
}

/// What to do when both the dovish and the hawkish combinations fire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieRule {
    /// Mixed evidence reads as neutral.
    #[default]
    Neutral,
    /// The dovish rule is checked first and wins ties.
    FirstMatch,
}

impl std::str::FromStr for TieRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "neutral" => Ok(TieRule::Neutral),
            "first-match" | "first_match" => Ok(TieRule::FirstMatch),
            other => Err(Error::Parse {
                what: "tie rule",
                value: other.to_string(),
            }),
        }
    }
}

/// Classify one sentence with the panel-combination rules.
pub fn rule_classify(sentence: &str, lexicon: &Lexicon, tie: TieRule) -> RuleVerdict {
    let a1 = lexicon.match_panel(sentence, PanelId::A1);
    let b1 = lexicon.match_panel(sentence, PanelId::B1);
    let a2 = lexicon.match_panel(sentence, PanelId::A2);
    let b2 = lexicon.match_panel(sentence, PanelId::B2);
    let negations = lexicon.match_panel(sentence, PanelId::C);

    let pair = |p: PanelPair, x: &BTreeSet<String>, y: &BTreeSet<String>| {
        (!x.is_empty() && !y.is_empty()).then(|| PairEvidence {
            pair: p,
            phrases: x.union(y).cloned().collect(),
        })
    };
    let dovish_evidence: Vec<_> = [
        pair(PanelPair::A1A2, &a1, &a2),
        pair(PanelPair::B1B2, &b1, &b2),
    ]
    .into_iter()
    .flatten()
    .collect();
    let hawkish_evidence: Vec<_> = [
        pair(PanelPair::A1B2, &a1, &b2),
        pair(PanelPair::A2B1, &a2, &b1),
    ]
    .into_iter()
    .flatten()
    .collect();

    let provisional = match (!dovish_evidence.is_empty(), !hawkish_evidence.is_empty()) {
        (true, false) => StanceLabel::Dovish,
        (false, true) => StanceLabel::Hawkish,
        (true, true) => match tie {
            TieRule::Neutral => StanceLabel::Neutral,
            TieRule::FirstMatch => StanceLabel::Dovish,
        },
        (false, false) => StanceLabel::Neutral,
    };

    // Negation reverses only a polar provisional label.
    let (label, negation_flipped) = match provisional {
        StanceLabel::Dovish if !negations.is_empty() => (StanceLabel::Hawkish, true),
        StanceLabel::Hawkish if !negations.is_empty() => (StanceLabel::Dovish, true),
        other => (other, false),
    };

    RuleVerdict {
        label,
        dovish_evidence,
        hawkish_evidence,
        negation_flipped,
    }
}

/// Where predicted labels come from.
#[derive(Debug, Clone)]
pub enum LabelSource {
    RuleBased { lexicon: Lexicon, tie: TieRule },
    ExternalFile { path: PathBuf },
}

impl LabelSource {
    pub fn rule_based(lexicon: Lexicon) -> Self {
        LabelSource::RuleBased {
            lexicon,
            tie: TieRule::Neutral,
        }
    }

    pub fn external(path: impl Into<PathBuf>) -> Self {
        LabelSource::ExternalFile { path: path.into() }
    }

    pub fn describe(&self) -> String {
        match self {
            LabelSource::RuleBased { .. } => "rule-based".to_string(),
            LabelSource::ExternalFile { path } => format!("external:{}", path.display()),
        }
    }
}

/// Predictions loaded from an external label file, keyed by sentence key.
pub type LabelMap = BTreeMap<String, StanceLabel>;

/// Load an external prediction CSV `{doc_id, sentence_index, label}` with an
/// optional `sub_index` column, using the 0/1/2 label codes.
pub fn load_label_csv(path: impl AsRef<Path>) -> Result<LabelMap> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::csv(path, e))?;
    let headers = reader.headers().map_err(|e| Error::csv(path, e))?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
    };
    let col_doc =
        find("doc_id").ok_or_else(|| Error::record(path, 1, "missing required column `doc_id`"))?;
    let col_idx = find("sentence_index")
        .ok_or_else(|| Error::record(path, 1, "missing required column `sentence_index`"))?;
    let col_label =
        find("label").ok_or_else(|| Error::record(path, 1, "missing required column `label`"))?;
    let col_sub = find("sub_index");

    let mut labels = LabelMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::csv(path, e))?;
        let row = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |idx: usize| record.get(idx).unwrap_or("").trim();
        let doc_id = field(col_doc);
        let index: u32 = field(col_idx).parse().map_err(|_| {
            Error::record(
                path,
                row,
                format!("malformed sentence_index `{}`", field(col_idx)),
            )
        })?;
        let sub_index =
            match col_sub.map(field) {
                Some("") | None => None,
                Some(raw) => Some(raw.parse::<u32>().map_err(|_| {
                    Error::record(path, row, format!("malformed sub_index `{raw}`"))
                })?),
            };
        let code: u8 = field(col_label).parse().map_err(|_| {
            Error::record(
                path,
                row,
                format!("unknown label code `{}`", field(col_label)),
            )
        })?;
        let label = StanceLabel::from_code(code)
            .map_err(|_| Error::record(path, row, format!("unknown label code `{code}`")))?;
        let key = sentence_key(doc_id, index, sub_index);
        if labels.insert(key.clone(), label).is_some() {
            return Err(Error::record(
                path,
                row,
                format!("duplicate label for {key}"),
            ));
        }
    }
    Ok(labels)
}

fn label_for(key: &str, labels: &LabelMap) -> Option<StanceLabel> {
    labels.get(key).copied()
}

/// Per-label counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LabelCounts {
    pub dovish: usize,
    pub hawkish: usize,
    pub neutral: usize,
}

impl LabelCounts {
    fn add(&mut self, label: StanceLabel) {
        match label {
            StanceLabel::Dovish => self.dovish += 1,
            StanceLabel::Hawkish => self.hawkish += 1,
            StanceLabel::Neutral => self.neutral += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.dovish + self.hawkish + self.neutral
    }
}

/// Predicted-label distribution per document kind.
#[derive(Debug, Clone, Default, Serialize)]
pub struct DistributionReport {
    pub per_kind: BTreeMap<DocumentKind, LabelCounts>,
    pub total: LabelCounts,
}

/// Assign a predicted label to every sentence of the corpus.
///
/// With an external file, every sentence key must be covered; the error
/// lists up to the first ten missing keys.
pub fn classify_corpus(
    corpus: &Corpus,
    source: &LabelSource,
) -> Result<(Corpus, DistributionReport)> {
    let external = match source {
        LabelSource::ExternalFile { path } => Some(load_label_csv(path)?),
        LabelSource::RuleBased { .. } => None,
    };

    if let Some(labels) = &external {
        let missing: Vec<String> = corpus
            .sentences()
            .map(|s| s.key())
            .filter(|k| !labels.contains_key(k))
            .collect();
        if !missing.is_empty() {
            let count = missing.len();
            return Err(Error::LabelCoverage {
                count,
                missing: missing.into_iter().take(10).collect(),
            });
        }
    }

    let mut report = DistributionReport::default();
    let mut documents = Vec::with_capacity(corpus.len());
    for doc in corpus.documents() {
        let mut new_doc = doc.clone();
        for s in &mut new_doc.sentences {
            let label = match source {
                LabelSource::RuleBased { lexicon, tie } => {
                    rule_classify(&s.text, lexicon, *tie).label
                }
                LabelSource::ExternalFile { .. } => {
                    label_for(&s.key(), external.as_ref().expect("loaded above"))
                        .expect("coverage checked above")
                }
            };
            s.predicted_label = Some(label);
            report.per_kind.entry(doc.kind).or_default().add(label);
            report.total.add(label);
        }
        documents.push(new_doc);
    }
    Ok((Corpus::new(documents).expect("ids unchanged"), report))
}

/// Write predictions in the external label CSV schema.
pub fn write_label_csv<W: std::io::Write>(
    corpus: &Corpus,
    writer: W,
) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["doc_id", "sentence_index", "sub_index", "label"])?;
    for doc in corpus.documents() {
        for s in &doc.sentences {
            if let Some(label) = s.predicted_label {
                w.write_record([
                    s.doc_id.as_str(),
                    &s.index.to_string(),
                    &s.sub_index.map(|x| x.to_string()).unwrap_or_default(),
                    &label.code().to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
