//! Contrast-keyword sentence splitting.
//!
//! Policy statements often pair a stance with a counterweight clause
//! ("inflation rose, but unemployment also increased"). Splitting such
//! sentences at contrast keywords separates the opposing sub-stances so the
//! segments can be labeled individually.
//!
//! A candidate split at a keyword occurrence is valid only when *both*
//! resulting segments still contain a dictionary phrase from the validity
//! panels (A1 and B1 by default, matching the target-sentence filter).
//! Occurrences are tried left to right; after a valid split the left segment
//! is final and splitting recurses on the right segment, so a sentence can
//! yield more than two segments. Keywords are removed from the output, and
//! word keywords only match as standalone tokens ("while" never fires inside
//! "meanwhile").

use serde::Serialize;

use crate::corpus::{Corpus, Sentence};
use crate::error::Error;
use crate::lexicon::{Lexicon, PanelId};
use crate::Result;

/// Validity panels used when none are specified: the noun panels that also
/// drive target filtering.
pub const DEFAULT_VALIDITY_PANELS: [PanelId; 2] = [PanelId::A1, PanelId::B1];

/// Outcome of splitting one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitResult {
    pub original: String,
    /// At least one segment; more than one iff `split_applied`.
    pub segments: Vec<String>,
    pub split_applied: bool,
    /// Keywords removed at each applied split boundary, in order.
    pub keywords_used: Vec<String>,
}

impl SplitResult {
    /// First keyword that triggered a split, if any.
    pub fn keyword_used(&self) -> Option<&str> {
        self.keywords_used.first().map(|s| s.as_str())
    }
}

/// Split one sentence at the first valid contrast-keyword occurrence,
/// recursing on the right segment.
pub fn split_sentence(text: &str, lexicon: &Lexicon, validity: &[PanelId]) -> SplitResult {
    let mut segments = Vec::new();
    let mut keywords_used = Vec::new();
    let mut rest = text.trim().to_string();

    while let Some((left, right, keyword)) = first_valid_split(&rest, lexicon, validity) {
        segments.push(left);
        keywords_used.push(keyword);
        rest = right;
    }
    segments.push(rest);

    SplitResult {
        original: text.to_string(),
        split_applied: segments.len() > 1,
        segments,
        keywords_used,
    }
}

fn first_valid_split(
    text: &str,
    lexicon: &Lexicon,
    validity: &[PanelId],
) -> Option<(String, String, String)> {
    for occ in keyword_occurrences(text, &lexicon.split_keywords) {
        let left = text[..occ.start].trim();
        let right = text[occ.end..].trim();
        if left.is_empty() || right.is_empty() {
            continue;
        }
        if lexicon.matches_any_panel(left, validity) && lexicon.matches_any_panel(right, validity) {
            return Some((left.to_string(), right.to_string(), occ.keyword));
        }
    }
    None
}

struct Occurrence {
    start: usize,
    end: usize,
    keyword: String,
}

/// All keyword occurrences ordered by position. Word keywords must be
/// delimited by non-alphanumerics on both sides; `;` matches the bare
/// character. Comparison is ASCII case-insensitive.
fn keyword_occurrences(text: &str, keywords: &[String]) -> Vec<Occurrence> {
    let bytes = text.as_bytes();
    let mut found = Vec::new();
    // Longest keyword first so "even though" wins over any shorter overlap
    // starting at the same position.
    let mut ordered: Vec<&String> = keywords.iter().collect();
    ordered.sort_by_key(|k| std::cmp::Reverse(k.len()));

    for i in 0..bytes.len() {
        for kw in &ordered {
            let kw_bytes = kw.as_bytes();
            let end = i + kw_bytes.len();
            if end > bytes.len() {
                continue;
            }
            if !bytes[i..end].eq_ignore_ascii_case(kw_bytes) {
                continue;
            }
            let is_word = kw.chars().any(|c| c.is_ascii_alphanumeric());
            if is_word {
                let before_ok = i == 0 || !bytes[i - 1].is_ascii_alphanumeric();
                let after_ok = end == bytes.len() || !bytes[end].is_ascii_alphanumeric();
                if !before_ok || !after_ok {
                    continue;
                }
            }
            found.push(Occurrence {
                start: i,
                end,
                keyword: kw.to_string(),
            });
            break; // at most one keyword per start position
        }
    }
    found
}

/// Corpus-level split statistics.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SplitReport {
    pub before_count: usize,
    pub after_count: usize,
    /// Sentences on which at least one split was applied.
    pub sentences_split: usize,
    /// Sentences that yielded more than two segments.
    pub multi_splits: usize,
}

/// Split every sentence of a corpus.
///
/// Segments take the original sentence index plus a sub-index, and carry no
/// gold label: they are new text units that require re-annotation. Unsplit
/// sentences pass through unchanged, so running the splitter twice is the
/// identity on its own output.
pub fn split_corpus(
    corpus: &Corpus,
    lexicon: &Lexicon,
    validity: &[PanelId],
) -> Result<(Corpus, SplitReport)> {
    let mut before_count = 0;
    let mut after_count = 0;
    let mut sentences_split = 0;
    let mut multi_splits = 0;

    let mut documents = Vec::with_capacity(corpus.len());
    for doc in corpus.documents() {
        let mut new_doc = doc.clone();
        new_doc.sentences = Vec::new();
        for s in &doc.sentences {
            before_count += 1;
            let result = split_sentence(&s.text, lexicon, validity);
            if !result.split_applied {
                after_count += 1;
                new_doc.sentences.push(s.clone());
                continue;
            }
            if s.sub_index.is_some() {
                return Err(Error::Invalid(format!(
                    "sentence {} is already a split segment and cannot be split again \
                     (was the lexicon changed between runs?)",
                    s.key()
                )));
            }
            sentences_split += 1;
            if result.segments.len() > 2 {
                multi_splits += 1;
            }
            for (sub, segment) in result.segments.iter().enumerate() {
                after_count += 1;
                new_doc.sentences.push(Sentence {
                    doc_id: s.doc_id.clone(),
                    index: s.index,
                    sub_index: Some(sub as u32),
                    text: segment.clone(),
                    gold_label: None,
                    predicted_label: None,
                });
            }
        }
        documents.push(new_doc);
    }

    let report = SplitReport {
        before_count,
        after_count,
        sentences_split,
        multi_splits,
    };
    Ok((
        Corpus::new(documents).expect("ids unchanged by splitting"),
        report,
    ))
}
