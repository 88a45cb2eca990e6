//! Data model and ingestion for FOMC documents and sentence-level datasets.
//!
//! A [`Corpus`] is an ordered collection of [`Document`]s, each holding its
//! [`Sentence`]s in source order. Corpora are immutable after ingestion:
//! every pipeline stage that changes sentences returns a new corpus.
//!
//! Two on-disk forms are supported:
//!
//! - the sentence CSV schema (`doc_id, release_date, sentence_index, text`
//!   plus optional `meeting_date, title, label, sub_index, kind` columns),
//!   used for released annotated datasets and for every intermediate corpus
//!   the pipeline writes, and
//! - raw-text files, one document per file, whose first line is a metadata
//!   record `id|kind|release_date[|meeting_date][|title]` and whose body is
//!   tokenized with [`crate::tokenize::tokenize_sentences`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::tokenize::tokenize_sentences;
use crate::Result;

/// Three-way stance label with fixed integer codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StanceLabel {
    Dovish = 0,
    Hawkish = 1,
    Neutral = 2,
}

impl StanceLabel {
    pub const ALL: [StanceLabel; 3] = [
        StanceLabel::Dovish,
        StanceLabel::Hawkish,
        StanceLabel::Neutral,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Result<Self> {
        match code {
            0 => Ok(StanceLabel::Dovish),
            1 => Ok(StanceLabel::Hawkish),
            2 => Ok(StanceLabel::Neutral),
            other => Err(Error::Parse {
                what: "stance label code",
                value: other.to_string(),
            }),
        }
    }

    /// Index into per-class arrays; identical to the integer code.
    pub fn class_index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StanceLabel::Dovish => "dovish",
            StanceLabel::Hawkish => "hawkish",
            StanceLabel::Neutral => "neutral",
        }
    }
}

impl fmt::Display for StanceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The three kinds of FOMC text unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocumentKind {
    MeetingMinutes,
    PressConference,
    Speech,
}

impl DocumentKind {
    pub const ALL: [DocumentKind; 3] = [
        DocumentKind::MeetingMinutes,
        DocumentKind::PressConference,
        DocumentKind::Speech,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DocumentKind::MeetingMinutes => "meeting_minutes",
            DocumentKind::PressConference => "press_conference",
            DocumentKind::Speech => "speech",
        }
    }
}

impl FromStr for DocumentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "meeting_minutes" | "minutes" | "mm" => Ok(DocumentKind::MeetingMinutes),
            "press_conference" | "pc" => Ok(DocumentKind::PressConference),
            "speech" | "sp" => Ok(DocumentKind::Speech),
            other => Err(Error::Parse {
                what: "document kind",
                value: other.to_string(),
            }),
        }
    }
}

impl fmt::Display for DocumentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One sentence of a document. `(doc_id, index, sub_index)` is unique within
/// a corpus; `sub_index` is set only on segments produced by sentence
/// splitting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub doc_id: String,
    pub index: u32,
    pub sub_index: Option<u32>,
    pub text: String,
    pub gold_label: Option<StanceLabel>,
    pub predicted_label: Option<StanceLabel>,
}

impl Sentence {
    pub fn new(doc_id: impl Into<String>, index: u32, text: impl Into<String>) -> Self {
        Sentence {
            doc_id: doc_id.into(),
            index,
            sub_index: None,
            text: text.into(),
            gold_label: None,
            predicted_label: None,
        }
    }

    /// Stable key `doc_id:index` or `doc_id:index.sub` used in reports and
    /// external label files.
    pub fn key(&self) -> String {
        sentence_key(&self.doc_id, self.index, self.sub_index)
    }
}

pub fn sentence_key(doc_id: &str, index: u32, sub_index: Option<u32>) -> String {
    match sub_index {
        Some(sub) => format!("{doc_id}:{index}.{sub}"),
        None => format!("{doc_id}:{index}"),
    }
}

/// One FOMC text unit with its sentences in source order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub kind: DocumentKind,
    /// Present for meeting minutes; speeches and press conferences have none.
    pub meeting_date: Option<NaiveDate>,
    pub release_date: NaiveDate,
    pub title: Option<String>,
    pub sentences: Vec<Sentence>,
    /// Set when the dictionary filter removed every sentence; the document is
    /// retained so downstream stages can report it instead of silently
    /// skipping it.
    pub filtered_empty: bool,
}

impl Document {
    pub fn new(
        id: impl Into<String>,
        kind: DocumentKind,
        release_date: NaiveDate,
        meeting_date: Option<NaiveDate>,
        title: Option<String>,
        sentences: Vec<Sentence>,
    ) -> Result<Self> {
        let id = id.into();
        if let Some(meeting) = meeting_date {
            if release_date < meeting {
                return Err(Error::Invalid(format!(
                    "document {id}: release date {release_date} precedes meeting date {meeting}"
                )));
            }
        }
        let doc = Document {
            id,
            kind,
            meeting_date,
            release_date,
            title,
            sentences,
            filtered_empty: false,
        };
        doc.check_sentences()?;
        Ok(doc)
    }

    fn check_sentences(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for s in &self.sentences {
            if s.doc_id != self.id {
                return Err(Error::Invalid(format!(
                    "document {}: sentence carries doc_id {}",
                    self.id, s.doc_id
                )));
            }
            if s.text.trim().is_empty() {
                return Err(Error::Invalid(format!(
                    "document {}: sentence {} has empty text",
                    self.id, s.index
                )));
            }
            if !seen.insert((s.index, s.sub_index)) {
                return Err(Error::Invalid(format!(
                    "document {}: duplicate sentence index {}",
                    self.id,
                    sentence_key(&s.doc_id, s.index, s.sub_index)
                )));
            }
        }
        Ok(())
    }

    /// Days between meeting and release; zero for kinds without a meeting
    /// date.
    pub fn delay_days(&self) -> i64 {
        match self.meeting_date {
            Some(meeting) => (self.release_date - meeting).num_days(),
            None => 0,
        }
    }
}

/// An immutable collection of documents with unique ids.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Corpus {
    documents: Vec<Document>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Result<Self> {
        let mut ids = BTreeSet::new();
        for doc in &documents {
            if !ids.insert(doc.id.clone()) {
                return Err(Error::Invalid(format!("duplicate document id {}", doc.id)));
            }
        }
        Ok(Corpus { documents })
    }

    pub fn empty() -> Self {
        Corpus::default()
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn into_documents(self) -> Vec<Document> {
        self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> {
        self.documents.iter().flat_map(|d| d.sentences.iter())
    }

    pub fn sentence_count(&self) -> usize {
        self.documents.iter().map(|d| d.sentences.len()).sum()
    }

    /// Merge corpora with disjoint document ids into one.
    pub fn merge(parts: impl IntoIterator<Item = Corpus>) -> Result<Self> {
        let mut documents = Vec::new();
        for part in parts {
            documents.extend(part.documents);
        }
        Corpus::new(documents)
    }

    /// Corpus-level size statistics. An empty corpus reports zeros.
    pub fn stats(&self) -> CorpusStats {
        let file_count = self.documents.len();
        let sentence_count = self.sentence_count();
        let word_count: usize = self
            .sentences()
            .map(|s| s.text.split_whitespace().count())
            .sum();
        let avg_words_per_sentence = if sentence_count == 0 {
            0.0
        } else {
            word_count as f64 / sentence_count as f64
        };
        CorpusStats {
            file_count,
            sentence_count,
            word_count,
            avg_words_per_sentence,
        }
    }
}

/// Size statistics for a corpus: file, sentence, and whitespace-token word
/// counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorpusStats {
    pub file_count: usize,
    pub sentence_count: usize,
    pub word_count: usize,
    pub avg_words_per_sentence: f64,
}

// ---------------------------------------------------------------------------
// Sentence CSV schema
// ---------------------------------------------------------------------------

struct Columns {
    doc_id: usize,
    release_date: usize,
    sentence_index: usize,
    text: usize,
    meeting_date: Option<usize>,
    title: Option<usize>,
    label: Option<usize>,
    sub_index: Option<usize>,
    kind: Option<usize>,
}

impl Columns {
    fn resolve(path: &Path, headers: &csv::StringRecord) -> Result<Self> {
        let find = |name: &str| {
            headers
                .iter()
                .position(|h| h.trim().eq_ignore_ascii_case(name))
        };
        let required = |name: &'static str| {
            find(name)
                .ok_or_else(|| Error::record(path, 1, format!("missing required column `{name}`")))
        };
        Ok(Columns {
            doc_id: required("doc_id")?,
            release_date: required("release_date")?,
            sentence_index: required("sentence_index")?,
            text: required("text")?,
            meeting_date: find("meeting_date"),
            title: find("title"),
            label: find("label"),
            sub_index: find("sub_index"),
            kind: find("kind"),
        })
    }
}

#[derive(Default)]
struct DocBuilder {
    kind: Option<DocumentKind>,
    release_date: Option<NaiveDate>,
    meeting_date: Option<NaiveDate>,
    title: Option<String>,
    sentences: Vec<Sentence>,
}

fn parse_date(path: &Path, row: u64, field: &str, what: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(field.trim(), "%Y-%m-%d")
        .map_err(|_| Error::record(path, row, format!("malformed {what} `{field}`")))
}

/// Ingest a sentence CSV into a corpus of documents of the given kind.
///
/// Rows are grouped by `doc_id` and sorted by `(sentence_index, sub_index)`.
/// A `kind` column, when present, overrides the passed kind per document.
/// Malformed dates, out-of-range label codes, duplicate sentence keys, and
/// per-document metadata conflicts reject the whole file, naming the row.
pub fn ingest_sentence_csv(path: impl AsRef<Path>, kind: DocumentKind) -> Result<Corpus> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::csv(path, e))?;
    let headers = reader.headers().map_err(|e| Error::csv(path, e))?.clone();
    let cols = Columns::resolve(path, &headers)?;

    let mut docs: BTreeMap<String, DocBuilder> = BTreeMap::new();
    let mut seen_keys: BTreeSet<(String, u32, Option<u32>)> = BTreeSet::new();

    for record in reader.records() {
        let record = record.map_err(|e| Error::csv(path, e))?;
        let row = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |idx: usize| record.get(idx).unwrap_or("").trim();

        let doc_id = field(cols.doc_id).to_string();
        if doc_id.is_empty() {
            return Err(Error::record(path, row, "empty doc_id"));
        }
        let release_date = parse_date(path, row, field(cols.release_date), "release_date")?;
        let index: u32 = field(cols.sentence_index).parse().map_err(|_| {
            Error::record(
                path,
                row,
                format!("malformed sentence_index `{}`", field(cols.sentence_index)),
            )
        })?;
        let sub_index =
            match cols.sub_index.map(field) {
                Some("") | None => None,
                Some(raw) => Some(raw.parse::<u32>().map_err(|_| {
                    Error::record(path, row, format!("malformed sub_index `{raw}`"))
                })?),
            };
        let text = field(cols.text).to_string();
        if text.is_empty() {
            return Err(Error::record(path, row, "empty sentence text"));
        }
        let gold_label =
            match cols.label.map(field) {
                Some("") | None => None,
                Some(raw) => {
                    let code: u8 = raw.parse().map_err(|_| {
                        Error::record(path, row, format!("unknown label code `{raw}`"))
                    })?;
                    Some(StanceLabel::from_code(code).map_err(|_| {
                        Error::record(path, row, format!("unknown label code `{raw}`"))
                    })?)
                }
            };
        let meeting_date = match cols.meeting_date.map(field) {
            Some("") | None => None,
            Some(raw) => Some(parse_date(path, row, raw, "meeting_date")?),
        };
        let title = match cols.title.map(field) {
            Some("") | None => None,
            Some(raw) => Some(raw.to_string()),
        };
        let row_kind = match cols.kind.map(field) {
            Some("") | None => None,
            Some(raw) => Some(
                raw.parse::<DocumentKind>()
                    .map_err(|_| Error::record(path, row, format!("unknown kind `{raw}`")))?,
            ),
        };

        if !seen_keys.insert((doc_id.clone(), index, sub_index)) {
            return Err(Error::record(
                path,
                row,
                format!(
                    "duplicate sentence key {}",
                    sentence_key(&doc_id, index, sub_index)
                ),
            ));
        }

        let builder = docs.entry(doc_id.clone()).or_default();
        check_consistent(
            path,
            row,
            &doc_id,
            "release_date",
            &mut builder.release_date,
            release_date,
        )?;
        if let Some(md) = meeting_date {
            check_consistent(
                path,
                row,
                &doc_id,
                "meeting_date",
                &mut builder.meeting_date,
                md,
            )?;
        }
        if let Some(t) = title {
            check_consistent(path, row, &doc_id, "title", &mut builder.title, t)?;
        }
        if let Some(k) = row_kind {
            check_consistent(path, row, &doc_id, "kind", &mut builder.kind, k)?;
        }
        builder.sentences.push(Sentence {
            doc_id,
            index,
            sub_index,
            text,
            gold_label,
            predicted_label: None,
        });
    }

    let mut documents = Vec::with_capacity(docs.len());
    for (id, mut builder) in docs {
        builder
            .sentences
            .sort_by_key(|s| (s.index, s.sub_index.unwrap_or(0)));
        documents.push(Document::new(
            id,
            builder.kind.unwrap_or(kind),
            builder.release_date.expect("release_date set on first row"),
            builder.meeting_date,
            builder.title,
            builder.sentences,
        )?);
    }
    Corpus::new(documents)
}

fn check_consistent<T: PartialEq + fmt::Debug>(
    path: &Path,
    row: u64,
    doc_id: &str,
    what: &str,
    slot: &mut Option<T>,
    value: T,
) -> Result<()> {
    match slot {
        None => {
            *slot = Some(value);
            Ok(())
        }
        Some(existing) if *existing == value => Ok(()),
        Some(existing) => Err(Error::record(
            path,
            row,
            format!("document {doc_id}: conflicting {what} ({existing:?} vs {value:?})"),
        )),
    }
}

/// Write a corpus in the sentence CSV schema. Ingesting the output with
/// [`ingest_sentence_csv`] reproduces the corpus exactly.
pub fn export_sentence_csv(corpus: &Corpus, path: impl AsRef<Path>) -> Result<()> {
    export_sentence_csv_with_header(corpus, path, None)
}

/// Like [`export_sentence_csv`], with an optional leading `#` comment line
/// (used for provenance headers; readers in this crate skip such lines).
pub fn export_sentence_csv_with_header(
    corpus: &Corpus,
    path: impl AsRef<Path>,
    header: Option<&str>,
) -> Result<()> {
    use std::io::Write;
    let path = path.as_ref();
    let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    if let Some(line) = header {
        writeln!(file, "{line}").map_err(|e| Error::io(path, e))?;
    }
    write_sentence_csv(corpus, file).map_err(|e| Error::csv(path, e))
}

pub fn write_sentence_csv<W: std::io::Write>(
    corpus: &Corpus,
    writer: W,
) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "doc_id",
        "kind",
        "release_date",
        "meeting_date",
        "title",
        "sentence_index",
        "sub_index",
        "text",
        "label",
    ])?;
    for doc in corpus.documents() {
        for s in &doc.sentences {
            w.write_record([
                doc.id.as_str(),
                doc.kind.as_str(),
                &doc.release_date.to_string(),
                &doc.meeting_date.map(|d| d.to_string()).unwrap_or_default(),
                doc.title.as_deref().unwrap_or(""),
                &s.index.to_string(),
                &s.sub_index.map(|x| x.to_string()).unwrap_or_default(),
                &s.text,
                &s.gold_label
                    .map(|l| l.code().to_string())
                    .unwrap_or_default(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Raw-text ingestion
// ---------------------------------------------------------------------------

/// Ingest one raw-text document. The first line is
/// `id|kind|release_date[|meeting_date][|title]`; the remaining lines are the
/// document body, tokenized into sentences.
pub fn ingest_raw_text(path: impl AsRef<Path>) -> Result<Document> {
    let path = path.as_ref();
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let (meta_line, body) = match content.split_once('\n') {
        Some((m, b)) => (m.trim_end_matches('\r'), b),
        None => (content.trim_end(), ""),
    };

    let fields: Vec<&str> = meta_line.split('|').collect();
    if fields.len() < 3 || fields.len() > 5 {
        return Err(Error::record(
            path,
            1,
            format!(
                "metadata line must be id|kind|release_date[|meeting_date][|title], got {} field(s)",
                fields.len()
            ),
        ));
    }
    let id = fields[0].trim();
    if id.is_empty() {
        return Err(Error::record(path, 1, "empty document id"));
    }
    let kind: DocumentKind = fields[1]
        .parse()
        .map_err(|_| Error::record(path, 1, format!("unknown kind `{}`", fields[1])))?;
    let release_date = parse_date(path, 1, fields[2], "release_date")?;

    // Field 4 is a meeting date when it parses as one, otherwise a title;
    // field 5 (if present) is always the title.
    let (meeting_date, title) = match fields.len() {
        3 => (None, None),
        4 => match NaiveDate::parse_from_str(fields[3].trim(), "%Y-%m-%d") {
            Ok(d) => (Some(d), None),
            Err(_) => (None, non_empty(fields[3])),
        },
        _ => {
            let meeting = match fields[3].trim() {
                "" => None,
                raw => Some(parse_date(path, 1, raw, "meeting_date")?),
            };
            (meeting, non_empty(fields[4]))
        }
    };

    let sentences = tokenize_sentences(body)
        .into_iter()
        .enumerate()
        .map(|(i, text)| Sentence::new(id, i as u32, text))
        .collect();
    Document::new(id, kind, release_date, meeting_date, title, sentences)
}

fn non_empty(raw: &str) -> Option<String> {
    let trimmed = raw.trim();
    (!trimmed.is_empty()).then(|| trimmed.to_string())
}

/// Ingest every `*.txt` file of a directory (sorted by file name) as raw-text
/// documents.
pub fn ingest_raw_dir(dir: impl AsRef<Path>) -> Result<Corpus> {
    let dir = dir.as_ref();
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "txt"))
        .collect();
    paths.sort();
    let mut documents = Vec::with_capacity(paths.len());
    for p in paths {
        documents.push(ingest_raw_text(&p)?);
    }
    Corpus::new(documents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn date(s: &str) -> NaiveDate {
        NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
    }

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn label_codes_round_trip() {
        for label in StanceLabel::ALL {
            assert_eq!(StanceLabel::from_code(label.code()).unwrap(), label);
        }
        assert!(StanceLabel::from_code(3).is_err());
    }

    #[test]
    fn single_row_hawkish() {
        let f = write_temp(
            "doc_id,release_date,sentence_index,text,label\n\
             mm-2020-01,2020-01-29,0,Inflation rose.,1\n",
        );
        let corpus = ingest_sentence_csv(f.path(), DocumentKind::MeetingMinutes).unwrap();
        assert_eq!(corpus.len(), 1);
        let doc = &corpus.documents()[0];
        assert_eq!(doc.sentences.len(), 1);
        assert_eq!(doc.sentences[0].gold_label, Some(StanceLabel::Hawkish));
    }

    #[test]
    fn out_of_range_label_names_row() {
        let f = write_temp(
            "doc_id,release_date,sentence_index,text,label\n\
             d1,2020-01-29,0,Fine sentence.,1\n\
             d1,2020-01-29,1,Bad label here.,3\n",
        );
        let err = ingest_sentence_csv(f.path(), DocumentKind::Speech).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 3"), "unexpected: {msg}");
        assert!(msg.contains("label code"), "unexpected: {msg}");
    }

    #[test]
    fn malformed_date_names_row() {
        let f = write_temp(
            "doc_id,release_date,sentence_index,text\n\
             d1,2020-13-45,0,Whatever.\n",
        );
        let err = ingest_sentence_csv(f.path(), DocumentKind::Speech).unwrap_err();
        assert!(err.to_string().contains("row 2"));
    }

    #[test]
    fn duplicate_sentence_key_rejected() {
        let f = write_temp(
            "doc_id,release_date,sentence_index,text\n\
             d1,2020-01-01,0,First.\n\
             d1,2020-01-01,0,Second.\n",
        );
        let err = ingest_sentence_csv(f.path(), DocumentKind::Speech).unwrap_err();
        assert!(err.to_string().contains("duplicate sentence key d1:0"));
    }

    #[test]
    fn conflicting_metadata_rejected() {
        let f = write_temp(
            "doc_id,release_date,sentence_index,text\n\
             d1,2020-01-01,0,First.\n\
             d1,2020-02-01,1,Second.\n",
        );
        let err = ingest_sentence_csv(f.path(), DocumentKind::Speech).unwrap_err();
        assert!(err.to_string().contains("conflicting release_date"));
    }

    #[test]
    fn release_before_meeting_rejected() {
        let f = write_temp(
            "doc_id,release_date,meeting_date,sentence_index,text\n\
             d1,2020-01-01,2020-02-01,0,Backwards.\n",
        );
        assert!(ingest_sentence_csv(f.path(), DocumentKind::MeetingMinutes).is_err());
    }

    #[test]
    fn rows_sorted_by_index_within_document() {
        let f = write_temp(
            "doc_id,release_date,sentence_index,text\n\
             d1,2020-01-01,2,Third.\n\
             d1,2020-01-01,0,First.\n\
             d1,2020-01-01,1,Second.\n",
        );
        let corpus = ingest_sentence_csv(f.path(), DocumentKind::Speech).unwrap();
        let texts: Vec<_> = corpus.sentences().map(|s| s.text.as_str()).collect();
        assert_eq!(texts, vec!["First.", "Second.", "Third."]);
    }

    #[test]
    fn export_ingest_round_trip() {
        let f = write_temp(
            "doc_id,kind,release_date,meeting_date,title,sentence_index,sub_index,text,label\n\
             mm1,meeting_minutes,2020-01-29,2020-01-08,,0,,Inflation rose.,1\n\
             mm1,meeting_minutes,2020-01-29,2020-01-08,,1,,Growth slowed.,0\n\
             sp1,speech,2020-02-10,,Inflation Outlook,0,,Prices were stable.,2\n",
        );
        let corpus = ingest_sentence_csv(f.path(), DocumentKind::Speech).unwrap();
        let out = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
        export_sentence_csv(&corpus, out.path()).unwrap();
        let back = ingest_sentence_csv(out.path(), DocumentKind::Speech).unwrap();
        assert_eq!(corpus, back);
    }

    #[test]
    fn stats_small_example() {
        let doc = Document::new(
            "d1",
            DocumentKind::Speech,
            date("2020-01-01"),
            None,
            None,
            vec![
                Sentence::new("d1", 0, "a b c"),
                Sentence::new("d1", 1, "d e"),
            ],
        )
        .unwrap();
        let corpus = Corpus::new(vec![doc]).unwrap();
        let stats = corpus.stats();
        assert_eq!(stats.file_count, 1);
        assert_eq!(stats.sentence_count, 2);
        assert_eq!(stats.word_count, 5);
        assert!((stats.avg_words_per_sentence - 2.5).abs() < 1e-12);
    }

    #[test]
    fn stats_empty_corpus_is_zeros() {
        let stats = Corpus::empty().stats();
        assert_eq!(stats.file_count, 0);
        assert_eq!(stats.sentence_count, 0);
        assert_eq!(stats.word_count, 0);
        assert_eq!(stats.avg_words_per_sentence, 0.0);
    }

    #[test]
    fn stats_additive_under_merge() {
        let mk = |id: &str, texts: &[&str]| {
            Document::new(
                id,
                DocumentKind::Speech,
                date("2020-01-01"),
                None,
                None,
                texts
                    .iter()
                    .enumerate()
                    .map(|(i, t)| Sentence::new(id, i as u32, *t))
                    .collect(),
            )
            .unwrap()
        };
        let a = Corpus::new(vec![mk("a", &["one two", "three"])]).unwrap();
        let b = Corpus::new(vec![mk("b", &["four five six"]), mk("c", &["seven"])]).unwrap();
        let sa = a.stats();
        let sb = b.stats();
        let merged = Corpus::merge([a, b]).unwrap();
        let sm = merged.stats();
        assert_eq!(sm.file_count, sa.file_count + sb.file_count);
        assert_eq!(sm.sentence_count, sa.sentence_count + sb.sentence_count);
        assert_eq!(sm.word_count, sa.word_count + sb.word_count);
    }

    #[test]
    fn merge_rejects_duplicate_ids() {
        let mk = || {
            Corpus::new(vec![Document::new(
                "dup",
                DocumentKind::Speech,
                date("2020-01-01"),
                None,
                None,
                vec![Sentence::new("dup", 0, "text")],
            )
            .unwrap()])
            .unwrap()
        };
        assert!(Corpus::merge([mk(), mk()]).is_err());
    }

    #[test]
    fn raw_text_document_with_title() {
        let mut f = tempfile::Builder::new().suffix(".txt").tempfile().unwrap();
        writeln!(f, "sp-1996-03|speech|1996-03-08|Inflation Outlook").unwrap();
        writeln!(f, "Inflation rose. Growth slowed.").unwrap();
        let doc = ingest_raw_text(f.path()).unwrap();
        assert_eq!(doc.kind, DocumentKind::Speech);
        assert_eq!(doc.title.as_deref(), Some("Inflation Outlook"));
        assert_eq!(doc.sentences.len(), 2);
        assert_eq!(doc.sentences[1].text, "Growth slowed.");
    }

    #[test]
    fn raw_text_document_with_meeting_date() {
        let mut f = tempfile::Builder::new().suffix(".txt").tempfile().unwrap();
        writeln!(f, "mm-2020-01|meeting_minutes|2020-01-29|2020-01-08").unwrap();
        writeln!(f, "Members met. Rates held.").unwrap();
        let doc = ingest_raw_text(f.path()).unwrap();
        assert_eq!(doc.meeting_date, Some(date("2020-01-08")));
        assert_eq!(doc.delay_days(), 21);
    }
}
