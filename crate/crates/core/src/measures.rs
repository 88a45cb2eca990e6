//! Document-level hawkishness measure.
//!
//! For a classified document the measure is
//! `(hawkish - dovish) / total` over its filtered sentences, a value in
//! [-1, 1]: +1 when every sentence is hawkish, -1 when every sentence is
//! dovish, 0 when the polar counts balance. Neutral sentences stay in the
//! denominator. A date-ordered series of these points per document kind is
//! what the econometric and backtest stages consume.

use std::path::Path;

use chrono::NaiveDate;
use serde::Serialize;

use crate::corpus::{Corpus, Document, DocumentKind, StanceLabel};
use crate::error::Error;
use crate::Result;

/// One point of the hawkishness series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurePoint {
    pub doc_id: String,
    pub kind: DocumentKind,
    pub release_date: NaiveDate,
    pub meeting_date: Option<NaiveDate>,
    pub n_hawkish: usize,
    pub n_dovish: usize,
    pub n_total: usize,
    /// `None` when the document has no filtered sentences (undefined ratio);
    /// such points are excluded from series.
    pub value: Option<f64>,
}

impl MeasurePoint {
    pub fn delay_days(&self) -> i64 {
        match self.meeting_date {
            Some(meeting) => (self.release_date - meeting).num_days(),
            None => 0,
        }
    }
}

/// Compute the measure for one classified document.
///
/// Every sentence must carry a predicted label. A document with zero
/// sentences yields an undefined-value point rather than an error.
pub fn document_measure(doc: &Document) -> Result<MeasurePoint> {
    let mut n_hawkish = 0;
    let mut n_dovish = 0;
    let n_total = doc.sentences.len();
    for s in &doc.sentences {
        match s.predicted_label {
            Some(StanceLabel::Hawkish) => n_hawkish += 1,
            Some(StanceLabel::Dovish) => n_dovish += 1,
            Some(StanceLabel::Neutral) => {}
            None => {
                return Err(Error::Invalid(format!(
                    "sentence {} has no predicted label; classify the corpus first",
                    s.key()
                )))
            }
        }
    }
    let value = (n_total > 0).then(|| (n_hawkish as f64 - n_dovish as f64) / n_total as f64);
    Ok(MeasurePoint {
        doc_id: doc.id.clone(),
        kind: doc.kind,
        release_date: doc.release_date,
        meeting_date: doc.meeting_date,
        n_hawkish,
        n_dovish,
        n_total,
        value,
    })
}

/// Build the date-ordered measure series for one document kind (or all kinds
/// when `kind` is `None`).
///
/// Same-day documents of the same kind pool into one point, equivalent to a
/// sentence-count-weighted average of their values. Documents with no
/// filtered sentences are excluded, with a warning per document.
pub fn measure_series(
    corpus: &Corpus,
    kind: Option<DocumentKind>,
) -> Result<(Vec<MeasurePoint>, Vec<String>)> {
    let mut warnings = Vec::new();
    let mut points: Vec<MeasurePoint> = Vec::new();
    for doc in corpus.documents() {
        if kind.is_some_and(|k| k != doc.kind) {
            continue;
        }
        let point = document_measure(doc)?;
        if point.value.is_none() {
            warnings.push(format!(
                "document {} has no filtered sentences; excluded from the series",
                doc.id
            ));
            continue;
        }
        points.push(point);
    }
    points.sort_by(|a, b| {
        (a.release_date, a.kind, a.doc_id.clone()).cmp(&(b.release_date, b.kind, b.doc_id.clone()))
    });

    // Pool same-day documents of the same kind.
    let mut merged: Vec<MeasurePoint> = Vec::with_capacity(points.len());
    for point in points {
        match merged.last_mut() {
            Some(last) if last.release_date == point.release_date && last.kind == point.kind => {
                last.doc_id = format!("{}+{}", last.doc_id, point.doc_id);
                last.n_hawkish += point.n_hawkish;
                last.n_dovish += point.n_dovish;
                last.n_total += point.n_total;
                // Pooled meeting date is only meaningful when all parts agree.
                if last.meeting_date != point.meeting_date {
                    last.meeting_date = None;
                }
                last.value =
                    Some((last.n_hawkish as f64 - last.n_dovish as f64) / last.n_total as f64);
            }
            _ => merged.push(point),
        }
    }
    Ok((merged, warnings))
}

// ---------------------------------------------------------------------------
// Series CSV
// ---------------------------------------------------------------------------

/// Write a measure series as CSV. The optional `header` line (provenance) is
/// emitted first as a `#` comment.
pub fn write_measure_csv<W: std::io::Write>(
    points: &[MeasurePoint],
    mut writer: W,
    header: Option<&str>,
) -> std::io::Result<()> {
    if let Some(line) = header {
        writeln!(writer, "{line}")?;
    }
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "date",
        "kind",
        "value",
        "n_hawkish",
        "n_dovish",
        "n_total",
        "meeting_date",
        "doc_id",
    ])?;
    for p in points {
        w.write_record([
            &p.release_date.to_string(),
            p.kind.as_str(),
            &format!("{:.10}", p.value.unwrap_or(f64::NAN)),
            &p.n_hawkish.to_string(),
            &p.n_dovish.to_string(),
            &p.n_total.to_string(),
            &p.meeting_date.map(|d| d.to_string()).unwrap_or_default(),
            &p.doc_id,
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn export_measure_csv(
    points: &[MeasurePoint],
    path: impl AsRef<Path>,
    header: Option<&str>,
) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_measure_csv(points, file, header).map_err(|e| Error::io(path, e))
}

/// Load a measure series written by [`write_measure_csv`]; `#` lines are
/// skipped.
pub fn load_measure_csv(path: impl AsRef<Path>) -> Result<Vec<MeasurePoint>> {
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
            .ok_or_else(|| Error::record(path, 1, format!("missing required column `{name}`")))
    };
    let col_date = find("date")?;
    let col_kind = find("kind")?;
    let col_value = find("value")?;
    let col_h = find("n_hawkish")?;
    let col_d = find("n_dovish")?;
    let col_t = find("n_total")?;
    let col_meeting = headers
        .iter()
        .position(|h| h.trim().eq_ignore_ascii_case("meeting_date"));
    let col_doc = headers
        .iter()
        .position(|h| h.trim().eq_ignore_ascii_case("doc_id"));

    let mut points = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::csv(path, e))?;
        let row = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |idx: usize| record.get(idx).unwrap_or("").trim();
        let parse_count = |idx: usize, what: &str| {
            field(idx)
                .parse::<usize>()
                .map_err(|_| Error::record(path, row, format!("malformed {what} `{}`", field(idx))))
        };
        let release_date =
            NaiveDate::parse_from_str(field(col_date), "%Y-%m-%d").map_err(|_| {
                Error::record(path, row, format!("malformed date `{}`", field(col_date)))
            })?;
        let kind: DocumentKind = field(col_kind)
            .parse()
            .map_err(|_| Error::record(path, row, format!("unknown kind `{}`", field(col_kind))))?;
        let value: f64 = field(col_value).parse().map_err(|_| {
            Error::record(path, row, format!("malformed value `{}`", field(col_value)))
        })?;
        let meeting_date = match col_meeting.map(field) {
            Some("") | None => None,
            Some(raw) => Some(NaiveDate::parse_from_str(raw, "%Y-%m-%d").map_err(|_| {
                Error::record(path, row, format!("malformed meeting_date `{raw}`"))
            })?),
        };
        points.push(MeasurePoint {
            doc_id: col_doc.map(field).unwrap_or("").to_string(),
            kind,
            release_date,
            meeting_date,
            n_hawkish: parse_count(col_h, "n_hawkish")?,
            n_dovish: parse_count(col_d, "n_dovish")?,
            n_total: parse_count(col_t, "n_total")?,
            value: if value.is_nan() { None } else { Some(value) },
        });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Sentence;

    fn date(s: &str) -> NaiveDate {
        NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
    }

    fn doc_with_labels(id: &str, day: &str, labels: &[StanceLabel]) -> Document {
        let sentences = labels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let mut s = Sentence::new(id, i as u32, format!("sentence {i}"));
                s.predicted_label = Some(*l);
                s
            })
            .collect();
        Document::new(
            id,
            DocumentKind::MeetingMinutes,
            date(day),
            None,
            None,
            sentences,
        )
        .unwrap()
    }

    #[test]
    fn direct_formula() {
        use StanceLabel::*;
        let doc = doc_with_labels(
            "d1",
            "2020-01-29",
            &[Hawkish, Hawkish, Hawkish, Dovish, Neutral, Neutral],
        );
        let p = document_measure(&doc).unwrap();
        assert_eq!((p.n_hawkish, p.n_dovish, p.n_total), (3, 1, 6));
        assert!((p.value.unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn all_hawkish_is_one() {
        use StanceLabel::*;
        let doc = doc_with_labels("d1", "2020-01-29", &[Hawkish, Hawkish]);
        assert_eq!(document_measure(&doc).unwrap().value, Some(1.0));
    }

    #[test]
    fn balanced_counts_are_zero() {
        use StanceLabel::*;
        let doc = doc_with_labels("d1", "2020-01-29", &[Hawkish, Dovish, Neutral]);
        assert_eq!(document_measure(&doc).unwrap().value, Some(0.0));
    }

    #[test]
    fn empty_document_is_undefined_and_excluded() {
        let doc = doc_with_labels("d1", "2020-01-29", &[]);
        let p = document_measure(&doc).unwrap();
        assert_eq!(p.value, None);
        let corpus = Corpus::new(vec![doc]).unwrap();
        let (series, warnings) = measure_series(&corpus, None).unwrap();
        assert!(series.is_empty());
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn unlabeled_sentence_is_an_error() {
        let mut doc = doc_with_labels("d1", "2020-01-29", &[StanceLabel::Hawkish]);
        doc.sentences[0].predicted_label = None;
        assert!(document_measure(&doc).is_err());
    }

    // Count-weighted pooling: values 0.2 over 10 sentences and 0.6 over 30
    // pool to (0.2*10 + 0.6*30) / 40 = 0.5.
    #[test]
    fn same_day_documents_pool() {
        use StanceLabel::*;
        let mut labels_a = vec![Hawkish; 2];
        labels_a.extend(vec![Neutral; 8]); // value 0.2 over 10
        let mut labels_b = vec![Hawkish; 18];
        labels_b.extend(vec![Neutral; 12]); // value 0.6 over 30
        let corpus = Corpus::new(vec![
            doc_with_labels("a", "2020-01-29", &labels_a),
            doc_with_labels("b", "2020-01-29", &labels_b),
        ])
        .unwrap();
        let (series, _) = measure_series(&corpus, None).unwrap();
        assert_eq!(series.len(), 1);
        assert!((series[0].value.unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(series[0].n_total, 40);
        assert_eq!(series[0].doc_id, "a+b");
    }

    #[test]
    fn single_document_series() {
        use StanceLabel::*;
        let doc = doc_with_labels("d1", "2020-01-29", &[Hawkish, Neutral]);
        let expect = document_measure(&doc).unwrap().value;
        let corpus = Corpus::new(vec![doc]).unwrap();
        let (series, _) = measure_series(&corpus, None).unwrap();
        assert_eq!(series.len(), 1);
        assert_eq!(series[0].value, expect);
    }

    #[test]
    fn empty_corpus_series() {
        let (series, warnings) = measure_series(&Corpus::empty(), None).unwrap();
        assert!(series.is_empty());
        assert!(warnings.is_empty());
    }

    #[test]
    fn series_is_date_ordered_and_kind_filtered() {
        use StanceLabel::*;
        let mut docs = vec![
            doc_with_labels("late", "2021-06-16", &[Hawkish]),
            doc_with_labels("early", "2020-01-29", &[Dovish]),
        ];
        let mut speech = doc_with_labels("sp", "2020-06-01", &[Hawkish]);
        speech.kind = DocumentKind::Speech;
        docs.push(speech);
        let corpus = Corpus::new(docs).unwrap();
        let (series, _) = measure_series(&corpus, Some(DocumentKind::MeetingMinutes)).unwrap();
        assert_eq!(series.len(), 2);
        assert!(series[0].release_date < series[1].release_date);
        assert!(series
            .iter()
            .all(|p| p.kind == DocumentKind::MeetingMinutes));
    }

    #[test]
    fn antisymmetry_under_label_swap() {
        use StanceLabel::*;
        let labels = [Hawkish, Hawkish, Dovish, Neutral, Hawkish, Neutral];
        let swapped: Vec<StanceLabel> = labels
            .iter()
            .map(|l| match l {
                Hawkish => Dovish,
                Dovish => Hawkish,
                Neutral => Neutral,
            })
            .collect();
        let v1 = document_measure(&doc_with_labels("a", "2020-01-29", &labels))
            .unwrap()
            .value
            .unwrap();
        let v2 = document_measure(&doc_with_labels("a", "2020-01-29", &swapped))
            .unwrap()
            .value
            .unwrap();
        assert!((v1 + v2).abs() < 1e-12);
    }

    #[test]
    fn extreme_values_require_a_single_polarity_and_no_neutrals() {
        use StanceLabel::*;
        let value = |labels: &[StanceLabel]| {
            document_measure(&doc_with_labels("a", "2020-01-29", labels))
                .unwrap()
                .value
                .unwrap()
        };
        assert_eq!(value(&[Hawkish, Hawkish]).abs(), 1.0);
        assert_eq!(value(&[Dovish, Dovish, Dovish]).abs(), 1.0);
        // Any neutral or opposing sentence pulls the magnitude below 1.
        assert!(value(&[Hawkish, Neutral]).abs() < 1.0);
        assert!(value(&[Hawkish, Dovish]).abs() < 1.0);
    }

    #[test]
    fn scale_invariance_under_duplication() {
        use StanceLabel::*;
        let labels = [Hawkish, Dovish, Neutral, Hawkish];
        let doubled: Vec<StanceLabel> = labels.iter().chain(labels.iter()).copied().collect();
        let v1 = document_measure(&doc_with_labels("a", "2020-01-29", &labels))
            .unwrap()
            .value
            .unwrap();
        let v2 = document_measure(&doc_with_labels("a", "2020-01-29", &doubled))
            .unwrap()
            .value
            .unwrap();
        assert!((v1 - v2).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip() {
        use StanceLabel::*;
        let mut doc = doc_with_labels("d1", "2020-01-29", &[Hawkish, Dovish, Neutral]);
        doc.meeting_date = Some(date("2020-01-08"));
        let corpus = Corpus::new(vec![doc]).unwrap();
        let (series, _) = measure_series(&corpus, None).unwrap();
        let f = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
        export_measure_csv(
            &series,
            f.path(),
            Some("# fomc v0 cmd=test config=x lexicon=y"),
        )
        .unwrap();
        let back = load_measure_csv(f.path()).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].release_date, series[0].release_date);
        assert_eq!(back[0].meeting_date, series[0].meeting_date);
        assert!((back[0].value.unwrap() - series[0].value.unwrap()).abs() < 1e-9);
    }
}
