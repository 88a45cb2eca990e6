//! Text-side commands: filter, split, classify, eval, measure.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use chrono::NaiveDate;
use serde::Serialize;

use fomc_core::corpus::{
    export_sentence_csv_with_header, ingest_raw_dir, ingest_sentence_csv, Corpus, CorpusStats,
    DocumentKind,
};
use fomc_core::eval::{seed_suite, temporal_eval, EvalResult};
use fomc_core::lexicon::{filter_corpus, filter_speech_titles, FilterReport, TitleFilterReport};
use fomc_core::measures::{measure_series, write_measure_csv};
use fomc_core::splitter::split_corpus;
use fomc_core::stance::{classify_corpus, write_label_csv, DistributionReport, LabelSource};

use crate::config::Settings;
use crate::output::{num, OutputDir};

/// Load a corpus from a sentence CSV or a directory of raw-text files.
pub fn load_corpus(path: &Path, kind: DocumentKind) -> Result<Corpus> {
    if !path.exists() {
        bail!("input path {} does not exist", path.display());
    }
    let corpus = if path.is_dir() {
        ingest_raw_dir(path)?
    } else {
        ingest_sentence_csv(path, kind)?
    };
    Ok(corpus)
}

#[derive(Serialize)]
struct KindFilterOutcome {
    input_stats: CorpusStats,
    filtered_stats: CorpusStats,
    report: FilterReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    title_report: Option<TitleFilterReport>,
}

#[derive(Serialize)]
struct FilterSummary {
    per_kind: BTreeMap<String, KindFilterOutcome>,
}

pub fn cmd_filter(
    settings: &Settings,
    minutes: Option<&Path>,
    press_conferences: Option<&Path>,
    speeches: Option<&Path>,
    no_title_filter: bool,
) -> Result<()> {
    if minutes.is_none() && press_conferences.is_none() && speeches.is_none() {
        bail!("nothing to filter: pass --minutes, --press-conferences, and/or --speeches");
    }
    let out = OutputDir::create(&settings.output_dir, settings.provenance("filter"))?;
    let mut summary = FilterSummary {
        per_kind: BTreeMap::new(),
    };
    let mut per_file_rows: Vec<Vec<String>> = Vec::new();

    let inputs = [
        (DocumentKind::MeetingMinutes, minutes),
        (DocumentKind::PressConference, press_conferences),
        (DocumentKind::Speech, speeches),
    ];
    for (kind, path) in inputs {
        let Some(path) = path else { continue };
        let mut corpus = load_corpus(path, kind)?;
        let input_stats = corpus.stats();

        let mut title_report = None;
        if kind == DocumentKind::Speech && !no_title_filter {
            let (kept, report) = filter_speech_titles(&corpus, &settings.lexicon)?;
            title_report = Some(report);
            corpus = kept;
        }

        let (filtered, report) = filter_corpus(&corpus, &settings.lexicon);
        let filtered_stats = filtered.stats();
        export_sentence_csv_with_header(
            &filtered,
            out.path(&format!("filtered_{kind}.csv")),
            Some(&out.header_line()),
        )?;
        for (doc_id, kept) in &report.kept_per_file {
            per_file_rows.push(vec![kind.to_string(), doc_id.clone(), kept.to_string()]);
        }
        if let Some(tr) = &title_report {
            out.write_csv(
                &format!("title_filter_{kind}.csv"),
                &[
                    "group",
                    "files",
                    "sentences",
                    "target_sentences",
                    "target_per_file",
                ],
                &[
                    title_row("all", &tr.all),
                    title_row("kept", &tr.kept),
                    title_row("dropped", &tr.dropped),
                ],
            )?;
        }
        summary.per_kind.insert(
            kind.to_string(),
            KindFilterOutcome {
                input_stats,
                filtered_stats,
                report,
                title_report,
            },
        );
    }

    out.write_csv(
        "filter_report.csv",
        &["kind", "doc_id", "kept_sentences"],
        &per_file_rows,
    )?;
    out.write_json("filter_report.json", &summary)?;
    for (kind, outcome) in &summary.per_kind {
        println!(
            "{kind}: {} files, {} -> {} sentences",
            outcome.filtered_stats.file_count,
            outcome.input_stats.sentence_count,
            outcome.report.kept
        );
    }
    Ok(())
}

fn title_row(group: &str, stats: &fomc_core::lexicon::TitleGroupStats) -> Vec<String> {
    vec![
        group.to_string(),
        stats.files.to_string(),
        stats.sentences.to_string(),
        stats.target_sentences.to_string(),
        num(stats.target_per_file),
    ]
}

#[derive(Serialize)]
struct SplitSummary {
    report: fomc_core::splitter::SplitReport,
    per_kind: BTreeMap<String, (usize, usize)>,
}

pub fn cmd_split(settings: &Settings, input: &Path, kind: DocumentKind) -> Result<()> {
    let corpus = load_corpus(input, kind)?;
    let (split, report) = split_corpus(&corpus, &settings.lexicon, &settings.validity_panels)?;

    let mut per_kind: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for (before_doc, after_doc) in corpus.documents().iter().zip(split.documents()) {
        let entry = per_kind.entry(before_doc.kind.to_string()).or_default();
        entry.0 += before_doc.sentences.len();
        entry.1 += after_doc.sentences.len();
    }

    let out = OutputDir::create(&settings.output_dir, settings.provenance("split"))?;
    export_sentence_csv_with_header(
        &split,
        out.path("split_corpus.csv"),
        Some(&out.header_line()),
    )?;
    out.write_json("split_report.json", &SplitSummary { report, per_kind })?;
    println!(
        "split: {} -> {} sentences ({} split, {} multi-splits)",
        report.before_count, report.after_count, report.sentences_split, report.multi_splits
    );
    Ok(())
}

/// Build the label source from `--source rule` or `--source <path>`.
pub fn parse_source(settings: &Settings, source: &str) -> Result<LabelSource> {
    if source.eq_ignore_ascii_case("rule") {
        return Ok(LabelSource::RuleBased {
            lexicon: settings.lexicon.clone(),
            tie: settings.tie_rule,
        });
    }
    let path = PathBuf::from(source);
    if !path.exists() {
        bail!(
            "label source `{source}` is neither `rule` nor an existing file \
             (run `fomc classify` or supply model predictions first)"
        );
    }
    Ok(LabelSource::external(path))
}

pub fn cmd_classify(
    settings: &Settings,
    input: &Path,
    kind: DocumentKind,
    source: &str,
) -> Result<()> {
    let corpus = load_corpus(input, kind)?;
    let source = parse_source(settings, source)?;
    let (classified, distribution) = classify_corpus(&corpus, &source)?;

    let out = OutputDir::create(&settings.output_dir, settings.provenance("classify"))?;
    let file = out.csv_file("predictions.csv")?;
    write_label_csv(&classified, file).context("writing predictions.csv")?;
    out.write_json("label_distribution.json", &distribution)?;
    print_distribution(&distribution);
    Ok(())
}

fn print_distribution(distribution: &DistributionReport) {
    let t = &distribution.total;
    println!(
        "labels: {} dovish, {} hawkish, {} neutral ({} total)",
        t.dovish,
        t.hawkish,
        t.neutral,
        t.total()
    );
}

#[derive(Serialize)]
struct EvalSummary {
    dataset: String,
    source: String,
    mode: String,
    result: EvalResult,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_eval(
    settings: &Settings,
    inputs: &[PathBuf],
    kind: DocumentKind,
    source: &str,
    dataset: &str,
    temporal_boundary: Option<NaiveDate>,
) -> Result<()> {
    if inputs.is_empty() {
        bail!("no input corpora given");
    }
    let mut parts = Vec::new();
    for path in inputs {
        parts.push(load_corpus(path, kind)?);
    }
    let corpus = Corpus::merge(parts)?;
    let label_source = parse_source(settings, source)?;

    let (mode, result) = match temporal_boundary {
        Some(boundary) => (
            format!("temporal<= {boundary}"),
            temporal_eval(&corpus, &label_source, boundary)?,
        ),
        None => (
            "seeded".to_string(),
            seed_suite(&corpus, &label_source, &settings.seeds)?,
        ),
    };

    let out = OutputDir::create(&settings.output_dir, settings.provenance("eval"))?;
    let summary = EvalSummary {
        dataset: dataset.to_string(),
        source: label_source.describe(),
        mode,
        result,
    };
    out.write_json("eval_result.json", &summary)?;
    out.write_csv(
        "eval_summary.csv",
        &["dataset", "source", "mean_weighted_f1", "stddev", "seeds"],
        &[vec![
            summary.dataset.clone(),
            summary.source.clone(),
            num(summary.result.mean_f1),
            num(summary.result.stddev_f1),
            summary
                .result
                .per_seed_f1
                .iter()
                .map(|(s, _)| s.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        ]],
    )?;
    println!(
        "{dataset}: weighted F1 {:.4} ({:.4}) over {} run(s)",
        summary.result.mean_f1,
        summary.result.stddev_f1,
        summary.result.per_seed_f1.len()
    );
    Ok(())
}

#[derive(Serialize)]
struct MeasureSummary {
    per_kind_points: BTreeMap<String, usize>,
    distribution: DistributionReport,
    warnings: Vec<String>,
}

pub fn cmd_measure(
    settings: &Settings,
    corpus_path: &Path,
    kind: DocumentKind,
    source: &str,
) -> Result<()> {
    let corpus = load_corpus(corpus_path, kind)?;
    let label_source = parse_source(settings, source)?;
    let (classified, distribution) = classify_corpus(&corpus, &label_source)?;

    let kinds_present: Vec<DocumentKind> = {
        let mut ks: Vec<DocumentKind> = classified.documents().iter().map(|d| d.kind).collect();
        ks.sort();
        ks.dedup();
        ks
    };

    let out = OutputDir::create(&settings.output_dir, settings.provenance("measure"))?;
    let mut summary = MeasureSummary {
        per_kind_points: BTreeMap::new(),
        distribution,
        warnings: Vec::new(),
    };
    for kind in kinds_present {
        let (series, warnings) = measure_series(&classified, Some(kind))?;
        summary.warnings.extend(warnings);
        summary
            .per_kind_points
            .insert(kind.to_string(), series.len());
        let file = out.csv_file(&format!("measure_{kind}.csv"))?;
        write_measure_csv(&series, file, None)?;
        println!("measure_{kind}.csv: {} points", series.len());
    }
    out.write_json("measure_summary.json", &summary)?;
    Ok(())
}
