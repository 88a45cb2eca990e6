//! `fomc`: command-line pipeline for FOMC stance mining.
//!
//! Subcommands wire the library end to end: `filter` and `split` prepare the
//! corpus, `classify`/`eval` produce and score stance labels, `measure`
//! builds the hawkishness series, and `correlate`/`regress`/`backtest`/
//! `report` validate it against inflation prints, treasury yields, and an
//! index-fund strategy.
//!
//! Exit codes: 0 on success, 2 on input/configuration errors, 1 on internal
//! errors.

mod config;
mod market;
mod output;
mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};

use config::Settings;
use fomc_core::corpus::DocumentKind;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "fomc",
    version,
    about = "FOMC stance mining and market validation pipeline"
)]
struct Cli {
    /// JSON configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (also settable via FOMC_OUT_DIR).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Lexicon JSON file; the built-in dictionary is used when omitted.
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,

    /// Evaluation seeds, comma-separated.
    #[arg(long, global = true, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,

    /// Tie rule when both polarities fire: neutral | first-match.
    #[arg(long, global = true)]
    tie: Option<String>,

    /// Econ print alignment: next | same-month.
    #[arg(long, global = true)]
    alignment: Option<String>,

    /// Panels that validate a sentence split, comma-separated (default A1,B1).
    #[arg(long, global = true, value_delimiter = ',')]
    validity_panels: Option<Vec<String>>,

    /// Short-leg re-basing: segment | signal.
    #[arg(long, global = true)]
    short_convention: Option<String>,

    /// Add a wall-clock timestamp to provenance (outputs are otherwise
    /// byte-identical across re-runs).
    #[arg(long, global = true)]
    stamp: bool,

    #[command(subcommand)]
    command: Command,
}

fn parse_kind(raw: &str) -> Result<DocumentKind, String> {
    raw.parse().map_err(|e| format!("{e}"))
}

fn parse_date(raw: &str) -> Result<NaiveDate, String> {
    NaiveDate::parse_from_str(raw, "%Y-%m-%d").map_err(|e| format!("{e} (expected YYYY-MM-DD)"))
}

#[derive(Args)]
struct FilterArgs {
    /// Meeting-minutes corpus: sentence CSV or raw-text directory.
    #[arg(long)]
    minutes: Option<PathBuf>,
    /// Press-conference corpus: sentence CSV or raw-text directory.
    #[arg(long)]
    press_conferences: Option<PathBuf>,
    /// Speech corpus: sentence CSV or raw-text directory.
    #[arg(long)]
    speeches: Option<PathBuf>,
    /// Skip the speech-title pre-filter.
    #[arg(long)]
    no_title_filter: bool,
}

#[derive(Args)]
struct SplitArgs {
    /// Corpus to split (sentence CSV or raw-text directory).
    #[arg(long)]
    input: PathBuf,
    /// Document kind when the file has no kind column.
    #[arg(long, default_value = "meeting_minutes", value_parser = parse_kind)]
    kind: DocumentKind,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "meeting_minutes", value_parser = parse_kind)]
    kind: DocumentKind,
    /// `rule` or a prediction CSV path (default: `labels` from the config,
    /// else `rule`).
    #[arg(long)]
    source: Option<String>,
}

#[derive(Args)]
struct EvalArgs {
    /// One or more labeled corpora (merged before evaluation).
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long, default_value = "meeting_minutes", value_parser = parse_kind)]
    kind: DocumentKind,
    /// `rule` or a prediction CSV path.
    #[arg(long)]
    source: Option<String>,
    /// Dataset name recorded in the summary row.
    #[arg(long, default_value = "dataset")]
    dataset: String,
    /// Evaluate on a temporal split at this boundary instead of seeded
    /// shuffles.
    #[arg(long, value_parser = parse_date)]
    temporal_boundary: Option<NaiveDate>,
}

#[derive(Args)]
struct MeasureArgs {
    /// Filtered (and optionally split) corpus.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, default_value = "meeting_minutes", value_parser = parse_kind)]
    kind: DocumentKind,
    /// `rule` or a prediction CSV path.
    #[arg(long)]
    source: Option<String>,
}

#[derive(Args)]
struct CorrelateArgs {
    /// Measure series CSV from `fomc measure`.
    #[arg(long)]
    measure: Option<PathBuf>,
    /// Raw monthly CPI index CSV {date,value}.
    #[arg(long)]
    cpi: Option<PathBuf>,
    /// Raw monthly PPI index CSV {date,value}.
    #[arg(long)]
    ppi: Option<PathBuf>,
    /// Extra sample windows NAME:START:END (repeatable).
    #[arg(long)]
    period: Vec<String>,
}

#[derive(Args)]
struct RegressArgs {
    #[arg(long)]
    measure: Option<PathBuf>,
    /// Treasury CSV {date, yield_3m, yield_1y, ...}.
    #[arg(long)]
    treasury: Option<PathBuf>,
    /// Maturities to regress (default: all columns).
    #[arg(long, value_delimiter = ',')]
    maturities: Vec<String>,
}

#[derive(Args)]
struct BacktestArgs {
    /// Measure series used as the trading signal (default: the
    /// press-conference series from the config).
    #[arg(long)]
    measure: Option<PathBuf>,
    /// Price CSV {date, adjusted_close}.
    #[arg(long)]
    prices: Option<PathBuf>,
    /// Ignore signals before this date.
    #[arg(long, value_parser = parse_date)]
    start: Option<NaiveDate>,
    /// Evaluation end (default: last price date).
    #[arg(long, value_parser = parse_date)]
    end: Option<NaiveDate>,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the dictionary filter (and speech-title filter) to corpora.
    Filter(FilterArgs),
    /// Split sentences at contrast keywords.
    Split(SplitArgs),
    /// Assign stance labels from the rule classifier or a prediction file.
    Classify(ClassifyArgs),
    /// Score a label source with the seeded (or temporal) protocol.
    Eval(EvalArgs),
    /// Build the per-document hawkishness measure series.
    Measure(MeasureArgs),
    /// Correlate a measure series with CPI/PPI year-over-year changes.
    Correlate(CorrelateArgs),
    /// Regress treasury yields on a measure series.
    Regress(RegressArgs),
    /// Run the sign-of-measure long/short strategy vs. buy-and-hold.
    Backtest(BacktestArgs),
    /// Bundle plot-ready figure CSVs from configured inputs.
    Report,
}

fn apply_overrides(settings: &mut Settings, cli: &Cli) -> Result<()> {
    if let Some(seeds) = &cli.seeds {
        settings.seeds = seeds.clone();
    }
    if let Some(tie) = &cli.tie {
        settings.tie_rule = tie.parse()?;
    }
    if let Some(alignment) = &cli.alignment {
        settings.alignment = alignment.parse()?;
    }
    if let Some(panels) = &cli.validity_panels {
        settings.validity_panels = panels
            .iter()
            .map(|p| p.parse().map_err(anyhow::Error::from))
            .collect::<Result<Vec<_>>>()?;
    }
    if let Some(convention) = &cli.short_convention {
        settings.short_convention = convention.parse()?;
    }
    Ok(())
}

/// Flag value, else config value, else an error naming both places.
fn resolve_path(
    flag: Option<&PathBuf>,
    config_value: Option<&PathBuf>,
    flag_name: &str,
    config_key: &str,
    hint: &str,
) -> Result<PathBuf> {
    flag.or(config_value).cloned().ok_or_else(|| {
        anyhow::anyhow!("no input: pass --{flag_name} or set `{config_key}` in the config ({hint})")
    })
}

/// Label source: flag, else the config's `labels` file, else the rule set.
fn resolve_source(flag: &Option<String>, settings: &Settings) -> String {
    flag.clone()
        .or_else(|| {
            settings
                .file
                .labels
                .as_ref()
                .map(|p| p.display().to_string())
        })
        .unwrap_or_else(|| "rule".to_string())
}

fn parse_config_date(raw: &Option<String>, key: &str) -> Result<Option<NaiveDate>> {
    raw.as_deref()
        .map(|r| {
            NaiveDate::parse_from_str(r, "%Y-%m-%d")
                .map_err(|_| anyhow::anyhow!("malformed `{key}` date `{r}` in config"))
        })
        .transpose()
}

fn run(cli: &Cli) -> Result<()> {
    let mut settings = Settings::resolve(
        cli.config.as_deref(),
        cli.out.as_deref(),
        cli.lexicon.as_deref(),
        cli.stamp,
    )?;
    apply_overrides(&mut settings, cli)?;
    let cfg = settings.file.clone();

    match &cli.command {
        Command::Filter(args) => pipeline::cmd_filter(
            &settings,
            args.minutes
                .as_deref()
                .or(cfg.corpora.meeting_minutes.as_deref()),
            args.press_conferences
                .as_deref()
                .or(cfg.corpora.press_conference.as_deref()),
            args.speeches.as_deref().or(cfg.corpora.speech.as_deref()),
            args.no_title_filter,
        ),
        Command::Split(args) => pipeline::cmd_split(&settings, &args.input, args.kind),
        Command::Classify(args) => {
            let source = resolve_source(&args.source, &settings);
            pipeline::cmd_classify(&settings, &args.input, args.kind, &source)
        }
        Command::Eval(args) => {
            let source = resolve_source(&args.source, &settings);
            pipeline::cmd_eval(
                &settings,
                &args.input,
                args.kind,
                &source,
                &args.dataset,
                args.temporal_boundary,
            )
        }
        Command::Measure(args) => {
            let source = resolve_source(&args.source, &settings);
            pipeline::cmd_measure(&settings, &args.corpus, args.kind, &source)
        }
        Command::Correlate(args) => {
            let periods = args
                .period
                .iter()
                .map(|p| p.parse())
                .collect::<Result<Vec<market::Period>>>()?;
            let measure = resolve_path(
                args.measure.as_ref(),
                cfg.measures.meeting_minutes.as_ref(),
                "measure",
                "measures.meeting_minutes",
                "run `fomc measure` first",
            )?;
            let cpi = resolve_path(
                args.cpi.as_ref(),
                cfg.cpi.as_ref(),
                "cpi",
                "cpi",
                "FRED export",
            )?;
            let ppi = resolve_path(
                args.ppi.as_ref(),
                cfg.ppi.as_ref(),
                "ppi",
                "ppi",
                "FRED export",
            )?;
            market::cmd_correlate(&settings, &measure, &cpi, &ppi, &periods)
        }
        Command::Regress(args) => {
            let measure = resolve_path(
                args.measure.as_ref(),
                cfg.measures.meeting_minutes.as_ref(),
                "measure",
                "measures.meeting_minutes",
                "run `fomc measure` first",
            )?;
            let treasury = resolve_path(
                args.treasury.as_ref(),
                cfg.treasury.as_ref(),
                "treasury",
                "treasury",
                "daily yields export",
            )?;
            market::cmd_regress(&settings, &measure, &treasury, &args.maturities)
        }
        Command::Backtest(args) => {
            let measure = resolve_path(
                args.measure.as_ref(),
                cfg.measures.press_conference.as_ref(),
                "measure",
                "measures.press_conference",
                "run `fomc measure` first",
            )?;
            let prices = resolve_path(
                args.prices.as_ref(),
                cfg.prices.as_ref(),
                "prices",
                "prices",
                "adjusted-close export",
            )?;
            let start = match args.start {
                Some(s) => Some(s),
                None => parse_config_date(&cfg.backtest_start, "backtest_start")?,
            };
            let end = match args.end {
                Some(e) => Some(e),
                None => parse_config_date(&cfg.backtest_end, "backtest_end")?,
            };
            market::cmd_backtest(&settings, &measure, &prices, start, end)
        }
        Command::Report => market::cmd_report(&settings),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&cli)));
    match outcome {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(err)) => {
            eprintln!("error: {err:#}");
            // Everything surfaced as a structured error is an input or
            // configuration problem; bugs panic and exit 1 below.
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(1),
    }
}
