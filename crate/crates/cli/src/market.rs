//! Market-side commands: correlate, regress, backtest, report.

use std::path::Path;

use anyhow::{bail, Context, Result};
use chrono::NaiveDate;
use serde::Serialize;

use fomc_core::backtest::{
    buy_and_hold, compare, daily_curve, load_price_csv, run_strategy, BacktestLedger,
};
use fomc_core::econ::{
    delay_stats, load_econ_csv, load_treasury_csv, pearson, simple_ols, yoy_percent_change,
    CorrelationResult, EconSeries, Frequency, RegressionResult,
};
use fomc_core::measures::{load_measure_csv, MeasurePoint};

use crate::config::{Alignment, Settings};
use crate::output::{num, OutputDir};

/// A named date window for sub-sample correlation rows
/// (`NAME:YYYY-MM-DD:YYYY-MM-DD`).
#[derive(Debug, Clone)]
pub struct Period {
    pub name: String,
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl std::str::FromStr for Period {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            bail!("period must be NAME:YYYY-MM-DD:YYYY-MM-DD, got `{s}`");
        }
        let parse = |raw: &str| {
            NaiveDate::parse_from_str(raw, "%Y-%m-%d")
                .with_context(|| format!("malformed period date `{raw}`"))
        };
        Ok(Period {
            name: parts[0].to_string(),
            start: parse(parts[1])?,
            end: parse(parts[2])?,
        })
    }
}

fn load_measure(path: &Path) -> Result<Vec<MeasurePoint>> {
    if !path.exists() {
        bail!(
            "measure series {} does not exist (run `fomc measure` first)",
            path.display()
        );
    }
    Ok(load_measure_csv(path)?)
}

#[derive(Serialize)]
struct CorrelationRow {
    sample: String,
    n: usize,
    cpi: CorrelationResult,
    ppi: CorrelationResult,
    avg_delay_days: f64,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct CorrelationSummary {
    alignment: Alignment,
    rows: Vec<CorrelationRow>,
}

pub fn cmd_correlate(
    settings: &Settings,
    measure_path: &Path,
    cpi_path: &Path,
    ppi_path: &Path,
    periods: &[Period],
) -> Result<()> {
    let points = load_measure(measure_path)?;
    let (cpi_yoy, _) = yoy_percent_change(&load_econ_csv(cpi_path, "cpi", Frequency::Monthly)?)?;
    let (ppi_yoy, _) = yoy_percent_change(&load_econ_csv(ppi_path, "ppi", Frequency::Monthly)?)?;

    let mut rows = Vec::new();
    rows.push(correlation_row(
        settings,
        "full_sample",
        &points,
        &cpi_yoy,
        &ppi_yoy,
    )?);
    for period in periods {
        let subset: Vec<MeasurePoint> = points
            .iter()
            .filter(|p| p.release_date >= period.start && p.release_date <= period.end)
            .cloned()
            .collect();
        rows.push(correlation_row(
            settings,
            &period.name,
            &subset,
            &cpi_yoy,
            &ppi_yoy,
        )?);
    }

    let out = OutputDir::create(&settings.output_dir, settings.provenance("correlate"))?;
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.sample.clone(),
                r.n.to_string(),
                num(r.cpi.r),
                format!("{:.3e}", r.cpi.p_value),
                num(r.ppi.r),
                format!("{:.3e}", r.ppi.p_value),
                num(r.avg_delay_days),
            ]
        })
        .collect();
    out.write_csv(
        "correlations.csv",
        &[
            "sample",
            "n",
            "r_cpi",
            "p_cpi",
            "r_ppi",
            "p_ppi",
            "avg_delay_days",
        ],
        &csv_rows,
    )?;
    out.write_json(
        "correlations.json",
        &CorrelationSummary {
            alignment: settings.alignment,
            rows,
        },
    )?;
    for row in csv_rows {
        println!(
            "{}: r_cpi={} p={} r_ppi={} p={} delay={}",
            row[0], row[2], row[3], row[4], row[5], row[6]
        );
    }
    Ok(())
}

fn correlation_row(
    settings: &Settings,
    sample: &str,
    points: &[MeasurePoint],
    cpi_yoy: &EconSeries,
    ppi_yoy: &EconSeries,
) -> Result<CorrelationRow> {
    let (cpi_pairs, mut warnings) = settings.alignment.align(points, cpi_yoy);
    let (ppi_pairs, ppi_warnings) = settings.alignment.align(points, ppi_yoy);
    warnings.extend(ppi_warnings);
    let delay = delay_stats(points);
    let mut cpi =
        pearson(&cpi_pairs).with_context(|| format!("{sample}: CPI correlation failed"))?;
    let mut ppi =
        pearson(&ppi_pairs).with_context(|| format!("{sample}: PPI correlation failed"))?;
    cpi.avg_delay_days = Some(delay);
    ppi.avg_delay_days = Some(delay);
    Ok(CorrelationRow {
        sample: sample.to_string(),
        n: points.len(),
        cpi,
        ppi,
        avg_delay_days: delay,
        warnings,
    })
}

#[derive(Serialize)]
struct RegressionRow {
    maturity: String,
    result: RegressionResult,
    pairs: usize,
    shifted_executions: usize,
    dropped: usize,
}

#[derive(Serialize)]
struct RegressionSummary {
    rows: Vec<RegressionRow>,
}

pub fn cmd_regress(
    settings: &Settings,
    measure_path: &Path,
    treasury_path: &Path,
    maturities: &[String],
) -> Result<()> {
    let points = load_measure(measure_path)?;
    let treasury = load_treasury_csv(treasury_path)?;
    let selected: Vec<String> = if maturities.is_empty() {
        treasury.maturities.clone()
    } else {
        maturities.to_vec()
    };

    let mut rows = Vec::new();
    for maturity in &selected {
        let series = treasury.series(maturity).with_context(|| {
            format!(
                "maturity `{maturity}` not in treasury file (have: {})",
                treasury.maturities.join(", ")
            )
        })?;
        let (pairs, shifted, dropped) = fomc_core::econ::align_yield(&points, series);
        let x: Vec<f64> = pairs.iter().map(|(m, _)| *m).collect();
        let y: Vec<f64> = pairs.iter().map(|(_, y)| *y).collect();
        let result =
            simple_ols(&x, &y).with_context(|| format!("regression for maturity {maturity}"))?;
        rows.push(RegressionRow {
            maturity: maturity.clone(),
            result,
            pairs: pairs.len(),
            shifted_executions: shifted.len(),
            dropped: dropped.len(),
        });
    }

    let out = OutputDir::create(&settings.output_dir, settings.provenance("regress"))?;
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.maturity.clone(),
                num(r.result.alpha),
                r.result.stars_alpha.as_str().to_string(),
                num(r.result.se_alpha),
                num(r.result.beta),
                r.result.stars_beta.as_str().to_string(),
                num(r.result.se_beta),
                r.pairs.to_string(),
                num(r.result.r_squared),
            ]
        })
        .collect();
    out.write_csv(
        "regressions.csv",
        &[
            "maturity",
            "alpha",
            "stars_alpha",
            "se_alpha",
            "beta",
            "stars_beta",
            "se_beta",
            "n",
            "r_squared",
        ],
        &csv_rows,
    )?;
    let summary = RegressionSummary { rows };
    out.write_json("regressions.json", &summary)?;
    let rows = summary.rows;
    for r in &rows {
        println!(
            "{}: alpha={:.4}{} beta={:.4}{} (n={})",
            r.maturity,
            r.result.alpha,
            r.result.stars_alpha,
            r.result.beta,
            r.result.stars_beta,
            r.pairs
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct BacktestSummary {
    window_start: NaiveDate,
    window_end: NaiveDate,
    strategy_return_pct: f64,
    buy_hold_return_pct: f64,
    excess_return_pct: f64,
    convention: fomc_core::backtest::ShortConvention,
    wiped_out: bool,
    signals: usize,
}

pub fn cmd_backtest(
    settings: &Settings,
    measure_path: &Path,
    prices_path: &Path,
    start: Option<NaiveDate>,
    end: Option<NaiveDate>,
) -> Result<()> {
    let points = load_measure(measure_path)?;
    let prices = load_price_csv(prices_path, "asset")?;
    let signals: Vec<MeasurePoint> = match start {
        Some(s) => points
            .iter()
            .filter(|p| p.release_date >= s)
            .cloned()
            .collect(),
        None => points.clone(),
    };
    if signals.is_empty() {
        bail!("no signals in the requested window");
    }
    let end = end
        .or_else(|| prices.last_date())
        .context("price series is empty")?;

    let strategy = run_strategy(&signals, &prices, end, settings.short_convention)?;
    let hold = buy_and_hold(&prices, strategy.start, strategy.end)?;
    let excess = compare(&strategy, &hold)?;

    let out = OutputDir::create(&settings.output_dir, settings.provenance("backtest"))?;
    write_ledger_csv(&out, "ledger.csv", &strategy)?;
    let strategy_curve = daily_curve(&strategy, &prices)?;
    let hold_curve = daily_curve(&hold, &prices)?;
    let curve_rows: Vec<Vec<String>> = strategy_curve
        .iter()
        .zip(&hold_curve)
        .map(|((date, sv), (_, hv))| vec![date.to_string(), num(*sv), num(*hv)])
        .collect();
    out.write_csv(
        "strategy_curves.csv",
        &["date", "strategy_value", "buy_hold_value"],
        &curve_rows,
    )?;
    let summary = BacktestSummary {
        window_start: strategy.start,
        window_end: strategy.end,
        strategy_return_pct: strategy.final_return_pct,
        buy_hold_return_pct: hold.final_return_pct,
        excess_return_pct: excess,
        convention: strategy.convention,
        wiped_out: strategy.wiped_out,
        signals: signals.len(),
    };
    out.write_json("backtest_summary.json", &summary)?;
    println!(
        "strategy {:+.2}% vs buy-and-hold {:+.2}% (excess {:+.2} points) over {} -> {}",
        summary.strategy_return_pct,
        summary.buy_hold_return_pct,
        summary.excess_return_pct,
        summary.window_start,
        summary.window_end
    );
    Ok(())
}

fn write_ledger_csv(out: &OutputDir, name: &str, ledger: &BacktestLedger) -> Result<()> {
    let rows: Vec<Vec<String>> = ledger
        .entries
        .iter()
        .map(|e| {
            vec![
                e.date.to_string(),
                e.position.as_str().to_string(),
                num(e.portfolio_value),
                num(e.signal_value),
                e.shifted_execution.to_string(),
            ]
        })
        .collect();
    out.write_csv(
        name,
        &[
            "date",
            "position",
            "portfolio_value",
            "signal_value",
            "shifted_execution",
        ],
        &rows,
    )
}

/// Bundle the plot-ready figure CSVs: inflation overlays per measure series
/// and the two-curve portfolio chart.
pub fn cmd_report(settings: &Settings) -> Result<()> {
    let cfg = &settings.file;
    let measures = [
        ("meeting_minutes", cfg.measures.meeting_minutes.as_deref()),
        ("press_conference", cfg.measures.press_conference.as_deref()),
        ("speech", cfg.measures.speech.as_deref()),
    ];
    if measures.iter().all(|(_, p)| p.is_none()) {
        bail!("config lists no measure series under `measures` (run `fomc measure` first)");
    }
    let out = OutputDir::create(&settings.output_dir, settings.provenance("report"))?;

    let cpi_yoy = match &cfg.cpi {
        Some(path) => Some(yoy_percent_change(&load_econ_csv(path, "cpi", Frequency::Monthly)?)?.0),
        None => None,
    };
    let ppi_yoy = match &cfg.ppi {
        Some(path) => Some(yoy_percent_change(&load_econ_csv(path, "ppi", Frequency::Monthly)?)?.0),
        None => None,
    };

    for (kind, path) in measures {
        let Some(path) = path else { continue };
        let points = load_measure(path)?;
        let mut rows: Vec<Vec<String>> = points
            .iter()
            .filter_map(|p| {
                p.value
                    .map(|v| vec![p.release_date.to_string(), "measure".into(), num(v)])
            })
            .collect();
        for (name, series) in [("cpi_yoy", &cpi_yoy), ("ppi_yoy", &ppi_yoy)] {
            if let Some(series) = series {
                rows.extend(
                    series
                        .observations()
                        .iter()
                        .map(|(d, v)| vec![d.to_string(), name.to_string(), num(*v)]),
                );
            }
        }
        out.write_csv(
            &format!("fig_inflation_overlay_{kind}.csv"),
            &["date", "series", "value"],
            &rows,
        )?;
    }

    if let (Some(measure_path), Some(prices_path)) = (
        cfg.measures.press_conference.as_deref(),
        cfg.prices.as_deref(),
    ) {
        let points = load_measure(measure_path)?;
        let prices = load_price_csv(prices_path, "asset")?;
        let parse = |raw: &Option<String>| -> Result<Option<NaiveDate>> {
            raw.as_deref()
                .map(|r| {
                    NaiveDate::parse_from_str(r, "%Y-%m-%d")
                        .with_context(|| format!("malformed date `{r}` in config"))
                })
                .transpose()
        };
        let start = parse(&cfg.backtest_start)?;
        let end = parse(&cfg.backtest_end)?.or_else(|| prices.last_date());
        let signals: Vec<MeasurePoint> = match start {
            Some(s) => points
                .iter()
                .filter(|p| p.release_date >= s)
                .cloned()
                .collect(),
            None => points,
        };
        let strategy = run_strategy(
            &signals,
            &prices,
            end.context("empty price series")?,
            settings.short_convention,
        )?;
        let hold = buy_and_hold(&prices, strategy.start, strategy.end)?;
        let rows: Vec<Vec<String>> = daily_curve(&strategy, &prices)?
            .iter()
            .zip(daily_curve(&hold, &prices)?)
            .map(|((d, sv), (_, hv))| vec![d.to_string(), num(*sv), num(hv)])
            .collect();
        out.write_csv(
            "fig_portfolio_value.csv",
            &["date", "strategy_value", "buy_hold_value"],
            &rows,
        )?;
    }

    println!("report bundle written to {}", settings.output_dir.display());
    Ok(())
}
