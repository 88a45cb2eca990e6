//! Econometric validation of the measure: inflation correlation, release
//! delay, and treasury-yield regression.
//!
//! CPI and PPI arrive as raw monthly index levels and are turned into
//! year-over-year percentage changes. Each measure point is aligned with the
//! first econ observation on or after its release date ("immediate next"
//! print), or optionally with the same calendar month's print. Correlations
//! carry two-sided Student-t p-values; the yield regression is simple OLS
//! with classical standard errors and 10%/5%/1% significance stars.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use chrono::{Datelike, NaiveDate};
use serde::Serialize;

use crate::distributions::two_sided_p;
use crate::error::Error;
use crate::measures::MeasurePoint;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Frequency {
    Monthly,
    Daily,
}

/// A named, date-ordered numeric series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EconSeries {
    pub name: String,
    observations: Vec<(NaiveDate, f64)>,
    pub frequency: Frequency,
}

impl EconSeries {
    /// Dates must be strictly increasing and values finite.
    pub fn new(
        name: impl Into<String>,
        observations: Vec<(NaiveDate, f64)>,
        frequency: Frequency,
    ) -> Result<Self> {
        let name = name.into();
        for pair in observations.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::Invalid(format!(
                    "series {name}: dates not strictly increasing at {}",
                    pair[1].0
                )));
            }
        }
        if let Some((date, value)) = observations.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Invalid(format!(
                "series {name}: non-finite value {value} at {date}"
            )));
        }
        Ok(EconSeries {
            name,
            observations,
            frequency,
        })
    }

    pub fn observations(&self) -> &[(NaiveDate, f64)] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn value_at(&self, date: NaiveDate) -> Option<f64> {
        self.observations
            .binary_search_by_key(&date, |(d, _)| *d)
            .ok()
            .map(|i| self.observations[i].1)
    }

    /// First observation on or after `date`.
    pub fn first_on_or_after(&self, date: NaiveDate) -> Option<(NaiveDate, f64)> {
        let idx = self.observations.partition_point(|(d, _)| *d < date);
        self.observations.get(idx).copied()
    }
}

/// Load a `{date, value}` CSV; `#` comment lines are skipped.
pub fn load_econ_csv(
    path: impl AsRef<Path>,
    name: impl Into<String>,
    frequency: Frequency,
) -> Result<EconSeries> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::csv(path, e))?;
    let headers = reader.headers().map_err(|e| Error::csv(path, e))?.clone();
    let find = |n: &str| {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(n))
            .ok_or_else(|| Error::record(path, 1, format!("missing required column `{n}`")))
    };
    let col_date = find("date")?;
    let col_value = find("value")?;
    let mut observations = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::csv(path, e))?;
        let row = record.position().map(|p| p.line()).unwrap_or(0);
        let raw_date = record.get(col_date).unwrap_or("").trim();
        let raw_value = record.get(col_value).unwrap_or("").trim();
        if raw_value.is_empty() || raw_value == "." {
            // Providers mark missing observations with "."; skip them.
            continue;
        }
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d")
            .map_err(|_| Error::record(path, row, format!("malformed date `{raw_date}`")))?;
        let value: f64 = raw_value
            .parse()
            .map_err(|_| Error::record(path, row, format!("malformed value `{raw_value}`")))?;
        observations.push((date, value));
    }
    EconSeries::new(name, observations, frequency)
}

/// First calendar day of the month after `date` (monthly series are stamped
/// on the first of the month).
pub fn first_of_next_month(date: NaiveDate) -> NaiveDate {
    let (year, month) = if date.month() == 12 {
        (date.year() + 1, 1)
    } else {
        (date.year(), date.month() + 1)
    };
    NaiveDate::from_ymd_opt(year, month, 1).expect("valid first of month")
}

fn months_back(date: NaiveDate, months: u32) -> NaiveDate {
    let total = date.year() * 12 + date.month0() as i32 - months as i32;
    let (year, month0) = (total.div_euclid(12), total.rem_euclid(12) as u32);
    // Clamp the day for shorter target months (Mar 31 -> Feb 28/29).
    let mut day = date.day();
    loop {
        if let Some(d) = NaiveDate::from_ymd_opt(year, month0 + 1, day) {
            return d;
        }
        day -= 1;
    }
}

/// Year-over-year percentage change of a monthly series:
/// `100 * (x(t) / x(t - 12 months) - 1)`. The first year of observations has
/// no base and is dropped; dates whose 12-month-prior observation is missing
/// are skipped with a warning.
pub fn yoy_percent_change(series: &EconSeries) -> Result<(EconSeries, Vec<String>)> {
    if series.frequency != Frequency::Monthly {
        return Err(Error::Invalid(format!(
            "year-over-year change needs a monthly series, got {:?}",
            series.frequency
        )));
    }
    if series.len() < 13 {
        return Err(Error::Degenerate(format!(
            "series {} has {} observations; need at least 13 for a year-over-year change",
            series.name,
            series.len()
        )));
    }
    let mut warnings = Vec::new();
    let mut out = Vec::new();
    for &(date, value) in series.observations() {
        let base_date = months_back(date, 12);
        if base_date < series.observations()[0].0 {
            continue; // inside the first year; no base exists yet
        }
        match series.value_at(base_date) {
            Some(base) if base != 0.0 => out.push((date, 100.0 * (value / base - 1.0))),
            Some(_) => warnings.push(format!("{date}: base value is zero; skipped")),
            None => warnings.push(format!(
                "{date}: no observation 12 months prior ({base_date}); skipped"
            )),
        }
    }
    Ok((
        EconSeries::new(format!("{}_yoy", series.name), out, Frequency::Monthly)?,
        warnings,
    ))
}

/// Pair each measure point with the first econ observation dated on or after
/// its release ("immediate next" print). Points past the last observation
/// are dropped with a warning.
pub fn align_next_release(
    points: &[MeasurePoint],
    econ: &EconSeries,
) -> (Vec<(f64, f64)>, Vec<String>) {
    let mut pairs = Vec::new();
    let mut warnings = Vec::new();
    for p in points {
        let Some(value) = p.value else { continue };
        match econ.first_on_or_after(p.release_date) {
            Some((_, econ_value)) => pairs.push((value, econ_value)),
            None => warnings.push(format!(
                "{}: released {} after the last {} observation; dropped",
                p.doc_id, p.release_date, econ.name
            )),
        }
    }
    (pairs, warnings)
}

/// Pair each measure point with the econ observation of its release month.
pub fn align_same_month(
    points: &[MeasurePoint],
    econ: &EconSeries,
) -> (Vec<(f64, f64)>, Vec<String>) {
    let by_month: BTreeMap<(i32, u32), f64> = econ
        .observations()
        .iter()
        .map(|(d, v)| ((d.year(), d.month()), *v))
        .collect();
    let mut pairs = Vec::new();
    let mut warnings = Vec::new();
    for p in points {
        let Some(value) = p.value else { continue };
        let key = (p.release_date.year(), p.release_date.month());
        match by_month.get(&key) {
            Some(&econ_value) => pairs.push((value, econ_value)),
            None => warnings.push(format!(
                "{}: no {} observation in {}-{:02}; dropped",
                p.doc_id, econ.name, key.0, key.1
            )),
        }
    }
    (pairs, warnings)
}

/// Pearson correlation with a two-sided p-value.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CorrelationResult {
    pub r: f64,
    pub p_value: f64,
    pub n: usize,
    /// Average release delay of the underlying measure series; filled by the
    /// caller, which knows the series.
    pub avg_delay_days: Option<f64>,
}

/// Product-moment correlation of paired samples. The p-value comes from
/// `t = r * sqrt((n-2) / (1-r^2))` against a Student-t with n-2 degrees of
/// freedom.
pub fn pearson(pairs: &[(f64, f64)]) -> Result<CorrelationResult> {
    let n = pairs.len();
    if n < 3 {
        return Err(Error::Degenerate(format!(
            "correlation needs at least 3 pairs, got {n}"
        )));
    }
    let nf = n as f64;
    let mean_x = pairs.iter().map(|(x, _)| x).sum::<f64>() / nf;
    let mean_y = pairs.iter().map(|(_, y)| y).sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for &(x, y) in pairs {
        sxx += (x - mean_x) * (x - mean_x);
        syy += (y - mean_y) * (y - mean_y);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Degenerate(
            "correlation is undefined for a constant variable".into(),
        ));
    }
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    let df = nf - 2.0;
    let p_value = if 1.0 - r * r <= f64::EPSILON {
        0.0
    } else {
        two_sided_p(r * (df / (1.0 - r * r)).sqrt(), df)
    };
    Ok(CorrelationResult {
        r,
        p_value,
        n,
        avg_delay_days: None,
    })
}

/// Average of `release_date - meeting_date` in days over the points that
/// carry a meeting date; zero when none does (speeches and press conferences
/// release immediately).
pub fn delay_stats(points: &[MeasurePoint]) -> f64 {
    let delays: Vec<i64> = points
        .iter()
        .filter(|p| p.meeting_date.is_some())
        .map(|p| p.delay_days())
        .collect();
    if delays.is_empty() {
        return 0.0;
    }
    delays.iter().sum::<i64>() as f64 / delays.len() as f64
}

/// Significance stars at the 10%, 5%, and 1% two-sided levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stars {
    None,
    OneStar,
    TwoStars,
    ThreeStars,
}

impl Stars {
    pub fn from_p(p: f64) -> Self {
        if p < 0.01 {
            Stars::ThreeStars
        } else if p < 0.05 {
            Stars::TwoStars
        } else if p < 0.10 {
            Stars::OneStar
        } else {
            Stars::None
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Stars::None => "",
            Stars::OneStar => "*",
            Stars::TwoStars => "**",
            Stars::ThreeStars => "***",
        }
    }
}

impl fmt::Display for Stars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Simple OLS fit `y = alpha + beta * x` with classical standard errors.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegressionResult {
    pub alpha: f64,
    pub beta: f64,
    pub se_alpha: f64,
    pub se_beta: f64,
    pub t_alpha: f64,
    pub t_beta: f64,
    pub p_alpha: f64,
    pub p_beta: f64,
    pub stars_alpha: Stars,
    pub stars_beta: Stars,
    pub n: usize,
    pub r_squared: f64,
    pub rss: f64,
}

/// Ordinary least squares with one regressor.
///
/// `beta = S_xy / S_xx`, `alpha = mean(y) - beta * mean(x)`, residual
/// variance `RSS / (n-2)`, and two-sided Student-t p-values on both
/// coefficients.
pub fn simple_ols(x: &[f64], y: &[f64]) -> Result<RegressionResult> {
    if x.len() != y.len() {
        return Err(Error::Mismatch(format!(
            "x has {} observations, y has {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::Degenerate(format!(
            "regression needs at least 3 observations, got {n}"
        )));
    }
    let nf = n as f64;
    let mean_x = x.iter().sum::<f64>() / nf;
    let mean_y = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mean_x) * (v - mean_x)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("regressor is constant".into()));
    }
    let sxy: f64 = x
        .iter()
        .zip(y)
        .map(|(xv, yv)| (xv - mean_x) * (yv - mean_y))
        .sum();
    let beta = sxy / sxx;
    let alpha = mean_y - beta * mean_x;

    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(xv, yv)| {
            let e = yv - alpha - beta * xv;
            e * e
        })
        .sum();
    let tss: f64 = y.iter().map(|v| (v - mean_y) * (v - mean_y)).sum();
    // With an intercept, RSS <= TSS; a constant y is fit exactly.
    let r_squared = if tss == 0.0 { 1.0 } else { 1.0 - rss / tss };

    let df = nf - 2.0;
    let sigma2 = rss / df;
    let se_beta = (sigma2 / sxx).sqrt();
    let se_alpha = (sigma2 * (1.0 / nf + mean_x * mean_x / sxx)).sqrt();

    let t_of = |coef: f64, se: f64| {
        if se == 0.0 {
            if coef == 0.0 {
                0.0
            } else {
                f64::INFINITY * coef.signum()
            }
        } else {
            coef / se
        }
    };
    let t_alpha = t_of(alpha, se_alpha);
    let t_beta = t_of(beta, se_beta);
    let p_of = |t: f64| if t == 0.0 { 1.0 } else { two_sided_p(t, df) };
    let p_alpha = p_of(t_alpha);
    let p_beta = p_of(t_beta);

    Ok(RegressionResult {
        alpha,
        beta,
        se_alpha,
        se_beta,
        t_alpha,
        t_beta,
        p_alpha,
        p_beta,
        stars_alpha: Stars::from_p(p_alpha),
        stars_beta: Stars::from_p(p_beta),
        n,
        r_squared,
        rss,
    })
}

/// Pair measure points with the daily yield at their release date, falling
/// back to the next trading day within five calendar days. Flagged pairs used
/// a shifted date; points with no yield inside the window are dropped with a
/// warning.
pub fn align_yield(
    points: &[MeasurePoint],
    yields: &EconSeries,
) -> (Vec<(f64, f64)>, Vec<String>, Vec<String>) {
    const MAX_SHIFT_DAYS: i64 = 5;
    let mut pairs = Vec::new();
    let mut shifted = Vec::new();
    let mut warnings = Vec::new();
    for p in points {
        let Some(value) = p.value else { continue };
        match yields.first_on_or_after(p.release_date) {
            Some((date, yield_value)) if (date - p.release_date).num_days() <= MAX_SHIFT_DAYS => {
                if date != p.release_date {
                    shifted.push(format!(
                        "{}: used {} yield for release {}",
                        p.doc_id, date, p.release_date
                    ));
                }
                pairs.push((value, yield_value));
            }
            _ => warnings.push(format!(
                "{}: no {} yield within {MAX_SHIFT_DAYS} days of {}; dropped",
                p.doc_id, yields.name, p.release_date
            )),
        }
    }
    (pairs, shifted, warnings)
}

/// Daily treasury yields for several maturities, one column per maturity.
#[derive(Debug, Clone)]
pub struct TreasuryData {
    pub maturities: Vec<String>,
    series: BTreeMap<String, EconSeries>,
}

impl TreasuryData {
    pub fn series(&self, maturity: &str) -> Option<&EconSeries> {
        self.series.get(maturity)
    }
}

/// Load a treasury CSV `{date, yield_3m, yield_1y, yield_10y, ...}`; every
/// `yield_*` column becomes one series named by its maturity suffix. Empty
/// cells are skipped per maturity.
pub fn load_treasury_csv(path: impl AsRef<Path>) -> Result<TreasuryData> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::csv(path, e))?;
    let headers = reader.headers().map_err(|e| Error::csv(path, e))?.clone();
    let col_date = headers
        .iter()
        .position(|h| h.trim().eq_ignore_ascii_case("date"))
        .ok_or_else(|| Error::record(path, 1, "missing required column `date`"))?;
    let mut maturity_cols = Vec::new();
    for (idx, header) in headers.iter().enumerate() {
        let name = header.trim().to_ascii_lowercase();
        if let Some(maturity) = name.strip_prefix("yield_") {
            maturity_cols.push((idx, maturity.to_string()));
        }
    }
    if maturity_cols.is_empty() {
        return Err(Error::record(path, 1, "no `yield_*` columns found"));
    }

    let mut raw: BTreeMap<String, Vec<(NaiveDate, f64)>> = maturity_cols
        .iter()
        .map(|(_, m)| (m.clone(), Vec::new()))
        .collect();
    for record in reader.records() {
        let record = record.map_err(|e| Error::csv(path, e))?;
        let row = record.position().map(|p| p.line()).unwrap_or(0);
        let raw_date = record.get(col_date).unwrap_or("").trim();
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d")
            .map_err(|_| Error::record(path, row, format!("malformed date `{raw_date}`")))?;
        for (idx, maturity) in &maturity_cols {
            let cell = record.get(*idx).unwrap_or("").trim();
            if cell.is_empty() || cell == "." {
                continue;
            }
            let value: f64 = cell.parse().map_err(|_| {
                Error::record(
                    path,
                    row,
                    format!("malformed yield `{cell}` for {maturity}"),
                )
            })?;
            raw.get_mut(maturity)
                .expect("key present")
                .push((date, value));
        }
    }

    let maturities: Vec<String> = maturity_cols.into_iter().map(|(_, m)| m).collect();
    let mut series = BTreeMap::new();
    for maturity in &maturities {
        let obs = raw.remove(maturity).expect("key present");
        series.insert(
            maturity.clone(),
            EconSeries::new(format!("yield_{maturity}"), obs, Frequency::Daily)?,
        );
    }
    Ok(TreasuryData { maturities, series })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::DocumentKind;

    fn date(s: &str) -> NaiveDate {
        NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
    }

    fn monthly(values: &[(&str, f64)]) -> EconSeries {
        EconSeries::new(
            "cpi",
            values.iter().map(|(d, v)| (date(d), *v)).collect(),
            Frequency::Monthly,
        )
        .unwrap()
    }

    fn point(day: &str, value: f64) -> MeasurePoint {
        MeasurePoint {
            doc_id: format!("doc-{day}"),
            kind: DocumentKind::MeetingMinutes,
            release_date: date(day),
            meeting_date: None,
            n_hawkish: 0,
            n_dovish: 0,
            n_total: 1,
            value: Some(value),
        }
    }

    fn year_of_months(year: i32, base: f64, step: f64) -> Vec<(NaiveDate, f64)> {
        (1..=12)
            .map(|m| {
                (
                    NaiveDate::from_ymd_opt(year, m, 1).unwrap(),
                    base + step * (m - 1) as f64,
                )
            })
            .collect()
    }

    #[test]
    fn yoy_constant_series_is_zero() {
        let mut obs = year_of_months(2020, 100.0, 0.0);
        obs.extend(year_of_months(2021, 100.0, 0.0));
        let series = EconSeries::new("cpi", obs, Frequency::Monthly).unwrap();
        let (yoy, warnings) = yoy_percent_change(&series).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(yoy.len(), 12);
        assert!(yoy.observations().iter().all(|(_, v)| v.abs() < 1e-12));
    }

    #[test]
    fn yoy_doubling_is_one_hundred() {
        let mut obs = year_of_months(2020, 100.0, 0.0);
        obs.extend(year_of_months(2021, 200.0, 0.0));
        let series = EconSeries::new("cpi", obs, Frequency::Monthly).unwrap();
        let (yoy, _) = yoy_percent_change(&series).unwrap();
        assert!(yoy
            .observations()
            .iter()
            .all(|(_, v)| (v - 100.0).abs() < 1e-12));
    }

    #[test]
    fn yoy_simple_arithmetic() {
        let mut obs = year_of_months(2020, 100.0, 0.0);
        obs.push((date("2021-01-01"), 103.0));
        let series = EconSeries::new("cpi", obs, Frequency::Monthly).unwrap();
        let (yoy, _) = yoy_percent_change(&series).unwrap();
        assert_eq!(yoy.len(), 1);
        assert_eq!(yoy.observations()[0].0, date("2021-01-01"));
        assert!((yoy.observations()[0].1 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn yoy_missing_base_warns_and_skips() {
        let mut obs = year_of_months(2020, 100.0, 0.0);
        // Drop June 2020, then add June 2021 and July 2021.
        obs.retain(|(d, _)| d.month() != 6);
        obs.push((date("2021-06-01"), 110.0));
        obs.push((date("2021-07-01"), 110.0));
        let series = EconSeries::new("cpi", obs, Frequency::Monthly).unwrap();
        let (yoy, warnings) = yoy_percent_change(&series).unwrap();
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("2021-06-01"));
        assert_eq!(yoy.len(), 1); // only July pairs
    }

    #[test]
    fn yoy_scale_invariance() {
        let mut obs = year_of_months(2019, 80.0, 1.5);
        obs.extend(year_of_months(2020, 95.0, 2.0));
        let series = EconSeries::new("cpi", obs.clone(), Frequency::Monthly).unwrap();
        let scaled = EconSeries::new(
            "cpi",
            obs.into_iter().map(|(d, v)| (d, v * 7.3)).collect(),
            Frequency::Monthly,
        )
        .unwrap();
        let (a, _) = yoy_percent_change(&series).unwrap();
        let (b, _) = yoy_percent_change(&scaled).unwrap();
        for (x, y) in a.observations().iter().zip(b.observations()) {
            assert!((x.1 - y.1).abs() < 1e-9);
        }
    }

    #[test]
    fn yoy_requires_thirteen_observations() {
        let series = monthly(&[("2020-01-01", 1.0), ("2020-02-01", 1.0)]);
        assert!(yoy_percent_change(&series).is_err());
    }

    #[test]
    fn next_release_alignment() {
        let econ = monthly(&[("2020-03-01", 1.5), ("2020-04-01", 2.5)]);
        // Mid-March release pairs with the April print.
        let (pairs, warnings) = align_next_release(&[point("2020-03-15", 0.3)], &econ);
        assert_eq!(pairs, vec![(0.3, 2.5)]);
        assert!(warnings.is_empty());
        // A release exactly on an observation date pairs with it.
        let (pairs, _) = align_next_release(&[point("2020-04-01", 0.3)], &econ);
        assert_eq!(pairs, vec![(0.3, 2.5)]);
        // Past the last observation: dropped with a warning.
        let (pairs, warnings) = align_next_release(&[point("2020-05-02", 0.3)], &econ);
        assert!(pairs.is_empty());
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn same_month_alignment() {
        let econ = monthly(&[("2020-03-01", 1.5), ("2020-04-01", 2.5)]);
        let (pairs, _) = align_same_month(&[point("2020-03-15", 0.3)], &econ);
        assert_eq!(pairs, vec![(0.3, 1.5)]);
        let (pairs, warnings) = align_same_month(&[point("2020-05-15", 0.3)], &econ);
        assert!(pairs.is_empty());
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn pearson_perfect_lines() {
        let xs = [-2.0, -0.5, 0.0, 1.0, 3.5, 4.0];
        let up: Vec<(f64, f64)> = xs.iter().map(|&x| (x, 2.0 * x + 1.0)).collect();
        let down: Vec<(f64, f64)> = xs.iter().map(|&x| (x, -x)).collect();
        assert!((pearson(&up).unwrap().r - 1.0).abs() < 1e-12);
        assert!((pearson(&down).unwrap().r + 1.0).abs() < 1e-12);
        assert_eq!(pearson(&up).unwrap().p_value, 0.0);
    }

    #[test]
    fn pearson_rejects_degenerate_input() {
        assert!(pearson(&[(1.0, 2.0), (2.0, 3.0)]).is_err());
        assert!(pearson(&[(1.0, 2.0), (1.0, 3.0), (1.0, 4.0)]).is_err());
        assert!(pearson(&[(1.0, 2.0), (2.0, 2.0), (3.0, 2.0)]).is_err());
    }

    // Fixed pseudo-random pairs; r and p checked against a direct-summation
    // oracle in the acceptance suite to 1e-12. The values here are frozen
    // from that oracle.
    #[test]
    fn pearson_fixed_pairs_against_oracle_values() {
        let pairs = fixed_pairs();
        let result = pearson(&pairs).unwrap();
        let (oracle_r, oracle_t) = oracle_r_t(&pairs);
        assert!((result.r - oracle_r).abs() < 1e-12);
        let df = pairs.len() as f64 - 2.0;
        let oracle_p = crate::distributions::two_sided_p(oracle_t, df);
        assert!((result.p_value - oracle_p).abs() < 1e-12);
    }

    fn fixed_pairs() -> Vec<(f64, f64)> {
        let mut rng = crate::rng::Lcg64::new(20240101);
        (0..10)
            .map(|_| {
                let x = rng.next_f64() * 4.0 - 2.0;
                let y = 0.8 * x + rng.next_f64() * 1.5;
                (x, y)
            })
            .collect()
    }

    /// Direct-summation formula, written independently of `pearson`.
    fn oracle_r_t(pairs: &[(f64, f64)]) -> (f64, f64) {
        let n = pairs.len() as f64;
        let sx: f64 = pairs.iter().map(|(x, _)| x).sum();
        let sy: f64 = pairs.iter().map(|(_, y)| y).sum();
        let sxx: f64 = pairs.iter().map(|(x, _)| x * x).sum();
        let syy: f64 = pairs.iter().map(|(_, y)| y * y).sum();
        let sxy: f64 = pairs.iter().map(|(x, y)| x * y).sum();
        let r = (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt());
        let t = r * ((n - 2.0) / (1.0 - r * r)).sqrt();
        (r, t)
    }

    #[test]
    fn delay_statistics() {
        let mut minutes = point("2020-01-22", 0.1);
        minutes.meeting_date = Some(date("2020-01-01"));
        assert!((delay_stats(&[minutes.clone()]) - 21.0).abs() < 1e-12);
        // Kinds without meeting dates report zero.
        assert_eq!(delay_stats(&[point("2020-01-22", 0.1)]), 0.0);
        assert_eq!(delay_stats(&[]), 0.0);
        let mut other = point("2020-03-15", 0.2);
        other.meeting_date = Some(date("2020-02-29"));
        // (21 + 15) / 2
        assert!((delay_stats(&[minutes, other]) - 18.0).abs() < 1e-12);
    }

    #[test]
    fn ols_noiseless_line() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 + 2.0 * v).collect();
        let fit = simple_ols(&x, &y).unwrap();
        assert!((fit.alpha - 3.0).abs() < 1e-10);
        assert!((fit.beta - 2.0).abs() < 1e-10);
        assert!(fit.rss < 1e-18);
        assert_eq!(fit.stars_beta, Stars::ThreeStars);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ols_constant_response() {
        let x = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let y = [4.0; 5];
        let fit = simple_ols(&x, &y).unwrap();
        assert_eq!(fit.beta, 0.0);
        assert!((fit.alpha - 4.0).abs() < 1e-12);
        assert_eq!(fit.p_beta, 1.0);
        assert_eq!(fit.stars_beta, Stars::None);
    }

    #[test]
    fn ols_rejects_constant_regressor() {
        assert!(simple_ols(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(simple_ols(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(simple_ols(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn ols_residuals_orthogonal_to_regressor() {
        let mut rng = crate::rng::Lcg64::new(77);
        let x: Vec<f64> = (0..200).map(|_| rng.next_f64() * 10.0 - 5.0).collect();
        let y: Vec<f64> = x
            .iter()
            .map(|v| 1.5 - 0.7 * v + (rng.next_f64() - 0.5) * 2.0)
            .collect();
        let fit = simple_ols(&x, &y).unwrap();
        let residuals: Vec<f64> = x
            .iter()
            .zip(&y)
            .map(|(xv, yv)| yv - fit.alpha - fit.beta * xv)
            .collect();
        let scale: f64 = residuals.iter().map(|e| e.abs()).sum::<f64>().max(1.0);
        let sum_e: f64 = residuals.iter().sum();
        let sum_ex: f64 = residuals.iter().zip(&x).map(|(e, xv)| e * xv).sum();
        assert!(sum_e.abs() / scale < 1e-9);
        assert!(sum_ex.abs() / (scale * 5.0) < 1e-9);
    }

    #[test]
    fn ols_r_squared_equals_pearson_r_squared() {
        let pairs = fixed_pairs();
        let x: Vec<f64> = pairs.iter().map(|(x, _)| *x).collect();
        let y: Vec<f64> = pairs.iter().map(|(_, y)| *y).collect();
        let fit = simple_ols(&x, &y).unwrap();
        let corr = pearson(&pairs).unwrap();
        assert!((fit.r_squared - corr.r * corr.r).abs() < 1e-9);
    }

    // Planted coefficients recovered within 3 standard errors on 200 noisy
    // points.
    #[test]
    fn ols_recovers_planted_coefficients() {
        let mut rng = crate::rng::Lcg64::new(424242);
        let x: Vec<f64> = (0..200).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
        let y: Vec<f64> = x
            .iter()
            .map(|v| 1.94 + 4.91 * v + (rng.next_f64() - 0.5) * 0.6)
            .collect();
        let fit = simple_ols(&x, &y).unwrap();
        assert!((fit.alpha - 1.94).abs() <= 3.0 * fit.se_alpha);
        assert!((fit.beta - 4.91).abs() <= 3.0 * fit.se_beta);
        assert_eq!(fit.stars_beta, Stars::ThreeStars);
    }

    #[test]
    fn yield_alignment_shifts_within_five_days() {
        let yields = EconSeries::new(
            "yield_1y",
            vec![
                (date("2020-01-03"), 1.5),
                (date("2020-01-06"), 1.6),
                (date("2020-01-20"), 1.7),
            ],
            Frequency::Daily,
        )
        .unwrap();
        // Trading-day release: same-day yield, no flag.
        let (pairs, shifted, warnings) = align_yield(&[point("2020-01-03", 0.5)], &yields);
        assert_eq!(pairs, vec![(0.5, 1.5)]);
        assert!(shifted.is_empty() && warnings.is_empty());
        // Saturday release: next trading day, flagged.
        let (pairs, shifted, _) = align_yield(&[point("2020-01-04", 0.5)], &yields);
        assert_eq!(pairs, vec![(0.5, 1.6)]);
        assert_eq!(shifted.len(), 1);
        // Gap longer than five days: dropped.
        let (pairs, _, warnings) = align_yield(&[point("2020-01-08", 0.5)], &yields);
        assert!(pairs.is_empty());
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn treasury_csv_per_maturity_series() {
        let mut f = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
        use std::io::Write;
        writeln!(f, "date,yield_3m,yield_1y,yield_10y").unwrap();
        writeln!(f, "2020-01-02,1.54,1.56,1.88").unwrap();
        writeln!(f, "2020-01-03,1.52,,1.80").unwrap();
        let data = load_treasury_csv(f.path()).unwrap();
        assert_eq!(data.maturities, vec!["3m", "1y", "10y"]);
        assert_eq!(data.series("3m").unwrap().len(), 2);
        assert_eq!(data.series("1y").unwrap().len(), 1);
        assert_eq!(
            data.series("10y").unwrap().value_at(date("2020-01-03")),
            Some(1.80)
        );
        assert!(data.series("30y").is_none());
    }

    #[test]
    fn econ_series_rejects_unsorted_dates() {
        assert!(EconSeries::new(
            "x",
            vec![(date("2020-02-01"), 1.0), (date("2020-01-01"), 2.0)],
            Frequency::Monthly,
        )
        .is_err());
    }

    #[test]
    fn months_back_handles_clamping() {
        assert_eq!(months_back(date("2021-03-31"), 12), date("2020-03-31"));
        assert_eq!(months_back(date("2020-02-29"), 12), date("2019-02-28"));
        assert_eq!(months_back(date("2020-01-01"), 12), date("2019-01-01"));
    }
}
