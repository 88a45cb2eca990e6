//! Sign-of-measure long/short strategy versus buy-and-hold.
//!
//! The strategy trades one index fund on the hawkishness measure: a positive
//! (hawkish) signal takes a short position at that day's close, a negative
//! (dovish) signal a long position, and a zero signal holds whatever was on.
//! A $100 portfolio evolves per holding segment with asset return `r`:
//! long multiplies by `1 + r`, short by `1 - r` (fully collateralized,
//! single-period), flat by 1. There are no transaction costs.
//!
//! Short legs re-base when the position changes ([`ShortConvention::Segment`],
//! the default, under which inserting a redundant same-position signal leaves
//! the value path unchanged) or at every polar signal
//! ([`ShortConvention::Signal`]).

use std::path::Path;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::Serialize;

use crate::error::Error;
use crate::measures::MeasurePoint;
use crate::Result;

/// Daily adjusted-close price history for one symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    pub symbol: String,
    observations: Vec<(NaiveDate, f64)>,
}

impl PriceSeries {
    /// Dates strictly increasing, prices strictly positive.
    pub fn new(symbol: impl Into<String>, observations: Vec<(NaiveDate, f64)>) -> Result<Self> {
        let symbol = symbol.into();
        for pair in observations.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::Invalid(format!(
                    "{symbol}: price dates not strictly increasing at {}",
                    pair[1].0
                )));
            }
        }
        if let Some((date, price)) = observations
            .iter()
            .find(|(_, p)| !p.is_finite() || *p <= 0.0)
        {
            return Err(Error::Invalid(format!(
                "{symbol}: non-positive price {price} at {date}"
            )));
        }
        Ok(PriceSeries {
            symbol,
            observations,
        })
    }

    pub fn observations(&self) -> &[(NaiveDate, f64)] {
        &self.observations
    }

    pub fn first_date(&self) -> Option<NaiveDate> {
        self.observations.first().map(|(d, _)| *d)
    }

    pub fn last_date(&self) -> Option<NaiveDate> {
        self.observations.last().map(|(d, _)| *d)
    }

    /// First trading day on or after `date`, with its close.
    pub fn on_or_after(&self, date: NaiveDate) -> Option<(NaiveDate, f64)> {
        let idx = self.observations.partition_point(|(d, _)| *d < date);
        self.observations.get(idx).copied()
    }

    /// Last trading day on or before `date`, with its close.
    pub fn on_or_before(&self, date: NaiveDate) -> Option<(NaiveDate, f64)> {
        let idx = self.observations.partition_point(|(d, _)| *d <= date);
        idx.checked_sub(1).map(|i| self.observations[i])
    }
}

/// Load a `{date, adjusted_close}` price CSV. The close column may also be
/// named `adj_close` or `Adj Close`.
pub fn load_price_csv(path: impl AsRef<Path>, symbol: impl Into<String>) -> Result<PriceSeries> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::csv(path, e))?;
    let headers = reader.headers().map_err(|e| Error::csv(path, e))?.clone();
    let normalized = |h: &str| h.trim().to_ascii_lowercase().replace(' ', "_");
    let col_date = headers
        .iter()
        .position(|h| normalized(h) == "date")
        .ok_or_else(|| Error::record(path, 1, "missing required column `date`"))?;
    let col_close = headers
        .iter()
        .position(|h| matches!(normalized(h).as_str(), "adjusted_close" | "adj_close"))
        .ok_or_else(|| Error::record(path, 1, "missing required column `adjusted_close`"))?;

    let mut observations = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::csv(path, e))?;
        let row = record.position().map(|p| p.line()).unwrap_or(0);
        let raw_date = record.get(col_date).unwrap_or("").trim();
        let raw_close = record.get(col_close).unwrap_or("").trim();
        if raw_close.is_empty() || raw_close == "." || raw_close.eq_ignore_ascii_case("null") {
            continue;
        }
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d")
            .map_err(|_| Error::record(path, row, format!("malformed date `{raw_date}`")))?;
        let close: f64 = raw_close
            .parse()
            .map_err(|_| Error::record(path, row, format!("malformed price `{raw_close}`")))?;
        observations.push((date, close));
    }
    PriceSeries::new(symbol, observations)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Position {
    Long,
    Short,
    Flat,
}

impl Position {
    pub fn as_str(self) -> &'static str {
        match self {
            Position::Long => "long",
            Position::Short => "short",
            Position::Flat => "flat",
        }
    }
}

/// When the short leg re-bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShortConvention {
    /// Re-base only when the position changes; redundant signals are
    /// value-path neutral.
    #[default]
    Segment,
    /// Re-base at every polar signal, even a redundant one.
    Signal,
}

impl FromStr for ShortConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "segment" => Ok(ShortConvention::Segment),
            "signal" => Ok(ShortConvention::Signal),
            other => Err(Error::Parse {
                what: "short convention",
                value: other.to_string(),
            }),
        }
    }
}

/// One ledger row: the state set (or observed) at a date.
#[derive(Debug, Clone, Serialize)]
pub struct LedgerEntry {
    pub date: NaiveDate,
    pub position: Position,
    /// Mark-to-market portfolio value at this date.
    pub portfolio_value: f64,
    pub signal_value: f64,
    /// Execution happened on the next trading day after the signal date.
    pub shifted_execution: bool,
}

/// One holding segment with its settled values.
#[derive(Debug, Clone, Serialize)]
pub struct Segment {
    pub position: Position,
    pub start_date: NaiveDate,
    pub end_date: NaiveDate,
    pub start_value: f64,
    pub end_value: f64,
    /// Asset return `P(end) / P(start) - 1` over the segment.
    pub asset_return: f64,
}

/// Full audit record of one backtest run.
#[derive(Debug, Clone, Serialize)]
pub struct BacktestLedger {
    pub symbol: String,
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub initial_value: f64,
    pub entries: Vec<LedgerEntry>,
    pub segments: Vec<Segment>,
    pub final_value: f64,
    /// `final_value / initial * 100 - 100`.
    pub final_return_pct: f64,
    pub wiped_out: bool,
    pub convention: ShortConvention,
}

const INITIAL_VALUE: f64 = 100.0;

fn mark_to_market(position: Position, anchor_value: f64, price_ratio: f64) -> f64 {
    match position {
        Position::Long => anchor_value * price_ratio,
        Position::Short => anchor_value * (2.0 - price_ratio),
        Position::Flat => anchor_value,
    }
}

/// Run the sign-of-measure strategy over `[first signal execution, end]`.
///
/// Positions are set at each signal date's close, or the next trading day's
/// close when the market is closed (flagged). Signals that cannot execute by
/// `end` are ignored. The price series must cover the evaluation window.
pub fn run_strategy(
    signals: &[MeasurePoint],
    prices: &PriceSeries,
    end: NaiveDate,
    convention: ShortConvention,
) -> Result<BacktestLedger> {
    let last_price = prices
        .last_date()
        .ok_or_else(|| Error::EmptyInput("price series is empty".into()))?;
    if last_price < end {
        return Err(Error::Coverage(format!(
            "{} prices end {last_price}, before the evaluation end {end}",
            prices.symbol
        )));
    }

    let mut ordered: Vec<&MeasurePoint> = signals.iter().filter(|p| p.value.is_some()).collect();
    ordered.sort_by_key(|p| p.release_date);

    // Execution events: (trading day, signal value, shifted?).
    let mut events = Vec::new();
    for point in ordered {
        if point.release_date > end {
            continue;
        }
        let (exec_date, _) = prices.on_or_after(point.release_date).ok_or_else(|| {
            Error::Coverage(format!(
                "no {} price on or after signal date {}",
                prices.symbol, point.release_date
            ))
        })?;
        if exec_date > end {
            continue;
        }
        events.push((
            exec_date,
            point.value.expect("filtered above"),
            point.release_date != exec_date,
        ));
    }
    if events.is_empty() {
        return Err(Error::EmptyInput(format!(
            "no signal executes on or before {end}"
        )));
    }

    let price_at = |date: NaiveDate| -> f64 {
        prices
            .on_or_before(date)
            .expect("execution dates are trading days")
            .1
    };

    let start = events[0].0;
    let mut entries = Vec::new();
    let mut segments = Vec::new();
    let mut position = Position::Flat;
    let mut anchor_date = start;
    let mut anchor_price = price_at(start);
    let mut anchor_value = INITIAL_VALUE;
    let mut wiped_out_at: Option<(NaiveDate, f64)> = None;

    let desired_position = |signal: f64, current: Position| -> Position {
        if signal > 0.0 {
            Position::Short
        } else if signal < 0.0 {
            Position::Long
        } else {
            current
        }
    };

    for &(date, signal, shifted) in &events {
        let price = price_at(date);
        let mtm = mark_to_market(position, anchor_value, price / anchor_price);
        let desired = desired_position(signal, position);
        let rebase =
            desired != position || (convention == ShortConvention::Signal && signal != 0.0);
        if rebase {
            if date > anchor_date {
                segments.push(Segment {
                    position,
                    start_date: anchor_date,
                    end_date: date,
                    start_value: anchor_value,
                    end_value: mtm,
                    asset_return: price / anchor_price - 1.0,
                });
            }
            anchor_date = date;
            anchor_price = price;
            anchor_value = mtm;
            position = desired;
        }
        entries.push(LedgerEntry {
            date,
            position,
            portfolio_value: mtm,
            signal_value: signal,
            shifted_execution: shifted,
        });
        if mtm <= 0.0 {
            // A short leg was wiped out; terminate the ledger here.
            wiped_out_at = Some((date, mtm));
            break;
        }
    }

    let wiped_out = wiped_out_at.is_some();
    let (end_date, final_value) = if let Some(wipe) = wiped_out_at {
        wipe
    } else {
        let (end_exec, end_price) = prices.on_or_before(end).ok_or_else(|| {
            Error::Coverage(format!("no {} price on or before {end}", prices.symbol))
        })?;
        let final_value = mark_to_market(position, anchor_value, end_price / anchor_price);
        if end_exec > anchor_date {
            segments.push(Segment {
                position,
                start_date: anchor_date,
                end_date: end_exec,
                start_value: anchor_value,
                end_value: final_value,
                asset_return: end_price / anchor_price - 1.0,
            });
        }
        entries.push(LedgerEntry {
            date: end_exec,
            position,
            portfolio_value: final_value,
            signal_value: events.last().expect("non-empty").1,
            shifted_execution: false,
        });
        (end_exec, final_value)
    };

    Ok(BacktestLedger {
        symbol: prices.symbol.clone(),
        start,
        end: end_date,
        initial_value: INITIAL_VALUE,
        entries,
        segments,
        final_value,
        final_return_pct: final_value / INITIAL_VALUE * 100.0 - 100.0,
        wiped_out,
        convention,
    })
}

/// Always-long benchmark: `value(t) = 100 * P(t) / P(start)`.
pub fn buy_and_hold(
    prices: &PriceSeries,
    start: NaiveDate,
    end: NaiveDate,
) -> Result<BacktestLedger> {
    let first = prices
        .first_date()
        .ok_or_else(|| Error::EmptyInput("price series is empty".into()))?;
    let last = prices.last_date().expect("non-empty");
    if first > start || last < end {
        return Err(Error::Coverage(format!(
            "{} prices cover [{first}, {last}], not [{start}, {end}]",
            prices.symbol
        )));
    }
    let (start_date, start_price) = prices.on_or_after(start).expect("coverage checked");
    let (end_date, end_price) = prices.on_or_before(end).expect("coverage checked");
    if end_date < start_date {
        return Err(Error::Coverage(format!(
            "no {} trading days inside [{start}, {end}]",
            prices.symbol
        )));
    }
    let final_value = INITIAL_VALUE * end_price / start_price;
    let entry = |date, value| LedgerEntry {
        date,
        position: Position::Long,
        portfolio_value: value,
        signal_value: 0.0,
        shifted_execution: false,
    };
    Ok(BacktestLedger {
        symbol: prices.symbol.clone(),
        start: start_date,
        end: end_date,
        initial_value: INITIAL_VALUE,
        entries: vec![
            entry(start_date, INITIAL_VALUE),
            entry(end_date, final_value),
        ],
        segments: vec![Segment {
            position: Position::Long,
            start_date,
            end_date,
            start_value: INITIAL_VALUE,
            end_value: final_value,
            asset_return: end_price / start_price - 1.0,
        }],
        final_value,
        final_return_pct: final_value / INITIAL_VALUE * 100.0 - 100.0,
        wiped_out: false,
        convention: ShortConvention::default(),
    })
}

/// Excess return of `a` over `b` in percentage points. Both ledgers must
/// cover the same window.
pub fn compare(a: &BacktestLedger, b: &BacktestLedger) -> Result<f64> {
    if a.start != b.start || a.end != b.end {
        return Err(Error::Mismatch(format!(
            "ledgers cover different windows ([{}, {}] vs [{}, {}])",
            a.start, a.end, b.start, b.end
        )));
    }
    Ok(a.final_return_pct - b.final_return_pct)
}

/// Mark-to-market portfolio value at every trading day of the ledger window.
pub fn daily_curve(ledger: &BacktestLedger, prices: &PriceSeries) -> Result<Vec<(NaiveDate, f64)>> {
    let mut curve = Vec::new();
    let price_of = |date: NaiveDate| -> Result<f64> {
        prices
            .on_or_before(date)
            .filter(|(d, _)| *d == date)
            .map(|(_, p)| p)
            .ok_or_else(|| Error::Coverage(format!("missing {} price at {date}", prices.symbol)))
    };
    for &(date, price) in prices
        .observations()
        .iter()
        .filter(|(d, _)| *d >= ledger.start && *d <= ledger.end)
    {
        // Active segment: the one whose window contains the date; at a settle
        // date the closing and opening segments agree on the value.
        let segment = ledger
            .segments
            .iter()
            .find(|s| s.start_date <= date && date <= s.end_date);
        let value = match segment {
            Some(s) => {
                let anchor = price_of(s.start_date)?;
                mark_to_market(s.position, s.start_value, price / anchor)
            }
            // Degenerate single-day ledger or a date at the very start.
            None => ledger
                .entries
                .iter()
                .rev()
                .find(|e| e.date <= date)
                .map(|e| e.portfolio_value)
                .unwrap_or(ledger.initial_value),
        };
        curve.push((date, value));
    }
    Ok(curve)
}
