//! Panel alignment: put every instrument on the intersection of trading
//! days before computing returns.
//!
//! Forward-filling is deliberately not offered: it fabricates zero returns
//! that pollute the intermediate state. Instruments too short to ever
//! produce a usable window are dropped (with a warning) before the
//! intersection so one hopeless file cannot empty the panel for everyone;
//! if the index itself is unusable the run fails.

use std::collections::BTreeSet;

use chrono::NaiveDate;
use teflow::{log_returns, PriceSeries, ReturnSeries};

use crate::error::{CliError, Result};

const STAGE: &str = "align";

/// Instruments on a common date support, in return space.
#[derive(Debug, Clone)]
pub struct AlignedPanel {
    /// The common trading days (price dates).
    pub dates: Vec<NaiveDate>,
    pub index: ReturnSeries,
    pub stocks: Vec<ReturnSeries>,
}

/// What alignment changed, for the run log and manifest.
#[derive(Debug, Default)]
pub struct AlignReport {
    /// `(instrument, reason)` for instruments removed entirely.
    pub dropped_instruments: Vec<(String, String)>,
    /// `(instrument, dates removed)` for instruments trimmed to the
    /// common support.
    pub removed_dates: Vec<(String, Vec<NaiveDate>)>,
}

/// Align all instruments on their common trading days and compute returns.
///
/// `min_return_len` is the smallest usable return-series length (history
/// span + 2); the panel needs one more price day than that.
pub fn align_panel(
    all_series: Vec<PriceSeries>,
    index_id: &str,
    min_return_len: usize,
) -> Result<(AlignedPanel, AlignReport)> {
    let mut report = AlignReport::default();
    let min_price_len = min_return_len + 1;

    {
        let mut seen = BTreeSet::new();
        for s in &all_series {
            if !seen.insert(s.instrument_id().to_string()) {
                return Err(CliError::data(
                    STAGE,
                    format!("duplicate instrument id `{}`", s.instrument_id()),
                ));
            }
        }
    }
    if !all_series.iter().any(|s| s.instrument_id() == index_id) {
        return Err(CliError::data(
            STAGE,
            format!("index id `{index_id}` is not among the ingested instruments"),
        ));
    }

    // drop instruments that cannot reach the minimum even before
    // intersecting, so they do not shrink the panel for everyone else
    let mut usable = Vec::new();
    for s in all_series {
        if s.len() < min_price_len {
            if s.instrument_id() == index_id {
                return Err(CliError::data(
                    STAGE,
                    format!(
                        "index `{index_id}` has {} observations, need at least {min_price_len}",
                        s.len()
                    ),
                ));
            }
            report.dropped_instruments.push((
                s.instrument_id().to_string(),
                format!("{} observations, need at least {min_price_len}", s.len()),
            ));
        } else {
            usable.push(s);
        }
    }
    if usable.len() < 2 {
        return Err(CliError::data(
            STAGE,
            format!(
                "need the index plus at least one stock, have {} usable instruments",
                usable.len()
            ),
        ));
    }

    let mut common: BTreeSet<NaiveDate> = usable[0].dates().collect();
    for s in &usable[1..] {
        let dates: BTreeSet<NaiveDate> = s.dates().collect();
        common = common.intersection(&dates).copied().collect();
    }
    if common.is_empty() {
        return Err(CliError::data(STAGE, "instruments share no trading days"));
    }
    if common.len() < min_price_len {
        return Err(CliError::data(
            STAGE,
            format!(
                "only {} common trading days, need at least {min_price_len}",
                common.len()
            ),
        ));
    }

    let mut index = None;
    let mut stocks = Vec::new();
    for s in usable {
        let removed: Vec<NaiveDate> = s.dates().filter(|d| !common.contains(d)).collect();
        if !removed.is_empty() {
            report
                .removed_dates
                .push((s.instrument_id().to_string(), removed));
        }
        let restricted = s
            .restrict_to(&common)
            .and_then(|r| log_returns(&r))
            .map_err(|e| CliError::data(STAGE, e))?;
        if restricted.instrument_id() == index_id {
            index = Some(restricted);
        } else {
            stocks.push(restricted);
        }
    }

    Ok((
        AlignedPanel {
            dates: common.into_iter().collect(),
            index: index.expect("index presence checked above"),
            stocks,
        },
        report,
    ))
}
