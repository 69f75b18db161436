//! Log returns and three-state coarse graining.
//!
//! A daily log return `x = ln(S_n) - ln(S_{n-1})` is mapped to one of three
//! states split at `±d/2`: decrease (`x <= -d/2`), intermediate
//! (`-d/2 < x < d/2`), increase (`x >= d/2`). At `d = 0` the two boundary
//! rules overlap at `x = 0`; branches are evaluated decrease-first, so an
//! exactly-zero return lands in the decrease state.

use crate::error::{Error, Result};
use crate::series::{PriceSeries, ReturnSeries, StateDistribution, SymbolSeries};

/// Alphabet of the decrease / intermediate / increase scheme.
pub const RETURN_ALPHABET: usize = 3;

/// Daily log returns; each value is dated by the later day of the pair.
pub fn log_returns(prices: &PriceSeries) -> Result<ReturnSeries> {
    if prices.len() < 2 {
        return Err(Error::TooFewObservations {
            instrument: prices.instrument_id().to_string(),
            needed: 2,
            got: prices.len(),
        });
    }
    let obs = prices.observations();
    let values = obs
        .windows(2)
        .map(|w| (w[1].0, w[1].1.ln() - w[0].1.ln()))
        .collect();
    ReturnSeries::new(prices.instrument_id(), values)
}

fn state_of(x: f64, half_width: f64) -> u8 {
    if x <= -half_width {
        0
    } else if x < half_width {
        1
    } else {
        2
    }
}

/// Coarse-grain returns into the three-state alphabet with band width `d`.
pub fn discretize(returns: &ReturnSeries, d: f64) -> Result<SymbolSeries> {
    if !d.is_finite() || d < 0.0 {
        return Err(Error::NegativeThreshold { d });
    }
    let half = d / 2.0;
    let states = returns.returns().map(|x| state_of(x, half)).collect();
    SymbolSeries::new(returns.instrument_id(), states, RETURN_ALPHABET, Some(d))
}

/// Empirical relative frequency of each state.
pub fn state_probabilities(symbols: &SymbolSeries) -> Result<StateDistribution> {
    if symbols.is_empty() {
        return Err(Error::EmptySeries {
            instrument: symbols.instrument_id().to_string(),
        });
    }
    let mut counts = vec![0u64; symbols.alphabet_size()];
    for &s in symbols.states() {
        counts[s as usize] += 1;
    }
    Ok(StateDistribution::from_counts(&counts))
}

/// Band width `d*` at which the three states are closest to equiprobable.
///
/// Scans candidates `d = 2|x|` over the observed returns and picks the one
/// minimizing the maximum absolute deviation of the three state
/// probabilities from 1/3; ties go to the smaller `d`.
pub fn equiprobable_threshold(returns: &ReturnSeries) -> Result<f64> {
    let mut xs: Vec<f64> = returns.returns().collect();
    let mut distinct = xs.clone();
    distinct.sort_by(|a, b| a.total_cmp(b));
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::DegenerateReturns {
            needed: 3,
            got: distinct.len(),
        });
    }
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len() as f64;

    let mut candidates: Vec<f64> = xs.iter().map(|x| 2.0 * x.abs()).collect();
    candidates.sort_by(|a, b| a.total_cmp(b));
    candidates.dedup();

    let mut best_d = candidates[0];
    let mut best_dev = f64::INFINITY;
    for &d in &candidates {
        let half = d / 2.0;
        // counts via binary search on the sorted returns
        let c0 = xs.partition_point(|&x| x <= -half);
        let c2 = xs.len() - xs.partition_point(|&x| x < half);
        // at d = 0 the two boundary rules overlap at x = 0; decrease wins
        let c2 = if d == 0.0 {
            xs.len() - xs.partition_point(|&x| x <= 0.0)
        } else {
            c2
        };
        let p0 = c0 as f64 / n;
        let p2 = c2 as f64 / n;
        let p1 = 1.0 - p0 - p2;
        let dev = (p0 - 1.0 / 3.0)
            .abs()
            .max((p1 - 1.0 / 3.0).abs())
            .max((p2 - 1.0 / 3.0).abs());
        if dev < best_dev {
            best_dev = dev;
            best_d = d;
        }
    }
    Ok(best_d)
}
