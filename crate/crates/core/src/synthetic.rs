//! Synthetic processes with planted, analytically known information flow.
//!
//! Two generators back the estimator validation: a binary noisy-copy
//! channel whose transfer entropy has the closed form `1 - H_b(epsilon)`,
//! and a toy market in which every stock copies the lagged index sign with
//! some probability while the published index averages the stocks back in,
//! so flow exists in both directions but index→stock dominates.

use chrono::{Datelike, NaiveDate, Weekday};
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, stream};
use crate::series::{ReturnSeries, SymbolSeries};

/// First synthetic trading day (a Monday).
const SYNTHETIC_EPOCH: (i32, u32, u32) = (2001, 1, 1);

fn synthetic_dates(n: usize) -> Vec<NaiveDate> {
    let (y, m, d) = SYNTHETIC_EPOCH;
    let mut day = NaiveDate::from_ymd_opt(y, m, d).unwrap();
    let mut dates = Vec::with_capacity(n);
    while dates.len() < n {
        if day.weekday() != Weekday::Sat && day.weekday() != Weekday::Sun {
            dates.push(day);
        }
        day = day.succ_opt().unwrap();
    }
    dates
}

/// Binary channel: source i.i.d. uniform, target copies the lagged source
/// with flip probability `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisyCopySpec {
    pub epsilon: f64,
    pub length: usize,
    pub seed: u64,
}

impl NoisyCopySpec {
    pub fn new(epsilon: f64, length: usize, seed: u64) -> Result<Self> {
        if !(0.0..=0.5).contains(&epsilon) {
            return Err(Error::ParameterOutOfRange {
                name: "epsilon",
                value: epsilon,
                min: 0.0,
                max: 0.5,
            });
        }
        if length < 3 {
            return Err(Error::ParameterOutOfRange {
                name: "length",
                value: length as f64,
                min: 3.0,
                max: f64::INFINITY,
            });
        }
        Ok(Self {
            epsilon,
            length,
            seed,
        })
    }
}

/// A generated noisy-copy pair; flow runs source→target.
#[derive(Debug, Clone)]
pub struct NoisyCopyPair {
    pub source: SymbolSeries,
    pub target: SymbolSeries,
}

/// Generate the noisy-copy pair: `target[t+1] = source[t]` flipped with
/// probability epsilon, `target[0]` uniform.
pub fn gen_noisy_copy(spec: &NoisyCopySpec) -> NoisyCopyPair {
    let mut rng = stream(spec.seed);
    let n = spec.length;
    let mut source = Vec::with_capacity(n);
    for _ in 0..n {
        source.push(rng.gen_range(0..2u8));
    }
    let mut target = Vec::with_capacity(n);
    target.push(rng.gen_range(0..2u8));
    for &s in &source[..n - 1] {
        let flip = rng.gen_bool(spec.epsilon);
        target.push(s ^ u8::from(flip));
    }
    NoisyCopyPair {
        source: SymbolSeries::new("noisy_copy_source", source, 2, None).unwrap(),
        target: SymbolSeries::new("noisy_copy_target", target, 2, None).unwrap(),
    }
}

/// Closed-form transfer entropy of the noisy-copy channel:
/// `1 - H_b(epsilon)` bits, with `H_b(0) = 0`.
pub fn analytic_noisy_copy_te(epsilon: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&epsilon) {
        return Err(Error::ParameterOutOfRange {
            name: "epsilon",
            value: epsilon,
            min: 0.0,
            max: 0.5,
        });
    }
    Ok(1.0 - binary_entropy(epsilon))
}

fn binary_entropy(p: f64) -> f64 {
    let term = |q: f64| if q == 0.0 { 0.0 } else { -q * q.log2() };
    term(p) + term(1.0 - p)
}

/// Toy market: an exogenous driver moves every stock with a one-day lag,
/// and the index publishes the stock average plus the driver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToyMarketSpec {
    pub n_stocks: usize,
    /// Probability a stock's return copies the lagged index-driver sign.
    pub coupling: f64,
    pub idiosyncratic_vol: f64,
    pub length: usize,
    pub seed: u64,
}

impl ToyMarketSpec {
    pub fn new(
        n_stocks: usize,
        coupling: f64,
        idiosyncratic_vol: f64,
        length: usize,
        seed: u64,
    ) -> Result<Self> {
        if n_stocks < 1 {
            return Err(Error::NoStocks);
        }
        if !(0.0..=1.0).contains(&coupling) {
            return Err(Error::ParameterOutOfRange {
                name: "coupling",
                value: coupling,
                min: 0.0,
                max: 1.0,
            });
        }
        if !idiosyncratic_vol.is_finite() || idiosyncratic_vol <= 0.0 {
            return Err(Error::ParameterOutOfRange {
                name: "idiosyncratic_vol",
                value: idiosyncratic_vol,
                min: f64::MIN_POSITIVE,
                max: f64::INFINITY,
            });
        }
        if length < 3 {
            return Err(Error::ParameterOutOfRange {
                name: "length",
                value: length as f64,
                min: 3.0,
                max: f64::INFINITY,
            });
        }
        Ok(Self {
            n_stocks,
            coupling,
            idiosyncratic_vol,
            length,
            seed,
        })
    }
}

/// A generated toy market in return space.
#[derive(Debug, Clone)]
pub struct ToyMarket {
    pub index: ReturnSeries,
    pub stocks: Vec<ReturnSeries>,
}

/// Generate the toy market.
///
/// Driver `m[t]` and each stock's noise are zero-mean Gaussian at the
/// idiosyncratic scale (only the sign structure survives discretization,
/// so the family is immaterial). Stock `s` at `t` keeps its own noise
/// magnitude but copies `sign(m[t-1])` with probability `coupling`; the
/// index return is the equal-weighted stock average plus `m[t]`. Streams
/// are derived per component (driver = tag 0, stock s = tag 1+s), so
/// stocks could be generated in parallel without changing the output.
pub fn gen_toy_market(spec: &ToyMarketSpec) -> Result<ToyMarket> {
    let n = spec.length;
    let dates = synthetic_dates(n);
    let normal =
        Normal::new(0.0, spec.idiosyncratic_vol).map_err(|_| Error::ParameterOutOfRange {
            name: "idiosyncratic_vol",
            value: spec.idiosyncratic_vol,
            min: f64::MIN_POSITIVE,
            max: f64::INFINITY,
        })?;

    let mut driver_rng = stream(derive_seed(spec.seed, &[0]));
    let driver: Vec<f64> = (0..n).map(|_| normal.sample(&mut driver_rng)).collect();

    let mut stocks = Vec::with_capacity(spec.n_stocks);
    let mut sums = vec![0.0f64; n];
    for s in 0..spec.n_stocks {
        let mut rng = stream(derive_seed(spec.seed, &[1 + s as u64]));
        let mut values = Vec::with_capacity(n);
        for t in 0..n {
            let noise = normal.sample(&mut rng);
            let copies = rng.gen_bool(spec.coupling);
            let r = if t == 0 || !copies {
                noise
            } else {
                noise.abs() * driver[t - 1].signum()
            };
            sums[t] += r;
            values.push((dates[t], r));
        }
        stocks.push(ReturnSeries::new(format!("stock_{s:02}"), values)?);
    }

    let index_values = (0..n)
        .map(|t| (dates[t], sums[t] / spec.n_stocks as f64 + driver[t]))
        .collect();
    Ok(ToyMarket {
        index: ReturnSeries::new("index", index_values)?,
        stocks,
    })
}
