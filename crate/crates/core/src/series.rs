//! Core series types: dated close prices, log returns, discrete state
//! sequences, and empirical state distributions.

use chrono::NaiveDate;

use crate::error::{Error, Result};

/// Largest alphabet the dense count tables are sized for.
pub const MAX_ALPHABET: usize = 16;

/// Dated close prices for one instrument, the raw ingestion unit.
///
/// Dates are strictly increasing and every close is positive; both are
/// enforced at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    instrument_id: String,
    observations: Vec<(NaiveDate, f64)>,
}

impl PriceSeries {
    pub fn new(
        instrument_id: impl Into<String>,
        observations: Vec<(NaiveDate, f64)>,
    ) -> Result<Self> {
        let instrument_id = instrument_id.into();
        for (i, &(date, close)) in observations.iter().enumerate() {
            if !close.is_finite() || close <= 0.0 {
                return Err(Error::NonpositivePrice {
                    instrument: instrument_id,
                    date,
                    value: close,
                });
            }
            if i > 0 && observations[i - 1].0 >= date {
                return Err(Error::NonIncreasingDates {
                    instrument: instrument_id,
                    date,
                });
            }
        }
        Ok(Self {
            instrument_id,
            observations,
        })
    }

    pub fn instrument_id(&self) -> &str {
        &self.instrument_id
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

    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.observations.iter().map(|&(d, _)| d)
    }

    /// Restrict the series to the given date set, preserving order.
    pub fn restrict_to(&self, keep: &std::collections::BTreeSet<NaiveDate>) -> Result<Self> {
        let observations = self
            .observations
            .iter()
            .filter(|(d, _)| keep.contains(d))
            .copied()
            .collect();
        Self::new(self.instrument_id.clone(), observations)
    }
}

/// Daily log returns aligned on trading days; dates carry the later day of
/// each price pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    instrument_id: String,
    values: Vec<(NaiveDate, f64)>,
}

impl ReturnSeries {
    pub fn new(instrument_id: impl Into<String>, values: Vec<(NaiveDate, f64)>) -> Result<Self> {
        let instrument_id = instrument_id.into();
        for (i, &(date, x)) in values.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFiniteReturn {
                    instrument: instrument_id,
                    date,
                });
            }
            if i > 0 && values[i - 1].0 >= date {
                return Err(Error::NonIncreasingDates {
                    instrument: instrument_id,
                    date,
                });
            }
        }
        Ok(Self {
            instrument_id,
            values,
        })
    }

    pub fn instrument_id(&self) -> &str {
        &self.instrument_id
    }

    pub fn values(&self) -> &[(NaiveDate, f64)] {
        &self.values
    }

    pub fn returns(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().map(|&(_, x)| x)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Discretized states over a finite alphabet.
///
/// `threshold` records the coarse-graining width `d` when the series came
/// out of [`crate::returns::discretize`]; series generated directly in state
/// space carry `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSeries {
    instrument_id: String,
    states: Vec<u8>,
    alphabet_size: usize,
    threshold: Option<f64>,
}

impl SymbolSeries {
    pub fn new(
        instrument_id: impl Into<String>,
        states: Vec<u8>,
        alphabet_size: usize,
        threshold: Option<f64>,
    ) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&alphabet_size) {
            return Err(Error::BadAlphabetSize { alphabet_size });
        }
        if let Some(d) = threshold {
            if !d.is_finite() || d < 0.0 {
                return Err(Error::NegativeThreshold { d });
            }
        }
        if let Some(&state) = states.iter().find(|&&s| (s as usize) >= alphabet_size) {
            return Err(Error::StateOutOfRange {
                state,
                alphabet_size,
            });
        }
        Ok(Self {
            instrument_id: instrument_id.into(),
            states,
            alphabet_size,
            threshold,
        })
    }

    pub fn instrument_id(&self) -> &str {
        &self.instrument_id
    }

    pub fn states(&self) -> &[u8] {
        &self.states
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn threshold(&self) -> Option<f64> {
        self.threshold
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Same metadata, different states. Used by the shufflers.
    pub(crate) fn with_states(&self, states: Vec<u8>) -> Self {
        Self {
            instrument_id: self.instrument_id.clone(),
            states,
            alphabet_size: self.alphabet_size,
            threshold: self.threshold,
        }
    }
}

/// Empirical relative frequency of each state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateDistribution {
    probabilities: Vec<f64>,
}

impl StateDistribution {
    pub(crate) fn from_counts(counts: &[u64]) -> Self {
        let total: u64 = counts.iter().sum();
        let probabilities = counts.iter().map(|&c| c as f64 / total as f64).collect();
        Self { probabilities }
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn p(&self, state: usize) -> f64 {
        self.probabilities[state]
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}
