//! Shuffle surrogates: permutation baselines that keep marginal state
//! frequencies and destroy temporal order.
//!
//! By default only the source series of the measured direction is shuffled,
//! so exactly the source's predictive contribution is removed while the
//! target's own dynamics stay intact; [`ShuffleTarget::Both`] is available
//! for sensitivity checks. Replicate `r` draws from the stream derived as
//! `derive_seed(seed, [r])`, making results independent of execution order.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::entropy::{transfer_entropy, EmbeddingSpec};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, stream};
use crate::series::SymbolSeries;

/// Which series get shuffled per replicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ShuffleTarget {
    /// Shuffle the source series only.
    #[default]
    SourceOnly,
    /// Shuffle source and target independently.
    Both,
}

/// Surrogate replication settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurrogateConfig {
    pub n_surrogates: usize,
    pub seed: u64,
    pub shuffle: ShuffleTarget,
}

impl SurrogateConfig {
    pub fn new(n_surrogates: usize, seed: u64) -> Self {
        Self {
            n_surrogates,
            seed,
            shuffle: ShuffleTarget::SourceOnly,
        }
    }
}

/// Mean and spread of the transfer entropy over shuffle replicates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurrogateStats {
    pub mean: f64,
    pub std_dev: f64,
    pub n_surrogates: usize,
    pub seed: u64,
}

/// Uniform random permutation of the states; the state multiset is
/// preserved exactly.
pub fn shuffle_series(series: &SymbolSeries, rng: &mut impl Rng) -> Result<SymbolSeries> {
    if series.is_empty() {
        return Err(Error::EmptySeries {
            instrument: series.instrument_id().to_string(),
        });
    }
    let mut states = series.states().to_vec();
    states.shuffle(rng);
    Ok(series.with_states(states))
}

/// Transfer entropy source→target recomputed over shuffle replicates.
pub fn surrogate_te(
    target: &SymbolSeries,
    source: &SymbolSeries,
    spec: EmbeddingSpec,
    cfg: &SurrogateConfig,
) -> Result<SurrogateStats> {
    if cfg.n_surrogates < 1 {
        return Err(Error::NoSurrogates);
    }
    // fail on bad inputs before burning replicates
    transfer_entropy(target, source, spec)?;

    let mut values = Vec::with_capacity(cfg.n_surrogates);
    for r in 0..cfg.n_surrogates {
        let mut rng = stream(derive_seed(cfg.seed, &[r as u64]));
        let shuffled_source = shuffle_series(source, &mut rng)?;
        let te = match cfg.shuffle {
            ShuffleTarget::SourceOnly => transfer_entropy(target, &shuffled_source, spec)?,
            ShuffleTarget::Both => {
                let shuffled_target = shuffle_series(target, &mut rng)?;
                transfer_entropy(&shuffled_target, &shuffled_source, spec)?
            }
        };
        values.push(te.value);
    }

    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Ok(SurrogateStats {
        mean,
        std_dev: var.sqrt(),
        n_surrogates: cfg.n_surrogates,
        seed: cfg.seed,
    })
}
