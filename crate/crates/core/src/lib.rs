//! Directed information flow between a composite index and a panel of
//! stocks, measured with plug-in transfer entropy over coarse-grained
//! daily log returns.
//!
//! The pieces, in pipeline order:
//!
//! - [`returns`]: log returns and three-state coarse graining at band
//!   width `d`, plus the equiprobable band width.
//! - [`entropy`]: exact-integer delay-embedding count tables, transfer
//!   entropy and its conditional-entropy decomposition, and an exact
//!   evaluator for explicit joint distributions.
//! - [`surrogate`]: seeded shuffle baselines that keep marginal state
//!   frequencies.
//! - [`synthetic`]: planted-truth generators (noisy-copy channel with
//!   closed-form transfer entropy, lag-coupled toy market).
//! - [`pipeline`]: per-stock flows, band-width sweeps, cross-direction
//!   summaries, histogram tables.
//!
//! Everything is deterministic given the input data and a single `u64`
//! seed; see [`rng`] for how substreams are derived.

pub mod entropy;
pub mod error;
pub mod pipeline;
pub mod returns;
pub mod rng;
pub mod series;
pub mod surrogate;
pub mod synthetic;

pub use entropy::{
    build_count_table, conditional_entropy, exact_transfer_entropy, joint_conditional_entropy,
    transfer_entropy, EmbeddingCountTable, EmbeddingSpec, JointProbabilityTable,
    TransferEntropyValue,
};
pub use error::{Error, Result};
pub use pipeline::{
    cross_direction_summary, d_sweep, direction_gap, pairwise_flow, te_histograms,
    CrossDirectionSummary, DirectionGap, FlowResult, Histogram, HistogramSet, RankedStock,
    SweepResult,
};
pub use returns::{
    discretize, equiprobable_threshold, log_returns, state_probabilities, RETURN_ALPHABET,
};
pub use series::{PriceSeries, ReturnSeries, StateDistribution, SymbolSeries};
pub use surrogate::{shuffle_series, surrogate_te, ShuffleTarget, SurrogateConfig, SurrogateStats};
pub use synthetic::{
    analytic_noisy_copy_te, gen_noisy_copy, gen_toy_market, NoisyCopyPair, NoisyCopySpec,
    ToyMarket, ToyMarketSpec,
};
