//! Error type shared across the library.

use chrono::NaiveDate;
use thiserror::Error;

/// Library result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{instrument}: nonpositive close {value} on {date}")]
    NonpositivePrice {
        instrument: String,
        date: NaiveDate,
        value: f64,
    },

    #[error("{instrument}: dates not strictly increasing at {date}")]
    NonIncreasingDates { instrument: String, date: NaiveDate },

    #[error("{instrument}: non-finite return on {date}")]
    NonFiniteReturn { instrument: String, date: NaiveDate },

    #[error("{instrument}: need at least {needed} observations, got {got}")]
    TooFewObservations {
        instrument: String,
        needed: usize,
        got: usize,
    },

    #[error("{instrument}: series is empty")]
    EmptySeries { instrument: String },

    #[error("negative discretization threshold {d}")]
    NegativeThreshold { d: f64 },

    #[error("state {state} out of range for alphabet of size {alphabet_size}")]
    StateOutOfRange { state: u8, alphabet_size: usize },

    #[error("alphabet size {alphabet_size} unsupported (need 2..=16)")]
    BadAlphabetSize { alphabet_size: usize },

    #[error("degenerate input: need at least {needed} distinct return values, got {got}")]
    DegenerateReturns { needed: usize, got: usize },

    #[error("embedding history lengths must be >= 1, got k={k}, l={l}")]
    BadEmbedding { k: usize, l: usize },

    #[error("embedding table would need {cells} cells (limit {limit})")]
    EmbeddingTooLarge { cells: u128, limit: u128 },

    #[error("series length mismatch: target has {target_len}, source has {source_len}")]
    LengthMismatch {
        target_len: usize,
        source_len: usize,
    },

    #[error("insufficient data: length {length} supports no transitions for history span {span} (need length >= {})", span + 2)]
    InsufficientData { length: usize, span: usize },

    #[error("probability table does not sum to 1 (sum = {sum})")]
    NonNormalizedTable { sum: f64 },

    #[error("probability table has negative entry {value}")]
    NegativeProbability { value: f64 },

    #[error("surrogate replicate count must be >= 1")]
    NoSurrogates,

    #[error("parameter {name} = {value} outside [{min}, {max}]")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("{instrument}: series length {got} does not match panel length {expected}")]
    MisalignedSeries {
        instrument: String,
        expected: usize,
        got: usize,
    },

    #[error("d grid is empty")]
    EmptyGrid,

    #[error("d grid entry {d} at position {index} is negative")]
    NegativeGridValue { index: usize, d: f64 },

    #[error("d grid must be strictly increasing (violated at position {index})")]
    NonAscendingGrid { index: usize },

    #[error("need at least {needed} flow results, got {got}")]
    InsufficientPairs { needed: usize, got: usize },

    #[error("histogram bin width must be positive, got {width}")]
    NonpositiveBinWidth { width: f64 },

    #[error("stock list is empty")]
    NoStocks,
}
