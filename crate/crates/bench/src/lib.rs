//! Shared fixtures for the benchmarks: panel-of-stocks scale data (a few
//! thousand trading days) matching what the pipeline sees in practice.

use teflow::{
    discretize, equiprobable_threshold, gen_noisy_copy, gen_toy_market, NoisyCopySpec,
    ReturnSeries, SymbolSeries, ToyMarketSpec,
};

/// A coupled symbol pair of the given length (flow runs source→target).
pub fn coupled_pair(len: usize) -> (SymbolSeries, SymbolSeries) {
    let pair = gen_noisy_copy(&NoisyCopySpec::new(0.1, len, 1).unwrap());
    (pair.target, pair.source)
}

/// Toy-market returns: index plus `n_stocks` stocks over `len` days.
pub fn market_returns(n_stocks: usize, len: usize) -> (ReturnSeries, Vec<ReturnSeries>) {
    let market = gen_toy_market(&ToyMarketSpec::new(n_stocks, 0.8, 0.01, len, 2).unwrap()).unwrap();
    (market.index, market.stocks)
}

/// The market discretized at each series' equiprobable band width.
pub fn market_symbols(n_stocks: usize, len: usize) -> (SymbolSeries, Vec<SymbolSeries>) {
    let (index, stocks) = market_returns(n_stocks, len);
    let index_symbols = discretize(&index, equiprobable_threshold(&index).unwrap()).unwrap();
    let stock_symbols = stocks
        .iter()
        .map(|s| discretize(s, equiprobable_threshold(s).unwrap()).unwrap())
        .collect();
    (index_symbols, stock_symbols)
}
