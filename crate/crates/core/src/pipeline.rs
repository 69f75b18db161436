//! Index↔stock flow analysis: per-pair transfer entropies with surrogate
//! baselines, band-width sweeps, cross-direction summaries, and histogram
//! tables.
//!
//! Randomness is consumed only by the surrogate replicates, and every
//! substream is content-addressed: the seed for a stock in direction
//! `dir` (0 = index→stock, 1 = stock→index) is
//! `derive_seed(cfg.seed, [id_tag(stock_id), dir])`, and a sweep first
//! derives `derive_seed(cfg.seed, [d.to_bits()])` per grid point.
//! Results therefore do not depend on stock order, grid composition, or
//! execution schedule, and sweep means reduce in stock-id order so they
//! are bit-identical under input permutations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::entropy::{transfer_entropy, EmbeddingSpec};
use crate::error::{Error, Result};
use crate::returns::discretize;
use crate::rng::{derive_seed, id_tag, stream};
use crate::series::{ReturnSeries, SymbolSeries};
use crate::surrogate::{surrogate_te, SurrogateConfig, SurrogateStats};

/// Resamples behind the bootstrap spread on the cross-direction
/// correlation.
pub const BOOTSTRAP_RESAMPLES: usize = 1000;

/// Both flow directions for one index–stock pair, with surrogate baselines.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowResult {
    pub stock_id: String,
    /// Discretization band width of the stock series (NaN when the symbols
    /// were not produced by thresholding).
    pub d: f64,
    pub te_index_to_stock: f64,
    pub te_stock_to_index: f64,
    pub surrogate_index_to_stock: SurrogateStats,
    pub surrogate_stock_to_index: SurrogateStats,
    pub sample_count: u64,
}

/// Mean transfer entropies across stocks as a function of the band width.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub d_grid: Vec<f64>,
    pub mean_te_i_to_s: Vec<f64>,
    pub mean_te_s_to_i: Vec<f64>,
    pub mean_shuffle_i_to_s: Vec<f64>,
    pub mean_shuffle_s_to_i: Vec<f64>,
}

/// One entry of a top-k ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedStock {
    pub stock_id: String,
    pub te: f64,
}

/// Relation between the two flow directions across the panel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossDirectionSummary {
    pub pearson_r: f64,
    /// Bootstrap spread of `pearson_r` over stock resamples.
    pub pearson_r_bootstrap_std: f64,
    pub n_pairs: usize,
    /// Fraction of stocks with strictly `te_stock_to_index >
    /// te_index_to_stock`.
    pub fraction_reverse_dominant: f64,
    pub top_k_i_to_s: Vec<RankedStock>,
    pub top_k_s_to_i: Vec<RankedStock>,
}

/// Fixed-width counting bins anchored at 0; negative values fall into
/// negative bin indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    bin_width: f64,
    counts: BTreeMap<i64, u64>,
}

impl Histogram {
    fn build(values: impl Iterator<Item = f64>, bin_width: f64) -> Self {
        let mut counts = BTreeMap::new();
        for v in values {
            let idx = (v / bin_width).floor() as i64;
            *counts.entry(idx).or_insert(0) += 1;
        }
        Self { bin_width, counts }
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    /// `(bin index, lower edge, upper edge, count)` in ascending bin order.
    pub fn bins(&self) -> impl Iterator<Item = (i64, f64, f64, u64)> + '_ {
        self.counts.iter().map(move |(&idx, &c)| {
            (
                idx,
                idx as f64 * self.bin_width,
                (idx + 1) as f64 * self.bin_width,
                c,
            )
        })
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Histograms of both directions and of their per-stock difference.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramSet {
    pub index_to_stock: Histogram,
    pub stock_to_index: Histogram,
    /// `te_index_to_stock - te_stock_to_index` per stock.
    pub difference: Histogram,
}

/// Mean flow gap between the directions with a surrogate-based scale for
/// judging it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionGap {
    pub mean_i_to_s: f64,
    pub mean_s_to_i: f64,
    /// `mean_i_to_s - mean_s_to_i`.
    pub gap: f64,
    /// Standard error of the gap under the surrogate spread:
    /// `sqrt(sum_s(std_i2s^2 + std_s2i^2)) / n_stocks`.
    pub surrogate_std_error: f64,
}

/// Both directions plus surrogates for every stock against the index;
/// output order matches input order.
pub fn pairwise_flow(
    index: &SymbolSeries,
    stocks: &[SymbolSeries],
    spec: EmbeddingSpec,
    cfg: &SurrogateConfig,
) -> Result<Vec<FlowResult>> {
    let mut flows = Vec::with_capacity(stocks.len());
    for stock in stocks {
        if stock.len() != index.len() {
            return Err(Error::MisalignedSeries {
                instrument: stock.instrument_id().to_string(),
                expected: index.len(),
                got: stock.len(),
            });
        }
        let te_i_to_s = transfer_entropy(stock, index, spec)?;
        let te_s_to_i = transfer_entropy(index, stock, spec)?;
        let pair_tag = id_tag(stock.instrument_id());
        let cfg_i_to_s = SurrogateConfig {
            seed: derive_seed(cfg.seed, &[pair_tag, 0]),
            ..*cfg
        };
        let cfg_s_to_i = SurrogateConfig {
            seed: derive_seed(cfg.seed, &[pair_tag, 1]),
            ..*cfg
        };
        flows.push(FlowResult {
            stock_id: stock.instrument_id().to_string(),
            d: stock.threshold().unwrap_or(f64::NAN),
            te_index_to_stock: te_i_to_s.value,
            te_stock_to_index: te_s_to_i.value,
            surrogate_index_to_stock: surrogate_te(stock, index, spec, &cfg_i_to_s)?,
            surrogate_stock_to_index: surrogate_te(index, stock, spec, &cfg_s_to_i)?,
            sample_count: te_i_to_s.sample_count,
        });
    }
    Ok(flows)
}

/// Discretize everything at each grid `d` and average the pairwise flows
/// across stocks.
pub fn d_sweep(
    index_returns: &ReturnSeries,
    stock_returns: &[ReturnSeries],
    d_grid: &[f64],
    spec: EmbeddingSpec,
    cfg: &SurrogateConfig,
) -> Result<SweepResult> {
    if d_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for (i, &d) in d_grid.iter().enumerate() {
        if !d.is_finite() || d < 0.0 {
            return Err(Error::NegativeGridValue { index: i, d });
        }
        if i > 0 && d_grid[i - 1] >= d {
            return Err(Error::NonAscendingGrid { index: i });
        }
    }
    if stock_returns.is_empty() {
        return Err(Error::NoStocks);
    }

    let n = stock_returns.len() as f64;
    let mut result = SweepResult {
        d_grid: d_grid.to_vec(),
        mean_te_i_to_s: Vec::with_capacity(d_grid.len()),
        mean_te_s_to_i: Vec::with_capacity(d_grid.len()),
        mean_shuffle_i_to_s: Vec::with_capacity(d_grid.len()),
        mean_shuffle_s_to_i: Vec::with_capacity(d_grid.len()),
    };
    for &d in d_grid {
        let index_symbols = discretize(index_returns, d)?;
        let stock_symbols: Vec<SymbolSeries> = stock_returns
            .iter()
            .map(|r| discretize(r, d))
            .collect::<Result<_>>()?;
        let sub_cfg = SurrogateConfig {
            seed: derive_seed(cfg.seed, &[d.to_bits()]),
            ..*cfg
        };
        let flows = pairwise_flow(&index_symbols, &stock_symbols, spec, &sub_cfg)?;
        // reduce in id order so the means are exact under permutations
        let mut ordered: Vec<&FlowResult> = flows.iter().collect();
        ordered.sort_by(|a, b| a.stock_id.cmp(&b.stock_id));
        let mean = |get: fn(&FlowResult) -> f64| -> f64 {
            ordered.iter().map(|f| get(f)).sum::<f64>() / n
        };
        result.mean_te_i_to_s.push(mean(|f| f.te_index_to_stock));
        result.mean_te_s_to_i.push(mean(|f| f.te_stock_to_index));
        result
            .mean_shuffle_i_to_s
            .push(mean(|f| f.surrogate_index_to_stock.mean));
        result
            .mean_shuffle_s_to_i
            .push(mean(|f| f.surrogate_stock_to_index.mean));
    }
    Ok(result)
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        // degenerate panel; correlation undefined, reported as 0
        return 0.0;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

/// Correlation, reverse-dominance fraction, and top-k rankings across the
/// panel.
///
/// Stocks are put in id order before any reduction, so the summary is
/// invariant under permutations of the input. Ranking ties break by
/// ascending stock id. The bootstrap resamples stocks with replacement
/// `BOOTSTRAP_RESAMPLES` times from the stream seeded with
/// `bootstrap_seed`.
pub fn cross_direction_summary(
    flows: &[FlowResult],
    k_top: usize,
    bootstrap_seed: u64,
) -> Result<CrossDirectionSummary> {
    if flows.len() < 2 {
        return Err(Error::InsufficientPairs {
            needed: 2,
            got: flows.len(),
        });
    }
    let mut ordered: Vec<&FlowResult> = flows.iter().collect();
    ordered.sort_by(|a, b| a.stock_id.cmp(&b.stock_id));
    let xs: Vec<f64> = ordered.iter().map(|f| f.te_index_to_stock).collect();
    let ys: Vec<f64> = ordered.iter().map(|f| f.te_stock_to_index).collect();
    let n = ordered.len();

    let pearson_r = pearson(&xs, &ys);

    let mut rng = stream(bootstrap_seed);
    let mut rs = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    let mut bx = vec![0.0; n];
    let mut by = vec![0.0; n];
    for _ in 0..BOOTSTRAP_RESAMPLES {
        for i in 0..n {
            let pick = rand::Rng::gen_range(&mut rng, 0..n);
            bx[i] = xs[pick];
            by[i] = ys[pick];
        }
        rs.push(pearson(&bx, &by));
    }
    let rmean = rs.iter().sum::<f64>() / rs.len() as f64;
    let rvar = rs.iter().map(|r| (r - rmean) * (r - rmean)).sum::<f64>() / rs.len() as f64;

    let reverse = ordered
        .iter()
        .filter(|f| f.te_stock_to_index > f.te_index_to_stock)
        .count();

    let top_k = |key: fn(&FlowResult) -> f64| -> Vec<RankedStock> {
        let mut ranked: Vec<&&FlowResult> = ordered.iter().collect();
        ranked.sort_by(|a, b| {
            key(b)
                .partial_cmp(&key(a))
                .unwrap()
                .then_with(|| a.stock_id.cmp(&b.stock_id))
        });
        ranked
            .into_iter()
            .take(k_top)
            .map(|f| RankedStock {
                stock_id: f.stock_id.clone(),
                te: key(f),
            })
            .collect()
    };

    Ok(CrossDirectionSummary {
        pearson_r,
        pearson_r_bootstrap_std: rvar.sqrt(),
        n_pairs: n,
        fraction_reverse_dominant: reverse as f64 / n as f64,
        top_k_i_to_s: top_k(|f| f.te_index_to_stock),
        top_k_s_to_i: top_k(|f| f.te_stock_to_index),
    })
}

/// Histogram the two directions and their per-stock difference.
pub fn te_histograms(flows: &[FlowResult], bin_width: f64) -> Result<HistogramSet> {
    if !bin_width.is_finite() || bin_width <= 0.0 {
        return Err(Error::NonpositiveBinWidth { width: bin_width });
    }
    Ok(HistogramSet {
        index_to_stock: Histogram::build(flows.iter().map(|f| f.te_index_to_stock), bin_width),
        stock_to_index: Histogram::build(flows.iter().map(|f| f.te_stock_to_index), bin_width),
        difference: Histogram::build(
            flows
                .iter()
                .map(|f| f.te_index_to_stock - f.te_stock_to_index),
            bin_width,
        ),
    })
}

/// Mean gap between the directions and its surrogate-derived standard
/// error.
pub fn direction_gap(flows: &[FlowResult]) -> Result<DirectionGap> {
    if flows.is_empty() {
        return Err(Error::InsufficientPairs { needed: 1, got: 0 });
    }
    let n = flows.len() as f64;
    let mean_i_to_s = flows.iter().map(|f| f.te_index_to_stock).sum::<f64>() / n;
    let mean_s_to_i = flows.iter().map(|f| f.te_stock_to_index).sum::<f64>() / n;
    let var_sum: f64 = flows
        .iter()
        .map(|f| {
            let a = f.surrogate_index_to_stock.std_dev;
            let b = f.surrogate_stock_to_index.std_dev;
            a * a + b * b
        })
        .sum();
    Ok(DirectionGap {
        mean_i_to_s,
        mean_s_to_i,
        gap: mean_i_to_s - mean_s_to_i,
        surrogate_std_error: var_sum.sqrt() / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surrogate::ShuffleTarget;

    fn stats(mean: f64, std_dev: f64) -> SurrogateStats {
        SurrogateStats {
            mean,
            std_dev,
            n_surrogates: 1,
            seed: 0,
        }
    }

    fn flow(id: &str, i2s: f64, s2i: f64) -> FlowResult {
        FlowResult {
            stock_id: id.to_string(),
            d: 0.01,
            te_index_to_stock: i2s,
            te_stock_to_index: s2i,
            surrogate_index_to_stock: stats(0.0, 0.0),
            surrogate_stock_to_index: stats(0.0, 0.0),
            sample_count: 10,
        }
    }

    #[test]
    fn empty_stock_list_gives_empty_flows() {
        let index = SymbolSeries::new("i", vec![0, 1, 2, 0, 1], 3, None).unwrap();
        let flows = pairwise_flow(
            &index,
            &[],
            EmbeddingSpec::new(1, 1).unwrap(),
            &SurrogateConfig::new(2, 1),
        )
        .unwrap();
        assert!(flows.is_empty());
    }

    #[test]
    fn misaligned_stock_is_named() {
        let index = SymbolSeries::new("i", vec![0, 1, 2, 0, 1], 3, None).unwrap();
        let bad = SymbolSeries::new("short", vec![0, 1], 3, None).unwrap();
        let err = pairwise_flow(
            &index,
            &[bad],
            EmbeddingSpec::new(1, 1).unwrap(),
            &SurrogateConfig::new(2, 1),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::MisalignedSeries { instrument, .. } if instrument == "short"
        ));
    }

    #[test]
    fn identical_directions_correlate_perfectly() {
        let flows = vec![
            flow("a", 0.1, 0.1),
            flow("b", 0.2, 0.2),
            flow("c", 0.35, 0.35),
        ];
        let s = cross_direction_summary(&flows, 2, 3).unwrap();
        assert!((s.pearson_r - 1.0).abs() < 1e-12);
        assert_eq!(s.fraction_reverse_dominant, 0.0);
        assert_eq!(s.n_pairs, 3);
    }

    #[test]
    fn opposite_two_point_ordering_anticorrelates() {
        let flows = vec![flow("a", 0.1, 0.4), flow("b", 0.3, 0.2)];
        let s = cross_direction_summary(&flows, 2, 3).unwrap();
        assert!((s.pearson_r + 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_flow_is_insufficient_for_summary() {
        let flows = vec![flow("a", 0.1, 0.2)];
        assert!(matches!(
            cross_direction_summary(&flows, 1, 0).unwrap_err(),
            Error::InsufficientPairs { .. }
        ));
    }

    #[test]
    fn top_k_breaks_ties_by_ascending_id() {
        let flows = vec![
            flow("beta", 0.3, 0.0),
            flow("alpha", 0.3, 0.1),
            flow("gamma", 0.5, 0.2),
        ];
        let s = cross_direction_summary(&flows, 3, 0).unwrap();
        let ids: Vec<&str> = s.top_k_i_to_s.iter().map(|r| r.stock_id.as_str()).collect();
        assert_eq!(ids, ["gamma", "alpha", "beta"]);
    }

    #[test]
    fn summary_is_invariant_under_stock_permutation() {
        let mut flows = vec![
            flow("a", 0.11, 0.02),
            flow("b", 0.25, 0.21),
            flow("c", 0.09, 0.15),
            flow("d", 0.31, 0.05),
        ];
        let s1 = cross_direction_summary(&flows, 2, 77).unwrap();
        flows.reverse();
        flows.swap(0, 2);
        let s2 = cross_direction_summary(&flows, 2, 77).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn histogram_mass_equals_flow_count() {
        let flows = vec![
            flow("a", 0.1, 0.2),
            flow("b", 0.1, 0.05),
            flow("c", 0.42, 0.3),
        ];
        let h = te_histograms(&flows, 0.05).unwrap();
        assert_eq!(h.index_to_stock.total(), 3);
        assert_eq!(h.stock_to_index.total(), 3);
        assert_eq!(h.difference.total(), 3);
        // difference of flow a is negative
        assert!(h.difference.bins().next().unwrap().0 < 0);
    }

    #[test]
    fn single_flow_occupies_one_bin_per_table() {
        let flows = vec![flow("a", 0.12, 0.03)];
        let h = te_histograms(&flows, 0.05).unwrap();
        assert_eq!(h.index_to_stock.bins().count(), 1);
        assert_eq!(h.stock_to_index.bins().count(), 1);
        assert_eq!(h.difference.bins().count(), 1);
    }

    #[test]
    fn equal_flows_occupy_single_bin() {
        let flows = vec![flow("a", 0.12, 0.03), flow("b", 0.12, 0.03)];
        let h = te_histograms(&flows, 0.05).unwrap();
        assert_eq!(h.index_to_stock.bins().count(), 1);
        assert_eq!(h.index_to_stock.bins().next().unwrap().3, 2);
    }

    #[test]
    fn nonpositive_bin_width_is_rejected() {
        assert!(te_histograms(&[flow("a", 0.1, 0.1)], 0.0).is_err());
        assert!(te_histograms(&[flow("a", 0.1, 0.1)], -0.1).is_err());
    }

    #[test]
    fn sweep_validates_grid() {
        let r = crate::series::ReturnSeries::new(
            "i",
            (0..10)
                .map(|i| {
                    (
                        chrono::NaiveDate::from_ymd_opt(2020, 1, 1).unwrap() + chrono::Days::new(i),
                        (i as f64 - 5.0) / 100.0,
                    )
                })
                .collect(),
        )
        .unwrap();
        let spec = EmbeddingSpec::new(1, 1).unwrap();
        let cfg = SurrogateConfig::new(1, 0);
        assert!(matches!(
            d_sweep(&r, std::slice::from_ref(&r), &[], spec, &cfg).unwrap_err(),
            Error::EmptyGrid
        ));
        assert!(matches!(
            d_sweep(&r, std::slice::from_ref(&r), &[0.01, 0.01], spec, &cfg).unwrap_err(),
            Error::NonAscendingGrid { index: 1 }
        ));
        assert!(matches!(
            d_sweep(&r, std::slice::from_ref(&r), &[-0.01, 0.01], spec, &cfg).unwrap_err(),
            Error::NegativeGridValue { index: 0, .. }
        ));
        assert!(matches!(
            d_sweep(&r, &[], &[0.01], spec, &cfg).unwrap_err(),
            Error::NoStocks
        ));
    }

    fn toy_returns(id: &str, phase: usize) -> crate::series::ReturnSeries {
        let dates: Vec<_> = (0..30)
            .map(|i| chrono::NaiveDate::from_ymd_opt(2020, 1, 1).unwrap() + chrono::Days::new(i))
            .collect();
        crate::series::ReturnSeries::new(
            id,
            dates
                .iter()
                .enumerate()
                .map(|(i, &d)| (d, ((i * i + phase) % 5) as f64 * 0.01 - 0.02))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn sweep_of_single_d_has_unit_length_lists() {
        let index = toy_returns("idx", 0);
        let stocks = vec![toy_returns("a", 1), toy_returns("b", 2)];
        let cfg = SurrogateConfig {
            n_surrogates: 2,
            seed: 4,
            shuffle: ShuffleTarget::SourceOnly,
        };
        let sw = d_sweep(
            &index,
            &stocks,
            &[0.01],
            EmbeddingSpec::new(1, 1).unwrap(),
            &cfg,
        )
        .unwrap();
        assert_eq!(sw.d_grid.len(), 1);
        assert_eq!(sw.mean_te_i_to_s.len(), 1);
        assert_eq!(sw.mean_shuffle_s_to_i.len(), 1);
    }

    #[test]
    fn sweep_means_match_independently_recomputed_flows() {
        let index = toy_returns("idx", 0);
        let stocks = vec![
            toy_returns("a", 1),
            toy_returns("b", 3),
            toy_returns("c", 4),
        ];
        let spec = EmbeddingSpec::new(1, 1).unwrap();
        let cfg = SurrogateConfig::new(3, 17);
        let d = 0.01f64;
        let sw = d_sweep(&index, &stocks, &[d], spec, &cfg).unwrap();

        let index_symbols = discretize(&index, d).unwrap();
        let stock_symbols: Vec<SymbolSeries> =
            stocks.iter().map(|r| discretize(r, d).unwrap()).collect();
        let sub_cfg = SurrogateConfig {
            seed: derive_seed(cfg.seed, &[d.to_bits()]),
            ..cfg
        };
        let flows = pairwise_flow(&index_symbols, &stock_symbols, spec, &sub_cfg).unwrap();
        let mean_i2s = flows.iter().map(|f| f.te_index_to_stock).sum::<f64>() / 3.0;
        let mean_shuffle = flows
            .iter()
            .map(|f| f.surrogate_index_to_stock.mean)
            .sum::<f64>()
            / 3.0;
        assert!((sw.mean_te_i_to_s[0] - mean_i2s).abs() < 1e-15);
        assert!((sw.mean_shuffle_i_to_s[0] - mean_shuffle).abs() < 1e-15);
    }

    #[test]
    fn permuting_stocks_permutes_flows_and_leaves_sweep_unchanged() {
        let index = toy_returns("idx", 0);
        let stocks = vec![
            toy_returns("a", 1),
            toy_returns("b", 3),
            toy_returns("c", 4),
        ];
        let mut permuted = stocks.clone();
        permuted.rotate_left(2);

        let spec = EmbeddingSpec::new(1, 1).unwrap();
        let cfg = SurrogateConfig::new(3, 23);
        let grid = [0.0, 0.01, 0.03];
        let sw_a = d_sweep(&index, &stocks, &grid, spec, &cfg).unwrap();
        let sw_b = d_sweep(&index, &permuted, &grid, spec, &cfg).unwrap();
        assert_eq!(sw_a, sw_b);

        let d = 0.01;
        let symbolize = |rs: &[crate::series::ReturnSeries]| -> Vec<SymbolSeries> {
            rs.iter().map(|r| discretize(r, d).unwrap()).collect()
        };
        let index_symbols = discretize(&index, d).unwrap();
        let flows_a = pairwise_flow(&index_symbols, &symbolize(&stocks), spec, &cfg).unwrap();
        let mut flows_b = pairwise_flow(&index_symbols, &symbolize(&permuted), spec, &cfg).unwrap();
        flows_b.rotate_right(2);
        assert_eq!(flows_a, flows_b);

        let sum_a = cross_direction_summary(&flows_a, 2, 5).unwrap();
        let sum_b = cross_direction_summary(&flows_b, 2, 5).unwrap();
        assert_eq!(sum_a, sum_b);
    }

    #[test]
    fn large_d_sends_all_means_to_zero() {
        let dates: Vec<_> = (0..40)
            .map(|i| chrono::NaiveDate::from_ymd_opt(2020, 1, 1).unwrap() + chrono::Days::new(i))
            .collect();
        let mk = |id: &str, mult: f64| {
            crate::series::ReturnSeries::new(
                id,
                dates
                    .iter()
                    .enumerate()
                    .map(|(i, &d)| (d, mult * ((i % 5) as f64 - 2.0) / 1000.0))
                    .collect(),
            )
            .unwrap()
        };
        let index = mk("idx", 1.0);
        let stocks = vec![mk("a", 1.3), mk("b", 0.7)];
        let cfg = SurrogateConfig::new(2, 9);
        // every |return| < 0.01, so d = 1.0 puts everything in state 1
        let sw = d_sweep(
            &index,
            &stocks,
            &[1.0],
            EmbeddingSpec::new(1, 1).unwrap(),
            &cfg,
        )
        .unwrap();
        assert_eq!(sw.mean_te_i_to_s[0], 0.0);
        assert_eq!(sw.mean_te_s_to_i[0], 0.0);
        assert_eq!(sw.mean_shuffle_i_to_s[0], 0.0);
        assert_eq!(sw.mean_shuffle_s_to_i[0], 0.0);
    }
}
