//! Plug-in transfer entropy over delay embeddings.
//!
//! For a target process with states `i` and a source process with states
//! `j`, transfer entropy source→target is
//!
//! ```text
//! T = Σ p(i_next, i_hist, j_hist)
//!       · log2[ p(i_next | i_hist, j_hist) / p(i_next | i_hist) ]
//! ```
//!
//! with `i_hist` the k most recent target states and `j_hist` the l most
//! recent source states. Probabilities are maximum-likelihood relative
//! frequencies from an exact integer count table; `0 · log 0` terms drop
//! out. All entropies are reported in bits.
//!
//! The same quantity decomposes as `T = h_target - h_joint`, the drop in
//! conditional entropy of the next target state when the source history is
//! added to the conditioning set. Both `h` terms are evaluated on the one
//! count table (the marginal form), so the identity holds to rounding on
//! finite samples; a standalone [`conditional_entropy`] recounts over its
//! own window instead.

use crate::error::{Error, Result};
use crate::series::SymbolSeries;

/// History lengths (k for the target process, l for the source process).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingSpec {
    k: usize,
    l: usize,
}

impl EmbeddingSpec {
    pub fn new(k: usize, l: usize) -> Result<Self> {
        if k < 1 || l < 1 {
            return Err(Error::BadEmbedding { k, l });
        }
        Ok(Self { k, l })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// Longest history either process needs.
    pub fn span(&self) -> usize {
        self.k.max(self.l)
    }
}

/// Compensated summation; keeps the two-route transfer entropy identity
/// tight over tables with thousands of cells.
#[derive(Debug, Clone, Copy, Default)]
struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

/// Exact integer counts of `(next target state, target history, source
/// history)` tuples over the shared transition window.
///
/// Histories are stored most-recent-first and encoded base-`alphabet` into a
/// dense table; probabilities only materialize at entropy evaluation.
#[derive(Debug, Clone)]
pub struct EmbeddingCountTable {
    counts: Vec<u64>,
    total: u64,
    spec: EmbeddingSpec,
    target_alphabet: usize,
    source_alphabet: usize,
    /// target_alphabet^k
    target_hist_states: usize,
    /// source_alphabet^l
    source_hist_states: usize,
}

impl EmbeddingCountTable {
    fn flat(&self, next: usize, icode: usize, jcode: usize) -> usize {
        (next * self.target_hist_states + icode) * self.source_hist_states + jcode
    }

    pub fn spec(&self) -> EmbeddingSpec {
        self.spec
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn target_alphabet(&self) -> usize {
        self.target_alphabet
    }

    pub fn source_alphabet(&self) -> usize {
        self.source_alphabet
    }

    /// Count for one key; histories most-recent-first.
    pub fn count(&self, next: u8, target_hist: &[u8], source_hist: &[u8]) -> u64 {
        assert_eq!(target_hist.len(), self.spec.k);
        assert_eq!(source_hist.len(), self.spec.l);
        let icode = encode(target_hist, self.target_alphabet);
        let jcode = encode(source_hist, self.source_alphabet);
        self.counts[self.flat(next as usize, icode, jcode)]
    }

    /// Entropy of the next target state conditioned on the target history
    /// alone, marginalized from this table (bits).
    pub fn conditional_entropy_target(&self) -> f64 {
        let (marginal, hist_totals) = self.target_marginals();
        let total = self.total as f64;
        let mut h = KahanSum::default();
        for icode in 0..self.target_hist_states {
            let n_hist = hist_totals[icode];
            if n_hist == 0 {
                continue;
            }
            for next in 0..self.target_alphabet {
                let c = marginal[next * self.target_hist_states + icode];
                if c == 0 {
                    continue;
                }
                let p = c as f64 / total;
                h.add(-p * (c as f64 / n_hist as f64).log2());
            }
        }
        h.value()
    }

    /// Entropy of the next target state conditioned on both histories (bits).
    pub fn conditional_entropy_joint(&self) -> f64 {
        let cell_totals = self.cell_totals();
        let total = self.total as f64;
        let mut h = KahanSum::default();
        for icode in 0..self.target_hist_states {
            for jcode in 0..self.source_hist_states {
                let n_cell = cell_totals[icode * self.source_hist_states + jcode];
                if n_cell == 0 {
                    continue;
                }
                for next in 0..self.target_alphabet {
                    let c = self.counts[self.flat(next, icode, jcode)];
                    if c == 0 {
                        continue;
                    }
                    let p = c as f64 / total;
                    h.add(-p * (c as f64 / n_cell as f64).log2());
                }
            }
        }
        h.value()
    }

    /// Transfer entropy source→target with the decomposition terms.
    ///
    /// `value` is the direct sum over joint keys; `h_target - h_joint` is
    /// the independent second route and agrees with `value` to rounding.
    pub fn transfer_entropy(&self) -> TransferEntropyValue {
        let (marginal, hist_totals) = self.target_marginals();
        let cell_totals = self.cell_totals();
        let total = self.total as f64;

        let mut te = KahanSum::default();
        for icode in 0..self.target_hist_states {
            let n_hist = hist_totals[icode];
            if n_hist == 0 {
                continue;
            }
            for next in 0..self.target_alphabet {
                let c_marg = marginal[next * self.target_hist_states + icode];
                if c_marg == 0 {
                    continue;
                }
                let p_next_given_hist = c_marg as f64 / n_hist as f64;
                for jcode in 0..self.source_hist_states {
                    let c = self.counts[self.flat(next, icode, jcode)];
                    if c == 0 {
                        continue;
                    }
                    let n_cell = cell_totals[icode * self.source_hist_states + jcode];
                    let p_joint = c as f64 / total;
                    let p_next_given_both = c as f64 / n_cell as f64;
                    te.add(p_joint * (p_next_given_both / p_next_given_hist).log2());
                }
            }
        }

        TransferEntropyValue {
            value: te.value(),
            h_target: self.conditional_entropy_target(),
            h_joint: self.conditional_entropy_joint(),
            sample_count: self.total,
        }
    }

    /// counts summed over the source history, plus per-target-history totals
    fn target_marginals(&self) -> (Vec<u64>, Vec<u64>) {
        let mut marginal = vec![0u64; self.target_alphabet * self.target_hist_states];
        let mut hist_totals = vec![0u64; self.target_hist_states];
        for next in 0..self.target_alphabet {
            for icode in 0..self.target_hist_states {
                let mut s = 0u64;
                for jcode in 0..self.source_hist_states {
                    s += self.counts[self.flat(next, icode, jcode)];
                }
                marginal[next * self.target_hist_states + icode] = s;
                hist_totals[icode] += s;
            }
        }
        (marginal, hist_totals)
    }

    /// counts summed over the next state, per (target history, source history)
    fn cell_totals(&self) -> Vec<u64> {
        let mut cells = vec![0u64; self.target_hist_states * self.source_hist_states];
        for next in 0..self.target_alphabet {
            for icode in 0..self.target_hist_states {
                for jcode in 0..self.source_hist_states {
                    cells[icode * self.source_hist_states + jcode] +=
                        self.counts[self.flat(next, icode, jcode)];
                }
            }
        }
        cells
    }
}

/// Transfer entropy and its conditional-entropy decomposition, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferEntropyValue {
    /// Direct evaluation of the transfer entropy sum.
    pub value: f64,
    /// Conditional entropy of the next target state given the target history.
    pub h_target: f64,
    /// Conditional entropy given both histories.
    pub h_joint: f64,
    /// Number of transitions the estimate is built on.
    pub sample_count: u64,
}

fn encode(hist: &[u8], alphabet: usize) -> usize {
    // most recent state is the least significant digit
    let mut code = 0usize;
    for &s in hist.iter().rev() {
        code = code * alphabet + s as usize;
    }
    code
}

/// Hard cap on dense table cells; k,l beyond a few are statistically
/// useless at daily-data lengths anyway.
const MAX_TABLE_CELLS: u128 = 1 << 28;

fn table_dims(
    target_alphabet: usize,
    source_alphabet: usize,
    spec: EmbeddingSpec,
) -> Result<(usize, usize)> {
    let ti = (target_alphabet as u128).checked_pow(spec.k as u32);
    let si = (source_alphabet as u128).checked_pow(spec.l as u32);
    let cells = ti
        .zip(si)
        .and_then(|(a, b)| a.checked_mul(b))
        .and_then(|x| x.checked_mul(target_alphabet as u128));
    match cells {
        Some(c) if c <= MAX_TABLE_CELLS => Ok((ti.unwrap() as usize, si.unwrap() as usize)),
        Some(c) => Err(Error::EmbeddingTooLarge {
            cells: c,
            limit: MAX_TABLE_CELLS,
        }),
        None => Err(Error::EmbeddingTooLarge {
            cells: u128::MAX,
            limit: MAX_TABLE_CELLS,
        }),
    }
}

/// Count `(next, target history, source history)` transitions over the
/// shared window of two equal-length series.
///
/// With span `m = max(k, l)`, transitions run from `t = m-1` to the end, so
/// the table holds exactly `length - m` counts; at least two transitions
/// are required.
pub fn build_count_table(
    target: &SymbolSeries,
    source: &SymbolSeries,
    spec: EmbeddingSpec,
) -> Result<EmbeddingCountTable> {
    if target.len() != source.len() {
        return Err(Error::LengthMismatch {
            target_len: target.len(),
            source_len: source.len(),
        });
    }
    let len = target.len();
    let span = spec.span();
    if len < span + 2 {
        return Err(Error::InsufficientData { length: len, span });
    }

    let target_alphabet = target.alphabet_size();
    let source_alphabet = source.alphabet_size();
    let (target_hist_states, source_hist_states) =
        table_dims(target_alphabet, source_alphabet, spec)?;

    let mut table = EmbeddingCountTable {
        counts: vec![0u64; target_alphabet * target_hist_states * source_hist_states],
        total: 0,
        spec,
        target_alphabet,
        source_alphabet,
        target_hist_states,
        source_hist_states,
    };

    let i = target.states();
    let j = source.states();
    for t in (span - 1)..(len - 1) {
        let next = i[t + 1] as usize;
        let mut icode = 0usize;
        for back in (0..spec.k).rev() {
            icode = icode * target_alphabet + i[t - back] as usize;
        }
        let mut jcode = 0usize;
        for back in (0..spec.l).rev() {
            jcode = jcode * source_alphabet + j[t - back] as usize;
        }
        let idx = table.flat(next, icode, jcode);
        table.counts[idx] += 1;
        table.total += 1;
    }
    Ok(table)
}

/// Transfer entropy source→target (bits), plug-in estimate.
pub fn transfer_entropy(
    target: &SymbolSeries,
    source: &SymbolSeries,
    spec: EmbeddingSpec,
) -> Result<TransferEntropyValue> {
    Ok(build_count_table(target, source, spec)?.transfer_entropy())
}

/// Standalone conditional entropy of the next state given the last `k`
/// states (bits), counted over the series' own window of `length - k`
/// transitions.
pub fn conditional_entropy(series: &SymbolSeries, k: usize) -> Result<f64> {
    if k < 1 {
        return Err(Error::BadEmbedding { k, l: 1 });
    }
    let len = series.len();
    if len < k + 2 {
        return Err(Error::InsufficientData {
            length: len,
            span: k,
        });
    }
    let alphabet = series.alphabet_size();
    let (hist_states, _) = table_dims(alphabet, 2, EmbeddingSpec { k, l: 1 })?;
    let mut counts = vec![0u64; alphabet * hist_states];
    let mut hist_totals = vec![0u64; hist_states];
    let s = series.states();
    for t in (k - 1)..(len - 1) {
        let mut code = 0usize;
        for back in (0..k).rev() {
            code = code * alphabet + s[t - back] as usize;
        }
        counts[s[t + 1] as usize * hist_states + code] += 1;
        hist_totals[code] += 1;
    }
    let total = (len - k) as f64;
    let mut h = KahanSum::default();
    for code in 0..hist_states {
        if hist_totals[code] == 0 {
            continue;
        }
        for next in 0..alphabet {
            let c = counts[next * hist_states + code];
            if c == 0 {
                continue;
            }
            h.add(-(c as f64 / total) * (c as f64 / hist_totals[code] as f64).log2());
        }
    }
    Ok(h.value())
}

/// Conditional entropy of the next target state given both histories
/// (bits), over the shared window.
pub fn joint_conditional_entropy(
    target: &SymbolSeries,
    source: &SymbolSeries,
    spec: EmbeddingSpec,
) -> Result<f64> {
    Ok(build_count_table(target, source, spec)?.conditional_entropy_joint())
}

/// Explicit joint distribution over `(next target state, target history,
/// source history)`, for evaluating transfer entropy of a known process.
#[derive(Debug, Clone)]
pub struct JointProbabilityTable {
    probs: Vec<f64>,
    target_alphabet: usize,
    target_hist_states: usize,
    source_hist_states: usize,
}

impl JointProbabilityTable {
    /// Build from a function of `(next, target history code, source history
    /// code)`; history codes run over `target_alphabet^k` and
    /// `source_alphabet^l` with the most recent state as the least
    /// significant digit.
    pub fn from_fn(
        target_alphabet: usize,
        source_alphabet: usize,
        spec: EmbeddingSpec,
        f: impl Fn(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let (target_hist_states, source_hist_states) =
            table_dims(target_alphabet, source_alphabet, spec)?;
        let mut probs =
            Vec::with_capacity(target_alphabet * target_hist_states * source_hist_states);
        for next in 0..target_alphabet {
            for icode in 0..target_hist_states {
                for jcode in 0..source_hist_states {
                    probs.push(f(next, icode, jcode));
                }
            }
        }
        Self::new(
            target_alphabet,
            target_hist_states,
            source_hist_states,
            probs,
        )
    }

    fn new(
        target_alphabet: usize,
        target_hist_states: usize,
        source_hist_states: usize,
        probs: Vec<f64>,
    ) -> Result<Self> {
        let mut sum = KahanSum::default();
        for &p in &probs {
            if p.is_nan() || p < 0.0 {
                return Err(Error::NegativeProbability { value: p });
            }
            sum.add(p);
        }
        if (sum.value() - 1.0).abs() > 1e-12 {
            return Err(Error::NonNormalizedTable { sum: sum.value() });
        }
        Ok(Self {
            probs,
            target_alphabet,
            target_hist_states,
            source_hist_states,
        })
    }

    fn p(&self, next: usize, icode: usize, jcode: usize) -> f64 {
        self.probs[(next * self.target_hist_states + icode) * self.source_hist_states + jcode]
    }
}

/// Transfer entropy (bits) of an explicit joint distribution; the
/// brute-force oracle against which count-based estimates converge.
pub fn exact_transfer_entropy(joint: &JointProbabilityTable) -> f64 {
    let ta = joint.target_alphabet;
    let ti = joint.target_hist_states;
    let si = joint.source_hist_states;

    // marginals
    let mut p_hist = vec![0.0f64; ti]; // p(i_hist)
    let mut p_next_hist = vec![0.0f64; ta * ti]; // p(next, i_hist)
    let mut p_cell = vec![0.0f64; ti * si]; // p(i_hist, j_hist)
    for next in 0..ta {
        for icode in 0..ti {
            for jcode in 0..si {
                let p = joint.p(next, icode, jcode);
                p_hist[icode] += p;
                p_next_hist[next * ti + icode] += p;
                p_cell[icode * si + jcode] += p;
            }
        }
    }

    let mut te = KahanSum::default();
    for next in 0..ta {
        for icode in 0..ti {
            let pnh = p_next_hist[next * ti + icode];
            if pnh <= 0.0 {
                continue;
            }
            let p_next_given_hist = pnh / p_hist[icode];
            for jcode in 0..si {
                let p = joint.p(next, icode, jcode);
                if p <= 0.0 {
                    continue;
                }
                let p_next_given_both = p / p_cell[icode * si + jcode];
                te.add(p * (p_next_given_both / p_next_given_hist).log2());
            }
        }
    }
    te.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn symbols(states: &[u8], alphabet: usize) -> SymbolSeries {
        SymbolSeries::new("t", states.to_vec(), alphabet, None).unwrap()
    }

    fn spec(k: usize, l: usize) -> EmbeddingSpec {
        EmbeddingSpec::new(k, l).unwrap()
    }

    #[test]
    fn count_table_matches_hand_enumeration() {
        // transitions: (1,[0],[1]), (0,[1],[1]), (1,[0],[1])
        let i = symbols(&[0, 1, 0, 1], 2);
        let j = symbols(&[1, 1, 1, 1], 2);
        let table = build_count_table(&i, &j, spec(1, 1)).unwrap();
        assert_eq!(table.total(), 3);
        assert_eq!(table.count(1, &[0], &[1]), 2);
        assert_eq!(table.count(0, &[1], &[1]), 1);
        assert_eq!(table.count(1, &[1], &[1]), 0);
    }

    #[test]
    fn count_table_constant_source_occupies_single_history() {
        let i = symbols(&[0, 1, 2, 0, 1, 2, 0], 3);
        let j = symbols(&[2, 2, 2, 2, 2, 2, 2], 3);
        let table = build_count_table(&i, &j, spec(1, 1)).unwrap();
        for next in 0..3u8 {
            for hist in 0..3u8 {
                for jh in 0..2u8 {
                    assert_eq!(table.count(next, &[hist], &[jh]), 0);
                }
            }
        }
        assert_eq!(table.total(), 6);
    }

    #[test]
    fn count_table_rejects_insufficient_data() {
        let i = symbols(&[0, 1], 2);
        let j = symbols(&[0, 1], 2);
        let err = build_count_table(&i, &j, spec(2, 2)).unwrap_err();
        assert!(matches!(err, Error::InsufficientData { .. }));
    }

    #[test]
    fn count_table_rejects_length_mismatch() {
        let i = symbols(&[0, 1, 0], 2);
        let j = symbols(&[0, 1], 2);
        let err = build_count_table(&i, &j, spec(1, 1)).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { .. }));
    }

    #[test]
    fn window_total_is_length_minus_span() {
        let i = symbols(&[0, 1, 0, 1, 1, 0, 1, 0, 0, 1], 2);
        let j = symbols(&[1, 0, 0, 1, 0, 1, 1, 0, 1, 0], 2);
        for (k, l) in [(1, 1), (2, 1), (1, 3), (3, 2)] {
            let table = build_count_table(&i, &j, spec(k, l)).unwrap();
            assert_eq!(table.total() as usize, 10 - k.max(l));
        }
    }

    #[test]
    fn constant_source_gives_exact_zero() {
        let i = symbols(&[0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0], 2);
        let j = symbols(&[1; 12], 2);
        let te = transfer_entropy(&i, &j, spec(1, 1)).unwrap();
        assert_eq!(te.value, 0.0);
    }

    #[test]
    fn self_source_with_matching_history_gives_exact_zero() {
        let i = symbols(&[0, 2, 1, 0, 1, 2, 2, 0, 1, 0, 2, 1, 1, 0], 3);
        for k in 1..=3 {
            let te = transfer_entropy(&i, &i, spec(k, k)).unwrap();
            assert_eq!(te.value, 0.0, "k={k}");
        }
    }

    #[test]
    fn deterministic_alternation_has_zero_conditional_entropy() {
        let i = symbols(&[0, 1, 0, 1, 0, 1, 0, 1], 2);
        let h = conditional_entropy(&i, 1).unwrap();
        assert_eq!(h, 0.0);
    }

    #[test]
    fn constant_series_has_zero_conditional_entropy() {
        let i = symbols(&[1; 20], 3);
        assert_eq!(conditional_entropy(&i, 1).unwrap(), 0.0);
    }

    #[test]
    fn joint_conditional_entropy_zero_when_source_determines_next() {
        // target copies the source with a one-step delay
        let j: Vec<u8> = vec![0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 1];
        let mut i = vec![0u8];
        i.extend_from_slice(&j[..j.len() - 1]);
        let target = symbols(&i, 2);
        let source = symbols(&j, 2);
        let h = joint_conditional_entropy(&target, &source, spec(1, 1)).unwrap();
        assert_eq!(h, 0.0);
    }

    #[test]
    fn decomposition_identity_on_small_series() {
        let i = symbols(&[0, 1, 2, 1, 0, 2, 2, 1, 0, 1, 2, 0, 0, 1], 3);
        let j = symbols(&[1, 0, 1, 2, 2, 0, 1, 1, 2, 0, 2, 1, 0, 2], 3);
        for (k, l) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let te = transfer_entropy(&i, &j, spec(k, l)).unwrap();
            assert!(
                (te.value - (te.h_target - te.h_joint)).abs() <= 1e-12,
                "k={k} l={l}: {} vs {}",
                te.value,
                te.h_target - te.h_joint
            );
        }
    }

    #[test]
    fn exact_te_of_product_distribution_is_zero() {
        // p(next, ihist) * p(jhist) with arbitrary factors
        let p_ni = [0.1, 0.25, 0.3, 0.35];
        let p_j = [0.6, 0.4];
        let joint = JointProbabilityTable::from_fn(2, 2, spec(1, 1), |next, icode, jcode| {
            p_ni[next * 2 + icode] * p_j[jcode]
        })
        .unwrap();
        assert!(exact_transfer_entropy(&joint).abs() < 1e-15);
    }

    #[test]
    fn exact_te_of_uniform_table_is_zero() {
        let joint = JointProbabilityTable::from_fn(2, 2, spec(1, 1), |_, _, _| 1.0 / 8.0).unwrap();
        assert!(exact_transfer_entropy(&joint).abs() < 1e-15);
    }

    #[test]
    fn exact_te_of_noisy_copy_channel_matches_closed_form() {
        let eps = 0.1f64;
        // source uniform, target history uniform and independent,
        // next target = source flipped with probability eps
        let joint = JointProbabilityTable::from_fn(2, 2, spec(1, 1), |next, _icode, jcode| {
            let flip = if next == jcode { 1.0 - eps } else { eps };
            0.25 * flip
        })
        .unwrap();
        let expect = 1.0 - (-(eps * eps.log2()) - (1.0 - eps) * (1.0 - eps).log2());
        let got = exact_transfer_entropy(&joint);
        assert!((got - expect).abs() < 1e-12, "{got} vs {expect}");
        assert!((got - 0.5310).abs() < 1e-4);
    }

    #[test]
    fn joint_table_rejects_unnormalized_input() {
        let err = JointProbabilityTable::from_fn(2, 2, spec(1, 1), |_, _, _| 0.2).unwrap_err();
        assert!(matches!(err, Error::NonNormalizedTable { .. }));
    }

    #[test]
    fn joint_table_rejects_negative_entries() {
        let err =
            JointProbabilityTable::from_fn(
                2,
                2,
                spec(1, 1),
                |next, _, _| {
                    if next == 0 {
                        0.3
                    } else {
                        -0.05
                    }
                },
            )
            .unwrap_err();
        assert!(matches!(err, Error::NegativeProbability { .. }));
    }

    #[test]
    fn embedding_spec_rejects_zero_history() {
        assert!(EmbeddingSpec::new(0, 1).is_err());
        assert!(EmbeddingSpec::new(1, 0).is_err());
    }
}
