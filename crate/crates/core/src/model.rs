//! Closed-form performance models: degree evolution under peeling, ripple
//! increments, interdoping yields and the doping counts they imply, rank
//! probabilities for the final dense system, uncovered-symbol estimates,
//! the decodability density threshold, and repair-traffic cost arithmetic.
//!
//! Everything here is a pure function; the simulator uses these as
//! analytical reference curves and the test suite checks the Monte Carlo
//! results against them.

use serde::{Deserialize, Serialize};

use crate::codec::Policy;
use crate::degree::DegreeDistribution;

/// Cumulative log-factorial table: `table[n] = ln n!`. Poisson terms for
/// means in the thousands underflow any direct factorial, so all pmf
/// evaluation goes through logs.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n + 1);
    table.push(0.0);
    for i in 1..=n {
        table.push(table[i - 1] + (i as f64).ln());
    }
    table
}

/// Poisson pmf at `d` via the log-space form.
fn poisson(mean: f64, d: usize, lnf: &[f64]) -> f64 {
    if mean <= 0.0 {
        return if d == 0 { 1.0 } else { 0.0 };
    }
    (-mean + d as f64 * mean.ln() - lnf[d]).exp()
}

/// Total variation distance between two pmfs; entries past the shorter
/// vector count as zeros.
#[must_use]
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let n = p.len().max(q.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    (0..n).map(|i| (at(p, i) - at(q, i)).abs()).sum::<f64>() / 2.0
}

/// Distribution of a column's live degree after `ell` peeling steps, as a
/// table indexed by degree (index 0 = fully consumed).
///
/// Each step removes one of the `m = k − step` remaining rows uniformly, so
/// a degree-`d` column keeps its degree with probability `1 − d/m` and
/// drops to `d − 1` otherwise:
/// `P(A_{m−1}=d) = P(A_m=d)(1 − d/m) + P(A_m=d+1)(d+1)/m`.
///
/// # Panics
/// If `ell > k − 3`.
#[must_use]
pub fn column_degree_evolution(omega0: &DegreeDistribution, k: usize, ell: usize) -> Vec<f64> {
    assert!(ell + 3 <= k, "degree evolution needs ell <= k-3, got {ell} for k={k}");
    let mut pmf = vec![0.0; k + 1];
    for d in 1..=omega0.max_degree().min(k) {
        pmf[d] = omega0.pmf(d);
    }
    for step in 0..ell {
        let m = (k - step) as f64;
        let mut next = vec![0.0; k + 1];
        for d in 0..k - step {
            next[d] = pmf[d] * (1.0 - d as f64 / m) + pmf[d + 1] * (d + 1) as f64 / m;
        }
        pmf = next;
    }
    pmf
}

/// Distribution of the number of equations released by one peeling step at
/// time `ell`, with `delta` reception overhead: Poisson with intensity
/// `1 + delta·k/(k−ell)`, truncated at half the unprocessed symbol count
/// (the degree-two population that binomial released from) and
/// renormalized.
///
/// # Panics
/// If `ell >= k`.
#[must_use]
pub fn ripple_increment_pmf(k: usize, delta: f64, ell: usize) -> Vec<f64> {
    assert!(ell < k, "step {ell} out of range for k={k}");
    let intensity = 1.0 + delta * k as f64 / (k - ell) as f64;
    let unprocessed = ((k as f64 * (1.0 + delta)).ceil() as usize).saturating_sub(ell);
    let cap = (unprocessed / 2).max(1);
    let lnf = ln_factorials(cap);
    let mut pmf: Vec<f64> = (0..=cap).map(|d| poisson(intensity, d, &lnf)).collect();
    let mass: f64 = pmf.iter().sum();
    for v in &mut pmf {
        *v /= mass;
    }
    pmf
}

/// Distribution of the interdoping yield: how many symbols one doping
/// round decodes before the ripple runs dry again.
#[derive(Clone, Debug, Serialize)]
pub struct YieldPmf {
    pub k: usize,
    pub delta: f64,
    /// `probabilities[t] = P(Y = t)` for `t = 0..=k`.
    pub probabilities: Vec<f64>,
    /// Mass beyond the `t = k` truncation: rounds that decode the whole
    /// remainder. Folded back in by [`expected_yield`].
    pub tail_mass: f64,
}

/// Yield recursion for one doping round at Poisson release intensity
/// `intensity`. The round starts with the doped symbol alone in the ripple;
/// the yield is the step count until the ripple empties. With `η(0)` the
/// no-release probability and `℘^{(s)}` the `s`-fold convolved (Poisson,
/// mean `s·intensity`) release count:
///
/// `P(Y=t+1) = η(0)·(℘^{(t)}(t−1) − Σ_{i=1}^{t−1} P(Y=t−i)·℘^{(i)}(1+i))`.
fn yield_probabilities(k: usize, intensity: f64, lnf: &[f64]) -> Vec<f64> {
    let mut p = vec![0.0; k + 1];
    let eta0 = (-intensity).exp();
    // a[i] = ℘^{(i)}(1+i), b[t] = ℘^{(t)}(t−1)
    let mut a = vec![0.0; k];
    let mut b = vec![0.0; k];
    for i in 1..k {
        a[i] = poisson(intensity * i as f64, i + 1, lnf);
        b[i] = poisson(intensity * i as f64, i - 1, lnf);
    }
    for t in 1..k {
        let mut s = 0.0;
        for i in 1..t {
            s += p[t - i] * a[i];
        }
        // cancellation can leave harmless negative dust
        p[t + 1] = (eta0 * (b[t] - s)).max(0.0);
    }
    p
}

/// Yield pmf for the first doping round (`T = 0`, so the release intensity
/// is `1 + delta`). With `delta = 0` every round is distributed alike.
///
/// # Panics
/// If `k < 3` or `delta < 0`.
#[must_use]
pub fn interdoping_yield_pmf(k: usize, delta: f64) -> YieldPmf {
    assert!(k >= 3, "yield model needs k >= 3");
    assert!(delta >= 0.0, "negative overhead");
    let lnf = ln_factorials(k + 1);
    let probabilities = yield_probabilities(k, 1.0 + delta, &lnf);
    let tail_mass = (1.0 - probabilities.iter().sum::<f64>()).max(0.0);
    YieldPmf {
        k,
        delta,
        probabilities,
        tail_mass,
    }
}

/// Censored mean of the yield: `Σ t·P(Y=t) + k·(tail mass)`. A round whose
/// yield the truncated recursion never terminated decodes the whole
/// remaining block, so the tail counts at `t = k`.
#[must_use]
pub fn expected_yield(pmf: &YieldPmf) -> f64 {
    let m1: f64 = pmf
        .probabilities
        .iter()
        .enumerate()
        .map(|(t, &p)| t as f64 * p)
        .sum();
    m1 + pmf.tail_mass * pmf.k as f64
}

fn expected_yield_at(k: usize, intensity: f64, lnf: &[f64]) -> f64 {
    let p = yield_probabilities(k, intensity, lnf);
    let m1: f64 = p.iter().enumerate().map(|(t, &x)| t as f64 * x).sum();
    m1 + (1.0 - p.iter().sum::<f64>()).max(0.0) * k as f64
}

/// Expected doping count for a block of `k`: the renewal count of yield
/// rounds covering all `k` symbols.
///
/// At `delta = 0` rounds are identically distributed and this is exactly
/// `k / E[Y]`. With overhead the release intensity rises every round
/// (`1 + delta·k/(k−T)` after `T` decoded symbols), so rounds are walked
/// with `T` advanced by each round's expected yield, the last one counted
/// fractionally; the same walk at `delta = 0` collapses back to `k / E[Y]`.
#[must_use]
pub fn expected_dopings(k: usize, delta: f64) -> f64 {
    assert!(k >= 3, "doping model needs k >= 3");
    assert!(delta >= 0.0, "negative overhead");
    let lnf = ln_factorials(k + 1);
    if delta == 0.0 {
        return k as f64 / expected_yield_at(k, 1.0, &lnf);
    }
    let kf = k as f64;
    let mut decoded = 0.0;
    let mut rounds = 0.0;
    loop {
        let intensity = 1.0 + delta * kf / (kf - decoded);
        let ey = expected_yield_at(k, intensity, &lnf);
        if decoded + ey >= kf {
            return rounds + (kf - decoded) / ey;
        }
        decoded += ey;
        rounds += 1.0;
    }
}

/// Probability that a random binary matrix with `p` rows and `p + m`
/// columns has full row rank: `Π_{i=0}^{p−1} (1 − 2^{−(p+m−i)})`.
///
/// # Panics
/// If `p == 0`.
#[must_use]
pub fn full_rank_prob(p: usize, m: usize) -> f64 {
    assert!(p >= 1, "rank probability needs at least one row");
    (0..p)
        .map(|i| 1.0 - 0.5f64.powi((p + m - i) as i32))
        .product()
}

/// Expected count of source symbols no received equation covers:
/// `k·exp(−(1+delta)·mean_degree)`. The mean degree is `ln k` for the
/// soliton and about 4.5 for the fixed raptor table.
#[must_use]
pub fn uncovered_estimate(k: usize, delta: f64, mean_degree: f64) -> f64 {
    assert!(mean_degree > 0.0, "mean degree must be positive");
    k as f64 * (-(1.0 + delta) * mean_degree).exp()
}

/// Unit-element density a `k`-column random binary matrix needs for full
/// rank with probability approaching one: `(ln k + x)/k`, with `x` a
/// caller-chosen slack (0 for the bare threshold).
#[must_use]
pub fn density_threshold(k: usize, x: f64) -> f64 {
    assert!(k >= 2, "threshold needs k >= 2");
    ((k as f64).ln() + x) / k as f64
}

/// Whether a matrix's unit density clears [`density_threshold`].
#[must_use]
pub fn density_above_threshold(density: f64, k: usize, x: f64) -> bool {
    density >= density_threshold(k, x)
}

/// Inputs to the repair-traffic cost model. All costs are in bit
/// equivalents; the address part of one repair is `log2 k`, the payload is
/// `s·log2 q`, and `feedback_bits` is the fixed price of one round trip.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CostModelParams {
    pub k: usize,
    pub s_bits: usize,
    pub q: usize,
    pub feedback_bits: f64,
    /// Fraction of the block waiting on repair, `M = D/k`.
    pub undecoded_fraction: f64,
}

impl CostModelParams {
    /// Parameters for a decode that doped `d` symbols.
    #[must_use]
    pub fn for_dopings(k: usize, s_bits: usize, q: usize, feedback_bits: f64, d: usize) -> Self {
        CostModelParams {
            k,
            s_bits,
            q,
            feedback_bits,
            undecoded_fraction: d as f64 / k as f64,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RepairCost {
    /// None when nothing was repaired.
    pub per_symbol_bits: Option<f64>,
    pub total_bits: f64,
}

/// Repair traffic for `dopings` repaired symbols. Sequential repair pays
/// the feedback delay on every symbol; postponed repair batches the round
/// trip, amortizing it over the `M·k` symbols of the request.
#[must_use]
pub fn repair_cost(params: &CostModelParams, policy: Policy, dopings: usize) -> RepairCost {
    if dopings == 0 {
        return RepairCost {
            per_symbol_bits: None,
            total_bits: 0.0,
        };
    }
    let base = (params.k as f64).log2() + params.s_bits as f64 * (params.q as f64).log2();
    let per = match policy {
        Policy::Sequential => base + params.feedback_bits,
        Policy::Postponed => {
            base + params.feedback_bits / (params.undecoded_fraction * params.k as f64)
        }
    };
    RepairCost {
        per_symbol_bits: Some(per),
        total_bits: per * dopings as f64,
    }
}

/// Broadcast-cell dimensioning inputs: `clients` receivers each missing an
/// expected `loss_fraction` of a `k`-symbol block, served by
/// `k_s_design` broadcast symbols plus per-user repair bounded by
/// `per_user_repair_bound` (both as fractions of `k`).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct UseCaseInputs {
    pub clients: usize,
    pub loss_fraction: f64,
    pub k: usize,
    pub k_s_design: usize,
    pub per_user_repair_bound: f64,
}

/// Cell-level overhead totals, as fractions of the block size.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct UseCaseSummary {
    /// Unicast repair with no fountain coding: every client's losses are
    /// retransmitted individually.
    pub no_fec_repair_overhead: f64,
    /// Extra broadcast symbols beyond `k`.
    pub broadcast_overhead: f64,
    /// Worst-case per-user doping summed over the cell.
    pub repair_overhead: f64,
    /// Broadcast plus repair.
    pub with_fec_total_overhead: f64,
}

#[must_use]
pub fn use_case(inputs: &UseCaseInputs) -> UseCaseSummary {
    let clients = inputs.clients as f64;
    let broadcast_overhead = inputs.k_s_design as f64 / inputs.k as f64 - 1.0;
    let repair_overhead = clients * inputs.per_user_repair_bound;
    UseCaseSummary {
        no_fec_repair_overhead: clients * inputs.loss_fraction,
        broadcast_overhead,
        repair_overhead,
        with_fec_total_overhead: broadcast_overhead + repair_overhead,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitlinalg::DenseBitMatrix;
    use crate::degree::ideal_soliton;

    #[test]
    fn evolution_with_zero_steps_returns_the_start() {
        let k = 50;
        let omega = ideal_soliton(k);
        let pmf = column_degree_evolution(&omega, k, 0);
        for d in 1..=k {
            assert!((pmf[d] - omega.pmf(d)).abs() < 1e-15);
        }
    }

    /// The soliton is stationary under peeling: after `ell` steps the live
    /// degree pmf is the original scaled by the survival factor `(k−ell)/k`
    /// on degrees two and up.
    #[test]
    fn evolution_keeps_the_soliton_shape() {
        let k = 100;
        let omega = ideal_soliton(k);
        for ell in [1, 10, 50, 97] {
            let pmf = column_degree_evolution(&omega, k, ell);
            let scale = (k - ell) as f64 / k as f64;
            for d in 2..=(k - ell) {
                let want = scale / (d * (d - 1)) as f64;
                assert!(
                    (pmf[d] - want).abs() < 1e-10,
                    "ell={ell} d={d}: {} vs {want}",
                    pmf[d]
                );
            }
            for d in (k - ell + 1)..=k {
                assert_eq!(pmf[d], 0.0, "support must shrink past {}", k - ell);
            }
        }
    }

    #[test]
    fn evolution_one_step_from_a_point_mass() {
        // degree 3 of 5 rows: stays with prob 2/5, drops with prob 3/5
        let omega = DegreeDistribution::from_pmf(vec![0.0, 0.0, 1.0]);
        let pmf = column_degree_evolution(&omega, 5, 1);
        assert!((pmf[2] - 0.6).abs() < 1e-15);
        assert!((pmf[3] - 0.4).abs() < 1e-15);
        assert_eq!(pmf[4], 0.0);
    }

    #[test]
    #[should_panic(expected = "ell <= k-3")]
    fn evolution_rejects_too_many_steps() {
        let _ = column_degree_evolution(&ideal_soliton(10), 10, 8);
    }

    #[test]
    fn ripple_increment_is_unit_poisson_without_overhead() {
        let pmf = ripple_increment_pmf(1000, 0.0, 400);
        assert!((pmf[0] - (-1.0f64).exp()).abs() < 1e-12);
        assert!((pmf[1] - (-1.0f64).exp()).abs() < 1e-12);
        let mean: f64 = pmf.iter().enumerate().map(|(d, &p)| d as f64 * p).sum();
        assert!((mean - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ripple_increment_intensity_grows_with_progress() {
        let pmf = ripple_increment_pmf(1000, 0.1, 500);
        let mean: f64 = pmf.iter().enumerate().map(|(d, &p)| d as f64 * p).sum();
        assert!((mean - 1.2).abs() < 1e-9, "mean {mean}");
        let mass: f64 = pmf.iter().sum();
        assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn yield_pmf_basic_shape() {
        for k in [1000usize, 5000] {
            let pmf = interdoping_yield_pmf(k, 0.0);
            assert_eq!(pmf.probabilities[0], 0.0);
            assert_eq!(pmf.probabilities[1], 0.0);
            assert!((pmf.probabilities[2] - (-2.0f64).exp()).abs() < 1e-12);
            assert!(pmf.probabilities.iter().all(|&p| p >= 0.0));
            let mass: f64 = pmf.probabilities.iter().sum();
            assert!(mass <= 1.0 + 1e-9, "mass {mass}");
            assert!((pmf.tail_mass - (1.0 - mass)).abs() < 1e-12);
        }
    }

    #[test]
    fn expected_yield_of_a_point_mass() {
        let mut probabilities = vec![0.0; 11];
        probabilities[5] = 1.0;
        let pmf = YieldPmf {
            k: 10,
            delta: 0.0,
            probabilities,
            tail_mass: 0.0,
        };
        assert_eq!(expected_yield(&pmf), 5.0);
    }

    /// Values frozen from a direct evaluation of the recursion; the k=1000
    /// count sits at about one percent of the block as the large-k analysis
    /// predicts.
    #[test]
    fn doping_counts_without_overhead() {
        let ey = expected_yield(&interdoping_yield_pmf(1000, 0.0));
        assert!((ey - 97.628).abs() < 0.01, "E[Y] = {ey}");
        let d1000 = expected_dopings(1000, 0.0);
        assert!((d1000 - 10.243).abs() < 0.01, "E[D] = {d1000}");
        assert!(d1000 > 8.0 && d1000 < 13.0);
        let d5000 = expected_dopings(5000, 0.0);
        assert!((d5000 - 22.486).abs() < 0.01, "E[D] = {d5000}");
        // about half a percent of the block
        assert!(d5000 / 5000.0 > 0.003 && d5000 / 5000.0 < 0.006);
    }

    #[test]
    fn doping_fraction_shrinks_with_block_size() {
        let f: Vec<f64> = [1000, 2000, 5000]
            .iter()
            .map(|&k| expected_dopings(k, 0.0) / k as f64)
            .collect();
        assert!(f[0] > f[1] && f[1] > f[2], "{f:?}");
    }

    #[test]
    fn doping_counts_with_overhead() {
        let d = expected_dopings(1000, 0.1);
        assert!((d - 2.2731).abs() < 0.01, "E[D] = {d}");
        let d05 = expected_dopings(1000, 0.05);
        assert!((d05 - 3.4013).abs() < 0.01, "E[D] = {d05}");
        let d20 = expected_dopings(1000, 0.2);
        assert!((d20 - 1.5941).abs() < 0.01, "E[D] = {d20}");
        // more overhead, fewer dopings
        assert!(d20 < d && d < d05 && d05 < expected_dopings(1000, 0.0));
    }

    /// Brute-force oracle: enumerate every binary matrix of the given shape
    /// and count the full-row-rank ones.
    fn full_rank_fraction(rows: usize, cols: usize) -> f64 {
        let cells = rows * cols;
        let mut hits = 0usize;
        for bits in 0..(1usize << cells) {
            let mut m = DenseBitMatrix::zeros(rows, cols);
            for c in 0..cells {
                if bits >> c & 1 == 1 {
                    m.set(c / cols, c % cols, true);
                }
            }
            if m.rank() == rows {
                hits += 1;
            }
        }
        hits as f64 / (1usize << cells) as f64
    }

    #[test]
    fn full_rank_prob_matches_exhaustive_enumeration() {
        assert!((full_rank_prob(1, 0) - 0.5).abs() < 1e-15);
        assert!((full_rank_prob(2, 0) - full_rank_fraction(2, 2)).abs() < 1e-12);
        assert!((full_rank_prob(2, 0) - 0.375).abs() < 1e-15);
        assert!((full_rank_prob(2, 1) - full_rank_fraction(2, 3)).abs() < 1e-12);
        assert!((full_rank_prob(3, 1) - full_rank_fraction(3, 4)).abs() < 1e-12);
        assert!((full_rank_prob(4, 2) - full_rank_fraction(4, 6)).abs() < 1e-12);
    }

    #[test]
    fn full_rank_prob_grows_with_extra_columns() {
        // square case converges to the infinite product ~0.288788
        assert!((full_rank_prob(30, 0) - 0.288788).abs() < 1e-5);
        for m in 0..12 {
            assert!(full_rank_prob(30, m + 1) > full_rank_prob(30, m));
        }
        assert!(full_rank_prob(30, 10) > 0.999);
    }

    #[test]
    fn uncovered_counts_for_both_families() {
        // soliton mean degree ln k makes k·e^{−ln k} exactly one symbol
        let u = uncovered_estimate(1000, 0.0, 1000f64.ln());
        assert!((u - 1.0).abs() < 1e-9);
        // the fixed raptor table saturates near one percent of the block
        let u = uncovered_estimate(1000, 0.0, 4.5);
        assert!((u / 1000.0 - 0.0111).abs() < 0.0002);
        assert!(uncovered_estimate(1000, 10.0, 4.5) < 1e-15 * 1000.0);
    }

    #[test]
    fn density_threshold_and_predicate() {
        let t = density_threshold(1000, 0.0);
        assert!((t - 1000f64.ln() / 1000.0).abs() < 1e-15);
        assert!((t - 0.006908).abs() < 1e-6);
        // soliton density ln k/k sits right at the bare threshold
        assert!(density_above_threshold(1000f64.ln() / 1000.0, 1000, 0.0));
        assert!(!density_above_threshold(1000f64.ln() / 1000.0, 1000, 0.5));
        // the raptor table's constant mean degree falls below it
        assert!(!density_above_threshold(4.5 / 1000.0, 1000, 0.0));
    }

    #[test]
    fn repair_cost_examples() {
        let params = CostModelParams::for_dopings(1024, 8000, 2, 1e6, 10);
        let post = repair_cost(&params, Policy::Postponed, 10);
        assert!((post.per_symbol_bits.unwrap() - 108_010.0).abs() < 1e-9);
        assert!((post.total_bits - 1_080_100.0).abs() < 1e-6);
        let seq = repair_cost(&params, Policy::Sequential, 10);
        assert!(seq.per_symbol_bits.unwrap() > post.per_symbol_bits.unwrap());

        // no feedback delay, no difference
        let free = CostModelParams::for_dopings(1024, 8000, 2, 0.0, 10);
        let a = repair_cost(&free, Policy::Sequential, 10);
        let b = repair_cost(&free, Policy::Postponed, 10);
        assert_eq!(a.per_symbol_bits, b.per_symbol_bits);

        let none = repair_cost(&params, Policy::Sequential, 0);
        assert!(none.per_symbol_bits.is_none());
        assert_eq!(none.total_bits, 0.0);
    }

    #[test]
    fn use_case_cell_arithmetic() {
        let summary = use_case(&UseCaseInputs {
            clients: 50,
            loss_fraction: 0.05,
            k: 1000,
            k_s_design: 1150,
            per_user_repair_bound: 0.005,
        });
        assert!((summary.no_fec_repair_overhead - 2.5).abs() < 1e-12);
        assert!((summary.broadcast_overhead - 0.15).abs() < 1e-12);
        assert!((summary.repair_overhead - 0.25).abs() < 1e-12);
        assert!((summary.with_fec_total_overhead - 0.40).abs() < 1e-12);

        let empty = use_case(&UseCaseInputs {
            clients: 0,
            loss_fraction: 0.05,
            k: 1000,
            k_s_design: 1000,
            per_user_repair_bound: 0.005,
        });
        assert_eq!(empty.no_fec_repair_overhead, 0.0);
        assert_eq!(empty.with_fec_total_overhead, 0.0);
    }

    #[test]
    fn total_variation_basics() {
        assert_eq!(total_variation(&[1.0, 0.0], &[1.0, 0.0]), 0.0);
        assert_eq!(total_variation(&[1.0, 0.0], &[0.0, 1.0]), 1.0);
        assert!((total_variation(&[0.5, 0.5], &[0.25, 0.25, 0.5]) - 0.5).abs() < 1e-15);
    }
}
