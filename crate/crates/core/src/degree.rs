//! Output-degree distributions and column sampling.
//!
//! Two families are provided: the ideal soliton and the fixed degree table
//! of the standardized Raptor LT generator (RFC 5053 §5.4.4.2). A column is
//! sampled in up to two parts: an upper part whose degree follows the
//! chosen family over the first `k − p` rows, and — when `p > 0` reserved
//! dense rows are in play — a lower part with degree uniform on `{1..p}`
//! over the last `p` rows.

use rand::Rng;
use serde::{Deserialize, Serialize};

/// A distribution over degrees `1..=max_degree`, with a precomputed CDF for
/// inverse-transform sampling.
#[derive(Clone, Debug)]
pub struct DegreeDistribution {
    /// `pmf[i]` is the probability of degree `i + 1`.
    pmf: Vec<f64>,
    /// `cdf[i] = Σ pmf[..=i]`.
    cdf: Vec<f64>,
}

impl DegreeDistribution {
    /// Builds from a pmf table over degrees `1..=pmf.len()`.
    ///
    /// # Panics
    /// If the table is empty, has negative entries, or does not sum to 1
    /// within 1e-12.
    #[must_use]
    pub fn from_pmf(pmf: Vec<f64>) -> Self {
        assert!(!pmf.is_empty(), "empty degree table");
        assert!(pmf.iter().all(|&x| x >= 0.0), "negative probability");
        let mut cdf = Vec::with_capacity(pmf.len());
        let mut acc = 0.0;
        for &x in &pmf {
            acc += x;
            cdf.push(acc);
        }
        assert!(
            (acc - 1.0).abs() < 1e-12,
            "degree table sums to {acc}, not 1"
        );
        DegreeDistribution { pmf, cdf }
    }

    #[inline]
    #[must_use]
    pub fn max_degree(&self) -> usize {
        self.pmf.len()
    }

    /// Probability of degree `d` (zero outside the support).
    #[inline]
    #[must_use]
    pub fn pmf(&self, d: usize) -> f64 {
        if d >= 1 && d <= self.pmf.len() {
            self.pmf[d - 1]
        } else {
            0.0
        }
    }

    /// The pmf table, index `i` holding degree `i + 1`.
    #[must_use]
    pub fn probabilities(&self) -> &[f64] {
        &self.pmf
    }

    #[must_use]
    pub fn mean(&self) -> f64 {
        self.pmf
            .iter()
            .enumerate()
            .map(|(i, &x)| (i + 1) as f64 * x)
            .sum()
    }

    /// Inverse-CDF draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.sample_truncated(rng, self.max_degree())
    }

    /// Draw conditioned on degree ≤ `max` (renormalized truncation).
    ///
    /// # Panics
    /// If the truncated support has zero mass.
    pub fn sample_truncated<R: Rng + ?Sized>(&self, rng: &mut R, max: usize) -> usize {
        let cap_idx = max.min(self.pmf.len());
        assert!(cap_idx >= 1, "truncation below the support");
        let cap = self.cdf[cap_idx - 1];
        assert!(cap > 0.0, "truncated support has zero mass");
        let u = rng.gen_range(0.0..cap);
        // Smallest degree whose cumulative probability exceeds u.
        self.cdf.partition_point(|&c| c <= u) + 1
    }

    /// The distribution conditioned on degree ≤ `max`.
    #[must_use]
    pub fn truncated(&self, max: usize) -> Self {
        let cap_idx = max.min(self.pmf.len());
        assert!(cap_idx >= 1, "truncation below the support");
        let mass: f64 = self.pmf[..cap_idx].iter().sum();
        assert!(mass > 0.0, "truncated support has zero mass");
        let pmf = self.pmf[..cap_idx].iter().map(|&x| x / mass).collect();
        Self::from_pmf(pmf)
    }
}

/// Ideal soliton over `1..=k`: `ρ(1) = 1/k`, `ρ(d) = 1/(d(d−1))`.
///
/// # Panics
/// If `k < 2`.
#[must_use]
pub fn ideal_soliton(k: usize) -> DegreeDistribution {
    assert!(k >= 2, "ideal soliton needs k >= 2, got {k}");
    let mut pmf = vec![0.0; k];
    pmf[0] = 1.0 / k as f64;
    for d in 2..=k {
        pmf[d - 1] = 1.0 / (d as f64 * (d - 1) as f64);
    }
    // The telescoping sum 1/k + Σ 1/(d(d−1)) is exactly 1 in real
    // arithmetic; from_pmf re-checks the floating-point version.
    DegreeDistribution::from_pmf(pmf)
}

/// Degree table of the standardized Raptor LT degree generator
/// (RFC 5053 §5.4.4.2): `(degree, threshold)` with thresholds out of 2^20.
/// A degree `d` has probability `(f[d] − f[d<sub>prev</sub>]) / 2^20`.
pub const RAPTOR_DEGREE_TABLE: [(usize, u32); 7] = [
    (1, 10_241),
    (2, 491_582),
    (3, 712_794),
    (4, 831_695),
    (10, 948_446),
    (11, 1_032_189),
    (40, 1_048_576),
];

/// The fixed Raptor LT degree distribution. The table does not depend on
/// `k`; the argument only gates sensible use (degree 40 must fit).
///
/// # Panics
/// If `k < 64`.
#[must_use]
pub fn raptor_lt(k: usize) -> DegreeDistribution {
    assert!(k >= 64, "raptor table needs k >= 64, got {k}");
    let mut pmf = vec![0.0; 40];
    let mut prev = 0u32;
    for &(d, f) in &RAPTOR_DEGREE_TABLE {
        pmf[d - 1] = f64::from(f - prev) / f64::from(1u32 << 20);
        prev = f;
    }
    DegreeDistribution::from_pmf(pmf)
}

/// Distribution family selector used by configs and wire headers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    IdealSoliton,
    RaptorLt,
}

impl Family {
    /// The upper-part distribution for block size `k` with `p` reserved
    /// rows. The soliton is built over the `k − p` peelable rows so its
    /// support matches the sampling domain; the raptor table is fixed and
    /// gets truncated at draw time if `k − p < 40`.
    #[must_use]
    pub fn distribution(self, k: usize, p: usize) -> DegreeDistribution {
        assert!(p < k, "reserved rows must leave room: p={p}, k={k}");
        match self {
            Family::IdealSoliton => ideal_soliton(k - p),
            Family::RaptorLt => raptor_lt(k),
        }
    }

    /// Short label for report rows.
    #[must_use]
    pub fn label(self) -> &'static str {
        match self {
            Family::IdealSoliton => "is",
            Family::RaptorLt => "rlt",
        }
    }

    /// Single-byte id used in container headers.
    #[must_use]
    pub fn wire_id(self) -> u8 {
        match self {
            Family::IdealSoliton => 0,
            Family::RaptorLt => 1,
        }
    }

    #[must_use]
    pub fn from_wire_id(id: u8) -> Option<Self> {
        match id {
            0 => Some(Family::IdealSoliton),
            1 => Some(Family::RaptorLt),
            _ => None,
        }
    }
}

/// Degrees of one sampled column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColumnDegreeSpec {
    /// Count over the first `k − p` rows; always ≥ 1.
    pub upper_degree: usize,
    /// Count over the last `p` rows; zero exactly when `p = 0`.
    pub lower_degree: usize,
}

/// One sampled column: sorted row indices, split at the reserved boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledColumn {
    /// Ascending indices in `0..k−p`.
    pub upper: Vec<u32>,
    /// Ascending indices in `k−p..k`; empty iff `p = 0`.
    pub lower: Vec<u32>,
}

impl SampledColumn {
    #[must_use]
    pub fn spec(&self) -> ColumnDegreeSpec {
        ColumnDegreeSpec {
            upper_degree: self.upper.len(),
            lower_degree: self.lower.len(),
        }
    }

    /// All row indices, ascending (upper then lower is already sorted).
    #[must_use]
    pub fn all_rows(&self) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.upper.len() + self.lower.len());
        v.extend_from_slice(&self.upper);
        v.extend_from_slice(&self.lower);
        v
    }
}

/// Samples one column: upper degree from `dist` truncated to `{1..k−p}`
/// with indices uniform without replacement over the first `k − p` rows;
/// when `p > 0`, a lower degree uniform on `{1..p}` with indices uniform
/// without replacement over the last `p` rows.
///
/// # Panics
/// If `p >= k`.
pub fn sample_column<R: Rng + ?Sized>(
    dist: &DegreeDistribution,
    k: usize,
    p: usize,
    rng: &mut R,
) -> SampledColumn {
    assert!(p < k, "reserved rows must leave room: p={p}, k={k}");
    let domain = k - p;
    let d = dist.sample_truncated(rng, domain);
    let upper = sample_distinct(rng, d, domain, 0);
    let lower = if p == 0 {
        Vec::new()
    } else {
        let ld = rng.gen_range(1..=p);
        sample_distinct(rng, ld, p, domain as u32)
    };
    SampledColumn { upper, lower }
}

/// `count` distinct values uniform over `offset..offset+domain`, ascending.
/// Floyd's algorithm: O(count) draws regardless of the domain size.
fn sample_distinct<R: Rng + ?Sized>(
    rng: &mut R,
    count: usize,
    domain: usize,
    offset: u32,
) -> Vec<u32> {
    debug_assert!(count >= 1 && count <= domain);
    let mut chosen = std::collections::HashSet::with_capacity(count * 2);
    for j in (domain - count)..domain {
        let t = rng.gen_range(0..=j) as u32;
        if !chosen.insert(t) {
            chosen.insert(j as u32);
        }
    }
    let mut v: Vec<u32> = chosen.into_iter().map(|x| x + offset).collect();
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    fn tv(a: &[f64], b: &[f64]) -> f64 {
        let n = a.len().max(b.len());
        0.5 * (0..n)
            .map(|i| {
                (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs()
            })
            .sum::<f64>()
    }

    #[test]
    fn soliton_small_table_is_exact() {
        let d = ideal_soliton(4);
        let expect = [0.25, 0.5, 1.0 / 6.0, 1.0 / 12.0];
        for (i, &e) in expect.iter().enumerate() {
            assert!((d.pmf(i + 1) - e).abs() < 1e-15, "degree {}", i + 1);
        }
    }

    #[test]
    fn soliton_degree_two_is_half() {
        assert!((ideal_soliton(1000).pmf(2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn soliton_normalizes_for_many_k() {
        for k in [2, 3, 64, 1000, 5000] {
            let sum: f64 = ideal_soliton(k).probabilities().iter().sum();
            assert!((sum - 1.0).abs() < 1e-12, "k={k}: {sum}");
        }
    }

    #[test]
    fn soliton_mean_is_harmonic_sum() {
        for k in [100, 1000, 5000] {
            let mean = ideal_soliton(k).mean();
            // 1·1/k + Σ_{d=2..k} d/(d(d−1)) = 1/k + H_{k−1}
            let harmonic: f64 = (1..k).map(|j| 1.0 / j as f64).sum();
            let exact = 1.0 / k as f64 + harmonic;
            assert!((mean - exact).abs() < 1e-9, "k={k}");
            if k >= 1000 {
                // Grows like the logarithm: ln k + γ tracks the harmonic sum.
                let log_scale = (k as f64).ln() + EULER_GAMMA;
                assert!((mean - log_scale).abs() / log_scale < 0.05, "k={k}");
            }
        }
    }

    #[test]
    fn raptor_table_mass_and_mean() {
        let d = raptor_lt(1000);
        let sum: f64 = d.probabilities().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        // Exact rational mean of the embedded table.
        let exact = 4_856_326.0 / 1_048_576.0;
        assert!((d.mean() - exact).abs() < 1e-12);
        assert!((d.mean() - 4.5).abs() < 0.2, "mean {}", d.mean());
    }

    #[test]
    fn raptor_table_ignores_k() {
        assert_eq!(
            raptor_lt(1000).probabilities(),
            raptor_lt(5000).probabilities()
        );
    }

    #[test]
    #[should_panic(expected = "k >= 2")]
    fn soliton_rejects_tiny_k() {
        let _ = ideal_soliton(1);
    }

    #[test]
    fn sampling_histogram_matches_pmf() {
        let cases: [(&str, DegreeDistribution); 2] = [
            ("soliton", ideal_soliton(100)),
            ("raptor", raptor_lt(100)),
        ];
        for (name, dist) in cases {
            let mut rng = seeding::stream(0xD15F, 0);
            let n = 1_000_000usize;
            let mut hist = vec![0.0; dist.max_degree()];
            for _ in 0..n {
                hist[dist.sample(&mut rng) - 1] += 1.0;
            }
            for h in &mut hist {
                *h /= n as f64;
            }
            let dtv = tv(&hist, dist.probabilities());
            assert!(dtv < 0.005, "{name}: TV {dtv}");
        }
    }

    #[test]
    fn truncated_sampling_matches_renormalized_pmf() {
        let dist = raptor_lt(100);
        let cut = 11;
        let target = dist.truncated(cut);
        let mut rng = seeding::stream(0xD15F, 1);
        let n = 200_000usize;
        let mut hist = vec![0.0; cut];
        for _ in 0..n {
            let d = dist.sample_truncated(&mut rng, cut);
            assert!(d <= cut);
            hist[d - 1] += 1.0;
        }
        for h in &mut hist {
            *h /= n as f64;
        }
        assert!(tv(&hist, target.probabilities()) < 0.005);
    }

    #[test]
    fn column_without_reserved_rows_is_pure_upper() {
        let dist = ideal_soliton(50);
        let mut rng = seeding::stream(0xC01, 0);
        for _ in 0..200 {
            let col = sample_column(&dist, 50, 0, &mut rng);
            assert!(col.lower.is_empty());
            assert_eq!(col.spec().lower_degree, 0);
            assert!(!col.upper.is_empty());
        }
    }

    #[test]
    fn column_indices_are_sorted_distinct_and_in_range() {
        let k = 200;
        let p = 14;
        let dist = Family::IdealSoliton.distribution(k, p);
        let mut rng = seeding::stream(0xC01, 1);
        for _ in 0..2000 {
            let col = sample_column(&dist, k, p, &mut rng);
            let all = col.all_rows();
            assert!(all.windows(2).all(|w| w[0] < w[1]), "sorted and distinct");
            assert!(col.upper.iter().all(|&r| (r as usize) < k - p));
            assert!(col
                .lower
                .iter()
                .all(|&r| (r as usize) >= k - p && (r as usize) < k));
            assert!(!col.lower.is_empty(), "p > 0 always adds a lower part");
        }
    }

    #[test]
    fn lower_degree_mean_is_uniform_mean() {
        let k = 1000;
        let p = 31;
        let dist = Family::IdealSoliton.distribution(k, p);
        let mut rng = seeding::stream(0xC01, 2);
        let n = 100_000;
        let total: usize = (0..n)
            .map(|_| sample_column(&dist, k, p, &mut rng).lower.len())
            .sum();
        let mean = total as f64 / n as f64;
        assert!((mean - 16.0).abs() < 0.5, "mean {mean}");
    }

    #[test]
    fn soliton_degree_two_fraction_of_columns() {
        let k = 1000;
        let dist = Family::IdealSoliton.distribution(k, 0);
        let mut rng = seeding::stream(0xC01, 3);
        let n = 100_000;
        let twos = (0..n)
            .filter(|_| sample_column(&dist, k, 0, &mut rng).upper.len() == 2)
            .count();
        let frac = twos as f64 / n as f64;
        assert!((frac - 0.5).abs() < 0.01, "fraction {frac}");
    }

    #[test]
    fn family_wire_ids_roundtrip() {
        for f in [Family::IdealSoliton, Family::RaptorLt] {
            assert_eq!(Family::from_wire_id(f.wire_id()), Some(f));
        }
        assert_eq!(Family::from_wire_id(9), None);
    }
}
