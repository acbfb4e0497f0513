//! Monte Carlo harness: erasure channel, broadcast-and-repair trial loop,
//! experiment presets, and CSV/JSON reporting.
//!
//! A trial generates a random block, encodes it, pushes every packet
//! through the wire format (and optionally an erasure channel), decodes
//! with a chosen policy, and services repair requests from an in-process
//! oracle that also does its traffic over the wire format. Experiments
//! fan trials out over rayon with per-trial derived seeds, so results are
//! reproducible regardless of scheduling.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitlinalg::BitVector;
use crate::codec::{
    self, encode, wire, CodeParams, DecodeMode, DopingMode, DopingSource, EncodedSymbol, Policy,
};
use crate::degree::Family;
use crate::model;
use crate::seeding;

/// Drops each packet independently with probability `epsilon`.
///
/// # Panics
/// If `epsilon` is outside `[0, 1)`.
pub fn erasure_channel<T, R: Rng + ?Sized>(packets: Vec<T>, epsilon: f64, rng: &mut R) -> Vec<T> {
    assert!(
        (0.0..1.0).contains(&epsilon),
        "erasure probability {epsilon} outside [0, 1)"
    );
    packets
        .into_iter()
        .filter(|_| rng.gen::<f64>() >= epsilon)
        .collect()
}

/// How many encoded symbols reach the decoder.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Delivery {
    /// Deliver exactly `k_s` symbols, loss-free. Figure axes are indexed
    /// by collected symbols, so presets use this.
    ExactBudget,
    /// Broadcast `n` symbols through the erasure channel.
    Channel { n: usize, epsilon: f64 },
}

/// One decoding trial, fully specified.
#[derive(Clone, Debug, Serialize)]
pub struct TrialConfig {
    pub params: CodeParams,
    pub family: Family,
    pub delivery: Delivery,
    pub policy: Policy,
    pub doping_mode: DopingMode,
    /// Round-trip price of one repair request, in bit equivalents.
    pub feedback_bits: f64,
    pub seed: u64,
}

/// Per-trial measurements.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialReport {
    pub received: usize,
    pub d: usize,
    pub d_min: usize,
    pub i: usize,
    pub u: usize,
    /// Rank deficiency of the final system `D`.
    pub deficiency: usize,
    /// Decoding cost per delivered symbol.
    pub complexity: f64,
    /// Repair traffic in bit equivalents, address + payload + feedback.
    pub repair_bits: f64,
    /// Repair round trips.
    pub requests: u64,
    pub peel_xors: u64,
}

/// Serves repair requests from the true block, moving each request and
/// response through the wire format and accounting its cost: every round
/// trip costs the feedback delay once plus `log2 k + s·log2 q` per symbol.
pub struct RepairOracle<'a> {
    block: &'a [BitVector],
    k: usize,
    s_bits: usize,
    feedback_bits: f64,
    pub requests: u64,
    pub symbols_served: u64,
    pub total_bits: f64,
}

impl<'a> RepairOracle<'a> {
    #[must_use]
    pub fn new(block: &'a [BitVector], s_bits: usize, feedback_bits: f64) -> Self {
        RepairOracle {
            block,
            k: block.len(),
            s_bits,
            feedback_bits,
            requests: 0,
            symbols_served: 0,
            total_bits: 0.0,
        }
    }
}

impl DopingSource for RepairOracle<'_> {
    fn fetch(&mut self, rows: &[u32]) -> Result<Vec<BitVector>, String> {
        if rows.is_empty() {
            return Ok(Vec::new());
        }
        let mut buf = Vec::new();
        wire::write_doping_request(
            &mut buf,
            &wire::DopingRequest {
                block_id: 0,
                rows: rows.to_vec(),
            },
        )
        .map_err(|e| e.to_string())?;
        let (request, _) = wire::read_doping_request(&buf).map_err(|e| e.to_string())?;

        let mut values = Vec::with_capacity(request.rows.len());
        for &row in &request.rows {
            let value = self
                .block
                .get(row as usize)
                .ok_or_else(|| format!("repair request for row {row} outside block of {}", self.k))?;
            values.push(value.clone());
        }
        let mut resp_buf = Vec::new();
        wire::write_doping_response(
            &mut resp_buf,
            &wire::DopingResponse {
                block_id: request.block_id,
                rows: request.rows.clone(),
                values,
            },
        )
        .map_err(|e| e.to_string())?;
        let (response, _) =
            wire::read_doping_response(&resp_buf, self.s_bits).map_err(|e| e.to_string())?;

        self.requests += 1;
        self.symbols_served += rows.len() as u64;
        let per_symbol = (self.k as f64).log2() + self.s_bits as f64;
        self.total_bits += rows.len() as f64 * per_symbol + self.feedback_bits;
        Ok(response.values)
    }
}

/// Runs one trial end to end and checks bit-exact recovery.
///
/// # Panics
/// If the decoded block differs from the original: with a repair oracle
/// attached, every trial must recover.
#[must_use]
pub fn run_trial(config: &TrialConfig) -> TrialReport {
    let params = &config.params;
    let mut block_rng = seeding::stream(config.seed, 1);
    let block: Vec<BitVector> = (0..params.k)
        .map(|_| BitVector::random(&mut block_rng, params.s_bits))
        .collect();

    let session_seed = seeding::derive(config.seed, 2);
    let sent = match config.delivery {
        Delivery::ExactBudget => params.k_s,
        Delivery::Channel { n, .. } => n,
    };
    let symbols = encode(&block, params, config.family, 0, sent, session_seed)
        .expect("encode with validated params");

    // Every packet crosses the wire format.
    let mut buf = Vec::new();
    for sym in &symbols {
        wire::write_packet(
            &mut buf,
            &wire::Packet {
                block_id: 0,
                k: params.k as u32,
                p: params.p as u16,
                symbol: sym.clone(),
            },
        )
        .expect("symbol fits the packet format");
    }
    let mut received: Vec<EncodedSymbol> = Vec::with_capacity(symbols.len());
    let mut pos = 0;
    while pos < buf.len() {
        let (packet, used) = wire::read_packet(&buf[pos..], params.s_bits).expect("own packets");
        received.push(packet.symbol);
        pos += used;
    }

    if let Delivery::Channel { epsilon, .. } = config.delivery {
        let mut channel_rng = seeding::stream(config.seed, 3);
        received = erasure_channel(received, epsilon, &mut channel_rng);
    }

    let mut oracle = RepairOracle::new(&block, params.s_bits, config.feedback_bits);
    let decoder_seed = seeding::derive(config.seed, 4);
    let decoded = codec::decode(
        &received,
        params,
        config.family,
        config.policy,
        config.doping_mode,
        decoder_seed,
        Some(&mut oracle),
    )
    .expect("decode with a repair oracle cannot fail");
    assert!(decoded.block == block, "decoded block differs from source");

    let o = &decoded.outcome;
    TrialReport {
        received: o.received,
        d: o.d,
        d_min: o.d_min,
        i: o.i,
        u: o.u,
        deficiency: o.rank.deficiency,
        complexity: o.complexity.c,
        repair_bits: oracle.total_bits,
        requests: oracle.requests,
        peel_xors: o.counters.peel_symbol_xors,
    }
}

/// The paper-figure experiment grids, at desk scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Doping count vs block size at zero overhead, degree-two doping.
    FigSyman,
    /// Doping percentage vs collected-symbol overhead at `k = 1000`, both
    /// families, reserved-row variants, minimal and dope-all finishes.
    FigDopPer,
    /// Decoding cost per symbol vs overhead.
    FigCompersym,
    /// Sequential vs postponed repair on the same axis.
    FigDopPer1,
    /// Cost of the finalization choices on the same axis.
    FigCompersym1,
    /// Broadcast-cell dimensioning numbers.
    Usecase,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::FigSyman,
        Preset::FigDopPer,
        Preset::FigCompersym,
        Preset::FigDopPer1,
        Preset::FigCompersym1,
        Preset::Usecase,
    ];

    #[must_use]
    pub fn label(self) -> &'static str {
        match self {
            Preset::FigSyman => "fig-syman",
            Preset::FigDopPer => "fig-dopPer",
            Preset::FigCompersym => "fig-compersym",
            Preset::FigDopPer1 => "fig-dopPer1",
            Preset::FigCompersym1 => "fig-compersym1",
            Preset::Usecase => "usecase",
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let want = s.to_ascii_lowercase();
        Preset::ALL
            .into_iter()
            .find(|p| p.label().eq_ignore_ascii_case(&want))
            .ok_or_else(|| {
                format!(
                    "unknown preset {s:?}; options: {}",
                    Preset::ALL.map(Preset::label).join(", ")
                )
            })
    }
}

/// One aggregated CSV row: a (variant, axis point) cell.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentRow {
    pub experiment: String,
    pub variant: String,
    pub k: usize,
    pub k_s: usize,
    pub p: usize,
    pub mode: String,
    pub policy: String,
    pub trials: usize,
    pub mean_d: f64,
    pub median_d: f64,
    pub q05_d: f64,
    pub q95_d: f64,
    pub mean_i: f64,
    pub mean_u: f64,
    pub mean_c: f64,
    pub mean_repair_bits: f64,
}

/// Analytical reference point for the JSON overlay.
#[derive(Clone, Debug, Serialize)]
pub struct ModelPoint {
    pub variant: String,
    pub axis: f64,
    pub value: f64,
}

/// Raw trial reports for one (variant, axis point) cell.
#[derive(Clone, Debug, Serialize)]
pub struct CellTrials {
    pub variant: String,
    pub axis: f64,
    pub reports: Vec<TrialReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentResult {
    pub preset: Preset,
    pub base_seed: u64,
    pub rows: Vec<ExperimentRow>,
    pub model_overlay: Vec<ModelPoint>,
    pub cells: Vec<CellTrials>,
}

impl ExperimentResult {
    /// CSV with one row per (variant, axis point).
    #[must_use]
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "experiment,variant,k,k_s,p,mode,policy,trials,mean_d,median_d,q05_d,q95_d,mean_i,mean_u,mean_C,mean_repair_bits\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.experiment,
                r.variant,
                r.k,
                r.k_s,
                r.p,
                r.mode,
                r.policy,
                r.trials,
                r.mean_d,
                r.median_d,
                r.q05_d,
                r.q95_d,
                r.mean_i,
                r.mean_u,
                r.mean_c,
                r.mean_repair_bits
            ));
        }
        out
    }

    /// Full result as JSON: rows, model overlay, and raw per-trial reports.
    #[must_use]
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx]
}

fn aggregate(preset: Preset, variant: &str, config: &TrialConfig, reports: &[TrialReport]) -> ExperimentRow {
    let n = reports.len();
    let nf = n as f64;
    let mut d_sorted: Vec<f64> = reports.iter().map(|r| r.d as f64).collect();
    d_sorted.sort_by(f64::total_cmp);
    let mean = |f: &dyn Fn(&TrialReport) -> f64| reports.iter().map(|r| f(r)).sum::<f64>() / nf;
    ExperimentRow {
        experiment: preset.label().to_string(),
        variant: variant.to_string(),
        k: config.params.k,
        k_s: config.params.k_s,
        p: config.params.p,
        mode: config.params.mode.label().to_string(),
        policy: config.policy.label().to_string(),
        trials: n,
        mean_d: d_sorted.iter().sum::<f64>() / nf,
        median_d: quantile(&d_sorted, 0.5),
        q05_d: quantile(&d_sorted, 0.05),
        q95_d: quantile(&d_sorted, 0.95),
        mean_i: mean(&|r| r.i as f64),
        mean_u: mean(&|r| r.u as f64),
        mean_c: mean(&|r| r.complexity),
        mean_repair_bits: mean(&|r| r.repair_bits),
    }
}

/// Runs `trials` seeded trials of one cell in parallel.
fn run_cell(config: &TrialConfig, trials: usize, cell_seed: u64) -> Vec<TrialReport> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut c = config.clone();
            c.seed = seeding::derive(cell_seed, t as u64);
            run_trial(&c)
        })
        .collect()
}

fn base_config(k: usize, k_s: usize, p: usize, family: Family) -> TrialConfig {
    let mut params = CodeParams::new(k, 64);
    params.k_s = k_s;
    params.p = p;
    params.mode = DecodeMode::Conditional;
    TrialConfig {
        params,
        family,
        delivery: Delivery::ExactBudget,
        policy: Policy::Postponed,
        doping_mode: DopingMode::Minimal,
        feedback_bits: 1e6,
        seed: 0,
    }
}

/// Runs a preset: `trials` per cell (0 picks the 300-trial default),
/// parallel across `threads` (0 keeps rayon's default pool).
pub fn run_experiment(
    preset: Preset,
    trials: usize,
    base_seed: u64,
    threads: usize,
) -> ExperimentResult {
    let trials = if trials == 0 { 300 } else { trials };
    let body = || run_experiment_inner(preset, trials, base_seed);
    if threads == 0 {
        body()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool")
            .install(body)
    }
}

fn run_experiment_inner(preset: Preset, trials: usize, base_seed: u64) -> ExperimentResult {
    // (variant name, axis value, config) cells, preset by preset
    let mut cells_spec: Vec<(String, f64, TrialConfig)> = Vec::new();
    let mut model_overlay: Vec<ModelPoint> = Vec::new();

    let overhead_axis = [1000usize, 1025, 1050, 1075, 1100, 1150, 1200];
    match preset {
        Preset::FigSyman => {
            for &k in &[500usize, 1000, 2000, 5000] {
                let mut c = base_config(k, k, 0, Family::IdealSoliton);
                c.policy = Policy::Sequential;
                cells_spec.push(("is-seq".into(), k as f64, c));
                model_overlay.push(ModelPoint {
                    variant: "model-dopings".into(),
                    axis: k as f64,
                    value: model::expected_dopings(k, 0.0),
                });
            }
        }
        Preset::FigDopPer => {
            let k = 1000usize;
            // reserved-row counts: none, two thirds of sqrt(k), sqrt(k)
            for &k_s in &overhead_axis {
                for family in [Family::IdealSoliton, Family::RaptorLt] {
                    for &p in &[0usize, 21, 32] {
                        for doping in [DopingMode::Minimal, DopingMode::DopeAll] {
                            let mut c = base_config(k, k_s, p, family);
                            c.doping_mode = doping;
                            let name =
                                format!("{}-p{}-{}", family.label(), p, doping.label());
                            cells_spec.push((name, (k_s - k) as f64, c));
                        }
                    }
                }
                let delta = k_s as f64 / k as f64 - 1.0;
                model_overlay.push(ModelPoint {
                    variant: "model-dopings".into(),
                    axis: (k_s - k) as f64,
                    value: model::expected_dopings(k, delta),
                });
                model_overlay.push(ModelPoint {
                    variant: "model-uncovered-is".into(),
                    axis: (k_s - k) as f64,
                    value: model::uncovered_estimate(k, delta, (k as f64).ln()),
                });
                model_overlay.push(ModelPoint {
                    variant: "model-uncovered-rlt".into(),
                    axis: (k_s - k) as f64,
                    value: model::uncovered_estimate(k, delta, 4.5),
                });
            }
        }
        Preset::FigCompersym => {
            let k = 1000usize;
            for &k_s in &overhead_axis {
                for (family, p, doping) in [
                    (Family::IdealSoliton, 0usize, DopingMode::Minimal),
                    (Family::IdealSoliton, 32, DopingMode::Minimal),
                    (Family::IdealSoliton, 0, DopingMode::DopeAll),
                    (Family::RaptorLt, 0, DopingMode::Minimal),
                ] {
                    let mut c = base_config(k, k_s, p, family);
                    c.doping_mode = doping;
                    let name = format!("{}-p{}-{}", family.label(), p, doping.label());
                    cells_spec.push((name, (k_s - k) as f64, c));
                }
                let delta = k_s as f64 / k as f64 - 1.0;
                let d = model::expected_dopings(k, delta);
                model_overlay.push(ModelPoint {
                    variant: "model-cost-dope-all".into(),
                    axis: (k_s - k) as f64,
                    value: (k as f64 + d) / (k as f64 - d),
                });
            }
        }
        Preset::FigDopPer1 => {
            let k = 1000usize;
            for &k_s in &overhead_axis {
                for policy in [Policy::Sequential, Policy::Postponed] {
                    let mut c = base_config(k, k_s, 0, Family::IdealSoliton);
                    c.policy = policy;
                    cells_spec.push((
                        format!("is-{}", policy.label()),
                        (k_s - k) as f64,
                        c,
                    ));
                }
                let delta = k_s as f64 / k as f64 - 1.0;
                model_overlay.push(ModelPoint {
                    variant: "model-dopings".into(),
                    axis: (k_s - k) as f64,
                    value: model::expected_dopings(k, delta),
                });
            }
        }
        Preset::FigCompersym1 => {
            let k = 1000usize;
            for &k_s in &overhead_axis {
                for (policy, doping) in [
                    (Policy::Postponed, DopingMode::Minimal),
                    (Policy::Postponed, DopingMode::DopeAll),
                    (Policy::Sequential, DopingMode::Minimal),
                ] {
                    let mut c = base_config(k, k_s, 0, Family::IdealSoliton);
                    c.policy = policy;
                    c.doping_mode = doping;
                    cells_spec.push((
                        format!("is-{}-{}", policy.label(), doping.label()),
                        (k_s - k) as f64,
                        c,
                    ));
                }
                let delta = k_s as f64 / k as f64 - 1.0;
                let d = model::expected_dopings(k, delta);
                model_overlay.push(ModelPoint {
                    variant: "model-cost-dope-all".into(),
                    axis: (k_s - k) as f64,
                    value: (k as f64 + d) / (k as f64 - d),
                });
            }
        }
        Preset::Usecase => {
            let inputs = model::UseCaseInputs {
                clients: 50,
                loss_fraction: 0.05,
                k: 1000,
                k_s_design: 1150,
                per_user_repair_bound: 0.005,
            };
            let summary = model::use_case(&inputs);
            for (name, value) in [
                ("no-fec-repair-overhead", summary.no_fec_repair_overhead),
                ("broadcast-overhead", summary.broadcast_overhead),
                ("repair-overhead-bound", summary.repair_overhead),
                ("with-fec-total-overhead", summary.with_fec_total_overhead),
            ] {
                model_overlay.push(ModelPoint {
                    variant: name.into(),
                    axis: 0.0,
                    value,
                });
            }
            // one client's reception of the 1150-symbol broadcast
            let mut c = base_config(inputs.k, inputs.k_s_design, 0, Family::IdealSoliton);
            c.delivery = Delivery::Channel {
                n: inputs.k_s_design,
                epsilon: inputs.loss_fraction,
            };
            cells_spec.push(("client".into(), 0.0, c));
        }
    }

    let mut rows = Vec::with_capacity(cells_spec.len());
    let mut cells = Vec::with_capacity(cells_spec.len());
    for (idx, (variant, axis, config)) in cells_spec.iter().enumerate() {
        let cell_seed = seeding::derive(base_seed, idx as u64);
        let reports = run_cell(config, trials, cell_seed);
        rows.push(aggregate(preset, variant, config, &reports));
        cells.push(CellTrials {
            variant: variant.clone(),
            axis: *axis,
            reports,
        });
    }

    ExperimentResult {
        preset,
        base_seed,
        rows,
        model_overlay,
        cells,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channel_with_zero_loss_keeps_everything() {
        let mut rng = seeding::stream(1, 1);
        let survivors = erasure_channel((0..1000).collect::<Vec<_>>(), 0.0, &mut rng);
        assert_eq!(survivors.len(), 1000);
    }

    #[test]
    fn channel_survivor_count_concentrates() {
        let n = 100_000usize;
        let eps = 0.05;
        let mut rng = seeding::stream(2, 7);
        let survivors = erasure_channel((0..n).collect::<Vec<_>>(), eps, &mut rng);
        let mean = n as f64 * (1.0 - eps);
        let sigma = (n as f64 * eps * (1.0 - eps)).sqrt();
        let dev = (survivors.len() as f64 - mean).abs();
        assert!(dev <= 3.0 * sigma, "deviation {dev} vs 3σ = {}", 3.0 * sigma);
    }

    #[test]
    fn oracle_cost_matches_the_model() {
        let mut rng = seeding::stream(3, 1);
        let block: Vec<BitVector> = (0..1024).map(|_| BitVector::random(&mut rng, 8000)).collect();

        // one batched request of ten symbols
        let mut oracle = RepairOracle::new(&block, 8000, 1e6);
        let rows: Vec<u32> = (0..10).collect();
        let values = oracle.fetch(&rows).unwrap();
        assert_eq!(values.len(), 10);
        assert_eq!(oracle.requests, 1);
        let want = model::repair_cost(
            &model::CostModelParams::for_dopings(1024, 8000, 2, 1e6, 10),
            Policy::Postponed,
            10,
        )
        .total_bits;
        assert!((oracle.total_bits - want).abs() < 1e-6);
        assert!((oracle.total_bits - 1_080_100.0).abs() < 1e-6);

        // the same ten symbols one at a time
        let mut oracle = RepairOracle::new(&block, 8000, 1e6);
        for r in 0..10u32 {
            oracle.fetch(&[r]).unwrap();
        }
        assert_eq!(oracle.requests, 10);
        let want = model::repair_cost(
            &model::CostModelParams::for_dopings(1024, 8000, 2, 1e6, 10),
            Policy::Sequential,
            10,
        )
        .total_bits;
        assert!((oracle.total_bits - want).abs() < 1e-6);
    }

    #[test]
    fn oracle_empty_request_is_free_and_bad_rows_fail() {
        let mut rng = seeding::stream(3, 2);
        let block: Vec<BitVector> = (0..8).map(|_| BitVector::random(&mut rng, 16)).collect();
        let mut oracle = RepairOracle::new(&block, 16, 1e6);
        assert!(oracle.fetch(&[]).unwrap().is_empty());
        assert_eq!(oracle.total_bits, 0.0);
        assert!(oracle.fetch(&[8]).is_err());
    }

    fn smoke_config(seed: u64) -> TrialConfig {
        let mut c = base_config(100, 110, 0, Family::IdealSoliton);
        c.feedback_bits = 100.0;
        c.seed = seed;
        c
    }

    #[test]
    fn trials_are_deterministic_in_the_seed() {
        let a = run_trial(&smoke_config(42));
        let b = run_trial(&smoke_config(42));
        assert_eq!(a, b);
        assert_eq!(a.received, 110);
    }

    #[test]
    fn trials_recover_under_every_policy_combination() {
        for (policy, doping) in [
            (Policy::Postponed, DopingMode::Minimal),
            (Policy::Postponed, DopingMode::DopeAll),
            (Policy::Sequential, DopingMode::Minimal),
        ] {
            for seed in 0..5 {
                let mut c = smoke_config(seed);
                c.policy = policy;
                c.doping_mode = doping;
                let r = run_trial(&c);
                assert!(r.d >= r.u);
                assert!(r.d_min <= r.d);
            }
        }
        // channel delivery and reserved rows
        let mut c = base_config(100, 100, 10, Family::IdealSoliton);
        c.delivery = Delivery::Channel {
            n: 130,
            epsilon: 0.1,
        };
        c.seed = 9;
        let r = run_trial(&c);
        assert!(r.received > 100 && r.received < 130);
    }

    #[test]
    fn experiment_runs_are_reproducible() {
        let a = run_experiment(Preset::Usecase, 4, 77, 2);
        let b = run_experiment(Preset::Usecase, 4, 77, 2);
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.rows.len(), 1);
        assert_eq!(a.rows[0].trials, 4);
        assert!(a
            .to_csv()
            .starts_with("experiment,variant,k,k_s,p,mode,policy,trials,mean_d,"));
        // the §-table numbers ride along in the overlay
        assert!(a
            .model_overlay
            .iter()
            .any(|m| m.variant == "no-fec-repair-overhead" && (m.value - 2.5).abs() < 1e-12));
        let json = a.to_json();
        assert!(json.contains("\"preset\""));
    }

    #[test]
    fn quantiles_are_monotone() {
        let result = run_experiment(Preset::FigDopPer1, 6, 3, 2);
        for row in &result.rows {
            assert!(row.q05_d <= row.median_d && row.median_d <= row.q95_d);
        }
    }

    #[test]
    fn preset_names_parse_back() {
        for p in Preset::ALL {
            assert_eq!(p.label().parse::<Preset>().unwrap(), p);
        }
        assert!("fig-unknown".parse::<Preset>().is_err());
    }
}
