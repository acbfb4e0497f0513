//! Command-line front end: encode files into fountain packets, decode
//! them back (with optional repair doping), evaluate the analytical
//! model, and run the Monte Carlo experiment presets.
//!
//! Exit codes: 0 success, 2 usage or unreadable input, 3 decoding needs
//! doping and no source was given (a machine-readable list of required
//! symbols goes to stdout), 4 corrupt or inconsistent data.

mod container;
mod fileio;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use fountain_core::bitlinalg::BitVector;
use fountain_core::codec::{
    self, wire, BlockDopingSource, CodeParams, CodecError, DecodeMode, DopingMode, DopingSource,
    EncodedSymbol, Policy,
};
use fountain_core::degree::Family;
use fountain_core::model;
use fountain_core::seeding;
use fountain_core::sim::{self, Preset};

const EXIT_USAGE: u8 = 2;
const EXIT_NEEDS_DOPING: u8 = 3;
const EXIT_INTEGRITY: u8 = 4;

struct Failure {
    code: u8,
    message: String,
    /// Machine-readable detail printed to stdout, e.g. the must-dope list.
    payload: Option<serde_json::Value>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
            payload: None,
        }
    }

    fn integrity(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INTEGRITY,
            message: message.into(),
            payload: None,
        }
    }
}

type CmdResult = Result<(), Failure>;

#[derive(Parser)]
#[command(
    name = "fountain",
    version,
    about = "Rateless erasure coding toolkit: encode, decode with doping, model evaluation, experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DistArg {
    /// Ideal soliton.
    Is,
    /// The fixed raptor degree table (RFC 5053).
    #[value(alias = "rlt")]
    R10,
}

impl DistArg {
    fn family(self) -> Family {
        match self {
            DistArg::Is => Family::IdealSoliton,
            DistArg::R10 => Family::RaptorLt,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Conditional,
    Unconditional,
}

impl From<ModeArg> for DecodeMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Conditional => DecodeMode::Conditional,
            ModeArg::Unconditional => DecodeMode::Unconditional,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Sequential,
    Postponed,
}

impl From<PolicyArg> for Policy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Sequential => Policy::Sequential,
            PolicyArg::Postponed => Policy::Postponed,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DopingArg {
    /// Request only what a rank argument proves necessary.
    Minimal,
    /// Request every inactivated symbol.
    All,
}

impl From<DopingArg> for DopingMode {
    fn from(d: DopingArg) -> Self {
        match d {
            DopingArg::Minimal => DopingMode::Minimal,
            DopingArg::All => DopingMode::DopeAll,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormulaArg {
    /// Expected doping count at block size k and overhead delta.
    Edop,
    /// Probability that a p x (p+m) uniform binary matrix has rank p.
    Frankprob,
    /// Interdoping yield distribution.
    Yieldpmf,
    /// Expected count of source symbols covered by no equation.
    Uncovered,
    /// Per-symbol decoding cost from the operation counters.
    Complexity,
    /// Repair traffic for a given doping count and policy.
    Repaircost,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a file into a packet stream.
    Encode {
        #[arg(long)]
        input: PathBuf,
        /// Source symbols per block.
        #[arg(long)]
        k: usize,
        /// Encoded symbols to emit per block.
        #[arg(long)]
        symbols: usize,
        #[arg(long, value_enum, default_value_t = DistArg::Is)]
        dist: DistArg,
        /// Reserved dense rows per block.
        #[arg(long, default_value_t = 0)]
        p: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decode a packet stream back into the original file.
    Decode {
        #[arg(long)]
        packets: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Conditional)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = PolicyArg::Postponed)]
        policy: PolicyArg,
        /// Original file answering repair requests, or "none".
        #[arg(long, default_value = "none")]
        doping_source: String,
        #[arg(long, value_enum, default_value_t = DopingArg::Minimal)]
        doping: DopingArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Decode report destination; stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print one analytical quantity as JSON on stdout.
    Model {
        #[arg(long, value_enum)]
        formula: FormulaArg,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        mean_degree: Option<f64>,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        u: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        /// Elimination cost exponent.
        #[arg(long)]
        g: Option<f64>,
        #[arg(long)]
        s_bits: Option<usize>,
        /// Feedback round-trip price in bit equivalents.
        #[arg(long)]
        feedback: Option<f64>,
        #[arg(long)]
        dopings: Option<usize>,
        #[arg(long, value_enum)]
        policy: Option<PolicyArg>,
    },
    /// Run an experiment preset; aggregates go to CSV, details to JSON.
    Simulate {
        #[arg(long)]
        preset: String,
        /// Trials per cell; 0 picks the preset default.
        #[arg(long, default_value_t = 0)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Broadcast-cell overhead table.
    Usecase {
        #[arg(long, default_value_t = 50)]
        clients: usize,
        /// Per-client loss fraction.
        #[arg(long, default_value_t = 0.05)]
        loss: f64,
        #[arg(long, default_value_t = 1000)]
        k: usize,
        /// Broadcast budget in symbols.
        #[arg(long, default_value_t = 1150)]
        ks: usize,
        /// Per-user doping bound as a fraction of k.
        #[arg(long, default_value_t = 0.005)]
        bound: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(payload) = &f.payload {
                println!("{}", serde_json::to_string(payload).expect("plain data"));
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Encode {
            input,
            k,
            symbols,
            dist,
            p,
            seed,
            out,
        } => cmd_encode(&input, k, symbols, dist, p, seed, &out),
        Command::Decode {
            packets,
            mode,
            policy,
            doping_source,
            doping,
            seed,
            out,
            report,
        } => cmd_decode(
            &packets,
            mode,
            policy,
            &doping_source,
            doping,
            seed,
            &out,
            report.as_deref(),
        ),
        Command::Model {
            formula,
            k,
            delta,
            p,
            m,
            mean_degree,
            i,
            u,
            d,
            g,
            s_bits,
            feedback,
            dopings,
            policy,
        } => cmd_model(ModelFlags {
            formula,
            k,
            delta,
            p,
            m,
            mean_degree,
            i,
            u,
            d,
            g,
            s_bits,
            feedback,
            dopings,
            policy,
        }),
        Command::Simulate {
            preset,
            trials,
            seed,
            jobs,
            csv,
            json,
        } => cmd_simulate(&preset, trials, seed, jobs, &csv, json.as_deref()),
        Command::Usecase {
            clients,
            loss,
            k,
            ks,
            bound,
        } => cmd_usecase(clients, loss, k, ks, bound),
    }
}

fn read_file(path: &std::path::Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &std::path::Path, data: &[u8]) -> CmdResult {
    fs::write(path, data)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn cmd_encode(
    input: &std::path::Path,
    k: usize,
    symbols: usize,
    dist: DistArg,
    p: usize,
    seed: u64,
    out: &std::path::Path,
) -> CmdResult {
    if symbols == 0 {
        return Err(Failure::usage("--symbols must be at least 1"));
    }
    let family = dist.family();
    if family == Family::RaptorLt && k < 64 {
        return Err(Failure::usage(format!(
            "the r10 degree table needs k >= 64, got {k}"
        )));
    }
    let data = read_file(input)?;
    let plan = fileio::plan(data.len() as u64, k).map_err(Failure::usage)?;
    let mut params = CodeParams::new(k, plan.s_bits);
    params.p = p;
    params.validate().map_err(|e| Failure::usage(e.to_string()))?;

    let blocks = fileio::split(&data, k, &plan);
    let mut buf = Vec::new();
    container::write_header(
        &mut buf,
        &container::ContainerHeader {
            original_len: data.len() as u64,
            k: k as u32,
            s_bits: plan.s_bits as u32,
            family,
            p: p as u16,
        },
    );
    for (b, block) in blocks.iter().enumerate() {
        let session = seeding::derive(seed, b as u64);
        let encoded = codec::encode(block, &params, family, 0, symbols, session)
            .map_err(|e| Failure::usage(e.to_string()))?;
        for symbol in encoded {
            wire::write_packet(
                &mut buf,
                &wire::Packet {
                    block_id: b as u32,
                    k: k as u32,
                    p: p as u16,
                    symbol,
                },
            )
            .map_err(|e| Failure::usage(e.to_string()))?;
        }
    }
    write_file(out, &buf)
}

#[allow(clippy::too_many_arguments)]
fn cmd_decode(
    packets: &std::path::Path,
    mode: ModeArg,
    policy: PolicyArg,
    doping_source: &str,
    doping: DopingArg,
    seed: u64,
    out: &std::path::Path,
    report: Option<&std::path::Path>,
) -> CmdResult {
    let buf = read_file(packets)?;
    let (header, mut pos) = container::read_header(&buf).map_err(Failure::integrity)?;
    let k = header.k as usize;
    let s_bits = header.s_bits as usize;
    let plan = fileio::plan(header.original_len, k).map_err(Failure::integrity)?;
    if plan.s_bits != s_bits {
        return Err(Failure::integrity(format!(
            "header symbol size {s_bits} disagrees with the {} implied by the file length",
            plan.s_bits
        )));
    }

    let mut per_block: Vec<Vec<EncodedSymbol>> = vec![Vec::new(); plan.blocks];
    while pos < buf.len() {
        let (packet, used) = wire::read_packet(&buf[pos..], s_bits)
            .map_err(|e| Failure::integrity(format!("packet at byte {pos}: {e}")))?;
        pos += used;
        if packet.k as usize != k || packet.p != header.p {
            return Err(Failure::integrity(format!(
                "packet for column {} disagrees with the file header",
                packet.symbol.column_id
            )));
        }
        let b = packet.block_id as usize;
        if b >= plan.blocks {
            return Err(Failure::integrity(format!(
                "packet for block {b}, but the file has {} block(s)",
                plan.blocks
            )));
        }
        per_block[b].push(packet.symbol);
    }

    let source_blocks: Option<Vec<Vec<BitVector>>> = if doping_source == "none" {
        None
    } else {
        let src = read_file(std::path::Path::new(doping_source))?;
        if src.len() as u64 != header.original_len {
            return Err(Failure::usage(format!(
                "doping source is {} bytes, the encoded file was {}",
                src.len(),
                header.original_len
            )));
        }
        Some(fileio::split(&src, k, &plan))
    };

    let mut params = CodeParams::new(k, s_bits);
    params.p = header.p as usize;
    params.mode = mode.into();
    params.validate().map_err(|e| Failure::integrity(e.to_string()))?;

    let mut decoded_blocks: Vec<Vec<BitVector>> = Vec::with_capacity(plan.blocks);
    let mut block_reports: Vec<serde_json::Value> = Vec::with_capacity(plan.blocks);
    let mut missing: Vec<serde_json::Value> = Vec::new();
    for (b, symbols) in per_block.iter().enumerate() {
        let block_seed = seeding::derive(seed, b as u64);
        if symbols.is_empty() {
            // Nothing of this block arrived: it is repair traffic in full.
            match &source_blocks {
                Some(blocks) => {
                    let mut source = BlockDopingSource::new(&blocks[b]);
                    let rows: Vec<u32> = (0..k as u32).collect();
                    let values = source
                        .fetch(&rows)
                        .map_err(|e| Failure::integrity(e.to_string()))?;
                    decoded_blocks.push(values);
                    block_reports.push(json!({ "block_id": b, "fully_doped": true, "d": k }));
                }
                None => missing.push(json!({ "block_id": b, "rows": (0..k as u32).collect::<Vec<_>>() })),
            }
            continue;
        }
        let result = match &source_blocks {
            Some(blocks) => {
                let mut source = BlockDopingSource::new(&blocks[b]);
                codec::decode(
                    symbols,
                    &params,
                    header.family,
                    policy.into(),
                    doping.into(),
                    block_seed,
                    Some(&mut source),
                )
            }
            None => codec::decode(
                symbols,
                &params,
                header.family,
                policy.into(),
                doping.into(),
                block_seed,
                None,
            ),
        };
        match result {
            Ok(decoded) => {
                block_reports.push(
                    serde_json::to_value(&decoded.outcome).expect("outcome serializes"),
                );
                decoded_blocks.push(decoded.block);
            }
            Err(CodecError::DopingNeeded { rows }) => {
                missing.push(json!({ "block_id": b, "rows": rows }));
            }
            Err(CodecError::DopingSourceFailed(reason)) => {
                return Err(Failure::usage(format!("doping source: {reason}")));
            }
            Err(e) => return Err(Failure::integrity(e.to_string())),
        }
    }

    if !missing.is_empty() {
        return Err(Failure {
            code: EXIT_NEEDS_DOPING,
            message: "decoding stalled; rerun with --doping-source to fetch the listed symbols"
                .to_string(),
            payload: Some(json!({ "error": "needs-doping", "blocks": missing })),
        });
    }

    write_file(out, &fileio::reassemble(&decoded_blocks, header.original_len))?;
    let report_value = json!({
        "original_len": header.original_len,
        "k": k,
        "s_bits": s_bits,
        "p": header.p,
        "dist": header.family.label(),
        "blocks": block_reports,
    });
    let rendered = serde_json::to_string_pretty(&report_value).expect("plain data");
    match report {
        Some(path) => write_file(path, rendered.as_bytes())?,
        None => println!("{rendered}"),
    }
    Ok(())
}

struct ModelFlags {
    formula: FormulaArg,
    k: Option<usize>,
    delta: Option<f64>,
    p: Option<usize>,
    m: Option<usize>,
    mean_degree: Option<f64>,
    i: Option<usize>,
    u: Option<usize>,
    d: Option<usize>,
    g: Option<f64>,
    s_bits: Option<usize>,
    feedback: Option<f64>,
    dopings: Option<usize>,
    policy: Option<PolicyArg>,
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::usage(format!("this formula needs --{flag}")))
}

fn cmd_model(flags: ModelFlags) -> CmdResult {
    let output = match flags.formula {
        FormulaArg::Edop => {
            let k = need(flags.k, "k")?;
            let delta = need(flags.delta, "delta")?;
            json!({
                "formula": "edop",
                "k": k,
                "delta": delta,
                "expected_dopings": model::expected_dopings(k, delta),
            })
        }
        FormulaArg::Frankprob => {
            let p = need(flags.p, "p")?;
            let m = need(flags.m, "m")?;
            json!({
                "formula": "frankprob",
                "p": p,
                "m": m,
                "full_rank_prob": model::full_rank_prob(p, m),
            })
        }
        FormulaArg::Yieldpmf => {
            let k = need(flags.k, "k")?;
            let delta = need(flags.delta, "delta")?;
            let pmf = model::interdoping_yield_pmf(k, delta);
            json!({
                "formula": "yieldpmf",
                "k": k,
                "delta": delta,
                "expected_yield": model::expected_yield(&pmf),
                "tail_mass": pmf.tail_mass,
                "probabilities": pmf.probabilities,
            })
        }
        FormulaArg::Uncovered => {
            let k = need(flags.k, "k")?;
            let delta = need(flags.delta, "delta")?;
            let mean_degree = need(flags.mean_degree, "mean-degree")?;
            json!({
                "formula": "uncovered",
                "k": k,
                "delta": delta,
                "mean_degree": mean_degree,
                "uncovered": model::uncovered_estimate(k, delta, mean_degree),
            })
        }
        FormulaArg::Complexity => {
            let k = need(flags.k, "k")?;
            let p = need(flags.p, "p")?;
            let i = need(flags.i, "i")?;
            let u = need(flags.u, "u")?;
            let d = need(flags.d, "d")?;
            let g = flags.g.unwrap_or(2.5);
            if d < u || d > u + i + p {
                return Err(Failure::usage(format!(
                    "d = {d} outside [u, u + i + p] = [{u}, {}]",
                    u + i + p
                )));
            }
            if d >= k {
                return Err(Failure::usage(format!("d = {d} must stay below k = {k}")));
            }
            serde_json::to_value(codec::complexity_report(k, p, i, u, d, g))
                .expect("plain data")
        }
        FormulaArg::Repaircost => {
            let k = need(flags.k, "k")?;
            let s_bits = need(flags.s_bits, "s-bits")?;
            let feedback = need(flags.feedback, "feedback")?;
            let dopings = need(flags.dopings, "dopings")?;
            let policy: Policy = need(flags.policy, "policy")?.into();
            let params = model::CostModelParams::for_dopings(k, s_bits, 2, feedback, dopings);
            let cost = model::repair_cost(&params, policy, dopings);
            json!({
                "formula": "repaircost",
                "k": k,
                "s_bits": s_bits,
                "feedback_bits": feedback,
                "dopings": dopings,
                "policy": policy.label(),
                "per_symbol_bits": cost.per_symbol_bits,
                "total_bits": cost.total_bits,
            })
        }
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&output).expect("plain data")
    );
    Ok(())
}

fn cmd_simulate(
    preset: &str,
    trials: usize,
    seed: u64,
    jobs: usize,
    csv: &std::path::Path,
    json: Option<&std::path::Path>,
) -> CmdResult {
    let preset: Preset = preset.parse().map_err(Failure::usage)?;
    let result = sim::run_experiment(preset, trials, seed, jobs);
    write_file(csv, result.to_csv().as_bytes())?;
    if let Some(path) = json {
        write_file(path, result.to_json().as_bytes())?;
    }
    eprintln!(
        "{}: {} rows -> {}",
        preset.label(),
        result.rows.len(),
        csv.display()
    );
    Ok(())
}

fn cmd_usecase(clients: usize, loss: f64, k: usize, ks: usize, bound: f64) -> CmdResult {
    if !(0.0..1.0).contains(&loss) || !(0.0..1.0).contains(&bound) {
        return Err(Failure::usage("--loss and --bound must be in [0, 1)"));
    }
    if ks < k {
        return Err(Failure::usage("--ks must be at least --k"));
    }
    let inputs = model::UseCaseInputs {
        clients,
        loss_fraction: loss,
        k,
        k_s_design: ks,
        per_user_repair_bound: bound,
    };
    let summary = model::use_case(&inputs);
    let output = json!({
        "inputs": inputs,
        "overheads": summary,
        "overheads_percent": {
            "no_fec_repair": summary.no_fec_repair_overhead * 100.0,
            "broadcast": summary.broadcast_overhead * 100.0,
            "repair_bound": summary.repair_overhead * 100.0,
            "with_fec_total": summary.with_fec_total_overhead * 100.0,
        },
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&output).expect("plain data")
    );
    Ok(())
}
