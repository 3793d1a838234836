//! Command-line front end: `info` prints code parameters, `decode` runs a
//! single instance read from a file, `simulate` sweeps an error-rate grid
//! and writes CSV. Exit codes: 0 success, 1 configuration error, 2 I/O
//! error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use toric3d::code::{self, CodeSpec, DecodeOutcome, Family, PauliFrame};
use toric3d::erasure::{self, StuckPolicy, ZVariant};
use toric3d::gf2::BitVec;
use toric3d::matching;
use toric3d::noise;
use toric3d::sim::{self, Channel, SimConfig};
use toric3d::toom::{self, SweepOrder};
use toric3d::welded;

#[derive(Parser)]
#[command(
    name = "toric3d",
    about = "3D toric and welded code decoding and thresholds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print code parameters (n, k, check counts, logical weights).
    Info(InfoArgs),
    /// Decode one error or erasure pattern from a file of qubit indices.
    Decode(DecodeArgs),
    /// Monte Carlo sweep over a physical-error-rate grid.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Periodic3d,
    Solid,
    Welded,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelArg {
    Bitflip,
    Phaseflip,
    Erasure,
}

impl From<ChannelArg> for Channel {
    fn from(c: ChannelArg) -> Channel {
        match c {
            ChannelArg::Bitflip => Channel::BitFlip,
            ChannelArg::Phaseflip => Channel::PhaseFlip,
            ChannelArg::Erasure => Channel::Erasure,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StuckPolicyArg {
    DeclareFailure,
    Gauss,
}

impl From<StuckPolicyArg> for StuckPolicy {
    fn from(p: StuckPolicyArg) -> StuckPolicy {
        match p {
            StuckPolicyArg::DeclareFailure => StuckPolicy::DeclareFailure,
            StuckPolicyArg::Gauss => StuckPolicy::Gauss,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    FreezeFirst,
    Alternating,
}

impl From<VariantArg> for ZVariant {
    fn from(v: VariantArg) -> ZVariant {
        match v {
            VariantArg::FreezeFirst => ZVariant::FreezeFirst,
            VariantArg::Alternating => ZVariant::Alternating,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepOrderArg {
    Standard,
    Reversed,
}

impl From<SweepOrderArg> for SweepOrder {
    fn from(o: SweepOrderArg) -> SweepOrder {
        match o {
            SweepOrderArg::Standard => SweepOrder::Standard,
            SweepOrderArg::Reversed => SweepOrder::Reversed,
        }
    }
}

#[derive(Args)]
struct CodeArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Linear lattice size.
    #[arg(long)]
    ell: usize,
    /// Solids per direction (welded family only).
    #[arg(long = "R", default_value_t = 1)]
    r: usize,
}

impl CodeArgs {
    fn family(&self) -> Family {
        match self.family {
            FamilyArg::Periodic3d => Family::Periodic3d { ell: self.ell },
            FamilyArg::Solid => Family::Solid { ell: self.ell },
            FamilyArg::Welded => Family::Welded {
                ell: self.ell,
                r: self.r,
            },
        }
    }

    fn build(&self) -> Result<CodeSpec, code::CodeError> {
        match self.family() {
            Family::Periodic3d { ell } => CodeSpec::periodic(ell),
            Family::Solid { ell } => CodeSpec::solid(ell),
            Family::Welded { ell, r } => CodeSpec::welded(ell, r),
        }
    }
}

#[derive(Args)]
struct InfoArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Dump lattice element tables, one line per element.
    #[arg(long)]
    dump_lattice: bool,
    /// Write H, T and logicals in sparse row format into this directory.
    #[arg(long, value_name = "DIR")]
    export: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, value_enum)]
    channel: ChannelArg,
    /// Plain-text file of qubit indices: the error support (bitflip,
    /// phaseflip) or the erased set (erasure).
    #[arg(long)]
    input: PathBuf,
    /// Seed for the erasure-induced Pauli draw.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    imax: Option<usize>,
    #[arg(long)]
    jmax: Option<usize>,
    #[arg(long, value_enum, default_value = "declare-failure")]
    stuck_policy: StuckPolicyArg,
    #[arg(long, value_enum, default_value = "freeze-first")]
    variant: VariantArg,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, value_enum)]
    channel: ChannelArg,
    #[arg(long)]
    p_min: f64,
    #[arg(long)]
    p_max: f64,
    #[arg(long, default_value_t = 9)]
    p_steps: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long)]
    imax: Option<usize>,
    #[arg(long)]
    jmax: Option<usize>,
    /// Sweep-rule schedule, e.g. "ne,es,sw,wn,ns,ew".
    #[arg(long)]
    rules: Option<String>,
    #[arg(long, value_enum, default_value = "standard")]
    sweep_order: SweepOrderArg,
    #[arg(long, value_enum, default_value = "declare-failure")]
    stuck_policy: StuckPolicyArg,
    #[arg(long, value_enum, default_value = "freeze-first")]
    variant: VariantArg,
    /// Also run the Gaussian-elimination decoder on identical samples
    /// (welded erasure sweeps); writes a second CSV next to --out.
    #[arg(long)]
    paired_baseline: bool,
    /// Print Wilson 95% intervals alongside each point.
    #[arg(long)]
    wilson: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Info(args) => run_info(args),
        Command::Decode(args) => run_decode(args),
        Command::Simulate(args) => run_simulate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let io_error = matches!(e, sim::SimError::Io(_));
            ExitCode::from(if io_error { 2 } else { 1 })
        }
    }
}

fn run_info(args: InfoArgs) -> Result<(), sim::SimError> {
    let code = args.code.build()?;
    println!("family: {}", code.family);
    match code.family {
        Family::Welded { ell, r } => println!("ell: {ell}\nR: {r}"),
        Family::Periodic3d { ell } | Family::Solid { ell } => println!("ell: {ell}"),
    }
    println!("n: {}", code.n);
    println!("k: {}", code.k);
    println!("x_checks: {}", code.h.num_rows());
    println!("z_checks: {}", code.t.num_rows());
    let weights = |ls: &[Vec<usize>]| {
        ls.iter()
            .map(|l| l.len().to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    println!("logical_x_weights: {}", weights(&code.logicals_x));
    println!("logical_z_weights: {}", weights(&code.logicals_z));
    if args.dump_lattice {
        match code.lattice() {
            Some(lat) => {
                let mut out = std::io::stdout().lock();
                lat.dump(&mut out).map_err(sim::SimError::Io)?;
            }
            None => {
                return Err(sim::SimError::Config(
                    "lattice dump applies to periodic and solid codes".into(),
                ))
            }
        }
    }
    if let Some(dir) = args.export {
        std::fs::create_dir_all(&dir)?;
        let mut file = std::fs::File::create(dir.join("H.txt"))?;
        code.h.write_sparse(&mut file)?;
        let mut file = std::fs::File::create(dir.join("T.txt"))?;
        code.t.write_sparse(&mut file)?;
        let logicals = |name: &str, ls: &[Vec<usize>]| -> std::io::Result<()> {
            use std::io::Write;
            let mut file = std::fs::File::create(dir.join(name))?;
            for (i, l) in ls.iter().enumerate() {
                write!(file, "{i}:")?;
                for q in l {
                    write!(file, " {q}")?;
                }
                writeln!(file)?;
            }
            Ok(())
        };
        logicals("logical_x.txt", &code.logicals_x)?;
        logicals("logical_z.txt", &code.logicals_z)?;
        println!("exported check matrices to {}", dir.display());
    }
    Ok(())
}

fn read_indices(path: &PathBuf, n: usize) -> Result<Vec<usize>, sim::SimError> {
    let text = std::fs::read_to_string(path).map_err(sim::SimError::Io)?;
    let mut indices = Vec::new();
    for token in text.split_whitespace() {
        let q: usize = token
            .parse()
            .map_err(|_| sim::SimError::Config(format!("bad qubit index '{token}'")))?;
        if q >= n {
            return Err(sim::SimError::Config(format!(
                "qubit index {q} out of range (n = {n})"
            )));
        }
        indices.push(q);
    }
    indices.sort_unstable();
    indices.dedup();
    Ok(indices)
}

fn print_outcome(code: &CodeSpec, truth: &PauliFrame, estimate: &PauliFrame) {
    let mut residual = truth.clone();
    residual.xor_assign(estimate);
    match code::is_logical_failure(code, &residual) {
        Ok((z_failed, x_failed)) => {
            let verdict = match (z_failed, x_failed) {
                (false, false) => "success",
                (true, false) => "z_fail",
                (false, true) => "x_fail",
                (true, true) => "both_fail",
            };
            println!("classification: {verdict}");
        }
        Err(e) => println!("classification: inconsistent ({e})"),
    }
}

fn print_support(label: &str, bits: &BitVec) {
    let support: Vec<String> = bits.ones().map(|q| q.to_string()).collect();
    println!("{label}: {}", support.join(" "));
}

fn run_decode(args: DecodeArgs) -> Result<(), sim::SimError> {
    let code = args.code.build()?;
    let indices = read_indices(&args.input, code.n)?;
    let welded_code = matches!(code.family, Family::Welded { .. });
    match Channel::from(args.channel) {
        Channel::BitFlip => {
            let mut truth = PauliFrame::zero(code.n);
            for &q in &indices {
                truth.x.set(q, true);
            }
            let tau = code.t.syndrome_of(&truth.x);
            let (di, dj) = toom::default_limits(match code.family {
                Family::Solid { ell } => ell,
                _ => {
                    return Err(sim::SimError::Config(
                        "bitflip decoding applies to the solid code".into(),
                    ))
                }
            });
            let out = toom::decode_bitflip(
                &code,
                &tau,
                args.imax.unwrap_or(di),
                args.jmax.unwrap_or(dj),
            )?;
            match out {
                DecodeOutcome::Estimate(est) => {
                    print_support("estimate_x", &est);
                    let mut frame = PauliFrame::zero(code.n);
                    frame.x = est;
                    print_outcome(&code, &truth, &frame);
                }
                DecodeOutcome::Failure(reason) => {
                    println!("classification: decoder_failure ({reason})")
                }
            }
        }
        Channel::PhaseFlip => {
            if !matches!(
                code.family,
                Family::Solid { .. } | Family::Periodic3d { .. }
            ) {
                return Err(sim::SimError::Config(
                    "phaseflip decoding applies to lattice codes".into(),
                ));
            }
            let mut truth = PauliFrame::zero(code.n);
            for &q in &indices {
                truth.z.set(q, true);
            }
            let sigma = code.h.syndrome_of(&truth.z);
            let est = matching::decode_phase(&code, &sigma)?;
            print_support("estimate_z", &est);
            let mut frame = PauliFrame::zero(code.n);
            frame.z = est;
            print_outcome(&code, &truth, &frame);
        }
        Channel::Erasure => {
            // The file lists the erased set; the induced Pauli is drawn
            // from the seed, as in the channel model.
            let mut rng = noise::trial_rng(args.seed, 0, 0);
            let mut truth = PauliFrame::zero(code.n);
            for &q in &indices {
                if rand::Rng::gen::<bool>(&mut rng) {
                    truth.x.set(q, true);
                }
                if rand::Rng::gen::<bool>(&mut rng) {
                    truth.z.set(q, true);
                }
            }
            let syn = code::syndrome(&code, &truth)?;
            print_support("induced_x", &truth.x);
            print_support("induced_z", &truth.z);
            let est_z = if welded_code {
                welded::decode_welded_z(&code, &indices, &syn.sigma)?
            } else {
                erasure::decode_erasure_z(&code, &indices, &syn.sigma, args.variant.into())?
            };
            let out_x = if welded_code {
                welded::decode_welded_x(&code, &indices, &syn.tau, args.stuck_policy.into())?
            } else {
                erasure::decode_erasure_x(&code, &indices, &syn.tau, args.stuck_policy.into())?
            };
            match out_x {
                DecodeOutcome::Estimate(est_x) => {
                    print_support("estimate_z", &est_z);
                    print_support("estimate_x", &est_x);
                    let frame = PauliFrame { x: est_x, z: est_z };
                    print_outcome(&code, &truth, &frame);
                }
                DecodeOutcome::Failure(reason) => {
                    print_support("estimate_z", &est_z);
                    println!("classification: decoder_failure ({reason})");
                }
            }
        }
    }
    Ok(())
}

fn run_simulate(args: SimulateArgs) -> Result<(), sim::SimError> {
    let mut config = SimConfig::new(args.code.family(), args.channel.into());
    config.p_min = args.p_min;
    config.p_max = args.p_max;
    config.p_steps = args.p_steps;
    config.trials = args.trials;
    config.seed = args.seed;
    config.workers = args.workers;
    config.i_max = args.imax;
    config.j_max = args.jmax;
    if let Some(rules) = &args.rules {
        config.rules = toom::parse_rules(rules).map_err(sim::SimError::Config)?;
    }
    config.sweep_order = args.sweep_order.into();
    config.stuck_policy = args.stuck_policy.into();
    config.variant = args.variant.into();
    config.paired_baseline = args.paired_baseline;
    config.out = args.out.clone();
    let results = sim::run_sweep(&config)?;
    println!("{}", sim::CSV_HEADER);
    for r in &results {
        print!(
            "{},{},{},{},{:.6},{},{},{:.6},{:.6},{},{}",
            r.family,
            args.code.ell,
            if matches!(r.family, Family::Welded { .. }) {
                args.code.r
            } else {
                0
            },
            r.channel,
            r.p,
            r.trials,
            r.failures,
            r.failure_rate,
            r.std_err,
            r.seed,
            r.elapsed_ms
        );
        if args.wilson {
            let (lo, hi) = sim::wilson_interval(r.failures, r.trials);
            print!(",wilson=[{lo:.6},{hi:.6}]");
        }
        println!();
    }
    if let Some(out) = &args.out {
        eprintln!("wrote {}", out.display());
        if args.paired_baseline {
            eprintln!("wrote {}", sim::baseline_path(out).display());
        }
    }
    Ok(())
}
