//! Monte Carlo driver: sweep physical error rates, run seeded independent
//! trials in parallel, classify logical failures, and emit CSV.
//!
//! Trial (point, index) always draws from the stream derived from
//! (master seed, point, index), so failure counts are identical for any
//! worker count and any scheduling order.

use crate::code::{self, CodeSpec, DecodeOutcome, Family};
use crate::erasure::{self, StuckPolicy, ZVariant};
use crate::matching;
use crate::noise;
use crate::toom::{self, SweepOrder, ToomDecoder};
use crate::welded;
use rayon::prelude::*;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Channel {
    BitFlip,
    PhaseFlip,
    Erasure,
}

impl std::fmt::Display for Channel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Channel::BitFlip => write!(f, "bitflip"),
            Channel::PhaseFlip => write!(f, "phaseflip"),
            Channel::Erasure => write!(f, "erasure"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Code(#[from] code::CodeError),
    #[error(transparent)]
    Noise(#[from] noise::NoiseError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub family: Family,
    pub channel: Channel,
    pub p_min: f64,
    pub p_max: f64,
    pub p_steps: usize,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    /// Sweep-decoder passes; defaults to ceil(ell/2).
    pub i_max: Option<usize>,
    /// Sweeps per rule; defaults to ell.
    pub j_max: Option<usize>,
    pub rules: Vec<toom::Rule>,
    pub sweep_order: SweepOrder,
    pub stuck_policy: StuckPolicy,
    pub variant: ZVariant,
    /// Run the Gaussian baseline on identical samples (welded erasure).
    pub paired_baseline: bool,
    pub out: Option<PathBuf>,
}

impl SimConfig {
    pub fn new(family: Family, channel: Channel) -> Self {
        SimConfig {
            family,
            channel,
            p_min: 0.0,
            p_max: 0.0,
            p_steps: 1,
            trials: 1,
            seed: 0,
            workers: 0,
            i_max: None,
            j_max: None,
            rules: toom::RULES.to_vec(),
            sweep_order: SweepOrder::Standard,
            stuck_policy: StuckPolicy::default(),
            variant: ZVariant::default(),
            paired_baseline: false,
            out: None,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |msg: String| Err(SimError::Config(msg));
        if !(0.0..=1.0).contains(&self.p_min) || !(0.0..=1.0).contains(&self.p_max) {
            return bad(format!(
                "p grid [{}, {}] outside [0, 1]",
                self.p_min, self.p_max
            ));
        }
        if self.p_min > self.p_max {
            return bad("p-min exceeds p-max".into());
        }
        if self.p_steps == 0 {
            return bad("need at least one p step".into());
        }
        if self.p_steps > 1 && self.p_min == self.p_max {
            return bad("p-steps > 1 needs distinct p-min and p-max".into());
        }
        if self.trials == 0 {
            return bad("need at least one trial".into());
        }
        match (self.channel, self.family) {
            (Channel::Erasure, _) => {}
            (_, Family::Solid { .. }) => {}
            (channel, family) => {
                return bad(format!(
                    "channel {channel} is only defined for the solid code, not {family}"
                ));
            }
        }
        if self.paired_baseline
            && !(self.channel == Channel::Erasure && matches!(self.family, Family::Welded { .. }))
        {
            return bad("paired baseline is defined for welded erasure runs".into());
        }
        if self.rules.is_empty() {
            return bad("empty rule schedule".into());
        }
        Ok(())
    }

    pub fn p_grid(&self) -> Vec<f64> {
        if self.p_steps == 1 {
            return vec![self.p_min];
        }
        (0..self.p_steps)
            .map(|i| self.p_min + (self.p_max - self.p_min) * i as f64 / (self.p_steps - 1) as f64)
            .collect()
    }

    pub fn build_code(&self) -> Result<CodeSpec, SimError> {
        Ok(match self.family {
            Family::Periodic3d { ell } => CodeSpec::periodic(ell)?,
            Family::Solid { ell } => CodeSpec::solid(ell)?,
            Family::Welded { ell, r } => CodeSpec::welded(ell, r)?,
        })
    }

    fn ell(&self) -> usize {
        match self.family {
            Family::Periodic3d { ell } | Family::Solid { ell } | Family::Welded { ell, .. } => ell,
        }
    }

    fn r(&self) -> usize {
        match self.family {
            Family::Welded { r, .. } => r,
            _ => 0,
        }
    }

    pub fn limits(&self) -> (usize, usize) {
        let (di, dj) = toom::default_limits(self.ell());
        (self.i_max.unwrap_or(di), self.j_max.unwrap_or(dj))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrialOutcome {
    Success,
    ZFail,
    XFail,
    BothFail,
    DecoderFailure,
}

impl TrialOutcome {
    pub fn failed(self) -> bool {
        self != TrialOutcome::Success
    }

    fn from_flags(z_failed: bool, x_failed: bool) -> Self {
        match (z_failed, x_failed) {
            (false, false) => TrialOutcome::Success,
            (true, false) => TrialOutcome::ZFail,
            (false, true) => TrialOutcome::XFail,
            (true, true) => TrialOutcome::BothFail,
        }
    }
}

/// Per-point tallies; merged commutatively across workers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Tally {
    pub trials: u64,
    pub failures: u64,
    pub z_failures: u64,
    pub x_failures: u64,
    pub decoder_failures: u64,
    pub baseline_failures: u64,
}

impl Tally {
    fn absorb(&mut self, outcome: TrialOutcome) {
        self.trials += 1;
        if outcome.failed() {
            self.failures += 1;
        }
        match outcome {
            TrialOutcome::ZFail | TrialOutcome::BothFail => self.z_failures += 1,
            _ => {}
        }
        match outcome {
            TrialOutcome::XFail | TrialOutcome::BothFail => self.x_failures += 1,
            _ => {}
        }
        if outcome == TrialOutcome::DecoderFailure {
            self.decoder_failures += 1;
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.trials += other.trials;
        self.failures += other.failures;
        self.z_failures += other.z_failures;
        self.x_failures += other.x_failures;
        self.decoder_failures += other.decoder_failures;
        self.baseline_failures += other.baseline_failures;
        self
    }
}

/// One record per swept point.
#[derive(Clone, Debug)]
pub struct SimResult {
    pub family: Family,
    pub channel: Channel,
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    pub z_failures: u64,
    pub x_failures: u64,
    pub decoder_failures: u64,
    pub baseline_failures: Option<u64>,
    pub failure_rate: f64,
    pub std_err: f64,
    pub seed: u64,
    pub elapsed_ms: u128,
}

pub fn standard_error(failures: u64, trials: u64) -> f64 {
    let f = failures as f64 / trials as f64;
    (f * (1.0 - f) / trials as f64).sqrt()
}

/// Wilson score interval at z=1.96, for small counts near thresholds.
pub fn wilson_interval(failures: u64, trials: u64) -> (f64, f64) {
    let z = 1.96f64;
    let n = trials as f64;
    let f = failures as f64 / n;
    let denom = 1.0 + z * z / n;
    let center = (f + z * z / (2.0 * n)) / denom;
    let half = z * (f * (1.0 - f) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Everything immutable a trial needs, shared across workers.
pub struct TrialContext {
    pub code: CodeSpec,
    pub channel: Channel,
    pub toom: Option<ToomDecoder>,
    pub i_max: usize,
    pub j_max: usize,
    pub rules: Vec<toom::Rule>,
    pub sweep_order: SweepOrder,
    pub stuck_policy: StuckPolicy,
    pub variant: ZVariant,
    pub paired_baseline: bool,
}

impl TrialContext {
    pub fn from_config(config: &SimConfig) -> Result<Self, SimError> {
        config.validate()?;
        let code = config.build_code()?;
        let toom = if config.channel == Channel::BitFlip {
            Some(ToomDecoder::new(&code)?)
        } else {
            None
        };
        let (i_max, j_max) = config.limits();
        Ok(TrialContext {
            code,
            channel: config.channel,
            toom,
            i_max,
            j_max,
            rules: config.rules.clone(),
            sweep_order: config.sweep_order,
            stuck_policy: config.stuck_policy,
            variant: config.variant,
            paired_baseline: config.paired_baseline,
        })
    }
}

/// Run one trial: sample the channel, decode, classify the residual.
/// Returns the main outcome and, for paired runs, the baseline outcome on
/// the identical sample.
pub fn run_trial(
    ctx: &TrialContext,
    p: f64,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<(TrialOutcome, Option<TrialOutcome>), SimError> {
    let code = &ctx.code;
    match ctx.channel {
        Channel::BitFlip => {
            let truth = noise::sample_bitflip(code.n, p, rng)?;
            let tau = code.t.syndrome_of(&truth.x);
            let decoder = ctx.toom.as_ref().expect("toom decoder prepared");
            let outcome =
                match decoder.decode(&tau, ctx.i_max, ctx.j_max, &ctx.rules, ctx.sweep_order) {
                    DecodeOutcome::Estimate(est) => {
                        let mut residual = truth;
                        residual.x.xor_assign(&est);
                        let (z_failed, x_failed) = code::is_logical_failure(code, &residual)?;
                        TrialOutcome::from_flags(z_failed, x_failed)
                    }
                    DecodeOutcome::Failure(_) => TrialOutcome::DecoderFailure,
                };
            Ok((outcome, None))
        }
        Channel::PhaseFlip => {
            let truth = noise::sample_phaseflip(code.n, p, rng)?;
            let sigma = code.h.syndrome_of(&truth.z);
            let est = matching::decode_phase(code, &sigma)?;
            let mut residual = truth;
            residual.z.xor_assign(&est);
            let (z_failed, x_failed) = code::is_logical_failure(code, &residual)?;
            Ok((TrialOutcome::from_flags(z_failed, x_failed), None))
        }
        Channel::Erasure => {
            let sample = noise::sample_erasure(code.n, p, rng)?;
            let syn = code::syndrome(code, &sample.induced)?;
            let main = erasure_outcome(ctx, &sample, &syn)?;
            let baseline = if ctx.paired_baseline {
                Some(baseline_outcome(ctx, &sample, &syn)?)
            } else {
                None
            };
            Ok((main, baseline))
        }
    }
}

fn erasure_outcome(
    ctx: &TrialContext,
    sample: &noise::ErasureSample,
    syn: &code::Syndrome,
) -> Result<TrialOutcome, SimError> {
    let code = &ctx.code;
    let welded_code = matches!(code.family, Family::Welded { .. });
    let est_z = if welded_code {
        welded::decode_welded_z(code, &sample.erased, &syn.sigma)?
    } else {
        erasure::decode_erasure_z(code, &sample.erased, &syn.sigma, ctx.variant)?
    };
    let out_x = if welded_code {
        welded::decode_welded_x(code, &sample.erased, &syn.tau, ctx.stuck_policy)?
    } else {
        erasure::decode_erasure_x(code, &sample.erased, &syn.tau, ctx.stuck_policy)?
    };
    let est_x = match out_x {
        DecodeOutcome::Estimate(e) => e,
        DecodeOutcome::Failure(_) => return Ok(TrialOutcome::DecoderFailure),
    };
    let mut residual = sample.induced.clone();
    residual.z.xor_assign(&est_z);
    residual.x.xor_assign(&est_x);
    let (z_failed, x_failed) = code::is_logical_failure(code, &residual)?;
    Ok(TrialOutcome::from_flags(z_failed, x_failed))
}

fn baseline_outcome(
    ctx: &TrialContext,
    sample: &noise::ErasureSample,
    syn: &code::Syndrome,
) -> Result<TrialOutcome, SimError> {
    let code = &ctx.code;
    let est = welded::decode_welded_gauss(code, &sample.erased, syn)?;
    let mut residual = sample.induced.clone();
    residual.xor_assign(&est);
    let (z_failed, x_failed) = code::is_logical_failure(code, &residual)?;
    Ok(TrialOutcome::from_flags(z_failed, x_failed))
}

/// Run all trials of one sweep point on the current rayon pool.
pub fn run_point(
    ctx: &TrialContext,
    seed: u64,
    point_index: u64,
    p: f64,
    trials: u64,
) -> Result<Tally, SimError> {
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = noise::trial_rng(seed, point_index, trial);
            let (main, baseline) = run_trial(ctx, p, &mut rng)?;
            let mut tally = Tally::default();
            tally.absorb(main);
            if baseline.is_some_and(|b| b.failed()) {
                tally.baseline_failures = 1;
            }
            Ok(tally)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
}

/// Sweep the whole p grid. Results are deterministic for a fixed seed
/// independent of worker count; the CSV is written atomically at the end.
pub fn run_sweep(config: &SimConfig) -> Result<Vec<SimResult>, SimError> {
    config.validate()?;
    let ctx = TrialContext::from_config(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| SimError::Config(format!("worker pool: {e}")))?;
    let mut results = Vec::new();
    for (point_index, p) in config.p_grid().into_iter().enumerate() {
        let start = Instant::now();
        let tally =
            pool.install(|| run_point(&ctx, config.seed, point_index as u64, p, config.trials))?;
        results.push(SimResult {
            family: config.family,
            channel: config.channel,
            p,
            trials: tally.trials,
            failures: tally.failures,
            z_failures: tally.z_failures,
            x_failures: tally.x_failures,
            decoder_failures: tally.decoder_failures,
            baseline_failures: config.paired_baseline.then_some(tally.baseline_failures),
            failure_rate: tally.failures as f64 / tally.trials as f64,
            std_err: standard_error(tally.failures, tally.trials),
            seed: config.seed,
            elapsed_ms: start.elapsed().as_millis(),
        });
    }
    if let Some(path) = &config.out {
        write_csv_atomic(path, config, &results, |r| r.failures)?;
        if config.paired_baseline {
            let baseline_path = baseline_path(path);
            write_csv_atomic(&baseline_path, config, &results, |r| {
                r.baseline_failures.unwrap_or(0)
            })?;
        }
    }
    Ok(results)
}

pub fn baseline_path(path: &Path) -> PathBuf {
    let mut name = path.file_stem().unwrap_or_default().to_os_string();
    name.push(".gauss.csv");
    path.with_file_name(name)
}

pub const CSV_HEADER: &str =
    "family,ell,R,channel,p,trials,failures,failure_rate,stderr,seed,elapsed_ms";

fn write_csv_atomic(
    path: &Path,
    config: &SimConfig,
    results: &[SimResult],
    failures: impl Fn(&SimResult) -> u64,
) -> Result<(), SimError> {
    let mut body = String::new();
    body.push_str(CSV_HEADER);
    body.push('\n');
    for r in results {
        let f = failures(r);
        body.push_str(&format!(
            "{},{},{},{},{:.6},{},{},{:.6},{:.6},{},{}\n",
            r.family,
            config.ell(),
            config.r(),
            r.channel,
            r.p,
            r.trials,
            f,
            f as f64 / r.trials as f64,
            standard_error(f, r.trials),
            r.seed,
            r.elapsed_ms
        ));
    }
    let tmp = path.with_extension("csv.tmp");
    {
        let mut file = std::fs::File::create(&tmp)?;
        file.write_all(body.as_bytes())?;
        file.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}
