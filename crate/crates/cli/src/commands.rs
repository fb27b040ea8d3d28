use std::io::Write;
use std::path::{Path, PathBuf};

use bangbang_core::bath::BathSpec;
use bangbang_core::control::{gamma_p, stroboscopic_series, PulseTrainSpec};
use bangbang_core::decay::{free_curve, gamma0};
use bangbang_core::exact::Coupling;
use bangbang_core::pauli::{cumulative_frames, zeroth_average, Axis, GateSequence};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::config::{CouplingKind, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{emit_csv, float, plot_script, write_plot};
use crate::presets::Preset;
use crate::suite::{
    run_case, standard_cases, CaseReport, CaseSettings, OracleCase, Probe, DEFAULT_TOL,
};

/// Environment variable holding the worker count for parallel commands.
pub const WORKERS_ENV: &str = "BANGBANG_WORKERS";

pub const FREE_HEADER: [&str; 3] = ["t", "gamma", "coherence"];
pub const PULSED_HEADER: [&str; 4] = ["N", "t", "gamma", "coherence"];
pub const SWEEP_HEADER: [&str; 6] = ["ratio", "delta_t", "N", "gamma_p", "gamma0", "suppression"];

/// What a successful run concluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailed => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bangbang", version, about = "Bang-bang decoherence control toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Free-decay coherence curve as CSV (t, gamma, coherence).
    FreeDecay(FreeDecayArgs),
    /// Stroboscopic coherence under a pi_x train as CSV (N, t, gamma, coherence).
    Pulsed(PulsedArgs),
    /// Zeroth-order average of a pulse sequence; exit 0 iff all axes decouple.
    VerifySeq(VerifySeqArgs),
    /// Analytic decay exponents against the exact small-bath engine.
    ExactCompare(ExactCompareArgs),
    /// Suppression ratio Gamma_P / Gamma_0 across delta_t / tau_c at fixed t.
    Sweep(SweepArgs),
}

#[derive(Debug, Args, Default)]
pub struct Source {
    /// Built-in figure configuration.
    #[arg(long, value_parser = clap::value_parser!(Preset))]
    pub preset: Option<Preset>,
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct Outputs {
    /// CSV destination (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a plotting script for the CSV.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct FreeDecayArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[command(flatten)]
    pub outputs: Outputs,
}

#[derive(Debug, Args, Default)]
pub struct PulsedArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, allow_hyphen_values = true)]
    pub delta_t: Option<f64>,
    #[arg(long)]
    pub cycles: Option<u32>,
    #[command(flatten)]
    pub outputs: Outputs,
}

#[derive(Debug, Args, Default)]
pub struct VerifySeqArgs {
    /// Sequence text, e.g. "d:1/2, p:x, d:1, p:x, d:1/2".
    pub sequence: Option<String>,
    /// Coupling axes to check, e.g. "z" or "xyz".
    #[arg(long)]
    pub axes: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct ExactCompareArgs {
    /// Discrete-bath configuration; the built-in six-case suite when absent.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: Source,
    /// Fixed echo time t = 2 N delta_t.
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub ratio_min: Option<f64>,
    #[arg(long)]
    pub ratio_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[command(flatten)]
    pub outputs: Outputs,
}

pub fn run<W: Write, E: Write>(cli: Cli, stdout: &mut W, stderr: &mut E) -> CliResult<Status> {
    match cli.command {
        Command::FreeDecay(a) => free_decay(&a, stdout),
        Command::Pulsed(a) => pulsed(&a, stdout),
        Command::VerifySeq(a) => verify_seq(&a, stdout, stderr),
        Command::ExactCompare(a) => exact_compare(&a, stdout),
        Command::Sweep(a) => sweep(&a, stdout, stderr),
    }
}

fn load(source: &Source, fallback: Option<Preset>) -> CliResult<RunConfig> {
    match (source.preset, &source.config) {
        (Some(_), Some(_)) => Err(CliError::Config("pass either --preset or --config, not both".into())),
        (Some(p), None) => Ok(p.config()),
        (None, Some(path)) => RunConfig::load(path),
        (None, None) => fallback
            .map(Preset::config)
            .ok_or_else(|| CliError::Config("no input: pass --preset or --config".into())),
    }
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{name} must be > 0, got {v}")))
    }
}

fn required<T>(name: &str, v: Option<T>) -> CliResult<T> {
    v.ok_or_else(|| CliError::Config(format!("missing value for {name}")))
}

fn csv_target(outputs: &Outputs, cfg: &RunConfig) -> (Option<PathBuf>, Option<PathBuf>) {
    let o = cfg.output();
    (
        outputs.out.clone().or(o.csv),
        outputs.plot.clone().or(o.plot),
    )
}

fn finish_plot(
    csv: Option<&Path>,
    plot: Option<&Path>,
    x: &str,
    y: &str,
    title: &str,
    log_log: bool,
) -> CliResult<()> {
    match (csv, plot) {
        (_, None) => Ok(()),
        (None, Some(_)) => Err(CliError::Config("--plot needs a CSV file (--out)".into())),
        (Some(c), Some(p)) => write_plot(p, &plot_script(c, x, y, title, log_log)),
    }
}

pub fn free_decay<W: Write>(args: &FreeDecayArgs, stdout: &mut W) -> CliResult<Status> {
    let cfg = load(&args.source, None)?;
    let spec = cfg.bath_spec()?;
    let scale = cfg.time_scale()?;
    let free = cfg.free.clone().unwrap_or_default();
    let t_max = positive("t_max", required("t_max", args.t_max.or(free.t_max))?)?;
    let samples = args.samples.or(free.samples).unwrap_or(201);
    if samples < 2 {
        return Err(CliError::Config("samples must be >= 2".into()));
    }
    let curve = free_curve(&spec, t_max * scale, samples)?;
    let rows: Vec<Vec<String>> = curve
        .samples
        .iter()
        .map(|s| vec![float(s.t / scale), float(s.gamma), float(s.coherence)])
        .collect();
    let (csv, plot) = csv_target(&args.outputs, &cfg);
    emit_csv(csv.as_deref(), stdout, &FREE_HEADER, &rows)?;
    finish_plot(csv.as_deref(), plot.as_deref(), "t", "coherence", "free decay", false)?;
    Ok(Status::Ok)
}

pub fn pulsed<W: Write>(args: &PulsedArgs, stdout: &mut W) -> CliResult<Status> {
    let cfg = load(&args.source, None)?;
    let spec = cfg.bath_spec()?;
    let scale = cfg.time_scale()?;
    let p = cfg.pulsed.clone().unwrap_or_default();
    let dt = positive("delta_t", required("delta_t", args.delta_t.or(p.delta_t))?)?;
    let cycles = args.cycles.or(p.cycles).unwrap_or(50);
    if cycles == 0 {
        return Err(CliError::Config("cycles must be >= 1".into()));
    }
    let curve = stroboscopic_series(&spec, dt * scale, cycles)?;
    let rows: Vec<Vec<String>> = curve
        .samples
        .iter()
        .enumerate()
        .map(|(n, s)| vec![n.to_string(), float(s.t / scale), float(s.gamma), float(s.coherence)])
        .collect();
    let (csv, plot) = csv_target(&args.outputs, &cfg);
    emit_csv(csv.as_deref(), stdout, &PULSED_HEADER, &rows)?;
    finish_plot(csv.as_deref(), plot.as_deref(), "t", "coherence", "pulsed decay", false)?;
    Ok(Status::Ok)
}

pub fn verify_seq<W: Write, E: Write>(
    args: &VerifySeqArgs,
    stdout: &mut W,
    stderr: &mut E,
) -> CliResult<Status> {
    let cfg = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let from_cfg = cfg.sequence.clone().unwrap_or_default();
    let text = required("sequence", args.sequence.clone().or(from_cfg.text))?;
    let axes_text = args.axes.clone().or(from_cfg.axes).unwrap_or_else(|| "z".into());
    let seq = GateSequence::parse(&text)?;
    let axes = Axis::parse_set(&axes_text)?;
    let report = zeroth_average(&seq, &axes)?;
    let io = |e| CliError::io("stdout", e);

    let frames: Vec<String> = cumulative_frames(&seq).iter().map(ToString::to_string).collect();
    writeln!(stdout, "sequence: {seq}").map_err(io)?;
    writeln!(stdout, "cycle time: {} base units", report.cycle_units).map_err(io)?;
    writeln!(stdout, "frames: {}", frames.join(" ")).map_err(io)?;
    writeln!(
        stdout,
        "cyclic: {} (residual {})",
        if report.cyclicity.cyclic { "yes" } else { "no" },
        report.cyclicity.residual
    )
    .map_err(io)?;
    if !report.cyclicity.cyclic {
        writeln!(stderr, "warning: sequence is not cyclic; the average describes one cycle only")
            .map_err(|e| CliError::io("stderr", e))?;
    }
    for a in &report.couplings {
        if a.decoupled() {
            writeln!(stdout, "axis {}: DECOUPLED", a.axis).map_err(io)?;
        } else {
            writeln!(stdout, "axis {}: NOT DECOUPLED, average = {}", a.axis, a.coefficients)
                .map_err(io)?;
        }
    }
    writeln!(stdout, "system sigma_z average: {}", report.system).map_err(io)?;
    let ok = report.all_decoupled();
    writeln!(stdout, "verdict: {}", if ok { "DECOUPLED" } else { "NOT DECOUPLED" }).map_err(io)?;
    Ok(if ok { Status::Ok } else { Status::VerificationFailed })
}

/// Thread pool sized by [`WORKERS_ENV`], or rayon's default when unset.
pub fn worker_pool() -> CliResult<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Config(format!("{WORKERS_ENV} must be a positive integer, got '{v}'")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Config(format!("worker pool: {e}")))
}

fn compare_plan(cfg: Option<&RunConfig>) -> CliResult<Vec<(OracleCase, CaseSettings)>> {
    let Some(cfg) = cfg else {
        return Ok(standard_cases()
            .into_iter()
            .map(|c| {
                let s = CaseSettings::standard(&c);
                (c, s)
            })
            .collect());
    };
    let spec = cfg.bath_spec()?;
    let modes = spec
        .modes()
        .ok_or_else(|| CliError::Config("exact-compare needs a discrete bath".into()))?
        .to_vec();
    let scale = cfg.time_scale()?;
    let case = OracleCase {
        name: "config".into(),
        modes,
        temperature: spec.temperature(),
    };
    let mut s = CaseSettings::standard(&case);
    if let Some(e) = &cfg.exact {
        s.omega0 = e.omega0.unwrap_or(s.omega0);
        s.n_max = e.n_max;
        s.margin = e.margin.unwrap_or(s.margin);
        s.coupling = match e.coupling {
            CouplingKind::Dephasing => Coupling::Dephasing,
            CouplingKind::JaynesCummings => {
                return Err(CliError::Config(
                    "exact-compare checks the dephasing formulas; coupling must be \"dephasing\"".into(),
                ))
            }
        };
        if let Some(t) = &e.times {
            s.times = t.clone();
        }
        if let Some(d) = &e.delta_t {
            s.delta_ts = d.clone();
        }
        s.cycles = e.cycles.unwrap_or(s.cycles);
    }
    for t in &mut s.times {
        if !(t.is_finite() && *t >= 0.0) {
            return Err(CliError::Config(format!("times must be >= 0, got {t}")));
        }
        *t *= scale;
    }
    for d in &mut s.delta_ts {
        *d = positive("delta_t", *d)? * scale;
    }
    Ok(vec![(case, s)])
}

fn describe(p: Probe) -> String {
    match p {
        Probe::Free { t } => format!("free   t={t:.4}"),
        Probe::Pulsed { delta_t, n } => format!("pulsed dt={delta_t:.4} N={n}"),
    }
}

pub fn exact_compare<W: Write>(args: &ExactCompareArgs, stdout: &mut W) -> CliResult<Status> {
    let cfg = args.config.as_deref().map(RunConfig::load).transpose()?;
    let tol = args
        .tol
        .or_else(|| cfg.as_ref()?.tolerances.as_ref()?.exact_compare)
        .unwrap_or(DEFAULT_TOL);
    positive("tol", tol)?;
    let scan_tol = cfg
        .as_ref()
        .and_then(|c| c.tolerances.as_ref()?.scan)
        .unwrap_or(bangbang_core::exact::SCAN_TOL);
    let plan = compare_plan(cfg.as_ref())?;
    let pool = worker_pool()?;
    let reports: Vec<CliResult<CaseReport>> =
        pool.install(|| plan.par_iter().map(|(c, s)| run_case(c, s)).collect());

    let io = |e| CliError::io("stdout", e);
    let mut all_ok = true;
    for r in reports {
        let r = r?;
        let converged = r.convergence.map(|d| d < scan_tol);
        writeln!(
            stdout,
            "case {}: truncation {:?} (dim {}), convergence {}",
            r.name,
            r.truncation,
            r.dim,
            match r.convergence {
                Some(d) => format!(
                    "max|dGamma| = {d:.3e} at +{} levels {}",
                    crate::suite::CONVERGENCE_STEP,
                    if d < scan_tol { "PASS" } else { "FAIL" }
                ),
                None => "not checked".into(),
            }
        )
        .map_err(io)?;
        for c in &r.comparisons {
            let ok = c.difference() < tol;
            writeln!(
                stdout,
                "  {:<24} analytic={:.9e} exact={:.9e} |diff|={:.3e} {}",
                describe(c.probe),
                c.analytic,
                c.exact,
                c.difference(),
                if ok { "PASS" } else { "FAIL" }
            )
            .map_err(io)?;
        }
        all_ok &= r.passed(tol) && converged != Some(false);
    }
    writeln!(stdout, "overall: {} (tol {tol:e})", if all_ok { "PASS" } else { "FAIL" }).map_err(io)?;
    Ok(if all_ok { Status::Ok } else { Status::VerificationFailed })
}

/// One sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub ratio: f64,
    pub delta_t: f64,
    pub n: u32,
    pub gamma_p: f64,
}

/// `points` log-spaced ratios `delta_t / tau_c`, snapped so that
/// `t = 2 N delta_t` holds with integer `N`.
pub fn sweep_points(
    spec: &BathSpec,
    t: f64,
    ratio_min: f64,
    ratio_max: f64,
    points: usize,
) -> CliResult<Vec<SweepPoint>> {
    positive("t", t)?;
    positive("ratio_min", ratio_min)?;
    positive("ratio_max", ratio_max)?;
    if ratio_max <= ratio_min || points < 2 {
        return Err(CliError::Config("need ratio_min < ratio_max and points >= 2".into()));
    }
    let tau_c = spec.correlation_time()?;
    let grid: Vec<(u32, f64)> = (0..points)
        .map(|i| {
            let f = i as f64 / (points - 1) as f64;
            let ratio = ratio_min * (ratio_max / ratio_min).powf(f);
            let n = (t / (2.0 * ratio * tau_c)).round().max(1.0) as u32;
            (n, t / (2.0 * n as f64))
        })
        .collect();
    let pool = worker_pool()?;
    let results: Vec<CliResult<SweepPoint>> = pool.install(|| {
        grid.par_iter()
            .map(|&(n, dt)| {
                let gamma_p = gamma_p(spec, &PulseTrainSpec::new(dt, n)?)?;
                Ok(SweepPoint {
                    ratio: dt / tau_c,
                    delta_t: dt,
                    n,
                    gamma_p,
                })
            })
            .collect()
    });
    results.into_iter().collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

pub fn sweep<W: Write, E: Write>(args: &SweepArgs, stdout: &mut W, stderr: &mut E) -> CliResult<Status> {
    let cfg = load(&args.source, Some(Preset::Fig1H))?;
    let spec = cfg.bath_spec()?;
    let scale = cfg.time_scale()?;
    let sc = cfg.sweep.clone().unwrap_or_default();
    // default echo time: 20 tau_c
    let default_t = 20.0 * spec.correlation_time()? / scale;
    let t = args.t.or(sc.t).unwrap_or(default_t) * scale;
    let points = sweep_points(
        &spec,
        t,
        args.ratio_min.or(sc.ratio_min).unwrap_or(0.01),
        args.ratio_max.or(sc.ratio_max).unwrap_or(0.1),
        args.points.or(sc.points).unwrap_or(7),
    )?;
    let g0 = gamma0(&spec, t)?;
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            vec![
                float(p.ratio),
                float(p.delta_t / scale),
                p.n.to_string(),
                float(p.gamma_p),
                float(g0),
                float(p.gamma_p / g0),
            ]
        })
        .collect();
    let (csv, plot) = csv_target(&args.outputs, &cfg);
    emit_csv(csv.as_deref(), stdout, &SWEEP_HEADER, &rows)?;
    finish_plot(csv.as_deref(), plot.as_deref(), "ratio", "suppression", "suppression sweep", true)?;
    let x: Vec<f64> = points.iter().map(|p| p.delta_t).collect();
    let y: Vec<f64> = points.iter().map(|p| p.gamma_p).collect();
    let summary = format!("fitted slope d ln Gamma_P / d ln delta_t = {:.4}", log_log_slope(&x, &y));
    if csv.is_some() {
        writeln!(stdout, "{summary}").map_err(|e| CliError::io("stdout", e))?;
    } else {
        writeln!(stderr, "{summary}").map_err(|e| CliError::io("stderr", e))?;
    }
    Ok(Status::Ok)
}
