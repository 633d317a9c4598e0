use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qec5_core::channels::{amplitude_damping_qubit, lift_channel, NoiseStep};
use qec5_core::experiment::{run_with, sweep_dt, Preset, RunOptions};
use qec5_core::linalg::max_abs_diff;
use qec5_core::{
    build_dephasing_matrix, CMatrix, DensityMatrix, DephasingModel, ExperimentConfig, FidelityTrace, NoiseConfig,
    QecEngine, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::FileConfig;
use crate::error::{CliError, Result};
use crate::output::{emit_csv, emit_sweep, write_sweep, write_trace, RunManifest};

#[derive(Debug, Parser)]
#[command(name = "qec5", version, about = "Five-qubit code fidelity simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one experiment described by a JSON config file.
    Run(RunArgs),
    /// Run one of the built-in figure scenarios.
    Preset(PresetArgs),
    /// Final corrected fidelity for a list of correction intervals.
    Sweep(SweepArgs),
    /// Check code, channel and round invariants and run the presets in
    /// validation mode.
    Validate(ValidateArgs),
    /// Time the correction round.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetName {
    Fig4,
    Fig5,
    Fig6,
}

impl From<PresetName> for Preset {
    fn from(p: PresetName) -> Self {
        match p {
            PresetName::Fig4 => Preset::Fig4,
            PresetName::Fig5 => Preset::Fig5,
            PresetName::Fig6 => Preset::Fig6,
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// CSV destination; the manifest goes next to it. Prints to stdout when
    /// omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Validate the state after every round.
    #[arg(long)]
    pub validate: bool,
}

#[derive(Debug, Args)]
pub struct PresetArgs {
    #[arg(value_enum)]
    pub name: PresetName,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Override the horizon, in units of ω0.
    #[arg(long)]
    pub total_time: Option<f64>,
    #[arg(long)]
    pub record_every: Option<usize>,
    #[arg(long)]
    pub validate: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Take the base scenario from a preset instead of a config file.
    #[arg(long, value_enum)]
    pub preset: Option<PresetName>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub dt: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Only run this preset; all three by default.
    #[arg(long, value_enum)]
    pub preset: Option<PresetName>,
    /// Skip the preset runs.
    #[arg(long)]
    pub skip_presets: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 200)]
    pub rounds: usize,
}

/// Parses `args` and executes the command, returning the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let stdout = io::stdout();
    match execute(cli.command, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Run(args) => cmd_run(&args, out),
        Command::Preset(args) => cmd_preset(&args, out),
        Command::Sweep(args) => cmd_sweep(&args, out),
        Command::Validate(args) => cmd_validate(&args, out),
        Command::Bench(args) => cmd_bench(&args, out),
    }
}

fn stdout_err(e: io::Error) -> CliError {
    CliError::io("<stdout>", e)
}

fn options(validate: bool) -> RunOptions {
    RunOptions { validate }
}

fn timed_run(cfg: &ExperimentConfig, validate: bool) -> Result<(FidelityTrace, Duration)> {
    let start = Instant::now();
    let trace = run_with(cfg, options(validate))?;
    Ok((trace, start.elapsed()))
}

fn summary(path: &Path, trace: &FidelityTrace, elapsed: Duration) -> String {
    let last = trace.last().expect("traces start with a t = 0 sample");
    let baseline = last
        .uncorrected
        .map_or(String::new(), |u| format!(" uncorrected={u:.6}"));
    format!(
        "{}: {} samples, t={} corrected={:.6}{baseline} ({:.2}s)",
        path.display(),
        trace.len(),
        last.time,
        last.corrected,
        elapsed.as_secs_f64()
    )
}

fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> Result<()> {
    let (cfg, _) = FileConfig::load(&args.config)?.resolve()?;
    let (trace, elapsed) = timed_run(&cfg, args.validate)?;
    match &args.out {
        Some(path) => {
            emit_csv(&trace, &RunManifest::new("run", &cfg, elapsed), path)?;
            writeln!(out, "{}", summary(path, &trace, elapsed)).map_err(stdout_err)
        }
        None => write_trace(&trace, out).map_err(stdout_err),
    }
}

/// `fig5_dt0.1.csv` for multi-trace presets, `fig4.csv` otherwise.
fn preset_file_name(preset: Preset, cfg: &ExperimentConfig, n_traces: usize) -> String {
    if n_traces == 1 {
        format!("{preset}.csv")
    } else {
        format!("{preset}_dt{}.csv", cfg.dt_qec)
    }
}

pub fn preset_configs(
    preset: Preset,
    total_time: Option<f64>,
    record_every: Option<usize>,
) -> Result<Vec<ExperimentConfig>> {
    let mut cfgs = preset.configs()?;
    for cfg in &mut cfgs {
        if let Some(t) = total_time {
            cfg.total_time = t;
        }
        if let Some(r) = record_every {
            cfg.record_every = r;
        }
    }
    Ok(cfgs)
}

fn cmd_preset(args: &PresetArgs, out: &mut dyn Write) -> Result<()> {
    let preset = Preset::from(args.name);
    let cfgs = preset_configs(preset, args.total_time, args.record_every)?;
    for cfg in &cfgs {
        let (trace, elapsed) = timed_run(cfg, args.validate)?;
        let path = args.out_dir.join(preset_file_name(preset, cfg, cfgs.len()));
        emit_csv(
            &trace,
            &RunManifest::new(format!("preset {preset}"), cfg, elapsed),
            &path,
        )?;
        writeln!(out, "{}", summary(&path, &trace, elapsed)).map_err(stdout_err)?;
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    let base = match (&args.config, args.preset) {
        (Some(path), _) => FileConfig::load(path)?.resolve()?.0,
        (None, Some(p)) => Preset::from(p).configs()?[0],
        (None, None) => ExperimentConfig::default(),
    };
    if let Some(bad) = args.dt.iter().find(|dt| !(**dt > 0.0 && dt.is_finite())) {
        return Err(CliError::Config(format!(
            "field `dt`: every value must be finite and > 0, got {bad}"
        )));
    }
    let start = Instant::now();
    let rows = sweep_dt(&base, &args.dt)?;
    let manifest = RunManifest::new("sweep", &base, start.elapsed()).with_dt_values(&args.dt);
    match &args.out {
        Some(path) => emit_sweep(&rows, &manifest, path)?,
        None => write_sweep(&rows, &mut *out).map_err(stdout_err)?,
    }
    Ok(())
}

fn random_density(rng: &mut impl Rng, n_qubits: usize) -> Result<DensityMatrix> {
    let d = 1 << n_qubits;
    let g = CMatrix::from_fn(d, d, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    let rho = rho.map(|v| v / tr);
    Ok(DensityMatrix::new((&rho + rho.adjoint()).scale(0.5))?)
}

fn check(out: &mut dyn Write, name: &str, residual: f64, tol: f64) -> Result<()> {
    if residual.is_nan() || residual > tol {
        return Err(CliError::Invariant(format!(
            "{name}: residual {residual:e} exceeds {tol:e}"
        )));
    }
    writeln!(out, "ok   {name:<44} residual {residual:.2e}").map_err(stdout_err)
}

fn cmd_validate(args: &ValidateArgs, out: &mut dyn Write) -> Result<()> {
    let engine = QecEngine::standard();
    check(out, "code tables", engine.tables().verify()?, 1e-12)?;

    for gamma in [0.0, 0.1, 0.5, 1.0] {
        let lifted = lift_channel(&amplitude_damping_qubit(gamma)?, 5)?;
        check(
            out,
            &format!("damping completeness, gamma={gamma}"),
            lifted.completeness_residual(),
            1e-12,
        )?;
    }
    for model in [DephasingModel::Independent, DephasingModel::Collective] {
        for n in 1..=5 {
            let d = build_dephasing_matrix(model, n, 1.0, 1.0)?;
            check(
                out,
                &format!("dephasing PSD, {model}, n={n}"),
                (-d.min_eigenvalue()).max(0.0),
                1e-10,
            )?;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..5 {
        let rho = random_density(&mut rng, 5)?;
        let a = engine.round_ancilla(&rho)?;
        let p = engine.round_projective(&rho)?;
        check(
            out,
            &format!("ancilla vs projector round #{k}"),
            max_abs_diff(a.matrix(), p.matrix()),
            1e-10,
        )?;
        if k == 0 {
            let dense = engine.round_ancilla_dense(&rho)?;
            check(
                out,
                "structured vs dense round",
                max_abs_diff(a.matrix(), dense.matrix()),
                1e-10,
            )?;
        }
    }

    if args.skip_presets {
        return Ok(());
    }
    let presets: Vec<Preset> = match args.preset {
        Some(p) => vec![p.into()],
        None => Preset::ALL.to_vec(),
    };
    for preset in presets {
        for cfg in preset.configs()? {
            let (trace, elapsed) = timed_run(&cfg, true)?;
            trace.check_invariants()?;
            writeln!(
                out,
                "ok   preset {preset} dt={} ({} rounds, {:.2}s)",
                cfg.dt_qec,
                cfg.n_rounds(),
                elapsed.as_secs_f64()
            )
            .map_err(stdout_err)?;
        }
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    if args.rounds == 0 {
        return Err(CliError::Config("field `rounds`: must be >= 1".into()));
    }
    let engine = QecEngine::standard();
    let rho = random_density(&mut ChaCha8Rng::seed_from_u64(11), 5)?;
    let step = NoiseStep::new(&NoiseConfig::default(), 5, 0.01)?;

    let time_it = |f: &dyn Fn() -> Result<()>, n: usize| -> Result<Vec<f64>> {
        f()?;
        (0..n)
            .map(|_| {
                let start = Instant::now();
                f()?;
                Ok(start.elapsed().as_secs_f64() * 1e3)
            })
            .collect()
    };
    let report = |out: &mut dyn Write, name: &str, mut ms: Vec<f64>| -> Result<()> {
        ms.sort_by(f64::total_cmp);
        let mean = ms.iter().sum::<f64>() / ms.len() as f64;
        writeln!(
            out,
            "{name:<18} n={:<5} mean {mean:8.3} ms  median {:8.3} ms  min {:8.3} ms",
            ms.len(),
            ms[ms.len() / 2],
            ms[0]
        )
        .map_err(stdout_err)
    };

    report(
        out,
        "qec round",
        time_it(
            &|| engine.round_ancilla(&rho).map(drop).map_err(Into::into),
            args.rounds,
        )?,
    )?;
    report(
        out,
        "noise step",
        time_it(&|| step.apply(&rho).map(drop).map_err(Into::into), args.rounds)?,
    )?;
    report(
        out,
        "projector round",
        time_it(
            &|| engine.round_projective(&rho).map(drop).map_err(Into::into),
            args.rounds,
        )?,
    )?;
    report(
        out,
        "dense round",
        time_it(&|| engine.round_ancilla_dense(&rho).map(drop).map_err(Into::into), 3)?,
    )?;

    let fast = engine.round_ancilla(&rho)?;
    let dense = engine.round_ancilla_dense(&rho)?;
    check(
        out,
        "structured vs dense round",
        max_abs_diff(fast.matrix(), dense.matrix()),
        1e-10,
    )
}
