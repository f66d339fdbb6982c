//! Campaign runner for ultrasonic anchor layout optimization.
//!
//! Exit codes: 0 success, 2 config validation failure, 3 simulation
//! infeasibility, 4 optimization failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ultraloc::campaign::{
    export_tables, load_artifact, run_bounds, run_evaluate, run_optimize, run_sweep,
    write_artifact, write_sweep, CampaignConfig, CampaignMode, Preset, RunArtifact,
};
use ultraloc::Error;

#[derive(Parser)]
#[command(
    name = "ultraloc",
    version,
    about = "Anchor layout campaigns for ultrasonic indoor positioning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Desk,
    Paper,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Gaussian range model, no waveforms.
    Abstract,
    /// Signal-level simulation, direct path only.
    Signal,
    /// Signal-level simulation with wall reflections.
    #[value(name = "signal+reflections")]
    SignalReflections,
}

#[derive(Args)]
struct RunArgs {
    /// Campaign config file (TOML). Defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; overrides the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for run artifacts.
    #[arg(long, default_value = "runs")]
    out: PathBuf,
    /// Scale preset overriding grid and realization counts.
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    /// Propagation mode override.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the configured layout over the mobile grid.
    Evaluate(RunArgs),
    /// Optimize an anchor layout with the particle swarm, then evaluate it.
    Optimize(RunArgs),
    /// Optimize and evaluate for each configured anchor count.
    Sweep(RunArgs),
    /// Compare empirical RMSE against the position error bound.
    Bounds(RunArgs),
    /// Re-export the CSV tables of an existing run directory.
    Export {
        /// Run directory containing summary.json.
        run_dir: PathBuf,
        /// Destination directory; defaults to the run directory itself.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn resolve_config(args: &RunArgs, mode: CampaignMode) -> Result<CampaignConfig, Error> {
    let mut cfg = match (&args.config, args.seed) {
        (Some(path), _) => CampaignConfig::load(path)?,
        (None, Some(seed)) => CampaignConfig::new(mode, seed),
        (None, None) => {
            return Err(Error::InvalidConfig(
                "either --config or --seed is required (runs never self-seed)".into(),
            ))
        }
    };
    cfg.mode = mode;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(preset) = args.preset {
        cfg.apply_preset(match preset {
            PresetArg::Desk => Preset::Desk,
            PresetArg::Paper => Preset::Paper,
        });
    }
    if let Some(mode) = args.mode {
        cfg.propagation.mode = match mode {
            ModeArg::Abstract => ultraloc::acoustics::PropagationMode::AbstractGaussian,
            ModeArg::Signal => ultraloc::acoustics::PropagationMode::DirectPath,
            ModeArg::SignalReflections => ultraloc::acoustics::PropagationMode::ImageSource,
        };
    }
    Ok(cfg)
}

fn print_artifact(artifact: &RunArtifact) {
    println!(
        "  M={} sigma={:.4} m  mu={:.4} m  P95={:.4} m  variance={:.5} m^2",
        artifact.anchor_count,
        artifact.stats.sigma,
        artifact.stats.mu,
        artifact.stats.p95,
        artifact.stats.variance,
    );
    if let Some(dop) = artifact.mean_dop {
        println!("  mean DOP {dop:.3}");
    }
    if let Some(bounds) = &artifact.bounds {
        println!(
            "  median RMSE {:.4} m vs median sqrt(PEB) {:.4} m ({} positions without a bound)",
            bounds.rmse_median_m, bounds.peb_sqrt_median_m, bounds.undefined_peb_positions
        );
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Evaluate(args) => {
            let cfg = resolve_config(&args, CampaignMode::Evaluate)?;
            let artifact = run_evaluate(&cfg)?;
            let dir = write_artifact(&artifact, &args.out)?;
            println!("evaluate run {} -> {}", artifact.run_id, dir.display());
            print_artifact(&artifact);
        }
        Command::Optimize(args) => {
            let cfg = resolve_config(&args, CampaignMode::Optimize)?;
            let artifact = run_optimize(&cfg)?;
            let dir = write_artifact(&artifact, &args.out)?;
            println!("optimize run {} -> {}", artifact.run_id, dir.display());
            println!("  iterations: {}", artifact.iterations.len().saturating_sub(1));
            print_artifact(&artifact);
        }
        Command::Sweep(args) => {
            let cfg = resolve_config(&args, CampaignMode::Sweep)?;
            let artifacts = run_sweep(&cfg)?;
            let dir = write_sweep(&artifacts, &args.out)?;
            println!("sweep run {} -> {}", artifacts[0].run_id, dir.display());
            for artifact in &artifacts {
                print_artifact(artifact);
            }
        }
        Command::Bounds(args) => {
            let cfg = resolve_config(&args, CampaignMode::Bounds)?;
            let artifact = run_bounds(&cfg)?;
            let dir = write_artifact(&artifact, &args.out)?;
            println!("bounds run {} -> {}", artifact.run_id, dir.display());
            print_artifact(&artifact);
        }
        Command::Export { run_dir, out } => {
            let artifact = load_artifact(&run_dir)?;
            let dest = out.unwrap_or_else(|| run_dir.clone());
            export_tables(&artifact, &dest)?;
            println!("exported tables of run {} -> {}", artifact.run_id, dest.display());
        }
    }
    Ok(())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidConfig(_) | Error::ConfigParse(_) => 2,
        Error::InfeasibleCapture { .. }
        | Error::NoPeak
        | Error::InvalidArgument(_)
        | Error::Underdetermined { .. }
        | Error::DegenerateGeometry { .. }
        | Error::DegenerateData(_) => 3,
        Error::OptimizationFailed(_) | Error::BudgetExceeded { .. } => 4,
        Error::Io { .. } | Error::ArtifactParse(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
