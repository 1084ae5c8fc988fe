use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use perikon_core::scenarios::{
    presets, run_homogenize_sweep, run_impact, run_wave_modulus, ImpactOptions, ScenarioConfig, ScenarioKind,
};
use perikon_core::{Error, Result};

/// Peridynamic simulation of wet concrete under impact.
#[derive(Parser)]
#[command(name = "perikon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Effective moduli over a porosity and saturation grid.
    Homogenize(RunArgs),
    /// Effective modulus from stress-wave speed.
    Wave(RunArgs),
    /// Projectile impact on a target.
    Impact(ImpactArgs),
    /// Parse and check a configuration without running it.
    Validate(ConfigArg),
    /// Print a shipped configuration.
    Preset {
        /// Preset name, e.g. desk-4.2.
        name: String,
    },
}

#[derive(Args)]
struct ConfigArg {
    /// Configuration file, or the name of a shipped preset.
    #[arg(long, short)]
    config: String,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Output directory.
    #[arg(long, short)]
    out: PathBuf,
    /// Worker threads; results do not depend on this.
    #[arg(long, env = "PERIKON_THREADS")]
    threads: Option<usize>,
    /// Override the mesostructure seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ImpactArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Resume from a checkpoint written by an earlier run.
    #[arg(long)]
    restart: Option<PathBuf>,
    /// Stop after this many steps.
    #[arg(long)]
    max_steps: Option<u64>,
}

fn load(arg: &ConfigArg) -> Result<ScenarioConfig> {
    let path = Path::new(&arg.config);
    if !path.exists() {
        if let Some(text) = presets::get(&arg.config) {
            return ScenarioConfig::from_toml(text);
        }
    }
    ScenarioConfig::load(path)
}

fn prepare(args: &RunArgs, kind: ScenarioKind) -> Result<ScenarioConfig> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    let mut cfg = load(&args.config)?;
    if cfg.kind != kind {
        return Err(Error::Config(format!(
            "configuration is a {:?} scenario, not {kind:?}",
            cfg.kind
        )));
    }
    if let (Some(seed), Some(meso)) = (args.seed, cfg.meso.as_mut()) {
        meso.seed = seed;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Homogenize(args) => {
            let cfg = prepare(&args, ScenarioKind::HomogenizeSweep)?;
            let rows = run_homogenize_sweep(&cfg, &args.out)?;
            println!("wrote {} rows to {}", rows.len(), args.out.join("homogenize.csv").display());
        }
        Command::Wave(args) => {
            let cfg = prepare(&args, ScenarioKind::WaveModulus)?;
            let report = run_wave_modulus(&cfg, &args.out)?;
            println!("{:>10} {:>10} {:>12} {:>10}", "w", "phi", "C_w (m/s)", "E*/E_m");
            for r in &report.rows {
                println!(
                    "{:>10.3} {:>10.3} {:>12.1} {:>10.4}",
                    r.saturation, r.porosity, r.wave_speed, r.modulus_ratio
                );
            }
        }
        Command::Impact(args) => {
            let cfg = prepare(&args.run, ScenarioKind::Impact)?;
            let options = ImpactOptions {
                restart: args.restart,
                max_steps: args.max_steps,
            };
            let report = run_impact(&cfg, &args.run.out, &options)?;
            let m = &report.metrics;
            println!("points             {}", report.points);
            println!("steps              {} (dt = {:.3e} s)", m.steps, m.dt);
            println!("residual velocity  {:.2} m/s", m.residual_velocity);
            println!("penetration depth  {:.4} m", m.penetration_depth);
            println!("crater radius      {:.1} mm", 1e3 * m.crater.crater_radius);
            println!("crater depth       {:.1} mm", 1e3 * m.crater.crater_depth);
            println!("scabbing radius    {:.1} mm", 1e3 * m.crater.scabbing_radius);
            println!("scabbing depth     {:.1} mm", 1e3 * m.crater.scabbing_depth);
        }
        Command::Validate(arg) => {
            let cfg = load(&arg)?;
            println!("{}: valid {:?} configuration", cfg.name, cfg.kind);
        }
        Command::Preset { name } => {
            let text = presets::get(&name).ok_or_else(|| Error::Config(format!("no preset named {name}")))?;
            print!("{text}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("perikon: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
