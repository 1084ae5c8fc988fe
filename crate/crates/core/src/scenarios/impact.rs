//! Projectile impact on a target.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::solver::{checkpoint, Simulation};

use super::config::ScenarioConfig;
use super::metrics::{crater_metrics, CraterMetrics, DamageField};
use super::model::{build_simulation, Discretization};
use super::output::{ensure_dir, write_summary, write_vtk_fields, CsvTable};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct RunMetrics {
    /// Projectile speed along the impact direction at the end of the run.
    pub residual_velocity: f64,
    /// Largest deceleration magnitude seen (m/s²).
    pub peak_acceleration: f64,
    /// Deepest tip position below the entry face (m).
    pub penetration_depth: f64,
    #[serde(flatten)]
    pub crater: CraterMetrics,
    pub broken_bonds: usize,
    pub eos_clamps: u64,
    pub steps: u64,
    pub time: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpactReport {
    pub name: String,
    pub points: usize,
    pub bond_records: usize,
    pub prebroken_bonds: usize,
    pub metrics: RunMetrics,
}

#[derive(Debug, Clone, Default)]
pub struct ImpactOptions {
    /// Resume from this checkpoint.
    pub restart: Option<PathBuf>,
    /// Stop after this many steps regardless of the configured duration.
    pub max_steps: Option<u64>,
}

const SERIES_HEADER: [&str; 5] = ["t", "z", "v", "a", "depth"];
const LOG_HEADER: [&str; 11] = [
    "step",
    "t",
    "dt",
    "kinetic",
    "strain",
    "projectile_kinetic",
    "contact",
    "external_work",
    "dissipated",
    "broken_bonds",
    "eos_clamps",
];

/// Runs an impact configuration and writes its outputs into `out`:
/// `projectile.csv` (time, tip height, velocity and acceleration along `z`,
/// penetration depth), `run_log.csv`, `summary.toml`, plus `frames/*.vtk` and
/// `checkpoints/*.bin` when their intervals are set.
pub fn run_impact(cfg: &ScenarioConfig, out: &Path, options: &ImpactOptions) -> Result<ImpactReport> {
    let run = cfg.run()?;
    let disc = Discretization::build(cfg)?;
    let mut sim = build_simulation(cfg, &disc)?;
    drop(disc);
    ensure_dir(out)?;
    sim.dump_dir = Some(out.to_path_buf());
    if let Some(path) = &options.restart {
        checkpoint::restore(&mut sim, path)?;
    }
    let entry = sim.body.bounds[1][2];
    let prebroken = sim.body.bonds.prebroken_count();
    let out_cfg = &cfg.output;
    let frames = out.join("frames");
    let checkpoints = out.join("checkpoints");
    if out_cfg.frame_interval > 0 {
        ensure_dir(&frames)?;
    }
    if out_cfg.checkpoint_interval > 0 {
        ensure_dir(&checkpoints)?;
    }

    let mut series = CsvTable::create(&out.join("projectile.csv"), &SERIES_HEADER)?;
    let mut log = CsvTable::create(&out.join("run_log.csv"), &LOG_HEADER)?;
    let mut metrics = RunMetrics {
        dt: sim.dt,
        ..RunMetrics::default()
    };
    let mut broken = sim.body.bonds.broken_count();

    let record = |sim: &Simulation, series: &mut CsvTable, m: &mut RunMetrics| -> Result<()> {
        let Some(p) = &sim.projectile else { return Ok(()) };
        let a = p.body.acceleration()[2];
        let depth = (entry - p.body.origin[2]).max(0.0);
        m.peak_acceleration = m.peak_acceleration.max(a.abs());
        m.penetration_depth = m.penetration_depth.max(depth);
        series.row(&[sim.time, p.body.origin[2], p.body.velocity[2], a, depth])
    };
    let log_row = |sim: &Simulation, log: &mut CsvTable, broken: usize| -> Result<()> {
        let e = sim.energy;
        log.row(&[
            sim.step as f64,
            sim.time,
            sim.dt,
            e.kinetic,
            e.strain,
            e.projectile_kinetic,
            e.contact,
            e.external_work,
            e.dissipated,
            broken as f64,
            sim.eos_clamps as f64,
        ])
    };
    let frame = |sim: &Simulation| -> Result<()> {
        let path = frames.join(format!("frame_{:08}.vtk", sim.step));
        let title = format!("{} step {} t={:e}", cfg.name, sim.step, sim.time);
        write_vtk_fields(&path, sim, &title, &out_cfg.fields)
    };

    record(&sim, &mut series, &mut metrics)?;
    log_row(&sim, &mut log, broken)?;
    if out_cfg.frame_interval > 0 {
        frame(&sim)?;
    }
    let max_steps = options.max_steps.unwrap_or(u64::MAX);
    let mut taken = 0;
    while sim.time + 0.5 * sim.dt < run.duration && taken < max_steps {
        let report = sim.step()?;
        taken += 1;
        broken += report.newly_broken;
        if sim.step % out_cfg.series_interval == 0 {
            record(&sim, &mut series, &mut metrics)?;
        }
        if sim.step % out_cfg.log_interval == 0 {
            log_row(&sim, &mut log, broken)?;
        }
        if out_cfg.frame_interval > 0 && sim.step % out_cfg.frame_interval == 0 {
            frame(&sim)?;
        }
        if out_cfg.checkpoint_interval > 0 && sim.step % out_cfg.checkpoint_interval == 0 {
            checkpoint::write(&sim, &checkpoints.join(format!("step_{:08}.bin", sim.step)))?;
        }
    }
    if sim.step % out_cfg.series_interval != 0 {
        record(&sim, &mut series, &mut metrics)?;
    }
    if sim.step % out_cfg.log_interval != 0 {
        log_row(&sim, &mut log, broken)?;
    }
    series.finish()?;
    log.finish()?;

    if let Some(p) = &sim.projectile {
        metrics.residual_velocity = -p.body.velocity[2];
    }
    let damage = sim.damage();
    let [lo, hi] = sim.body.bounds;
    metrics.crater = crater_metrics(
        &DamageField {
            damage: &damage,
            cells: &sim.body.cells,
            positions: &sim.body.reference,
            dx: sim.body.dx,
            axis: [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])],
        },
        out_cfg.crater_threshold,
    );
    metrics.broken_bonds = broken;
    metrics.eos_clamps = sim.eos_clamps;
    metrics.steps = sim.step;
    metrics.time = sim.time;
    if ![
        metrics.residual_velocity,
        metrics.peak_acceleration,
        metrics.penetration_depth,
        metrics.crater.crater_radius,
        metrics.crater.scabbing_depth,
    ]
    .iter()
    .all(|v| v.is_finite())
    {
        return Err(Error::Diagnostic(format!("non-finite run metrics {metrics:?}")));
    }
    let report = ImpactReport {
        name: cfg.name.clone(),
        points: sim.len(),
        bond_records: sim.body.bonds.len(),
        prebroken_bonds: prebroken,
        metrics,
    };
    write_summary(&out.join("summary.toml"), &report)?;
    Ok(report)
}
