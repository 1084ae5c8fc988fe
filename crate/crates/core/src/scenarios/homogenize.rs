use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homogenization::{unsaturated_moduli, MatrixModuli};

use super::config::ScenarioConfig;
use super::output::{ensure_dir, CsvTable};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub porosity: f64,
    pub saturation: f64,
    pub bulk: f64,
    pub shear: f64,
    pub young: f64,
    pub poisson: f64,
}

/// Effective mortar moduli over the configured porosity and saturation grid,
/// porosity varying slowest.
pub fn homogenize_sweep(cfg: &ScenarioConfig) -> Result<Vec<SweepRow>> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("[sweep] is required".into()))?;
    let m = &cfg.materials;
    let matrix = MatrixModuli::from_young_poisson(m.mortar.young, m.poisson)?;
    let water = cfg.water.properties();
    let mut rows = Vec::new();
    for phi in sweep.porosity.values() {
        for w in sweep.saturation.values() {
            let e = unsaturated_moduli(matrix, &water, phi, w, cfg.water.consistent_viscous_shear)?;
            rows.push(SweepRow {
                porosity: phi,
                saturation: w,
                bulk: e.bulk,
                shear: e.shear,
                young: e.young(),
                poisson: e.poisson(),
            });
        }
    }
    Ok(rows)
}

/// Runs the sweep and writes `homogenize.csv` into `out`.
pub fn run_homogenize_sweep(cfg: &ScenarioConfig, out: &Path) -> Result<Vec<SweepRow>> {
    let rows = homogenize_sweep(cfg)?;
    ensure_dir(out)?;
    let mut t = CsvTable::create(
        &out.join("homogenize.csv"),
        &["porosity", "saturation", "bulk", "shear", "young", "poisson"],
    )?;
    for r in &rows {
        t.row(&[r.porosity, r.saturation, r.bulk, r.shear, r.young, r.poisson])?;
    }
    t.finish()?;
    Ok(rows)
}
