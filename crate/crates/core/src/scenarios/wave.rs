//! Effective modulus from the speed of a stress wave through a slab.
//!
//! A short traction pulse on one face launches a compressive wave. Two
//! stations, rows of points across the slab at fixed distances from the
//! loaded face, record the mean displacement along the loading axis; the
//! wave arrives at a station when that displacement first exceeds a fraction
//! of the displacement of the loaded layer at the end of the pulse. The
//! modulus ratio is the squared ratio of wave speeds against the pore-free
//! slab, which needs no wave-speed-to-modulus formula.

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::solver::lattice::BoundaryTag;
use crate::solver::Simulation;

use super::config::{LoadingConfig, ScenarioConfig, WaveConfig};
use super::model::{build_simulation, Discretization};
use super::output::{ensure_dir, write_summary, CsvTable};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveMeasurement {
    pub porosity: f64,
    pub saturation: f64,
    /// Arrival times at the near and far station (s).
    pub arrival: [f64; 2],
    /// Distance between the stations (m).
    pub distance: f64,
    pub wave_speed: f64,
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveRow {
    pub porosity: f64,
    pub saturation: f64,
    pub wave_speed: f64,
    pub modulus_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveReport {
    pub name: String,
    pub rows: Vec<WaveRow>,
    pub measurements: Vec<WaveMeasurement>,
}

impl WaveReport {
    pub fn ratio(&self, porosity: f64, saturation: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.porosity == porosity && r.saturation == saturation)
            .map(|r| r.modulus_ratio)
    }
}

struct Station {
    points: Vec<usize>,
    coordinate: f64,
}

fn station(sim: &Simulation, axis: usize, target: f64) -> Station {
    let body = &sim.body;
    let best = body
        .reference
        .iter()
        .map(|x| x[axis])
        .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
        .unwrap_or(target);
    let points = (0..sim.len())
        .filter(|&i| (body.reference[i][axis] - best).abs() < 0.25 * body.dx)
        .collect();
    Station {
        points,
        coordinate: best,
    }
}

/// Mean displacement of `points` towards `−axis`.
fn mean_push(sim: &Simulation, points: &[usize], axis: usize) -> f64 {
    let sum: f64 = points
        .iter()
        .map(|&i| sim.body.reference[i][axis] - sim.position[i][axis])
        .sum();
    sum / points.len() as f64
}

/// Steps `sim` until the wave has passed both stations.
pub fn measure_wave_speed(
    sim: &mut Simulation,
    loading: &LoadingConfig,
    wave: &WaveConfig,
    max_time: f64,
) -> Result<([f64; 2], f64)> {
    let axis = loading.axis;
    let [lo, hi] = sim.body.bounds;
    let extent = hi[axis] - lo[axis];
    let stations = wave.stations.map(|s| station(sim, axis, hi[axis] - s * extent));
    let loaded: Vec<usize> = (0..sim.len())
        .filter(|&i| sim.body.tags[i] == BoundaryTag::Loaded)
        .collect();
    if stations.iter().any(|s| s.points.is_empty()) || loaded.is_empty() {
        return Err(Error::Diagnostic("wave stations or loaded layer are empty".into()));
    }

    let mut threshold: Option<f64> = None;
    let mut arrival: [Option<f64>; 2] = [None, None];
    let mut previous = [0.0; 2];
    while arrival[1].is_none() {
        if sim.time > max_time {
            return Err(Error::Diagnostic(format!(
                "wave arrival not detected within {max_time} s (near station {})",
                if arrival[0].is_some() { "reached" } else { "not reached" }
            )));
        }
        let t0 = sim.time;
        sim.step()?;
        if threshold.is_none() && sim.time >= loading.duration {
            let incident = mean_push(sim, &loaded, axis);
            if !(incident > 0.0) {
                return Err(Error::Diagnostic(format!("incident displacement {incident} not positive")));
            }
            threshold = Some(wave.arrival_fraction * incident);
        }
        for (k, s) in stations.iter().enumerate() {
            let u = mean_push(sim, &s.points, axis);
            if let (Some(thr), None) = (threshold, arrival[k]) {
                if u >= thr {
                    let f = if u > previous[k] {
                        ((thr - previous[k]) / (u - previous[k])).clamp(0.0, 1.0)
                    } else {
                        1.0
                    };
                    arrival[k] = Some(t0 + f * (sim.time - t0));
                }
            }
            previous[k] = u;
        }
    }
    let arrival = [arrival[0].unwrap_or(0.0), arrival[1].unwrap_or(0.0)];
    let distance = (stations[0].coordinate - stations[1].coordinate).abs();
    if !(arrival[1] > arrival[0]) {
        return Err(Error::Diagnostic(format!(
            "far station reached before near station ({arrival:?})"
        )));
    }
    Ok((arrival, distance))
}

fn variant(cfg: &ScenarioConfig, porosity: f64, saturation: f64) -> ScenarioConfig {
    let mut c = cfg.clone();
    if let Some(m) = c.meso.as_mut() {
        m.porosity = porosity;
    }
    c.water.porosity = None;
    c.water.saturation = saturation;
    c
}

/// One wave run at the given porosity and saturation.
pub fn wave_run(
    cfg: &ScenarioConfig,
    disc: &Discretization,
    porosity: f64,
    saturation: f64,
) -> Result<WaveMeasurement> {
    let c = variant(cfg, porosity, saturation);
    let wave = c
        .wave
        .as_ref()
        .ok_or_else(|| Error::Config("[wave] is required".into()))?;
    let loading = c
        .loading
        .as_ref()
        .ok_or_else(|| Error::Config("[loading] is required".into()))?;
    let mut sim = build_simulation(&c, disc)?;
    let (arrival, distance) = measure_wave_speed(&mut sim, loading, wave, c.run()?.duration)?;
    Ok(WaveMeasurement {
        porosity,
        saturation,
        arrival,
        distance,
        wave_speed: distance / (arrival[1] - arrival[0]),
        steps: sim.step,
    })
}

/// Sweeps the configured porosities and saturations. Every saturation is
/// referenced to the pore-free slab.
pub fn wave_modulus(cfg: &ScenarioConfig) -> Result<WaveReport> {
    let wave = cfg
        .wave
        .as_ref()
        .ok_or_else(|| Error::Config("[wave] is required".into()))?;
    let disc = Discretization::build(cfg)?;
    let mut measurements: Vec<WaveMeasurement> = Vec::new();
    let mut rows = Vec::new();
    for &w in &wave.saturations {
        let reference = match measurements.iter().find(|m| m.porosity == 0.0) {
            // without pores the saturation has no effect on the moduli
            Some(m) => m.wave_speed,
            None => {
                let m = wave_run(cfg, &disc, 0.0, w)?;
                measurements.push(m);
                m.wave_speed
            }
        };
        for &phi in &wave.porosities {
            let m = match measurements
                .iter()
                .find(|m| m.porosity == phi && (phi == 0.0 || m.saturation == w))
            {
                Some(m) => *m,
                None => {
                    let m = wave_run(cfg, &disc, phi, w)?;
                    measurements.push(m);
                    m
                }
            };
            let ratio = (m.wave_speed / reference).powi(2);
            rows.push(WaveRow {
                porosity: phi,
                saturation: w,
                wave_speed: m.wave_speed,
                modulus_ratio: ratio,
            });
        }
    }
    Ok(WaveReport {
        name: cfg.name.clone(),
        rows,
        measurements,
    })
}

/// Runs the sweep and writes `wave.csv` and `summary.toml` into `out`.
pub fn run_wave_modulus(cfg: &ScenarioConfig, out: &Path) -> Result<WaveReport> {
    let report = wave_modulus(cfg)?;
    ensure_dir(out)?;
    let mut t = CsvTable::create(
        &out.join("wave.csv"),
        &["saturation", "porosity", "wave_speed", "modulus_ratio"],
    )?;
    for r in &report.rows {
        t.row(&[r.saturation, r.porosity, r.wave_speed, r.modulus_ratio])?;
    }
    t.finish()?;
    write_summary(&out.join("summary.toml"), &report)?;
    Ok(report)
}
