//! Scenario configuration files.
//!
//! Configurations are TOML documents with a `schema_version` key. Unknown
//! keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constitutive::eos::EosParams;
use crate::constitutive::InfluenceFunction;
use crate::contact::ProjectileShape;
use crate::error::{Error, Result};
use crate::failure::DifParams;
use crate::homogenization::WaterProperties;
use crate::mesostructure::{MesoModel, VolumeFractions};
use crate::solver::lattice::Geometry;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    HomogenizeSweep,
    WaveModulus,
    Impact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub target: Geometry,
    pub dx: f64,
    /// Horizon in grid spacings.
    #[serde(default = "default_horizon_ratio")]
    pub horizon_ratio: f64,
}

fn default_horizon_ratio() -> f64 {
    4.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseMaterial {
    pub young: f64,
    /// Fracture energy G0 (N/m).
    pub fracture_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialsConfig {
    pub aggregate: PhaseMaterial,
    pub mortar: PhaseMaterial,
    pub itz: PhaseMaterial,
    /// Properties used by aggregate-mortar bonds.
    pub concrete: PhaseMaterial,
    #[serde(default = "default_poisson")]
    pub poisson: f64,
    #[serde(default = "default_density")]
    pub density: f64,
    /// Quasi-static compressive strength of dry concrete (Pa).
    #[serde(default = "default_compressive_strength")]
    pub compressive_strength: f64,
    #[serde(default)]
    pub influence: Influence,
}

fn default_poisson() -> f64 {
    0.2
}
fn default_density() -> f64 {
    2400.0
}
fn default_compressive_strength() -> f64 {
    39.5e6
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Influence {
    #[default]
    Unit,
    InverseDistance,
}

impl From<Influence> for InfluenceFunction {
    fn from(i: Influence) -> Self {
        match i {
            Influence::Unit => InfluenceFunction::Unit,
            Influence::InverseDistance => InfluenceFunction::InverseDistance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MesoConfig {
    pub fractions: VolumeFractions,
    #[serde(default)]
    pub porosity: f64,
    #[serde(default = "default_critical_porosity")]
    pub critical_porosity: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_critical_porosity() -> f64 {
    1.0
}

impl MesoConfig {
    pub fn model(&self) -> MesoModel {
        MesoModel {
            fractions: self.fractions,
            porosity: self.porosity,
            critical_porosity: self.critical_porosity,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaterConfig {
    #[serde(default)]
    pub saturation: f64,
    #[serde(default = "default_water_bulk")]
    pub bulk: f64,
    #[serde(default)]
    pub f1: f64,
    #[serde(default)]
    pub f2: f64,
    #[serde(default)]
    pub consistent_viscous_shear: bool,
    /// Porosity used for the mortar moduli; defaults to the meso porosity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub porosity: Option<f64>,
}

fn default_water_bulk() -> f64 {
    2.2e9
}

impl Default for WaterConfig {
    fn default() -> Self {
        Self {
            saturation: 0.0,
            bulk: default_water_bulk(),
            f1: 0.0,
            f2: 0.0,
            consistent_viscous_shear: false,
            porosity: None,
        }
    }
}

impl WaterConfig {
    pub fn properties(&self) -> WaterProperties {
        WaterProperties {
            bulk: self.bulk,
            f1: self.f1,
            f2: self.f2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureConfig {
    #[serde(default = "yes")]
    pub enabled: bool,
    /// Apply the rate law; requires a `[dif]` section or uses its defaults.
    #[serde(default = "yes")]
    pub rate_dependent: bool,
}

fn yes() -> bool {
    true
}

impl Default for FailureConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            rate_dependent: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectileConfig {
    pub mass: f64,
    /// Impact speed (m/s), directed towards `−z`.
    pub velocity: f64,
    pub shape: ProjectileShape,
    /// Initial gap between tip and entry face (m); defaults to one contact
    /// distance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standoff: Option<f64>,
    /// Grid spacing of the projectile points; defaults to the target `dx`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dx: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryConfig {
    /// Pin a lateral shell of the target.
    #[serde(default)]
    pub lateral_pin: bool,
    /// Shell thickness; defaults to the horizon.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pin_thickness: Option<f64>,
}

impl Default for BoundaryConfig {
    fn default() -> Self {
        Self {
            lateral_pin: false,
            pin_thickness: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadingConfig {
    /// Traction (Pa) on the loaded face.
    pub pressure: f64,
    pub duration: f64,
    /// Axis whose maximum face is loaded; the force points inwards.
    #[serde(default = "default_axis")]
    pub axis: usize,
}

fn default_axis() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Simulated time (s).
    pub duration: f64,
    #[serde(default = "default_safety")]
    pub safety: f64,
    /// Fixed time step; defaults to the stable step.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default)]
    pub energy_audit: bool,
}

fn default_safety() -> f64 {
    0.5
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Field {
    Displacement,
    Velocity,
    Damage,
    Phase,
    Pressure,
}

impl Field {
    pub const ALL: [Field; 5] = [
        Field::Displacement,
        Field::Velocity,
        Field::Damage,
        Field::Phase,
        Field::Pressure,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Steps between VTK frames; 0 writes none.
    #[serde(default)]
    pub frame_interval: u64,
    /// Steps between time-series rows.
    #[serde(default = "default_series_interval")]
    pub series_interval: u64,
    #[serde(default = "all_fields")]
    pub fields: Vec<Field>,
    /// Damage level that marks a point as part of a crater.
    #[serde(default = "default_crater_threshold")]
    pub crater_threshold: f64,
    /// Steps between run-log rows.
    #[serde(default = "default_log_interval")]
    pub log_interval: u64,
    /// Steps between checkpoints; 0 writes none.
    #[serde(default)]
    pub checkpoint_interval: u64,
}

fn default_series_interval() -> u64 {
    1
}
fn default_log_interval() -> u64 {
    50
}
fn all_fields() -> Vec<Field> {
    Field::ALL.to_vec()
}
fn default_crater_threshold() -> f64 {
    0.35
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            frame_interval: 0,
            series_interval: default_series_interval(),
            fields: all_fields(),
            crater_threshold: default_crater_threshold(),
            log_interval: default_log_interval(),
            checkpoint_interval: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveConfig {
    pub porosities: Vec<f64>,
    pub saturations: Vec<f64>,
    /// Station positions as fractions of the extent along the loaded axis,
    /// measured from the loaded face.
    #[serde(default = "default_stations")]
    pub stations: [f64; 2],
    /// Arrival threshold relative to the incident displacement.
    #[serde(default = "default_arrival")]
    pub arrival_fraction: f64,
}

fn default_stations() -> [f64; 2] {
    [0.25, 0.75]
}
fn default_arrival() -> f64 {
    0.01
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range1 {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range1 {
    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n)
                .map(|i| self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub porosity: Range1,
    pub saturation: Range1,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub name: String,
    pub kind: ScenarioKind,
    pub materials: MaterialsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meso: Option<MesoConfig>,
    #[serde(default)]
    pub water: WaterConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eos: Option<EosParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dif: Option<DifParams>,
    #[serde(default)]
    pub failure: FailureConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projectile: Option<ProjectileConfig>,
    #[serde(default)]
    pub boundary: BoundaryConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loading: Option<LoadingConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunConfig>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wave: Option<WaveConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive, got {v}")))
    }
}

fn unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must lie in [0, 1], got {v}")))
    }
}

fn missing(section: &str, kind: ScenarioKind) -> Error {
    Error::Config(format!("[{section}] is required for {kind:?} scenarios"))
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serialises")
    }

    pub fn geometry(&self) -> Result<&GeometryConfig> {
        self.geometry.as_ref().ok_or_else(|| missing("geometry", self.kind))
    }

    pub fn meso(&self) -> Result<&MesoConfig> {
        self.meso.as_ref().ok_or_else(|| missing("meso", self.kind))
    }

    pub fn run(&self) -> Result<&RunConfig> {
        self.run.as_ref().ok_or_else(|| missing("run", self.kind))
    }

    /// Porosity used for the mortar moduli.
    pub fn moduli_porosity(&self) -> f64 {
        self.water
            .porosity
            .unwrap_or_else(|| self.meso.as_ref().map_or(0.0, |m| m.porosity))
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let m = &self.materials;
        for (name, p) in [
            ("aggregate", &m.aggregate),
            ("mortar", &m.mortar),
            ("itz", &m.itz),
            ("concrete", &m.concrete),
        ] {
            positive(&format!("materials.{name}.young"), p.young)?;
            positive(&format!("materials.{name}.fracture_energy"), p.fracture_energy)?;
        }
        if !(m.poisson > -1.0 && m.poisson < 0.5) {
            return Err(Error::Config(format!("materials.poisson must lie in (-1, 0.5), got {}", m.poisson)));
        }
        positive("materials.density", m.density)?;
        positive("materials.compressive_strength", m.compressive_strength)?;

        unit("water.saturation", self.water.saturation)?;
        positive("water.bulk", self.water.bulk)?;
        if let Some(p) = self.water.porosity {
            unit("water.porosity", p)?;
        }
        if let Some(meso) = &self.meso {
            meso.model().validate()?;
        }
        if let Some(g) = &self.geometry {
            positive("geometry.dx", g.dx)?;
            if g.horizon_ratio < 3.0 {
                return Err(Error::Config(format!(
                    "geometry.horizon_ratio must be at least 3, got {}",
                    g.horizon_ratio
                )));
            }
        }
        if let Some(eos) = &self.eos {
            eos.validate()?;
        }
        if let Some(d) = &self.dif {
            d.validate()?;
        }
        if let Some(p) = &self.projectile {
            positive("projectile.mass", p.mass)?;
            if !(p.velocity >= 0.0 && p.velocity.is_finite()) {
                return Err(Error::Config(format!("projectile.velocity must be non-negative, got {}", p.velocity)));
            }
            positive("projectile.diameter", p.shape.diameter)?;
            positive("projectile.length", p.shape.length)?;
        }
        if let Some(l) = &self.loading {
            positive("loading.duration", l.duration)?;
            if l.axis > 2 {
                return Err(Error::Config(format!("loading.axis must be 0, 1 or 2, got {}", l.axis)));
            }
        }
        if let Some(r) = &self.run {
            positive("run.duration", r.duration)?;
            positive("run.safety", r.safety)?;
            if let Some(dt) = r.dt {
                positive("run.dt", dt)?;
            }
        }
        if self.output.series_interval == 0 || self.output.log_interval == 0 {
            return Err(Error::Config("output intervals must be at least 1".into()));
        }
        unit("output.crater_threshold", self.output.crater_threshold)?;

        match self.kind {
            ScenarioKind::HomogenizeSweep => {
                let s = self.sweep.as_ref().ok_or_else(|| missing("sweep", self.kind))?;
                for v in s.porosity.values().into_iter().chain(s.saturation.values()) {
                    unit("sweep value", v)?;
                }
            }
            ScenarioKind::WaveModulus => {
                self.geometry()?;
                self.meso()?;
                self.run()?;
                if self.loading.is_none() {
                    return Err(missing("loading", self.kind));
                }
                let w = self.wave.as_ref().ok_or_else(|| missing("wave", self.kind))?;
                if w.porosities.is_empty() || w.saturations.is_empty() {
                    return Err(Error::Config("wave.porosities and wave.saturations must not be empty".into()));
                }
                for v in w.porosities.iter().chain(&w.saturations) {
                    unit("wave sweep value", *v)?;
                }
                let [a, b] = w.stations;
                if !(0.0 < a && a < b && b < 1.0) {
                    return Err(Error::Config(format!("wave.stations must satisfy 0 < a < b < 1, got {:?}", w.stations)));
                }
                positive("wave.arrival_fraction", w.arrival_fraction)?;
            }
            ScenarioKind::Impact => {
                self.geometry()?;
                self.meso()?;
                self.run()?;
                if self.projectile.is_none() {
                    return Err(missing("projectile", self.kind));
                }
            }
        }
        Ok(())
    }
}
