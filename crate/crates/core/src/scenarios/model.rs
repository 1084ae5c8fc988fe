//! Assembly of a simulation from a configuration.

use crate::constitutive::{eos::WetEos, PointElasticity};
use crate::contact::{ContactParams, RigidBody};
use crate::error::{Error, Result};
use crate::failure::{wet_critical_stretch, ClassStrength, CriticalStretch, DifParams, FailureModel};
use crate::homogenization::{unsaturated_moduli, EffectiveModuli, MatrixModuli};
use crate::mesostructure::{self, apply_pore_prebreak, classify_bonds, BondClass, Phase};
use crate::solver::lattice::{BoundaryTag, Lattice};
use crate::solver::neighbors::BondList;
use crate::solver::{stable_timestep, Body, Projectile, Pulse, Simulation, SimulationSetup};

use super::config::{PhaseMaterial, ScenarioConfig};

/// Lattice and intact bond list of a configuration's target. Building the
/// bond list dominates setup, so sweeps over material parameters reuse it.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub lattice: Lattice,
    pub bonds: BondList,
}

impl Discretization {
    pub fn build(cfg: &ScenarioConfig) -> Result<Self> {
        let g = cfg.geometry()?;
        let mut lattice = Lattice::build(&g.target, g.dx, g.horizon_ratio)?;
        if cfg.boundary.lateral_pin {
            let t = cfg.boundary.pin_thickness.unwrap_or(lattice.horizon);
            lattice.pin_lateral_shell(t);
        }
        if let Some(l) = &cfg.loading {
            if lattice.tag_loaded_face(l.axis, lattice.dx) == 0 {
                return Err(Error::Config("loaded face contains no free points".into()));
            }
        }
        let bonds = BondList::build(&lattice);
        Ok(Self { lattice, bonds })
    }
}

fn moduli(p: &PhaseMaterial, poisson: f64) -> EffectiveModuli {
    EffectiveModuli::from_young_poisson(p.young, poisson)
}

/// Effective moduli of the mortar phase at the configured porosity and
/// saturation.
pub fn wet_mortar(cfg: &ScenarioConfig) -> Result<EffectiveModuli> {
    let m = &cfg.materials;
    let matrix = MatrixModuli::from_young_poisson(m.mortar.young, m.poisson)?;
    unsaturated_moduli(
        matrix,
        &cfg.water.properties(),
        cfg.moduli_porosity(),
        cfg.water.saturation,
        cfg.water.consistent_viscous_shear,
    )
}

/// Elastic constants of aggregate, wet mortar and ITZ points, in that order.
pub fn phase_elasticity(cfg: &ScenarioConfig) -> Result<[PointElasticity; 3]> {
    let m = &cfg.materials;
    let mortar = wet_mortar(cfg)?;
    let agg = moduli(&m.aggregate, m.poisson);
    let itz = moduli(&m.itz, m.poisson);
    let point = |e: EffectiveModuli| PointElasticity {
        bulk: e.bulk,
        shear: e.shear,
        density: m.density,
    };
    Ok([point(agg), point(mortar), point(itz)])
}

/// Critical stretches per bond class at the configured saturation.
pub fn failure_model(cfg: &ScenarioConfig, horizon: f64) -> Result<FailureModel> {
    let m = &cfg.materials;
    let mortar = wet_mortar(cfg)?;
    let w = cfg.water.saturation;
    let class = |e: EffectiveModuli, g0: f64| -> CriticalStretch {
        let s = ClassStrength {
            young: e.young(),
            bulk: e.bulk,
            fracture_energy: g0,
            compressive_strength: m.compressive_strength,
        };
        wet_critical_stretch(&s, horizon, w)
    };
    let mut stretch = [CriticalStretch {
        tension: 0.0,
        compression: 0.0,
    }; 4];
    stretch[BondClass::Aggregate.index()] = class(moduli(&m.aggregate, m.poisson), m.aggregate.fracture_energy);
    stretch[BondClass::Mortar.index()] = class(mortar, m.mortar.fracture_energy);
    stretch[BondClass::Interface.index()] = class(moduli(&m.itz, m.poisson), m.itz.fracture_energy);
    stretch[BondClass::HomogenizedConcrete.index()] =
        class(moduli(&m.concrete, m.poisson), m.concrete.fracture_energy);
    let dif = cfg
        .failure
        .rate_dependent
        .then(|| cfg.dif.unwrap_or_else(DifParams::default));
    Ok(FailureModel {
        stretch,
        dif,
        saturation: w,
    })
}

/// Target body with phases, bond classes and pore bonds applied.
pub fn build_body(cfg: &ScenarioConfig, disc: &Discretization) -> Result<Body> {
    let meso = cfg.meso()?.model();
    meso.validate()?;
    let n = disc.lattice.len();
    let phases = meso.assign_phases(n)?;
    let mut bonds = disc.bonds.clone();
    classify_bonds(&mut bonds, &phases);
    let d = mesostructure::pre_damage_index(meso.porosity, meso.critical_porosity)?;
    if d > 0.0 {
        apply_pore_prebreak(&mut bonds, &vec![d; n], meso.seed)?;
    }
    let elastic = phase_elasticity(cfg)?;
    let materials = phases
        .iter()
        .map(|p| match p {
            Phase::Aggregate => elastic[0],
            Phase::Mortar => elastic[1],
            Phase::Itz => elastic[2],
        })
        .collect();
    Body::new(
        disc.lattice.clone(),
        bonds,
        phases,
        materials,
        cfg.materials.influence.into(),
    )
}

/// Rigid projectile placed above the entry face (`z = max`), centred on the
/// target footprint and moving towards `−z`.
pub fn build_projectile(cfg: &ScenarioConfig, body: &Body) -> Result<Option<Projectile>> {
    let Some(p) = &cfg.projectile else {
        return Ok(None);
    };
    let m = &cfg.materials;
    let pdx = p.dx.unwrap_or(body.dx);
    let offsets = p.shape.discretize(pdx)?;
    let concrete = moduli(&m.concrete, m.poisson);
    let contact = ContactParams::from_bulk(concrete.bulk, body.horizon, body.dx);
    let top = body
        .reference
        .iter()
        .map(|x| x[2])
        .fold(f64::NEG_INFINITY, f64::max);
    let [lo, hi] = body.bounds;
    let origin = [
        0.5 * (lo[0] + hi[0]),
        0.5 * (lo[1] + hi[1]),
        top + contact.critical_distance + p.standoff.unwrap_or(0.0),
    ];
    let rigid = RigidBody::new(offsets, p.mass, origin, [0.0, 0.0, -p.velocity], pdx * pdx * pdx)?;
    Ok(Some(Projectile {
        body: rigid,
        contact,
    }))
}

/// Complete simulation for a wave or impact configuration.
pub fn build_simulation(cfg: &ScenarioConfig, disc: &Discretization) -> Result<Simulation> {
    let body = build_body(cfg, disc)?;
    let run = cfg.run()?;
    let dt = match run.dt {
        Some(dt) => dt,
        None => stable_timestep(body.dx, &phase_elasticity(cfg)?, run.safety),
    };
    let eos = match &cfg.eos {
        Some(p) => Some(WetEos::new(*p, cfg.moduli_porosity(), cfg.water.saturation)?),
        None => None,
    };
    let failure = if cfg.failure.enabled {
        Some(failure_model(cfg, body.horizon)?)
    } else {
        None
    };
    let pulse = cfg.loading.as_ref().map(|l| {
        let mut direction = [0.0; 3];
        direction[l.axis] = -1.0;
        Pulse {
            pressure: l.pressure,
            duration: l.duration,
            direction,
        }
    });
    if pulse.is_some() && !body.tags.contains(&BoundaryTag::Loaded) {
        return Err(Error::Config("loading configured but no loaded points".into()));
    }
    let projectile = build_projectile(cfg, &body)?;
    Simulation::new(SimulationSetup {
        body,
        dt,
        eos,
        failure,
        projectile,
        pulse,
        energy_audit: run.energy_audit,
        dump_dir: None,
    })
}
