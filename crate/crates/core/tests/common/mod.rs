#![allow(dead_code)]

pub mod formats;

use perikon_core::scenarios::model::{build_simulation, Discretization};
use perikon_core::scenarios::ScenarioConfig;
use perikon_core::solver::lattice::{Geometry, Lattice};
use perikon_core::solver::neighbors::{within_horizon, BondList};
use perikon_core::solver::Simulation;
use perikon_core::vector::{norm, sub};

const MATERIALS: &str = r#"
[materials]
poisson = 0.2
density = 2400.0
aggregate = { young = 56.5e9, fracture_energy = 365.0 }
mortar = { young = 26.3e9, fracture_energy = 110.0 }
itz = { young = 20.2e9, fracture_energy = 90.0 }
concrete = { young = 32.0e9, fracture_energy = 107.0 }
"#;

const UNIFORM: &str = r#"
[materials]
poisson = 0.25
density = 2400.0
aggregate = { young = 30.0e9, fracture_energy = 100.0 }
mortar = { young = 30.0e9, fracture_energy = 100.0 }
itz = { young = 30.0e9, fracture_energy = 100.0 }
concrete = { young = 30.0e9, fracture_energy = 100.0 }
"#;

/// Elastic bar along `x` loaded by a short pulse on its `x = max` face.
pub fn bar_config(points: [usize; 3], ratio: f64) -> ScenarioConfig {
    let dx = 0.01;
    let size = points.map(|n| n as f64 * dx);
    let text = format!(
        r#"
schema_version = 1
name = "bar"
kind = "wave-modulus"
{UNIFORM}
[geometry]
dx = {dx}
horizon_ratio = {ratio}
[geometry.target]
shape = "box"
size = [{}, {}, {}]
[meso]
fractions = {{ aggregate = 0.0, mortar = 1.0, itz = 0.0 }}
[failure]
enabled = false
[loading]
pressure = 1.0e5
duration = 5.0e-5
axis = 0
[run]
duration = 1.0
energy_audit = true
[wave]
porosities = [0.0]
saturations = [0.0]
"#,
        size[0], size[1], size[2]
    );
    ScenarioConfig::from_toml(&text).unwrap()
}

/// Small wet target hit by a blunt projectile; failure, rate effects and the
/// equation of state are all active.
pub fn small_impact_config(free: bool, saturation: f64) -> ScenarioConfig {
    let text = format!(
        r#"
schema_version = 1
name = "small-impact"
kind = "impact"
{MATERIALS}
[geometry]
dx = 0.01
horizon_ratio = 3.0
[geometry.target]
shape = "box"
size = [0.12, 0.12, 0.06]
[meso]
fractions = {{ aggregate = 0.4, mortar = 0.55, itz = 0.05 }}
porosity = 0.06
seed = 7
[water]
saturation = {saturation}
[eos]
[dif]
[projectile]
mass = 0.05
velocity = 300.0
[projectile.shape]
diameter = 0.03
length = 0.04
nose = "flat"
[boundary]
lateral_pin = {}
[run]
duration = 1.0e-3
[output]
series_interval = 1
log_interval = 10
"#,
        !free
    );
    ScenarioConfig::from_toml(&text).unwrap()
}

pub fn simulation(cfg: &ScenarioConfig) -> Simulation {
    let disc = Discretization::build(cfg).unwrap();
    build_simulation(cfg, &disc).unwrap()
}

pub fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

/// Largest `|E_kinetic + E_strain − W_external| / W_external` after the pulse
/// has ended, for the elastic bar over `steps` steps.
pub fn bar_energy_drift(steps: usize) -> f64 {
    let cfg = bar_config([40, 4, 4], 3.0);
    let pulse = cfg.loading.as_ref().unwrap().duration;
    let mut sim = simulation(&cfg);
    assert!(sim.energy_audit);
    let mut worst: f64 = 0.0;
    for _ in 0..steps {
        sim.step().unwrap();
        let e = sim.energy;
        assert!(e.external_work > 0.0);
        if sim.time > pulse {
            worst = worst.max((e.kinetic + e.strain - e.external_work).abs() / e.external_work);
        }
    }
    worst
}

/// Cell-list neighbour rows checked against an all-pairs search. Returns the
/// point count and the number of points whose rows differ.
pub fn neighbour_mismatches(geometry: &Geometry, dx: f64, ratio: f64) -> (usize, usize) {
    let l = Lattice::build(geometry, dx, ratio).unwrap();
    let bonds = BondList::build(&l);
    let n = l.len();
    let mismatched = (0..n)
        .filter(|&i| {
            let oracle: Vec<u32> = (0..n)
                .filter(|&j| j != i && within_horizon(norm(sub(l.positions[j], l.positions[i])), l.horizon))
                .map(|j| j as u32)
                .collect();
            bonds.partner[bonds.range(i)] != oracle[..]
        })
        .count();
    (n, mismatched)
}
