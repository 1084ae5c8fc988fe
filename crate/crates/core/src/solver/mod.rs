//! Discretisation and explicit time integration.
//!
//! A [`Simulation`] owns the target body, an optional rigid projectile and the
//! loading. [`Simulation::step`] advances one velocity-Verlet step:
//! half kick, drift, boundary re-pin, force evaluation (bonds, contact, body
//! force), half kick, then the bond-break commit.
//!
//! All per-point work runs in parallel against an immutable snapshot; every
//! reduction is sequential in index order so results do not depend on the
//! thread count.

pub mod boundary;
pub mod cells;
pub mod checkpoint;
pub mod lattice;
pub mod neighbors;

use std::path::PathBuf;

use rayon::prelude::*;

use crate::constitutive::{
    self, BondKinematics, ForceModel, InfluenceFunction, PointElasticity, WetEos,
};
use crate::contact::{self, ContactParams, RigidBody};
use crate::error::{Error, Result};
use crate::failure::FailureModel;
use crate::mesostructure::Phase;
use crate::vector::{add, axpy, dot, is_finite, scale, Vec3};

pub use boundary::Pulse;
use lattice::{BoundaryTag, Lattice};
use neighbors::{BondList, BROKEN};

/// `safety · Δx / c_d` with `c_d` the fastest dilatational wave speed.
pub fn stable_timestep(dx: f64, materials: &[PointElasticity], safety: f64) -> f64 {
    let c = materials
        .iter()
        .map(PointElasticity::dilatational_speed)
        .fold(0.0, f64::max);
    safety * dx / c
}

/// Splits a flat per-record buffer into one mutable row per point.
pub(crate) fn rows_mut<'a, T>(buf: &'a mut [T], bonds: &BondList) -> Vec<&'a mut [T]> {
    let mut rows = Vec::with_capacity(bonds.point_count());
    let mut rest = buf;
    for i in 0..bonds.point_count() {
        let (head, tail) = rest.split_at_mut(bonds.range(i).len());
        rows.push(head);
        rest = tail;
    }
    rows
}

/// Target body in its reference configuration.
#[derive(Debug, Clone)]
pub struct Body {
    pub dx: f64,
    pub horizon: f64,
    pub reference: Vec<Vec3>,
    pub volume: Vec<f64>,
    pub tags: Vec<BoundaryTag>,
    /// Integer grid coordinates of every point.
    pub cells: Vec<[i32; 3]>,
    pub bounds: [Vec3; 2],
    pub phases: Vec<Phase>,
    pub bonds: BondList,
    pub materials: Vec<PointElasticity>,
    pub weighted_volume: Vec<f64>,
    pub omega: InfluenceFunction,
}

impl Body {
    /// Assembles a body and computes the weighted volume of every point.
    /// Points without any bond get the weighted volume of a full horizon so
    /// that they stay inert instead of dividing by zero.
    pub fn new(
        lattice: Lattice,
        bonds: BondList,
        phases: Vec<Phase>,
        materials: Vec<PointElasticity>,
        omega: InfluenceFunction,
    ) -> Result<Self> {
        let n = lattice.len();
        if bonds.point_count() != n || phases.len() != n || materials.len() != n {
            return Err(Error::Model("body arrays disagree in length".into()));
        }
        let horizon = lattice.horizon;
        let weighted_volume = (0..n)
            .into_par_iter()
            .map(|i| {
                constitutive::weighted_volume(&bonds, i, omega, horizon)
                    .unwrap_or(4.0 * std::f64::consts::PI * horizon.powi(5) / 5.0)
            })
            .collect();
        Ok(Self {
            dx: lattice.dx,
            horizon,
            reference: lattice.positions,
            volume: lattice.volumes,
            tags: lattice.tags,
            cells: lattice.cells,
            bounds: lattice.bounds,
            phases,
            bonds,
            materials,
            weighted_volume,
            omega,
        })
    }

    pub fn len(&self) -> usize {
        self.reference.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reference.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct Projectile {
    pub body: RigidBody,
    pub contact: ContactParams,
}

/// Energy bookkeeping, all in joules.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EnergyAudit {
    pub kinetic: f64,
    pub strain: f64,
    pub projectile_kinetic: f64,
    /// Potential of the projectile contact.
    pub contact: f64,
    /// Work done by body forces so far.
    pub external_work: f64,
    /// Strain energy released by bond breakage so far.
    pub dissipated: f64,
}

impl EnergyAudit {
    pub fn total(&self) -> f64 {
        self.kinetic + self.strain + self.projectile_kinetic + self.contact + self.dissipated
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepReport {
    pub step: u64,
    pub time: f64,
    pub newly_broken: usize,
    pub eos_clamps: usize,
}

#[derive(Debug, Clone)]
pub struct SimulationSetup {
    pub body: Body,
    pub dt: f64,
    pub eos: Option<WetEos>,
    pub failure: Option<FailureModel>,
    pub projectile: Option<Projectile>,
    pub pulse: Option<Pulse>,
    /// Track strain energy and breakage dissipation every step.
    pub energy_audit: bool,
    /// Where to write the diagnostic frame when the state stops being finite.
    pub dump_dir: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub body: Body,
    pub dt: f64,
    pub eos: Option<WetEos>,
    pub failure: Option<FailureModel>,
    pub projectile: Option<Projectile>,
    pub pulse: Option<Pulse>,
    pub energy_audit: bool,
    pub dump_dir: Option<PathBuf>,

    pub position: Vec<Vec3>,
    pub velocity: Vec<Vec3>,
    /// Total force density (internal + contact + body force), N/m³.
    pub force: Vec<Vec3>,
    pub theta: Vec<f64>,
    pub pressure: Vec<f64>,
    pub time: f64,
    pub step: u64,
    pub energy: EnergyAudit,
    pub eos_clamps: u64,

    contact_force: Vec<Vec3>,
    breaks: Vec<bool>,
    /// Body force density on loaded points at the current time.
    applied: Vec3,
}

impl Simulation {
    pub fn new(setup: SimulationSetup) -> Result<Self> {
        if !(setup.dt > 0.0 && setup.dt.is_finite()) {
            return Err(Error::Config(format!("time step must be positive, got {}", setup.dt)));
        }
        let n = setup.body.len();
        let mut sim = Self {
            position: setup.body.reference.clone(),
            velocity: vec![[0.0; 3]; n],
            force: vec![[0.0; 3]; n],
            theta: vec![0.0; n],
            pressure: vec![0.0; n],
            contact_force: vec![[0.0; 3]; n],
            breaks: vec![false; setup.body.bonds.len()],
            body: setup.body,
            dt: setup.dt,
            eos: setup.eos,
            failure: setup.failure,
            projectile: setup.projectile,
            pulse: setup.pulse,
            energy_audit: setup.energy_audit,
            dump_dir: setup.dump_dir,
            time: 0.0,
            step: 0,
            energy: EnergyAudit::default(),
            eos_clamps: 0,
            applied: [0.0; 3],
        };
        sim.evaluate_forces(false);
        sim.applied = sim.applied_body_force();
        sim.refresh_energy();
        Ok(sim)
    }

    pub fn len(&self) -> usize {
        self.body.len()
    }

    pub fn is_empty(&self) -> bool {
        self.body.is_empty()
    }

    /// Recomputes forces and energies after the state was replaced.
    pub fn reevaluate(&mut self) {
        boundary::apply_boundary(&self.body, &mut self.position, &mut self.velocity);
        self.evaluate_forces(false);
        self.applied = self.applied_body_force();
        self.refresh_energy();
    }

    fn force_model(&self) -> ForceModel<'_> {
        ForceModel {
            bonds: &self.body.bonds,
            materials: &self.body.materials,
            weighted_volume: &self.body.weighted_volume,
            omega: self.body.omega,
            horizon: self.body.horizon,
            eos: self.eos.as_ref(),
        }
    }

    /// Recomputes dilatation, pressure and total force density for the
    /// current positions. With `check_bonds` the failure model flags bonds
    /// into the break buffer.
    fn evaluate_forces(&mut self, check_bonds: bool) -> usize {
        let mut theta = std::mem::take(&mut self.theta);
        let mut pressure = std::mem::take(&mut self.pressure);
        let mut force = std::mem::take(&mut self.force);
        let mut breaks = std::mem::take(&mut self.breaks);
        let clamps;
        {
            let model = self.force_model();
            model.compute_dilatation(&self.position, &mut theta);
            clamps = model.compute_pressure(&theta, &mut pressure);
            let classes = &self.body.bonds.class;
            match (&self.failure, check_bonds) {
                (Some(failure), true) => model.compute_forces(
                    &self.position,
                    Some(&self.velocity),
                    &theta,
                    &pressure,
                    &mut force,
                    Some(&mut breaks),
                    |k: BondKinematics| failure.breaks(classes[k.record], k.stretch, k.stretch_rate),
                ),
                _ => model.compute_forces(&self.position, None, &theta, &pressure, &mut force, None, |_| false),
            }
        }
        self.theta = theta;
        self.pressure = pressure;
        self.force = force;
        self.breaks = breaks;

        if let Some(proj) = &mut self.projectile {
            let reaction = contact::contact_forces(
                &self.position,
                &self.velocity,
                &self.body.volume,
                &proj.body,
                &proj.contact,
                self.dt,
                &mut self.contact_force,
            );
            proj.body.force = reaction;
            self.force
                .par_iter_mut()
                .zip(self.contact_force.par_iter())
                .for_each(|(f, c)| {
                    f[0] += c[0];
                    f[1] += c[1];
                    f[2] += c[2];
                });
        }
        if let Some(pulse) = &self.pulse {
            let b = pulse.body_force(self.time, self.body.dx);
            if b != [0.0; 3] {
                let tags = &self.body.tags;
                self.force.par_iter_mut().zip(tags.par_iter()).for_each(|(f, t)| {
                    if *t == BoundaryTag::Loaded {
                        axpy(f, 1.0, b);
                    }
                });
            }
        }
        clamps
    }

    fn applied_body_force(&self) -> Vec3 {
        self.pulse
            .as_ref()
            .map_or([0.0; 3], |p| p.body_force(self.time, self.body.dx))
    }

    /// Volume-weighted velocity sum over loaded points.
    fn loaded_flux(&self) -> Vec3 {
        let terms: Vec<Vec3> = (0..self.len())
            .into_par_iter()
            .map(|i| {
                if self.body.tags[i] == BoundaryTag::Loaded {
                    scale(self.velocity[i], self.body.volume[i])
                } else {
                    [0.0; 3]
                }
            })
            .collect();
        let mut sum = [0.0; 3];
        for t in &terms {
            axpy(&mut sum, 1.0, *t);
        }
        sum
    }

    fn half_kick(&mut self) {
        let h = 0.5 * self.dt;
        let body = &self.body;
        self.velocity
            .par_iter_mut()
            .zip(self.force.par_iter())
            .enumerate()
            .for_each(|(i, (v, f))| {
                if body.tags[i] != BoundaryTag::Pinned {
                    axpy(v, h / body.materials[i].density, *f);
                }
            });
        if let Some(p) = &mut self.projectile {
            p.body.kick(h);
        }
    }

    /// Advances one step.
    pub fn step(&mut self) -> Result<StepReport> {
        self.half_kick();
        let dt = self.dt;
        let flux = if self.pulse.is_some() { self.loaded_flux() } else { [0.0; 3] };
        self.position
            .par_iter_mut()
            .zip(self.velocity.par_iter())
            .for_each(|(x, v)| axpy(x, dt, *v));
        if let Some(p) = &mut self.projectile {
            p.body.drift(dt);
        }
        boundary::apply_boundary(&self.body, &mut self.position, &mut self.velocity);
        self.time += dt;
        self.step += 1;

        let check = self.failure.is_some();
        let clamps = self.evaluate_forces(check);
        self.eos_clamps += clamps as u64;
        self.half_kick();
        boundary::apply_boundary(&self.body, &mut self.position, &mut self.velocity);

        // mean body force over the step times the drift
        let applied = self.applied_body_force();
        self.energy.external_work += 0.5 * dt * dot(add(self.applied, applied), flux);
        self.applied = applied;

        let newly_broken = if check { self.commit_breaks() } else { 0 };
        if self.energy_audit {
            self.refresh_energy();
        } else {
            self.energy.kinetic = self.kinetic_energy();
            self.energy.projectile_kinetic = self.projectile_kinetic_energy();
        }
        self.check_finite()?;
        Ok(StepReport {
            step: self.step,
            time: self.time,
            newly_broken,
            eos_clamps: clamps,
        })
    }

    /// Marks flagged bonds broken at both endpoints. Returns the number of
    /// physical bonds broken in this commit.
    fn commit_breaks(&mut self) -> usize {
        let flags = &self.breaks;
        let twin = &self.body.bonds.twin;
        let offsets = &self.body.bonds.offsets;
        if !flags.par_iter().any(|&f| f) {
            return 0;
        }
        let strain_before = if self.energy_audit { self.strain_energy() } else { 0.0 };
        let mut state = std::mem::take(&mut self.body.bonds.state);
        let counts: Vec<usize> = rows_mut(&mut state, &self.body.bonds)
            .into_par_iter()
            .enumerate()
            .map(|(i, row)| {
                let start = offsets[i];
                let mut n = 0;
                for (k, s) in row.iter_mut().enumerate() {
                    let b = start + k;
                    if *s == 0 && (flags[b] || flags[twin[b] as usize]) {
                        *s |= BROKEN;
                        n += 1;
                    }
                }
                n
            })
            .collect();
        self.body.bonds.state = state;
        if self.energy_audit {
            let model = self.force_model();
            let mut theta = vec![0.0; self.len()];
            model.compute_dilatation(&self.position, &mut theta);
            self.theta = theta;
            let after = self.strain_energy();
            self.energy.dissipated += strain_before - after;
        }
        counts.iter().sum::<usize>() / 2
    }

    fn check_finite(&self) -> Result<()> {
        let bad = self
            .position
            .par_iter()
            .zip(self.velocity.par_iter())
            .position_first(|(x, v)| !is_finite(*x) || !is_finite(*v));
        let proj_bad = self
            .projectile
            .as_ref()
            .is_some_and(|p| !is_finite(p.body.origin) || !is_finite(p.body.velocity));
        if bad.is_none() && !proj_bad {
            return Ok(());
        }
        let reason = match bad {
            Some(i) => format!("non-finite state at point {i}"),
            None => "non-finite projectile state".to_string(),
        };
        let dump = self.dump_dir.as_ref().and_then(|dir| {
            let path = dir.join(format!("instability_{:08}.vtk", self.step));
            crate::scenarios::output::write_vtk(&path, self, &format!("instability at step {}", self.step))
                .ok()
                .map(|_| path)
        });
        Err(Error::Instability {
            step: self.step,
            reason,
            dump,
        })
    }

    pub fn kinetic_energy(&self) -> f64 {
        let terms: Vec<f64> = (0..self.len())
            .into_par_iter()
            .map(|i| {
                let v = self.velocity[i];
                0.5 * self.body.materials[i].density * self.body.volume[i] * dot(v, v)
            })
            .collect();
        terms.iter().sum()
    }

    pub fn projectile_kinetic_energy(&self) -> f64 {
        self.projectile
            .as_ref()
            .map(|p| 0.5 * p.body.mass * dot(p.body.velocity, p.body.velocity))
            .unwrap_or(0.0)
    }

    /// Elastic strain energy from the current dilatation.
    pub fn strain_energy(&self) -> f64 {
        let b = &self.body;
        let terms: Vec<f64> = (0..self.len())
            .into_par_iter()
            .map(|i| {
                constitutive::strain_energy_density(
                    &b.bonds,
                    &self.position,
                    i,
                    &b.materials[i],
                    b.weighted_volume[i],
                    self.theta[i],
                    b.omega,
                    b.horizon,
                ) * b.volume[i]
            })
            .collect();
        terms.iter().sum()
    }

    pub fn refresh_energy(&mut self) {
        self.energy.kinetic = self.kinetic_energy();
        self.energy.strain = self.strain_energy();
        self.energy.projectile_kinetic = self.projectile_kinetic_energy();
        self.energy.contact = match &self.projectile {
            Some(p) => contact::contact_energy(&self.position, &self.body.volume, &p.body, &p.contact),
            None => 0.0,
        };
    }

    /// Total linear momentum of target and projectile.
    pub fn momentum(&self) -> Vec3 {
        let mut p = [0.0; 3];
        for i in 0..self.len() {
            let m = self.body.materials[i].density * self.body.volume[i];
            axpy(&mut p, m, self.velocity[i]);
        }
        if let Some(proj) = &self.projectile {
            axpy(&mut p, 1.0, proj.body.momentum());
        }
        p
    }

    pub fn displacement(&self, i: usize) -> Vec3 {
        crate::vector::sub(self.position[i], self.body.reference[i])
    }

    pub fn damage(&self) -> Vec<f64> {
        (0..self.len())
            .into_par_iter()
            .map(|i| crate::failure::damage(&self.body.bonds, i))
            .collect()
    }

    pub fn relative_damage(&self) -> Vec<f64> {
        (0..self.len())
            .into_par_iter()
            .map(|i| crate::failure::relative_damage(&self.body.bonds, i))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timestep_examples() {
        let concrete = PointElasticity::from_young_poisson(32e9, 0.2, 2400.0);
        let dt = stable_timestep(0.007, &[concrete], 0.5);
        let c = ((concrete.bulk + 4.0 * concrete.shear / 3.0) / 2400.0).sqrt();
        assert!((c - 3849.0).abs() < 1.0, "{c}");
        assert!((dt - 9.1e-7).abs() < 0.01e-7, "{dt}");
        assert_eq!(stable_timestep(0.014, &[concrete], 0.5), 2.0 * dt);
        let stiff = PointElasticity::from_young_poisson(56.5e9, 0.2, 2400.0);
        assert!(stable_timestep(0.007, &[concrete, stiff], 0.5) < dt);
    }
}
