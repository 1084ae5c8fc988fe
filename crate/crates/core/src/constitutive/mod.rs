//! Ordinary state-based peridynamic force states.
//!
//! Each bond carries a scalar force along the deformed bond direction. The
//! scalar splits into an isotropic part driven by the dilatation and a
//! deviatoric part driven by the deviatoric extension:
//!
//! ```text
//! t = −3p/m · ω|ξ| + α ω e_d,   e_d = e − θ|ξ|/3,   α = 15G/m
//! ```
//!
//! with `p = −Kθ` in the elastic range and the wet-concrete EOS beyond the
//! crush strain (see [`eos::WetEos`]).

pub mod eos;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::neighbors::BondList;
use crate::vector::{axpy, dot, norm, scale, sub, Vec3};

pub use eos::{EosParams, WaterEos, WetEos};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfluenceFunction {
    #[default]
    Unit,
    /// ω = δ/|ξ|
    InverseDistance,
}

impl InfluenceFunction {
    #[inline]
    pub fn weight(self, length: f64, horizon: f64) -> f64 {
        match self {
            InfluenceFunction::Unit => 1.0,
            InfluenceFunction::InverseDistance => horizon / length,
        }
    }
}

/// Elastic constants and density of one material point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointElasticity {
    pub bulk: f64,
    pub shear: f64,
    pub density: f64,
}

impl PointElasticity {
    pub fn from_young_poisson(young: f64, poisson: f64, density: f64) -> Self {
        Self {
            bulk: young / (3.0 * (1.0 - 2.0 * poisson)),
            shear: young / (2.0 * (1.0 + poisson)),
            density,
        }
    }

    /// Deviatoric constant `α = 15G/m`.
    pub fn alpha(&self, weighted_volume: f64) -> f64 {
        15.0 * self.shear / weighted_volume
    }

    /// Dilatational wave speed `√((K + 4G/3)/ρ)`.
    pub fn dilatational_speed(&self) -> f64 {
        ((self.bulk + 4.0 * self.shear / 3.0) / self.density).sqrt()
    }
}

/// `m = Σ ω |ξ|² V` over every bond of point `i`, broken or not.
pub fn weighted_volume(
    bonds: &BondList,
    i: usize,
    omega: InfluenceFunction,
    horizon: f64,
) -> Result<f64> {
    let range = bonds.range(i);
    if range.is_empty() {
        return Err(Error::Model(format!("point {i} has an empty horizon")));
    }
    Ok(range
        .map(|b| {
            let l = bonds.length[b];
            omega.weight(l, horizon) * l * l * bonds.volume[b]
        })
        .sum())
}

/// `θ = 3/m Σ ω |ξ| e V` over the intact bonds of point `i`.
pub fn dilatation(
    bonds: &BondList,
    current: &[Vec3],
    i: usize,
    weighted_volume: f64,
    omega: InfluenceFunction,
    horizon: f64,
) -> f64 {
    let mut sum = 0.0;
    for b in bonds.range(i) {
        if !bonds.is_intact(b) {
            continue;
        }
        let l = bonds.length[b];
        let y = norm(sub(current[bonds.partner[b] as usize], current[i]));
        sum += omega.weight(l, horizon) * l * (y - l) * bonds.volume[b];
    }
    3.0 * sum / weighted_volume
}

/// Scalar force state of one bond.
///
/// `isotropic` is the coefficient `−3p/m` of the owning point, `alpha` its
/// deviatoric constant. Broken bonds carry no force.
#[inline]
pub fn scalar_force_state(
    isotropic: f64,
    alpha: f64,
    weight: f64,
    length: f64,
    extension: f64,
    theta: f64,
    intact: bool,
) -> f64 {
    if !intact {
        return 0.0;
    }
    let deviatoric = extension - theta * length / 3.0;
    weight * (isotropic * length + alpha * deviatoric)
}

/// `W = Kθ²/2 + (α/2) Σ ω e_d² V` over intact bonds.
pub fn strain_energy_density(
    bonds: &BondList,
    current: &[Vec3],
    i: usize,
    material: &PointElasticity,
    weighted_volume: f64,
    theta: f64,
    omega: InfluenceFunction,
    horizon: f64,
) -> f64 {
    let alpha = material.alpha(weighted_volume);
    let mut dev = 0.0;
    for b in bonds.range(i) {
        if !bonds.is_intact(b) {
            continue;
        }
        let l = bonds.length[b];
        let y = norm(sub(current[bonds.partner[b] as usize], current[i]));
        let ed = (y - l) - theta * l / 3.0;
        dev += omega.weight(l, horizon) * ed * ed * bonds.volume[b];
    }
    0.5 * material.bulk * theta * theta + 0.5 * alpha * dev
}

/// Bond-level quantities handed to the failure check during force evaluation.
#[derive(Debug, Clone, Copy)]
pub struct BondKinematics {
    pub record: usize,
    pub stretch: f64,
    pub stretch_rate: f64,
}

/// Immutable view of everything the force evaluation reads.
pub struct ForceModel<'a> {
    pub bonds: &'a BondList,
    pub materials: &'a [PointElasticity],
    pub weighted_volume: &'a [f64],
    pub omega: InfluenceFunction,
    pub horizon: f64,
    pub eos: Option<&'a WetEos>,
}

impl ForceModel<'_> {
    pub fn compute_dilatation(&self, current: &[Vec3], theta: &mut [f64]) {
        theta.par_iter_mut().enumerate().for_each(|(i, th)| {
            *th = dilatation(
                self.bonds,
                current,
                i,
                self.weighted_volume[i],
                self.omega,
                self.horizon,
            );
        });
    }

    /// Pressure of every point from its dilatation; returns the number of
    /// points whose water compression was clamped.
    pub fn compute_pressure(&self, theta: &[f64], pressure: &mut [f64]) -> usize {
        pressure
            .par_iter_mut()
            .enumerate()
            .map(|(i, p)| {
                let bulk = self.materials[i].bulk;
                match self.eos {
                    Some(eos) => {
                        let eval = eos.pressure(theta[i], bulk);
                        *p = eval.value;
                        eval.clamped as usize
                    }
                    None => {
                        *p = -bulk * theta[i];
                        0
                    }
                }
            })
            .sum()
    }

    /// Internal force density of every point,
    /// `L_i = Σ (t_ij + t_ji) M_ij V_j` over intact bonds in bond order.
    ///
    /// When `velocity` is given, `on_bond` sees the stretch and stretch rate
    /// of every intact bond record and returns whether it should break; the
    /// answer is written to `breaks` (one flag per record).
    pub fn compute_forces<F>(
        &self,
        current: &[Vec3],
        velocity: Option<&[Vec3]>,
        theta: &[f64],
        pressure: &[f64],
        force: &mut [Vec3],
        breaks: Option<&mut [bool]>,
        on_bond: F,
    ) where
        F: Fn(BondKinematics) -> bool + Sync,
    {
        let bonds = self.bonds;
        let iso: Vec<f64> = (0..force.len())
            .into_par_iter()
            .map(|i| -3.0 * pressure[i] / self.weighted_volume[i])
            .collect();
        let alpha: Vec<f64> = (0..force.len())
            .into_par_iter()
            .map(|i| self.materials[i].alpha(self.weighted_volume[i]))
            .collect();
        let kernel = |i: usize, flags: Option<&mut [bool]>| -> Vec3 {
            let mut f = [0.0; 3];
            let xi = current[i];
            let mut flags = flags;
            for (k, b) in bonds.range(i).enumerate() {
                if !bonds.is_intact(b) {
                    if let Some(fl) = flags.as_deref_mut() {
                        fl[k] = false;
                    }
                    continue;
                }
                let j = bonds.partner[b] as usize;
                let l = bonds.length[b];
                let dy = sub(current[j], xi);
                let y = norm(dy);
                let e = y - l;
                let w = self.omega.weight(l, self.horizon);
                let t_ij = scalar_force_state(iso[i], alpha[i], w, l, e, theta[i], true);
                let t_ji = scalar_force_state(iso[j], alpha[j], w, l, e, theta[j], true);
                let dir = scale(dy, 1.0 / y);
                axpy(&mut f, (t_ij + t_ji) * bonds.volume[b], dir);
                if let (Some(v), Some(fl)) = (velocity, flags.as_deref_mut()) {
                    let rate = dot(sub(v[j], v[i]), dir) / l;
                    fl[k] = on_bond(BondKinematics {
                        record: b,
                        stretch: e / l,
                        stretch_rate: rate,
                    });
                }
            }
            f
        };
        match breaks {
            Some(flags) => {
                // split the flat per-record buffer into per-point rows
                let mut rows: Vec<&mut [bool]> = Vec::with_capacity(force.len());
                let mut rest = flags;
                for i in 0..force.len() {
                    let (head, tail) = rest.split_at_mut(bonds.range(i).len());
                    rows.push(head);
                    rest = tail;
                }
                force
                    .par_iter_mut()
                    .zip(rows.into_par_iter())
                    .enumerate()
                    .for_each(|(i, (f, row))| *f = kernel(i, Some(row)));
            }
            None => force
                .par_iter_mut()
                .enumerate()
                .for_each(|(i, f)| *f = kernel(i, None)),
        }
    }
}
