//! Short-range contact between a rigid projectile and target points.
//!
//! Contact only depends on current positions: a target point closer than the
//! critical distance to a projectile point is pushed away along the line of
//! centres with a linear repulsion.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::cells::CellGrid;
use crate::vector::{add, axpy, norm, scale, sub, Vec3};

/// Micromodulus of the bond-based model with the same bulk modulus,
/// `c = 18K/(πδ⁴)`.
pub fn micromodulus(bulk: f64, horizon: f64) -> f64 {
    18.0 * bulk / (PI * horizon.powi(4))
}

/// `min{0.9‖x′ − x‖, 1.35Δx}`; pairs without a reference bond use the
/// second term only.
pub fn critical_distance(reference_distance: Option<f64>, dx: f64) -> f64 {
    let cap = 1.35 * dx.abs();
    match reference_distance {
        Some(d) => (0.9 * d).min(cap),
        None => cap,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactParams {
    /// `c_sh = 15c`.
    pub stiffness: f64,
    pub horizon: f64,
    pub critical_distance: f64,
}

impl ContactParams {
    pub fn from_bulk(bulk: f64, horizon: f64, dx: f64) -> Self {
        Self {
            stiffness: 15.0 * micromodulus(bulk, horizon),
            horizon,
            critical_distance: critical_distance(None, dx),
        }
    }
}

/// Force density per unit volume squared acting on `y_i` due to `y_p`.
/// Zero at and beyond the critical distance, repulsive inside it.
/// `fallback` gives the push direction (from `p` to `i`) when the two points
/// coincide; the magnitude is then capped at its value at zero separation.
pub fn short_range_force(y_p: Vec3, y_i: Vec3, params: &ContactParams, fallback: Vec3) -> Vec3 {
    let d = sub(y_i, y_p);
    let r = norm(d);
    if r >= params.critical_distance {
        return [0.0; 3];
    }
    let magnitude = params.stiffness / params.horizon * (params.critical_distance - r);
    let dir = if r > 1e-12 * params.critical_distance {
        scale(d, 1.0 / r)
    } else {
        let n = norm(fallback);
        if n > 0.0 {
            scale(fallback, 1.0 / n)
        } else {
            [0.0, 0.0, 1.0]
        }
    };
    scale(dir, magnitude)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoseShape {
    Flat,
    Hemispherical,
    /// Tangent ogive with the given calibre-radius-head.
    Ogive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectileShape {
    pub diameter: f64,
    /// Overall length including the nose.
    pub length: f64,
    pub nose: NoseShape,
    /// Calibre-radius-head of the ogive nose.
    #[serde(default = "default_crh")]
    pub crh: f64,
}

fn default_crh() -> f64 {
    3.0
}

impl ProjectileShape {
    fn nose_length(&self) -> f64 {
        let r = 0.5 * self.diameter;
        match self.nose {
            NoseShape::Flat => 0.0,
            NoseShape::Hemispherical => r,
            NoseShape::Ogive => {
                let s = self.crh * self.diameter;
                (s * s - (s - r) * (s - r)).sqrt()
            }
        }
    }

    /// Radius of the body at distance `h` behind the tip.
    fn radius_at(&self, h: f64) -> f64 {
        let r = 0.5 * self.diameter;
        let ln = self.nose_length();
        if h < 0.0 || h > self.length {
            return -1.0;
        }
        if h >= ln {
            return r;
        }
        match self.nose {
            NoseShape::Flat => r,
            NoseShape::Hemispherical => {
                let z = r - h;
                (r * r - z * z).max(0.0).sqrt()
            }
            NoseShape::Ogive => {
                let s = self.crh * self.diameter;
                let z = ln - h;
                (s * s - z * z).max(0.0).sqrt() - (s - r)
            }
        }
    }

    /// Point offsets on a grid of spacing `dx`, relative to the tip. The body
    /// extends from the tip towards `+z`.
    pub fn discretize(&self, dx: f64) -> Result<Vec<Vec3>> {
        if !(self.diameter > 0.0 && self.length > self.nose_length() - 1e-12 && dx > 0.0) {
            return Err(Error::Config(format!("invalid projectile shape {self:?}")));
        }
        let nr = (0.5 * self.diameter / dx).ceil() as i64;
        let nz = (self.length / dx).round().max(1.0) as i64;
        let mut pts = Vec::new();
        for k in 0..nz {
            let h = (k as f64 + 0.5) * dx;
            let rad = self.radius_at(h);
            for i in -nr..nr {
                for j in -nr..nr {
                    let x = (i as f64 + 0.5) * dx;
                    let y = (j as f64 + 0.5) * dx;
                    if x * x + y * y <= rad * rad {
                        pts.push([x, y, h]);
                    }
                }
            }
        }
        if pts.is_empty() {
            // thinner than one grid cell: a single column on the axis
            pts = (0..nz).map(|k| [0.0, 0.0, (k as f64 + 0.5) * dx]).collect();
        }
        Ok(pts)
    }
}

/// Projectile translating without rotation or deformation.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidBody {
    /// Point offsets from `origin`, constant in time.
    pub offsets: Vec<Vec3>,
    pub mass: f64,
    /// Reference point of the body (the tip for shaped projectiles).
    pub origin: Vec3,
    pub velocity: Vec3,
    pub force: Vec3,
    /// Volume represented by each point.
    pub point_volume: f64,
}

impl RigidBody {
    pub fn new(offsets: Vec<Vec3>, mass: f64, origin: Vec3, velocity: Vec3, point_volume: f64) -> Result<Self> {
        if !(mass > 0.0) || offsets.is_empty() {
            return Err(Error::Config("rigid body needs positive mass and at least one point".into()));
        }
        Ok(Self {
            offsets,
            mass,
            origin,
            velocity,
            force: [0.0; 3],
            point_volume,
        })
    }

    pub fn positions(&self) -> Vec<Vec3> {
        self.offsets.iter().map(|o| add(self.origin, *o)).collect()
    }

    pub fn acceleration(&self) -> Vec3 {
        scale(self.force, 1.0 / self.mass)
    }

    pub fn kick(&mut self, dt: f64) {
        let a = self.acceleration();
        axpy(&mut self.velocity, dt, a);
    }

    pub fn drift(&mut self, dt: f64) {
        let v = self.velocity;
        axpy(&mut self.origin, dt, v);
    }

    /// One explicit translation step under the stored net force.
    pub fn step(&mut self, dt: f64) {
        self.kick(dt);
        self.drift(dt);
    }

    pub fn momentum(&self) -> Vec3 {
        scale(self.velocity, self.mass)
    }
}

/// Contact force density on every target point and the net reaction on the
/// projectile. Reactions are summed in target-index order.
pub fn contact_forces(
    target: &[Vec3],
    target_velocity: &[Vec3],
    target_volume: &[f64],
    body: &RigidBody,
    params: &ContactParams,
    dt: f64,
    out: &mut [Vec3],
) -> Vec3 {
    let proj = body.positions();
    let reach = params.critical_distance;
    let grid = CellGrid::build(&proj, reach);
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in &proj {
        for a in 0..3 {
            lo[a] = lo[a].min(p[a] - reach);
            hi[a] = hi[a].max(p[a] + reach);
        }
    }
    out.par_iter_mut().enumerate().for_each(|(i, f)| {
        *f = [0.0; 3];
        let y = target[i];
        if (0..3).any(|a| y[a] < lo[a] || y[a] > hi[a]) {
            return;
        }
        grid.for_each_candidate(y, reach, |p| {
            // previous-step separation as the fallback direction
            let prev_i = sub(y, scale(target_velocity[i], dt));
            let prev_p = sub(proj[p], scale(body.velocity, dt));
            let g = short_range_force(proj[p], y, params, sub(prev_i, prev_p));
            axpy(f, body.point_volume, g);
        });
    });
    let mut reaction = [0.0; 3];
    for (f, v) in out.iter().zip(target_volume) {
        if f[0] != 0.0 || f[1] != 0.0 || f[2] != 0.0 {
            axpy(&mut reaction, -v, *f);
        }
    }
    reaction
}

/// Potential of the repulsion, zero when no pair is closer than the critical
/// distance.
pub fn contact_energy(target: &[Vec3], target_volume: &[f64], body: &RigidBody, params: &ContactParams) -> f64 {
    let proj = body.positions();
    let reach = params.critical_distance;
    let grid = CellGrid::build(&proj, reach);
    let k = params.stiffness / params.horizon * body.point_volume;
    let terms: Vec<f64> = target
        .par_iter()
        .zip(target_volume.par_iter())
        .map(|(y, v)| {
            let mut e = 0.0;
            grid.for_each_candidate(*y, reach, |p| {
                let gap = reach - norm(sub(*y, proj[p]));
                if gap > 0.0 {
                    e += 0.5 * k * v * gap * gap;
                }
            });
            e
        })
        .collect();
    terms.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ContactParams {
        ContactParams {
            stiffness: 1e15,
            horizon: 0.04,
            critical_distance: 0.0135,
        }
    }

    #[test]
    fn critical_distance_examples() {
        assert!((critical_distance(Some(0.010), 0.010) - 0.009).abs() < 1e-15);
        assert!((critical_distance(Some(0.020), 0.010) - 0.0135).abs() < 1e-15);
        assert!((critical_distance(None, 0.010) - 0.0135).abs() < 1e-15);
    }

    #[test]
    fn force_vanishes_at_critical_distance() {
        let p = params();
        assert_eq!(short_range_force([0.0; 3], [p.critical_distance, 0.0, 0.0], &p, [0.0; 3]), [0.0; 3]);
        assert_eq!(short_range_force([0.0; 3], [0.1, 0.0, 0.0], &p, [0.0; 3]), [0.0; 3]);
    }

    #[test]
    fn half_distance_magnitude_and_direction() {
        let p = params();
        let half = 0.5 * p.critical_distance;
        let f = short_range_force([0.0; 3], [0.0, half, 0.0], &p, [0.0; 3]);
        let expect = p.stiffness / p.horizon * half;
        assert!((f[1] - expect).abs() <= 1e-12 * expect);
        assert_eq!((f[0], f[2]), (0.0, 0.0));
        let back = short_range_force([0.0, half, 0.0], [0.0; 3], &p, [0.0; 3]);
        assert_eq!(back[1], -f[1]);
    }

    #[test]
    fn never_attractive_and_continuous() {
        let p = params();
        for k in 0..200 {
            let r = p.critical_distance * (0.001 + k as f64 / 150.0);
            let f = short_range_force([0.0; 3], [r, 0.0, 0.0], &p, [0.0; 3]);
            assert!(f[0] >= 0.0);
        }
        let near = short_range_force([0.0; 3], [p.critical_distance * (1.0 - 1e-9), 0.0, 0.0], &p, [0.0; 3]);
        assert!(near[0] < 1e-6 * p.stiffness / p.horizon * p.critical_distance);
    }

    #[test]
    fn coincident_points_use_fallback() {
        let p = params();
        let f = short_range_force([0.1; 3], [0.1; 3], &p, [0.0, 0.0, -2.0]);
        let cap = p.stiffness / p.horizon * p.critical_distance;
        assert_eq!(f, [0.0, 0.0, -cap]);
    }

    #[test]
    fn rigid_motion() {
        let mut body = RigidBody::new(vec![[0.0; 3], [0.0, 0.0, 0.01]], 2.0, [0.0; 3], [0.0, 0.0, -3.0], 1e-6).unwrap();
        body.step(0.1);
        assert_eq!(body.velocity, [0.0, 0.0, -3.0]);
        body.force = [4.0, 0.0, 0.0];
        let v0 = body.velocity;
        body.kick(0.5);
        assert_eq!(body.velocity[0] - v0[0], 4.0 * 0.5 / 2.0);
        let pos = body.positions();
        let d = sub(pos[1], pos[0]);
        assert!(d[0] == 0.0 && d[1] == 0.0 && (d[2] - 0.01).abs() < 1e-15);
    }

    #[test]
    fn projectile_shapes_discretize() {
        for nose in [NoseShape::Flat, NoseShape::Hemispherical, NoseShape::Ogive] {
            let s = ProjectileShape {
                diameter: 0.05,
                length: 0.16,
                nose,
                crh: 3.0,
            };
            let pts = s.discretize(0.005).unwrap();
            let vol = pts.len() as f64 * 1.25e-7;
            let cyl = PI * 0.025 * 0.025 * 0.16;
            assert!(vol <= cyl * 1.1 && vol > 0.6 * cyl, "{nose:?} {vol} {cyl}");
            assert!(pts.iter().all(|p| p[2] > 0.0));
        }
    }

    #[test]
    fn reaction_balances_target_forces() {
        let p = params();
        let body = RigidBody::new(vec![[0.0; 3]], 1.0, [0.0, 0.0, 0.0], [0.0, 0.0, -1.0], 1e-6).unwrap();
        let target = vec![[0.005, 0.0, -0.004], [0.0, 0.0, -0.01], [0.5, 0.5, 0.5]];
        let vel = vec![[0.0; 3]; 3];
        let vol = vec![1e-6, 2e-6, 1e-6];
        let mut out = vec![[0.0; 3]; 3];
        let r = contact_forces(&target, &vel, &vol, &body, &p, 1e-6, &mut out);
        assert_eq!(out[2], [0.0; 3]);
        for a in 0..3 {
            let sum = out[0][a] * vol[0] + out[1][a] * vol[1];
            assert!((sum + r[a]).abs() <= 1e-12 * sum.abs().max(1.0));
        }
        assert!(r[2] > 0.0);
    }
}
