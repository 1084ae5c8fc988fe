use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[repr(u8)]
pub enum BoundaryTag {
    Free = 0,
    /// Held at zero displacement.
    Pinned = 1,
    /// Receives the traction pulse as a body force.
    Loaded = 2,
}

/// Target shape. Points sit at cell centres of a uniform grid with spacing
/// `dx`, the box spans `[0, size]` on each axis and the cylinder axis is `z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Geometry {
    Box { size: [f64; 3] },
    Cylinder { radius: f64, height: f64 },
}

#[derive(Debug, Clone)]
pub struct Lattice {
    pub dx: f64,
    pub horizon: f64,
    pub positions: Vec<Vec3>,
    pub volumes: Vec<f64>,
    pub tags: Vec<BoundaryTag>,
    /// Integer grid coordinates of every point.
    pub cells: Vec<[i32; 3]>,
    pub bounds: [Vec3; 2],
}

impl Lattice {
    pub fn build(geometry: &Geometry, dx: f64, horizon_ratio: f64) -> Result<Self> {
        if !(dx > 0.0) {
            return Err(Error::Config(format!("grid spacing must be positive, got {dx}")));
        }
        if !(horizon_ratio >= 3.0) {
            return Err(Error::Config(format!(
                "horizon must be at least 3 grid spacings, got ratio {horizon_ratio}"
            )));
        }
        let (counts, origin, bounds) = match *geometry {
            Geometry::Box { size } => {
                if size.iter().any(|s| !(*s > 0.0)) {
                    return Err(Error::Config(format!("box size must be positive: {size:?}")));
                }
                let n = size.map(|s| ((s / dx).round() as i64).max(1) as i32);
                (n, [0.0; 3], [[0.0; 3], size])
            }
            Geometry::Cylinder { radius, height } => {
                if !(radius > 0.0 && height > 0.0) {
                    return Err(Error::Config("cylinder radius and height must be positive".into()));
                }
                let nr = ((2.0 * radius / dx).round() as i32).max(1);
                let nz = ((height / dx).round() as i32).max(1);
                let half = nr as f64 * dx / 2.0;
                ([nr, nr, nz], [-half, -half, 0.0], [[-radius, -radius, 0.0], [radius, radius, height]])
            }
        };
        let mut positions = Vec::new();
        let mut cells = Vec::new();
        for i in 0..counts[0] {
            for j in 0..counts[1] {
                for k in 0..counts[2] {
                    let p = [
                        origin[0] + (i as f64 + 0.5) * dx,
                        origin[1] + (j as f64 + 0.5) * dx,
                        origin[2] + (k as f64 + 0.5) * dx,
                    ];
                    if let Geometry::Cylinder { radius, .. } = geometry {
                        if p[0] * p[0] + p[1] * p[1] > radius * radius {
                            continue;
                        }
                    }
                    positions.push(p);
                    cells.push([i, j, k]);
                }
            }
        }
        let n = positions.len();
        Ok(Self {
            dx,
            horizon: horizon_ratio * dx,
            positions,
            volumes: vec![dx * dx * dx; n],
            tags: vec![BoundaryTag::Free; n],
            cells,
            bounds,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Pins every point within `thickness` of a lateral (x or y) face.
    pub fn pin_lateral_shell(&mut self, thickness: f64) {
        let [lo, hi] = self.bounds;
        for (p, tag) in self.positions.iter().zip(self.tags.iter_mut()) {
            let lateral = (0..2).any(|a| p[a] - lo[a] < thickness || hi[a] - p[a] < thickness);
            if lateral {
                *tag = BoundaryTag::Pinned;
            }
        }
    }

    /// Tags the points within `thickness` of the face `axis = max` as loaded.
    pub fn tag_loaded_face(&mut self, axis: usize, thickness: f64) -> usize {
        let hi = self.bounds[1][axis];
        let mut count = 0;
        for (p, tag) in self.positions.iter().zip(self.tags.iter_mut()) {
            if hi - p[axis] < thickness && *tag == BoundaryTag::Free {
                *tag = BoundaryTag::Loaded;
                count += 1;
            }
        }
        count
    }
}
