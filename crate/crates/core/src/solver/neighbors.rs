//! Bond storage.
//!
//! Bonds are kept in compressed rows: the bonds of point `i` occupy
//! `offsets[i]..offsets[i + 1]`, sorted by partner index. Each physical bond
//! appears twice, once per endpoint, and `twin` links the two records.

use std::ops::Range;

use rayon::prelude::*;

use crate::mesostructure::BondClass;
use crate::solver::cells::CellGrid;
use crate::solver::lattice::Lattice;
use crate::vector::{norm, sub, Vec3};

/// Bond severed by the failure criterion during the run.
pub const BROKEN: u8 = 1;
/// Bond severed during preprocessing to represent a pore.
pub const PREBROKEN: u8 = 2;

/// Relative slack on the horizon test so that partners exactly on the
/// horizon sphere are kept despite rounding in the grid coordinates.
const HORIZON_SLACK: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct BondList {
    pub offsets: Vec<usize>,
    pub partner: Vec<u32>,
    /// Reference bond length |ξ|.
    pub length: Vec<f64>,
    /// Partner volume after the partial-volume correction.
    pub volume: Vec<f64>,
    pub twin: Vec<u32>,
    pub class: Vec<BondClass>,
    pub state: Vec<u8>,
}

pub fn within_horizon(distance: f64, horizon: f64) -> bool {
    distance > 0.0 && distance <= horizon * (1.0 + HORIZON_SLACK)
}

/// Fraction of the partner cell that lies inside the horizon.
pub fn partial_volume_factor(distance: f64, horizon: f64, dx: f64) -> f64 {
    if distance <= horizon - 0.5 * dx {
        1.0
    } else {
        ((horizon + 0.5 * dx - distance) / dx).clamp(0.0, 1.0)
    }
}

impl BondList {
    pub fn build(lattice: &Lattice) -> Self {
        let positions = &lattice.positions;
        let horizon = lattice.horizon;
        let reach = horizon * (1.0 + HORIZON_SLACK);
        let grid = CellGrid::build(positions, reach);
        let rows: Vec<Vec<(u32, f64)>> = positions
            .par_iter()
            .enumerate()
            .map(|(i, &p)| {
                let mut row = Vec::new();
                grid.for_each_candidate(p, reach, |j| {
                    if j != i {
                        let d = norm(sub(positions[j], p));
                        if within_horizon(d, horizon) {
                            row.push((j as u32, d));
                        }
                    }
                });
                row.sort_unstable_by_key(|&(j, _)| j);
                row
            })
            .collect();
        Self::from_rows(lattice, rows)
    }

    fn from_rows(lattice: &Lattice, rows: Vec<Vec<(u32, f64)>>) -> Self {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0);
        for r in &rows {
            offsets.push(offsets.last().unwrap() + r.len());
        }
        let total = *offsets.last().unwrap();
        let mut partner = Vec::with_capacity(total);
        let mut length = Vec::with_capacity(total);
        let mut volume = Vec::with_capacity(total);
        for r in &rows {
            for &(j, d) in r {
                partner.push(j);
                length.push(d);
                volume.push(
                    lattice.volumes[j as usize]
                        * partial_volume_factor(d, lattice.horizon, lattice.dx),
                );
            }
        }
        let twin: Vec<u32> = (0..rows.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let partner = &partner;
                let offsets = &offsets;
                (offsets[i]..offsets[i + 1]).map(move |b| {
                    let j = partner[b] as usize;
                    let row = &partner[offsets[j]..offsets[j + 1]];
                    let k = row
                        .binary_search(&(i as u32))
                        .expect("bond lists are symmetric");
                    (offsets[j] + k) as u32
                })
            })
            .collect();
        Self {
            offsets,
            partner,
            length,
            volume,
            twin,
            class: vec![BondClass::HomogenizedConcrete; total],
            state: vec![0; total],
        }
    }

    pub fn point_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of bond records (twice the number of physical bonds).
    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    #[inline]
    pub fn range(&self, i: usize) -> Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    #[inline]
    pub fn is_intact(&self, b: usize) -> bool {
        self.state[b] == 0
    }

    pub fn is_prebroken(&self, b: usize) -> bool {
        self.state[b] & PREBROKEN != 0
    }

    pub fn mark_prebroken(&mut self, b: usize) {
        let t = self.twin[b] as usize;
        self.state[b] |= PREBROKEN;
        self.state[t] |= PREBROKEN;
    }

    pub fn broken_count(&self) -> usize {
        self.state.iter().filter(|&&s| s & BROKEN != 0).count() / 2
    }

    pub fn prebroken_count(&self) -> usize {
        self.state.iter().filter(|&&s| s & PREBROKEN != 0).count() / 2
    }

    /// Reference bond vector of record `b` from point `i`.
    #[inline]
    pub fn reference_vector(&self, reference: &[Vec3], i: usize, b: usize) -> Vec3 {
        sub(reference[self.partner[b] as usize], reference[i])
    }
}
