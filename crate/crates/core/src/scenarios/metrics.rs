//! Post-processing of damage fields.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::vector::Vec3;

/// Crater at the entry face and scabbing at the exit face, in metres.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CraterMetrics {
    pub crater_radius: f64,
    pub crater_depth: f64,
    pub scabbing_radius: f64,
    pub scabbing_depth: f64,
}

/// Damage field on grid points. The entry face is the top layer along `z`,
/// the exit face the bottom layer; radii are measured from the vertical line
/// through `axis`.
pub struct DamageField<'a> {
    pub damage: &'a [f64],
    pub cells: &'a [[i32; 3]],
    pub positions: &'a [Vec3],
    pub dx: f64,
    pub axis: [f64; 2],
}

/// Extent of the damaged sets touching each face. A point is damaged when
/// `D ≥ threshold`; points are connected when their grid cells touch,
/// including diagonally. Extents are measured to the outer edge of each
/// point's cell.
pub fn crater_metrics(field: &DamageField<'_>, threshold: f64) -> CraterMetrics {
    let n = field.damage.len();
    if n == 0 {
        return CraterMetrics::default();
    }
    let top = field.cells.iter().map(|c| c[2]).max().unwrap_or(0);
    let bottom = field.cells.iter().map(|c| c[2]).min().unwrap_or(0);
    let index: HashMap<[i32; 3], usize> = field
        .cells
        .iter()
        .enumerate()
        .filter(|(i, _)| field.damage[*i] >= threshold)
        .map(|(i, c)| (*c, i))
        .collect();

    let flood = |layer: i32| -> Vec<usize> {
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = index
            .values()
            .copied()
            .filter(|&i| field.cells[i][2] == layer)
            .collect();
        for &i in &stack {
            seen[i] = true;
        }
        let mut set = Vec::new();
        while let Some(i) = stack.pop() {
            set.push(i);
            let c = field.cells[i];
            for dx in -1..=1 {
                for dy in -1..=1 {
                    for dz in -1..=1 {
                        let key = [c[0] + dx, c[1] + dy, c[2] + dz];
                        if let Some(&j) = index.get(&key) {
                            if !seen[j] {
                                seen[j] = true;
                                stack.push(j);
                            }
                        }
                    }
                }
            }
        }
        set
    };

    let half = 0.5 * field.dx;
    // `face_z` is the centre height of the face layer; the face itself lies
    // half a cell further out
    let extent = |set: &[usize], layer: i32| -> (f64, f64) {
        if set.is_empty() {
            return (0.0, 0.0);
        }
        let face_z = field.positions[set[0]][2] - (field.cells[set[0]][2] - layer) as f64 * field.dx;
        let mut radius: f64 = 0.0;
        let mut depth: f64 = 0.0;
        for &i in set {
            let p = field.positions[i];
            if field.cells[i][2] == layer {
                let r = ((p[0] - field.axis[0]).powi(2) + (p[1] - field.axis[1]).powi(2)).sqrt();
                radius = radius.max(r + half);
            }
            depth = depth.max((p[2] - face_z).abs() + field.dx);
        }
        (radius, depth)
    };

    let (crater_radius, crater_depth) = extent(&flood(top), top);
    let (scabbing_radius, scabbing_depth) = extent(&flood(bottom), bottom);
    CraterMetrics {
        crater_radius,
        crater_depth,
        scabbing_radius,
        scabbing_depth,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: i32, nz: i32, dx: f64) -> (Vec<[i32; 3]>, Vec<Vec3>) {
        let mut cells = Vec::new();
        let mut pos = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..nz {
                    cells.push([i, j, k]);
                    pos.push([(i as f64 + 0.5) * dx, (j as f64 + 0.5) * dx, (k as f64 + 0.5) * dx]);
                }
            }
        }
        (cells, pos)
    }

    #[test]
    fn pristine_field_gives_zeros() {
        let (cells, pos) = grid(6, 4, 0.1);
        let damage = vec![0.0; cells.len()];
        let f = DamageField {
            damage: &damage,
            cells: &cells,
            positions: &pos,
            dx: 0.1,
            axis: [0.3, 0.3],
        };
        assert_eq!(crater_metrics(&f, 0.35), CraterMetrics::default());
    }

    #[test]
    fn hemisphere_at_entry_face() {
        let dx = 0.01;
        let (cells, pos) = grid(60, 30, dx);
        let centre = [0.3, 0.3, 0.3];
        let r = 0.12;
        let damage: Vec<f64> = pos
            .iter()
            .map(|p| {
                let d = ((p[0] - centre[0]).powi(2) + (p[1] - centre[1]).powi(2) + (p[2] - centre[2]).powi(2)).sqrt();
                if d <= r {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        let f = DamageField {
            damage: &damage,
            cells: &cells,
            positions: &pos,
            dx,
            axis: [centre[0], centre[1]],
        };
        let m = crater_metrics(&f, 0.35);
        assert!((m.crater_radius - r).abs() <= dx, "{m:?}");
        assert!((m.crater_depth - r).abs() <= dx, "{m:?}");
        assert_eq!(m.scabbing_radius, 0.0);
        assert_eq!(m.scabbing_depth, 0.0);
    }

    #[test]
    fn invariant_under_relabelling() {
        let dx = 0.02;
        let (cells, pos) = grid(12, 8, dx);
        let damage: Vec<f64> = (0..cells.len())
            .map(|i| if (i * 7919) % 5 < 2 { 0.5 } else { 0.1 })
            .collect();
        let base = DamageField {
            damage: &damage,
            cells: &cells,
            positions: &pos,
            dx,
            axis: [0.12, 0.12],
        };
        let a = crater_metrics(&base, 0.35);
        let perm: Vec<usize> = (0..cells.len()).rev().collect();
        let d2: Vec<f64> = perm.iter().map(|&i| damage[i]).collect();
        let c2: Vec<[i32; 3]> = perm.iter().map(|&i| cells[i]).collect();
        let p2: Vec<Vec3> = perm.iter().map(|&i| pos[i]).collect();
        let b = crater_metrics(
            &DamageField {
                damage: &d2,
                cells: &c2,
                positions: &p2,
                dx,
                axis: [0.12, 0.12],
            },
            0.35,
        );
        assert_eq!(a, b);
        assert!(a.crater_depth > 0.0 && a.scabbing_depth > 0.0);
    }
}
