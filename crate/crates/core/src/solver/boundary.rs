use serde::{Deserialize, Serialize};

use super::lattice::BoundaryTag;
use super::Body;
use crate::vector::Vec3;

/// Uniform traction applied as a body force `pressure / Δx` on the loaded
/// layer while `0 ≤ t < duration`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pulse {
    /// Traction magnitude (Pa).
    pub pressure: f64,
    pub duration: f64,
    /// Unit direction of the applied force.
    pub direction: Vec3,
}

impl Pulse {
    /// Body force density (N/m³) at time `t`.
    pub fn body_force(&self, t: f64, dx: f64) -> Vec3 {
        if t < 0.0 || t >= self.duration {
            return [0.0; 3];
        }
        let b = self.pressure / dx;
        self.direction.map(|d| d * b)
    }
}

/// Restores pinned points to their reference position at rest.
pub fn apply_boundary(body: &Body, position: &mut [Vec3], velocity: &mut [Vec3]) {
    for (i, tag) in body.tags.iter().enumerate() {
        if *tag == BoundaryTag::Pinned {
            position[i] = body.reference[i];
            velocity[i] = [0.0; 3];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pulse_window() {
        let p = Pulse {
            pressure: 1e6,
            duration: 5e-6,
            direction: [0.0, 0.0, -1.0],
        };
        assert_eq!(p.body_force(0.0, 0.01), [0.0, 0.0, -1e8]);
        assert_eq!(p.body_force(4.99e-6, 0.01)[2], -1e8);
        assert_eq!(p.body_force(5e-6, 0.01), [0.0; 3]);
        assert_eq!(p.body_force(-1e-9, 0.01), [0.0; 3]);
    }
}
