//! Bond failure with saturation- and rate-dependent critical stretch.
//!
//! A bond breaks, irreversibly, once its stretch leaves the band
//! `(−s_c·DIF_c, s_t·DIF_t)`. The static stretches come from fracture energy
//! (tension) and compressive strength (compression), both reduced for wet
//! concrete; the dynamic increase factors grow with the bond stretch rate and
//! are amplified by saturation.

use serde::{Deserialize, Serialize};

use crate::mesostructure::BondClass;
use crate::solver::neighbors::BondList;

/// Strain rate separating the power-law and cube-root tensile branches (1/s).
pub const TENSILE_TRANSITION_RATE: f64 = 30.0;
/// Strain rate at or below which saturation does not amplify the DIF (1/s).
pub const QUASI_STATIC_RATE: f64 = 1e-5;

/// Quasi-static strength of one bond class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassStrength {
    pub young: f64,
    pub bulk: f64,
    /// Fracture energy G0 (N/m).
    pub fracture_energy: f64,
    pub compressive_strength: f64,
}

/// Tensile and compressive critical stretch, both positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalStretch {
    pub tension: f64,
    pub compression: f64,
}

/// `s_t = √(5G0/(9Kδ))`, `s_c = σ_c/E`.
pub fn static_critical_stretches(
    bulk: f64,
    horizon: f64,
    young: f64,
    fracture_energy: f64,
    compressive_strength: f64,
) -> CriticalStretch {
    CriticalStretch {
        tension: (5.0 * fracture_energy / (9.0 * bulk * horizon)).sqrt(),
        compression: compressive_strength / young,
    }
}

/// Linear strength loss with saturation, 20 % at full saturation.
pub fn wet_static_strength(fc: f64, ft: f64, saturation: f64) -> (f64, f64) {
    let r = wet_strength_ratio(saturation);
    (fc * r, ft * r)
}

pub fn wet_strength_ratio(saturation: f64) -> f64 {
    1.0 - 0.2 * saturation
}

/// Static critical stretches of a class at saturation `w`: strengths scale
/// with the wet strength ratio; the moduli in `strength` are already the wet
/// effective values.
pub fn wet_critical_stretch(strength: &ClassStrength, horizon: f64, saturation: f64) -> CriticalStretch {
    let s = static_critical_stretches(
        strength.bulk,
        horizon,
        strength.young,
        strength.fracture_energy,
        strength.compressive_strength,
    );
    let r = wet_strength_ratio(saturation);
    CriticalStretch {
        tension: s.tension * r,
        compression: s.compression * r,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Tension,
    Compression,
}

/// Rate-effect constants. `β` of the cube-root tensile branch is not free: it
/// is fixed by continuity at the transition rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DifParams {
    /// C of the logarithmic compressive law.
    pub compressive_constant: f64,
    /// ζ of the tensile power law.
    pub tensile_exponent: f64,
    pub reference_rate_tension: f64,
    pub reference_rate_compression: f64,
    /// Sensitivity of the amplification base `A = 1 + C_sat·w`.
    pub saturation_sensitivity: f64,
    /// Dry quasi-static tensile over compressive strength.
    pub tensile_to_compressive: f64,
    /// Rates below this are treated as this value.
    pub rate_floor: f64,
}

impl Default for DifParams {
    fn default() -> Self {
        Self {
            compressive_constant: 0.007,
            // 1/(1 + 8 f_c/f_c0) with f_c = 39.5 MPa, f_c0 = 10 MPa
            tensile_exponent: 1.0 / (1.0 + 8.0 * 3.95),
            reference_rate_tension: 1e-6,
            reference_rate_compression: 1.0,
            saturation_sensitivity: 0.15,
            tensile_to_compressive: 0.1,
            rate_floor: 1e-6,
        }
    }
}

impl DifParams {
    pub fn validate(&self) -> crate::error::Result<()> {
        let values = [
            self.compressive_constant,
            self.tensile_exponent,
            self.reference_rate_tension,
            self.reference_rate_compression,
            self.tensile_to_compressive,
            self.rate_floor,
        ];
        if values.iter().any(|v| !(*v > 0.0 && v.is_finite())) || self.saturation_sensitivity < 0.0 {
            return Err(crate::error::Error::Config(format!("DIF constants must be positive: {self:?}")));
        }
        Ok(())
    }

    pub fn beta(&self) -> f64 {
        (TENSILE_TRANSITION_RATE / self.reference_rate_tension)
            .powf(self.tensile_exponent - 1.0 / 3.0)
    }
}

/// Dry-concrete dynamic increase factor. Rates below the reference rate (and
/// non-positive rates) give 1.
pub fn dif_dry(rate: f64, p: &DifParams, sense: Sense) -> f64 {
    if !(rate > 0.0) {
        return 1.0;
    }
    let rate = rate.max(p.rate_floor);
    match sense {
        Sense::Compression => {
            let x = rate.max(p.reference_rate_compression) / p.reference_rate_compression;
            1.0 + p.compressive_constant * x.ln()
        }
        Sense::Tension => {
            let x = rate.max(p.reference_rate_tension) / p.reference_rate_tension;
            if rate <= TENSILE_TRANSITION_RATE {
                x.powf(p.tensile_exponent)
            } else {
                p.beta() * x.cbrt()
            }
        }
    }
}

/// Ratio of wet to dry DIF in tension and compression.
pub fn saturation_amplification(rate: f64, saturation: f64, p: &DifParams) -> (f64, f64) {
    let rate = rate.max(p.rate_floor);
    if rate <= QUASI_STATIC_RATE {
        return (1.0, 1.0);
    }
    let a = 1.0 + p.saturation_sensitivity * saturation;
    let g_t = 2.0 - a.powf(-rate.log10() - 5.0);
    let dry_t = dif_dry(rate, p, Sense::Tension);
    let r = p.tensile_to_compressive;
    let g_c = (dry_t * g_t * r + 1.0) / (dry_t * r + 1.0);
    (g_t, g_c)
}

/// Wet-concrete DIF `(tension, compression)`.
pub fn dif_wet(rate: f64, saturation: f64, p: &DifParams) -> (f64, f64) {
    let (g_t, g_c) = saturation_amplification(rate, saturation, p);
    (
        dif_dry(rate, p, Sense::Tension) * g_t,
        dif_dry(rate, p, Sense::Compression) * g_c,
    )
}

/// Per-class critical stretches plus the rate model applied to them.
#[derive(Debug, Clone, PartialEq)]
pub struct FailureModel {
    pub stretch: [CriticalStretch; 4],
    pub dif: Option<DifParams>,
    pub saturation: f64,
}

impl FailureModel {
    /// Whether a bond of `class` with stretch `s` and stretch rate `rate`
    /// fails. The DIF is at least 1, so a bond inside the static band is
    /// never evaluated against the rate law.
    #[inline]
    pub fn breaks(&self, class: BondClass, stretch: f64, rate: f64) -> bool {
        let crit = &self.stretch[class.index()];
        if stretch < crit.tension && stretch > -crit.compression {
            return false;
        }
        let (dt, dc) = match &self.dif {
            Some(p) => dif_wet(rate.abs(), self.saturation, p),
            None => (1.0, 1.0),
        };
        stretch >= crit.tension * dt || stretch <= -crit.compression * dc
    }
}

/// Volume-weighted fraction of broken bonds at point `i`, pore bonds included.
pub fn damage(bonds: &BondList, i: usize) -> f64 {
    let mut total = 0.0;
    let mut intact = 0.0;
    for b in bonds.range(i) {
        total += bonds.volume[b];
        if bonds.is_intact(b) {
            intact += bonds.volume[b];
        }
    }
    if total == 0.0 {
        0.0
    } else {
        1.0 - intact / total
    }
}

/// Damage counted only over bonds that were intact after preprocessing.
pub fn relative_damage(bonds: &BondList, i: usize) -> f64 {
    let mut base = 0.0;
    let mut intact = 0.0;
    for b in bonds.range(i) {
        if bonds.is_prebroken(b) {
            continue;
        }
        base += bonds.volume[b];
        if bonds.is_intact(b) {
            intact += bonds.volume[b];
        }
    }
    if base == 0.0 {
        0.0
    } else {
        1.0 - intact / base
    }
}
