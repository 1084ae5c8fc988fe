//! Hydrostatic response of wet concrete under strong compression.
//!
//! The pressure carried by the skeleton follows a cubic in the normalised
//! crush strain; the free pore water, held undrained, adds a Mie–Grüneisen
//! pressure weighted by the Biot coefficient.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible denominator of the water Hugoniot fit. Compression
/// beyond the point where the denominator reaches this value is clamped.
const DENOMINATOR_FLOOR: f64 = 1e-2;

/// Mie–Grüneisen constants of pore water.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaterEos {
    pub density: f64,
    pub sound_speed: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub gamma0: f64,
    pub alpha: f64,
    /// Internal energy per unit volume (J/m³).
    pub internal_energy: f64,
}

impl Default for WaterEos {
    fn default() -> Self {
        Self {
            density: 1000.0,
            sound_speed: 1480.0,
            s1: 2.56,
            s2: 1.986,
            s3: 1.2268,
            gamma0: 0.35,
            alpha: 0.0,
            internal_energy: 1.89e6,
        }
    }
}

impl WaterEos {
    fn denominator(&self, mu: f64) -> f64 {
        1.0 - (self.s1 - 1.0) * mu
            - self.s2 * mu * mu / (mu + 1.0)
            - self.s3 * mu * mu * mu / ((mu + 1.0) * (mu + 1.0))
    }

    /// Compression at which the fit denominator falls to the floor; found by
    /// bisection on `[0, 10]`, infinite if it never does.
    pub fn max_compression(&self) -> f64 {
        if self.denominator(10.0) > DENOMINATOR_FLOOR {
            return f64::INFINITY;
        }
        let (mut lo, mut hi) = (0.0, 10.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.denominator(mid) > DENOMINATOR_FLOOR {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// Skeleton and water parameters of the wet-concrete equation of state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EosParams {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub p_crush: f64,
    pub mu_crush: f64,
    pub p_lock: f64,
    pub mu_lock: f64,
    #[serde(default)]
    pub water: WaterEos,
}

impl Default for EosParams {
    fn default() -> Self {
        Self {
            k1: 15.7e9,
            k2: -30.8e9,
            k3: 10.8e9,
            p_crush: 14e6,
            mu_crush: 8.1e-4,
            p_lock: 3e9,
            mu_lock: 0.16,
            water: WaterEos::default(),
        }
    }
}

impl EosParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu_lock > self.mu_crush && self.mu_crush > 0.0) {
            return Err(Error::Config(format!(
                "EOS requires 0 < mu_crush < mu_lock, got {} and {}",
                self.mu_crush, self.mu_lock
            )));
        }
        Ok(())
    }

    /// Normalised crush strain `(μ − μ_crush)/(μ_lock − μ_crush)`.
    pub fn normalized_strain(&self, mu: f64) -> f64 {
        (mu - self.mu_crush) / (self.mu_lock - self.mu_crush)
    }
}

/// Biot coefficient `1 − (1 − φ)³`.
pub fn biot_coefficient(porosity: f64) -> f64 {
    let s = 1.0 - porosity;
    1.0 - s * s * s
}

pub fn dry_pressure(mu_bar: f64, k1: f64, k2: f64, k3: f64) -> f64 {
    mu_bar * (k1 + mu_bar * (k2 + mu_bar * k3))
}

/// Pore-water pressure at compression `mu`. Fails when the fit denominator is
/// not positive.
pub fn water_pressure(mu: f64, w: &WaterEos) -> Result<f64> {
    let denom = w.denominator(mu);
    if !(denom > 0.0) {
        return Err(Error::Domain(format!(
            "water EOS denominator {denom} not positive at compression {mu}"
        )));
    }
    let rho_c2 = w.density * w.sound_speed * w.sound_speed;
    let num = rho_c2 * mu * (1.0 + (1.0 - 0.5 * w.gamma0) * mu - 0.5 * w.alpha * mu * mu);
    Ok(num / denom + (w.gamma0 + w.alpha * mu) * w.internal_energy)
}

/// Result of an EOS evaluation; `clamped` reports that the water compression
/// was limited to the fitted range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureEval {
    pub value: f64,
    pub clamped: bool,
}

/// Total hydrostatic pressure of wet concrete at volumetric compression `mu`,
/// porosity `porosity` and saturation `saturation`. The water term is scaled
/// linearly with saturation and the water compression equals `mu`.
pub fn wet_pressure(mu: f64, porosity: f64, saturation: f64, p: &EosParams) -> PressureEval {
    let solid = dry_pressure(p.normalized_strain(mu), p.k1, p.k2, p.k3);
    let weight = saturation * biot_coefficient(porosity);
    if weight == 0.0 {
        return PressureEval {
            value: solid,
            clamped: false,
        };
    }
    match water_pressure(mu, &p.water) {
        Ok(pw) if mu <= p.water.max_compression() => PressureEval {
            value: solid + weight * pw,
            clamped: false,
        },
        _ => {
            let limit = p.water.max_compression();
            let pw = water_pressure(limit, &p.water).unwrap_or(0.0);
            PressureEval {
                value: solid + weight * pw,
                clamped: true,
            }
        }
    }
}

/// Couples the equation of state to the isotropic part of the force state.
///
/// Below the crush strain the pressure is elastic, `−K θ`. Above it the
/// pressure follows [`wet_pressure`] with `μ = −θ`. The two branches are
/// joined with a smoothstep over a band of 5 % of the crush strain centred on
/// it, which keeps the pressure C¹ in θ. Tension never uses the EOS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WetEos {
    pub params: EosParams,
    pub porosity: f64,
    pub saturation: f64,
    max_compression: f64,
}

/// Relative width of the elastic-to-EOS transition band.
pub const BLEND_BAND: f64 = 0.05;

impl WetEos {
    pub fn new(params: EosParams, porosity: f64, saturation: f64) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            porosity,
            saturation,
            max_compression: params.water.max_compression(),
        })
    }

    fn eos_branch(&self, mu: f64) -> PressureEval {
        let p = &self.params;
        let solid = dry_pressure(p.normalized_strain(mu), p.k1, p.k2, p.k3);
        let weight = self.saturation * biot_coefficient(self.porosity);
        if weight == 0.0 {
            return PressureEval {
                value: solid,
                clamped: false,
            };
        }
        let clamped = mu > self.max_compression;
        let mu_w = mu.min(self.max_compression);
        let pw = water_pressure(mu_w, &p.water).unwrap_or(0.0);
        PressureEval {
            value: solid + weight * pw,
            clamped,
        }
    }

    /// Pressure (positive in compression) for dilatation `theta` of a point
    /// with bulk modulus `bulk`.
    pub fn pressure(&self, theta: f64, bulk: f64) -> PressureEval {
        let elastic = -bulk * theta;
        let mu = -theta;
        let half = 0.5 * BLEND_BAND * self.params.mu_crush;
        let lo = self.params.mu_crush - half;
        let hi = self.params.mu_crush + half;
        if mu <= lo {
            return PressureEval {
                value: elastic,
                clamped: false,
            };
        }
        let eos = self.eos_branch(mu);
        if mu >= hi {
            return eos;
        }
        let t = (mu - lo) / (hi - lo);
        let s = t * t * (3.0 - 2.0 * t);
        PressureEval {
            value: (1.0 - s) * elastic + s * eos.value,
            clamped: eos.clamped,
        }
    }
}
