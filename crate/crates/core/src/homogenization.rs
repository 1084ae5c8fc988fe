//! Effective moduli of cement mortar with dry, water-filled and partially
//! filled pores.
//!
//! Mortar is modelled as a matrix with spherical pores. Pore water is replaced
//! by an equivalent porous matrix whose bulk modulus equals that of water,
//! which turns every saturation state into a dry-pore problem with a smaller
//! effective porosity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bulk and shear modulus of the pore-free mortar matrix (Pa).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixModuli {
    pub bulk: f64,
    pub shear: f64,
}

impl MatrixModuli {
    pub fn new(bulk: f64, shear: f64) -> Result<Self> {
        if !(bulk > 0.0 && shear > 0.0) {
            return Err(Error::Domain(format!(
                "matrix moduli must be positive, got K={bulk}, G={shear}"
            )));
        }
        Ok(Self { bulk, shear })
    }

    pub fn from_young_poisson(young: f64, poisson: f64) -> Result<Self> {
        let m = EffectiveModuli::from_young_poisson(young, poisson);
        Self::new(m.bulk, m.shear)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaterProperties {
    /// Bulk modulus of pore water (Pa).
    pub bulk: f64,
    /// Viscous shear enhancement coefficients; zero disables the enhancement.
    #[serde(default)]
    pub f1: f64,
    #[serde(default)]
    pub f2: f64,
}

impl Default for WaterProperties {
    fn default() -> Self {
        Self {
            bulk: 2.2e9,
            f1: 0.0,
            f2: 0.0,
        }
    }
}

/// Isotropic elastic moduli (Pa).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveModuli {
    pub bulk: f64,
    pub shear: f64,
}

impl EffectiveModuli {
    pub fn from_young_poisson(young: f64, poisson: f64) -> Self {
        Self {
            bulk: young / (3.0 * (1.0 - 2.0 * poisson)),
            shear: young / (2.0 * (1.0 + poisson)),
        }
    }

    pub fn young(&self) -> f64 {
        let denom = 3.0 * self.bulk + self.shear;
        if denom == 0.0 {
            0.0
        } else {
            9.0 * self.bulk * self.shear / denom
        }
    }

    pub fn poisson(&self) -> f64 {
        let denom = 2.0 * (3.0 * self.bulk + self.shear);
        if denom == 0.0 {
            0.0
        } else {
            (3.0 * self.bulk - 2.0 * self.shear) / denom
        }
    }
}

/// Split of the total porosity into saturated, partially saturated and dry
/// pores. Only the water-equivalent share `φ_sat + φ_unsat / 2 = φ·w` enters
/// the moduli, so any split with the same share gives the same result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationState {
    pub porosity: f64,
    pub saturation: f64,
    pub saturated: f64,
    pub unsaturated: f64,
    pub dry: f64,
}

impl SaturationState {
    pub fn new(porosity: f64, saturation: f64) -> Result<Self> {
        Self::with_unsaturated(porosity, saturation, 0.0)
    }

    /// Builds the split with the given partially saturated porosity; the
    /// unsaturated pores are taken as half full.
    pub fn with_unsaturated(porosity: f64, saturation: f64, unsaturated: f64) -> Result<Self> {
        check_unit("porosity", porosity)?;
        check_unit("saturation", saturation)?;
        let water = porosity * saturation;
        let saturated = water - 0.5 * unsaturated;
        let dry = porosity - water - 0.5 * unsaturated;
        if unsaturated < 0.0 || saturated < -1e-15 || dry < -1e-15 {
            return Err(Error::Domain(format!(
                "unsaturated porosity {unsaturated} incompatible with φ={porosity}, w={saturation}"
            )));
        }
        Ok(Self {
            porosity,
            saturation,
            saturated: saturated.max(0.0),
            unsaturated,
            dry: dry.max(0.0),
        })
    }

    /// Porosity filled with water, counting partially filled pores at half.
    pub fn water_filled(&self) -> f64 {
        self.saturated + 0.5 * self.unsaturated
    }

    /// Porosity of the matrix-plus-empty-pore body that surrounds the water.
    pub fn empty_pore_porosity(&self) -> f64 {
        let num = self.dry + 0.5 * self.unsaturated;
        let den = 1.0 - self.water_filled();
        if num <= 0.0 || den <= 0.0 {
            0.0
        } else {
            num / den
        }
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} {v} outside [0, 1]")))
    }
}

/// Bulk modulus of a matrix with dry spherical pores of porosity `phi`.
fn porous_bulk(bulk: f64, shear: f64, phi: f64) -> f64 {
    let denom = 4.0 * shear + 3.0 * bulk * phi;
    if denom <= 0.0 {
        0.0
    } else {
        4.0 * bulk * shear * (1.0 - phi) / denom
    }
}

pub fn dry_porous_moduli(m: MatrixModuli, porosity: f64) -> Result<EffectiveModuli> {
    check_unit("porosity", porosity)?;
    Ok(EffectiveModuli {
        bulk: porous_bulk(m.bulk, m.shear, porosity),
        shear: m.shear * (1.0 - porosity * porosity),
    })
}

/// Porosity at which the dry porous matrix is exactly as compressible as
/// water. This is the algebraic inverse of the dry bulk relation.
pub fn water_equivalent_porosity(m: MatrixModuli, water_bulk: f64) -> Result<f64> {
    if !(water_bulk > 0.0) || water_bulk > m.bulk {
        return Err(Error::Domain(format!(
            "water bulk modulus {water_bulk} must lie in (0, K_m = {}]",
            m.bulk
        )));
    }
    Ok(4.0 * m.shear * (m.bulk - water_bulk) / (m.bulk * (3.0 * water_bulk + 4.0 * m.shear)))
}

pub fn saturated_moduli(
    m: MatrixModuli,
    water: &WaterProperties,
    porosity: f64,
) -> Result<EffectiveModuli> {
    check_unit("porosity", porosity)?;
    let phi1 = water_equivalent_porosity(m, water.bulk)?;
    let phi2 = porosity * phi1;
    let viscous = 1.0 + water.f1 * porosity * porosity + water.f2 * porosity;
    Ok(EffectiveModuli {
        bulk: porous_bulk(m.bulk, m.shear, phi2),
        shear: viscous * (1.0 - porosity * porosity) * m.shear,
    })
}

/// Moduli of mortar with saturation `w` in two stages: the matrix with the
/// empty share of the pores forms an equivalent body, then the water share is
/// added as equivalent porosity around that body.
///
/// With `consistent_viscous_shear` the shear result also carries the viscous
/// factor of the saturated relation.
pub fn unsaturated_moduli(
    m: MatrixModuli,
    water: &WaterProperties,
    porosity: f64,
    saturation: f64,
    consistent_viscous_shear: bool,
) -> Result<EffectiveModuli> {
    let state = SaturationState::new(porosity, saturation)?;
    unsaturated_moduli_for(m, water, &state, consistent_viscous_shear)
}

pub fn unsaturated_moduli_for(
    m: MatrixModuli,
    water: &WaterProperties,
    state: &SaturationState,
    consistent_viscous_shear: bool,
) -> Result<EffectiveModuli> {
    let phi1 = water_equivalent_porosity(m, water.bulk)?;
    let empty = state.empty_pore_porosity();
    let body = dry_porous_moduli(m, empty)?;
    let wet = state.water_filled();
    let phi2 = wet * phi1;
    let mut shear = body.shear * (1.0 - wet * wet);
    if consistent_viscous_shear {
        let phi = state.porosity;
        shear *= 1.0 + water.f1 * phi * phi + water.f2 * phi;
    }
    Ok(EffectiveModuli {
        bulk: porous_bulk(body.bulk, body.shear, phi2),
        shear,
    })
}
