//! Intermediately homogenized mesostructure.
//!
//! Concrete is treated as three phases (aggregate, cement mortar and the
//! interfacial transition zone). Phases are sampled per material point from
//! the volume fractions, and the bond between two points takes one of six
//! combined types. Porosity is represented by breaking bonds during
//! preprocessing instead of removing material.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{pair_key, IndexedStream, PHASE_STREAM, PORE_STREAM};
use crate::solver::neighbors::BondList;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum Phase {
    Aggregate = 0,
    Mortar = 1,
    Itz = 2,
}

impl Phase {
    pub const ALL: [Phase; 3] = [Phase::Aggregate, Phase::Mortar, Phase::Itz];
}

/// The six combined bond types formed by two phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BondType {
    AA,
    CC,
    II,
    AC,
    AI,
    CI,
}

/// Mechanical class a bond type behaves as.
///
/// Aggregate-mortar bonds behave like homogeneous concrete; any bond touching
/// the ITZ behaves like an ITZ bond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum BondClass {
    Aggregate = 0,
    Mortar = 1,
    Interface = 2,
    HomogenizedConcrete = 3,
}

impl BondClass {
    pub const ALL: [BondClass; 4] = [
        BondClass::Aggregate,
        BondClass::Mortar,
        BondClass::Interface,
        BondClass::HomogenizedConcrete,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl BondType {
    pub fn effective(self) -> BondClass {
        match self {
            BondType::AA => BondClass::Aggregate,
            BondType::CC => BondClass::Mortar,
            BondType::II | BondType::AI | BondType::CI => BondClass::Interface,
            BondType::AC => BondClass::HomogenizedConcrete,
        }
    }
}

pub fn classify_bond(a: Phase, b: Phase) -> BondType {
    use Phase::*;
    match (a, b) {
        (Aggregate, Aggregate) => BondType::AA,
        (Mortar, Mortar) => BondType::CC,
        (Itz, Itz) => BondType::II,
        (Aggregate, Mortar) | (Mortar, Aggregate) => BondType::AC,
        (Aggregate, Itz) | (Itz, Aggregate) => BondType::AI,
        (Mortar, Itz) | (Itz, Mortar) => BondType::CI,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolumeFractions {
    pub aggregate: f64,
    pub mortar: f64,
    pub itz: f64,
}

impl VolumeFractions {
    pub fn new(aggregate: f64, mortar: f64, itz: f64) -> Self {
        Self {
            aggregate,
            mortar,
            itz,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let parts = [self.aggregate, self.mortar, self.itz];
        if parts.iter().any(|f| !(0.0..=1.0).contains(f)) {
            return Err(Error::Config(format!(
                "volume fractions must lie in [0, 1], got {parts:?}"
            )));
        }
        let sum: f64 = parts.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "volume fractions must sum to 1, got {sum}"
            )));
        }
        Ok(())
    }

    /// Phase for a uniform sample `u` in `[0, 1)`.
    fn pick(&self, u: f64) -> Phase {
        if u < self.aggregate {
            Phase::Aggregate
        } else if u < self.aggregate + self.mortar {
            Phase::Mortar
        } else {
            Phase::Itz
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MesoModel {
    pub fractions: VolumeFractions,
    pub porosity: f64,
    pub critical_porosity: f64,
    pub seed: u64,
}

impl MesoModel {
    pub fn validate(&self) -> Result<()> {
        self.fractions.validate()?;
        pre_damage_index(self.porosity, self.critical_porosity).map(|_| ())
    }

    /// Draws one phase per point, keyed by point index.
    pub fn assign_phases(&self, count: usize) -> Result<Vec<Phase>> {
        self.fractions.validate()?;
        let stream = IndexedStream::new(self.seed, PHASE_STREAM);
        Ok((0..count)
            .map(|i| self.fractions.pick(stream.uniform(i as u64, 0)))
            .collect())
    }
}

/// Pre-damage index `d = φ / φ_c`.
pub fn pre_damage_index(porosity: f64, critical_porosity: f64) -> Result<f64> {
    if !(critical_porosity > 0.0) {
        return Err(Error::Config(format!(
            "critical porosity must be positive, got {critical_porosity}"
        )));
    }
    if !(0.0..=critical_porosity).contains(&porosity) {
        return Err(Error::Config(format!(
            "porosity {porosity} outside [0, {critical_porosity}]"
        )));
    }
    Ok(porosity / critical_porosity)
}

/// Probability that a bond between points with pre-damage `d_i`, `d_j` is a
/// pore bond: each endpoint independently lands in a pore.
pub fn prebreak_probability(d_i: f64, d_j: f64) -> f64 {
    1.0 - (1.0 - d_i) * (1.0 - d_j)
}

/// Pore draw for the bond `{i, j}`. Symmetric in `(i, j)`.
pub fn is_pore_bond(stream: &IndexedStream, i: usize, j: usize, d_i: f64, d_j: f64) -> bool {
    let (lo, hi, d_lo, d_hi) = if i < j {
        (i, j, d_i, d_j)
    } else {
        (j, i, d_j, d_i)
    };
    let key = pair_key(lo, hi);
    stream.uniform(key, 0) < d_lo || stream.uniform(key, 1) < d_hi
}

/// Marks pore bonds as pre-broken. Both records of a bond receive the same
/// flag because the draw is keyed by the unordered pair.
pub fn apply_pore_prebreak(bonds: &mut BondList, pre_damage: &[f64], seed: u64) -> Result<usize> {
    if let Some(d) = pre_damage.iter().find(|d| !(0.0..=1.0).contains(*d)) {
        return Err(Error::Config(format!("pre-damage index {d} outside [0, 1]")));
    }
    let stream = IndexedStream::new(seed, PORE_STREAM);
    let mut count = 0;
    for i in 0..bonds.point_count() {
        for b in bonds.range(i) {
            let j = bonds.partner[b] as usize;
            if pre_damage[i] == 0.0 && pre_damage[j] == 0.0 {
                continue;
            }
            if is_pore_bond(&stream, i, j, pre_damage[i], pre_damage[j]) {
                bonds.mark_prebroken(b);
                count += 1;
            }
        }
    }
    Ok(count / 2)
}

/// Writes the effective class of every bond from the endpoint phases.
pub fn classify_bonds(bonds: &mut BondList, phases: &[Phase]) {
    for i in 0..bonds.point_count() {
        for b in bonds.range(i) {
            let j = bonds.partner[b] as usize;
            bonds.class[b] = classify_bond(phases[i], phases[j]).effective();
        }
    }
}
