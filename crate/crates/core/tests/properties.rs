mod common;

use perikon_core::contact::{short_range_force, ContactParams};
use perikon_core::failure::{dif_wet, saturation_amplification, DifParams};
use perikon_core::homogenization::{
    dry_porous_moduli, unsaturated_moduli, water_equivalent_porosity, MatrixModuli, WaterProperties,
};
use perikon_core::mesostructure::{classify_bond, is_pore_bond, Phase};
use perikon_core::rng::IndexedStream;
use perikon_core::vector::{dot, norm, sub};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = MatrixModuli> {
    (5.0e9..80.0e9, 0.05..0.45f64).prop_map(|(e, nu)| MatrixModuli::from_young_poisson(e, nu).unwrap())
}

fn water(bulk: f64) -> WaterProperties {
    WaterProperties {
        bulk,
        f1: 0.0,
        f2: 0.0,
    }
}

fn phase() -> impl Strategy<Value = Phase> {
    prop_oneof![Just(Phase::Aggregate), Just(Phase::Mortar), Just(Phase::Itz)]
}

fn vec3(r: f64) -> impl Strategy<Value = [f64; 3]> {
    [-r..r, -r..r, -r..r]
}

proptest! {
    #[test]
    fn moduli_stay_within_matrix_bounds(m in matrix(), phi in 0.0..=1.0f64, w in 0.0..=1.0f64) {
        let e = unsaturated_moduli(m, &water(2.2e9_f64.min(0.9 * m.bulk)), phi, w, false).unwrap();
        prop_assert!(e.bulk >= 0.0 && e.bulk <= m.bulk * (1.0 + 1e-12));
        prop_assert!(e.shear >= 0.0 && e.shear <= m.shear * (1.0 + 1e-12));
    }

    #[test]
    fn moduli_soften_with_porosity(
        m in matrix(),
        phi in 0.0..0.99f64,
        dphi in 1e-6..0.01f64,
        w in 0.0..=1.0f64,
    ) {
        let wat = water(2.2e9_f64.min(0.9 * m.bulk));
        let base = unsaturated_moduli(m, &wat, phi, w, false).unwrap();
        let more_pores = unsaturated_moduli(m, &wat, phi + dphi, w, false).unwrap();
        prop_assert!(more_pores.bulk <= base.bulk * (1.0 + 1e-12));
        prop_assert!(more_pores.shear <= base.shear * (1.0 + 1e-12));
    }

    // water stiffens mortar-like matrices; far stiffer matrices lose this at
    // high porosity
    #[test]
    fn water_stiffens_mortar(
        e in 5.0e9..28.0e9f64,
        nu in 0.1..0.25f64,
        phi in 0.0..=1.0f64,
        w in 0.0..0.99f64,
        dw in 1e-6..0.01f64,
    ) {
        let m = MatrixModuli::from_young_poisson(e, nu).unwrap();
        let wat = water(2.2e9);
        let base = unsaturated_moduli(m, &wat, phi, w, false).unwrap();
        let wetter = unsaturated_moduli(m, &wat, phi, w + dw, false).unwrap();
        prop_assert!(wetter.bulk >= base.bulk * (1.0 - 1e-12));
    }

    #[test]
    fn water_equivalent_porosity_inverts_the_dry_bulk(m in matrix(), phi1 in 0.0..0.999f64) {
        let bulk = dry_porous_moduli(m, phi1).unwrap().bulk;
        let back = water_equivalent_porosity(m, bulk).unwrap();
        prop_assert!((back - phi1).abs() <= 1e-10 * phi1.max(1e-3), "{} vs {}", back, phi1);
    }

    #[test]
    fn bond_type_is_symmetric(a in phase(), b in phase()) {
        prop_assert_eq!(classify_bond(a, b), classify_bond(b, a));
    }

    #[test]
    fn pore_draw_is_symmetric(
        seed: u64,
        i in 0usize..1_000_000,
        j in 0usize..1_000_000,
        di in 0.0..=1.0f64,
        dj in 0.0..=1.0f64,
    ) {
        let s = IndexedStream::new(seed, 0);
        prop_assert_eq!(is_pore_bond(&s, i, j, di, dj), is_pore_bond(&s, j, i, dj, di));
    }

    #[test]
    fn wet_dif_is_at_least_one(log_rate in -8.0..4.0f64, w in 0.0..=1.0f64) {
        let p = DifParams::default();
        let (t, c) = dif_wet(10f64.powf(log_rate), w, &p);
        prop_assert!(t >= 1.0 && c >= 1.0, "{} {}", t, c);
    }

    #[test]
    fn wet_dif_grows_with_saturation(log_rate in -4.99..4.0f64, w in 0.0..0.99f64, dw in 1e-6..0.01f64) {
        let p = DifParams::default();
        let rate = 10f64.powf(log_rate);
        let (t0, c0) = dif_wet(rate, w, &p);
        let (t1, c1) = dif_wet(rate, w + dw, &p);
        prop_assert!(t1 >= t0 && c1 >= c0);
    }

    #[test]
    fn amplification_is_continuous_at_the_quasi_static_rate(w in 0.0..=1.0f64) {
        let p = DifParams::default();
        let (g, _) = saturation_amplification(1e-5 * (1.0 + 1e-12), w, &p);
        prop_assert!((g - 1.0).abs() < 1e-9);
    }

    #[test]
    fn contact_never_attracts(yp in vec3(0.02), yi in vec3(0.02), fallback in vec3(1.0)) {
        let params = ContactParams::from_bulk(17.8e9, 0.04, 0.01);
        let f = short_range_force(yp, yi, &params, fallback);
        let d = sub(yi, yp);
        prop_assert!(norm(f) <= params.stiffness / params.horizon * params.critical_distance * (1.0 + 1e-12));
        if norm(d) > 1e-9 {
            prop_assert!(dot(f, d) >= 0.0);
        }
        let back = short_range_force(yi, yp, &params, sub([0.0; 3], fallback));
        if norm(d) > 1e-9 {
            for a in 0..3 {
                prop_assert!((f[a] + back[a]).abs() <= 1e-9 * norm(f).max(1.0));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn internal_forces_sum_to_zero(seed: u64, amplitude in 1e-5..2e-3f64) {
        let cfg = common::small_impact_config(true, 1.0);
        let mut sim = common::simulation(&cfg);
        sim.projectile = None;
        let s = IndexedStream::new(seed, 9);
        for (i, x) in sim.position.iter_mut().enumerate() {
            for (a, c) in x.iter_mut().enumerate() {
                *c += amplitude * (2.0 * s.uniform(i as u64, a as u8) - 1.0);
            }
        }
        sim.reevaluate();
        let mut total = [0.0; 3];
        let mut scale = 0.0;
        for (f, v) in sim.force.iter().zip(&sim.body.volume) {
            for a in 0..3 {
                total[a] += f[a] * v;
            }
            scale += norm(*f) * v;
        }
        prop_assert!(scale > 0.0);
        prop_assert!(norm(total) <= 1e-10 * scale, "{:?} against {}", total, scale);
    }

    #[test]
    fn damage_never_decreases(seed in 0u64..1000, velocity in 150.0..400.0f64) {
        let mut cfg = common::small_impact_config(false, 0.5);
        cfg.meso.as_mut().unwrap().seed = seed;
        cfg.projectile.as_mut().unwrap().velocity = velocity;
        let mut sim = common::simulation(&cfg);
        let mut previous = sim.damage();
        for _ in 0..40 {
            sim.step().unwrap();
            let now = sim.damage();
            prop_assert!(now.iter().zip(&previous).all(|(a, b)| a >= b));
            let b = &sim.body.bonds;
            prop_assert!((0..b.len()).all(|k| b.state[k] == b.state[b.twin[k] as usize]));
            previous = now;
        }
        prop_assert!(sim.body.bonds.broken_count() > 0);
    }
}
