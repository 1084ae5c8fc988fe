mod common;

use common::{bar_config, bar_energy_drift, pool, simulation, small_impact_config};
use perikon_core::solver::checkpoint;
use perikon_core::solver::lattice::BoundaryTag;
use perikon_core::vector::{norm, Vec3};

#[test]
fn elastic_energy_balances_external_work() {
    let drift = bar_energy_drift(1000);
    assert!(drift <= 0.01, "relative energy drift {drift}");
}

#[test]
fn unloaded_body_moves_rigidly() {
    let mut cfg = bar_config([10, 4, 4], 3.0);
    cfg.loading.as_mut().unwrap().pressure = 0.0;
    let mut sim = simulation(&cfg);
    let v: Vec3 = [1.5, -0.25, 0.75];
    for u in &mut sim.velocity {
        *u = v;
    }
    sim.reevaluate();
    for _ in 0..50 {
        sim.step().unwrap();
    }
    for i in 0..sim.len() {
        let u = sim.displacement(i);
        for a in 0..3 {
            assert!((u[a] - v[a] * sim.time).abs() < 1e-12, "point {i}: {u:?}");
            assert!((sim.velocity[i][a] - v[a]).abs() < 1e-9);
        }
    }
}

#[test]
fn pinned_points_do_not_move() {
    let cfg = small_impact_config(false, 1.0);
    let mut sim = simulation(&cfg);
    let pinned: Vec<usize> = (0..sim.len()).filter(|&i| sim.body.tags[i] == BoundaryTag::Pinned).collect();
    assert!(!pinned.is_empty());
    for _ in 0..150 {
        sim.step().unwrap();
    }
    assert!(sim.body.bonds.broken_count() > 0);
    for &i in &pinned {
        assert_eq!(sim.displacement(i), [0.0; 3]);
        assert_eq!(sim.velocity[i], [0.0; 3]);
    }
}

#[test]
fn free_impact_conserves_momentum() {
    let cfg = small_impact_config(true, 0.5);
    let mut sim = simulation(&cfg);
    let initial = sim.momentum();
    let scale = norm(initial);
    assert!(scale > 0.0);
    for _ in 0..200 {
        sim.step().unwrap();
    }
    let p = sim.projectile.as_ref().unwrap();
    assert!(p.body.velocity[2] > -300.0, "projectile never touched the target");
    assert!(sim.body.bonds.broken_count() > 0);
    let now = sim.momentum();
    for a in 0..3 {
        assert!((now[a] - initial[a]).abs() <= 1e-8 * scale, "{initial:?} -> {now:?}");
    }
}

fn run_in(threads: usize, steps: usize) -> (Vec<Vec3>, Vec<Vec3>, Vec<u8>, Vec3) {
    pool(threads).install(|| {
        let cfg = small_impact_config(false, 1.0);
        let mut sim = simulation(&cfg);
        for _ in 0..steps {
            sim.step().unwrap();
        }
        let origin = sim.projectile.as_ref().unwrap().body.origin;
        (sim.position, sim.velocity, sim.body.bonds.state, origin)
    })
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let one = run_in(1, 120);
    let four = run_in(4, 120);
    let bits = |v: &[Vec3]| v.iter().flat_map(|x| x.map(f64::to_bits)).collect::<Vec<_>>();
    assert_eq!(bits(&one.0), bits(&four.0));
    assert_eq!(bits(&one.1), bits(&four.1));
    assert_eq!(one.2, four.2);
    assert_eq!(one.3.map(f64::to_bits), four.3.map(f64::to_bits));
}

#[test]
fn restart_reproduces_the_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.bin");
    let cfg = small_impact_config(false, 1.0);

    let mut straight = simulation(&cfg);
    // checkpoint on a step that breaks bonds
    while straight.step().unwrap().newly_broken == 0 {}
    let at = straight.step;
    checkpoint::write(&straight, &path).unwrap();
    for _ in 0..60 {
        straight.step().unwrap();
    }

    let mut resumed = simulation(&cfg);
    checkpoint::restore(&mut resumed, &path).unwrap();
    assert_eq!(resumed.step, at);
    for _ in 0..60 {
        resumed.step().unwrap();
    }
    assert_eq!(straight.time.to_bits(), resumed.time.to_bits());
    assert_eq!(straight.position, resumed.position);
    assert_eq!(straight.velocity, resumed.velocity);
    assert_eq!(straight.body.bonds.state, resumed.body.bonds.state);
    let (a, b) = (straight.projectile.unwrap(), resumed.projectile.unwrap());
    assert_eq!(a.body.origin, b.body.origin);
    assert_eq!(a.body.velocity, b.body.velocity);
}

#[test]
fn restore_rejects_a_checkpoint_of_another_model() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.bin");
    let sim = simulation(&bar_config([10, 4, 4], 3.0));
    checkpoint::write(&sim, &path).unwrap();
    let mut other = simulation(&small_impact_config(false, 1.0));
    let err = checkpoint::restore(&mut other, &path).unwrap_err();
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn damage_audit_accounts_for_the_impact_energy() {
    let mut cfg = small_impact_config(true, 0.0);
    cfg.run.as_mut().unwrap().energy_audit = true;
    let mut sim = simulation(&cfg);
    let input = sim.energy.total();
    let mut worst: f64 = 0.0;
    for _ in 0..300 {
        sim.step().unwrap();
        worst = worst.max((sim.energy.total() - input).abs() / input);
    }
    assert!(sim.energy.dissipated > 0.0);

    assert!(worst <= 0.05, "energy audit off by {worst}");
}
