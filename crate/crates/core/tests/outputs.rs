mod common;

use std::path::Path;

use common::formats::{parse_csv, parse_vtk};
use common::small_impact_config;
use perikon_core::scenarios::{run_impact, ImpactOptions};

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn frames_and_tables_follow_their_formats() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_impact_config(false, 1.0);
    cfg.output.frame_interval = 20;
    cfg.output.log_interval = 7;
    cfg.output.series_interval = 3;
    let report = run_impact(
        &cfg,
        dir.path(),
        &ImpactOptions {
            max_steps: Some(40),
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(report.metrics.steps, 40);

    let mut frames: Vec<_> = std::fs::read_dir(dir.path().join("frames"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    frames.sort();
    let names: Vec<_> = frames.iter().map(|p| p.file_name().unwrap().to_str().unwrap().to_string()).collect();
    assert_eq!(names, ["frame_00000000.vtk", "frame_00000020.vtk", "frame_00000040.vtk"]);
    for (k, path) in frames.iter().enumerate() {
        let (n, arrays) = parse_vtk(&read(path)).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(n, report.points);
        let names: Vec<&str> = arrays.iter().map(|(a, _)| a.as_str()).collect();
        assert_eq!(
            names,
            ["displacement", "velocity", "damage", "relative_damage", "phase", "pressure"]
        );
        let damage = &arrays[2].1;
        assert!(damage.iter().all(|d| (0.0..=1.0).contains(d)));
        if k == 0 {
            assert!(arrays[3].1.iter().all(|&d| d == 0.0), "load damage at t = 0");
            assert!(arrays[0].1.iter().all(|&u| u == 0.0));
        }
        assert!(arrays[4].1.iter().all(|&p| p == 0.0 || p == 1.0 || p == 2.0));
    }

    let (header, rows) = parse_csv(&read(&dir.path().join("projectile.csv"))).unwrap();
    assert_eq!(header, ["t", "z", "v", "a", "depth"]);
    // steps 0, 3, ..., 39 and the final step 40
    assert_eq!(rows.len(), 15);
    assert!(rows.windows(2).all(|w| w[1][0] > w[0][0]));
    assert_eq!(rows.last().unwrap()[0], report.metrics.time);

    let (header, rows) = parse_csv(&read(&dir.path().join("run_log.csv"))).unwrap();
    assert_eq!(header[0], "step");
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), [0.0, 7.0, 14.0, 21.0, 28.0, 35.0, 40.0]);

    let summary: toml::Value = toml::from_str(&read(&dir.path().join("summary.toml"))).unwrap();
    assert_eq!(summary["points"].as_integer(), Some(report.points as i64));
}

#[test]
fn no_frames_without_a_frame_interval() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_impact_config(false, 1.0);
    assert_eq!(cfg.output.frame_interval, 0);
    run_impact(
        &cfg,
        dir.path(),
        &ImpactOptions {
            max_steps: Some(5),
            ..Default::default()
        },
    )
    .unwrap();
    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["projectile.csv", "run_log.csv", "summary.toml"]);
}

#[test]
fn validators_reject_malformed_files() {
    assert!(parse_csv("a,b\r\n1,2\r\n").is_ok());
    assert!(parse_csv("a,b\n1,2\n").is_err());
    assert!(parse_csv("a,b\r\n1\r\n").is_err());
    assert!(parse_csv("a,\"b\r\n1,2\r\n").is_err());
    let good = "# vtk DataFile Version 3.0\nt\nASCII\nDATASET POLYDATA\nPOINTS 2 double\n0 0 0 1 0 0\nVERTICES 2 4\n1 0\n1 1\nPOINT_DATA 2\nSCALARS d double 1\nLOOKUP_TABLE default\n0\n0.5\n";
    assert!(parse_vtk(good).is_ok());
    assert!(parse_vtk(&good.replace("VERTICES 2 4", "VERTICES 2 5")).is_err());
    assert!(parse_vtk(&good.replace("1 1\n", "1 2\n")).is_err());
    assert!(parse_vtk(&good.replace("0.5\n", "")).is_err());
    assert!(parse_vtk(&good.replace("0.5", "NaN")).is_err());
}
