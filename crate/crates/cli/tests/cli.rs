use std::path::Path;
use std::process::Command;

use qdmera::dmera::Side;
use qdmera_cli::results::read_csv;
use qdmera_cli::{csv_name, run, ExperimentConfig, ExperimentKind};

fn qdmera(args: &[&str], dir: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qdmera")).args(args).current_dir(dir).output().unwrap()
}

#[test]
fn lrtim_rows_account_for_every_field_and_subsystem() {
    let cfg = ExperimentConfig::parse("h_points = 20\nh_min = 1.0\nh_max = 1.2\nN = 4\nM = 2, 3\nvqe_restarts = 1", ExperimentKind::LrtimSweep).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = run(&cfg, dir.path(), 1).unwrap();
    let rows = read_csv(&dir.path().join(csv_name(ExperimentKind::LrtimSweep))).unwrap();
    assert_eq!(rows, out.rows);
    let count = |name: &str| rows.iter().filter(|r| r.experiment == name).count();
    assert_eq!(count("lrtim/energy"), 20);
    assert_eq!(count("lrtim/entropy"), 40);
    assert!(rows.iter().all(|r| r.experiment != "lrtim/entropy" || r.side == Some(Side::Left)));
    assert_eq!(std::fs::read_dir(dir.path().join("checkpoints")).unwrap().count(), 20);
}

#[test]
fn oversized_subsystems_are_rejected() {
    assert!(ExperimentConfig::parse("N = 16\nM = 16", ExperimentKind::RandomDmera).is_err());
    assert!(ExperimentConfig::parse("N = 12", ExperimentKind::RandomDmera).is_err());
    assert!(ExperimentConfig::parse("N = 32", ExperimentKind::LrtimSweep).is_err());
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "M = 16\n").unwrap();
    let out = qdmera(&["random-dmera", "--config", cfg.to_str().unwrap()], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    assert!(!dir.path().join("results").exists());
}

#[test]
fn binary_prints_the_cone_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdmera(&["cone-report", "--out", "r"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PREDICTOR-MISMATCH"));
    assert!(stdout.contains("MATCH"));
    assert!(dir.path().join("r").join("cone_report.csv").exists());
}

#[test]
fn exported_cones_reload_in_the_rdm_tool() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdmera(&["export-cone", "--n", "8", "--side", "R", "--m", "2", "--seed", "4", "--out", "cone.txt"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("cone.txt")).unwrap();
    let line = text.lines().find(|l| l.starts_with("# outputs on compact wires")).unwrap();
    let wires: String = line.trim_start_matches("# outputs on compact wires ").chars().filter(|c| !"[] ".contains(*c)).collect();
    let out = qdmera(&["cone-rdm", "cone.txt", "--wires", &wires], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let entropy: f64 = stdout.lines().next().unwrap().trim_start_matches("entropy ").parse().unwrap();
    assert!((0.0..=2.0 * std::f64::consts::LN_2 + 1e-12).contains(&entropy));
}

#[test]
fn mismatched_subcommand_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.cfg"), "experiment = lrtim\n").unwrap();
    let out = qdmera(&["random-dmera", "--config", "c.cfg"], dir.path());
    assert!(!out.status.success());
}
