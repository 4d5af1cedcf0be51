use std::path::Path;
use std::process::{Command, Output};

fn hkmetric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkmetric")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const SPEC: &str = r#"{
  "label": "trap",
  "model": "hooke",
  "reference": {"omega": 0.5},
  "varied": [{"omega": 0.5}, {"omega": 0.4}, {"omega": 0.6}, {"omega": 0.8}, {"omega": 1.0}, {"omega": 1.5}, {"omega": 2.0}]
}"#;

#[test]
fn sweep_analyze_plot() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", SPEC);
    let csv = dir.path().join("trap.csv").to_string_lossy().into_owned();
    let svg = dir.path().join("trap.svg").to_string_lossy().into_owned();

    let out = hkmetric(&["sweep", "--spec", &spec]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 8);

    let out = hkmetric(&["sweep", "--spec", &spec, "--csv", &csv, "--svg", &svg]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), text);
    roxmltree::Document::parse(&std::fs::read_to_string(&svg).unwrap()).unwrap();

    let out = hkmetric(&["analyze", "--csv", &csv]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["records"], 7);
    assert_eq!(report["monotonic"], true);
    let with_n: serde_json::Value = serde_json::from_slice(&hkmetric(&["analyze", "--csv", &csv, "--n", "2"]).stdout).unwrap();
    assert_eq!(with_n, report);

    let plot = dir.path().join("plot.svg").to_string_lossy().into_owned();
    let out = hkmetric(&["plot", "--csv", &csv, "--svg", &plot, "--raw"]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&plot).unwrap();
    assert!(svg.contains(">D_psi<"));
}

#[test]
fn distance_between_two_states() {
    let out = hkmetric(&["distance", "--model", "hubbard", "--ref", "n_up=1,n_down=1,u=2,omega=4", "--var", "omega=1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let d_psi = r["d_psi"].as_f64().unwrap();
    let d_rho = r["d_rho"].as_f64().unwrap();
    assert!(d_psi > 0.0 && d_psi <= 2.0);
    assert!(d_rho > 0.0 && d_rho <= 4.0);
    assert_eq!(r["param"], "omega=1.0");

    let out = hkmetric(&["distance", "--model", "hooke", "--ref", "omega=0.5", "--var", "omega=0.5"]);
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["d_psi"], 0.0);
}

#[test]
fn validation_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"model": "hooke", "reference": {"omega": -1}, "varied": [{"omega": 1}]}"#);
    assert_eq!(hkmetric(&["sweep", "--spec", &bad]).status.code(), Some(1));
    let broken = write(dir.path(), "broken.json", "{ not json");
    assert_eq!(hkmetric(&["sweep", "--spec", &broken]).status.code(), Some(1));
    assert_eq!(hkmetric(&["sweep", "--spec", "/no/such/file.json"]).status.code(), Some(1));
    assert_eq!(hkmetric(&["distance", "--model", "lithium", "--ref", "Z=3", "--var", "Z=2"]).status.code(), Some(1));
    assert_eq!(hkmetric(&["distance", "--model", "hooke", "--ref", "omega", "--var", "omega=2"]).status.code(), Some(1));
    assert_eq!(hkmetric(&["frobnicate"]).status.code(), Some(1));
    let short = write(dir.path(), "short.csv", "param,d_psi,d_rho,d_psi_norm,d_rho_norm,overlap,energy_ref,energy_var,flags\nx,0,0,0,0,1,0,0,\n");
    assert_eq!(hkmetric(&["analyze", "--csv", &short]).status.code(), Some(1));
    assert!(hkmetric(&["--help"]).status.success());
}

#[test]
fn solver_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "coarse.json",
        r#"{"model": "hooke", "reference": {"omega": 0.5}, "varied": [{"omega": 0.6}],
            "accuracy": {"hooke": {"radial_nodes": 2}}}"#,
    );
    let out = hkmetric(&["sweep", "--spec", &spec]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("omega=0.5"));
}
