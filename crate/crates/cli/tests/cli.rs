use std::path::Path;
use std::process::{Command, Output};

fn weylspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weylspec"))
        .args(args)
        .env_remove("WEYLSPEC_THREADS")
        .output()
        .expect("spawn weylspec")
}

fn run_config(cmd: &str, config: &str, out: &Path) -> Output {
    let cfg = out.join(format!("{cmd}-config.json"));
    std::fs::write(&cfg, config).unwrap();
    weylspec(&[cmd, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).expect("column");
    lines.map(|l| l.split(',').nth(i).unwrap().parse().unwrap()).collect()
}

const WEYL: &str = r#"{
  "command": "weyl",
  "model": "exp-model(2, 1, 0.5)",
  "weyl": { "lambdas": [0.5], "ks": [8, 16, 32] }
}"#;

#[test]
fn weyl_csv_has_decreasing_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config("weyl", WEYL, dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("weyl.csv")).unwrap();
    let ratios = column(&csv, "ratio");
    assert_eq!(ratios.len(), 3);
    assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
    assert_eq!(column(&csv, "k"), vec![8.0, 16.0, 32.0]);
    assert!(dir.path().join("weyl.json").exists());
    assert!(!dir.path().join("weyl.svg").exists());
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_config("weyl", WEYL, a.path());
    let cfg = b.path().join("weyl-config.json");
    std::fs::write(&cfg, WEYL).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_weylspec"))
        .args(["weyl", "--config", cfg.to_str().unwrap(), "--out", b.path().to_str().unwrap()])
        .env("WEYLSPEC_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    for f in ["weyl.csv", "weyl.json"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert!(x == y, "{f} differs");
    }
}

#[test]
fn appendix_curvature_row_at_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{
      "command": "appendix",
      "appendix": { "radii": [1, 2, 5, 10], "thetas": [0, 1], "lambdas": [0.5], "ks": [8, 16],
                    "eigen_radii": [4, 6, 8], "eigen_n_r": 40, "eigen_n_theta": 20 }
    }"#;
    let out = run_config("appendix", cfg, dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("appendix_curvature.csv")).unwrap();
    let r = column(&csv, "r");
    let theta = column(&csv, "theta");
    let k = column(&csv, "K_ad");
    let i = (0..r.len()).find(|&i| r[i] == 2.0 && theta[i] == 0.0).unwrap();
    assert!((k[i] + 2.0).abs() < 1e-12, "{}", k[i]);

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("appendix.json")).unwrap()).unwrap();
    for key in ["curvature", "hypotheses", "sweep", "eigen", "notes"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn cone_satisfies_zero_growth_hypotheses() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{ "model": "euclidean-cone(2)", "hypotheses": { "theorem": "thm2", "gamma": 1.2 } }"#;
    let out = run_config("hypotheses", cfg, dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("thm2: pass"));
}

#[test]
fn failed_check_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    // ψ_r/ψ → 1 on the hyperbolic plane, not 2.
    let cfg = r#"{ "model": "hyperbolic(2)", "hypotheses": { "theorem": "thm1", "c": 2.0 } }"#;
    let out = run_config("hypotheses", cfg, dir.path());
    assert_eq!(out.status.code(), Some(2));
    // the report is still written
    assert!(dir.path().join("hypotheses.json").exists());
}

#[test]
fn horoball_margin_is_positive() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config("horoball", r#"{ "horoball": { "r_max": 50 } }"#, dir.path());
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("horoball.json")).unwrap()).unwrap();
    assert_eq!(doc["inside"], true);
    assert!(doc["min_margin"].as_f64().unwrap() > 0.0);
}

#[test]
fn config_errors_report_positions() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config("weyl", "{\n  \"model\": \"hyperbolic\",\n  \"wyel\": {}\n}", dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unknown field `wyel`") && err.contains("line 3"), "{err}");

    let out = run_config("weyl", "{ \"model\": \"hyperbolic\", ", dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1 column"));
}

#[test]
fn command_mismatch_and_bad_model_are_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config("eigen", r#"{ "command": "weyl", "model": "hyperbolic" }"#, dir.path());
    assert_eq!(out.status.code(), Some(1));
    let out = run_config("weyl", r#"{ "model": "torus(2)" }"#, dir.path());
    assert_eq!(out.status.code(), Some(1));
    // λ below the bottom (n−1)²c²/4 = 1/4
    let out = run_config("weyl", r#"{ "model": "exp-model(2, 1, 0.5)", "weyl": { "lambdas": [0.1] } }"#, dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("0.1"));
}

#[test]
fn plots_are_flag_gated() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("c.json");
    std::fs::write(&cfg_path, r#"{ "model": "exp-model(2, 1, 0)", "eigen": { "radii": [10, 20], "h": 0.02 } }"#).unwrap();
    let out = weylspec(&["eigen", "--config", cfg_path.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "--plots"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let svg = std::fs::read_to_string(dir.path().join("eigen.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}
