use std::path::Path;
use std::process::{Command, Output};

fn proxsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_proxsim")).args(args).output().expect("spawn proxsim")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

/// Small enough to run the whole pipeline in seconds.
fn write_config(dir: &Path) -> String {
    let path = dir.join("run.json");
    std::fs::write(
        &path,
        r#"{"forest": {"n_trees": 10}, "sweep": {"scenarios_per_cell": 2, "forest": {"n_trees": 5}}}"#,
    )
    .unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn full_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let data = dir.path().join("data");
    let results = dir.path().join("results");
    let (data_s, results_s) = (data.to_str().unwrap(), results.to_str().unwrap());

    let out = proxsim(&["--config", &cfg, "generate", "--out", data_s, "--scenarios-per-cell", "3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let g = json(&out);
    assert_eq!(g["scenarios"], 27);
    assert_eq!(g["rows"], 27 * 864);
    assert!(data.join("manifest.json").exists());

    let out = proxsim(&["--config", &cfg, "features", "--data", data_s, "--out", results_s, "--view", "kin"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(results.join("features_kin.csv").exists());
    assert!(results.join("features_kin.columns.json").exists());

    let out = proxsim(&["--config", &cfg, "train-eval", "--data", data_s, "--out", results_s]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["reports"].as_array().unwrap().len(), 3);
    for view in ["rf", "kin", "fused"] {
        for file in [format!("metrics_{view}.json"), format!("confusion_{view}.csv"), format!("roc_{view}.csv")] {
            assert!(results.join(&file).exists(), "{file} missing");
        }
    }

    let out = proxsim(&["--config", &cfg, "noise-sweep", "--out", results_s, "--sigma-grid", "0,1,2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let sweep = std::fs::read_to_string(results.join("noise_sweep.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 4);
    assert!(sweep.lines().nth(1).unwrap().starts_with("0,0,inf,"));

    let out = proxsim(&["report", "--out", results_s]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["views"].as_array().unwrap().len(), 3);
    let summary = std::fs::read_to_string(results.join("summary.csv")).unwrap();
    assert!(summary.starts_with("view,accuracy,macro_f1,macro_auroc"));
    assert_eq!(summary.lines().count(), 4);
}

#[test]
fn same_seed_same_bytes_other_seed_differs() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let out = dir.path().join(name);
        let o = proxsim(&["--seed", seed, "generate", "--out", out.to_str().unwrap(), "--scenarios-per-cell", "1"]);
        assert_eq!(code(&o), 0);
        std::fs::read(out.join("covert_geo.csv")).unwrap()
    };
    let a = run("a", "5");
    assert_eq!(a, run("b", "5"));
    assert_ne!(a, run("c", "6"));
}

#[test]
fn usage_and_config_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("o");
    let o = out_dir.to_str().unwrap();
    assert_eq!(code(&proxsim(&["frobnicate"])), 1);
    assert_eq!(code(&proxsim(&["generate"])), 1);
    assert_eq!(code(&proxsim(&["train-eval", "--data", o, "--out", o, "--view", "audio"])), 1);
    assert_eq!(code(&proxsim(&["noise-sweep", "--out", o, "--sigma-grid", "0,-1"])), 1);
    assert_eq!(code(&proxsim(&["generate", "--out", o, "--scenarios-per-cell", "0"])), 1);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"scenario": {"n_scenarios": 3}}"#).unwrap();
    assert_eq!(code(&proxsim(&["--config", bad.to_str().unwrap(), "generate", "--out", o])), 1);
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(code(&proxsim(&["--config", bad.to_str().unwrap(), "generate", "--out", o])), 1);

    let threads = Command::new(env!("CARGO_BIN_EXE_proxsim"))
        .args(["report", "--out", o])
        .env("PROXSIM_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(code(&threads), 1);
    assert_eq!(code(&proxsim(&["--help"])), 0);
}

#[test]
fn io_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nowhere");
    let m = missing.to_str().unwrap();
    assert_eq!(code(&proxsim(&["train-eval", "--data", m, "--out", m])), 2);
    assert_eq!(code(&proxsim(&["--config", m, "generate", "--out", m])), 2);

    // A regular file where the output directory should go.
    let file = dir.path().join("taken");
    std::fs::write(&file, "x").unwrap();
    assert_eq!(code(&proxsim(&["generate", "--out", file.to_str().unwrap(), "--scenarios-per-cell", "1"])), 2);
}

#[test]
fn thread_cap_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d");
    let o = Command::new(env!("CARGO_BIN_EXE_proxsim"))
        .args(["generate", "--out", out.to_str().unwrap(), "--scenarios-per-cell", "1"])
        .env("PROXSIM_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}
