use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn pdm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn line_value<'a>(out: &'a str, key: &str) -> &'a str {
    out.lines().find_map(|l| l.strip_prefix(key)).unwrap_or_else(|| panic!("no `{key}` in {out}")).trim()
}

#[test]
fn build_closed_qubit() {
    let o = pdm(&["build", configs().join("closed_qubit.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(line_value(&out, "eigenvalues:"), "-0.5 0 0.5 1");
    assert_eq!(line_value(&out, "f_tr:"), "1");
    assert_eq!(line_value(&out, "classification:"), "causal");
}

#[test]
fn build_spacelike_examples() {
    for name in ["product_single_slice.json", "depolarized_mixed.json"] {
        let o = pdm(&["build", configs().join(name).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        let out = stdout(&o);
        assert_eq!(line_value(&out, "f_tr:"), "0", "{name}");
        assert_eq!(line_value(&out, "classification:"), "spacelike_compatible", "{name}");
    }
}

#[test]
fn build_writes_json_report() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.json");
    let o = pdm(&["build", configs().join("closed_qubit.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["f_tr"], 1.0);
    assert_eq!(report["classification"], "causal");
    assert_eq!(report["eigenvalues"].as_array().unwrap().len(), 4);
}

#[test]
fn build_errors() {
    let dir = TempDir::new().unwrap();
    assert_eq!(pdm(&["build", "/nonexistent/schedule.json"]).status.code(), Some(2));
    let bad = write(&dir, "bad.json", "{ not json");
    assert_eq!(pdm(&["build", &bad]).status.code(), Some(2));
    let bad_ids = write(
        &dir,
        "ids.json",
        r#"{"qubits": 1, "initial_state": {"bloch": [0, 0, 1]}, "slices": [[{"id": 1, "qubit": 0}], [{"id": 3, "qubit": 0}]]}"#,
    );
    assert_eq!(pdm(&["build", &bad_ids]).status.code(), Some(2));
    let not_tp = write(
        &dir,
        "tp.json",
        r#"{"qubits": 1, "initial_state": {"bloch": [0, 0, 1]},
            "slices": [[{"id": 1, "qubit": 0}], [{"id": 2, "qubit": 0}]],
            "channels": [{"kind": "kraus", "ops": [[[[1, 0], [0, 0]], [[0, 0], [0.5, 0]]]]}]}"#,
    );
    assert_eq!(pdm(&["build", &not_tp]).status.code(), Some(3));
    assert_eq!(pdm(&["build"]).status.code(), Some(2));
}

const DEPHASING: &str = r#"{"initial_state": {"bloch": [0, 0, 1]}, "noise": {"kind": "dephasing", "tau": 1},
    "t_min": 0, "t_max": 5, "points": 6}"#;
const DEPOLARIZING: &str = r#"{"initial_state": {"bloch": [0, 0, 0]}, "noise": {"kind": "depolarizing", "tau": 1},
    "t_min": 0, "t_max": 5, "points": 1000}"#;

#[test]
fn sweep_dephasing_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", DEPHASING);
    let csv = dir.path().join("out.csv");
    let svg = dir.path().join("out.svg");
    let o = pdm(&["sweep", &cfg, "--csv", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,lambda1,lambda2,lambda3,lambda4,f_tr,classification"));
    for (k, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').collect();
        let f_tr: f64 = f[5].parse().unwrap();
        assert!((f_tr - (-(k as f64)).exp()).abs() < 1e-10);
        assert_eq!(f[6], "causal");
    }
    let svg = fs::read_to_string(&svg).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 5);
}

#[test]
fn sweep_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", DEPOLARIZING);
    let run = |tag: &str| {
        let csv = dir.path().join(format!("{tag}.csv"));
        let svg = dir.path().join(format!("{tag}.svg"));
        assert!(pdm(&["sweep", &cfg, "--csv", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap()]).status.success());
        (fs::read(csv).unwrap(), fs::read(svg).unwrap())
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn sweep_config_errors() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("x.csv");
    for bad in [
        DEPHASING.replace("\"points\": 6", "\"points\": 1"),
        DEPHASING.replace("\"t_min\": 0", "\"t_min\": 7"),
        DEPHASING.replace("\"t_min\": 0", "\"t_min\": -1"),
        DEPHASING.replace("\"points\": 6", "\"points\": 6, \"grid\": \"log\""),
        DEPHASING.replace("\"tau\": 1", "\"tau\": 0"),
    ] {
        let cfg = write(&dir, "bad.json", &bad);
        assert_eq!(pdm(&["sweep", &cfg, "--csv", csv.to_str().unwrap()]).status.code(), Some(2), "{bad}");
        assert_eq!(pdm(&["transition", &cfg]).status.code(), Some(2), "{bad}");
    }
    let cfg = write(&dir, "nocsv.json", DEPHASING);
    assert_eq!(pdm(&["sweep", &cfg]).status.code(), Some(2));
}

#[test]
fn transition_examples() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "depol.json", DEPOLARIZING);
    let o = pdm(&["transition", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    let t: f64 = stdout(&o).trim().parse().unwrap();
    assert!((t - 3f64.ln()).abs() < 1e-6);

    let cfg = write(&dir, "deph.json", DEPHASING);
    assert_eq!(stdout(&pdm(&["transition", &cfg])).trim(), "none");
}

#[test]
fn transition_matches_a_dense_sweep() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "depol.json", DEPOLARIZING);
    let csv = dir.path().join("d.csv");
    assert!(pdm(&["sweep", &cfg, "--csv", csv.to_str().unwrap()]).status.success());
    let t: f64 = stdout(&pdm(&["transition", &cfg])).trim().parse().unwrap();
    let text = fs::read_to_string(csv).unwrap();
    let rows: Vec<(f64, &str)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[6])
        })
        .collect();
    let last_causal = rows.iter().rev().find(|r| r.1 == "causal").unwrap().0;
    let first_other = rows.iter().find(|r| r.1 == "spacelike_compatible").unwrap().0;
    assert!(last_causal <= t && t <= first_other);
}

#[test]
fn verify_small_run_passes_for_several_seeds() {
    for seed in 0..10 {
        let o = pdm(&["verify", "--seed", &seed.to_string(), "--trials", "10"]);
        assert_eq!(o.status.code(), Some(0), "seed {seed}: {}", stdout(&o));
        assert!(stdout(&o).contains("oracle_equivalence"));
    }
}

#[test]
fn verify_zero_trials_is_usage_error() {
    assert_eq!(pdm(&["verify", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(pdm(&["verify", "--trials", "many"]).status.code(), Some(2));
}
