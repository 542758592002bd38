//! End-to-end tests of the command-line interface: file formats, exit codes,
//! determinism, report structure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scatter2d"))
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("scatter2d_cli_{name}_{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

const SMALL_CONFIG: &str = r#"{
  "obstacle": {"benchmark": "apple_shaped"},
  "bc": {"type": "dirichlet"},
  "pairs_deg": [[0.0, 120.0], [0.0, -120.0]],
  "ks": [0.5, 1.0],
  "nf": 32,
  "delta": 0.05,
  "seed": 7,
  "init": {"circle": {"r0": 0.5, "center": [-1.0, 0.0]}},
  "inversion": {"m": 4, "nq": 32}
}"#;

#[test]
fn synthesize_is_deterministic_and_round_trips() {
    let dir = workdir("synth");
    let cfg = write_config(&dir, "cfg.json", SMALL_CONFIG);
    let out1 = dir.join("a.txt");
    let out2 = dir.join("b.txt");
    for out in [&out1, &out2] {
        let status = bin()
            .args(["synthesize", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = fs::read(&out1).unwrap();
    let b = fs::read(&out2).unwrap();
    assert_eq!(a, b, "same seed must give byte-identical datasets");

    // explicit seed override changes the bytes
    let out3 = dir.join("c.txt");
    let status = bin()
        .args(["synthesize", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out3)
        .args(["--seed", "8"])
        .status()
        .unwrap();
    assert!(status.success());
    assert_ne!(a, fs::read(&out3).unwrap());

    // reader accepts the file and a rewrite is byte-identical
    let text = fs::read_to_string(&out1).unwrap();
    let data = scatter2d::phaseless::read_dataset(std::io::BufReader::new(text.as_bytes()))
        .expect("reader must accept writer output");
    let mut rewritten = Vec::new();
    scatter2d::phaseless::write_dataset(&data, &mut rewritten).unwrap();
    assert_eq!(a, rewritten);
}

#[test]
fn invert_writes_report_with_one_block_per_frequency() {
    let dir = workdir("invert");
    let cfg = write_config(&dir, "cfg.json", SMALL_CONFIG);
    let data = dir.join("data.txt");
    assert!(bin()
        .args(["synthesize", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&data)
        .status()
        .unwrap()
        .success());
    let out = dir.join("run");
    assert!(bin()
        .args(["invert", "--config"])
        .arg(&cfg)
        .arg("--dataset")
        .arg(&data)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["frequencies"].as_array().unwrap().len(), 2);
    assert!(out.join("curve.json").exists());
    assert!(out.join("init.csv").exists());
    assert!(out.join("recon_k1.csv").exists());
    assert!(out.join("recon_k2.csv").exists());

    // the final curve file round-trips through the geometry reader
    let text = fs::read_to_string(out.join("curve.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let curve: scatter2d::geometry::StarlikeCurve =
        serde_json::from_value(v["curve"].clone()).unwrap();
    assert_eq!(curve.radial.order(), 4);
}

#[test]
fn invert_rejects_mismatched_dataset() {
    let dir = workdir("mismatch");
    let cfg = write_config(&dir, "cfg.json", SMALL_CONFIG);
    let data = dir.join("data.txt");
    assert!(bin()
        .args(["synthesize", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&data)
        .status()
        .unwrap()
        .success());
    // config with a different nf
    let cfg_bad = write_config(&dir, "bad.json", &SMALL_CONFIG.replace("\"nf\": 32", "\"nf\": 64"));
    let status = bin()
        .args(["invert", "--config"])
        .arg(&cfg_bad)
        .arg("--dataset")
        .arg(&data)
        .arg("--out")
        .arg(dir.join("run"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn invalid_config_exits_with_code_two() {
    let dir = workdir("badcfg");
    let cfg = write_config(
        &dir,
        "cfg.json",
        &SMALL_CONFIG.replace("[0.5, 1.0]", "[1.0, 0.5]"), // not increasing
    );
    let status = bin()
        .args(["synthesize", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("d.txt"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn oracle_check_reports_small_errors() {
    let dir = workdir("oracle");
    let cfg = write_config(
        &dir,
        "cfg.json",
        r#"{
          "obstacle": {"benchmark": {"circle": {"r0": 1.0, "center": [0.0, 0.0]}}},
          "bc": {"type": "impedance", "mu": 2.0},
          "pairs_deg": [[0.0]],
          "ks": [0.5, 3.0],
          "nf": 32,
          "oracle_radius": 1.0
        }"#,
    );
    let out = dir.join("oracle.csv");
    assert!(bin()
        .args(["oracle-check", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "k,n_q,sup_error");
    for line in lines {
        let err: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!(err < 1e-8, "oracle-check error {err:e}");
    }
}

#[test]
fn verify_invariance_lattice_vs_probe() {
    let dir = workdir("invariance");
    let cfg = write_config(
        &dir,
        "cfg.json",
        r#"{
          "obstacle": {"benchmark": "apple_shaped"},
          "bc": {"type": "dirichlet"},
          "pairs_deg": [[180.0, 270.0]],
          "ks": [1.0],
          "nf": 32,
          "shifts": {"lattice": {"n_min": -1, "n_max": 1, "a_values": [0.0, 0.4]},
                     "off_lattice_probe": true}
        }"#,
    );
    let out = dir.join("inv.csv");
    assert!(bin()
        .args(["verify-invariance", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let text = fs::read_to_string(&out).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 7);
    for r in &rows[..6] {
        assert!(r[2] < 1e-7, "lattice discrepancy {:e}", r[2]);
    }
    assert!(rows[6][2] > 1e-3, "off-lattice probe {:e}", rows[6][2]);
}

#[test]
fn shipped_configs_parse_and_validate() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        scatter2d_cli::config::ExperimentConfig::load(path.to_str().unwrap())
            .unwrap_or_else(|e| panic!("{} failed to load: {e}", path.display()));
        seen += 1;
    }
    assert!(seen >= 6, "expected the shipped experiment configs, found {seen}");
}
