use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn pinlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pinlab"))
        .args(args)
        .env("PINLAB_THREADS", "2")
        .output()
        .expect("spawn pinlab")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn synthetic_corpus(dir: &TempDir, n: usize) -> PathBuf {
    let mut text = String::new();
    let mut x: u64 = 12345;
    for _ in 0..n {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let pin = (x >> 33) % 10_000;
        // skew toward a few favourites so models have something to learn
        let pin = if pin.is_multiple_of(3) { pin % 50 * 101 } else { pin };
        text.push_str(&format!("{pin:04}\n"));
    }
    write(dir, "corpus.txt", &text)
}

#[test]
fn extract_counts_and_output() {
    let dir = TempDir::new().unwrap();
    let dump = write(&dir, "dump.txt", "12345\npw1234x5678!\n\n");
    let out = dir.path().join("pins.txt");
    let res = pinlab(&["extract", p(&dump), p(&out)]);
    assert!(res.status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "1234\n5678\n");
    let log = String::from_utf8(res.stderr).unwrap();
    assert!(log.contains("lines read: 3"), "{log}");
    assert!(log.contains("PINs extracted: 2"), "{log}");
}

#[test]
fn extract_empty_and_missing() {
    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "empty.txt", "");
    let out = dir.path().join("pins.txt");
    assert!(pinlab(&["extract", p(&empty), p(&out)]).status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "");

    let res = pinlab(&["extract", p(&dir.path().join("nope.txt")), p(&out)]);
    assert_eq!(res.status.code(), Some(2));
    assert!(!res.stderr.is_empty());
}

#[test]
fn train_then_predict_tiny() {
    let dir = TempDir::new().unwrap();
    let corpus = write(&dir, "tiny.txt", "1234\n1234\n1235\n9876\n");
    let model = dir.path().join("tiny.model");
    let res = pinlab(&["train", p(&corpus), p(&model), "--no-split"]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let text = std::fs::read_to_string(&model).unwrap();
    assert_eq!(text, "PINMODEL v1 alpha=1.0 tau=10\n1234 2\n1235 1\n9876 1\nTOTAL 4\n");

    let res = pinlab(&["predict", p(&model), "?234"]);
    assert!(res.status.success());
    let stdout = String::from_utf8(res.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[0], "1\t1234\t0.2500000000\tdirect_single");

    let res = pinlab(&["predict", p(&model), "??34", "--top", "3"]);
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 3);
    assert!(stdout.starts_with("12\t1234\t"));
    assert!(stdout.lines().all(|l| l.ends_with("\tindependence")));
}

#[test]
fn predict_usage_errors() {
    let dir = TempDir::new().unwrap();
    let corpus = write(&dir, "tiny.txt", "1234\n");
    let model = dir.path().join("m");
    assert!(pinlab(&["train", p(&corpus), p(&model), "--no-split"]).status.success());
    for bad in ["1234", "????", "?23", "a234"] {
        assert_eq!(pinlab(&["predict", p(&model), bad]).status.code(), Some(1), "{bad}");
    }
}

#[test]
fn train_split_and_flags() {
    let dir = TempDir::new().unwrap();
    let corpus = write(
        &dir,
        "c.txt",
        "1111\n2222\n3333\n4444\n5555\n6666\n7777\n8888\n9999\n0000\n",
    );
    let model = dir.path().join("m");
    let res = pinlab(&[
        "train",
        p(&corpus),
        p(&model),
        "--alpha",
        "0.5",
        "--tau",
        "3",
        "--train-fraction",
        "0.5",
    ]);
    assert!(res.status.success());
    let text = std::fs::read_to_string(&model).unwrap();
    assert!(text.starts_with("PINMODEL v1 alpha=0.5 tau=3\n"));
    assert!(text.ends_with("TOTAL 5\n"));
}

#[test]
fn train_error_codes() {
    let dir = TempDir::new().unwrap();
    let model = dir.path().join("m");
    let missing = dir.path().join("missing.txt");
    assert_eq!(pinlab(&["train", p(&missing), p(&model)]).status.code(), Some(2));

    let bad = write(&dir, "bad.txt", "1234\n123\n");
    let res = pinlab(&["train", p(&bad), p(&model)]);
    assert_eq!(res.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 2"));

    let empty = write(&dir, "empty.txt", "");
    assert_eq!(pinlab(&["train", p(&empty), p(&model)]).status.code(), Some(3));
    assert!(pinlab(&["train", p(&empty), p(&model), "--no-split"]).status.success());
    assert_eq!(
        std::fs::read_to_string(&model).unwrap(),
        "PINMODEL v1 alpha=1.0 tau=10\nTOTAL 0\n"
    );

    let ok = write(&dir, "ok.txt", "1234\n");
    assert_eq!(
        pinlab(&["train", p(&ok), p(&model), "--alpha", "-1"]).status.code(),
        Some(1)
    );
    assert_eq!(pinlab(&["train", p(&ok), p(&model), "--bogus"]).status.code(), Some(1));
    assert_eq!(pinlab(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(pinlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn predict_rejects_corrupt_model() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "m", "PINMODEL v1 alpha=1.0 tau=10\n1234 2\nTOTAL 5\n");
    assert_eq!(pinlab(&["predict", p(&model), "?234"]).status.code(), Some(3));
    let model = write(&dir, "m2", "PINMODEL v2 alpha=1.0 tau=10\n");
    assert_eq!(pinlab(&["predict", p(&model), "?234"]).status.code(), Some(3));
}

#[test]
fn evaluate_full_report_shape() {
    let dir = TempDir::new().unwrap();
    let corpus = synthetic_corpus(&dir, 2000);
    let report = dir.path().join("r.json");
    let res = pinlab(&[
        "evaluate",
        p(&corpus),
        "--scenarios",
        "all",
        "--models",
        "all",
        "--report",
        p(&report),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    assert!(res.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["schema"], "report_v1");
    assert_eq!(doc["command"], "evaluate");
    assert_eq!(doc["split"]["train"], 1600);
    assert_eq!(doc["split"]["test"], 400);
    assert_eq!(doc["corpus"]["count"], 2000);
    assert_eq!(doc["corpus"]["hash"].as_str().unwrap().len(), 16);
    assert_eq!(doc["config"]["train_fraction"], "4/5");
    assert_eq!(doc["config"]["seed"], 39);
    let models = doc["models"].as_array().unwrap();
    assert_eq!(models.len(), 4);
    let blocks: usize = models.iter().map(|m| m["scenarios"].as_array().unwrap().len()).sum();
    assert_eq!(blocks, 56);
    let first = &models[0]["scenarios"][0];
    assert_eq!(models[0]["model"], "proposed");
    assert_eq!(first["pattern"], "d1|d2d3d4");
    assert_eq!(first["n"], 400);
    assert_eq!(first["per_class_recall"].as_object().unwrap().len(), 10);
    assert_eq!(first["topk"]["1"], first["accuracy"]);
}

#[test]
fn evaluate_is_deterministic_on_stdout() {
    let dir = TempDir::new().unwrap();
    let corpus = synthetic_corpus(&dir, 1500);
    let args = ["evaluate", p(&corpus), "--scenarios", "d1,d1d3,d2d3d4", "--seed", "7"];
    let a = pinlab(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_pinlab"))
        .args(args)
        .env("PINLAB_THREADS", "1")
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = pinlab(&["evaluate", p(&corpus), "--scenarios", "d1,d1d3,d2d3d4", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn evaluate_k_out_of_range() {
    let dir = TempDir::new().unwrap();
    let corpus = synthetic_corpus(&dir, 200);
    let res = pinlab(&["evaluate", p(&corpus), "--scenarios", "d2", "--ks", "1,100"]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("k exceeds candidate space"));
}

#[test]
fn evaluate_with_config_file() {
    let dir = TempDir::new().unwrap();
    let corpus = synthetic_corpus(&dir, 500);
    let cfg = write(
        &dir,
        "run.toml",
        "seed = 3\nscenarios = [\"d4\"]\nmodels = [\"uniform\", \"nb\"]\n",
    );
    let res = pinlab(&["evaluate", p(&corpus), "--config", p(&cfg), "--seed", "4"]);
    assert!(res.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(doc["config"]["seed"], 4);
    assert_eq!(doc["models"][0]["model"], "uniform");
    assert_eq!(doc["models"][1]["model"], "nb");
    assert_eq!(doc["models"][0]["scenarios"][0]["pattern"], "d4|d1d2d3");

    let bad = write(&dir, "bad.toml", "sede = 3\n");
    assert_eq!(
        pinlab(&["evaluate", p(&corpus), "--config", p(&bad)]).status.code(),
        Some(3)
    );
}

#[test]
fn sensitivity_blocks() {
    let dir = TempDir::new().unwrap();
    let corpus = synthetic_corpus(&dir, 1000);
    let res = pinlab(&["sensitivity", p(&corpus)]);
    assert!(res.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(doc["command"], "sensitivity");
    assert_eq!(doc["pattern"], "d1d2|d3d4");
    let results = doc["results"].as_array().unwrap();
    assert_eq!(results.len(), 5);
    assert_eq!(results[0]["tau"], 1);
    assert!(results[0]["ci95"].is_array());

    let res = pinlab(&["sensitivity", p(&corpus), "--taus", "1,100"]);
    let doc: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(doc["results"].as_array().unwrap().len(), 2);

    let res = pinlab(&["sensitivity", p(&corpus), "--scenarios", "d1"]);
    assert_eq!(res.status.code(), Some(1));
}
