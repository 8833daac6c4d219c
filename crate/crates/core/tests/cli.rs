use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_achterbahn")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = run(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert!(stdout(&run(&["attack", "--help"])).contains("--workers"));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["frobnicate"][..],
        &["analyze", "x_0 + +", "-n", "3"],
        &["estimate", "--builtin", "nope"],
        &["attack", "--noiseless", "--random-input"],
        &["keystream", "--builtin", "toy", "--key", "zz", "--iv", "00"],
        &["keystream", "--builtin", "a80", "--key", "00112233445566778899", "--iv", "0011223344556677"],
        &["attack", "--builtin", "a128"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn analyze_builtins() {
    let text = stdout(&run(&["analyze", "--builtin", "F"]));
    for needle in ["resiliency order    8", "nonlinearity        3584", "algebraic immunity  4", "+2^-3.00"] {
        assert!(text.contains(needle), "{needle}\n{text}");
    }
    let g = json(&["analyze", "--builtin", "G"]);
    assert_eq!(g["nonlinearity"], 896);
    assert_eq!(g["resiliency_order"], 6);
}

#[test]
fn analyze_expression() {
    let v = json(&["analyze", "x_0 + x_3 + x_1x_2", "-n", "4", "--mask", "0,1,2,3"]);
    assert_eq!(v["balanced"], true);
    assert_eq!(v["resiliency_order"], 1);
    let text = stdout(&run(&["analyze", "x_0x_1 + x_2", "-n", "3", "--max-weight", "1"]));
    assert!(text.contains("x2"), "{text}");
}

#[test]
fn estimate_all_plans() {
    let o = run(&["estimate"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for needle in ["2^49.81", "2^70.00", "2^75.39", "2^60.24", "documented discrepancy", "2^59.30"] {
        assert!(text.contains(needle), "{needle}");
    }
    let v = json(&["estimate", "--builtin", "v2"]);
    let est = &v[0];
    assert!((est["log2_data"].as_f64().unwrap() - 49.81).abs() < 0.01);
}

#[test]
fn estimate_mismatch_exits_two() {
    let o = run(&["estimate", "--builtin", "a128", "--term-cost", "9"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("MISMATCH"));
}

#[test]
fn verify_reproduces_every_figure() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 mismatch(es)"));
}

#[test]
fn keystream_golden() {
    let o = run(&["keystream", "--builtin", "toy", "--key", "0123", "--iv", "45", "--count", "128"]);
    assert_eq!(stdout(&o).trim(), "ba442e94e77a5b0eb917f219b1491047");
    let hold = run(&[
        "keystream", "--builtin", "toy", "--key", "deadbeef", "--iv", "c0de", "--count", "128", "--schedule",
        "hold-first",
    ]);
    assert_eq!(stdout(&hold).trim(), "837c43d56eda7ac88b4802c51acadfe1");
    let fills = run(&["keystream", "--builtin", "toy", "--fills", "1,0x1ff,0x3ff,0x7ff", "--count", "16", "--t0", "5"]);
    assert!(fills.status.success());
    assert_eq!(stdout(&fills).trim().len(), 4);
}

#[test]
fn toy_attack_recovers_and_is_worker_independent() {
    let args = ["attack", "--seed", "11", "--trials", "2"];
    let one = json(&[&args[..], &["--workers", "1"]].concat());
    let four = json(&[&args[..], &["--workers", "4"]].concat());
    assert_eq!(one, four);
    assert_eq!(one["success_rate"], 1.0);
    assert_eq!(one["agreement"], true);
    assert_eq!(one["samples"], 1023);
}

#[test]
fn attack_variants() {
    let r = json(&["attack", "--random-input", "--seed", "2", "--method", "exhaustive"]);
    assert_eq!(r["trials"][0]["results"][0]["verdict"], "random");
    let n = json(&["attack", "--noiseless", "--builtin", "toy-lcm", "--method", "folded"]);
    assert_eq!(n["trials"][0]["results"][0]["empirical_bias"].as_f64().unwrap().abs(), 1.0);
    let e = json(&["attack", "--builtin", "toy-empty", "--method", "folded-direct", "--seed", "4"]);
    assert_eq!(e["success_rate"], 1.0);
    let csv = stdout(&run(&["--format", "csv", "attack", "--seed", "3"]));
    assert!(csv.starts_with("trial,t,eps_hat"));
}

#[test]
fn out_directory_gets_all_formats() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reports");
    let o = run(&["--out", out.to_str().unwrap(), "estimate", "--builtin", "toy"]);
    assert!(o.status.success());
    for f in ["report.json", "report.txt", "report.csv"] {
        assert!(fs::metadata(out.join(f)).unwrap().len() > 0, "{f}");
    }
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(v[0]["plan"], "toy");
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn config_files() {
    let dir = tempfile::tempdir().unwrap();
    let plan = write(
        dir.path(),
        "plan.toml",
        "name = \"file-toy\"\ncipher = \"toy\"\napproximation = [0, 1, 2, 3]\npairing = [[3]]\ndecimation = [0]\ntargets = [1, 2]\n",
    );
    let v = json(&["attack", "--plan", &plan, "--seed", "9"]);
    assert_eq!(v["plan"], "file-toy");
    assert_eq!(v["success_rate"], 1.0);

    let spec = write(dir.path(), "spec.json", r#"{"base": "toy", "registers": [{"label": 2, "shift": 7}]}"#);
    let a = stdout(&run(&["keystream", "--spec", &spec, "--key", "0123", "--iv", "45", "--count", "64"]));
    let b = stdout(&run(&["keystream", "--builtin", "toy", "--key", "0123", "--iv", "45", "--count", "64"]));
    assert_ne!(a, b);

    let bad = write(dir.path(), "bad.toml", "approximation = [0, 1]\ncolour = 3\n");
    assert_eq!(run(&["estimate", "--plan", &bad]).status.code(), Some(1));
    let uncancelled = write(dir.path(), "open.toml", "cipher = \"toy\"\napproximation = [0, 1, 2, 3]\ntargets = [1, 2]\n");
    let o = run(&["estimate", "--plan", &uncancelled]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}
