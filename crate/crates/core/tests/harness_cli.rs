use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use helmlearn::harness::{run_case, ExperimentConfig};

const SMALL: &str = r#"
seed = 3

[problem]
k = 20.0
collocation = 96
sources = 96
source_radius = 1.07
alpha = 1e-12

[problem.curve]
kind = "flower"
a = 0.5
b = 0.1
n = 6

[field]
kind = "plane-wave"
angle = 0.4

[grid]
target_count = 1500
"#;

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_helmlearn"))
        .args(args)
        .env_remove("HELMLEARN_OUTPUT_DIR")
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn numeric_columns(path: &Path) -> Vec<(f64, f64)> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            (rec[2].parse().unwrap(), rec[3].parse().unwrap())
        })
        .collect()
}

#[test]
fn case_happy_path_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.toml", SMALL);
    let out = dir.path().join("out");
    let o = run(&["case", "--config", s(&cfg), "--output-dir", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["report.json", "timing.json", "fields.csv", "boundary.csv"] {
        assert!(out.join(name).exists(), "{name}");
    }
    let header = std::fs::read_to_string(out.join("fields.csv")).unwrap();
    assert!(header.starts_with("x,y,re_num,im_num,re_exact,im_exact,abs_err\n"));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
    assert!(report["two_norm"].as_f64().unwrap() < 1e-4);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["case", "--unknown-flag"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let o = run(&["solve", "--operator", "x.bin"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn learn_then_solve_matches_case() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.toml", SMALL);
    let case_dir = dir.path().join("case");
    let solve_dir = dir.path().join("solve");
    let op = dir.path().join("op.bin");
    assert_eq!(run(&["case", "--config", s(&cfg), "--output-dir", s(&case_dir)]).status.code(), Some(0));
    assert_eq!(
        run(&["learn", "--config", s(&cfg), "--operator", s(&op), "--output-dir", s(&solve_dir)]).status.code(),
        Some(0)
    );
    let o = run(&[
        "solve",
        "--operator",
        s(&op),
        "--boundary",
        s(&case_dir.join("boundary.csv")),
        "--config",
        s(&cfg),
        "--output-dir",
        s(&solve_dir),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let a = numeric_columns(&case_dir.join("fields.csv"));
    let b = numeric_columns(&solve_dir.join("fields.csv"));
    assert_eq!(a.len(), b.len());
    let scale = a.iter().map(|(re, im)| re.hypot(*im)).fold(0.0, f64::max);
    for ((ar, ai), (br, bi)) in a.iter().zip(&b) {
        assert!((ar - br).hypot(ai - bi) <= 1e-12 * scale);
    }
}

#[test]
fn solve_rejects_wrong_data_length() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.toml", SMALL);
    let op = dir.path().join("op.bin");
    assert_eq!(run(&["learn", "--config", s(&cfg), "--operator", s(&op)]).status.code(), Some(0));
    let data = write_config(dir.path(), "f.csv", "x,y,re,im\n0.4,0,1,0\n0.5,0.1,0,1\n");
    let o = run(&["solve", "--operator", s(&op), "--boundary", s(&data), "--output-dir", s(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(msg.contains("dimension") && msg.contains("96"), "{msg}");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.toml", SMALL);
    let first = dir.path().join("a");
    let second = dir.path().join("b");
    for out in [&first, &second] {
        assert_eq!(run(&["case", "--config", s(&cfg), "--output-dir", s(out), "--seed", "9"]).status.code(), Some(0));
    }
    assert_eq!(std::fs::read(first.join("report.json")).unwrap(), std::fs::read(second.join("report.json")).unwrap());
    assert_eq!(std::fs::read(first.join("fields.csv")).unwrap(), std::fs::read(second.join("fields.csv")).unwrap());
    let text = std::fs::read_to_string(first.join("report.json")).unwrap();
    assert!(text.contains("\"seed\": 9"));
}

#[test]
fn output_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.toml", SMALL);
    let target = dir.path().join("from_env");
    let o = Command::new(env!("CARGO_BIN_EXE_helmlearn"))
        .args(["case", "--config", s(&cfg)])
        .env("HELMLEARN_OUTPUT_DIR", &target)
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(target.join("report.json").exists());
    assert!(!dir.path().join("out").exists());
}

#[test]
fn zero_data_gives_zero_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::from_toml(&SMALL.replace("kind = \"plane-wave\"\nangle = 0.4", "kind = \"zero\"")).unwrap();
    cfg.output.dir = dir.path().to_path_buf();
    let rec = run_case(&cfg).unwrap();
    assert_eq!(rec.report.two_norm, 0.0);
    assert_eq!(rec.report.inf_norm, 0.0);
    assert!(rec.numeric.iter().all(|z| z.norm() == 0.0));
}

#[test]
fn sweeps_need_increasing_values() {
    let dir = tempfile::tempdir().unwrap();
    let short = format!("{SMALL}\n[sweep]\nparameter = \"alpha\"\nvalues = [1e-12, 1e-10, 1e-8]\n");
    let cfg = write_config(dir.path(), "short.toml", &short);
    let o = run(&["sweep", "--config", s(&cfg), "--output-dir", s(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    let unsorted = format!("{SMALL}\n[sweep]\nparameter = \"sources\"\nvalues = [40, 32, 48, 56]\n");
    let cfg = write_config(dir.path(), "unsorted.toml", &unsorted);
    assert_eq!(run(&["sweep", "--config", s(&cfg), "--output-dir", s(dir.path())]).status.code(), Some(1));
}

#[test]
fn sweep_writes_schema_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{SMALL}\n[sweep]\nparameter = \"sources\"\nvalues = [24, 32, 40, 48, 56]\ncollocation_ratio = 1.5\n");
    let cfg = write_config(dir.path(), "sweep.toml", &text);
    let o = run(&["sweep", "--config", s(&cfg), "--output-dir", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(csv.starts_with("param,two_norm,inf_norm,learn_s,apply_s\n"));
    assert_eq!(csv.lines().count(), 6);
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("sweep.json")).unwrap()).unwrap();
    assert!(json["fit"]["rate"].as_f64().unwrap() < 0.0);
}

#[test]
fn estimate_rho_command() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL
        .replace("k = 20.0", "k = 2.0")
        .replace("kind = \"plane-wave\"\nangle = 0.4", "kind = \"point-source\"\nsource = [1.5, 0.0]");
    let cfg = write_config(dir.path(), "rho.toml", &text);
    let o = run(&["estimate-rho", "--config", s(&cfg), "--output-dir", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("rho.json")).unwrap()).unwrap();
    let rho = json["rho"].as_f64().unwrap();
    assert!((1.35..=1.65).contains(&rho), "{rho}");
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            count += 1;
        }
    }
    assert!(count >= 6);
}
