use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn rmlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmlab")).args(args).env_remove("RMLAB_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("rmlab-cli");
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    let _ = fs::remove_file(&p);
    p
}

fn export(args: &[&str], name: &str) -> PathBuf {
    let p = scratch(name);
    let mut full = vec!["export"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", p.to_str().unwrap()]);
    let o = rmlab(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn verify_builtins() {
    let o = rmlab(&["verify", "--builtin", "flip", "--d", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ybe residual"));
    assert!(stdout(&o).contains("unitarity residual"));
    assert_eq!(rmlab(&["verify", "--builtin", "r4", "--q", "1"]).status.code(), Some(0));
}

#[test]
fn verify_rejects_perturbed_file() {
    let p = export(&["--builtin", "flip", "--d", "2"], "flip.json");
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
    v["entries"][0][0] = serde_json::json!(1.001);
    fs::write(&p, v.to_string()).unwrap();
    let o = rmlab(&["verify", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("unitarity residual"));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(rmlab(&["verify", "--builtin", "nope"]).status.code(), Some(2));
    assert_eq!(rmlab(&["verify", "--builtin", "r2", "--q", "x"]).status.code(), Some(2));
    assert_eq!(rmlab(&["verify", "/definitely/not/here.json"]).status.code(), Some(2));
    assert_eq!(rmlab(&["character", "--builtin", "flip", "--word", "1,a"]).status.code(), Some(2));
    assert_eq!(rmlab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn characters() {
    let o = rmlab(&["character", "--builtin", "flip", "--d", "2", "--word", "1"]);
    assert_eq!(stdout(&o).trim(), "0.5");
    let o = rmlab(&["character", "--builtin", "trivial", "--q", "-1", "--word", "1,1"]);
    assert_eq!(stdout(&o).trim(), "1");
    let o = rmlab(&["character", "--builtin", "flip", "--d", "3", "--word", "-1,2,-1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn equivalence_of_flip_conjugate() {
    let a = export(&["--builtin", "r2", "--p", "1", "--q", "i", "--r", "-1", "--s", "arg:0.4"], "r2.json");
    let b = export(&["--builtin", "r2", "--p", "1", "--q", "-1", "--r", "i", "--s", "arg:0.4"], "r2flip.json");
    let o = rmlab(&["equivalent", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("equal up to truncation"));

    let c = export(&["--builtin", "flip", "--d", "2"], "flip2.json");
    let o = rmlab(&["equivalent", a.to_str().unwrap(), c.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("distinct on word"));
}

#[test]
fn classify_normal_position() {
    let o = rmlab(&["classify2", "--builtin", "r2", "--p", "1", "--q", "i", "--r", "-1", "--s", "1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["family"], "2");
    assert!(v["residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn classify_rejects_non_rmatrix() {
    let p = scratch("noise.json");
    let entries: Vec<serde_json::Value> = (0..16).map(|k| serde_json::json!([(k as f64 * 0.37).sin(), 0.0])).collect();
    fs::write(&p, serde_json::json!({"d": 2, "entries": entries}).to_string()).unwrap();
    let o = rmlab(&["classify2", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).is_empty());
}

#[test]
fn analyze_examples() {
    let o = rmlab(&["analyze", "--builtin", "r4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ergodic"], false);
    let dims: Vec<u64> = v["fixed_point_dims"].as_array().unwrap().iter().map(|x| x["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, [2, 4, 8, 16]);

    let o = rmlab(&["analyze", "--builtin", "trivial", "--q", "i"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rmatrix"]["trivial"], true);
    assert_eq!(v["index_bounds"]["lower_minimal"].as_f64(), Some(1.0));
    assert_eq!(v["index_bounds"]["upper_jones"].as_f64(), Some(1.0));

    let o = rmlab(&["analyze", "--builtin", "normal", "--blocks", "2:+,1:+", "--format", "md"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("| C^2 | false |"), "{}", stdout(&o));
}

#[test]
fn analyze_is_byte_identical() {
    let args = ["analyze", "--builtin", "twisted", "--d", "2", "--seed", "11"];
    let a = rmlab(&args);
    let b = rmlab(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_from_environment() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_rmlab"))
            .args(["export", "--builtin", "simple", "--d", "2"])
            .env("RMLAB_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("3"), run("3"));
    assert_ne!(run("3"), run("4"));
    assert_eq!(run("3"), rmlab(&["export", "--builtin", "simple", "--d", "2", "--seed", "3"]).stdout);
}

#[test]
fn search_without_restarts_fails() {
    let o = rmlab(&["search", "--d", "2", "--restarts", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn search_appends_solutions() {
    let p = scratch("solutions.jsonl");
    let o = rmlab(&["search", "--d", "2", "--restarts", "8", "--seed", "5", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = fs::read_to_string(&p).unwrap();
    let first = text.lines().count();
    assert!(first >= 1);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["residuals"]["objective"].as_f64().unwrap() < 1e-8);
        assert!(v["config_hash"].is_string());
        assert!(v["fingerprint"].is_object());
    }
    rmlab(&["search", "--d", "2", "--restarts", "8", "--seed", "5", "--out", p.to_str().unwrap()]);
    let text2 = fs::read_to_string(&p).unwrap();
    assert_eq!(text2.lines().count(), 2 * first);
    let (a, b) = text2.split_at(text.len());
    assert_eq!(a, b);
}

#[test]
fn table_matches() {
    let o = rmlab(&["table9", "--samples", "3", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let md = stdout(&o);
    let rows: Vec<&str> = md.lines().filter(|l| l.starts_with("| ") && !l.starts_with("| #")).collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        assert!(row.ends_with("| 3/3 | 3/3 |"), "{row}");
    }
}
