use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gglat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gglat")).args(args).env_remove("GGLAT_CACHE_DIR").output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn verify(dir: &Path, name: &str, extra: &[&str]) -> (Output, Value) {
    let out = dir.join(name);
    let mut args = vec!["verify", "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = gglat(&args);
    let report = if out.exists() { read_json(&out) } else { Value::Null };
    (o, report)
}

#[test]
fn list_contains_required_instances() {
    let o = gglat(&["list"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for (g, q) in [("GL2", 2), ("GL2", 3), ("GL2", 5), ("SL2", 3), ("SL2", 5)] {
        assert!(
            text.lines().any(|l| {
                let f: Vec<&str> = l.split_whitespace().collect();
                f.len() > 1 && f[0] == g && f[1] == q.to_string()
            }),
            "{g} {q} missing from:\n{text}"
        );
    }
}

#[test]
fn gl2_3_all_is_equal() {
    let dir = tempfile::tempdir().unwrap();
    let (o, r) = verify(dir.path(), "r.json", &["--group", "gl2", "--q", "3", "--suite", "all"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(r["verdicts"]["verdict"], "EQUAL");
    assert_eq!(r["exit_code"], 0);
    let names: Vec<&str> = r["suites"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["chartab", "dl", "curtis", "identities", "lattice"]);
    assert!(r["suites"].as_array().unwrap().iter().all(|s| s["status"] == "pass"));
    assert_eq!(r["fixed_choices"]["modulus_n"], 24);
    assert_eq!(r["schema_version"], 1);
}

#[test]
fn sl2_3_lattice_pair_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (o, r) = verify(dir.path(), "r.json", &["--group", "sl2", "--q", "3", "--pair", "--suite", "lattice", "--jobs", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(r["verdicts"]["verdict"], "EQUAL");
    assert_eq!(r["verdicts"]["routes_agree"], true);
    let lattice = r["suites"].as_array().unwrap().iter().find(|s| s["name"] == "lattice").unwrap();
    assert!(lattice["checks"].as_array().unwrap().iter().any(|c| c["name"] == "graded component descends to PGL2"));
}

#[test]
fn scaled_k_basis_is_not_equal_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let (o, r) = verify(dir.path(), "r.json", &["--group", "gl2", "--q", "3", "--scale-k-basis", "0"]);
    assert_eq!(code(&o), 1);
    assert_eq!(r["verdicts"]["verdict"], "NOT-EQUAL");
    assert_eq!(r["verdicts"]["scaled_k_basis"], serde_json::json!([0, 2]));
    let lattice = r["suites"].as_array().unwrap().iter().find(|s| s["name"] == "lattice").unwrap();
    assert_eq!(lattice["status"], "fail");
    let failed: Vec<&Value> = lattice["checks"].as_array().unwrap().iter().filter(|c| c["failed"].as_u64().unwrap() > 0).collect();
    assert!(!failed.is_empty());
    let witness = failed[0]["witnesses"][0].as_str().unwrap();
    assert!(witness.contains("(24, ["), "{witness}");
    assert!(stdout(&o).contains("NOT-EQUAL"));
}

#[test]
fn usage_and_config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    let out = out.to_str().unwrap();
    for args in [
        vec!["verify", "--group", "gl2", "--out", out],
        vec!["verify", "--group", "gl2", "--q", "3", "--suite", "bogus", "--out", out],
        vec!["verify", "--group", "pgl2", "--q", "3", "--out", out],
        vec!["verify", "--group", "gl2", "--q", "3", "--pair", "--out", out],
        vec!["verify", "--group", "gl2", "--q", "6", "--out", out],
        vec!["verify", "--group", "sl2", "--q", "2", "--out", out],
        vec!["verify", "--group", "sl2", "--q", "3", "--psi", "2", "--out", out],
        vec!["verify", "--group", "gl2", "--q", "3", "--jobs", "0", "--out", out],
        vec!["verify", "--group", "gl2", "--q", "2", "--scale-k-basis", "99", "--out", out],
        vec!["frobnicate"],
        vec!["cache", "validate"],
    ] {
        let o = gglat(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(code(&gglat(&["--help"])), 0);
    assert_eq!(code(&gglat(&["--version"])), 0);
}

#[test]
fn cache_clear_validate_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cache_s = cache.to_str().unwrap();
    let (o, r) = verify(dir.path(), "a.json", &["--group", "sl2", "--q", "3", "--suite", "chartab", "--cache-dir", cache_s]);
    assert_eq!(code(&o), 0);
    assert_eq!(r["cache"][0]["status"], "miss");
    let (_, r) = verify(dir.path(), "b.json", &["--group", "sl2", "--q", "3", "--suite", "chartab", "--cache-dir", cache_s]);
    assert_eq!(r["cache"][0]["status"], "hit");

    let o = gglat(&["cache", "validate", "--cache-dir", cache_s]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("sl2-q3.json"));

    let entry = cache.join("sl2-q3.json");
    let mut file: Value = read_json(&entry);
    file["characters"][3][1][0] = Value::String("5".into());
    std::fs::write(&entry, file.to_string()).unwrap();
    let o = gglat(&["cache", "validate", "--cache-dir", cache_s]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("CacheCorrupt"), "{}", stdout(&o));

    let (o, r) = verify(dir.path(), "c.json", &["--group", "sl2", "--q", "3", "--suite", "chartab", "--cache-dir", cache_s]);
    assert_eq!(code(&o), 0);
    assert_eq!(r["cache"][0]["status"], "corrupt-recomputed");
    assert_eq!(code(&gglat(&["cache", "validate", "--cache-dir", cache_s])), 0);

    let o = gglat(&["cache", "clear", "--cache-dir", cache_s]);
    assert_eq!(code(&o), 0);
    let o = gglat(&["cache", "validate", "--cache-dir", cache_s]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("empty"));
}

#[test]
fn reports_are_deterministic_except_timings() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for (name, cache) in [("a.json", "c1"), ("b.json", "c2")] {
        let cache = dir.path().join(cache);
        let (o, _) = verify(dir.path(), name, &["--group", "sl2", "--q", "5", "--jobs", "3", "--cache-dir", cache.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        let cut = text.find("\"timings\"").expect("timings last");
        texts.push(text[..cut].to_string());
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn chartab_suite_runs_alone() {
    let dir = tempfile::tempdir().unwrap();
    let (o, r) = verify(dir.path(), "r.json", &["--group", "gl2", "--q", "5", "--suite", "chartab"]);
    assert_eq!(code(&o), 0);
    assert_eq!(r["suites"].as_array().unwrap().len(), 1);
    assert!(r["verdicts"].is_null());
}
