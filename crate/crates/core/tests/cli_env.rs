use std::process::Command;

#[test]
fn cache_dir_defaults_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("env-cache");
    let out = dir.path().join("r.json");
    let status = Command::new(env!("CARGO_BIN_EXE_gglat"))
        .args(["verify", "--group", "gl2", "--q", "2", "--suite", "chartab", "--out", out.to_str().unwrap()])
        .env("GGLAT_CACHE_DIR", &cache)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(cache.join("gl2-q2.json").exists());

    let o = Command::new(env!("CARGO_BIN_EXE_gglat")).args(["cache", "validate"]).env("GGLAT_CACHE_DIR", &cache).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("gl2-q2.json"));
}
