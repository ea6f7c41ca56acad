//! End-to-end checks of the `retrosense` binary: schema printing, config
//! validation with field paths, sweep output determinism, and exit codes.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_retrosense"))
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("retrosense-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn schema_prints_config_format() {
    let out = bin().arg("schema").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("protocol"));
    assert!(text.contains("[grid]"));
    assert!(text.contains("agnostic-dephasing"));
}

#[test]
fn empty_grid_is_a_schema_error() {
    let dir = workdir("schema-err");
    let cfg = dir.join("bad.toml");
    std::fs::write(&cfg, "protocol = \"echo\"\n[grid]\n").unwrap();
    let out = bin()
        .arg("echo")
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("grid"), "stderr: {err}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn config_protocol_must_match_subcommand() {
    let dir = workdir("mismatch");
    let cfg = dir.join("agnostic.toml");
    std::fs::write(
        &cfg,
        "protocol = \"agnostic\"\n[grid]\nalpha = { list = [0.4] }\n",
    )
    .unwrap();
    let out = bin()
        .arg("echo")
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("agnostic"), "stderr: {err}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn sweep_is_deterministic_including_sampling() {
    let dir = workdir("sweep");
    let cfg = dir.join("agnostic.toml");
    std::fs::write(
        &cfg,
        "protocol = \"agnostic\"\nseed = 3\n[grid]\nalpha = { start = 0.2, stop = 1.2, count = 5 }\n",
    )
    .unwrap();
    let run = |out_dir: &PathBuf| {
        let out = bin()
            .arg("agnostic")
            .arg("--config")
            .arg(&cfg)
            .arg("--out")
            .arg(out_dir)
            .arg("--shots")
            .arg("200")
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        std::fs::read(out_dir.join("agnostic_records.csv")).unwrap()
    };
    let a = run(&dir.join("a"));
    let b = run(&dir.join("b"));
    assert_eq!(a, b, "identical config + seed must give identical bytes");
    let text = String::from_utf8(a).unwrap();
    assert!(text.lines().count() == 6, "header + 5 records");
    assert!(text.contains("empirical"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn out_dir_env_var_wins() {
    let dir = workdir("envdir");
    let cfg = dir.join("naive.toml");
    std::fs::write(
        &cfg,
        "protocol = \"naive\"\n[grid]\nalpha = { list = [0.7] }\n[output]\ndir = \"ignored\"\n",
    )
    .unwrap();
    let env_out = dir.join("from-env");
    let out = bin()
        .arg("naive")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("from-flag"))
        .env("RETROSENSE_OUT", &env_out)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(env_out.join("naive_records.csv").exists());
    assert!(!dir.join("from-flag").exists());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn repo_scenario_configs_parse_and_run() {
    // Every checked-in scenario file must parse; run the cheapest one.
    let config_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut found = 0;
    for entry in std::fs::read_dir(&config_dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) == Some("toml") {
            let text = std::fs::read_to_string(&path).unwrap();
            retrosense::harness::parse_config(&text, None)
                .unwrap_or_else(|e| panic!("{} failed to parse: {e}", path.display()));
            found += 1;
        }
    }
    assert!(
        found >= 11,
        "expected one config per protocol, found {found}"
    );

    let dir = workdir("repo-config");
    let out = bin()
        .arg("positronium")
        .arg("--config")
        .arg(config_dir.join("positronium.toml"))
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.join("positronium_records.csv")).unwrap();
    assert!(csv.lines().count() > 1);
    let _ = std::fs::remove_dir_all(&dir);
}
