use std::path::Path;
use std::process::Command;

fn slowbond(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_slowbond"))
        .current_dir(dir)
        .env("RUST_LOG", "warn")
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("slowbond-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn kappa_writes_tables_and_exits_zero() {
    let dir = scratch("kappa");
    let out = slowbond(
        &dir,
        &[
            "kappa",
            "--r",
            "0.5",
            "--n",
            "50",
            "--replicas",
            "3",
            "--seed",
            "7",
            "--out-dir",
            "o",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("o/kappa_sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.lines().skip(1).all(|l| l.starts_with("7,")));
}

#[test]
fn invariant_check_exit_code_follows_the_verdict() {
    let dir = scratch("inv");
    std::fs::write(
        dir.join("pinned.json"),
        r#"{"left_tail": 0.8, "segments": [{"x": 0.0, "density": 0.2}]}"#,
    )
    .unwrap();
    std::fs::write(
        dir.join("moved.json"),
        r#"{"left_tail": 0.8, "segments": [{"x": 0.5, "density": 0.2}]}"#,
    )
    .unwrap();
    let ok = slowbond(
        &dir,
        &["invariant-check", "--profile", "pinned.json", "--lambda0", "0.64"],
    );
    assert_eq!(ok.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(report["invariant"], true);
    let bad = slowbond(
        &dir,
        &["invariant-check", "--profile", "moved.json", "--lambda0", "0.64"],
    );
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn config_runs_honour_seed_override_and_reject_bad_input() {
    let dir = scratch("cfg");
    std::fs::write(
        dir.join("pc.json"),
        r#"{"rho": 0.2, "r": 1.0, "sites": 100, "burn_in": 10, "horizon": 200, "seed": 1,
            "checks": [{"bond": 0, "tolerance": 0.5}]}"#,
    )
    .unwrap();
    let out = slowbond(
        &dir,
        &[
            "paircorr",
            "--config",
            "pc.json",
            "--seed",
            "9",
            "--threads",
            "1",
            "--out-dir",
            "o",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("o/paircorr.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.starts_with("9,")));

    let wrong = slowbond(&dir, &["compare", "--config", "pc.json"]);
    assert_eq!(wrong.status.code(), Some(2));
    let missing = slowbond(&dir, &["invariance", "--config", "nope.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn simulate_writes_series_and_snapshot() {
    let dir = scratch("sim");
    let out = slowbond(
        &dir,
        &[
            "simulate",
            "--r",
            "0.5",
            "--rho",
            "0.3",
            "--n",
            "40",
            "--t",
            "0.5",
            "--windows=-1:0,0:1",
            "--steps",
            "2",
            "--measure",
            "density",
            "--snapshot",
            "s.bin",
            "--out-dir",
            "o",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("o/simulate.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "seed,config_hash,t,a,b,density");
    assert_eq!(csv.lines().count(), 1 + 3 * 2);
    assert!(std::fs::read(dir.join("s.bin")).unwrap().starts_with(b"TSNP"));
}
