use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ocbt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ocbt")).args(args).output().unwrap()
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, json).unwrap();
    p.display().to_string()
}

#[test]
fn complexity_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "tab1.json", r#"{"experiment": "complexity", "params": {"M": 1024, "K": 4, "cp_len": 256}}"#);
    let out = ocbt(&["complexity", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("complexity.csv")).unwrap();
    assert_eq!(csv, "system,cm\nOCBT,6144\nOFDM,5120\nFBMC,10240\nW-OFDM,6720\n");
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 4);
}

#[test]
fn timeeff_ocbt_column_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "fig3.json", r#"{"experiment": "timeeff"}"#);
    let out = ocbt(&["timeeff", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("timeeff.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("system,N,r_T"));
    let ocbt_rows: Vec<&str> = lines.filter(|l| l.starts_with("OCBT,")).collect();
    assert_eq!(ocbt_rows.len(), 64);
    assert!(ocbt_rows.iter().all(|l| l.ends_with(",1.0")));
    assert!(csv.contains("CP-OFDM,1,0.8\n"));
    assert!(csv.contains("W-OFDM,1,0.64\n"));
}

#[test]
fn window_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = ocbt(&["window", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("window.csv")).unwrap();
    let vals: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(vals.len(), 1024);
    assert_eq!(vals.iter().filter(|&&v| v == 1.0).count(), 700);
}

#[test]
fn missing_config_exits_2() {
    let out = ocbt(&["ber", "--config", "/nonexistent/missing.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("missing.json"));
}

#[test]
fn bad_fields_exit_2_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"params": {"M": 64, "K": 3}}"#, "params"),
        (r#"{"snr_grid_db": []}"#, "snr_grid_db"),
        (r#"{"systems": ["FBMC"]}"#, "systems"),
        (r#"{"experiment": "psd"}"#, "experiment"),
        (r#"{"snr_grid": [1]}"#, "snr_grid"),
    ];
    for (i, (json, field)) in cases.iter().enumerate() {
        let cfg = write_config(dir.path(), &format!("c{i}.json"), json);
        let out = ocbt(&["ber", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{json}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains(field), "{err} lacks {field}");
    }
    assert!(!dir.path().join("ber.csv").exists());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(ocbt(&["plot"]).status.code(), Some(2));
    assert_eq!(ocbt(&["ber", "--seed", "x"]).status.code(), Some(2));
    assert_eq!(ocbt(&["--help"]).status.code(), Some(0));
}

#[test]
fn runtime_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    // a file where the output directory should be
    let blocker = dir.path().join("out");
    fs::write(&blocker, "").unwrap();
    let out = ocbt(&["complexity", "--out", blocker.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn seed_flag_changes_ber_and_repeats_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "ber.json",
        r#"{"params": {"M": 64, "L": 20, "sample_rate": 3.84e6}, "systems": ["OCBT"],
            "snr_grid_db": [5], "max_bits": 20000}"#,
    );
    let run = |seed: &str, sub: &str| {
        let d = dir.path().join(sub);
        let out = ocbt(&["ber", "--config", &cfg, "--seed", seed, "--out", d.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        fs::read(d.join("ber.csv")).unwrap()
    };
    let a = run("1", "a");
    assert_eq!(a, run("1", "b"));
    assert_ne!(a, run("2", "c"));
}
