//! End-to-end command-line behavior: grammar, exit codes, output formats,
//! seeding.

use std::process::Command;

fn hmlab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hmlab"))
}

#[test]
fn estimate_koebe_json_includes_exact_columns() {
    let out = hmlab()
        .args([
            "estimate", "--domain", "koebe", "--R", "1", "--quantity", "both", "--samples",
            "20000", "--seed", "7", "--out", "json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["scenario"], "estimate");
    assert_eq!(v["domain"], "koebe");
    let row = &v["rows"][0];
    let hat = row["omega_hat"].as_f64().unwrap();
    let hat_se = row["omega_hat_stderr"].as_f64().unwrap();
    assert!((hat - 0.590334470602).abs() <= 4.0 * hat_se);
    let om = row["omega"].as_f64().unwrap();
    let om_se = row["omega_stderr"].as_f64().unwrap();
    assert!((om - 1.0 / 3.0).abs() <= 4.0 * om_se);
    assert!((row["diagnostics"]["exact_omega_hat"].as_f64().unwrap() - 0.590334470602).abs() < 1e-9);
    assert!((row["diagnostics"]["exact_omega"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
    assert_eq!(row["seed"].as_u64().unwrap(), 7);
}

#[test]
fn json_round_trips_stored_doubles_bit_exactly() {
    let out = hmlab()
        .args([
            "estimate", "--domain", "slit-disk:a=0.5", "--R", "1", "--quantity", "omega",
            "--samples", "5000", "--seed", "3", "--out", "json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let row = &v["rows"][0];
    // The stored values are pre-rounded to nine significant digits, so the
    // parsed doubles are fixed points of that rounding.
    for key in ["omega", "omega_stderr"] {
        let x = row[key].as_f64().unwrap();
        let again: f64 = format!("{x:.8e}").parse().unwrap();
        assert_eq!(x.to_bits(), again.to_bits(), "{key} not a 9-digit fixed point");
    }
}

#[test]
fn csv_has_fixed_header_and_nine_digit_floats() {
    let out = hmlab()
        .args([
            "estimate", "--domain", "disk", "--R", "2", "--quantity", "omega", "--samples",
            "2000", "--seed", "1",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "R,omega_hat,omega_hat_stderr,omega,omega_stderr,ratio,ratio_lo,ratio_hi,ambiguous_frac,timeout_frac,seed"
    );
    let row = lines.next().unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields.len(), 11);
    assert_eq!(fields[0], "2.00000000e0");
    assert_eq!(fields[1], "nan"); // omega-hat not requested
    assert_eq!(fields[3], "0.00000000e0"); // no boundary at |z| >= 2
    assert_eq!(fields[10], "1");
    assert!(lines.next().is_none());
}

#[test]
fn sweep_exact_reports_ratio_tail() {
    let out = hmlab()
        .args(["sweep", "--domain", "koebe", "--R", "1e2,1e3,1e4", "--exact"])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let ratios: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(5).unwrap().parse().unwrap())
        .collect();
    assert_eq!(ratios.len(), 3);
    assert!((ratios[0] - 1.9975026).abs() < 1e-6);
    assert!((ratios[2] - 2.0).abs() < (ratios[1] - 2.0).abs());
}

#[test]
fn usage_errors_exit_2() {
    let unknown_flag = hmlab().args(["estimate", "--bogus"]).output().unwrap();
    assert_eq!(unknown_flag.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown_flag.stderr).starts_with("error:"));

    let bad_domain = hmlab()
        .args(["estimate", "--domain", "annulus", "--R", "1", "--samples", "10"])
        .output()
        .unwrap();
    assert_eq!(bad_domain.status.code(), Some(2));

    let bad_levels = hmlab()
        .args(["estimate", "--domain", "ce1:levels=9", "--R", "1", "--samples", "10"])
        .output()
        .unwrap();
    assert_eq!(bad_levels.status.code(), Some(2));

    let sweep_wrong_domain = hmlab()
        .args(["sweep", "--domain", "disk", "--R", "1,2", "--exact"])
        .output()
        .unwrap();
    assert_eq!(sweep_wrong_domain.status.code(), Some(2));
}

#[test]
fn undersampled_counterexample_exits_4() {
    let out = hmlab()
        .args(["counterexample", "--domain", "ce1", "--ns", "1", "--samples", "20000", "--seed", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error:"), "stderr: {err}");
    assert!(err.contains("insufficient samples"));
}

#[test]
fn env_seed_is_default_and_flag_wins() {
    let args =
        ["estimate", "--domain", "disk", "--R", "0.5", "--quantity", "omega", "--samples", "3000"];
    let with_env = hmlab().args(args).env("HMLAB_SEED", "777").output().unwrap();
    let with_flag = hmlab().args(args).args(["--seed", "777"]).output().unwrap();
    assert_eq!(with_env.stdout, with_flag.stdout);
    // Flag beats the environment.
    let flag_wins = hmlab()
        .args(args)
        .args(["--seed", "9"])
        .env("HMLAB_SEED", "777")
        .output()
        .unwrap();
    let seed_field = String::from_utf8(flag_wins.stdout)
        .unwrap()
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(10)
        .unwrap()
        .to_string();
    assert_eq!(seed_field, "9");
    let bad_env = hmlab().args(args).env("HMLAB_SEED", "not-a-number").output().unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn identical_argv_gives_identical_bytes() {
    let args = [
        "markov", "--samples", "20000", "--seed", "11", "--out", "json",
    ];
    let a = hmlab().args(args).output().unwrap();
    let b = hmlab().args(args).output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn markov_and_validate_commands_pass() {
    let markov = hmlab().args(["markov", "--samples", "30000", "--seed", "2"]).output().unwrap();
    assert!(markov.status.success());
    let validate = hmlab()
        .args(["validate", "--samples", "30000", "--seed", "2"])
        .output()
        .unwrap();
    assert!(
        validate.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&validate.stderr)
    );
    let text = String::from_utf8(validate.stdout).unwrap();
    assert_eq!(text.lines().count(), 10); // header + 9 grid cells
}
