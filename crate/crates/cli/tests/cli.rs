use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = r#"{"energy": -1.0, "alpha": 6.283185307179586,
    "grid": {"r_min": 0.1, "r_max": 10.0, "n_radial": 6, "n_angular": 3}}"#;

fn moutard(dir: &Path, config: &str, args: &[&str], threads: Option<&str>) -> Output {
    let cfg = dir.join("cfg.json");
    std::fs::write(&cfg, config).unwrap();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_moutard"));
    cmd.args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"));
    match threads {
        Some(t) => cmd.env("MOUTARD_THREADS", t),
        None => cmd.env_remove("MOUTARD_THREADS"),
    };
    cmd.output().unwrap()
}

fn read(dir: &Path, file: &str) -> String {
    std::fs::read_to_string(dir.join("out").join(file)).unwrap()
}

#[test]
fn green_table_has_the_documented_header() {
    let tmp = tempfile::tempdir().unwrap();
    let out = moutard(tmp.path(), SMALL, &["green"], None);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = read(tmp.path(), "green_samples.csv");
    let mut lines = csv.split('\n');
    assert_eq!(
        lines.next(),
        Some("re_lambda,im_lambda,abs_z,arg_z,g_direct,g_shift,err_direct,err_shift,agree")
    );
    assert!(!csv.contains('\r'));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 9);
    let mantissa = row[4].split('e').next().unwrap().trim_start_matches('-');
    assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
    let summary: serde_json::Value =
        serde_json::from_str(&read(tmp.path(), "green_summary.json")).unwrap();
    assert_eq!(summary["command"], "green");
    assert_eq!(summary["passed"], true);
}

#[test]
fn stdout_reports_each_check() {
    let tmp = tempfile::tempdir().unwrap();
    let out = moutard(tmp.path(), SMALL, &["create"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 5);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
    assert!(text.contains("B_tilde_vs_point_rel"));
}

#[test]
fn annihilation_reports_a_vanishing_coefficient() {
    let tmp = tempfile::tempdir().unwrap();
    let out = moutard(
        tmp.path(),
        SMALL,
        &["annihilate", "--alpha", "3.141592653589793"],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let summary: serde_json::Value =
        serde_json::from_str(&read(tmp.path(), "annihilate_summary.json")).unwrap();
    let check = summary["summary"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "B_tilde_max_abs")
        .unwrap();
    assert!(check["value"].as_f64().unwrap() <= 1e-12);
    assert_eq!(summary["params"]["alpha"], std::f64::consts::PI);
}

#[test]
fn thread_count_does_not_change_output() {
    let one = tempfile::tempdir().unwrap();
    let many = tempfile::tempdir().unwrap();
    for args in [&["green"][..], &["check", "dbar"][..]] {
        assert_eq!(
            moutard(one.path(), SMALL, args, Some("1")).status.code(),
            Some(0)
        );
        assert_eq!(
            moutard(many.path(), SMALL, args, Some("4")).status.code(),
            Some(0)
        );
    }
    for file in [
        "green_samples.csv",
        "green_bessel.csv",
        "check_dbar_orders.csv",
        "check_dbar_points.csv",
    ] {
        assert_eq!(read(one.path(), file), read(many.path(), file), "{file}");
    }
}

#[test]
fn path_mode_emits_path_and_loop_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = r#"{"alpha": 6.283185307179586, "omega_mode": "path_integrated",
        "grid": {"r_min": 0.1, "r_max": 10.0, "n_radial": 4, "n_angular": 2}}"#;
    let out = moutard(tmp.path(), cfg, &["check", "omega"], None);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(read(tmp.path(), "check_omega_path.csv").lines().count() > 1);
    assert!(read(tmp.path(), "check_omega_loops.csv").lines().count() > 1);
}

#[test]
fn flags_override_the_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let out = moutard(
        tmp.path(),
        SMALL,
        &[
            "spectrum",
            "--energy",
            "-4",
            "--alpha",
            "3.141592653589793",
            "--fd-step",
            "0.005",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let summary: serde_json::Value =
        serde_json::from_str(&read(tmp.path(), "spectrum_summary.json")).unwrap();
    assert_eq!(summary["params"]["energy"], -4.0);
    assert_eq!(summary["params"]["fd_step"], 0.005);
    let s = 4.0 - 4f64.ln();
    let radii = summary["details"]["singular_radii"].as_array().unwrap();
    assert!((radii[1].as_f64().unwrap() - (s / 2.0).exp()).abs() < 1e-12);
}

#[test]
fn regular_coupling_has_no_singular_radii() {
    let tmp = tempfile::tempdir().unwrap();
    let out = moutard(tmp.path(), SMALL, &["spectrum", "--alpha", "-3"], None);
    assert_eq!(out.status.code(), Some(0));
    let summary: serde_json::Value =
        serde_json::from_str(&read(tmp.path(), "spectrum_summary.json")).unwrap();
    assert_eq!(summary["details"]["regular"], true);
    assert_eq!(read(tmp.path(), "spectrum_radii.csv").lines().count(), 1);
}

#[test]
fn configuration_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cases: [(&str, &[&str], Option<&str>); 6] = [
        (r#"{"energy": -1.0}"#, &["spectrum"], None),
        (r#"{"z_samples": [[0.0, 0.0]]}"#, &["green"], None),
        (r#"{"fd_step": 0.5}"#, &["green"], None),
        (r#"{"unknown": 1}"#, &["green"], None),
        (SMALL, &["green"], Some("zero")),
        (SMALL, &["green"], Some("0")),
    ];
    for (cfg, args, threads) in cases {
        let out = moutard(tmp.path(), cfg, args, threads);
        assert_eq!(out.status.code(), Some(2), "{cfg} {args:?} {threads:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unwritable_output_is_a_configuration_error() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("out"), "a file, not a directory").unwrap();
    assert_eq!(
        moutard(tmp.path(), SMALL, &["green"], None).status.code(),
        Some(2)
    );
}

#[test]
fn quadrature_failure_exits_with_three() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = r#"{"quadrature": {"rel_tol": 1e-15, "abs_tol": 1e-300, "max_subdivisions": 1}}"#;
    let out = moutard(tmp.path(), cfg, &["green"], None);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("did not converge"));
}

#[test]
fn failing_check_exits_with_four_and_still_writes_output() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = r#"{"alpha": 6.283185307179586, "grid": {"r_min": 0.1, "r_max": 10.0, "n_radial": 6, "n_angular": 3},
        "seed_overrides": {"psi_f": {"plus": 0.5, "minus": 0.5}}}"#;
    let out = moutard(tmp.path(), cfg, &["create"], None);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL psi_tilde_green_budget"));
    let summary: serde_json::Value =
        serde_json::from_str(&read(tmp.path(), "create_summary.json")).unwrap();
    assert_eq!(summary["passed"], false);
}
