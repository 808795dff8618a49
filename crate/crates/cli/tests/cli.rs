//! CLI contract tests: validation messages, error lines, config echo.

use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_tauclock")
}

fn write_config(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn missing_barrier_is_reported_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "missing.json",
        r#"{ "kind": "taudist",
             "packet": { "p0": 1.0, "dp": 0.05, "x_c": -20.0 },
             "detection": { "x": 30.0, "t_total": 60.0 } }"#,
    );
    let out = Command::new(bin())
        .args(["validate", "--config", &cfg])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("barrier"), "stderr: {stderr}");
    assert!(stderr.contains("kind=invalid-config"), "stderr: {stderr}");
}

#[test]
fn negative_width_is_reported_with_field_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "negd.json",
        r#"{ "kind": "taudist",
             "packet": { "p0": 1.0, "dp": 0.05, "x_c": -20.0 },
             "barrier": { "v": 2.0, "d": -5.0 },
             "detection": { "x": 30.0, "t_total": 60.0 } }"#,
    );
    let out = Command::new(bin())
        .args(["validate", "--config", &cfg])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("barrier.d"), "stderr: {stderr}");
}

#[test]
fn all_problems_are_collected_not_first_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "multi.json",
        r#"{ "kind": "taudist",
             "packet": { "p0": 1.0, "dp": -0.05, "x_c": -20.0 },
             "detection": { "x": 30.0, "t_total": -60.0 } }"#,
    );
    let out = Command::new(bin())
        .args(["validate", "--config", &cfg])
        .output()
        .unwrap();
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("packet.dp"), "stderr: {stderr}");
    assert!(stderr.contains("detection.t_total"), "stderr: {stderr}");
    assert!(stderr.contains("barrier"), "stderr: {stderr}");
    assert!(stderr.contains("count=3"), "stderr: {stderr}");
}

#[test]
fn valid_config_echoes_normalised_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "minimal.json",
        r#"{ "kind": "taudist",
             "packet": { "p0": 1.0, "dp": 0.05, "x_c": -20.0 },
             "barrier": { "v": 2.0, "d": 5.0 },
             "detection": { "x": 30.0, "t_total": 60.0 } }"#,
    );
    let out = Command::new(bin())
        .args(["validate", "--config", &cfg])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    // defaults filled in and echoed: grid size, taper, window centre on the
    // barrier height, packet grid defaults
    assert!(stdout.contains("\"n_lambda\": 4096"), "stdout: {stdout}");
    assert!(stdout.contains("\"taper_fraction\": 0.1"), "stdout: {stdout}");
    assert!(stdout.contains("\"center\": -2.0"), "stdout: {stdout}");
    assert!(stdout.contains("\"n_points\": 512"), "stdout: {stdout}");
    assert!(stdout.contains("\"mu\": 1.0"), "stdout: {stdout}");
}

#[test]
fn unused_sections_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "extra.json",
        r#"{ "kind": "oracle",
             "lattice": { "n_sites": 2, "region": [1], "n_steps": 2, "dt": 1.0, "end": 1,
                          "hop": [[[0.955336489125606, 0.0], [0.0, -0.29552020666133955]],
                                  [[0.0, -0.29552020666133955], [0.955336489125606, 0.0]]] },
             "packet": { "p0": 1.0, "dp": 0.05, "x_c": -20.0 } }"#,
    );
    let out = Command::new(bin())
        .args(["validate", "--config", &cfg])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("packet: not used by kind oracle"), "stderr: {stderr}");
}

#[test]
fn degenerate_interferometer_fails_with_machine_readable_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "degen.json",
        r#"{ "kind": "interferometer",
             "interferometer": { "g1": [1.0, 0.0], "g2": [-1.0, 0.0],
                                 "tau1": 1.0, "tau2": 3.0,
                                 "omega_l": 0.001, "t_total": 4.0 } }"#,
    );
    let out = Command::new(bin())
        .args(["interferometer", "--config", &cfg])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("kind=degenerate-transition"),
        "stderr: {stderr}"
    );
}

#[test]
fn subcommand_must_match_config_kind() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "kind.json",
        r#"{ "kind": "oracle",
             "lattice": { "n_sites": 2, "region": [1], "n_steps": 2, "dt": 1.0, "end": 1,
                          "hop": [[[0.955336489125606, 0.0], [0.0, -0.29552020666133955]],
                                  [[0.0, -0.29552020666133955], [0.955336489125606, 0.0]]] } }"#,
    );
    let out = Command::new(bin())
        .args(["taudist", "--config", &cfg])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("kind"), "stderr: {stderr}");
}

#[test]
fn oracle_run_reports_discrepancy_line() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("orc").to_string_lossy().into_owned();
    let scenario = format!(
        "{}/../../scenarios/oracle_two_site.json",
        env!("CARGO_MANIFEST_DIR")
    );
    let out = Command::new(bin())
        .args(["oracle", "--config", &scenario, "--out", &prefix])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("max_discrepancy = "), "stdout: {stdout}");
    assert!(stdout.contains("within_tolerance = true"), "stdout: {stdout}");
    let csv = std::fs::read_to_string(format!("{prefix}.csv")).unwrap();
    assert!(csv.contains("n,tau,re_a,im_a,abs_a"));
}

#[test]
fn free_semiclassical_summary_reports_classical_time() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("free").to_string_lossy().into_owned();
    let scenario = format!(
        "{}/../../scenarios/free_classical.json",
        env!("CARGO_MANIFEST_DIR")
    );
    let out = Command::new(bin())
        .args(["taudist", "--config", &scenario, "--out", &prefix])
        .output()
        .unwrap();
    assert!(out.status.success());
    let summary = std::fs::read_to_string(format!("{prefix}.summary.txt")).unwrap();
    let re_tau: f64 = summary
        .lines()
        .find_map(|l| l.strip_prefix("re_tau_moment = "))
        .expect("summary has re_tau_moment")
        .parse()
        .unwrap();
    // classical crossing time μ d / p0 = 5 within 2%
    assert!(
        (re_tau - 5.0).abs() < 0.02 * 5.0,
        "re_tau_moment = {re_tau}"
    );
    assert!(summary.contains("converged = true"), "summary: {summary}");
}

#[test]
fn non_positive_momentum_grid_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "slowpacket.json",
        r#"{ "kind": "taudist",
             "packet": { "p0": 0.2, "dp": 0.05, "x_c": -20.0 },
             "barrier": { "v": 2.0, "d": 5.0 },
             "detection": { "x": 30.0, "t_total": 60.0 } }"#,
    );
    let out = Command::new(bin())
        .args(["validate", "--config", &cfg])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("packet.p0"), "stderr: {stderr}");
}

#[test]
fn worker_cap_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = format!(
        "{}/../../scenarios/oracle_three_site.json",
        env!("CARGO_MANIFEST_DIR")
    );
    let run = |threads: &str, tag: &str| {
        let prefix = dir.path().join(tag).to_string_lossy().into_owned();
        let out = Command::new(bin())
            .env("TAUCLOCK_THREADS", threads)
            .args(["oracle", "--config", &scenario, "--out", &prefix])
            .output()
            .unwrap();
        assert!(out.status.success());
        std::fs::read(format!("{prefix}.csv")).unwrap()
    };
    assert_eq!(run("1", "a"), run("4", "b"));
}
