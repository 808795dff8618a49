//! Scenario execution: deterministic CSV artifacts plus a key = value
//! summary, identical on stdout and in `<prefix>.summary.txt`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use tauclock_core::export::fmt_f64;
use tauclock_core::larmor_clock::{
    baz_angles, detection_probability, final_spin_state_spectral,
};
use tauclock_core::lattice_oracle::equivalence_report;
use tauclock_core::scattering::lambda_amplitude;
use tauclock_core::tau_amplitude::{
    complex_time, complex_time_by_derivative, invert_to_tau, lambda_scan_centered,
    sum_rule_check, Taper,
};
use tauclock_core::interferometer::{precession_angles, weak_mean_time};

use crate::config::{build_barrier, build_interferometer, build_lattice, build_packet, build_spin, Kind, ScenarioConfig};

pub struct RunOutput {
    pub summary: String,
    pub files: Vec<PathBuf>,
}

/// Execute a validated scenario. `out_prefix` overrides the config's output
/// prefix when given.
pub fn run_scenario(
    config: &ScenarioConfig,
    out_prefix: Option<&str>,
) -> tauclock_core::Result<RunOutput> {
    let prefix = out_prefix.unwrap_or(&config.output).to_string();
    match config.kind {
        Kind::Taudist => run_taudist(config, &prefix),
        Kind::Clock => run_clock(config, &prefix),
        Kind::Interferometer => run_interferometer(config, &prefix),
        Kind::Oracle => run_oracle(config, &prefix),
    }
}

fn config_header(config: &ScenarioConfig) -> String {
    let echo = serde_json::to_string(config).expect("config serialises");
    format!("# config = {echo}")
}

fn write_file(path: &Path, contents: &str) -> tauclock_core::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(io_err)?;
        }
    }
    let mut f = fs::File::create(path).map_err(io_err)?;
    f.write_all(contents.as_bytes()).map_err(io_err)?;
    Ok(())
}

fn io_err(e: std::io::Error) -> tauclock_core::Error {
    tauclock_core::Error::InvalidInput(format!("io error: {e}"))
}

fn basename(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn run_taudist(config: &ScenarioConfig, prefix: &str) -> tauclock_core::Result<RunOutput> {
    let packet = build_packet(config.packet.as_ref().expect("validated"))?;
    let barrier = build_barrier(config.barrier.as_ref().expect("validated"))?;
    let det = config.detection.as_ref().expect("validated");
    let grid = config.lambda_grid.as_ref().expect("validated");

    let scan = lambda_scan_centered(
        &packet,
        &barrier,
        det.x,
        det.t_total,
        grid.lambda_max,
        grid.n_lambda,
        grid.center,
    )?;
    let dist = invert_to_tau(
        &scan,
        det.t_total,
        Taper::RaisedCosine {
            fraction: grid.taper_fraction,
        },
    )?;

    let a0 = lambda_amplitude(&packet, &barrier, 0.0, det.x, det.t_total)?.value;
    let sum = sum_rule_check(&dist);
    let sum_rel = (sum - a0).norm() / a0.norm().max(1e-300);
    let tau_moment = complex_time(&dist)?;
    let tau_deriv = complex_time_by_derivative(&packet, &barrier, det.x, det.t_total, 1e-3)?;
    let mutual = (tau_moment.as_complex() - tau_deriv.as_complex()).norm()
        / tau_deriv.modulus().max(1e-300);

    let csv_path = PathBuf::from(format!("{prefix}.csv"));
    let mut csv = Vec::new();
    writeln!(csv, "{}", config_header(config)).map_err(io_err)?;
    dist.write_csv(&mut csv).map_err(io_err)?;
    write_file(&csv_path, std::str::from_utf8(&csv).expect("utf8"))?;

    let mut s = String::new();
    let _ = writeln!(s, "id = {}", config.id);
    let _ = writeln!(s, "kind = taudist");
    let _ = writeln!(s, "file = {}", basename(&csv_path));
    let _ = writeln!(s, "tunnelling_ready = {}", barrier
        .uniform_height()
        .map(|v| packet.tunnels_below(v))
        .unwrap_or(false));
    let _ = writeln!(s, "leakage_ratio = {}", fmt_f64(dist.leakage_ratio()));
    let _ = writeln!(s, "converged = {}", dist.is_converged());
    let _ = writeln!(s, "sum_rule_rel_err = {}", fmt_f64(sum_rel));
    let _ = writeln!(s, "re_tau_moment = {}", fmt_f64(tau_moment.re));
    let _ = writeln!(s, "im_tau_moment = {}", fmt_f64(tau_moment.im));
    let _ = writeln!(s, "abs_tau_moment = {}", fmt_f64(tau_moment.modulus()));
    let _ = writeln!(s, "re_tau_derivative = {}", fmt_f64(tau_deriv.re));
    let _ = writeln!(s, "im_tau_derivative = {}", fmt_f64(tau_deriv.im));
    let _ = writeln!(s, "abs_tau_derivative = {}", fmt_f64(tau_deriv.modulus()));
    let _ = writeln!(s, "moment_vs_derivative_rel = {}", fmt_f64(mutual));
    let _ = writeln!(
        s,
        "abs_tau_over_t_total = {}",
        fmt_f64(tau_deriv.modulus() / det.t_total)
    );
    let _ = writeln!(
        s,
        "exceeds_t_total = {}",
        tau_deriv.modulus() > det.t_total
    );

    let summary_path = PathBuf::from(format!("{prefix}.summary.txt"));
    write_file(&summary_path, &s)?;
    Ok(RunOutput {
        summary: s,
        files: vec![csv_path, summary_path],
    })
}

fn run_clock(config: &ScenarioConfig, prefix: &str) -> tauclock_core::Result<RunOutput> {
    let packet = build_packet(config.packet.as_ref().expect("validated"))?;
    let barrier = build_barrier(config.barrier.as_ref().expect("validated"))?;
    let det = config.detection.as_ref().expect("validated");
    let clock = config.clock.as_ref().expect("validated");

    let gamma = build_spin(&clock.gamma, clock.two_j)
        .map_err(tauclock_core::Error::InvalidInput)?;
    let probes: Vec<_> = clock
        .probes
        .iter()
        .map(|p| build_spin(p, clock.two_j).map_err(tauclock_core::Error::InvalidInput))
        .collect::<tauclock_core::Result<_>>()?;

    let tau_ref =
        complex_time_by_derivative(&packet, &barrier, det.x, det.t_total, clock.delta_lambda)?;

    let csv_path = PathBuf::from(format!("{prefix}.csv"));
    let mut csv = String::new();
    let _ = writeln!(csv, "{}", config_header(config));
    let _ = writeln!(csv, "# reference tau from the shift-derivative pipeline");
    let mut header =
        String::from("scenario,omega_l,delta_phi,delta_theta,re_tau,im_tau,abs_tau");
    for i in 0..probes.len() {
        let _ = write!(header, ",p_probe{i}");
    }
    let _ = writeln!(csv, "{header}");

    for &omega in &clock.omega_l {
        let state =
            final_spin_state_spectral(&packet, &barrier, det.x, det.t_total, omega, &gamma)?;
        let readout = baz_angles(&state, omega)?;
        let _ = write!(
            csv,
            "{},{},{},{},{},{},{}",
            config.id,
            fmt_f64(omega),
            fmt_f64(readout.delta_phi),
            fmt_f64(readout.delta_theta),
            fmt_f64(tau_ref.re),
            fmt_f64(tau_ref.im),
            fmt_f64(tau_ref.modulus())
        );
        for probe in &probes {
            let p = detection_probability(&state, probe)?;
            let _ = write!(csv, ",{}", fmt_f64(p));
        }
        let _ = writeln!(csv);
    }
    write_file(&csv_path, &csv)?;

    let mut s = String::new();
    let _ = writeln!(s, "id = {}", config.id);
    let _ = writeln!(s, "kind = clock");
    let _ = writeln!(s, "file = {}", basename(&csv_path));
    let _ = writeln!(s, "re_tau_derivative = {}", fmt_f64(tau_ref.re));
    let _ = writeln!(s, "im_tau_derivative = {}", fmt_f64(tau_ref.im));
    let _ = writeln!(s, "abs_tau_derivative = {}", fmt_f64(tau_ref.modulus()));
    // weak-limit readout at the smallest configured frequency
    if let Some(&omega) = clock
        .omega_l
        .iter()
        .min_by(|a, b| a.partial_cmp(b).expect("finite"))
    {
        let state =
            final_spin_state_spectral(&packet, &barrier, det.x, det.t_total, omega, &gamma)?;
        let readout = baz_angles(&state, omega)?;
        let _ = writeln!(s, "weak_omega = {}", fmt_f64(omega));
        let _ = writeln!(s, "dphi_over_omega = {}", fmt_f64(readout.tau_inferred.re));
        let _ = writeln!(s, "dtheta_over_omega = {}", fmt_f64(readout.tau_inferred.im));
    }
    let summary_path = PathBuf::from(format!("{prefix}.summary.txt"));
    write_file(&summary_path, &s)?;
    Ok(RunOutput {
        summary: s,
        files: vec![csv_path, summary_path],
    })
}

fn run_interferometer(config: &ScenarioConfig, prefix: &str) -> tauclock_core::Result<RunOutput> {
    let c = config.interferometer.as_ref().expect("validated");
    let base = build_interferometer(c)?;

    let mean = weak_mean_time(&base)?;
    let readout = precession_angles(&base)?;

    let csv_path = PathBuf::from(format!("{prefix}.csv"));
    let mut csv = String::new();
    let _ = writeln!(csv, "{}", config_header(config));
    let _ = writeln!(csv, "phi,re_tau,im_tau,dphi_over_omega,dtheta_over_omega");
    for k in 0..c.n_phi {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / c.n_phi as f64;
        let swept = base.with_arm_phase(phi);
        let mean_k = weak_mean_time(&swept)?;
        let readout_k = precession_angles(&swept)?;
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            fmt_f64(phi),
            fmt_f64(mean_k.re),
            fmt_f64(mean_k.im),
            fmt_f64(readout_k.tau_inferred.re),
            fmt_f64(readout_k.tau_inferred.im)
        );
    }
    write_file(&csv_path, &csv)?;

    let mut s = String::new();
    let _ = writeln!(s, "id = {}", config.id);
    let _ = writeln!(s, "kind = interferometer");
    let _ = writeln!(s, "file = {}", basename(&csv_path));
    let _ = writeln!(s, "re_tau = {}", fmt_f64(mean.re));
    let _ = writeln!(s, "im_tau = {}", fmt_f64(mean.im));
    let _ = writeln!(s, "abs_tau = {}", fmt_f64(mean.modulus()));
    let _ = writeln!(s, "dphi_over_omega = {}", fmt_f64(readout.tau_inferred.re));
    let _ = writeln!(s, "dtheta_over_omega = {}", fmt_f64(readout.tau_inferred.im));
    // negative or larger in magnitude than the whole transit: no classical
    // duration can do either
    let _ = writeln!(
        s,
        "anomalous = {}",
        mean.re < 0.0 || mean.re.abs() > c.t_total
    );
    let summary_path = PathBuf::from(format!("{prefix}.summary.txt"));
    write_file(&summary_path, &s)?;
    Ok(RunOutput {
        summary: s,
        files: vec![csv_path, summary_path],
    })
}

fn run_oracle(config: &ScenarioConfig, prefix: &str) -> tauclock_core::Result<RunOutput> {
    let lattice = build_lattice(config.lattice.as_ref().expect("validated"))?;
    let report = equivalence_report(&lattice);

    let csv_path = PathBuf::from(format!("{prefix}.csv"));
    let mut csv = Vec::new();
    writeln!(csv, "{}", config_header(config)).map_err(io_err)?;
    report.write_csv(&mut csv).map_err(io_err)?;
    write_file(&csv_path, std::str::from_utf8(&csv).expect("utf8"))?;

    let mut s = String::new();
    let _ = writeln!(s, "id = {}", config.id);
    let _ = writeln!(s, "kind = oracle");
    let _ = writeln!(s, "file = {}", basename(&csv_path));
    let _ = writeln!(s, "max_discrepancy = {}", fmt_f64(report.max_discrepancy));
    let _ = writeln!(
        s,
        "completeness_error = {}",
        fmt_f64(report.completeness_error)
    );
    let _ = writeln!(
        s,
        "within_tolerance = {}",
        report.max_discrepancy < 1e-12
    );
    let summary_path = PathBuf::from(format!("{prefix}.summary.txt"));
    write_file(&summary_path, &s)?;
    Ok(RunOutput {
        summary: s,
        files: vec![csv_path, summary_path],
    })
}
