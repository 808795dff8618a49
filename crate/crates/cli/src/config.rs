//! Scenario configuration: JSON parsing, exhaustive validation, and
//! normalisation with explicit defaults.
//!
//! Validation collects every problem instead of stopping at the first; each
//! message names the offending field path.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use tauclock_core::tau_amplitude::default_lambda_max;
use tauclock_core::{BarrierSpec, LatticeSpec, SpinState, TwoPathConfig, WavePacket};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Taudist,
    Clock,
    Interferometer,
    Oracle,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Taudist => "taudist",
            Kind::Clock => "clock",
            Kind::Interferometer => "interferometer",
            Kind::Oracle => "oracle",
        }
    }
}

/// Raw JSON shape: everything optional so validation can report all gaps.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub kind: Option<String>,
    pub id: Option<String>,
    pub output: Option<String>,
    pub packet: Option<RawPacket>,
    pub barrier: Option<RawBarrier>,
    pub detection: Option<RawDetection>,
    pub lambda_grid: Option<RawLambdaGrid>,
    pub clock: Option<RawClock>,
    pub interferometer: Option<RawInterferometer>,
    pub lattice: Option<RawLattice>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPacket {
    pub p0: Option<f64>,
    pub dp: Option<f64>,
    pub x_c: Option<f64>,
    pub mu: Option<f64>,
    pub n_points: Option<usize>,
    pub span: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBarrier {
    pub v: Option<f64>,
    pub d: Option<f64>,
    pub segments: Option<Vec<RawSegment>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSegment {
    pub width: f64,
    pub height: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDetection {
    pub x: Option<f64>,
    pub t_total: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawLambdaGrid {
    pub lambda_max: Option<f64>,
    pub n_lambda: Option<usize>,
    pub taper_fraction: Option<f64>,
    /// Window centre in λ; omitted means "centre on the barrier height".
    pub center: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawClock {
    pub two_j: Option<u32>,
    pub omega_l: Option<Vec<f64>>,
    pub gamma: Option<SpinSpec>,
    pub probes: Option<Vec<SpinSpec>>,
    pub delta_lambda: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpinSpec {
    /// "up_x" or "down_x"
    Named(String),
    /// ↑x rotated about z by `angle` (spin-1/2)
    AxisAngle { about_z: f64 },
    /// explicit components as [re, im] pairs, ascending m
    Components { components: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawInterferometer {
    pub g1: Option<[f64; 2]>,
    pub g2: Option<[f64; 2]>,
    pub tau1: Option<f64>,
    pub tau2: Option<f64>,
    pub omega_l: Option<f64>,
    pub t_total: Option<f64>,
    pub n_phi: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawLattice {
    pub n_sites: Option<usize>,
    pub region: Option<Vec<usize>>,
    /// row-major complex entries as [re, im]
    pub hop: Option<Vec<Vec<[f64; 2]>>>,
    pub n_steps: Option<usize>,
    pub dt: Option<f64>,
    pub start: Option<usize>,
    pub end: Option<usize>,
}

/// Fully validated scenario with every default resolved; serialised verbatim
/// into output headers so runs are self-describing.
#[derive(Debug, Clone, Serialize)]
pub struct ScenarioConfig {
    pub kind: Kind,
    pub id: String,
    pub output: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub packet: Option<PacketConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub barrier: Option<BarrierConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detection: Option<DetectionConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_grid: Option<LambdaGridConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clock: Option<ClockConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interferometer: Option<InterferometerConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeConfig>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PacketConfig {
    pub p0: f64,
    pub dp: f64,
    pub x_c: f64,
    pub mu: f64,
    pub n_points: usize,
    pub span: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BarrierConfig {
    pub segments: Vec<RawSegment>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DetectionConfig {
    pub x: f64,
    pub t_total: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaGridConfig {
    pub lambda_max: f64,
    pub n_lambda: usize,
    pub taper_fraction: f64,
    pub center: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClockConfig {
    pub two_j: u32,
    pub omega_l: Vec<f64>,
    pub gamma: SpinSpec,
    pub probes: Vec<SpinSpec>,
    pub delta_lambda: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InterferometerConfig {
    pub g1: [f64; 2],
    pub g2: [f64; 2],
    pub tau1: f64,
    pub tau2: f64,
    pub omega_l: f64,
    pub t_total: f64,
    pub n_phi: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeConfig {
    pub n_sites: usize,
    pub region: Vec<usize>,
    pub hop: Vec<Vec<[f64; 2]>>,
    pub n_steps: usize,
    pub dt: f64,
    pub start: usize,
    pub end: usize,
}

pub struct Issues(Vec<String>);

impl Issues {
    fn new() -> Self {
        Issues(Vec::new())
    }

    fn push(&mut self, path: &str, msg: impl AsRef<str>) {
        self.0.push(format!("{path}: {}", msg.as_ref()));
    }

    pub fn into_vec(self) -> Vec<String> {
        self.0
    }
}

fn require<T: Copy>(
    issues: &mut Issues,
    path: &str,
    value: Option<T>,
    what: &str,
) -> Option<T> {
    if value.is_none() {
        issues.push(path, format!("missing; {what} is required"));
    }
    value
}

fn positive(issues: &mut Issues, path: &str, value: Option<f64>) -> Option<f64> {
    if let Some(v) = value {
        if !(v > 0.0) || !v.is_finite() {
            issues.push(path, "must be positive and finite");
            return None;
        }
    }
    value
}

/// Validate a raw config, filling defaults. Returns the normalised scenario
/// or the full list of problems.
pub fn validate_config(raw: &RawConfig) -> Result<ScenarioConfig, Vec<String>> {
    let mut issues = Issues::new();

    let kind = match raw.kind.as_deref() {
        None => {
            issues.push("kind", "missing; one of taudist|clock|interferometer|oracle");
            None
        }
        Some("taudist") => Some(Kind::Taudist),
        Some("clock") => Some(Kind::Clock),
        Some("interferometer") => Some(Kind::Interferometer),
        Some("oracle") => Some(Kind::Oracle),
        Some(other) => {
            issues.push("kind", format!("unknown kind `{other}`"));
            None
        }
    };

    let mut config = ScenarioConfig {
        kind: kind.unwrap_or(Kind::Taudist),
        id: raw
            .id
            .clone()
            .unwrap_or_else(|| raw.kind.clone().unwrap_or_else(|| "scenario".into())),
        output: raw.output.clone().unwrap_or_else(|| {
            format!(
                "tauclock_{}",
                raw.id
                    .clone()
                    .or_else(|| raw.kind.clone())
                    .unwrap_or_else(|| "scenario".into())
            )
        }),
        packet: None,
        barrier: None,
        detection: None,
        lambda_grid: None,
        clock: None,
        interferometer: None,
        lattice: None,
    };

    let Some(kind) = kind else {
        return Err(issues.into_vec());
    };

    // sections permitted per kind; anything else present is an error
    let allowed: &[&str] = match kind {
        Kind::Taudist => &["packet", "barrier", "detection", "lambda_grid"],
        Kind::Clock => &["packet", "barrier", "detection", "clock"],
        Kind::Interferometer => &["interferometer"],
        Kind::Oracle => &["lattice"],
    };
    for (name, present) in [
        ("packet", raw.packet.is_some()),
        ("barrier", raw.barrier.is_some()),
        ("detection", raw.detection.is_some()),
        ("lambda_grid", raw.lambda_grid.is_some()),
        ("clock", raw.clock.is_some()),
        ("interferometer", raw.interferometer.is_some()),
        ("lattice", raw.lattice.is_some()),
    ] {
        if present && !allowed.contains(&name) {
            issues.push(name, format!("not used by kind {}", kind.as_str()));
        }
    }

    match kind {
        Kind::Taudist | Kind::Clock => {
            config.packet = validate_packet(&mut issues, raw.packet.as_ref());
            config.barrier = validate_barrier(&mut issues, raw.barrier.as_ref());
            config.detection = validate_detection(
                &mut issues,
                raw.detection.as_ref(),
                config.barrier.as_ref(),
            );
            if kind == Kind::Taudist {
                config.lambda_grid = validate_lambda_grid(
                    &mut issues,
                    raw.lambda_grid.as_ref(),
                    config.detection.as_ref(),
                    config.barrier.as_ref(),
                );
            } else {
                config.clock = validate_clock(&mut issues, raw.clock.as_ref());
            }
        }
        Kind::Interferometer => {
            config.interferometer =
                validate_interferometer(&mut issues, raw.interferometer.as_ref());
        }
        Kind::Oracle => {
            config.lattice = validate_lattice(&mut issues, raw.lattice.as_ref());
        }
    }

    let issues = issues.into_vec();
    if issues.is_empty() {
        Ok(config)
    } else {
        Err(issues)
    }
}

fn validate_packet(issues: &mut Issues, raw: Option<&RawPacket>) -> Option<PacketConfig> {
    let Some(raw) = raw else {
        issues.push("packet", "missing; required for this kind");
        return None;
    };
    let p0 = require(issues, "packet.p0", raw.p0, "mean momentum");
    let dp = require(issues, "packet.dp", raw.dp, "momentum spread");
    let dp = positive(issues, "packet.dp", dp);
    let x_c = require(issues, "packet.x_c", raw.x_c, "initial centre");
    let mu = positive(issues, "packet.mu", Some(raw.mu.unwrap_or(1.0)));
    let n_points = raw.n_points.unwrap_or(512);
    if n_points < 16 {
        issues.push("packet.n_points", "need at least 16 grid points");
    }
    let span = raw.span.unwrap_or(6.0);
    if !(span >= 6.0) {
        issues.push("packet.span", "must be at least 6");
    }
    if let (Some(p0), Some(dp)) = (p0, dp) {
        if p0 - span * dp <= 0.0 {
            issues.push(
                "packet.p0",
                "grid reaches non-positive momenta (p0 - span·dp <= 0)",
            );
        }
    }
    Some(PacketConfig {
        p0: p0?,
        dp: dp?,
        x_c: x_c?,
        mu: mu?,
        n_points,
        span,
    })
}

fn validate_barrier(issues: &mut Issues, raw: Option<&RawBarrier>) -> Option<BarrierConfig> {
    let Some(raw) = raw else {
        issues.push("barrier", "missing; required for this kind");
        return None;
    };
    match (&raw.segments, raw.v, raw.d) {
        (Some(segments), None, None) => {
            if segments.is_empty() {
                issues.push("barrier.segments", "need at least one segment");
                return None;
            }
            for (i, s) in segments.iter().enumerate() {
                if !(s.width > 0.0) {
                    issues.push(&format!("barrier.segments[{i}].width"), "must be positive");
                    return None;
                }
            }
            Some(BarrierConfig {
                segments: segments.clone(),
            })
        }
        (None, v, d) => {
            let v = v.unwrap_or(0.0);
            let Some(d) = d else {
                issues.push("barrier.d", "missing; barrier width is required");
                return None;
            };
            if !(d > 0.0) {
                issues.push("barrier.d", "must be positive");
                return None;
            }
            Some(BarrierConfig {
                segments: vec![RawSegment { width: d, height: v }],
            })
        }
        (Some(_), _, _) => {
            issues.push("barrier", "give either v/d or segments, not both");
            None
        }
    }
}

fn validate_detection(
    issues: &mut Issues,
    raw: Option<&RawDetection>,
    barrier: Option<&BarrierConfig>,
) -> Option<DetectionConfig> {
    let Some(raw) = raw else {
        issues.push("detection", "missing; required for this kind");
        return None;
    };
    let x = require(issues, "detection.x", raw.x, "detection point");
    let t_total = require(issues, "detection.t_total", raw.t_total, "total motion time");
    let t_total = positive(issues, "detection.t_total", t_total);
    if let (Some(x), Some(barrier)) = (x, barrier) {
        let d: f64 = barrier.segments.iter().map(|s| s.width).sum();
        if x <= d {
            issues.push(
                "detection.x",
                format!("must lie behind the region (x > {d})"),
            );
        }
    }
    Some(DetectionConfig {
        x: x?,
        t_total: t_total?,
    })
}

fn validate_lambda_grid(
    issues: &mut Issues,
    raw: Option<&RawLambdaGrid>,
    detection: Option<&DetectionConfig>,
    barrier: Option<&BarrierConfig>,
) -> Option<LambdaGridConfig> {
    let raw = raw.cloned().unwrap_or(RawLambdaGrid {
        lambda_max: None,
        n_lambda: None,
        taper_fraction: None,
        center: None,
    });
    let lambda_max = match raw.lambda_max {
        Some(l) => {
            if !(l > 0.0) {
                issues.push("lambda_grid.lambda_max", "must be positive");
            }
            l
        }
        None => default_lambda_max(detection.map(|d| d.t_total).unwrap_or(1.0)),
    };
    let n_lambda = raw.n_lambda.unwrap_or(4096);
    if n_lambda < 256 || !n_lambda.is_power_of_two() {
        issues.push("lambda_grid.n_lambda", "must be a power of two, at least 256");
    }
    let taper_fraction = raw.taper_fraction.unwrap_or(0.1);
    if !(taper_fraction > 0.0 && taper_fraction <= 0.5) {
        issues.push("lambda_grid.taper_fraction", "must lie in (0, 0.5]");
    }
    // default: centre the window on the barrier height, so the effective
    // total-potential window is height independent
    let center = raw.center.unwrap_or_else(|| {
        barrier
            .map(|b| {
                let d: f64 = b.segments.iter().map(|s| s.width).sum();
                -b.segments.iter().map(|s| s.width * s.height).sum::<f64>() / d
            })
            .unwrap_or(0.0)
    });
    Some(LambdaGridConfig {
        lambda_max,
        n_lambda,
        taper_fraction,
        center,
    })
}

fn validate_clock(issues: &mut Issues, raw: Option<&RawClock>) -> Option<ClockConfig> {
    let Some(raw) = raw else {
        issues.push("clock", "missing; required for kind clock");
        return None;
    };
    let two_j = raw.two_j.unwrap_or(1);
    if two_j != 1 {
        issues.push(
            "clock.two_j",
            "the readout is a spin-1/2 clock; set two_j = 1 (higher spins are \
             available through the library API)",
        );
    }
    let omega_l = raw
        .omega_l
        .clone()
        .unwrap_or_else(|| vec![4e-3, 2e-3, 1e-3]);
    if omega_l.is_empty() {
        issues.push("clock.omega_l", "need at least one Larmor frequency");
    }
    for (i, w) in omega_l.iter().enumerate() {
        if !(*w > 0.0) {
            issues.push(&format!("clock.omega_l[{i}]"), "must be positive");
        }
    }
    let gamma = raw
        .gamma
        .clone()
        .unwrap_or(SpinSpec::Named("up_x".into()));
    if let Err(e) = build_spin(&gamma, two_j) {
        issues.push("clock.gamma", e);
    }
    let probes = raw.probes.clone().unwrap_or_else(|| {
        vec![
            SpinSpec::Named("up_x".into()),
            SpinSpec::Named("down_x".into()),
        ]
    });
    for (i, p) in probes.iter().enumerate() {
        if let Err(e) = build_spin(p, two_j) {
            issues.push(&format!("clock.probes[{i}]"), e);
        }
    }
    let delta_lambda = raw.delta_lambda.unwrap_or(1e-3);
    if !(delta_lambda > 0.0) {
        issues.push("clock.delta_lambda", "must be positive");
    }
    Some(ClockConfig {
        two_j,
        omega_l,
        gamma,
        probes,
        delta_lambda,
    })
}

fn validate_interferometer(
    issues: &mut Issues,
    raw: Option<&RawInterferometer>,
) -> Option<InterferometerConfig> {
    let Some(raw) = raw else {
        issues.push("interferometer", "missing; required for kind interferometer");
        return None;
    };
    let g1 = require(issues, "interferometer.g1", raw.g1, "first arm amplitude");
    let g2 = require(issues, "interferometer.g2", raw.g2, "second arm amplitude");
    let tau1 = require(issues, "interferometer.tau1", raw.tau1, "first arm duration");
    let tau2 = require(issues, "interferometer.tau2", raw.tau2, "second arm duration");
    let omega_l = positive(
        issues,
        "interferometer.omega_l",
        Some(raw.omega_l.unwrap_or(1e-3)),
    );
    let t_total = require(issues, "interferometer.t_total", raw.t_total, "transit time");
    let t_total = positive(issues, "interferometer.t_total", t_total);
    if let (Some(t1), Some(t2), Some(tt)) = (tau1, tau2, t_total) {
        for (name, tau) in [("interferometer.tau1", t1), ("interferometer.tau2", t2)] {
            if !(0.0..=tt).contains(&tau) {
                issues.push(name, format!("must lie in [0, {tt}]"));
            }
        }
    }
    let n_phi = raw.n_phi.unwrap_or(64);
    if n_phi == 0 {
        issues.push("interferometer.n_phi", "must be positive");
    }
    Some(InterferometerConfig {
        g1: g1?,
        g2: g2?,
        tau1: tau1?,
        tau2: tau2?,
        omega_l: omega_l?,
        t_total: t_total?,
        n_phi,
    })
}

fn validate_lattice(issues: &mut Issues, raw: Option<&RawLattice>) -> Option<LatticeConfig> {
    let Some(raw) = raw else {
        issues.push("lattice", "missing; required for kind oracle");
        return None;
    };
    let n_sites = require(issues, "lattice.n_sites", raw.n_sites, "site count");
    let n_steps = require(issues, "lattice.n_steps", raw.n_steps, "step count");
    let dt = positive(issues, "lattice.dt", Some(raw.dt.unwrap_or(1.0)));
    let start = raw.start.unwrap_or(0);
    let end = require(issues, "lattice.end", raw.end, "final site");
    let region = raw.region.clone().unwrap_or_default();
    if region.is_empty() {
        issues.push("lattice.region", "need at least one region site");
    }
    let hop = match &raw.hop {
        Some(h) => h.clone(),
        None => {
            issues.push("lattice.hop", "missing; the hop unitary is required");
            return None;
        }
    };
    let config = LatticeConfig {
        n_sites: n_sites?,
        region,
        hop,
        n_steps: n_steps?,
        dt: dt?,
        start,
        end: end?,
    };
    // run the core validator here so the error surfaces at validation time
    if let Err(e) = build_lattice(&config) {
        issues.push("lattice", e.to_string());
        return None;
    }
    Some(config)
}

// ---- bridges into core types ----

pub fn build_packet(c: &PacketConfig) -> tauclock_core::Result<WavePacket> {
    WavePacket::gaussian(c.p0, c.dp, c.x_c, c.mu, c.n_points, c.span)
}

pub fn build_barrier(c: &BarrierConfig) -> tauclock_core::Result<BarrierSpec> {
    BarrierSpec::piecewise(c.segments.iter().map(|s| (s.width, s.height)).collect())
}

pub fn build_lattice(c: &LatticeConfig) -> tauclock_core::Result<LatticeSpec> {
    let n = c.n_sites;
    let mut hop = Vec::with_capacity(n * n);
    if c.hop.len() != n || c.hop.iter().any(|row| row.len() != n) {
        return Err(tauclock_core::Error::InvalidInput(format!(
            "hop matrix must be {n}×{n}"
        )));
    }
    for row in &c.hop {
        for entry in row {
            hop.push(Complex64::new(entry[0], entry[1]));
        }
    }
    LatticeSpec::new(n, &c.region, hop, c.n_steps, c.dt, c.start, c.end)
}

pub fn build_interferometer(c: &InterferometerConfig) -> tauclock_core::Result<TwoPathConfig> {
    TwoPathConfig::new(
        Complex64::new(c.g1[0], c.g1[1]),
        Complex64::new(c.g2[0], c.g2[1]),
        c.tau1,
        c.tau2,
        c.omega_l,
        c.t_total,
    )
}

/// Build a spin state from its config spec; the error string names the
/// reason so validation can report it in place.
pub fn build_spin(spec: &SpinSpec, two_j: u32) -> Result<SpinState, String> {
    match spec {
        SpinSpec::Named(name) => match name.as_str() {
            "up_x" => {
                if two_j != 1 {
                    return Err("named states are spin-1/2; use components".into());
                }
                Ok(SpinState::up_x())
            }
            "down_x" => {
                if two_j != 1 {
                    return Err("named states are spin-1/2; use components".into());
                }
                Ok(SpinState::down_x())
            }
            other => Err(format!("unknown named state `{other}` (up_x|down_x)")),
        },
        SpinSpec::AxisAngle { about_z } => {
            if two_j != 1 {
                return Err("axis-angle states are spin-1/2; use components".into());
            }
            Ok(SpinState::up_x().rotated_about_z(*about_z))
        }
        SpinSpec::Components { components } => {
            let amps: Vec<Complex64> = components
                .iter()
                .map(|c| Complex64::new(c[0], c[1]))
                .collect();
            SpinState::new(two_j, amps).map_err(|e| e.to_string())
        }
    }
}
