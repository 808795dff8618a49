//! Two-arm interferometer with a spin-1/2 clock: two arm amplitudes, two
//! in-field durations, exact spinor precession, the weak mean time, and the
//! relative-amplitude solver showing that any complex mean time is
//! attainable.

use num_complex::Complex64;

use crate::error::{invalid_param, Error, Result};
use crate::larmor_clock::{baz_angles, ClockReadout, SpinState};
use crate::tau_amplitude::ComplexTime;

/// Arm amplitudes and in-field durations; the extra arm phase φ is folded
/// into `g2`.
#[derive(Debug, Clone, Copy)]
pub struct TwoPathConfig {
    pub g1: Complex64,
    pub g2: Complex64,
    pub tau1: f64,
    pub tau2: f64,
    pub omega_l: f64,
    pub t_total: f64,
}

impl TwoPathConfig {
    pub fn new(
        g1: Complex64,
        g2: Complex64,
        tau1: f64,
        tau2: f64,
        omega_l: f64,
        t_total: f64,
    ) -> Result<Self> {
        if !(t_total > 0.0) {
            return Err(invalid_param("t_total", "total transit time must be positive"));
        }
        for (name, tau) in [("tau1", tau1), ("tau2", tau2)] {
            if !(0.0..=t_total).contains(&tau) {
                return Err(invalid_param(
                    name,
                    format!("in-field durations must lie in [0, {t_total}]"),
                ));
            }
        }
        Ok(TwoPathConfig {
            g1,
            g2,
            tau1,
            tau2,
            omega_l,
            t_total,
        })
    }

    /// The same interferometer with an extra phase φ on the second arm.
    pub fn with_arm_phase(&self, phi: f64) -> TwoPathConfig {
        TwoPathConfig {
            g2: self.g2 * Complex64::from_polar(1.0, phi),
            ..*self
        }
    }
}

/// Spinor behind the second beam splitter (unnormalised):
/// `G₁ e^{-i ω_L σ_z τ₁ / 2} |↑x⟩ + G₂ e^{-i ω_L σ_z τ₂ / 2} |↑x⟩`.
pub fn two_path_state(config: &TwoPathConfig) -> SpinState {
    let arm1 = SpinState::up_x().rotated_about_z(config.omega_l * config.tau1);
    let arm2 = SpinState::up_x().rotated_about_z(config.omega_l * config.tau2);
    let amps = arm1
        .amps()
        .iter()
        .zip(arm2.amps())
        .map(|(a, b)| config.g1 * a + config.g2 * b)
        .collect();
    SpinState::new(1, amps).expect("two amplitudes for spin-1/2")
}

/// Weak mean time `τ̄ = (τ₁ G₁ + τ₂ G₂) / (G₁ + G₂)`: an amplitude-weighted
/// average whose real part may be negative or exceed the transit time.
pub fn weak_mean_time(config: &TwoPathConfig) -> Result<ComplexTime> {
    let den = config.g1 + config.g2;
    if den.norm() < 1e-14 * (config.g1.norm() + config.g2.norm()).max(1e-300) {
        return Err(Error::DegenerateTransition(
            "arm amplitudes cancel (G1 + G2 = 0); the mean time is undefined".into(),
        ));
    }
    Ok(((config.tau1 * config.g1 + config.tau2 * config.g2) / den).into())
}

/// Exact readout angles of the two-path spinor. In the weak limit
/// `δφ/ω_L → Re[τ̄]` and `δθ/ω_L → Im[τ̄]`.
pub fn precession_angles(config: &TwoPathConfig) -> Result<ClockReadout> {
    baz_angles(&two_path_state(config), config.omega_l)
}

/// Relative amplitudes with `α₁ + α₂ = 1` reproducing a prescribed mean.
#[derive(Debug, Clone, Copy)]
pub struct AlphaPair {
    pub alpha1: Complex64,
    pub alpha2: Complex64,
}

/// Solve `α₁ τ₁ + α₂ τ₂ = τ̄`, `α₁ + α₂ = 1` for any complex τ̄:
/// `α₁ = (τ̄ - τ₂)/(τ₁ - τ₂)`, `α₂ = -(τ̄ - τ₁)/(τ₁ - τ₂)`.
pub fn solve_alphas(tau1: f64, tau2: f64, tau_bar: Complex64) -> Result<AlphaPair> {
    let gap = tau1 - tau2;
    if gap.abs() < 1e-12 * tau1.abs().max(tau2.abs()).max(1.0) {
        return Err(Error::InvalidInput(
            "tau1 and tau2 must differ for the alpha solver".into(),
        ));
    }
    let alpha1 = (tau_bar - tau2) / gap;
    let alpha2 = -(tau_bar - tau1) / gap;
    debug_assert!((alpha1 + alpha2 - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    debug_assert!((alpha1 * tau1 + alpha2 * tau2 - tau_bar).norm() < 1e-12 * tau_bar.norm().max(1.0));
    Ok(AlphaPair { alpha1, alpha2 })
}
