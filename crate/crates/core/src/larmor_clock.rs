//! Spin-j Larmor clock: exact final spin states, detection probabilities,
//! weak linear response, and the spin-1/2 readout angles.
//!
//! A spin of size j couples to the region through `ω_L ĵ_z θ[0,d]`. Each
//! ĵ_z component `m` then crosses the region as if the potential were
//! shifted by `m ω_L`, so the exact final state needs the shift amplitudes
//! at the 2j+1 values `λ = m ω_L` — evaluated exactly, never interpolated.

use num_complex::Complex64;

use crate::error::{invalid_param, Error, Result};
use crate::scattering::{lambda_amplitude, BarrierSpec, LambdaAmplitude};
use crate::tau_amplitude::{ComplexTime, TauAmplitudeDistribution};
use crate::wavepacket::WavePacket;

/// Spin state of size j (integer or half-integer, stored as 2j), amplitudes
/// listed in ascending m order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    two_j: u32,
    amps: Vec<Complex64>,
}

impl SpinState {
    pub fn new(two_j: u32, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != two_j as usize + 1 {
            return Err(invalid_param(
                "amps",
                format!("spin 2j = {two_j} needs {} amplitudes", two_j + 1),
            ));
        }
        Ok(SpinState { two_j, amps })
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// m values in ascending order, -j ..= j.
    pub fn m_values(&self) -> impl Iterator<Item = f64> + '_ {
        let two_j = self.two_j as i64;
        (0..=two_j).map(move |k| (2 * k - two_j) as f64 / 2.0)
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<SpinState> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::DegenerateTransition(
                "spin state has vanishing norm".into(),
            ));
        }
        Ok(SpinState {
            two_j: self.two_j,
            amps: self.amps.iter().map(|a| a / n).collect(),
        })
    }

    /// Spin-1/2 state polarised along +x.
    pub fn up_x() -> SpinState {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        SpinState {
            two_j: 1,
            amps: vec![Complex64::new(r, 0.0), Complex64::new(r, 0.0)],
        }
    }

    /// Spin-1/2 state polarised along -x (orthogonal to [`SpinState::up_x`]).
    pub fn down_x() -> SpinState {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        SpinState {
            two_j: 1,
            amps: vec![Complex64::new(-r, 0.0), Complex64::new(r, 0.0)],
        }
    }

    /// Rotation about z by `angle`: component m picks up `exp(-i m angle)`.
    pub fn rotated_about_z(&self, angle: f64) -> SpinState {
        SpinState {
            two_j: self.two_j,
            amps: self
                .m_values()
                .zip(&self.amps)
                .map(|(m, a)| a * Complex64::from_polar(1.0, -m * angle))
                .collect(),
        }
    }
}

/// ⟨β|γ⟩ = Σ_m β*_m γ_m.
pub fn inner(beta: &SpinState, gamma: &SpinState) -> Result<Complex64> {
    if beta.two_j != gamma.two_j {
        return Err(Error::InvalidInput("spin sizes differ".into()));
    }
    Ok(beta
        .amps
        .iter()
        .zip(&gamma.amps)
        .map(|(b, g)| b.conj() * g)
        .sum())
}

/// ⟨β|ĵ_z|γ⟩ = Σ_m m β*_m γ_m.
pub fn jz_matrix_element(beta: &SpinState, gamma: &SpinState) -> Result<Complex64> {
    if beta.two_j != gamma.two_j {
        return Err(Error::InvalidInput("spin sizes differ".into()));
    }
    Ok(beta
        .m_values()
        .zip(beta.amps.iter().zip(&gamma.amps))
        .map(|(m, (b, g))| m * b.conj() * g)
        .sum())
}

/// Γ(τ | ω_L, β, γ) = Σ_m β*_m γ_m exp(-i m ω_L τ): the spin factor that
/// multiplies the duration amplitude under the clock.
pub fn gamma_kernel(
    tau: f64,
    omega_l: f64,
    beta: &SpinState,
    gamma: &SpinState,
) -> Result<Complex64> {
    if beta.two_j != gamma.two_j {
        return Err(Error::InvalidInput("spin sizes differ".into()));
    }
    Ok(beta
        .m_values()
        .zip(beta.amps.iter().zip(&gamma.amps))
        .map(|(m, (b, g))| b.conj() * g * Complex64::from_polar(1.0, -m * omega_l * tau))
        .sum())
}

/// Exact final spin state by the spectral route: component m is scaled by
/// the shift amplitude at `λ = m ω_L`, freshly evaluated for each component.
pub fn final_spin_state_spectral(
    packet: &WavePacket,
    barrier: &BarrierSpec,
    x: f64,
    t_total: f64,
    omega_l: f64,
    gamma: &SpinState,
) -> Result<SpinState> {
    let amps: Result<Vec<Complex64>> = gamma
        .m_values()
        .zip(gamma.amps())
        .map(|(m, g)| {
            Ok(lambda_amplitude(packet, barrier, m * omega_l, x, t_total)?.value * g)
        })
        .collect();
    SpinState::new(gamma.two_j(), amps?)
}

/// Final spin state from a precomputed λ scan. The scan must contain every
/// `λ = m ω_L` exactly; interpolation is not permitted (its error would
/// masquerade as physics).
pub fn final_spin_state_from_scan(
    scan: &[LambdaAmplitude],
    omega_l: f64,
    gamma: &SpinState,
) -> Result<SpinState> {
    let amps: Result<Vec<Complex64>> = gamma
        .m_values()
        .zip(gamma.amps())
        .map(|(m, g)| {
            let lambda = m * omega_l;
            let tol = 1e-12 * lambda.abs().max(1.0);
            let hit = scan
                .iter()
                .find(|s| (s.lambda - lambda).abs() <= tol)
                .ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "scan grid does not contain λ = {lambda}; exact coverage of \
                         [-jω_L, jω_L] is required"
                    ))
                })?;
            Ok(hit.value * g)
        })
        .collect();
    SpinState::new(gamma.two_j(), amps?)
}

/// Final spin state by quadrature of the reconstructed duration
/// distribution: component m gets `∫ A(τ) exp(-i m ω_L τ) dτ · γ_m`.
/// Cross-validates the spectral route through the inversion machinery.
pub fn final_spin_state_from_distribution(
    dist: &TauAmplitudeDistribution,
    omega_l: f64,
    gamma: &SpinState,
) -> Result<SpinState> {
    let amps: Vec<Complex64> = gamma
        .m_values()
        .zip(gamma.amps())
        .map(|(m, g)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, v) in dist.values().iter().enumerate() {
                acc += v * Complex64::from_polar(1.0, -m * omega_l * dist.tau(j));
            }
            acc * dist.delta_tau() * g
        })
        .collect();
    SpinState::new(gamma.two_j(), amps)
}

/// P(β, x ← γ, G₀) = |Σ_m β*_m (final state)_m|².
pub fn detection_probability(final_state: &SpinState, beta: &SpinState) -> Result<f64> {
    Ok(inner(beta, final_state)?.norm_sqr())
}

/// Relative change of the detection probability when the clock is switched
/// on: `[P(ω_L) - P(0)] / P(0)`, exact in ω_L.
pub fn weak_relative_change(
    packet: &WavePacket,
    barrier: &BarrierSpec,
    x: f64,
    t_total: f64,
    beta: &SpinState,
    gamma: &SpinState,
    omega_l: f64,
) -> Result<f64> {
    let overlap = inner(beta, gamma)?;
    if overlap.norm() < 1e-14 * beta.norm() * gamma.norm() {
        return Err(Error::UseQuadraticProbe);
    }
    let with_field = final_spin_state_spectral(packet, barrier, x, t_total, omega_l, gamma)?;
    let p_on = detection_probability(&with_field, beta)?;
    let free = lambda_amplitude(packet, barrier, 0.0, x, t_total)?.value;
    let p_off = (overlap * free).norm_sqr();
    if p_off < 1e-300 {
        return Err(Error::DegenerateTransition(
            "clock-off detection probability vanishes".into(),
        ));
    }
    Ok((p_on - p_off) / p_off)
}

/// First-order prediction for [`weak_relative_change`]:
/// `2 ω_L (Re[Z]·Im[τ̄] + Im[Z]·Re[τ̄])` with `Z = ⟨β|ĵ_z|γ⟩ / ⟨β|γ⟩`.
/// The factor two on both terms is fixed by the ω_L → 0 limit of the exact
/// probability ratio.
pub fn linear_response_prediction(z: Complex64, tau_bar: ComplexTime, omega_l: f64) -> f64 {
    2.0 * omega_l * (z.re * tau_bar.im + z.im * tau_bar.re)
}

/// Weak-clock readout for spin-1/2: exact Bloch-vector angles whose weak
/// limits are `δφ → ω_L Re[τ̄]` (precession in the xy-plane) and
/// `δθ → ω_L Im[τ̄]` (tilt towards z).
#[derive(Debug, Clone, Copy)]
pub struct ClockReadout {
    pub delta_phi: f64,
    pub delta_theta: f64,
    pub omega_l: f64,
    pub tau_inferred: ComplexTime,
}

/// Angles of the (normalised) final spin-1/2 state on the Bloch sphere:
/// `δφ = atan2(⟨σ_y⟩, ⟨σ_x⟩)`, `δθ = asin(⟨σ_z⟩)`.
pub fn baz_angles(final_state: &SpinState, omega_l: f64) -> Result<ClockReadout> {
    if final_state.two_j() != 1 {
        return Err(Error::InvalidInput(
            "readout angles are defined for spin-1/2 states".into(),
        ));
    }
    if !(omega_l > 0.0) {
        return Err(invalid_param(
            "omega_l",
            "Larmor frequency must be positive to infer a time",
        ));
    }
    let normed = final_state.normalized()?;
    // ascending m order: amps[0] = m=-1/2 (spin down), amps[1] = m=+1/2
    let down = normed.amps()[0];
    let up = normed.amps()[1];
    let cross = up.conj() * down;
    let sx = 2.0 * cross.re;
    let sy = 2.0 * cross.im;
    let sz = up.norm_sqr() - down.norm_sqr();
    let delta_phi = sy.atan2(sx);
    let delta_theta = sz.clamp(-1.0, 1.0).asin();
    Ok(ClockReadout {
        delta_phi,
        delta_theta,
        omega_l,
        tau_inferred: ComplexTime::new(delta_phi / omega_l, delta_theta / omega_l),
    })
}
