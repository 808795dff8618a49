//! Plane-wave transmission through piecewise-constant potentials on `[0, d]`
//! and the shift-potential amplitudes Ã(x ← G₀ | λ).
//!
//! Phase convention: the incident wave is `exp(ipx)` and the transmitted wave
//! is `t(p) exp(ipx)` for `x > d`, so a vanishing potential gives `t ≡ 1`.
//! All formulas are evaluated as entire functions of `κ² = 2μV - p²`, which
//! keeps the amplitude exact and smooth through the `E = V` degeneracy and
//! covers wells (`κ² < 0`) with the same code path.

use num_complex::Complex64;

use crate::error::{invalid_param, Error, Result};
use crate::wavepacket::WavePacket;

/// Piecewise-constant potential occupying `[0, d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BarrierSpec {
    segments: Vec<(f64, f64)>, // (width, height)
}

impl BarrierSpec {
    /// Single rectangle of height `v` (any sign) and width `d > 0`.
    pub fn rectangular(v: f64, d: f64) -> Result<Self> {
        if !(d > 0.0) {
            return Err(invalid_param("d", "barrier width must be positive"));
        }
        Ok(BarrierSpec {
            segments: vec![(d, v)],
        })
    }

    /// General stack; widths must be positive.
    pub fn piecewise(segments: Vec<(f64, f64)>) -> Result<Self> {
        if segments.is_empty() {
            return Err(invalid_param("segments", "need at least one segment"));
        }
        if segments.iter().any(|&(w, _)| !(w > 0.0)) {
            return Err(invalid_param("segments", "segment widths must be positive"));
        }
        Ok(BarrierSpec { segments })
    }

    pub fn segments(&self) -> &[(f64, f64)] {
        &self.segments
    }

    /// Total width `d`.
    pub fn width(&self) -> f64 {
        self.segments.iter().map(|&(w, _)| w).sum()
    }

    /// Height when the stack is a single rectangle.
    pub fn uniform_height(&self) -> Option<f64> {
        match self.segments.as_slice() {
            [(_, v)] => Some(*v),
            _ => None,
        }
    }

    /// Width-weighted mean height; used to centre λ windows.
    pub fn mean_height(&self) -> f64 {
        let d = self.width();
        self.segments.iter().map(|&(w, v)| w * v).sum::<f64>() / d
    }

    /// The same stack with every height shifted by `lambda`.
    pub fn shifted(&self, lambda: f64) -> BarrierSpec {
        BarrierSpec {
            segments: self
                .segments
                .iter()
                .map(|&(w, v)| (w, v + lambda))
                .collect(),
        }
    }
}

/// One sample of the shift-potential amplitude Ã(x ← G₀ | λ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaAmplitude {
    pub lambda: f64,
    pub value: Complex64,
}

/// sinh(z)/z for z² = u, as a function of u (entire in u).
fn sinhc_from_u(u: f64) -> f64 {
    if u.abs() < 1e-6 {
        1.0 + u / 6.0 + u * u / 120.0
    } else if u > 0.0 {
        let z = u.sqrt();
        z.sinh() / z
    } else {
        let z = (-u).sqrt();
        z.sin() / z
    }
}

/// cosh(z) for z² = u (entire in u).
fn cosh_from_u(u: f64) -> f64 {
    if u.abs() < 1e-6 {
        1.0 + u / 2.0 + u * u / 24.0
    } else if u > 0.0 {
        u.sqrt().cosh()
    } else {
        (-u).sqrt().cos()
    }
}

/// Transmission amplitude for a rectangular potential of height `v` on
/// `[0, d]` at momentum `p > 0`, closed form.
///
/// `t = exp(-ipd) / [cosh(κd) + (i/2)(κ/p - p/κ) sinh(κd)]` with
/// `κ = sqrt(2μv - p²)`; the denominator is evaluated as an entire function
/// of `κ²` (series near the degeneracy, scaled hyperbolics for opaque
/// barriers, trigonometrics for wells and above-barrier motion).
pub fn rect_transmission(p: f64, v: f64, d: f64, mu: f64) -> Result<Complex64> {
    if !(p > 0.0) {
        return Err(invalid_param("p", "momentum must be positive"));
    }
    if !(d > 0.0) {
        return Err(invalid_param("d", "barrier width must be positive"));
    }
    if !(mu > 0.0) {
        return Err(invalid_param("mu", "mass must be positive"));
    }

    let s = 2.0 * mu * v - p * p; // κ²
    let u = s * d * d; // (κd)²
    let out_phase = Complex64::from_polar(1.0, -p * d);

    if u.abs() < 1e-6 {
        // series through E = V: D = cosh(κd) + (i d/2)(s/p - p) sinhc(κd)
        let den = Complex64::new(
            cosh_from_u(u),
            0.5 * d * sinhc_from_u(u) * (s / p - p),
        );
        Ok(out_phase / den)
    } else if s > 0.0 {
        // tunnelling: factor e^{κd} out of the denominator so opaque
        // barriers never overflow
        let kappa = s.sqrt();
        let x = kappa * d;
        let one_minus = -(-2.0 * x).exp_m1(); // 1 - e^{-2κd}
        let one_plus = 1.0 + (-2.0 * x).exp();
        let den = Complex64::new(
            0.5 * one_plus,
            0.25 * (kappa / p - p / kappa) * one_minus,
        );
        Ok(out_phase * (-x).exp() / den)
    } else {
        let k = (-s).sqrt();
        let (sin, cos) = (k * d).sin_cos();
        let den = Complex64::new(cos, -0.5 * (p / k + k / p) * sin);
        Ok(out_phase / den)
    }
}

/// Real 2×2 transfer matrix in the (ψ, ψ') basis with a factored-out
/// log-magnitude, so products over opaque stacks stay representable.
#[derive(Debug, Clone, Copy)]
struct ScaledMatrix {
    m: [[f64; 2]; 2],
    log_scale: f64,
}

impl ScaledMatrix {
    fn identity() -> Self {
        ScaledMatrix {
            m: [[1.0, 0.0], [0.0, 1.0]],
            log_scale: 0.0,
        }
    }

    /// Propagation across one segment: entire in κ², real entries.
    fn segment(s: f64, w: f64) -> Self {
        let u = s * w * w;
        if u.abs() < 1e-6 || s < 0.0 {
            let c = cosh_from_u(u);
            let shc = sinhc_from_u(u);
            ScaledMatrix {
                m: [[c, w * shc], [s * w * shc, c]],
                log_scale: 0.0,
            }
        } else {
            // tunnelling segment, scaled by e^{κw}
            let kappa = s.sqrt();
            let x = kappa * w;
            let em = (-2.0 * x).exp();
            let one_minus = -(-2.0 * x).exp_m1();
            ScaledMatrix {
                m: [
                    [0.5 * (1.0 + em), 0.5 * one_minus / kappa],
                    [0.5 * kappa * one_minus, 0.5 * (1.0 + em)],
                ],
                log_scale: x,
            }
        }
    }

    /// `other · self`, renormalised so the largest entry has magnitude 1.
    fn then(self, other: ScaledMatrix) -> ScaledMatrix {
        let a = other.m;
        let b = self.m;
        let mut m = [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ];
        let mut log_scale = self.log_scale + other.log_scale;
        let max = m
            .iter()
            .flatten()
            .fold(0.0f64, |acc, &x| acc.max(x.abs()));
        if max > 0.0 {
            for row in &mut m {
                for x in row.iter_mut() {
                    *x /= max;
                }
            }
            log_scale += max.ln();
        }
        ScaledMatrix { m, log_scale }
    }
}

fn transfer_through(p: f64, barrier: &BarrierSpec, mu: f64, lambda: f64) -> ScaledMatrix {
    let mut acc = ScaledMatrix::identity();
    for &(w, v) in barrier.segments() {
        let s = 2.0 * mu * (v + lambda) - p * p;
        acc = acc.then(ScaledMatrix::segment(s, w));
    }
    acc
}

fn amplitudes_from_matrix(p: f64, d: f64, m: ScaledMatrix) -> (Complex64, Complex64) {
    let ip = Complex64::new(0.0, p);
    let alpha = ip * m.m[0][0] - m.m[1][0];
    let beta = ip * m.m[1][1] + p * p * m.m[0][1];
    let den = alpha + beta;
    let t = Complex64::from_polar(1.0, -p * d) * (2.0 * ip) * (-m.log_scale).exp() / den;
    let r = (beta - alpha) / den;
    (t, r)
}

fn validate_pv(p: f64, mu: f64) -> Result<()> {
    if !(p > 0.0) {
        return Err(invalid_param("p", "momentum must be positive"));
    }
    if !(mu > 0.0) {
        return Err(invalid_param("mu", "mass must be positive"));
    }
    Ok(())
}

/// Transmission amplitude through a piecewise-constant stack, by the scaled
/// transfer-matrix product. Matches [`rect_transmission`] for one segment.
pub fn piecewise_transmission(p: f64, barrier: &BarrierSpec, mu: f64) -> Result<Complex64> {
    validate_pv(p, mu)?;
    let m = transfer_through(p, barrier, mu, 0.0);
    Ok(amplitudes_from_matrix(p, barrier.width(), m).0)
}

/// Transmission and reflection amplitudes; `|t|² + |r|² = 1` up to round-off.
pub fn transmission_and_reflection(
    p: f64,
    barrier: &BarrierSpec,
    mu: f64,
) -> Result<(Complex64, Complex64)> {
    validate_pv(p, mu)?;
    let m = transfer_through(p, barrier, mu, 0.0);
    Ok(amplitudes_from_matrix(p, barrier.width(), m))
}

/// Transmission for the composite potential `barrier + λ` at momentum `p`.
/// Single rectangles use the closed form; stacks use the transfer matrix.
pub fn shifted_transmission(
    p: f64,
    barrier: &BarrierSpec,
    mu: f64,
    lambda: f64,
) -> Result<Complex64> {
    match barrier.uniform_height() {
        Some(v) => rect_transmission(p, v + lambda, barrier.width(), mu),
        None => {
            validate_pv(p, mu)?;
            let m = transfer_through(p, barrier, mu, lambda);
            Ok(amplitudes_from_matrix(p, barrier.width(), m).0)
        }
    }
}

/// Ã(x ← G₀ | λ): the amplitude to reach `x` behind the region at
/// `t = T_total` while moving in the composite potential `V(x) + λ θ[0,d]`,
/// assembled by trapezoid quadrature over the packet grid.
pub fn lambda_amplitude(
    packet: &WavePacket,
    barrier: &BarrierSpec,
    lambda: f64,
    x: f64,
    t_total: f64,
) -> Result<LambdaAmplitude> {
    let d = barrier.width();
    if x <= d {
        return Err(Error::UnsupportedConfiguration(format!(
            "detection point x = {x} must lie behind the region (x > {d}); \
             in-region and reflected-side detection are not supported"
        )));
    }
    if !(t_total > 0.0) {
        return Err(invalid_param("t_total", "total motion time must be positive"));
    }
    if packet.momenta().first().copied().unwrap_or(0.0) <= 0.0 {
        return Err(invalid_param(
            "packet",
            "packet grid contains non-positive momenta",
        ));
    }

    let mu = packet.mu();
    let dp = packet.momentum_step();
    let n = packet.momenta().len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, (p, a)) in packet.momenta().iter().zip(packet.amplitudes()).enumerate() {
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let t = shifted_transmission(*p, barrier, mu, lambda)?;
        let phase = p * x - p * p * t_total / (2.0 * mu);
        acc += w * a * t * Complex64::from_polar(1.0, phase);
    }
    Ok(LambdaAmplitude {
        lambda,
        value: acc * dp,
    })
}
