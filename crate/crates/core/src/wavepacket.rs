//! Initial wave packets in momentum space and their free evolution.
//!
//! A packet is a set of complex momentum amplitudes `a(p - p0)` on a uniform
//! grid, normalised so that `2π Σ |a|² Δp = 1` (natural units, ħ = 1). The
//! position amplitude is the oscillatory quadrature
//! `G(x, t) = ∫ a(p - p0) exp(i p x - i p² t / 2μ) dp`.

use num_complex::Complex64;

use crate::error::{invalid_param, Result};

/// Momentum-space wave packet on a uniform grid.
#[derive(Debug, Clone)]
pub struct WavePacket {
    p0: f64,
    dp: f64,
    x_c: f64,
    mu: f64,
    momenta: Vec<f64>,
    amps: Vec<Complex64>,
}

impl WavePacket {
    /// Gaussian envelope `a(q) ∝ exp(-q²/(4 dp²) - i q x_c)`, normalised to
    /// `2π Σ |a|² Δp = 1` on the grid. The grid covers `p0 ± span·dp`
    /// inclusive; the clipped density tail beyond six spreads is ~2e-9.
    pub fn gaussian(
        p0: f64,
        dp: f64,
        x_c: f64,
        mu: f64,
        n_points: usize,
        span: f64,
    ) -> Result<Self> {
        if !(dp > 0.0) {
            return Err(invalid_param("dp", "momentum spread must be positive"));
        }
        if !(mu > 0.0) {
            return Err(invalid_param("mu", "mass must be positive"));
        }
        if n_points < 16 {
            return Err(invalid_param("n_points", "need at least 16 grid points"));
        }
        if !(span >= 6.0) {
            return Err(invalid_param("span", "grid must cover at least p0 ± 6 dp"));
        }

        let n = n_points;
        let step = 2.0 * span * dp / (n - 1) as f64;
        let half = (n - 1) as f64 / 2.0;
        let mut momenta = Vec::with_capacity(n);
        let mut amps = Vec::with_capacity(n);
        for i in 0..n {
            // symmetric offsets: (i - half) pairs up exactly in f64
            let q = (i as f64 - half) * step;
            momenta.push(p0 + q);
            let envelope = (-q * q / (4.0 * dp * dp)).exp();
            let phase = -q * x_c;
            amps.push(Complex64::from_polar(envelope, phase));
        }

        let mut packet = WavePacket {
            p0,
            dp,
            x_c,
            mu,
            momenta,
            amps,
        };
        let norm = packet.norm();
        let scale = 1.0 / norm.sqrt();
        for a in &mut packet.amps {
            *a *= scale;
        }
        Ok(packet)
    }

    /// Build a packet from explicit samples. The grid must be strictly
    /// increasing and uniform; no normalisation is applied.
    pub fn from_samples(
        p0: f64,
        dp: f64,
        x_c: f64,
        mu: f64,
        momenta: Vec<f64>,
        amps: Vec<Complex64>,
    ) -> Result<Self> {
        if !(dp > 0.0) {
            return Err(invalid_param("dp", "momentum spread must be positive"));
        }
        if !(mu > 0.0) {
            return Err(invalid_param("mu", "mass must be positive"));
        }
        if momenta.len() != amps.len() || momenta.len() < 2 {
            return Err(invalid_param(
                "momenta",
                "need matching momentum/amplitude grids with at least 2 points",
            ));
        }
        let step = momenta[1] - momenta[0];
        if !(step > 0.0) {
            return Err(invalid_param("momenta", "grid must be strictly increasing"));
        }
        for w in momenta.windows(2) {
            let d = w[1] - w[0];
            if (d - step).abs() > 1e-9 * step {
                return Err(invalid_param("momenta", "grid must be uniformly spaced"));
            }
        }
        Ok(WavePacket {
            p0,
            dp,
            x_c,
            mu,
            momenta,
            amps,
        })
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn dp(&self) -> f64 {
        self.dp
    }

    pub fn x_c(&self) -> f64 {
        self.x_c
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn momenta(&self) -> &[f64] {
        &self.momenta
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Uniform grid spacing Δp.
    pub fn momentum_step(&self) -> f64 {
        self.momenta[1] - self.momenta[0]
    }

    /// `2π Σ |a|² Δp`, summed left to right.
    pub fn norm(&self) -> f64 {
        let mut s = 0.0;
        for a in &self.amps {
            s += a.norm_sqr();
        }
        2.0 * std::f64::consts::PI * s * self.momentum_step()
    }

    /// `2π Σ p |a|² Δp` over the normalised density.
    pub fn mean_momentum(&self) -> f64 {
        let mut s = 0.0;
        let mut w = 0.0;
        for (p, a) in self.momenta.iter().zip(&self.amps) {
            let d = a.norm_sqr();
            s += p * d;
            w += d;
        }
        s / w
    }

    /// Free amplitude `∫ a(p-p0) exp(i p x - i p² t / 2μ) dp` by trapezoid
    /// quadrature, accumulated in fixed left-to-right order.
    pub fn position_amplitude(&self, x: f64, t_free: f64) -> Complex64 {
        let dp = self.momentum_step();
        let n = self.momenta.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, (p, a)) in self.momenta.iter().zip(&self.amps).enumerate() {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            let phase = p * x - p * p * t_free / (2.0 * self.mu);
            acc += a * Complex64::from_polar(w, phase);
        }
        acc * dp
    }

    /// Classical centre of the freely moving packet at time `t`.
    /// Offered as a helper; detection points stay explicit parameters.
    pub fn classical_peak(&self, t: f64) -> f64 {
        self.x_c + self.p0 * t / self.mu
    }

    /// True when every grid momentum has kinetic energy below `v`, i.e. the
    /// packet must tunnel through a barrier of that height.
    pub fn tunnels_below(&self, v: f64) -> bool {
        self.momenta
            .iter()
            .all(|p| p * p / (2.0 * self.mu) < v)
    }
}
