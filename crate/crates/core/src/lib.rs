//! Quantum traversal-time amplitudes and Larmor clocks in one dimension.
//!
//! The library computes the complex amplitude distribution `A(x ← G₀ | τ)`
//! of the net duration τ a transmitted particle spends inside a region
//! `[0, d]`, by scanning transmission amplitudes over shift potentials
//! `λ θ[0,d]` and Fourier-inverting the scan. On top of that sit the exact
//! spin-j Larmor clock, its weak (non-perturbing) limit with the complex
//! mean time τ̄, the spin-1/2 readout angles, a two-arm interferometer
//! model, and an exact lattice path-sum oracle that validates the
//! duration-binning / shift-phase duality to machine precision.

// validation guards are written `!(x > 0.0)` so that NaN fails them too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod export;
pub mod interferometer;
pub mod larmor_clock;
pub mod lattice_oracle;
pub mod scattering;
pub mod tau_amplitude;
pub mod wavepacket;

pub use error::{Error, Result};
pub use interferometer::{solve_alphas, AlphaPair, TwoPathConfig};
pub use larmor_clock::{ClockReadout, SpinState};
pub use lattice_oracle::{DiscreteTauAmplitudes, EquivalenceReport, LatticeSpec};
pub use scattering::{BarrierSpec, LambdaAmplitude};
pub use tau_amplitude::{ComplexTime, Taper, TauAmplitudeDistribution, WindowMeta};
pub use wavepacket::WavePacket;

pub type Complex = num_complex::Complex64;
