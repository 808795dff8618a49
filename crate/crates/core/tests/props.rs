//! Property tests for the numerical invariants.

use num_complex::Complex64;
use proptest::prelude::*;

use tauclock_core::interferometer::solve_alphas;
use tauclock_core::larmor_clock::{gamma_kernel, inner, SpinState};
use tauclock_core::lattice_oracle::{equivalence_report, random_unitary, LatticeSpec};
use tauclock_core::scattering::{
    piecewise_transmission, rect_transmission, transmission_and_reflection, BarrierSpec,
};
use tauclock_core::tau_amplitude::{invert_to_tau, nth_moment, Taper};
use tauclock_core::scattering::LambdaAmplitude;
use tauclock_core::wavepacket::WavePacket;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn packet_norm_and_mean(
        p0 in 0.5f64..3.0,
        dp_rel in 0.01f64..0.08,
        x_c in -50.0f64..0.0,
        n_exp in 5u32..10,
        span in 6.0f64..9.0,
    ) {
        let dp = dp_rel * p0;
        let packet = WavePacket::gaussian(p0, dp, x_c, 1.0, 1 << n_exp, span).unwrap();
        prop_assert!((packet.norm() - 1.0).abs() < 1e-10);
        prop_assert!((packet.mean_momentum() - p0).abs() < 1e-6 * p0);
    }

    #[test]
    fn unitarity_and_closed_form(
        p in 0.2f64..3.0,
        v in -2.0f64..3.0,
        d in 0.1f64..20.0,
    ) {
        let barrier = BarrierSpec::rectangular(v, d).unwrap();
        let (t, r) = transmission_and_reflection(p, &barrier, 1.0).unwrap();
        prop_assert!((t.norm_sqr() + r.norm_sqr() - 1.0).abs() < 1e-10);
        prop_assert!(t.norm() <= 1.0 + 1e-12);
        let exact = rect_transmission(p, v, d, 1.0).unwrap();
        prop_assert!((t - exact).norm() <= 1e-12 * exact.norm().max(1e-300));
    }

    #[test]
    fn segment_splitting_identity(
        p in 0.3f64..2.5,
        v in -1.5f64..2.5,
        d in 0.5f64..10.0,
        cut in 0.1f64..0.9,
    ) {
        let whole = BarrierSpec::rectangular(v, d).unwrap();
        let split = BarrierSpec::piecewise(vec![(cut * d, v), ((1.0 - cut) * d, v)]).unwrap();
        let a = piecewise_transmission(p, &whole, 1.0).unwrap();
        let b = piecewise_transmission(p, &split, 1.0).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300));
    }

    #[test]
    fn lattice_paths_match_shift_dft(
        seed in 0u64..10_000,
        n_sites in 2usize..5,
        n_steps in 1usize..7,
    ) {
        let hop = random_unitary(n_sites, seed);
        let region: Vec<usize> = (0..n_sites - 1).collect(); // proper subset
        let lattice = LatticeSpec::new(
            n_sites,
            &region[..1.max(seed as usize % (n_sites - 1))],
            hop,
            n_steps,
            0.7,
            seed as usize % n_sites,
            (seed as usize / 3) % n_sites,
        )
        .unwrap();
        let report = equivalence_report(&lattice);
        prop_assert!(report.max_discrepancy < 1e-12);
        prop_assert!(report.completeness_error < 1e-12);
    }

    #[test]
    fn alpha_solver_round_trip(
        tau1 in -5.0f64..5.0,
        gap in 0.1f64..10.0,
        re in -30.0f64..30.0,
        im in -30.0f64..30.0,
    ) {
        let tau2 = tau1 + gap;
        let target = Complex64::new(re, im);
        let pair = solve_alphas(tau1, tau2, target).unwrap();
        prop_assert!((pair.alpha1 + pair.alpha2 - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let rebuilt = pair.alpha1 * tau1 + pair.alpha2 * tau2;
        prop_assert!((rebuilt - target).norm() < 1e-12 * target.norm().max(1.0));
    }

    #[test]
    fn kernel_at_zero_is_overlap(
        phases in prop::collection::vec(-3.0f64..3.0, 4),
        weights in prop::collection::vec(0.1f64..1.0, 4),
    ) {
        let amps: Vec<Complex64> = phases
            .iter()
            .zip(&weights)
            .map(|(ph, w)| Complex64::from_polar(*w, *ph))
            .collect();
        let beta = SpinState::new(3, amps.clone()).unwrap();
        let gamma = SpinState::new(3, amps.iter().rev().cloned().collect()).unwrap();
        let k = gamma_kernel(0.0, 1.3, &beta, &gamma).unwrap();
        let ov = inner(&beta, &gamma).unwrap();
        prop_assert!((k - ov).norm() < 1e-14);
    }

    #[test]
    fn positive_spike_mixture_mean(
        taus in prop::collection::vec(1.0f64..9.0, 3),
        weights in prop::collection::vec(0.2f64..1.0, 3),
    ) {
        // positive weights, separated spikes: the reconstructed first moment
        // matches the weighted mean
        let mut taus = taus.clone();
        taus.sort_by(f64::total_cmp);
        prop_assume!(taus.windows(2).all(|w| w[1] - w[0] > 0.8));

        let lmax = 24.0;
        let n = 2048;
        let dl = 2.0 * lmax / n as f64;
        let scan: Vec<LambdaAmplitude> = (0..n)
            .map(|k| {
                let lambda = -lmax + k as f64 * dl;
                let value = taus
                    .iter()
                    .zip(&weights)
                    .map(|(t, w)| Complex64::from_polar(*w, -lambda * t))
                    .sum();
                LambdaAmplitude { lambda, value }
            })
            .collect();
        let dist = invert_to_tau(&scan, 10.0, Taper::RaisedCosine { fraction: 0.2 }).unwrap();
        let m1 = nth_moment(&dist, 1).unwrap();
        let wsum: f64 = weights.iter().sum();
        let expected: f64 = taus.iter().zip(&weights).map(|(t, w)| t * w).sum::<f64>() / wsum;
        prop_assert!(
            (m1 - Complex64::new(expected, 0.0)).norm() < 5e-3 * expected,
            "m1 = {m1} vs {expected}"
        );
    }
}
