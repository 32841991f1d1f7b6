//! Randomized structural properties of the stationary theory: invariances
//! the closed forms must satisfy for every parameter set, not just the
//! frozen reference points.

use proptest::prelude::*;

use kerr_cavity::{
    bistability_boundary, derive_rates, stationary_photon_numbers, Mode, PhysicalParams,
};
use kerr_cavity::stationary::{dy_dn, y_of_n};
use kerr_cavity::NormalizedParams;

fn quantum(
    delta0: f64,
    delta1: f64,
    kappa_in: f64,
    kappa_out: f64,
    kappa_abs: f64,
    kappa_s: f64,
    p_in: f64,
) -> PhysicalParams {
    PhysicalParams::new(
        delta0,
        delta1,
        kappa_in,
        kappa_out,
        kappa_abs,
        kappa_s,
        p_in,
        Mode::Quantum,
    )
    .unwrap()
}

proptest! {
    /// All rates and detunings are inverse times: scaling every one of them
    /// (and the photon flux) by a common factor leaves the dimensionless
    /// photon numbers unchanged.
    #[test]
    fn roots_are_scale_covariant(
        delta0 in -8.0f64..8.0,
        delta1 in -5.0f64..5.0,
        kappa_in in 0.2f64..2.0,
        kappa_out in 0.0f64..1.5,
        kappa_abs in 0.0f64..0.8,
        kappa_s in 0.1f64..2.0,
        p_in in 0.0f64..6.0,
        log_s in -3.0f64..3.0,
    ) {
        let s = 10f64.powf(log_s);
        let base = quantum(delta0, delta1, kappa_in, kappa_out, kappa_abs, kappa_s, p_in);
        let scaled = quantum(
            delta0 * s,
            delta1 * s,
            kappa_in * s,
            kappa_out * s,
            kappa_abs * s,
            kappa_s * s,
            p_in * s,
        );
        let a = stationary_photon_numbers(&base).unwrap();
        let b = stationary_photon_numbers(&scaled).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x.n - y.n).abs() <= 1e-12 * (1.0 + x.n), "{} vs {}", x.n, y.n);
            prop_assert_eq!(x.stable, y.stable);
        }
    }

    /// With a monochromatic source the quantum normalization collapses onto
    /// the semiclassical one at half the per-photon shift, exactly.
    #[test]
    fn monochromatic_quantum_is_semiclassical_at_half_shift(
        delta0 in -8.0f64..8.0,
        delta1 in -5.0f64..5.0,
        kappa_in in 0.2f64..2.0,
        kappa_out in 0.0f64..1.5,
        kappa_abs in 0.0f64..0.8,
        p_in in 0.0f64..6.0,
    ) {
        let q = quantum(delta0, delta1 / 2.0, kappa_in, kappa_out, kappa_abs, 0.0, p_in);
        let sc = PhysicalParams::new(
            delta0, delta1, kappa_in, kappa_out, kappa_abs, 0.0, p_in, Mode::Semiclassical,
        ).unwrap();
        let a = stationary_photon_numbers(&q).unwrap();
        let b = stationary_photon_numbers(&sc).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(x.n, y.n);
            prop_assert_eq!(x.stable, y.stable);
            prop_assert_eq!(x.branch, y.branch);
        }
    }

    /// The drive curve depends on the detunings only through (D0 - n*D1)^2,
    /// so joint sign negation reproduces the identical root set.
    #[test]
    fn joint_detuning_negation_preserves_roots(
        delta0 in -8.0f64..8.0,
        delta1 in -5.0f64..5.0,
        kappa_in in 0.2f64..2.0,
        kappa_s in 0.1f64..2.0,
        p_in in 0.0f64..6.0,
    ) {
        let a = stationary_photon_numbers(&quantum(delta0, delta1, kappa_in, 0.3, 0.1, kappa_s, p_in)).unwrap();
        let b = stationary_photon_numbers(&quantum(-delta0, -delta1, kappa_in, 0.3, 0.1, kappa_s, p_in)).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(x.n, y.n);
            prop_assert_eq!(x.stable, y.stable);
        }
    }

    /// The closed-form slope matches a central difference of the drive curve.
    #[test]
    fn slope_matches_central_difference(
        y in 0.0f64..20.0,
        delta0 in -6.0f64..6.0,
        delta1 in -4.0f64..4.0,
        n in 0.0f64..10.0,
    ) {
        let np = NormalizedParams { y, delta0, delta1 };
        let h = 1e-4;
        let central = (y_of_n(n + h, &np) - y_of_n(f64::max(n - h, 0.0), &np))
            / (n + h - f64::max(n - h, 0.0));
        let slope = dy_dn(n, &np);
        let scale = 1.0 + slope.abs() + delta1 * delta1 * (1.0 + n) * (1.0 + n) * (1.0 + n);
        prop_assert!((slope - central).abs() <= 1e-5 * scale, "{slope} vs {central}");
    }

    /// Strictly inside the fold window the cubic has three roots; strictly
    /// outside it has one.
    #[test]
    fn root_count_follows_fold_window(
        d0_mag in 1.76f64..4.0,
        d1_mag in 0.1f64..3.0,
        negate in proptest::bool::ANY,
        t in 0.05f64..0.95,
        u in 0.05f64..0.95,
    ) {
        // kappa_eff = 2 kappa_cav = 2, so physical delta0 = 2 * D0 and
        // physical delta1 = D1; the drive grid is p_eff directly.
        let sign = if negate { -1.0 } else { 1.0 };
        let base = quantum(2.0 * sign * d0_mag, sign * d1_mag, 0.5, 0.5, 0.0, 1.0, 0.0);
        let b = bistability_boundary(&base).unwrap();
        prop_assert!(b.exists);
        let (p_lo, p_hi) = (b.p_minus.unwrap(), b.p_plus.unwrap());
        let kappa_cav = derive_rates(&base).unwrap().kappa_cav;
        let with_p_eff = |p_eff: f64| {
            let mut p = base;
            p.p_in = p_eff * kappa_cav / p.kappa_in;
            p
        };

        let inside = with_p_eff(p_lo + t * (p_hi - p_lo));
        prop_assert_eq!(stationary_photon_numbers(&inside).unwrap().len(), 3);

        let below = with_p_eff(p_lo * (1.0 - u));
        prop_assert_eq!(stationary_photon_numbers(&below).unwrap().len(), 1);

        let above = with_p_eff(p_hi * (1.0 + u));
        prop_assert_eq!(stationary_photon_numbers(&above).unwrap().len(), 1);
    }
}
