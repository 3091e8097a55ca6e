use approx::assert_relative_eq;
use congestion::numerics::fit_log_log;
use congestion::pressure_law::{
    angle_of_psi, dphi_dtheta, dpsi_dtheta, f_u, phi, phi_of_angle, psi, psi_inverse, psi_of_angle,
    PressureLaw,
};
use congestion::Error;
use proptest::prelude::*;

fn unit() -> PressureLaw {
    PressureLaw::new(1.0, 2.0).unwrap()
}

/// `p(ρ) = (1/ρ − 1/ρ*)^(−γ)` evaluated directly.
fn pressure_oracle(rho: f64, rho_star: f64, gamma: f64) -> f64 {
    (1.0 / rho - 1.0 / rho_star).powf(-gamma)
}

#[test]
fn closed_form_values() {
    let law = unit();
    assert_eq!(law.p(0.5).unwrap(), 1.0);
    assert_relative_eq!(law.p(0.99).unwrap(), 9801.0, max_relative = 1e-12);
    assert_relative_eq!(law.p_prime(0.8).unwrap(), 200.0, max_relative = 1e-12);
}

#[test]
fn domain_edges_are_errors() {
    let law = unit();
    for rho in [0.0, -0.1, 1.0, 1.5, 1.0 - 1e-14] {
        assert!(
            matches!(law.p(rho), Err(Error::Domain { .. })),
            "rho = {rho}"
        );
    }
    assert!(PressureLaw::new(1.0, 0.0).is_err());
    assert!(PressureLaw::new(-1.0, 2.0).is_err());
}

#[test]
fn derivatives_match_central_differences() {
    for (rho_star, gamma) in [(1.0, 2.0), (1.0, 1.0), (2.0, 3.0), (0.7, 1.5)] {
        let law = PressureLaw::new(rho_star, gamma).unwrap();
        for k in 1..20 {
            let rho = rho_star * k as f64 / 20.0;
            let h = 1e-6 * rho;
            let fd1 = (pressure_oracle(rho + h, rho_star, gamma)
                - pressure_oracle(rho - h, rho_star, gamma))
                / (2.0 * h);
            assert_relative_eq!(law.p_prime(rho).unwrap(), fd1, max_relative = 1e-6);
            let fd2 = (law.p_prime(rho + h).unwrap() - law.p_prime(rho - h).unwrap()) / (2.0 * h);
            assert_relative_eq!(law.p_second(rho).unwrap(), fd2, max_relative = 1e-6);
        }
    }
}

#[test]
fn derivatives_positive_on_log_grid_toward_congestion() {
    let law = unit();
    for k in 1..=12 {
        let rho = 1.0 - 10f64.powi(-k);
        assert!(law.p(rho).unwrap() > 0.0);
        assert!(law.p_prime(rho).unwrap() > 0.0);
        assert!(law.p_second(rho).unwrap() > 0.0);
    }
}

#[test]
fn inverse_matches_explicit_formula() {
    for gamma in [1.0, 2.0, 3.0] {
        let law = PressureLaw::new(1.0, gamma).unwrap();
        for eps in [1.0, 1e-2, 1e-5] {
            let scaled = law.scaled(eps).unwrap();
            for pbar in [0.1, 1.0, 7.0] {
                let expected = 1.0 / (1.0 + (eps / pbar).powf(1.0 / gamma));
                assert_relative_eq!(
                    scaled.p_inverse(pbar).unwrap(),
                    expected,
                    max_relative = 1e-14
                );
            }
            assert!(scaled.p_inverse(0.0).is_err());
            assert!(scaled.p_inverse(-1.0).is_err());
        }
    }
    assert_eq!(unit().scaled(1.0).unwrap().p_inverse(1.0).unwrap(), 0.5);
}

#[test]
fn congestion_gap_scales_like_eps_to_one_over_gamma() {
    for gamma in [1.0, 2.0, 3.0] {
        let law = PressureLaw::new(1.0, gamma).unwrap();
        let points: Vec<(f64, f64)> = (2..=6)
            .map(|k| {
                let eps = 10f64.powi(-k);
                (eps, 1.0 - law.scaled(eps).unwrap().p_inverse(1.0).unwrap())
            })
            .collect();
        let fit = fit_log_log(&points).unwrap();
        assert!(
            (fit.slope - 1.0 / gamma).abs() <= 0.02,
            "gamma {gamma}: slope {}",
            fit.slope
        );
    }
}

#[test]
fn potentials_vanish_at_zero_and_have_parity() {
    assert_eq!(psi(0.0).unwrap(), 0.0);
    assert_eq!(phi(0.0).unwrap(), 0.0);
    for k in -99..=99 {
        let u = k as f64 / 100.0;
        let (minus, plus) = (psi(-u).unwrap(), psi(u).unwrap());
        assert!((minus + plus).abs() <= 1e-14 * plus.abs().max(1.0));
        assert_eq!(phi(-u).unwrap(), phi(u).unwrap());
        // Ψ(u) = Φ(u) + ln(1 + u).
        assert!((psi(u).unwrap() - phi(u).unwrap() - u.ln_1p()).abs() <= 1e-12);
    }
    assert!(psi(1.0).is_err());
    assert!(phi(-1.0).is_err());
}

#[test]
fn psi_inverse_round_trip_near_endpoints() {
    for u in [-1.0 + 1e-6, -0.5, 0.0, 0.3, 1.0 - 1e-6] {
        assert!((psi_inverse(psi(u).unwrap()) - u).abs() <= 1e-12);
    }
}

#[test]
fn angle_forms_of_potentials() {
    for k in 1..100 {
        let theta = std::f64::consts::PI * k as f64 / 100.0;
        let half_tan = (theta / 2.0).tan();
        assert_relative_eq!(psi_of_angle(theta), -half_tan.ln(), epsilon = 1e-12);
        assert_relative_eq!(phi_of_angle(theta), -theta.sin().ln(), epsilon = 1e-12);
        assert_relative_eq!(angle_of_psi(psi_of_angle(theta)), theta, epsilon = 1e-12);
    }
}

#[test]
fn angle_derivatives_match_finite_differences() {
    let h = 1e-6;
    let mut theta = 0.05;
    while theta < std::f64::consts::PI - 0.05 {
        let fd_psi = (psi_of_angle(theta + h) - psi_of_angle(theta - h)) / (2.0 * h);
        let fd_phi = (phi_of_angle(theta + h) - phi_of_angle(theta - h)) / (2.0 * h);
        assert_relative_eq!(dpsi_dtheta(theta), fd_psi, max_relative = 1e-6);
        assert!((dphi_dtheta(theta) - fd_phi).abs() <= 1e-6 * fd_phi.abs().max(1.0));
        theta += 0.01;
    }
}

#[test]
fn f_u_is_convex_with_minimum_at_u() {
    assert_eq!(f_u(0.0, 0.0).unwrap(), 0.0);
    let grid: Vec<f64> = (0..=1998).map(|k| -0.999 + k as f64 * 0.001).collect();
    for k in -9..=9 {
        let u = k as f64 / 10.0;
        let values: Vec<f64> = grid.iter().map(|&v| f_u(u, v).unwrap()).collect();
        let at_u = f_u(u, u).unwrap();
        for (&v, &f) in grid.iter().zip(&values) {
            if (v - u).abs() > 1e-9 {
                assert!(f - at_u > 0.0, "u = {u}, v = {v}");
            }
        }
        assert!(values
            .windows(3)
            .all(|w| w[0] - 2.0 * w[1] + w[2] >= -1e-12));
    }
}

proptest! {
    #[test]
    fn inverse_round_trips(rho in 0.01f64..0.99, log_eps in -8.0f64..0.0, gamma in 1.0f64..4.0) {
        let law = PressureLaw::new(1.0, gamma).unwrap();
        let scaled = law.scaled(10f64.powf(log_eps)).unwrap();
        let back = scaled.p_inverse(scaled.pressure(rho).unwrap()).unwrap();
        prop_assert!((back - rho).abs() <= 1e-12 * rho.max(1.0));
    }

    #[test]
    fn pressure_is_increasing(a in 0.01f64..0.99, b in 0.01f64..0.99, gamma in 1.0f64..4.0) {
        prop_assume!(a < b);
        let law = PressureLaw::new(1.0, gamma).unwrap();
        prop_assert!(law.p(a).unwrap() < law.p(b).unwrap());
    }

    #[test]
    fn f_u_argmin_on_grid(u in -0.99f64..0.99) {
        let argmin = (0..=1998)
            .map(|k| -0.999 + k as f64 * 0.001)
            .min_by(|x, y| f_u(u, *x).unwrap().total_cmp(&f_u(u, *y).unwrap()))
            .unwrap();
        prop_assert!((argmin - u).abs() <= 0.001);
    }
}
