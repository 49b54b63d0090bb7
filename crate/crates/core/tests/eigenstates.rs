//! Equations-of-motion oracles for the two-excitation eigenstates.
//!
//! The stationary Schrödinger equation of the even-mode Hamiltonian with
//! two coupling points of strength `V/2` each is equivalent to:
//!
//! * free propagation `(−i∂₁ − i∂₂ − E) g = 0` away from the points;
//! * the jump `−i[g(x, ξ_m⁺) − g(x, ξ_m⁻)] + V/(2√2) e(x) = 0` across each
//!   point, for `x` away from the points;
//! * `i e′(x) = (Ω − E) e(x) + V/√2 Σ_m g(x, ξ_m)`, with `g` evaluated as the
//!   mean of its one-sided limits.
//!
//! These are checked here directly against the piecewise closed forms.
//! Derivatives use a fifth-order central stencil.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use giant_atom::model::{effective_rates_two_point, AtomGeometry, AtomParams, Regime};
use giant_atom::two_photon_eigen::{
    bethe_ratios, bethe_ratios_n, bound_region_coefficients, bound_region_coefficients_n,
    e_b_amplitude_n, e_f_amplitude_n, bound_edge_ratio, BetheState, BoundEigenstate, TwoPhotonPair,
};
use num_complex::Complex64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn deriv(f: impl Fn(f64) -> Complex64, x: f64, h: f64) -> Complex64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

fn bethe_state(beta1: f64, omega: f64, k: f64, p: f64, regime: Regime) -> (BetheState, AtomParams, f64) {
    let params = AtomParams::new(omega, 1.0).unwrap();
    let geom = AtomGeometry::two_point(beta1, params.k0()).unwrap();
    let pair = TwoPhotonPair::new(k, p);
    let c = bethe_ratios(&pair, &geom, &params, regime).unwrap();
    let xi = geom.points()[1];
    (BetheState::new(&pair, &geom, &params, &c).unwrap(), params, xi)
}

/// Maximum relative jump-condition residual of a Bethe state over a probe set.
fn jump_residual(st: &BetheState, params: &AtomParams, xi: f64, probes: &[(f64, f64)]) -> f64 {
    let c = params.v() / (2.0 * SQRT_2);
    let eps = 1e-11;
    probes
        .iter()
        .map(|&(x, m)| {
            let jump = st.g(x, m + eps) - st.g(x, m - eps);
            let _ = xi;
            (-I * jump + c * st.e(x)).norm() / st.e(x).norm().max(1e-3)
        })
        .fold(0.0, f64::max)
}

#[test]
fn bethe_jump_conditions_hold_exactly_on_outer_strips() {
    // With exact leg phases the crossings of the outer strips (one photon
    // outside the atom) and the crossing of x = 0 by a photon partnered
    // between the points are satisfied identically.
    for &(beta1, dk, dp) in &[(0.7, 0.3, -0.4), (FRAC_PI_2, 0.1, 0.9), (2.5, -0.6, 0.2)] {
        let omega = 3.0;
        let (st, params, xi) = bethe_state(beta1, omega, omega + dk, omega + dp, Regime::Exact);
        let mut probes = Vec::new();
        for &x in &[-1.3, -0.2, xi + 0.8, 1.7 * xi + 0.5] {
            probes.push((x, 0.0));
            probes.push((x, xi));
        }
        probes.push((0.4 * xi, 0.0));
        probes.push((0.7 * xi, 0.0));
        let r = jump_residual(&st, &params, xi, &probes);
        assert!(r < 1e-9, "β₁={beta1}: {r}");
    }
}

#[test]
fn bethe_inner_crossing_is_not_closed_by_the_markov_ratio() {
    // With A₁/B₁ fixed by the outer boundary relation, the region-4 plane
    // waves cannot also satisfy the crossing of ξ₁ (it closes only for the
    // symmetric choice A₁ = B₁). The residual stays O(1) as Ω grows; the
    // strip has vanishing width in the Markovian limit, so it does not
    // enter any scattering observable.
    for &omega in &[1e2, 1e4] {
        let (st, params, xi) = bethe_state(1.3, omega, omega + 0.3, omega - 0.5, Regime::Exact);
        let r = jump_residual(&st, &params, xi, &[(0.3 * xi, xi)]);
        assert!(r > 0.1, "Ω={omega}: {r}");
    }
}

#[test]
fn bethe_free_propagation_in_all_regions() {
    let (st, params, xi) = bethe_state(1.1, 4.0, 4.3, 3.6, Regime::Exact);
    let e_tot = st.energy();
    let h = 1e-4 / params.gamma();
    let probes = [(-2.0, -1.0), (-1.0, 0.5 * xi), (-1.0, xi + 1.0), (0.2 * xi, 0.7 * xi), (0.5 * xi, xi + 2.0), (xi + 1.0, xi + 3.0)];
    for &(x1, x2) in &probes {
        let d1 = deriv(|y| st.g(y, x2), x1, h);
        let d2 = deriv(|y| st.g(x1, y), x2, h);
        let res = -I * d1 - I * d2 - e_tot * st.g(x1, x2);
        assert!(res.norm() < 1e-8, "({x1}, {x2}): {res}");
    }
}

#[test]
fn bethe_exchange_symmetry() {
    let (st, _, xi) = bethe_state(2.0, 5.0, 5.4, 4.7, Regime::Markov);
    for i in 0..30 {
        let x1 = -3.0 + 0.23 * i as f64;
        let x2 = 2.5 - 0.19 * i as f64 + 0.1 * xi;
        assert!((st.g(x1, x2) - st.g(x2, x1)).norm() < 1e-12);
    }
}

#[test]
fn bethe_markov_boundary_identity() {
    // k, p ≈ Ω so that the leg phases kξ₁ ≈ pξ₁ ≈ β₁ and Γ_g ξ₁ ≪ 1.
    let omega = 1.0e4;
    for &beta1 in &[0.4, FRAC_PI_2, 2.2] {
        let (st, _, xi) = bethe_state(beta1, omega, omega + 0.35, omega - 0.6, Regime::Markov);
        let lhs = st.e(-1e-12) * Complex64::from_polar(1.0, beta1);
        let rhs = st.e(xi + 1e-12);
        let scale = lhs.norm().max(rhs.norm());
        assert!((lhs - rhs).norm() < 2e-3 * scale, "β₁={beta1}: {lhs} vs {rhs}");
    }
}

#[test]
fn bethe_decoupled_phase_is_free() {
    // At β₁ = π the Markovian amplitudes are all unity: free propagation.
    let params = AtomParams::new(6.0, 1.0).unwrap();
    let geom = AtomGeometry::two_point(PI, params.k0()).unwrap();
    let pair = TwoPhotonPair::new(6.2, 5.9);
    let c = bethe_ratios(&pair, &geom, &params, Regime::Markov).unwrap();
    for l in [0usize, 1, 2, 4, 5] {
        assert!((c.a_ratio[l] - 1.0).norm() < 1e-15, "A region {}", l + 1);
        assert!((c.b_ratio[l] - 1.0).norm() < 1e-15, "B region {}", l + 1);
    }
    assert!((c.a1_over_b1 - 1.0).norm() < 1e-12);
}

#[test]
fn n_point_bethe_reduces_to_two_point() {
    let params = AtomParams::new(7.0, 1.0).unwrap();
    for &beta1 in &[0.3, 1.9, 2.8] {
        let geom = AtomGeometry::two_point(beta1, params.k0()).unwrap();
        let pair = TwoPhotonPair::new(7.4, 6.8);
        let two = bethe_ratios(&pair, &geom, &params, Regime::Markov).unwrap();
        let n = bethe_ratios_n(&pair, &geom, &params);
        for (i, j) in [(0usize, 0usize), (1, 1), (2, 2), (3, 4), (4, 5)] {
            assert!((n.a_ratio[i] - two.a_ratio[j]).norm() < 1e-13);
            assert!((n.b_ratio[i] - two.b_ratio[j]).norm() < 1e-13);
        }
        assert!((n.a1_over_b1 - two.a1_over_b1).norm() < 1e-13);
        // Outer-region atomic amplitudes agree too.
        let st = BetheState::new(&pair, &geom, &params, &two).unwrap();
        for &x in &[-1.5, -0.1, geom.last_point() + 0.2, geom.last_point() + 2.0] {
            let en = e_f_amplitude_n(x, &pair, &geom, &params, &n).unwrap();
            assert!((en - st.e(x)).norm() < 1e-12, "x={x}");
        }
    }
}

#[test]
fn n_point_bethe_markov_boundary_identity() {
    let omega = 1.0e4;
    let params = AtomParams::new(omega, 1.0).unwrap();
    let geom = AtomGeometry::from_phases(&[0.0, 0.9, 2.3, 2.9], params.k0()).unwrap();
    let pair = TwoPhotonPair::new(omega + 0.4, omega - 0.25);
    let c = bethe_ratios_n(&pair, &geom, &params);
    let lhs = e_f_amplitude_n(-1e-12, &pair, &geom, &params, &c).unwrap()
        * Complex64::from_polar(1.0, geom.phase(3));
    let rhs = e_f_amplitude_n(geom.last_point() + 1e-12, &pair, &geom, &params, &c).unwrap();
    assert!((lhs - rhs).norm() < 2e-3 * lhs.norm(), "{lhs} vs {rhs}");
}

fn bound_state(beta1: f64, omega: f64, de: f64) -> (BoundEigenstate, AtomParams, AtomGeometry, f64) {
    let params = AtomParams::new(omega, 1.0).unwrap();
    let geom = AtomGeometry::two_point(beta1, params.k0()).unwrap();
    let e_tot = 2.0 * omega + de;
    let c = bound_region_coefficients(e_tot, &geom, &params).unwrap();
    (BoundEigenstate::new(e_tot, &geom, &params, &c).unwrap(), params, geom, e_tot)
}

#[test]
fn bound_ratio_matches_closed_form_at_any_delay() {
    for &(beta1, omega, de) in &[(0.8, 2.0, 0.3), (FRAC_PI_2, 5.0, -0.7), (2.4, 1.5, 1.1), (6.0, 3.0, 0.2)] {
        let (st, params, geom, e_tot) = bound_state(beta1, omega, de);
        let xi = geom.points()[1];
        let ratio = st.e(-1e-13) / st.e(xi + 1e-13);
        let closed = bound_edge_ratio(e_tot, &geom, &params);
        assert!((ratio - closed).norm() < 1e-9 * closed.norm(), "β₁={beta1}: {ratio} vs {closed}");
    }
}

#[test]
fn bound_ratio_markov_limit() {
    let omega = 1.0e5;
    for &beta1 in &[0.5, 2.0] {
        let (st, _, geom, _) = bound_state(beta1, omega, 0.4);
        let xi = geom.points()[1];
        let lhs = st.e(-1e-13) * Complex64::from_polar(1.0, beta1);
        let rhs = st.e(xi + 1e-13);
        assert!((lhs - rhs).norm() < 1e-3 * lhs.norm());
    }
}

#[test]
fn bound_outer_equations_hold() {
    for &(beta1, omega, de) in &[(0.8, 2.0, 0.3), (2.4, 1.5, 1.1)] {
        let (st, params, geom, e_tot) = bound_state(beta1, omega, de);
        let xi = geom.points()[1];
        let c = params.v() / (2.0 * SQRT_2);
        let eps = 1e-12;
        // x₁ < 0 strip: second photon crosses both points.
        for &x in &[-0.4, -2.0] {
            for &m in &[0.0, xi] {
                let res = -I * (st.g(x, m + eps) - st.g(x, m - eps)) + c * st.e(x);
                assert!(res.norm() < 1e-9 * st.e(x).norm().max(1e-3), "x={x} m={m}: {res}");
            }
        }
        // x₂ > ξ₁ strip: first photon crosses both points.
        for &x in &[xi + 0.3, xi + 2.5] {
            for &m in &[0.0, xi] {
                let res = -I * (st.g(m + eps, x) - st.g(m - eps, x)) + c * st.e(x);
                assert!(res.norm() < 1e-9 * st.e(x).norm().max(1e-3), "x={x} m={m}: {res}");
            }
        }
        let h = 1e-4 / params.gamma();
        for &x in &[-1.5, -0.3, xi + 0.4, xi + 2.0] {
            let lhs = I * deriv(|y| st.e(y), x, h);
            let rhs = (params.omega() - e_tot) * st.e(x)
                + params.v() / SQRT_2 * (st.g(x, 0.0) + st.g(x, xi));
            assert!((lhs - rhs).norm() < 1e-8 * st.e(x).norm().max(1e-3), "x={x}");
        }
    }
}

#[test]
fn bound_region_six_tends_to_markov_transmission() {
    use giant_atom::two_photon_eigen::bound_transmission_markov;
    let beta1 = 1.2;
    let mut last_err = f64::INFINITY;
    for &omega in &[1e2, 1e3, 1e4] {
        let params = AtomParams::new(omega, 1.0).unwrap();
        let geom = AtomGeometry::two_point(beta1, params.k0()).unwrap();
        let e_tot = 2.0 * omega + 0.6;
        let t6 = bound_region_coefficients(e_tot, &geom, &params).unwrap().t[5];
        let rates = effective_rates_two_point(beta1, &params);
        let tb = bound_transmission_markov(e_tot, &params, &rates);
        let err = (t6 - tb).norm();
        let gxi = rates.gamma_real * geom.points()[1];
        assert!(err < 10.0 * gxi, "Ω={omega}: err {err} vs Γξ {gxi}");
        assert!(err < last_err);
        last_err = err;
    }
}

#[test]
fn n_point_bound_outer_amplitudes_reduce_to_two_point() {
    let params = AtomParams::new(3.0, 1.0).unwrap();
    let geom = AtomGeometry::two_point(0.9, params.k0()).unwrap();
    let e_tot = 6.4;
    let two = bound_region_coefficients(e_tot, &geom, &params).unwrap();
    let st = BoundEigenstate::new(e_tot, &geom, &params, &two).unwrap();
    let n = bound_region_coefficients_n(e_tot, &geom, &params).unwrap();
    for &x in &[-2.0, -0.3, geom.last_point() + 0.5, geom.last_point() + 3.0] {
        let en = e_b_amplitude_n(x, e_tot, &geom, &params, &n).unwrap();
        assert!((en - st.e(x)).norm() < 1e-12 * st.e(x).norm().max(1.0), "x={x}");
    }
    assert!(e_b_amplitude_n(0.5 * geom.last_point(), e_tot, &geom, &params, &n).is_err());
}

#[test]
fn bound_decays_far_from_the_diagonal() {
    let (st, _, _, _) = bound_state(0.6, 2.0, 0.2);
    let near = st.g(-5.0, -5.0).norm();
    let far = st.g(-60.0, -5.0).norm();
    assert!(far < 1e-6 * near);
    assert!(st.e(-80.0).norm() < 1e-12);
}
