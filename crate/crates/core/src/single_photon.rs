//! Single-photon scattering amplitudes.
//!
//! Only the even (e) mode `C_e† = [C_R†(x) + C_L†(−x)]/√2` couples to the
//! atom; the odd mode passes freely. An e-mode photon of detuning
//! `Δ_k = k − Ω` picks up the transmission `t_k`. Recombining the modes gives
//! the right/left-mode transmission `t̄ = (t_k + 1)/2` and reflection
//! `r̄ = (t_k − 1)/2`.
//!
//! The two-point amplitudes are exact for any leg phase. The Markovian form
//! replaces the detuning-dependent phase `k ξ₁ = (1 + Δ_k/Ω) β₁` by `β₁`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::model::{
    effective_rates_n_point, gamma_complex_from_phases, AtomGeometry, AtomParams, Regime, I,
};

/// Amplitudes of a single photon scattered by a two-point giant atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SinglePhotonAmplitudes {
    /// e-mode transmission `t_k`.
    pub t_e: Complex64,
    /// Amplitude between the two coupling points, `f_k`.
    pub f_k: Complex64,
    /// Atomic excitation amplitude `e_k`.
    pub e_k: Complex64,
    /// Right-to-right transmission `t̄ = (t_k + 1)/2`.
    pub t_bar: Complex64,
    /// Right-to-left reflection `r̄ = (t_k − 1)/2`.
    pub r_bar: Complex64,
}

impl SinglePhotonAmplitudes {
    /// Reflection probability `R = |r̄|²`.
    pub fn reflection(&self) -> f64 {
        self.r_bar.norm_sqr()
    }

    /// Transmission probability `T = |t̄|²`.
    pub fn transmission(&self) -> f64 {
        self.t_bar.norm_sqr()
    }
}

/// Two-point amplitudes at detuning `delta` and leg phase `phase`.
///
/// With `u = e^{iφ}` and `D = 4Δ + iV²(1 + u)`:
/// `f = 4Δ/D`, `t = [4Δ − iV²(1 + ū)]/D`, `e = 2V(1 + u)/D`,
/// `t̄ = (4Δ − V² sin φ)/D`, `r̄ = −iV²(1 + cos φ)/D`.
///
/// `t̄` uses the real `sin φ` term obtained from `(t + 1)/2`.
fn two_point(delta: f64, phase: f64, v: f64) -> SinglePhotonAmplitudes {
    let gamma = v * v;
    let u = Complex64::from_polar(1.0, phase);
    let den = 4.0 * delta + I * gamma * (1.0 + u);
    SinglePhotonAmplitudes {
        t_e: (4.0 * delta - I * gamma * (1.0 + u.conj())) / den,
        f_k: 4.0 * delta / den,
        e_k: 2.0 * v * (1.0 + u) / den,
        t_bar: (4.0 * delta - gamma * phase.sin()) / den,
        r_bar: -I * gamma * (1.0 + phase.cos()) / den,
    }
}

/// Exact two-point amplitudes for a photon of wavevector `k > 0`.
///
/// The leg phase is the detuning-dependent `k ξ₁`.
pub fn amplitudes_exact(
    k: f64,
    geom: &AtomGeometry,
    params: &AtomParams,
) -> Result<SinglePhotonAmplitudes> {
    if geom.n() != 2 {
        return Err(Error::PointCount {
            op: "amplitudes_exact",
            expected: 2,
            got: geom.n(),
        });
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(invalid("k", format!("must be finite and > 0, got {k}")));
    }
    Ok(two_point(k - params.omega(), k * geom.points()[1], params.v()))
}

/// Markovian two-point amplitudes with the fixed leg phase `β₁`.
///
/// Here `t_e = (2Δ_k − iΓ_e*)/(2Δ_k + iΓ_e)`. This is the same arithmetic
/// path as [`amplitudes_exact`] with `k ξ₁` replaced by `β₁`.
pub fn amplitudes_markov(k: f64, beta1: f64, params: &AtomParams) -> SinglePhotonAmplitudes {
    two_point(k - params.omega(), beta1, params.v())
}

/// Closed-form Markovian reflection probability,
/// `R = Γ²(1 + cos β₁)² / [(4Δ_k − Γ sin β₁)² + Γ²(1 + cos β₁)²]`.
///
/// The crate computes `R` as `|r̄|²`; this formula is kept as an independent
/// check.
pub fn reflection_probability_closed_form(delta: f64, beta1: f64, gamma: f64) -> f64 {
    let c = gamma * (1.0 + beta1.cos());
    let s = 4.0 * delta - gamma * beta1.sin();
    c * c / (s * s + c * c)
}

/// Single-photon solution for `N` coupling points with arbitrary leg phases.
#[derive(Debug, Clone, PartialEq)]
pub struct NPointSinglePhoton {
    /// Complex emission rate seen by this photon, `Γ_A(φ)`.
    pub gamma_complex: Complex64,
    /// Atomic excitation amplitude.
    pub atom: Complex64,
    /// Photon amplitude in each interval: `interval[0] = 1` left of the atom,
    /// `interval[j]` between `ξ_{j−1}` and `ξ_j`, `interval[N]` = transmission.
    pub interval: Vec<Complex64>,
}

impl NPointSinglePhoton {
    /// e-mode transmission (amplitude right of the last point).
    pub fn transmission(&self) -> Complex64 {
        *self.interval.last().expect("at least one interval")
    }
}

/// Solves the single-excitation problem for `N` points of e-mode coupling
/// `V/N`, detuning `delta` and leg phases `phases` (`φ_j = k ξ_j`, or `β_j`
/// in the Markovian regime).
///
/// With `S = Σ_j e^{iφ_j}` the atom amplitude is `e = (V/N) S / (Δ + iΓ_A/2)`.
/// Each crossing updates the photon amplitude as
/// `c_{j+1} = c_j − i (V/N) e e^{−iφ_j}`. Then `c_N = (2Δ − iΓ_A*)/(2Δ + iΓ_A)`.
pub fn single_photon_n_point(delta: f64, phases: &[f64], v: f64) -> NPointSinglePhoton {
    let n = phases.len();
    let g = v / n as f64;
    let gamma_complex = gamma_complex_from_phases(phases, v);
    let s: Complex64 = phases.iter().map(|&p| Complex64::from_polar(1.0, p)).sum();
    let atom = g * s / (delta + I * gamma_complex / 2.0);
    let mut interval = Vec::with_capacity(n + 1);
    let mut c = Complex64::new(1.0, 0.0);
    interval.push(c);
    for &p in phases {
        c -= I * g * atom * Complex64::from_polar(1.0, -p);
        interval.push(c);
    }
    NPointSinglePhoton {
        gamma_complex,
        atom,
        interval,
    }
}

/// Markovian `N`-point e-mode transmission
/// `t_k^N = [2(k − Ω) − iΓ_A*] / [2(k − Ω) + iΓ_A]`.
pub fn transmission_n_point(k: f64, geom: &AtomGeometry, params: &AtomParams) -> Complex64 {
    let ga = effective_rates_n_point(geom, params).gamma_complex;
    let d = 2.0 * (k - params.omega());
    (d - I * ga.conj()) / (d + I * ga)
}

/// One row of a reflection sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    /// Detuning `Δ_k`.
    pub delta: f64,
    /// Markovian leg phase `β₁`.
    pub beta1: f64,
    /// Reflection probability `|r̄|²`.
    pub reflection: f64,
    /// Transmission amplitude `t̄`.
    pub t_bar: Complex64,
    /// Reflection amplitude `r̄`.
    pub r_bar: Complex64,
}

/// Evaluates `|r̄|²` on the grid `betas × deltas`.
///
/// Rows are ordered with `β₁` as the outer index and `Δ_k` as the inner
/// index. In the exact regime the phase is `(1 + Δ_k/Ω) β₁` and `k = Ω + Δ_k`
/// must be positive. An empty axis yields an empty table.
pub fn reflection_sweep(
    deltas: &[f64],
    betas: &[f64],
    regime: Regime,
    params: &AtomParams,
) -> Result<Vec<SweepRow>> {
    let omega = params.omega();
    if regime == Regime::Exact {
        if let Some(d) = deltas.iter().find(|&&d| !(omega + d > 0.0)) {
            return Err(invalid(
                "delta",
                format!("exact regime needs k = Ω + Δ > 0, got Δ = {d}"),
            ));
        }
    }
    let rows = betas
        .par_iter()
        .flat_map_iter(|&beta1| {
            deltas.iter().map(move |&delta| {
                let phase = match regime {
                    Regime::Markov => beta1,
                    Regime::Exact => (omega + delta) * (beta1 / omega),
                };
                let a = two_point(delta, phase, params.v());
                SweepRow {
                    delta,
                    beta1,
                    reflection: a.reflection(),
                    t_bar: a.t_bar,
                    r_bar: a.r_bar,
                }
            })
        })
        .collect();
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn params() -> AtomParams {
        AtomParams::new(100.0, 1.0).unwrap()
    }

    #[test]
    fn natural_resonance_reflects_fully() {
        let a = amplitudes_markov(100.0, 0.0, &params());
        assert!((a.t_e + 1.0).norm() < 1e-15);
        assert!(a.t_bar.norm() < 1e-15);
        assert!((a.r_bar + 1.0).norm() < 1e-15);
    }

    #[test]
    fn pi_phase_decouples() {
        let a = amplitudes_markov(100.3, PI, &params());
        assert!((a.t_e - 1.0).norm() < 1e-15);
        assert!(a.r_bar.norm() < 1e-15);
    }

    #[test]
    fn lamb_shifted_resonance() {
        let p = params();
        let a = amplitudes_markov(p.omega() + 0.25, FRAC_PI_2, &p);
        assert!((a.reflection() - 1.0).abs() < 1e-14);
        let r = reflection_probability_closed_form(0.25, FRAC_PI_2, 1.0);
        assert!((r - 1.0).abs() < 1e-14);
    }

    #[test]
    fn decomposition_identity() {
        let p = params();
        let g = AtomGeometry::two_point(1.3, p.k0()).unwrap();
        let a = amplitudes_exact(100.4, &g, &p).unwrap();
        assert!((a.t_bar - (a.t_e + 1.0) / 2.0).norm() < 1e-15);
        assert!((a.r_bar - (a.t_e - 1.0) / 2.0).norm() < 1e-15);
    }

    #[test]
    fn n_point_solver_matches_two_point() {
        let p = params();
        for &(d, phi) in &[(0.3, 0.7), (-1.2, 2.9), (0.0, 5.0)] {
            let a = two_point(d, phi, p.v());
            let s = single_photon_n_point(d, &[0.0, phi], p.v());
            assert!((s.transmission() - a.t_e).norm() < 1e-14);
            assert!((s.interval[1] - a.f_k).norm() < 1e-14);
            assert!((s.atom - a.e_k).norm() < 1e-14);
        }
    }

    #[test]
    fn exact_requires_two_points_and_positive_k() {
        let p = params();
        let g3 = AtomGeometry::equal_spacing(3, 1.0, p.k0()).unwrap();
        assert!(amplitudes_exact(100.0, &g3, &p).is_err());
        let g2 = AtomGeometry::two_point(1.0, p.k0()).unwrap();
        assert!(amplitudes_exact(-1.0, &g2, &p).is_err());
    }

    #[test]
    fn sweep_ordering_and_empty() {
        let p = params();
        let rows = reflection_sweep(&[0.0, 1.0], &[0.0, 1.0, 2.0], Regime::Markov, &p).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!((rows[1].beta1, rows[1].delta), (0.0, 1.0));
        assert_eq!((rows[2].beta1, rows[2].delta), (1.0, 0.0));
        assert!(reflection_sweep(&[], &[1.0], Regime::Exact, &p).unwrap().is_empty());
    }
}
