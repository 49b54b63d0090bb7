//! Parameter records, coupling geometry and effective rates.
//!
//! Units follow the usual waveguide-QED convention `ħ = v_g = 1`, so
//! wavevectors, energies and inverse lengths share one unit. The decay rate of
//! a single coupling point is `Γ = V²`.
//!
//! A giant atom couples to the waveguide at `N` points `ξ₀ = 0 < ξ₁ < … <
//! ξ_{N−1}`. In the even-mode picture each point carries coupling `V/N`, and
//! interference between the legs renormalises the emission into a complex rate
//! `Γ_A` (called `Γ_e` for two points). Its real part is the effective decay
//! rate `Γ_N` (`Γ_g`), and half its imaginary part is the interference-induced
//! Lamb shift `Δ_L`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Imaginary unit, used pervasively in the closed-form amplitudes.
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which phase prescription an amplitude uses.
///
/// The Markovian switch is always explicit and never inferred from parameter
/// magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Detuning-independent leg phases `β_j = Ω ξ_j`.
    Markov,
    /// Detuning-dependent leg phases `k ξ_j`.
    Exact,
}

/// Atom transition frequency and coupling amplitude.
///
/// `gamma` is derived and always equals `v * v` bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomParams {
    omega: f64,
    v: f64,
    gamma: f64,
}

impl AtomParams {
    /// Validates `omega > 0` and `v > 0` (both finite).
    pub fn new(omega: f64, v: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(invalid("omega", format!("must be finite and > 0, got {omega}")));
        }
        if !(v.is_finite() && v > 0.0) {
            return Err(invalid("v", format!("must be finite and > 0, got {v}")));
        }
        Ok(Self {
            omega,
            v,
            gamma: v * v,
        })
    }

    /// Builds the parameters from the bare decay rate `Γ` instead of `V`.
    ///
    /// `V = √Γ`, and the stored `Γ` is recomputed as `V²` so the invariant
    /// `gamma == v * v` holds exactly (it may differ from the input by one
    /// ulp).
    pub fn from_gamma(omega: f64, gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(invalid("gamma", format!("must be finite and > 0, got {gamma}")));
        }
        Self::new(omega, gamma.sqrt())
    }

    /// Atom transition frequency `Ω`.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Coupling amplitude `V`.
    pub fn v(&self) -> f64 {
        self.v
    }

    /// Bare decay rate `Γ = V²`.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Resonant wavevector `k₀ = Ω / v_g = Ω`.
    pub fn k0(&self) -> f64 {
        self.omega
    }
}

/// Ordered coupling positions of a giant atom.
///
/// The first point is always the origin and positions strictly increase. The
/// Markovian leg phase of point `j` is `k₀ ξ_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomGeometry {
    points: Vec<f64>,
    k0: f64,
}

impl AtomGeometry {
    /// Builds a geometry from explicit positions.
    ///
    /// `points[0]` must be exactly `0` and the list strictly increasing.
    pub fn from_positions(points: Vec<f64>, k0: f64) -> Result<Self> {
        if !(k0.is_finite() && k0 > 0.0) {
            return Err(invalid("k0", format!("must be finite and > 0, got {k0}")));
        }
        if points.is_empty() {
            return Err(Error::InvalidGeometry("at least one coupling point is required".into()));
        }
        if points[0] != 0.0 {
            return Err(Error::InvalidGeometry(format!(
                "first coupling point must be at the origin, got {}",
                points[0]
            )));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGeometry("coupling positions must be finite".into()));
        }
        if let Some(w) = points.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGeometry(format!(
                "coupling positions must strictly increase ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Self { points, k0 })
    }

    /// Builds a geometry whose Markovian phases are `phases` (`ξ_j = β_j / k₀`).
    pub fn from_phases(phases: &[f64], k0: f64) -> Result<Self> {
        Self::from_positions(phases.iter().map(|b| b / k0).collect(), k0)
    }

    /// Two coupling points separated by the Markovian phase `β₁ > 0`.
    pub fn two_point(beta1: f64, k0: f64) -> Result<Self> {
        Self::from_phases(&[0.0, beta1], k0)
    }

    /// `n` equally spaced points with nearest-neighbour phase `beta > 0`.
    pub fn equal_spacing(n: usize, beta: f64, k0: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGeometry("n must be at least 1".into()));
        }
        if n > 1 && !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "equal-spacing phase must be finite and > 0, got {beta}"
            )));
        }
        let phases: Vec<f64> = (0..n).map(|j| j as f64 * beta).collect();
        Self::from_phases(&phases, k0)
    }

    /// Number of coupling points `N`.
    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Coupling positions `ξ₀ … ξ_{N−1}`.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Resonant wavevector used for the Markovian phases.
    pub fn k0(&self) -> f64 {
        self.k0
    }

    /// Position of the last coupling point `ξ_{N−1}`.
    pub fn last_point(&self) -> f64 {
        *self.points.last().expect("geometry is never empty")
    }

    /// Markovian phase `β_j = k₀ ξ_j`.
    pub fn phase(&self, j: usize) -> f64 {
        self.k0 * self.points[j]
    }

    /// All Markovian phases.
    pub fn phases(&self) -> Vec<f64> {
        self.phases_at(self.k0)
    }

    /// Phases `k ξ_j` seen by a photon of wavevector `k`.
    pub fn phases_at(&self, k: f64) -> Vec<f64> {
        self.points.iter().map(|x| k * x).collect()
    }
}

/// Interference-renormalised emission rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveRates {
    /// Complex rate `Γ_e` (two points) or `Γ_A` (general `N`).
    pub gamma_complex: Complex64,
    /// Effective decay `Γ_g` or `Γ_N`, equal to `Re(gamma_complex)`.
    pub gamma_real: f64,
    /// Lamb shift `Δ_L`, equal to `Im(gamma_complex) / 2`.
    pub lamb_shift: f64,
}

impl EffectiveRates {
    /// Derives the real decay and Lamb shift from the complex rate.
    pub fn from_complex(gamma_complex: Complex64) -> Self {
        Self {
            gamma_complex,
            gamma_real: gamma_complex.re,
            lamb_shift: gamma_complex.im / 2.0,
        }
    }

    /// Rates of a natural (single-point) atom of decay rate `gamma`.
    pub fn natural(gamma: f64) -> Self {
        Self::from_complex(Complex64::new(gamma, 0.0))
    }
}

/// Complex emission rate of `N` even-mode coupling points of strength `V/N`
/// each, with leg phases `phases` (which need not be Markovian):
///
/// `Γ_A = (2V²/N²) [N/2 + Σ_{m<j} e^{i(φ_j − φ_m)}]`.
pub fn gamma_complex_from_phases(phases: &[f64], v: f64) -> Complex64 {
    let n = phases.len();
    let mut pair_sum = Complex64::new(0.0, 0.0);
    for j in 1..n {
        for m in 0..j {
            pair_sum += Complex64::from_polar(1.0, phases[j] - phases[m]);
        }
    }
    let nf = n as f64;
    (2.0 * v * v / (nf * nf)) * (pair_sum + nf / 2.0)
}

/// Effective rates of a two-point giant atom with leg phase `β₁`.
///
/// `Γ_e = V²(1 + e^{iβ₁})/2`, `Γ_g = Γ(1 + cos β₁)/2`, `Δ_L = Γ sin β₁ / 4`.
pub fn effective_rates_two_point(beta1: f64, params: &AtomParams) -> EffectiveRates {
    let gamma = params.gamma();
    let gamma_real = gamma * (1.0 + beta1.cos()) / 2.0;
    let lamb_shift = gamma * beta1.sin() / 4.0;
    EffectiveRates {
        gamma_complex: Complex64::new(gamma_real, 2.0 * lamb_shift),
        gamma_real,
        lamb_shift,
    }
}

/// Effective rates of an arbitrary `N`-point geometry (Markovian phases).
///
/// A single coupling point returns the natural-atom rate `Γ`.
pub fn effective_rates_n_point(geom: &AtomGeometry, params: &AtomParams) -> EffectiveRates {
    if geom.n() == 1 {
        return EffectiveRates::natural(params.gamma());
    }
    EffectiveRates::from_complex(gamma_complex_from_phases(&geom.phases(), params.v()))
}

/// Closed-form rates for `n` equally spaced points with phase `beta`:
///
/// `Γ_N = (V²/N²)(1 − cos Nβ)/(1 − cos β)`,
/// `Δ_L = (V²/2N²)(N sin β − sin Nβ)/(1 − cos β)`.
///
/// At `β ≡ 0 (mod 2π)` all legs are in phase and the analytic limit
/// `Γ_N = V²`, `Δ_L = 0` is returned.
pub fn equal_spacing_rates(n: usize, beta: f64, params: &AtomParams) -> Result<EffectiveRates> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    if !beta.is_finite() {
        return Err(invalid("beta", format!("must be finite, got {beta}")));
    }
    let gamma = params.gamma();
    if n == 1 || 1.0 - beta.cos() == 0.0 {
        return Ok(EffectiveRates::natural(gamma));
    }
    let nf = n as f64;
    // Near β ≡ 0 the half-angle form avoids the cancellation in 1 − cos β;
    // elsewhere the cosine form is used because it is exact at β = π.
    let half = (beta / 2.0).sin();
    let (decay_ratio, denom) = if half.abs() > 0.25 {
        let d = 1.0 - beta.cos();
        ((1.0 - (nf * beta).cos()) / d, d)
    } else {
        let s = (nf * beta / 2.0).sin();
        ((s * s) / (half * half), 2.0 * half * half)
    };
    let gamma_real = gamma / (nf * nf) * decay_ratio;
    let lamb_shift = gamma / (2.0 * nf * nf) * (nf * beta.sin() - (nf * beta).sin()) / denom;
    Ok(EffectiveRates {
        gamma_complex: Complex64::new(gamma_real, 2.0 * lamb_shift),
        gamma_real,
        lamb_shift,
    })
}

/// Reduces a phase to `[0, 2π)`; used only for reporting.
pub fn reduce_phase(beta: f64) -> f64 {
    beta.rem_euclid(2.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn unit() -> AtomParams {
        AtomParams::new(100.0, 1.0).unwrap()
    }

    #[test]
    fn gamma_is_v_squared_bitwise() {
        let p = AtomParams::new(3.0, 0.7).unwrap();
        assert_eq!(p.gamma(), 0.7 * 0.7);
    }

    #[test]
    fn rejects_nonpositive_parameters() {
        assert!(AtomParams::new(0.0, 1.0).is_err());
        assert!(AtomParams::new(1.0, -1.0).is_err());
        assert!(AtomParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn geometry_invariants_enforced() {
        assert!(AtomGeometry::from_positions(vec![0.1, 0.2], 1.0).is_err());
        assert!(AtomGeometry::from_positions(vec![0.0, 0.0], 1.0).is_err());
        assert!(AtomGeometry::from_positions(vec![], 1.0).is_err());
        let g = AtomGeometry::two_point(FRAC_PI_2, 2.0).unwrap();
        assert_eq!(g.points(), &[0.0, FRAC_PI_2 / 2.0]);
        assert!((g.phase(1) - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn two_point_table_values() {
        let p = unit();
        let r = effective_rates_two_point(0.0, &p);
        assert_eq!((r.gamma_real, r.lamb_shift), (1.0, 0.0));
        let r = effective_rates_two_point(FRAC_PI_2, &p);
        assert!((r.gamma_real - 0.5).abs() < 1e-15);
        assert!((r.lamb_shift - 0.25).abs() < 1e-15);
        let r = effective_rates_two_point(PI, &p);
        assert!(r.gamma_real.abs() < 1e-15 && r.lamb_shift.abs() < 1e-15);
    }

    #[test]
    fn n3_pi_and_n2_pi() {
        let p = unit();
        let r = equal_spacing_rates(3, PI, &p).unwrap();
        assert_eq!(r.gamma_real, 1.0 / 9.0);
        assert!(r.lamb_shift.abs() < 1e-15);
        assert_eq!(equal_spacing_rates(2, PI, &p).unwrap().gamma_real, 0.0);
        let g = AtomGeometry::equal_spacing(3, PI, p.k0()).unwrap();
        let r = effective_rates_n_point(&g, &p);
        assert!((r.gamma_real - 1.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn zero_phase_limit_branch() {
        let p = unit();
        for n in 1..6 {
            let r = equal_spacing_rates(n, 2.0 * PI, &p).unwrap();
            assert_eq!((r.gamma_real, r.lamb_shift), (1.0, 0.0));
        }
    }
}
