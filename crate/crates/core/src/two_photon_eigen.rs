//! Two-excitation eigendata of the even-mode Hamiltonian.
//!
//! Two families of eigenstates span the two-photon sector:
//!
//! * **Bethe-ansatz states.** In every region of the `(x₁, x₂)` plane cut by
//!   the coupling points, `F = A_l e^{ikx₁+ipx₂} + B_l e^{ipx₁+ikx₂}`. The
//!   region coefficients follow from the single-photon crossing amplitudes.
//!   The ratio `A₁/B₁ = (k − p − iΓ_g)/(k − p + iΓ_g)` comes from the
//!   Markovian boundary condition on the atomic amplitude `e_F(x)`.
//! * **Bound states.** `B = √(Γ_g/4π) e^{iE x_c − Γ_g|x|/2}` decays in the
//!   relative coordinate `x = x₁ − x₂` (centre `x_c = (x₁ + x₂)/2`). It is
//!   orthogonal to every Bethe in-state. In region `l` it reads
//!   `t_l √(Γ_g/4π) e^{iκ₁x₁} e^{iκ₂x₂}` with the complex momenta
//!   `κ₁ = E/2 − iΓ_g/2` and `κ₂ = E/2 + iΓ_g/2`.
//!
//! Regions for two coupling points, with `x₁ < x₂`:
//!
//! | region | location                 |
//! |--------|--------------------------|
//! | 1      | `x₁ < x₂ < 0`            |
//! | 2      | `x₁ < 0 < x₂ < ξ₁`       |
//! | 3      | `x₁ < 0`, `ξ₁ < x₂`      |
//! | 4      | `0 < x₁ < x₂ < ξ₁`       |
//! | 5      | `0 < x₁ < ξ₁ < x₂`       |
//! | 6      | `ξ₁ < x₁ < x₂`           |
//!
//! For `N` points only the `2N + 1` regions on the path from "both photons
//! left" to "both photons right" are tracked. Region `l ≤ N + 1` has
//! `x₁ < 0` with `x₂` in interval `l − 1`. Region `N + 1 + l` has `x₁` in
//! interval `l` and `x₂ > ξ_{N−1}`.
//!
//! At a coupling point every piecewise evaluator returns the mean of the
//! one-sided limits.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    effective_rates_n_point, effective_rates_two_point, AtomGeometry, AtomParams,
    EffectiveRates, Regime, I,
};
use crate::single_photon::{amplitudes_exact, amplitudes_markov, SinglePhotonAmplitudes};

/// Effective decay rates below this fraction of `Γ` are treated as the
/// decoupling point, where no bound state exists.
pub const DECOUPLED_RELATIVE: f64 = 1e-12;

/// A pair of photon wavevectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPhotonPair {
    /// First wavevector `k`.
    pub k1: f64,
    /// Second wavevector `p`.
    pub p1: f64,
}

impl TwoPhotonPair {
    /// Pair with wavevectors `k` and `p`.
    pub fn new(k1: f64, p1: f64) -> Self {
        Self { k1, p1 }
    }

    /// Pair with total energy `E` and half-difference `Δ`:
    /// `k = E/2 + Δ`, `p = E/2 − Δ`.
    pub fn from_energy(e_total: f64, delta: f64) -> Self {
        Self {
            k1: e_total / 2.0 + delta,
            p1: e_total / 2.0 - delta,
        }
    }

    /// Total energy `E = k + p`.
    pub fn e_total(&self) -> f64 {
        self.k1 + self.p1
    }

    /// Half-difference `Δ = (k − p)/2`.
    pub fn delta(&self) -> f64 {
        (self.k1 - self.p1) / 2.0
    }

    /// Canonical `k ≤ p` ordering and whether the input was swapped.
    pub fn canonical(&self) -> (Self, bool) {
        if self.k1 <= self.p1 {
            (*self, false)
        } else {
            (Self::new(self.p1, self.k1), true)
        }
    }
}

/// Decomposition of a Bethe in-state on the symmetric/antisymmetric bases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InState {
    /// Weight of the symmetric basis function `S_{k,p}`.
    pub c_sym: Complex64,
    /// Weight of the antisymmetric basis function `A_{k,p}`.
    pub c_antisym: Complex64,
    /// True when the input pair was reordered to `k ≤ p`.
    pub swapped: bool,
}

/// In-state weights `(2Δ, iΓ_g)/√(4Δ² + Γ_g²)` for the canonical ordering.
///
/// If `Δ = 0` and `Γ_g = 0` together, the state is a decoupled symmetric
/// plane wave, so `(1, 0)` is returned.
pub fn scattering_in_state(pair: &TwoPhotonPair, rates: &EffectiveRates) -> InState {
    let (c, swapped) = pair.canonical();
    let two_delta = 2.0 * c.delta();
    let g = rates.gamma_real;
    let norm = two_delta.hypot(g);
    if norm == 0.0 {
        return InState {
            c_sym: Complex64::new(1.0, 0.0),
            c_antisym: Complex64::new(0.0, 0.0),
            swapped,
        };
    }
    InState {
        c_sym: Complex64::new(two_delta / norm, 0.0),
        c_antisym: Complex64::new(0.0, g / norm),
        swapped,
    }
}

/// Symmetric basis function `S_{k,p}(x₁,x₂) = e^{iE x_c} cos(Δx) / (√2 π)`.
pub fn basis_symmetric(pair: &TwoPhotonPair, x1: f64, x2: f64) -> Complex64 {
    let xc = (x1 + x2) / 2.0;
    let x = x1 - x2;
    Complex64::from_polar(1.0, pair.e_total() * xc) * (pair.delta() * x).cos() / (SQRT_2 * PI)
}

/// Antisymmetric-bracket basis function
/// `A_{k,p}(x₁,x₂) = sgn(x)(e^{ikx₁+ipx₂} − e^{ikx₂+ipx₁})/(2√2π)
///                 = i e^{iE x_c} sgn(x) sin(Δx) / (√2 π)`.
///
/// Both `sgn(x)` and `sin(Δx)` flip under exchange, so the product is
/// exchange-symmetric.
pub fn basis_antisymmetric(pair: &TwoPhotonPair, x1: f64, x2: f64) -> Complex64 {
    let xc = (x1 + x2) / 2.0;
    let x = x1 - x2;
    let sgn = if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    };
    I * Complex64::from_polar(1.0, pair.e_total() * xc) * sgn * (pair.delta() * x).sin()
        / (SQRT_2 * PI)
}

/// Region coefficients of a Bethe-ansatz eigenstate, normalised to `A₁ = B₁`
/// ratios.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetheCoefficients {
    /// `A_l / A₁` for `l = 1 …` (index `l − 1`).
    pub a_ratio: Vec<Complex64>,
    /// `B_l / B₁` for `l = 1 …` (index `l − 1`).
    pub b_ratio: Vec<Complex64>,
    /// `A₁ / B₁`.
    pub a1_over_b1: Complex64,
}

impl BetheCoefficients {
    /// Absolute coefficients under the normalisation `A₁ = 1`.
    pub fn absolute(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let b1 = 1.0 / self.a1_over_b1;
        (
            self.a_ratio.clone(),
            self.b_ratio.iter().map(|r| r * b1).collect(),
        )
    }

    /// Index of the last (both-photons-transmitted) region.
    pub fn last(&self) -> usize {
        self.a_ratio.len() - 1
    }
}

fn two_point_pair(
    pair: &TwoPhotonPair,
    geom: &AtomGeometry,
    params: &AtomParams,
    regime: Regime,
    op: &'static str,
) -> Result<(SinglePhotonAmplitudes, SinglePhotonAmplitudes, f64, f64)> {
    if geom.n() != 2 {
        return Err(Error::PointCount {
            op,
            expected: 2,
            got: geom.n(),
        });
    }
    let xi = geom.points()[1];
    let beta1 = geom.phase(1);
    Ok(match regime {
        Regime::Markov => (
            amplitudes_markov(pair.k1, beta1, params),
            amplitudes_markov(pair.p1, beta1, params),
            beta1,
            beta1,
        ),
        Regime::Exact => (
            amplitudes_exact(pair.k1, geom, params)?,
            amplitudes_exact(pair.p1, geom, params)?,
            pair.k1 * xi,
            pair.p1 * xi,
        ),
    })
}

/// `A₁/B₁ = (k − p − iΓ)/(k − p + iΓ)`; equals −1 when `k = p`.
fn a1_over_b1(pair: &TwoPhotonPair, gamma_real: f64) -> Complex64 {
    let d = pair.k1 - pair.p1;
    if d == 0.0 && gamma_real == 0.0 {
        return Complex64::new(-1.0, 0.0);
    }
    (d - I * gamma_real) / (d + I * gamma_real)
}

/// Bethe-ansatz region coefficients for two coupling points.
///
/// The six entries follow the region table in the module docs:
/// `A₂/A₁ = f_p`, `A₃/A₁ = t_p`, `A₅/A₁ = t_p f_k`, `A₆/A₁ = t_k t_p`, and the
/// B ratios with `k ↔ p`. The leg phases are `k ξ₁`, `p ξ₁` in the exact
/// regime and `β₁` in the Markovian one.
///
/// Region 4, with both photons between the points, couples the A and B
/// families through the middle-region atomic amplitude. Its coefficients
/// solve the crossing conditions at `x₁ = 0`:
///
/// `A₄ − A₂ = −i(V²/4)(A₂ + B₄ e^{ikξ₁})/(Δ_k + iV²/4)`,
/// `B₄ − B₂ = −i(V²/4)(B₂ + A₄ e^{ipξ₁})/(Δ_p + iV²/4)`.
///
/// These two conditions fix region 4 uniquely. The remaining crossing of
/// `ξ₁` by a photon partnered between the points closes only for
/// `A₁ = B₁`, so with the Markovian ratio it is violated at O(1). The strip
/// has vanishing width in the Markovian limit and does not enter any
/// scattering observable. The two outer strips satisfy every crossing
/// condition exactly.
///
/// `A₁/B₁` always uses the Markovian decay `Γ_g`.
pub fn bethe_ratios(
    pair: &TwoPhotonPair,
    geom: &AtomGeometry,
    params: &AtomParams,
    regime: Regime,
) -> Result<BetheCoefficients> {
    let (sk, sp, phase_k, phase_p) = two_point_pair(pair, geom, params, regime, "bethe_ratios")?;
    let gamma_real = effective_rates_two_point(geom.phase(1), params).gamma_real;
    let ratio = a1_over_b1(pair, gamma_real);
    let one = Complex64::new(1.0, 0.0);

    // Absolute values with A₁ = 1, B₁ = B₁/A₁.
    let b1 = 1.0 / ratio;
    let a2 = sp.f_k;
    let b2 = b1 * sk.f_k;
    let q = params.gamma() / 4.0;
    let ak = -I * q / (pair.k1 - params.omega() + I * q);
    let ap = -I * q / (pair.p1 - params.omega() + I * q);
    let uk = Complex64::from_polar(1.0, phase_k);
    let up = Complex64::from_polar(1.0, phase_p);
    // A₄ = A₂(1 + ak) + ak uk B₄,  B₄ = B₂(1 + ap) + ap up A₄.
    let det = one - ak * uk * ap * up;
    let a4 = (a2 * (1.0 + ak) + ak * uk * b2 * (1.0 + ap)) / det;
    let b4 = b2 * (1.0 + ap) + ap * up * a4;

    let a_ratio = vec![one, a2, sp.t_e, a4, sp.t_e * sk.f_k, sk.t_e * sp.t_e];
    let b_ratio = vec![
        one,
        sk.f_k,
        sk.t_e,
        b4 / b1,
        sk.t_e * sp.f_k,
        sk.t_e * sp.t_e,
    ];
    Ok(BetheCoefficients {
        a_ratio,
        b_ratio,
        a1_over_b1: ratio,
    })
}

/// Photon amplitudes in each interval for a single photon of complex
/// wavevector `kappa` crossing `N` points of e-mode coupling `V/N`.
///
/// Leg phases are `κ ξ_j`. The returned vector has `N + 1` entries, the
/// first being 1. For real `κ` this reduces to
/// [`crate::single_photon::single_photon_n_point`].
pub fn crossing_amplitudes(kappa: Complex64, geom: &AtomGeometry, params: &AtomParams) -> Vec<Complex64> {
    let pts = geom.points();
    let n = pts.len();
    let nf = n as f64;
    let g = params.v() / nf;
    let expo: Vec<Complex64> = pts.iter().map(|&x| (I * kappa * x).exp()).collect();
    let mut pair = Complex64::new(0.0, 0.0);
    for j in 1..n {
        for m in 0..j {
            pair += expo[j] / expo[m];
        }
    }
    let ga = 2.0 * params.gamma() / (nf * nf) * (pair + nf / 2.0);
    let s: Complex64 = expo.iter().sum();
    let atom = g * s / (kappa - params.omega() + I * ga / 2.0);
    let mut out = Vec::with_capacity(n + 1);
    let mut c = Complex64::new(1.0, 0.0);
    out.push(c);
    for e in &expo {
        c -= I * g * atom / e;
        out.push(c);
    }
    out
}

/// Bethe-ansatz path coefficients for `N` points in the Markovian regime
/// (`2N + 1` regions).
///
/// `A_l/A₁` is the interval amplitude of `p` for `l ≤ N + 1`, and
/// `t_p^N ×` the interval amplitude of `k` beyond. The B family swaps `k`
/// and `p`. `A₁/B₁ = (k − p − iΓ_N)/(k − p + iΓ_N)`.
pub fn bethe_ratios_n(
    pair: &TwoPhotonPair,
    geom: &AtomGeometry,
    params: &AtomParams,
) -> BetheCoefficients {
    let phases = geom.phases();
    let v = params.v();
    let ck = crate::single_photon::single_photon_n_point(pair.k1 - params.omega(), &phases, v).interval;
    let cp = crate::single_photon::single_photon_n_point(pair.p1 - params.omega(), &phases, v).interval;
    let n = geom.n();
    let mut a_ratio: Vec<Complex64> = cp.clone();
    a_ratio.extend(ck[1..].iter().map(|c| cp[n] * c));
    let mut b_ratio: Vec<Complex64> = ck.clone();
    b_ratio.extend(cp[1..].iter().map(|c| ck[n] * c));
    let gamma_real = effective_rates_n_point(geom, params).gamma_real;
    BetheCoefficients {
        a_ratio,
        b_ratio,
        a1_over_b1: a1_over_b1(pair, gamma_real),
    }
}

/// Sides of a coordinate relative to the coupling points: one interval with
/// weight 1, or the two adjacent intervals with weight ½ on a point.
fn sides(x: f64, points: &[f64]) -> ([(usize, f64); 2], usize) {
    for (j, &p) in points.iter().enumerate() {
        if x == p {
            return ([(j, 0.5), (j + 1, 0.5)], 2);
        }
    }
    let idx = points.iter().take_while(|&&p| p < x).count();
    ([(idx, 1.0), (0, 0.0)], 1)
}

/// Two-point region index (0-based) from the interval indices of `x₁ ≤ x₂`.
fn region_index(i1: usize, i2: usize) -> usize {
    match (i1.min(i2), i1.max(i2)) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        (2, 2) => 5,
        _ => unreachable!("two coupling points define three intervals"),
    }
}

/// Full Bethe-ansatz eigenstate of a two-point atom, normalised to `A₁ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetheState {
    pair: TwoPhotonPair,
    xi1: f64,
    omega: f64,
    v: f64,
    a: Vec<Complex64>,
    b: Vec<Complex64>,
}

impl BetheState {
    /// Assembles the state from its coefficients.
    pub fn new(
        pair: &TwoPhotonPair,
        geom: &AtomGeometry,
        params: &AtomParams,
        bethe: &BetheCoefficients,
    ) -> Result<Self> {
        if geom.n() != 2 || bethe.a_ratio.len() != 6 {
            return Err(Error::PointCount {
                op: "BetheState::new",
                expected: 2,
                got: geom.n(),
            });
        }
        let (a, b) = bethe.absolute();
        Ok(Self {
            pair: *pair,
            xi1: geom.points()[1],
            omega: params.omega(),
            v: params.v(),
            a,
            b,
        })
    }

    fn region_value(&self, l: usize, x1: f64, x2: f64) -> Complex64 {
        let (k, p) = (self.pair.k1, self.pair.p1);
        self.a[l] * Complex64::from_polar(1.0, k * x1 + p * x2)
            + self.b[l] * Complex64::from_polar(1.0, k * x2 + p * x1)
    }

    /// Two-photon amplitude `g(x₁, x₂)`, exchange-symmetric by construction.
    pub fn g(&self, x1: f64, x2: f64) -> Complex64 {
        let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
        let pts = [0.0, self.xi1];
        let (s1, n1) = sides(lo, &pts);
        let (s2, n2) = sides(hi, &pts);
        let mut acc = Complex64::new(0.0, 0.0);
        for &(i1, w1) in &s1[..n1] {
            for &(i2, w2) in &s2[..n2] {
                acc += w1 * w2 * self.region_value(region_index(i1, i2), lo, hi);
            }
        }
        acc
    }

    fn e_interval(&self, interval: usize, x: f64) -> Complex64 {
        let (k, p) = (self.pair.k1, self.pair.p1);
        let q = I * self.v * self.v / 4.0;
        let dk = k - self.omega + q;
        let dp = p - self.omega + q;
        let uk = Complex64::from_polar(1.0, k * self.xi1);
        let up = Complex64::from_polar(1.0, p * self.xi1);
        let ekx = Complex64::from_polar(1.0, k * x);
        let epx = Complex64::from_polar(1.0, p * x);
        let (a, b) = (&self.a, &self.b);
        let pre = self.v / SQRT_2;
        match interval {
            0 => pre * ((a[0] + a[1] * up) / dp * ekx + (b[0] + b[1] * uk) / dk * epx),
            1 => pre * ((b[1] + a[3] * up) / dp * ekx + (a[1] + b[3] * uk) / dk * epx),
            _ => pre * ((a[2] + a[4] * uk) / dk * epx + (b[2] + b[4] * up) / dp * ekx),
        }
    }

    /// Atomic amplitude `e_F(x)` (one photon at `x`, atom excited).
    pub fn e(&self, x: f64) -> Complex64 {
        let (s, n) = sides(x, &[0.0, self.xi1]);
        s[..n].iter().map(|&(i, w)| w * self.e_interval(i, x)).sum()
    }

    /// Total energy of the eigenstate.
    pub fn energy(&self) -> f64 {
        self.pair.e_total()
    }
}

/// Atomic amplitude `e_F(x)` of the two-point Bethe eigenstate (`A₁ = 1`).
///
/// The three closed forms are, with `D_q = q − Ω + iV²/4`:
///
/// * `x < 0`: `V/√2 [(A₁ + A₂e^{ipξ₁})/D_p e^{ikx} + (B₁ + B₂e^{ikξ₁})/D_k e^{ipx}]`
/// * `0 < x < ξ₁`: `V/√2 [(B₂ + A₄e^{ipξ₁})/D_p e^{ikx} + (A₂ + B₄e^{ikξ₁})/D_k e^{ipx}]`
/// * `x > ξ₁`: `V/√2 [(A₃ + A₅e^{ikξ₁})/D_k e^{ipx} + (B₃ + B₅e^{ipξ₁})/D_p e^{ikx}]`
pub fn e_f_amplitude(
    x: f64,
    pair: &TwoPhotonPair,
    geom: &AtomGeometry,
    params: &AtomParams,
    bethe: &BetheCoefficients,
) -> Result<Complex64> {
    Ok(BetheState::new(pair, geom, params, bethe)?.e(x))
}

/// Outer-region atomic amplitude of the `N`-point Bethe eigenstate
/// (`A₁ = 1`).
///
/// Each coupling point contributes `V/N`, which gives the prefactor `√2V/N`
/// and the regularisation `iV²/(2N)`:
///
/// * `x < 0`: `√2V/N [Σ_m A_{m+1}e^{ipξ_m}/D_p e^{ikx} + Σ_m B_{m+1}e^{ikξ_m}/D_k e^{ipx}]`
/// * `x > ξ_{N−1}`: `√2V/N [Σ_m A_{N+m+1}e^{ikξ_m}/D_k e^{ipx} + Σ_m B_{N+m+1}e^{ipξ_m}/D_p e^{ikx}]`
///
/// Interior points return [`Error::InvalidParameter`].
pub fn e_f_amplitude_n(
    x: f64,
    pair: &TwoPhotonPair,
    geom: &AtomGeometry,
    params: &AtomParams,
    bethe: &BetheCoefficients,
) -> Result<Complex64> {
    let n = geom.n();
    if bethe.a_ratio.len() != 2 * n + 1 {
        return Err(Error::PointCount {
            op: "e_f_amplitude_n",
            expected: (bethe.a_ratio.len() - 1) / 2,
            got: n,
        });
    }
    let nf = n as f64;
    let pts = geom.points();
    let (k, p) = (pair.k1, pair.p1);
    let reg = I * params.gamma() / (2.0 * nf);
    let dk = k - params.omega() + reg;
    let dp = p - params.omega() + reg;
    let pre = SQRT_2 * params.v() / nf;
    let (a, b) = bethe.absolute();
    let phase = |q: f64, y: f64| Complex64::from_polar(1.0, q * y);
    if x < 0.0 {
        let sa: Complex64 = (0..n).map(|m| a[m] * phase(p, pts[m])).sum();
        let sb: Complex64 = (0..n).map(|m| b[m] * phase(k, pts[m])).sum();
        Ok(pre * (sa / dp * phase(k, x) + sb / dk * phase(p, x)))
    } else if x > geom.last_point() {
        let sa: Complex64 = (0..n).map(|m| a[n + m] * phase(k, pts[m])).sum();
        let sb: Complex64 = (0..n).map(|m| b[n + m] * phase(p, pts[m])).sum();
        Ok(pre * (sa / dk * phase(p, x) + sb / dp * phase(k, x)))
    } else {
        Err(crate::error::invalid(
            "x",
            "N-point atomic amplitude is only provided outside the coupling region",
        ))
    }
}

fn require_bound(gamma_real: f64, params: &AtomParams) -> Result<()> {
    if gamma_real <= DECOUPLED_RELATIVE * params.gamma() {
        Err(Error::NoBoundState { gamma_real })
    } else {
        Ok(())
    }
}

/// Bound in-state `√(Γ_g/4π) e^{iE x_c − Γ_g|x|/2}`.
pub fn bound_wavefunction(
    e_total: f64,
    x_c: f64,
    x: f64,
    rates: &EffectiveRates,
) -> Result<Complex64> {
    let g = rates.gamma_real;
    if !(g > 0.0) {
        return Err(Error::NoBoundState { gamma_real: g });
    }
    Ok((g / (4.0 * PI)).sqrt() * Complex64::new(-g * x.abs() / 2.0, e_total * x_c).exp())
}

/// Region coefficients `t_l` of the bound-family eigenstate (`t₁ = 1`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRegionCoefficients {
    /// `t_l` for `l = 1 …` (index `l − 1`).
    pub t: Vec<Complex64>,
    /// Effective decay `Γ_g` (or `Γ_N`) setting the relative-coordinate decay.
    pub gamma_real: f64,
}

impl BoundRegionCoefficients {
    /// Coefficient of the last region (both photons transmitted).
    pub fn transmission(&self) -> Complex64 {
        *self.t.last().expect("non-empty")
    }
}

/// Exact bound-family coefficients for two coupling points.
///
/// With `a = e^{(iE−Γ_g)ξ₁/2}`, `ā = e^{(−iE+Γ_g)ξ₁/2}`, `b = e^{(iE+Γ_g)ξ₁/2}`
/// and `b̄ = e^{(−iE−Γ_g)ξ₁/2}`:
///
/// * `t₂ = 2(E + iΓ_g − 2Ω)/[2E + 2iΓ_g − 4Ω + iV²(1 + a)]`
/// * `t₃ = [2E + 2iΓ_g − 4Ω − iV²(1 + ā)]/[2E + 2iΓ_g − 4Ω + iV²(1 + a)]`
/// * `t₅ = t₃ · 2(E − iΓ_g − 2Ω)/[2E − 2iΓ_g − 4Ω + iV²(1 + b)]`
/// * `t₆ = [2E − 4Ω + 2iΓ_g − iV²(1 + ā)]/[2E − 4Ω − 2iΓ_g + iV²(1 + b)]
///        × [2E − 4Ω − 2iΓ_g − iV²(1 + b̄)]/[2E − 4Ω + 2iΓ_g + iV²(1 + a)]`
///
/// `t₂` and `t₃` are the single-photon crossing amplitudes at `κ₂`, and `t₅`
/// follows by crossing the second photon at `κ₁`. With this `t₅` the
/// atomic-amplitude ratio matches [`bound_edge_ratio`] for any `ξ₁`. The region-4
/// coefficient matches the `e^{iκ₂x}` component of the crossing condition
/// at `x₁ = 0`:
/// `t₄ = t₂ (E/2 − Ω − iΓ_g/2)/(E/2 − Ω − iΓ_g/2 + iV²/4)`.
pub fn bound_region_coefficients(
    e_total: f64,
    geom: &AtomGeometry,
    params: &AtomParams,
) -> Result<BoundRegionCoefficients> {
    if geom.n() != 2 {
        return Err(Error::PointCount {
            op: "bound_region_coefficients",
            expected: 2,
            got: geom.n(),
        });
    }
    let gamma_real = effective_rates_two_point(geom.phase(1), params).gamma_real;
    require_bound(gamma_real, params)?;
    let (e, g, om, v2) = (e_total, gamma_real, params.omega(), params.gamma());
    let xi = geom.points()[1];
    let a = Complex64::new(-g * xi / 2.0, e * xi / 2.0).exp();
    let a_bar = Complex64::new(g * xi / 2.0, -e * xi / 2.0).exp();
    let b = Complex64::new(g * xi / 2.0, e * xi / 2.0).exp();
    let b_bar = Complex64::new(-g * xi / 2.0, -e * xi / 2.0).exp();

    let den_plus = 2.0 * e + 2.0 * I * g - 4.0 * om + I * v2 * (1.0 + a);
    let den_minus = 2.0 * e - 2.0 * I * g - 4.0 * om + I * v2 * (1.0 + b);
    let num3 = 2.0 * e + 2.0 * I * g - 4.0 * om - I * v2 * (1.0 + a_bar);
    let t2 = 2.0 * (e + I * g - 2.0 * om) / den_plus;
    let t3 = num3 / den_plus;
    let t5 = t3 * 2.0 * (e - I * g - 2.0 * om) / den_minus;
    let t6 = (2.0 * e - 4.0 * om + 2.0 * I * g - I * v2 * (1.0 + a_bar))
        / (2.0 * e - 4.0 * om - 2.0 * I * g + I * v2 * (1.0 + b))
        * (2.0 * e - 4.0 * om - 2.0 * I * g - I * v2 * (1.0 + b_bar))
        / (2.0 * e - 4.0 * om + 2.0 * I * g + I * v2 * (1.0 + a));
    let lead = e / 2.0 - om - I * g / 2.0;
    let t4 = t2 * lead / (lead + I * v2 / 4.0);
    Ok(BoundRegionCoefficients {
        t: vec![Complex64::new(1.0, 0.0), t2, t3, t4, t5, t6],
        gamma_real,
    })
}

/// Bound-family path coefficients for `N` points (`2N + 1` regions).
///
/// The first `N + 1` entries are the crossing amplitudes of the photon
/// with momentum `κ₂ = E/2 + iΓ_N/2`. The remaining `N` are `t_{N+1}` times
/// the crossing amplitudes at `κ₁ = E/2 − iΓ_N/2`. The last entry equals
/// [`bound_transmission_n_exact`].
pub fn bound_region_coefficients_n(
    e_total: f64,
    geom: &AtomGeometry,
    params: &AtomParams,
) -> Result<BoundRegionCoefficients> {
    let gamma_real = effective_rates_n_point(geom, params).gamma_real;
    require_bound(gamma_real, params)?;
    let k1 = Complex64::new(e_total / 2.0, -gamma_real / 2.0);
    let k2 = Complex64::new(e_total / 2.0, gamma_real / 2.0);
    let c2 = crossing_amplitudes(k2, geom, params);
    let c1 = crossing_amplitudes(k1, geom, params);
    let n = geom.n();
    let mut t = c2.clone();
    t.extend(c1[1..].iter().map(|c| c2[n] * c));
    Ok(BoundRegionCoefficients { t, gamma_real })
}

/// Full bound-family eigenstate of a two-point atom.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundEigenstate {
    e_total: f64,
    xi1: f64,
    omega: f64,
    v: f64,
    coeffs: BoundRegionCoefficients,
}

impl BoundEigenstate {
    /// Assembles the eigenstate from [`bound_region_coefficients`].
    pub fn new(
        e_total: f64,
        geom: &AtomGeometry,
        params: &AtomParams,
        coeffs: &BoundRegionCoefficients,
    ) -> Result<Self> {
        if geom.n() != 2 || coeffs.t.len() != 6 {
            return Err(Error::PointCount {
                op: "BoundEigenstate::new",
                expected: 2,
                got: geom.n(),
            });
        }
        Ok(Self {
            e_total,
            xi1: geom.points()[1],
            omega: params.omega(),
            v: params.v(),
            coeffs: coeffs.clone(),
        })
    }

    fn norm(&self) -> f64 {
        (self.coeffs.gamma_real / (4.0 * PI)).sqrt()
    }

    fn plus(&self, x: f64) -> Complex64 {
        Complex64::new(self.coeffs.gamma_real * x / 2.0, self.e_total * x / 2.0).exp()
    }

    fn minus(&self, x: f64) -> Complex64 {
        Complex64::new(-self.coeffs.gamma_real * x / 2.0, self.e_total * x / 2.0).exp()
    }

    /// Two-photon amplitude `g(x₁, x₂)` (exchange-symmetric).
    pub fn g(&self, x1: f64, x2: f64) -> Complex64 {
        let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
        let pts = [0.0, self.xi1];
        let (s1, n1) = sides(lo, &pts);
        let (s2, n2) = sides(hi, &pts);
        let base = self.norm() * self.plus(lo) * self.minus(hi);
        let mut acc = Complex64::new(0.0, 0.0);
        for &(i1, w1) in &s1[..n1] {
            for &(i2, w2) in &s2[..n2] {
                acc += w1 * w2 * self.coeffs.t[region_index(i1, i2)];
            }
        }
        acc * base
    }

    fn e_interval(&self, interval: usize, x: f64) -> Complex64 {
        let t = &self.coeffs.t;
        let g = self.coeffs.gamma_real;
        let q = I * self.v * self.v / 4.0;
        let lead = self.e_total / 2.0 - self.omega;
        let d_plus = lead + I * g / 2.0 + q;
        let d_minus = lead - I * g / 2.0 + q;
        let a = self.minus(self.xi1);
        let b = self.plus(self.xi1);
        let pre = self.norm() * self.v / SQRT_2;
        match interval {
            0 => pre * self.plus(x) * (1.0 + t[1] * a) / d_plus,
            1 => pre * (t[1] * self.minus(x) / d_minus + t[3] * a * self.plus(x) / d_plus),
            _ => pre * self.minus(x) * (t[2] + t[4] * b) / d_minus,
        }
    }

    /// Atomic amplitude `e_B(x)`.
    pub fn e(&self, x: f64) -> Complex64 {
        let (s, n) = sides(x, &[0.0, self.xi1]);
        s[..n].iter().map(|&(i, w)| w * self.e_interval(i, x)).sum()
    }
}

/// Atomic amplitude `e_B(x)` of the two-point bound-family eigenstate,
/// including the `√(Γ_g/4π)` normalisation of the two-photon part:
///
/// * `x < 0`: `V/√2 e^{iκ₁x}(1 + t₂a)/(E/2 − Ω + iΓ_g/2 + iV²/4)`
/// * `0 < x < ξ₁`: `V/√2 [t₂e^{iκ₂x}/(E/2 − Ω − iΓ_g/2 + iV²/4) + t₄a e^{iκ₁x}/(E/2 − Ω + iΓ_g/2 + iV²/4)]`
/// * `x > ξ₁`: `V/√2 e^{iκ₂x}(t₃ + t₅b)/(E/2 − Ω − iΓ_g/2 + iV²/4)`
pub fn e_b_amplitude(
    x: f64,
    e_total: f64,
    geom: &AtomGeometry,
    params: &AtomParams,
    coeffs: &BoundRegionCoefficients,
) -> Result<Complex64> {
    Ok(BoundEigenstate::new(e_total, geom, params, coeffs)?.e(x))
}

/// Outer-region atomic amplitude of the `N`-point bound-family eigenstate,
/// with prefactor `√2V/N · √(Γ_N/4π)` and regularisation `iV²/(2N)`.
pub fn e_b_amplitude_n(
    x: f64,
    e_total: f64,
    geom: &AtomGeometry,
    params: &AtomParams,
    coeffs: &BoundRegionCoefficients,
) -> Result<Complex64> {
    let n = geom.n();
    if coeffs.t.len() != 2 * n + 1 {
        return Err(Error::PointCount {
            op: "e_b_amplitude_n",
            expected: (coeffs.t.len() - 1) / 2,
            got: n,
        });
    }
    let nf = n as f64;
    let g = coeffs.gamma_real;
    let pts = geom.points();
    let k1 = Complex64::new(e_total / 2.0, -g / 2.0);
    let k2 = Complex64::new(e_total / 2.0, g / 2.0);
    let reg = I * params.gamma() / (2.0 * nf);
    let pre = SQRT_2 * params.v() / nf * (g / (4.0 * PI)).sqrt();
    let t = &coeffs.t;
    if x < 0.0 {
        let s: Complex64 = (0..n).map(|m| t[m] * (I * k2 * pts[m]).exp()).sum();
        Ok(pre * s / (k2 - params.omega() + reg) * (I * k1 * x).exp())
    } else if x > geom.last_point() {
        let s: Complex64 = (0..n).map(|m| t[n + m] * (I * k1 * pts[m]).exp()).sum();
        Ok(pre * s / (k1 - params.omega() + reg) * (I * k2 * x).exp())
    } else {
        Err(crate::error::invalid(
            "x",
            "N-point atomic amplitude is only provided outside the coupling region",
        ))
    }
}

/// Closed-form atomic-amplitude ratio `e_B(0⁻)/e_B(ξ₁⁺)`:
///
/// `(1 + e^{(−iE+Γ_g)ξ₁/2})/(1 + e^{(iE+Γ_g)ξ₁/2})
///  × [2E − 2iΓ_g − 4Ω + iV²(1 + e^{(iE+Γ_g)ξ₁/2})]
///  / [2E + 2iΓ_g − 4Ω − iV²(1 + e^{(−iE+Γ_g)ξ₁/2})]`.
pub fn bound_edge_ratio(e_total: f64, geom: &AtomGeometry, params: &AtomParams) -> Complex64 {
    let g = effective_rates_two_point(geom.phase(1), params).gamma_real;
    let xi = geom.points()[1];
    let (e, om, v2) = (e_total, params.omega(), params.gamma());
    let bp = Complex64::new(g * xi / 2.0, e * xi / 2.0).exp();
    let ab = Complex64::new(g * xi / 2.0, -e * xi / 2.0).exp();
    (1.0 + ab) / (1.0 + bp) * (2.0 * e - 2.0 * I * g - 4.0 * om + I * v2 * (1.0 + bp))
        / (2.0 * e + 2.0 * I * g - 4.0 * om - I * v2 * (1.0 + ab))
}

/// Markovian bound-state transmission
/// `t_B = (E − 2Ω − iΓ_g − iΓ_e*)/(E − 2Ω + iΓ_g + iΓ_e)`.
///
/// Works for any rate record, including `N`-point rates (`Γ_N`, `Γ_A`).
pub fn bound_transmission_markov(
    e_total: f64,
    params: &AtomParams,
    rates: &EffectiveRates,
) -> Complex64 {
    let de = e_total - 2.0 * params.omega();
    let g = rates.gamma_real;
    let ge = rates.gamma_complex;
    (de - I * g - I * ge.conj()) / (de + I * g + I * ge)
}

/// Bound-state transmission for `N` points at finite delay.
///
/// `t_B^N = [(δE + iΓ_N) − iΓ_{E1}*]/[(δE − iΓ_N) + iΓ_{E1}]
///        × [(δE − iΓ_N) − iΓ_{E2}*]/[(δE + iΓ_N) + iΓ_{E2}]`,
///
/// where, summing over the actual points `j = 1 … N−1`:
///
/// `Γ_{E1,2} = (V²/N²)[N + 2Σ_j e^{iβ_j ± Γ_Nξ_j/2}
///            + 2Σ_{i<j} e^{−i(β_i−β_j) ± Γ_N(ξ_j−ξ_i)/2}]`.
///
/// The phases are the bound-state phases `β_j = E ξ_j / 2`, which tend to
/// `Ω ξ_j` in the Markovian limit. `Γ_N` is the Markovian decay of the
/// geometry.
pub fn bound_transmission_n_exact(
    e_total: f64,
    geom: &AtomGeometry,
    params: &AtomParams,
) -> Result<Complex64> {
    let gn = effective_rates_n_point(geom, params).gamma_real;
    require_bound(gn, params)?;
    let pts = geom.points();
    let n = pts.len();
    let nf = n as f64;
    let gamma_e = |sign: f64| -> Complex64 {
        let mut s = Complex64::new(nf, 0.0);
        for j in 1..n {
            s += 2.0 * Complex64::new(sign * gn * pts[j] / 2.0, e_total * pts[j] / 2.0).exp();
            for i in 1..j {
                s += 2.0
                    * Complex64::new(
                        sign * gn * (pts[j] - pts[i]) / 2.0,
                        e_total * (pts[j] - pts[i]) / 2.0,
                    )
                    .exp();
            }
        }
        params.gamma() / (nf * nf) * s
    };
    let g1 = gamma_e(1.0);
    let g2 = gamma_e(-1.0);
    let de = e_total - 2.0 * params.omega();
    Ok(((de + I * gn) - I * g1.conj()) / ((de - I * gn) + I * g1)
        * ((de - I * gn) - I * g2.conj())
        / ((de + I * gn) + I * g2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn params() -> AtomParams {
        AtomParams::new(20.0, 1.0).unwrap()
    }

    #[test]
    fn in_state_examples() {
        let r = EffectiveRates::natural(1.0);
        let s = scattering_in_state(&TwoPhotonPair::new(3.0, 3.0), &r);
        assert_eq!((s.c_sym, s.c_antisym), (Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)));
        let r0 = EffectiveRates::natural(0.0);
        let s = scattering_in_state(&TwoPhotonPair::new(4.0, 3.0), &r0);
        assert!(s.swapped);
        assert_eq!(s.c_sym, Complex64::new(-1.0, 0.0));
        let s = scattering_in_state(&TwoPhotonPair::new(3.0, 3.0), &r0);
        assert_eq!(s.c_sym, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn a1_over_b1_examples() {
        let p = params();
        let geom = AtomGeometry::two_point(0.9, p.k0()).unwrap();
        let gg = effective_rates_two_point(0.9, &p).gamma_real;
        let eq = bethe_ratios(&TwoPhotonPair::new(20.1, 20.1), &geom, &p, Regime::Markov).unwrap();
        assert!((eq.a1_over_b1 + 1.0).norm() < 1e-15);
        let pair = TwoPhotonPair::new(20.0 + gg, 20.0);
        let c = bethe_ratios(&pair, &geom, &p, Regime::Markov).unwrap();
        assert!((c.a1_over_b1 + I).norm() < 1e-14);
    }

    #[test]
    fn region_six_is_product_of_transmissions() {
        let p = params();
        let geom = AtomGeometry::two_point(2.1, p.k0()).unwrap();
        let pair = TwoPhotonPair::new(20.3, 19.6);
        let c = bethe_ratios(&pair, &geom, &p, Regime::Exact).unwrap();
        let tk = amplitudes_exact(pair.k1, &geom, &p).unwrap().t_e;
        let tp = amplitudes_exact(pair.p1, &geom, &p).unwrap().t_e;
        assert!((c.a_ratio[5] - tk * tp).norm() < 1e-14);
        assert!((c.b_ratio[5] - tk * tp).norm() < 1e-14);
    }

    #[test]
    fn sides_average_on_points() {
        let (s, n) = sides(0.0, &[0.0, 1.0]);
        assert_eq!(n, 2);
        assert_eq!((s[0], s[1]), ((0, 0.5), (1, 0.5)));
        assert_eq!(sides(0.5, &[0.0, 1.0]).0[0], (1, 1.0));
        assert_eq!(sides(2.0, &[0.0, 1.0]).0[0], (2, 1.0));
    }

    #[test]
    fn bound_wavefunction_guards_decoupling() {
        let r = EffectiveRates::natural(0.0);
        assert!(matches!(
            bound_wavefunction(1.0, 0.0, 0.0, &r),
            Err(Error::NoBoundState { .. })
        ));
        let r = EffectiveRates::natural(2.0);
        let v = bound_wavefunction(1.0, 0.3, 0.0, &r).unwrap();
        assert!((v.norm() - (2.0 / (4.0 * PI)).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn markov_bound_transmission_resonance() {
        let p = params();
        let r = effective_rates_two_point(FRAC_PI_2, &p);
        let t = bound_transmission_markov(2.0 * p.omega() + 2.0 * r.lamb_shift, &p, &r);
        assert!((t + 1.0).norm() < 1e-14);
        let r0 = EffectiveRates::from_complex(Complex64::new(0.0, 0.0));
        assert!((bound_transmission_markov(41.0, &p, &r0) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn n_point_bound_coefficients_reduce_to_two_point() {
        let p = params();
        let geom = AtomGeometry::two_point(1.1, p.k0()).unwrap();
        let e = 40.3;
        let two = bound_region_coefficients(e, &geom, &p).unwrap();
        let n = bound_region_coefficients_n(e, &geom, &p).unwrap();
        for (i, j) in [(0, 0), (1, 1), (2, 2), (3, 4), (4, 5)] {
            assert!((n.t[i] - two.t[j]).norm() < 1e-13, "region {j}");
        }
        let tb = bound_transmission_n_exact(e, &geom, &p).unwrap();
        assert!((tb - two.t[5]).norm() < 1e-13);
    }
}
