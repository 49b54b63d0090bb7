//! Two-photon S-matrix elements.
//!
//! In the even mode the S-matrix is diagonal on the Bethe in-states, with
//! eigenvalue `t_k t_p`, and on the bound in-states, with eigenvalue `t_B`.
//! Projected on plane-wave pairs this gives
//!
//! `⟨k₂,p₂|S_ee|k₁,p₁⟩ = t_{k₁}t_{p₁}[δ(k₁−k₂)δ(p₁−p₂) + δ(k₁−p₂)δ(k₂−p₁)] + B δ(E₁−E₂)`
//!
//! with the bound kernel `B = 16iΓ_g²Σ/(π[4Δ₁²−Σ²][4Δ₂²−Σ²])` and
//! `Σ = E₁ − 2Ω + iΓ_e`. The odd mode is transmitted unchanged. Right/left
//! pairs are handled by rotating to e/o modes, applying `S`, and rotating
//! back.
//!
//! Delta functions are carried symbolically as coefficients; only smooth
//! kernels are evaluated numerically.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::model::{AtomParams, EffectiveRates, I};
use crate::two_photon_eigen::TwoPhotonPair;

/// Markovian e-mode transmission `t_k = (2Δ_k − iΓ_e*)/(2Δ_k + iΓ_e)` for a
/// rate record. `Γ_e` may be a two-point or an `N`-point complex rate.
pub fn transmission_from_rates(k: f64, params: &AtomParams, rates: &EffectiveRates) -> Complex64 {
    let d = 2.0 * (k - params.omega());
    let g = rates.gamma_complex;
    (d - I * g.conj()) / (d + I * g)
}

/// Markovian right/left amplitudes `(t̄, r̄) = ((t_k + 1)/2, (t_k − 1)/2)`.
pub fn rl_amplitudes_from_rates(
    k: f64,
    params: &AtomParams,
    rates: &EffectiveRates,
) -> (Complex64, Complex64) {
    let t = transmission_from_rates(k, params, rates);
    ((t + 1.0) / 2.0, (t - 1.0) / 2.0)
}

/// `Σ = E₁ − 2Ω + iΓ_e`.
pub fn sigma(e1: f64, params: &AtomParams, rates: &EffectiveRates) -> Complex64 {
    e1 - 2.0 * params.omega() + I * rates.gamma_complex
}

fn kernel(e1: f64, delta1: f64, delta2: f64, params: &AtomParams, rates: &EffectiveRates) -> Complex64 {
    let g = rates.gamma_real;
    if g == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let s = sigma(e1, params, rates);
    let s2 = s * s;
    16.0 * I * g * g * s / (PI * (4.0 * delta1 * delta1 - s2) * (4.0 * delta2 * delta2 - s2))
}

/// Bound kernel `B(E₁; Δ₁, Δ₂)` of a two-point atom.
///
/// Vanishes identically at the decoupling point `Γ_g = 0`.
pub fn bound_kernel(
    e1: f64,
    delta1: f64,
    delta2: f64,
    params: &AtomParams,
    rates: &EffectiveRates,
) -> Complex64 {
    kernel(e1, delta1, delta2, params, rates)
}

/// Bound kernel `B_N` of an `N`-point atom, with `Γ_N` and
/// `Σ_N = E₁ − 2Ω + iΓ_A`. It shares its arithmetic with [`bound_kernel`].
pub fn bound_kernel_n(
    e1: f64,
    delta1: f64,
    delta2: f64,
    params: &AtomParams,
    rates_n: &EffectiveRates,
) -> Complex64 {
    kernel(e1, delta1, delta2, params, rates_n)
}

/// An even-mode two-photon S-matrix element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SMatrixElementEE {
    /// Coefficient of `δ(k₁−k₂)δ(p₁−p₂)`.
    pub forward_coeff: Complex64,
    /// Coefficient of `δ(k₁−p₂)δ(k₂−p₁)`.
    pub exchange_coeff: Complex64,
    /// Coefficient of `δ(E₁−E₂)`, evaluated at `(Δ₁, Δ₂)`.
    pub bound_kernel: Complex64,
}

/// Even-mode element between the incident and outgoing pairs.
///
/// The kernel is evaluated at the incident energy `E₁`. The outgoing pair
/// supplies only `Δ₂`, since the energy delta fixes `E₂ = E₁`.
pub fn element_ee(
    pair_in: &TwoPhotonPair,
    pair_out: &TwoPhotonPair,
    params: &AtomParams,
    rates: &EffectiveRates,
) -> SMatrixElementEE {
    let tt = transmission_from_rates(pair_in.k1, params, rates)
        * transmission_from_rates(pair_in.p1, params, rates);
    SMatrixElementEE {
        forward_coeff: tt,
        exchange_coeff: tt,
        bound_kernel: bound_kernel(
            pair_in.e_total(),
            pair_in.delta(),
            pair_out.delta(),
            params,
            rates,
        ),
    }
}

/// Output channels of the real-space two-photon amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OutputChannel {
    /// Both photons in the even mode (even-mode incident pair).
    EMode,
    /// Both photons right-moving (right-moving incident pair).
    RR,
    /// Both photons left-moving.
    LL,
    /// One right-moving and one left-moving photon.
    RL,
}

/// Normalisation of a real-space output amplitude
/// `amplitude × [plane-wave part − bound_weight Γ_g²/(4Δ₁² − Σ²) e^{…}]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutputPrefactor {
    /// Overall amplitude prefactor.
    pub amplitude: f64,
    /// Multiplier of `Γ_g²` in the bound term.
    pub bound_weight: f64,
}

/// Weight of the e-mode component of one right- or left-moving photon.
pub const MODE_WEIGHT: f64 = FRAC_1_SQRT_2;

impl OutputChannel {
    /// Central prefactor table.
    ///
    /// The even-mode map has `√2/(2π)` and `4Γ_g²`. An RR or LL pair reaches
    /// the ee sector with amplitude `MODE_WEIGHT² = 1/2` and returns with
    /// another `1/2`, which leaves `Γ_g²`. The RL channel collects both
    /// orderings of the mixed product and lacks the `1/√2` of the
    /// identical-mode states, which gives `(1/2π) · 2Γ_g²`.
    pub const fn prefactor(self) -> OutputPrefactor {
        match self {
            OutputChannel::EMode => OutputPrefactor {
                amplitude: SQRT_2 / (2.0 * PI),
                bound_weight: 4.0,
            },
            OutputChannel::RR | OutputChannel::LL => OutputPrefactor {
                amplitude: SQRT_2 / (2.0 * PI),
                bound_weight: 1.0,
            },
            OutputChannel::RL => OutputPrefactor {
                amplitude: 1.0 / (2.0 * PI),
                bound_weight: 2.0,
            },
        }
    }
}

/// Bound-term factor `Γ_g²/(4Δ₁² − Σ²)`; zero at the decoupling point.
pub fn bound_factor(pair_in: &TwoPhotonPair, params: &AtomParams, rates: &EffectiveRates) -> Complex64 {
    let g = rates.gamma_real;
    if g == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let s = sigma(pair_in.e_total(), params, rates);
    let d = pair_in.delta();
    g * g / (4.0 * d * d - s * s)
}

/// Bound-term spatial profile `e^{iδE|y|/2 − Γ_e|y|/2}`.
///
/// The complex exponent is used as written. Its real part `−Γ_g|y|/2`
/// controls the decay and its imaginary part carries the Lamb shift.
pub fn bound_profile(y: f64, e1: f64, params: &AtomParams, rates: &EffectiveRates) -> Complex64 {
    let de = e1 - 2.0 * params.omega();
    let a = y.abs();
    (I * de * a / 2.0 - rates.gamma_complex * a / 2.0).exp()
}

/// Real-space even-mode output amplitude:
///
/// `e^{iE₁x_c} √2/(2π) [t_{k₁}t_{p₁} cos(Δ₁x) − 4Γ_g²/(4Δ₁² − Σ²) e^{iδE₁|x|/2 − Γ_e|x|/2}]`.
pub fn output_realspace_e(
    pair_in: &TwoPhotonPair,
    x_c: f64,
    x: f64,
    params: &AtomParams,
    rates: &EffectiveRates,
) -> Complex64 {
    let pf = OutputChannel::EMode.prefactor();
    let e1 = pair_in.e_total();
    let tt = transmission_from_rates(pair_in.k1, params, rates)
        * transmission_from_rates(pair_in.p1, params, rates);
    let plane = tt * (pair_in.delta() * x).cos();
    let bound = pf.bound_weight * bound_factor(pair_in, params, rates) * bound_profile(x, e1, params, rates);
    Complex64::from_polar(pf.amplitude, e1 * x_c) * (plane - bound)
}

/// Momentum-space transition element for a right-moving incident pair.
///
/// The symbolic delta structure follows the even-mode element: `forward`
/// multiplies `δ(k₁−k₂)δ(p₁−p₂)`, `exchange` multiplies
/// `δ(k₁−p₂)δ(k₂−p₁)`, where outgoing left-movers carry negated momenta,
/// and `bound` multiplies `δ(E₁−E₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RModeElement {
    /// Forward delta coefficient.
    pub forward: Complex64,
    /// Exchange delta coefficient.
    pub exchange: Complex64,
    /// Energy-shell coefficient, `B/4`.
    pub bound: Complex64,
}

fn quarter_kernel(
    pair_in: &TwoPhotonPair,
    pair_out: &TwoPhotonPair,
    params: &AtomParams,
    rates: &EffectiveRates,
) -> Complex64 {
    bound_kernel(pair_in.e_total(), pair_in.delta(), pair_out.delta(), params, rates) / 4.0
}

/// RR element: `t̄_{k₁}t̄_{p₁}` on both delta structures plus `B/4`.
pub fn rr_element(
    pair_in: &TwoPhotonPair,
    pair_out: &TwoPhotonPair,
    params: &AtomParams,
    rates: &EffectiveRates,
) -> RModeElement {
    let (tk, _) = rl_amplitudes_from_rates(pair_in.k1, params, rates);
    let (tp, _) = rl_amplitudes_from_rates(pair_in.p1, params, rates);
    RModeElement {
        forward: tk * tp,
        exchange: tk * tp,
        bound: quarter_kernel(pair_in, pair_out, params, rates),
    }
}

/// LL element: `r̄_{k₁}r̄_{p₁}` with the outgoing momenta negated, plus `B/4`.
pub fn ll_element(
    pair_in: &TwoPhotonPair,
    pair_out: &TwoPhotonPair,
    params: &AtomParams,
    rates: &EffectiveRates,
) -> RModeElement {
    let (_, rk) = rl_amplitudes_from_rates(pair_in.k1, params, rates);
    let (_, rp) = rl_amplitudes_from_rates(pair_in.p1, params, rates);
    RModeElement {
        forward: rk * rp,
        exchange: rk * rp,
        bound: quarter_kernel(pair_in, pair_out, params, rates),
    }
}

/// RL element: `t̄_{k₁}r̄_{p₁}` (photon `k₁` transmitted) on the forward
/// structure, `r̄_{k₁}t̄_{p₁}` on the exchange structure, plus `B/4`.
pub fn rl_element(
    pair_in: &TwoPhotonPair,
    pair_out: &TwoPhotonPair,
    params: &AtomParams,
    rates: &EffectiveRates,
) -> RModeElement {
    let (tk, rk) = rl_amplitudes_from_rates(pair_in.k1, params, rates);
    let (tp, rp) = rl_amplitudes_from_rates(pair_in.p1, params, rates);
    RModeElement {
        forward: tk * rp,
        exchange: rk * tp,
        bound: quarter_kernel(pair_in, pair_out, params, rates),
    }
}

/// Propagation direction of a photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// Right-moving.
    R,
    /// Left-moving.
    L,
}

/// Amplitudes of a photon pair on the right/left product basis, indexed
/// `[first][second]` with 0 = R and 1 = L.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModePair {
    /// Amplitude matrix.
    pub amp: [[Complex64; 2]; 2],
}

impl ModePair {
    /// Unit amplitude on one product state.
    pub fn basis(first: Direction, second: Direction) -> Self {
        let mut amp = [[Complex64::new(0.0, 0.0); 2]; 2];
        amp[first as usize][second as usize] = Complex64::new(1.0, 0.0);
        Self { amp }
    }

    /// Squared norm.
    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().flatten().map(|a| a.norm_sqr()).sum()
    }
}

/// Amplitudes of a photon pair on the even/odd product basis.
///
/// A left-mover with momentum `q` maps onto e/o modes with momentum `−q`;
/// its odd component carries a minus sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModePairDecomposition {
    /// Both photons even.
    pub ee: Complex64,
    /// First even, second odd.
    pub eo: Complex64,
    /// First odd, second even.
    pub oe: Complex64,
    /// Both photons odd.
    pub oo: Complex64,
}

impl ModePairDecomposition {
    /// Weight of the symmetrised mixed state `(|eo⟩ + |oe⟩)/√2`.
    pub fn eo_symmetric(&self) -> Complex64 {
        (self.eo + self.oe) * FRAC_1_SQRT_2
    }

    /// Squared norm.
    pub fn norm_sqr(&self) -> f64 {
        self.ee.norm_sqr() + self.eo.norm_sqr() + self.oe.norm_sqr() + self.oo.norm_sqr()
    }
}

/// Single-photon rotation `(R, L) → (e, o)`: `U = [[1, 1], [1, −1]]/√2`,
/// which is real, symmetric and its own inverse.
const U: [[f64; 2]; 2] = [[FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]];

fn rotate(m: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (a, row) in out.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            for (i, mi) in m.iter().enumerate() {
                for (j, mij) in mi.iter().enumerate() {
                    *cell += U[a][i] * U[b][j] * mij;
                }
            }
        }
    }
    out
}

/// Rotates a right/left pair onto the even/odd basis. `|k,p⟩_RR` goes to
/// `(|ee⟩ + |eo⟩ + |oe⟩ + |oo⟩)/2`: weights `(1/2, 1/√2, 1/2)` on ee, the
/// symmetrised mixed state and oo.
pub fn mode_decompose(pair: &ModePair) -> ModePairDecomposition {
    let r = rotate(&pair.amp);
    ModePairDecomposition {
        ee: r[0][0],
        eo: r[0][1],
        oe: r[1][0],
        oo: r[1][1],
    }
}

/// Inverse of [`mode_decompose`].
pub fn mode_recompose(d: &ModePairDecomposition) -> ModePair {
    ModePair {
        amp: rotate(&[[d.ee, d.eo], [d.oe, d.oo]]),
    }
}

/// Plane-wave part of the S-matrix on an e/o decomposition: an even photon
/// of momentum `q` acquires `t_q`, an odd one passes unchanged.
pub fn apply_plane_wave_s(d: &ModePairDecomposition, t_first: Complex64, t_second: Complex64) -> ModePairDecomposition {
    ModePairDecomposition {
        ee: d.ee * t_first * t_second,
        eo: d.eo * t_first,
        oe: d.oe * t_second,
        oo: d.oo,
    }
}
