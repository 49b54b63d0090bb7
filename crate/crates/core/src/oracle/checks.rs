//! Quadrature oracles for the two-photon sector. Each check recomputes a
//! closed-form result of the analytic layer from its integral definition.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::quadrature::{integrate_to_infinity, integrate_with_breaks, principal_value, QuadOptions};
use crate::error::{Error, Result};
use crate::model::{AtomParams, EffectiveRates};
use crate::smatrix::{
    bound_kernel, element_ee, ll_element, output_realspace_e, rl_element, rr_element, sigma,
    transmission_from_rates,
};
use crate::two_photon_eigen::{
    basis_antisymmetric, basis_symmetric, bound_transmission_markov, bound_wavefunction,
    scattering_in_state, TwoPhotonPair,
};

/// Truncation of the bound-norm integral, in units of `1/Γ_g`.
pub const BOUND_NORM_RANGE: f64 = 60.0;
/// Truncation of the bound/scattering overlap integral, in units of `1/Γ_g`.
pub const OVERLAP_RANGE: f64 = 40.0;

fn opts() -> QuadOptions {
    QuadOptions::with_tol(1e-14, 1e-12)
}

/// `∫dx |ψ_B(x_c, x)|²` over the relative coordinate on `|x| ≤ 60/Γ_g`.
/// The exact value is `1/(2π)` for every `Γ_g > 0`.
pub fn quad_bound_norm(rates: &EffectiveRates) -> Result<f64> {
    let g = rates.gamma_real;
    // Surface the missing bound state before integrating anything.
    bound_wavefunction(0.0, 0.0, 0.0, rates)?;
    let l = BOUND_NORM_RANGE / g;
    let r = integrate_with_breaks(
        |x| Complex64::new(bound_wavefunction(0.0, 0.0, x, rates).map_or(0.0, |v| v.norm_sqr()), 0.0),
        -l,
        l,
        &[0.0],
        opts(),
    )?;
    Ok(r.value.re)
}

/// Relative-coordinate overlap `∫dx ψ_B*(0, x) F(x/2, −x/2)` of the bound
/// in-state and the Bethe in-state `F = c_S S + c_A A` of the same energy,
/// on `|x| ≤ 40/Γ_g`. The centre-of-mass integral only contributes
/// `δ(E − E′)` and is left out.
pub fn quad_overlap_bf(pair: &TwoPhotonPair, rates: &EffectiveRates) -> Result<Complex64> {
    let g = rates.gamma_real;
    bound_wavefunction(0.0, 0.0, 0.0, rates)?;
    let (c, _) = pair.canonical();
    let w = scattering_in_state(&c, rates);
    let e = c.e_total();
    let f = |x: f64| {
        let b = bound_wavefunction(e, 0.0, x, rates).unwrap_or_default();
        let s = basis_symmetric(&c, x / 2.0, -x / 2.0);
        let a = basis_antisymmetric(&c, x / 2.0, -x / 2.0);
        b.conj() * (w.c_sym * s + w.c_antisym * a)
    };
    let l = OVERLAP_RANGE / g;
    let breaks = oscillation_breaks(-l, l, c.delta().abs(), &[0.0]);
    Ok(integrate_with_breaks(f, -l, l, &breaks, opts())?.value)
}

/// Break points every half period of an oscillation at angular frequency
/// `omega` on `[a, b]`, merged with `extra`.
fn oscillation_breaks(a: f64, b: f64, omega: f64, extra: &[f64]) -> Vec<f64> {
    let mut out = extra.to_vec();
    if omega > 0.0 {
        let step = PI / omega;
        let n = ((b - a) / step).floor() as usize;
        // Very fast oscillations are left to the adaptive driver.
        if n <= 100_000 {
            out.extend((1..=n).map(|i| a + i as f64 * step));
        }
    }
    out
}

/// Smooth energy-shell kernel reconstructed from its integral
/// representation, against the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelReport {
    /// Closed form `B(E₁; Δ₁, Δ₂)`.
    pub closed: Complex64,
    /// Quadrature reconstruction.
    pub reconstructed: Complex64,
    /// `|reconstructed − closed| / |closed|`.
    pub relative_error: f64,
}

/// The ingredients of the integral representation at fixed `E₁`.
struct PvKernel<'a> {
    e1: f64,
    params: &'a AtomParams,
    rates: &'a EffectiveRates,
    /// Position of the single-photon resonance in the relative momentum.
    peak: f64,
}

impl PvKernel<'_> {
    /// Plane-wave (Bethe) contribution `t(E/2 + q) t(E/2 − q) · 4q²/(4q² + Γ_g²)`.
    fn f(&self, q: f64) -> Complex64 {
        let g = self.rates.gamma_real;
        let t = transmission_from_rates(self.e1 / 2.0 + q, self.params, self.rates)
            * transmission_from_rates(self.e1 / 2.0 - q, self.params, self.rates);
        t * (4.0 * q * q / (4.0 * q * q + g * g))
    }

    fn scale(&self, q0: f64) -> f64 {
        10.0 * (self.peak + q0 + self.params.gamma())
    }

    /// `PV ∫_0^∞ f(q)/(q² − s) dq`.
    fn integral(&self, s: f64) -> Result<Complex64> {
        let breaks = [self.peak];
        if s <= 0.0 {
            let r = integrate_to_infinity(
                |q| if q == 0.0 { Complex64::new(0.0, 0.0) } else { self.f(q) / (q * q - s) },
                0.0,
                self.scale(0.0),
                &breaks,
                opts(),
            )?;
            return Ok(r.value);
        }
        let q0 = s.sqrt();
        let g = |q: f64| self.f(q) / (q + q0);
        let near = principal_value(g, 0.0, 2.0 * q0, q0, &breaks, opts())?;
        let far = integrate_to_infinity(|q| g(q) / (q - q0), 2.0 * q0, self.scale(q0), &breaks, opts())?;
        Ok(near.value + far.value)
    }

    /// `H(s) = (Γ_g²/π²) PV∫ f/(q² − s) − (Γ_g/π) f(√s)`.
    fn h(&self, s: f64) -> Result<Complex64> {
        let g = self.rates.gamma_real;
        Ok(g * g / (PI * PI) * self.integral(s)? - g / PI * self.f(s.max(0.0).sqrt()))
    }

    /// One-sided fourth-order derivative of `H`. `H` is not analytic across
    /// `s = 0`, so a centred stencil is never used.
    fn h_prime(&self, s: f64) -> Result<Complex64> {
        let g = self.rates.gamma_real;
        let step = 1e-3 * g * g;
        let v: Vec<Complex64> = (0..5).map(|i| self.h(s + i as f64 * step)).collect::<Result<_>>()?;
        Ok((-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * step))
    }
}

/// Rebuilds the smooth energy-shell part of the even-mode two-photon
/// element from the eigenstate expansion and compares it with `B`.
///
/// Expanding `S` over the Bethe and bound in-states and projecting on plane
/// waves leaves three energy-shell contributions:
///
/// * the Bethe family, a principal-value integral over the relative
///   momentum `q` of `f(q) = t(E/2+q)t(E/2−q) · 4q²/(4q²+Γ_g²)`,
/// * its on-shell residue `−(Γ_g/π) f(√s)`,
/// * the bound family, `8Γ_g³ t_B / (π(4Δ₁²+Γ_g²)(4Δ₂²+Γ_g²))`.
///
/// With `H(s) = (Γ_g²/π²) PV∫_0^∞ f(q)/(q²−s) dq − (Γ_g/π) f(√s)` the
/// first two combine into the divided difference
/// `[H(Δ₁²) − H(Δ₂²)]/(Δ₁² − Δ₂²)`. On the diagonal this becomes `H′(Δ₁²)`.
pub fn verify_bound_kernel_quadrature(
    pair_in: &TwoPhotonPair,
    pair_out: &TwoPhotonPair,
    params: &AtomParams,
    rates: &EffectiveRates,
) -> Result<KernelReport> {
    let g = rates.gamma_real;
    if !(g > 0.0) {
        return Err(Error::NoBoundState { gamma_real: g });
    }
    let e1 = pair_in.e_total();
    let de = e1 - 2.0 * params.omega();
    let k = PvKernel {
        e1,
        params,
        rates,
        peak: (de / 2.0 - rates.lamb_shift).abs(),
    };
    let (s1, s2) = (pair_in.delta().powi(2), pair_out.delta().powi(2));
    let divided = if (s1 - s2).abs() > 1e-2 * g * g {
        (k.h(s1)? - k.h(s2)?) / (s1 - s2)
    } else {
        k.h_prime(0.5 * (s1 + s2))?
    };
    let tb = bound_transmission_markov(e1, params, rates);
    let bound = 8.0 * g.powi(3) * tb / (PI * (4.0 * s1 + g * g) * (4.0 * s2 + g * g));
    let reconstructed = divided + bound;
    let closed = bound_kernel(e1, pair_in.delta(), pair_out.delta(), params, rates);
    Ok(KernelReport {
        closed,
        reconstructed,
        relative_error: (reconstructed - closed).norm() / closed.norm(),
    })
}

/// Comparison of the real-space even-mode output with the Fourier
/// transform of the momentum-space element.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierReport {
    /// Sampled relative coordinates `x`.
    pub x: Vec<f64>,
    /// Closed real-space amplitude at `(x_c = 0, x)`.
    pub closed: Vec<Complex64>,
    /// Transform of the element at the same points.
    pub transformed: Vec<Complex64>,
    /// `max |transformed − closed| / max |closed|`.
    pub relative_error: f64,
}

/// Momentum cut-off of the Fourier oracle, in units of `Γ`.
pub const FOURIER_CUTOFF: f64 = 2000.0;

/// Transforms the even-mode element `element_ee` to real space and compares
/// it with [`output_realspace_e`] at `x_c = 0`.
///
/// The delta terms transform in closed form to `t_k t_p cos(Δ₁x)`. The
/// energy-shell term becomes `∫_0^∞ B(Δ₂) cos(Δ₂x) dΔ₂`, integrated to the
/// cut-off `Λ`. The tail beyond `Λ` is added from the kernel's asymptote
/// `B ≈ C/(4Δ₂²)`: `C/(4Λ)` at `x = 0` and `−C sin(Λx)/(4xΛ²)` otherwise.
pub fn fourier_consistency_e(
    pair_in: &TwoPhotonPair,
    xs: &[f64],
    params: &AtomParams,
    rates: &EffectiveRates,
) -> Result<FourierReport> {
    let lam = FOURIER_CUTOFF * params.gamma();
    let e1 = pair_in.e_total();
    let s = sigma(e1, params, rates);
    let asym = {
        let g = rates.gamma_real;
        let d1 = pair_in.delta();
        16.0 * Complex64::i() * g * g * s / (PI * (4.0 * d1 * d1 - s * s))
    };
    let peak = (s.re / 2.0).abs();
    let pf = std::f64::consts::SQRT_2 / (2.0 * PI);
    let mut closed = Vec::with_capacity(xs.len());
    let mut transformed = Vec::with_capacity(xs.len());
    for &x in xs {
        let el = element_ee(pair_in, pair_in, params, rates);
        let breaks = oscillation_breaks(0.0, lam, x.abs(), &[peak]);
        let integral = integrate_with_breaks(
            |q| {
                let out = TwoPhotonPair::from_energy(e1, q);
                element_ee(pair_in, &out, params, rates).bound_kernel * (q * x).cos()
            },
            0.0,
            lam,
            &breaks,
            QuadOptions::with_tol(1e-13, 1e-10),
        )?
        .value;
        let tail = if x == 0.0 {
            asym / (4.0 * lam)
        } else {
            -asym * (lam * x).sin() / (4.0 * x * lam * lam)
        };
        let bracket = el.forward_coeff * (pair_in.delta() * x).cos() + integral + tail;
        transformed.push(pf * bracket);
        closed.push(output_realspace_e(pair_in, 0.0, x, params, rates));
    }
    let scale = closed.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let err = closed
        .iter()
        .zip(&transformed)
        .map(|(c, t)| (c - t).norm())
        .fold(0.0, f64::max);
    Ok(FourierReport {
        x: xs.to_vec(),
        closed,
        transformed,
        relative_error: err / scale,
    })
}

/// Momentum cut-off of the unitarity integrals, in units of `Γ`.
pub const UNITARITY_CUTOFF: f64 = 400.0;

/// Norm bookkeeping of the output state for a fixed incident pair.
///
/// The plane-wave part carries `|t_k t_p|²`. The energy-shell part
/// contributes an interference term `2Re[(t_k t_p)* B(Δ₁, Δ₁)]` and a
/// redistribution `∫_0^∞ |B(Δ₁, Δ₂)|² dΔ₂`. Both scale with the same
/// energy-shell weight, so unitarity requires them to cancel. `norm`
/// reports `|t_k t_p|² + (cross + redistributed)/|cross|`, which should
/// equal 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitarityReport {
    /// Plane-wave norm.
    pub plane_wave: f64,
    /// Interference of the plane-wave and energy-shell parts.
    pub cross: f64,
    /// Energy-shell redistribution, integrated to the cut-off.
    pub redistributed: f64,
    /// Normalised output norm.
    pub norm: f64,
}

fn shell_integral<F: Fn(f64) -> f64>(f: F, peak: f64, params: &AtomParams) -> Result<f64> {
    let lam = UNITARITY_CUTOFF * params.gamma();
    Ok(integrate_with_breaks(|q| Complex64::new(f(q), 0.0), 0.0, lam, &[peak], opts())?.value.re)
}

fn report(plane_wave: f64, cross: f64, redistributed: f64) -> UnitarityReport {
    let norm = if cross == 0.0 {
        plane_wave
    } else {
        plane_wave + (cross + redistributed) / cross.abs()
    };
    UnitarityReport { plane_wave, cross, redistributed, norm }
}

/// Even-mode unitarity check for the pair `pair_in`.
pub fn unitarity_e(pair_in: &TwoPhotonPair, params: &AtomParams, rates: &EffectiveRates) -> Result<UnitarityReport> {
    let el = element_ee(pair_in, pair_in, params, rates);
    let e1 = pair_in.e_total();
    let peak = (sigma(e1, params, rates).re / 2.0).abs();
    let red = shell_integral(
        |q| element_ee(pair_in, &TwoPhotonPair::from_energy(e1, q), params, rates).bound_kernel.norm_sqr(),
        peak,
        params,
    )?;
    let cross = 2.0 * (el.forward_coeff.conj() * el.bound_kernel).re;
    Ok(report(el.forward_coeff.norm_sqr(), cross, red))
}

/// Right/left flux closure for a right-moving incident pair.
///
/// All four outgoing channels are summed: RR, LL, and RL with the
/// transmitted photon from either incident momentum. The energy-shell terms
/// use the channel weights 1 (RR), 1 (LL) and 2 (RL). The bookkeeping
/// matches [`UnitarityReport`].
pub fn flux_closure_r(pair_in: &TwoPhotonPair, params: &AtomParams, rates: &EffectiveRates) -> Result<UnitarityReport> {
    let rr = rr_element(pair_in, pair_in, params, rates);
    let ll = ll_element(pair_in, pair_in, params, rates);
    let rl = rl_element(pair_in, pair_in, params, rates);
    let plane = rr.forward.norm_sqr() + ll.forward.norm_sqr() + rl.forward.norm_sqr() + rl.exchange.norm_sqr();
    let cross = 2.0
        * ((rr.forward.conj() * rr.bound).re
            + (ll.forward.conj() * ll.bound).re
            + ((rl.forward + rl.exchange).conj() * rl.bound).re);
    let e1 = pair_in.e_total();
    let peak = (sigma(e1, params, rates).re / 2.0).abs();
    let red = shell_integral(
        |q| {
            let out = TwoPhotonPair::from_energy(e1, q);
            rr_element(pair_in, &out, params, rates).bound.norm_sqr()
                + ll_element(pair_in, &out, params, rates).bound.norm_sqr()
                + 2.0 * rl_element(pair_in, &out, params, rates).bound.norm_sqr()
        },
        peak,
        params,
    )?;
    Ok(report(plane, cross, red))
}
