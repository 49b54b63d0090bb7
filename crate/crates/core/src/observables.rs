//! Output observables as data: real-space two-photon maps for a right-moving
//! incident pair, the momentum-space bound distribution with its peak
//! geometry, and the scaling of peak heights with the number of coupling
//! points.
//!
//! Output units follow the usual figure conventions: positions as
//! `x̄ = xΓ`, detunings as `Δ̄ = Δ/(Γ/2)` and the kernel as `B̄ = (Γ/2)B`.

use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::model::{equal_spacing_rates, AtomParams, EffectiveRates, I};
use crate::smatrix::{
    bound_factor, bound_kernel, bound_profile, rl_amplitudes_from_rates, sigma, OutputChannel,
};
use crate::two_photon_eigen::{TwoPhotonPair, DECOUPLED_RELATIVE};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// A uniform sampling axis `min, min + step, …, max` with `n ≥ 2` samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridAxis {
    /// First sample.
    pub min: f64,
    /// Last sample.
    pub max: f64,
    /// Number of samples.
    pub n: usize,
}

impl GridAxis {
    /// Validated constructor.
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(invalid("grid", "axis bounds must be finite"));
        }
        if min >= max {
            return Err(invalid("grid", format!("axis minimum {min} must be below maximum {max}")));
        }
        if n < 2 {
            return Err(invalid("grid", format!("axis needs at least 2 samples, got {n}")));
        }
        Ok(Self { min, max, n })
    }

    /// Sample spacing.
    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.n - 1) as f64
    }

    /// Sample `i`; the last sample is exactly `max`.
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.max
        } else {
            self.min + i as f64 * self.step()
        }
    }

    /// All samples in order.
    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.value(i)).collect()
    }
}

/// A rectangular grid; values are stored row-major with `axis1` as rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid2 {
    /// Row axis.
    pub axis1: GridAxis,
    /// Column axis.
    pub axis2: GridAxis,
}

impl Grid2 {
    /// Square grid with identical axes.
    pub fn square(axis: GridAxis) -> Self {
        Self { axis1: axis, axis2: axis }
    }

    /// Default real-space grid: `x̄ ∈ [−10, 10]` with 401 samples per axis.
    pub fn default_spatial() -> Self {
        Self::square(GridAxis { min: -10.0, max: 10.0, n: 401 })
    }

    /// Default momentum grid: `Δ̄ ∈ [−6, 6]` with 601 samples per axis.
    pub fn default_momentum() -> Self {
        Self::square(GridAxis { min: -6.0, max: 6.0, n: 601 })
    }

    /// Total number of samples.
    pub fn len(&self) -> usize {
        self.axis1.n * self.axis2.n
    }

    /// Always false: axes carry at least two samples.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Which quantity a [`FieldMap`] samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MapKind {
    /// Both photons transmitted (right-moving), over `(x̄₁, x̄₂)`.
    T2,
    /// Both photons reflected (left-moving), over `(x̄₁, x̄₂)`.
    R2,
    /// One photon transmitted and one reflected, over `(x̄₁, x̄₂)`.
    Rt,
    /// Bound kernel `B̄` over `(Δ̄₁, Δ̄₂)`.
    BoundMomentum,
}

impl MapKind {
    /// Short lowercase name used in file names and metadata.
    pub fn name(self) -> &'static str {
        match self {
            MapKind::T2 => "t2",
            MapKind::R2 => "r2",
            MapKind::Rt => "rt",
            MapKind::BoundMomentum => "bound_momentum",
        }
    }
}

/// Complex samples of one quantity over a 2-D grid, with a parameter record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldMap {
    /// Sampled quantity.
    pub kind: MapKind,
    /// Sampling grid in output units.
    pub grid: Grid2,
    /// Row-major samples.
    pub values: Vec<Complex64>,
    /// Parameter record as ordered `(name, value)` pairs.
    pub meta: Vec<(String, f64)>,
}

impl FieldMap {
    /// Evaluates `f(u₁, u₂)` over the grid in parallel; ordering is row-major
    /// regardless of scheduling.
    pub fn evaluate<F>(kind: MapKind, grid: Grid2, meta: Vec<(String, f64)>, f: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        let a1 = grid.axis1.values();
        let a2 = grid.axis2.values();
        let values = a1
            .par_iter()
            .flat_map_iter(|&u1| a2.iter().map(move |&u2| (u1, u2)).collect::<Vec<_>>())
            .map(|(u1, u2)| f(u1, u2))
            .collect();
        Self { kind, grid, values, meta }
    }

    /// Sample at row `i1`, column `i2`.
    pub fn at(&self, i1: usize, i2: usize) -> Complex64 {
        self.values[i1 * self.grid.axis2.n + i2]
    }

    /// Squared moduli, row-major.
    pub fn intensity(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// True when no sample is NaN or infinite.
    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Index of the largest intensity; ties resolve to the first in
    /// row-major order.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = 0;
        let mut best_v = f64::NEG_INFINITY;
        for (i, v) in self.values.iter().enumerate() {
            let a = v.norm_sqr();
            if a > best_v {
                best_v = a;
                best = i;
            }
        }
        (best / self.grid.axis2.n, best % self.grid.axis2.n)
    }

    /// Strict interior local maxima of the intensity that reach at least
    /// `rel_threshold` of the global maximum, as grid indices.
    pub fn local_maxima(&self, rel_threshold: f64) -> Vec<(usize, usize)> {
        let (n1, n2) = (self.grid.axis1.n, self.grid.axis2.n);
        let inten = self.intensity();
        let max = inten.iter().cloned().fold(0.0, f64::max);
        let at = |i: usize, j: usize| inten[i * n2 + j];
        let mut out = Vec::new();
        for i in 1..n1.saturating_sub(1) {
            for j in 1..n2.saturating_sub(1) {
                let v = at(i, j);
                if v < rel_threshold * max {
                    continue;
                }
                let mut is_max = true;
                for di in [-1i64, 0, 1] {
                    for dj in [-1i64, 0, 1] {
                        if di == 0 && dj == 0 {
                            continue;
                        }
                        let w = at((i as i64 + di) as usize, (j as i64 + dj) as usize);
                        // Ties are broken towards the lower index so plateaus
                        // report a single maximum.
                        let later = di > 0 || (di == 0 && dj > 0);
                        if w > v || (!later && w == v) {
                            is_max = false;
                        }
                    }
                }
                if is_max {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// An incident right-moving pair specified by its energy offset and
/// half-difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IncidentPair {
    /// `δE₁ = E₁ − 2Ω`.
    pub delta_e1: f64,
    /// `Δ₁ = (k₁ − p₁)/2`.
    pub delta1: f64,
}

impl IncidentPair {
    /// Plane-wave pair for the given atom frequency.
    pub fn pair(&self, params: &AtomParams) -> TwoPhotonPair {
        TwoPhotonPair::from_energy(2.0 * params.omega() + self.delta_e1, self.delta1)
    }

    /// The pair with both photons on the single-photon resonance
    /// `k₁ = p₁ = Ω + Δ_L`.
    pub fn resonant(rates: &EffectiveRates) -> Self {
        Self { delta_e1: 2.0 * rates.lamb_shift, delta1: 0.0 }
    }
}

/// Real-space two-photon output amplitudes for a right-moving incident pair
/// under the Markovian single-photon coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RModeOutput {
    e1: f64,
    delta1: f64,
    t_k: Complex64,
    t_p: Complex64,
    r_k: Complex64,
    r_p: Complex64,
    bound: Complex64,
    params: AtomParams,
    rates: EffectiveRates,
}

impl RModeOutput {
    /// Precomputes the plane-wave and bound coefficients of the pair.
    pub fn new(incident: &IncidentPair, params: &AtomParams, rates: &EffectiveRates) -> Self {
        let pair = incident.pair(params);
        let (t_k, r_k) = rl_amplitudes_from_rates(pair.k1, params, rates);
        let (t_p, r_p) = rl_amplitudes_from_rates(pair.p1, params, rates);
        Self {
            e1: pair.e_total(),
            delta1: pair.delta(),
            t_k,
            t_p,
            r_k,
            r_p,
            bound: bound_factor(&pair, params, rates),
            params: *params,
            rates: *rates,
        }
    }

    /// Both photons right-moving:
    /// `e^{iE₁x_c} √2/(2π) [t̄_k t̄_p cos(Δ₁x) − Γ_g²/(4Δ₁²−Σ²) e^{iδE₁|x|/2 − Γ_e|x|/2}]`.
    pub fn t2(&self, x1: f64, x2: f64) -> Complex64 {
        let pf = OutputChannel::RR.prefactor();
        let (xc, x) = ((x1 + x2) / 2.0, x1 - x2);
        let plane = self.t_k * self.t_p * (self.delta1 * x).cos();
        let b = pf.bound_weight * self.bound * bound_profile(x, self.e1, &self.params, &self.rates);
        Complex64::from_polar(pf.amplitude, self.e1 * xc) * (plane - b)
    }

    /// Both photons left-moving: as [`Self::t2`] with `r̄` in place of `t̄`
    /// and the centre-of-mass phase reversed.
    pub fn r2(&self, x1: f64, x2: f64) -> Complex64 {
        let pf = OutputChannel::LL.prefactor();
        let (xc, x) = ((x1 + x2) / 2.0, x1 - x2);
        let plane = self.r_k * self.r_p * (self.delta1 * x).cos();
        let b = pf.bound_weight * self.bound * bound_profile(x, self.e1, &self.params, &self.rates);
        Complex64::from_polar(pf.amplitude, -self.e1 * xc) * (plane - b)
    }

    /// Photon at `x₁` right-moving, photon at `x₂` left-moving:
    /// `(1/2π) e^{iE₁x/2} [t̄_k r̄_p e^{2iΔ₁x_c} + r̄_k t̄_p e^{−2iΔ₁x_c}
    /// − 2Γ_g²/(4Δ₁²−Σ²) e^{iδE₁|x_c| − Γ_e|x_c|}]`.
    ///
    /// The photons separate by `x₁ + x₂ = 2x_c`, so the bound term decays in
    /// `|x_c|`.
    pub fn rt(&self, x1: f64, x2: f64) -> Complex64 {
        let pf = OutputChannel::RL.prefactor();
        let (xc, x) = ((x1 + x2) / 2.0, x1 - x2);
        let ph = Complex64::from_polar(1.0, 2.0 * self.delta1 * xc);
        let plane = self.t_k * self.r_p * ph + self.r_k * self.t_p * ph.conj();
        let b = pf.bound_weight
            * self.bound
            * bound_profile(2.0 * xc, self.e1, &self.params, &self.rates);
        Complex64::from_polar(pf.amplitude, self.e1 * x / 2.0) * (plane - b)
    }
}

/// Closed forms of the three amplitudes for the resonant pair `Δ₁ = 0`,
/// `δE₁ = 2Δ_L`, written with `(2Δ_L + iΓ_e)²` in the denominators.
///
/// The `r_t` bound term oscillates as `e^{2iΔ_L|x_c|}`: with `δE₁ = 2Δ_L`,
/// the general exponent `iδE₁|x_c|` is `2iΔ_L|x_c|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonantOutput {
    e1: f64,
    lamb: f64,
    gamma_e: Complex64,
    ratio: Complex64,
}

impl ResonantOutput {
    /// Coefficients for the resonant pair.
    pub fn new(params: &AtomParams, rates: &EffectiveRates) -> Self {
        let lamb = rates.lamb_shift;
        let d = 2.0 * lamb + I * rates.gamma_complex;
        let g = rates.gamma_real;
        Self {
            e1: 2.0 * params.omega() + 2.0 * lamb,
            lamb,
            gamma_e: rates.gamma_complex,
            ratio: g * g / (d * d),
        }
    }

    /// `e^{iE₁x_c}/(√2π) · Γ_g² e^{iΔ_L|x| − Γ_e|x|/2}/(2Δ_L + iΓ_e)²`.
    pub fn t2(&self, x1: f64, x2: f64) -> Complex64 {
        let (xc, x) = ((x1 + x2) / 2.0, (x1 - x2).abs());
        Complex64::from_polar(FRAC_1_SQRT_2 / PI, self.e1 * xc)
            * self.ratio
            * (I * self.lamb * x - self.gamma_e * x / 2.0).exp()
    }

    /// `e^{−iE₁x_c}/(√2π) · [1 + Γ_g² e^{iΔ_L|x| − Γ_e|x|/2}/(2Δ_L + iΓ_e)²]`.
    pub fn r2(&self, x1: f64, x2: f64) -> Complex64 {
        let (xc, x) = ((x1 + x2) / 2.0, (x1 - x2).abs());
        Complex64::from_polar(FRAC_1_SQRT_2 / PI, -self.e1 * xc)
            * (1.0 + self.ratio * (I * self.lamb * x - self.gamma_e * x / 2.0).exp())
    }

    /// `e^{iE₁x/2}/(2π) · 2Γ_g² e^{2iΔ_L|x_c| − Γ_e|x_c|}/(2Δ_L + iΓ_e)²`.
    pub fn rt(&self, x1: f64, x2: f64) -> Complex64 {
        let (xc, x) = (((x1 + x2) / 2.0).abs(), x1 - x2);
        Complex64::from_polar(1.0 / (2.0 * PI), self.e1 * x / 2.0)
            * 2.0
            * self.ratio
            * (2.0 * I * self.lamb * xc - self.gamma_e * xc).exp()
    }
}

/// The three real-space maps of one incident pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpatialMaps {
    /// Both photons transmitted.
    pub t2: FieldMap,
    /// Both photons reflected.
    pub r2: FieldMap,
    /// One photon each way.
    pub rt: FieldMap,
}

fn pair_meta(incident: &IncidentPair, params: &AtomParams, rates: &EffectiveRates) -> Vec<(String, f64)> {
    vec![
        ("omega".into(), params.omega()),
        ("gamma".into(), params.gamma()),
        ("gamma_real".into(), rates.gamma_real),
        ("lamb_shift".into(), rates.lamb_shift),
        ("delta_e1".into(), incident.delta_e1),
        ("delta1".into(), incident.delta1),
    ]
}

/// Samples `t₂`, `r₂` and `r_t` over a grid in `x̄ = xΓ`.
pub fn spatial_maps(
    incident: &IncidentPair,
    params: &AtomParams,
    rates: &EffectiveRates,
    grid: Grid2,
) -> SpatialMaps {
    let out = RModeOutput::new(incident, params, rates);
    let g = params.gamma();
    let meta = pair_meta(incident, params, rates);
    SpatialMaps {
        t2: FieldMap::evaluate(MapKind::T2, grid, meta.clone(), |a, b| out.t2(a / g, b / g)),
        r2: FieldMap::evaluate(MapKind::R2, grid, meta.clone(), |a, b| out.r2(a / g, b / g)),
        rt: FieldMap::evaluate(MapKind::Rt, grid, meta, |a, b| out.rt(a / g, b / g)),
    }
}

/// Samples `B̄ = (Γ/2)B` over a grid in `Δ̄ = Δ/(Γ/2)` at fixed `δE₁`.
pub fn momentum_bound_map(
    delta_e1: f64,
    params: &AtomParams,
    rates: &EffectiveRates,
    grid: Grid2,
) -> FieldMap {
    let half = params.gamma() / 2.0;
    let e1 = 2.0 * params.omega() + delta_e1;
    let meta = vec![
        ("omega".into(), params.omega()),
        ("gamma".into(), params.gamma()),
        ("gamma_real".into(), rates.gamma_real),
        ("lamb_shift".into(), rates.lamb_shift),
        ("delta_e1".into(), delta_e1),
    ];
    FieldMap::evaluate(MapKind::BoundMomentum, grid, meta, |d1, d2| {
        half * bound_kernel(e1, d1 * half, d2 * half, params, rates)
    })
}

/// Peak geometry of the momentum-space bound distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakReport {
    /// Peak positions `(Δ̄₁, Δ̄₂)` from the vanishing real part of the
    /// kernel denominator, `Δ₁, Δ₂ = ±(δE₁/2 − Δ_L)`.
    pub positions: Vec<(f64, f64)>,
    /// `|B̄|²` at each entry of `positions`.
    pub heights: Vec<f64>,
    /// Positions of the true maxima of `|B|²`, at
    /// `4Δ² = (δE₁ − 2Δ_L)² − Γ_g²` when that is positive and at zero
    /// otherwise. They coincide with `positions` when `Γ_g ≪ |δE₁ − 2Δ_L|`.
    pub maxima: Vec<(f64, f64)>,
    /// `|B̄|²` at each entry of `maxima`.
    pub maxima_heights: Vec<f64>,
    /// Peak width: the effective decay rate, in units of `Γ`.
    pub width: f64,
}

fn four_fold(p: f64) -> Vec<(f64, f64)> {
    if p == 0.0 {
        vec![(0.0, 0.0)]
    } else {
        vec![(p, p), (p, -p), (-p, p), (-p, -p)]
    }
}

/// Peak positions, heights and width at `δE₁`.
///
/// Coincident `±` positions (the resonant case, up to `1e−12·Γ`) collapse to
/// the single central entry.
pub fn peak_positions(delta_e1: f64, params: &AtomParams, rates: &EffectiveRates) -> PeakReport {
    let half = params.gamma() / 2.0;
    let e1 = 2.0 * params.omega() + delta_e1;
    let a = delta_e1 / 2.0 - rates.lamb_shift;
    let tol = DECOUPLED_RELATIVE * params.gamma();
    let p = if a.abs() <= tol { 0.0 } else { a.abs() / half };
    let disc = a * a - rates.gamma_real * rates.gamma_real / 4.0;
    let m = if disc > tol * tol { disc.sqrt() / half } else { 0.0 };
    let height = |&(d1, d2): &(f64, f64)| (half * bound_kernel(e1, d1 * half, d2 * half, params, rates)).norm_sqr();
    let positions = four_fold(p);
    let maxima = four_fold(m);
    PeakReport {
        heights: positions.iter().map(height).collect(),
        maxima_heights: maxima.iter().map(height).collect(),
        positions,
        maxima,
        width: rates.gamma_real / params.gamma(),
    }
}

/// Resonant peak value `B₁ = −16/(πΓ_N)`.
pub fn resonant_peak(gamma_real: f64) -> f64 {
    -16.0 / (PI * gamma_real)
}

/// Detuned peak value at `Δ₁ = Δ₂ = (δE₁ − 2Δ_L)/2`:
/// `−16iΣ_N/(π[2Δ₁ + Σ_N][2Δ₂ + Σ_N])`.
pub fn detuned_peak(delta_e1: f64, params: &AtomParams, rates: &EffectiveRates) -> Complex64 {
    let s = sigma(2.0 * params.omega() + delta_e1, params, rates);
    let d = delta_e1 - 2.0 * rates.lamb_shift;
    -16.0 * I * s / (PI * (d + s) * (d + s))
}

/// One row of the peak-scaling table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NScalingRow {
    /// Number of coupling points.
    pub n: usize,
    /// Effective decay rate `Γ_N`.
    pub gamma_n: f64,
    /// Lamb shift `Δ_L^N`.
    pub lamb_shift: f64,
    /// True when `Γ_N` vanishes and no bound state exists.
    pub decoupled: bool,
    /// True when `δE₁ = 2Δ_L^N`, so the single central peak is reported.
    pub resonant: bool,
    /// Peak value `B₁` or `B₂`; `None` when decoupled.
    pub peak: Option<Complex64>,
    /// `|peak|²`; `None` when decoupled.
    pub height: Option<f64>,
}

/// Peak heights against the number of equally spaced coupling points.
///
/// A resonant row uses `B₁ = −16/(πΓ_N)`, a detuned row the value at the
/// peak `Δ₁ = Δ₂ = (δE₁ − 2Δ_L^N)/2`. Decoupled rows are flagged, not
/// dropped.
pub fn n_scaling(
    n_list: &[usize],
    beta: f64,
    delta_e1: f64,
    params: &AtomParams,
) -> Result<Vec<NScalingRow>> {
    n_list
        .iter()
        .map(|&n| {
            let rates = equal_spacing_rates(n, beta, params)?;
            let decoupled = rates.gamma_real <= DECOUPLED_RELATIVE * params.gamma();
            let resonant = (delta_e1 - 2.0 * rates.lamb_shift).abs() <= DECOUPLED_RELATIVE * params.gamma();
            let peak = (!decoupled).then(|| {
                if resonant {
                    Complex64::new(resonant_peak(rates.gamma_real), 0.0)
                } else {
                    detuned_peak(delta_e1, params, &rates)
                }
            });
            Ok(NScalingRow {
                n,
                gamma_n: rates.gamma_real,
                lamb_shift: rates.lamb_shift,
                decoupled,
                resonant,
                height: peak.map(|p| p.norm_sqr()),
                peak,
            })
        })
        .collect()
}

/// Exact `Γ_N/Γ` at `β = π` for equal spacing: `(1 − cos Nπ)/(2N²)`, i.e.
/// `1/N²` for odd `N` and `0` for even `N`.
pub fn decay_ratio_at_pi(n: usize) -> Result<Ratio<u64>> {
    if n == 0 {
        return Err(invalid("n", "at least one coupling point is required"));
    }
    let n = n as u64;
    Ok(if n % 2 == 1 { Ratio::new(1, n * n) } else { Ratio::from_integer(0) })
}

/// Exact `|B₁(N)|²/|B₁(1)|² = (Γ/Γ_N)²` at `β = π`; `None` for even `N`.
pub fn resonant_height_ratio_at_pi(n: usize) -> Result<Option<Ratio<u64>>> {
    let r = decay_ratio_at_pi(n)?;
    Ok((*r.numer() != 0).then(|| {
        let inv = r.recip();
        inv * inv
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::effective_rates_two_point;
    use std::f64::consts::FRAC_PI_2;

    fn params() -> AtomParams {
        AtomParams::new(30.0, 1.0).unwrap()
    }

    #[test]
    fn axis_endpoints_and_validation() {
        let a = GridAxis::new(-10.0, 10.0, 401).unwrap();
        assert_eq!(a.value(0), -10.0);
        assert_eq!(a.value(400), 10.0);
        assert_eq!(a.value(200), 0.0);
        assert!(GridAxis::new(1.0, 1.0, 3).is_err());
        assert!(GridAxis::new(0.0, 1.0, 1).is_err());
        assert!(GridAxis::new(0.0, f64::NAN, 3).is_err());
    }

    #[test]
    fn evaluation_is_row_major() {
        let g = Grid2 {
            axis1: GridAxis::new(0.0, 1.0, 2).unwrap(),
            axis2: GridAxis::new(0.0, 2.0, 3).unwrap(),
        };
        let m = FieldMap::evaluate(MapKind::T2, g, vec![], Complex64::new);
        assert_eq!(m.at(1, 2), Complex64::new(1.0, 2.0));
        assert_eq!(m.at(0, 1), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn resonant_pair_reflects_both_photons_plane_waves() {
        let p = params();
        let r = effective_rates_two_point(FRAC_PI_2, &p);
        let out = RModeOutput::new(&IncidentPair::resonant(&r), &p, &r);
        assert!(out.t_k.norm() < 1e-14 && (out.r_k + 1.0).norm() < 1e-14);
        assert!((out.bound - 1.0).norm() < 1e-14);
    }

    #[test]
    fn peak_report_examples() {
        let p = params();
        let r = effective_rates_two_point(FRAC_PI_2, &p);
        let rep = peak_positions(2.0, &p, &r);
        assert_eq!(rep.positions.len(), 4);
        assert!((rep.positions[0].0 - 1.5).abs() < 1e-14);
        let res = peak_positions(2.0 * r.lamb_shift, &p, &r);
        assert_eq!(res.positions, vec![(0.0, 0.0)]);
        let expect = (0.5 * resonant_peak(r.gamma_real)).powi(2);
        assert!((res.heights[0] - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn detuned_peak_matches_kernel() {
        let p = params();
        for beta in [0.0, 1.0, 2.5] {
            let r = effective_rates_two_point(beta, &p);
            let de = 1.7;
            let d = (de - 2.0 * r.lamb_shift) / 2.0;
            let b = bound_kernel(2.0 * p.omega() + de, d, d, &p, &r);
            assert!((b - detuned_peak(de, &p, &r)).norm() < 1e-12 * b.norm());
        }
    }

    #[test]
    fn rational_ratios() {
        assert_eq!(decay_ratio_at_pi(3).unwrap(), Ratio::new(1, 9));
        assert_eq!(decay_ratio_at_pi(4).unwrap(), Ratio::from_integer(0));
        assert_eq!(resonant_height_ratio_at_pi(5).unwrap(), Some(Ratio::from_integer(625)));
        assert_eq!(resonant_height_ratio_at_pi(2).unwrap(), None);
        assert!(decay_ratio_at_pi(0).is_err());
    }

    #[test]
    fn decoupled_rows_are_flagged() {
        let rows = n_scaling(&[1, 2, 3], std::f64::consts::PI, 0.0, &params()).unwrap();
        assert!(!rows[0].decoupled && rows[1].decoupled && !rows[2].decoupled);
        assert!(rows[1].height.is_none());
        assert!(rows[2].resonant);
    }
}
