//! Tight-binding lattice oracle.
//!
//! The waveguide becomes an open chain with dispersion `−2J cos q`. Packets
//! are centred near the band centre `q₀ = π/2`, where the group velocity is
//! `2J` and the dispersion is locally linear. The atom sits at the band
//! centre and couples to the sites that carry the coupling points. A point
//! with phase `β_j` sits `β_j/q₀` sites from the first point, so the
//! lattice reproduces the geometry's Markovian phases exactly.
//!
//! Lattice time equals model time. A single site coupled with strength `g`
//! decays at `g²/J`, so each of the `N` points carries `√(ΓJ)/N` and the
//! in-phase atom decays at `Γ`. Lengths convert through the group velocity:
//! `n` sites correspond to `n/(2J)` model length units.
//!
//! Time stepping uses the Chebyshev expansion of `e^{−iHτ}`. It is exact to
//! round-off for any step, so the norm is conserved to `~1e−13`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use rayon::prelude::*;

use crate::model::{effective_rates_n_point, AtomGeometry, AtomParams};
use crate::single_photon::single_photon_n_point;

/// Largest lattice accepted by the two-photon run.
pub const MAX_TWO_PHOTON_SITES: usize = 400;
/// Largest tolerated norm drift before a run is declared invalid.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;
/// Maximum inter-point delay, in units of `1/Γ_g`.
pub const MARKOV_DELAY_LIMIT: f64 = 0.05;

/// Initial Gaussian packet `exp[−(n − n₀)²/(4σ²) + i(q₀ + δq)n]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Packet {
    /// Momentum offset `δq` from the band centre.
    pub delta_q: f64,
    /// Width `σ` of the probability density, in sites.
    pub sigma: f64,
    /// Initial centre `n₀`, in sites.
    pub center: f64,
}

impl Packet {
    /// Packet whose centre energy is detuned by `detuning` from the atom.
    /// Solves `2J sin δq = detuning`.
    pub fn from_detuning(detuning: f64, hopping: f64, sigma: f64, center: f64) -> Result<Self> {
        let s = detuning / (2.0 * hopping);
        if !(s.abs() < 1.0) {
            return Err(Error::Lattice(format!(
                "detuning {detuning} outside the band of half-width {}",
                2.0 * hopping
            )));
        }
        Ok(Self { delta_q: s.asin(), sigma, center })
    }

    /// Centre detuning `2J sin δq`.
    pub fn detuning(&self, hopping: f64) -> f64 {
        2.0 * hopping * self.delta_q.sin()
    }

    fn amplitudes(&self, sites: usize) -> Vec<Complex64> {
        let q = FRAC_PI_2 + self.delta_q;
        let mut v: Vec<Complex64> = (0..sites)
            .map(|n| {
                let d = n as f64 - self.center;
                Complex64::from_polar((-d * d / (4.0 * self.sigma * self.sigma)).exp(), q * n as f64)
            })
            .collect();
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|a| *a /= norm);
        v
    }
}

/// Lattice run parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeConfig {
    /// Number of sites `M`.
    pub sites: usize,
    /// Hopping `J`.
    pub hopping: f64,
    /// Site of the first coupling point.
    pub anchor: usize,
    /// Incident packet.
    pub packet: Packet,
    /// Chebyshev step `τ`.
    pub dt: f64,
    /// Total evolution time.
    pub t_max: f64,
}

impl LatticeConfig {
    /// Group velocity at the band centre, `2J`.
    pub fn group_velocity(&self) -> f64 {
        2.0 * self.hopping
    }

    /// Chain sized for a single-photon scattering run.
    ///
    /// The packet starts `5σ` left of the first coupling point, the run
    /// lasts until the packet has cleared the atom by `5σ` plus twenty
    /// relaxation times, and the chain leaves room for the reflected packet
    /// on the left. `Γ_ref = max(Γ_g, Γ/2)` sets the relaxation time.
    pub fn single_photon(geom: &AtomGeometry, params: &AtomParams, detuning: f64, sigma: f64) -> Result<Self> {
        let hopping = 1.0;
        let v = 2.0 * hopping;
        let g_ref = effective_rates_n_point(geom, params).gamma_real.max(0.5 * params.gamma());
        let span = geom.phases().last().map_or(0.0, |b| b / FRAC_PI_2).round();
        let anchor = (10.0 * sigma + 25.0 * v / g_ref).ceil();
        let t_max = (10.0 * sigma + span) / v + 20.0 / g_ref;
        let sites = (2.2 * anchor).max(2.1 * v * t_max).ceil() as usize + 10;
        let cfg = Self {
            sites,
            hopping,
            anchor: anchor as usize,
            packet: Packet::from_detuning(detuning, hopping, sigma, anchor - 5.0 * sigma)?,
            dt: 20.0,
            t_max,
        };
        cfg.validate(geom, params)?;
        Ok(cfg)
    }

    /// Two-photon desk run on 400 sites: atom at site 200, resonant packets
    /// with `σ = 20` starting at site 100, evolved to `t = 99`.
    ///
    /// The layout is tuned for `Γ ≈ 0.2J`, where the relaxation length `v/Γ`
    /// is 10 sites and a single-point delay of one site meets the Markov
    /// guard at `β₁ = π/2`.
    pub fn two_photon_desk() -> Self {
        Self {
            sites: MAX_TWO_PHOTON_SITES,
            hopping: 1.0,
            anchor: 200,
            packet: Packet { delta_q: 0.0, sigma: 20.0, center: 100.0 },
            dt: 5.0,
            t_max: 99.0,
        }
    }

    /// Coupling sites of a geometry: `anchor + β_j/q₀`. Each offset must be
    /// an integer to `1e−9`.
    pub fn coupling_sites(&self, geom: &AtomGeometry) -> Result<Vec<usize>> {
        geom.phases()
            .iter()
            .map(|&b| {
                let d = b / FRAC_PI_2;
                let r = d.round();
                if (d - r).abs() > 1e-9 || r < 0.0 {
                    return Err(Error::Lattice(format!(
                        "phase {b} is not a non-negative multiple of π/2 and has no lattice image"
                    )));
                }
                Ok(self.anchor + r as usize)
            })
            .collect()
    }

    /// Validates the guards against a geometry:
    ///
    /// * coupling sites strictly inside `[0.2M, 0.8M]`,
    /// * `σ ≥ 10` sites and the packet `n₀ ± 5σ` inside the chain,
    /// * `t_max < M/(2v)`,
    /// * inter-point delay at most `0.05/Γ_g`,
    /// * finite positive `J`, `dt` and `t_max`.
    pub fn validate(&self, geom: &AtomGeometry, params: &AtomParams) -> Result<Vec<usize>> {
        let bad = |m: String| Err(Error::Lattice(m));
        if !(self.hopping > 0.0 && self.hopping.is_finite()) {
            return bad(format!("hopping must be positive, got {}", self.hopping));
        }
        if !(self.dt > 0.0 && self.dt.is_finite() && self.t_max > 0.0 && self.t_max.is_finite()) {
            return bad(format!("dt and t_max must be positive, got {} and {}", self.dt, self.t_max));
        }
        let m = self.sites as f64;
        let legs = self.coupling_sites(geom)?;
        for &l in &legs {
            let x = l as f64;
            if !(x > 0.2 * m && x < 0.8 * m) {
                return bad(format!("coupling site {l} outside ({}, {})", 0.2 * m, 0.8 * m));
            }
        }
        if self.packet.sigma < 10.0 {
            return bad(format!("packet width {} below 10 sites", self.packet.sigma));
        }
        let (lo, hi) = (self.packet.center - 5.0 * self.packet.sigma, self.packet.center + 5.0 * self.packet.sigma);
        if lo < 0.0 || hi > m - 1.0 || hi > legs[0] as f64 {
            return bad(format!("packet [{lo}, {hi}] must lie inside the chain, left of the atom"));
        }
        if self.t_max >= m / (2.0 * self.group_velocity()) {
            return bad(format!("t_max {} allows wraparound (limit {})", self.t_max, m / (2.0 * self.group_velocity())));
        }
        let g = effective_rates_n_point(geom, params).gamma_real;
        let span = (legs[legs.len() - 1] - legs[0]) as f64 / self.group_velocity();
        if g > 0.0 && span * g > MARKOV_DELAY_LIMIT * (1.0 + 1e-12) {
            return bad(format!("delay {span} exceeds the Markov limit {}", MARKOV_DELAY_LIMIT / g));
        }
        Ok(legs)
    }
}

/// Probability over site pairs at the end of a two-photon run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointMap {
    /// Number of sites.
    pub sites: usize,
    /// First coupling site.
    pub first_leg: usize,
    /// Last coupling site.
    pub last_leg: usize,
    /// Row-major `M × M` probabilities.
    pub probability: Vec<f64>,
}

/// Propagation quadrant of a photon pair after scattering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Quadrant {
    /// Both photons beyond the last coupling site.
    Transmitted,
    /// Both photons before the first coupling site.
    Reflected,
}

impl JointMap {
    fn range(&self, q: Quadrant) -> std::ops::Range<usize> {
        match q {
            Quadrant::Transmitted => self.last_leg + 1..self.sites,
            Quadrant::Reflected => 0..self.first_leg,
        }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.probability[i * self.sites + j]
    }

    /// Total probability in the quadrant.
    pub fn weight(&self, q: Quadrant) -> f64 {
        let r = self.range(q);
        r.clone().map(|i| r.clone().map(|j| self.at(i, j)).sum::<f64>()).sum()
    }

    /// `1 − max(diagonal)/max(quadrant)`.
    pub fn diagonal_suppression(&self, q: Quadrant) -> f64 {
        let r = self.range(q);
        let diag = r.clone().map(|i| self.at(i, i)).fold(0.0, f64::max);
        let all = r.clone().flat_map(|i| r.clone().map(move |j| (i, j))).map(|(i, j)| self.at(i, j)).fold(0.0, f64::max);
        if all == 0.0 {
            0.0
        } else {
            1.0 - diag / all
        }
    }

    /// `W(j) = Σ_i P(i, i + j)` inside the quadrant for `j = 0 … max_offset`.
    pub fn offset_profile(&self, q: Quadrant, max_offset: usize) -> Vec<f64> {
        let r = self.range(q);
        (0..=max_offset)
            .map(|d| r.clone().filter(|&i| i + d < r.end).map(|i| self.at(i, i + d)).sum())
            .collect()
    }
}

/// Exponential decay rate `κ` of `W(j) ∝ e^{−κj}`, by least squares on
/// `ln W` over `j ∈ window`.
pub fn decay_rate(profile: &[f64], window: std::ops::Range<usize>) -> Result<f64> {
    let pts: Vec<(f64, f64)> = window
        .filter(|&j| j < profile.len())
        .map(|j| (j as f64, profile[j]))
        .collect();
    if pts.len() < 2 || pts.iter().any(|&(_, w)| !(w > 0.0)) {
        return Err(Error::Lattice("decay fit needs at least two positive samples".into()));
    }
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), &(x, w)| (a + x, b + w.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, w)| (a + (x - mx) * (w.ln() - my), b + (x - mx) * (x - mx)));
    Ok(-sxy / sxx)
}

/// Outcome of a lattice run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolutionResult {
    /// Photon probability beyond the last coupling site. In a two-photon
    /// run, the weight of the transmitted quadrant.
    pub transmitted: f64,
    /// Photon probability before the first coupling site. In a two-photon
    /// run, the weight of the reflected quadrant.
    pub reflected: f64,
    /// Largest `|1 − norm|` over the sampled times.
    pub norm_drift: f64,
    /// Sample times.
    pub times: Vec<f64>,
    /// Atomic excitation probability at each sample time.
    pub atom_trace: Vec<f64>,
    /// Centre detuning of the incident packet.
    pub detuning: f64,
    /// Final joint probability (two-photon runs).
    pub joint: Option<JointMap>,
    /// Final probability of the connected amplitude `ψ − φ⊗φ`, where `φ` is
    /// the single-photon evolution of the same packet (two-photon runs).
    pub connected: Option<JointMap>,
    /// Final probability of the uncorrelated product `φ⊗φ` (two-photon runs).
    pub uncorrelated: Option<JointMap>,
}

/// A Hermitian operator with a spectral bound, acting on a flat vector.
trait Operator {
    fn apply(&self, x: &[Complex64], out: &mut [Complex64]);
    fn bound(&self) -> f64;
    fn len(&self) -> usize;
}

/// Bessel values `J_k(a)` for `k = 0 … K − 1` from the periodic trapezoid
/// rule applied to `(1/2π)∮ cos(kθ − a sin θ) dθ`, which converges
/// exponentially once the sample count exceeds `a + k`.
fn bessel_table(a: f64, count: usize) -> Vec<f64> {
    let n = 2 * (count + a.ceil() as usize) + 64;
    (0..count)
        .map(|k| {
            (0..n)
                .map(|j| {
                    let t = 2.0 * PI * j as f64 / n as f64;
                    (k as f64 * t - a * t.sin()).cos()
                })
                .sum::<f64>()
                / n as f64
        })
        .collect()
}

/// Chebyshev propagator for a fixed step.
struct Chebyshev {
    coeffs: Vec<Complex64>,
    scale: f64,
}

impl Chebyshev {
    fn new(bound: f64, tau: f64) -> Self {
        let a = bound * tau;
        // Terms decay super-exponentially beyond k ≈ a.
        let count = (a + 12.0 * a.cbrt() + 30.0).ceil() as usize;
        let j = bessel_table(a, count);
        let mut coeffs = Vec::with_capacity(count);
        let mut phase = Complex64::new(1.0, 0.0);
        for (k, jk) in j.into_iter().enumerate() {
            coeffs.push(if k == 0 { Complex64::new(jk, 0.0) } else { 2.0 * phase * jk });
            phase *= -Complex64::i();
        }
        Self { coeffs, scale: bound }
    }

    fn step<H: Operator>(&self, h: &H, psi: &mut [Complex64], work: &mut [Vec<Complex64>; 3]) {
        let n = psi.len();
        let [t0, t1, t2] = work;
        t0.copy_from_slice(psi);
        h.apply(t0, t1);
        t1.iter_mut().for_each(|v| *v /= self.scale);
        for i in 0..n {
            psi[i] = self.coeffs[0] * t0[i] + self.coeffs[1] * t1[i];
        }
        for c in &self.coeffs[2..] {
            h.apply(t1, t2);
            for i in 0..n {
                t2[i] = 2.0 * t2[i] / self.scale - t0[i];
                psi[i] += c * t2[i];
            }
            std::mem::swap(t0, t1);
            std::mem::swap(t1, t2);
        }
    }
}

fn hop(x: &[Complex64], out: &mut [Complex64], j: f64) {
    let m = x.len();
    for n in 0..m {
        let mut s = Complex64::new(0.0, 0.0);
        if n > 0 {
            s += x[n - 1];
        }
        if n + 1 < m {
            s += x[n + 1];
        }
        out[n] = -j * s;
    }
}

/// One excitation: photon on `M` sites followed by the atomic amplitude.
struct OneExcitation {
    m: usize,
    hopping: f64,
    couplings: Vec<(usize, f64)>,
}

impl Operator for OneExcitation {
    fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        let m = self.m;
        hop(&x[..m], &mut out[..m], self.hopping);
        let e = x[m];
        let mut a = Complex64::new(0.0, 0.0);
        for &(s, g) in &self.couplings {
            out[s] += g * e;
            a += g * x[s];
        }
        out[m] = a;
    }

    fn bound(&self) -> f64 {
        let gsum: f64 = self.couplings.iter().map(|c| c.1).sum();
        let gmax = self.couplings.iter().map(|c| c.1).fold(0.0, f64::max);
        1.01 * (2.0 * self.hopping + gmax).max(gsum)
    }

    fn len(&self) -> usize {
        self.m + 1
    }
}

/// Two excitations: a symmetric `M × M` photon-pair amplitude followed by
/// `M` photon × excited-atom amplitudes. With the norm
/// `Σ|ψ_{nm}|² + Σ|e_n|²` the coupling block is
/// `ψ ← (g⊗e + e⊗g)/√2`, `e ← √2 gᵀψ`.
struct TwoExcitation {
    m: usize,
    hopping: f64,
    couplings: Vec<(usize, f64)>,
}

impl Operator for TwoExcitation {
    fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        let m = self.m;
        let (psi, e) = x.split_at(m * m);
        let (opsi, oe) = out.split_at_mut(m * m);
        let j = self.hopping;
        for r in 0..m {
            for c in 0..m {
                let mut s = Complex64::new(0.0, 0.0);
                if r > 0 {
                    s += psi[(r - 1) * m + c];
                }
                if r + 1 < m {
                    s += psi[(r + 1) * m + c];
                }
                if c > 0 {
                    s += psi[r * m + c - 1];
                }
                if c + 1 < m {
                    s += psi[r * m + c + 1];
                }
                opsi[r * m + c] = -j * s;
            }
        }
        hop(e, oe, j);
        for &(s, g) in &self.couplings {
            let w = g / SQRT_2;
            for n in 0..m {
                opsi[s * m + n] += w * e[n];
                opsi[n * m + s] += w * e[n];
                oe[n] += SQRT_2 * g * psi[s * m + n];
            }
        }
    }

    fn bound(&self) -> f64 {
        let gnorm = self.couplings.iter().map(|c| c.1 * c.1).sum::<f64>().sqrt();
        1.01 * (4.0 * self.hopping + 2.0 * SQRT_2 * gnorm)
    }

    fn len(&self) -> usize {
        self.m * self.m + self.m
    }
}

fn couplings(legs: &[usize], params: &AtomParams, hopping: f64) -> Vec<(usize, f64)> {
    let g = (params.gamma() * hopping).sqrt() / legs.len() as f64;
    legs.iter().map(|&s| (s, g)).collect()
}

struct Trace {
    times: Vec<f64>,
    atom: Vec<f64>,
    drift: f64,
}

fn evolve<H: Operator>(h: &H, psi: &mut [Complex64], cfg: &LatticeConfig, atom: impl Fn(&[Complex64]) -> f64) -> Result<Trace> {
    let steps = (cfg.t_max / cfg.dt).ceil() as usize;
    let tau = cfg.t_max / steps as f64;
    let prop = Chebyshev::new(h.bound(), tau);
    let n = h.len();
    let mut work = [vec![Complex64::new(0.0, 0.0); n], vec![Complex64::new(0.0, 0.0); n], vec![Complex64::new(0.0, 0.0); n]];
    let mut tr = Trace { times: vec![0.0], atom: vec![atom(psi)], drift: 0.0 };
    for s in 1..=steps {
        prop.step(h, psi, &mut work);
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        tr.drift = tr.drift.max((1.0 - norm).abs());
        tr.times.push(s as f64 * tau);
        tr.atom.push(atom(psi));
    }
    if tr.drift > NORM_DRIFT_LIMIT {
        return Err(Error::Lattice(format!("norm drift {:e} exceeds {NORM_DRIFT_LIMIT:e}", tr.drift)));
    }
    Ok(tr)
}

fn single_photon_state(cfg: &LatticeConfig, legs: &[usize], params: &AtomParams) -> Result<(Vec<Complex64>, Trace)> {
    let m = cfg.sites;
    let h = OneExcitation { m, hopping: cfg.hopping, couplings: couplings(legs, params, cfg.hopping) };
    let mut psi = cfg.packet.amplitudes(m);
    psi.push(Complex64::new(0.0, 0.0));
    let tr = evolve(&h, &mut psi, cfg, |x| x[m].norm_sqr())?;
    Ok((psi, tr))
}

/// Scatters a single-photon packet off the lattice image of `geom`.
pub fn lattice_single_photon(cfg: &LatticeConfig, geom: &AtomGeometry, params: &AtomParams) -> Result<EvolutionResult> {
    let legs = cfg.validate(geom, params)?;
    let (psi, tr) = single_photon_state(cfg, &legs, params)?;
    let (first, last) = (legs[0], legs[legs.len() - 1]);
    Ok(EvolutionResult {
        transmitted: psi[last + 1..cfg.sites].iter().map(|a| a.norm_sqr()).sum(),
        reflected: psi[..first].iter().map(|a| a.norm_sqr()).sum(),
        norm_drift: tr.drift,
        times: tr.times,
        atom_trace: tr.atom,
        detuning: cfg.packet.detuning(cfg.hopping),
        joint: None,
        connected: None,
        uncorrelated: None,
    })
}

/// Scatters a pair of identical packets off the lattice image of `geom`.
///
/// The joint map is also returned with the uncorrelated product of
/// single-photon evolutions removed. The remainder contains only the
/// two-photon correlations that the atomic nonlinearity induces.
pub fn lattice_two_photon(cfg: &LatticeConfig, geom: &AtomGeometry, params: &AtomParams) -> Result<EvolutionResult> {
    if cfg.sites > MAX_TWO_PHOTON_SITES {
        return Err(Error::Lattice(format!(
            "two-photon runs are limited to {MAX_TWO_PHOTON_SITES} sites, got {}",
            cfg.sites
        )));
    }
    let legs = cfg.validate(geom, params)?;
    let m = cfg.sites;
    let (single, _) = single_photon_state(cfg, &legs, params)?;
    let phi = cfg.packet.amplitudes(m);
    let mut state: Vec<Complex64> = Vec::with_capacity(m * m + m);
    for a in &phi {
        state.extend(phi.iter().map(|b| a * b));
    }
    state.extend(std::iter::repeat(Complex64::new(0.0, 0.0)).take(m));
    let h = TwoExcitation { m, hopping: cfg.hopping, couplings: couplings(&legs, params, cfg.hopping) };
    let tr = evolve(&h, &mut state, cfg, |x| x[m * m..].iter().map(|a| a.norm_sqr()).sum())?;
    let (first, last) = (legs[0], legs[legs.len() - 1]);
    let joint = JointMap {
        sites: m,
        first_leg: first,
        last_leg: last,
        probability: state[..m * m].iter().map(|a| a.norm_sqr()).collect(),
    };
    let connected = JointMap {
        probability: (0..m * m)
            .map(|i| (state[i] - single[i / m] * single[i % m]).norm_sqr())
            .collect(),
        ..joint.clone()
    };
    let uncorrelated = JointMap {
        probability: (0..m * m).map(|i| (single[i / m] * single[i % m]).norm_sqr()).collect(),
        ..joint.clone()
    };
    Ok(EvolutionResult {
        transmitted: joint.weight(Quadrant::Transmitted),
        reflected: joint.weight(Quadrant::Reflected),
        norm_drift: tr.drift,
        times: tr.times,
        atom_trace: tr.atom,
        detuning: cfg.packet.detuning(cfg.hopping),
        joint: Some(joint),
        connected: Some(connected),
        uncorrelated: Some(uncorrelated),
    })
}

/// Lattice against analytic reflection at one packet detuning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReflectionPoint {
    /// Centre detuning of the packet.
    pub detuning: f64,
    /// Reflected probability measured on the lattice.
    pub lattice: f64,
    /// Markovian plane-wave reflection `|r̄|²` at the centre detuning.
    pub analytic: f64,
    /// `|lattice/analytic − 1|`.
    pub relative_error: f64,
    /// Lattice transmitted probability.
    pub transmitted: f64,
    /// Largest norm drift of the run.
    pub norm_drift: f64,
    /// Number of sites used.
    pub sites: usize,
}

/// Runs one single-photon packet per detuning in parallel and compares the
/// reflected probability with the Markovian plane-wave value.
pub fn reflection_scan(geom: &AtomGeometry, params: &AtomParams, detunings: &[f64], sigma: f64) -> Result<Vec<ReflectionPoint>> {
    let phases = geom.phases();
    detunings
        .par_iter()
        .map(|&d| {
            let cfg = LatticeConfig::single_photon(geom, params, d, sigma)?;
            let run = lattice_single_photon(&cfg, geom, params)?;
            let t = single_photon_n_point(d, &phases, params.v()).transmission();
            let analytic = ((t - 1.0) / 2.0).norm_sqr();
            Ok(ReflectionPoint {
                detuning: d,
                lattice: run.reflected,
                analytic,
                relative_error: (run.reflected / analytic - 1.0).abs(),
                transmitted: run.transmitted,
                norm_drift: run.norm_drift,
                sites: cfg.sites,
            })
        })
        .collect()
}

/// Summary of a two-photon desk run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairCorrelation {
    /// `1 − max(diagonal)/max(quadrant)` in the reflected quadrant.
    pub reflected_suppression: f64,
    /// Coincidence ratio `Σ_i P(i, i) / Σ_i P_φ⊗φ(i, i)` in the transmitted
    /// quadrant: above 1 the pair is bunched relative to independent photons.
    pub transmitted_coincidence: f64,
    /// Decay rate per site of the connected transmitted correlations along
    /// the anti-diagonal.
    pub decay_rate: f64,
    /// Largest norm drift of the run.
    pub norm_drift: f64,
}

impl PairCorrelation {
    /// Evaluates a finished two-photon run. The decay rate is fitted over
    /// offsets `window`.
    pub fn from_run(run: &EvolutionResult, window: std::ops::Range<usize>) -> Result<Self> {
        let (Some(joint), Some(conn), Some(unc)) = (&run.joint, &run.connected, &run.uncorrelated) else {
            return Err(Error::Lattice("pair correlations need a two-photon run".into()));
        };
        let reach = window.end + 20;
        Ok(Self {
            reflected_suppression: joint.diagonal_suppression(Quadrant::Reflected),
            transmitted_coincidence: joint.offset_profile(Quadrant::Transmitted, 0)[0]
                / unc.offset_profile(Quadrant::Transmitted, 0)[0],
            decay_rate: decay_rate(&conn.offset_profile(Quadrant::Transmitted, reach), window)?,
            norm_drift: run.norm_drift,
        })
    }
}
