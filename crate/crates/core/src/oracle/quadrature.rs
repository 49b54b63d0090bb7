//! Adaptive Gauss–Kronrod quadrature for complex integrands, with helpers
//! for semi-infinite ranges and Cauchy principal values.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Kronrod nodes (non-negative half, descending) of the 15-point rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

/// Kronrod weights matching [`XGK`].
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];

/// Gauss weights of the embedded 7-point rule (nodes `XGK[1], XGK[3], …`).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integral estimate with its error bound and cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    /// Integral estimate.
    pub value: Complex64,
    /// Estimated absolute error.
    pub error: f64,
    /// Number of integrand evaluations.
    pub evaluations: usize,
}

/// Tolerances and limits of the adaptive driver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Absolute error target.
    pub abs_tol: f64,
    /// Relative error target.
    pub rel_tol: f64,
    /// Maximum number of subintervals.
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-13, rel_tol: 1e-11, max_intervals: 20_000 }
    }
}

impl QuadOptions {
    /// Options with both tolerances set.
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }
}

/// One G7K15 application: `(kronrod, |kronrod − gauss|)`.
fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive integration of `f` over `[a, b]` with the given break points.
///
/// Break points split the range before adaptation starts; put them at kinks,
/// poles of a subtracted integrand or the centres of narrow peaks. The
/// largest-error segment is bisected until the total error estimate meets
/// `max(abs_tol, rel_tol·|value|)`.
pub fn integrate_with_breaks<F>(f: F, a: f64, b: f64, breaks: &[f64], opts: QuadOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Quadrature(format!("non-finite range [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadResult { value: Complex64::new(0.0, 0.0), error: 0.0, evaluations: 0 });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut pts = vec![lo];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&x| x > lo && x < hi).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    pts.extend(inner);
    pts.push(hi);

    let mut heap = BinaryHeap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut evals = 0;
    for w in pts.windows(2) {
        let (v, e) = gk15(&f, w[0], w[1]);
        evals += 15;
        total += v;
        err += e;
        heap.push(Segment { a: w[0], b: w[1], value: v, error: e });
    }
    while err > opts.abs_tol.max(opts.rel_tol * total.norm()) {
        if heap.len() >= opts.max_intervals {
            return Err(Error::Quadrature(format!(
                "error estimate {err:e} above tolerance after {} subintervals on [{lo}, {hi}]",
                heap.len()
            )));
        }
        let Some(seg) = heap.pop() else { break };
        let m = 0.5 * (seg.a + seg.b);
        if m <= seg.a || m >= seg.b {
            // The segment cannot be split further in floating point.
            return Err(Error::Quadrature(format!(
                "segment [{}, {}] exhausted; error {err:e}",
                seg.a, seg.b
            )));
        }
        let (v1, e1) = gk15(&f, seg.a, m);
        let (v2, e2) = gk15(&f, m, seg.b);
        evals += 30;
        total += v1 + v2 - seg.value;
        err += e1 + e2 - seg.error;
        heap.push(Segment { a: seg.a, b: m, value: v1, error: e1 });
        heap.push(Segment { a: m, b: seg.b, value: v2, error: e2 });
    }
    // Re-sum from the segments to shed the round-off of incremental updates.
    let (value, error) = heap
        .iter()
        .fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), s| (v + s.value, e + s.error));
    Ok(QuadResult { value: value * sign, error, evaluations: evals })
}

/// Adaptive integration of `f` over `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    integrate_with_breaks(f, a, b, &[], opts)
}

/// Integral over `[a, ∞)`: `[a, a + scale]` directly, then the tail through
/// `x = a + scale/t`, `t ∈ (0, 1]`.
///
/// `scale` should be a few times the width of the integrand's structure.
pub fn integrate_to_infinity<F>(f: F, a: f64, scale: f64, breaks: &[f64], opts: QuadOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    if !(scale > 0.0) {
        return Err(Error::Quadrature(format!("tail scale must be positive, got {scale}")));
    }
    let near = integrate_with_breaks(&f, a, a + scale, breaks, opts)?;
    let tail = integrate(
        |t: f64| {
            if t <= 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                f(a + scale / t) * (scale / (t * t))
            }
        },
        0.0,
        1.0,
        QuadOptions { abs_tol: opts.abs_tol, ..opts },
    )?;
    Ok(QuadResult {
        value: near.value + tail.value,
        error: near.error + tail.error,
        evaluations: near.evaluations + tail.evaluations,
    })
}

/// Cauchy principal value `PV ∫_a^b g(x)/(x − c) dx` for `a < c < b`, by
/// subtracting the pole: `∫ [g(x) − g(c)]/(x − c) dx + g(c) ln[(b − c)/(c − a)]`.
///
/// The subtracted integrand is regular; `c` is a break point, so no node
/// lands on it.
pub fn principal_value<F>(g: F, a: f64, b: f64, c: f64, breaks: &[f64], opts: QuadOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    if !(a < c && c < b) {
        return Err(Error::Quadrature(format!("pole {c} not inside ({a}, {b})")));
    }
    let gc = g(c);
    let mut br = breaks.to_vec();
    br.push(c);
    let r = integrate_with_breaks(
        |x| {
            if x == c {
                Complex64::new(0.0, 0.0)
            } else {
                (g(x) - gc) / (x - c)
            }
        },
        a,
        b,
        &br,
        opts,
    )?;
    Ok(QuadResult {
        value: r.value + gc * ((b - c) / (c - a)).ln(),
        error: r.error,
        evaluations: r.evaluations + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn re(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Complex64 {
        move |x| Complex64::new(f(x), 0.0)
    }

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(re(|x| x.powi(10) - 3.0 * x), 0.0, 2.0, QuadOptions::default()).unwrap();
        assert!((r.value.re - (2f64.powi(11) / 11.0 - 6.0)).abs() < 1e-12);
    }

    #[test]
    fn kink_and_narrow_peak() {
        let r = integrate_with_breaks(re(|x: f64| (-x.abs()).exp()), -60.0, 60.0, &[0.0], QuadOptions::default())
            .unwrap();
        assert!((r.value.re - 2.0 * (1.0 - (-60f64).exp())).abs() < 1e-12);
        let r = integrate(re(|x| 1.0 / (1.0 + (x - 3.0).powi(2) * 1e4)), -60.0, 60.0, QuadOptions::default())
            .unwrap();
        let exact = ((57.0f64 * 100.0).atan() + (63.0f64 * 100.0).atan()) / 100.0;
        assert!((r.value.re - exact).abs() < 1e-12);
    }

    #[test]
    fn semi_infinite_lorentzian() {
        let r = integrate_to_infinity(re(|x| 1.0 / (1.0 + x * x)), 0.0, 5.0, &[], QuadOptions::default()).unwrap();
        assert!((r.value.re - PI / 2.0).abs() < 1e-11);
    }

    #[test]
    fn principal_value_of_simple_pole() {
        // x²/(x − 1) = x + 1 + 1/(x − 1): ∫_0^2 (x + 1) = 4 and the pole
        // term has a vanishing principal value on a symmetric range.
        let r = principal_value(re(|x| x * x), 0.0, 2.0, 1.0, &[], QuadOptions::default()).unwrap();
        assert!((r.value.re - 4.0).abs() < 1e-12);
        // PV ∫_0^3 1/(x − 1) dx = ln 2.
        let r = principal_value(re(|_| 1.0), 0.0, 3.0, 1.0, &[], QuadOptions::default()).unwrap();
        assert!((r.value.re - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn reversed_and_degenerate_ranges() {
        let f = re(|x| x);
        let r = integrate(&f, 1.0, 0.0, QuadOptions::default()).unwrap();
        assert!((r.value.re + 0.5).abs() < 1e-15);
        assert_eq!(integrate(&f, 1.0, 1.0, QuadOptions::default()).unwrap().value, Complex64::new(0.0, 0.0));
        assert!(integrate(&f, 0.0, f64::INFINITY, QuadOptions::default()).is_err());
    }

    #[test]
    fn exhausted_budget_is_reported() {
        let opts = QuadOptions { abs_tol: 0.0, rel_tol: 0.0, max_intervals: 8 };
        assert!(matches!(integrate(re(|x: f64| x.sqrt()), 0.0, 1.0, opts), Err(Error::Quadrature(_))));
    }
}
