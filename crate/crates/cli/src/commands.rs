//! Implementations of the subcommands.
//!
//! Each command reads a validated [`RunConfig`], writes its files into the
//! output directory and reports the checks that failed. Output depends only
//! on the configuration, so identical configurations give byte-identical
//! files.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use giant_atom::model::{effective_rates_n_point, effective_rates_two_point, equal_spacing_rates, EffectiveRates};
use giant_atom::observables::{
    momentum_bound_map, n_scaling, peak_positions, resonant_height_ratio_at_pi, spatial_maps, decay_ratio_at_pi,
    FieldMap, IncidentPair, PeakReport, RModeOutput,
};
use giant_atom::oracle::lattice::{
    lattice_single_photon, lattice_two_photon, LatticeConfig, PairCorrelation,
};
use giant_atom::oracle::{
    flux_closure_r, quad_bound_norm, quad_overlap_bf, unitarity_e, verify_bound_kernel_quadrature,
};
use giant_atom::single_photon::{amplitudes_exact, amplitudes_markov, reflection_sweep, transmission_n_point};
use giant_atom::smatrix::{bound_kernel, bound_kernel_n, transmission_from_rates};
use giant_atom::spec::{GeometrySpec, RunConfig};
use giant_atom::two_photon_eigen::{
    bethe_ratios, bethe_ratios_n, bound_transmission_markov, TwoPhotonPair, DECOUPLED_RELATIVE,
};
use giant_atom::{AtomGeometry, AtomParams, Regime};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::output::{fmt_f64, to_json, write_atomic, Csv};
use crate::{CliError, Command};

/// Result of a successful command.
#[derive(Debug, Default)]
pub struct Outcome {
    /// Files written, in order.
    pub files: Vec<PathBuf>,
    /// Text for standard output.
    pub stdout: String,
    /// Descriptions of failed checks; non-empty means exit code 1.
    pub failures: Vec<String>,
}

impl Outcome {
    fn write(&mut self, dir: &Path, name: &str, text: &str) -> Result<(), CliError> {
        write_atomic(dir, name, text)?;
        self.files.push(dir.join(name));
        Ok(())
    }
}

/// Runs `command` with `cfg`, writing into `out`.
pub fn execute(command: Command, cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    match command {
        Command::Rates => cmd_rates(cfg, out),
        Command::Single => cmd_single(cfg, out),
        Command::Spatial => cmd_spatial(cfg, out),
        Command::Momentum => cmd_momentum(cfg, out),
        Command::Nscaling => cmd_nscaling(cfg, out),
        Command::Oracle => cmd_oracle(cfg, out),
        Command::Check => cmd_check(cfg, out),
    }
}

/// Rates of a geometry, through the closed form of its family when one
/// exists.
pub fn rates_for(spec: &GeometrySpec, params: &AtomParams) -> Result<EffectiveRates, CliError> {
    Ok(match spec {
        GeometrySpec::Natural => EffectiveRates::natural(params.gamma()),
        GeometrySpec::TwoPoint { beta1 } => effective_rates_two_point(*beta1, params),
        GeometrySpec::EqualSpacing { n, beta } => equal_spacing_rates(*n, *beta, params)?,
        GeometrySpec::Phases(_) => effective_rates_n_point(&spec.build(params.k0())?, params),
    })
}

fn is_decoupled(rates: &EffectiveRates, params: &AtomParams) -> bool {
    rates.gamma_real <= DECOUPLED_RELATIVE * params.gamma()
}

fn meta(cfg: &RunConfig, extra: &[(&'static str, f64)]) -> Vec<(&'static str, String)> {
    let mut m: Vec<(&'static str, String)> = vec![
        ("units", "hbar = v_g = 1, Gamma = V^2; x_bar = x*Gamma, Delta_bar = Delta/(Gamma/2), B_bar = (Gamma/2)*B".into()),
        ("omega", fmt_f64(cfg.params.omega)),
        ("gamma", fmt_f64(cfg.params.gamma)),
        ("geometry", cfg.geometry.to_string()),
        ("regime", format!("{:?}", cfg.regime).to_lowercase()),
        ("seed", cfg.seed.to_string()),
        ("config", serde_json::to_string(cfg).expect("configuration is serialisable")),
    ];
    m.extend(extra.iter().map(|&(k, v)| (k, fmt_f64(v))));
    m
}

#[derive(Debug, Serialize)]
struct RatesReport {
    geometry: String,
    n: usize,
    phases: Vec<f64>,
    omega: f64,
    gamma: f64,
    gamma_complex_re: f64,
    gamma_complex_im: f64,
    gamma_real: f64,
    gamma_real_over_gamma: f64,
    lamb_shift: f64,
    lamb_shift_over_gamma: f64,
    decoupled: bool,
}

fn cmd_rates(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let params = cfg.atom_params()?;
    let r = rates_for(&cfg.geometry, &params)?;
    let phases = cfg.geometry.phases();
    let rep = RatesReport {
        geometry: cfg.geometry.to_string(),
        n: phases.len(),
        phases,
        omega: params.omega(),
        gamma: params.gamma(),
        gamma_complex_re: r.gamma_complex.re,
        gamma_complex_im: r.gamma_complex.im,
        gamma_real: r.gamma_real,
        gamma_real_over_gamma: r.gamma_real / params.gamma(),
        lamb_shift: r.lamb_shift,
        lamb_shift_over_gamma: r.lamb_shift / params.gamma(),
        decoupled: is_decoupled(&r, &params),
    };
    let text = to_json(&rep);
    let mut o = Outcome { stdout: text.clone(), ..Outcome::default() };
    o.write(out, "rates.json", &text)?;
    Ok(o)
}

fn cmd_single(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let params = cfg.atom_params()?;
    let deltas = cfg.sweep.deltas.0.values();
    let betas: Vec<f64> = cfg.sweep.betas.iter().map(|b| b.0).collect();
    let rows = reflection_sweep(&deltas, &betas, cfg.regime, &params)?;
    let mut csv = Csv::new(
        "single",
        &meta(cfg, &[]),
        &["delta", "beta1", "R", "re_t_bar", "im_t_bar", "re_r_bar", "im_r_bar"],
    );
    let mut o = Outcome::default();
    let mut worst = 0.0f64;
    for r in &rows {
        worst = worst.max((r.t_bar.norm_sqr() + r.r_bar.norm_sqr() - 1.0).abs());
        csv.row(&[r.delta, r.beta1, r.reflection, r.t_bar.re, r.t_bar.im, r.r_bar.re, r.r_bar.im]);
    }
    if worst > 1e-12 {
        o.failures.push(format!("flux conservation violated by {worst:e}"));
    }
    o.write(out, "single.csv", csv.as_str())?;
    Ok(o)
}

fn incident(cfg: &RunConfig, rates: &EffectiveRates) -> IncidentPair {
    IncidentPair { delta_e1: cfg.pair.delta_e1.unwrap_or(2.0 * rates.lamb_shift), delta1: cfg.pair.delta1 }
}

fn map_csv(cfg: &RunConfig, command: &str, map: &FieldMap, cols: [&str; 7], scale: f64, extra: &[(&'static str, f64)]) -> Csv {
    let mut csv = Csv::new(command, &meta(cfg, extra), &cols);
    let (a1, a2) = (map.grid.axis1.values(), map.grid.axis2.values());
    let n2 = a2.len();
    for (i, u1) in a1.iter().enumerate() {
        for (j, u2) in a2.iter().enumerate() {
            let v = map.values[i * n2 + j];
            csv.row(&[*u1, *u2, u1 / scale, u2 / scale, v.norm_sqr(), v.re, v.im]);
        }
    }
    csv
}

/// Largest violation of `f(i, j) ≈ f(j, i)` on a square grid; `None` when
/// the axes differ.
fn exchange_violation(map: &FieldMap, intensity_only: bool) -> Option<f64> {
    if map.grid.axis1 != map.grid.axis2 {
        return None;
    }
    let n = map.grid.axis1.n;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..i {
            let (a, b) = (map.at(i, j), map.at(j, i));
            let d = if intensity_only { (a.norm_sqr() - b.norm_sqr()).abs() } else { (a - b).norm() };
            worst = worst.max(d / a.norm_sqr().max(1.0));
        }
    }
    Some(worst)
}

fn cmd_spatial(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let params = cfg.atom_params()?;
    let beta1 = cfg.geometry.beta1()?;
    let rates = effective_rates_two_point(beta1, &params);
    let inc = incident(cfg, &rates);
    let maps = spatial_maps(&inc, &params, &rates, cfg.spatial_grid.0);
    let extra = [
        ("gamma_real", rates.gamma_real),
        ("lamb_shift", rates.lamb_shift),
        ("delta_e1", inc.delta_e1),
        ("delta1", inc.delta1),
    ];
    let cols = ["x1_bar", "x2_bar", "x1", "x2", "abs2", "re", "im"];
    let mut o = Outcome::default();
    for (name, map) in [("spatial_t2.csv", &maps.t2), ("spatial_r2.csv", &maps.r2), ("spatial_rt.csv", &maps.rt)] {
        if !map.is_finite() {
            o.failures.push(format!("{name}: non-finite samples"));
        }
        let csv = map_csv(cfg, "spatial", map, cols, params.gamma(), &extra);
        o.write(out, name, csv.as_str())?;
    }
    // Two photons never leave the atom together in the same backward mode.
    if maps.r2.grid.axis1 == maps.r2.grid.axis2 {
        let n = maps.r2.grid.axis1.n;
        let worst = (0..n).map(|i| maps.r2.at(i, i).norm_sqr()).fold(0.0, f64::max);
        if worst >= 1e-12 {
            o.failures.push(format!("r2 diagonal reaches {worst:e}"));
        }
    }
    for (name, map, intensity_only) in [("t2", &maps.t2, false), ("r2", &maps.r2, false), ("rt", &maps.rt, true)] {
        if let Some(w) = exchange_violation(map, intensity_only) {
            if w > 1e-12 {
                o.failures.push(format!("{name} exchange symmetry violated by {w:e}"));
            }
        }
    }
    Ok(o)
}

#[derive(Debug, Serialize)]
struct PeakFile {
    geometry: String,
    delta_e1: f64,
    decoupled: bool,
    analytic: PeakReport,
    grid_argmax: (f64, f64),
    grid_local_maxima: Vec<(f64, f64)>,
    grid_step: (f64, f64),
}

fn cmd_momentum(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let params = cfg.atom_params()?;
    let rates = rates_for(&cfg.geometry, &params)?;
    let de = cfg.pair.delta_e1.unwrap_or(2.0 * rates.lamb_shift);
    let map = momentum_bound_map(de, &params, &rates, cfg.momentum_grid.0);
    let extra = [("gamma_real", rates.gamma_real), ("lamb_shift", rates.lamb_shift), ("delta_e1", de)];
    let cols = ["d1_bar", "d2_bar", "d1", "d2", "abs2_b_bar", "re_b_bar", "im_b_bar"];
    let mut o = Outcome::default();
    if !map.is_finite() {
        o.failures.push("momentum map has non-finite samples".into());
    }
    let csv = map_csv(cfg, "momentum", &map, cols, 2.0 / params.gamma(), &extra);
    o.write(out, "momentum.csv", csv.as_str())?;
    let (a1, a2) = (map.grid.axis1.values(), map.grid.axis2.values());
    let (i, j) = map.argmax();
    let peaks = PeakFile {
        geometry: cfg.geometry.to_string(),
        delta_e1: de,
        decoupled: is_decoupled(&rates, &params),
        analytic: peak_positions(de, &params, &rates),
        grid_argmax: (a1[i], a2[j]),
        grid_local_maxima: map.local_maxima(0.5).into_iter().map(|(i, j)| (a1[i], a2[j])).collect(),
        grid_step: (map.grid.axis1.step(), map.grid.axis2.step()),
    };
    o.write(out, "peaks.json", &to_json(&peaks))?;
    Ok(o)
}

fn cmd_nscaling(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let params = cfg.atom_params()?;
    let beta = cfg.nscaling.beta.0;
    let at_pi = (beta - PI).abs() < 1e-15;
    let row_for = |n: usize| -> Result<_, CliError> {
        let r = equal_spacing_rates(n, beta, &params)?;
        let de = cfg.nscaling.delta_e1.unwrap_or(2.0 * r.lamb_shift);
        Ok(n_scaling(&[n], beta, de, &params)?.remove(0))
    };
    let reference = row_for(1)?.height;
    let mut csv = Csv::new(
        "nscaling",
        &meta(cfg, &[("beta", beta)]),
        &[
            "n",
            "gamma_n",
            "gamma_n_over_gamma",
            "lamb_shift",
            "decoupled",
            "resonant",
            "re_peak",
            "im_peak",
            "height",
            "height_ratio",
            "exact_gamma_ratio",
            "exact_height_ratio",
        ],
    );
    for &n in &cfg.nscaling.n_list {
        let row = row_for(n)?;
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        let exact_g = if at_pi { decay_ratio_at_pi(n)?.to_string() } else { String::new() };
        let exact_h = if at_pi { resonant_height_ratio_at_pi(n)?.map(|r| r.to_string()).unwrap_or_default() } else { String::new() };
        csv.row_cells(&[
            n.to_string(),
            fmt_f64(row.gamma_n),
            fmt_f64(row.gamma_n / params.gamma()),
            fmt_f64(row.lamb_shift),
            row.decoupled.to_string(),
            row.resonant.to_string(),
            opt(row.peak.map(|p| p.re)),
            opt(row.peak.map(|p| p.im)),
            opt(row.height),
            opt(row.height.zip(reference).map(|(h, r)| h / r)),
            exact_g,
            exact_h,
        ]);
    }
    let mut o = Outcome::default();
    o.write(out, "nscaling.csv", csv.as_str())?;
    Ok(o)
}

/// One comparison between an analytic value and an oracle.
#[derive(Debug, Clone, Serialize)]
pub struct OracleEntry {
    /// Check name.
    pub name: String,
    /// Analytic expectation.
    pub analytic: f64,
    /// Oracle value.
    pub numeric: f64,
    /// Error measure compared with `tolerance`.
    pub error: f64,
    /// Acceptance bound on `error`.
    pub tolerance: f64,
    /// `error <= tolerance`.
    pub pass: bool,
}

fn entry(name: &str, analytic: f64, numeric: f64, error: f64, tolerance: f64) -> OracleEntry {
    OracleEntry { name: name.into(), analytic, numeric, error, tolerance, pass: error <= tolerance }
}

#[derive(Debug, Serialize)]
struct OracleFile {
    geometry: String,
    entries: Vec<OracleEntry>,
}

fn cmd_oracle(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let params = cfg.atom_params()?;
    let rates = rates_for(&cfg.geometry, &params)?;
    let mut entries = Vec::new();
    if !is_decoupled(&rates, &params) {
        let norm = quad_bound_norm(&rates)?;
        let target = 1.0 / (2.0 * PI);
        entries.push(entry("bound_norm", target, norm, (norm - target).abs(), 1e-6));
        let inc = incident(cfg, &rates);
        let pair = inc.pair(&params);
        let k = verify_bound_kernel_quadrature(&pair, &pair, &params, &rates)?;
        entries.push(entry("pv_kernel", k.closed.re, k.reconstructed.re, k.relative_error, 1e-4));
        let ov = quad_overlap_bf(&pair, &rates)?.norm();
        entries.push(entry("bound_scattering_overlap", 0.0, ov, ov, 1e-6));
        let u = unitarity_e(&pair, &params, &rates)?;
        entries.push(entry("even_mode_unitarity", 1.0, u.norm, (u.norm - 1.0).abs(), 1e-3));
        let f = flux_closure_r(&pair, &params, &rates)?;
        entries.push(entry("direction_resolved_flux", 1.0, f.norm, (f.norm - 1.0).abs(), 1e-3));
    }
    if cfg.oracle.lattice {
        let p = AtomParams::from_gamma(1.0, 0.1)?;
        let natural = AtomGeometry::from_positions(vec![0.0], 1.0)?;
        let run = lattice_single_photon(&LatticeConfig::single_photon(&natural, &p, 0.0, 200.0)?, &natural, &p)?;
        entries.push(entry("lattice_single_leg_resonance", 1.0, run.reflected, (run.reflected - 1.0).abs(), 0.02));
        let half = AtomGeometry::two_point(PI, 1.0)?;
        let run = lattice_single_photon(&LatticeConfig::single_photon(&half, &p, 0.0, 200.0)?, &half, &p)?;
        entries.push(entry("lattice_decoupling", 1.0, run.transmitted, (1.0 - run.transmitted).max(0.0), 0.02));
    }
    if cfg.oracle.two_photon {
        let p = AtomParams::from_gamma(1.0, 0.2)?;
        let desk = LatticeConfig::two_photon_desk();
        let mut rates = Vec::new();
        for (label, g) in [
            ("natural", AtomGeometry::from_positions(vec![0.0], 1.0)?),
            ("quarter_wave", AtomGeometry::two_point(PI / 2.0, 1.0)?),
        ] {
            let c = PairCorrelation::from_run(&lattice_two_photon(&desk, &g, &p)?, 0..40)?;
            entries.push(entry(
                &format!("lattice_antibunching_{label}"),
                1.0,
                c.reflected_suppression,
                1.0 - c.reflected_suppression,
                0.1,
            ));
            entries.push(entry(
                &format!("lattice_bunching_{label}"),
                1.0,
                c.transmitted_coincidence,
                (1.0 - c.transmitted_coincidence).max(0.0),
                0.0,
            ));
            rates.push(c.decay_rate);
        }
        let ratio = rates[0] / rates[1];
        entries.push(entry("lattice_width_ratio", 2.0, ratio, (ratio / 2.0 - 1.0).abs(), 0.15));
    }
    let failures = entries
        .iter()
        .filter(|e| !e.pass)
        .map(|e| format!("{}: error {:e} above {:e}", e.name, e.error, e.tolerance))
        .collect();
    let text = to_json(&OracleFile { geometry: cfg.geometry.to_string(), entries });
    let mut o = Outcome { stdout: text.clone(), failures, ..Outcome::default() };
    o.write(out, "oracle.json", &text)?;
    Ok(o)
}

/// Outcome of one randomised invariant.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    /// Invariant name.
    pub name: String,
    /// Number of random draws.
    pub draws: usize,
    /// Largest deviation found.
    pub max_error: f64,
    /// Acceptance bound.
    pub tolerance: f64,
    /// `max_error <= tolerance`.
    pub pass: bool,
}

#[derive(Debug, Serialize)]
struct CheckFile {
    seed: u64,
    checks: Vec<CheckRow>,
}

fn check_row(name: &str, draws: usize, max_error: f64, tolerance: f64) -> CheckRow {
    CheckRow { name: name.into(), draws, max_error, tolerance, pass: max_error <= tolerance }
}

fn random_phases(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut p = vec![0.0];
    for _ in 1..n {
        let last = *p.last().expect("non-empty");
        p.push(last + rng.gen_range(0.05..3.0));
    }
    p
}

/// Randomised invariant suite with `draws` draws per invariant (the
/// quadrature-based invariant uses `draws/1000`, at least 5).
pub fn invariant_suite(params: &AtomParams, seed: u64, draws: usize) -> Result<Vec<CheckRow>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = params.gamma();
    let om = params.omega();
    let mut rows = Vec::new();

    let (mut markov, mut exact) = (0.0f64, 0.0f64);
    for _ in 0..draws {
        let d = rng.gen_range(-10.0 * g..10.0 * g);
        let b = rng.gen_range(0.0..2.0 * PI);
        let a = amplitudes_markov(om + d, b, params);
        markov = markov.max((a.t_bar.norm_sqr() + a.r_bar.norm_sqr() - 1.0).abs());
        if b > 0.0 {
            let geom = AtomGeometry::two_point(b, params.k0())?;
            let a = amplitudes_exact(om + d, &geom, params)?;
            exact = exact.max((a.t_bar.norm_sqr() + a.r_bar.norm_sqr() - 1.0).abs());
        }
    }
    rows.push(check_row("flux_markov", draws, markov, 1e-12));
    rows.push(check_row("flux_exact", draws, exact, 1e-12));

    let mut uni = 0.0f64;
    for _ in 0..draws {
        let d = rng.gen_range(-10.0 * g..10.0 * g);
        let b = rng.gen_range(0.0..2.0 * PI);
        let r2 = effective_rates_two_point(b, params);
        uni = uni.max((transmission_from_rates(om + d, params, &r2).norm() - 1.0).abs());
        uni = uni.max((bound_transmission_markov(2.0 * om + 2.0 * d, params, &r2).norm() - 1.0).abs());
        let n = rng.gen_range(1..=6);
        let geom = AtomGeometry::from_phases(&random_phases(&mut rng, n), params.k0())?;
        let rn = effective_rates_n_point(&geom, params);
        uni = uni.max((transmission_n_point(om + d, &geom, params).norm() - 1.0).abs());
        uni = uni.max((bound_transmission_markov(2.0 * om + 2.0 * d, params, &rn).norm() - 1.0).abs());
    }
    rows.push(check_row("unimodular_transmissions", draws, uni, 1e-12));

    let small = draws.min(100);
    let mut red = 0.0f64;
    for _ in 0..small {
        let b = rng.gen_range(0.05..3.0);
        let geom = AtomGeometry::two_point(b, params.k0())?;
        let (r2, rn) = (effective_rates_two_point(b, params), effective_rates_n_point(&geom, params));
        red = red.max((r2.gamma_complex - rn.gamma_complex).norm());
        let d = rng.gen_range(-5.0 * g..5.0 * g);
        red = red.max((transmission_from_rates(om + d, params, &r2) - transmission_n_point(om + d, &geom, params)).norm());
        let (e1, d1, d2) = (2.0 * om + rng.gen_range(-3.0 * g..3.0 * g), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        red = red.max((bound_kernel(e1, d1, d2, params, &r2) - bound_kernel_n(e1, d1, d2, params, &rn)).norm());
        let pair = TwoPhotonPair::new(om + rng.gen_range(-3.0 * g..3.0 * g), om + rng.gen_range(-3.0 * g..3.0 * g));
        let two = bethe_ratios(&pair, &geom, params, Regime::Markov)?;
        let nb = bethe_ratios_n(&pair, &geom, params);
        // The N-point family has no inner strip: regions 0, 1, 2, 4, 5.
        for (i, j) in [(0usize, 0usize), (1, 1), (2, 2), (3, 4), (4, 5)] {
            red = red.max((nb.a_ratio[i] - two.a_ratio[j]).norm());
            red = red.max((nb.b_ratio[i] - two.b_ratio[j]).norm());
        }
        red = red.max((nb.a1_over_b1 - two.a1_over_b1).norm());
    }
    rows.push(check_row("two_point_reduction", small, red, 1e-12));

    let mut sym = 0.0f64;
    for _ in 0..draws {
        let b = rng.gen_range(0.0..0.9 * PI);
        let r = effective_rates_two_point(b, params);
        let inc = IncidentPair { delta_e1: rng.gen_range(-3.0 * g..3.0 * g), delta1: rng.gen_range(-3.0 * g..3.0 * g) };
        let out = RModeOutput::new(&inc, params, &r);
        let (x1, x2) = (rng.gen_range(-10.0..10.0) / g, rng.gen_range(-10.0..10.0) / g);
        sym = sym.max((out.t2(x1, x2) - out.t2(x2, x1)).norm());
        sym = sym.max((out.r2(x1, x2) - out.r2(x2, x1)).norm());
        sym = sym.max((out.rt(x1, x2).norm_sqr() - out.rt(x2, x1).norm_sqr()).abs());
    }
    rows.push(check_row("exchange_symmetry", draws, sym, 1e-12));

    let quad = (draws / 1000).max(5);
    let mut unit = 0.0f64;
    for _ in 0..quad {
        let b = rng.gen_range(0.0..0.9 * PI);
        let r = effective_rates_two_point(b, params);
        let pair = TwoPhotonPair::from_energy(2.0 * om + rng.gen_range(-2.0 * g..2.0 * g), rng.gen_range(-2.0 * g..2.0 * g));
        unit = unit.max((unitarity_e(&pair, params, &r)?.norm - 1.0).abs());
    }
    rows.push(check_row("even_mode_unitarity", quad, unit, 1e-3));
    Ok(rows)
}

fn cmd_check(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let params = cfg.atom_params()?;
    let checks = invariant_suite(&params, cfg.seed, cfg.check.draws)?;
    let failures = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{}: {:e} above {:e}", c.name, c.max_error, c.tolerance))
        .collect();
    let text = to_json(&CheckFile { seed: cfg.seed, checks });
    let mut o = Outcome { stdout: text.clone(), failures, ..Outcome::default() };
    o.write(out, "check.json", &text)?;
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rates_use_family_closed_forms() {
        let p = AtomParams::new(30.0, 1.0).unwrap();
        let r = rates_for(&"two:pi/2".parse().unwrap(), &p).unwrap();
        assert_eq!((r.lamb_shift, r.gamma_real), (0.25, 0.5));
        let r = rates_for(&"equal:3:pi".parse().unwrap(), &p).unwrap();
        assert_eq!(r.gamma_real, 1.0 / 9.0);
        let r = rates_for(&GeometrySpec::Natural, &p).unwrap();
        assert_eq!(r.gamma_real, 1.0);
    }

    #[test]
    fn small_invariant_suite_passes() {
        let p = AtomParams::new(30.0, 1.0).unwrap();
        for row in invariant_suite(&p, 3, 200).unwrap() {
            assert!(row.pass, "{row:?}");
        }
    }

    #[test]
    fn complex_rt_is_not_exchange_symmetric() {
        // Only the intensity of the split channel is symmetric; the complex
        // value carries the phase e^{iE₁(x₁−x₂)/2}.
        let p = AtomParams::new(30.0, 1.0).unwrap();
        let r = effective_rates_two_point(PI / 2.0, &p);
        let out = RModeOutput::new(&IncidentPair::resonant(&r), &p, &r);
        assert!((out.rt(0.3, -1.1) - out.rt(-1.1, 0.3)).norm() > 1e-3);
        assert!((out.rt(0.3, -1.1).norm() - out.rt(-1.1, 0.3).norm()).abs() < 1e-14);
    }
}
