//! Wave-packet dynamics on a tight-binding chain against the analytic
//! single-photon reflection and the two-photon correlation structure.

use std::f64::consts::{FRAC_PI_2, PI};

use giant_atom::model::effective_rates_n_point;
use giant_atom::oracle::lattice::{
    lattice_single_photon, lattice_two_photon, reflection_scan, LatticeConfig, PairCorrelation,
};
use giant_atom::{AtomGeometry, AtomParams};

/// Detunings in units of `Γ_g`, measured from the shifted resonance.
const OFFSETS: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];

fn scan(geom: &AtomGeometry, params: &AtomParams, sigma: f64) {
    let r = effective_rates_n_point(geom, params);
    let d: Vec<f64> = OFFSETS.iter().map(|c| r.lamb_shift + c * r.gamma_real).collect();
    for pt in reflection_scan(geom, params, &d, sigma).unwrap() {
        assert!(pt.relative_error < 0.02, "{pt:?}");
        assert!(pt.norm_drift < 1e-8, "{pt:?}");
    }
}

#[test]
fn natural_atom_lorentzian() {
    let p = AtomParams::from_gamma(1.0, 0.1).unwrap();
    scan(&AtomGeometry::from_positions(vec![0.0], 1.0).unwrap(), &p, 200.0);
}

#[test]
fn quarter_wave_giant_atom_shifted_lorentzian() {
    // Γ_g = 0.01: the delay phase Δ·d/v stays below 0.01 rad over the scan.
    let p = AtomParams::from_gamma(1.0, 0.02).unwrap();
    scan(&AtomGeometry::two_point(FRAC_PI_2, 1.0).unwrap(), &p, 3000.0);
}

#[test]
fn half_wave_giant_atom_is_transparent() {
    let p = AtomParams::from_gamma(1.0, 0.1).unwrap();
    let g = AtomGeometry::two_point(PI, 1.0).unwrap();
    let cfg = LatticeConfig::single_photon(&g, &p, 0.0, 200.0).unwrap();
    let run = lattice_single_photon(&cfg, &g, &p).unwrap();
    assert!(run.transmitted > 0.98, "{}", run.transmitted);
    assert!(run.norm_drift < 1e-8);
}

#[test]
fn resonant_pair_correlations() {
    let p = AtomParams::from_gamma(1.0, 0.2).unwrap();
    let cfg = LatticeConfig::two_photon_desk();
    let mut rates = Vec::new();
    for g in [AtomGeometry::from_positions(vec![0.0], 1.0).unwrap(), AtomGeometry::two_point(FRAC_PI_2, 1.0).unwrap()] {
        let run = lattice_two_photon(&cfg, &g, &p).unwrap();
        let c = PairCorrelation::from_run(&run, 0..40).unwrap();
        assert!(c.norm_drift < 1e-8, "{c:?}");
        assert!(c.reflected_suppression > 0.9, "{c:?}");
        assert!(c.transmitted_coincidence > 1.0, "{c:?}");
        rates.push(c.decay_rate);
    }
    // Correlation widths scale as 1/Γ_g and Γ_g(π/2) = Γ/2.
    let ratio = rates[0] / rates[1];
    assert!((ratio - 2.0).abs() < 0.3, "width ratio {ratio}");
}
