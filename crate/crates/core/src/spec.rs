//! Text formats for grids, geometries and run configurations.
//!
//! * Phase: a real number or a multiple of π: `1.2`, `pi`, `-pi/2`,
//!   `0.85pi`, `2pi/3`, `0.5*pi`. `π` is accepted for `pi`.
//! * Grid axis: `min:max:n`, `n ≥ 2` samples including both ends. A grid is
//!   one axis (square) or two axes joined by a comma.
//! * Geometry: `natural`, `two:<phase>`, `equal:<n>:<phase>` or
//!   `phases:<p0>,<p1>,…` with `p0 = 0`.
//! * Run configuration: a JSON document (see [`RunConfig`]). Any field can
//!   be replaced by a dotted path such as `params.gamma=0.5`.
//!
//! Every parser returns [`Error::Parse`] on malformed input and never
//! panics. Formatting a parsed value and parsing it again yields the same
//! value.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{AtomGeometry, AtomParams, Regime};
use crate::observables::{Grid2, GridAxis};

/// Largest accepted number of samples on one grid.
pub const MAX_GRID_POINTS: usize = 25_000_000;
/// Largest accepted number of coupling points.
pub const MAX_POINTS: usize = 10_000;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_real(s: &str) -> Result<f64> {
    let t = s.trim();
    // `f64::from_str` accepts `inf` and `nan`; neither is a valid input.
    let v: f64 = t.parse().map_err(|_| perr(format!("`{t}` is not a number")))?;
    if !v.is_finite() {
        return Err(perr(format!("`{t}` is not finite")));
    }
    Ok(v)
}

/// Parses a phase such as `2pi/3` or `0.7`.
pub fn parse_phase(s: &str) -> Result<f64> {
    let t = s.trim().replace('π', "pi");
    let Some(pos) = t.find("pi") else {
        return parse_real(&t);
    };
    let (head, tail) = (t[..pos].trim(), t[pos + 2..].trim());
    let head = match head.strip_suffix('*') {
        Some(h) if h.trim().is_empty() || h.trim() == "-" || h.trim() == "+" => {
            return Err(perr(format!("missing coefficient before `*` in `{}`", s.trim())))
        }
        Some(h) => h.trim(),
        None => head,
    };
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => parse_real(h)?,
    };
    let den = match tail {
        "" => 1.0,
        d => {
            let d = d.strip_prefix('/').ok_or_else(|| perr(format!("unexpected `{d}` after pi")))?;
            let v = parse_real(d)?;
            if v == 0.0 {
                return Err(perr("division by zero in phase"));
            }
            v
        }
    };
    let v = coef * PI / den;
    if !v.is_finite() {
        return Err(perr(format!("phase `{s}` is not finite")));
    }
    Ok(v)
}

/// Parses `min:max:n`.
pub fn parse_axis(s: &str) -> Result<GridAxis> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(perr(format!("grid axis `{}` must be min:max:n", s.trim())));
    };
    let n: usize = n.trim().parse().map_err(|_| perr(format!("`{}` is not a sample count", n.trim())))?;
    if n > MAX_GRID_POINTS {
        return Err(perr(format!("{n} samples exceed the limit {MAX_GRID_POINTS}")));
    }
    GridAxis::new(parse_real(lo)?, parse_real(hi)?, n).map_err(|e| perr(e.to_string()))
}

/// Parses a square (`min:max:n`) or rectangular (`a:b:n,c:d:m`) grid.
pub fn parse_grid(s: &str) -> Result<Grid2> {
    let axes: Vec<&str> = s.split(',').collect();
    let grid = match axes[..] {
        [a] => Grid2::square(parse_axis(a)?),
        [a, b] => Grid2 { axis1: parse_axis(a)?, axis2: parse_axis(b)? },
        _ => return Err(perr(format!("grid `{}` must have one or two axes", s.trim()))),
    };
    if grid.axis1.n.checked_mul(grid.axis2.n).map_or(true, |n| n > MAX_GRID_POINTS) {
        return Err(perr(format!("grid `{}` exceeds {MAX_GRID_POINTS} samples", s.trim())));
    }
    Ok(grid)
}

/// Canonical text of an axis: `min:max:n` with shortest round-trip floats.
pub fn format_axis(a: &GridAxis) -> String {
    format!("{}:{}:{}", a.min, a.max, a.n)
}

/// Canonical text of a grid; square grids use the one-axis form.
pub fn format_grid(g: &Grid2) -> String {
    if g.axis1 == g.axis2 {
        format_axis(&g.axis1)
    } else {
        format!("{},{}", format_axis(&g.axis1), format_axis(&g.axis2))
    }
}

/// Coupling geometry in text form.
#[derive(Debug, Clone, PartialEq)]
pub enum GeometrySpec {
    /// A single coupling point.
    Natural,
    /// Two points separated by phase `β₁`.
    TwoPoint {
        /// Leg phase `β₁`.
        beta1: f64,
    },
    /// `n` points with equal nearest-neighbour phase.
    EqualSpacing {
        /// Number of points.
        n: usize,
        /// Nearest-neighbour phase `β`.
        beta: f64,
    },
    /// Explicit phases, the first equal to zero.
    Phases(Vec<f64>),
}

impl GeometrySpec {
    /// Leg phases of the geometry.
    pub fn phases(&self) -> Vec<f64> {
        match self {
            Self::Natural => vec![0.0],
            Self::TwoPoint { beta1 } => vec![0.0, *beta1],
            Self::EqualSpacing { n, beta } => (0..*n).map(|j| j as f64 * beta).collect(),
            Self::Phases(p) => p.clone(),
        }
    }

    /// Builds the geometry for resonant wavevector `k0`.
    pub fn build(&self, k0: f64) -> Result<AtomGeometry> {
        match self {
            Self::Natural => AtomGeometry::from_positions(vec![0.0], k0),
            Self::TwoPoint { beta1 } => AtomGeometry::two_point(*beta1, k0),
            Self::EqualSpacing { n, beta } => AtomGeometry::equal_spacing(*n, *beta, k0),
            Self::Phases(p) => AtomGeometry::from_phases(p, k0),
        }
    }

    /// Two-point leg phase, for operations restricted to two points. The
    /// natural atom is the `β₁ = 0` two-point atom.
    pub fn beta1(&self) -> Result<f64> {
        match self.phases()[..] {
            [_] => Ok(0.0),
            [_, b] => Ok(b),
            ref p => Err(Error::PointCount { op: "two-point geometry", expected: 2, got: p.len() }),
        }
    }
}

impl FromStr for GeometrySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (kind, rest) = t.split_once(':').unwrap_or((t, ""));
        let spec = match kind.trim() {
            "natural" if rest.trim().is_empty() => Self::Natural,
            "two" => Self::TwoPoint { beta1: parse_phase(rest)? },
            "equal" => {
                let (n, beta) = rest.split_once(':').ok_or_else(|| perr("equal spacing needs equal:<n>:<phase>"))?;
                let n: usize = n.trim().parse().map_err(|_| perr(format!("`{}` is not a point count", n.trim())))?;
                if n == 0 || n > MAX_POINTS {
                    return Err(perr(format!("point count {n} outside 1..={MAX_POINTS}")));
                }
                Self::EqualSpacing { n, beta: parse_phase(beta)? }
            }
            "phases" => {
                let p = rest.split(',').map(parse_phase).collect::<Result<Vec<_>>>()?;
                if p.len() > MAX_POINTS {
                    return Err(perr(format!("{} points exceed the limit {MAX_POINTS}", p.len())));
                }
                Self::Phases(p)
            }
            _ => return Err(perr(format!("unknown geometry `{t}`"))),
        };
        // Reject anything the geometry constructor would refuse.
        spec.build(1.0).map_err(|e| perr(e.to_string()))?;
        Ok(spec)
    }
}

impl fmt::Display for GeometrySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Natural => write!(f, "natural"),
            Self::TwoPoint { beta1 } => write!(f, "two:{beta1}"),
            Self::EqualSpacing { n, beta } => write!(f, "equal:{n}:{beta}"),
            Self::Phases(p) => {
                write!(f, "phases:")?;
                for (i, x) in p.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }
    }
}

impl Serialize for GeometrySpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GeometrySpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A phase given either as a JSON number or as a phase string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phase(pub f64);

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::Number(n) => n.as_f64().map(Phase).ok_or_else(|| serde::de::Error::custom("phase out of range")),
            Value::String(s) => parse_phase(&s).map(Phase).map_err(serde::de::Error::custom),
            v => Err(serde::de::Error::custom(format!("phase must be a number or a string, got {v}"))),
        }
    }
}

/// A grid carried as its text form inside the JSON configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridText(pub Grid2);

impl Serialize for GridText {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_grid(&self.0))
    }
}

impl<'de> Deserialize<'de> for GridText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_grid(&s).map(GridText).map_err(serde::de::Error::custom)
    }
}

/// A single axis carried as its text form inside the JSON configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisText(pub GridAxis);

impl Serialize for AxisText {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_axis(&self.0))
    }
}

impl<'de> Deserialize<'de> for AxisText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_axis(&s).map(AxisText).map_err(serde::de::Error::custom)
    }
}

/// Physical parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsConfig {
    /// Atomic transition frequency `Ω`.
    pub omega: f64,
    /// Bare decay rate `Γ`.
    pub gamma: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self { omega: 30.0, gamma: 1.0 }
    }
}

/// Incident photon pair in absolute units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct PairConfig {
    /// Total detuning `δE₁ = E₁ − 2Ω`; `null` selects the resonant value `2Δ_L`.
    pub delta_e1: Option<f64>,
    /// Relative detuning `Δ₁`.
    pub delta1: f64,
}

/// Single-photon reflection sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    /// Detuning axis.
    pub deltas: AxisText,
    /// Leg phases `β₁`.
    pub betas: Vec<Phase>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            deltas: AxisText(GridAxis { min: -3.0, max: 3.0, n: 601 }),
            betas: [0.0, 0.25, 0.5, 2.0 / 3.0, 0.85, 1.0].iter().map(|c| Phase(c * PI)).collect(),
        }
    }
}

/// Coupling-point number sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NScalingConfig {
    /// Point counts.
    pub n_list: Vec<usize>,
    /// Nearest-neighbour phase.
    pub beta: Phase,
    /// Total detuning; `null` selects the resonant value of each `N`.
    pub delta_e1: Option<f64>,
}

impl Default for NScalingConfig {
    fn default() -> Self {
        Self { n_list: (1..=9).collect(), beta: Phase(PI), delta_e1: None }
    }
}

/// Randomised invariant suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CheckConfig {
    /// Random draws per invariant.
    pub draws: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { draws: 10_000 }
    }
}

/// Oracle comparison suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleConfig {
    /// Include the single-photon lattice runs.
    pub lattice: bool,
    /// Include the two-photon lattice runs.
    pub two_photon: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { lattice: true, two_photon: true }
    }
}

/// Complete run configuration.
///
/// Energies are absolute. Spatial grids are in `x̄ = xΓ` and momentum grids
/// in `Δ̄ = Δ/(Γ/2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Physical parameters.
    pub params: ParamsConfig,
    /// Coupling geometry.
    pub geometry: GeometrySpec,
    /// Incident pair of the two-photon maps.
    pub pair: PairConfig,
    /// Real-space grid.
    pub spatial_grid: GridText,
    /// Momentum grid.
    pub momentum_grid: GridText,
    /// Single-photon sweep.
    pub sweep: SweepConfig,
    /// Point-number sweep.
    pub nscaling: NScalingConfig,
    /// Markovian or exact single-photon phases.
    pub regime: Regime,
    /// Seed of the randomised suites.
    pub seed: u64,
    /// Invariant suite.
    pub check: CheckConfig,
    /// Oracle suite.
    pub oracle: OracleConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: ParamsConfig::default(),
            geometry: GeometrySpec::TwoPoint { beta1: PI / 2.0 },
            pair: PairConfig::default(),
            spatial_grid: GridText(Grid2::default_spatial()),
            momentum_grid: GridText(Grid2::default_momentum()),
            sweep: SweepConfig::default(),
            nscaling: NScalingConfig::default(),
            regime: Regime::Markov,
            seed: 0,
            check: CheckConfig::default(),
            oracle: OracleConfig::default(),
        }
    }
}

/// Replaces the field at dotted `path` in `doc` by `raw`, read as JSON when
/// it parses and as a string otherwise. Intermediate objects are created.
pub fn apply_override(doc: &mut Value, path: &str, raw: &str) -> Result<()> {
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(perr(format!("malformed override path `{path}`")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = doc;
    for k in &keys[..keys.len() - 1] {
        if !node.is_object() {
            return Err(perr(format!("override `{path}` descends into a non-object")));
        }
        node = node
            .as_object_mut()
            .expect("checked above")
            .entry(k.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    let obj = node.as_object_mut().ok_or_else(|| perr(format!("override `{path}` descends into a non-object")))?;
    obj.insert(keys[keys.len() - 1].to_string(), value);
    Ok(())
}

impl RunConfig {
    /// Parses a JSON document and validates it.
    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_json_with_overrides(s, &[])
    }

    /// Parses a JSON document, applies dotted-path overrides in order and
    /// validates the result. An empty document means all defaults.
    pub fn from_json_with_overrides(s: &str, overrides: &[(String, String)]) -> Result<Self> {
        let mut doc: Value = if s.trim().is_empty() {
            Value::Object(Default::default())
        } else {
            serde_json::from_str(s).map_err(|e| perr(format!("config: {e}")))?
        };
        if !doc.is_object() {
            return Err(perr("config must be a JSON object"));
        }
        for (k, v) in overrides {
            apply_override(&mut doc, k, v)?;
        }
        let cfg: Self = serde_json::from_value(doc).map_err(|e| perr(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks value ranges that the schema cannot express.
    pub fn validate(&self) -> Result<()> {
        self.atom_params()?;
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(perr(format!("{name} must be finite")))
            }
        };
        if let Some(d) = self.pair.delta_e1 {
            finite("pair.delta_e1", d)?;
        }
        finite("pair.delta1", self.pair.delta1)?;
        if let Some(d) = self.nscaling.delta_e1 {
            finite("nscaling.delta_e1", d)?;
        }
        finite("nscaling.beta", self.nscaling.beta.0)?;
        if self.sweep.betas.iter().any(|b| !b.0.is_finite()) {
            return Err(perr("sweep.betas must be finite"));
        }
        if self.nscaling.n_list.iter().any(|&n| n == 0 || n > MAX_POINTS) {
            return Err(perr(format!("nscaling.n_list entries must lie in 1..={MAX_POINTS}")));
        }
        if self.check.draws == 0 {
            return Err(perr("check.draws must be positive"));
        }
        Ok(())
    }

    /// Physical parameters as a validated record.
    pub fn atom_params(&self) -> Result<AtomParams> {
        AtomParams::from_gamma(self.params.omega, self.params.gamma).map_err(|e| perr(e.to_string()))
    }

    /// Stable pretty JSON: fields in declaration order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration is always serialisable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phases() {
        let cases = [
            ("pi", PI),
            ("-pi/2", -PI / 2.0),
            ("0.85pi", 0.85 * PI),
            ("2pi/3", 2.0 * PI / 3.0),
            ("0.5*pi", 0.5 * PI),
            (" 2π/3 ", 2.0 * PI / 3.0),
            ("1.25", 1.25),
        ];
        for (s, v) in cases {
            assert_eq!(parse_phase(s).unwrap(), v, "{s}");
        }
        for s in ["", "pi/0", "pix", "nan", "inf", "1e400", "pi/", "2/pi", "*pi"] {
            assert!(parse_phase(s).is_err(), "{s}");
        }
    }

    #[test]
    fn grids_round_trip() {
        let g = parse_grid("-10:10:401").unwrap();
        assert_eq!(g, Grid2::default_spatial());
        assert_eq!(format_grid(&g), "-10:10:401");
        let g = parse_grid("-1:2.5:3,0:1:2").unwrap();
        assert_eq!(parse_grid(&format_grid(&g)).unwrap(), g);
        for s in ["", "1:0:3", "0:1:1", "0:1", "0:1:2,0:1:2,0:1:2", "0:1:99999999", "0:nan:3", "0:1:-2"] {
            assert!(parse_grid(s).is_err(), "{s}");
        }
    }

    #[test]
    fn geometries_round_trip() {
        for s in ["natural", "two:pi/2", "equal:5:pi", "phases:0,0.5,pi"] {
            let g: GeometrySpec = s.parse().unwrap();
            assert_eq!(g.to_string().parse::<GeometrySpec>().unwrap(), g);
        }
        assert_eq!("equal:3:pi".parse::<GeometrySpec>().unwrap().phases(), vec![0.0, PI, 2.0 * PI]);
        for s in ["", "two", "two:0", "equal:0:pi", "equal:3:-1", "phases:1,2", "phases:0,2,1", "natural:3", "three:1"] {
            assert!(s.parse::<GeometrySpec>().is_err(), "{s}");
        }
        assert_eq!(GeometrySpec::Natural.beta1().unwrap(), 0.0);
        assert!("equal:3:pi".parse::<GeometrySpec>().unwrap().beta1().is_err());
    }

    #[test]
    fn config_defaults_overrides_and_errors() {
        let c = RunConfig::from_json("").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(RunConfig::from_json(&c.to_json()).unwrap(), c);
        let o = |k: &str, v: &str| (k.to_string(), v.to_string());
        let c = RunConfig::from_json_with_overrides(
            r#"{"params": {"gamma": 2}}"#,
            &[o("params.omega", "50"), o("geometry", "equal:3:pi"), o("pair.delta_e1", "1.5"), o("regime", "exact")],
        )
        .unwrap();
        assert_eq!(c.params.gamma, 2.0);
        assert_eq!(c.params.omega, 50.0);
        assert_eq!(c.geometry, GeometrySpec::EqualSpacing { n: 3, beta: PI });
        assert_eq!(c.pair.delta_e1, Some(1.5));
        assert_eq!(c.regime, Regime::Exact);
        for bad in [
            r#"[]"#,
            r#"{"params": {"gamma": -1}}"#,
            r#"{"unknown": 1}"#,
            r#"{"geometry": "two:0"}"#,
            r#"{"spatial_grid": "0:1:1"}"#,
            r#"{"check": {"draws": 0}}"#,
            r#"{"nscaling": {"n_list": [0]}}"#,
            r#"{"sweep": {"deltas": "0:1:3,0:1:3"}}"#,
        ] {
            assert!(RunConfig::from_json(bad).is_err(), "{bad}");
        }
        assert!(RunConfig::from_json_with_overrides("", &[o("params..gamma", "1")]).is_err());
        assert!(RunConfig::from_json_with_overrides("", &[o("seed.x", "1")]).is_err());
    }
}
