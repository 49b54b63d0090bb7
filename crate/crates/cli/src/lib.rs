//! Command-line front end: configuration handling, figure data export and
//! the invariant and oracle suites.
//!
//! ```text
//! giant-atom <rates|single|spatial|momentum|nscaling|oracle|check>
//!     [--config <path>] [--out <dir>] [--seed <u64>] [--markov|--exact]
//!     [--grid <spec>] [--<dotted.field> <value>]...
//! ```
//!
//! Exit codes: 0 on success, 1 when an invariant or oracle check fails, 2
//! on invalid configuration or I/O failure.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use giant_atom::spec::RunConfig;

pub mod commands;
pub mod output;

/// Failure of a command, mapped to an exit code by [`CliError::exit_code`].
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The configuration or arguments are invalid.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Output could not be written.
    #[error("i/o error: {0}")]
    Io(String),
    /// A numerical check could not be completed.
    #[error("check failed: {0}")]
    Invariant(String),
}

impl CliError {
    /// Process exit code: 1 for failed checks, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invariant(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
        }
    }
}

impl From<giant_atom::Error> for CliError {
    fn from(e: giant_atom::Error) -> Self {
        use giant_atom::Error as E;
        match e {
            E::Lattice(_) | E::Quadrature(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "giant-atom", version, about = "Two-photon scattering by a giant atom in a waveguide")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON configuration file; missing fields take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed of the randomised suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Markovian leg phases.
    #[arg(long, global = true, conflicts_with = "exact")]
    markov: bool,
    /// Detuning-dependent leg phases.
    #[arg(long, global = true)]
    exact: bool,
    /// Grid of the command (`min:max:n` or `a:b:n,c:d:m`).
    #[arg(long, global = true, allow_hyphen_values = true)]
    grid: Option<String>,
}

/// Subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Effective decay rate and Lamb shift of the geometry.
    Rates,
    /// Single-photon reflection sweep.
    Single,
    /// Real-space two-photon output maps.
    Spatial,
    /// Momentum-space bound distribution and its peaks.
    Momentum,
    /// Peak height against the number of coupling points.
    Nscaling,
    /// Analytic results against quadrature and lattice oracles.
    Oracle,
    /// Randomised invariant suite.
    Check,
}

impl Command {
    /// Subcommand name.
    pub fn name(self) -> &'static str {
        match self {
            Command::Rates => "rates",
            Command::Single => "single",
            Command::Spatial => "spatial",
            Command::Momentum => "momentum",
            Command::Nscaling => "nscaling",
            Command::Oracle => "oracle",
            Command::Check => "check",
        }
    }
}

/// Top-level configuration fields that may be set directly as flags.
const FIELD_FLAGS: [&str; 10] = [
    "params", "geometry", "pair", "spatial_grid", "momentum_grid", "sweep", "nscaling", "regime", "check", "oracle",
];

/// Dotted-path configuration overrides in command-line order.
type Overrides = Vec<(String, String)>;

/// Splits configuration overrides (`--a.b v`, `--a.b=v`, `--geometry v`)
/// from the arguments that clap parses.
fn split_overrides(args: Vec<OsString>) -> Result<(Vec<OsString>, Overrides), CliError> {
    let mut rest = Vec::with_capacity(args.len());
    let mut overrides = Vec::new();
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let Some(flag) = a.to_str().and_then(|s| s.strip_prefix("--")) else {
            rest.push(a);
            continue;
        };
        let (name, inline) = match flag.split_once('=') {
            Some((n, v)) => (n.to_string(), Some(v.to_string())),
            None => (flag.to_string(), None),
        };
        let root = name.split('.').next().unwrap_or_default();
        if !(name.contains('.') || FIELD_FLAGS.contains(&root)) {
            rest.push(a);
            continue;
        }
        let value = match inline {
            Some(v) => v,
            None => it
                .next()
                .and_then(|v| v.into_string().ok())
                .ok_or_else(|| CliError::Config(format!("--{name} needs a value")))?,
        };
        overrides.push((name, value));
    }
    Ok((rest, overrides))
}

/// Resolves the configuration of one invocation: file, then dotted
/// overrides, then the dedicated flags.
fn resolve(cli: &Cli, mut overrides: Overrides) -> Result<RunConfig, CliError> {
    let text = match &cli.config {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?,
        None => String::new(),
    };
    if let Some(s) = cli.seed {
        overrides.push(("seed".into(), s.to_string()));
    }
    if cli.markov {
        overrides.push(("regime".into(), "markov".into()));
    }
    if cli.exact {
        overrides.push(("regime".into(), "exact".into()));
    }
    if let Some(g) = &cli.grid {
        let field = match cli.command {
            Command::Single => "sweep.deltas",
            Command::Spatial => "spatial_grid",
            Command::Momentum => "momentum_grid",
            c => return Err(CliError::Config(format!("--grid is not used by `{}`", c.name()))),
        };
        overrides.push((field.into(), serde_json::Value::String(g.clone()).to_string()));
    }
    RunConfig::from_json_with_overrides(&text, &overrides).map_err(|e| CliError::Config(e.to_string()))
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit code. Messages go to stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let (rest, overrides) = match split_overrides(args) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(rest) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = resolve(&cli, overrides).and_then(|cfg| commands::execute(cli.command, &cfg, &cli.out));
    match result {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            for f in &outcome.files {
                eprintln!("wrote {}", f.display());
            }
            if outcome.failures.is_empty() {
                0
            } else {
                for f in &outcome.failures {
                    eprintln!("FAIL {f}");
                }
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn overrides_are_split_from_flags() {
        let (rest, o) = split_overrides(os(&[
            "giant-atom",
            "rates",
            "--params.gamma",
            "2",
            "--geometry=equal:3:pi",
            "--out",
            "x",
        ]))
        .unwrap();
        assert_eq!(rest, os(&["giant-atom", "rates", "--out", "x"]));
        assert_eq!(o, vec![("params.gamma".into(), "2".into()), ("geometry".into(), "equal:3:pi".into())]);
        assert!(split_overrides(os(&["giant-atom", "rates", "--params.gamma"])).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["giant-atom", "bogus"]), 2);
        assert_eq!(run(["giant-atom", "rates", "--params.gamma", "-1"]), 2);
        assert_eq!(run(["giant-atom", "rates", "--grid", "0:1:3"]), 2);
        assert_eq!(run(["giant-atom", "single", "--grid", "-1:1:2", "--out", "/dev/null/x"]), 2);
        assert_eq!(run(["giant-atom", "--help"]), 0);
    }
}
