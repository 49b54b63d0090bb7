//! Deterministic CSV and JSON emission with atomic file replacement.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::CliError;

/// Artifact version recorded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Formats a float in C `%.12e` style: `-1.234567890123e-05`.
///
/// The output is independent of locale; non-finite values print as `nan`,
/// `inf` and `-inf`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{v:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent form always contains `e`");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// A CSV document: `#` metadata lines, one header row and data rows.
#[derive(Debug, Clone, Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    /// Starts a document with the metadata block.
    pub fn new(command: &str, meta: &[(&str, String)], header: &[&str]) -> Self {
        let mut text = String::new();
        writeln!(text, "# giant-atom {VERSION}").unwrap();
        writeln!(text, "# command: {command}").unwrap();
        for (k, v) in meta {
            writeln!(text, "# {k}: {v}").unwrap();
        }
        writeln!(text, "{}", header.join(",")).unwrap();
        Self { text }
    }

    /// Appends one row of floats.
    pub fn row(&mut self, values: &[f64]) {
        let line: Vec<String> = values.iter().map(|&v| fmt_f64(v)).collect();
        self.text.push_str(&line.join(","));
        self.text.push('\n');
    }

    /// Appends one row of preformatted cells.
    pub fn row_cells(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    /// The document text.
    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// Stable pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports are always serialisable");
    s.push('\n');
    s
}

/// Writes `contents` to `dir/name` through a temporary file in `dir`, so a
/// reader never sees a partial file.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.join(name).display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    // Temporary files are created owner-only; outputs are ordinary files.
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644)).map_err(io)?;
    }
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(dir.join(name)).map_err(|e| io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_style_floats() {
        assert_eq!(fmt_f64(1.0), "1.000000000000e+00");
        assert_eq!(fmt_f64(-1.5e-5), "-1.500000000000e-05");
        assert_eq!(fmt_f64(6.02214076e23), "6.022140760000e+23");
        assert_eq!(fmt_f64(0.0), "0.000000000000e+00");
        assert_eq!(fmt_f64(1e-300), "1.000000000000e-300");
        assert_eq!(fmt_f64(f64::NAN), "nan");
    }

    #[test]
    fn csv_layout() {
        let mut c = Csv::new("demo", &[("gamma", "1".into())], &["a", "b"]);
        c.row(&[1.0, 2.0]);
        let lines: Vec<&str> = c.as_str().lines().collect();
        assert!(lines[0].starts_with("# giant-atom "));
        assert_eq!(lines[1], "# command: demo");
        assert_eq!(lines[2], "# gamma: 1");
        assert_eq!(lines[3], "a,b");
        assert_eq!(lines[4], "1.000000000000e+00,2.000000000000e+00");
    }

    #[test]
    fn atomic_write_replaces() {
        let d = tempfile::tempdir().unwrap();
        write_atomic(d.path(), "x.txt", "one").unwrap();
        write_atomic(d.path(), "x.txt", "two").unwrap();
        assert_eq!(std::fs::read_to_string(d.path().join("x.txt")).unwrap(), "two");
        assert_eq!(std::fs::read_dir(d.path()).unwrap().count(), 1);
    }
}
