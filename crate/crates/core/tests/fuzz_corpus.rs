//! Replays the checked-in fuzz corpus through the parsers with the same
//! round-trip assertions as the fuzz targets.

use std::path::PathBuf;

use giant_atom::spec::{format_axis, format_grid, parse_axis, parse_grid, parse_phase, GeometrySpec, RunConfig};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut v: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap())
        })
        .collect();
    v.sort();
    assert!(!v.is_empty(), "no seeds for {target}");
    v
}

#[test]
fn grid_spec_seeds() {
    let mut accepted = 0;
    for (name, s) in seeds("grid_spec") {
        if let Ok(g) = parse_grid(&s) {
            accepted += 1;
            assert_eq!(parse_grid(&format_grid(&g)).unwrap(), g, "{name}");
        }
        if let Ok(a) = parse_axis(&s) {
            assert_eq!(parse_axis(&format_axis(&a)).unwrap(), a, "{name}");
        }
    }
    assert!(accepted >= 4);
}

#[test]
fn geometry_spec_seeds() {
    let mut accepted = 0;
    for (name, s) in seeds("geometry_spec") {
        let _ = parse_phase(&s);
        if let Ok(spec) = s.parse::<GeometrySpec>() {
            accepted += 1;
            assert_eq!(spec.to_string().parse::<GeometrySpec>().unwrap(), spec, "{name}");
            assert!(spec.build(1.0).is_ok(), "{name}");
        }
    }
    assert!(accepted >= 5);
}

#[test]
fn config_json_seeds() {
    let mut accepted = 0;
    for (name, s) in seeds("config_json") {
        if let Ok(cfg) = RunConfig::from_json(&s) {
            accepted += 1;
            assert_eq!(RunConfig::from_json(&cfg.to_json()).unwrap(), cfg, "{name}");
        }
    }
    assert!(accepted >= 4);
}
