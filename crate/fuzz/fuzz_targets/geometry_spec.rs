#![no_main]

use giant_atom::spec::{parse_phase, GeometrySpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = parse_phase(s) {
        assert!(p.is_finite());
    }
    let Ok(spec) = s.parse::<GeometrySpec>() else {
        return;
    };
    // The canonical text parses back to the same geometry, which builds.
    let back: GeometrySpec = spec.to_string().parse().unwrap();
    assert_eq!(back, spec);
    let _ = spec.build(1.0);
    let _ = spec.beta1();
});
