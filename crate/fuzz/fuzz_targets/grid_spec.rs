#![no_main]

use giant_atom::spec::{format_axis, format_grid, parse_axis, parse_grid};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    // Accepted grids must survive a format/parse round trip unchanged.
    if let Ok(g) = parse_grid(s) {
        assert!(g.len() >= 4);
        assert_eq!(parse_grid(&format_grid(&g)).unwrap(), g);
    }
    if let Ok(a) = parse_axis(s) {
        assert!(a.n >= 2 && a.min < a.max);
        assert_eq!(parse_axis(&format_axis(&a)).unwrap(), a);
    }
});
