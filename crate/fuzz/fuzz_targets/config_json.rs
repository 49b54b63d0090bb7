#![no_main]

use giant_atom::spec::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(cfg) = RunConfig::from_json(s) else {
        return;
    };
    // A validated configuration serialises and re-reads to itself.
    let text = cfg.to_json();
    assert_eq!(RunConfig::from_json(&text).unwrap(), cfg);
    assert!(cfg.atom_params().is_ok());
});
