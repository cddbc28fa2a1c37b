//! Fuzz the command-line grammars: `k=v` parameter assignments and the
//! `a:b:step` / comma-list grid syntax. Parsers must never panic and the
//! grid expansion must stay bounded.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for line in text.lines().take(64) {
        if let Ok((_, v)) = reductive_geom::io::parse_param_assignment(line) {
            assert!(v.is_finite());
        }
        if let Ok(grid) = reductive_geom::io::parse_grid_spec(line) {
            assert!(!grid.is_empty() && grid.len() <= 100_001);
            assert!(grid.iter().all(|x| x.is_finite()));
        }
    }
});
