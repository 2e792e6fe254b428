#![no_main]

use libfuzzer_sys::fuzz_target;
use pgroup_witness::obstruction::GridSpec;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(grid) = GridSpec::parse(text) {
            let points = grid.theorems.len()
                * grid.p.len()
                * grid.k.len()
                * grid.m.len()
                * grid.l.len()
                * grid.u.len()
                * grid.w.len();
            assert!(points <= pgroup_witness::obstruction::MAX_GRID_POINTS);
        }
    }
});
