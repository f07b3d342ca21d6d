//! Fuzzes the `--t-grid` flag grammar. Any parse result must be a sorted,
//! deduplicated list of finite nonnegative scales.
#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(grid) = bk_core::cloudspec::parse_scale_grid(text) {
        assert!(!grid.is_empty());
        assert!(grid.iter().all(|t| t.is_finite() && *t >= 0.0));
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }
});
