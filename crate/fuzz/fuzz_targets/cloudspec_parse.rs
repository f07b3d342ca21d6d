//! Fuzzes the cloud-file parser and the full validation pipeline behind
//! it. Malformed input must produce a diagnostic, never a panic.
#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // validation is O(n³) in the table size; keep iterations fast
    if data.len() > 1 << 16 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = bk_core::cloudspec::CloudSpec::from_json(text) else {
        return;
    };
    if let Ok(built) = spec.build() {
        // a cloud that validates must always glue to a metric
        let _ = built.cloud.full_distance_table().unwrap();
    }
});
