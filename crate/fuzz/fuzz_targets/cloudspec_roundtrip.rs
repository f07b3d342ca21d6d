//! Fuzzes the emit → re-ingest contract: any cloud that builds must
//! survive canonicalization with a bit-identical distance table.
#![no_main]

use bk_core::cloudspec::CloudSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 1 << 16 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = CloudSpec::from_json(text) else {
        return;
    };
    let Ok(built) = spec.build() else {
        return;
    };
    let canonical = CloudSpec::canonical(&built.cloud);
    let rebuilt = CloudSpec::from_json(&canonical.to_json())
        .expect("canonical specs reparse")
        .build()
        .expect("canonical specs rebuild");
    let a = built.cloud.full_distance_table().unwrap();
    let b = rebuilt.cloud.full_distance_table().unwrap();
    assert_eq!(a.len(), b.len());
    for i in 0..a.len() {
        for j in 0..a.len() {
            assert_eq!(a.get(i, j).to_bits(), b.get(i, j).to_bits());
        }
    }
});
