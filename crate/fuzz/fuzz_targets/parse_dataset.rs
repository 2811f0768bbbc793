#![no_main]

use libfuzzer_sys::fuzz_target;
use smkernel::parse_dataset;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(d) = parse_dataset(text) {
            for g in d.graphs() {
                for &(u, v) in g.edges() {
                    assert!(u < v && v < g.vertex_count());
                }
            }
        }
    }
});
