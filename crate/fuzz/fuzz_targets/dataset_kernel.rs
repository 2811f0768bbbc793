#![no_main]

use libfuzzer_sys::fuzz_target;
use smkernel::gram::{compute_gram, compute_gram_oracle, KernelConfig};
use smkernel::parse_dataset;

// Graphs read from arbitrary input must give the same Gram matrix as the
// exhaustive oracle.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(d) = parse_dataset(text) else { return };
    if d.is_empty() || d.len() > 4 || d.graphs().iter().any(|g| g.vertex_count() > 5) {
        return;
    }
    for config in [KernelConfig::csi(3), KernelConfig::subgraph(3)] {
        let (Ok(fast), Ok(slow)) = (compute_gram(&d, &config, 1), compute_gram_oracle(&d, &config)) else {
            return;
        };
        for (a, b) in fast.values().iter().zip(slow.values()) {
            assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{a} vs {b}");
        }
    }
});
