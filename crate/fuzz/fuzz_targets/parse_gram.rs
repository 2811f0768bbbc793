#![no_main]

use libfuzzer_sys::fuzz_target;
use smkernel::gram::{gram_to_string, parse_gram};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(m) = parse_gram(text) else { return };
    assert_eq!(m.values().len(), m.len() * m.len());
    // written form must read back to the same matrix
    if let Ok(out) = gram_to_string(&m) {
        let back = parse_gram(&out).expect("reparse");
        assert_eq!(back.ids(), m.ids());
        for (a, b) in back.values().iter().zip(m.values()) {
            assert!(a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()));
        }
    }
});
