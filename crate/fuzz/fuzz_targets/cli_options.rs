#![no_main]

use libfuzzer_sys::fuzz_target;
use smkernel::gram::{KernelKind, Normalization, Weights};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(Weights::Explicit(w)) = text.parse::<Weights>() {
        assert!(!w.is_empty() && w.iter().all(|x| x.is_finite() && *x >= 0.0));
    }
    if let Ok(kind) = text.parse::<KernelKind>() {
        assert_eq!(kind.to_string(), text);
    }
    let _ = text.parse::<Normalization>();
});
