#![no_main]

use libfuzzer_sys::fuzz_target;
use smkernel::kernels::{AttrKernel, BaseKernel, Item};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(k) = text.parse::<AttrKernel>() else { return };
    let again: AttrKernel = k.to_string().parse().expect("display output parses");
    assert_eq!(again, k);
    let attrs = [0.5; 4];
    let n = k.max_attr_index().map_or(0, |i| i + 1).min(attrs.len());
    let v = k.eval(Item::new("x", &attrs[..n]), Item::new("x", &attrs[..n]));
    assert!(v.is_finite() && v >= 0.0);
});
