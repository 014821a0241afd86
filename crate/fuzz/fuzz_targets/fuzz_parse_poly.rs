//! Curve expressions from arbitrary bytes. The parser must reject garbage
//! with an error, never a panic, and accepted germs must resolve.
#![no_main]

use libfuzzer_sys::fuzz_target;
use qres_core::{parse_binomial_curve, parse_curve, CyclicType};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    // Long inputs only grow the token list, not the grammar coverage.
    if s.len() > 512 {
        return;
    }
    let _ = parse_curve(s);
    let smooth = CyclicType::new(1, 0, 0).unwrap();
    if let Ok(germ) = parse_binomial_curve(s, smooth) {
        let _ = qres_core::resolve(&germ);
    }
});
