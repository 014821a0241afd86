//! Type strings "d;a,b" from arbitrary bytes: parsing may fail but must not
//! panic, and every accepted type must survive its own normal form.
#![no_main]

use libfuzzer_sys::fuzz_target;
use qres_core::CyclicType;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(t) = s.parse::<CyclicType>() else {
        return;
    };
    if let Ok((n, _)) = t.normalize() {
        assert!(n.is_normalized());
        assert!(t.equivalent(&n).unwrap());
    }
});
