//! CurveGerm JSON decoder. Any document that deserializes is expected to be
//! either resolved or rejected with an error; panics are bugs.
#![no_main]

use libfuzzer_sys::fuzz_target;
use qres_core::CurveGerm;

fuzz_target!(|data: &[u8]| {
    let Ok(germ) = serde_json::from_slice::<CurveGerm>(data) else {
        return;
    };
    let _ = qres_core::resolve_quotient(&germ);
});
