//! SurfaceGerm JSON decoder feeding the covering construction. Bad bases and
//! degrees must come back as errors.
#![no_main]

use libfuzzer_sys::fuzz_target;
use qres_core::{jung_resolution, SurfaceGerm};

fuzz_target!(|data: &[u8]| {
    let Ok(germ) = serde_json::from_slice::<SurfaceGerm>(data) else {
        return;
    };
    if let Ok(cover) = jung_resolution(&germ) {
        assert!(cover.validate().is_ok());
    }
});
