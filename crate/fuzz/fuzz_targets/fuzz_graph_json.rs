//! DualGraph JSON decoder plus the consumers that trust a validated graph.
//! Invalid documents must be refused by validate(), not by a panic later.
#![no_main]

use libfuzzer_sys::fuzz_target;
use qres_core::{check_negative_definite, intersection_matrix, local_intersection, DualGraph};

fuzz_target!(|data: &[u8]| {
    let Ok(g) = serde_json::from_slice::<DualGraph>(data) else {
        return;
    };
    if g.validate().is_err() {
        return;
    }
    let _ = g.to_dot();
    let _ = qres_core::check_q_normal_crossing(&g);
    if let Ok(inter) = intersection_matrix(&g) {
        let _ = check_negative_definite(&inter);
    }
    let _ = qres_core::smooth_refinement(&g);
    let branches: Vec<usize> = g
        .vertices
        .iter()
        .filter(|v| v.is_arrow())
        .flat_map(|v| v.branch.iter().copied())
        .collect();
    for (i, &a) in branches.iter().enumerate() {
        for &b in &branches[i + 1..] {
            let _ = local_intersection(&g, a, b);
        }
    }
});
