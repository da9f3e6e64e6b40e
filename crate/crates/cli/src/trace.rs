//! The trace document written by `substitute --trace`.
//!
//! ```text
//! {
//!   "x0": 0, "base_kernel": [2, 5], "p": 2,
//!   "rounds": [{ "round": 0, "eligible": [0], "added": [0], "removed_near": [5], "removed_far": [] }, ...],
//!   "sets": { "N_0": [0], "N_1": [5], ... },
//!   "intermediates": { "N'_1": [], "N'_2": [4], ... },
//!   "pre_3_kernel": [0, 3], "is_3_kernel": true,
//!   "pre_kernel_check": { ... },
//!   "roads": [{ "vertex": 3, "length": 3, "road": { "path": [...], "labels": [...] },
//!               "conditions": { ... }, "unique_chord": { ... }, "additive_inverse": { ... } }, ...]
//! }
//! ```
//!
//! `road` is null when no road of the required length exists; the check
//! fields are then omitted.

use serde_json::{json, Map, Value};

use trikernel::substitution::{
    check_additive_inverse_property, check_pre_kernel_properties, check_unique_short_chord, find_road, validate_road,
};
use trikernel::{Error, MethodOutcome, Result};

pub fn document(out: &MethodOutcome) -> Result<Value> {
    let t = &out.trace;
    let rounds: Vec<Value> = t
        .rounds
        .iter()
        .enumerate()
        .map(|(k, r)| {
            json!({
                "round": k,
                "eligible": r.eligible,
                "added": r.added,
                "removed_near": r.removed_near,
                "removed_far": r.removed_far,
            })
        })
        .collect();
    let mut sets = Map::new();
    for i in 0..=3 * t.p + 2 {
        sets.insert(format!("N_{i}"), json!(t.set(i)));
    }
    let mut intermediates = Map::new();
    for k in 0..t.p {
        for i in [3 * k + 1, 3 * k + 2] {
            intermediates.insert(format!("N'_{i}"), json!(t.intermediate(i)));
        }
    }
    let mut roads = Vec::new();
    for (s, v) in t.indexed_members() {
        let entry = match find_road(t, v, s) {
            Ok(road) => json!({
                "vertex": v,
                "length": s,
                "conditions": validate_road(t, &road.path),
                "unique_chord": check_unique_short_chord(t, &road),
                "additive_inverse": check_additive_inverse_property(t, &road),
                "road": road,
            }),
            Err(Error::NoRoadFound { .. }) => json!({ "vertex": v, "length": s, "road": null }),
            Err(e) => return Err(e),
        };
        roads.push(entry);
    }
    Ok(json!({
        "x0": t.x0,
        "base_kernel": t.base_kernel,
        "p": t.p,
        "rounds": rounds,
        "sets": sets,
        "intermediates": intermediates,
        "pre_3_kernel": out.pre_3_kernel,
        "is_3_kernel": out.is_3_kernel,
        "failure_witness": out.failure_witness,
        "pre_kernel_check": check_pre_kernel_properties(t),
        "roads": roads,
    }))
}
