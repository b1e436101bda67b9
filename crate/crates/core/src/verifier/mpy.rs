use serde_json::json;

use super::fit::fitted_pattern;
use super::{Certificate, Outcome, Recorder};
use crate::presentations::RingId;
use crate::stability::{pattern_compare, CompareMode, DataSource};
use crate::store::Store;

/// D_n^i ≅ M_n^i for every i ≤ `i_max`: directly for all n up to the common
/// onset 3i, and for every larger n by equality of the fitted patterns.
pub fn verify_mpy(store: &Store, i_max: usize) -> Certificate {
    let mut rec = Recorder::new("verify-mpy", json!({ "max_degree": i_max }), store.arithmetic());
    for i in 0..=i_max {
        let d = RingId::D.onset(i);
        for n in 1..=d {
            rec.check("direct", json!({ "degree": i, "n": n }), || {
                let dn = store.decomposition(RingId::D, n, i)?;
                let mn = store.decomposition(RingId::M, n, i)?;
                Ok(Outcome::verdict(dn == mn, || json!({ "D": dn.to_json(), "M": mn.to_json() })))
            });
        }
        rec.check("pattern", json!({ "degree": i, "onset": d }), || {
            let p = fitted_pattern(store, RingId::D, i, Some(d))?;
            let q = fitted_pattern(store, RingId::M, i, Some(d))?;
            let equal = pattern_compare(&p, &q, CompareMode::Equal)?;
            Ok(Outcome::verdict(equal, || json!({ "D": p.to_json(), "M": q.to_json() }))
                .with_detail(json!({ "pattern": p.to_json() })))
        });
    }
    rec.finish()
}
