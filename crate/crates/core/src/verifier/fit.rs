use std::collections::BTreeMap;

use serde_json::json;

use super::{Certificate, Outcome, Recorder};
use crate::error::{Error, Result};
use crate::presentations::RingId;
use crate::stability::{
    fit_pattern, instantiate, pattern_compare, pattern_subtract, pattern_sum, pattern_tensor, CompareMode,
    DataSource, StablePattern,
};
use crate::store::Store;
use crate::symcore::Partition;

/// The rings whose patterns the battery fits.
const FIT_RINGS: [RingId; 8] = [
    RingId::A,
    RingId::B,
    RingId::C,
    RingId::D,
    RingId::T,
    RingId::R,
    RingId::OT,
    RingId::M,
];

/// The pattern of one degree read off at its onset (the proven bound unless
/// overridden) and verified one step later. Written to the cache if any.
pub fn fitted_pattern(store: &Store, ring: RingId, degree: usize, onset: Option<usize>) -> Result<StablePattern> {
    let d = onset.unwrap_or_else(|| ring.onset(degree));
    let pattern = fit_pattern(store, ring, degree, d)?;
    if let Some(cache) = store.cache() {
        cache.put_pattern(ring, degree, &pattern)?;
    }
    Ok(pattern)
}

/// Fits one pattern. Every n up to `ceiling` past the onset is also compared
/// with the instantiated pattern.
pub fn fit(
    store: &Store,
    ring: RingId,
    degree: usize,
    onset: Option<usize>,
    ceiling: usize,
) -> (Option<StablePattern>, Certificate) {
    let params = json!({ "ring": ring.as_str(), "degree": degree, "onset": onset, "ceiling": ceiling });
    let mut rec = Recorder::new("fit", params, store.arithmetic());
    let pattern = fit_into(&mut rec, store, ring, degree, onset, ceiling);
    (pattern, rec.finish())
}

fn fit_into(
    rec: &mut Recorder,
    store: &Store,
    ring: RingId,
    degree: usize,
    onset: Option<usize>,
    ceiling: usize,
) -> Option<StablePattern> {
    let d = onset.unwrap_or_else(|| ring.onset(degree)).max(1);
    let inputs = json!({ "ring": ring.as_str(), "degree": degree, "onset": d });
    let mut out = None;
    rec.check("fit", inputs.clone(), || {
        if d + 1 > ceiling {
            return Ok(Outcome::fail(json!({ "error": format!("verification needs n = {} above the ceiling {ceiling}", d + 1) })));
        }
        let p = fitted_pattern(store, ring, degree, Some(d))?;
        let detail = json!({ "pattern": p.to_json(), "verified_at": d + 1 });
        out = Some(p);
        Ok(Outcome::pass().with_detail(detail))
    });
    let p = out.clone()?;
    for n in d + 2..=ceiling.min(d + 2) {
        rec.check("instance", json!({ "ring": ring.as_str(), "degree": degree, "onset": d, "n": n }), || {
            let direct = store.decomposition(ring, n, degree)?;
            let inst = instantiate(&p, n)?;
            Ok(Outcome::verdict(direct == inst, || json!({ "direct": direct.to_json(), "pattern": inst.to_json() })))
        });
    }
    out
}

/// The W^1 pattern: V_[n-1,1], stable from n = 2.
fn sphere_pattern() -> StablePattern {
    StablePattern::new(2, BTreeMap::from([(Partition::from([1]), 1)])).expect("in Λ_2")
}

/// Fits every ring's patterns through degree `i_max` and checks the three
/// pattern recursions.
pub fn fit_battery(store: &Store, i_max: usize, ceiling: usize) -> Certificate {
    let params = json!({ "max_degree": i_max, "ceiling": ceiling });
    let mut rec = Recorder::new("fit", params, store.arithmetic());
    let mut patterns: BTreeMap<(RingId, usize), StablePattern> = BTreeMap::new();
    for ring in FIT_RINGS {
        for i in 0..=i_max {
            if let Some(p) = fit_into(&mut rec, store, ring, i, None, ceiling) {
                patterns.insert((ring, i), p);
            }
        }
    }
    let get = |ring: RingId, i: usize| -> Result<&StablePattern> {
        patterns
            .get(&(ring, i))
            .ok_or_else(|| Error::InvalidParameter(format!("no verified pattern for {ring}^{i}")))
    };
    let compare = |lhs: &StablePattern, rhs: &StablePattern| -> Result<Outcome> {
        let equal = pattern_compare(lhs, rhs, CompareMode::Equal)?;
        Ok(Outcome::verdict(equal, || json!({ "fitted": lhs.to_json(), "recursion": rhs.to_json() })))
    };
    for i in 1..=i_max {
        rec.check("recursion_AB", json!({ "degree": i }), || {
            compare(get(RingId::B, i)?, &pattern_subtract(get(RingId::A, i)?, get(RingId::B, i - 1)?)?)
        });
        rec.check("recursion_CD", json!({ "degree": i }), || {
            let shifted = pattern_tensor(get(RingId::D, i - 1)?, &sphere_pattern())?;
            compare(get(RingId::D, i)?, &pattern_subtract(get(RingId::C, i)?, &shifted)?)
        });
        rec.check("recursion_MOT", json!({ "degree": i }), || {
            let terms = (0..=i)
                .map(|j| pattern_tensor(get(RingId::R, j)?, get(RingId::M, i - j)?))
                .collect::<Result<Vec<_>>>()?;
            compare(get(RingId::OT, i)?, &pattern_sum(&terms))
        });
    }
    rec.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Arithmetic;

    #[test]
    fn small_battery() {
        let store = Store::new(Arithmetic::Rational, None);
        let cert = fit_battery(&store, 1, 8);
        assert!(cert.passed(), "{:?}", cert.failures().collect::<Vec<_>>());
    }

    #[test]
    fn ceiling_is_a_failure() {
        let store = Store::new(Arithmetic::Rational, None);
        let (p, cert) = fit(&store, RingId::A, 2, None, 6);
        assert!(p.is_none());
        assert!(!cert.passed());
        let (p, cert) = fit(&store, RingId::C, 1, None, 6);
        assert!(cert.passed());
        assert_eq!(p.unwrap().d, 3);
    }
}
