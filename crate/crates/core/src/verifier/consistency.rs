use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{Certificate, Outcome, Recorder};
use crate::error::{Error, Result};
use crate::gradedrep::{graded_tensor, GradedRep};
use crate::linalg::Arithmetic;
use crate::presentations::{build_ring, QuotientEngine, RingId};
use crate::store::Store;

/// Largest n (and degree, where one applies) for each identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyRanges {
    pub ab: (usize, usize),
    pub cd: (usize, usize),
    pub mot: (usize, usize),
    pub restriction: usize,
    pub two_presentations: usize,
    pub squares: usize,
}

impl Default for ConsistencyRanges {
    fn default() -> Self {
        ConsistencyRanges {
            ab: (8, 3),
            cd: (8, 3),
            mot: (7, 2),
            restriction: 7,
            two_presentations: 6,
            squares: 6,
        }
    }
}

impl ConsistencyRanges {
    /// Every range cut down to at most `max_n` and `max_degree`.
    pub fn capped(&self, max_n: Option<usize>, max_degree: Option<usize>) -> Self {
        let n = |v: usize| max_n.map_or(v, |c| v.min(c));
        let d = |v: usize| max_degree.map_or(v, |c| v.min(c));
        ConsistencyRanges {
            ab: (n(self.ab.0), d(self.ab.1)),
            cd: (n(self.cd.0), d(self.cd.1)),
            mot: (n(self.mot.0), d(self.mot.1)),
            restriction: n(self.restriction),
            two_presentations: n(self.two_presentations),
            squares: n(self.squares),
        }
    }
}

fn compare(lhs: &GradedRep, rhs: &GradedRep) -> Outcome {
    Outcome::verdict(lhs == rhs, || json!({ "left": lhs.to_json(), "right": rhs.to_json() }))
}

/// OT with x_ij² added, to the top degree.
fn squares_quotient(n: usize, arith: Arithmetic) -> Result<GradedRep> {
    let mut engine = QuotientEngine::new(build_ring(RingId::OT, n, None)?.with_squares(), arith)?;
    let cap = n.max(2);
    let (_, top) = engine
        .total_dimension(cap)?
        .ok_or_else(|| Error::InvalidParameter(format!("OT_{n} with squares has no zero piece through degree {cap}")))?;
    engine.graded_character(top + 1)
}

/// The identities relating the rings to one another.
pub fn consistency(store: &Store, ranges: &ConsistencyRanges) -> Certificate {
    let params = serde_json::to_value(ranges).expect("ranges serialize");
    let mut rec = Recorder::new("consistency", params, store.arithmetic());
    let (ab_n, ab_d) = ranges.ab;
    for n in 2..=ab_n {
        rec.check("A = B ⊗ E[t]", json!({ "n": n, "max_degree": ab_d }), || {
            let rhs = graded_tensor(&store.graded(RingId::B, n, ab_d)?, &GradedRep::exterior_line(n))?;
            Ok(compare(&store.graded(RingId::A, n, ab_d)?, &rhs.truncate(ab_d)))
        });
    }
    let (cd_n, cd_d) = ranges.cd;
    for n in 2..=cd_n {
        rec.check("C = D ⊗ W", json!({ "n": n, "max_degree": cd_d }), || {
            let rhs = graded_tensor(&store.graded(RingId::D, n, cd_d)?, &GradedRep::sphere_points(n))?;
            Ok(compare(&store.graded(RingId::C, n, cd_d)?, &rhs.truncate(cd_d)))
        });
    }
    let (mot_n, mot_d) = ranges.mot;
    for n in 2..=mot_n {
        rec.check("OT = R ⊗ M", json!({ "n": n, "max_degree": mot_d }), || {
            let rhs = graded_tensor(&store.graded(RingId::R, n, mot_d)?, &store.graded(RingId::M, n, mot_d)?)?;
            Ok(compare(&store.graded(RingId::OT, n, mot_d)?, &rhs.truncate(mot_d)))
        });
    }
    for n in 3..=ranges.restriction {
        rec.check("Res D_n = C_{n-1}", json!({ "n": n }), || {
            Ok(compare(&store.full(RingId::D, n)?.restrict()?, &store.full(RingId::C, n - 1)?))
        });
    }
    for n in 2..=ranges.two_presentations {
        rec.check("Dh = D", json!({ "n": n }), || {
            Ok(compare(&store.full(RingId::Dh, n)?, &store.full(RingId::D, n)?))
        });
    }
    for n in 2..=ranges.squares {
        rec.check("OT / squares = C", json!({ "n": n }), || {
            Ok(compare(&squares_quotient(n, store.arithmetic())?, &store.full(RingId::C, n)?))
        });
    }
    rec.finish()
}
