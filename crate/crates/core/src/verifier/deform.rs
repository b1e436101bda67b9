use std::ops::RangeInclusive;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

use super::characters::factorial;
use super::{Certificate, Outcome, Recorder};
use crate::error::Error;
use crate::linalg::{Arithmetic, Rat};
use crate::presentations::{deformed_total, generic_deformed_dimension};

/// `k` random rationals p/q with |p| ≤ 1000, 1 ≤ q ≤ 1000, none of them 0 or 1.
pub fn random_samples(rng: &mut StdRng, k: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let t = Rat::new(rng.gen_range(-1000..=1000), rng.gen_range(1..=1000));
        if !t.is_zero() && !t.is_one() && !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

/// The deformed ring at t = 0, t = 1 and at generic t, for each n in `ns`.
pub fn deform(ns: RangeInclusive<usize>, seed: u64, arith: Arithmetic) -> Certificate {
    let params = json!({ "n_min": ns.start(), "n_max": ns.end(), "seed": seed });
    let mut rec = Recorder::new("deform", params, arith);
    let mut rng = StdRng::seed_from_u64(seed);
    let mut drops = Vec::new();
    for n in ns {
        let expected = factorial(n as u64 - 1);
        for t in [Rat::ZERO, Rat::ONE] {
            rec.check("special_value", json!({ "n": n, "t": t.to_string() }), || {
                let (total, top) = deformed_total(n, Some(t.clone()), arith)?;
                Ok(Outcome::verdict(total == expected, || json!({ "total": total, "expected": expected }))
                    .with_detail(json!({ "total": total, "top_degree": top })))
            });
        }
        let mut generic = None;
        rec.check("generic", json!({ "n": n }), || {
            let mut samples = random_samples(&mut rng, 2);
            let totals = match generic_deformed_dimension(n, &samples, arith) {
                Err(Error::SampleDisagreement(_)) => {
                    samples = random_samples(&mut rng, 2);
                    generic_deformed_dimension(n, &samples, arith)?
                }
                other => other?,
            };
            generic = Some(totals.total());
            let detail = json!({
                "samples": totals.samples.iter().map(|(t, d)| json!([t.to_string(), d])).collect::<Vec<_>>(),
                "top_degrees": totals.top_degrees,
            });
            Ok(Outcome::pass().with_detail(detail))
        });
        if let Some(g) = generic {
            drops.push((n, g, expected));
        }
    }
    rec.check("generic_drop", json!({}), || {
        let drop = drops.iter().find(|&&(_, g, e)| g < e);
        let table: Vec<_> = drops.iter().map(|(n, g, e)| json!({ "n": n, "generic": g, "special": e })).collect();
        Ok(Outcome::verdict(drop.is_some(), || json!({ "totals": table })).with_detail(json!({ "totals": table })))
    });
    rec.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_avoid_special_values() {
        let mut rng = StdRng::seed_from_u64(7);
        let s = random_samples(&mut rng, 50);
        assert_eq!(s.len(), 50);
        assert!(s.iter().all(|t| !t.is_zero() && !t.is_one()));
    }

    #[test]
    fn small_n() {
        let cert = deform(2..=6, 1, Arithmetic::Rational);
        assert!(cert.passed(), "{:?}", cert.failures().collect::<Vec<_>>());
    }
}
