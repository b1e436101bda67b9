use std::ops::RangeInclusive;

use serde_json::json;

use super::{Certificate, Outcome, Recorder};
use crate::presentations::RingId;
use crate::store::Store;

/// Coefficients e_0, e_1, … of ∏(1 + k t) over `values`.
pub fn elementary_symmetric(values: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut e = vec![1u64];
    for k in values {
        e.push(0);
        for i in (1..e.len()).rev() {
            e[i] += k * e[i - 1];
        }
    }
    e
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Graded characters of `ring` for each n in `ns`, through `max_degree` or
/// to the top when `None`, with the dimension identities that apply.
pub fn characters(store: &Store, ring: RingId, ns: RangeInclusive<usize>, max_degree: Option<usize>) -> Certificate {
    let params = json!({
        "ring": ring.as_str(),
        "n_min": ns.start(),
        "n_max": ns.end(),
        "max_degree": max_degree,
    });
    let mut rec = Recorder::new("characters", params, store.arithmetic());
    for n in ns {
        let inputs = json!({ "ring": ring.as_str(), "n": n, "max_degree": max_degree });
        let mut dims = None;
        rec.check("graded_character", inputs.clone(), || {
            let rep = match max_degree {
                Some(d) => store.graded(ring, n, d)?,
                None => store.full(ring, n)?,
            };
            dims = Some(rep.dimensions());
            Ok(Outcome::pass().with_detail(json!({
                "dimensions": rep.dimensions(),
                "pieces": rep.to_json()["pieces"],
            })))
        });
        let Some(dims) = dims else { continue };
        let oracle = match ring {
            RingId::A => Some(elementary_symmetric(1..n as u64)),
            RingId::B if n >= 2 => Some(elementary_symmetric(2..n as u64)),
            _ => None,
        };
        if let Some(e) = oracle {
            rec.check("dimension_identity", inputs.clone(), || {
                let expected: Vec<u64> = (0..dims.len()).map(|i| e.get(i).copied().unwrap_or(0)).collect();
                Ok(Outcome::verdict(dims == expected, || json!({ "computed": dims, "expected": expected })))
            });
        }
        if max_degree.is_none() && matches!(ring, RingId::D | RingId::Dh | RingId::M) && n >= 1 {
            rec.check("total_is_factorial", inputs, || {
                let total: u64 = dims.iter().sum();
                let expected = factorial(n as u64 - 1);
                Ok(Outcome::verdict(total == expected, || json!({ "total": total, "expected": expected })))
            });
        }
    }
    rec.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Arithmetic;

    #[test]
    fn elementary_symmetric_small() {
        assert_eq!(elementary_symmetric(1..3), vec![1, 3, 2]);
        assert_eq!(elementary_symmetric(2..4), vec![1, 5, 6]);
        assert_eq!(elementary_symmetric(std::iter::empty()), vec![1]);
    }

    #[test]
    fn small_tables() {
        let store = Store::new(Arithmetic::Rational, None);
        let cert = characters(&store, RingId::D, 2..=5, None);
        assert!(cert.passed());
        let totals: Vec<u64> = cert
            .checks
            .iter()
            .filter(|c| c.name == "graded_character")
            .map(|c| {
                c.detail.as_ref().unwrap()["dimensions"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|v| v.as_u64().unwrap())
                    .sum()
            })
            .collect();
        assert_eq!(totals, vec![1, 2, 6, 24]);
        let b2 = characters(&store, RingId::B, 2..=2, None);
        assert_eq!(b2.checks[0].detail.as_ref().unwrap()["dimensions"], json!([1]));
        assert!(characters(&store, RingId::A, 3..=3, Some(2)).passed());
    }
}
