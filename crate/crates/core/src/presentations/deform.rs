use serde::Serialize;

use super::engine::QuotientEngine;
use super::ring::{build_ring, RingId};
use crate::error::{Error, Result};
use crate::linalg::{Arithmetic, Rat};

/// Total dimensions of the t-deformed ring at several values of t.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeformedTotals {
    pub n: usize,
    pub samples: Vec<(Rat, u64)>,
    /// Highest nonzero degree at each sample.
    pub top_degrees: Vec<usize>,
}

impl DeformedTotals {
    pub fn total(&self) -> u64 {
        self.samples[0].1
    }
}

/// Total dimension of the deformed quotient at each sample value of t.
///
/// Fails with `SampleDisagreement` when the samples give different totals,
/// which means at least one of them is a special value.
pub fn generic_deformed_dimension(n: usize, samples: &[Rat], arith: Arithmetic) -> Result<DeformedTotals> {
    if samples.len() < 2 {
        return Err(Error::InvalidParameter("at least two samples of t are needed".into()));
    }
    if let Some(t) = samples.iter().find(|t| t.is_zero() || t.is_one()) {
        return Err(Error::InvalidParameter(format!("t = {t} is a special value")));
    }
    let mut out = Vec::with_capacity(samples.len());
    let mut tops = Vec::with_capacity(samples.len());
    for t in samples {
        let (total, top) = deformed_total(n, Some(t.clone()), arith)?;
        out.push((t.clone(), total));
        tops.push(top);
    }
    if out.iter().any(|s| s.1 != out[0].1) {
        return Err(Error::SampleDisagreement(
            out.iter().map(|(t, d)| (t.to_string(), *d as usize)).collect(),
        ));
    }
    Ok(DeformedTotals {
        n,
        samples: out,
        top_degrees: tops,
    })
}

/// Total dimension and top degree of the deformed ring at one value of t.
/// t = 0 and t = 1 are allowed here.
pub fn deformed_total(n: usize, t: Option<Rat>, arith: Arithmetic) -> Result<(u64, usize)> {
    let pres = build_ring(RingId::Dt, n, Some(t.unwrap_or(Rat::ZERO)))?;
    let cap = n * n + 2;
    QuotientEngine::new(pres, arith)?
        .total_dimension(cap)?
        .ok_or_else(|| Error::InvalidParameter(format!("no zero piece below degree {cap}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_match_factorial() {
        for n in 2..=5 {
            let f: u64 = (1..n as u64).product();
            assert_eq!(deformed_total(n, Some(Rat::ZERO), Arithmetic::Rational).unwrap().0, f);
            assert_eq!(deformed_total(n, Some(Rat::ONE), Arithmetic::Rational).unwrap().0, f);
        }
    }

    #[test]
    fn rejects_special_samples() {
        assert!(generic_deformed_dimension(3, &[Rat::ZERO, Rat::int(5)], Arithmetic::Rational).is_err());
        assert!(generic_deformed_dimension(3, &[Rat::int(5)], Arithmetic::Rational).is_err());
        let g = generic_deformed_dimension(3, &[Rat::int(5), Rat::new(-2, 7)], Arithmetic::Rational).unwrap();
        assert!(g.total() <= 2);
    }
}
