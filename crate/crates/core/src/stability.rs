//! Padded partitions, stable patterns and free FI-module patterns.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentations::RingId;
use crate::symcore::{partitions, IrrDecomposition, Partition};

/// |λ| + λ1, the smallest n at which λ[n] is a partition.
pub fn pad_bound(lambda: &Partition) -> usize {
    lambda.size() + lambda.first()
}

/// λ[n] = (n - |λ|, λ1, λ2, …).
pub fn pad(lambda: &Partition, n: usize) -> Result<Partition> {
    let needed = pad_bound(lambda);
    if n < needed {
        return Err(Error::PadTooSmall {
            partition: lambda.clone(),
            n,
            needed,
        });
    }
    let mut parts = Vec::with_capacity(lambda.len() + 1);
    parts.push(n - lambda.size());
    parts.extend_from_slice(lambda.parts());
    Ok(Partition::new(parts))
}

/// Λ_d: every λ with |λ| + λ1 ≤ d.
pub fn lambda_set(d: usize) -> Vec<Partition> {
    (0..=d)
        .flat_map(partitions)
        .filter(|l| pad_bound(l) <= d)
        .collect()
}

/// Multiplicities r_λ over Λ_d describing a sequence of representations
/// for every n ≥ d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StablePattern {
    pub d: usize,
    pub mult: BTreeMap<Partition, u64>,
}

impl StablePattern {
    pub fn new(d: usize, mult: BTreeMap<Partition, u64>) -> Result<Self> {
        if let Some(bad) = mult.keys().find(|l| pad_bound(l) > d) {
            return Err(Error::InvalidParameter(format!("{bad} is not in Λ_{d}")));
        }
        let mult = mult.into_iter().filter(|(_, m)| *m > 0).collect();
        Ok(StablePattern { d, mult })
    }

    pub fn zero(d: usize) -> Self {
        StablePattern {
            d,
            mult: BTreeMap::new(),
        }
    }

    /// The pattern of the trivial representation in every n.
    pub fn trivial() -> Self {
        StablePattern {
            d: 0,
            mult: BTreeMap::from([(Partition::empty(), 1)]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mult.is_empty()
    }

    pub fn multiplicity(&self, lambda: &Partition) -> u64 {
        self.mult.get(lambda).copied().unwrap_or(0)
    }

    /// The same pattern regarded as stabilizing at a later onset.
    pub fn with_onset(&self, d: usize) -> Self {
        assert!(d >= self.d, "onsets only move up");
        StablePattern {
            d,
            mult: self.mult.clone(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("patterns serialize")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let p: StablePattern = serde_json::from_value(value.clone())?;
        StablePattern::new(p.d, p.mult)
    }
}

/// Strips the first row of every constituent of a representation of S_n.
pub fn unpad(a: &IrrDecomposition, d: usize) -> Result<StablePattern> {
    let n = a.n();
    if n < d {
        return Err(Error::BelowOnset { onset: d, n });
    }
    let mut mult = BTreeMap::new();
    for (nu, &m) in a.multiplicities() {
        let lambda = nu.tail();
        if nu.first() < lambda.first() || pad_bound(&lambda) > d {
            return Err(Error::NotStableAtD {
                partition: nu.clone(),
                n,
                d,
            });
        }
        mult.insert(lambda, m);
    }
    Ok(StablePattern { d, mult })
}

/// ⊕ V_{λ[n]}^{r_λ}.
pub fn instantiate(p: &StablePattern, n: usize) -> Result<IrrDecomposition> {
    if n < p.d {
        return Err(Error::BelowOnset { onset: p.d, n });
    }
    let mut out = IrrDecomposition::zero(n);
    for (lambda, &m) in &p.mult {
        out.add_copies(pad(lambda, n)?, m);
    }
    Ok(out)
}

/// Supplies decompositions of one graded piece of a ring at a given n.
pub trait DataSource {
    fn decomposition(&self, ring: RingId, n: usize, degree: usize) -> Result<IrrDecomposition>;
}

impl<F> DataSource for F
where
    F: Fn(RingId, usize, usize) -> Result<IrrDecomposition>,
{
    fn decomposition(&self, ring: RingId, n: usize, degree: usize) -> Result<IrrDecomposition> {
        self(ring, n, degree)
    }
}

/// The pattern read off at n = d, checked against the data at n = d + 1.
/// An onset of 0 is computed at n = 1.
pub fn fit_pattern<S: DataSource + ?Sized>(
    source: &S,
    ring: RingId,
    degree: usize,
    d: usize,
) -> Result<StablePattern> {
    let d = d.max(1);
    let pattern = unpad(&source.decomposition(ring, d, degree)?, d)?;
    let next = source.decomposition(ring, d + 1, degree)?;
    if instantiate(&pattern, d + 1)? != next {
        return Err(Error::VerificationFailed {
            ring: ring.to_string(),
            degree,
            d,
            n: d + 1,
        });
    }
    Ok(pattern)
}

/// The smallest d ≤ `max_d` at which a pattern fits and verifies at d + 1.
/// This is a diagnostic only: finitely many values never prove stability.
pub fn detect_onset<S: DataSource + ?Sized>(
    source: &S,
    ring: RingId,
    degree: usize,
    max_d: usize,
) -> Result<Option<usize>> {
    for d in 1..=max_d {
        match fit_pattern(source, ring, degree, d) {
            Ok(_) => return Ok(Some(d)),
            Err(Error::NotStableAtD { .. } | Error::VerificationFailed { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

pub fn pattern_add(p: &StablePattern, q: &StablePattern) -> StablePattern {
    let mut mult = p.mult.clone();
    for (l, m) in &q.mult {
        *mult.entry(l.clone()).or_insert(0) += m;
    }
    StablePattern {
        d: p.d.max(q.d),
        mult,
    }
}

pub fn pattern_subtract(p: &StablePattern, q: &StablePattern) -> Result<StablePattern> {
    let mut mult = p.mult.clone();
    for (l, m) in &q.mult {
        let have = mult.get(l).copied().unwrap_or(0);
        if have < *m {
            return Err(Error::NegativeMultiplicity {
                partition: l.clone(),
                value: format!("{have} - {m}"),
            });
        }
        mult.insert(l.clone(), have - m);
    }
    mult.retain(|_, m| *m > 0);
    Ok(StablePattern {
        d: p.d.max(q.d),
        mult,
    })
}

pub fn pattern_sum<'a, I>(patterns: I) -> StablePattern
where
    I: IntoIterator<Item = &'a StablePattern>,
{
    patterns
        .into_iter()
        .fold(StablePattern::zero(0), |acc, p| pattern_add(&acc, p))
}

/// The pointwise tensor product, which stabilizes at d + e.
pub fn pattern_tensor(p: &StablePattern, q: &StablePattern) -> Result<StablePattern> {
    let d = p.d + q.d;
    let n = d.max(1);
    let product = instantiate(p, n)?.kronecker(&instantiate(q, n)?)?;
    unpad(&product, d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CompareMode {
    Equal,
    Subrep,
}

/// Compares two patterns after bringing both to the onset max(d, e).
pub fn pattern_compare(p: &StablePattern, q: &StablePattern, mode: CompareMode) -> Result<bool> {
    let d = p.d.max(q.d);
    let n = d.max(1);
    let a = unpad(&instantiate(p, n)?, d)?;
    let b = unpad(&instantiate(q, n)?, d)?;
    Ok(match mode {
        CompareMode::Equal => a.mult == b.mult,
        CompareMode::Subrep => a.mult.iter().all(|(l, m)| *m <= b.multiplicity(l)),
    })
}

/// Λ_λ: all μ with λ_i ≥ μ_i ≥ λ_{i+1}.
pub fn interlacing(lambda: &Partition) -> Vec<Partition> {
    let parts = lambda.parts();
    let mut out = vec![Vec::new()];
    for i in 0..parts.len() {
        let lo = parts.get(i + 1).copied().unwrap_or(0);
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                (lo..=parts[i]).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    let mut result: Vec<Partition> = out.into_iter().map(Partition::new).collect();
    result.sort();
    result
}

/// The pattern of the free FI-module P(λ), with onset |λ| + λ1.
pub fn free_pattern(lambda: &Partition) -> StablePattern {
    StablePattern {
        d: pad_bound(lambda),
        mult: interlacing(lambda).into_iter().map(|m| (m, 1)).collect(),
    }
}

/// P(λ)_n.
pub fn free_module_instance(lambda: &Partition, n: usize) -> Result<IrrDecomposition> {
    let needed = pad_bound(lambda);
    if n < needed {
        return Err(Error::PadTooSmall {
            partition: lambda.clone(),
            n,
            needed,
        });
    }
    instantiate(&free_pattern(lambda), n)
}

/// Multiplicities of free modules P(λ).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeModuleDecomposition {
    pub mult: BTreeMap<Partition, u64>,
}

impl FreeModuleDecomposition {
    /// The pattern of ⊕ P(λ)^{m_λ}.
    pub fn pattern(&self) -> StablePattern {
        let mut out = StablePattern::zero(0);
        for (l, &m) in &self.mult {
            for _ in 0..m {
                out = pattern_add(&out, &free_pattern(l));
            }
        }
        out
    }
}

/// Writes a pattern as a sum of free-module patterns by repeatedly peeling
/// off P(λ) for a constituent λ maximizing |λ| + λ1.
pub fn free_decompose(p: &StablePattern) -> Result<FreeModuleDecomposition> {
    let mut rest = p.mult.clone();
    let mut out = FreeModuleDecomposition::default();
    while let Some(top) = rest
        .keys()
        .max_by(|a, b| pad_bound(a).cmp(&pad_bound(b)).then_with(|| b.cmp(a)))
        .cloned()
    {
        let copies = rest[&top];
        for mu in interlacing(&top) {
            let have = rest.get(&mu).copied().unwrap_or(0);
            if have < copies {
                return Err(Error::NotFree { partition: mu });
            }
            if have == copies {
                rest.remove(&mu);
            } else {
                rest.insert(mu, have - copies);
            }
        }
        out.mult.insert(top, copies);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::from(parts)
    }

    #[test]
    fn padding() {
        assert_eq!(pad(&p(&[]), 4).unwrap(), p(&[4]));
        assert_eq!(pad(&p(&[1]), 3).unwrap(), p(&[2, 1]));
        assert_eq!(pad(&p(&[2, 2]), 7).unwrap(), p(&[3, 2, 2]));
        assert!(matches!(pad(&p(&[2, 2]), 5), Err(Error::PadTooSmall { needed: 6, .. })));
    }

    #[test]
    fn small_lambda_sets() {
        assert_eq!(lambda_set(0), vec![p(&[])]);
        assert_eq!(lambda_set(2), vec![p(&[]), p(&[1])]);
        assert_eq!(lambda_set(3), vec![p(&[]), p(&[1]), p(&[1, 1])]);
    }

    #[test]
    fn unpad_examples() {
        let triv = IrrDecomposition::trivial(5);
        assert_eq!(unpad(&triv, 2).unwrap().mult, BTreeMap::from([(p(&[]), 1)]));
        let a = IrrDecomposition::from_pairs(5, [(p(&[4, 1]), 1), (p(&[5]), 1)]).unwrap();
        assert_eq!(unpad(&a, 2).unwrap().mult, BTreeMap::from([(p(&[]), 1), (p(&[1]), 1)]));
        let bad = IrrDecomposition::irreducible(p(&[2, 2, 1]));
        assert!(matches!(unpad(&bad, 4), Err(Error::NotStableAtD { .. })));
    }

    #[test]
    fn instantiate_examples() {
        let w1 = StablePattern::new(2, BTreeMap::from([(p(&[1]), 1)])).unwrap();
        assert_eq!(instantiate(&w1, 6).unwrap(), IrrDecomposition::irreducible(p(&[5, 1])));
        assert!(matches!(instantiate(&w1, 1), Err(Error::BelowOnset { .. })));
    }

    #[test]
    fn tensor_of_standard_patterns() {
        let w1 = StablePattern::new(2, BTreeMap::from([(p(&[1]), 1)])).unwrap();
        let t = pattern_tensor(&w1, &w1).unwrap();
        assert_eq!(t.d, 4);
        let expect = IrrDecomposition::from_pairs(
            4,
            [(p(&[4]), 1), (p(&[3, 1]), 1), (p(&[2, 2]), 1), (p(&[2, 1, 1]), 1)],
        )
        .unwrap();
        assert_eq!(instantiate(&t, 4).unwrap(), expect);
        let triv = pattern_tensor(&w1, &StablePattern::trivial()).unwrap();
        assert!(pattern_compare(&triv, &w1, CompareMode::Equal).unwrap());
    }

    #[test]
    fn arithmetic() {
        let a = StablePattern::new(3, BTreeMap::from([(p(&[]), 2), (p(&[1]), 1)])).unwrap();
        let b = StablePattern::new(2, BTreeMap::from([(p(&[]), 1)])).unwrap();
        let s = pattern_add(&a, &b);
        assert_eq!(s.d, 3);
        assert_eq!(pattern_subtract(&s, &b).unwrap(), a);
        assert!(pattern_subtract(&a, &a).unwrap().is_zero());
        assert!(pattern_subtract(&b, &a).is_err());
        assert_eq!(pattern_add(&a, &StablePattern::zero(0)), a);
        assert!(pattern_compare(&b, &a, CompareMode::Subrep).unwrap());
        assert!(!pattern_compare(&a, &b, CompareMode::Subrep).unwrap());
    }

    #[test]
    fn free_modules() {
        assert_eq!(interlacing(&p(&[])), vec![p(&[])]);
        assert_eq!(interlacing(&p(&[1])), vec![p(&[]), p(&[1])]);
        let mut il = interlacing(&p(&[2, 1]));
        il.sort();
        let mut expect = vec![p(&[2, 1]), p(&[1, 1]), p(&[2]), p(&[1])];
        expect.sort();
        assert_eq!(il, expect);
        assert_eq!(free_module_instance(&p(&[]), 4).unwrap(), IrrDecomposition::trivial(4));
        assert_eq!(
            free_module_instance(&p(&[1]), 4).unwrap(),
            IrrDecomposition::from_pairs(4, [(p(&[4]), 1), (p(&[3, 1]), 1)]).unwrap()
        );
        let d = free_decompose(&free_pattern(&p(&[1]))).unwrap();
        assert_eq!(d.mult, BTreeMap::from([(p(&[1]), 1)]));
        let t = pattern_tensor(&free_pattern(&p(&[1])), &free_pattern(&p(&[1]))).unwrap();
        let fd = free_decompose(&t).unwrap();
        assert!(fd.mult.keys().all(|nu| pad_bound(nu) <= 4));
        assert!(pattern_compare(&fd.pattern(), &t, CompareMode::Equal).unwrap());
        let lonely = StablePattern::new(2, BTreeMap::from([(p(&[1]), 1)])).unwrap();
        assert!(matches!(free_decompose(&lonely), Err(Error::NotFree { .. })));
    }

    #[test]
    fn json_shape() {
        let a = StablePattern::new(3, BTreeMap::from([(p(&[]), 2), (p(&[1, 1]), 1)])).unwrap();
        let v = a.to_json();
        assert_eq!(v, serde_json::json!({"d": 3, "mult": {"": 2, "1,1": 1}}));
        assert_eq!(StablePattern::from_json(&v).unwrap(), a);
    }
}
