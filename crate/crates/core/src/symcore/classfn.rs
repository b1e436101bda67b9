use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::character::{character_table, dimension, CharacterTable};
use super::partition::Partition;
use crate::error::{Error, Result};

/// A rational-valued function on the conjugacy classes of S_n, stored in the
/// canonical order of cycle types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    n: usize,
    values: Vec<BigRational>,
}

impl ClassFunction {
    /// Values listed in the order of `partitions(n)`.
    pub fn from_values(n: usize, values: Vec<BigRational>) -> Self {
        assert_eq!(values.len(), character_table(n).partitions().len());
        ClassFunction { n, values }
    }

    pub fn from_integers(n: usize, values: &[i64]) -> Self {
        Self::from_values(
            n,
            values
                .iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect(),
        )
    }

    pub fn irreducible(lambda: &Partition) -> Self {
        let t = character_table(lambda.size());
        let row = t.row(t.index_of(lambda).expect("partition of n"));
        Self::from_integers(lambda.size(), row)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn get(&self, mu: &Partition) -> Option<&BigRational> {
        let idx = character_table(self.n).index_of(mu)?;
        Some(&self.values[idx])
    }

    pub fn pointwise_mul(&self, other: &ClassFunction) -> Result<ClassFunction> {
        check_n(self.n, other.n)?;
        Ok(ClassFunction {
            n: self.n,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }
}

fn check_n(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::SizeMismatch { left: a, right: b })
    }
}

/// ⟨f, g⟩ = (1/n!) Σ_μ |class(μ)| f(μ) g(μ).
pub fn inner_product(f: &ClassFunction, g: &ClassFunction) -> Result<BigRational> {
    check_n(f.n, g.n)?;
    let t = character_table(f.n);
    let mut sum = BigRational::zero();
    for ((a, b), size) in f.values.iter().zip(&g.values).zip(t.class_sizes()) {
        sum += a * b * BigRational::from_integer(size.clone());
    }
    Ok(sum / BigRational::from_integer(t.group_order().clone()))
}

/// ⟨f, χ^λ⟩ for every λ, without any honesty requirement.
pub fn virtual_multiplicities(f: &ClassFunction) -> BTreeMap<Partition, BigRational> {
    let t = character_table(f.n);
    let weighted: Vec<BigRational> = f
        .values
        .iter()
        .zip(t.class_sizes())
        .map(|(v, s)| v * BigRational::from_integer(s.clone()))
        .collect();
    let order = BigRational::from_integer(t.group_order().clone());
    t.partitions()
        .iter()
        .enumerate()
        .filter_map(|(i, lambda)| {
            let mut sum = BigRational::zero();
            for (w, &chi) in weighted.iter().zip(t.row(i)) {
                if chi != 0 {
                    sum += w * BigRational::from_integer(chi.into());
                }
            }
            let m = sum / &order;
            (!m.is_zero()).then(|| (lambda.clone(), m))
        })
        .collect()
}

/// Decomposes an honest character; any fractional or negative multiplicity
/// is reported as an error.
pub fn decompose(f: &ClassFunction) -> Result<IrrDecomposition> {
    let mut mult = BTreeMap::new();
    for (lambda, m) in virtual_multiplicities(f) {
        if !m.is_integer() {
            return Err(Error::NonIntegralMultiplicity {
                partition: lambda,
                value: m.to_string(),
            });
        }
        if m.is_negative() {
            return Err(Error::NegativeMultiplicity {
                partition: lambda,
                value: m.to_string(),
            });
        }
        let m = m.to_integer().to_u64().expect("multiplicity fits in u64");
        mult.insert(lambda, m);
    }
    Ok(IrrDecomposition { n: f.n, mult })
}

/// A representation of S_n given by the multiplicities of its irreducible
/// constituents. Absent keys have multiplicity zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IrrDecomposition {
    n: usize,
    mult: BTreeMap<Partition, u64>,
}

impl IrrDecomposition {
    pub fn zero(n: usize) -> Self {
        IrrDecomposition {
            n,
            mult: BTreeMap::new(),
        }
    }

    pub fn irreducible(lambda: Partition) -> Self {
        let n = lambda.size();
        IrrDecomposition {
            n,
            mult: BTreeMap::from([(lambda, 1)]),
        }
    }

    pub fn trivial(n: usize) -> Self {
        Self::irreducible(Partition::row(n))
    }

    /// Builds from (partition, multiplicity) pairs; every partition must have size `n`.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Partition, u64)>,
    {
        let mut out = Self::zero(n);
        for (p, m) in pairs {
            check_n(n, p.size())?;
            out.add_copies(p, m);
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn multiplicities(&self) -> &BTreeMap<Partition, u64> {
        &self.mult
    }

    pub fn multiplicity(&self, lambda: &Partition) -> u64 {
        self.mult.get(lambda).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.mult.is_empty()
    }

    pub fn add_copies(&mut self, lambda: Partition, copies: u64) {
        debug_assert_eq!(lambda.size(), self.n);
        if copies > 0 {
            *self.mult.entry(lambda).or_insert(0) += copies;
        }
    }

    pub fn dimension(&self) -> u64 {
        self.mult.iter().map(|(p, m)| m * dimension(p)).sum()
    }

    pub fn add(&self, other: &IrrDecomposition) -> Result<IrrDecomposition> {
        check_n(self.n, other.n)?;
        let mut out = self.clone();
        for (p, &m) in &other.mult {
            out.add_copies(p.clone(), m);
        }
        Ok(out)
    }

    /// Componentwise difference; `None` if it would go negative.
    pub fn checked_sub(&self, other: &IrrDecomposition) -> Option<IrrDecomposition> {
        if self.n != other.n {
            return None;
        }
        let mut out = self.clone();
        for (p, &m) in &other.mult {
            let e = out.mult.get_mut(p)?;
            *e = e.checked_sub(m)?;
            if *e == 0 {
                out.mult.remove(p);
            }
        }
        Some(out)
    }

    pub fn scale(&self, k: u64) -> IrrDecomposition {
        if k == 0 {
            return Self::zero(self.n);
        }
        IrrDecomposition {
            n: self.n,
            mult: self.mult.iter().map(|(p, m)| (p.clone(), m * k)).collect(),
        }
    }

    pub fn character(&self) -> ClassFunction {
        let t = character_table(self.n);
        let values = integer_character(self, &t);
        ClassFunction::from_values(
            self.n,
            values
                .into_iter()
                .map(|v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        )
    }

    /// Internal tensor product.
    pub fn kronecker(&self, other: &IrrDecomposition) -> Result<IrrDecomposition> {
        check_n(self.n, other.n)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.n));
        }
        let t = character_table(self.n);
        let a = integer_character(self, &t);
        let b = integer_character(other, &t);
        let product: Vec<BigInt> = a
            .iter()
            .zip(&b)
            .zip(t.class_sizes())
            .map(|((x, y), s)| BigInt::from(*x) * BigInt::from(*y) * s)
            .collect();
        let mut mult = BTreeMap::new();
        for (i, lambda) in t.partitions().iter().enumerate() {
            let mut sum = BigInt::zero();
            for (w, &chi) in product.iter().zip(t.row(i)) {
                if chi != 0 {
                    sum += w * chi;
                }
            }
            if sum.is_zero() {
                continue;
            }
            let (q, r) = num_integer::Integer::div_rem(&sum, t.group_order());
            assert!(
                r.is_zero() && !q.is_negative(),
                "Kronecker product of honest characters is honest"
            );
            mult.insert(lambda.clone(), q.to_u64().expect("multiplicity fits in u64"));
        }
        Ok(IrrDecomposition { n: self.n, mult })
    }

    /// Restriction to S_{n-1} by the branching rule.
    pub fn restrict(&self) -> Result<IrrDecomposition> {
        if self.n == 0 {
            return Err(Error::RestrictFromZero);
        }
        let mut out = Self::zero(self.n - 1);
        for (p, &m) in &self.mult {
            for q in p.remove_box() {
                out.add_copies(q, m);
            }
        }
        Ok(out)
    }

    /// `self ⊆ other` as representations; on failure returns the first
    /// violating constituent.
    pub fn is_subrep_of(&self, other: &IrrDecomposition) -> Result<SubrepCheck> {
        check_n(self.n, other.n)?;
        for (p, &m) in &self.mult {
            let have = other.multiplicity(p);
            if m > have {
                return Ok(SubrepCheck {
                    holds: false,
                    witness: Some(SubrepWitness {
                        partition: p.clone(),
                        left: m,
                        right: have,
                    }),
                });
            }
        }
        Ok(SubrepCheck {
            holds: true,
            witness: None,
        })
    }

    /// JSON object mapping partition strings to multiplicities.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn from_json(n: usize, value: &serde_json::Value) -> Result<Self> {
        let mult: BTreeMap<Partition, u64> = serde_json::from_value(value.clone())?;
        Self::from_pairs(n, mult)
    }
}

impl Serialize for IrrDecomposition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.mult.serialize(serializer)
    }
}

fn integer_character(a: &IrrDecomposition, t: &CharacterTable) -> Vec<i128> {
    let mut values = vec![0i128; t.partitions().len()];
    for (p, &m) in &a.mult {
        let row = t.row(t.index_of(p).expect("partition of n"));
        for (v, &chi) in values.iter_mut().zip(row) {
            *v += m as i128 * chi as i128;
        }
    }
    values
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubrepCheck {
    pub holds: bool,
    pub witness: Option<SubrepWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubrepWitness {
    pub partition: Partition,
    pub left: u64,
    pub right: u64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::partitions;

    fn p<const N: usize>(parts: [usize; N]) -> Partition {
        Partition::from(parts)
    }

    fn rat(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn orthonormal_in_s3() {
        let triv = ClassFunction::irreducible(&p([3]));
        let std = ClassFunction::irreducible(&p([2, 1]));
        assert_eq!(inner_product(&triv, &triv).unwrap(), rat(1));
        assert_eq!(inner_product(&triv, &std).unwrap(), rat(0));
    }

    #[test]
    fn permutation_and_regular_characters() {
        // classes in order [3], [2,1], [1,1,1]
        let perm = ClassFunction::from_integers(3, &[0, 1, 3]);
        let std = ClassFunction::irreducible(&p([2, 1]));
        assert_eq!(inner_product(&perm, &std).unwrap(), rat(1));
        let d = decompose(&perm).unwrap();
        assert_eq!(
            d,
            IrrDecomposition::from_pairs(3, [(p([3]), 1), (p([2, 1]), 1)]).unwrap()
        );
        let regular = ClassFunction::from_integers(3, &[0, 0, 6]);
        let d = decompose(&regular).unwrap();
        assert_eq!(d.multiplicity(&p([3])), 1);
        assert_eq!(d.multiplicity(&p([2, 1])), 2);
        assert_eq!(d.multiplicity(&p([1, 1, 1])), 1);
    }

    #[test]
    fn dishonest_characters_are_rejected() {
        let half = ClassFunction::from_integers(3, &[1, 1, 1])
            .pointwise_mul(&ClassFunction::from_values(
                3,
                vec![BigRational::new(1.into(), 2.into()); 3],
            ))
            .unwrap();
        assert!(matches!(
            decompose(&half),
            Err(Error::NonIntegralMultiplicity { .. })
        ));
        let neg = ClassFunction::from_integers(3, &[-1, -1, -1]);
        assert!(matches!(
            decompose(&neg),
            Err(Error::NegativeMultiplicity { .. })
        ));
    }

    #[test]
    fn kronecker_examples() {
        let std = IrrDecomposition::irreducible(p([2, 1]));
        let sq = std.kronecker(&std).unwrap();
        assert_eq!(
            sq,
            IrrDecomposition::from_pairs(3, [(p([3]), 1), (p([2, 1]), 1), (p([1, 1, 1]), 1)])
                .unwrap()
        );
        let sign = IrrDecomposition::irreducible(p([1, 1, 1]));
        assert_eq!(sign.kronecker(&sign).unwrap(), IrrDecomposition::trivial(3));
        let x = IrrDecomposition::from_pairs(4, [(p([2, 2]), 2), (p([3, 1]), 1)]).unwrap();
        assert_eq!(IrrDecomposition::trivial(4).kronecker(&x).unwrap(), x);
        assert!(IrrDecomposition::trivial(3)
            .kronecker(&IrrDecomposition::trivial(4))
            .is_err());
    }

    #[test]
    fn restriction_examples() {
        assert_eq!(
            IrrDecomposition::trivial(5).restrict().unwrap(),
            IrrDecomposition::trivial(4)
        );
        let r = IrrDecomposition::irreducible(p([4, 1])).restrict().unwrap();
        assert_eq!(
            r,
            IrrDecomposition::from_pairs(4, [(p([4]), 1), (p([3, 1]), 1)]).unwrap()
        );
        assert_eq!(
            IrrDecomposition::irreducible(p([2, 2])).restrict().unwrap(),
            IrrDecomposition::irreducible(p([2, 1]))
        );
        assert!(matches!(
            IrrDecomposition::zero(0).restrict(),
            Err(Error::RestrictFromZero)
        ));
    }

    #[test]
    fn subrep_witness() {
        let tau = p([2]);
        let sigma = p([1, 1]);
        let left = IrrDecomposition::from_pairs(2, [(tau.clone(), 10), (sigma.clone(), 6)]).unwrap();
        let right = IrrDecomposition::from_pairs(2, [(tau.clone(), 8), (sigma, 8)]).unwrap();
        let check = left.is_subrep_of(&right).unwrap();
        assert!(!check.holds);
        let w = check.witness.unwrap();
        assert_eq!((w.partition, w.left, w.right), (tau, 10, 8));
        assert!(left.is_subrep_of(&left).unwrap().holds);
        assert!(IrrDecomposition::zero(2).is_subrep_of(&left).unwrap().holds);
    }

    #[test]
    fn json_shape() {
        let d = IrrDecomposition::from_pairs(3, [(p([3]), 1), (p([2, 1]), 2)]).unwrap();
        assert_eq!(d.to_json().to_string(), r#"{"2,1":2,"3":1}"#);
        assert_eq!(IrrDecomposition::from_json(3, &d.to_json()).unwrap(), d);
        for q in partitions(4) {
            let one = IrrDecomposition::irreducible(q);
            assert_eq!(decompose(&one.character()).unwrap(), one);
        }
    }
}
