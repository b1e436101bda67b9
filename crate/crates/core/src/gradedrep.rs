//! Graded representations and equivariant log-concavity.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symcore::{IrrDecomposition, Partition, SubrepWitness};

/// A finite-dimensional graded representation of S_n. Missing degrees are
/// the zero representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRep {
    n: usize,
    pieces: BTreeMap<usize, IrrDecomposition>,
}

impl GradedRep {
    pub fn zero(n: usize) -> Self {
        GradedRep {
            n,
            pieces: BTreeMap::new(),
        }
    }

    pub fn from_pieces<I>(n: usize, pieces: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, IrrDecomposition)>,
    {
        let mut out = Self::zero(n);
        for (d, piece) in pieces {
            out.set(d, piece)?;
        }
        Ok(out)
    }

    /// The exterior algebra on one generator: trivial in degrees 0 and 1.
    pub fn exterior_line(n: usize) -> Self {
        let triv = IrrDecomposition::trivial(n);
        Self::from_pieces(n, [(0, triv.clone()), (1, triv)]).expect("same n")
    }

    /// Trivial in degree 0 and V_[n-1,1] in degree 1.
    pub fn sphere_points(n: usize) -> Self {
        let mut out = Self::zero(n);
        out.set(0, IrrDecomposition::trivial(n)).expect("same n");
        if n >= 2 {
            out.set(1, IrrDecomposition::irreducible(Partition::from([n - 1, 1])))
                .expect("same n");
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn set(&mut self, degree: usize, piece: IrrDecomposition) -> Result<()> {
        if piece.n() != self.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: piece.n(),
            });
        }
        if piece.is_zero() {
            self.pieces.remove(&degree);
        } else {
            self.pieces.insert(degree, piece);
        }
        Ok(())
    }

    pub fn piece(&self, degree: usize) -> IrrDecomposition {
        self.pieces
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| IrrDecomposition::zero(self.n))
    }

    pub fn pieces(&self) -> &BTreeMap<usize, IrrDecomposition> {
        &self.pieces
    }

    /// Largest degree with a nonzero piece; `None` for the zero representation.
    pub fn top(&self) -> Option<usize> {
        self.pieces.keys().next_back().copied()
    }

    pub fn dimensions(&self) -> Vec<u64> {
        match self.top() {
            None => Vec::new(),
            Some(top) => (0..=top).map(|d| self.piece(d).dimension()).collect(),
        }
    }

    pub fn total_dimension(&self) -> u64 {
        self.pieces.values().map(IrrDecomposition::dimension).sum()
    }

    /// Pieces up to and including `degree`.
    pub fn truncate(&self, degree: usize) -> GradedRep {
        GradedRep {
            n: self.n,
            pieces: self
                .pieces
                .range(..=degree)
                .map(|(d, p)| (*d, p.clone()))
                .collect(),
        }
    }

    pub fn restrict(&self) -> Result<GradedRep> {
        let mut out = Self::zero(self.n.checked_sub(1).ok_or(Error::RestrictFromZero)?);
        for (d, p) in &self.pieces {
            out.set(*d, p.restrict()?)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let n = value["n"]
            .as_u64()
            .ok_or_else(|| Error::InvalidParameter("graded rep without n".into()))?
            as usize;
        let mut out = Self::zero(n);
        if let Some(pieces) = value["pieces"].as_object() {
            for (k, v) in pieces {
                let d = k
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad degree {k:?}")))?;
                out.set(d, IrrDecomposition::from_json(n, v)?)?;
            }
        }
        Ok(out)
    }
}

impl Serialize for GradedRep {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            n: usize,
            pieces: &'a BTreeMap<usize, IrrDecomposition>,
        }
        Repr {
            n: self.n,
            pieces: &self.pieces,
        }
        .serialize(serializer)
    }
}

/// (V ⊗ W)^m = ⊕_p V^p ⊗ W^{m-p}.
pub fn graded_tensor(v: &GradedRep, w: &GradedRep) -> Result<GradedRep> {
    if v.n != w.n {
        return Err(Error::SizeMismatch {
            left: v.n,
            right: w.n,
        });
    }
    let mut pieces: BTreeMap<usize, IrrDecomposition> = BTreeMap::new();
    for (p, a) in &v.pieces {
        for (q, b) in &w.pieces {
            let prod = a.kronecker(b)?;
            let slot = pieces
                .entry(p + q)
                .or_insert_with(|| IrrDecomposition::zero(v.n));
            *slot = slot.add(&prod)?;
        }
    }
    GradedRep::from_pieces(v.n, pieces)
}

/// Whether `a` is isomorphic to a subrepresentation of `b`, with a violating
/// constituent on failure.
pub fn is_subrep(a: &IrrDecomposition, b: &IrrDecomposition) -> Result<crate::symcore::SubrepCheck> {
    a.is_subrep_of(b)
}

/// One inclusion V^i ⊗ V^l ⊂ V^j ⊗ V^k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElcLink {
    pub left: (usize, usize),
    pub right: (usize, usize),
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SubrepWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElcVerdict {
    pub degree: usize,
    pub links: Vec<ElcLink>,
}

impl ElcVerdict {
    pub fn holds(&self) -> bool {
        self.links.iter().all(|l| l.holds)
    }

    /// The first failing link's witness.
    pub fn witness(&self) -> Option<&SubrepWitness> {
        self.links.iter().find_map(|l| l.witness.as_ref())
    }
}

fn link(v: &GradedRep, left: (usize, usize), right: (usize, usize)) -> ElcLink {
    let a = v.piece(left.0).kronecker(&v.piece(left.1)).expect("same n");
    let b = v.piece(right.0).kronecker(&v.piece(right.1)).expect("same n");
    let check = a.is_subrep_of(&b).expect("same n");
    ElcLink {
        left,
        right,
        holds: check.holds,
        witness: check.witness,
    }
}

/// The chain V^0⊗V^m ⊂ V^1⊗V^{m-1} ⊂ … up to the middle term.
pub fn check_strong_elc(v: &GradedRep, m: usize) -> ElcVerdict {
    let links = (0..m / 2)
        .map(|i| link(v, (i, m - i), (i + 1, m - i - 1)))
        .collect();
    ElcVerdict { degree: m, links }
}

/// Every pair i ≤ j ≤ k ≤ l with j + k = i + l = m, checked directly.
pub fn check_strong_elc_quadruples(v: &GradedRep, m: usize) -> ElcVerdict {
    let mut links = Vec::new();
    for i in 0..=m / 2 {
        for j in i + 1..=m / 2 {
            links.push(link(v, (i, m - i), (j, m - j)));
        }
    }
    ElcVerdict { degree: m, links }
}

/// V^{i-1} ⊗ V^{i+1} ⊂ V^i ⊗ V^i for each i from 1 to the top degree.
pub fn check_weak_elc(v: &GradedRep) -> Vec<ElcVerdict> {
    let top = v.top().unwrap_or(0);
    (1..=top)
        .map(|i| ElcVerdict {
            degree: 2 * i,
            links: vec![link(v, (i - 1, i + 1), (i, i))],
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s2(tau: u64, sigma: u64) -> IrrDecomposition {
        IrrDecomposition::from_pairs(2, [(Partition::from([2]), tau), (Partition::from([1, 1]), sigma)])
            .unwrap()
    }

    fn weak_example() -> GradedRep {
        GradedRep::from_pieces(2, [(0, s2(1, 3)), (1, s2(2, 2)), (2, s2(2, 2)), (3, s2(1, 3))]).unwrap()
    }

    #[test]
    fn weak_but_not_strong() {
        let v = weak_example();
        assert!(check_weak_elc(&v).iter().all(ElcVerdict::holds));
        let verdict = check_strong_elc(&v, 3);
        assert!(!verdict.holds());
        let w = verdict.witness().unwrap();
        assert_eq!((w.partition.clone(), w.left, w.right), (Partition::from([2]), 10, 8));
    }

    #[test]
    fn tensor_breaks_weak() {
        let v = weak_example();
        let vw = graded_tensor(&v, &GradedRep::exterior_line(2)).unwrap();
        let verdicts = check_weak_elc(&vw);
        assert!(verdicts[0].holds());
        assert!(!verdicts[1].holds());
        let w = verdicts[1].witness().unwrap();
        assert_eq!((w.left, w.right), (34, 32));
    }

    #[test]
    fn degenerate_cases() {
        let v = GradedRep::from_pieces(3, [(0, IrrDecomposition::trivial(3))]).unwrap();
        for m in 0..6 {
            assert!(check_strong_elc(&v, m).holds());
        }
        assert!(check_strong_elc(&weak_example(), 0).links.is_empty());
        let unit = GradedRep::from_pieces(2, [(0, s2(1, 0))]).unwrap();
        assert_eq!(graded_tensor(&weak_example(), &unit).unwrap(), weak_example());
    }

    #[test]
    fn degree_additivity() {
        let a = GradedRep::from_pieces(2, [(1, s2(1, 1))]).unwrap();
        let b = GradedRep::from_pieces(2, [(2, s2(0, 1))]).unwrap();
        let t = graded_tensor(&a, &b).unwrap();
        assert_eq!(t.pieces().keys().copied().collect::<Vec<_>>(), vec![3]);
        assert_eq!(t.piece(3), s2(1, 1));
    }

    #[test]
    fn json_round_trip() {
        let v = weak_example();
        let j = v.to_json();
        assert_eq!(j["pieces"]["1"]["2"], 2);
        assert_eq!(GradedRep::from_json(&j).unwrap(), v);
    }
}
