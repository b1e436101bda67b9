//! Direct computations in the full polynomial or exterior algebra on the
//! canonical generators, without eliminating linear relations first.
//!
//! These are slower than the quotient engine and serve as an independent
//! cross-check on small cases.

use rayon::prelude::*;

use super::monomial::{mono_mul, MonoSpace};
use super::ring::RingPresentation;
use crate::error::Result;
use crate::linalg::{Arithmetic, Rat, SparseRowMatrix, SparseVec};
use crate::symcore::{character_table, decompose, ClassFunction, IrrDecomposition};

pub use super::monomial::Mono;

/// All degree-i monomials in the canonical generators, in monomial order.
pub fn monomial_basis(p: &RingPresentation, degree: usize) -> Vec<Mono> {
    MonoSpace::new(p.kind(), p.generators().len(), degree).monos().to_vec()
}

/// The degree-i piece of the ideal in reduced row-echelon form over the
/// columns of `monomial_basis(p, degree)`.
pub fn ideal_echelon(p: &RingPresentation, degree: usize, arith: Arithmetic) -> Result<SparseRowMatrix<Rat>> {
    let space = MonoSpace::new(p.kind(), p.generators().len(), degree);
    echelon_in(p, &space, degree, arith)
}

fn echelon_in(
    p: &RingPresentation,
    space: &MonoSpace,
    degree: usize,
    arith: Arithmetic,
) -> Result<SparseRowMatrix<Rat>> {
    let nvars = p.generators().len();
    let mut rows: Vec<SparseVec<Rat>> = Vec::new();
    let families = [(1usize, p.linear_relations()), (2usize, p.quadratic_relations())];
    for (rdeg, rels) in families {
        if degree < rdeg {
            continue;
        }
        let cofactors = MonoSpace::new(p.kind(), nvars, degree - rdeg);
        for rel in rels {
            for m in cofactors.monos() {
                let mut row: Vec<(u32, Rat)> = Vec::with_capacity(rel.len());
                for (rm, c) in rel {
                    if let Some((neg, prod)) = mono_mul(p.kind(), rm, m) {
                        row.push((space.col(&prod), if neg { -c } else { c.clone() }));
                    }
                }
                rows.push(merge(row));
            }
        }
    }
    arith.echelonize(space.len(), rows)
}

fn merge(mut row: Vec<(u32, Rat)>) -> SparseVec<Rat> {
    row.sort_by_key(|e| e.0);
    let mut out: SparseVec<Rat> = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv = &*lv + &v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

/// |monomials| minus the rank of the ideal in that degree.
pub fn graded_dimension(p: &RingPresentation, degree: usize, arith: Arithmetic) -> Result<usize> {
    let space = MonoSpace::new(p.kind(), p.generators().len(), degree);
    Ok(space.len() - echelon_in(p, &space, degree, arith)?.rank())
}

/// The character of the quotient in one degree as trace(ambient) minus
/// trace(ideal), the latter read off the pivot columns of σ applied to the
/// echelon basis.
pub fn character(p: &RingPresentation, degree: usize, arith: Arithmetic) -> Result<IrrDecomposition> {
    let space = MonoSpace::new(p.kind(), p.generators().len(), degree);
    let ech = echelon_in(p, &space, degree, arith)?;
    let table = character_table(p.n());
    let values: Vec<Rat> = table
        .partitions()
        .par_iter()
        .map(|mu| {
            let perm = mu.representative();
            let mut trace = Rat::ZERO;
            for (col, m) in space.monos().iter().enumerate() {
                if let Some((neg, image)) = p.act_mono(&perm, m) {
                    if space.col(&image) == col as u32 {
                        trace = &trace + &Rat::int(if neg { -1 } else { 1 });
                    }
                }
            }
            for row in ech.rows() {
                let pivot = row[0].0;
                for (c, v) in row {
                    if let Some((neg, image)) = p.act_mono(&perm, space.mono(*c)) {
                        if space.col(&image) == pivot {
                            trace = if neg { &trace + v } else { &trace - v };
                        }
                    }
                }
            }
            trace
        })
        .collect();
    let f = ClassFunction::from_values(p.n(), values.iter().map(Rat::to_big).collect());
    decompose(&f)
}

/// Whether σ maps the ideal's degree-i piece into itself, for every σ in a
/// list of permutations.
pub fn is_stable_under(
    p: &RingPresentation,
    degree: usize,
    perms: &[Vec<usize>],
    arith: Arithmetic,
) -> Result<bool> {
    let space = MonoSpace::new(p.kind(), p.generators().len(), degree);
    let ech = echelon_in(p, &space, degree, arith)?;
    Ok(perms.par_iter().all(|perm| {
        ech.rows().iter().all(|row| {
            let mut image: Vec<(u32, Rat)> = Vec::with_capacity(row.len());
            for (c, v) in row {
                if let Some((neg, m)) = p.act_mono(perm, space.mono(*c)) {
                    image.push((space.col(&m), if neg { -v } else { v.clone() }));
                }
            }
            ech.contains(&crate::linalg::Rationals, &merge(image))
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{build_ring, RingId};
    use crate::Partition;

    #[test]
    fn small_echelons() {
        let a3 = build_ring(RingId::A, 3, None).unwrap();
        assert_eq!(monomial_basis(&a3, 2).len(), 3);
        assert_eq!(ideal_echelon(&a3, 2, Arithmetic::Rational).unwrap().rank(), 1);
        let d3 = build_ring(RingId::D, 3, None).unwrap();
        assert_eq!(monomial_basis(&d3, 1).len(), 3);
        assert_eq!(ideal_echelon(&d3, 1, Arithmetic::Rational).unwrap().rank(), 2);
        let m3 = build_ring(RingId::M, 3, None).unwrap();
        let amb = monomial_basis(&m3, 2).len();
        assert_eq!(ideal_echelon(&m3, 2, Arithmetic::Rational).unwrap().rank(), amb);
        assert_eq!(
            (0..3).map(|d| graded_dimension(&a3, d, Arithmetic::Rational).unwrap()).collect::<Vec<_>>(),
            vec![1, 3, 2]
        );
    }

    #[test]
    fn small_characters() {
        let a3 = build_ring(RingId::A, 3, None).unwrap();
        let deg2 = character(&a3, 2, Arithmetic::Rational).unwrap();
        assert_eq!(deg2, IrrDecomposition::irreducible(Partition::from([2, 1])));
        let d3 = build_ring(RingId::D, 3, None).unwrap();
        let deg1 = character(&d3, 1, Arithmetic::Rational).unwrap();
        assert_eq!(deg1, IrrDecomposition::irreducible(Partition::from([1, 1, 1])));
    }
}
