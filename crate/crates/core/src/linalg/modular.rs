//! Elimination over Z/p with the free part of the matrix held densely.
//!
//! After the triangular step, every remaining computation lives in the free
//! columns of the triangular set. When there are few of those, flat arrays
//! indexed by free slot beat the general sparse accumulator by a wide margin.

use super::field::{Field, MontgomeryField};
use super::sparse::{finish, triangular_split, SparseRowMatrix, SparseVec};

/// Free column counts up to this are always handled densely.
const DENSE_FREE: usize = 4096;
/// Largest number of dense words the free part may occupy.
const DENSE_WORDS: usize = 1 << 27;

/// Reduced row-echelon form over Z/p, elements in Montgomery form.
pub fn echelonize_mod(
    f: &MontgomeryField,
    ncols: usize,
    rows: Vec<SparseVec<u64>>,
) -> SparseRowMatrix<u64> {
    let (reduced, rest) = triangular_split(f, ncols, rows);
    let free = ncols - reduced.rank();
    let dense = free <= DENSE_FREE || (rest.len() <= 2 * free && free * free.min(rest.len()) <= DENSE_WORDS);
    if rest.is_empty() || !dense {
        return finish(f, reduced, rest);
    }
    finish_dense(f, reduced, rest)
}

fn finish_dense(
    f: &MontgomeryField,
    reduced: SparseRowMatrix<u64>,
    rest: Vec<SparseVec<u64>>,
) -> SparseRowMatrix<u64> {
    let ncols = reduced.ncols();
    let free = reduced.free_columns();
    let mut slot = vec![u32::MAX; ncols];
    for (i, &c) in free.iter().enumerate() {
        slot[c as usize] = i as u32;
    }
    let tails: Vec<(Vec<u32>, Vec<u64>)> = reduced
        .rows()
        .iter()
        .map(|r| r[1..].iter().map(|(c, x)| (slot[*c as usize], *x)).unzip())
        .collect();

    let mut extra = DenseEchelon::new(free.len());
    let mut acc = vec![0u64; free.len()];
    for r in &rest {
        for (c, x) in r {
            match reduced.pivot_index(*c) {
                Some(i) => {
                    let s = f.neg(x);
                    let (idx, vals) = &tails[i];
                    for (j, y) in idx.iter().zip(vals) {
                        let j = *j as usize;
                        acc[j] = f.add(&acc[j], &f.mul(&s, y));
                    }
                }
                None => {
                    let j = slot[*c as usize] as usize;
                    acc[j] = f.add(&acc[j], x);
                }
            }
        }
        extra.insert(f, &mut acc);
        if extra.is_full() {
            break;
        }
    }

    let mut rows: Vec<SparseVec<u64>> = Vec::with_capacity(reduced.rank() + extra.rows.len());
    let one = f.one();
    for (row, (idx, vals)) in reduced.rows().iter().zip(&tails) {
        if !idx.iter().any(|j| extra.row_of[*j as usize] != u32::MAX) {
            rows.push(row.clone());
            continue;
        }
        for (j, y) in idx.iter().zip(vals) {
            acc[*j as usize] = *y;
        }
        extra.reduce(f, &mut acc);
        let mut out = vec![(row[0].0, one)];
        for (j, x) in acc.iter_mut().enumerate() {
            if *x != 0 {
                out.push((free[j], std::mem::take(x)));
            }
        }
        rows.push(out);
    }
    for (q, dense) in extra.pivots.iter().zip(&extra.rows) {
        let mut out = vec![(free[*q as usize], one)];
        out.extend(extra.open.iter().filter(|&&j| dense[j as usize] != 0).map(|&j| (free[j as usize], dense[j as usize])));
        out.sort_unstable_by_key(|e| e.0);
        rows.push(out);
    }
    rows.sort_unstable_by_key(|r| r[0].0);
    SparseRowMatrix::from_reduced_rows(ncols, rows)
}

/// Reduced echelon basis of vectors of a fixed length, stored densely.
struct DenseEchelon {
    rows: Vec<Vec<u64>>,
    pivots: Vec<u32>,
    row_of: Vec<u32>,
    /// Non-pivot slots in increasing order.
    open: Vec<u32>,
}

impl DenseEchelon {
    fn new(len: usize) -> Self {
        DenseEchelon {
            rows: Vec::new(),
            pivots: Vec::new(),
            row_of: vec![u32::MAX; len],
            open: (0..len as u32).collect(),
        }
    }

    fn is_full(&self) -> bool {
        self.open.is_empty()
    }

    /// Clears the pivot slots of `v` using the basis; afterwards `v` is
    /// supported on open slots.
    fn reduce(&self, f: &MontgomeryField, v: &mut [u64]) {
        for (row, &q) in self.rows.iter().zip(&self.pivots) {
            let x = std::mem::take(&mut v[q as usize]);
            if x == 0 {
                continue;
            }
            let s = f.neg(&x);
            for &j in &self.open {
                let j = j as usize;
                v[j] = f.add(&v[j], &f.mul(&s, &row[j]));
            }
        }
    }

    /// Adds `v` to the span and leaves `v` zeroed.
    fn insert(&mut self, f: &MontgomeryField, v: &mut [u64]) {
        self.reduce(f, v);
        let Some(pos) = self.open.iter().position(|&j| v[j as usize] != 0) else {
            return;
        };
        let q = self.open.remove(pos);
        let inv = f.inv(&v[q as usize]);
        v[q as usize] = 0;
        for &j in &self.open {
            let j = j as usize;
            v[j] = f.mul(&v[j], &inv);
        }
        for row in &mut self.rows {
            let t = std::mem::take(&mut row[q as usize]);
            if t == 0 {
                continue;
            }
            let s = f.neg(&t);
            for &j in &self.open {
                let j = j as usize;
                row[j] = f.add(&row[j], &f.mul(&s, &v[j]));
            }
        }
        let mut dense = vec![0u64; v.len()];
        for &j in &self.open {
            dense[j as usize] = std::mem::take(&mut v[j as usize]);
        }
        self.row_of[q as usize] = self.rows.len() as u32;
        self.rows.push(dense);
        self.pivots.push(q);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sparse::echelonize;

    #[test]
    fn dense_finish_matches_sparse_path() {
        let f = MontgomeryField::new(1_000_000_007);
        let mut state = 99u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state >> 33
        };
        for trial in 0..40 {
            let ncols = 5 + trial % 13;
            let nrows = 3 + (trial * 5) % 17;
            let rows: Vec<SparseVec<u64>> = (0..nrows)
                .map(|_| {
                    (0..ncols as u32)
                        .filter_map(|c| {
                            let v = next() % 5;
                            (next() % 3 == 0 && v != 0).then(|| (c, f.from_canonical(v)))
                        })
                        .collect()
                })
                .collect();
            let a = echelonize_mod(&f, ncols, rows.clone());
            let b = echelonize(&f, ncols, rows);
            assert_eq!(a.rows(), b.rows(), "trial {trial}");
        }
    }
}
