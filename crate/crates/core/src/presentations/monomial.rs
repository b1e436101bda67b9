use std::collections::HashMap;

use serde::{Deserialize, Serialize};

/// A monomial as the sorted list of its variable indices.
pub type Mono = Vec<u32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Exterior,
    Polynomial,
}

/// Sorts a word in the generators. Returns the monomial and whether the sign
/// flipped, or `None` if the word vanishes (a repeated exterior generator).
pub fn normalize_word(kind: AlgebraKind, mut word: Vec<u32>) -> Option<(bool, Mono)> {
    match kind {
        AlgebraKind::Polynomial => {
            word.sort_unstable();
            Some((false, word))
        }
        AlgebraKind::Exterior => {
            let mut neg = false;
            // insertion sort, counting transpositions
            for i in 1..word.len() {
                let mut j = i;
                while j > 0 && word[j - 1] > word[j] {
                    word.swap(j - 1, j);
                    neg = !neg;
                    j -= 1;
                }
                if j > 0 && word[j - 1] == word[j] {
                    return None;
                }
            }
            Some((neg, word))
        }
    }
}

/// The product a·b of two sorted monomials.
pub fn mono_mul(kind: AlgebraKind, a: &[u32], b: &[u32]) -> Option<(bool, Mono)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut neg = false;
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] <= b[j]) {
            if kind == AlgebraKind::Exterior && j < b.len() && a[i] == b[j] {
                return None;
            }
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] moves left past the a[i..] still pending
            if kind == AlgebraKind::Exterior && (a.len() - i) % 2 == 1 {
                neg = !neg;
            }
            out.push(b[j]);
            j += 1;
        }
    }
    Some((neg, out))
}

/// All degree-`degree` monomials in `nvars` variables, in lexicographic order
/// of their sorted index tuples.
pub fn monomials(kind: AlgebraKind, nvars: usize, degree: usize) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(degree);
    fill(kind, nvars as u32, degree, 0, &mut current, &mut out);
    out
}

fn fill(kind: AlgebraKind, nvars: u32, left: usize, start: u32, current: &mut Mono, out: &mut Vec<Mono>) {
    if left == 0 {
        out.push(current.clone());
        return;
    }
    for v in start..nvars {
        current.push(v);
        let next = match kind {
            AlgebraKind::Exterior => v + 1,
            AlgebraKind::Polynomial => v,
        };
        fill(kind, nvars, left - 1, next, current, out);
        current.pop();
    }
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

pub fn monomial_count(kind: AlgebraKind, nvars: usize, degree: usize) -> u128 {
    match kind {
        AlgebraKind::Exterior => binomial(nvars as u128, degree as u128),
        AlgebraKind::Polynomial => {
            if nvars == 0 {
                (degree == 0) as u128
            } else {
                binomial((nvars + degree - 1) as u128, degree as u128)
            }
        }
    }
}

/// The monomials of one degree with their column indices.
#[derive(Clone, Debug)]
pub struct MonoSpace {
    monos: Vec<Mono>,
    index: HashMap<Mono, u32>,
}

impl MonoSpace {
    pub fn new(kind: AlgebraKind, nvars: usize, degree: usize) -> Self {
        let monos = monomials(kind, nvars, degree);
        let index = monos
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u32))
            .collect();
        MonoSpace { monos, index }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn monos(&self) -> &[Mono] {
        &self.monos
    }

    pub fn mono(&self, col: u32) -> &Mono {
        &self.monos[col as usize]
    }

    pub fn col(&self, m: &[u32]) -> u32 {
        self.index[m]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(monomials(AlgebraKind::Exterior, 3, 2).len(), 3);
        assert_eq!(monomials(AlgebraKind::Polynomial, 3, 2).len(), 6);
        assert_eq!(monomial_count(AlgebraKind::Exterior, 45, 3), 14190);
        for k in [AlgebraKind::Exterior, AlgebraKind::Polynomial] {
            for n in 0..6 {
                for d in 0..5 {
                    assert_eq!(monomials(k, n, d).len() as u128, monomial_count(k, n, d));
                }
            }
        }
    }

    #[test]
    fn lex_order() {
        let m = monomials(AlgebraKind::Polynomial, 3, 2);
        let mut sorted = m.clone();
        sorted.sort();
        assert_eq!(m, sorted);
        assert_eq!(m[0], vec![0, 0]);
    }

    #[test]
    fn exterior_signs() {
        let k = AlgebraKind::Exterior;
        assert_eq!(mono_mul(k, &[1], &[0]), Some((true, vec![0, 1])));
        assert_eq!(mono_mul(k, &[0], &[1]), Some((false, vec![0, 1])));
        assert_eq!(mono_mul(k, &[0, 2], &[1]), Some((true, vec![0, 1, 2])));
        assert_eq!(mono_mul(k, &[1, 2], &[0]), Some((false, vec![0, 1, 2])));
        assert_eq!(mono_mul(k, &[1, 2], &[2]), None);
        assert_eq!(normalize_word(k, vec![2, 0, 1]), Some((false, vec![0, 1, 2])));
        assert_eq!(normalize_word(k, vec![1, 0, 2]), Some((true, vec![0, 1, 2])));
        assert_eq!(normalize_word(k, vec![1, 0, 1]), None);
        // agrees with normalize_word on concatenations
        for a in monomials(k, 5, 2) {
            for b in monomials(k, 5, 2) {
                let word = [a.clone(), b.clone()].concat();
                assert_eq!(mono_mul(k, &a, &b), normalize_word(k, word));
            }
        }
    }
}
