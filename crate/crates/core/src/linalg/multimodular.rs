use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::field::{Field, MontgomeryField, PrimeField, Rationals, Residues};
use super::rat::Rat;
use super::modular::echelonize_mod;
use super::sparse::{SparseRowMatrix, SparseVec};
use crate::error::{Error, Result};

/// The largest primes below 2^62, in decreasing order.
pub const PRIMES: [u64; 24] = [
    0x3fffffffffffffc7,
    0x3fffffffffffffa9,
    0x3fffffffffffff8b,
    0x3fffffffffffff71,
    0x3fffffffffffff67,
    0x3fffffffffffff59,
    0x3fffffffffffff55,
    0x3fffffffffffff3d,
    0x3fffffffffffff35,
    0x3ffffffffffffeef,
    0x3ffffffffffffee1,
    0x3ffffffffffffec3,
    0x3ffffffffffffe45,
    0x3ffffffffffffe1d,
    0x3ffffffffffffe11,
    0x3ffffffffffffdc1,
    0x3ffffffffffffdbb,
    0x3ffffffffffffda5,
    0x3ffffffffffffd87,
    0x3ffffffffffffd69,
    0x3ffffffffffffd03,
    0x3ffffffffffffcfb,
    0x3ffffffffffffcf7,
    0x3ffffffffffffce9,
];

struct Image {
    p: u64,
    rows: Vec<SparseVec<u64>>,
}

impl Image {
    fn pivots(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r[0].0).collect()
    }
}

fn image(p: u64, ncols: usize, rows: &[SparseVec<Rat>]) -> Option<Image> {
    let f = MontgomeryField::new(p);
    let mut residues = Residues::new(p);
    let mut reduced = Vec::with_capacity(rows.len());
    for r in rows {
        let mut v = Vec::with_capacity(r.len());
        for (c, x) in r {
            let y = residues.of(x)?;
            if y != 0 {
                v.push((*c, f.from_canonical(y)));
            }
        }
        reduced.push(v);
    }
    Some(Image {
        p,
        rows: echelonize_mod(&f, ncols, reduced)
            .into_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|(c, x)| (c, f.to_canonical(x))).collect())
            .collect(),
    })
}

/// Reduced row-echelon form over Q computed from images modulo several
/// primes, combined by Chinese remaindering and rational reconstruction.
///
/// A candidate R with pivot columns P is accepted once it is shown that
/// every input row v satisfies v_j = Σ_{c∈P} v_c R_cj on the free columns.
/// Cleared of denominators each such difference is an integer of known
/// size, and it vanishes modulo every prime whose image equals R mod p, so
/// enough agreeing primes prove it zero. When the bound is out of reach the
/// identity is checked directly. Since the rank over Q is at least the rank
/// modulo any prime, the two spans are then equal.
pub fn echelonize_multimodular(
    ncols: usize,
    rows: &[SparseVec<Rat>],
) -> Result<SparseRowMatrix<Rat>> {
    let mut images: Vec<Image> = Vec::new();
    let mut next = 0;
    let mut need: usize = 1;
    loop {
        let missing = need.saturating_sub(good_images(&images).len());
        let take = missing.min(PRIMES.len() - next);
        if missing > take {
            return Err(Error::ReconstructionFailed { primes: next });
        }
        let fresh: Vec<Option<Image>> = PRIMES[next..next + take]
            .par_iter()
            .map(|&p| image(p, ncols, rows))
            .collect();
        next += take;
        images.extend(fresh.into_iter().flatten());
        let good = good_images(&images);
        if good.len() < need {
            continue;
        }
        if let Some(candidate) = reconstruct(ncols, &good[..need]) {
            if certify(&candidate, ncols, rows, &mut images, &mut next) {
                return Ok(candidate);
            }
        }
        need *= 2;
    }
}

/// Decides whether `candidate` spans exactly the rows, computing further
/// images when their agreement is the cheaper proof.
fn certify(
    candidate: &SparseRowMatrix<Rat>,
    ncols: usize,
    rows: &[SparseVec<Rat>],
    images: &mut Vec<Image>,
    next: &mut usize,
) -> bool {
    let pivots: Vec<u32> = candidate.pivots().collect();
    let needed = residue_bits(candidate, rows);
    let mut have = 0.0;
    let mut seen = 0;
    loop {
        while seen < images.len() {
            let im = &images[seen];
            seen += 1;
            let profile = im.pivots();
            if profile == pivots {
                if !agrees(candidate, im) {
                    return false;
                }
                have += (im.p as f64).log2().floor();
            } else if (profile.len(), &pivots) > (pivots.len(), &profile) {
                // a strictly better image: the candidate has the wrong shape
                return false;
            }
        }
        if needed.is_some_and(|b| have > b) {
            return true;
        }
        let reachable = needed.is_some_and(|b| have + 61.0 * (PRIMES.len() - *next) as f64 > b);
        if !reachable {
            return spans_all(candidate, rows);
        }
        images.extend(image(PRIMES[*next], ncols, rows));
        *next += 1;
    }
}

/// Bits in an upper bound for |L (v_j − Σ_c v_c R_cj)| over all rows v and
/// free columns j, where L clears every denominator involved; `None` when
/// the bound does not fit in a float.
fn residue_bits(m: &SparseRowMatrix<Rat>, rows: &[SparseVec<Rat>]) -> Option<f64> {
    let mut dens: HashSet<BigInt> = HashSet::new();
    let mut small: HashSet<i64> = HashSet::new();
    let mut largest: Vec<f64> = Vec::with_capacity(m.rank());
    for r in m.rows() {
        let mut top = f64::NEG_INFINITY;
        for (_, x) in &r[1..] {
            match x {
                Rat::Small(_, d) => {
                    small.insert(*d);
                }
                Rat::Big(_) => {
                    dens.insert(x.denom());
                }
            }
            top = top.max(log2_abs(x));
        }
        largest.push(top);
    }
    dens.extend(small.into_iter().map(BigInt::from));
    let lcm_r = dens.iter().fold(BigInt::one(), |acc, d| acc.lcm(d));
    let log_r = lcm_r.bits() as f64;
    let mut worst = f64::NEG_INFINITY;
    for v in rows {
        let mut den = 1u128;
        let mut log_v = 0.0;
        let mut top = f64::NEG_INFINITY;
        for (c, x) in v {
            match x {
                Rat::Small(_, d) => {
                    let d = *d as u128;
                    match (den / den.gcd(&d)).checked_mul(d) {
                        Some(l) => den = l,
                        None => log_v += (d as f64).log2(),
                    }
                }
                Rat::Big(_) => log_v += x.denom().bits() as f64,
            }
            let term = match m.pivot_index(*c) {
                Some(i) => log2_abs(x) + largest[i],
                None => log2_abs(x),
            };
            top = top.max(term);
        }
        let bits = log_v + (den as f64).log2() + log_r + top + ((v.len() + 1) as f64).log2();
        worst = worst.max(bits);
    }
    (worst.is_finite() || worst == f64::NEG_INFINITY).then_some(worst.max(0.0) + 2.0)
}

/// An upper bound for log2 |x|, −∞ at zero.
fn log2_abs(x: &Rat) -> f64 {
    match x {
        Rat::Small(0, _) => f64::NEG_INFINITY,
        Rat::Small(n, d) => (n.unsigned_abs() as f64).log2() - (*d as f64).log2() + 1e-9,
        Rat::Big(_) => x.numer().bits() as f64 - (x.denom().bits() as f64 - 1.0),
    }
}

/// Whether every row lies in the span of the reduced matrix `m`.
///
/// Rows of `m` are scaled to integers so that most checks run in checked
/// 128-bit arithmetic; anything that overflows is redone over Q.
fn spans_all(m: &SparseRowMatrix<Rat>, rows: &[SparseVec<Rat>]) -> bool {
    let scaled: Vec<Option<(i128, Vec<(u32, i128)>)>> = m.rows().iter().map(|r| integral(r)).collect();
    let mut acc = vec![0i128; m.ncols()];
    let mut touched: Vec<u32> = Vec::new();
    rows.iter().all(|r| {
        let fast = (|| {
            let (_, ints) = integral(r)?;
            let mut den = 1i128;
            for (c, _) in &ints {
                if let Some(i) = m.pivot_index(*c) {
                    let (d, _) = scaled[i].as_ref()?;
                    den = lcm(den, *d)?;
                }
            }
            for (c, x) in &ints {
                match m.pivot_index(*c) {
                    None => add_to(&mut acc, &mut touched, *c, x.checked_mul(den)?)?,
                    Some(i) => {
                        let (d, row) = scaled[i].as_ref()?;
                        let s = x.checked_mul(den / d)?;
                        for (c2, y) in &row[1..] {
                            add_to(&mut acc, &mut touched, *c2, s.checked_mul(*y)?.checked_neg()?)?;
                        }
                    }
                }
            }
            Some(())
        })();
        let zero = fast.is_some() && touched.iter().all(|&c| acc[c as usize] == 0);
        for &c in &touched {
            acc[c as usize] = 0;
        }
        touched.clear();
        if fast.is_some() {
            zero
        } else {
            m.contains(&Rationals, r)
        }
    })
}

fn add_to(acc: &mut [i128], touched: &mut Vec<u32>, c: u32, v: i128) -> Option<()> {
    let slot = &mut acc[c as usize];
    if *slot == 0 {
        touched.push(c);
    }
    *slot = slot.checked_add(v)?;
    Some(())
}

fn lcm(a: i128, b: i128) -> Option<i128> {
    (a / a.gcd(&b)).checked_mul(b)
}

/// A row as (d, integers) with row = integers / d.
fn integral(r: &[(u32, Rat)]) -> Option<(i128, Vec<(u32, i128)>)> {
    let mut den = 1i128;
    for (_, x) in r {
        match x {
            Rat::Small(_, d) => den = lcm(den, *d as i128)?,
            Rat::Big(_) => return None,
        }
    }
    let ints = r
        .iter()
        .map(|(c, x)| match x {
            Rat::Small(n, d) => Some((*c, (*n as i128).checked_mul(den / *d as i128)?)),
            Rat::Big(_) => None,
        })
        .collect::<Option<Vec<_>>>()?;
    Some((den, ints))
}

/// The images sharing the best pivot profile: maximal rank, then
/// lexicographically earliest pivots.
fn good_images(images: &[Image]) -> Vec<&Image> {
    let Some(best) = images
        .iter()
        .map(Image::pivots)
        .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)))
    else {
        return Vec::new();
    };
    images.iter().filter(|im| im.pivots() == best).collect()
}

fn agrees(candidate: &SparseRowMatrix<Rat>, im: &Image) -> bool {
    let mut residues = Residues::new(im.p);
    candidate.rows().iter().zip(&im.rows).all(|(q, r)| {
        let mut reduced = q.iter().filter_map(|(c, x)| match residues.of(x) {
            Some(0) => None,
            v => Some(v.map(|v| (*c, v))),
        });
        r.iter().all(|e| reduced.next() == Some(Some(*e))) && reduced.next().is_none()
    })
}

fn reconstruct(ncols: usize, good: &[&Image]) -> Option<SparseRowMatrix<Rat>> {
    match good {
        [a] => return reconstruct_single(ncols, a),
        [a, b] => return reconstruct_pair(ncols, a, b),
        _ => {}
    }
    let modulus: BigInt = good.iter().map(|im| BigInt::from(im.p)).product();
    let bound = (&modulus / 2u32).sqrt();
    let mut out = Vec::with_capacity(good[0].rows.len());
    for i in 0..good[0].rows.len() {
        let mut residues: BTreeMap<u32, Vec<(u64, u64)>> = BTreeMap::new();
        for im in good {
            for (c, v) in &im.rows[i] {
                residues.entry(*c).or_default().push((im.p, *v));
            }
        }
        let mut row = Vec::with_capacity(residues.len());
        for (c, rs) in residues {
            let value = crt(&rs, good);
            let q = rational_reconstruction(&value, &modulus, &bound)?;
            if !q.is_zero() {
                row.push((c, Rat::from_big(q)));
            }
        }
        out.push(row);
    }
    Some(SparseRowMatrix::from_reduced_rows(ncols, out))
}

fn reconstruct_single(ncols: usize, a: &Image) -> Option<SparseRowMatrix<Rat>> {
    let m = a.p as u128;
    let bound = isqrt(m / 2);
    let rows = a
        .rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|(c, x)| Some((*c, reconstruct_u128(*x as u128, m, bound)?)))
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    Some(SparseRowMatrix::from_reduced_rows(ncols, rows))
}

/// Two-prime reconstruction in 128-bit arithmetic.
fn reconstruct_pair(ncols: usize, a: &Image, b: &Image) -> Option<SparseRowMatrix<Rat>> {
    let fb = PrimeField::new(b.p);
    let inv = fb.inv(&(a.p % b.p));
    let m = a.p as u128 * b.p as u128;
    let bound = isqrt(m / 2);
    let lift = |x: u64, y: u64| -> Option<Rat> {
        // v ≡ x (mod a.p), v ≡ y (mod b.p)
        let k = fb.mul(&fb.sub(&y, &(x % b.p)), &inv);
        let v = x as u128 + a.p as u128 * k as u128;
        reconstruct_u128(v, m, bound)
    };
    let mut out = Vec::with_capacity(a.rows.len());
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        let mut row = Vec::with_capacity(ra.len().max(rb.len()));
        let (mut i, mut j) = (0, 0);
        while i < ra.len() || j < rb.len() {
            let (c, x, y) = if j == rb.len() || (i < ra.len() && ra[i].0 < rb[j].0) {
                i += 1;
                (ra[i - 1].0, ra[i - 1].1, 0)
            } else if i == ra.len() || rb[j].0 < ra[i].0 {
                j += 1;
                (rb[j - 1].0, 0, rb[j - 1].1)
            } else {
                i += 1;
                j += 1;
                (ra[i - 1].0, ra[i - 1].1, rb[j - 1].1)
            };
            let q = lift(x, y)?;
            if !q.is_zero() {
                row.push((c, q));
            }
        }
        out.push(row);
    }
    Some(SparseRowMatrix::from_reduced_rows(ncols, out))
}

fn isqrt(v: u128) -> u128 {
    let mut x = (v as f64).sqrt() as u128;
    while x * x > v {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= v {
        x += 1;
    }
    x
}

fn reconstruct_u128(a: u128, m: u128, bound: u128) -> Option<Rat> {
    let (mut r0, mut r1) = (m, a % m);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q as i128 * t1);
    }
    let d = t1.unsigned_abs();
    if d == 0 || d > bound || r1.gcd(&d) != 1 {
        return None;
    }
    let n = r1 as i64;
    let d = d as i64;
    Some(if t1 < 0 { Rat::new(-n, d) } else { Rat::new(n, d) })
}

/// The residue modulo the product of all good primes; primes missing from
/// `rs` contribute zero.
fn crt(rs: &[(u64, u64)], good: &[&Image]) -> BigInt {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for im in good {
        let r = rs
            .iter()
            .find(|(p, _)| *p == im.p)
            .map(|(_, v)| *v)
            .unwrap_or(0);
        let p = BigInt::from(im.p);
        // x' = x + m·((r - x)·m^{-1} mod p)
        let f = PrimeField::new(im.p);
        let xm = f.reduce_int(&x);
        let mm = f.reduce_int(&m);
        let t = f.mul(&f.sub(&r, &xm), &f.inv(&mm));
        x += &m * BigInt::from(t);
        m *= p;
    }
    x
}

/// Finds n/d ≡ a (mod m) with |n|, |d| ≤ bound, if one exists.
pub fn rational_reconstruction(a: &BigInt, m: &BigInt, bound: &BigInt) -> Option<BigRational> {
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sparse::echelonize;
    use num_traits::ToPrimitive;

    #[test]
    fn reconstruction_recovers_small_fractions() {
        let m = BigInt::from(PRIMES[0]) * BigInt::from(PRIMES[1]);
        let bound = (&m / 2u32).sqrt();
        for (n, d) in [(1i64, 3i64), (-5, 7), (0, 1), (123456789, 1000003)] {
            let q = BigRational::new(n.into(), d.into());
            let eg = BigInt::from(d).extended_gcd(&m);
            let a = (BigInt::from(n) * eg.x).mod_floor(&m);
            assert_eq!(rational_reconstruction(&a, &m, &bound), Some(q));
        }
    }

    #[test]
    fn pair_reconstruction_matches_bigint() {
        let m = PRIMES[0] as u128 * PRIMES[1] as u128;
        let mb = BigInt::from(m);
        let bound = isqrt(m / 2);
        assert_eq!(BigInt::from(bound), (&mb / 2u32).sqrt());
        for (n, d) in [(1i64, 3i64), (-5, 7), (0, 1), (123456789, 1000003), (-(1 << 60), 3)] {
            let eg = BigInt::from(d).extended_gcd(&mb);
            let a = (BigInt::from(n) * eg.x).mod_floor(&mb);
            let fast = reconstruct_u128(a.to_u128().unwrap(), m, bound);
            assert_eq!(fast.map(|r| r.to_big()), rational_reconstruction(&a, &mb, &BigInt::from(bound)));
        }
    }

    #[test]
    fn agrees_with_rational_elimination() {
        let rows: Vec<SparseVec<Rat>> = vec![
            vec![(0, Rat::int(3)), (1, Rat::int(1)), (3, Rat::new(1, 2))],
            vec![(0, Rat::int(1)), (2, Rat::int(-7))],
            vec![(1, Rat::int(5)), (2, Rat::int(2)), (3, Rat::int(1))],
            vec![(0, Rat::int(4)), (1, Rat::int(1)), (2, Rat::int(-7)), (3, Rat::new(1, 2))],
        ];
        let exact = echelonize(&Rationals, 4, rows.clone());
        let mm = echelonize_multimodular(4, &rows).unwrap();
        assert_eq!(exact.rows(), mm.rows());
    }
}
