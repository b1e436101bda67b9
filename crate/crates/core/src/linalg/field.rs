use std::collections::HashMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::rat::Rat;

/// Coefficient field for sparse elimination.
pub trait Field: Sync + Send {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Image of a rational; `None` when the denominator is not invertible.
    fn from_rat(&self, r: &Rat) -> Option<Self::Elem>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat::ZERO
    }
    fn one(&self) -> Rat {
        Rat::ONE
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a - b
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a
    }
    fn inv(&self, a: &Rat) -> Rat {
        a.inv()
    }
    fn from_rat(&self, r: &Rat) -> Option<Rat> {
        Some(r.clone())
    }
}

/// Integers modulo a prime below 2^63.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < (1 << 63));
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    pub fn reduce_int(&self, v: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let mut r = v % &p;
        if r < BigInt::zero() {
            r += p;
        }
        r.to_u64().expect("residue below modulus")
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }
    fn from_rat(&self, r: &Rat) -> Option<u64> {
        let (num, den) = match r {
            Rat::Small(n, d) => (
                n.rem_euclid(self.p as i64) as u64,
                (*d as u64) % self.p,
            ),
            Rat::Big(_) => (self.reduce_int(&r.numer()), self.reduce_int(&r.denom())),
        };
        match den {
            0 => None,
            1 => Some(num),
            _ => Some(self.mul(&num, &self.inv(&den))),
        }
    }
}

/// Z/p in Montgomery form, for odd p < 2^62. Elements are stored as xR mod p
/// with R = 2^64; use `to_canonical` to read them.
#[derive(Clone, Copy, Debug)]
pub struct MontgomeryField {
    p: u64,
    pinv: u64,
    r2: u64,
    canonical: PrimeField,
}

impl MontgomeryField {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p > 2 && p < (1 << 62));
        // Newton iteration for p^{-1} mod 2^64
        let mut inv = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        MontgomeryField {
            p,
            pinv: inv.wrapping_neg(),
            r2,
            canonical: PrimeField::new(p),
        }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.pinv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        u.min(u.wrapping_sub(self.p))
    }

    pub fn from_canonical(&self, x: u64) -> u64 {
        self.redc(x as u128 * self.r2 as u128)
    }

    pub fn to_canonical(&self, x: u64) -> u64 {
        self.redc(x as u128)
    }
}

impl Field for MontgomeryField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        self.from_canonical(1)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        s.min(s.wrapping_sub(self.p))
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        let d = a.wrapping_sub(*b);
        d.min(d.wrapping_add(self.p))
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.redc(*a as u128 * *b as u128)
    }
    fn neg(&self, a: &u64) -> u64 {
        self.canonical.neg(a)
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        let (mut base, mut exp, mut acc) = (*a, self.p - 2, self.one());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }
    fn from_rat(&self, r: &Rat) -> Option<u64> {
        self.canonical.from_rat(r).map(|x| self.from_canonical(x))
    }
}

/// Reduction of rationals modulo p, memoizing inverses of word-size
/// denominators since those repeat heavily.
pub struct Residues {
    f: PrimeField,
    inverses: HashMap<i64, u64>,
}

impl Residues {
    pub fn new(p: u64) -> Self {
        Residues {
            f: PrimeField::new(p),
            inverses: HashMap::new(),
        }
    }

    /// x mod p in canonical form; `None` when p divides the denominator.
    pub fn of(&mut self, x: &Rat) -> Option<u64> {
        let p = self.f.modulus();
        match x {
            Rat::Small(n, 1) => Some(n.rem_euclid(p as i64) as u64),
            Rat::Small(n, d) => {
                let inv = match self.inverses.get(d) {
                    Some(&i) => i,
                    None => {
                        let dm = *d as u64 % p;
                        if dm == 0 {
                            return None;
                        }
                        *self.inverses.entry(*d).or_insert(self.f.inv(&dm))
                    }
                };
                Some(self.f.mul(&(n.rem_euclid(p as i64) as u64), &inv))
            }
            Rat::Big(_) => self.f.from_rat(x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(1_000_000_007);
        for a in [1u64, 2, 12345, 999_999_999] {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        assert_eq!(f.from_rat(&Rat::new(-1, 2)).map(|x| f.mul(&x, &2)), Some(f.neg(&1)));
        assert_eq!(PrimeField::new(7).from_rat(&Rat::new(1, 14)), None);
    }

    #[test]
    fn montgomery_matches_plain() {
        for p in [7u64, 1_000_000_007, 0x3fffffffffffffc7] {
            let f = PrimeField::new(p);
            let m = MontgomeryField::new(p);
            let vals = [0u64, 1, 2, p - 1, p / 3, 123456789 % p];
            for &a in &vals {
                let am = m.from_canonical(a);
                assert_eq!(m.to_canonical(am), a);
                for &b in &vals {
                    let bm = m.from_canonical(b);
                    assert_eq!(m.to_canonical(m.mul(&am, &bm)), f.mul(&a, &b));
                    assert_eq!(m.to_canonical(m.add(&am, &bm)), f.add(&a, &b));
                    assert_eq!(m.to_canonical(m.sub(&am, &bm)), f.sub(&a, &b));
                }
                if a != 0 {
                    assert_eq!(m.to_canonical(m.inv(&am)), f.inv(&a));
                }
            }
            assert_eq!(m.to_canonical(m.one()), 1);
            let r = Rat::new(-5, 3);
            assert_eq!(m.from_rat(&r).map(|x| m.to_canonical(x)), f.from_rat(&r));
        }
    }
}
