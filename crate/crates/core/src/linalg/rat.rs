use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational number with an inline fast path.
///
/// Values whose reduced numerator and denominator fit in `i64` are stored
/// inline; everything else falls back to `BigRational`. The representation
/// is canonical, so derived equality and hashing are value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rat {
    Small(i64, i64),
    Big(Box<BigRational>),
}

impl Rat {
    pub const ZERO: Rat = Rat::Small(0, 1);
    pub const ONE: Rat = Rat::Small(1, 1);

    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        reduce128(num as i128, den as i128)
    }

    pub fn int(v: i64) -> Rat {
        Rat::Small(v, 1)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(_, d) => *d == 1,
            Rat::Big(b) => b.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n < 0,
            Rat::Big(b) => b.is_negative(),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(b) => (**b).clone(),
        }
    }

    pub fn from_big(b: BigRational) -> Rat {
        match (b.numer().to_i64(), b.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Rat::Small(n, d),
            _ => Rat::Big(Box::new(b)),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rat::Small(n, _) => BigInt::from(*n),
            Rat::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rat::Small(_, d) => BigInt::from(*d),
            Rat::Big(b) => b.denom().clone(),
        }
    }

    pub fn inv(&self) -> Rat {
        match self {
            Rat::Small(0, _) => panic!("inverse of zero"),
            Rat::Small(n, d) => {
                if *n < 0 {
                    reduce128(-(*d as i128), -(*n as i128))
                } else {
                    Rat::Small(*d, *n)
                }
            }
            Rat::Big(b) => Rat::from_big(b.recip()),
        }
    }
}

fn reduce128(mut n: i128, mut d: i128) -> Rat {
    if d < 0 {
        n = -n;
        d = -d;
    }
    if n == 0 {
        return Rat::ZERO;
    }
    let g = n.gcd(&d);
    if g != 1 {
        n /= g;
        d /= g;
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(a), Ok(b)) if a != i64::MIN => Rat::Small(a, b),
        _ => Rat::Big(Box::new(BigRational::new_raw(n.into(), d.into()))),
    }
}

fn add_small(a: i64, b: i64, c: i64, d: i64) -> Option<Rat> {
    if b == 1 && d == 1 {
        return a.checked_add(c).filter(|&s| s != i64::MIN).map(Rat::int);
    }
    let num = (a as i128).checked_mul(d as i128)?.checked_add((c as i128).checked_mul(b as i128)?)?;
    let den = (b as i128) * (d as i128);
    Some(reduce128(num, den))
}

fn mul_small(a: i64, b: i64, c: i64, d: i64) -> Option<Rat> {
    if b == 1 && d == 1 {
        return a.checked_mul(c).filter(|&s| s != i64::MIN).map(Rat::int);
    }
    // Cross-cancel first to keep the product small.
    let g1 = (a as i128).gcd(&(d as i128)).max(1);
    let g2 = (c as i128).gcd(&(b as i128)).max(1);
    let num = (a as i128 / g1) * (c as i128 / g2);
    let den = (b as i128 / g2) * (d as i128 / g1);
    Some(reduce128(num, den))
}

impl Add for &Rat {
    type Output = Rat;
    fn add(self, rhs: &Rat) -> Rat {
        if let (Rat::Small(a, b), Rat::Small(c, d)) = (self, rhs) {
            if let Some(r) = add_small(*a, *b, *c, *d) {
                return r;
            }
        }
        Rat::from_big(self.to_big() + rhs.to_big())
    }
}

impl Sub for &Rat {
    type Output = Rat;
    fn sub(self, rhs: &Rat) -> Rat {
        self + &(-rhs)
    }
}

impl Mul for &Rat {
    type Output = Rat;
    fn mul(self, rhs: &Rat) -> Rat {
        if let (Rat::Small(a, b), Rat::Small(c, d)) = (self, rhs) {
            if let Some(r) = mul_small(*a, *b, *c, *d) {
                return r;
            }
        }
        Rat::from_big(self.to_big() * rhs.to_big())
    }
}

impl Div for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        self * &rhs.inv()
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match self {
            Rat::Small(n, d) => Rat::Small(-n, *d),
            Rat::Big(b) => Rat::from_big(-(**b).clone()),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        -&self
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::ZERO
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Self {
        Rat::new(v, 1)
    }
}

impl From<BigRational> for Rat {
    fn from(b: BigRational) -> Self {
        Rat::from_big(b)
    }
}

impl From<BigInt> for Rat {
    fn from(b: BigInt) -> Self {
        Rat::from_big(BigRational::from_integer(b))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n, 1) => write!(f, "{n}"),
            Rat::Small(n, d) => write!(f, "{n}/{d}"),
            Rat::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| format!("bad rational {s:?}"))?;
        let den: BigInt = den.parse().map_err(|_| format!("bad rational {s:?}"))?;
        if den.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(Rat::from_big(BigRational::new(num, den)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Zero for Rat {
    fn zero() -> Self {
        Rat::ZERO
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
}

impl One for Rat {
    fn one() -> Self {
        Rat::ONE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        assert_eq!(Rat::new(2, 4), Rat::new(-1, -2));
        assert_eq!(Rat::new(0, -5), Rat::ZERO);
        assert_eq!(Rat::new(3, -6).to_string(), "-1/2");
        assert!(Rat::new(4, 2).is_integer());
    }

    #[test]
    fn overflow_falls_back_and_returns() {
        let big = Rat::int(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq, Rat::Big(_)));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back, Rat::Small(..)));
        let tiny = Rat::new(1, i64::MAX);
        let sum = &tiny + &Rat::new(1, i64::MAX - 1);
        assert_eq!(
            sum.to_big(),
            Rat::new(1, i64::MAX).to_big() + Rat::new(1, i64::MAX - 1).to_big()
        );
    }

    #[test]
    fn arithmetic_agrees_with_bigrational() {
        let vals = [
            Rat::new(1, 3),
            Rat::new(-7, 2),
            Rat::int(0),
            Rat::int(5),
            Rat::new(i64::MAX, 3),
            Rat::new(-3, i64::MAX),
        ];
        for a in &vals {
            for b in &vals {
                assert_eq!((a + b).to_big(), a.to_big() + b.to_big());
                assert_eq!((a - b).to_big(), a.to_big() - b.to_big());
                assert_eq!((a * b).to_big(), a.to_big() * b.to_big());
                if !b.is_zero() {
                    assert_eq!((a / b).to_big(), a.to_big() / b.to_big());
                }
                assert_eq!(a.cmp(b), a.to_big().cmp(&b.to_big()));
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "-3", "5/7", "123456789012345678901234567891/7"] {
            assert_eq!(s.parse::<Rat>().unwrap().to_string(), s);
        }
        assert!("1/0".parse::<Rat>().is_err());
    }
}
