use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::monomial::{normalize_word, AlgebraKind, Mono};
use crate::error::{Error, Result};
use crate::linalg::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RingId {
    A,
    B,
    C,
    /// The x_ij presentation of D.
    D,
    /// The Heaviside presentation of D.
    Dh,
    T,
    R,
    OT,
    M,
    /// The one-parameter family specializing to D at t = 0 and M at t = 1.
    Dt,
}

impl RingId {
    pub const ALL: [RingId; 10] = [
        RingId::A,
        RingId::B,
        RingId::C,
        RingId::D,
        RingId::Dh,
        RingId::T,
        RingId::R,
        RingId::OT,
        RingId::M,
        RingId::Dt,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RingId::A => "A",
            RingId::B => "B",
            RingId::C => "C",
            RingId::D => "D",
            RingId::Dh => "Dh",
            RingId::T => "T",
            RingId::R => "R",
            RingId::OT => "OT",
            RingId::M => "M",
            RingId::Dt => "Dt",
        }
    }

    pub fn kind(self) -> AlgebraKind {
        match self {
            RingId::A | RingId::B => AlgebraKind::Exterior,
            _ => AlgebraKind::Polynomial,
        }
    }

    /// Proven stabilization onset for the degree-i piece; degree 0 is the
    /// trivial representation, stable from n = 1.
    pub fn onset(self, degree: usize) -> usize {
        if degree == 0 {
            return 1;
        }
        match self {
            RingId::A | RingId::B => 3 * degree + 1,
            RingId::C | RingId::D | RingId::Dh | RingId::OT | RingId::M | RingId::Dt => 3 * degree,
            RingId::T | RingId::R => 2 * degree,
        }
    }
}

impl fmt::Display for RingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RingId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "A" => RingId::A,
            "B" => RingId::B,
            "C" => RingId::C,
            "D" | "Dx" | "D_x" => RingId::D,
            "Dh" | "D_h" => RingId::Dh,
            "T" => RingId::T,
            "R" => RingId::R,
            "OT" => RingId::OT,
            "M" => RingId::M,
            "Dt" | "D_t" => RingId::Dt,
            other => return Err(Error::UnknownRing(other.to_string())),
        })
    }
}

/// A canonical generator, with 0-based indices in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenLabel {
    Single(u16),
    Pair(u16, u16),
    Triple(u16, u16, u16),
}

impl fmt::Display for GenLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenLabel::Single(i) => write!(f, "z_{}", i + 1),
            GenLabel::Pair(i, j) => write!(f, "x_{},{}", i + 1, j + 1),
            GenLabel::Triple(i, j, k) => write!(f, "h_{},{},{}", i + 1, j + 1, k + 1),
        }
    }
}

/// A polynomial in the canonical generators.
pub type Poly = BTreeMap<Mono, Rat>;

fn add_term(p: &mut Poly, m: Mono, c: Rat) {
    if c.is_zero() {
        return;
    }
    match p.get_mut(&m) {
        Some(v) => {
            *v = &*v + &c;
            if v.is_zero() {
                p.remove(&m);
            }
        }
        None => {
            p.insert(m, c);
        }
    }
}

/// Scales so the first term (in monomial order) has coefficient 1.
fn normalize(mut p: Poly) -> Option<Poly> {
    let lead = p.values().next()?.inv();
    for v in p.values_mut() {
        *v = &*v * &lead;
    }
    Some(p)
}

/// A presented graded algebra with an action of S_n by permuting indices.
#[derive(Clone, Debug)]
pub struct RingPresentation {
    ring: RingId,
    n: usize,
    kind: AlgebraKind,
    t: Option<Rat>,
    generators: Vec<GenLabel>,
    index: HashMap<GenLabel, u32>,
    linear: Vec<Poly>,
    quadratic: Vec<Poly>,
    extra: bool,
}

/// Builds the presentation of `ring` for S_n. `t` must be given exactly for `Dt`.
pub fn build_ring(ring: RingId, n: usize, t: Option<Rat>) -> Result<RingPresentation> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if (ring == RingId::Dt) != t.is_some() {
        return Err(Error::InvalidParameter(
            "a deformation parameter is required for Dt and only for Dt".into(),
        ));
    }
    let generators: Vec<GenLabel> = match ring {
        RingId::T | RingId::R => (0..n as u16).map(GenLabel::Single).collect(),
        RingId::Dh => {
            let mut g = Vec::new();
            for i in 0..n as u16 {
                for j in i + 1..n as u16 {
                    for k in j + 1..n as u16 {
                        g.push(GenLabel::Triple(i, j, k));
                    }
                }
            }
            g
        }
        _ => {
            let mut g = Vec::new();
            for i in 0..n as u16 {
                for j in i + 1..n as u16 {
                    g.push(GenLabel::Pair(i, j));
                }
            }
            g
        }
    };
    let index = generators
        .iter()
        .enumerate()
        .map(|(i, g)| (*g, i as u32))
        .collect();
    let mut p = RingPresentation {
        ring,
        n,
        kind: ring.kind(),
        t,
        generators,
        index,
        linear: Vec::new(),
        quadratic: Vec::new(),
        extra: false,
    };
    p.instantiate_relations();
    Ok(p)
}

impl RingPresentation {
    pub fn ring(&self) -> RingId {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn t(&self) -> Option<&Rat> {
        self.t.as_ref()
    }

    pub fn generators(&self) -> &[GenLabel] {
        &self.generators
    }

    pub fn linear_relations(&self) -> &[Poly] {
        &self.linear
    }

    pub fn quadratic_relations(&self) -> &[Poly] {
        &self.quadratic
    }

    /// True once relations beyond the standard families have been added.
    pub fn is_modified(&self) -> bool {
        self.extra
    }

    /// Adds x² for every generator.
    pub fn with_squares(mut self) -> Self {
        let mut set: BTreeSet<Poly> = self.quadratic.iter().cloned().collect();
        for v in 0..self.generators.len() as u32 {
            set.insert(Poly::from([(vec![v, v], Rat::ONE)]));
        }
        self.quadratic = set.into_iter().collect();
        self.extra = true;
        self
    }

    /// The generator with the given (not necessarily sorted) indices, as a
    /// signed canonical generator. `None` if the indices are not distinct.
    pub fn signed_generator(&self, idx: &[usize]) -> Option<(bool, u32)> {
        let (neg, label) = match *idx {
            [i] => (false, GenLabel::Single(i as u16)),
            [i, j] if i != j => {
                let flip = i > j && self.kind == AlgebraKind::Polynomial;
                (flip, GenLabel::Pair(i.min(j) as u16, i.max(j) as u16))
            }
            [i, j, k] if i != j && j != k && i != k => {
                let mut v = [i, j, k];
                let mut neg = false;
                for a in 0..3 {
                    for b in 0..2 - a {
                        if v[b] > v[b + 1] {
                            v.swap(b, b + 1);
                            neg = !neg;
                        }
                    }
                }
                (neg, GenLabel::Triple(v[0] as u16, v[1] as u16, v[2] as u16))
            }
            _ => return None,
        };
        Some((neg, self.index[&label]))
    }

    /// σ applied to a canonical generator.
    pub fn act(&self, perm: &[usize], var: u32) -> (bool, u32) {
        let image: Vec<usize> = match self.generators[var as usize] {
            GenLabel::Single(i) => vec![perm[i as usize]],
            GenLabel::Pair(i, j) => vec![perm[i as usize], perm[j as usize]],
            GenLabel::Triple(i, j, k) => vec![perm[i as usize], perm[j as usize], perm[k as usize]],
        };
        self.signed_generator(&image).expect("permutation preserves distinctness")
    }

    /// σ applied to a monomial: a sign and a sorted monomial, or `None` if
    /// it vanishes.
    pub fn act_mono(&self, perm: &[usize], m: &[u32]) -> Option<(bool, Mono)> {
        let mut neg = false;
        let mut word = Vec::with_capacity(m.len());
        for &v in m {
            let (s, w) = self.act(perm, v);
            neg ^= s;
            word.push(w);
        }
        let (s, sorted) = normalize_word(self.kind, word)?;
        Some((neg ^ s, sorted))
    }

    fn gen(&self, idx: &[usize]) -> (Rat, u32) {
        let (neg, v) = self.signed_generator(idx).expect("distinct indices");
        (if neg { Rat::int(-1) } else { Rat::ONE }, v)
    }

    fn linear_form(&self, terms: &[(i64, &[usize])]) -> Poly {
        let mut p = Poly::new();
        for (c, idx) in terms {
            let (s, v) = self.gen(idx);
            add_term(&mut p, vec![v], &s * &Rat::int(*c));
        }
        p
    }

    /// The product of two linear forms.
    fn product(&self, a: &Poly, b: &Poly) -> Poly {
        let mut p = Poly::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                if let Some((neg, m)) = normalize_word(self.kind, vec![ma[0], mb[0]]) {
                    let c = ca * cb;
                    add_term(&mut p, m, if neg { -c } else { c });
                }
            }
        }
        p
    }

    fn three_term(&self, i: usize, j: usize, k: usize) -> Poly {
        let xij = self.linear_form(&[(1, &[i, j])]);
        let xjk = self.linear_form(&[(1, &[j, k])]);
        let xki = self.linear_form(&[(1, &[k, i])]);
        let mut p = self.product(&xij, &xjk);
        for (m, c) in self.product(&xjk, &xki).into_iter().chain(self.product(&xki, &xij)) {
            add_term(&mut p, m, c);
        }
        p
    }

    fn instantiate_relations(&mut self) {
        let n = self.n;
        let mut linear: BTreeSet<Poly> = BTreeSet::new();
        let mut quadratic: BTreeSet<Poly> = BTreeSet::new();
        let triples: Vec<[usize; 3]> = ordered_tuples(n, 3).into_iter().map(|v| [v[0], v[1], v[2]]).collect();
        match self.ring {
            RingId::A | RingId::B | RingId::C | RingId::OT | RingId::M => {
                for &[i, j, k] in &triples {
                    quadratic.extend(normalize(self.three_term(i, j, k)));
                }
            }
            RingId::D | RingId::Dt => {
                let t = self.t.clone().unwrap_or(Rat::ZERO);
                for &[i, j, k] in &triples {
                    let s = self.linear_form(&[(1, &[i, j]), (1, &[j, k]), (1, &[k, i])]);
                    let mut p = self.product(&s, &s);
                    if !t.is_zero() {
                        for idx in [[i, j], [j, k], [k, i]] {
                            let x = self.linear_form(&[(1, &idx)]);
                            for (m, c) in self.product(&x, &x) {
                                add_term(&mut p, m, -(&t * &c));
                            }
                        }
                    }
                    quadratic.extend(normalize(p));
                }
            }
            RingId::Dh => {
                for v in ordered_tuples(n, 4) {
                    let (i, j, k, l) = (v[0], v[1], v[2], v[3]);
                    linear.extend(normalize(self.linear_form(&[
                        (1, &[i, j, k]),
                        (-1, &[i, j, l]),
                        (1, &[i, k, l]),
                        (-1, &[j, k, l]),
                    ])));
                }
            }
            RingId::T | RingId::R => {}
        }
        if self.ring == RingId::C {
            for v in ordered_tuples(n, 2) {
                let x = self.linear_form(&[(1, &[v[0], v[1]])]);
                quadratic.extend(normalize(self.product(&x, &x)));
            }
        }
        if self.ring == RingId::Dh {
            for v in 0..self.generators.len() as u32 {
                quadratic.insert(Poly::from([(vec![v, v], Rat::ONE)]));
            }
        }
        match self.ring {
            RingId::B => {
                let mut p = Poly::new();
                for v in ordered_tuples(n, 2) {
                    for (m, c) in self.linear_form(&[(1, &[v[0], v[1]])]) {
                        add_term(&mut p, m, c);
                    }
                }
                linear.extend(normalize(p));
            }
            RingId::D | RingId::Dt | RingId::M => {
                for i in 0..n {
                    let terms: Vec<(i64, [usize; 2])> =
                        (0..n).filter(|&j| j != i).map(|j| (1, [i, j])).collect();
                    let terms: Vec<(i64, &[usize])> = terms.iter().map(|(c, v)| (*c, &v[..])).collect();
                    linear.extend(normalize(self.linear_form(&terms)));
                }
            }
            RingId::R => {
                let terms: Vec<(i64, [usize; 1])> = (0..n).map(|i| (1, [i])).collect();
                let terms: Vec<(i64, &[usize])> = terms.iter().map(|(c, v)| (*c, &v[..])).collect();
                linear.extend(normalize(self.linear_form(&terms)));
            }
            _ => {}
        }
        self.linear = linear.into_iter().collect();
        self.quadratic = quadratic.into_iter().collect();
    }
}

/// All ordered k-tuples of distinct elements of 0..n.
fn ordered_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !cur.contains(&i) {
                cur.push(i);
                go(n, k, cur, out);
                cur.pop();
            }
        }
    }
    go(n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_counts() {
        let a3 = build_ring(RingId::A, 3, None).unwrap();
        assert_eq!(a3.generators().len(), 3);
        assert_eq!(a3.quadratic_relations().len(), 1);
        assert!(a3.linear_relations().is_empty());
        let m4 = build_ring(RingId::M, 4, None).unwrap();
        assert_eq!(m4.generators().len(), 6);
        assert_eq!(m4.linear_relations().len(), 4);
        assert_eq!(m4.quadratic_relations().len(), 4);
        let b4 = build_ring(RingId::B, 4, None).unwrap();
        assert_eq!(b4.linear_relations().len(), 1);
        let c4 = build_ring(RingId::C, 4, None).unwrap();
        assert_eq!(c4.quadratic_relations().len(), 4 + 6);
    }

    #[test]
    fn parameter_checks() {
        assert!(build_ring(RingId::Dt, 3, None).is_err());
        assert!(build_ring(RingId::D, 3, Some(Rat::ONE)).is_err());
        assert!(build_ring(RingId::Dt, 3, Some(Rat::int(5))).is_ok());
        assert!(matches!("Q".parse::<RingId>(), Err(Error::UnknownRing(_))));
        assert_eq!("D_x".parse::<RingId>().unwrap(), RingId::D);
    }

    #[test]
    fn sign_rules() {
        let a = build_ring(RingId::A, 3, None).unwrap();
        assert_eq!(a.signed_generator(&[1, 0]), Some((false, 0)));
        let c = build_ring(RingId::C, 3, None).unwrap();
        assert_eq!(c.signed_generator(&[1, 0]), Some((true, 0)));
        let h = build_ring(RingId::Dh, 4, None).unwrap();
        let (_, v) = h.signed_generator(&[0, 1, 2]).unwrap();
        assert_eq!(h.signed_generator(&[1, 0, 2]), Some((true, v)));
        assert_eq!(h.signed_generator(&[1, 2, 0]), Some((false, v)));
        assert_eq!(h.signed_generator(&[2, 1, 0]), Some((true, v)));
    }

    #[test]
    fn deformation_endpoints() {
        let d = build_ring(RingId::D, 4, None).unwrap();
        let d0 = build_ring(RingId::Dt, 4, Some(Rat::ZERO)).unwrap();
        assert_eq!(d.quadratic_relations(), d0.quadratic_relations());
        // At t = 1 the squared triple loses its squares: twice the three-term relation.
        let d1 = build_ring(RingId::Dt, 4, Some(Rat::ONE)).unwrap();
        let ot = build_ring(RingId::OT, 4, None).unwrap();
        assert_eq!(d1.quadratic_relations(), ot.quadratic_relations());
    }
}
