//! Graded pieces of a presented quotient, with exact S_n-characters.
//!
//! Linear relations are removed first by solving for the last generators.
//! Each remaining degree is then computed in one of two ways:
//!
//! * Macaulay: the ideal is spanned by every quadratic relation times every
//!   monomial of complementary degree. Standard monomials (the non-pivot
//!   columns) form a basis, and a pivot row gives the normal form of its
//!   leading monomial.
//! * Lift: Q_{d+1} is the quotient of V ⊗ Q_d by the commutation relations
//!   x_a ⊗ x_b s ∓ x_b ⊗ x_a s (s running over a basis of Q_{d-1}, plus
//!   x_a ⊗ x_a s for exterior algebras). For d ≥ 2 the quadratic relations of
//!   the algebra already lie in this span, so nothing else is needed.
//!
//! Both algebras are generated in degree 1, so once a piece vanishes every
//! later piece does too.

use std::collections::HashMap;

use num_rational::BigRational;
use rayon::prelude::*;

use super::monomial::{mono_mul, monomial_count, AlgebraKind, Mono, MonoSpace};
use super::ring::RingPresentation;
use crate::error::{Error, Result};
use crate::gradedrep::GradedRep;
use crate::linalg::{
    echelonize, echelonize_mod, Arithmetic, Field, MontgomeryField, Rat, Rationals, Residues, SparseRowMatrix, SparseVec, PRIMES,
};
use crate::symcore::{character_table, decompose, ClassFunction};

/// Which construction to use for degrees three and up.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Route {
    /// Macaulay while the monomial space is no larger than the lift space,
    /// then lift.
    #[default]
    Auto,
    Macaulay,
    Lift,
}

/// How linear relations are imposed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LinearMode {
    /// Ideal with multimodular arithmetic when it applies, substitution
    /// otherwise.
    #[default]
    Auto,
    /// Solve for the last generators before building any piece.
    Substitute,
    /// For a single linear form ω in an exterior algebra: build the quotient
    /// Q by the quadratic relations, then each piece Q_d / ω Q_{d-1} modulo a
    /// prime. Since ω² = 0 the ranks r_d of ω: Q_{d-1} → Q_d satisfy
    /// r_d + r_{d+1} ≤ dim Q_d over Q, and ranks modulo p never exceed ranks
    /// over Q, so equality modulo p at d certifies r_d and r_{d+1} exactly.
    Ideal,
}

const NONE: u32 = u32::MAX;

#[derive(Debug)]
struct Piece<E = Rat> {
    /// Monomial columns for Macaulay pieces; `None` for lift pieces, whose
    /// column (a, t) is x_a ⊗ (basis element t of the previous degree).
    space: Option<MonoSpace>,
    ech: SparseRowMatrix<E>,
    /// Column → basis position, `NONE` for pivot columns.
    pos: Vec<u32>,
    basis: Vec<u32>,
}

impl<E: Clone> Piece<E> {
    fn new(space: Option<MonoSpace>, ech: SparseRowMatrix<E>) -> Self {
        let basis = ech.free_columns();
        let mut pos = vec![NONE; ech.ncols()];
        for (i, &c) in basis.iter().enumerate() {
            pos[c as usize] = i as u32;
        }
        Piece {
            space,
            ech,
            pos,
            basis,
        }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn is_macaulay(&self) -> bool {
        self.space.is_some()
    }
}

impl Piece {
    /// Normal form of a column, in basis coordinates.
    fn nf(&self, col: u32) -> SparseVec<Rat> {
        match self.pos[col as usize] {
            NONE => {
                let row = self.ech.pivot_row(col).expect("pivot column");
                row[1..]
                    .iter()
                    .map(|(c, v)| (self.pos[*c as usize], -v))
                    .collect()
            }
            p => vec![(p, Rat::ONE)],
        }
    }
}

/// The quotient algebra of a presentation, computed degree by degree.
pub struct QuotientEngine {
    pres: RingPresentation,
    arith: Arithmetic,
    route: Route,
    kind: AlgebraKind,
    free_orig: Vec<u32>,
    subst: Vec<SparseVec<Rat>>,
    quad: Vec<Vec<(Mono, Rat)>>,
    pieces: Vec<Piece>,
    ideal: Option<IdealLayer>,
}

/// Q_d / ω Q_{d-1} modulo `prime`, with columns the basis of Q_d.
struct IdealLayer {
    form: SparseVec<Rat>,
    prime: usize,
    pieces: Vec<Piece<u64>>,
}

impl IdealLayer {
    fn field(&self) -> MontgomeryField {
        MontgomeryField::new(PRIMES[self.prime])
    }
}

impl QuotientEngine {
    pub fn new(pres: RingPresentation, arith: Arithmetic) -> Result<Self> {
        Self::with_route(pres, arith, Route::Auto)
    }

    pub fn with_route(pres: RingPresentation, arith: Arithmetic, route: Route) -> Result<Self> {
        Self::with_options(pres, arith, route, LinearMode::Auto)
    }

    pub fn with_options(pres: RingPresentation, arith: Arithmetic, route: Route, linear: LinearMode) -> Result<Self> {
        let kind = pres.kind();
        let applies = kind == AlgebraKind::Exterior && pres.linear_relations().len() == 1;
        let ideal = match linear {
            LinearMode::Auto => applies && arith == Arithmetic::Multimodular,
            LinearMode::Substitute => false,
            LinearMode::Ideal if applies => true,
            LinearMode::Ideal => {
                return Err(Error::InvalidParameter(
                    "the ideal mode needs a single linear relation in an exterior algebra".into(),
                ))
            }
        };
        let (free_orig, subst, ideal) = if ideal {
            let nvars = pres.generators().len() as u32;
            let mut form: SparseVec<Rat> =
                pres.linear_relations()[0].iter().map(|(m, c)| (m[0], c.clone())).collect();
            form.sort_unstable_by_key(|e| e.0);
            let layer = IdealLayer {
                form,
                prime: 0,
                pieces: vec![Piece::new(None, SparseRowMatrix::empty(1))],
            };
            ((0..nvars).collect(), (0..nvars).map(|v| vec![(v, Rat::ONE)]).collect(), Some(layer))
        } else {
            let (free_orig, subst) = eliminate_linear(&pres);
            (free_orig, subst, None)
        };
        let nfree = free_orig.len();
        let space2 = MonoSpace::new(kind, nfree, 2);
        let mut rows = Vec::new();
        for rel in pres.quadratic_relations() {
            let mut acc: HashMap<u32, Rat> = HashMap::new();
            for (m, c) in rel {
                for (a, ca) in &subst[m[0] as usize] {
                    for (b, cb) in &subst[m[1] as usize] {
                        if let Some((neg, prod)) = mono_mul(kind, &[*a], &[*b]) {
                            let v = &(c * ca) * cb;
                            let e = acc.entry(space2.col(&prod)).or_insert(Rat::ZERO);
                            *e = if neg { &*e - &v } else { &*e + &v };
                        }
                    }
                }
            }
            rows.push(to_sparse(acc));
        }
        let ech2 = echelonize(&Rationals, space2.len(), rows);
        let quad = ech2
            .rows()
            .iter()
            .map(|r| r.iter().map(|(c, v)| (space2.mono(*c).clone(), v.clone())).collect())
            .collect();
        let mut engine = QuotientEngine {
            pres,
            arith,
            route,
            kind,
            free_orig,
            subst,
            quad,
            pieces: Vec::new(),
            ideal,
        };
        engine.pieces.push(Piece::new(
            Some(MonoSpace::new(kind, nfree, 0)),
            SparseRowMatrix::empty(1),
        ));
        engine.pieces.push(Piece::new(
            Some(MonoSpace::new(kind, nfree, 1)),
            SparseRowMatrix::empty(nfree),
        ));
        engine.pieces.push(Piece::new(Some(space2), ech2));
        Ok(engine)
    }

    pub fn presentation(&self) -> &RingPresentation {
        &self.pres
    }

    /// Number of generators the pieces are built from: all of them when the
    /// linear relations are imposed as an ideal.
    pub fn free_generators(&self) -> usize {
        self.free_orig.len()
    }

    /// Number of independent quadratic relations among the free generators.
    pub fn quadratic_rank(&self) -> usize {
        self.quad.len()
    }

    /// Dimensions of the pieces of the quotient computed so far.
    fn visible_dims(&self) -> Vec<usize> {
        match &self.ideal {
            Some(layer) => layer.pieces.iter().map(Piece::dim).collect(),
            None => self.pieces.iter().map(Piece::dim).collect(),
        }
    }

    fn ensure(&mut self, degree: usize) -> Result<()> {
        if self.ideal.is_some() {
            return self.ensure_ideal(degree);
        }
        self.ensure_inner(degree)
    }

    fn ensure_ideal(&mut self, degree: usize) -> Result<()> {
        loop {
            let dims = self.visible_dims();
            if dims.len() > degree || dims.contains(&0) {
                break;
            }
            let d = dims.len();
            self.ensure_inner(d)?;
            self.push_ideal_piece(d)?;
        }
        // The last piece built is certified by the one above it.
        let d = self.visible_dims().len() - 1;
        if !self.ideal_certified(d) {
            self.ensure_inner(d + 1)?;
            self.push_ideal_piece(d + 1)?;
        }
        let len = self.visible_dims().len();
        if (0..len).all(|d| self.ideal_certified(d)) {
            return Ok(());
        }
        let layer = self.ideal.as_mut().expect("ideal layer");
        layer.prime += 1;
        if layer.prime == PRIMES.len() {
            return Err(Error::ReconstructionFailed { primes: PRIMES.len() });
        }
        layer.pieces.truncate(1);
        self.ensure_ideal(degree)
    }

    /// Whether the rank of ω into degree d is known to be exact.
    fn ideal_certified(&self, d: usize) -> bool {
        let layer = self.ideal.as_ref().expect("ideal layer");
        let rank = |d: usize| layer.pieces.get(d).map(|p| p.ech.rank());
        let exact_at = |d: usize| match (rank(d), rank(d + 1)) {
            (Some(a), Some(b)) => a + b == self.pieces.get(d).map_or(0, Piece::dim),
            _ => false,
        };
        d == 0 || exact_at(d - 1) || exact_at(d)
    }

    /// Appends Q_d / ω Q_{d-1} modulo the layer's prime. If a coefficient has
    /// no residue the layer moves to the next prime.
    fn push_ideal_piece(&mut self, d: usize) -> Result<()> {
        let layer = self.ideal.as_ref().expect("ideal layer");
        if layer.pieces.len() != d {
            return Ok(());
        }
        let f = layer.field();
        let mut residues = Residues::new(PRIMES[layer.prime]);
        let ncols = self.pieces.get(d).map_or(0, Piece::dim);
        let mut rows = Vec::new();
        for s in 0..self.pieces.get(d - 1).map_or(0, Piece::dim) as u32 {
            if ncols == 0 {
                break;
            }
            let mut acc: HashMap<u32, Rat> = HashMap::new();
            for (a, c) in &layer.form {
                for (t, x) in self.mult(d, *a, s) {
                    let e = acc.entry(t).or_insert(Rat::ZERO);
                    *e = &*e + &(c * &x);
                }
            }
            let row: Option<SparseVec<u64>> = to_sparse(acc)
                .iter()
                .map(|(t, x)| Some((*t, f.from_canonical(residues.of(x)?))))
                .filter(|e| !matches!(e, Some((_, 0))))
                .collect();
            match row {
                Some(row) if !row.is_empty() => rows.push(row),
                Some(_) => {}
                None => {
                    let layer = self.ideal.as_mut().expect("ideal layer");
                    layer.prime += 1;
                    if layer.prime == PRIMES.len() {
                        return Err(Error::ReconstructionFailed { primes: PRIMES.len() });
                    }
                    layer.pieces.truncate(1);
                    for e in 1..=d {
                        self.push_ideal_piece(e)?;
                    }
                    return Ok(());
                }
            }
        }
        let ech = echelonize_mod(&f, ncols, rows);
        self.ideal.as_mut().expect("ideal layer").pieces.push(Piece::new(None, ech));
        Ok(())
    }

    fn ensure_inner(&mut self, degree: usize) -> Result<()> {
        while self.pieces.len() <= degree {
            let d = self.pieces.len();
            if self.pieces.iter().any(|p| p.dim() == 0) {
                return Ok(());
            }
            let prev = &self.pieces[d - 1];
            let nfree = self.free_orig.len();
            let lift = match self.route {
                Route::Macaulay => false,
                Route::Lift => true,
                Route::Auto => {
                    !prev.is_macaulay()
                        || monomial_count(self.kind, nfree, d) > (nfree * prev.dim()) as u128
                }
            };
            let piece = if lift { self.lift_piece(d)? } else { self.macaulay_piece(d)? };
            self.pieces.push(piece);
        }
        Ok(())
    }

    fn macaulay_piece(&self, d: usize) -> Result<Piece> {
        let nfree = self.free_orig.len();
        let space = MonoSpace::new(self.kind, nfree, d);
        let cofactors = MonoSpace::new(self.kind, nfree, d - 2);
        let mut rows = Vec::with_capacity(self.quad.len() * cofactors.len());
        for g in &self.quad {
            for m in cofactors.monos() {
                let mut row = Vec::with_capacity(g.len());
                for (gm, c) in g {
                    if let Some((neg, prod)) = mono_mul(self.kind, gm, m) {
                        row.push((space.col(&prod), if neg { -c } else { c.clone() }));
                    }
                }
                row.sort_unstable_by_key(|e| e.0);
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
        // Multiples of the relations first needed in degree d-1 give the
        // leading terms those relations already account for.
        if d >= 4 {
            let prev = &self.pieces[d - 1];
            let prev_space = prev.space.as_ref().expect("Macaulay pieces follow Macaulay pieces");
            let older = self.pieces[d - 2].space.as_ref().expect("Macaulay pieces follow Macaulay pieces");
            for h in prev.ech.rows() {
                let lead = prev_space.mono(h[0].0);
                let covered = (0..lead.len()).any(|k| {
                    let mut m = lead.clone();
                    m.remove(k);
                    self.pieces[d - 2].ech.is_pivot(older.col(&m))
                });
                if covered {
                    continue;
                }
                for v in 0..nfree as u32 {
                    let mut row = Vec::with_capacity(h.len());
                    for (c, x) in h {
                        if let Some((neg, prod)) = mono_mul(self.kind, &[v], prev_space.mono(*c)) {
                            row.push((space.col(&prod), if neg { -x } else { x.clone() }));
                        }
                    }
                    row.sort_unstable_by_key(|e| e.0);
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
        let ech = self.arith.echelonize(space.len(), rows)?;
        Ok(Piece::new(Some(space), ech))
    }

    /// x_b times basis element j of degree d-1, as a vector in degree d.
    fn mult(&self, d: usize, b: u32, j: u32) -> SparseVec<Rat> {
        let piece = &self.pieces[d];
        let prev = &self.pieces[d - 1];
        match &piece.space {
            Some(space) => {
                let base = prev
                    .space
                    .as_ref()
                    .expect("Macaulay pieces follow Macaulay pieces")
                    .mono(prev.basis[j as usize]);
                match mono_mul(self.kind, &[b], base) {
                    None => Vec::new(),
                    Some((neg, m)) => {
                        let v = piece.nf(space.col(&m));
                        if neg {
                            v.into_iter().map(|(c, x)| (c, -x)).collect()
                        } else {
                            v
                        }
                    }
                }
            }
            None => piece.nf(b * prev.dim() as u32 + j),
        }
    }

    fn lift_piece(&self, d: usize) -> Result<Piece> {
        let nfree = self.free_orig.len() as u32;
        let dim = self.pieces[d - 1].dim() as u32;
        let dim2 = self.pieces[d - 2].dim() as u32;
        let exterior = self.kind == AlgebraKind::Exterior;
        let embed = |a: u32, v: &SparseVec<Rat>, neg: bool| -> SparseVec<Rat> {
            v.iter()
                .map(|(t, x)| (a * dim + t, if neg { -x } else { x.clone() }))
                .collect()
        };
        let mut rows = Vec::new();
        for s in 0..dim2 {
            let images: Vec<SparseVec<Rat>> = (0..nfree).map(|a| self.mult(d - 1, a, s)).collect();
            for a in 0..nfree {
                if exterior && !images[a as usize].is_empty() {
                    rows.push(embed(a, &images[a as usize], false));
                }
                for b in a + 1..nfree {
                    // x_a x_b s = ± x_b x_a s
                    let mut row = embed(a, &images[b as usize], false);
                    row.extend(embed(b, &images[a as usize], !exterior));
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
        let ech = self.arith.echelonize((nfree * dim) as usize, rows)?;
        Ok(Piece::new(None, ech))
    }

    /// dim Q_d.
    pub fn dimension(&mut self, degree: usize) -> Result<usize> {
        self.ensure(degree)?;
        Ok(self.visible_dims().get(degree).copied().unwrap_or(0))
    }

    pub fn dimensions(&mut self, max_degree: usize) -> Result<Vec<usize>> {
        (0..=max_degree).map(|d| self.dimension(d)).collect()
    }

    /// Total dimension, computing degrees until the first zero piece.
    /// Returns `None` if no zero piece appears up to `degree_cap`.
    pub fn total_dimension(&mut self, degree_cap: usize) -> Result<Option<(u64, usize)>> {
        let mut total = 0u64;
        for d in 0..=degree_cap {
            let dim = self.dimension(d)?;
            if dim == 0 {
                return Ok(Some((total, d.saturating_sub(1))));
            }
            total += dim as u64;
        }
        Ok(None)
    }

    /// The graded character through `max_degree`, decomposed into
    /// irreducibles.
    pub fn graded_character(&mut self, max_degree: usize) -> Result<GradedRep> {
        self.ensure(max_degree)?;
        let n = self.pres.n();
        let action = PRIMES
            .iter()
            .find_map(|&p| ModularAction::new(self, p))
            .ok_or(Error::ReconstructionFailed { primes: PRIMES.len() })?;
        let table = character_table(n);
        let per_class: Vec<Vec<i64>> = table
            .partitions()
            .par_iter()
            .map(|mu| action.traces(&mu.representative(), max_degree))
            .collect();
        let mut rep = GradedRep::zero(n);
        for d in 0..=max_degree {
            let values = per_class.iter().map(|t| BigRational::from_integer(t[d].into())).collect();
            rep.set(d, decompose(&ClassFunction::from_values(n, values))?)?;
        }
        Ok(rep)
    }
}

/// The pieces reduced modulo a prime, which is all σ needs: characters are
/// integers bounded by the dimension, so one large prime recovers them.
struct ModularAction<'a> {
    engine: &'a QuotientEngine,
    f: MontgomeryField,
    subst: Vec<SparseVec<u64>>,
    pieces: Vec<ModPiece>,
    /// Pivot row tails of the ideal layer, by degree and pivot index. The
    /// layer's prime is the action's prime.
    layer: Option<Vec<Vec<SparseVec<u64>>>>,
}

struct ModPiece {
    /// Normal form of each pivot column, by pivot index, in basis positions.
    pivot_nf: Vec<SparseVec<u64>>,
    /// Basis element p is x_{gens[p]} times `rests[p]` from the degree below.
    gens: Vec<u32>,
    rests: Vec<SparseVec<u64>>,
    /// For Macaulay pieces, the column of x_b times basis element t of the
    /// degree below, at b * dim + t, with its sign.
    products: Option<Vec<Option<(bool, u32)>>>,
}

impl<'a> ModularAction<'a> {
    fn new(engine: &'a QuotientEngine, p: u64) -> Option<Self> {
        let f = MontgomeryField::new(p);
        let mut residues = Residues::new(p);
        let mut conv = |v: &SparseVec<Rat>, neg: bool| -> Option<SparseVec<u64>> {
            v.iter()
                .map(|(c, x)| {
                    let y = f.from_canonical(residues.of(x)?);
                    Some((*c, if neg { f.neg(&y) } else { y }))
                })
                .collect()
        };
        let subst = engine.subst.iter().map(|v| conv(v, false)).collect::<Option<Vec<_>>>()?;
        let nfree = engine.free_orig.len() as u32;
        let mut pieces = Vec::with_capacity(engine.pieces.len());
        for (d, piece) in engine.pieces.iter().enumerate() {
            let pivot_nf = piece
                .ech
                .rows()
                .iter()
                .map(|row| {
                    let tail: SparseVec<Rat> =
                        row[1..].iter().map(|(c, x)| (piece.pos[*c as usize], x.clone())).collect();
                    conv(&tail, true)
                })
                .collect::<Option<Vec<_>>>()?;
            let (mut gens, mut rests, mut products) = (Vec::new(), Vec::new(), None);
            if d > 0 {
                let prev = &engine.pieces[d - 1];
                match (&piece.space, &prev.space) {
                    (Some(space), Some(prev_space)) => {
                        for &col in &piece.basis {
                            let m = space.mono(col);
                            gens.push(m[0]);
                            rests.push(conv(&prev.nf(prev_space.col(&m[1..])), false)?);
                        }
                        let mut table = Vec::with_capacity(nfree as usize * prev.dim());
                        for b in 0..nfree {
                            for &t in &prev.basis {
                                table.push(
                                    mono_mul(engine.kind, &[b], prev_space.mono(t))
                                        .map(|(neg, m)| (neg, space.col(&m))),
                                );
                            }
                        }
                        products = Some(table);
                    }
                    (None, _) => {
                        let dim = prev.dim() as u32;
                        for &col in &piece.basis {
                            gens.push(col / dim);
                            rests.push(vec![(col % dim, f.one())]);
                        }
                    }
                    (Some(_), None) => unreachable!("Macaulay pieces follow Macaulay pieces"),
                }
            }
            pieces.push(ModPiece {
                pivot_nf,
                gens,
                rests,
                products,
            });
        }
        let layer = match &engine.ideal {
            Some(layer) if PRIMES[layer.prime] != p => return None,
            Some(layer) => Some(
                layer
                    .pieces
                    .iter()
                    .map(|piece| piece.ech.rows().iter().map(|row| row[1..].to_vec()).collect())
                    .collect(),
            ),
            None => None,
        };
        Some(ModularAction {
            engine,
            f,
            subst,
            pieces,
            layer,
        })
    }

    /// The column of x_b times basis element t of degree d-1, with sign.
    fn product(&self, d: usize, b: u32, t: u32) -> Option<(bool, u32)> {
        match &self.pieces[d].products {
            Some(table) => table[b as usize * self.engine.pieces[d - 1].dim() + t as usize],
            None => Some((false, b * self.engine.pieces[d - 1].dim() as u32 + t)),
        }
    }

    /// acc += s · NF(col) in degree d.
    fn add_nf(&self, d: usize, col: u32, s: u64, acc: &mut [u64]) {
        let f = &self.f;
        let piece = &self.engine.pieces[d];
        match piece.pos[col as usize] {
            NONE => {
                let i = piece.ech.pivot_index(col).expect("pivot column");
                for (q, x) in &self.pieces[d].pivot_nf[i] {
                    let q = *q as usize;
                    acc[q] = f.add(&acc[q], &f.mul(&s, x));
                }
            }
            q => acc[q as usize] = f.add(&acc[q as usize], &s),
        }
    }

    /// The coefficient of basis element `target` in NF(col) in degree d.
    fn nf_coeff(&self, d: usize, col: u32, target: u32) -> u64 {
        let piece = &self.engine.pieces[d];
        match piece.pos[col as usize] {
            NONE => {
                let i = piece.ech.pivot_index(col).expect("pivot column");
                let row = &self.pieces[d].pivot_nf[i];
                row.binary_search_by_key(&target, |e| e.0).map_or(0, |k| row[k].1)
            }
            q if q == target => self.f.one(),
            _ => 0,
        }
    }

    /// Trace of σ on Q_d / (L · Q_{d-1}) given its matrix `rho` on Q_d.
    fn quotient_trace(&self, piece: &Piece<u64>, tails: &[SparseVec<u64>], rho: &[SparseVec<u64>]) -> u64 {
        let f = &self.f;
        let mut trace = 0u64;
        for &q in &piece.basis {
            for (c, v) in &rho[q as usize] {
                if *c == q {
                    trace = f.add(&trace, v);
                } else if let Some(i) = piece.ech.pivot_index(*c) {
                    let tail = &tails[i];
                    if let Ok(k) = tail.binary_search_by_key(&q, |e| e.0) {
                        trace = f.sub(&trace, &f.mul(v, &tail[k].1));
                    }
                }
            }
        }
        trace
    }

    /// Traces of σ on Q_0, …, Q_max as integers.
    fn traces(&self, perm: &[usize], max_degree: usize) -> Vec<i64> {
        let f = &self.f;
        let engine = self.engine;
        let images: Vec<SparseVec<u64>> = engine
            .free_orig
            .iter()
            .map(|&v| {
                let (neg, w) = engine.pres.act(perm, v);
                let form = &self.subst[w as usize];
                form.iter().map(|(c, x)| (*c, if neg { f.neg(x) } else { *x })).collect()
            })
            .collect();
        let dims = engine.visible_dims();
        let top = max_degree.min(dims.len() - 1);
        let mut out = vec![1i64];
        // σ on the previous degree, row p = σ(basis element p)
        let mut rho: Vec<SparseVec<u64>> = vec![vec![(0, f.one())]];
        for d in 1..=top {
            if dims[d] == 0 {
                break;
            }
            let piece = &self.pieces[d];
            let dim = engine.pieces[d].dim();
            let prev_dim = engine.pieces[d - 1].dim();
            let full = d < top || self.layer.is_some();
            let mut y = vec![0u64; prev_dim];
            let mut acc = vec![0u64; if full { dim } else { 0 }];
            let mut next = Vec::with_capacity(if full { dim } else { 0 });
            let mut trace = 0u64;
            for p in 0..dim {
                for (u, w) in &piece.rests[p] {
                    for (t, r) in &rho[*u as usize] {
                        let t = *t as usize;
                        y[t] = f.add(&y[t], &f.mul(w, r));
                    }
                }
                for (b, lb) in &images[piece.gens[p] as usize] {
                    for (t, yt) in y.iter().enumerate() {
                        if *yt == 0 {
                            continue;
                        }
                        let Some((neg, col)) = self.product(d, *b, t as u32) else {
                            continue;
                        };
                        let s = f.mul(lb, yt);
                        let s = if neg { f.neg(&s) } else { s };
                        if full {
                            self.add_nf(d, col, s, &mut acc);
                        } else {
                            let x = self.nf_coeff(d, col, p as u32);
                            trace = f.add(&trace, &f.mul(&s, &x));
                        }
                    }
                }
                y.iter_mut().for_each(|v| *v = 0);
                if full {
                    trace = f.add(&trace, &acc[p]);
                    let row: SparseVec<u64> = acc
                        .iter_mut()
                        .enumerate()
                        .filter(|(_, v)| **v != 0)
                        .map(|(q, v)| (q as u32, std::mem::take(v)))
                        .collect();
                    next.push(row);
                }
            }
            if let Some(tails) = &self.layer {
                let layer = engine.ideal.as_ref().expect("ideal layer");
                trace = self.quotient_trace(&layer.pieces[d], &tails[d], &next);
            }
            out.push(signed(f.to_canonical(trace), f.modulus()));
            rho = next;
        }
        out.resize(max_degree + 1, 0);
        out
    }
}

fn signed(v: u64, p: u64) -> i64 {
    if v > p / 2 {
        -((p - v) as i64)
    } else {
        v as i64
    }
}

fn to_sparse(acc: HashMap<u32, Rat>) -> SparseVec<Rat> {
    let mut v: SparseVec<Rat> = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
    v.sort_unstable_by_key(|e| e.0);
    v
}

/// Solves the linear relations for the last generators. Returns the
/// surviving generators and, for every generator, its expression in them.
fn eliminate_linear(pres: &RingPresentation) -> (Vec<u32>, Vec<SparseVec<Rat>>) {
    let nvars = pres.generators().len() as u32;
    let rev = |v: u32| nvars - 1 - v;
    let rows: Vec<SparseVec<Rat>> = pres
        .linear_relations()
        .iter()
        .map(|p| {
            let mut r: SparseVec<Rat> = p.iter().map(|(m, c)| (rev(m[0]), c.clone())).collect();
            r.sort_unstable_by_key(|e| e.0);
            r
        })
        .collect();
    let ech = echelonize(&Rationals, nvars as usize, rows);
    let eliminated: Vec<bool> = (0..nvars).map(|v| ech.is_pivot(rev(v))).collect();
    let free_orig: Vec<u32> = (0..nvars).filter(|&v| !eliminated[v as usize]).collect();
    let mut free_index = vec![NONE; nvars as usize];
    for (i, &v) in free_orig.iter().enumerate() {
        free_index[v as usize] = i as u32;
    }
    let subst = (0..nvars)
        .map(|v| {
            if !eliminated[v as usize] {
                return vec![(free_index[v as usize], Rat::ONE)];
            }
            let row = ech.pivot_row(rev(v)).expect("pivot");
            let mut form: SparseVec<Rat> = row[1..]
                .iter()
                .map(|(c, x)| (free_index[rev(*c) as usize], -x))
                .collect();
            form.sort_unstable_by_key(|e| e.0);
            form
        })
        .collect();
    (free_orig, subst)
}
