use super::field::Field;

/// Sparse vector: (column, value) pairs with strictly increasing columns and
/// no stored zeros.
pub type SparseVec<E> = Vec<(u32, E)>;

const NO_ROW: u32 = u32::MAX;

/// A matrix in reduced row-echelon form: rows sorted by pivot column, each
/// pivot entry 1 and every pivot column zero in all other rows.
#[derive(Clone, Debug)]
pub struct SparseRowMatrix<E> {
    ncols: usize,
    rows: Vec<SparseVec<E>>,
    pivot_row: Vec<u32>,
}

impl<E: Clone> SparseRowMatrix<E> {
    pub fn empty(ncols: usize) -> Self {
        SparseRowMatrix {
            ncols,
            rows: Vec::new(),
            pivot_row: vec![NO_ROW; ncols],
        }
    }

    /// Wraps rows that are already in reduced row-echelon form.
    pub fn from_reduced_rows(ncols: usize, rows: Vec<SparseVec<E>>) -> Self {
        let mut pivot_row = vec![NO_ROW; ncols];
        for (i, r) in rows.iter().enumerate() {
            pivot_row[r[0].0 as usize] = i as u32;
        }
        SparseRowMatrix {
            ncols,
            rows,
            pivot_row,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<E>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<SparseVec<E>> {
        self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.iter().map(|r| r[0].0)
    }

    pub fn pivot_row(&self, col: u32) -> Option<&SparseVec<E>> {
        match self.pivot_row[col as usize] {
            NO_ROW => None,
            i => Some(&self.rows[i as usize]),
        }
    }

    /// Index into `rows()` of the row with pivot `col`.
    pub fn pivot_index(&self, col: u32) -> Option<usize> {
        match self.pivot_row[col as usize] {
            NO_ROW => None,
            i => Some(i as usize),
        }
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.pivot_row[col as usize] != NO_ROW
    }

    pub fn free_columns(&self) -> Vec<u32> {
        (0..self.ncols as u32).filter(|&c| !self.is_pivot(c)).collect()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// v minus its projection on the row space; the result is supported on
    /// free columns and is zero iff v lies in the row space.
    pub fn reduce<F: Field<Elem = E>>(&self, field: &F, v: &[(u32, E)]) -> SparseVec<E> {
        let mut acc = Accumulator::new(field, self.ncols);
        self.reduce_into(field, &mut acc, v)
    }

    fn reduce_into<F: Field<Elem = E>>(&self, field: &F, acc: &mut Accumulator<E>, v: &[(u32, E)]) -> SparseVec<E> {
        for (c, x) in v {
            match self.pivot_row(*c) {
                None => acc.add(field, *c, x),
                Some(row) => {
                    let s = field.neg(x);
                    for (c2, y) in &row[1..] {
                        acc.add(field, *c2, &field.mul(&s, y));
                    }
                }
            }
        }
        acc.drain(field)
    }

    pub fn contains<F: Field<Elem = E>>(&self, field: &F, v: &[(u32, E)]) -> bool {
        self.reduce(field, v).is_empty()
    }
}

/// Dense scratch space for accumulating a sparse combination.
struct Accumulator<E> {
    values: Vec<E>,
    touched: Vec<u32>,
    marked: Vec<bool>,
}

impl<E: Clone> Accumulator<E> {
    fn new<F: Field<Elem = E>>(field: &F, ncols: usize) -> Self {
        Accumulator {
            values: vec![field.zero(); ncols],
            touched: Vec::new(),
            marked: vec![false; ncols],
        }
    }

    fn add<F: Field<Elem = E>>(&mut self, field: &F, c: u32, x: &E) {
        let i = c as usize;
        if self.marked[i] {
            self.values[i] = field.add(&self.values[i], x);
        } else {
            self.marked[i] = true;
            self.touched.push(c);
            self.values[i] = x.clone();
        }
    }

    fn drain<F: Field<Elem = E>>(&mut self, field: &F) -> SparseVec<E> {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &c in &self.touched {
            let i = c as usize;
            self.marked[i] = false;
            let v = std::mem::replace(&mut self.values[i], field.zero());
            if !field.is_zero(&v) {
                out.push((c, v));
            }
        }
        self.touched.clear();
        out
    }
}

/// Reduced row-echelon form of the span of `rows`.
///
/// One row per leading column (the sparsest) forms a triangular set, which
/// is back-substituted into reduced form. The remaining rows are reduced
/// against it in a single pass; whatever survives lies in its free columns
/// and is eliminated recursively, then folded back in. Every pivot found is
/// the leading column of some vector in the span, so the pivots are the
/// usual first-nonzero-column ones.
pub fn echelonize<F: Field>(
    field: &F,
    ncols: usize,
    rows: Vec<SparseVec<F::Elem>>,
) -> SparseRowMatrix<F::Elem> {
    let (reduced, rest) = triangular_split(field, ncols, rows);
    finish(field, reduced, rest)
}

/// Picks the sparsest row for each leading column and brings those rows to
/// reduced form; returns them together with all other rows.
pub(super) fn triangular_split<F: Field>(
    field: &F,
    ncols: usize,
    rows: Vec<SparseVec<F::Elem>>,
) -> (SparseRowMatrix<F::Elem>, Vec<SparseVec<F::Elem>>) {
    let rows: Vec<SparseVec<F::Elem>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let mut chosen = vec![NO_ROW; ncols];
    for (i, r) in rows.iter().enumerate() {
        let c = r[0].0 as usize;
        if chosen[c] == NO_ROW || rows[chosen[c] as usize].len() > r.len() {
            chosen[c] = i as u32;
        }
    }
    let mut triangular = Vec::new();
    let mut rest = Vec::new();
    for (i, mut r) in rows.into_iter().enumerate() {
        if chosen[r[0].0 as usize] == i as u32 {
            if r[0].1 != field.one() {
                let inv = field.inv(&r[0].1);
                for e in r.iter_mut() {
                    e.1 = field.mul(&e.1, &inv);
                }
            }
            triangular.push(r);
        } else {
            rest.push(r);
        }
    }
    triangular.sort_unstable_by_key(|r| r[0].0);
    (back_substitute(field, ncols, triangular), rest)
}

pub(super) fn finish<F: Field>(
    field: &F,
    reduced: SparseRowMatrix<F::Elem>,
    rest: Vec<SparseVec<F::Elem>>,
) -> SparseRowMatrix<F::Elem> {
    if rest.is_empty() {
        return reduced;
    }
    let ncols = reduced.ncols;
    let mut acc = Accumulator::new(field, ncols);
    let remainders: Vec<SparseVec<F::Elem>> = rest
        .iter()
        .map(|r| reduced.reduce_into(field, &mut acc, r))
        .filter(|r| !r.is_empty())
        .collect();
    if remainders.is_empty() {
        return reduced;
    }
    let extra = incremental(field, ncols, remainders, &mut acc);
    fold_in(field, reduced, extra, &mut acc)
}

/// Gauss-Jordan one row at a time, keeping the basis fully reduced.
fn incremental<F: Field>(
    field: &F,
    ncols: usize,
    mut rows: Vec<SparseVec<F::Elem>>,
    acc: &mut Accumulator<F::Elem>,
) -> SparseRowMatrix<F::Elem> {
    rows.sort_by_key(Vec::len);
    let mut basis: SparseRowMatrix<F::Elem> = SparseRowMatrix::empty(ncols);
    // column → rows of `basis` with a nonzero (non-pivot) entry there
    let mut users: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    for r in rows {
        let mut v = basis.reduce_into(field, acc, &r);
        if v.is_empty() {
            continue;
        }
        if v[0].1 != field.one() {
            let inv = field.inv(&v[0].1);
            for e in v.iter_mut() {
                e.1 = field.mul(&e.1, &inv);
            }
        }
        let pc = v[0].0;
        for i in std::mem::take(&mut users[pc as usize]) {
            let Ok(pos) = basis.rows[i as usize].binary_search_by_key(&pc, |e| e.0) else {
                continue;
            };
            let old = std::mem::take(&mut basis.rows[i as usize]);
            let s = field.neg(&old[pos].1);
            for (c, x) in &old {
                if *c != pc {
                    acc.add(field, *c, x);
                }
            }
            for (c, y) in &v[1..] {
                acc.add(field, *c, &field.mul(&s, y));
            }
            let new = acc.drain(field);
            for (c, _) in &new[1..] {
                let u = &mut users[*c as usize];
                if u.last() != Some(&i) {
                    u.push(i);
                }
            }
            basis.rows[i as usize] = new;
        }
        let idx = basis.rows.len() as u32;
        for (c, _) in &v[1..] {
            users[*c as usize].push(idx);
        }
        basis.pivot_row[pc as usize] = idx;
        basis.rows.push(v);
    }
    let mut rows = basis.rows;
    rows.sort_unstable_by_key(|r| r[0].0);
    SparseRowMatrix::from_reduced_rows(ncols, rows)
}

/// Combines two reduced matrices whose pivots are disjoint, where `extra`
/// is supported on the free columns of `base`.
fn fold_in<F: Field>(
    field: &F,
    base: SparseRowMatrix<F::Elem>,
    extra: SparseRowMatrix<F::Elem>,
    acc: &mut Accumulator<F::Elem>,
) -> SparseRowMatrix<F::Elem> {
    let ncols = base.ncols;
    let mut rows: Vec<SparseVec<F::Elem>> = base
        .rows
        .into_iter()
        .map(|row| {
            if !row[1..].iter().any(|(c, _)| extra.is_pivot(*c)) {
                return row;
            }
            for (c, x) in &row {
                match extra.pivot_row(*c) {
                    None => acc.add(field, *c, x),
                    Some(other) => {
                        let s = field.neg(x);
                        for (c2, y) in &other[1..] {
                            acc.add(field, *c2, &field.mul(&s, y));
                        }
                    }
                }
            }
            acc.drain(field)
        })
        .collect();
    rows.extend(extra.rows);
    rows.sort_unstable_by_key(|r| r[0].0);
    SparseRowMatrix::from_reduced_rows(ncols, rows)
}

fn back_substitute<F: Field>(
    field: &F,
    ncols: usize,
    echelon: Vec<SparseVec<F::Elem>>,
) -> SparseRowMatrix<F::Elem> {
    let mut pivot_row = vec![NO_ROW; ncols];
    for (i, r) in echelon.iter().enumerate() {
        pivot_row[r[0].0 as usize] = i as u32;
    }
    let mut reduced: Vec<Option<SparseVec<F::Elem>>> = vec![None; echelon.len()];
    let mut acc = Accumulator::new(field, ncols);
    for (i, row) in echelon.into_iter().enumerate().rev() {
        let needs_work = row[1..]
            .iter()
            .any(|(c, _)| pivot_row[*c as usize] != NO_ROW);
        if !needs_work {
            reduced[i] = Some(row);
            continue;
        }
        acc.add(field, row[0].0, &row[0].1);
        for (c, x) in &row[1..] {
            match pivot_row[*c as usize] {
                NO_ROW => acc.add(field, *c, x),
                j => {
                    let s = field.neg(x);
                    let other = reduced[j as usize].as_ref().expect("later rows reduced first");
                    for (c2, y) in &other[1..] {
                        acc.add(field, *c2, &field.mul(&s, y));
                    }
                }
            }
        }
        reduced[i] = Some(acc.drain(field));
    }
    SparseRowMatrix {
        ncols,
        rows: reduced.into_iter().map(Option::unwrap).collect(),
        pivot_row,
    }
}
