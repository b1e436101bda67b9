use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use super::partition::{class_size, factorial, partitions, Partition};
use crate::error::{Error, Result};

/// Irreducible characters of S_n, evaluated on every conjugacy class.
///
/// Rows are indexed by irreducibles and columns by cycle types, both in the
/// canonical partition order.
#[derive(Debug)]
pub struct CharacterTable {
    n: usize,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    class_sizes: Vec<BigInt>,
    order: BigInt,
    values: Vec<Vec<i64>>,
}

impl CharacterTable {
    fn build(n: usize) -> Self {
        let partitions = partitions(n);
        let index = partitions
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let class_sizes = partitions.iter().map(class_size).collect();
        let mut memo = HashMap::new();
        let values = partitions
            .iter()
            .map(|lambda| {
                partitions
                    .iter()
                    .map(|mu| mn_memo(lambda, mu.parts(), &mut memo))
                    .collect()
            })
            .collect();
        CharacterTable {
            n,
            partitions,
            index,
            class_sizes,
            order: factorial(n),
            values,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn class_sizes(&self) -> &[BigInt] {
        &self.class_sizes
    }

    /// n!
    pub fn group_order(&self) -> &BigInt {
        &self.order
    }

    /// Row of χ^λ over all classes.
    pub fn row(&self, lambda_index: usize) -> &[i64] {
        &self.values[lambda_index]
    }

    pub fn value(&self, lambda: &Partition, mu: &Partition) -> Option<i64> {
        Some(self.values[self.index_of(lambda)?][self.index_of(mu)?])
    }
}

static TABLES: OnceLock<Mutex<HashMap<usize, Arc<CharacterTable>>>> = OnceLock::new();

/// The character table of S_n, built once per `n` and shared.
pub fn character_table(n: usize) -> Arc<CharacterTable> {
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = tables.lock().unwrap().get(&n) {
        return t.clone();
    }
    // Built outside the lock; a concurrent duplicate build is harmless.
    let table = Arc::new(CharacterTable::build(n));
    tables
        .lock()
        .unwrap()
        .entry(n)
        .or_insert(table)
        .clone()
}

/// χ^λ(μ) by the Murnaghan–Nakayama rule.
pub fn character_value(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch {
            left: lambda.size(),
            right: mu.size(),
        });
    }
    let table = character_table(lambda.size());
    Ok(table.value(lambda, mu).expect("partition of n"))
}

/// Uncached Murnaghan–Nakayama evaluation; removes a border strip of length
/// μ1 (the largest cycle) at each step.
pub fn murnaghan_nakayama(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch {
            left: lambda.size(),
            right: mu.size(),
        });
    }
    let mut memo = HashMap::new();
    Ok(mn_memo(lambda, mu.parts(), &mut memo))
}

fn mn_memo(
    lambda: &Partition,
    mu: &[usize],
    memo: &mut HashMap<(Partition, Vec<usize>), i64>,
) -> i64 {
    if mu.is_empty() {
        return if lambda.is_empty() { 1 } else { 0 };
    }
    let key = (lambda.clone(), mu.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let strip = mu[0];
    let rest = &mu[1..];
    let mut total = 0i64;
    for (shape, sign) in remove_border_strips(lambda, strip) {
        total += sign * mn_memo(&shape, rest, memo);
    }
    memo.insert(key, total);
    total
}

/// All ways to remove a border strip of length `r`, with sign (-1)^(height).
/// Works on beta-numbers: a strip removal moves one bead down by `r`.
fn remove_border_strips(lambda: &Partition, r: usize) -> Vec<(Partition, i64)> {
    let l = lambda.len();
    let betas: Vec<usize> = (0..l).map(|i| lambda.part(i) + (l - 1 - i)).collect();
    let mut out = Vec::new();
    for (i, &b) in betas.iter().enumerate() {
        if b < r || betas.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let crossed = betas.iter().filter(|&&x| x > target && x < b).count();
        let mut next = betas.clone();
        next[i] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let parts = next
            .iter()
            .enumerate()
            .map(|(j, &beta)| beta - (l - 1 - j))
            .collect();
        let sign = if crossed % 2 == 0 { 1 } else { -1 };
        out.push((Partition::new(parts), sign));
    }
    out
}

/// dim V_λ by the hook-length formula.
pub fn dimension(lambda: &Partition) -> u64 {
    let hooks: BigInt = lambda
        .hooks()
        .into_iter()
        .fold(BigInt::from(1), |acc, h| acc * BigInt::from(h));
    let d = factorial(lambda.size()) / hooks;
    u64::try_from(d).expect("dimension fits in u64")
}
