//! Graded characters by (ring, n), computed once and shared.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::gradedrep::GradedRep;
use crate::linalg::Arithmetic;
use crate::presentations::{build_ring, QuotientEngine, RingId};
use crate::stability::DataSource;
use crate::symcore::IrrDecomposition;

/// What is known about one (ring, n).
#[derive(Clone, Debug)]
struct Known {
    rep: GradedRep,
    /// Pieces 0..=through are present (zero pieces included).
    through: usize,
    /// Every piece is present: some piece at or below `through` is zero.
    complete: bool,
}

/// Computes graded characters on demand, backed by an optional disk cache
/// and an in-memory table. Safe to share across threads; each (ring, n) is
/// computed by one thread at a time.
pub struct Store {
    arith: Arithmetic,
    cache: Option<Cache>,
    known: Mutex<HashMap<(RingId, usize), Arc<Mutex<Option<Known>>>>>,
}

impl Store {
    pub fn new(arith: Arithmetic, cache: Option<Cache>) -> Self {
        Store {
            arith,
            cache,
            known: Mutex::new(HashMap::new()),
        }
    }

    pub fn arithmetic(&self) -> Arithmetic {
        self.arith
    }

    pub fn cache(&self) -> Option<&Cache> {
        self.cache.as_ref()
    }

    fn slot(&self, ring: RingId, n: usize) -> Arc<Mutex<Option<Known>>> {
        let mut map = self.known.lock().expect("store lock");
        map.entry((ring, n)).or_default().clone()
    }

    /// Pieces 0..=max_degree of the ring at n.
    pub fn graded(&self, ring: RingId, n: usize, max_degree: usize) -> Result<GradedRep> {
        check_ring(ring)?;
        let slot = self.slot(ring, n);
        let mut known = slot.lock().expect("store lock");
        if let Some(k) = known.as_ref() {
            if k.complete || k.through >= max_degree {
                return Ok(k.rep.truncate(max_degree));
            }
        }
        if let Some(k) = self.read_cache(ring, n, Some(max_degree)) {
            let rep = k.rep.truncate(max_degree);
            *known = Some(k);
            return Ok(rep);
        }
        let rep = QuotientEngine::new(build_ring(ring, n, None)?, self.arith)?.graded_character(max_degree)?;
        let complete = (0..=max_degree).any(|d| rep.piece(d).is_zero());
        self.write_cache(ring, n, &rep, max_degree)?;
        *known = Some(Known {
            rep: rep.clone(),
            through: max_degree,
            complete,
        });
        Ok(rep)
    }

    /// Every nonzero piece of the ring at n.
    pub fn full(&self, ring: RingId, n: usize) -> Result<GradedRep> {
        check_ring(ring)?;
        let slot = self.slot(ring, n);
        let mut known = slot.lock().expect("store lock");
        if let Some(k) = known.as_ref().filter(|k| k.complete) {
            return Ok(k.rep.clone());
        }
        if let Some(k) = self.read_cache(ring, n, None) {
            let rep = k.rep.clone();
            *known = Some(k);
            return Ok(rep);
        }
        let mut engine = QuotientEngine::new(build_ring(ring, n, None)?, self.arith)?;
        let cap = degree_cap(ring, n);
        let (_, top) = engine
            .total_dimension(cap)?
            .ok_or_else(|| Error::InvalidParameter(format!("{ring}_{n} has no zero piece through degree {cap}")))?;
        let rep = engine.graded_character(top + 1)?;
        self.write_cache(ring, n, &rep, top + 1)?;
        *known = Some(Known {
            rep: rep.clone(),
            through: top + 1,
            complete: true,
        });
        Ok(rep)
    }

    /// Reads degrees from the cache until `max_degree` or the first zero
    /// piece; `None` on any miss.
    fn read_cache(&self, ring: RingId, n: usize, max_degree: Option<usize>) -> Option<Known> {
        let cache = self.cache.as_ref()?;
        let mut rep = GradedRep::zero(n);
        let cap = max_degree.unwrap_or_else(|| degree_cap(ring, n));
        for d in 0..=cap {
            let piece = cache.get(ring, n, d)?;
            if piece.is_zero() {
                return Some(Known {
                    rep,
                    through: d,
                    complete: true,
                });
            }
            rep.set(d, piece).ok()?;
        }
        let through = max_degree?;
        Some(Known {
            rep,
            through,
            complete: false,
        })
    }

    fn write_cache(&self, ring: RingId, n: usize, rep: &GradedRep, through: usize) -> Result<()> {
        if let Some(cache) = &self.cache {
            for d in 0..=through {
                let piece = rep.piece(d);
                let zero = piece.is_zero();
                cache.put(ring, n, d, &piece)?;
                if zero {
                    break;
                }
            }
        }
        Ok(())
    }
}

impl DataSource for Store {
    fn decomposition(&self, ring: RingId, n: usize, degree: usize) -> Result<IrrDecomposition> {
        Ok(self.graded(ring, n, degree)?.piece(degree))
    }
}

fn check_ring(ring: RingId) -> Result<()> {
    if ring == RingId::Dt {
        return Err(Error::InvalidParameter("the deformed ring needs a value of t".into()));
    }
    Ok(())
}

/// A degree beyond the top of every ring at n.
fn degree_cap(ring: RingId, n: usize) -> usize {
    match ring {
        RingId::A | RingId::B | RingId::C | RingId::D | RingId::Dh | RingId::OT | RingId::M => n.max(2),
        RingId::T | RingId::R | RingId::Dt => n * n + 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_round_trip_matches_direct() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::new(Arithmetic::Rational, Some(Cache::open(dir.path()).unwrap()));
        let full = store.full(RingId::D, 5).unwrap();
        assert_eq!(full.total_dimension(), 24);
        let again = Store::new(Arithmetic::Rational, Some(Cache::open(dir.path()).unwrap()));
        assert!(again.read_cache(RingId::D, 5, None).is_some());
        assert_eq!(again.full(RingId::D, 5).unwrap(), full);
        assert_eq!(again.graded(RingId::D, 5, 1).unwrap(), full.truncate(1));
    }

    #[test]
    fn partial_then_full() {
        let store = Store::new(Arithmetic::Rational, None);
        let low = store.graded(RingId::A, 4, 1).unwrap();
        assert_eq!(low.dimensions(), vec![1, 6]);
        assert_eq!(store.full(RingId::A, 4).unwrap().dimensions(), vec![1, 6, 11, 6]);
    }
}
