//! On-disk cache of computed graded pieces.
//!
//! One JSON file per (ring, n, degree), named `<ring>_<n>_<degree>.json`,
//! plus `manifest.json`. Every entry carries the fingerprint of the code
//! that wrote it and is ignored when that differs from the running code.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::presentations::RingId;
use crate::stability::StablePattern;
use crate::symcore::IrrDecomposition;

pub const CACHE_ENV: &str = "EQUILOG_CACHE";
pub const MONOMIAL_ORDER: &str = "lex-sorted-tuples";
const FORMAT: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub code_version: String,
    pub monomial_order: String,
    pub format: u32,
}

impl Manifest {
    pub fn current() -> Self {
        Manifest {
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            monomial_order: MONOMIAL_ORDER.to_string(),
            format: FORMAT,
        }
    }

    pub fn fingerprint(&self) -> String {
        format!("{}/{}/{}", self.code_version, self.monomial_order, self.format)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Entry {
    fingerprint: String,
    ring: String,
    n: usize,
    degree: usize,
    dimension: u64,
    decomposition: Value,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
    fingerprint: String,
}

impl Cache {
    /// Opens (creating if needed) a cache directory. A manifest from other
    /// code is replaced; the entries it covered stay on disk but are ignored.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        let manifest = Manifest::current();
        let path = dir.join("manifest.json");
        let existing = fs::read(&path)
            .ok()
            .and_then(|b| serde_json::from_slice::<Manifest>(&b).ok());
        if existing.as_ref() != Some(&manifest) {
            write_atomic(&dir, &path, &serde_json::to_vec_pretty(&manifest)?)?;
        }
        Ok(Cache {
            dir,
            fingerprint: manifest.fingerprint(),
        })
    }

    /// The directory named by `EQUILOG_CACHE`, if set.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var_os(CACHE_ENV) {
            Some(dir) if !dir.is_empty() => Cache::open(dir).map(Some),
            _ => Ok(None),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn entry_path(&self, ring: RingId, n: usize, degree: usize) -> PathBuf {
        self.dir.join(format!("{}_{}_{}.json", ring.as_str(), n, degree))
    }

    /// Deformed rings are never cached since the key has no room for t.
    pub fn caches(ring: RingId) -> bool {
        ring != RingId::Dt
    }

    pub fn get(&self, ring: RingId, n: usize, degree: usize) -> Option<IrrDecomposition> {
        if !Self::caches(ring) {
            return None;
        }
        let bytes = fs::read(self.entry_path(ring, n, degree)).ok()?;
        let entry: Entry = serde_json::from_slice(&bytes).ok()?;
        if entry.fingerprint != self.fingerprint
            || entry.ring != ring.as_str()
            || entry.n != n
            || entry.degree != degree
        {
            return None;
        }
        let dec = IrrDecomposition::from_json(n, &entry.decomposition).ok()?;
        (dec.dimension() == entry.dimension).then_some(dec)
    }

    pub fn put(&self, ring: RingId, n: usize, degree: usize, dec: &IrrDecomposition) -> Result<()> {
        if !Self::caches(ring) {
            return Ok(());
        }
        if dec.n() != n {
            return Err(Error::SizeMismatch { left: dec.n(), right: n });
        }
        let entry = Entry {
            fingerprint: self.fingerprint.clone(),
            ring: ring.as_str().to_string(),
            n,
            degree,
            dimension: dec.dimension(),
            decomposition: dec.to_json(),
        };
        let path = self.entry_path(ring, n, degree);
        write_atomic(&self.dir, &path, &serde_json::to_vec_pretty(&entry)?)
    }
}

impl Cache {
    pub fn pattern_path(&self, ring: RingId, degree: usize) -> PathBuf {
        self.dir.join(format!("pattern_{}_{}.json", ring.as_str(), degree))
    }

    pub fn get_pattern(&self, ring: RingId, degree: usize) -> Option<StablePattern> {
        let bytes = fs::read(self.pattern_path(ring, degree)).ok()?;
        let entry: PatternEntry = serde_json::from_slice(&bytes).ok()?;
        if entry.fingerprint != self.fingerprint || entry.ring != ring.as_str() || entry.degree != degree {
            return None;
        }
        StablePattern::from_json(&entry.pattern).ok()
    }

    pub fn put_pattern(&self, ring: RingId, degree: usize, pattern: &StablePattern) -> Result<()> {
        let entry = PatternEntry {
            fingerprint: self.fingerprint.clone(),
            ring: ring.as_str().to_string(),
            degree,
            pattern: pattern.to_json(),
        };
        write_atomic(&self.dir, &self.pattern_path(ring, degree), &serde_json::to_vec_pretty(&entry)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct PatternEntry {
    fingerprint: String,
    ring: String,
    degree: usize,
    pattern: Value,
}

fn write_atomic(dir: &Path, path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Cache(e.to_string()))?;
    Ok(())
}
