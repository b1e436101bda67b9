//! Exact sparse linear algebra.

mod field;
mod modular;
mod multimodular;
mod rat;
mod sparse;

pub use field::{Field, MontgomeryField, PrimeField, Rationals, Residues};
pub use modular::echelonize_mod;
pub use multimodular::{echelonize_multimodular, rational_reconstruction, PRIMES};
pub use rat::Rat;
pub use sparse::{echelonize, SparseRowMatrix, SparseVec};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// How reduced row-echelon forms over Q are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    #[default]
    Rational,
    Multimodular,
}

impl Arithmetic {
    pub fn echelonize(self, ncols: usize, rows: Vec<SparseVec<Rat>>) -> Result<SparseRowMatrix<Rat>> {
        match self {
            Arithmetic::Rational => Ok(echelonize(&Rationals, ncols, rows)),
            Arithmetic::Multimodular => echelonize_multimodular(ncols, &rows),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Arithmetic::Rational => "rational",
            Arithmetic::Multimodular => "multimodular",
        }
    }
}
