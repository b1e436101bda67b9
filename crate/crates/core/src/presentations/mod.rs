//! Presentations of the braid-type algebras and their graded pieces.

pub mod ambient;
mod deform;
mod engine;
mod monomial;
mod ring;

pub use ambient::{graded_dimension, ideal_echelon, monomial_basis};
pub use deform::{deformed_total, generic_deformed_dimension, DeformedTotals};
pub use engine::{LinearMode, QuotientEngine, Route};
pub use monomial::{binomial, monomial_count, monomials, mono_mul, normalize_word, AlgebraKind, Mono, MonoSpace};
pub use ring::{build_ring, GenLabel, Poly, RingId, RingPresentation};

use crate::error::Result;
use crate::gradedrep::GradedRep;
use crate::linalg::Arithmetic;

/// The graded character of a ring's quotient through `max_degree`.
pub fn graded_character(p: &RingPresentation, max_degree: usize, arith: Arithmetic) -> Result<GradedRep> {
    QuotientEngine::new(p.clone(), arith)?.graded_character(max_degree)
}
