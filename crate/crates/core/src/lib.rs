//! Multi-variable affine index polynomial of oriented virtual tangles.
//!
//! Diagrams are extended Gauss codes ([`diagram::TangleDiagram`]). The
//! polynomial is computed from affine labels in [`invariant`] and, as a
//! cross-check, from homological weights in [`homology`]. [`tangle_ops`]
//! glues tangles and predicts composite polynomials; [`moves`] rewrites
//! diagrams by Reidemeister moves; [`suite`] runs the randomized property
//! checks.

pub mod algebra;
pub mod diagram;
pub mod fixtures;
pub mod homology;
pub mod invariant;
pub mod moves;
pub mod suite;
pub mod tangle_ops;

pub use algebra::{AffineInt, LaurentPoly, SymbolId, VarIndex};
pub use diagram::TangleDiagram;

/// Polynomials with arbitrary-precision coefficients.
pub type Poly = LaurentPoly<num_bigint::BigInt>;
/// Polynomials with machine-word coefficients.
pub type SmallPoly = LaurentPoly<i64>;
