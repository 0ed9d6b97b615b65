//! Exact symbolic arithmetic: affine integer expressions over the
//! starting-label symbols `c_i`, and multivariate Laurent polynomials whose
//! exponents are such expressions.

mod affine;
mod json;
mod poly;

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_traits::Signed;
use thiserror::Error;

pub use affine::{AffineInt, SymbolId};
pub use poly::{LaurentPoly, Term, VarIndex};

/// Coefficient ring of a [`LaurentPoly`]: any exact signed integer type.
pub trait Coeff: Signed + Clone + Ord + Hash + Debug + Display + FromStr + From<i64> + Send + Sync + 'static {}

impl<T> Coeff for T where T: Signed + Clone + Ord + Hash + Debug + Display + FromStr + From<i64> + Send + Sync + 'static {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("term in {found} where only {expected} or constants are allowed")]
    MixedVariable { expected: VarIndex, found: VarIndex },
    #[error("no value assigned to symbol {0}")]
    MissingSymbol(SymbolId),
    #[error("exponent {0} still contains symbols")]
    SymbolicExponent(AffineInt),
    #[error("parse error: {0}")]
    Parse(String),
}
