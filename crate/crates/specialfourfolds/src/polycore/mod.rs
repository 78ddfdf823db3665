//! Core arithmetic: prime fields, monomials and orders, sparse multivariate
//! polynomials, parsing/printing, dense linear algebra mod p, exact integer
//! determinants, and univariate factorization.

pub mod field;
pub mod linalg;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod unifactor;

pub use field::PrimeField;
pub use linalg::{int_det, int_det_i64, MatFp};
pub use monomial::{Mono, MonomialOrder, MAX_VARS};
pub use parse::{parse_ideal, parse_poly, ParseError};
pub use poly::{Poly, PolyRing};
pub use unifactor::UniPoly;
