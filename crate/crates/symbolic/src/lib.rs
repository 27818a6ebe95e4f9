//! Exact symbolic algebra for jet-space computations.
//!
//! Polynomials and rational functions with exact coefficients, scalar
//! expressions and differential forms on named charts, a small text syntax
//! for both, and dense linear algebra over any [`Field`].
//!
//! Everything is generic over the coefficient type [`Scalar`]; the aliases
//! below fix it to arbitrary-precision rationals, which is what the rest of
//! the workspace uses.

pub mod chart;
pub mod error;
pub mod expr;
pub mod form;
pub mod gcd;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod scalar;

pub use chart::Chart;
pub use error::SymbolicError;
pub use expr::Expr;
pub use form::{Form, MultiIndex, Substitution, VectorField};
pub use linalg::Matrix;
pub use parse::{parse_expr, parse_form};
pub use poly::{Monomial, Poly, Var};
pub use ratfunc::RatFunc;
pub use scalar::{format_scalar, Field, Scalar};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Exact rational numbers.
pub type Q = BigRational;
pub type Polynomial = Poly<Q>;
pub type RationalFunction = RatFunc<Q>;
pub type Expression = Expr<Q>;
pub type DifferentialForm = Form<Q>;
pub type Vector = VectorField<Q>;
pub type ChartMap = Substitution<Q>;

/// Rational constant `n / d`. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}
