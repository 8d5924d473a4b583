//! Exact arithmetic substrate.
//!
//! Rationals are `num_rational::BigRational`, always stored reduced. Every
//! other structure here (polynomials, tower elements, formal radicals) is
//! built on top of them and is immutable once constructed.

pub mod factor;
pub mod modp;
pub mod padic;
pub mod poly;
pub mod primes;
pub mod radical;
pub mod scalar;
pub mod tower;

pub use factor::{factor_bounded, poly_factor, squarefree_decomposition, BoundedFactorization};
pub use poly::{Poly, RationalPolynomial};
pub use scalar::{parse_rational, rat, Rational, Scalar};
pub use tower::{is_root_of_unity, tower_minimal_polynomial, NumberTower, TowerElement};
pub use radical::{radical_equal, radical_rational_part, radical_valuation, FormalRadical, PrimeExponentMap, RadicalBase};
pub use padic::count_roots_qp;
