//! Elliptic curves in Weierstrass form: models, points, division
//! polynomials, expansions at infinity and torsion enumeration.

pub mod divpoly;
pub mod model;
pub mod point;
pub mod series;
pub mod torsion;

pub use divpoly::{division_polynomial, DivisionPolynomial, DivisionPolynomials};
pub use model::{apply_transform, model_invariants, Invariants, ModelTransform, TransformedModel, WeierstrassModel};
pub use point::{point_add, point_mul, point_over_quadratic_field, small_rational_points, CurvePoint};
pub use series::{division_polynomial_at_infinity, laurent_at_infinity, InfinityExpansion, LaurentSeries};
pub use torsion::{
    merge_enumerations, points_of_exact_order, primitive_torsion_polynomials, torsion_enumerate, TorsionEnumeration,
    TorsionPoint, ExcludedTorsion,
};
