//! Exact computation of the quadratic Chabauty locus of a once-punctured
//! elliptic curve `Y = E \ {∞}` over ℚ of Mordell–Weil rank 0.
//!
//! A non-zero torsion point `Q` lies in the locus iff its stable height
//! `H^st(Q) = ((-1)^{n+1} n Res_Q(ψ_n⁻¹ ω))^{1/n²} · Δ^{1/12}` is a rational
//! element of ℚ⊗ℚ̄^× whose valuations land in the per-prime value sets
//! `W_ℓ^st`. Everything here is exact: rationals, number-field towers of
//! depth at most two, and formal radicals with rational exponents.
//!
//! Module map:
//!
//! * [`exact`]: rationals, polynomials and their factorization, number
//!   towers, formal radicals, p-adic root counting.
//! * [`curve`]: Weierstrass models, group law, division polynomials,
//!   Laurent expansions at infinity, torsion enumeration.
//! * [`torsor`]: the 𝔾_m-torsor over `E` and its self-maps `β_n^s`.
//! * [`reduction`]: minimal models, Tate's algorithm, value sets.
//! * [`residue`]: residues at torsion points and the stable height.
//! * [`locus`]: the membership test and the per-prime `Z(ℚ_p)` report.
//! * [`heights`]: local heights at finite places of quadratic fields.
//! * [`nilpotent`]: dimension counts for free nilpotent Lie algebras.

pub mod curve;
pub mod error;
pub mod exact;
pub mod heights;
pub mod locus;
pub mod nilpotent;
pub mod reduction;
pub mod residue;
pub mod torsor;

pub use error::{Error, Result};
