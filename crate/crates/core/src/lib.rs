//! Arithmetic of the Picard modular group Γ = SU(2,1; ℤ[ζ]), the integer
//! 2-cocycle of the universal cover of SU(d,1) on the complex hyperbolic
//! ball, and exact splittings of that cocycle over the congruence subgroup
//! Υ ⊂ Γ(√−3).
//!
//! The crate is organized in layers:
//!
//! * [`eisenstein`] — exact arithmetic in ℤ[ζ] and ℚ(ζ), ideals, and the
//!   fixed-denominator fraction type [`eisenstein::Twelfth`];
//! * [`words`] — free-group words over the five generators n1…n5;
//! * [`group`] — 3×3 matrices over ℤ[ζ], the unitary group of the
//!   antidiagonal form, generator evaluation, congruence subgroups, and
//!   samplers;
//! * [`numeric`] — complex matrices, principal logarithms, the matrix
//!   exponential, and special-unitary samplers for any signature (d,1);
//! * [`ball`] — the unbounded ball model ℋ, the group action, the modified
//!   automorphy factor j̃, and the exact ℚ(ζ) evaluation path;
//! * [`cocycle`] — the integer cocycle σ, the Heisenberg pairing Σ,
//!   κ tables with the splitting σ = Σ + δκ, central extension elements,
//!   and the fractional-weight multiplier;
//! * [`presentation`] — the bundled presentation of Υ, Hermite and Smith
//!   normal forms, the defect extension, and the rational splitting solver.

pub mod ball;
pub mod cocycle;
pub mod eisenstein;
pub mod group;
pub mod numeric;
pub mod presentation;
pub mod words;

pub use ball::{BallError, BallPoint, ExactBallPoint};
pub use cocycle::{
    big_sigma, defect, divisibility_check, multiplier, sigma, verify_split, CocycleError,
    Element, ExtensionElement, KappaTable, SigmaConfig, SigmaOutcome,
};
pub use eisenstein::{ArithmeticError, EisensteinIdeal, EisensteinInt, EisensteinRational, Twelfth};
pub use group::{evaluate, phi, standard_generators, GroupError, GroupMatrix};
pub use numeric::{NumericError, NumericMatrix};
pub use presentation::{
    abelianization, build_extension, derived_kappa_table, solve_split, standard_defects,
    AbelianStructure, IntegerMatrix, Normalization, Presentation, PresentationError,
    SplitSolution,
};
pub use words::{Letter, Word, WordParseError};

use num_rational::BigRational;
use num_traits::ToPrimitive;

/// Best-effort conversion of an exact rational to f64, for diagnostics and
/// the final numeric step of exact evaluations.
pub fn eisenstein_rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
