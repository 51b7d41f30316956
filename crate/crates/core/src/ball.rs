//! The ball model of complex hyperbolic space and the automorphy factors
//! living on it.
//!
//! Points are τ = (τ₁, …, τ_d) ∈ ℂᵈ with
//!
//! ```text
//!     ℋ = { τ : 2·Re(τ₁) + Σ_{i≥2} |τᵢ|² < 0 } ,
//! ```
//!
//! and g ∈ SU(d,1) acts through its block decomposition g = (A B; C D) with
//! A of size d×d:
//!
//! ```text
//!     g·τ = (Aτ + B)/j(g, τ),      j(g, τ) = Cτ + D.
//! ```
//!
//! The branch-corrected logarithm of j is j̃(g, τ) = log(j/X(g)) + log(X(g))
//! with principal logs; it is well defined because Re(j(g,τ)/X(g)) > 0 on
//! all of ℋ (the half-plane inequality, probed exhaustively by the test
//! suites).
//!
//! At d = 2 exact group matrices admit a parallel evaluation over ℚ(ζ):
//! rational base points keep j and g·τ exact, so only the final logarithms
//! round. This is what the cocycle evaluator runs on for words.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;
use rand::Rng;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::eisenstein::EisensteinRational;
use crate::group::GroupMatrix;
use crate::numeric::{principal_log, NumericMatrix};

/// Slack allowed on the defining inequality of ℋ when it is evaluated in
/// floating point; exact evaluations use 0.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// |j| below this is treated as a singular denominator.
pub const SINGULAR_J_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BallError {
    #[error("matrix dimension {matrix} does not match point dimension {point}")]
    DimensionMismatch { matrix: usize, point: usize },
    #[error("point lies outside the domain (membership defect {defect:+e})")]
    OutsideDomain { defect: f64 },
    #[error("automorphy denominator too close to zero (|j| = {abs:e})")]
    NearSingularJ { abs: f64 },
    #[error("X(g) = 0, matrix cannot belong to SU(d,1)")]
    ZeroX,
}

/// A point of ℂᵈ, d ≥ 2; coords[0] is τ₁.
#[derive(Clone, Debug, PartialEq)]
pub struct BallPoint {
    coords: Vec<Complex64>,
}

impl BallPoint {
    pub fn new(coords: Vec<Complex64>) -> Self {
        assert!(coords.len() >= 2, "the ball model starts at dimension 2");
        BallPoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    /// 2·Re(τ₁) + Σ_{i≥2} |τᵢ|²; negative inside ℋ.
    pub fn membership_defect(&self) -> f64 {
        2.0 * self.coords[0].re + self.coords[1..].iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    pub fn is_interior(&self) -> bool {
        self.membership_defect() < 0.0
    }
}

impl Serialize for BallPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coords.len()))?;
        for c in &self.coords {
            seq.serialize_element(&[c.re, c.im])?;
        }
        seq.end()
    }
}

/// The default evaluation point (−1, 0, …, 0).
pub fn default_base_point(d: usize) -> BallPoint {
    let mut coords = vec![Complex64::new(0.0, 0.0); d];
    coords[0] = Complex64::new(-1.0, 0.0);
    BallPoint::new(coords)
}

/// An independent second point used to cross-check base-point invariance:
/// (−2, (1+ζ)/2, 0.1, …, 0.1).
pub fn second_base_point(d: usize) -> BallPoint {
    let mut coords = vec![Complex64::new(0.1, 0.0); d];
    coords[0] = Complex64::new(-2.0, 0.0);
    coords[1] = EisensteinRational::from_fraction(1, 1, 2).embed();
    BallPoint::new(coords)
}

/// A random interior point with membership margin at least 0.1.
pub fn random_ball_point<R: Rng + ?Sized>(rng: &mut R, d: usize) -> BallPoint {
    let mut coords = vec![Complex64::new(0.0, 0.0); d];
    let mut square_sum = 0.0;
    for c in coords.iter_mut().skip(1) {
        *c = Complex64::new(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7));
        square_sum += c.norm_sqr();
    }
    let margin = 0.1 + rng.gen_range(0.0..2.0);
    coords[0] = Complex64::new(-(square_sum + margin) / 2.0, rng.gen_range(-1.5..1.5));
    BallPoint::new(coords)
}

fn check_dims(g: &NumericMatrix, tau: &BallPoint) -> Result<(), BallError> {
    if g.dim() != tau.dim() {
        return Err(BallError::DimensionMismatch { matrix: g.dim(), point: tau.dim() });
    }
    Ok(())
}

/// j(g, τ) = Cτ + D, the bottom row of g paired with (τ, 1).
pub fn j_factor(g: &NumericMatrix, tau: &BallPoint) -> Result<Complex64, BallError> {
    check_dims(g, tau)?;
    let d = tau.dim();
    let mut j = g.entry(d, d);
    for (k, c) in tau.coords().iter().enumerate() {
        j += g.entry(d, k) * c;
    }
    Ok(j)
}

/// X(g): −g_{d+1,1} when that entry is nonzero, otherwise g_{d+1,d+1}.
pub fn x_factor_numeric(g: &NumericMatrix) -> Complex64 {
    let d = g.dim();
    let corner = g.entry(d, 0);
    if corner != Complex64::new(0.0, 0.0) {
        -corner
    } else {
        g.entry(d, d)
    }
}

/// The fractional-linear action g·τ = (Aτ + B)/j(g, τ).
pub fn act(g: &NumericMatrix, tau: &BallPoint) -> Result<BallPoint, BallError> {
    check_dims(g, tau)?;
    let defect_in = tau.membership_defect();
    if defect_in >= MEMBERSHIP_TOL {
        return Err(BallError::OutsideDomain { defect: defect_in });
    }
    let j = j_factor(g, tau)?;
    if j.norm() < SINGULAR_J_TOL {
        return Err(BallError::NearSingularJ { abs: j.norm() });
    }
    let d = tau.dim();
    let mut coords = Vec::with_capacity(d);
    for row in 0..d {
        let mut acc = g.entry(row, d);
        for (k, c) in tau.coords().iter().enumerate() {
            acc += g.entry(row, k) * c;
        }
        coords.push(acc / j);
    }
    let image = BallPoint::new(coords);
    let defect_out = image.membership_defect();
    if defect_out >= MEMBERSHIP_TOL {
        return Err(BallError::OutsideDomain { defect: defect_out });
    }
    Ok(image)
}

/// j̃(g, τ) = log(j(g,τ)/X(g)) + log(X(g)), both logarithms principal.
pub fn j_tilde(g: &NumericMatrix, tau: &BallPoint) -> Result<Complex64, BallError> {
    let j = j_factor(g, tau)?;
    if j.norm() < SINGULAR_J_TOL {
        return Err(BallError::NearSingularJ { abs: j.norm() });
    }
    let x = x_factor_numeric(g);
    if x == Complex64::new(0.0, 0.0) {
        return Err(BallError::ZeroX);
    }
    Ok(principal_log(j / x) + principal_log(x))
}

/// Re(j(g,τ)/X(g)); positive on all of ℋ for g ∈ SU(d,1).
pub fn halfplane_margin(g: &NumericMatrix, tau: &BallPoint) -> Result<f64, BallError> {
    let j = j_factor(g, tau)?;
    let x = x_factor_numeric(g);
    if x == Complex64::new(0.0, 0.0) {
        return Err(BallError::ZeroX);
    }
    Ok((j / x).re)
}

/// Embedding of an exact group matrix into the d = 2 numeric model.
pub fn embed_matrix(g: &GroupMatrix) -> NumericMatrix {
    let mut m = NumericMatrix::zero(2);
    for i in 0..3 {
        for j in 0..3 {
            *m.entry_mut(i, j) = g.entry(i, j).embed();
        }
    }
    m
}

/// A point of the d = 2 ball with coordinates in ℚ(ζ).
#[derive(Clone, Debug, PartialEq)]
pub struct ExactBallPoint {
    pub t1: EisensteinRational,
    pub t2: EisensteinRational,
}

impl ExactBallPoint {
    pub fn new(t1: EisensteinRational, t2: EisensteinRational) -> Self {
        ExactBallPoint { t1, t2 }
    }

    /// The default base point (−1, 0).
    pub fn base() -> Self {
        ExactBallPoint::new(EisensteinRational::from_integers(-1, 0), EisensteinRational::zero())
    }

    /// The cross-check base point (−2, (1+ζ)/2).
    pub fn second_base() -> Self {
        ExactBallPoint::new(
            EisensteinRational::from_integers(-2, 0),
            EisensteinRational::from_fraction(1, 1, 2),
        )
    }

    /// 2·Re(τ₁) + Norm(τ₂) as an exact rational.
    pub fn membership_defect(&self) -> BigRational {
        self.t1.real_part() * BigRational::from_integer(2.into()) + self.t2.norm()
    }

    pub fn is_interior(&self) -> bool {
        self.membership_defect().is_negative()
    }

    pub fn embed(&self) -> BallPoint {
        BallPoint::new(vec![self.t1.embed(), self.t2.embed()])
    }
}

/// A random exact interior point with membership margin ≥ 1/8, built from
/// small rationals.
pub fn random_exact_ball_point<R: Rng + ?Sized>(rng: &mut R) -> ExactBallPoint {
    let t2 = EisensteinRational::from_fraction(rng.gen_range(-4i64..=4), rng.gen_range(-4i64..=4), 8);
    let margin = BigRational::new(rng.gen_range(1i64..=16).into(), 8.into());
    // Solve 2·Re(τ₁) = −Norm(τ₂) − margin with Re(τ₁) = x − y/2 exactly.
    let y = BigRational::new(rng.gen_range(-2i64..=2).into(), 2.into());
    let re = -(t2.norm() + margin) / BigRational::from_integer(2.into());
    let x = &re + &y / BigRational::from_integer(2.into());
    let t1 = EisensteinRational::new(x, y);
    let point = ExactBallPoint::new(t1, t2);
    debug_assert!(point.is_interior());
    point
}

/// j(g, τ) over ℚ(ζ).
pub fn j_exact(g: &GroupMatrix, tau: &ExactBallPoint) -> EisensteinRational {
    let row = |col: usize| g.entry(2, col).to_rational();
    &(&(&row(0) * &tau.t1) + &(&row(1) * &tau.t2)) + &row(2)
}

/// Exact action at d = 2; returns (g·τ, j(g, τ)).
pub fn act_exact(
    g: &GroupMatrix,
    tau: &ExactBallPoint,
) -> Result<(ExactBallPoint, EisensteinRational), BallError> {
    if !tau.is_interior() {
        return Err(BallError::OutsideDomain {
            defect: crate::eisenstein_rational_to_f64(&tau.membership_defect()),
        });
    }
    let j = j_exact(g, tau);
    if j.is_zero() {
        return Err(BallError::NearSingularJ { abs: 0.0 });
    }
    let lift = |r: usize, c: usize| g.entry(r, c).to_rational();
    let num1 = &(&(&lift(0, 0) * &tau.t1) + &(&lift(0, 1) * &tau.t2)) + &lift(0, 2);
    let num2 = &(&(&lift(1, 0) * &tau.t1) + &(&lift(1, 1) * &tau.t2)) + &lift(1, 2);
    let image = ExactBallPoint::new(num1.div(&j).expect("j nonzero"), num2.div(&j).expect("j nonzero"));
    if !image.is_interior() {
        return Err(BallError::OutsideDomain {
            defect: crate::eisenstein_rational_to_f64(&image.membership_defect()),
        });
    }
    Ok((image, j))
}

/// j̃ from the exact path: only the two logarithms are floating point.
pub fn j_tilde_exact(g: &GroupMatrix, tau: &ExactBallPoint) -> Result<Complex64, BallError> {
    let j = j_exact(g, tau);
    if j.is_zero() {
        return Err(BallError::NearSingularJ { abs: 0.0 });
    }
    let x = g.x_factor();
    if x.is_zero() {
        return Err(BallError::ZeroX);
    }
    let jc = j.embed();
    let xc = x.embed();
    Ok(principal_log(jc / xc) + principal_log(xc))
}

/// Exact half-plane margin Re(j(g,τ)/X(g)) ∈ ℚ.
pub fn halfplane_margin_exact(g: &GroupMatrix, tau: &ExactBallPoint) -> Result<BigRational, BallError> {
    let x = g.x_factor();
    if x.is_zero() {
        return Err(BallError::ZeroX);
    }
    let q = j_exact(g, tau).div(&x.to_rational()).expect("X nonzero");
    Ok(q.real_part())
}
