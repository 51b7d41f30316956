//! Exact arithmetic in the ring of Eisenstein integers ℤ[ζ], ζ = e^{2πi/3},
//! its fraction field ℚ(ζ), and the fixed-denominator rationals (1/12)ℤ that
//! cocycle values live in.
//!
//! Conventions used throughout the crate:
//!
//! ```text
//! ζ² = −1 − ζ          conj(a + bζ) = (a − b) − bζ
//! Norm(a + bζ) = a² − ab + b²       Tr(a + bζ) = 2a − b
//! √−3 := 1 + 2ζ        (1 + 2ζ)² = −3
//! ```
//!
//! Coefficients are arbitrary precision: entries of products of a few dozen
//! group generators overflow any fixed-width integer well inside the word
//! lengths the sampling suites use.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

/// Errors from exact ring and ideal operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithmeticError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{dividend} is not divisible by {divisor}")]
    NotDivisible { dividend: String, divisor: String },
    #[error("the zero ideal is not supported")]
    ZeroIdeal,
}

/// An Eisenstein integer a + bζ with ζ = e^{2πi/3}.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct EisensteinInt {
    a: BigInt,
    b: BigInt,
}

impl EisensteinInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        EisensteinInt { a: a.into(), b: b.into() }
    }

    pub fn zero() -> Self {
        EisensteinInt::new(0, 0)
    }

    pub fn one() -> Self {
        EisensteinInt::new(1, 0)
    }

    pub fn zeta() -> Self {
        EisensteinInt::new(0, 1)
    }

    /// √−3 = 1 + 2ζ.
    pub fn sqrt_minus_three() -> Self {
        EisensteinInt::new(1, 2)
    }

    /// Coefficient of 1.
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// Coefficient of ζ.
    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// Complex conjugate: conj(a + bζ) = (a − b) − bζ.
    pub fn conj(&self) -> Self {
        EisensteinInt { a: &self.a - &self.b, b: -&self.b }
    }

    /// Norm(a + bζ) = a² − ab + b², always a nonnegative rational integer.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    /// Tr(a + bζ) = 2a − b.
    pub fn trace(&self) -> BigInt {
        2 * &self.a - &self.b
    }

    /// Tr(w / √−3) for w = a + bζ, which collapses to the ζ-coefficient b.
    ///
    /// The unit tests pin this closed form against the long route through
    /// conj(√−3) / Norm(√−3).
    pub fn tr_over_sqrt_minus3(&self) -> BigInt {
        self.b.clone()
    }

    /// The six units ±1, ±ζ, ±ζ².
    pub fn units() -> [EisensteinInt; 6] {
        [
            EisensteinInt::new(1, 0),
            EisensteinInt::new(-1, 0),
            EisensteinInt::new(0, 1),
            EisensteinInt::new(0, -1),
            EisensteinInt::new(-1, -1),
            EisensteinInt::new(1, 1),
        ]
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// True when this element is the canonical representative of its
    /// associate class: zero, or of argument in [0, π/3).
    ///
    /// In coefficients the sector condition is 0 ≤ b < a (the boundary ray
    /// arg = π/3 is excluded, so 1 + ζ is not canonical but its associate 1
    /// is).
    pub fn is_canonical_associate(&self) -> bool {
        self.is_zero() || (!self.b.is_negative() && self.b < self.a)
    }

    /// The unique associate uw (u a unit) with argument in [0, π/3), or zero.
    pub fn canonical_associate(&self) -> Self {
        if self.is_zero() {
            return EisensteinInt::zero();
        }
        for u in EisensteinInt::units() {
            let candidate = &u * self;
            if candidate.is_canonical_associate() {
                return candidate;
            }
        }
        unreachable!("the six units rotate by multiples of π/3 and cover every sector once")
    }

    pub fn divides(&self, other: &EisensteinInt) -> bool {
        self.div_exact(other).is_ok()
    }

    /// other / self, failing unless the quotient is integral.
    pub fn div_exact(&self, other: &EisensteinInt) -> Result<EisensteinInt, ArithmeticError> {
        if self.is_zero() {
            return Err(ArithmeticError::DivisionByZero);
        }
        let n = self.norm();
        let x = other * &self.conj();
        if (&x.a % &n).is_zero() && (&x.b % &n).is_zero() {
            Ok(EisensteinInt { a: x.a / &n, b: x.b / n })
        } else {
            Err(ArithmeticError::NotDivisible {
                dividend: other.to_string(),
                divisor: self.to_string(),
            })
        }
    }

    /// Euclidean division by coefficient rounding: returns (q, r) with
    /// self = q·d + r and Norm(r) < Norm(d).
    pub fn div_round(&self, d: &EisensteinInt) -> Result<(EisensteinInt, EisensteinInt), ArithmeticError> {
        if d.is_zero() {
            return Err(ArithmeticError::DivisionByZero);
        }
        let n = d.norm();
        let x = self * &d.conj();
        let q = EisensteinInt { a: round_div(&x.a, &n), b: round_div(&x.b, &n) };
        let r = self - &(&q * d);
        debug_assert!(r.norm() < n, "rounding division must shrink the norm");
        Ok((q, r))
    }

    /// Embedding into ℂ via ζ ↦ e^{2πi/3} = −1/2 + i√3/2.
    pub fn embed(&self) -> Complex64 {
        let a = self.a.to_f64().expect("coefficient magnitude within f64 range");
        let b = self.b.to_f64().expect("coefficient magnitude within f64 range");
        Complex64::new(a - 0.5 * b, b * (3.0_f64.sqrt() * 0.5))
    }

    pub fn to_rational(&self) -> EisensteinRational {
        EisensteinRational {
            a: BigRational::from_integer(self.a.clone()),
            b: BigRational::from_integer(self.b.clone()),
        }
    }
}

/// Nearest integer to x/n for n > 0, ties rounded up.
fn round_div(x: &BigInt, n: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (&two * x + n).div_floor(&(&two * n))
}

impl fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let zeta_part = if self.b.is_one() {
            "ζ".to_string()
        } else if (-&self.b).is_one() {
            "-ζ".to_string()
        } else {
            format!("{}ζ", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{zeta_part}")
        } else if self.b.is_negative() {
            write!(f, "{}{}", self.a, zeta_part)
        } else {
            write!(f, "{}+{}", self.a, zeta_part)
        }
    }
}

impl fmt::Debug for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for EisensteinInt {
            type Output = EisensteinInt;
            fn $method(self, rhs: EisensteinInt) -> EisensteinInt {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&EisensteinInt> for EisensteinInt {
            type Output = EisensteinInt;
            fn $method(self, rhs: &EisensteinInt) -> EisensteinInt {
                (&self).$method(rhs)
            }
        }
        impl $trait<EisensteinInt> for &EisensteinInt {
            type Output = EisensteinInt;
            fn $method(self, rhs: EisensteinInt) -> EisensteinInt {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&EisensteinInt> for &EisensteinInt {
    type Output = EisensteinInt;
    fn add(self, rhs: &EisensteinInt) -> EisensteinInt {
        EisensteinInt { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Sub<&EisensteinInt> for &EisensteinInt {
    type Output = EisensteinInt;
    fn sub(self, rhs: &EisensteinInt) -> EisensteinInt {
        EisensteinInt { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Mul<&EisensteinInt> for &EisensteinInt {
    type Output = EisensteinInt;
    fn mul(self, rhs: &EisensteinInt) -> EisensteinInt {
        // (a + bζ)(c + dζ) = (ac − bd) + (ad + bc − bd)ζ  using ζ² = −1 − ζ.
        let ac = &self.a * &rhs.a;
        let bd = &self.b * &rhs.b;
        let ad_bc = &self.a * &rhs.b + &self.b * &rhs.a;
        EisensteinInt { a: ac - &bd, b: ad_bc - bd }
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &EisensteinInt {
    type Output = EisensteinInt;
    fn neg(self) -> EisensteinInt {
        EisensteinInt { a: -&self.a, b: -&self.b }
    }
}

impl Neg for EisensteinInt {
    type Output = EisensteinInt;
    fn neg(self) -> EisensteinInt {
        -&self
    }
}

impl Serialize for EisensteinInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let a = self.a.to_i64().ok_or_else(|| serde::ser::Error::custom("coefficient exceeds i64"))?;
        let b = self.b.to_i64().ok_or_else(|| serde::ser::Error::custom("coefficient exceeds i64"))?;
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&a)?;
        seq.serialize_element(&b)?;
        seq.end()
    }
}

impl<'de> Deserialize<'de> for EisensteinInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let (a, b) = <(i64, i64)>::deserialize(deserializer)?;
        Ok(EisensteinInt::new(a, b))
    }
}

/// A nonzero principal ideal (gen) ⊆ ℤ[ζ], stored via the canonical
/// associate of its generator so that equal ideals compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EisensteinIdeal {
    gen: EisensteinInt,
}

impl EisensteinIdeal {
    pub fn new(gen: EisensteinInt) -> Result<Self, ArithmeticError> {
        if gen.is_zero() {
            return Err(ArithmeticError::ZeroIdeal);
        }
        Ok(EisensteinIdeal { gen: gen.canonical_associate() })
    }

    /// The canonical generator, of argument in [0, π/3).
    pub fn gen(&self) -> &EisensteinInt {
        &self.gen
    }

    pub fn contains(&self, w: &EisensteinInt) -> bool {
        self.gen.divides(w)
    }

    /// Norm of the ideal = Norm of any generator.
    pub fn norm(&self) -> BigInt {
        self.gen.norm()
    }

    /// The ideal k·(gen) for a nonzero scalar k.
    pub fn scaled(&self, k: &EisensteinInt) -> Result<Self, ArithmeticError> {
        EisensteinIdeal::new(k * &self.gen)
    }

    /// 2·(gen), the conductor the non-compact sampling suites target.
    pub fn doubled(&self) -> Self {
        self.scaled(&EisensteinInt::new(2, 0)).expect("doubling a nonzero ideal")
    }
}

impl fmt::Display for EisensteinIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.gen)
    }
}

impl fmt::Debug for EisensteinIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for EisensteinIdeal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(1))?;
        map.serialize_entry("gen", &self.gen)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for EisensteinIdeal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            gen: EisensteinInt,
        }
        let raw = Raw::deserialize(deserializer)?;
        EisensteinIdeal::new(raw.gen).map_err(de::Error::custom)
    }
}

/// An element of ℚ(ζ) with exact rational coefficients: a + bζ.
///
/// This is the coefficient field for the exact ball-model evaluations; only
/// the final logarithms leave it.
#[derive(Clone, PartialEq, Eq)]
pub struct EisensteinRational {
    a: BigRational,
    b: BigRational,
}

impl EisensteinRational {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        EisensteinRational { a, b }
    }

    pub fn from_integers(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        EisensteinInt::new(a, b).to_rational()
    }

    /// a/c + (b/c)ζ for integer inputs, c ≠ 0.
    pub fn from_fraction(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        let c: BigInt = c.into();
        assert!(!c.is_zero(), "zero denominator");
        EisensteinRational {
            a: BigRational::new(a.into(), c.clone()),
            b: BigRational::new(b.into(), c),
        }
    }

    pub fn zero() -> Self {
        EisensteinRational::from_integers(0, 0)
    }

    pub fn one() -> Self {
        EisensteinRational::from_integers(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        EisensteinRational { a: &self.a - &self.b, b: -&self.b }
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    /// Real part under the complex embedding: a − b/2, exactly.
    pub fn real_part(&self) -> BigRational {
        &self.a - &self.b / BigRational::from_integer(2.into())
    }

    pub fn inverse(&self) -> Result<Self, ArithmeticError> {
        if self.is_zero() {
            return Err(ArithmeticError::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conj();
        Ok(EisensteinRational { a: c.a / &n, b: c.b / n })
    }

    pub fn div(&self, rhs: &EisensteinRational) -> Result<Self, ArithmeticError> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn embed(&self) -> Complex64 {
        let a = rational_to_f64(&self.a);
        let b = rational_to_f64(&self.b);
        Complex64::new(a - 0.5 * b, b * (3.0_f64.sqrt() * 0.5))
    }
}

fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("rational magnitude within f64 range")
}

impl fmt::Display for EisensteinRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "({})ζ", self.b)
        } else {
            write!(f, "{}+({})ζ", self.a, self.b)
        }
    }
}

impl fmt::Debug for EisensteinRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add<&EisensteinRational> for &EisensteinRational {
    type Output = EisensteinRational;
    fn add(self, rhs: &EisensteinRational) -> EisensteinRational {
        EisensteinRational { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Sub<&EisensteinRational> for &EisensteinRational {
    type Output = EisensteinRational;
    fn sub(self, rhs: &EisensteinRational) -> EisensteinRational {
        EisensteinRational { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Mul<&EisensteinRational> for &EisensteinRational {
    type Output = EisensteinRational;
    fn mul(self, rhs: &EisensteinRational) -> EisensteinRational {
        let ac = &self.a * &rhs.a;
        let bd = &self.b * &rhs.b;
        let ad_bc = &self.a * &rhs.b + &self.b * &rhs.a;
        EisensteinRational { a: ac - &bd, b: ad_bc - bd }
    }
}

impl Neg for &EisensteinRational {
    type Output = EisensteinRational;
    fn neg(self) -> EisensteinRational {
        EisensteinRational { a: -&self.a, b: -&self.b }
    }
}

/// An exact element of (1/12)ℤ, stored as its numerator over the fixed
/// denominator 12.
///
/// Cocycle defects live in this group; sums and differences never leave it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Twelfth {
    num: i64,
}

impl Twelfth {
    /// The element num/12.
    pub fn new(num: i64) -> Self {
        Twelfth { num }
    }

    pub fn zero() -> Self {
        Twelfth { num: 0 }
    }

    pub fn from_integer(n: i64) -> Self {
        Twelfth { num: 12 * n }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / 12.0
    }

    pub fn is_integer(&self) -> bool {
        self.num % 12 == 0
    }

    /// True when the value lies in n·ℤ for a positive integer n.
    pub fn is_multiple_of(&self, n: i64) -> bool {
        assert!(n > 0);
        self.num % (12 * n) == 0
    }

    pub fn scaled(&self, k: i64) -> Twelfth {
        Twelfth { num: self.num.checked_mul(k).expect("twelfth overflow") }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.into(), 12.into())
    }
}

impl Add for Twelfth {
    type Output = Twelfth;
    fn add(self, rhs: Twelfth) -> Twelfth {
        Twelfth { num: self.num.checked_add(rhs.num).expect("twelfth overflow") }
    }
}

impl AddAssign for Twelfth {
    fn add_assign(&mut self, rhs: Twelfth) {
        *self = *self + rhs;
    }
}

impl Sub for Twelfth {
    type Output = Twelfth;
    fn sub(self, rhs: Twelfth) -> Twelfth {
        self + (-rhs)
    }
}

impl Neg for Twelfth {
    type Output = Twelfth;
    fn neg(self) -> Twelfth {
        Twelfth { num: -self.num }
    }
}

impl std::iter::Sum for Twelfth {
    fn sum<I: Iterator<Item = Twelfth>>(iter: I) -> Twelfth {
        iter.fold(Twelfth::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Twelfth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.num.unsigned_abs().gcd(&12) as i64;
        let (p, q) = (self.num / g, 12 / g);
        if q == 1 {
            write!(f, "{p}")
        } else {
            write!(f, "{p}/{q}")
        }
    }
}

impl fmt::Debug for Twelfth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Twelfth {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}
