//! Exact scalar fields.
//!
//! Everything downstream is generic over [`Field`]; the two instances in use
//! are [`Rational`] (exact points) and [`RationalFunction`] (the function
//! field ℚ(t), used for generic-parameter computations along deformation
//! families).

mod poly;
mod ratfunc;
mod rational;
mod sturm;

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

pub use poly::Polynomial;
pub use ratfunc::{rf_eval, RationalFunction};
pub use rational::{parse_rational, rat, Rational};
pub use sturm::{sturm_real_root_count, sturm_sequence, Bound};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("pole: denominator vanishes at t = {0}")]
    Pole(Rational),
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
}

/// A field with exact, canonical-form elements.
///
/// Equality must be structural: two elements compare equal iff they are the
/// same field element.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_rational(r: &Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// `self / other`; panics on division by zero.
    fn div(&self, other: &Self) -> Self {
        self.clone() * other.inv().expect("division by zero")
    }

    /// True when the element is a constant of the prime field ℚ.
    fn as_rational(&self) -> Option<Rational>;
}
