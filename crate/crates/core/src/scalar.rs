//! Scalar fields the algebra can be evaluated over.
//!
//! Structure constants are always integers; elements carry coefficients in
//! `f64` for numerical work, [`BigRational`] for exact identity checks, or a
//! symbolic polynomial (see [`crate::symbolic::Poly`]).

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + MulAssign
{
    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Magnitude used for tolerance checks; exact types report 0 or 1.
    fn magnitude(&self) -> f64;
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::from_ratio(num, den)
}

/// 1/k! as a scalar.
pub(crate) fn inv_factorial<S: Scalar>(k: usize) -> S {
    let mut f: i64 = 1;
    for i in 2..=k as i64 {
        f *= i;
    }
    S::from_ratio(1, f)
}
