//! Scalar abstractions shared by the group, polynomial and matrix code.
//!
//! Two levels exist. [`Coefficient`] is the weak ring interface needed to
//! *store and rearrange* coefficients, which includes the symbolic
//! [`ConstExpr`](crate::constexpr::ConstExpr) used for constants too large to
//! materialize. [`Scalar`] adds exact integer arithmetic and is what the
//! collection process, the matrix embedding and the solvers compute with.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Ring-like coefficient: enough structure to build and combine polynomials
/// and group elements, without requiring that values can be compared by size.
pub trait Coefficient:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_i64(v: i64) -> Self;

    /// Whether the value is strictly negative, if that can be decided.
    /// Used only for printing signs.
    fn is_negative_hint(&self) -> bool;
}

/// Exact integer scalar.
pub trait Scalar: Coefficient + Integer + Signed + Ord + Hash + FromPrimitive + ToPrimitive {
    fn to_bigint(&self) -> BigInt;

    fn from_bigint(v: &BigInt) -> Option<Self>;
}

macro_rules! primitive_scalar {
    ($($t:ty),*) => {$(
        impl Coefficient for $t {
            fn from_i64(v: i64) -> Self {
                v as $t
            }

            fn is_negative_hint(&self) -> bool {
                *self < 0
            }
        }

        impl Scalar for $t {
            fn to_bigint(&self) -> BigInt {
                BigInt::from(*self)
            }

            fn from_bigint(v: &BigInt) -> Option<Self> {
                <$t as num_traits::FromPrimitive>::from_i128(v.to_i128()?)
            }
        }
    )*};
}

primitive_scalar!(i64, i128);

impl Coefficient for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn is_negative_hint(&self) -> bool {
        self.is_negative()
    }
}

impl Scalar for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }

    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
}

impl Coefficient for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn is_negative_hint(&self) -> bool {
        self.is_negative()
    }
}
