//! Scalar abstractions shared by the number-theoretic kernel and the oracle.
//!
//! The kernel routines are written once against [`IntScalar`] and run on
//! machine integers (`i64`, `i128`) as well as on arbitrary-precision
//! [`BigInt`](num_bigint::BigInt). Rational code paths use
//! [`num_rational::Ratio`] over the same scalars.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Signed integer scalar usable by the exact arithmetic kernel.
pub trait IntScalar:
    Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync
{
}

impl IntScalar for i32 {}
impl IntScalar for i64 {}
impl IntScalar for i128 {}
impl IntScalar for BigInt {}

/// Converts a small integer into the scalar type.
pub fn lit<T: IntScalar>(n: i64) -> T {
    T::from_i64(n).expect("scalar can represent small literals")
}
