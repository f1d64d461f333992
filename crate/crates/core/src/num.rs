//! Scalar abstractions.
//!
//! Simulation kernels are generic over [`Scalar`] (`f32` or `f64`). The closed-form
//! probability identities and decider bounds only need field arithmetic and an
//! ordering, so they are generic over [`Field`], which is also satisfied by exact
//! rationals such as [`num_rational::BigRational`].

use std::fmt::Debug;
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Floating point type usable as an amplitude component.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Default + Send + Sync + 'static
{
    /// Converts an `f64` constant, panicking only for types that cannot represent it.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("scalar conversion")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Ordered field: enough structure for the affine identities and decider bounds.
pub trait Field: Num + Clone + PartialOrd + Debug {}

impl<T: Num + Clone + PartialOrd + Debug> Field for T {}

/// `2^k` for any (possibly negative) exponent.
pub fn pow2<T: Field>(k: i64) -> T {
    let two = T::one() + T::one();
    let mut acc = T::one();
    for _ in 0..k.unsigned_abs() {
        acc = acc * two.clone();
    }
    if k < 0 {
        T::one() / acc
    } else {
        acc
    }
}

pub fn half<T: Field>() -> T {
    T::one() / (T::one() + T::one())
}

/// Clamps into `[0, 1]`; the flag reports whether clamping changed the value.
pub fn clamp_unit<T: Field>(x: T) -> (T, bool) {
    if x < T::zero() {
        (T::zero(), true)
    } else if x > T::one() {
        (T::one(), true)
    } else {
        (x, false)
    }
}

/// Neumaier-compensated sum in the iteration order given.
pub fn compensated_sum<T: Scalar, I: IntoIterator<Item = T>>(values: I) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp = comp + ((sum - t) + v);
        } else {
            comp = comp + ((v - t) + sum);
        }
        sum = t;
    }
    sum + comp
}
