use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, Num};

/// Real scalar used by the statistical routines.
///
/// Implemented for every float type that can be built from primitive
/// integers and `f64` literals, which in practice means `f32` and `f64`.
pub trait Scalar: Float + FromPrimitive + Debug + Send + Sync + 'static {
    /// Converts an `f64` constant, panicking only for types that cannot
    /// represent ordinary finite literals.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("scalar literal out of range")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count out of range")
    }
}

impl<T> Scalar for T where T: Float + FromPrimitive + Debug + Send + Sync + 'static {}

/// Value type of an ECDF ordinate.
///
/// ECDF proportions are ratios of integer counts, so besides floats they can
/// be computed exactly with `num_rational::Ratio<i64>`.
pub trait Proportion: Num + Clone + PartialOrd + FromPrimitive + Debug {
    fn ratio(count: usize, total: usize) -> Self {
        let num = Self::from_usize(count).expect("count out of range");
        let den = Self::from_usize(total).expect("count out of range");
        num / den
    }
}

impl<P> Proportion for P where P: Num + Clone + PartialOrd + FromPrimitive + Debug {}
