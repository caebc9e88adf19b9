//! Edge-weight scalar abstraction.
//!
//! Graph and MST code only needs ordering, addition and a way to project a
//! weight to `f64` for sampling probabilities. Anything satisfying [`Weight`]
//! works: `f32`, `f64`, or an exact type such as `Rational64` when tied sums
//! must compare exactly.

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// A strictly-positive edge weight.
pub trait Weight: Num + Copy + PartialOrd + Debug + ToPrimitive + Send + Sync + 'static {
    /// Positive and finite.
    fn is_valid_weight(&self) -> bool {
        *self > Self::zero() && self.to_f64().is_some_and(f64::is_finite)
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Weight for T where T: Num + Copy + PartialOrd + Debug + ToPrimitive + Send + Sync + 'static {}

/// Floating-point weights, as produced by the random generators.
pub trait FloatWeight: Weight + Float + FromPrimitive {
    /// Narrow an `f64` draw into this type.
    fn from_f64_lossy(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).unwrap_or_else(Self::nan)
    }
}

impl<T> FloatWeight for T where T: Weight + Float + FromPrimitive {}

/// Total order for weights already known to be valid (never NaN).
pub(crate) fn cmp_weights<W: Weight>(a: &W, b: &W) -> std::cmp::Ordering {
    a.partial_cmp(b).expect("weights are totally ordered")
}
