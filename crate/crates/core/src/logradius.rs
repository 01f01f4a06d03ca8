//! Radii in `(0, 1]` stored as their base-2 logarithm.
//!
//! Every breakpoint of the construction is a power of two with a rational
//! exponent, and the breakpoints shrink geometrically: at `K = 2` the
//! breakpoint `r_{2n}` is `2^{-2.5 n}`, which leaves the `f64` exponent range
//! long before `n = 1000`. Working with `log2 r` turns each power law into an
//! affine function and keeps every scale representable.

use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};

/// `log2` of a radius in `[0, 1]`.
///
/// The radius `0` is the value `-inf` and is only produced through
/// [`LogRadius::ORIGIN`]; every other value is finite and `<= 0`.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct LogRadius(f64);

impl LogRadius {
    /// The radius 0.
    pub const ORIGIN: LogRadius = LogRadius(f64::NEG_INFINITY);
    /// The radius 1.
    pub const UNIT: LogRadius = LogRadius(0.0);

    pub fn new(log2: f64) -> Result<Self> {
        if log2.is_finite() && log2 <= 0.0 {
            // fold -0.0 into 0.0 so equality and formatting are uniform
            Ok(LogRadius(log2 + 0.0))
        } else {
            Err(Error::InvalidLogRadius(log2))
        }
    }

    /// Converts a linear radius. `0` maps to [`LogRadius::ORIGIN`].
    pub fn from_radius(r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::RadiusOutOfRange(r));
        }
        if r == 0.0 {
            Ok(Self::ORIGIN)
        } else {
            Self::new(r.log2())
        }
    }

    /// Builds a value from an arithmetic result that is `<= 0` up to roundoff.
    ///
    /// Positive drift is clamped to 0; `-inf` is the origin.
    pub(crate) fn clamped(log2: f64) -> Self {
        debug_assert!(!log2.is_nan());
        if log2 == f64::NEG_INFINITY {
            Self::ORIGIN
        } else {
            LogRadius(log2.min(0.0) + 0.0)
        }
    }

    #[inline]
    pub fn log2(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_origin(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// The finite `log2` value, or `None` for the origin.
    #[inline]
    pub fn finite(self) -> Option<f64> {
        if self.is_origin() {
            None
        } else {
            Some(self.0)
        }
    }

    /// `2^log2`. Underflows to 0 below roughly `log2 r = -1074`.
    pub fn radius(self) -> f64 {
        self.0.exp2()
    }
}

/// Multiplication of radii.
impl Add for LogRadius {
    type Output = LogRadius;

    fn add(self, rhs: LogRadius) -> LogRadius {
        LogRadius::clamped(self.0 + rhs.0)
    }
}

impl fmt::Debug for LogRadius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_origin() {
            write!(f, "LogRadius(origin)")
        } else {
            write!(f, "LogRadius({})", self.0)
        }
    }
}

impl fmt::Display for LogRadius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}
