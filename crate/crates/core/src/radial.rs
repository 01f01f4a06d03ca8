//! The radial-map abstraction shared by the power map, its conjugate, the
//! zoom limits and the distortion routines.
//!
//! A radial map `F(r, sigma) = (g(r), sigma)` of the unit ball is determined
//! by its radial profile `g: [0, 1] -> [0, 1]`. All maps in this crate are
//! piecewise power laws `g(r) = c r^k`, so in `log2` coordinates each branch
//! is an affine function with slope `k`.

use crate::error::Result;
use crate::logradius::LogRadius;

/// One power-law piece `log2 g = intercept + exponent * log2 r` on
/// `lower <= log2 r <= upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    /// Left endpoint in `log2 r`; may be `-inf`.
    pub lower: f64,
    /// Right endpoint in `log2 r`.
    pub upper: f64,
    pub exponent: f64,
}

impl Branch {
    /// True when `x` lies strictly inside the branch, away from both endpoints
    /// by more than a few ulps.
    pub fn contains_interior(&self, x: f64) -> bool {
        let slack = 8.0 * f64::EPSILON * x.abs().max(1.0);
        x - self.lower > slack && self.upper - x > slack
    }
}

/// Radial profile of a homeomorphism of the closed unit ball fixing 0 and 1.
pub trait RadialMap {
    /// `log2 g(r)` for `x = log2 r`. The origin maps to the origin.
    fn eval_log(&self, x: LogRadius) -> LogRadius;

    /// The power-law branch containing `x`.
    ///
    /// At an endpoint shared by two branches the branch with the smaller
    /// index (the one nearer `r = 1`) is returned.
    fn branch_at(&self, x: LogRadius) -> Result<Branch>;

    /// Distinct exponents taken by the branches, in no particular order.
    fn exponents(&self) -> Vec<f64>;
}

/// `g(r) = r^alpha`, the single-branch radial stretch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerMap {
    alpha: f64,
}

impl PowerMap {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(PowerMap { alpha })
        } else {
            Err(crate::Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "exponent must be positive and finite",
            })
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl RadialMap for PowerMap {
    fn eval_log(&self, x: LogRadius) -> LogRadius {
        match x.finite() {
            None => LogRadius::ORIGIN,
            Some(x) => LogRadius::clamped(self.alpha * x),
        }
    }

    fn branch_at(&self, x: LogRadius) -> Result<Branch> {
        x.finite().ok_or(crate::Error::OriginNotAllowed)?;
        Ok(Branch {
            lower: f64::NEG_INFINITY,
            upper: 0.0,
            exponent: self.alpha,
        })
    }

    fn exponents(&self) -> Vec<f64> {
        vec![self.alpha]
    }
}
