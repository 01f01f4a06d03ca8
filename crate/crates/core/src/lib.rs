//! Radial quasiconformal maps of the unit ball that are not simple at the
//! origin.
//!
//! The crate builds the piecewise power-law homeomorphism
//! [`PiecewisePowerMap`], its conjugate [`ConjugatedMap`] `h = f^{-1}(f/2)`
//! (an attracting, uniformly quasiconformal map), the closed-form zoom limits
//! of both at the origin ([`LimitFunction`]), and their distortion. Every
//! radius is carried as its base-2 logarithm ([`LogRadius`]) so that the
//! construction stays exact to roundoff at arbitrary depth.
//!
//! ```
//! use qcspace::{LogRadius, PiecewisePowerMap};
//!
//! let f = PiecewisePowerMap::build_standard_map(2.0, 1000).unwrap();
//! // f(r_n) = 2^{-n}
//! assert_eq!(f.eval_log(f.breakpoint(7)).log2(), -7.0);
//! assert_eq!(f.eval_log(LogRadius::UNIT).log2(), 0.0);
//! ```

pub mod distortion;
pub mod error;
pub mod logradius;
pub mod powermap;
pub mod radial;
pub mod uqrmap;
pub mod verify;
pub mod zoom;

pub use distortion::{
    finite_difference_distortion, iterate_max_distortion, linear_distortion_radial, max_distortion,
    pointwise_distortion, radial_power_distortion, DistortionReport, Location,
};
pub use error::{Error, Result};
pub use logradius::LogRadius;
pub use powermap::{recurrence_log2_breakpoints, PiecewisePowerMap, DEFAULT_DEPTH};
pub use radial::{Branch, PowerMap, RadialMap};
pub use uqrmap::{h_via_conjugacy, ConjugatedMap, IteratedMap};
pub use zoom::{
    example_1d_mean_radius, example_1d_rescaled, homogeneity_defect, ivt_sample, rescaled_eval,
    zoom_limit_deviation, LimitFunction, LimitKind, ZoomSequence, Zoomable,
};

/// `count` points uniform in `log2 r` on `[lo, hi]` (both ends included).
pub fn log_uniform_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<LogRadius>> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi && hi <= 0.0) {
        return Err(Error::InvalidParameter {
            name: "grid",
            value: lo,
            reason: "grid needs finite bounds lo <= hi <= 0",
        });
    }
    match count {
        0 => Ok(Vec::new()),
        1 => Ok(vec![LogRadius::new(hi)?]),
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            (0..count)
                .map(|i| {
                    let v = if i == count - 1 {
                        hi
                    } else {
                        lo + step * i as f64
                    };
                    LogRadius::new(v.min(0.0))
                })
                .collect()
        }
    }
}
