//! Outer, inner and maximal distortion of radial maps of the unit ball.
//!
//! At `x = (t, 0, ..., 0)` the derivative of `F(r, sigma) = (g(r), sigma)`
//! is diagonal with one radial stretch `g'(t)` and `d - 1` tangential
//! stretches `g(t)/t`. With `|F'|` the largest and `l(F')` the smallest
//! stretch and `J` their product over all axes,
//!
//! ```text
//! K_O = |F'|^d / J        K_I = J / l(F')^d
//! ```
//!
//! For a branch `g = c r^k` the ratio of radial to tangential stretch is
//! exactly `k`, so both distortions depend only on the local exponent.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::logradius::LogRadius;
use crate::radial::RadialMap;
use crate::uqrmap::{ConjugatedMap, IteratedMap};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Location {
    /// Pointwise value at this `log2 r`.
    At(f64),
    /// Essential supremum over the ball.
    Supremum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistortionReport {
    pub outer: f64,
    pub inner: f64,
    pub maximal: f64,
    pub location: Location,
    pub dimension: u32,
}

impl DistortionReport {
    fn from_stretches(radial: f64, tangential: f64, dimension: u32, location: Location) -> Self {
        let d = dimension as i32;
        let big = radial.max(tangential);
        let small = radial.min(tangential);
        let jacobian = radial * tangential.powi(d - 1);
        let outer = big.powi(d) / jacobian;
        let inner = jacobian / small.powi(d);
        DistortionReport {
            outer,
            inner,
            maximal: outer.max(inner),
            location,
            dimension,
        }
    }
}

fn check_dimension(d: u32) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParameter {
            name: "dimension",
            value: d as f64,
            reason: "dimension must be at least 2",
        });
    }
    Ok(())
}

/// Distortion of `F(x) = x |x|^{alpha - 1}` in dimension `d`.
pub fn radial_power_distortion(alpha: f64, d: u32) -> Result<DistortionReport> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "exponent must be positive",
        });
    }
    check_dimension(d)?;
    let e = d as i32;
    let (outer, inner) = if alpha >= 1.0 {
        (alpha.powi(e - 1), alpha)
    } else {
        (1.0 / alpha, alpha.powi(1 - e))
    };
    Ok(DistortionReport {
        outer,
        inner,
        maximal: outer.max(inner),
        location: Location::Supremum,
        dimension: d,
    })
}

/// Distortion of the radial extension of `map` at `log2 r = x`.
///
/// Fails on branch endpoints (including `r = 1`), where the derivative does
/// not exist.
pub fn pointwise_distortion<M: RadialMap + ?Sized>(
    map: &M,
    d: u32,
    x: LogRadius,
) -> Result<DistortionReport> {
    check_dimension(d)?;
    let xv = x.finite().ok_or(Error::OriginNotAllowed)?;
    let branch = map.branch_at(x)?;
    if !branch.contains_interior(xv) {
        return Err(Error::NotDifferentiable { log2_r: xv });
    }
    let mut report = radial_power_distortion(branch.exponent, d)?;
    report.location = Location::At(xv);
    Ok(report)
}

/// Finite-difference estimate of [`pointwise_distortion`].
///
/// The radial derivative is a central difference with step `rel_step * r`,
/// divided by the tangential stretch `g(r)/r`; both distortions are
/// invariant under a common rescaling of the stretches, so the estimate is
/// formed from `g(r(1 +- rel_step)) / g(r)` and never leaves `log2` space.
/// This keeps it usable at scales far below the `f64` range.
pub fn finite_difference_distortion<M: RadialMap + ?Sized>(
    map: &M,
    d: u32,
    x: LogRadius,
    rel_step: f64,
) -> Result<DistortionReport> {
    check_dimension(d)?;
    if !(rel_step.is_finite() && rel_step > 0.0 && rel_step < 0.5) {
        return Err(Error::InvalidParameter {
            name: "rel_step",
            value: rel_step,
            reason: "relative step must lie in (0, 0.5)",
        });
    }
    let xv = x.finite().ok_or(Error::OriginNotAllowed)?;
    let branch = map.branch_at(x)?;
    let up = xv + rel_step.ln_1p() / std::f64::consts::LN_2;
    let down = xv + (-rel_step).ln_1p() / std::f64::consts::LN_2;
    if !(up < branch.upper && down > branch.lower) {
        return Err(Error::StepCrossesBreakpoint { log2_r: xv });
    }
    let base = map.eval_log(x).log2();
    let ratio = |y: f64| (map.eval_log(LogRadius::clamped(y)).log2() - base).exp2();
    let radial = (ratio(up) - ratio(down)) / (2.0 * rel_step);
    Ok(DistortionReport::from_stretches(
        radial,
        1.0,
        d,
        Location::At(xv),
    ))
}

/// Supremum of the distortion over the ball.
///
/// The pointwise distortion depends only on the local exponent and branch
/// endpoints are spheres (removable), so the supremum is a maximum over the
/// distinct exponents.
pub fn max_distortion<M: RadialMap + ?Sized>(map: &M, d: u32) -> Result<DistortionReport> {
    check_dimension(d)?;
    let mut outer = 1.0f64;
    let mut inner = 1.0f64;
    for k in map.exponents() {
        let r = radial_power_distortion(k, d)?;
        outer = outer.max(r.outer);
        inner = inner.max(r.inner);
    }
    Ok(DistortionReport {
        outer,
        inner,
        maximal: outer.max(inner),
        location: Location::Supremum,
        dimension: d,
    })
}

/// `max_distortion(h^m, d)` for `m = 1..=m_max`.
pub fn iterate_max_distortion(
    h: ConjugatedMap<'_>,
    d: u32,
    m_max: u64,
) -> Result<Vec<DistortionReport>> {
    if m_max == 0 {
        return Err(Error::InvalidParameter {
            name: "m_max",
            value: 0.0,
            reason: "need at least one iterate",
        });
    }
    (1..=m_max)
        .map(|m| max_distortion(&IteratedMap::new(h, m), d))
        .collect()
}

/// `limsup L(r)/l(r)` at the origin, with `L` and `l` the largest and
/// smallest `|F(x)|` over the sphere `|x| = r`.
///
/// `F` is sampled at the coordinate points, the main diagonal, and a few
/// mixed-sign points of each sphere, for radii `2^{-j/4}`, `j = 1..=80`.
/// For a radial map the answer is 1 up to roundoff; this checks that the
/// radial extension really is radial.
pub fn linear_distortion_radial<M: RadialMap + ?Sized>(map: &M, d: u32) -> Result<f64> {
    check_dimension(d)?;
    let dim = d as usize;
    let mut directions: Vec<Vec<f64>> = Vec::new();
    for i in 0..dim {
        for sign in [1.0, -1.0] {
            let mut v = vec![0.0; dim];
            v[i] = sign;
            directions.push(v);
        }
    }
    directions.push(vec![1.0; dim]);
    directions.push(
        (0..dim)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect(),
    );
    directions.push((0..dim).map(|i| 1.0 + i as f64).collect());

    let mut worst = 1.0f64;
    for j in 1..=80 {
        let r = (-(j as f64) / 4.0).exp2();
        let mut largest = f64::MIN;
        let mut smallest = f64::MAX;
        for dir in &directions {
            let norm = dir.iter().map(|c| c * c).sum::<f64>().sqrt();
            let point: Vec<f64> = dir.iter().map(|c| c * r / norm).collect();
            let len = point.iter().map(|c| c * c).sum::<f64>().sqrt();
            let image_len = map.eval_log(LogRadius::new(len.log2().min(0.0))?).radius();
            let image_norm = point
                .iter()
                .map(|c| (c * image_len / len).powi(2))
                .sum::<f64>()
                .sqrt();
            largest = largest.max(image_norm);
            smallest = smallest.min(image_norm);
        }
        worst = worst.max(largest / smallest);
    }
    Ok(worst)
}
