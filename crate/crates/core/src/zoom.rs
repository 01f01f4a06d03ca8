//! Zoom families `g_t(r) = f(r t) / f(t)` at the origin and their limits.
//!
//! For a radial map the mean radius of the image of `B(0, t)` is `f(t)`, so
//! the normalized zoom at scale `t` is the radial profile `r -> f(rt)/f(t)`.
//! Along the breakpoint scales `t = r_{2n}` and `t = r_{2n-1}` this profile
//! does not depend on `n` at all, and the two resulting profiles differ:
//!
//! * `P1` (even scales) and `P2` (odd scales) for the power map `f`,
//! * `Q1` and `Q2` for the conjugate `h`.
//!
//! Each limit is a piecewise power law that fixes 0 and 1. `P1` and `Q1`
//! break at the breakpoints `r_n`; `P2` and `Q2` break at `r_{2m}` and at
//! the shifted points `2^{-K + 1/K} r_{2m+1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logradius::LogRadius;
use crate::powermap::PiecewisePowerMap;
use crate::radial::{Branch, RadialMap};

/// Maximum bisection steps in [`ivt_sample`].
pub const IVT_MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LimitKind {
    P1,
    P2,
    Q1,
    Q2,
}

impl LimitKind {
    pub const ALL: [LimitKind; 4] = [LimitKind::P1, LimitKind::P2, LimitKind::Q1, LimitKind::Q2];

    pub fn name(self) -> &'static str {
        match self {
            LimitKind::P1 => "P1",
            LimitKind::P2 => "P2",
            LimitKind::Q1 => "Q1",
            LimitKind::Q2 => "Q2",
        }
    }

    // limits of h have squared exponents
    fn is_conjugate(self) -> bool {
        matches!(self, LimitKind::Q1 | LimitKind::Q2)
    }

    // P2 and Q2 break at the shifted points
    fn is_shifted(self) -> bool {
        matches!(self, LimitKind::P2 | LimitKind::Q2)
    }
}

/// The breakpoint scale sequence used to zoom in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ZoomSequence {
    /// `t_n = r_{2n}`
    EvenBreakpoints,
    /// `t_n = r_{2n-1}`
    OddBreakpoints,
}

impl ZoomSequence {
    /// `t_n` for `n >= 1`.
    pub fn scale(self, source: &PiecewisePowerMap, n: u64) -> LogRadius {
        assert!(n >= 1, "zoom sequences are indexed from 1");
        match self {
            ZoomSequence::EvenBreakpoints => source.breakpoint(2 * n),
            ZoomSequence::OddBreakpoints => source.breakpoint(2 * n - 1),
        }
    }
}

/// A radial map whose zoom limits at the origin are known in closed form.
pub trait Zoomable: RadialMap {
    /// The power map whose breakpoints organize this map.
    fn source(&self) -> &PiecewisePowerMap;

    /// The limit reached along `seq`.
    fn matched_limit(&self, seq: ZoomSequence) -> LimitKind;
}

impl Zoomable for PiecewisePowerMap {
    fn source(&self) -> &PiecewisePowerMap {
        self
    }

    fn matched_limit(&self, seq: ZoomSequence) -> LimitKind {
        match seq {
            ZoomSequence::EvenBreakpoints => LimitKind::P1,
            ZoomSequence::OddBreakpoints => LimitKind::P2,
        }
    }
}

/// One of the closed-form zoom limits, tied to the power map that supplies
/// its breakpoints.
#[derive(Debug, Clone, Copy)]
pub struct LimitFunction<'a> {
    kind: LimitKind,
    source: &'a PiecewisePowerMap,
}

impl<'a> LimitFunction<'a> {
    pub fn new(kind: LimitKind, source: &'a PiecewisePowerMap) -> Self {
        LimitFunction { kind, source }
    }

    pub fn kind(&self) -> LimitKind {
        self.kind
    }

    pub fn source(&self) -> &'a PiecewisePowerMap {
        self.source
    }

    /// Index of the branch containing `x` (smaller index on ties).
    ///
    /// Unshifted kinds use the intervals `[r_n, r_{n-1}]`. Shifted kinds use
    /// `[b_j, b_{j-1}]` with `b_j = r_{j+1} 2^{1/K}`, i.e. `b_{2m} = r_{2m}`
    /// and `b_{2m+1} = 2^{-K+1/K} r_{2m+1}`.
    fn branch_index(&self, x: f64) -> u64 {
        let f = self.source;
        if self.kind.is_shifted() {
            let shifted = LogRadius::clamped(x - 1.0 / f.k());
            let mut j = f.locate_interval(shifted).expect("finite") - 1;
            // the shift rounds; settle ties against the exact endpoints
            if j == 0 {
                j = 1;
            }
            while j > 1 && self.shifted_endpoint(j - 1) <= x {
                j -= 1;
            }
            while self.shifted_endpoint(j) > x {
                j += 1;
            }
            j
        } else {
            f.locate_interval(LogRadius::clamped(x)).expect("finite")
        }
    }

    /// `log2 b_j` for the shifted kinds.
    fn shifted_endpoint(&self, j: u64) -> f64 {
        let f = self.source;
        if j.is_multiple_of(2) {
            f.log2_breakpoint(j)
        } else {
            f.log2_breakpoint(j) - f.k() + 1.0 / f.k()
        }
    }

    fn endpoints(&self, index: u64) -> (f64, f64) {
        if self.kind.is_shifted() {
            (
                self.shifted_endpoint(index),
                self.shifted_endpoint(index - 1),
            )
        } else {
            let f = self.source;
            (f.log2_breakpoint(index), f.log2_breakpoint(index - 1))
        }
    }

    /// Anchor breakpoint index `a` and exponent `e` of a branch; the branch
    /// is the power law through the point `(r_a, value at r_a)` with slope
    /// `e` in `log2` coordinates.
    fn anchor(&self, index: u64) -> (u64, f64) {
        let k = self.source.k();
        let (big, small) = if self.kind.is_conjugate() {
            (k * k, 1.0 / (k * k))
        } else {
            (k, 1.0 / k)
        };
        match (self.kind, index.is_multiple_of(2)) {
            // P1: (1/2)^{2m} r_{2m}^{-1/K} r^{1/K} on [r_{2m}, r_{2m-1}],
            //     (1/2)^{2m-1} r_{2m-1}^{-K} r^K on [r_{2m-1}, r_{2m-2}]
            (LimitKind::P1, true) => (index, small),
            (LimitKind::P1, false) => (index, big),
            // P2: (1/2)^{2m+2} r_{2m+2}^{-K} r^K on [r_{2m+2}, b_{2m+1}],
            //     (1/2)^{2m} r_{2m}^{-1/K} r^{1/K} on [b_{2m+1}, r_{2m}]
            (LimitKind::P2, true) => (index, big),
            (LimitKind::P2, false) => (index - 1, small),
            // Q1: r_{2m}^{1-1/K^2} r^{1/K^2} on [r_{2m}, r_{2m-1}],
            //     r_{2m}^{1-K^2} r^{K^2} on [r_{2m+1}, r_{2m}]
            (LimitKind::Q1, true) => (index, small),
            (LimitKind::Q1, false) => (index - 1, big),
            // Q2: r_{2m+2}^{1-K^2} r^{K^2} on [r_{2m+2}, b_{2m+1}],
            //     r_{2m}^{1-1/K^2} r^{1/K^2} on [b_{2m+1}, r_{2m}]
            (LimitKind::Q2, true) => (index, big),
            (LimitKind::Q2, false) => (index - 1, small),
        }
    }

    /// `log2` of the limit at the anchor breakpoint `r_a`: `-a` for the
    /// limits of `f` (they pass through `(r_a, 2^{-a})`), `log2 r_a` for the
    /// limits of `h` (they fix `r_a`).
    fn anchor_value(&self, a: u64) -> f64 {
        if self.kind.is_conjugate() {
            self.source.log2_breakpoint(a)
        } else {
            -(a as f64)
        }
    }

    /// Difference between the branch formulas on either side of the `j`-th
    /// branch endpoint (`j >= 1`), evaluated at that endpoint. Zero up to
    /// roundoff, since every limit is continuous.
    pub fn endpoint_jump(&self, j: u64) -> f64 {
        assert!(j >= 1, "endpoints are indexed from 1");
        let (at, _) = self.endpoints(j);
        let value = |index: u64| {
            let (a, e) = self.anchor(index);
            self.anchor_value(a) + e * (at - self.source.log2_breakpoint(a))
        };
        value(j + 1) - value(j)
    }

    /// `log2` of the limit at `x = log2 r`.
    pub fn limit_eval(&self, x: LogRadius) -> LogRadius {
        let Some(xv) = x.finite() else {
            return LogRadius::ORIGIN;
        };
        let index = self.branch_index(xv);
        let (a, e) = self.anchor(index);
        let base = self.anchor_value(a);
        LogRadius::clamped(base + e * (xv - self.source.log2_breakpoint(a)))
    }
}

impl RadialMap for LimitFunction<'_> {
    fn eval_log(&self, x: LogRadius) -> LogRadius {
        self.limit_eval(x)
    }

    fn branch_at(&self, x: LogRadius) -> Result<Branch> {
        let xv = x.finite().ok_or(Error::OriginNotAllowed)?;
        let index = self.branch_index(xv);
        let (lower, upper) = self.endpoints(index);
        Ok(Branch {
            lower,
            upper,
            exponent: self.anchor(index).1,
        })
    }

    fn exponents(&self) -> Vec<f64> {
        let k = self.source.k();
        if self.kind.is_conjugate() {
            vec![k * k, 1.0 / (k * k)]
        } else {
            vec![k, 1.0 / k]
        }
    }
}

/// `log2 (g(r t) / g(t))`: the zoom of `map` at scale `t`, evaluated at `r`.
pub fn rescaled_eval<M: RadialMap + ?Sized>(
    map: &M,
    t: LogRadius,
    r: LogRadius,
) -> Result<LogRadius> {
    let tv = t.finite().ok_or(Error::OriginNotAllowed)?;
    if tv >= 0.0 {
        return Err(Error::ZeroScale(tv));
    }
    if r.is_origin() {
        return Ok(LogRadius::ORIGIN);
    }
    let num = map.eval_log(r + t).log2();
    let den = map.eval_log(t).log2();
    Ok(LogRadius::clamped(num - den))
}

/// Largest `|rescaled_eval(map, t_n, r) - limit_eval(lf, r)|` (in `log2`) over
/// `n` in `ns` and `r` in `grid`.
///
/// For a matched sequence/limit pair this is pure roundoff.
pub fn zoom_limit_deviation<M: Zoomable + ?Sized>(
    map: &M,
    seq: ZoomSequence,
    lf: &LimitFunction<'_>,
    ns: impl IntoIterator<Item = u64>,
    grid: &[LogRadius],
) -> Result<f64> {
    check_source(map.source(), lf)?;
    let mut worst = 0.0f64;
    for n in ns {
        let t = seq.scale(map.source(), n);
        for &r in grid {
            if r.is_origin() {
                continue;
            }
            let dev = (rescaled_eval(map, t, r)?.log2() - lf.limit_eval(r).log2()).abs();
            worst = worst.max(dev);
        }
    }
    Ok(worst)
}

fn check_source(source: &PiecewisePowerMap, lf: &LimitFunction<'_>) -> Result<()> {
    if source.k().to_bits() != lf.source().k().to_bits() {
        return Err(Error::SourceMismatch {
            map_k: source.k(),
            limit_k: lf.source().k(),
        });
    }
    Ok(())
}

/// Finds a scale `t` in the `period`-th log-period `[r_{2k}, r_{2k-1}]` with
/// `|log2 g_t(r0) - lambda| <= tol`.
///
/// At the two ends of the period the zoom equals the even-sequence and
/// odd-sequence limits at `r0`, and in between it moves continuously, so
/// every `lambda` between those two limit values is hit. Bisection runs in
/// `log2 t`. Successive periods give strictly decreasing scales, each a
/// witness for a distinct point of the infinitesimal space.
pub fn ivt_sample<M: Zoomable + ?Sized>(
    map: &M,
    r0: LogRadius,
    lambda: LogRadius,
    tol: f64,
    period: u64,
) -> Result<LogRadius> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            reason: "tolerance must be positive",
        });
    }
    if period == 0 {
        return Err(Error::InvalidParameter {
            name: "period",
            value: 0.0,
            reason: "periods are indexed from 1",
        });
    }
    r0.finite().ok_or(Error::OriginNotAllowed)?;
    let target = lambda.finite().ok_or(Error::OriginNotAllowed)?;

    let source = map.source();
    let even = LimitFunction::new(map.matched_limit(ZoomSequence::EvenBreakpoints), source);
    let odd = LimitFunction::new(map.matched_limit(ZoomSequence::OddBreakpoints), source);
    let v_even = even.limit_eval(r0).log2();
    let v_odd = odd.limit_eval(r0).log2();
    let (low, high) = (v_even.min(v_odd), v_even.max(v_odd));
    if target < low - tol || target > high + tol {
        return Err(Error::NoBracket {
            lambda: target,
            low,
            high,
        });
    }

    let residual = |t: f64| -> Result<f64> {
        Ok(rescaled_eval(map, LogRadius::clamped(t), r0)?.log2() - target)
    };
    let mut a = source.log2_breakpoint(2 * period);
    let mut b = source.log2_breakpoint(2 * period - 1);
    let mut fa = residual(a)?;
    let fb = residual(b)?;
    if fa.abs() <= tol {
        return Ok(LogRadius::clamped(a));
    }
    if fb.abs() <= tol {
        return Ok(LogRadius::clamped(b));
    }
    if fa.signum() == fb.signum() {
        // the bracket holds for the limits but not at this period's ends,
        // which only happens through roundoff
        return Err(Error::NoBracket {
            lambda: target,
            low,
            high,
        });
    }
    for _ in 0..IVT_MAX_ITERATIONS {
        let mid = 0.5 * (a + b);
        let fm = residual(mid)?;
        if fm.abs() <= tol {
            return Ok(LogRadius::clamped(mid));
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Err(Error::NoConvergence {
        iterations: IVT_MAX_ITERATIONS,
    })
}

/// How far the graph of `map` in log-log coordinates is from a line through
/// the origin.
///
/// A `D`-homogeneous radial profile fixing 1 is exactly `log2 g = D log2 r`.
/// The slope is fitted by least squares through the origin and the largest
/// absolute residual is returned; it is 0 exactly for a single power law and
/// positive once the samples straddle a change of exponent.
pub fn homogeneity_defect<M: RadialMap + ?Sized>(map: &M, samples: &[LogRadius]) -> Result<f64> {
    let mut xs: Vec<f64> = Vec::with_capacity(samples.len());
    for s in samples {
        let v = s.finite().ok_or(Error::OriginNotAllowed)?;
        if !xs.contains(&v) {
            xs.push(v);
        }
    }
    if xs.len() < 3 {
        return Err(Error::TooFewSamples {
            got: xs.len(),
            need: 3,
        });
    }
    let ys: Vec<f64> = xs
        .iter()
        .map(|&x| map.eval_log(LogRadius::clamped(x)).log2())
        .collect();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let slope = sxy / sxx;
    Ok(xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - slope * x).abs())
        .fold(0.0, f64::max))
}

/// Mean radius of `f(B(0, delta))` for the one-dimensional map `f(x) = x`
/// (`x >= 0`), `x / 2` (`x < 0`): the image of `(-delta, delta)` is
/// `(-delta/2, delta)`.
pub fn example_1d_mean_radius(delta: f64) -> Result<f64> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "delta",
            value: delta,
            reason: "scale must be positive",
        });
    }
    Ok((delta + delta / 2.0) / 2.0)
}

/// `f(delta x) / rho(delta)` for the one-dimensional map above; equals
/// `4x/3` for `x >= 0` and `2x/3` for `x < 0` whatever `delta` is.
pub fn example_1d_rescaled(x: f64, delta: f64) -> Result<f64> {
    if !(x.is_finite() && x.abs() <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "point must lie in [-1, 1]",
        });
    }
    let rho = example_1d_mean_radius(delta)?;
    let y = delta * x;
    let fy = if y >= 0.0 { y } else { y / 2.0 };
    Ok(fy / rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lr(v: f64) -> LogRadius {
        LogRadius::new(v).unwrap()
    }

    fn map2() -> PiecewisePowerMap {
        PiecewisePowerMap::build_standard_map(2.0, 256).unwrap()
    }

    #[test]
    fn rescaled_examples() {
        let f = map2();
        let r = lr(0.8f64.log2());
        let v = rescaled_eval(&f, f.breakpoint(2), r).unwrap().log2();
        assert!((v - 0.64f64.log2()).abs() < 1e-12);
        assert_eq!(
            rescaled_eval(&f, f.breakpoint(5), LogRadius::UNIT)
                .unwrap()
                .log2(),
            0.0
        );
        let v = rescaled_eval(&f, f.breakpoint(1), f.breakpoint(1)).unwrap();
        assert_eq!(v.log2(), -0.25);
        assert!(rescaled_eval(&f, LogRadius::UNIT, r).is_err());
        assert!(rescaled_eval(&f, LogRadius::ORIGIN, r).is_err());
        assert!(rescaled_eval(&f, f.breakpoint(1), LogRadius::ORIGIN)
            .unwrap()
            .is_origin());
    }

    #[test]
    fn limit_examples() {
        let f = map2();
        let r1 = f.breakpoint(1);
        let p1 = LimitFunction::new(LimitKind::P1, &f);
        let p2 = LimitFunction::new(LimitKind::P2, &f);
        let q1 = LimitFunction::new(LimitKind::Q1, &f);
        let q2 = LimitFunction::new(LimitKind::Q2, &f);
        assert_eq!(p1.limit_eval(r1).log2(), -1.0);
        assert_eq!(p2.limit_eval(r1).log2(), -0.25);
        assert_eq!(q1.limit_eval(r1).log2(), -2.0);
        assert_eq!(q2.limit_eval(r1).log2(), -0.125);
        for kind in LimitKind::ALL {
            let lf = LimitFunction::new(kind, &f);
            assert_eq!(lf.limit_eval(LogRadius::UNIT).log2(), 0.0);
            assert!(lf.limit_eval(LogRadius::ORIGIN).is_origin());
        }
    }

    #[test]
    fn breakpoint_values() {
        let f = map2();
        let p1 = LimitFunction::new(LimitKind::P1, &f);
        let q1 = LimitFunction::new(LimitKind::Q1, &f);
        for m in 0..40 {
            assert_eq!(p1.limit_eval(f.breakpoint(m)).log2(), -(m as f64));
        }
        for m in 0..20 {
            let x = f.breakpoint(2 * m);
            assert_eq!(q1.limit_eval(x).log2(), x.log2());
        }
    }

    #[test]
    fn limits_are_continuous_at_their_endpoints() {
        for k in [1.3, 2.0, 4.5] {
            let f = PiecewisePowerMap::build_standard_map(k, 100).unwrap();
            for kind in LimitKind::ALL {
                let lf = LimitFunction::new(kind, &f);
                for j in 1..60u64 {
                    assert!(lf.endpoint_jump(j).abs() < 1e-9, "{kind:?} j={j}");
                }
            }
        }
    }

    #[test]
    fn shifted_branch_lookup_respects_endpoints() {
        let f = map2();
        let p2 = LimitFunction::new(LimitKind::P2, &f);
        // b_1 = -K = -2, b_2 = r_2
        assert_eq!(p2.branch_index(0.0), 1);
        assert_eq!(p2.branch_index(-1.0), 1);
        assert_eq!(p2.branch_index(-2.0), 1);
        assert_eq!(p2.branch_index(-2.1), 2);
        assert_eq!(p2.branch_index(-2.5), 2);
        assert_eq!(p2.branch_index(-2.6), 3);
    }

    #[test]
    fn deviation_rejects_foreign_limit() {
        let f = map2();
        let g = PiecewisePowerMap::build_standard_map(3.0, 16).unwrap();
        let lf = LimitFunction::new(LimitKind::P1, &g);
        let err = zoom_limit_deviation(&f, ZoomSequence::EvenBreakpoints, &lf, 1..=2, &[]);
        assert!(matches!(err, Err(Error::SourceMismatch { .. })));
    }

    #[test]
    fn ivt_endpoint_and_no_bracket() {
        let f = map2();
        let r1 = f.breakpoint(1);
        let t = ivt_sample(&f, r1, lr(-1.0), 1e-9, 3).unwrap();
        assert_eq!(t.log2(), f.log2_breakpoint(6));
        let err = ivt_sample(&f, r1, lr(0.95f64.log2()), 1e-9, 1);
        assert!(matches!(err, Err(Error::NoBracket { .. })));
        assert!(ivt_sample(&f, r1, lr(-0.5), 0.0, 1).is_err());
        assert!(ivt_sample(&f, r1, lr(-0.5), 1e-9, 0).is_err());
    }

    #[test]
    fn ivt_hits_interior_value() {
        let f = map2();
        let r1 = f.breakpoint(1);
        let target = lr(0.67f64.log2());
        let t = ivt_sample(&f, r1, target, 1e-9, 1).unwrap();
        let got = rescaled_eval(&f, t, r1).unwrap().log2();
        assert!((got - target.log2()).abs() <= 1e-9);
        assert!(t.log2() <= f.log2_breakpoint(1) && t.log2() >= f.log2_breakpoint(2));
    }

    #[test]
    fn homogeneity_defect_examples() {
        let f = map2();
        let power = crate::radial::PowerMap::new(2.0).unwrap();
        let samples = [LogRadius::UNIT, lr(-0.5), lr(-2.5), lr(-7.0)];
        assert!(homogeneity_defect(&power, &samples).unwrap() < 1e-12);
        let p1 = LimitFunction::new(LimitKind::P1, &f);
        let s = [LogRadius::UNIT, f.breakpoint(1), f.breakpoint(2)];
        assert!(homogeneity_defect(&p1, &s).unwrap() >= 0.5);
        let q1 = LimitFunction::new(LimitKind::Q1, &f);
        assert!(homogeneity_defect(&q1, &s).unwrap() > 0.1);
        let few = [LogRadius::UNIT, lr(-1.0), lr(-1.0)];
        assert!(matches!(
            homogeneity_defect(&p1, &few),
            Err(Error::TooFewSamples { got: 2, .. })
        ));
    }

    #[test]
    fn example_1d() {
        assert_eq!(example_1d_rescaled(1.0, 0.5).unwrap(), 4.0 / 3.0);
        assert_eq!(example_1d_rescaled(0.0, 3.0).unwrap(), 0.0);
        assert_eq!(example_1d_rescaled(-1.0, 0.125).unwrap(), -2.0 / 3.0);
        assert_eq!(example_1d_mean_radius(4.0).unwrap(), 3.0);
        assert!(example_1d_rescaled(1.5, 1.0).is_err());
        assert!(example_1d_rescaled(0.5, 0.0).is_err());
    }
}
