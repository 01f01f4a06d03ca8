//! The piecewise power-law homeomorphism `f: [0, 1] -> [0, 1]`.
//!
//! `f` is built from a decreasing sequence of breakpoints `r_0 = 1 > r_1 >
//! r_2 > ... -> 0` with `f(r_n) = 2^{-n}`, and on `[r_n, r_{n-1}]` it is the
//! power law `f(r) = C_n r^{k_n}`. The exponents alternate, `k_{2n-1} = K`
//! and `k_{2n} = 1/K`, which makes everything periodic in `log2 r` with
//! period `K + 1/K`:
//!
//! ```text
//! log2 r_{2n}     = -(n K + n / K)
//! log2 r_{2n-1}   = -((n - 1) K + n / K)
//! log2 C_{2n}     = n (1/K^2 - 1)
//! log2 C_{2n-1}   = (n - 1) (K^2 - 1)
//! ```
//!
//! Extending radially, `F(r, sigma) = (f(r), sigma)` is a quasiconformal
//! self-map of the unit ball.

use crate::error::{Error, Result};
use crate::logradius::LogRadius;
use crate::radial::{Branch, RadialMap};

/// Default number of tabulated breakpoints.
pub const DEFAULT_DEPTH: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePowerMap {
    k: f64,
    depth: usize,
    // index n = 0..=depth; log2_c[0] is unused and stored as NaN
    log2_r: Vec<f64>,
    log2_c: Vec<f64>,
}

impl PiecewisePowerMap {
    /// Builds the map with distortion parameter `k > 1`, tabulating the
    /// breakpoints and coefficients up to index `depth`.
    ///
    /// Indices past `depth` are served from the closed forms, so `depth` only
    /// bounds the cache.
    pub fn build_standard_map(k: f64, depth: usize) -> Result<Self> {
        if !(k.is_finite() && k > 1.0) {
            return Err(Error::InvalidParameter {
                name: "K",
                value: k,
                reason: "the construction needs K > 1",
            });
        }
        if depth < 2 {
            return Err(Error::InvalidParameter {
                name: "depth",
                value: depth as f64,
                reason: "depth must be at least 2",
            });
        }
        let log2_r = (0..=depth as u64).map(|n| closed_log2_r(k, n)).collect();
        let log2_c = (0..=depth as u64)
            .map(|n| {
                if n == 0 {
                    f64::NAN
                } else {
                    closed_log2_c(k, n)
                }
            })
            .collect();
        Ok(PiecewisePowerMap {
            k,
            depth,
            log2_r,
            log2_c,
        })
    }

    #[inline]
    pub fn k(&self) -> f64 {
        self.k
    }

    #[inline]
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Length of one log-period, `K + 1/K = -log2 r_2`.
    #[inline]
    pub fn period(&self) -> f64 {
        self.k + 1.0 / self.k
    }

    /// `log2 r_n`, defined for every `n >= 0`.
    pub fn log2_breakpoint(&self, n: u64) -> f64 {
        match self.log2_r.get(n as usize) {
            Some(&v) if n <= self.depth as u64 => v,
            _ => closed_log2_r(self.k, n),
        }
    }

    /// `r_n` as a [`LogRadius`].
    pub fn breakpoint(&self, n: u64) -> LogRadius {
        LogRadius::clamped(self.log2_breakpoint(n))
    }

    /// `k_n`: `K` for odd `n`, `1/K` for even `n`.
    ///
    /// # Panics
    ///
    /// Panics if `n == 0`; exponents are indexed from 1.
    pub fn exponent(&self, n: u64) -> f64 {
        assert!(n >= 1, "exponents are indexed from 1");
        if n % 2 == 1 {
            self.k
        } else {
            1.0 / self.k
        }
    }

    /// `log2 C_n` for `n >= 1`.
    ///
    /// # Panics
    ///
    /// Panics if `n == 0`.
    pub fn log2_coefficient(&self, n: u64) -> f64 {
        assert!(n >= 1, "coefficients are indexed from 1");
        match self.log2_c.get(n as usize) {
            Some(&v) if n <= self.depth as u64 => v,
            _ => closed_log2_c(self.k, n),
        }
    }

    /// The unique `n >= 1` with `log2 r_n <= x <= log2 r_{n-1}`; on a
    /// breakpoint the smaller index wins.
    ///
    /// The index is read off the periodic closed form and then nudged by at
    /// most a step or two against the exact breakpoint values, so the cost is
    /// O(1) at any depth. Indices saturate at `u64::MAX` for inputs far below
    /// any meaningful scale.
    pub fn locate_interval(&self, x: LogRadius) -> Result<u64> {
        let x = x.finite().ok_or(Error::OriginNotAllowed)?;
        let periods = (-x / self.period()).floor();
        let within = x + periods * self.period();
        let periods = periods as u64;
        let mut n = if within >= -1.0 / self.k {
            periods.saturating_mul(2).saturating_add(1)
        } else {
            periods.saturating_mul(2).saturating_add(2)
        };
        // want the smallest n with log2 r_n <= x
        for _ in 0..4 {
            if self.log2_breakpoint(n) > x {
                n = n.saturating_add(1);
            } else if n > 1 && self.log2_breakpoint(n - 1) <= x {
                n -= 1;
            } else {
                break;
            }
        }
        Ok(n)
    }

    /// `log2 f(r)` for `x = log2 r`.
    pub fn eval_log(&self, x: LogRadius) -> LogRadius {
        let Some(xv) = x.finite() else {
            return LogRadius::ORIGIN;
        };
        let n = self
            .locate_interval(x)
            .expect("finite input always has an interval");
        LogRadius::clamped(self.log2_coefficient(n) + self.exponent(n) * xv)
    }

    /// `log2 f^{-1}(s)` for `y = log2 s`.
    ///
    /// The value interval `[2^{-n}, 2^{-n+1}]` is the image of
    /// `[r_n, r_{n-1}]`, so its index is `ceil(-y)` (at least 1).
    pub fn inverse_eval_log(&self, y: LogRadius) -> LogRadius {
        let Some(yv) = y.finite() else {
            return LogRadius::ORIGIN;
        };
        let n = ((-yv).ceil() as u64).max(1);
        LogRadius::clamped((yv - self.log2_coefficient(n)) / self.exponent(n))
    }

    /// `f(r)` in linear scale.
    ///
    /// The result underflows to 0 once `log2 f(r)` drops below the `f64`
    /// exponent range; use [`eval_log`](Self::eval_log) for deep scales.
    pub fn eval(&self, r: f64) -> Result<f64> {
        let x = LogRadius::from_radius(r)?;
        Ok(self.eval_log(x).radius())
    }

    /// Mean radius of `F(B(0, delta))`.
    ///
    /// The radial extension maps `B(0, delta)` onto `B(0, f(delta))`, so the
    /// mean radius is `f(delta)` itself. This is why `f(t)` is the zoom
    /// normalizer.
    pub fn mean_radius_radial(&self, delta: LogRadius) -> LogRadius {
        self.eval_log(delta)
    }
}

impl RadialMap for PiecewisePowerMap {
    fn eval_log(&self, x: LogRadius) -> LogRadius {
        PiecewisePowerMap::eval_log(self, x)
    }

    fn branch_at(&self, x: LogRadius) -> Result<Branch> {
        let n = self.locate_interval(x)?;
        Ok(Branch {
            lower: self.log2_breakpoint(n),
            upper: self.log2_breakpoint(n - 1),
            exponent: self.exponent(n),
        })
    }

    fn exponents(&self) -> Vec<f64> {
        vec![self.k, 1.0 / self.k]
    }
}

fn closed_log2_r(k: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let half = (n / 2) as f64;
    if n.is_multiple_of(2) {
        -(half * k + half / k)
    } else {
        // n = 2j - 1 with j = half + 1
        -(half * k + (half + 1.0) / k)
    }
}

fn closed_log2_c(k: f64, n: u64) -> f64 {
    let half = (n / 2) as f64;
    if n.is_multiple_of(2) {
        half * (1.0 / (k * k) - 1.0)
    } else {
        half * (k * k - 1.0)
    }
}

/// `log2 r_n` for `n = 0..=depth` by accumulating `log2 r_n = log2 r_{n-1} -
/// 1/k_n` from `r_0 = 1`.
///
/// This is the recurrence the closed forms are derived from; it is kept as an
/// independent route for cross-checking. The running sum is compensated
/// (Neumaier) so the check measures the formulas, not summation drift.
pub fn recurrence_log2_breakpoints(k: f64, depth: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(depth + 1);
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    out.push(0.0);
    for n in 1..=depth {
        let term = if n % 2 == 1 { -1.0 / k } else { -k };
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        out.push(sum + comp);
    }
    out
}
