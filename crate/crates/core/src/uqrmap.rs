//! The conjugate `h = f^{-1}((1/2) f)` and its iterates.
//!
//! `h` is the radial factor of `H = F^{-1} o T o F` where `T(x) = x/2`, so
//! `H(r, sigma) = (h(r), sigma)` is uniformly quasiconformal with an
//! attracting fixed point at the origin. `h` carries `[r_n, r_{n-1}]` onto
//! `[r_{n+1}, r_n]` and is a power law on each such interval:
//!
//! ```text
//! h(r) = 2^{(n-1) K^3 - n/K} r^{K^2}         on [r_{2n-1}, r_{2n-2}]
//! h(r) = 2^{n/K^3 - 1/K - n K} r^{1/K^2}     on [r_{2n},   r_{2n-1}]
//! ```
//!
//! Two steps of `h` are the exact similarity `r -> r_2 r`.

use crate::error::Result;
use crate::logradius::LogRadius;
use crate::powermap::PiecewisePowerMap;
use crate::radial::{Branch, RadialMap};
use crate::zoom::{LimitKind, ZoomSequence, Zoomable};

#[derive(Debug, Clone, Copy)]
pub struct ConjugatedMap<'a> {
    source: &'a PiecewisePowerMap,
}

impl<'a> ConjugatedMap<'a> {
    pub fn build_conjugated_map(f: &'a PiecewisePowerMap) -> Self {
        ConjugatedMap { source: f }
    }

    pub fn k(&self) -> f64 {
        self.source.k()
    }

    pub fn source(&self) -> &'a PiecewisePowerMap {
        self.source
    }

    /// `log2` of the multiplier of the power law on `[r_n, r_{n-1}]`.
    pub fn branch_log2_coefficient(&self, n: u64) -> f64 {
        assert!(n >= 1, "branches are indexed from 1");
        let k = self.k();
        let j = n.div_ceil(2) as f64;
        if n % 2 == 1 {
            (j - 1.0) * k * k * k - j / k
        } else {
            j / (k * k * k) - 1.0 / k - j * k
        }
    }

    /// Exponent of the power law on `[r_n, r_{n-1}]`: `K^2` for odd `n`,
    /// `1/K^2` for even `n`.
    pub fn branch_exponent(&self, n: u64) -> f64 {
        assert!(n >= 1, "branches are indexed from 1");
        let k2 = self.k() * self.k();
        if n % 2 == 1 {
            k2
        } else {
            1.0 / k2
        }
    }

    /// `log2 h(r)` from the closed-form branches.
    pub fn h_eval_log(&self, x: LogRadius) -> LogRadius {
        let Some(xv) = x.finite() else {
            return LogRadius::ORIGIN;
        };
        let n = self
            .source
            .locate_interval(x)
            .expect("finite input always has an interval");
        LogRadius::clamped(self.branch_log2_coefficient(n) + self.branch_exponent(n) * xv)
    }

    /// `log2 h^m(r)`.
    ///
    /// Pairs of steps are applied as the similarity `x -> x - (K + 1/K)`, so
    /// nothing accumulates over long orbits; an odd `m` adds one branch
    /// evaluation.
    pub fn iterate(&self, x: LogRadius, m: u64) -> LogRadius {
        let Some(xv) = x.finite() else {
            return LogRadius::ORIGIN;
        };
        let pairs = (m / 2) as f64;
        let shifted = LogRadius::clamped(xv - pairs * self.source.period());
        if m.is_multiple_of(2) {
            shifted
        } else {
            self.h_eval_log(shifted)
        }
    }

    /// The orbit `x, h(x), ..., h^m(x)` in `log2`.
    pub fn orbit(&self, x: LogRadius, m: u64) -> Vec<LogRadius> {
        (0..=m).map(|j| self.iterate(x, j)).collect()
    }
}

/// `log2 h(r)` straight from the definition `h = f^{-1}(f / 2)`.
pub fn h_via_conjugacy(f: &PiecewisePowerMap, x: LogRadius) -> LogRadius {
    match f.eval_log(x).finite() {
        None => LogRadius::ORIGIN,
        Some(y) => f.inverse_eval_log(LogRadius::clamped(y - 1.0)),
    }
}

impl RadialMap for ConjugatedMap<'_> {
    fn eval_log(&self, x: LogRadius) -> LogRadius {
        self.h_eval_log(x)
    }

    fn branch_at(&self, x: LogRadius) -> Result<Branch> {
        let n = self.source.locate_interval(x)?;
        Ok(Branch {
            lower: self.source.log2_breakpoint(n),
            upper: self.source.log2_breakpoint(n - 1),
            exponent: self.branch_exponent(n),
        })
    }

    fn exponents(&self) -> Vec<f64> {
        vec![self.branch_exponent(1), self.branch_exponent(2)]
    }
}

impl Zoomable for ConjugatedMap<'_> {
    fn source(&self) -> &PiecewisePowerMap {
        self.source
    }

    fn matched_limit(&self, seq: ZoomSequence) -> LimitKind {
        match seq {
            ZoomSequence::EvenBreakpoints => LimitKind::Q1,
            ZoomSequence::OddBreakpoints => LimitKind::Q2,
        }
    }
}

/// `h^m` as a radial map in its own right.
///
/// `h` carries `[r_n, r_{n-1}]` onto `[r_{n+1}, r_n]`, so on `[r_n, r_{n-1}]`
/// the local exponent of `h^m` is the product of the exponents of `h` on the
/// intervals `n, n+1, ..., n+m-1` (chain rule in `log2` coordinates).
#[derive(Debug, Clone, Copy)]
pub struct IteratedMap<'a> {
    h: ConjugatedMap<'a>,
    m: u64,
}

impl<'a> IteratedMap<'a> {
    pub fn new(h: ConjugatedMap<'a>, m: u64) -> Self {
        IteratedMap { h, m }
    }

    pub fn steps(&self) -> u64 {
        self.m
    }

    /// Product of `h`'s branch exponents along the orbit of `[r_n, r_{n-1}]`.
    pub fn orbit_exponent(&self, n: u64) -> f64 {
        let odd_count = if n % 2 == 1 {
            self.m.div_ceil(2)
        } else {
            self.m / 2
        };
        let even_count = self.m - odd_count;
        let k2 = self.h.k() * self.h.k();
        let net = odd_count as i64 - even_count as i64;
        k2.powi(net as i32)
    }
}

impl RadialMap for IteratedMap<'_> {
    fn eval_log(&self, x: LogRadius) -> LogRadius {
        self.h.iterate(x, self.m)
    }

    fn branch_at(&self, x: LogRadius) -> Result<Branch> {
        let n = self.h.source.locate_interval(x)?;
        let exponent = self.orbit_exponent(n);
        if exponent == self.orbit_exponent(n + 1) {
            // same exponent on both sides of every breakpoint: one power law
            return Ok(Branch {
                lower: f64::NEG_INFINITY,
                upper: 0.0,
                exponent,
            });
        }
        Ok(Branch {
            lower: self.h.source.log2_breakpoint(n),
            upper: self.h.source.log2_breakpoint(n - 1),
            exponent,
        })
    }

    fn exponents(&self) -> Vec<f64> {
        // the interval partition is 2-periodic under the orbit
        let a = self.orbit_exponent(1);
        let b = self.orbit_exponent(2);
        if a == b {
            vec![a]
        } else {
            vec![a, b]
        }
    }
}
