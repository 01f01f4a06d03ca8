//! Reference values and independent oracles.
//!
//! The oracle here rebuilds the breakpoints by multiplying radii one step at a
//! time and evaluates `f` in linear scale as `2^{-n} (r / r_n)^{k_n}`, so it
//! shares nothing with the closed forms used by the library.

use qcspace::{
    h_via_conjugacy, homogeneity_defect, ivt_sample, max_distortion, pointwise_distortion,
    radial_power_distortion, rescaled_eval, ConjugatedMap, Error, LimitFunction, LimitKind,
    LogRadius, PiecewisePowerMap, PowerMap, ZoomSequence,
};

const EPS: f64 = 1e-12;

fn lr(v: f64) -> LogRadius {
    LogRadius::new(v).unwrap()
}

fn map(k: f64) -> PiecewisePowerMap {
    PiecewisePowerMap::build_standard_map(k, 2000).unwrap()
}

struct LinearOracle {
    k: f64,
    r: Vec<f64>,
}

impl LinearOracle {
    fn new(k: f64, depth: usize) -> Self {
        let mut r = vec![1.0f64];
        for n in 1..=depth {
            let kn = if n % 2 == 1 { k } else { 1.0 / k };
            let prev = r[n - 1];
            r.push(prev * (-1.0 / kn).exp2());
        }
        LinearOracle { k, r }
    }

    fn kn(&self, n: usize) -> f64 {
        if n % 2 == 1 {
            self.k
        } else {
            1.0 / self.k
        }
    }

    fn f(&self, x: f64) -> f64 {
        let n = (1..self.r.len())
            .find(|&n| self.r[n] <= x && x <= self.r[n - 1])
            .expect("inside the oracle's range");
        (-(n as f64)).exp2() * (x / self.r[n]).powf(self.kn(n))
    }

    fn f_inv(&self, y: f64) -> f64 {
        let n = (1..self.r.len())
            .find(|&n| (-(n as f64)).exp2() <= y && y <= (-(n as f64) + 1.0).exp2())
            .expect("inside the oracle's range");
        self.r[n] * (y * (n as f64).exp2()).powf(1.0 / self.kn(n))
    }

    fn h(&self, x: f64) -> f64 {
        self.f_inv(self.f(x) / 2.0)
    }
}

#[test]
fn breakpoint_and_coefficient_values() {
    let f = map(2.0);
    assert_eq!(f.log2_breakpoint(0), 0.0);
    assert_eq!(f.log2_breakpoint(1), -0.5);
    assert_eq!(f.log2_breakpoint(2), -2.5);
    assert_eq!(f.log2_breakpoint(3), -3.0);
    assert_eq!(f.log2_breakpoint(4), -5.0);
    assert_eq!(f.log2_coefficient(1), 0.0);
    assert_eq!(f.log2_coefficient(2), -0.75);
    assert_eq!(f.log2_coefficient(3), 3.0);
    for k in [1.1, 3.0, 7.5] {
        let g = map(k);
        assert_eq!(g.log2_breakpoint(0), 0.0);
        assert_eq!(g.log2_coefficient(1), 0.0);
    }
}

#[test]
fn breakpoints_match_linear_recurrence() {
    for k in [1.05, 1.5, 2.0, 3.3] {
        let f = map(k);
        let o = LinearOracle::new(k, 40);
        for (n, &r) in o.r.iter().enumerate() {
            assert!(
                (f.log2_breakpoint(n as u64) - r.log2()).abs() < 1e-12,
                "K={k} n={n}"
            );
        }
    }
}

#[test]
fn locate_examples() {
    let f = map(2.0);
    assert_eq!(f.locate_interval(lr(0.8f64.log2())).unwrap(), 1);
    assert_eq!(f.locate_interval(lr(-2.5)).unwrap(), 2);
    assert_eq!(f.locate_interval(lr(0.15f64.log2())).unwrap(), 3);
    assert!(f.locate_interval(LogRadius::ORIGIN).is_err());
}

#[test]
fn eval_examples() {
    let f = map(2.0);
    assert!((f.eval_log(lr(0.8f64.log2())).log2() - 0.64f64.log2()).abs() < EPS);
    assert!((f.eval_log(lr(-1.0)).log2() + 1.25).abs() < EPS);
    for n in 0..=2000 {
        assert_eq!(f.eval_log(f.breakpoint(n)).log2(), -(n as f64));
    }
    assert!((f.eval(0.8).unwrap() - 0.64).abs() < EPS);
    assert_eq!(f.eval(1.0).unwrap(), 1.0);
    assert!((f.eval(0.15).unwrap() - 0.18).abs() < EPS);
    assert_eq!(f.eval(0.0).unwrap(), 0.0);
    assert!(matches!(f.eval(1.5), Err(Error::RadiusOutOfRange(_))));
}

#[test]
fn inverse_examples() {
    let f = map(2.0);
    assert_eq!(f.inverse_eval_log(lr(-1.0)).log2(), -0.5);
    assert_eq!(f.inverse_eval_log(LogRadius::UNIT).log2(), 0.0);
    let got = f.inverse_eval_log(lr(0.18f64.log2())).log2();
    assert!((got - 0.15f64.log2()).abs() < EPS);
}

#[test]
fn mean_radius_examples() {
    let f = map(2.0);
    assert_eq!(f.mean_radius_radial(f.breakpoint(2)).log2(), -2.0);
    assert_eq!(map(3.7).mean_radius_radial(LogRadius::UNIT).log2(), 0.0);
    assert!((f.mean_radius_radial(lr(-1.0)).log2() + 1.25).abs() < EPS);
}

#[test]
fn f_matches_linear_oracle() {
    for k in [1.2, 2.0, 2.9] {
        let f = map(k);
        let o = LinearOracle::new(k, 60);
        let bottom = o.r[40];
        for i in 0..=500 {
            let x = bottom.powf(i as f64 / 500.0);
            let want = o.f(x).log2();
            let got = f.eval_log(LogRadius::from_radius(x).unwrap()).log2();
            assert!(
                (got - want).abs() < 1e-9,
                "K={k} x={x} got={got} want={want}"
            );
        }
    }
}

#[test]
fn h_matches_linear_oracle() {
    for k in [1.2, 2.0, 2.9] {
        let f = map(k);
        let h = ConjugatedMap::build_conjugated_map(&f);
        let o = LinearOracle::new(k, 80);
        let bottom = o.r[30];
        for i in 0..=300 {
            let x = bottom.powf(i as f64 / 300.0);
            let want = o.h(x).log2();
            let got = h.h_eval_log(LogRadius::from_radius(x).unwrap()).log2();
            assert!((got - want).abs() < 1e-9, "K={k} x={x}");
        }
    }
}

#[test]
fn h_examples() {
    let f = map(2.0);
    let h = ConjugatedMap::build_conjugated_map(&f);
    let want = (-0.5f64).exp2() * 0.8f64.powi(4);
    assert!((h.h_eval_log(lr(0.8f64.log2())).radius() - want).abs() < EPS);
    assert!((h.h_eval_log(lr(0.8f64.log2())).radius() - 0.289_630_937_57).abs() < 1e-10);
    assert_eq!(h.h_eval_log(f.breakpoint(2)).log2(), -3.0);
    assert!(h.h_eval_log(LogRadius::ORIGIN).is_origin());
    assert_eq!(h_via_conjugacy(&f, LogRadius::UNIT).log2(), -0.5);
    assert_eq!(h_via_conjugacy(&f, f.breakpoint(3)).log2(), -5.0);
    for k in [1.4, 2.0, 5.0] {
        let g = map(k);
        let hk = ConjugatedMap::build_conjugated_map(&g);
        assert_eq!(hk.h_eval_log(LogRadius::UNIT).log2(), g.log2_breakpoint(1));
    }
}

#[test]
fn iterate_matches_repeated_conjugacy() {
    let f = map(2.0);
    let h = ConjugatedMap::build_conjugated_map(&f);
    assert_eq!(h.iterate(LogRadius::UNIT, 2).log2(), -2.5);
    let x = lr(0.8f64.log2());
    let mut y = x;
    for m in 0..=9 {
        assert!((h.iterate(x, m).log2() - y.log2()).abs() < 1e-12, "m={m}");
        y = h_via_conjugacy(&f, y);
    }
    assert!((h.iterate(x, 3).log2() - (-2.5 + h.h_eval_log(x).log2())).abs() < EPS);
}

#[test]
fn rescaled_examples() {
    let f = map(2.0);
    let got = rescaled_eval(&f, f.breakpoint(2), lr(0.8f64.log2())).unwrap();
    assert!((got.log2() - 0.64f64.log2()).abs() < EPS);
    for t in [-0.1, -3.3, -17.0] {
        assert_eq!(
            rescaled_eval(&f, lr(t), LogRadius::UNIT).unwrap().log2(),
            0.0
        );
    }
    let r1 = f.breakpoint(1);
    assert_eq!(rescaled_eval(&f, r1, r1).unwrap().log2(), -0.25);
}

/// Each limit against a zoom of the map at several depths.
#[test]
fn limit_values_match_zooms() {
    let f = map(2.0);
    let h = ConjugatedMap::build_conjugated_map(&f);
    let r1 = f.breakpoint(1);
    let cases: [(LimitKind, f64); 4] = [
        (LimitKind::P1, -1.0),
        (LimitKind::P2, -0.25),
        (LimitKind::Q1, -2.0),
        (LimitKind::Q2, -0.125),
    ];
    for (kind, want) in cases {
        let lf = LimitFunction::new(kind, &f);
        assert!((lf.limit_eval(r1).log2() - want).abs() < EPS, "{kind:?}");
        assert_eq!(lf.limit_eval(LogRadius::UNIT).log2(), 0.0);
        for k in [1, 2, 5, 30] {
            let got = match kind {
                LimitKind::P1 => rescaled_eval(&f, f.breakpoint(2 * k), r1),
                LimitKind::P2 => rescaled_eval(&f, f.breakpoint(2 * k - 1), r1),
                LimitKind::Q1 => rescaled_eval(&h, f.breakpoint(2 * k), r1),
                LimitKind::Q2 => rescaled_eval(&h, f.breakpoint(2 * k - 1), r1),
            }
            .unwrap();
            assert!((got.log2() - want).abs() < 1e-12, "{kind:?} k={k}");
        }
    }
}

/// P2(x) = f(x - 1/K) + 1, Q1 = h + 1/K and Q2(x) = h(x - 1/K) + K + 1/K in
/// log2: the odd zoom scale differs from the even one by a factor 2^{1/K}.
#[test]
fn limits_match_shift_identities() {
    for k in [1.3, 2.0, 4.5] {
        let f = map(k);
        let h = ConjugatedMap::build_conjugated_map(&f);
        let p2 = LimitFunction::new(LimitKind::P2, &f);
        let q1 = LimitFunction::new(LimitKind::Q1, &f);
        let q2 = LimitFunction::new(LimitKind::Q2, &f);
        for i in 0..400 {
            let x = -(i as f64) * 0.0731;
            let xs = lr(x - 1.0 / k);
            let p2_want = f.eval_log(xs).log2() + 1.0;
            let q1_want = h.h_eval_log(lr(x)).log2() + 1.0 / k;
            let q2_want = h.h_eval_log(xs).log2() + k + 1.0 / k;
            assert!(
                (p2.limit_eval(lr(x)).log2() - p2_want).abs() < 1e-9,
                "K={k} x={x}"
            );
            assert!(
                (q1.limit_eval(lr(x)).log2() - q1_want).abs() < 1e-9,
                "K={k} x={x}"
            );
            assert!(
                (q2.limit_eval(lr(x)).log2() - q2_want).abs() < 1e-9,
                "K={k} x={x}"
            );
        }
    }
}

#[test]
fn distinct_limits_are_far_apart() {
    let f = map(2.0);
    let grid = qcspace::log_uniform_grid(-10.0, 0.0, 1000).unwrap();
    let p1 = LimitFunction::new(LimitKind::P1, &f);
    let p2 = LimitFunction::new(LimitKind::P2, &f);
    let even_vs_p2 =
        qcspace::zoom_limit_deviation(&f, ZoomSequence::EvenBreakpoints, &p2, 1..=50, &grid)
            .unwrap();
    assert!(even_vs_p2 >= 0.3);
    let gap =
        (p1.limit_eval(f.breakpoint(1)).radius() - p2.limit_eval(f.breakpoint(1)).radius()).abs();
    assert!((gap - ((-0.25f64).exp2() - 0.5)).abs() < EPS);
}

#[test]
fn ivt_examples() {
    let f = map(2.0);
    let r1 = f.breakpoint(1);
    let lambda = lr(0.67f64.log2());
    let t = ivt_sample(&f, r1, lambda, 1e-9, 1).unwrap();
    let got = rescaled_eval(&f, t, r1).unwrap().radius();
    assert!((got.log2() - lambda.log2()).abs() <= 1e-9);
    assert!((got - 0.67).abs() < 1e-9);

    let p1 = LimitFunction::new(LimitKind::P1, &f);
    for k in 1..=4 {
        let t = ivt_sample(&f, r1, p1.limit_eval(r1), 1e-9, k).unwrap();
        assert_eq!(t, f.breakpoint(2 * k));
    }

    let err = ivt_sample(&f, r1, lr(0.9f64.log2()), 1e-9, 1).unwrap_err();
    assert!(matches!(err, Error::NoBracket { .. }));
}

#[test]
fn homogeneity_examples() {
    let f = map(2.0);
    let samples = [LogRadius::UNIT, f.breakpoint(1), f.breakpoint(2)];
    let p1 = LimitFunction::new(LimitKind::P1, &f);
    let q1 = LimitFunction::new(LimitKind::Q1, &f);
    let values: Vec<f64> = samples.iter().map(|&s| p1.limit_eval(s).log2()).collect();
    assert_eq!(values, vec![0.0, -1.0, -2.0]);
    assert!(homogeneity_defect(&p1, &samples).unwrap() >= 0.5);
    assert!(homogeneity_defect(&q1, &samples).unwrap() > 0.1);
    let power = PowerMap::new(2.0).unwrap();
    assert!(homogeneity_defect(&power, &samples).unwrap() < 1e-15);
}

#[test]
fn example_1d_values() {
    for delta in [1e-9, 0.25, 0.5, 2.0] {
        assert!(
            (qcspace::example_1d_mean_radius(delta).unwrap() - 0.75 * delta).abs()
                <= 1e-16 * delta.max(1.0)
        );
        assert!((qcspace::example_1d_rescaled(1.0, delta).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!((qcspace::example_1d_rescaled(-1.0, delta).unwrap() + 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(qcspace::example_1d_rescaled(0.0, delta).unwrap(), 0.0);
    }
}

#[test]
fn distortion_examples() {
    let r = radial_power_distortion(2.0, 3).unwrap();
    assert_eq!((r.outer, r.inner, r.maximal), (4.0, 2.0, 4.0));
    for d in 2..6 {
        let r = radial_power_distortion(1.0, d).unwrap();
        assert_eq!((r.outer, r.inner, r.maximal), (1.0, 1.0, 1.0));
    }
    let r = radial_power_distortion(0.5, 2).unwrap();
    assert_eq!((r.outer, r.inner, r.maximal), (2.0, 2.0, 2.0));

    let f = map(2.0);
    let x = lr(0.8f64.log2());
    let p = pointwise_distortion(&f, 2, x).unwrap();
    assert_eq!((p.outer, p.inner), (2.0, 2.0));
    let p = pointwise_distortion(&f, 3, x).unwrap();
    assert_eq!((p.outer, p.inner), (4.0, 2.0));
    assert!(matches!(
        pointwise_distortion(&f, 2, f.breakpoint(1)),
        Err(Error::NotDifferentiable { .. })
    ));

    assert_eq!(max_distortion(&f, 3).unwrap().maximal, 4.0);
    assert_eq!(max_distortion(&f, 2).unwrap().maximal, 2.0);
    let h = ConjugatedMap::build_conjugated_map(&f);
    assert_eq!(max_distortion(&h, 2).unwrap().maximal, 4.0);
}
