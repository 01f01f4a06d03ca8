//! One function per subcommand. Each builds its table and reports whether an
//! assertion failed; rendering and exit codes are handled by the caller.

use qcspace::verify::{run_verification, Comparison, VerifyReport};
use qcspace::{
    iterate_max_distortion, ivt_sample, log_uniform_grid, max_distortion, radial_power_distortion,
    rescaled_eval, ConjugatedMap, DistortionReport, Error, LimitFunction, LimitKind, LogRadius,
    PiecewisePowerMap, PowerMap, RadialMap, ZoomSequence,
};

use crate::args::{DynamicMap, LimitChoice, MapChoice, SeqChoice};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Table};
use crate::parse::{parse_grid_spec, parse_index_range};

/// Longest orbit or iterate sweep accepted.
pub const MAX_STEPS: u64 = 10_000_000;

#[derive(Debug)]
pub enum Body {
    Table(Table),
    Report(VerifyReport),
}

#[derive(Debug)]
pub struct Outcome {
    pub body: Option<Body>,
    /// Set when an assertion failed (exit code 1).
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(table: Table) -> Self {
        Outcome {
            body: Some(Body::Table(table)),
            failure: None,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn build(cfg: &RunConfig) -> CliResult<PiecewisePowerMap> {
    Ok(PiecewisePowerMap::build_standard_map(cfg.k, cfg.depth)?)
}

/// A radius in `(0, 1]` given linearly.
fn radius_arg(name: &str, r: f64) -> CliResult<LogRadius> {
    if !(r.is_finite() && r > 0.0 && r <= 1.0) {
        return Err(usage(format!("--{name} must be in (0, 1], got {r}")));
    }
    Ok(LogRadius::from_radius(r)?)
}

/// A radius given as `log2 r <= 0`.
fn log2_arg(name: &str, x: f64) -> CliResult<LogRadius> {
    LogRadius::new(x).map_err(|_| usage(format!("--{name} must be finite and <= 0, got {x}")))
}

fn either(name: &str, linear: Option<f64>, log2: Option<f64>) -> CliResult<LogRadius> {
    match (linear, log2) {
        (Some(r), None) => radius_arg(name, r),
        (None, Some(x)) => log2_arg(&format!("log2-{name}"), x),
        _ => Err(usage(format!(
            "give exactly one of --{name} and --log2-{name}"
        ))),
    }
}

fn limit_kind(c: LimitChoice) -> LimitKind {
    match c {
        LimitChoice::P1 => LimitKind::P1,
        LimitChoice::P2 => LimitKind::P2,
        LimitChoice::Q1 => LimitKind::Q1,
        LimitChoice::Q2 => LimitKind::Q2,
    }
}

fn sequence(s: SeqChoice) -> ZoomSequence {
    match s {
        SeqChoice::Even => ZoomSequence::EvenBreakpoints,
        SeqChoice::Odd => ZoomSequence::OddBreakpoints,
    }
}

pub fn eval(cfg: &RunConfig, map: MapChoice, r: &[f64], log2_r: &[f64]) -> CliResult<Outcome> {
    let mut xs = Vec::with_capacity(r.len() + log2_r.len());
    for &v in r {
        xs.push(radius_arg("r", v)?);
    }
    for &v in log2_r {
        xs.push(log2_arg("log2-r", v)?);
    }
    if xs.is_empty() {
        return Err(usage("eval needs at least one --r or --log2-r"));
    }
    let f = build(cfg)?;
    let h = ConjugatedMap::build_conjugated_map(&f);
    let limit = |kind| LimitFunction::new(kind, &f);
    let mut table = Table::new("eval", &["r", "log2_r", "value", "log2_value"]);
    for x in xs {
        let y = match map {
            MapChoice::F => f.eval_log(x),
            MapChoice::H => h.h_eval_log(x),
            MapChoice::P1 => limit(LimitKind::P1).limit_eval(x),
            MapChoice::P2 => limit(LimitKind::P2).limit_eval(x),
            MapChoice::Q1 => limit(LimitKind::Q1).limit_eval(x),
            MapChoice::Q2 => limit(LimitKind::Q2).limit_eval(x),
        };
        table.push(vec![
            Cell::Float(x.radius()),
            Cell::Float(x.log2()),
            Cell::Float(y.radius()),
            Cell::Float(y.log2()),
        ]);
    }
    Ok(Outcome::ok(table))
}

pub struct ZoomArgs<'a> {
    pub map: DynamicMap,
    pub seq: SeqChoice,
    pub n: &'a str,
    pub against: Option<LimitChoice>,
    pub grid: Option<&'a str>,
    pub no_assert: bool,
}

pub fn zoom(cfg: &RunConfig, args: &ZoomArgs<'_>) -> CliResult<Outcome> {
    let ns = parse_index_range(args.n)?;
    let f = build(cfg)?;
    let grid = match args.grid {
        Some(spec) => parse_grid_spec(spec)?.points()?,
        None => log_uniform_grid(-4.0 * f.period(), 0.0, cfg.grid_points)?,
    };
    let h = ConjugatedMap::build_conjugated_map(&f);
    let seq = sequence(args.seq);
    let (target, matched): (&dyn RadialMap, LimitKind) = match (args.map, args.seq) {
        (DynamicMap::F, SeqChoice::Even) => (&f, LimitKind::P1),
        (DynamicMap::F, SeqChoice::Odd) => (&f, LimitKind::P2),
        (DynamicMap::H, SeqChoice::Even) => (&h, LimitKind::Q1),
        (DynamicMap::H, SeqChoice::Odd) => (&h, LimitKind::Q2),
    };
    let kind = args.against.map(limit_kind).unwrap_or(matched);
    let lf = LimitFunction::new(kind, &f);

    let mut table = Table::new(
        "zoom",
        &[
            "n",
            "log2_t",
            "log2_r",
            "rescaled",
            "matched_limit",
            "abs_dev",
        ],
    );
    let mut worst = 0.0f64;
    for &n in &ns {
        let t = seq.scale(&f, n);
        for &r in &grid {
            let got = rescaled_eval(target, t, r)?.log2();
            let want = lf.limit_eval(r).log2();
            let dev = (got - want).abs();
            worst = worst.max(dev);
            table.push(vec![
                Cell::Int(n),
                Cell::Float(t.log2()),
                Cell::Float(r.log2()),
                Cell::Float(got),
                Cell::Float(want),
                Cell::Float(dev),
            ]);
        }
    }
    table.summary = vec![
        ("limit", Cell::Text(kind.name().into())),
        ("matched", Cell::Bool(kind == matched)),
        ("max_abs_dev", Cell::Float(worst)),
    ];
    let failure = (kind == matched && worst > cfg.tol && !args.no_assert).then(|| {
        format!(
            "zoom deviation {worst:e} from matched limit {} exceeds tol {:e}",
            kind.name(),
            cfg.tol
        )
    });
    Ok(Outcome {
        body: Some(Body::Table(table)),
        failure,
    })
}

pub struct IvtArgs {
    pub map: DynamicMap,
    pub r0: Option<f64>,
    pub log2_r0: Option<f64>,
    pub lambda: Option<f64>,
    pub log2_lambda: Option<f64>,
    pub period: u64,
}

pub fn ivt(cfg: &RunConfig, args: &IvtArgs) -> CliResult<Outcome> {
    let r0 = either("r0", args.r0, args.log2_r0)?;
    let lambda = either("lambda", args.lambda, args.log2_lambda)?;
    if r0.log2() == 0.0 {
        return Err(usage(
            "r0 must be below 1: every zoom fixes the unit sphere",
        ));
    }
    if args.period == 0 || args.period > (cfg.depth / 2) as u64 {
        return Err(usage(format!(
            "--period must be in 1..={} at depth {}",
            cfg.depth / 2,
            cfg.depth
        )));
    }
    let f = build(cfg)?;
    let h = ConjugatedMap::build_conjugated_map(&f);
    let found = match args.map {
        DynamicMap::F => ivt_sample(&f, r0, lambda, cfg.tol, args.period),
        DynamicMap::H => ivt_sample(&h, r0, lambda, cfg.tol, args.period),
    };
    let t = match found {
        Ok(t) => t,
        Err(e @ (Error::NoBracket { .. } | Error::NoConvergence { .. })) => {
            return Ok(Outcome {
                body: None,
                failure: Some(e.to_string()),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let achieved = match args.map {
        DynamicMap::F => rescaled_eval(&f, t, r0)?,
        DynamicMap::H => rescaled_eval(&h, t, r0)?,
    };
    let residual = (achieved.log2() - lambda.log2()).abs();
    let mut table = Table::new("ivt", &["log2_t", "achieved_value", "residual"]);
    table.push(vec![
        Cell::Float(t.log2()),
        Cell::Float(achieved.radius()),
        Cell::Float(residual),
    ]);
    let failure =
        (residual > cfg.tol).then(|| format!("residual {residual:e} exceeds tol {:e}", cfg.tol));
    Ok(Outcome {
        body: Some(Body::Table(table)),
        failure,
    })
}

pub fn iterate(cfg: &RunConfig, r: Option<f64>, log2_r: Option<f64>, m: u64) -> CliResult<Outcome> {
    let x = either("r", r, log2_r)?;
    if m > MAX_STEPS {
        return Err(usage(format!("--m must be at most {MAX_STEPS}")));
    }
    let f = build(cfg)?;
    let h = ConjugatedMap::build_conjugated_map(&f);
    let mut table = Table::new("iterate", &["m", "log2_value", "value"]);
    for j in 0..=m {
        let y = h.iterate(x, j);
        table.push(vec![
            Cell::Int(j),
            Cell::Float(y.log2()),
            Cell::Float(y.radius()),
        ]);
    }
    Ok(Outcome::ok(table))
}

fn distortion_row(m: Cell, r: &DistortionReport) -> Vec<Cell> {
    vec![
        m,
        Cell::Float(r.outer),
        Cell::Float(r.inner),
        Cell::Float(r.maximal),
    ]
}

pub fn distortion(
    cfg: &RunConfig,
    map: Option<DynamicMap>,
    alpha: Option<f64>,
    iterates: u64,
) -> CliResult<Outcome> {
    let d = cfg.dimension;
    let reports = match (map, alpha) {
        (None, Some(alpha)) => {
            PowerMap::new(alpha)?;
            vec![radial_power_distortion(alpha, d)?]
        }
        (Some(DynamicMap::F), None) => {
            let f = build(cfg)?;
            vec![max_distortion(&f, d)?]
        }
        (Some(DynamicMap::H), None) => {
            if iterates == 0 || iterates > MAX_STEPS {
                return Err(usage(format!("--iterates must be in 1..={MAX_STEPS}")));
            }
            let f = build(cfg)?;
            iterate_max_distortion(ConjugatedMap::build_conjugated_map(&f), d, iterates)?
        }
        _ => return Err(usage("give exactly one of --map and --alpha")),
    };
    let mut table = Table::new("distortion", &["m", "K_O", "K_I", "K_max"]);
    for (i, r) in reports.iter().enumerate() {
        table.push(distortion_row(Cell::Int(i as u64 + 1), r));
    }
    let sup = |g: fn(&DistortionReport) -> f64| reports.iter().map(g).fold(1.0, f64::max);
    table.push(vec![
        Cell::Text("sup".into()),
        Cell::Float(sup(|r| r.outer)),
        Cell::Float(sup(|r| r.inner)),
        Cell::Float(sup(|r| r.maximal)),
    ]);
    Ok(Outcome::ok(table))
}

pub fn verify(cfg: &RunConfig) -> CliResult<Outcome> {
    let report = run_verification(&cfg.verify_config())?;
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    let failure = (!failed.is_empty())
        .then(|| format!("{} check(s) failed: {}", failed.len(), failed.join(", ")));
    Ok(Outcome {
        body: Some(Body::Report(report)),
        failure,
    })
}

/// The verification report as a flat table.
pub fn report_table(report: &VerifyReport) -> Table {
    let mut table = Table::new(
        "verify",
        &[
            "module",
            "name",
            "measured",
            "comparison",
            "threshold",
            "passed",
        ],
    );
    for c in &report.checks {
        let cmp = match c.comparison {
            Comparison::AtMost => "at_most",
            Comparison::AtLeast => "at_least",
        };
        table.push(vec![
            Cell::Text(c.module.into()),
            Cell::Text(c.name.into()),
            Cell::Float(c.measured),
            Cell::Text(cmp.into()),
            Cell::Float(c.threshold),
            Cell::Bool(c.passed),
        ]);
    }
    table.summary = vec![("all_passed", Cell::Bool(report.all_passed))];
    table
}
