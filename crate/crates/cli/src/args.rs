use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::FileConfig;
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "qcspace",
    version,
    about = "Radial quasiconformal maps that are not simple at the origin",
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON config file; flags override its fields
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Distortion parameter K > 1
    #[arg(long = "K", global = true)]
    pub k: Option<f64>,
    /// Ambient dimension d >= 2
    #[arg(long, alias = "d", global = true)]
    pub dimension: Option<u32>,
    /// Number of cached breakpoints
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Points in default radius grids
    #[arg(long, global = true)]
    pub grid_points: Option<usize>,
    /// Tolerance for identity checks (log2, absolute)
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output format [default: json for verify, csv otherwise]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file, `-` for standard output
    #[arg(long, global = true, default_value = "-")]
    pub output: String,
}

impl GlobalArgs {
    pub fn overrides(&self) -> FileConfig {
        FileConfig {
            k: self.k,
            dimension: self.dimension,
            depth: self.depth,
            grid_points: self.grid_points,
            tol: self.tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapChoice {
    #[value(name = "f")]
    F,
    #[value(name = "h")]
    H,
    #[value(name = "P1", alias = "p1")]
    P1,
    #[value(name = "P2", alias = "p2")]
    P2,
    #[value(name = "Q1", alias = "q1")]
    Q1,
    #[value(name = "Q2", alias = "q2")]
    Q2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DynamicMap {
    #[value(name = "f")]
    F,
    #[value(name = "h")]
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LimitChoice {
    #[value(name = "P1", alias = "p1")]
    P1,
    #[value(name = "P2", alias = "p2")]
    P2,
    #[value(name = "Q1", alias = "q1")]
    Q1,
    #[value(name = "Q2", alias = "q2")]
    Q2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeqChoice {
    Even,
    Odd,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a map at given radii
    #[command(allow_negative_numbers = true)]
    Eval {
        #[arg(long, value_enum)]
        map: MapChoice,
        /// Radii in (0, 1], comma-separated or repeated
        #[arg(long = "r", value_delimiter = ',')]
        r: Vec<f64>,
        /// Radii given as log2 r <= 0
        #[arg(long = "log2-r", value_delimiter = ',')]
        log2_r: Vec<f64>,
    },
    /// Compare zooms along breakpoint scales with a limit function
    #[command(allow_negative_numbers = true)]
    Zoom {
        #[arg(long, value_enum)]
        map: DynamicMap,
        #[arg(long, value_enum)]
        seq: SeqChoice,
        /// Scale indices, e.g. 1..10 or 2,4,8
        #[arg(long, default_value = "1..10")]
        n: String,
        /// Limit to compare against [default: the matched limit]
        #[arg(long, value_enum)]
        against: Option<LimitChoice>,
        /// log2-uniform grid MIN:MAX:COUNT [default: four log-periods, grid_points]
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// Report deviations without failing
        #[arg(long)]
        no_assert: bool,
    },
    /// Find a zoom scale hitting a value between the two limits
    #[command(allow_negative_numbers = true)]
    Ivt {
        #[arg(long, value_enum, default_value = "f")]
        map: DynamicMap,
        #[arg(long, conflicts_with = "log2_r0", required_unless_present = "log2_r0")]
        r0: Option<f64>,
        #[arg(long = "log2-r0")]
        log2_r0: Option<f64>,
        #[arg(
            long,
            conflicts_with = "log2_lambda",
            required_unless_present = "log2_lambda"
        )]
        lambda: Option<f64>,
        #[arg(long = "log2-lambda")]
        log2_lambda: Option<f64>,
        /// Log-period to search in (1 = coarsest)
        #[arg(long, default_value_t = 1)]
        period: u64,
    },
    /// Orbit of a radius under h
    #[command(allow_negative_numbers = true)]
    Iterate {
        #[arg(
            long = "r",
            conflicts_with = "log2_r",
            required_unless_present = "log2_r"
        )]
        r: Option<f64>,
        #[arg(long = "log2-r")]
        log2_r: Option<f64>,
        #[arg(long)]
        m: u64,
    },
    /// Distortion of f, of iterates of h, or of a pure power r^alpha
    #[command(allow_negative_numbers = true)]
    Distortion {
        #[arg(
            long,
            value_enum,
            conflicts_with = "alpha",
            required_unless_present = "alpha"
        )]
        map: Option<DynamicMap>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Iterates of h to tabulate
        #[arg(long, default_value_t = 1)]
        iterates: u64,
    },
    /// Run the full invariant suite
    Verify,
}
