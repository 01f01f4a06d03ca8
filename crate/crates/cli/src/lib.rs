//! Command-line front end for `qcspace`.
//!
//! Parsing, configuration layering, and rendering live here so they can be
//! tested and fuzzed without spawning the binary.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod parse;

use std::io::Write;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::commands::{Body, IvtArgs, Outcome, ZoomArgs};
use crate::config::{FileConfig, RunConfig};
use crate::error::{CliError, CliResult, EXIT_ASSERTION, EXIT_OK, EXIT_USAGE};
use crate::output::Format;

pub use crate::config::parse_config_json;
pub use crate::parse::{parse_grid_spec, parse_index_range};

/// Runs the CLI on `argv` and returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                return EXIT_USAGE;
            }
            let _ = stdout.write_all(text.as_bytes());
            return EXIT_OK;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn load_config(cli: &Cli) -> CliResult<RunConfig> {
    let file = match &cli.global.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            parse_config_json(&text)?
        }
        None => FileConfig::default(),
    };
    RunConfig::resolve(&file, &cli.global.overrides())
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<i32> {
    let cfg = load_config(cli)?;
    let outcome = dispatch(&cfg, &cli.command)?;
    let default_format = match cli.command {
        Command::Verify => Format::Json,
        _ => Format::Csv,
    };
    let format = cli.global.format.unwrap_or(default_format);

    if let Some(body) = &outcome.body {
        let (bytes, summary) = render(body, format, &cfg)?;
        emit(&cli.global.output, &bytes, stdout)?;
        let _ = stderr.write_all(summary.as_bytes());
    }
    match outcome.failure {
        Some(msg) => {
            let _ = writeln!(stderr, "assertion failed: {msg}");
            Ok(EXIT_ASSERTION)
        }
        None => Ok(EXIT_OK),
    }
}

fn dispatch(cfg: &RunConfig, command: &Command) -> CliResult<Outcome> {
    match command {
        Command::Eval { map, r, log2_r } => commands::eval(cfg, *map, r, log2_r),
        Command::Zoom {
            map,
            seq,
            n,
            against,
            grid,
            no_assert,
        } => commands::zoom(
            cfg,
            &ZoomArgs {
                map: *map,
                seq: *seq,
                n,
                against: *against,
                grid: grid.as_deref(),
                no_assert: *no_assert,
            },
        ),
        Command::Ivt {
            map,
            r0,
            log2_r0,
            lambda,
            log2_lambda,
            period,
        } => commands::ivt(
            cfg,
            &IvtArgs {
                map: *map,
                r0: *r0,
                log2_r0: *log2_r0,
                lambda: *lambda,
                log2_lambda: *log2_lambda,
                period: *period,
            },
        ),
        Command::Iterate { r, log2_r, m } => commands::iterate(cfg, *r, *log2_r, *m),
        Command::Distortion {
            map,
            alpha,
            iterates,
        } => commands::distortion(cfg, *map, *alpha, *iterates),
        Command::Verify => commands::verify(cfg),
    }
}

/// Rendered output plus summary lines destined for stderr.
fn render(body: &Body, format: Format, cfg: &RunConfig) -> CliResult<(Vec<u8>, String)> {
    match (body, format) {
        (Body::Table(t), Format::Csv) => Ok((t.to_csv()?, t.summary_lines())),
        (Body::Table(t), Format::Json) => Ok((t.to_json(cfg)?, String::new())),
        (Body::Report(r), Format::Json) => {
            let mut out = serde_json::to_vec_pretty(r)?;
            out.push(b'\n');
            Ok((out, String::new()))
        }
        (Body::Report(r), Format::Csv) => {
            let t = commands::report_table(r);
            Ok((t.to_csv()?, t.summary_lines()))
        }
    }
}

fn emit(target: &str, bytes: &[u8], stdout: &mut dyn Write) -> CliResult<()> {
    if target == "-" {
        stdout.write_all(bytes).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })
    } else {
        std::fs::write(target, bytes).map_err(|source| CliError::Io {
            path: target.into(),
            source,
        })
    }
}
