//! Run configuration: defaults, then the JSON config file, then flags.

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const DEFAULT_K: f64 = 2.0;
pub const DEFAULT_DIMENSION: u32 = 2;
pub const DEFAULT_DEPTH: usize = qcspace::DEFAULT_DEPTH;
pub const DEFAULT_GRID_POINTS: usize = 1000;
pub const DEFAULT_TOL: f64 = 1e-9;

/// Cached breakpoints cost 16 bytes per index.
pub const MAX_DEPTH: usize = 10_000_000;
pub const MAX_GRID_POINTS: usize = 10_000_000;
pub const MAX_DIMENSION: u32 = 64;

/// The config file as written; every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "K")]
    pub k: Option<f64>,
    pub dimension: Option<u32>,
    pub depth: Option<usize>,
    pub grid_points: Option<usize>,
    pub tol: Option<f64>,
}

pub fn parse_config_json(text: &str) -> CliResult<FileConfig> {
    serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    #[serde(rename = "K")]
    pub k: f64,
    pub dimension: u32,
    pub depth: usize,
    pub grid_points: usize,
    pub tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            k: DEFAULT_K,
            dimension: DEFAULT_DIMENSION,
            depth: DEFAULT_DEPTH,
            grid_points: DEFAULT_GRID_POINTS,
            tol: DEFAULT_TOL,
        }
    }
}

impl RunConfig {
    /// Later layers win field by field.
    pub fn resolve(file: &FileConfig, flags: &FileConfig) -> CliResult<Self> {
        let d = RunConfig::default();
        let cfg = RunConfig {
            k: flags.k.or(file.k).unwrap_or(d.k),
            dimension: flags.dimension.or(file.dimension).unwrap_or(d.dimension),
            depth: flags.depth.or(file.depth).unwrap_or(d.depth),
            grid_points: flags
                .grid_points
                .or(file.grid_points)
                .unwrap_or(d.grid_points),
            tol: flags.tol.or(file.tol).unwrap_or(d.tol),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(self.k.is_finite() && self.k > 1.0) {
            return bad(format!("K must be a finite number > 1, got {}", self.k));
        }
        if !(2..=MAX_DIMENSION).contains(&self.dimension) {
            return bad(format!(
                "dimension must be in 2..={MAX_DIMENSION}, got {}",
                self.dimension
            ));
        }
        if !(2..=MAX_DEPTH).contains(&self.depth) {
            return bad(format!(
                "depth must be in 2..={MAX_DEPTH}, got {}",
                self.depth
            ));
        }
        if !(1..=MAX_GRID_POINTS).contains(&self.grid_points) {
            return bad(format!(
                "grid_points must be in 1..={MAX_GRID_POINTS}, got {}",
                self.grid_points
            ));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return bad(format!("tol must be a finite number > 0, got {}", self.tol));
        }
        Ok(())
    }

    pub fn verify_config(&self) -> qcspace::verify::VerifyConfig {
        qcspace::verify::VerifyConfig {
            k: self.k,
            dimension: self.dimension,
            depth: self.depth,
            grid_points: self.grid_points,
            tol: self.tol,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        let file = parse_config_json("{}").unwrap();
        let cfg = RunConfig::resolve(&file, &FileConfig::default()).unwrap();
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn full_document() {
        let text =
            r#"{"K": 2.0, "dimension": 2, "depth": 10000, "grid_points": 1000, "tol": 1e-9}"#;
        let file = parse_config_json(text).unwrap();
        assert_eq!(file.k, Some(2.0));
        assert_eq!(file.tol, Some(1e-9));
    }

    #[test]
    fn flags_override_file() {
        let file = parse_config_json(r#"{"K": 3.0, "tol": 1e-6}"#).unwrap();
        let flags = FileConfig {
            k: Some(1.5),
            ..FileConfig::default()
        };
        let cfg = RunConfig::resolve(&file, &flags).unwrap();
        assert_eq!(cfg.k, 1.5);
        assert_eq!(cfg.tol, 1e-6);
        assert_eq!(cfg.depth, DEFAULT_DEPTH);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(parse_config_json(r#"{"k": 2}"#).is_err());
        assert!(parse_config_json(r#"{"K": "2"}"#).is_err());
        assert!(parse_config_json("[]").is_err());
        assert!(parse_config_json(r#"{"depth": -1}"#).is_err());
    }

    #[test]
    fn rejects_bad_values() {
        for file in [
            r#"{"K": 1.0}"#,
            r#"{"K": 0.5}"#,
            r#"{"dimension": 1}"#,
            r#"{"depth": 0}"#,
            r#"{"grid_points": 0}"#,
            r#"{"tol": 0}"#,
            r#"{"tol": -1e-9}"#,
        ] {
            let file = parse_config_json(file).unwrap();
            assert!(RunConfig::resolve(&file, &FileConfig::default()).is_err());
        }
    }
}
