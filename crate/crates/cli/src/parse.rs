//! Parsers for the small text formats accepted on the command line.

use crate::error::{CliError, CliResult};

/// Most indices an index-range spec may expand to.
pub const MAX_INDICES: usize = 100_000;
/// Largest accepted zoom index; `2n` must not overflow.
pub const MAX_INDEX: u64 = 1 << 52;
pub const MAX_GRID_COUNT: usize = 10_000_000;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_index(s: &str) -> CliResult<u64> {
    let n: u64 = s
        .trim()
        .parse()
        .map_err(|_| usage(format!("not an index: {s:?}")))?;
    if n == 0 || n > MAX_INDEX {
        return Err(usage(format!("index {n} out of range 1..={MAX_INDEX}")));
    }
    Ok(n)
}

/// Parses `"1..10"`, `"1..=10"`, `"7"` or a comma-separated mix of these.
/// Ranges are inclusive; indices start at 1.
pub fn parse_index_range(spec: &str) -> CliResult<Vec<u64>> {
    let mut out = Vec::new();
    for item in spec.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(usage(format!("empty item in index range {spec:?}")));
        }
        let (lo, hi) = match item.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                (parse_index(a)?, parse_index(b)?)
            }
            None => {
                let n = parse_index(item)?;
                (n, n)
            }
        };
        if lo > hi {
            return Err(usage(format!("empty range {item:?}")));
        }
        let len = hi - lo + 1;
        if len > (MAX_INDICES - out.len()) as u64 {
            return Err(usage(format!(
                "index range expands past {MAX_INDICES} entries"
            )));
        }
        out.extend(lo..=hi);
    }
    Ok(out)
}

/// A log-uniform radius grid: `count` points from `log2 r = min` to `max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

/// Parses `"MIN:MAX:COUNT"` with `MIN <= MAX <= 0` in `log2 r`.
pub fn parse_grid_spec(spec: &str) -> CliResult<GridSpec> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [min, max, count] = parts[..] else {
        return Err(usage(format!(
            "grid spec must be MIN:MAX:COUNT, got {spec:?}"
        )));
    };
    let num = |s: &str| -> CliResult<f64> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| usage(format!("not a number: {s:?}")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(usage(format!("grid bound must be finite: {s:?}")))
        }
    };
    let (min, max) = (num(min)?, num(max)?);
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| usage(format!("not a count: {count:?}")))?;
    if !(min <= max && max <= 0.0) {
        return Err(usage(format!(
            "grid needs MIN <= MAX <= 0, got {min}:{max}"
        )));
    }
    if !(1..=MAX_GRID_COUNT).contains(&count) {
        return Err(usage(format!("grid count must be in 1..={MAX_GRID_COUNT}")));
    }
    Ok(GridSpec { min, max, count })
}

impl GridSpec {
    pub fn points(&self) -> CliResult<Vec<qcspace::LogRadius>> {
        Ok(qcspace::log_uniform_grid(self.min, self.max, self.count)?)
    }
}
