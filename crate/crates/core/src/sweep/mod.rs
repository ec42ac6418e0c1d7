//! Configuration-driven parameter sweeps writing CSV grids and SVG heatmaps.

mod config;
mod heatmap;
mod run;
mod selftest;

pub use config::{Axis, AxisName, ConfigError, Experiment, FixedParams, Scale, SweepConfig};
pub use heatmap::emit_heatmap;
pub use run::{evaluate, format_value, run_sweep, write_csv, SweepOutcome, SweepTable};
pub use selftest::{run_selftest, SelftestCheck, SelftestReport};

use std::fmt;

/// Failure of a sweep, grouped by process exit code.
#[derive(Debug)]
pub enum SweepError {
    Config(ConfigError),
    Io(String),
    Numerical(String),
}

impl SweepError {
    /// 2 for configuration or output problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Io(_) => 2,
            Self::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for SweepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(e) => write!(f, "config error: {e}"),
            Self::Io(e) => write!(f, "output error: {e}"),
            Self::Numerical(e) => write!(f, "numerical failure: {e}"),
        }
    }
}

impl std::error::Error for SweepError {}

impl From<ConfigError> for SweepError {
    fn from(e: ConfigError) -> Self {
        Self::Config(e)
    }
}

impl From<std::io::Error> for SweepError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<csv::Error> for SweepError {
    fn from(e: csv::Error) -> Self {
        Self::Io(e.to_string())
    }
}
