//! Library side of the `overlay-outage` command: settings resolution, CSV
//! output and reports. `main.rs` only parses arguments and maps errors to
//! exit codes.

use std::fmt::Write as _;

use thiserror::Error;

use overlay_outage::model::ParamError;
use overlay_outage::montecarlo::ConfigError;
use overlay_outage::presets::{self, System};
use overlay_outage::sweep::SweepError;

pub mod output;
pub mod settings;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid parameter: {0}")]
    Param(#[from] ParamError),
    #[error("{0}")]
    Sweep(#[from] SweepError),
    #[error("invalid simulation settings: {0}")]
    Simulation(#[from] ConfigError),
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("{0}")]
    Syntax(String),
    #[error("cannot parse {key}={value:?}")]
    BadValue { key: String, value: String },
    #[error("unknown preset {0:?} (try `preset list`)")]
    UnknownPreset(String),
    #[error("preset has no curve {0:?}")]
    UnknownCurve(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("validation failed: |mc - exact| > {limit} stderr")]
    ValidationFailed { limit: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ValidationFailed { .. } => 2,
            CliError::Numeric(_) => 3,
            _ => 1,
        }
    }
}

/// Human-readable listing of every built-in preset with full parameters.
pub fn preset_listing() -> String {
    let mut s = String::new();
    for name in presets::NAMES {
        let p = presets::preset(name).expect("listed presets exist");
        let system = match p.system {
            System::Primary => "primary",
            System::Secondary => "secondary",
        };
        writeln!(
            s,
            "{name}: {} [{system}] axis={} start={} stop={} step={}",
            p.title, p.axis, p.start, p.stop, p.step
        )
        .unwrap();
        for c in &p.curves {
            writeln!(s, "  {}: {}", c.label, output::describe_params(&c.params)).unwrap();
        }
    }
    s
}
