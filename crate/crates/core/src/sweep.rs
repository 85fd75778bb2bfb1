//! One-dimensional parameter sweeps over SNR, α or ρ, evaluating any mix of
//! Monte-Carlo, exact, approximate and asymptotic outage at each point.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::asymptotic::{
    primary_op_approx, primary_op_asymptotic, secondary_op_approx, secondary_op_asymptotic_or_approx,
};
use crate::exact::{primary_op_exact, secondary_op_exact};
use crate::model::{ParamError, SystemParams};
use crate::montecarlo::{estimate_with, SimulationConfig};
use crate::quadrature::QuadratureSpec;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("sweep range is empty: start {start} > stop {stop}")]
    EmptyRange { start: f64, stop: f64 },
    #[error("step must be positive and finite, got {0}")]
    Step(f64),
    #[error("axis value {value} is invalid: {source}")]
    AxisValue { value: f64, source: ParamError },
    #[error("unknown axis {0:?} (expected snr_db, alpha or rho)")]
    UnknownAxis(String),
    #[error("unknown output {0:?} (expected mc, exact, approx or asym)")]
    UnknownOutput(String),
    #[error("no outputs selected")]
    NoOutputs,
    #[error("{0}")]
    Config(#[from] crate::montecarlo::ConfigError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    SnrDb,
    Alpha,
    Rho,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::SnrDb => "snr_db",
            Axis::Alpha => "alpha",
            Axis::Rho => "rho",
        }
    }

    pub fn apply(&self, params: &SystemParams, value: f64) -> Result<SystemParams, ParamError> {
        match self {
            Axis::SnrDb => params.with_snr_db(value),
            Axis::Alpha => params.with_alpha(value),
            Axis::Rho => params.with_rho(value),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = SweepError;
    fn from_str(s: &str) -> Result<Self, SweepError> {
        match s {
            "snr_db" | "snr" => Ok(Axis::SnrDb),
            "alpha" => Ok(Axis::Alpha),
            "rho" => Ok(Axis::Rho),
            _ => Err(SweepError::UnknownAxis(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outputs {
    pub mc: bool,
    pub exact: bool,
    pub approx: bool,
    pub asymptotic: bool,
}

impl Outputs {
    pub const ALL: Outputs = Outputs {
        mc: true,
        exact: true,
        approx: true,
        asymptotic: true,
    };

    pub const ANALYTIC: Outputs = Outputs {
        mc: false,
        exact: true,
        approx: true,
        asymptotic: true,
    };
}

impl FromStr for Outputs {
    type Err = SweepError;
    /// Comma-separated subset of `mc,exact,approx,asym`.
    fn from_str(s: &str) -> Result<Self, SweepError> {
        let mut out = Outputs {
            mc: false,
            exact: false,
            approx: false,
            asymptotic: false,
        };
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match item {
                "mc" => out.mc = true,
                "exact" => out.exact = true,
                "approx" => out.approx = true,
                "asym" | "asymptotic" => out.asymptotic = true,
                _ => return Err(SweepError::UnknownOutput(item.to_string())),
            }
        }
        if out
            == (Outputs {
                mc: false,
                exact: false,
                approx: false,
                asymptotic: false,
            })
        {
            return Err(SweepError::NoOutputs);
        }
        Ok(out)
    }
}

impl fmt::Display for Outputs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [
            (self.mc, "mc"),
            (self.exact, "exact"),
            (self.approx, "approx"),
            (self.asymptotic, "asym"),
        ]
        .iter()
        .filter(|(on, _)| *on)
        .map(|(_, n)| *n)
        .collect();
        f.write_str(&names.join(","))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub fixed: SystemParams,
    pub outputs: Outputs,
    pub mc_trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub quadrature: QuadratureSpec,
}

impl SweepSpec {
    /// Axis values `start + k·step` up to `stop`, rounded to 12 decimals so
    /// that e.g. `0.05 + 14·0.05` prints as `0.75`.
    pub fn axis_values(&self) -> Result<Vec<f64>, SweepError> {
        if !self.step.is_finite() || self.step <= 0.0 {
            return Err(SweepError::Step(self.step));
        }
        if self.start > self.stop {
            return Err(SweepError::EmptyRange {
                start: self.start,
                stop: self.stop,
            });
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as u64 + 1;
        Ok((0..n)
            .map(|k| ((self.start + k as f64 * self.step) * 1e12).round() / 1e12)
            .collect())
    }
}

/// Values for one system at one axis point; `None` when not requested or
/// when evaluation failed.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SystemCells {
    pub mc: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub exact: Option<f64>,
    pub approx: Option<f64>,
    pub asymptotic: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub primary: SystemCells,
    pub secondary: SystemCells,
    /// Evaluation failures at this point, `;`-separated.
    pub error: Option<String>,
    /// Non-fatal remarks, e.g. a fallback used for the asymptotic column.
    pub note: Option<String>,
}

fn push(slot: &mut Option<String>, msg: String) {
    match slot {
        Some(s) => {
            s.push_str("; ");
            s.push_str(&msg);
        }
        None => *slot = Some(msg),
    }
}

/// Evaluates every requested output at one parameter point. Failures are
/// recorded in the row rather than aborting.
pub fn evaluate_point(x: f64, p: &SystemParams, spec: &SweepSpec, parallel_mc: bool) -> Result<SweepRow, SweepError> {
    let o = spec.outputs;
    let mut row = SweepRow {
        x,
        primary: SystemCells::default(),
        secondary: SystemCells::default(),
        error: None,
        note: None,
    };
    if o.mc {
        let cfg = SimulationConfig::new(spec.mc_trials, spec.seed)?;
        let (pe, se) = estimate_with(p, &cfg, parallel_mc);
        row.primary.mc = Some(pe.p_hat);
        row.primary.mc_stderr = Some(pe.stderr);
        row.secondary.mc = Some(se.p_hat);
        row.secondary.mc_stderr = Some(se.stderr);
    }
    if o.exact {
        match primary_op_exact(p, &spec.quadrature) {
            Ok(v) => row.primary.exact = Some(v),
            Err(e) => push(&mut row.error, format!("primary_exact: {e}")),
        }
        match secondary_op_exact(p, &spec.quadrature) {
            Ok(v) => row.secondary.exact = Some(v),
            Err(e) => push(&mut row.error, format!("secondary_exact: {e}")),
        }
    }
    if o.approx {
        match primary_op_approx(p) {
            Ok(v) => row.primary.approx = Some(v),
            Err(e) => push(&mut row.error, format!("primary_approx: {e}")),
        }
        match secondary_op_approx(p) {
            Ok(v) => row.secondary.approx = Some(v),
            Err(e) => push(&mut row.error, format!("secondary_approx: {e}")),
        }
    }
    if o.asymptotic {
        match primary_op_asymptotic(p) {
            Ok(v) => row.primary.asymptotic = Some(v),
            Err(e) => push(&mut row.note, format!("primary_asymptotic: {e}")),
        }
        match secondary_op_asymptotic_or_approx(p) {
            Ok(v) => {
                row.secondary.asymptotic = Some(v.value);
                if v.fallback {
                    push(
                        &mut row.note,
                        "secondary_asymptotic: m1 ~ m3, approximation used".to_string(),
                    );
                }
            }
            Err(e) => push(&mut row.note, format!("secondary_asymptotic: {e}")),
        }
    }
    Ok(row)
}

/// Runs the sweep, one row per axis value in axis order. Rows depend only on
/// the spec, never on `workers`.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, SweepError> {
    if spec.outputs.mc {
        SimulationConfig::new(spec.mc_trials, spec.seed)?.with_workers(spec.workers)?;
    }
    let points = spec
        .axis_values()?
        .into_iter()
        .map(|x| {
            spec.axis
                .apply(&spec.fixed, x)
                .map(|p| (x, p))
                .map_err(|source| SweepError::AxisValue { value: x, source })
        })
        .collect::<Result<Vec<_>, _>>()?;
    evaluate_all(&points, spec)
}

#[cfg(feature = "parallel")]
fn evaluate_all(points: &[(f64, SystemParams)], spec: &SweepSpec) -> Result<Vec<SweepRow>, SweepError> {
    use rayon::prelude::*;
    if spec.workers <= 1 {
        return points.iter().map(|(x, p)| evaluate_point(*x, p, spec, false)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .expect("thread pool");
    pool.install(|| {
        points
            .par_iter()
            .map(|(x, p)| evaluate_point(*x, p, spec, true))
            .collect()
    })
}

#[cfg(not(feature = "parallel"))]
fn evaluate_all(points: &[(f64, SystemParams)], spec: &SweepSpec) -> Result<Vec<SweepRow>, SweepError> {
    points.iter().map(|(x, p)| evaluate_point(*x, p, spec, false)).collect()
}
