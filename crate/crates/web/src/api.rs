use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

use overlay_outage::asymptotic::{primary_do_cg, secondary_do_cg, AsymptoticCharacterization, AsymptoticError};
use overlay_outage::exact::{primary_op_exact, secondary_op_exact};
use overlay_outage::montecarlo::{estimate_outage, SimulationConfig};
use overlay_outage::presets::base_params;
use overlay_outage::sweep::{run_sweep, Outputs, SweepError, SweepSpec};
use overlay_outage::{ParamError, QuadratureSpec, SystemParams};

#[derive(Debug, Error)]
pub enum WebError {
    #[error("parameters must be a JSON object: {0}")]
    Json(#[from] serde_json::Error),
    #[error("parameters must be a JSON object")]
    NotObject,
    #[error("unknown parameter {0:?}")]
    UnknownKey(String),
    #[error("parameter {0:?} must be a number")]
    NotNumber(String),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error("{0}")]
    Numeric(String),
}

/// Too many points would freeze the page.
pub const MAX_POINTS: usize = 400;
pub const MAX_TRIALS: u64 = 5_000_000;

/// Base parameters at 0 dB with the JSON overrides applied.
pub fn parse_params(text: &str) -> Result<SystemParams, WebError> {
    let map: Map<String, Value> = match serde_json::from_str(if text.trim().is_empty() { "{}" } else { text })? {
        Value::Object(m) => m,
        _ => return Err(WebError::NotObject),
    };
    let mut p = base_params(0.0);
    for (key, value) in &map {
        let v = value.as_f64().ok_or_else(|| WebError::NotNumber(key.clone()))?;
        p = match key.as_str() {
            "snr_db" => p.with_snr_db(v)?,
            "rho" => p.with_rho(v)?,
            "alpha" => p.with_alpha(v)?,
            "eta" => p.with_eta(v)?,
            "mu" => p.with_mu(v)?,
            "r0" => p.with_r0(v)?,
            k => match (
                k.get(..k.len().saturating_sub(1)),
                k[k.len().saturating_sub(1)..].parse::<usize>(),
            ) {
                (Some("m"), Ok(j @ 0..=4)) => p.with_link(j, v, p.link(j).beta())?,
                (Some("beta"), Ok(j @ 0..=4)) => p.with_link(j, p.m(j), v)?,
                _ => return Err(WebError::UnknownKey(k.to_string())),
            },
        };
    }
    Ok(p)
}

#[derive(Serialize, Default)]
struct Series {
    exact: Vec<Option<f64>>,
    approx: Vec<Option<f64>>,
    asymptotic: Vec<Option<f64>>,
}

#[derive(Serialize)]
struct Curves {
    axis: &'static str,
    x: Vec<f64>,
    primary: Series,
    secondary: Series,
    notes: Vec<String>,
}

pub fn op_curves(params: &str, axis: &str, start: f64, stop: f64, step: f64) -> Result<String, WebError> {
    let spec = SweepSpec {
        axis: axis.parse()?,
        start,
        stop,
        step,
        fixed: parse_params(params)?,
        outputs: Outputs::ANALYTIC,
        mc_trials: 1,
        seed: 0,
        workers: 1,
        quadrature: QuadratureSpec::relative(1e-8),
    };
    let n = spec.axis_values()?.len();
    if n > MAX_POINTS {
        return Err(WebError::Numeric(format!(
            "{n} points requested, at most {MAX_POINTS} allowed"
        )));
    }
    let rows = run_sweep(&spec)?;
    let mut out = Curves {
        axis: spec.axis.name(),
        x: Vec::with_capacity(n),
        primary: Series::default(),
        secondary: Series::default(),
        notes: Vec::new(),
    };
    for r in rows {
        out.x.push(r.x);
        for (series, cells) in [(&mut out.primary, &r.primary), (&mut out.secondary, &r.secondary)] {
            series.exact.push(cells.exact);
            series.approx.push(cells.approx);
            series.asymptotic.push(cells.asymptotic);
        }
        for note in [r.error, r.note].into_iter().flatten() {
            if !out.notes.contains(&note) {
                out.notes.push(note);
            }
        }
    }
    Ok(serde_json::to_string(&out)?)
}

#[derive(Serialize)]
struct Characterization {
    regime: Option<String>,
    diversity_order: Option<f64>,
    coding_gain_db: Option<f64>,
    terms: Vec<&'static str>,
    note: Option<String>,
}

fn characterize(r: Result<AsymptoticCharacterization, AsymptoticError>) -> Characterization {
    match r {
        Ok(c) => Characterization {
            regime: Some(c.regime.to_string()),
            diversity_order: Some(c.diversity_order),
            coding_gain_db: Some(c.coding_gain_db()),
            terms: c.dominant_terms.iter().map(|t| t.name()).collect(),
            note: None,
        },
        Err(AsymptoticError::CoefficientSingularity {
            regime,
            diversity_order,
        }) => Characterization {
            regime: Some(regime.to_string()),
            diversity_order: Some(diversity_order),
            coding_gain_db: None,
            terms: Vec::new(),
            note: Some("coefficient singular (m1 ~ m3); coding gain undefined".into()),
        },
        Err(e) => Characterization {
            regime: None,
            diversity_order: None,
            coding_gain_db: None,
            terms: Vec::new(),
            note: Some(e.to_string()),
        },
    }
}

pub fn do_cg_report(params: &str) -> Result<String, WebError> {
    let p = parse_params(params)?;
    let out = serde_json::json!({
        "primary": characterize(primary_do_cg(&p)),
        "secondary": characterize(secondary_do_cg(&p)),
    });
    Ok(out.to_string())
}

#[derive(Serialize)]
struct Comparison {
    p_hat: f64,
    stderr: f64,
    ci95: [f64; 2],
    exact: f64,
    z: f64,
}

pub fn monte_carlo(params: &str, trials: u64, seed: u64) -> Result<String, WebError> {
    let p = parse_params(params)?;
    if trials > MAX_TRIALS {
        return Err(WebError::Numeric(format!("at most {MAX_TRIALS} trials")));
    }
    let cfg = SimulationConfig::new(trials, seed).map_err(|e| WebError::Numeric(e.to_string()))?;
    let (pe, se) = estimate_outage(&p, &cfg);
    let quad = QuadratureSpec::relative(1e-9);
    let num = |e: overlay_outage::exact::ExactError| WebError::Numeric(e.to_string());
    let cmp = |e: overlay_outage::montecarlo::OutageEstimate, exact: f64| Comparison {
        p_hat: e.p_hat,
        stderr: e.stderr,
        ci95: [e.ci95_lo, e.ci95_hi],
        exact,
        z: e.z_score(exact),
    };
    let out = serde_json::json!({
        "trials": trials,
        "seed": seed,
        "primary": cmp(pe, primary_op_exact(&p, &quad).map_err(num)?),
        "secondary": cmp(se, secondary_op_exact(&p, &quad).map_err(num)?),
    });
    Ok(out.to_string())
}
