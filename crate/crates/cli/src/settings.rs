//! Layered settings: preset, then `--config` file, then command-line flags.

use std::str::FromStr;

use overlay_outage::presets::{self, base_params, Preset};
use overlay_outage::sweep::{Axis, Outputs};
use overlay_outage::SystemParams;

use crate::CliError;

/// Ordered `key=value` pairs; later entries win.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Layer(pub Vec<(String, String)>);

impl Layer {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn params(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0
            .iter()
            .filter(|(k, _)| PARAM_KEYS.contains(&k.as_str()))
            .map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

pub const PARAM_KEYS: [&str; 16] = [
    "snr_db", "rho", "alpha", "eta", "mu", "r0", "m0", "m1", "m2", "m3", "m4", "beta0", "beta1", "beta2", "beta3",
    "beta4",
];

pub const SWEEP_KEYS: [&str; 7] = ["axis", "start", "stop", "step", "trials", "seed", "outputs"];

pub fn parse_pair(s: &str) -> Result<(String, String), CliError> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CliError::Syntax(format!("expected key=value, got {s:?}")))?;
    let k = k.trim();
    if !PARAM_KEYS.contains(&k) && !SWEEP_KEYS.contains(&k) {
        return Err(CliError::UnknownKey(k.to_string()));
    }
    Ok((k.to_string(), v.trim().to_string()))
}

/// Flat `key=value` text; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<Layer, CliError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_pair)
        .collect::<Result<Vec<_>, _>>()
        .map(Layer)
}

pub fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| CliError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
    })
}

/// Applies one `key=value` to `p`.
pub fn apply_param(p: &SystemParams, key: &str, value: &str) -> Result<SystemParams, CliError> {
    let v: f64 = parse_value(key, value)?;
    let link = |j: usize| p.link(j);
    Ok(match key {
        "snr_db" => p.with_snr_db(v)?,
        "rho" => p.with_rho(v)?,
        "alpha" => p.with_alpha(v)?,
        "eta" => p.with_eta(v)?,
        "mu" => p.with_mu(v)?,
        "r0" => p.with_r0(v)?,
        _ => {
            let j: usize = key[key.len() - 1..].parse().expect("key ends in a link index");
            if key.starts_with('m') {
                p.with_link(j, v, link(j).beta())?
            } else {
                p.with_link(j, link(j).m(), v)?
            }
        }
    })
}

fn apply_layer(p: SystemParams, layer: &Layer) -> Result<SystemParams, CliError> {
    layer.params().try_fold(p, |acc, (k, v)| apply_param(&acc, k, v))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Request<'a> {
    pub preset: Option<&'a str>,
    pub curve: Option<&'a str>,
    pub config: Layer,
    pub flags: Layer,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub preset: Option<Preset>,
    /// `(label, params)` for every selected curve.
    pub curves: Vec<(String, SystemParams)>,
}

/// Builds the parameter sets: preset curve (or the base set at 0 dB), then
/// config-file values, then flags.
pub fn resolve(req: &Request<'_>) -> Result<Resolved, CliError> {
    let preset = match req.preset {
        Some(name) => Some(presets::preset(name).ok_or_else(|| CliError::UnknownPreset(name.to_string()))?),
        None => None,
    };
    let mut curves: Vec<(String, SystemParams)> = match &preset {
        Some(p) => p.curves.iter().map(|c| (c.label.clone(), c.params)).collect(),
        None => vec![("custom".to_string(), base_params(0.0))],
    };
    if let Some(label) = req.curve {
        curves.retain(|(l, _)| l == label);
        if curves.is_empty() {
            return Err(CliError::UnknownCurve(label.to_string()));
        }
    }
    let curves = curves
        .into_iter()
        .map(|(label, p)| Ok((label, apply_layer(apply_layer(p, &req.config)?, &req.flags)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Resolved { preset, curves })
}

/// Sweep settings after layering.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub trials: u64,
    pub seed: u64,
    pub outputs: Outputs,
}

pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 1;

pub fn sweep_settings(preset: Option<&Preset>, config: &Layer, flags: &Layer) -> Result<SweepSettings, CliError> {
    let pick = |key: &str| flags.get(key).or_else(|| config.get(key));
    let num =
        |key: &str, fallback: f64| -> Result<f64, CliError> { pick(key).map_or(Ok(fallback), |v| parse_value(key, v)) };
    let axis = match pick("axis") {
        Some(v) => v.parse()?,
        None => preset.map_or(Axis::SnrDb, |p| p.axis),
    };
    // A preset's range only applies along its own axis.
    let (start, stop, step) = match preset {
        Some(p) if p.axis == axis => (p.start, p.stop, p.step),
        _ => default_range(axis),
    };
    Ok(SweepSettings {
        axis,
        start: num("start", start)?,
        stop: num("stop", stop)?,
        step: num("step", step)?,
        trials: pick("trials").map_or(Ok(DEFAULT_TRIALS), |v| parse_value("trials", v))?,
        seed: pick("seed").map_or(Ok(DEFAULT_SEED), |v| parse_value("seed", v))?,
        outputs: pick("outputs").map_or(Ok(Outputs::ALL), |v| v.parse())?,
    })
}

fn default_range(axis: Axis) -> (f64, f64, f64) {
    match axis {
        Axis::SnrDb => (0.0, 40.0, 2.0),
        Axis::Alpha | Axis::Rho => (0.05, 0.95, 0.05),
    }
}
