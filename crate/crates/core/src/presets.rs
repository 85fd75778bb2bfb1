//! Built-in parameter sets for the six figure families: outage versus SNR
//! (`fig3`, `fig4`), versus the power-sharing coefficient α (`fig5`, `fig6`)
//! and versus the power-splitting ratio ρ (`fig7`, `fig8`).

use crate::model::{db_to_linear, ParamError, SystemParams};
use crate::sweep::Axis;

/// `m0..m4` shared by every figure unless a curve overrides one of them.
pub const BASE_M: [f64; 5] = [0.6, 1.5, 1.5, 1.5, 0.6];
pub const BASE_BETA: [f64; 5] = [1.0, 1.5, 1.5, 1.5, 1.0];
pub const BASE_RHO: f64 = 0.5;
pub const BASE_ALPHA: f64 = 0.5;

/// SNR values (dB) drawn as separate curves on the α and ρ figures.
pub const CURVE_SNR_DB: [f64; 3] = [10.0, 20.0, 30.0];

/// Which outage probability a figure is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum System {
    Primary,
    Secondary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    /// Short label, usable in a file name.
    pub label: String,
    pub params: SystemParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub title: &'static str,
    pub system: System,
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub curves: Vec<Curve>,
}

/// Base parameters at `snr_db`, with `ρ = 0.5`, `α = 0.5`, `R0 = η = μ = 1`.
pub fn base_params(snr_db: f64) -> SystemParams {
    let links = SystemParams::links_from(BASE_M, BASE_BETA).expect("base links are valid");
    SystemParams::new(db_to_linear(snr_db), BASE_RHO, BASE_ALPHA, 1.0, 1.0, 1.0, links)
        .expect("base parameters are valid")
}

pub const NAMES: [&str; 6] = ["fig3", "fig4", "fig5", "fig6", "fig7", "fig8"];

fn label(s: String) -> String {
    s.replace('.', "p")
}

fn snr_curves(alpha: f64) -> Result<Vec<Curve>, ParamError> {
    CURVE_SNR_DB
        .iter()
        .map(|&snr| {
            Ok(Curve {
                label: format!("snr{snr}dB"),
                params: base_params(snr).with_alpha(alpha)?,
            })
        })
        .collect()
}

/// Looks up a preset by name.
pub fn preset(name: &str) -> Option<Preset> {
    let base = base_params(0.0);
    let built = match name {
        "fig3" => [(0.5, 0.6), (0.5, 1.0), (0.5, 1.5), (0.9, 0.6)]
            .iter()
            .map(|&(alpha, m0)| {
                Ok(Curve {
                    label: label(format!("alpha{alpha}_m0_{m0}")),
                    params: base.with_alpha(alpha)?.with_link(0, m0, BASE_BETA[0])?,
                })
            })
            .collect::<Result<Vec<_>, ParamError>>()
            .map(|curves| Preset {
                name: "fig3",
                title: "Primary OP versus SNR",
                system: System::Primary,
                axis: Axis::SnrDb,
                start: 0.0,
                stop: 40.0,
                step: 2.0,
                curves,
            }),
        "fig4" => [(0.5, 0.6), (0.5, 1.5), (0.2, 0.6), (0.2, 1.5)]
            .iter()
            .map(|&(alpha, m4)| {
                Ok(Curve {
                    label: label(format!("alpha{alpha}_m4_{m4}")),
                    params: base.with_alpha(alpha)?.with_link(4, m4, BASE_BETA[4])?,
                })
            })
            .collect::<Result<Vec<_>, ParamError>>()
            .map(|curves| Preset {
                name: "fig4",
                title: "Secondary OP versus SNR",
                system: System::Secondary,
                axis: Axis::SnrDb,
                start: 0.0,
                stop: 40.0,
                step: 2.0,
                curves,
            }),
        "fig5" | "fig6" => snr_curves(BASE_ALPHA).map(|curves| Preset {
            name: if name == "fig5" { "fig5" } else { "fig6" },
            title: if name == "fig5" {
                "Primary OP versus alpha"
            } else {
                "Secondary OP versus alpha"
            },
            system: if name == "fig5" {
                System::Primary
            } else {
                System::Secondary
            },
            axis: Axis::Alpha,
            start: 0.05,
            stop: 0.95,
            step: 0.05,
            curves,
        }),
        "fig7" => snr_curves(0.9).map(|curves| Preset {
            name: "fig7",
            title: "Primary OP versus rho",
            system: System::Primary,
            axis: Axis::Rho,
            start: 0.05,
            stop: 0.95,
            step: 0.05,
            curves,
        }),
        "fig8" => snr_curves(0.2).map(|curves| Preset {
            name: "fig8",
            title: "Secondary OP versus rho",
            system: System::Secondary,
            axis: Axis::Rho,
            start: 0.05,
            stop: 0.95,
            step: 0.05,
            curves,
        }),
        _ => return None,
    };
    Some(built.expect("preset parameters are valid"))
}
