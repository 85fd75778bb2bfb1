//! CSV tables with a `#` header block, and the plain-text reports.

use std::fmt::Write as _;
use std::io::Write;

use overlay_outage::asymptotic::{primary_do_cg, secondary_do_cg, AsymptoticCharacterization, AsymptoticError};
use overlay_outage::exact::{primary_op_exact, secondary_op_exact};
use overlay_outage::montecarlo::{estimate_outage, OutageEstimate, SimulationConfig};
use overlay_outage::sweep::{SweepRow, SweepSpec, SystemCells};
use overlay_outage::{QuadratureSpec, SystemParams};

use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Every parameter as `key=value`, in a fixed order.
pub fn describe_params(p: &SystemParams) -> String {
    let mut s = format!(
        "snr_db={} rho={} alpha={} eta={} mu={} r0={}",
        // dB -> linear -> dB is not exact in binary
        (p.snr_db() * 1e9).round() / 1e9,
        p.rho(),
        p.alpha(),
        p.eta(),
        p.mu(),
        p.r0()
    );
    for j in 0..5 {
        write!(s, " m{j}={}", p.m(j)).unwrap();
    }
    for j in 0..5 {
        write!(s, " beta{j}={}", p.link(j).beta()).unwrap();
    }
    s
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn system_cells(spec: &SweepSpec, c: &SystemCells, out: &mut Vec<String>) {
    let o = spec.outputs;
    if o.mc {
        out.push(cell(c.mc));
        out.push(cell(c.mc_stderr));
    }
    if o.exact {
        out.push(cell(c.exact));
    }
    if o.approx {
        out.push(cell(c.approx));
    }
    if o.asymptotic {
        out.push(cell(c.asymptotic));
    }
}

pub fn header(spec: &SweepSpec) -> Vec<String> {
    let mut h = vec![spec.axis.name().to_string()];
    for system in ["primary", "secondary"] {
        let o = spec.outputs;
        if o.mc {
            h.push(format!("{system}_mc"));
            h.push(format!("{system}_mc_stderr"));
        }
        if o.exact {
            h.push(format!("{system}_exact"));
        }
        if o.approx {
            h.push(format!("{system}_approx"));
        }
        if o.asymptotic {
            h.push(format!("{system}_asymptotic"));
        }
    }
    h.push("error".into());
    h.push("note".into());
    h
}

/// Writes one sweep as RFC 4180 CSV preceded by `#` comment lines that make
/// the file self-describing.
pub fn write_sweep<W: Write>(
    w: &mut W,
    spec: &SweepSpec,
    preset: Option<&str>,
    curve: &str,
    rows: &[SweepRow],
) -> Result<(), CliError> {
    writeln!(w, "# overlay-outage {VERSION}")?;
    writeln!(w, "# preset: {} curve: {curve}", preset.unwrap_or("none"))?;
    writeln!(
        w,
        "# axis: {} start={} stop={} step={}",
        spec.axis, spec.start, spec.stop, spec.step
    )?;
    writeln!(w, "# outputs: {}", spec.outputs)?;
    if spec.outputs.mc {
        writeln!(w, "# trials: {} seed: {}", spec.mc_trials, spec.seed)?;
    }
    writeln!(w, "# params: {}", describe_params(&spec.fixed))?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(header(spec))?;
    for r in rows {
        let mut rec = vec![r.x.to_string()];
        system_cells(spec, &r.primary, &mut rec);
        system_cells(spec, &r.secondary, &mut rec);
        rec.push(r.error.clone().unwrap_or_default());
        rec.push(r.note.clone().unwrap_or_default());
        csv.write_record(&rec)?;
    }
    csv.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Validation {
    pub estimate: OutageEstimate,
    pub exact: f64,
    pub z: f64,
    pub pass: bool,
}

/// z-score bound used by `validate`.
pub const Z_LIMIT: f64 = 4.0;

pub fn validate(
    p: &SystemParams,
    trials: u64,
    seed: u64,
    workers: usize,
    quad: &QuadratureSpec,
) -> Result<[Validation; 2], CliError> {
    let cfg = SimulationConfig::new(trials, seed)?.with_workers(workers)?;
    let (pe, se) = estimate_outage(p, &cfg);
    let judge = |estimate: OutageEstimate, exact: f64| Validation {
        estimate,
        exact,
        z: estimate.z_score(exact),
        pass: estimate.agrees_with(exact, Z_LIMIT),
    };
    let primary = primary_op_exact(p, quad).map_err(|e| CliError::Numeric(format!("primary exact: {e}")))?;
    let secondary = secondary_op_exact(p, quad).map_err(|e| CliError::Numeric(format!("secondary exact: {e}")))?;
    Ok([judge(pe, primary), judge(se, secondary)])
}

pub fn validation_report(label: &str, p: &SystemParams, v: &[Validation; 2]) -> String {
    let mut s = String::new();
    writeln!(s, "# curve: {label}").unwrap();
    writeln!(s, "# trials: {} seed: {}", v[0].estimate.trials, v[0].estimate.seed).unwrap();
    writeln!(s, "# params: {}", describe_params(p)).unwrap();
    writeln!(
        s,
        "{:<10} {:>14} {:>14} {:>14} {:>8}  result",
        "system", "mc", "stderr", "exact", "z"
    )
    .unwrap();
    for (name, r) in ["primary", "secondary"].iter().zip(v) {
        writeln!(
            s,
            "{:<10} {:>14.6e} {:>14.3e} {:>14.6e} {:>8.3}  {}",
            name,
            r.estimate.p_hat,
            r.estimate.stderr,
            r.exact,
            r.z,
            if r.pass { "ok" } else { "FAIL" }
        )
        .unwrap();
    }
    s
}

fn characterization_lines(
    s: &mut String,
    system: &str,
    r: Result<AsymptoticCharacterization, AsymptoticError>,
) -> Result<(), CliError> {
    match r {
        Ok(c) => {
            let terms: Vec<&str> = c.dominant_terms.iter().map(|t| t.name()).collect();
            writeln!(
                s,
                "{system}: regime={} DO={} CG={} CG_dB={:.4} terms={}",
                c.regime,
                c.diversity_order,
                c.coding_gain,
                c.coding_gain_db(),
                terms.join("+")
            )
            .unwrap();
        }
        Err(AsymptoticError::CoefficientSingularity {
            regime,
            diversity_order,
        }) => {
            writeln!(s, "{system}: regime={regime} DO={diversity_order} CG=undefined").unwrap();
            writeln!(
                s,
                "warning: {system} coefficient has Gamma(m1 - m3) with m1 ~ m3; \
                 asymptotic values fall back to the high-SNR approximation"
            )
            .unwrap();
        }
        Err(AsymptoticError::Endpoint(why)) => {
            writeln!(s, "{system}: DO=undefined CG=undefined ({why})").unwrap();
        }
        Err(e) => return Err(CliError::Numeric(format!("{system}: {e}"))),
    }
    Ok(())
}

pub fn do_cg_report(label: &str, p: &SystemParams) -> Result<String, CliError> {
    let mut s = String::new();
    writeln!(s, "# curve: {label}").unwrap();
    writeln!(s, "# params: {}", describe_params(p)).unwrap();
    characterization_lines(&mut s, "primary", primary_do_cg(p))?;
    characterization_lines(&mut s, "secondary", secondary_do_cg(p))?;
    Ok(s)
}
