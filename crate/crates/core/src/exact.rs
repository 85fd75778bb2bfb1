//! Exact outage probabilities: closed-form pieces plus numerical quadrature
//! of the remaining one- and two-dimensional integrals over the Gamma laws of
//! the links.
//!
//! Every inner integral has the form
//! `∫_θ^∞ f_{m,Ω}(z) P(k, c/z) dz` (a Gamma density weighted by a Gamma CDF
//! of `c/z`). Its integrand lives on two scales, `θ ~ c ~ 1/γ̄` and `Ω ~ 1`,
//! so it is integrated in `w = ln(z/θ)` up to the point where the remaining
//! Gamma tail mass falls below [`QuadratureSpec::tail_mass`].

use std::cell::Cell;

use thiserror::Error;

use crate::model::{derive_thresholds, DerivedThresholds, SystemParams};
use crate::quadrature::{integrate, QuadratureError, QuadratureSpec};
use crate::special::{ln_gamma, regularized_lower_gamma, regularized_upper_gamma, SpecialError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExactError {
    #[error("numeric failure: {0}")]
    Quadrature(#[from] QuadratureError),
    #[error("special function failure: {0}")]
    Special(#[from] SpecialError),
    #[error("internal inconsistency: {0}")]
    Inconsistent(&'static str),
}

impl ExactError {
    /// Achieved estimate and error bound when quadrature ran out of budget.
    pub fn quadrature_estimate(&self) -> Option<(f64, f64)> {
        match self {
            ExactError::Quadrature(QuadratureError::NoConvergence { estimate, error, .. }) => Some((*estimate, *error)),
            _ => None,
        }
    }
}

type Result<T> = std::result::Result<T, ExactError>;

/// Carries the first special-function error out of an `f64` integrand.
struct ErrorSlot(Cell<Option<SpecialError>>);

impl ErrorSlot {
    fn new() -> Self {
        Self(Cell::new(None))
    }

    fn value(&self, r: std::result::Result<f64, SpecialError>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                let prev = self.0.take();
                self.0.set(Some(prev.unwrap_or(e)));
                f64::NAN
            }
        }
    }

    fn finish<T>(self, r: std::result::Result<T, QuadratureError>) -> Result<T> {
        if let Some(e) = self.0.take() {
            return Err(e.into());
        }
        Ok(r?)
    }
}

/// Smallest `q` with `Q(m, q) < mass`, found by doubling then bisection.
fn gamma_upper_quantile(m: f64, mass: f64) -> Result<f64> {
    let mut hi = m.max(1.0);
    while regularized_upper_gamma(m, hi)? >= mass {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if regularized_upper_gamma(m, mid)? >= mass {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// `∫_lower^∞ f(z; shape, scale) P(cdf_shape, c / z) dz`, with `f` the Gamma
/// density. `c = +inf` gives the plain tail probability.
pub fn gamma_weighted_cdf_tail(
    shape: f64,
    scale: f64,
    lower: f64,
    cdf_shape: f64,
    c: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if c == f64::INFINITY {
        return Ok(regularized_upper_gamma(shape, lower / scale)?);
    }
    if c <= 0.0 || lower == f64::INFINITY {
        return Ok(0.0);
    }
    let upper = scale * gamma_upper_quantile(shape, quad.tail_mass)?;
    if lower >= upper {
        return Ok(0.0);
    }
    let ln_norm = shape * scale.ln() + ln_gamma(shape)?;
    let slot = ErrorSlot::new();
    let integrand = |w: f64| {
        let z = lower * w.exp();
        // z f(z) dw = f(z) dz
        let weight = (shape * z.ln() - z / scale - ln_norm).exp();
        weight * slot.value(regularized_lower_gamma(cdf_shape, c / z))
    };
    let r = integrate(integrand, 0.0, (upper / lower).ln(), quad);
    Ok(slot.finish(r)?.value)
}

/// Probability that ST fails to decode and PR misses the direct signal:
/// `P(m1, θ1/Ω1) · P(m0, θ0/Ω0)`. `ρ = 1` makes the first factor one.
pub fn primary_i1(p: &SystemParams) -> Result<f64> {
    let t = derive_thresholds(p);
    Ok(regularized_lower_gamma(p.m(1), t.theta1 / p.omega(1))?
        * regularized_lower_gamma(p.m(0), t.theta0 / p.omega(0))?)
}

/// `α (1 - α)^{-1} ≥ T1` in division-free form (holds at `α = 1`).
pub fn primary_case1(p: &SystemParams, t: &DerivedThresholds) -> bool {
    t.t1 * (1.0 - p.alpha()) <= p.alpha()
}

/// `(1 - α) α^{-1} ≤ T1` in division-free form; the boundary belongs here.
pub fn secondary_exact_case1(p: &SystemParams, t: &DerivedThresholds) -> bool {
    t.t1 * p.alpha() >= 1.0 - p.alpha()
}

/// Exact primary outage probability.
pub fn primary_op_exact(p: &SystemParams, quad: &QuadratureSpec) -> Result<f64> {
    let t = derive_thresholds(p);
    let (m0, m1, m2) = (p.m(0), p.m(1), p.m(2));
    let i1 = primary_i1(p)?;
    if p.rho() >= 1.0 {
        return Ok(i1);
    }
    let st_decodes = regularized_upper_gamma(m1, t.theta1 / p.omega(1))?;
    if p.rho() == 0.0 || p.alpha() == 0.0 {
        // No relayed contribution: PR needs gamma_pr_1 ≥ T1 alone.
        let op = i1 + st_decodes * regularized_lower_gamma(m0, t.t1 / t.psi0)?;
        return Ok(op.clamp(0.0, 1.0));
    }

    let alpha = p.alpha();
    let (x_lo, always_out) = if primary_case1(p, &t) {
        (0.0, 0.0)
    } else {
        let x_lo = t.t1 - alpha / (1.0 - alpha);
        (x_lo, st_decodes * regularized_lower_gamma(m0, x_lo / t.psi0)?)
    };

    // Outer variable u = x^{m0} removes the x^{m0-1} endpoint singularity.
    let inner_quad = quad.tighter(10.0);
    let omega1 = p.omega(1);
    let relay_scale = p.omega(2) * p.snr_bar() * p.rho() * p.eta();
    let noise = 1.0 + p.mu();
    let ln_norm = m0.ln() + m0 * t.psi0.ln() + ln_gamma(m0)?;
    let slot = ErrorSlot::new();
    let inner_failure: Cell<Option<ExactError>> = Cell::new(None);
    let integrand = |u: f64| {
        let x = u.powf(1.0 / m0);
        let gap = t.t1 - x;
        let margin = alpha - gap * (1.0 - alpha);
        let inner = if margin <= 0.0 {
            st_decodes
        } else {
            let c = gap * noise / (relay_scale * margin);
            match gamma_weighted_cdf_tail(m1, omega1, t.theta1, m2, c, &inner_quad) {
                Ok(v) => v,
                Err(e) => {
                    let prev = inner_failure.take();
                    inner_failure.set(Some(prev.unwrap_or(e)));
                    f64::NAN
                }
            }
        };
        (-x / t.psi0 - ln_norm).exp() * inner
    };
    let r = integrate(integrand, x_lo.powf(m0), t.t1.powf(m0), quad);
    if let Some(e) = inner_failure.take() {
        return Err(e);
    }
    let integral = slot.finish(r)?.value;
    Ok((i1 + always_out + integral).clamp(0.0, 1.0))
}

/// Exact secondary outage probability.
pub fn secondary_op_exact(p: &SystemParams, quad: &QuadratureSpec) -> Result<f64> {
    if p.alpha() >= 1.0 || p.rho() == 0.0 || p.rho() >= 1.0 {
        return Ok(1.0);
    }
    let t = derive_thresholds(p);
    let (m1, m3, m4) = (p.m(1), p.m(3), p.m(4));
    let alpha = p.alpha();
    let omega1 = p.omega(1);
    let relay_scale = p.omega(3) * p.snr_bar() * p.rho() * p.eta();
    let noise = 1.0 + p.mu();

    let j1 = regularized_lower_gamma(m1, t.theta1 / omega1)?;
    let sr_misses = regularized_lower_gamma(m4, t.theta2 / p.omega(4))?;

    let c_ic = t.t1 * noise / (relay_scale * (1.0 - alpha));
    let j3 = (1.0 - sr_misses) * gamma_weighted_cdf_tail(m1, omega1, t.theta1, m3, c_ic, quad)?;

    let j2 = if secondary_exact_case1(p, &t) {
        sr_misses * (1.0 - j1)
    } else {
        let margin = 1.0 - alpha - alpha * t.t1;
        if margin <= 0.0 {
            return Err(ExactError::Inconsistent(
                "1 - alpha - alpha*T1 must be positive in this branch",
            ));
        }
        let c_no_ic = t.t1 * noise / (relay_scale * margin);
        sr_misses * gamma_weighted_cdf_tail(m1, omega1, t.theta1, m3, c_no_ic, quad)?
    };
    Ok((j1 + j2 + j3).clamp(0.0, 1.0))
}

/// `1 - e^{-x}` without cancellation.
pub(crate) fn exp_cdf(x: f64) -> f64 {
    -(-x).exp_m1()
}
