//! High-SNR approximations, leading-order power laws, diversity orders and
//! coding gains, plus the Rayleigh closed forms.
//!
//! Conventions: every asymptotic value is `C · γ̄^{-DO}` for a coefficient `C`,
//! and the coding gain is `CG = C^{-1/DO}`, so `(γ̄ CG)^{-DO}` reproduces the
//! value exactly.

use std::fmt;

use thiserror::Error;

use crate::exact::{exp_cdf, primary_i1};
use crate::model::{derive_thresholds, DerivedThresholds, SystemParams};
use crate::special::{exp_integral_e1, gamma_complete, regularized_lower_gamma, upper_incomplete_gamma, SpecialError};

/// Two fading figures closer than this are treated as equal in the
/// coefficient tables.
pub const TIE_TOL: f64 = 1e-9;

/// Below this gap `Γ(m1 - m3)` is too close to its pole for the power-law
/// coefficient to mean anything.
pub const SINGULAR_GAP: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticError {
    #[error(
        "{regime} coefficient contains Gamma(m1 - m3) with m1 ≈ m3; \
         only the diversity order {diversity_order} is meaningful"
    )]
    CoefficientSingularity { regime: Regime, diversity_order: f64 },
    #[error("Rayleigh closed form needs every fading figure equal to 1")]
    NotRayleigh,
    #[error("no power-law decay at this endpoint: {0}")]
    Endpoint(&'static str),
    #[error("special function failure: {0}")]
    Special(#[from] SpecialError),
}

type Result<T> = std::result::Result<T, AsymptoticError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `T1 ≤ α/(1-α)`: the relayed superposition always serves the primary.
    PrimaryCase1,
    PrimaryCase2,
    /// `T1 ≤ (1-α)/α`: SR decodes the secondary signal without cancellation.
    SecondaryCase1,
    SecondaryCase2,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::PrimaryCase1 => "PrimaryCase1",
            Regime::PrimaryCase2 => "PrimaryCase2",
            Regime::SecondaryCase1 => "SecondaryCase1",
            Regime::SecondaryCase2 => "SecondaryCase2",
        })
    }
}

/// Named terms that make up a coding-gain coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coefficient {
    /// Joint outage of the direct link and the PT-ST link.
    Ap1,
    /// Direct link alone, when the relayed signal cannot help.
    Ap2,
    As1,
    As2,
    Bs1,
    Bs2,
    Bs3,
}

impl Coefficient {
    pub fn name(&self) -> &'static str {
        match self {
            Coefficient::Ap1 => "A_p1",
            Coefficient::Ap2 => "A_p2",
            Coefficient::As1 => "A_s1",
            Coefficient::As2 => "A_s2",
            Coefficient::Bs1 => "B_s1",
            Coefficient::Bs2 => "B_s2",
            Coefficient::Bs3 => "B_s3",
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticCharacterization {
    pub diversity_order: f64,
    pub coding_gain: f64,
    pub regime: Regime,
    pub dominant_terms: Vec<Coefficient>,
}

impl AsymptoticCharacterization {
    /// `(γ̄ CG)^{-DO}`.
    pub fn outage_at(&self, snr_bar: f64) -> f64 {
        (snr_bar * self.coding_gain).powf(-self.diversity_order)
    }

    pub fn coding_gain_db(&self) -> f64 {
        10.0 * self.coding_gain.log10()
    }

    fn from_coefficient(
        regime: Regime,
        diversity_order: f64,
        coefficient: f64,
        dominant_terms: Vec<Coefficient>,
    ) -> Self {
        Self {
            diversity_order,
            coding_gain: coefficient.powf(-1.0 / diversity_order),
            regime,
            dominant_terms,
        }
    }
}

/// Division-free `T1 ≤ α/(1-α)`.
pub fn primary_regime(p: &SystemParams) -> Regime {
    let t1 = derive_thresholds(p).t1;
    if t1 * (1.0 - p.alpha()) <= p.alpha() {
        Regime::PrimaryCase1
    } else {
        Regime::PrimaryCase2
    }
}

/// Division-free `T1 ≤ (1-α)/α`.
pub fn secondary_regime(p: &SystemParams) -> Regime {
    let t1 = derive_thresholds(p).t1;
    if t1 * p.alpha() <= 1.0 - p.alpha() {
        Regime::SecondaryCase1
    } else {
        Regime::SecondaryCase2
    }
}

/// `m0 + m1` in case 1, `m0` in case 2. Defined for every input, including
/// endpoints where no power law exists.
pub fn primary_diversity_order(p: &SystemParams) -> f64 {
    match primary_regime(p) {
        Regime::PrimaryCase1 => p.m(0) + p.m(1),
        _ => p.m(0),
    }
}

/// `min(m1, m3)` in case 1, `min(m1, m3, m4)` in case 2.
pub fn secondary_diversity_order(p: &SystemParams) -> f64 {
    let d = p.m(1).min(p.m(3));
    match secondary_regime(p) {
        Regime::SecondaryCase1 => d,
        _ => d.min(p.m(4)),
    }
}

fn clip(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// High-SNR approximation of the primary outage: the ST-decodes-but-relay-
/// still-fails term is dropped, and in case 2 the event "direct link below
/// `T1 - α/(1-α)`" is kept whole.
pub fn primary_op_approx(p: &SystemParams) -> Result<f64> {
    let t = derive_thresholds(p);
    let i1 = primary_i1(p).map_err(special_only)?;
    if primary_regime(p) == Regime::PrimaryCase1 {
        return Ok(clip(i1));
    }
    let st_decodes = 1.0 - regularized_lower_gamma(p.m(1), t.theta1 / p.omega(1))?;
    let gap = t.t1 - p.alpha() / (1.0 - p.alpha());
    Ok(clip(i1 + st_decodes * regularized_lower_gamma(p.m(0), gap / t.psi0)?))
}

fn special_only(e: crate::exact::ExactError) -> AsymptoticError {
    match e {
        crate::exact::ExactError::Special(s) => AsymptoticError::Special(s),
        _ => unreachable!("primary_i1 is closed form"),
    }
}

fn primary_coefficients(p: &SystemParams, t: &DerivedThresholds) -> Result<AsymptoticCharacterization> {
    if p.rho() <= 0.0 {
        return Err(AsymptoticError::Endpoint("rho = 0 leaves ST without transmit power"));
    }
    if p.rho() >= 1.0 {
        return Err(AsymptoticError::Endpoint("rho = 1 leaves ST unable to decode"));
    }
    let (m0, m1) = (p.m(0), p.m(1));
    let (o0, o1) = (p.omega(0), p.omega(1));
    let mu = p.mu();
    let rho = p.rho();
    Ok(match primary_regime(p) {
        Regime::PrimaryCase1 => {
            let c = t.t0.powf(m0) * t.t1.powf(m1) * ((1.0 + mu) / o0).powf(m0)
                / (m0 * m1 * gamma_complete(m0)? * gamma_complete(m1)?)
                * ((1.0 - rho + mu) / (o1 * (1.0 - rho))).powf(m1);
            AsymptoticCharacterization::from_coefficient(Regime::PrimaryCase1, m0 + m1, c, vec![Coefficient::Ap1])
        }
        _ => {
            let gap = t.t1 - p.alpha() / (1.0 - p.alpha());
            let c = (gap * (1.0 + mu) / o0).powf(m0) / (m0 * gamma_complete(m0)?);
            AsymptoticCharacterization::from_coefficient(Regime::PrimaryCase2, m0, c, vec![Coefficient::Ap2])
        }
    })
}

/// Leading-order power law `C γ̄^{-DO}` of the primary outage.
pub fn primary_op_asymptotic(p: &SystemParams) -> Result<f64> {
    Ok(primary_do_cg(p)?.outage_at(p.snr_bar()))
}

/// Primary diversity order and coding gain. All-Rayleigh inputs use the
/// Rayleigh closed form, which coincides with the general one.
pub fn primary_do_cg(p: &SystemParams) -> Result<AsymptoticCharacterization> {
    let t = derive_thresholds(p);
    if p.is_rayleigh(TIE_TOL) {
        return rayleigh_primary_do_cg(p);
    }
    primary_coefficients(p, &t)
}

/// Secondary approximation: `J1`, the no-cancellation failure (case 2 only)
/// and the small-argument form of the cancellation failure.
pub fn secondary_op_approx(p: &SystemParams) -> Result<f64> {
    if p.alpha() >= 1.0 || p.rho() <= 0.0 || p.rho() >= 1.0 {
        return Ok(1.0);
    }
    let t = derive_thresholds(p);
    let (m1, m3, m4) = (p.m(1), p.m(3), p.m(4));
    let o1 = p.omega(1);
    let j1 = regularized_lower_gamma(m1, t.theta1 / o1)?;
    let f4 = regularized_lower_gamma(m4, t.theta2 / p.omega(4))?;
    let j3 = (1.0 - f4) / (gamma_complete(m1)? * m3 * gamma_complete(m3)? * o1.powf(m3))
        * (t.theta2 / (p.omega(3) * p.rho() * p.eta() * (1.0 - p.alpha()))).powf(m3)
        * upper_incomplete_gamma(m1 - m3, t.theta1 / o1)?;
    Ok(match secondary_regime(p) {
        Regime::SecondaryCase1 => clip(j1 + j3),
        _ => clip(j1 + (1.0 - j1) * f4 + j3),
    })
}

fn check_secondary_endpoint(p: &SystemParams) -> Result<()> {
    if p.alpha() >= 1.0 {
        return Err(AsymptoticError::Endpoint(
            "alpha = 1 leaves the secondary without power",
        ));
    }
    if p.rho() <= 0.0 || p.rho() >= 1.0 {
        return Err(AsymptoticError::Endpoint("rho in {0, 1} forces secondary outage"));
    }
    Ok(())
}

/// `A_s` / `B_s` term `name`; `None` when its `Γ(m1 - m3)` is at the pole.
fn secondary_term(p: &SystemParams, name: Coefficient) -> Result<Option<f64>> {
    let t1 = derive_thresholds(p).t1;
    let (m1, m3, m4) = (p.m(1), p.m(3), p.m(4));
    let (mu, rho) = (p.mu(), p.rho());
    Ok(Some(match name {
        Coefficient::Bs1 => (t1 * (1.0 - rho + mu) / ((1.0 - rho) * p.omega(1))).powf(m1) / (m1 * gamma_complete(m1)?),
        Coefficient::Bs2 => {
            if (m1 - m3).abs() < SINGULAR_GAP {
                return Ok(None);
            }
            gamma_complete(m1 - m3)? * p.omega(1).powf(-m3) / (gamma_complete(m1)? * m3 * gamma_complete(m3)?)
                * (t1 * (1.0 + mu) / (p.omega(3) * rho * p.eta() * (1.0 - p.alpha()))).powf(m3)
        }
        Coefficient::Bs3 => (t1 * (1.0 + mu) / p.omega(4)).powf(m4) / (m4 * gamma_complete(m4)?),
        _ => unreachable!("secondary terms are indexed by B_s names"),
    }))
}

/// Secondary diversity order and coding gain.
///
/// Terms whose fading figure ties the minimum (within [`TIE_TOL`]) are
/// summed. A selected `A_s2`/`B_s2` with `|m1 - m3| <` [`SINGULAR_GAP`] is
/// reported as [`AsymptoticError::CoefficientSingularity`]. All-Rayleigh
/// inputs use the Rayleigh coding gain instead.
pub fn secondary_do_cg(p: &SystemParams) -> Result<AsymptoticCharacterization> {
    check_secondary_endpoint(p)?;
    if p.is_rayleigh(TIE_TOL) {
        return rayleigh_secondary_do_cg(p);
    }
    let regime = secondary_regime(p);
    let terms = [
        (Coefficient::Bs1, p.m(1)),
        (Coefficient::Bs2, p.m(3)),
        (Coefficient::Bs3, p.m(4)),
    ];
    let candidates = match regime {
        Regime::SecondaryCase1 => &terms[..2],
        _ => &terms[..],
    };
    let diversity_order = secondary_diversity_order(p);
    let mut coefficient = 0.0;
    let mut dominant_terms = Vec::new();
    for &(name, m) in candidates {
        if m - diversity_order > TIE_TOL {
            continue;
        }
        let Some(c) = secondary_term(p, name)? else {
            return Err(AsymptoticError::CoefficientSingularity {
                regime,
                diversity_order,
            });
        };
        coefficient += c;
        dominant_terms.push(match (regime, name) {
            (Regime::SecondaryCase1, Coefficient::Bs1) => Coefficient::As1,
            (Regime::SecondaryCase1, Coefficient::Bs2) => Coefficient::As2,
            _ => name,
        });
    }
    Ok(AsymptoticCharacterization::from_coefficient(
        regime,
        diversity_order,
        coefficient,
        dominant_terms,
    ))
}

/// Leading-order power law of the secondary outage.
pub fn secondary_op_asymptotic(p: &SystemParams) -> Result<f64> {
    Ok(secondary_do_cg(p)?.outage_at(p.snr_bar()))
}

/// An asymptotic value, or the approximation standing in for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticValue {
    pub value: f64,
    pub fallback: bool,
}

/// [`secondary_op_asymptotic`], falling back to [`secondary_op_approx`] on a
/// coefficient singularity.
pub fn secondary_op_asymptotic_or_approx(p: &SystemParams) -> Result<AsymptoticValue> {
    match secondary_op_asymptotic(p) {
        Ok(value) => Ok(AsymptoticValue { value, fallback: false }),
        Err(AsymptoticError::CoefficientSingularity { .. }) => Ok(AsymptoticValue {
            value: secondary_op_approx(p)?,
            fallback: true,
        }),
        Err(e) => Err(e),
    }
}

fn require_rayleigh(p: &SystemParams) -> Result<()> {
    if p.is_rayleigh(TIE_TOL) {
        Ok(())
    } else {
        Err(AsymptoticError::NotRayleigh)
    }
}

/// Primary approximation in closed form for Rayleigh fading.
pub fn rayleigh_primary_op(p: &SystemParams) -> Result<f64> {
    require_rayleigh(p)?;
    let t = derive_thresholds(p);
    let (b0, b1) = (p.link(0).beta(), p.link(1).beta());
    let joint = exp_cdf(t.theta0 / b0) * exp_cdf(t.theta1 / b1);
    if primary_regime(p) == Regime::PrimaryCase1 {
        return Ok(clip(joint));
    }
    let gap = t.t1 - p.alpha() / (1.0 - p.alpha());
    Ok(clip(joint + (-t.theta1 / b1).exp() * exp_cdf(gap / t.psi0)))
}

/// Secondary approximation in closed form for Rayleigh fading. The
/// cancellation-failure term carries `E1(θ1/β1)`, i.e. `Γ(0, θ1/β1)`.
pub fn rayleigh_secondary_op(p: &SystemParams) -> Result<f64> {
    require_rayleigh(p)?;
    if p.alpha() >= 1.0 || p.rho() <= 0.0 || p.rho() >= 1.0 {
        return Ok(1.0);
    }
    let t = derive_thresholds(p);
    let (b1, b3, b4) = (p.link(1).beta(), p.link(3).beta(), p.link(4).beta());
    let sr_decodes = (-t.theta2 / b4).exp();
    let j3 = sr_decodes * t.t1 * (1.0 + p.mu()) / (p.snr_bar() * b1 * b3 * (1.0 - p.alpha()) * p.rho() * p.eta())
        * exp_integral_e1(t.theta1 / b1)?;
    Ok(match secondary_regime(p) {
        Regime::SecondaryCase1 => clip(exp_cdf(t.theta1 / b1) + j3),
        _ => clip(1.0 - (-t.theta1 / b1).exp() * sr_decodes + j3),
    })
}

/// Rayleigh diversity order `{2, 1}` and coding gain.
pub fn rayleigh_primary_do_cg(p: &SystemParams) -> Result<AsymptoticCharacterization> {
    require_rayleigh(p)?;
    let t = derive_thresholds(p);
    let (b0, b1) = (p.link(0).beta(), p.link(1).beta());
    let mu = p.mu();
    let rho = p.rho();
    if rho <= 0.0 || rho >= 1.0 {
        return Err(AsymptoticError::Endpoint("rho must lie strictly inside (0, 1)"));
    }
    Ok(match primary_regime(p) {
        Regime::PrimaryCase1 => AsymptoticCharacterization {
            diversity_order: 2.0,
            coding_gain: (t.t0 * t.t1 * (1.0 + mu) * (1.0 - rho + mu) / (b0 * b1 * (1.0 - rho))).powf(-0.5),
            regime: Regime::PrimaryCase1,
            dominant_terms: vec![Coefficient::Ap1],
        },
        _ => {
            let gap = t.t1 - p.alpha() / (1.0 - p.alpha());
            AsymptoticCharacterization {
                diversity_order: 1.0,
                coding_gain: b0 / ((1.0 + mu) * gap),
                regime: Regime::PrimaryCase2,
                dominant_terms: vec![Coefficient::Ap2],
            }
        }
    })
}

/// Rayleigh secondary diversity order (always 1) and coding gain. The
/// logarithmic factor of the cancellation-failure term is not part of this
/// gain.
pub fn rayleigh_secondary_do_cg(p: &SystemParams) -> Result<AsymptoticCharacterization> {
    require_rayleigh(p)?;
    check_secondary_endpoint(p)?;
    let t1 = derive_thresholds(p).t1;
    let (b1, b3, b4) = (p.link(1).beta(), p.link(3).beta(), p.link(4).beta());
    let (mu, rho) = (p.mu(), p.rho());
    let decode = t1 * (1.0 - rho + mu) / (b1 * (1.0 - rho));
    let cancel = t1 * (1.0 + mu) / (rho * p.eta() * b1 * b3 * (1.0 - p.alpha()));
    let regime = secondary_regime(p);
    Ok(match regime {
        Regime::SecondaryCase1 => AsymptoticCharacterization {
            diversity_order: 1.0,
            coding_gain: 1.0 / (decode + cancel),
            regime,
            dominant_terms: vec![Coefficient::As1, Coefficient::As2],
        },
        _ => AsymptoticCharacterization {
            diversity_order: 1.0,
            coding_gain: 1.0 / (decode + cancel + t1 * (1.0 + mu) / b4),
            regime,
            dominant_terms: vec![Coefficient::Bs1, Coefficient::Bs2, Coefficient::Bs3],
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::db_to_linear;

    fn params(snr_db: f64, alpha: f64, m: [f64; 5]) -> SystemParams {
        let links = SystemParams::links_from(m, [1.0, 1.5, 1.5, 1.5, 1.0]).unwrap();
        SystemParams::new(db_to_linear(snr_db), 0.5, alpha, 1.0, 1.0, 1.0, links).unwrap()
    }

    const FIG3: [f64; 5] = [0.6, 1.5, 1.5, 1.5, 0.6];

    #[test]
    fn regime_boundaries_are_inclusive() {
        assert_eq!(primary_regime(&params(20.0, 0.75, FIG3)), Regime::PrimaryCase1);
        assert_eq!(primary_regime(&params(20.0, 0.7499, FIG3)), Regime::PrimaryCase2);
        assert_eq!(secondary_regime(&params(20.0, 0.25, FIG3)), Regime::SecondaryCase1);
        assert_eq!(secondary_regime(&params(20.0, 0.2501, FIG3)), Regime::SecondaryCase2);
    }

    #[test]
    fn primary_approx_case1_is_i1() {
        let p = params(20.0, 0.9, FIG3);
        assert_eq!(primary_op_approx(&p).unwrap(), primary_i1(&p).unwrap());
    }

    #[test]
    fn primary_approx_matches_reference() {
        // scipy: P(m0, θ0/Ω0) P(m1, θ1/Ω1) + Q(m1, θ1/Ω1) P(m0, (T1 - 1)/Ψ0)
        let v = primary_op_approx(&params(20.0, 0.5, FIG3)).unwrap();
        assert!((v / 0.117_570_569_890_100_9 - 1.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn primary_do_values() {
        let c1 = primary_do_cg(&params(20.0, 0.9, FIG3)).unwrap();
        assert_eq!(c1.diversity_order, 2.1);
        assert_eq!(c1.regime, Regime::PrimaryCase1);
        let c2 = primary_do_cg(&params(20.0, 0.5, FIG3)).unwrap();
        assert_eq!(c2.diversity_order, 0.6);
        assert_eq!(c2.dominant_terms, vec![Coefficient::Ap2]);
    }

    #[test]
    fn power_law_reconstruction() {
        for alpha in [0.5, 0.9] {
            let p = params(37.0, alpha, FIG3);
            let c = primary_do_cg(&p).unwrap();
            let v = primary_op_asymptotic(&p).unwrap();
            assert!((c.outage_at(p.snr_bar()) / v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn secondary_tie_rows() {
        // Fig. 4, α = 0.5, m4 = 0.6: B_s3 alone.
        let p = params(50.0, 0.5, FIG3);
        let c = secondary_do_cg(&p).unwrap();
        assert_eq!(c.diversity_order, 0.6);
        assert_eq!(c.dominant_terms, vec![Coefficient::Bs3]);
        // m1 = m3 in case 1 needs Γ(0).
        let tie = params(50.0, 0.2, FIG3);
        match secondary_do_cg(&tie) {
            Err(AsymptoticError::CoefficientSingularity {
                diversity_order,
                regime,
            }) => {
                assert_eq!(diversity_order, 1.5);
                assert_eq!(regime, Regime::SecondaryCase1);
            }
            other => panic!("{other:?}"),
        }
        let fb = secondary_op_asymptotic_or_approx(&tie).unwrap();
        assert!(fb.fallback);
        assert_eq!(fb.value, secondary_op_approx(&tie).unwrap());
        // m1 = m4 < m3 sums B_s1 and B_s3.
        let c = secondary_do_cg(&params(50.0, 0.5, [0.6, 1.2, 1.5, 2.0, 1.2])).unwrap();
        assert_eq!(c.dominant_terms, vec![Coefficient::Bs1, Coefficient::Bs3]);
        // m3 < m1: A_s2 only.
        let c = secondary_do_cg(&params(50.0, 0.2, [0.6, 2.0, 1.5, 1.2, 0.6])).unwrap();
        assert_eq!(c.dominant_terms, vec![Coefficient::As2]);
        assert_eq!(c.diversity_order, 1.2);
    }

    #[test]
    fn secondary_approx_alpha_zero_drops_no_cancellation_term() {
        let p = params(20.0, 0.0, FIG3);
        assert_eq!(secondary_regime(&p), Regime::SecondaryCase1);
        let t = derive_thresholds(&p);
        let j1 = regularized_lower_gamma(1.5, t.theta1 / 1.0).unwrap();
        assert!(secondary_op_approx(&p).unwrap() > j1);
    }

    #[test]
    fn secondary_approx_matches_reference() {
        // scipy/mpmath evaluation of the same closed form.
        let v = secondary_op_approx(&params(20.0, 0.2, FIG3)).unwrap();
        assert!((v / 0.099_649_087_332_105_06 - 1.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn rayleigh_reductions() {
        let m = [1.0; 5];
        for (snr, alpha) in [(5.0, 0.3), (20.0, 0.5), (20.0, 0.9), (35.0, 0.1)] {
            let p = params(snr, alpha, m);
            let a = primary_op_approx(&p).unwrap();
            let r = rayleigh_primary_op(&p).unwrap();
            assert!((a - r).abs() <= 1e-10 * r, "{a} {r}");
            let a = secondary_op_approx(&p).unwrap();
            let r = rayleigh_secondary_op(&p).unwrap();
            assert!((a - r).abs() <= 1e-10 * r, "{a} {r}");
        }
        assert_eq!(
            rayleigh_primary_op(&params(20.0, 0.5, FIG3)),
            Err(AsymptoticError::NotRayleigh)
        );
    }

    #[test]
    fn rayleigh_diversity_orders() {
        let m = [1.0; 5];
        assert_eq!(primary_do_cg(&params(20.0, 0.8, m)).unwrap().diversity_order, 2.0);
        assert_eq!(primary_do_cg(&params(20.0, 0.7, m)).unwrap().diversity_order, 1.0);
        for alpha in [0.1, 0.5] {
            assert_eq!(secondary_do_cg(&params(20.0, alpha, m)).unwrap().diversity_order, 1.0);
        }
        // The Rayleigh gain is the general one evaluated at m = 1.
        let p = params(20.0, 0.9, m);
        let general = primary_coefficients(&p, &derive_thresholds(&p)).unwrap();
        let ray = rayleigh_primary_do_cg(&p).unwrap();
        assert!((general.coding_gain / ray.coding_gain - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rayleigh_case1_is_product_of_linearized_cdfs() {
        let links = SystemParams::links_from([1.0; 5], [1.0; 5]).unwrap();
        let p = SystemParams::new(db_to_linear(60.0), 0.5, 0.9, 1.0, 0.0, 1.0, links).unwrap();
        let t = derive_thresholds(&p);
        let v = rayleigh_primary_op(&p).unwrap();
        assert!((v / (t.theta0 * t.theta1) - 1.0).abs() < 1e-5);
    }

    #[test]
    fn endpoints() {
        let p = params(20.0, 0.5, FIG3);
        assert!(matches!(
            primary_do_cg(&p.with_rho(1.0).unwrap()),
            Err(AsymptoticError::Endpoint(_))
        ));
        assert!(matches!(
            secondary_do_cg(&p.with_alpha(1.0).unwrap()),
            Err(AsymptoticError::Endpoint(_))
        ));
        assert_eq!(secondary_op_approx(&p.with_rho(0.0).unwrap()).unwrap(), 1.0);
        let direct = primary_op_approx(&p.with_rho(1.0).unwrap()).unwrap();
        let t = derive_thresholds(&p);
        assert!((direct - regularized_lower_gamma(0.6, t.theta0 * 0.6).unwrap()).abs() < 1e-15);
    }
}
