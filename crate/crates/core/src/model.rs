//! Scenario parameters, derived thresholds, instantaneous capacities and the
//! outage events of both systems for one channel realization.
//!
//! Link indices: 0 = PT→PR, 1 = PT→ST, 2 = ST→PR, 3 = ST→SR, 4 = PT→SR.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("fading figure m{link} = {m} must be at least 0.5")]
    FadingFigure { link: usize, m: f64 },
    #[error("channel variance beta{link} = {beta} must be positive")]
    Variance { link: usize, beta: f64 },
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
}

/// Nakagami-m law of one link. The power gain `g = |h|²` is Gamma
/// distributed with shape `m` and scale `omega = beta / m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkFading {
    m: f64,
    beta: f64,
    omega: f64,
}

impl LinkFading {
    pub fn new(m: f64, beta: f64) -> Result<Self, ParamError> {
        Self::for_link(usize::MAX, m, beta)
    }

    fn for_link(link: usize, m: f64, beta: f64) -> Result<Self, ParamError> {
        if !m.is_finite() || m < 0.5 {
            return Err(ParamError::FadingFigure { link, m });
        }
        if !beta.is_finite() || beta <= 0.0 {
            return Err(ParamError::Variance { link, beta });
        }
        Ok(Self {
            m,
            beta,
            omega: beta / m,
        })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

/// Every knob of one scenario. Immutable once built; the `with_*` methods
/// return validated copies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    snr_bar: f64,
    rho: f64,
    alpha: f64,
    eta: f64,
    mu: f64,
    r0: f64,
    links: [LinkFading; 5],
}

impl SystemParams {
    /// `snr_bar` is the linear mean transmit SNR `P / N0`.
    pub fn new(
        snr_bar: f64,
        rho: f64,
        alpha: f64,
        eta: f64,
        mu: f64,
        r0: f64,
        links: [LinkFading; 5],
    ) -> Result<Self, ParamError> {
        let params = Self {
            snr_bar,
            rho,
            alpha,
            eta,
            mu,
            r0,
            links,
        };
        params.validate()?;
        Ok(params)
    }

    /// Build the five links from `(m_j, beta_j)` pairs.
    pub fn links_from(m: [f64; 5], beta: [f64; 5]) -> Result<[LinkFading; 5], ParamError> {
        let mut out = [LinkFading {
            m: 1.0,
            beta: 1.0,
            omega: 1.0,
        }; 5];
        for j in 0..5 {
            out[j] = LinkFading::for_link(j, m[j], beta[j])?;
        }
        Ok(out)
    }

    fn validate(&self) -> Result<(), ParamError> {
        let check = |name, value: f64, ok: bool, range| {
            if ok && value.is_finite() {
                Ok(())
            } else {
                Err(ParamError::OutOfRange { name, value, range })
            }
        };
        check("snr_bar", self.snr_bar, self.snr_bar > 0.0, "(0, inf)")?;
        check("rho", self.rho, (0.0..=1.0).contains(&self.rho), "[0, 1]")?;
        check("alpha", self.alpha, (0.0..=1.0).contains(&self.alpha), "[0, 1]")?;
        check("eta", self.eta, self.eta > 0.0 && self.eta <= 1.0, "(0, 1]")?;
        check("mu", self.mu, self.mu >= 0.0, "[0, inf)")?;
        check("r0", self.r0, self.r0 > 0.0, "(0, inf)")?;
        for (j, link) in self.links.iter().enumerate() {
            LinkFading::for_link(j, link.m, link.beta)?;
        }
        Ok(())
    }

    pub fn snr_bar(&self) -> f64 {
        self.snr_bar
    }

    pub fn snr_db(&self) -> f64 {
        10.0 * self.snr_bar.log10()
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn links(&self) -> &[LinkFading; 5] {
        &self.links
    }

    pub fn link(&self, j: usize) -> &LinkFading {
        &self.links[j]
    }

    pub fn m(&self, j: usize) -> f64 {
        self.links[j].m
    }

    pub fn omega(&self, j: usize) -> f64 {
        self.links[j].omega
    }

    pub fn with_snr_db(&self, snr_db: f64) -> Result<Self, ParamError> {
        let mut p = *self;
        p.snr_bar = db_to_linear(snr_db);
        p.validate()?;
        Ok(p)
    }

    pub fn with_snr_bar(&self, snr_bar: f64) -> Result<Self, ParamError> {
        let mut p = *self;
        p.snr_bar = snr_bar;
        p.validate()?;
        Ok(p)
    }

    pub fn with_rho(&self, rho: f64) -> Result<Self, ParamError> {
        let mut p = *self;
        p.rho = rho;
        p.validate()?;
        Ok(p)
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self, ParamError> {
        let mut p = *self;
        p.alpha = alpha;
        p.validate()?;
        Ok(p)
    }

    pub fn with_eta(&self, eta: f64) -> Result<Self, ParamError> {
        let mut p = *self;
        p.eta = eta;
        p.validate()?;
        Ok(p)
    }

    pub fn with_mu(&self, mu: f64) -> Result<Self, ParamError> {
        let mut p = *self;
        p.mu = mu;
        p.validate()?;
        Ok(p)
    }

    pub fn with_r0(&self, r0: f64) -> Result<Self, ParamError> {
        let mut p = *self;
        p.r0 = r0;
        p.validate()?;
        Ok(p)
    }

    pub fn with_link(&self, j: usize, m: f64, beta: f64) -> Result<Self, ParamError> {
        let mut p = *self;
        p.links[j] = LinkFading::for_link(j, m, beta)?;
        Ok(p)
    }

    /// True when every fading figure equals one within `tol` (Rayleigh).
    pub fn is_rayleigh(&self, tol: f64) -> bool {
        self.links.iter().all(|l| (l.m - 1.0).abs() < tol)
    }
}

/// `10^(dB/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// SNR thresholds shared by the event logic and the analytic evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedThresholds {
    /// `2^R0 - 1`, full pre-log (direct link).
    pub t0: f64,
    /// `2^(2 R0) - 1`, half pre-log (two-phase links).
    pub t1: f64,
    pub theta0: f64,
    /// `+inf` when `rho = 1`: ST then never decodes.
    pub theta1: f64,
    pub theta2: f64,
    pub psi0: f64,
}

pub fn derive_thresholds(p: &SystemParams) -> DerivedThresholds {
    let t0 = p.r0.exp2() - 1.0;
    let t1 = (2.0 * p.r0).exp2() - 1.0;
    let theta1 = if p.rho >= 1.0 {
        f64::INFINITY
    } else {
        t1 * (1.0 - p.rho + p.mu) / ((1.0 - p.rho) * p.snr_bar)
    };
    DerivedThresholds {
        t0,
        t1,
        theta0: t0 * (1.0 + p.mu) / p.snr_bar,
        theta1,
        theta2: t1 * (1.0 + p.mu) / p.snr_bar,
        psi0: p.snr_bar * p.omega(0) / (1.0 + p.mu),
    }
}

/// Power gains `g_j = |h_j|²` of one two-phase transmission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDraw {
    pub g: [f64; 5],
}

impl ChannelDraw {
    pub fn new(g: [f64; 5]) -> Self {
        debug_assert!(g.iter().all(|&x| x >= 0.0));
        Self { g }
    }
}

/// Instantaneous capacities (bits/s/Hz) and the two PR SNR components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacitySet {
    /// SR, first phase (overheard primary signal).
    pub c_sr_1: f64,
    /// ST, first phase, after power splitting.
    pub c_st_1: f64,
    /// PR, first phase only.
    pub c_pr_1: f64,
    /// PR combining both phases when ST relays.
    pub c_pr_relay: f64,
    /// SR, second phase, primary signal treated as interference.
    pub c_sr_no_ic: f64,
    /// SR, second phase, primary signal cancelled.
    pub c_sr_ic: f64,
    /// PR, direct transmission only (full pre-log).
    pub c_pr_direct: f64,
    pub gamma_pr_1: f64,
    pub gamma_pr_2: f64,
}

fn half_log2(snr: f64) -> f64 {
    0.5 * snr.ln_1p() / std::f64::consts::LN_2
}

pub fn compute_capacities(draw: &ChannelDraw, p: &SystemParams) -> CapacitySet {
    let [g0, g1, g2, g3, g4] = draw.g;
    let noise = 1.0 + p.mu;
    let snr = p.snr_bar;
    let alpha = p.alpha;

    let gamma_pr_1 = snr * g0 / noise;
    let st_snr = if p.rho >= 1.0 {
        0.0
    } else {
        (1.0 - p.rho) * snr * g1 / (1.0 - p.rho + p.mu)
    };
    // ST transmit SNR after harvesting: P_ST / N0 = snr * rho * eta * g1.
    let relay_snr = snr * p.rho * p.eta * g1;
    let s_pr = relay_snr * g2;
    let s_sr = relay_snr * g3;
    let gamma_pr_2 = alpha * s_pr / ((1.0 - alpha) * s_pr + noise);

    CapacitySet {
        c_sr_1: half_log2(snr * g4 / noise),
        c_st_1: half_log2(st_snr),
        c_pr_1: half_log2(gamma_pr_1),
        c_pr_relay: half_log2(gamma_pr_1 + gamma_pr_2),
        c_sr_no_ic: half_log2((1.0 - alpha) * s_sr / (alpha * s_sr + noise)),
        c_sr_ic: half_log2((1.0 - alpha) * s_sr / noise),
        c_pr_direct: 2.0 * half_log2(gamma_pr_1),
        gamma_pr_1,
        gamma_pr_2,
    }
}

/// Which clause of the primary outage expression a realization falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimaryEvent {
    /// ST failed to decode and the direct link is in outage.
    DirectOutage,
    /// ST decoded and relayed, yet the combined link is in outage.
    RelayOutage,
    Success,
}

/// Which clause of the secondary outage expression a realization falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondaryEvent {
    /// ST failed to decode the primary signal and stays silent.
    StDecodeFailure,
    /// SR missed the primary signal and cannot decode without cancellation.
    NoCancellationFailure,
    /// SR cancelled the primary signal and still cannot decode.
    CancellationFailure,
    Success,
}

/// Ties at exactly `R0` count as successes.
pub fn classify_primary(c: &CapacitySet, r0: f64) -> PrimaryEvent {
    if c.c_st_1 < r0 {
        if c.c_pr_direct < r0 {
            PrimaryEvent::DirectOutage
        } else {
            PrimaryEvent::Success
        }
    } else if c.c_pr_relay < r0 {
        PrimaryEvent::RelayOutage
    } else {
        PrimaryEvent::Success
    }
}

pub fn classify_secondary(c: &CapacitySet, r0: f64) -> SecondaryEvent {
    if c.c_st_1 < r0 {
        SecondaryEvent::StDecodeFailure
    } else if c.c_sr_1 < r0 {
        if c.c_sr_no_ic < r0 {
            SecondaryEvent::NoCancellationFailure
        } else {
            SecondaryEvent::Success
        }
    } else if c.c_sr_ic < r0 {
        SecondaryEvent::CancellationFailure
    } else {
        SecondaryEvent::Success
    }
}

pub fn primary_outage_event(draw: &ChannelDraw, p: &SystemParams) -> bool {
    classify_primary(&compute_capacities(draw, p), p.r0) != PrimaryEvent::Success
}

pub fn secondary_outage_event(draw: &ChannelDraw, p: &SystemParams) -> bool {
    classify_secondary(&compute_capacities(draw, p), p.r0) != SecondaryEvent::Success
}
