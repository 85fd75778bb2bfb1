//! Seeded Monte-Carlo estimation of both outage probabilities.
//!
//! Trials are cut into fixed-size chunks. Chunk `k` draws from its own
//! ChaCha8 stream `k` under the user seed, and the per-chunk outage counts are
//! summed as integers, so the estimate depends only on `(trials, seed, batch)`
//! and never on the number of workers.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use thiserror::Error;

use crate::model::{
    classify_primary, classify_secondary, compute_capacities, ChannelDraw, LinkFading, PrimaryEvent, SecondaryEvent,
    SystemParams,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error("batch size must be at least 1")]
    EmptyBatch,
}

pub const DEFAULT_BATCH: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationConfig {
    trials: u64,
    seed: u64,
    workers: usize,
    batch: u64,
}

impl SimulationConfig {
    pub fn new(trials: u64, seed: u64) -> Result<Self, ConfigError> {
        if trials == 0 {
            return Err(ConfigError::NoTrials);
        }
        Ok(Self {
            trials,
            seed,
            workers: 1,
            batch: DEFAULT_BATCH,
        })
    }

    pub fn with_workers(mut self, workers: usize) -> Result<Self, ConfigError> {
        if workers == 0 {
            return Err(ConfigError::NoWorkers);
        }
        self.workers = workers;
        Ok(self)
    }

    pub fn with_batch(mut self, batch: u64) -> Result<Self, ConfigError> {
        if batch == 0 {
            return Err(ConfigError::EmptyBatch);
        }
        self.batch = batch;
        Ok(self)
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn batch(&self) -> u64 {
        self.batch
    }
}

/// Binomial proportion estimate with a 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub p_hat: f64,
    /// `sqrt(p̂ (1 - p̂) / N)`.
    pub stderr: f64,
    pub ci95_lo: f64,
    pub ci95_hi: f64,
    pub outages: u64,
    pub trials: u64,
    pub seed: u64,
}

impl OutageEstimate {
    /// Normal-approximation interval clipped to `[0, 1]`; when no (or every)
    /// trial is an outage, the one-sided rule-of-three bound `3/N` is used.
    pub fn from_counts(outages: u64, trials: u64, seed: u64) -> Self {
        let n = trials as f64;
        let p_hat = outages as f64 / n;
        let stderr = (p_hat * (1.0 - p_hat) / n).sqrt();
        let (ci95_lo, ci95_hi) = if outages == 0 {
            (0.0, (3.0 / n).min(1.0))
        } else if outages == trials {
            ((1.0 - 3.0 / n).max(0.0), 1.0)
        } else {
            ((p_hat - 1.96 * stderr).max(0.0), (p_hat + 1.96 * stderr).min(1.0))
        };
        Self {
            p_hat,
            stderr,
            ci95_lo,
            ci95_hi,
            outages,
            trials,
            seed,
        }
    }

    /// `|p̂ - p| / stderr`, with `0/0 = 0`.
    pub fn z_score(&self, reference: f64) -> f64 {
        let delta = (self.p_hat - reference).abs();
        if delta == 0.0 {
            0.0
        } else {
            delta / self.stderr
        }
    }

    /// Agreement with a reference value at `k` standard errors. A degenerate
    /// estimate (`p̂ ∈ {0, 1}`, zero stderr) agrees when the reference lies in
    /// its rule-of-three interval.
    pub fn agrees_with(&self, reference: f64, k: f64) -> bool {
        if self.stderr > 0.0 {
            (self.p_hat - reference).abs() <= k * self.stderr
        } else {
            reference >= self.ci95_lo && reference <= self.ci95_hi
        }
    }
}

/// Gamma samplers for the five links.
#[derive(Debug, Clone)]
pub struct GainSampler {
    laws: [Gamma<f64>; 5],
}

impl GainSampler {
    pub fn new(params: &SystemParams) -> Self {
        let law = |l: &LinkFading| Gamma::new(l.m(), l.omega()).expect("validated link");
        let links = params.links();
        Self {
            laws: [
                law(&links[0]),
                law(&links[1]),
                law(&links[2]),
                law(&links[3]),
                law(&links[4]),
            ],
        }
    }

    /// Draws `g0..g4` in index order.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> ChannelDraw {
        let mut g = [0.0; 5];
        for (gj, law) in g.iter_mut().zip(&self.laws) {
            *gj = law.sample(rng);
        }
        ChannelDraw::new(g)
    }
}

/// One Gamma(m, Ω) power gain.
pub fn sample_gamma_gain<R: Rng + ?Sized>(link: &LinkFading, rng: &mut R) -> f64 {
    Gamma::new(link.m(), link.omega()).expect("validated link").sample(rng)
}

/// Independent generator for chunk `index` under `seed`.
pub fn chunk_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Counts {
    primary: u64,
    secondary: u64,
}

impl std::ops::Add for Counts {
    type Output = Counts;
    fn add(self, rhs: Counts) -> Counts {
        Counts {
            primary: self.primary + rhs.primary,
            secondary: self.secondary + rhs.secondary,
        }
    }
}

fn run_chunk(params: &SystemParams, sampler: &GainSampler, config: &SimulationConfig, index: u64) -> Counts {
    let start = index * config.batch;
    let len = config.batch.min(config.trials - start);
    let mut rng = chunk_rng(config.seed, index);
    let r0 = params.r0();
    let mut counts = Counts::default();
    for _ in 0..len {
        let caps = compute_capacities(&sampler.draw(&mut rng), params);
        counts.primary += u64::from(classify_primary(&caps, r0) != PrimaryEvent::Success);
        counts.secondary += u64::from(classify_secondary(&caps, r0) != SecondaryEvent::Success);
    }
    counts
}

/// Primary and secondary outage estimates from `config.trials` independent
/// two-phase transmissions.
pub fn estimate_outage(params: &SystemParams, config: &SimulationConfig) -> (OutageEstimate, OutageEstimate) {
    #[cfg(feature = "parallel")]
    if config.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .expect("thread pool");
        return pool.install(|| estimate_with(params, config, true));
    }
    estimate_with(params, config, false)
}

/// Runs the chunks on the current rayon pool when `parallel` is set.
pub(crate) fn estimate_with(
    params: &SystemParams,
    config: &SimulationConfig,
    parallel: bool,
) -> (OutageEstimate, OutageEstimate) {
    let sampler = GainSampler::new(params);
    let chunks = config.trials.div_ceil(config.batch);
    let counts = count_chunks(params, &sampler, config, chunks, parallel);
    (
        OutageEstimate::from_counts(counts.primary, config.trials, config.seed),
        OutageEstimate::from_counts(counts.secondary, config.trials, config.seed),
    )
}

#[cfg(feature = "parallel")]
fn count_chunks(
    params: &SystemParams,
    sampler: &GainSampler,
    config: &SimulationConfig,
    chunks: u64,
    parallel: bool,
) -> Counts {
    use rayon::prelude::*;
    if parallel && chunks > 1 {
        (0..chunks)
            .into_par_iter()
            .map(|k| run_chunk(params, sampler, config, k))
            .reduce(Counts::default, |a, b| a + b)
    } else {
        (0..chunks)
            .map(|k| run_chunk(params, sampler, config, k))
            .fold(Counts::default(), |a, b| a + b)
    }
}

#[cfg(not(feature = "parallel"))]
fn count_chunks(
    params: &SystemParams,
    sampler: &GainSampler,
    config: &SimulationConfig,
    chunks: u64,
    _parallel: bool,
) -> Counts {
    (0..chunks)
        .map(|k| run_chunk(params, sampler, config, k))
        .fold(Counts::default(), |a, b| a + b)
}
