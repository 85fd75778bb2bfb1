//! Outage analysis for a cooperative spectrum-sharing overlay network over
//! Nakagami-m fading.
//!
//! A primary transmitter (PT) serves its receiver (PR) directly and through a
//! secondary transmitter (ST) that harvests energy from the PT signal by
//! power splitting, decodes it, and forwards a superposition of the primary
//! and its own secondary signal. The crate computes both outage
//! probabilities four ways: Monte-Carlo ([`montecarlo`]), exact quadrature
//! ([`exact`]), and high-SNR approximations and power laws ([`asymptotic`]).

pub mod asymptotic;
pub mod exact;
pub mod model;
pub mod montecarlo;
pub mod presets;
pub mod quadrature;
pub mod special;
pub mod sweep;

pub use model::{db_to_linear, derive_thresholds, LinkFading, ParamError, SystemParams};
pub use quadrature::QuadratureSpec;
