//! Simulation library for phase-based localization of LoRa transmitters.
//!
//! The crate models the full measurement chain of a chirp-spread-spectrum
//! (CSS) localization system:
//!
//! ```text
//!   signal     --> channel      --> receiver        --> phase          --> locator
//!   CSS chirp      delay +          SDR mixing +        differential       lag estimation +
//!   synthesis      attenuation      I/Q sampling        phase samples      multilateration
//! ```
//!
//! A transmitter emits a train of chirps; each gateway mixes the passband
//! signal down to baseband, samples I/Q at its ADC rate, and reduces the
//! trace to a sequence of consecutive-sample phase differences (DPS).
//! Cross-correlating the DPS sequences of two gateways yields the
//! distance *difference* between them with a resolution of one sample
//! cell `v / f_s`; several pairwise differences are then fused into a
//! position by damped Gauss–Newton multilateration.
//!
//! [`baselines`] contains the comparison methods (RSSI path-loss ranging,
//! timestamp-quantized TDOA, matched-filter detection) used to put the
//! phase pipeline's accuracy in context.

pub mod baselines;
pub mod channel;
pub mod locator;
pub mod phase;
pub mod receiver;
pub mod signal;

mod error;
mod util;

pub use error::Error;
pub use signal::{ChirpConfig, ChirpDirection, Spectrogram};
pub use channel::ChannelConfig;
pub use receiver::{IqTrace, ReceiverConfig};
pub use phase::DpsSequence;
pub use locator::{
    Gateway, LagEstimate, LocalizationResult, PipelineOptions, PositionFix, Scene,
};
pub use baselines::PathLossModel;

/// Speed of light in vacuum (m/s), the default propagation speed.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
