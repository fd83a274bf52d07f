//! Covert transmission with a wireless-powered (self-sustained) amplify-and-forward relay.
//!
//! The relay harvests energy from the source under either a time-switching (TS) or a
//! power-splitting (PS) receiver, forwards the source's signal to the destination and,
//! when its harvester is more efficient than the publicly known baseline, hides its own
//! message underneath the forwarded one. The source acts as the warden: it runs a
//! radiometer on the relay's transmit power and tries to tell the two cases apart.
//!
//! The crate is organised bottom-up:
//!
//! * [`params`]: system constants, units, path loss and Rayleigh channel draws.
//! * [`relaying`]: per-realization power allocation and SNR/SINR algebra.
//! * [`detection`]: false alarm, miss detection, optimal threshold and the minimum
//!   detection error, plus the covertness root `φ_ε`.
//! * [`covert_rate`]: fading-averaged covert rate by Gauss–Laguerre quadrature, the
//!   optimal harvester efficiency and the maximum effective covert rate.
//! * [`montecarlo`]: an independent stochastic oracle for all of the above.
//! * [`experiments`]: parameter files, CSV sweeps reproducing the figure recipes and
//!   the validation report used by the `covert-relay` binary.
//!
//! Supporting numerics live in [`quadrature`], [`search`] and [`rng`].
//!
//! ```
//! use covert_relay::detection::{min_detection_error, solve_phi_epsilon};
//!
//! let xi = min_detection_error(0.25).unwrap();
//! assert!((xi - 0.75).abs() < 1e-12);
//! let phi = solve_phi_epsilon(0.25).unwrap();
//! assert!((phi - 0.25).abs() < 1e-9);
//! ```

pub mod covert_rate;
pub mod detection;
pub mod error;
pub mod experiments;
pub mod montecarlo;
pub mod params;
pub mod quadrature;
pub mod relaying;
pub mod rng;
pub mod search;

pub use error::{Error, Result};
pub use params::{ChannelDraw, Scheme, SchemeConfig, SystemParams};
