//! Closed-form asymptotic performance model of an active or passive
//! intelligent reflecting surface (IRS) aided single-antenna link, together
//! with a Monte Carlo channel simulator used as an independent oracle.
//!
//! The crate is organised bottom-up:
//!
//! * [`scenario`] turns a geometry/noise/power configuration into linear
//!   link-budget quantities.
//! * [`analytic`] evaluates the infinite-resolution phase shifter model:
//!   average SNR at the IRS, user SNR, its limit regimes, the optimal
//!   reflect power and power-allocation sweeps.
//! * [`quantization`] adds finite (k-bit) phase shifters and the resulting
//!   SNR, achievable-rate and BER losses.
//! * [`montecarlo`] samples Rayleigh channels and evaluates the exact
//!   physical model per realization.
//! * [`experiments`] wires everything into named, runtime-selectable
//!   experiments that emit CSV and plot descriptions.

pub mod analytic;
pub mod error;
pub mod experiments;
pub mod montecarlo;
pub mod quantization;
pub mod scenario;

pub use error::{IrsError, Result};
