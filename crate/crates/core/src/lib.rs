//! Pulse-level simulation toolkit for accelerated adiabatic state transfer in
//! one- and two-qubit superconducting systems.
//!
//! The library builds control-parameter schedules that jump along geodesics
//! (holding at segment midpoints until the dynamic phase difference reaches
//! pi), propagates states through the resulting time-dependent Hamiltonians
//! (unitary and Lindblad), injects digitally synthesized Gaussian noise into
//! sampled waveforms, and packages figure-level experiments behind a
//! config-driven scenario runner.
//!
//! Quick map:
//! - [`matrix`], [`state`]: dense complex linear algebra and quantum states
//!   for dimensions 2 and 4.
//! - [`model`]: effective Hamiltonians and lab-parameter mappings.
//! - [`schedule`], [`metric`]: jump staircases, linear ramps, resonant holds,
//!   and both adiabaticity metrics.
//! - [`waveform`], [`noise`]: uniformly clocked control traces and the
//!   block-held Gaussian noise model.
//! - [`propagate`], [`tomography`]: time evolution and state reconstruction.
//! - [`scenario`], [`sweep`], [`report`]: the experiment runner behind the
//!   `snacsim` CLI.

pub mod error;
pub mod matrix;
pub mod metric;
pub mod model;
pub mod noise;
pub mod path;
pub mod propagate;
pub mod report;
pub mod scenario;
pub mod schedule;
pub mod state;
pub mod sweep;
pub mod tomography;
pub mod units;
pub mod waveform;

pub use error::Error;
pub type Result<T> = std::result::Result<T, Error>;
