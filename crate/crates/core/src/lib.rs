//! Outage, throughput and energy-efficiency toolkit for overlay
//! cognitive-radio networks in which an energy-harvesting secondary relay,
//! picked from a Poisson field, forwards primary traffic over cascaded κ-μ
//! links.
//!
//! The same model is evaluated two ways: by Monte Carlo ([`simulate`]) and
//! by closed-form Meijer-G series ([`analysis`]), which cross-check each
//! other. [`optimize`] tunes the time-switching and power-allocation
//! factors, and [`harness`] drives figure-style sweeps from TOML scenarios.

pub mod analysis;
pub mod error;
pub mod fading;
pub mod geometry;
pub mod harness;
pub mod linkmodel;
pub mod meijer;
pub mod optimize;
pub mod simulate;
pub mod special;

pub use error::{Error, Result};
