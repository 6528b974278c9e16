//! Surface-wave underwater radio link modeling.
//!
//! The crate covers the whole chain from material constants to link statistics:
//!
//! * [`media`]: physical constants, complex permittivity and skin depth.
//! * [`surfwave`]: closed-form surface-wave penetration depth and propagation
//!   length, plus the Zenneck pole used as an independent check.
//! * [`halfspace`]: vertical electric dipole fields near a flat air/seawater
//!   interface evaluated with Sommerfeld integrals.
//! * [`linkmodel`]: two-path link gain, link probability, trial simulation and
//!   parameter fitting against dive-trial records.
//! * [`antenna`]: dielectric-loading scaling laws for the helical monopole.
//! * [`cli`]: scenario files, CSV formats and the command implementations
//!   behind the `surflink` binary.

pub mod antenna;
pub mod cli;
pub mod error;
pub mod halfspace;
pub mod linkmodel;
pub mod media;
pub mod surfwave;

pub use error::{Error, Result};
