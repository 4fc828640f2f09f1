//! Continuous-variable teleportation from a uniformly accelerated sender to an
//! inertial observer in 1+1 dimensions.
//!
//! The crate has two independent evaluation routes for the output quadrature
//! variance seen by the inertial detector:
//!
//! * [`teleportation`] evaluates closed forms built from the frequency
//!   integrals in [`spectral`];
//! * [`oracle`] discretizes the Rindler wavepacket onto frequency bins, pushes
//!   every bin through the circuit with the Heisenberg-picture algebra in
//!   [`mode_algebra`], and sums Wick contractions over the output Unruh modes.
//!
//! [`cli`] drives parameter sweeps and the verification suite.

pub mod cli;
pub mod error;
pub mod mode_algebra;
pub mod oracle;
pub mod quadrature;
pub mod spectral;
pub mod teleportation;

pub use error::{Error, Result};
