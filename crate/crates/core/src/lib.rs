//! Interferometric fidelity and coherence measures.
//!
//! Two channels placed in the arms of a Mach-Zehnder interferometer can be
//! joined ("glued") in many ways that all agree on each arm. The visibility
//! of the resulting fringes depends on the gluing, but its maximum over all
//! gluings that prepare given states `ρ_A`, `ρ_B` depends only on those
//! states. This crate computes those maxima in closed form, evaluates the
//! interference functions of explicit gluings, and simulates the full
//! interferometer from Stinespring dilations as an independent check.

pub mod channels;
pub mod error;
pub mod gluings;
pub mod interferometer;
pub mod io;
pub mod measures;
pub mod numerics;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::{Complex64, ComplexMatrix, ComplexVector};
