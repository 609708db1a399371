//! Multi-agent production (MAP) systems: a single source feeds a set of
//! agents which, at every discrete step, keep a fraction `s` of their
//! stored resource, forward a fraction `f` to their out-neighbours and
//! transform the remaining `e = 1 - s - f` into work.
//!
//! The crate is `no_std` (it needs `alloc`) and covers four layers:
//!
//! * [`topology`] builds the flow structure of the eleven catalog designs,
//! * [`dynamics`] iterates the master equation and solves for steady state,
//! * [`metrics`] derives total work, state dispersion and transition time,
//! * [`analysis`] runs a principal component analysis over metric tables.
//!
//! ```
//! use mapsim_core::topology::{self, ArchKind, ArchitectureSpec, FlowParams};
//! use mapsim_core::{dynamics, metrics};
//!
//! let spec = ArchitectureSpec::new(ArchKind::Sdo, 5).unwrap();
//! let system = topology::build_architecture(spec, FlowParams::new(0.1, 0.8)).unwrap();
//! let steady = dynamics::equilibrium(&system).unwrap();
//! let work = metrics::total_work(&steady.x_eq, &system);
//! assert!((work - 0.445).abs() < 1e-3);
//! ```
#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod analysis;
pub mod dynamics;
mod error;
pub mod linalg;
pub mod metrics;
pub mod topology;

pub use error::Error;

pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}
