//! Closed-form laws of the asymmetric telegraph process.
//!
//! A particle moves with velocity `gamma0` or `gamma1` (`gamma0 > gamma1`),
//! switching between them at the event times of a two-state Markov chain with
//! rates `lambda0`, `lambda1`. This crate evaluates:
//!
//! * the joint law of the position and the number of switches ([`density`]),
//! * first-passage-time laws in every velocity regime ([`first_passage`]),
//! * telegraphic meanders, paths that never cross their starting level
//!   ([`meander`]),
//! * joint laws of the running extremum, its time and the terminal position
//!   ([`extrema`]),
//!
//! together with an exact event-driven simulator ([`montecarlo`]) and a
//! diffusion-scaling checker ([`kac`]) used to validate them.

pub mod cli;
pub mod density;
pub mod error;
pub mod extrema;
pub mod first_passage;
pub mod kac;
pub mod kinematics;
pub mod law;
pub mod manifest;
pub mod meander;
pub mod montecarlo;
pub mod params;
pub mod quadrature;
pub mod series;
pub mod stats;
pub mod validate;

pub use error::{Result, TelegraphError};
pub use kinematics::{kinematics, Kinematics};
pub use law::{Atom, MixedLaw, Support, TabulatedCdf};
pub use params::{classify_regime, State, TelegraphParams, VelocityRegime};
