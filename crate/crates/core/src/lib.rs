//! Minimum number of independent control inputs for linear networks whose
//! nodes carry heterogeneous individual dynamics.
//!
//! The pipeline is: generate a topology ([`netgen`]), distribute unit types
//! over its nodes and assemble the mixed state matrix ([`dynamics`]), then
//! count drivers ([`control`]) with the rank engines in [`rank`]. Ensemble
//! sweeps live in [`experiments`]; [`cli`] backs the `ectrl` binary.

pub mod cli;
pub mod control;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod netgen;
pub mod rank;
pub mod rational;
pub mod seeds;
pub mod validation;

pub use control::{DriverResult, Method};
pub use dynamics::{assemble, assign_types, make_unit_type, Assignment, StateMatrix, UnitType};
pub use error::{Error, Result};
pub use netgen::{GraphSpec, Topology};
pub use rational::Rational;
