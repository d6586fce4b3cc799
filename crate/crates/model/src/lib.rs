//! Domain types shared across the toolkit: atoms, Pauli strings, the layered
//! circuit representation and shot records.

pub mod atom;
pub mod circuit;
pub mod error;
pub mod pauli;
pub mod scalar;
pub mod shots;
pub mod stats;

pub use atom::{AtomRecord, Sublattice, TrapKind};
pub use circuit::{
    aod_violations, validate_circuit, validate_circuit_with, Axis, Circuit, Displacement, Layer, Rule,
    ValidationConfig, Violation, DEFAULT_BLOCKADE_RADIUS_UM,
};
pub use error::ModelError;
pub use pauli::{Pauli, PauliString};
pub use scalar::Real;
pub use shots::{pauli_expectation, pm_one_stats, ReadoutBasis, ShotRecord};
