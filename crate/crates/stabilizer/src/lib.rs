//! Clifford simulation of layered atom-array circuits with Pauli and loss noise.

pub mod bell;
pub mod error;
pub mod frame;
pub mod gates;
pub mod io;
pub mod noise;
pub mod sampler;
pub mod tableau;

pub use bell::bell_fidelity_estimator;
pub use error::StabilizerError;
pub use frame::{conjugate, echo_frame, propagate, readout_sign};
pub use gates::{quarter_turns, rotation_gates, Gate};
pub use noise::{Accounting, Channel, Fault, NoiseModel};
pub use sampler::{final_state, sample_shots, RngSpec, Sampler, StabilizerState};
pub use tableau::Tableau;
