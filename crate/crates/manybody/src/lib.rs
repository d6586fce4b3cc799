//! Rydberg-chain dynamics on the {|0>, |1>, |r>} space, the detuned CZ pulse,
//! and Rényi entropy from twin-copy Bell readout.

pub mod cz;
pub mod entropy;
pub mod error;
pub mod evolve;
pub mod hamiltonian;
pub mod interfere;
pub mod mapping;
pub mod oracle;
pub mod prep;
pub mod pxp;
pub mod scar;
pub mod state;

pub use cz::{cz_pulse_unitary, ideal_cz, process_fidelity, CzPulseParams, CzReport, Matrix4};
pub use entropy::{
    classical_offset, interval_mask, mutual_information, purity_overlap, renyi2, renyi_entropy, EntropyResult,
};
pub use error::ManybodyError;
pub use evolve::{evolve, evolve_series, step_halving_error};
pub use hamiltonian::{mhz, DetuningPreset, Hamiltonian, HamiltonianParams, DEFAULT_MAX_ATOMS};
pub use interfere::{bell_pair_unitary, interfere_and_sample, twin_distribution, TwinShot};
pub use mapping::{coherent_map, mapping_pulses, project_loss, MappedState, MappingErrorModel, MappingMap};
pub use oracle::{
    expected_pair_purity, purity_oracle, raman_benchmark, run_copy, sample_twin_series, sample_twin_shots, BenchmarkPoint,
};
pub use prep::{prepare_z2, z2_mask};
pub use pxp::{lucas, pxp_basis, pxp_evolve, PxpState, PXP_MAX_ATOMS};
pub use scar::{correlation, detrend, detrended_correlation, revival_time};
pub use state::{Level, ThreeLevelState};
