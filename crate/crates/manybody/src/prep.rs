use std::f64::consts::PI;

use crate::error::ManybodyError;
use crate::hamiltonian::{Hamiltonian, HamiltonianParams};
use crate::state::ThreeLevelState;

/// Global resonant π pulse (π/Ω with `params.omega`) with the |r> level of the
/// masked sites raised by `lightshift`, so they stay in |1>. Raising (rather
/// than lowering) adds to the blockade shift from excited neighbours.
///
/// An infinite light shift takes the masked sites out of the drive entirely.
pub fn prepare_z2(
    state: &ThreeLevelState,
    params: &HamiltonianParams,
    mask: &[bool],
    lightshift: f64,
) -> Result<ThreeLevelState, ManybodyError> {
    if mask.len() != state.n {
        return Err(ManybodyError::LengthMismatch { expected: state.n, got: mask.len() });
    }
    if !(params.omega > 0.0) || lightshift.is_nan() {
        return Err(ManybodyError::InvalidParams("pulse needs a positive Rabi frequency".into()));
    }
    let mut p = params.clone();
    p.n_atoms = state.n;
    p.delta = 0.0;
    if lightshift.is_infinite() {
        p.site_detuning = vec![];
        p.driven = mask.iter().map(|&m| !m).collect();
    } else {
        p.site_detuning = mask.iter().map(|&m| if m { -lightshift } else { 0.0 }).collect();
        p.driven = vec![];
    }
    Hamiltonian::new(&p)?.evolve(state, PI / params.omega)
}

/// Masks the odd sites, so a π pulse from |11...1> gives |r1r1...>.
pub fn z2_mask(n: usize) -> Vec<bool> {
    (0..n).map(|i| i % 2 == 1).collect()
}
