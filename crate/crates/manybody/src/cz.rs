use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::ManybodyError;
use crate::hamiltonian::{Hamiltonian, HamiltonianParams};
use crate::state::{Level, ThreeLevelState};

/// Two-pulse detuned CZ with a phase jump ξ between the pulses. Rates in rad/s, τ in s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CzPulseParams {
    pub omega: f64,
    pub delta: f64,
    pub xi: f64,
    pub tau: f64,
}

impl CzPulseParams {
    /// Δ = −0.377371 Ω, ξ = −0.621089·2π, τ = 0.683201 / (Ω/2π).
    pub fn standard(omega: f64) -> Self {
        CzPulseParams { omega, delta: -0.377371 * omega, xi: -0.621089 * 2.0 * PI, tau: 0.683201 / (omega / (2.0 * PI)) }
    }
}

pub type Matrix4 = [[Complex64; 4]; 4];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CzReport {
    /// Map on |00>, |01>, |10>, |11> (row = output), projected onto the hyperfine space.
    pub unitary: Matrix4,
    /// Single-qubit phase ζ in CZ·(Z(ζ)⊗Z(ζ)).
    pub zeta: f64,
    /// |Tr(V†U)|²/16 against the ideal map with the fitted ζ and global phase.
    pub fidelity: f64,
    /// Mean population left outside the hyperfine space over the four inputs.
    pub leakage: f64,
}

const QUBIT_LEVELS: [[Level; 2]; 4] =
    [[Level::Zero, Level::Zero], [Level::Zero, Level::One], [Level::One, Level::Zero], [Level::One, Level::One]];

fn index(l: [Level; 2]) -> usize {
    l[0] as usize * 3 + l[1] as usize
}

/// diag(1, e^{iζ}, e^{iζ}, −e^{2iζ}).
pub fn ideal_cz(zeta: f64) -> Matrix4 {
    let z = Complex64::from_polar(1.0, zeta);
    let zero = Complex64::new(0.0, 0.0);
    let mut m = [[zero; 4]; 4];
    m[0][0] = Complex64::new(1.0, 0.0);
    m[1][1] = z;
    m[2][2] = z;
    m[3][3] = -z * z;
    m
}

/// |Tr(A†B)|² / 16.
pub fn process_fidelity(a: &Matrix4, b: &Matrix4) -> f64 {
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            tr += a[i][j].conj() * b[i][j];
        }
    }
    tr.norm_sqr() / 16.0
}

pub fn matmul(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

/// Simulates both pulses on two atoms at interaction strength `blockade` (rad/s).
pub fn cz_pulse_unitary(p: &CzPulseParams, blockade: f64) -> Result<CzReport, ManybodyError> {
    if !(p.omega > 0.0 && p.tau > 0.0 && blockade >= 0.0) {
        return Err(ManybodyError::InvalidParams("omega, tau must be positive and blockade non-negative".into()));
    }
    let mut hp = HamiltonianParams::chain(2, p.omega, p.delta, blockade);
    let first = Hamiltonian::new(&hp)?;
    hp.laser_phase = p.xi;
    let second = Hamiltonian::new(&hp)?;

    let zero = Complex64::new(0.0, 0.0);
    let mut u = [[zero; 4]; 4];
    let mut leakage = 0.0;
    for (j, input) in QUBIT_LEVELS.iter().enumerate() {
        let s = ThreeLevelState::basis(input);
        let out = second.evolve(&first.evolve(&s, p.tau)?, p.tau)?;
        let mut kept = 0.0;
        for (i, o) in QUBIT_LEVELS.iter().enumerate() {
            u[i][j] = out.amps[index(*o)];
            kept += u[i][j].norm_sqr();
        }
        leakage += (1.0 - kept) / 4.0;
    }
    let g = u[0][0] / u[0][0].norm();
    let zeta = 0.5 * ((u[1][1] / g).arg() + (u[2][2] / g).arg());
    let mut ideal = ideal_cz(zeta);
    for row in ideal.iter_mut() {
        for v in row.iter_mut() {
            *v *= g;
        }
    }
    Ok(CzReport { unitary: u, zeta, fidelity: process_fidelity(&ideal, &u), leakage: leakage.max(0.0) })
}
