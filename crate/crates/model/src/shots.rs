use serde::{Deserialize, Serialize};

use crate::circuit::Axis;
use crate::error::ModelError;
use crate::pauli::{Pauli, PauliString};

/// Readout of one shot. A lost atom always reads 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShotRecord {
    bits: Vec<u8>,
    lost: Vec<bool>,
}

impl ShotRecord {
    /// Builds a record, forcing the bit of every lost atom to 1.
    pub fn new(mut bits: Vec<u8>, lost: Vec<bool>) -> Result<Self, ModelError> {
        if bits.len() != lost.len() {
            return Err(ModelError::LengthMismatch { expected: bits.len(), got: lost.len() });
        }
        for (b, &l) in bits.iter_mut().zip(&lost) {
            *b = if l { 1 } else { *b & 1 };
        }
        Ok(ShotRecord { bits, lost })
    }

    pub fn without_loss(bits: Vec<u8>) -> Self {
        let n = bits.len();
        Self::new(bits, vec![false; n]).expect("lengths match")
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn lost(&self) -> &[bool] {
        &self.lost
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bitstring(&self) -> String {
        self.bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
    }

    pub fn loss_mask(&self) -> String {
        self.lost.iter().map(|&l| if l { '1' } else { '0' }).collect()
    }

    /// Parity of the bits on `support`.
    pub fn parity(&self, support: &[usize]) -> u8 {
        support.iter().fold(0, |acc, &q| acc ^ self.bits[q])
    }
}

/// Which Pauli each readout bit reports (bit b ↦ eigenvalue (−1)^b).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadoutBasis(pub Vec<Axis>);

impl ReadoutBasis {
    pub fn uniform(n: usize, axis: Axis) -> Self {
        ReadoutBasis(vec![axis; n])
    }

    /// Support of `op`, or an error if some factor is not the measured Pauli.
    pub fn diagonal_support(&self, op: &PauliString) -> Result<Vec<usize>, ModelError> {
        if op.len() != self.0.len() {
            return Err(ModelError::LengthMismatch { expected: self.0.len(), got: op.len() });
        }
        let mut support = Vec::new();
        for (q, &p) in op.ops().iter().enumerate() {
            let ok = match (p, self.0[q]) {
                (Pauli::I, _) => continue,
                (Pauli::X, Axis::X) | (Pauli::Y, Axis::Y) | (Pauli::Z, Axis::Z) => true,
                _ => false,
            };
            if !ok {
                return Err(ModelError::BasisMismatch { op: op.to_string(), qubit: q });
            }
            support.push(q);
        }
        Ok(support)
    }
}

/// Eigenvalue (±1) of `op` in one shot, given its support.
pub fn shot_value(shot: &ShotRecord, op: &PauliString, support: &[usize]) -> i8 {
    let v = if shot.parity(support) == 0 { 1 } else { -1 };
    v * op.sign()
}

/// Mean of a ±1 observable and its binomial standard error.
pub fn pm_one_stats(plus: usize, total: usize) -> (f64, f64) {
    if total == 0 {
        return (f64::NAN, f64::NAN);
    }
    let n = total as f64;
    let p = plus as f64 / n;
    (2.0 * p - 1.0, 2.0 * (p * (1.0 - p) / n).sqrt())
}

/// Expectation of `op` over shots measured in `basis`.
pub fn pauli_expectation(
    shots: &[ShotRecord],
    op: &PauliString,
    basis: &ReadoutBasis,
) -> Result<(f64, f64), ModelError> {
    let support = basis.diagonal_support(op)?;
    if shots.is_empty() {
        return Err(ModelError::NoShots);
    }
    let plus = shots.iter().filter(|s| shot_value(s, op, &support) > 0).count();
    Ok(pm_one_stats(plus, shots.len()))
}
