//! Clifford gate vocabulary and the reduction of axis rotations to it.

use atomarray_model::{Axis, Pauli as P};

use crate::error::StabilizerError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    S(usize),
    Pauli(usize, P),
    Cz(usize, usize),
}

/// Number of quarter turns in `angle`, or an error if it is not a multiple of π/2.
pub fn quarter_turns(angle: f64) -> Result<u8, StabilizerError> {
    let k = angle / std::f64::consts::FRAC_PI_2;
    let r = k.round();
    if !k.is_finite() || (k - r).abs() > 1e-9 {
        return Err(StabilizerError::NonCliffordAngle { angle });
    }
    Ok((r as i64).rem_euclid(4) as u8)
}

/// Gates equal (up to global phase) to exp(−i·k·π/4·σ_axis) on qubit `q`, in time order.
pub fn rotation_gates(axis: Axis, k: u8, q: usize) -> Vec<Gate> {
    use Gate::*;
    match (axis, k % 4) {
        (_, 0) => vec![],
        (Axis::Z, 1) => vec![S(q)],
        (Axis::Z, 2) => vec![Pauli(q, P::Z)],
        (Axis::Z, _) => vec![S(q), Pauli(q, P::Z)],
        (Axis::X, 1) => vec![H(q), S(q), H(q)],
        (Axis::X, 2) => vec![Pauli(q, P::X)],
        (Axis::X, _) => vec![H(q), S(q), H(q), Pauli(q, P::X)],
        (Axis::Y, 1) => vec![H(q), Pauli(q, P::X)],
        (Axis::Y, 2) => vec![Pauli(q, P::Y)],
        (Axis::Y, _) => vec![H(q), Pauli(q, P::Z)],
    }
}

/// Gates rotating the `basis` eigenbasis onto Z before a Z readout.
pub fn readout_gates(basis: Axis, q: usize) -> Vec<Gate> {
    use Gate::*;
    match basis {
        Axis::Z => vec![],
        Axis::X => vec![H(q)],
        // S† then H
        Axis::Y => vec![S(q), Pauli(q, P::Z), H(q)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        use std::f64::consts::PI;
        assert_eq!(quarter_turns(PI / 2.0).unwrap(), 1);
        assert_eq!(quarter_turns(-PI / 2.0).unwrap(), 3);
        assert_eq!(quarter_turns(2.0 * PI).unwrap(), 0);
        assert!(quarter_turns(PI / 4.0).is_err());
    }
}
