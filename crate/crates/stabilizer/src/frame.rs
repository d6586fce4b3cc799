//! Heisenberg conjugation of Pauli strings through Clifford gates.
//!
//! Independent of the tableau: used to predict the deterministic sign flips
//! that echo pulses leave on measured operators.

use atomarray_model::{Circuit, Layer, Pauli, PauliString, Sublattice};

use crate::error::StabilizerError;
use crate::gates::{quarter_turns, readout_gates, rotation_gates, Gate};

/// Replaces `p` by `U p U†` for the single gate `U`.
pub fn conjugate(p: &mut PauliString, g: Gate) {
    match g {
        Gate::H(q) => match p.get(q) {
            Pauli::X => p.set(q, Pauli::Z),
            Pauli::Z => p.set(q, Pauli::X),
            Pauli::Y => p.negate(),
            Pauli::I => {}
        },
        Gate::S(q) => match p.get(q) {
            Pauli::X => p.set(q, Pauli::Y),
            Pauli::Y => {
                p.set(q, Pauli::X);
                p.negate();
            }
            _ => {}
        },
        Gate::Pauli(q, s) => {
            if !p.get(q).commutes_with(s) {
                p.negate();
            }
        }
        Gate::Cz(a, b) => {
            let (xa, za) = p.get(a).bits();
            let (xb, zb) = p.get(b).bits();
            if xa && xb && (za ^ zb) {
                p.negate();
            }
            p.set(a, Pauli::from_bits(xa, za ^ xb));
            p.set(b, Pauli::from_bits(xb, zb ^ xa));
        }
    }
}

/// Resolved per-layer gate lists for a circuit (indices, not atom ids).
pub fn layer_gates(c: &Circuit, layer: &Layer) -> Result<Vec<Gate>, StabilizerError> {
    let idx = c.index_of();
    let n = c.n_atoms();
    let lookup = |id: u32| idx.get(&id).copied().ok_or(StabilizerError::UnknownAtom(id));
    let mut gates = Vec::new();
    match layer {
        Layer::GlobalRotation { axis, angle } => {
            let k = quarter_turns(*angle)?;
            for q in 0..n {
                gates.extend(rotation_gates(*axis, k, q));
            }
        }
        Layer::SublatticeRotation { sublattice, axis, angle } => {
            let k = quarter_turns(*angle)?;
            for (q, a) in c.atoms.iter().enumerate() {
                if a.sublattice == Some(*sublattice) {
                    gates.extend(rotation_gates(*axis, k, q));
                }
            }
        }
        Layer::ParallelCz { pairs } => {
            for &(a, b) in pairs {
                gates.push(Gate::Cz(lookup(a)?, lookup(b)?));
            }
        }
        Layer::EchoPulse => gates.extend((0..n).map(|q| Gate::Pauli(q, Pauli::Y))),
        Layer::Move { .. } => {}
        Layer::MeasureAll { basis } => {
            for q in 0..n {
                gates.extend(readout_gates(*basis, q));
            }
        }
    }
    Ok(gates)
}

/// Pushes `p` forward through every layer of `c` (including the readout rotation).
pub fn propagate(c: &Circuit, p: &PauliString) -> Result<PauliString, StabilizerError> {
    let mut out = p.clone();
    for layer in &c.layers {
        for g in layer_gates(c, layer)? {
            conjugate(&mut out, g);
        }
    }
    Ok(out)
}

/// Net Pauli frame left at readout by all echo pulses of `c`.
///
/// The noiseless final state equals this frame applied to the echo-free state,
/// so a measured Z-string flips sign exactly when it anticommutes with the frame.
pub fn echo_frame(c: &Circuit) -> Result<PauliString, StabilizerError> {
    let n = c.n_atoms();
    let all_y = PauliString::from_ops(vec![Pauli::Y; n]);
    let mut frame = PauliString::identity(n);
    for layer in &c.layers {
        if matches!(layer, Layer::EchoPulse) {
            frame = frame.mul_with_phase(&all_y).0;
        } else {
            for g in layer_gates(c, layer)? {
                conjugate(&mut frame, g);
            }
        }
    }
    Ok(frame)
}

/// ±1 flip that the echo frame applies to the Z-readout parity on `support`.
pub fn readout_sign(frame: &PauliString, support: &[usize]) -> i8 {
    let z = PauliString::uniform(frame.len(), support, Pauli::Z);
    if frame.commutes_with(&z) {
        1
    } else {
        -1
    }
}

/// Atoms of `c` in sublattice `s`.
pub fn sublattice_members(c: &Circuit, s: Sublattice) -> Vec<usize> {
    c.atoms.iter().enumerate().filter(|(_, a)| a.sublattice == Some(s)).map(|(i, _)| i).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use atomarray_model::Axis;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn cz_conjugation() {
        let mut p = ps("+XI");
        conjugate(&mut p, Gate::Cz(0, 1));
        assert_eq!(p, ps("+XZ"));
        let mut p = ps("+XY");
        conjugate(&mut p, Gate::Cz(0, 1));
        assert_eq!(p, ps("-YX"));
        let mut p = ps("+YI");
        conjugate(&mut p, Gate::Cz(0, 1));
        assert_eq!(p, ps("+YZ"));
    }

    #[test]
    fn y_quarter_turn_maps_z_to_x() {
        let mut p = ps("+Z");
        for g in rotation_gates(Axis::Y, 1, 0) {
            conjugate(&mut p, g);
        }
        assert_eq!(p, ps("+X"));
        let mut p = ps("+X");
        for g in rotation_gates(Axis::Y, 1, 0) {
            conjugate(&mut p, g);
        }
        assert_eq!(p, ps("-Z"));
    }

    #[test]
    fn x_quarter_turn_maps_z_to_minus_y() {
        let mut p = ps("+Z");
        for g in rotation_gates(Axis::X, 1, 0) {
            conjugate(&mut p, g);
        }
        assert_eq!(p, ps("-Y"));
    }
}
