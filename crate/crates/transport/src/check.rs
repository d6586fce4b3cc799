use atomarray_model::{validate_circuit, AtomRecord, Circuit, Layer, Violation};
use serde::{Deserialize, Serialize};

use crate::error::TransportError;
use crate::physics::{heating_delta_n, retention, MoveSegment, TrapParams};
use crate::plan::{plan_moves, AmplitudeCalibration};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveCheck {
    /// Index of the move layer in the circuit.
    pub layer: usize,
    pub atom: u32,
    pub distance_um: f64,
    pub duration_us: f64,
    pub delta_n: f64,
    pub retention: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitCheck {
    pub moves: Vec<MoveCheck>,
    pub violations: Vec<Violation>,
    /// Waveform-level problems, one entry per move layer that cannot be planned.
    pub plan_errors: Vec<String>,
    pub max_delta_n: f64,
    /// Product of per-move retentions.
    pub total_retention: f64,
}

impl CircuitCheck {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty() && self.plan_errors.is_empty()
    }
}

/// Per-move heating and retention, the circuit rule check and a waveform plan per move layer.
pub fn check_circuit(c: &Circuit, traps: &TrapParams<f64>) -> Result<CircuitCheck, TransportError> {
    traps.validate()?;
    let violations = validate_circuit(c);
    let idx = c.index_of();
    let positions = c.positions_per_layer();
    let cal = AmplitudeCalibration::default();
    let mut moves = Vec::new();
    let mut plan_errors = Vec::new();
    for (li, layer) in c.layers.iter().enumerate() {
        let Layer::Move { moves: ds, duration_us } = layer else { continue };
        for d in ds {
            let seg = MoveSegment::new(d.id, d.dx, d.dy, *duration_us);
            let delta_n = heating_delta_n(&seg, traps)?;
            moves.push(MoveCheck {
                layer: li,
                atom: d.id,
                distance_um: seg.distance_um(),
                duration_us: *duration_us,
                delta_n,
                retention: retention(delta_n, traps),
            });
        }
        let snapshot = |p: &[(f64, f64)]| -> Vec<AtomRecord> {
            c.atoms
                .iter()
                .map(|a| {
                    let (x, y) = p[idx[&a.id]];
                    AtomRecord { x, y, ..a.clone() }
                })
                .collect()
        };
        let after = positions.get(li + 1).cloned().unwrap_or_else(|| positions[li].clone());
        if let Err(e) = plan_moves(&snapshot(&positions[li]), &snapshot(&after), *duration_us, &cal) {
            plan_errors.push(format!("layer {li}: {e}"));
        }
    }
    let max_delta_n = moves.iter().map(|m| m.delta_n).fold(0.0, f64::max);
    let total_retention = moves.iter().map(|m| m.retention).product();
    Ok(CircuitCheck { moves, violations, plan_errors, max_delta_n, total_retention })
}
