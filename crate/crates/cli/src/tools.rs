use std::path::Path;

use atomarray_codes::{compile_graph_circuit, GraphSpec, Layout, Setting};
use atomarray_manybody::{cz_pulse_unitary, mhz, CzPulseParams};
use atomarray_model::Circuit;
use atomarray_transport::{
    check_circuit, plan_layout, search_layout, total_move_distance, AmplitudeCalibration, CircuitCheck, LayoutWeights,
    TrapParams, WaveformPlan,
};
use serde::{Deserialize, Serialize};

use crate::config::read_text;
use crate::error::{ctx, CliError};

fn parse_json<T: for<'de> Deserialize<'de>>(p: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read_text(p)?).map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))
}

/// Heating, retention and rule violations of a circuit file.
pub fn transport_check(path: &Path, traps: &TrapParams<f64>) -> Result<CircuitCheck, CliError> {
    let c: Circuit = parse_json(path)?;
    check_circuit(&c, traps).map_err(|e| CliError::Validation(e.to_string()))
}

#[derive(Deserialize)]
struct BareGraph {
    vertices: Vec<u32>,
    edges: Vec<(u32, u32)>,
}

/// Reads a full `GraphSpec`, or just `{vertices, edges}` with sublattices coloured automatically.
pub fn read_graph(path: &Path) -> Result<GraphSpec, CliError> {
    let text = read_text(path)?;
    let g = match serde_json::from_str::<GraphSpec>(&text) {
        Ok(g) => g,
        Err(_) => {
            let b: BareGraph =
                serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            GraphSpec::from_edges(b.vertices, b.edges)
        }
    };
    g.validate().map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(g)
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanOutput {
    pub layout: Layout,
    pub gate_layers: usize,
    pub total_move_distance_um: f64,
    pub check: CircuitCheck,
    pub plans: Vec<WaveformPlan>,
}

/// Layout search, waveform plans at `move_us` per move, and the heating check of the result.
pub fn transport_plan(g: &GraphSpec, move_us: f64, traps: &TrapParams<f64>) -> Result<PlanOutput, CliError> {
    if !(move_us > 0.0) {
        return Err(CliError::Validation("--T must be positive".into()));
    }
    let weights = LayoutWeights { move_duration_us: move_us, ..LayoutWeights::default() };
    let layout = search_layout(g, &weights).map_err(|e| CliError::Validation(e.to_string()))?;
    let plans = plan_layout(&layout, &AmplitudeCalibration::default()).map_err(ctx("planning waveforms"))?;
    let circuit = compile_graph_circuit(g, &layout, Setting::Xside, "graph").map_err(ctx("compiling layout"))?;
    let check = check_circuit(&circuit, traps).map_err(ctx("checking layout"))?;
    Ok(PlanOutput {
        gate_layers: layout.layers.len(),
        total_move_distance_um: total_move_distance(&layout),
        layout,
        check,
        plans,
    })
}

#[derive(Serialize)]
struct WaveRow<'a> {
    time_us: f64,
    tone: &'a str,
    position_um: f64,
    amplitude: f64,
}

/// All move segments back to back as `time_us,tone,position_um,amplitude`.
/// Segment k starts at the sum of the earlier durations.
pub fn waveform_csv(plans: &[WaveformPlan]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut offset = 0.0;
    for plan in plans {
        for tone in &plan.tones {
            let id = tone.id();
            for (k, &t) in plan.times_us.iter().enumerate() {
                w.serialize(WaveRow {
                    time_us: offset + t,
                    tone: &id,
                    position_um: tone.positions_um[k],
                    amplitude: tone.amplitudes[k],
                })
                .map_err(ctx("writing waveform"))?;
            }
        }
        offset += plan.duration_us;
    }
    w.into_inner().map_err(ctx("writing waveform"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CzSummary {
    pub omega_mhz: f64,
    pub blockade_mhz: f64,
    pub fidelity: f64,
    pub zeta: f64,
    pub leakage: f64,
}

/// The standard detuned two-pulse gate at Ω/2π and V/2π given in MHz.
pub fn cz_verify(omega_mhz: f64, blockade_mhz: f64) -> Result<CzSummary, CliError> {
    if !(omega_mhz > 0.0 && blockade_mhz > 0.0) {
        return Err(CliError::Validation("Rabi frequency and blockade must be positive".into()));
    }
    let r = cz_pulse_unitary(&CzPulseParams::standard(mhz(omega_mhz)), mhz(blockade_mhz))
        .map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(CzSummary { omega_mhz, blockade_mhz, fidelity: r.fidelity, zeta: r.zeta, leakage: r.leakage })
}
