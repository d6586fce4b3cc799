//! AOD transport: constant-jerk heating, retention, waveform planning and
//! heuristic layout search.

pub mod check;
pub mod error;
pub mod layout;
pub mod physics;
pub mod plan;

pub use check::{check_circuit, CircuitCheck, MoveCheck};
pub use error::TransportError;
pub use layout::{search_layout, total_move_distance, LayoutWeights, MOBILE_ROW_Y_UM, STATIC_PITCH_UM};
pub use physics::{
    drop_loss, fidelity_knee, heating_delta_n, pair_retention_vs_speed, retention, retention_single,
    zero_point_size, MoveSegment, Profile, TrapParams, HBAR, K_B, RB87_MASS,
};
pub use plan::{
    cubic_acceleration, cubic_jerk, cubic_position, cubic_velocity, layout_snapshots, plan_layout, plan_moves,
    validate_plan, write_waveform_csv, AmplitudeCalibration, ToneAxis, ToneTrack, WaveformPlan, MAX_SAMPLE_STEP_US,
};
