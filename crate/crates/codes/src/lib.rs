//! Graph states and small stabilizer codes on atom arrays: shipped layouts,
//! circuit compilation with echo bookkeeping, evaluation and decoding.

pub mod code;
pub mod compile;
pub mod decode;
pub mod error;
pub mod evaluate;
pub mod graph;

pub use code::{
    builtin_code, code_state, load_code, symplectic_rank, CodeSpec, CssType, DecoderKind, Layout, LogicalPair,
    NamedPauli, Waypoint, BUILTIN_CODES,
};
pub use compile::{check_layout, compile_code_circuit, compile_graph_circuit, measured_sign, Setting};
pub use decode::{decode, Decoder, Syndrome};
pub use error::CodesError;
pub use evaluate::{evaluate_code, CodeReport, Estimate, LogicalReport, SettingShots, SettingSummary, StabilizerReport};
pub use graph::{graph_stabilizers, to_code_frame, GraphSpec};
