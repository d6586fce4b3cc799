use std::collections::{HashMap, HashSet};
use std::f64::consts::FRAC_PI_2;

use atomarray_model::{Axis, Circuit, Displacement, Layer, PauliString, Sublattice, TrapKind};
use atomarray_stabilizer::{echo_frame, readout_sign};
use serde::{Deserialize, Serialize};

use crate::code::{CodeSpec, CssType, Layout};
use crate::graph::GraphSpec;
use crate::error::CodesError;

/// Which Pauli type the final readout measures, in the code frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Setting {
    Xside,
    Zside,
}

impl Setting {
    pub const BOTH: [Setting; 2] = [Setting::Xside, Setting::Zside];

    pub fn css_type(self) -> CssType {
        match self {
            Setting::Xside => CssType::X,
            Setting::Zside => CssType::Z,
        }
    }

    /// Code-frame Pauli reported by every readout bit.
    pub fn axis(self) -> Axis {
        match self {
            Setting::Xside => Axis::X,
            Setting::Zside => Axis::Z,
        }
    }

    /// The sublattice whose graph-frame X must be rotated onto Z before readout.
    pub fn rotated_sublattice(self) -> Sublattice {
        match self {
            Setting::Xside => Sublattice::A,
            Setting::Zside => Sublattice::B,
        }
    }
}

/// Checks that `layout` places exactly the vertices of `graph` and gates every edge once.
pub fn check_layout(graph: &GraphSpec, layout: &Layout) -> Result<(), CodesError> {
    let mismatch = |m: String| Err(CodesError::LayoutMismatch(m));
    let ids: HashSet<u32> = layout.atoms.iter().map(|a| a.id).collect();
    let verts: HashSet<u32> = graph.vertices.iter().copied().collect();
    if ids != verts || layout.atoms.len() != graph.n() {
        return mismatch("atom ids differ from the graph vertices".into());
    }
    let edges: HashSet<(u32, u32)> = graph.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let mut covered = HashSet::new();
    for (k, layer) in layout.layers.iter().enumerate() {
        for &(a, b) in layer {
            let e = (a.min(b), a.max(b));
            if !edges.contains(&e) {
                return mismatch(format!("layer {k} gates ({a},{b}), which is not an edge"));
            }
            if !covered.insert(e) {
                return mismatch(format!("edge ({a},{b}) is gated twice"));
            }
        }
    }
    if covered.len() != edges.len() {
        return mismatch(format!("{} edges are never gated", edges.len() - covered.len()));
    }
    if layout.moves.len() != layout.layers.len() {
        return mismatch("one move list per gate layer required".into());
    }
    let mobile: HashSet<u32> = layout.atoms.iter().filter(|a| a.trap == TrapKind::Mobile).map(|a| a.id).collect();
    for (k, mv) in layout.moves.iter().enumerate() {
        if let Some(w) = mv.iter().find(|w| !mobile.contains(&w.id)) {
            return mismatch(format!("layer {k} moves atom {}, which is not mobile", w.id));
        }
    }
    Ok(())
}

/// Builds the preparation-and-readout circuit of `code` for one setting.
///
/// |+>^N from a global Y(π/2), the shipped CZ layers with moves and echoes in
/// between (plus a final echo when the layer count is odd), the sublattice
/// rotation of the setting and a Z readout of every atom.
pub fn compile_code_circuit(code: &CodeSpec, layout: &Layout, setting: Setting) -> Result<Circuit, CodesError> {
    compile_graph_circuit(&code.graph, layout, setting, &code.name)
}

/// Same as [`compile_code_circuit`] for a bare graph state named `name`.
pub fn compile_graph_circuit(
    graph: &GraphSpec,
    layout: &Layout,
    setting: Setting,
    name: &str,
) -> Result<Circuit, CodesError> {
    check_layout(graph, layout)?;
    let by_id: HashMap<u32, _> = layout.atoms.iter().map(|a| (a.id, a)).collect();
    let atoms: Vec<_> = graph
        .vertices
        .iter()
        .zip(&graph.sublattice)
        .map(|(v, &s)| by_id[v].clone().with_sublattice(s))
        .collect();
    let mut pos: HashMap<u32, (f64, f64)> = atoms.iter().map(|a| (a.id, a.position())).collect();

    let mut layers = vec![Layer::GlobalRotation { axis: Axis::Y, angle: FRAC_PI_2 }];
    for (k, pairs) in layout.layers.iter().enumerate() {
        if k > 0 {
            layers.push(Layer::EchoPulse);
            let mut moves = Vec::new();
            for w in &layout.moves[k] {
                let p = pos.get_mut(&w.id).expect("checked above");
                let (dx, dy) = (w.x - p.0, w.y - p.1);
                if dx != 0.0 || dy != 0.0 {
                    moves.push(Displacement { id: w.id, dx, dy });
                    *p = (w.x, w.y);
                }
            }
            if !moves.is_empty() {
                layers.push(Layer::Move { moves, duration_us: layout.move_duration_us });
            }
        }
        layers.push(Layer::ParallelCz { pairs: pairs.clone() });
    }
    if layout.layers.len() % 2 == 1 {
        layers.push(Layer::EchoPulse);
    }
    layers.push(Layer::SublatticeRotation { sublattice: setting.rotated_sublattice(), axis: Axis::Y, angle: -FRAC_PI_2 });
    layers.push(Layer::MeasureAll { basis: Axis::Z });

    let tag = match setting {
        Setting::Xside => "x",
        Setting::Zside => "z",
    };
    Ok(Circuit { name: format!("{name}-{tag}"), code: Some(name.to_string()), atoms, layers })
}

/// Sign the echoes of `c` leave on the readout parity of `op`'s support.
pub fn measured_sign(c: &Circuit, op: &PauliString) -> Result<i8, CodesError> {
    let frame = echo_frame(c)?;
    Ok(readout_sign(&frame, &op.support()))
}
