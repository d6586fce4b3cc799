use atomarray_model::{AtomRecord, Pauli, PauliString, Sublattice};
use atomarray_stabilizer::{StabilizerState, Tableau};
use serde::{Deserialize, Serialize};

use crate::compile::{compile_code_circuit, measured_sign, Setting};
use crate::error::CodesError;
use crate::graph::{to_code_frame, GraphSpec};

/// Names of the codes shipped with the crate.
pub const BUILTIN_CODES: [&str; 4] = ["cluster-12", "steane-7", "surface-19", "toric-24"];

const CLUSTER_12: &str = include_str!("../data/cluster-12.json");
const STEANE_7: &str = include_str!("../data/steane-7.json");
const SURFACE_19: &str = include_str!("../data/surface-19.json");
const TORIC_24: &str = include_str!("../data/toric-24.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderKind {
    SteaneLookup,
    Mwpm,
    None,
}

/// Pauli type of a CSS operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CssType {
    X,
    Z,
}

impl CssType {
    pub fn of(p: &PauliString) -> Option<CssType> {
        if p.is_identity() {
            None
        } else if p.is_uniform(Pauli::X) {
            Some(CssType::X)
        } else if p.is_uniform(Pauli::Z) {
            Some(CssType::Z)
        } else {
            None
        }
    }

    /// The readout setting in which operators of this type are diagonal.
    pub fn setting(self) -> Setting {
        match self {
            CssType::X => Setting::Xside,
            CssType::Z => Setting::Zside,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedPauli {
    pub name: String,
    pub op: PauliString,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogicalPair {
    pub name: String,
    pub x: PauliString,
    pub z: PauliString,
}

/// Target position of one atom at a gate layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    pub id: u32,
    pub x: f64,
    pub y: f64,
}

fn default_move_duration() -> f64 {
    200.0
}

/// Atom coordinates and the movement schedule: `atoms` hold the positions at the
/// first gate layer and `moves[k]` the mobile-atom positions at gate layer `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub atoms: Vec<AtomRecord>,
    pub layers: Vec<Vec<(u32, u32)>>,
    pub moves: Vec<Vec<Waypoint>>,
    #[serde(default = "default_move_duration")]
    pub move_duration_us: f64,
}

/// A stabilizer code (or plain graph state) prepared from a graph state.
///
/// Operators live in the code frame: the graph frame conjugated by H on sublattice B.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub name: String,
    pub graph: GraphSpec,
    pub stabilizers: Vec<NamedPauli>,
    pub logicals: Vec<LogicalPair>,
    pub distances: Vec<usize>,
    /// ±1 echo sign of each stabilizer as read out in its own setting.
    pub sign_corrections: Vec<i8>,
    /// ±1 echo signs of (X_L, Z_L) for each logical.
    pub logical_sign_corrections: Vec<(i8, i8)>,
    pub decoder: DecoderKind,
}

#[derive(Debug, Deserialize)]
struct CodeFile {
    name: String,
    vertices: Vec<u32>,
    edges: Vec<(u32, u32)>,
    sublattice: Vec<Sublattice>,
    ancilla: Vec<bool>,
    atoms: Vec<AtomRecord>,
    layers: Vec<Vec<(u32, u32)>>,
    moves: Vec<Vec<Waypoint>>,
    #[serde(default = "default_move_duration")]
    move_duration_us: f64,
    stabilizers: Vec<NamedPauli>,
    logicals: Vec<LogicalPair>,
    distances: Vec<usize>,
    decoder: DecoderKind,
}

/// Parses a code data file, validates it and computes the echo sign corrections.
pub fn load_code(json: &str) -> Result<(CodeSpec, Layout), CodesError> {
    let f: CodeFile = serde_json::from_str(json)?;
    let graph = GraphSpec { vertices: f.vertices, edges: f.edges, sublattice: f.sublattice, ancilla: f.ancilla };
    let mut code = CodeSpec {
        name: f.name,
        graph,
        stabilizers: f.stabilizers,
        logicals: f.logicals,
        distances: f.distances,
        sign_corrections: vec![],
        logical_sign_corrections: vec![],
        decoder: f.decoder,
    };
    let layout = Layout { atoms: f.atoms, layers: f.layers, moves: f.moves, move_duration_us: f.move_duration_us };
    code.validate()?;
    code.compute_sign_corrections(&layout)?;
    Ok((code, layout))
}

/// One of the shipped codes by name.
pub fn builtin_code(name: &str) -> Result<(CodeSpec, Layout), CodesError> {
    let json = match name {
        "cluster-12" => CLUSTER_12,
        "steane-7" => STEANE_7,
        "surface-19" => SURFACE_19,
        "toric-24" => TORIC_24,
        _ => return Err(CodesError::UnknownCode(name.to_string())),
    };
    load_code(json)
}

/// Stabilizer state of the graph state expressed in the code frame (no echoes).
pub fn code_state(g: &GraphSpec) -> StabilizerState {
    let idx = g.index_of();
    let mut t = Tableau::new(g.n());
    for q in 0..g.n() {
        t.h(q);
    }
    for (a, b) in &g.edges {
        t.cz(idx[a], idx[b]);
    }
    for q in g.members(Sublattice::B) {
        t.h(q);
    }
    StabilizerState { tableau: t, lost: vec![false; g.n()] }
}

/// Rank over GF(2) of a set of Pauli strings in symplectic form.
pub fn symplectic_rank(ops: &[PauliString]) -> usize {
    let mut rows: Vec<Vec<bool>> = ops
        .iter()
        .map(|p| {
            let mut r: Vec<bool> = p.ops().iter().map(|o| o.bits().0).collect();
            r.extend(p.ops().iter().map(|o| o.bits().1));
            r
        })
        .collect();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c]) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] {
                let src = rows[rank].clone();
                for (x, s) in rows[r].iter_mut().zip(src) {
                    *x ^= s;
                }
            }
        }
        rank += 1;
    }
    rank
}

impl CodeSpec {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Indices of the stabilizers of one Pauli type.
    pub fn stabilizers_of(&self, t: CssType) -> Vec<usize> {
        (0..self.stabilizers.len()).filter(|&i| CssType::of(&self.stabilizers[i].op) == Some(t)).collect()
    }

    /// Logical operator of the given type for logical `k`.
    pub fn logical_op(&self, k: usize, t: CssType) -> &PauliString {
        match t {
            CssType::X => &self.logicals[k].x,
            CssType::Z => &self.logicals[k].z,
        }
    }

    /// Checks the commutation structure and that every stabilizer and X_L
    /// stabilizes the prepared graph state.
    pub fn validate(&self) -> Result<(), CodesError> {
        self.graph.validate()?;
        let n = self.n();
        let bad = |m: String| Err(CodesError::InvalidCode(format!("{}: {m}", self.name)));
        for s in &self.stabilizers {
            if s.op.len() != n || s.op.is_identity() {
                return bad(format!("stabilizer {} has the wrong length or is trivial", s.name));
            }
            if CssType::of(&s.op).is_none() {
                return bad(format!("stabilizer {} is not of pure X or Z type", s.name));
            }
        }
        for (i, a) in self.stabilizers.iter().enumerate() {
            for b in &self.stabilizers[i + 1..] {
                if !a.op.commutes_with(&b.op) {
                    return bad(format!("{} and {} anticommute", a.name, b.name));
                }
            }
        }
        if self.distances.len() != self.logicals.len() {
            return bad("one distance per logical required".into());
        }
        for (k, l) in self.logicals.iter().enumerate() {
            if CssType::of(&l.x) != Some(CssType::X) || CssType::of(&l.z) != Some(CssType::Z) {
                return bad(format!("logical {} is not CSS", l.name));
            }
            for s in &self.stabilizers {
                if !s.op.commutes_with(&l.x) || !s.op.commutes_with(&l.z) {
                    return bad(format!("logical {} anticommutes with {}", l.name, s.name));
                }
            }
            for (j, m) in self.logicals.iter().enumerate() {
                let anti = !l.x.commutes_with(&m.z);
                if anti != (j == k) {
                    return bad(format!("logicals {} and {} have the wrong commutation", l.name, m.name));
                }
            }
        }

        let state = code_state(&self.graph);
        let mut prepared: Vec<PauliString> = self.stabilizers.iter().map(|s| s.op.clone()).collect();
        prepared.extend(self.logicals.iter().map(|l| l.x.clone()));
        for p in &prepared {
            if state.tableau.expectation(p) != Some(1) {
                return bad(format!("{p} does not stabilize the prepared state"));
            }
        }
        // without ancillas the listed operators must generate the whole graph-state group
        if !self.graph.ancilla.iter().any(|&a| a) {
            let graph_group: Vec<PauliString> =
                crate::graph::graph_stabilizers(&self.graph).iter().map(|s| to_code_frame(&self.graph, s)).collect();
            if symplectic_rank(&prepared) != symplectic_rank(&graph_group) {
                return bad("stabilizers and X logicals do not generate the graph-state group".into());
            }
        }
        Ok(())
    }

    fn compute_sign_corrections(&mut self, layout: &Layout) -> Result<(), CodesError> {
        let x = compile_code_circuit(self, layout, Setting::Xside)?;
        let z = compile_code_circuit(self, layout, Setting::Zside)?;
        let sign = |p: &PauliString| -> Result<i8, CodesError> {
            match CssType::of(p) {
                Some(CssType::X) => measured_sign(&x, p),
                Some(CssType::Z) => measured_sign(&z, p),
                None => Err(CodesError::InvalidCode(format!("{p} is not CSS"))),
            }
        };
        self.sign_corrections = self.stabilizers.iter().map(|s| sign(&s.op)).collect::<Result<_, _>>()?;
        self.logical_sign_corrections =
            self.logicals.iter().map(|l| Ok((sign(&l.x)?, sign(&l.z)?))).collect::<Result<_, CodesError>>()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtin_codes_load() {
        for name in BUILTIN_CODES {
            let (code, layout) = builtin_code(name).unwrap();
            assert_eq!(code.sign_corrections.len(), code.stabilizers.len());
            assert_eq!(layout.atoms.len(), code.n());
        }
    }

    #[test]
    fn rank_of_dependent_set() {
        let ops: Vec<PauliString> = ["+XX", "+ZZ", "-YY"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(symplectic_rank(&ops), 2);
    }

    #[test]
    fn steane_group_matches_graph() {
        let (code, _) = builtin_code("steane-7").unwrap();
        assert_eq!(code.stabilizers.len(), 6);
        assert_eq!(code.stabilizers_of(CssType::X).len(), 3);
    }
}
