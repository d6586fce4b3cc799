use std::collections::{HashMap, HashSet};

use atomarray_model::{Pauli, PauliString, Sublattice};
use serde::{Deserialize, Serialize};

use crate::error::CodesError;

/// Interaction graph of a graph state. Vertex `i` of every Pauli string is `vertices[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
    pub sublattice: Vec<Sublattice>,
    pub ancilla: Vec<bool>,
}

impl GraphSpec {
    /// Graph with every vertex on sublattice A and no ancillas; sublattices are
    /// then 2-coloured along the edges where possible.
    pub fn from_edges(vertices: Vec<u32>, edges: Vec<(u32, u32)>) -> Self {
        let n = vertices.len();
        let mut g = GraphSpec { vertices, edges, sublattice: vec![Sublattice::A; n], ancilla: vec![false; n] };
        if let Some(colours) = g.two_colouring() {
            g.sublattice = colours;
        }
        g
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self) -> HashMap<u32, usize> {
        self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect()
    }

    /// Neighbour indices per vertex index.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let idx = self.index_of();
        let mut adj = vec![Vec::new(); self.n()];
        for &(a, b) in &self.edges {
            if let (Some(&i), Some(&j)) = (idx.get(&a), idx.get(&b)) {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
        adj
    }

    fn two_colouring(&self) -> Option<Vec<Sublattice>> {
        let adj = self.adjacency();
        let mut col: Vec<Option<Sublattice>> = vec![None; self.n()];
        for s in 0..self.n() {
            if col[s].is_some() {
                continue;
            }
            col[s] = Some(Sublattice::A);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let c = col[u].unwrap();
                for &v in &adj[u] {
                    match col[v] {
                        None => {
                            col[v] = Some(c.other());
                            stack.push(v);
                        }
                        Some(cv) if cv == c => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(col.into_iter().map(|c| c.unwrap()).collect())
    }

    /// True when every edge joins the two sublattices.
    pub fn is_bipartite(&self) -> bool {
        let idx = self.index_of();
        self.edges.iter().all(|(a, b)| match (idx.get(a), idx.get(b)) {
            (Some(&i), Some(&j)) => self.sublattice[i] != self.sublattice[j],
            _ => false,
        })
    }

    pub fn validate(&self) -> Result<(), CodesError> {
        let n = self.n();
        if self.sublattice.len() != n || self.ancilla.len() != n {
            return Err(CodesError::InvalidCode("per-vertex tables have the wrong length".into()));
        }
        let idx = self.index_of();
        if idx.len() != n {
            return Err(CodesError::InvalidCode("duplicate vertex id".into()));
        }
        let mut seen = HashSet::new();
        for &(a, b) in &self.edges {
            if a == b {
                return Err(CodesError::InvalidCode(format!("self loop on {a}")));
            }
            if !idx.contains_key(&a) || !idx.contains_key(&b) {
                return Err(CodesError::InvalidCode(format!("edge ({a},{b}) uses an unknown vertex")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(CodesError::InvalidCode(format!("edge ({a},{b}) repeated")));
            }
        }
        if !self.is_bipartite() {
            return Err(CodesError::InvalidCode("graph is not bipartite over its sublattices".into()));
        }
        Ok(())
    }

    pub fn members(&self, s: Sublattice) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.sublattice[i] == s).collect()
    }
}

/// S_i = X_i Π_{j ~ i} Z_j for every vertex, in vertex order.
pub fn graph_stabilizers(g: &GraphSpec) -> Vec<PauliString> {
    let n = g.n();
    g.adjacency()
        .iter()
        .enumerate()
        .map(|(i, nbrs)| {
            let mut p = PauliString::uniform(n, nbrs, Pauli::Z);
            p.set(i, Pauli::X);
            p
        })
        .collect()
}

/// Graph-frame operator in the code frame, i.e. conjugated by H on sublattice B.
pub fn to_code_frame(g: &GraphSpec, p: &PauliString) -> PauliString {
    let mut out = p.clone();
    for q in g.members(Sublattice::B) {
        match p.get(q) {
            Pauli::X => out.set(q, Pauli::Z),
            Pauli::Z => out.set(q, Pauli::X),
            Pauli::Y => out.negate(),
            Pauli::I => {}
        }
    }
    out
}
