//! Syndrome decoding: 3-bit lookup for the Steane code, exact minimum-weight
//! matching for codes whose qubits each touch at most two same-type checks.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use atomarray_model::{Pauli, PauliString};
use serde::{Deserialize, Serialize};

use crate::code::{CodeSpec, CssType, DecoderKind};
use crate::error::CodesError;

/// Measured value (±1) of every stabilizer of a code, in code order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Syndrome(pub Vec<i8>);

impl Syndrome {
    pub fn trivial(n_stabilizers: usize) -> Self {
        Syndrome(vec![1; n_stabilizers])
    }

    /// Syndrome produced by a Pauli error acting on the code state.
    pub fn of_error(code: &CodeSpec, err: &PauliString) -> Self {
        Syndrome(code.stabilizers.iter().map(|s| if s.op.commutes_with(err) { 1 } else { -1 }).collect())
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&s| s == 1)
    }
}

#[derive(Debug, Clone)]
struct Lookup {
    table: HashMap<u64, usize>,
}

#[derive(Debug, Clone)]
struct Matching {
    n_checks: usize,
    n_classes: usize,
    // paths[src][dst][class]: lightest (weight, qubit chain) from check src to
    // node dst (dst == n_checks is the boundary) that flips the logicals in `class`
    paths: Vec<Vec<Vec<Option<(usize, Vec<usize>)>>>>,
}

#[derive(Debug, Clone)]
enum Engine {
    Lookup(Lookup),
    Matching(Matching),
    Trivial,
}

/// Decoder for one check type: stabilizers of type `checks_type` and the
/// opposite-type errors they detect.
#[derive(Debug, Clone)]
struct TypeDecoder {
    checks: Vec<usize>,
    engine: Engine,
}

/// Decoder for both check types of a code.
#[derive(Debug, Clone)]
pub struct Decoder {
    n: usize,
    n_stabilizers: usize,
    x_checks: TypeDecoder,
    z_checks: TypeDecoder,
}

fn membership(code: &CodeSpec, checks: &[usize]) -> Vec<Vec<usize>> {
    let mut m = vec![Vec::new(); code.n()];
    for (local, &s) in checks.iter().enumerate() {
        for q in code.stabilizers[s].op.support() {
            m[q].push(local);
        }
    }
    m
}

impl TypeDecoder {
    fn new(code: &CodeSpec, t: CssType) -> Result<Self, CodesError> {
        let checks = code.stabilizers_of(t);
        let member = membership(code, &checks);
        let engine = match code.decoder {
            DecoderKind::None => return Err(CodesError::NoDecoder(code.name.clone())),
            _ if checks.is_empty() => Engine::Trivial,
            DecoderKind::SteaneLookup => {
                let mut table = HashMap::new();
                for (q, m) in member.iter().enumerate() {
                    let pattern = m.iter().fold(0u64, |acc, &c| acc | 1 << c);
                    if pattern != 0 {
                        table.entry(pattern).or_insert(q);
                    }
                }
                Engine::Lookup(Lookup { table })
            }
            DecoderKind::Mwpm => {
                let logicals: Vec<Vec<usize>> =
                    (0..code.logicals.len()).map(|k| code.logical_op(k, t).support()).collect();
                Engine::Matching(Matching::new(&member, checks.len(), &logicals, code)?)
            }
        };
        Ok(TypeDecoder { checks, engine })
    }

    fn decode(&self, defects: &[bool]) -> Result<Vec<usize>, CodesError> {
        if !defects.iter().any(|&d| d) {
            return Ok(vec![]);
        }
        match &self.engine {
            Engine::Trivial => Err(CodesError::Unmatchable),
            Engine::Lookup(l) => {
                let pattern = defects.iter().enumerate().fold(0u64, |acc, (c, &d)| acc | (d as u64) << c);
                l.table.get(&pattern).map(|&q| vec![q]).ok_or(CodesError::Unmatchable)
            }
            Engine::Matching(m) => m.decode(defects),
        }
    }
}

impl Matching {
    fn new(member: &[Vec<usize>], n_checks: usize, logicals: &[Vec<usize>], code: &CodeSpec) -> Result<Self, CodesError> {
        let boundary = n_checks;
        let n_classes = 1usize << logicals.len();
        // ancilla errors cost 1.5 data errors, so equal-length explanations resolve to data qubits
        let weight: Vec<usize> = code.graph.ancilla.iter().map(|&a| if a { 3 } else { 2 }).collect();
        let mut adj: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n_checks + 1];
        for (q, m) in member.iter().enumerate() {
            let class = logicals.iter().enumerate().fold(0, |acc, (k, s)| acc | (s.contains(&q) as usize) << k);
            let (u, v) = match m.as_slice() {
                [] => continue,
                [u] => (*u, boundary),
                [u, v] => (*u, *v),
                _ => {
                    return Err(CodesError::InvalidCode(format!(
                        "{}: qubit {q} sits in more than two checks, matching does not apply",
                        code.name
                    )))
                }
            };
            adj[u].push((v, q, class));
            adj[v].push((u, q, class));
        }

        let states = (n_checks + 1) * n_classes;
        let mut paths = vec![vec![vec![None; n_classes]; n_checks + 1]; n_checks];
        for (src, row) in paths.iter_mut().enumerate() {
            // Dijkstra over (node, logical class)
            let mut dist = vec![usize::MAX; states];
            let mut parent: Vec<Option<(usize, usize)>> = vec![None; states];
            let start = src * n_classes;
            dist[start] = 0;
            let mut heap = BinaryHeap::from([Reverse((0usize, start))]);
            while let Some(Reverse((d, s))) = heap.pop() {
                let (node, class) = (s / n_classes, s % n_classes);
                if d > dist[s] || node == boundary {
                    continue;
                }
                for &(nbr, q, qc) in &adj[node] {
                    let t = nbr * n_classes + (class ^ qc);
                    let nd = d + weight[q];
                    if nd < dist[t] {
                        dist[t] = nd;
                        parent[t] = Some((s, q));
                        heap.push(Reverse((nd, t)));
                    }
                }
            }
            for (dst, cell) in row.iter_mut().enumerate() {
                for (class, slot) in cell.iter_mut().enumerate() {
                    let mut s = dst * n_classes + class;
                    if dist[s] == usize::MAX || s == start {
                        continue;
                    }
                    let w = dist[s];
                    let mut chain = Vec::new();
                    while let Some((prev, q)) = parent[s] {
                        chain.push(q);
                        s = prev;
                    }
                    *slot = Some((w, chain));
                }
            }
        }
        Ok(Matching { n_checks, n_classes, paths })
    }

    fn decode(&self, defects: &[bool]) -> Result<Vec<usize>, CodesError> {
        let d: Vec<usize> = (0..self.n_checks).filter(|&c| defects[c]).collect();
        let m = d.len();
        let nc = self.n_classes;
        // best[mask][class] = (weight, partner of the lowest defect, class of that pair's chain)
        type Entry = Option<(usize, usize, usize)>;
        let mut best: Vec<Vec<Entry>> = vec![vec![None; nc]; 1 << m];
        best[0][0] = Some((0, usize::MAX, 0));
        for mask in 1usize..1 << m {
            let i = mask.trailing_zeros() as usize;
            let mut cell: Vec<Entry> = vec![None; nc];
            let consider = |rest: usize, partner: usize, dst: usize, cell: &mut Vec<Entry>| {
                for (c1, p) in self.paths[d[i]][dst].iter().enumerate() {
                    let Some((pw, _)) = p else { continue };
                    for (c0, prev) in best[rest].iter().enumerate() {
                        let Some((w0, _, _)) = prev else { continue };
                        let w = w0 + pw;
                        let slot = &mut cell[c0 ^ c1];
                        if slot.is_none_or(|(bw, _, _)| w < bw) {
                            *slot = Some((w, partner, c1));
                        }
                    }
                }
            };
            for j in i + 1..m {
                if mask >> j & 1 == 1 {
                    consider(mask ^ (1 << i) ^ (1 << j), j, d[j], &mut cell);
                }
            }
            consider(mask ^ (1 << i), usize::MAX, self.n_checks, &mut cell);
            best[mask] = cell;
        }

        let full = (1usize << m) - 1;
        // lightest total; on ties prefer flipping fewer logicals
        let class = (0..nc)
            .filter(|&c| best[full][c].is_some())
            .min_by_key(|&c| (best[full][c].unwrap().0, c.count_ones(), c))
            .ok_or(CodesError::Unmatchable)?;

        let mut mask = full;
        let mut class_left = class;
        let mut flips: Vec<usize> = Vec::new();
        while mask != 0 {
            let i = mask.trailing_zeros() as usize;
            let (_, partner, c1) = best[mask][class_left].expect("reachable by construction");
            let dst = if partner == usize::MAX { self.n_checks } else { d[partner] };
            flips.extend(&self.paths[d[i]][dst][c1].as_ref().expect("path exists").1);
            mask ^= 1 << i;
            if partner != usize::MAX {
                mask ^= 1 << partner;
            }
            class_left ^= c1;
        }
        // chains may overlap; a qubit flipped twice is not flipped
        flips.sort_unstable();
        let mut out: Vec<usize> = Vec::with_capacity(flips.len());
        for q in flips {
            if out.last() == Some(&q) {
                out.pop();
            } else {
                out.push(q);
            }
        }
        Ok(out)
    }
}

impl Decoder {
    pub fn new(code: &CodeSpec) -> Result<Self, CodesError> {
        Ok(Decoder {
            n: code.n(),
            n_stabilizers: code.stabilizers.len(),
            x_checks: TypeDecoder::new(code, CssType::X)?,
            z_checks: TypeDecoder::new(code, CssType::Z)?,
        })
    }

    fn side(&self, t: CssType) -> &TypeDecoder {
        match t {
            CssType::X => &self.x_checks,
            CssType::Z => &self.z_checks,
        }
    }

    /// Qubits whose readout bits should be flipped, given the outcomes of the
    /// checks of type `t` (in code order, `true` meaning −1).
    pub fn flips(&self, t: CssType, defects: &[bool]) -> Result<Vec<usize>, CodesError> {
        let side = self.side(t);
        if defects.len() != side.checks.len() {
            return Err(CodesError::InvalidSyndromeLength { expected: side.checks.len(), got: defects.len() });
        }
        side.decode(defects)
    }

    /// Pauli correction for a full syndrome: Z on the qubits explaining the
    /// X-check defects and X on those explaining the Z-check defects.
    pub fn decode(&self, syndrome: &Syndrome) -> Result<PauliString, CodesError> {
        if syndrome.0.len() != self.n_stabilizers {
            return Err(CodesError::InvalidSyndromeLength { expected: self.n_stabilizers, got: syndrome.0.len() });
        }
        let mut corr = PauliString::identity(self.n);
        for (t, fix) in [(CssType::X, Pauli::Z), (CssType::Z, Pauli::X)] {
            let side = self.side(t);
            let defects: Vec<bool> = side.checks.iter().map(|&s| syndrome.0[s] == -1).collect();
            for q in side.decode(&defects)? {
                let (x, z) = corr.get(q).bits();
                let (fx, fz) = fix.bits();
                corr.set(q, Pauli::from_bits(x ^ fx, z ^ fz));
            }
        }
        Ok(corr)
    }
}

/// One-shot decoding of `syndrome` for `code`.
pub fn decode(syndrome: &Syndrome, code: &CodeSpec) -> Result<PauliString, CodesError> {
    Decoder::new(code)?.decode(syndrome)
}
