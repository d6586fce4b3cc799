use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::atom::{AtomRecord, Sublattice};

/// Default blockade-adjacency radius in micrometers.
pub const DEFAULT_BLOCKADE_RADIUS_UM: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Displacement {
    pub id: u32,
    pub dx: f64,
    pub dy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Layer {
    GlobalRotation { axis: Axis, angle: f64 },
    SublatticeRotation { sublattice: Sublattice, axis: Axis, angle: f64 },
    ParallelCz { pairs: Vec<(u32, u32)> },
    /// Global Y(π) between gate layers.
    EchoPulse,
    Move { moves: Vec<Displacement>, duration_us: f64 },
    MeasureAll { basis: Axis },
}

impl Layer {
    pub fn is_cz(&self) -> bool {
        matches!(self, Layer::ParallelCz { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
    pub atoms: Vec<AtomRecord>,
    pub layers: Vec<Layer>,
}

impl Circuit {
    pub fn n_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn cz_layer_count(&self) -> usize {
        self.layers.iter().filter(|l| l.is_cz()).count()
    }

    /// Map from atom id to its index in `atoms`.
    pub fn index_of(&self) -> HashMap<u32, usize> {
        self.atoms.iter().enumerate().map(|(i, a)| (a.id, i)).collect()
    }

    /// Atom positions (by index) just before each layer, following the move layers.
    pub fn positions_per_layer(&self) -> Vec<Vec<(f64, f64)>> {
        let idx = self.index_of();
        let mut pos: Vec<(f64, f64)> = self.atoms.iter().map(|a| a.position()).collect();
        let mut out = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            out.push(pos.clone());
            if let Layer::Move { moves, .. } = layer {
                for m in moves {
                    if let Some(&i) = idx.get(&m.id) {
                        pos[i].0 += m.dx;
                        pos[i].1 += m.dy;
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    DuplicateId,
    MissingAodIndex,
    NonFinitePosition,
    UnknownAtom,
    PairsNotDisjoint,
    SelfPair,
    PairNotAdjacent,
    SpuriousProximity,
    StaticAtomMoved,
    NonPositiveDuration,
    RowNotShared,
    ColumnNotShared,
    RowOrderNotPreserved,
    ColumnOrderNotPreserved,
    MeasurementNotFinal,
    MissingMeasurement,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::DuplicateId => "duplicate atom id",
            Rule::MissingAodIndex => "mobile atom without row/column",
            Rule::NonFinitePosition => "position not finite",
            Rule::UnknownAtom => "unknown atom id",
            Rule::PairsNotDisjoint => "pairs not disjoint",
            Rule::SelfPair => "atom paired with itself",
            Rule::PairNotAdjacent => "pair not adjacent",
            Rule::SpuriousProximity => "unpaired atoms inside blockade radius",
            Rule::StaticAtomMoved => "static atom moved",
            Rule::NonPositiveDuration => "move duration not positive",
            Rule::RowNotShared => "atoms of one row at different y",
            Rule::ColumnNotShared => "atoms of one column at different x",
            Rule::RowOrderNotPreserved => "row order not preserved",
            Rule::ColumnOrderNotPreserved => "column order not preserved",
            Rule::MeasurementNotFinal => "measurement is not the final layer",
            Rule::MissingMeasurement => "no measurement layer",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// Layer index, or `None` for register-level problems.
    pub layer: Option<usize>,
    pub rule: Rule,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.layer {
            Some(l) => write!(f, "layer {l}: {} ({})", self.rule, self.detail),
            None => write!(f, "register: {} ({})", self.rule, self.detail),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationConfig {
    pub blockade_radius_um: f64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig { blockade_radius_um: DEFAULT_BLOCKADE_RADIUS_UM }
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

/// Checks AOD row/column consistency and ordering for one snapshot of positions.
pub fn aod_violations(atoms: &[AtomRecord], pos: &[(f64, f64)]) -> Vec<(Rule, String)> {
    let mut out = Vec::new();
    let mut rows: HashMap<u32, f64> = HashMap::new();
    let mut cols: HashMap<u32, f64> = HashMap::new();
    for (i, a) in atoms.iter().enumerate() {
        let (Some(r), Some(c)) = (a.row, a.col) else { continue };
        if !a.is_mobile() {
            continue;
        }
        let (x, y) = pos[i];
        if let Some(&y0) = rows.get(&r) {
            if (y0 - y).abs() > 1e-9 {
                out.push((Rule::RowNotShared, format!("row {r}: y {y0} vs {y}")));
            }
        } else {
            rows.insert(r, y);
        }
        if let Some(&x0) = cols.get(&c) {
            if (x0 - x).abs() > 1e-9 {
                out.push((Rule::ColumnNotShared, format!("column {c}: x {x0} vs {x}")));
            }
        } else {
            cols.insert(c, x);
        }
    }
    let mut rv: Vec<(u32, f64)> = rows.into_iter().collect();
    rv.sort_by_key(|p| p.0);
    for w in rv.windows(2) {
        if w[1].1 <= w[0].1 {
            out.push((Rule::RowOrderNotPreserved, format!("rows {} and {}", w[0].0, w[1].0)));
        }
    }
    let mut cv: Vec<(u32, f64)> = cols.into_iter().collect();
    cv.sort_by_key(|p| p.0);
    for w in cv.windows(2) {
        if w[1].1 <= w[0].1 {
            out.push((Rule::ColumnOrderNotPreserved, format!("columns {} and {}", w[0].0, w[1].0)));
        }
    }
    out
}

/// Returns every rule violation; an empty list means the circuit is valid.
pub fn validate_circuit(c: &Circuit) -> Vec<Violation> {
    validate_circuit_with(c, &ValidationConfig::default())
}

pub fn validate_circuit_with(c: &Circuit, cfg: &ValidationConfig) -> Vec<Violation> {
    let mut v = Vec::new();
    let mut push = |layer: Option<usize>, rule: Rule, detail: String| v.push(Violation { layer, rule, detail });

    let mut ids = HashSet::new();
    for a in &c.atoms {
        if !ids.insert(a.id) {
            push(None, Rule::DuplicateId, format!("id {}", a.id));
        }
        if a.is_mobile() && (a.row.is_none() || a.col.is_none()) {
            push(None, Rule::MissingAodIndex, format!("id {}", a.id));
        }
        if !a.x.is_finite() || !a.y.is_finite() {
            push(None, Rule::NonFinitePosition, format!("id {}", a.id));
        }
    }
    let idx = c.index_of();
    let positions = c.positions_per_layer();
    let radius = cfg.blockade_radius_um;

    for (rule, detail) in aod_violations(&c.atoms, &positions.first().cloned().unwrap_or_default()) {
        push(None, rule, detail);
    }

    let n_layers = c.layers.len();
    let mut measured = false;
    for (li, layer) in c.layers.iter().enumerate() {
        let pos = &positions[li];
        match layer {
            Layer::ParallelCz { pairs } => {
                let mut seen = HashSet::new();
                let mut partner: HashMap<usize, usize> = HashMap::new();
                for &(a, b) in pairs {
                    let (Some(&ia), Some(&ib)) = (idx.get(&a), idx.get(&b)) else {
                        push(Some(li), Rule::UnknownAtom, format!("pair ({a},{b})"));
                        continue;
                    };
                    if a == b {
                        push(Some(li), Rule::SelfPair, format!("atom {a}"));
                        continue;
                    }
                    if !seen.insert(a) || !seen.insert(b) {
                        push(Some(li), Rule::PairsNotDisjoint, format!("pair ({a},{b})"));
                    }
                    partner.insert(ia, ib);
                    partner.insert(ib, ia);
                    let d = dist(pos[ia], pos[ib]);
                    if d > radius {
                        push(Some(li), Rule::PairNotAdjacent, format!("pair ({a},{b}) at {d:.2} um"));
                    }
                }
                for i in 0..c.atoms.len() {
                    for j in (i + 1)..c.atoms.len() {
                        if partner.get(&i) == Some(&j) {
                            continue;
                        }
                        let d = dist(pos[i], pos[j]);
                        if d <= radius {
                            push(
                                Some(li),
                                Rule::SpuriousProximity,
                                format!("atoms {} and {} at {d:.2} um", c.atoms[i].id, c.atoms[j].id),
                            );
                        }
                    }
                }
            }
            Layer::Move { moves, duration_us } => {
                if !(*duration_us > 0.0) {
                    push(Some(li), Rule::NonPositiveDuration, format!("{duration_us} us"));
                }
                for m in moves {
                    match idx.get(&m.id) {
                        None => push(Some(li), Rule::UnknownAtom, format!("move of {}", m.id)),
                        Some(&i) => {
                            if !c.atoms[i].is_mobile() && (m.dx != 0.0 || m.dy != 0.0) {
                                push(Some(li), Rule::StaticAtomMoved, format!("atom {}", m.id));
                            }
                        }
                    }
                }
                let after = positions.get(li + 1).cloned().unwrap_or_else(|| {
                    let mut p = pos.clone();
                    for m in moves {
                        if let Some(&i) = idx.get(&m.id) {
                            p[i].0 += m.dx;
                            p[i].1 += m.dy;
                        }
                    }
                    p
                });
                // tones share one interpolation profile, so checking the endpoint suffices
                for (rule, detail) in aod_violations(&c.atoms, &after) {
                    push(Some(li), rule, detail);
                }
            }
            Layer::MeasureAll { .. } => {
                measured = true;
                if li + 1 != n_layers {
                    push(Some(li), Rule::MeasurementNotFinal, String::new());
                }
            }
            _ => {}
        }
    }
    if !measured {
        push(None, Rule::MissingMeasurement, String::new());
    }
    v
}
