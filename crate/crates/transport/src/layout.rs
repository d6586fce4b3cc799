//! Heuristic layout search for bipartite graph states.
//!
//! The smaller sublattice rides in one AOD row just above a line of static
//! traps. Each gate layer parks every gating mobile atom over its static
//! partner and puts the idle ones into free slots between the statics. The
//! search scores orderings by gate-layer count first and total move distance
//! second.

use std::collections::{HashMap, HashSet, VecDeque};

use atomarray_codes::{compile_graph_circuit, GraphSpec, Layout, Setting, Waypoint};
use atomarray_model::{validate_circuit, AtomRecord, Sublattice};
use serde::{Deserialize, Serialize};

use crate::error::TransportError;

pub const STATIC_PITCH_UM: f64 = 20.0;
/// Height of the mobile row above the static line; inside a 5 μm blockade radius.
pub const MOBILE_ROW_Y_UM: f64 = 3.0;
/// Idle positions inside each gap between statics, measured from the left static.
const PARK_OFFSETS: [f64; 3] = [4.5, 10.0, 15.5];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayoutWeights {
    /// Cost per gate layer.
    pub layers: f64,
    /// Cost per μm moved by any atom, summed over the schedule.
    pub move_distance: f64,
    /// Cap on (static order × mobile order) candidates tried exhaustively.
    pub max_orderings: usize,
    pub move_duration_us: f64,
}

impl Default for LayoutWeights {
    fn default() -> Self {
        LayoutWeights { layers: 1e6, move_distance: 1.0, max_orderings: 5040, move_duration_us: 200.0 }
    }
}

/// Total distance travelled by mobile atoms after the first gate layer.
pub fn total_move_distance(layout: &Layout) -> f64 {
    let mut pos: HashMap<u32, (f64, f64)> = layout.atoms.iter().map(|a| (a.id, (a.x, a.y))).collect();
    let mut total = 0.0;
    for mv in layout.moves.iter().skip(1) {
        for w in mv {
            if let Some(p) = pos.get_mut(&w.id) {
                total += (w.x - p.0).hypot(w.y - p.1);
                *p = (w.x, w.y);
            }
        }
    }
    total
}

struct Schedule {
    /// (mobile, static) local indices per layer.
    layers: Vec<Vec<(usize, usize)>>,
    /// x of every mobile (by local index) at each layer.
    xs: Vec<Vec<f64>>,
    distance: f64,
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn factorial_capped(n: usize, cap: usize) -> usize {
    (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k).filter(|&v| v <= cap)).unwrap_or(usize::MAX)
}

fn bfs_order(statics: usize, adj_static: &[Vec<usize>]) -> Vec<usize> {
    // statics sharing a mobile neighbour end up next to each other
    let mut seen = vec![false; statics];
    let mut out = Vec::with_capacity(statics);
    for s0 in 0..statics {
        if seen[s0] {
            continue;
        }
        seen[s0] = true;
        let mut queue = VecDeque::from([s0]);
        while let Some(u) = queue.pop_front() {
            out.push(u);
            for &v in &adj_static[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    out
}

/// Free idle positions strictly between gated statics `lo` and `hi` (static slots).
fn slots(lo: Option<i64>, hi: Option<i64>, need: usize, n_static: i64) -> Vec<f64> {
    let need = need as i64;
    let kmin = lo.unwrap_or(hi.unwrap_or(0).min(0) - need - 1);
    let kmax = hi.unwrap_or(lo.unwrap_or(n_static - 1).max(n_static - 1) + need + 1);
    let mut out = Vec::new();
    for k in kmin..=kmax {
        for off in PARK_OFFSETS {
            let x = STATIC_PITCH_UM * k as f64 + off;
            let above_lo = lo.is_none_or(|j| x > STATIC_PITCH_UM * j as f64 + 4.9);
            let below_hi = hi.is_none_or(|j| x < STATIC_PITCH_UM * j as f64 - 4.9);
            if above_lo && below_hi {
                out.push(x);
            }
        }
    }
    out
}

/// Order-preserving assignment of `prev` positions onto `slots` with least total travel.
fn assign(prev: &[f64], slots: &[f64]) -> Option<Vec<f64>> {
    let (m, s) = (prev.len(), slots.len());
    if m == 0 {
        return Some(vec![]);
    }
    if s < m {
        return None;
    }
    // cost[i][j]: best for first i items using first j slots
    let inf = f64::INFINITY;
    let mut cost = vec![vec![inf; s + 1]; m + 1];
    cost[0].iter_mut().for_each(|c| *c = 0.0);
    for i in 1..=m {
        for j in i..=s {
            let take = cost[i - 1][j - 1] + (prev[i - 1] - slots[j - 1]).abs();
            cost[i][j] = cost[i][j - 1].min(take);
        }
    }
    let mut out = vec![0.0; m];
    let (mut i, mut j) = (m, s);
    while i > 0 {
        if cost[i][j] == cost[i][j - 1] && j > i {
            j -= 1;
        } else {
            out[i - 1] = slots[j - 1];
            i -= 1;
            j -= 1;
        }
    }
    Some(out)
}

/// Greedy schedule for one ordering: each layer is a maximum non-crossing set of
/// remaining edges that leaves room to park the idle mobiles in between.
fn schedule(
    edges: &[(usize, usize)],
    mobile_rank: &[usize],
    static_pos: &[usize],
    start_x: &[f64],
) -> Option<Schedule> {
    let p = mobile_rank.len();
    let n_static = static_pos.len() as i64;
    let mut by_rank = vec![0; p];
    for (m, &r) in mobile_rank.iter().enumerate() {
        by_rank[r] = m;
    }
    let mut remaining: Vec<(usize, usize)> = edges.to_vec();
    let mut layers = Vec::new();
    let mut xs = Vec::new();
    let mut prev: Vec<f64> = start_x.to_vec();
    let mut distance = 0.0;
    while !remaining.is_empty() {
        let mut deg_m = vec![0usize; p];
        let mut deg_s = vec![0usize; static_pos.len()];
        for &(m, s) in &remaining {
            deg_m[m] += 1;
            deg_s[s] += 1;
        }
        let mut cand: Vec<(usize, i64, usize)> =
            remaining.iter().enumerate().map(|(e, &(m, s))| (mobile_rank[m], static_pos[s] as i64, e)).collect();
        cand.sort();
        // best chain ending at each candidate: (pairs, remaining-degree sum)
        let mut best: Vec<(usize, usize)> = vec![(0, 0); cand.len()];
        let mut back: Vec<Option<usize>> = vec![None; cand.len()];
        for b in 0..cand.len() {
            let (rb, jb, eb) = cand[b];
            let (mb, sb) = remaining[eb];
            let own = deg_m[mb] + deg_s[sb];
            best[b] = (1, own);
            for a in 0..b {
                let (ra, ja, _) = cand[a];
                if ra < rb && ja < jb && (rb - ra - 1) as i64 <= 3 * (jb - ja) - 2 {
                    let v = (best[a].0 + 1, best[a].1 + own);
                    if v > best[b] {
                        best[b] = v;
                        back[b] = Some(a);
                    }
                }
            }
        }
        let mut end = (0..cand.len()).max_by(|&x, &y| best[x].cmp(&best[y]).then(y.cmp(&x)))?;
        let mut chosen = vec![cand[end]];
        while let Some(a) = back[end] {
            chosen.push(cand[a]);
            end = a;
        }
        chosen.reverse();

        // place gating mobiles over their partners and idle ones into slots
        let mut x = vec![f64::NAN; p];
        let gated: HashSet<usize> = chosen.iter().map(|c| c.2).collect();
        for &(r, j, _) in &chosen {
            x[by_rank[r]] = STATIC_PITCH_UM * j as f64;
        }
        let mut bounds: Vec<(Option<usize>, Option<i64>)> = vec![(None, None)];
        bounds.extend(chosen.iter().map(|&(r, j, _)| (Some(r), Some(j))));
        bounds.push((None, None));
        for w in bounds.windows(2) {
            let (r_lo, j_lo) = w[0];
            let (r_hi, j_hi) = w[1];
            let first = r_lo.map_or(0, |r| r + 1);
            let last = r_hi.unwrap_or(p);
            let idle: Vec<usize> = (first..last).map(|r| by_rank[r]).collect();
            let free = slots(j_lo, j_hi, idle.len(), n_static);
            let placed = assign(&idle.iter().map(|&m| prev[m]).collect::<Vec<_>>(), &free)?;
            for (m, v) in idle.into_iter().zip(placed) {
                x[m] = v;
            }
        }
        if !layers.is_empty() {
            distance += x.iter().zip(&prev).map(|(a, b)| (a - b).abs()).sum::<f64>();
        }
        layers.push(chosen.iter().map(|c| remaining[c.2]).collect());
        remaining = remaining.into_iter().enumerate().filter(|(e, _)| !gated.contains(e)).map(|(_, v)| v).collect();
        prev = x.clone();
        xs.push(x);
    }
    Some(Schedule { layers, xs, distance })
}

/// Searches AOD orderings for a short, low-travel gate schedule of `g`.
///
/// The result is checked by compiling it and running the circuit rules.
pub fn search_layout(g: &GraphSpec, weights: &LayoutWeights) -> Result<Layout, TransportError> {
    let coloured = if g.is_bipartite() { g.clone() } else { GraphSpec::from_edges(g.vertices.clone(), g.edges.clone()) };
    if !coloured.is_bipartite() {
        return Err(TransportError::NonBipartite);
    }
    if g.edges.is_empty() {
        return Err(TransportError::NoLayout("graph has no edges".into()));
    }
    let (a, b) = (coloured.members(Sublattice::A), coloured.members(Sublattice::B));
    let (mobiles, statics) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let local = |set: &[usize]| -> Vec<Option<usize>> {
        let mut v = vec![None; coloured.n()];
        for (k, &i) in set.iter().enumerate() {
            v[i] = Some(k);
        }
        v
    };
    let (lm, ls) = (local(&mobiles), local(&statics));
    let adj = coloured.adjacency();
    let mut edges = Vec::new();
    for (m, &vi) in mobiles.iter().enumerate() {
        for &u in &adj[vi] {
            edges.push((m, ls[u].expect("bipartite")));
        }
    }
    let mut adj_static = vec![Vec::new(); statics.len()];
    for (m, _) in mobiles.iter().enumerate() {
        let ns: Vec<usize> = edges.iter().filter(|e| e.0 == m).map(|e| e.1).collect();
        for &s in &ns {
            adj_static[s].extend(ns.iter().copied().filter(|&t| t != s));
        }
    }

    let n_static_orders = factorial_capped(statics.len(), weights.max_orderings);
    let static_orders: Vec<Vec<usize>> = if n_static_orders <= weights.max_orderings {
        let mut p: Vec<usize> = (0..statics.len()).collect();
        let mut all = vec![p.clone()];
        while next_permutation(&mut p) {
            all.push(p.clone());
        }
        all
    } else {
        vec![(0..statics.len()).collect(), bfs_order(statics.len(), &adj_static)]
    };
    let try_mobile_perms =
        n_static_orders.saturating_mul(factorial_capped(mobiles.len(), weights.max_orderings)) <= weights.max_orderings;

    let mut best: Option<(f64, Vec<usize>, Vec<usize>, Schedule)> = None;
    for order in &static_orders {
        // order[k] is the static at slot k
        let mut static_pos = vec![0; statics.len()];
        for (k, &s) in order.iter().enumerate() {
            static_pos[s] = k;
        }
        let bary: Vec<f64> = (0..mobiles.len())
            .map(|m| {
                let ps: Vec<f64> = edges.iter().filter(|e| e.0 == m).map(|e| static_pos[e.1] as f64).collect();
                if ps.is_empty() { 0.0 } else { ps.iter().sum::<f64>() / ps.len() as f64 }
            })
            .collect();
        let mut mobile_orders = Vec::new();
        let mut by_bary: Vec<usize> = (0..mobiles.len()).collect();
        by_bary.sort_by(|&x, &y| bary[x].total_cmp(&bary[y]).then(x.cmp(&y)));
        mobile_orders.push(by_bary);
        if try_mobile_perms {
            let mut p: Vec<usize> = (0..mobiles.len()).collect();
            mobile_orders.push(p.clone());
            while next_permutation(&mut p) {
                mobile_orders.push(p.clone());
            }
        }
        for mo in mobile_orders {
            // mo[r] is the mobile at rank r
            let mut rank = vec![0; mobiles.len()];
            for (r, &m) in mo.iter().enumerate() {
                rank[m] = r;
            }
            let start: Vec<f64> = bary.iter().map(|b| STATIC_PITCH_UM * b).collect();
            let Some(s) = schedule(&edges, &rank, &static_pos, &start) else { continue };
            let score = weights.layers * s.layers.len() as f64 + weights.move_distance * s.distance;
            if best.as_ref().is_none_or(|b| score < b.0) {
                best = Some((score, rank, static_pos.clone(), s));
            }
        }
    }
    let (_, rank, static_pos, sched) = best.ok_or_else(|| TransportError::NoLayout("no ordering admits a schedule".into()))?;

    let id = |i: usize| coloured.vertices[i];
    let mut atoms = Vec::with_capacity(coloured.n());
    for v in 0..coloured.n() {
        if let Some(s) = ls[v] {
            atoms.push(AtomRecord::fixed(id(v), STATIC_PITCH_UM * static_pos[s] as f64, 0.0));
        } else {
            let m = lm[v].expect("mobile vertex");
            atoms.push(AtomRecord::mobile(id(v), 0, rank[m] as u32, sched.xs[0][m], MOBILE_ROW_Y_UM));
        }
    }
    let layers: Vec<Vec<(u32, u32)>> =
        sched.layers.iter().map(|l| l.iter().map(|&(m, s)| (id(statics[s]), id(mobiles[m]))).collect()).collect();
    let moves: Vec<Vec<Waypoint>> = sched
        .xs
        .iter()
        .map(|xs| mobiles.iter().enumerate().map(|(m, &v)| Waypoint { id: id(v), x: xs[m], y: MOBILE_ROW_Y_UM }).collect())
        .collect();
    let layout = Layout { atoms, layers, moves, move_duration_us: weights.move_duration_us };

    let circuit = compile_graph_circuit(g, &layout, Setting::Xside, "search")
        .map_err(|e| TransportError::NoLayout(e.to_string()))?;
    if let Some(v) = validate_circuit(&circuit).first() {
        return Err(TransportError::NoLayout(v.to_string()));
    }
    Ok(layout)
}

