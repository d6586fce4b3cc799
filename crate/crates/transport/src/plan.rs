//! Per-tone AOD trajectories between two snapshots of the register.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use atomarray_codes::Layout;
use atomarray_model::{AtomRecord, TrapKind};
use serde::{Deserialize, Serialize};

use crate::error::TransportError;

/// Largest time step between samples, in μs (1 MHz).
pub const MAX_SAMPLE_STEP_US: f64 = 1.0;

/// Normalised cubic position 3s² − 2s³ for s in [0, 1].
pub fn cubic_position(s: f64) -> f64 {
    let s = s.clamp(0.0, 1.0);
    s * s * (3.0 - 2.0 * s)
}

/// d/ds of [`cubic_position`].
pub fn cubic_velocity(s: f64) -> f64 {
    if !(0.0..=1.0).contains(&s) {
        return 0.0;
    }
    6.0 * s * (1.0 - s)
}

pub fn cubic_acceleration(s: f64) -> f64 {
    6.0 - 12.0 * s
}

pub fn cubic_jerk(_s: f64) -> f64 {
    -12.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToneAxis {
    Row,
    Column,
}

impl ToneAxis {
    pub fn name(self) -> &'static str {
        match self {
            ToneAxis::Row => "row",
            ToneAxis::Column => "column",
        }
    }
}

/// One AOD tone: its position (y for rows, x for columns) and amplitude per sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToneTrack {
    pub axis: ToneAxis,
    pub index: u32,
    pub positions_um: Vec<f64>,
    pub amplitudes: Vec<f64>,
}

impl ToneTrack {
    pub fn id(&self) -> String {
        format!("{}{}", self.axis.name(), self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveformPlan {
    pub duration_us: f64,
    pub times_us: Vec<f64>,
    /// Rows first, then columns, each sorted by index.
    pub tones: Vec<ToneTrack>,
}

/// Tone amplitude against tone position, piecewise linear; flat 1 when empty.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeCalibration {
    pub rows: Vec<(f64, f64)>,
    pub columns: Vec<(f64, f64)>,
}

fn interp(points: &[(f64, f64)], x: f64) -> f64 {
    match points {
        [] => 1.0,
        [p] => p.1,
        _ => {
            if x <= points[0].0 {
                return points[0].1;
            }
            for w in points.windows(2) {
                if x <= w[1].0 {
                    let f = (x - w[0].0) / (w[1].0 - w[0].0);
                    return w[0].1 + f * (w[1].1 - w[0].1);
                }
            }
            points[points.len() - 1].1
        }
    }
}

impl AmplitudeCalibration {
    pub fn amplitude(&self, axis: ToneAxis, pos: f64) -> f64 {
        match axis {
            ToneAxis::Row => interp(&self.rows, pos),
            ToneAxis::Column => interp(&self.columns, pos),
        }
    }
}

/// Position of every tone in one snapshot, checking that atoms sharing a tone agree.
fn tone_positions(atoms: &[AtomRecord]) -> Result<BTreeMap<(ToneAxis, u32), f64>, TransportError> {
    let mut out: BTreeMap<(ToneAxis, u32), f64> = BTreeMap::new();
    for a in atoms.iter().filter(|a| a.trap == TrapKind::Mobile) {
        let (Some(r), Some(c)) = (a.row, a.col) else {
            return Err(TransportError::MembershipChanged(a.id));
        };
        for (key, v) in [((ToneAxis::Row, r), a.y), ((ToneAxis::Column, c), a.x)] {
            match out.get(&key) {
                Some(&v0) if (v0 - v).abs() > 1e-9 => {
                    return Err(TransportError::ToneNotShared { axis: key.0.name(), index: key.1 })
                }
                _ => {
                    out.insert(key, v);
                }
            }
        }
    }
    Ok(out)
}

fn check_order(tones: &BTreeMap<(ToneAxis, u32), f64>, when: &str) -> Result<(), TransportError> {
    for axis in [ToneAxis::Row, ToneAxis::Column] {
        let seq: Vec<(u32, f64)> = tones.iter().filter(|(k, _)| k.0 == axis).map(|(k, &v)| (k.1, v)).collect();
        for w in seq.windows(2) {
            if w[1].1 <= w[0].1 {
                return Err(TransportError::OrderingViolation {
                    axis: axis.name(),
                    index: w[1].0,
                    detail: format!("{when}: {} {} at {} not beyond {} at {}", axis.name(), w[1].0, w[1].1, w[0].0, w[0].1),
                });
            }
        }
    }
    Ok(())
}

/// Cubic interpolation of every AOD tone from `start` to `end` over `duration_us`.
///
/// Both snapshots must hold the same atoms with the same traps and AOD indices.
/// Static atoms may not move, and the end snapshot must keep rows and columns
/// in index order.
pub fn plan_moves(
    start: &[AtomRecord],
    end: &[AtomRecord],
    duration_us: f64,
    cal: &AmplitudeCalibration,
) -> Result<WaveformPlan, TransportError> {
    if !(duration_us > 0.0) || !duration_us.is_finite() {
        return Err(TransportError::NonPositiveDuration(duration_us));
    }
    let ends: HashMap<u32, &AtomRecord> = end.iter().map(|a| (a.id, a)).collect();
    if ends.len() != start.len() {
        return Err(TransportError::MissingAtom(start.iter().find(|a| !ends.contains_key(&a.id)).map_or(0, |a| a.id)));
    }
    for a in start {
        let b = ends.get(&a.id).ok_or(TransportError::MissingAtom(a.id))?;
        if a.trap != b.trap || a.row != b.row || a.col != b.col {
            return Err(TransportError::MembershipChanged(a.id));
        }
        if a.trap == TrapKind::Static && (a.x != b.x || a.y != b.y) {
            return Err(TransportError::StaticMoved(a.id));
        }
    }
    let p0 = tone_positions(start)?;
    let p1 = tone_positions(end)?;
    check_order(&p0, "start")?;
    check_order(&p1, "target")?;

    let steps = (duration_us / MAX_SAMPLE_STEP_US).ceil().max(1.0) as usize;
    let times_us: Vec<f64> = (0..=steps).map(|k| duration_us * k as f64 / steps as f64).collect();
    let tones = p0
        .iter()
        .map(|(&(axis, index), &x0)| {
            let x1 = p1[&(axis, index)];
            let (a0, a1) = (cal.amplitude(axis, x0), cal.amplitude(axis, x1));
            let mut positions_um = Vec::with_capacity(times_us.len());
            let mut amplitudes = Vec::with_capacity(times_us.len());
            for &t in &times_us {
                let s = t / duration_us;
                positions_um.push(x0 + (x1 - x0) * cubic_position(s));
                amplitudes.push(a0 + (a1 - a0) * s);
            }
            ToneTrack { axis, index, positions_um, amplitudes }
        })
        .collect();
    let plan = WaveformPlan { duration_us, times_us, tones };
    validate_plan(&plan)?;
    Ok(plan)
}

/// Checks sampling density, finiteness and strict tone ordering at every sample.
pub fn validate_plan(plan: &WaveformPlan) -> Result<(), TransportError> {
    if !(plan.duration_us > 0.0) {
        return Err(TransportError::NonPositiveDuration(plan.duration_us));
    }
    let n = plan.times_us.len();
    if plan.times_us.windows(2).any(|w| w[1] - w[0] > MAX_SAMPLE_STEP_US + 1e-9 || w[1] <= w[0]) {
        return Err(TransportError::OrderingViolation {
            axis: "time",
            index: 0,
            detail: "samples not increasing or more than 1 μs apart".into(),
        });
    }
    for tone in &plan.tones {
        if tone.positions_um.len() != n || tone.amplitudes.len() != n {
            return Err(TransportError::OrderingViolation {
                axis: tone.axis.name(),
                index: tone.index,
                detail: "sample count differs from the time axis".into(),
            });
        }
        if tone.positions_um.iter().chain(&tone.amplitudes).any(|v| !v.is_finite()) {
            return Err(TransportError::OrderingViolation {
                axis: tone.axis.name(),
                index: tone.index,
                detail: "non-finite sample".into(),
            });
        }
    }
    for axis in [ToneAxis::Row, ToneAxis::Column] {
        let mut seq: Vec<&ToneTrack> = plan.tones.iter().filter(|t| t.axis == axis).collect();
        seq.sort_by_key(|t| t.index);
        for w in seq.windows(2) {
            if let Some(k) = (0..n).find(|&k| w[1].positions_um[k] <= w[0].positions_um[k]) {
                return Err(TransportError::OrderingViolation {
                    axis: axis.name(),
                    index: w[1].index,
                    detail: format!("crosses {} {} at t = {} μs", axis.name(), w[0].index, plan.times_us[k]),
                });
            }
        }
    }
    Ok(())
}

/// Register snapshots at every gate layer of a shipped or searched layout.
pub fn layout_snapshots(layout: &Layout) -> Vec<Vec<AtomRecord>> {
    let mut cur = layout.atoms.clone();
    let mut out = Vec::with_capacity(layout.layers.len());
    for (k, moves) in layout.moves.iter().enumerate() {
        if k > 0 {
            for w in moves {
                if let Some(a) = cur.iter_mut().find(|a| a.id == w.id) {
                    a.x = w.x;
                    a.y = w.y;
                }
            }
        }
        out.push(cur.clone());
    }
    out
}

/// One plan per transition between consecutive gate layers.
pub fn plan_layout(layout: &Layout, cal: &AmplitudeCalibration) -> Result<Vec<WaveformPlan>, TransportError> {
    let snaps = layout_snapshots(layout);
    snaps.windows(2).map(|w| plan_moves(&w[0], &w[1], layout.move_duration_us, cal)).collect()
}

#[derive(Serialize)]
struct WaveRow<'a> {
    time_us: f64,
    tone: &'a str,
    position_um: f64,
    amplitude: f64,
}

/// Writes `time_us,tone,position_um,amplitude`, one row per tone and sample.
pub fn write_waveform_csv<W: Write>(plan: &WaveformPlan, out: W) -> Result<(), TransportError> {
    let mut w = csv::Writer::from_writer(out);
    for tone in &plan.tones {
        let id = tone.id();
        for (k, &t) in plan.times_us.iter().enumerate() {
            w.serialize(WaveRow { time_us: t, tone: &id, position_um: tone.positions_um[k], amplitude: tone.amplitudes[k] })?;
        }
    }
    w.flush().map_err(|e| TransportError::Csv(e.to_string()))?;
    Ok(())
}
