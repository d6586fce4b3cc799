use atomarray_codes::{builtin_code, compile_code_circuit, evaluate_code, CodeReport, Setting, SettingShots};
use atomarray_manybody::{
    classical_offset, detrended_correlation, evolve_series, correlation, interval_mask, pxp_evolve, renyi2,
    renyi_entropy, revival_time, sample_twin_series, step_halving_error, DetuningPreset, HamiltonianParams,
    MappingErrorModel, PxpState, ThreeLevelState,
};
use atomarray_model::stats::linear_fit;
use atomarray_stabilizer::{sample_shots, NoiseModel, RngSpec};
use atomarray_transport::{fidelity_knee, heating_delta_n, pair_retention_vs_speed, retention, MoveSegment, TrapParams};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::config::{Experiment, LoadedNoise, ResolvedConfig};
use crate::error::{ctx, CliError};
use crate::report::Report;

/// One output file, held in memory until the run succeeds.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: Report,
    pub artifacts: Vec<Artifact>,
}

pub const REPORT_FILE: &str = "report.json";

/// Largest step-halving discrepancy tolerated by the startup self-test.
pub const STEP_HALVING_TOLERANCE: f64 = 1e-6;

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(ctx("writing csv"))?;
    }
    w.into_inner().map_err(ctx("writing csv"))
}

fn artifact(name: &str, bytes: Vec<u8>) -> Artifact {
    Artifact { name: name.to_string(), bytes }
}

/// Runs the pipeline of `r.experiment` without touching the filesystem.
pub fn execute(r: &ResolvedConfig) -> Result<RunOutput, CliError> {
    let mut report = Report::new(r.experiment, &r.version, r.seed, r.shots, &r.noise_label);
    let mut artifacts = Vec::new();
    match (r.experiment, &r.noise) {
        (e, LoadedNoise::Circuit(noise)) => {
            let code = e.code().expect("code experiment");
            let shots = r.shots.expect("code experiments have a shot count");
            let cr = sample_code(code, noise, shots, r.seed)?;
            code_metrics(&cr, &mut report);
            let (stabs, logicals) = code_tables(&cr);
            artifacts.push(artifact("stabilizers.csv", csv_bytes(&stabs)?));
            artifacts.push(artifact("logicals.csv", csv_bytes(&logicals)?));
        }
        (Experiment::BellTransportFig1d, _) => {
            let s = transport_summary(&TrapParams::bell_transport());
            report.exact("delta_n_fig1d", s.delta_n_fig1d);
            if let Some(k) = s.knee {
                report.exact("knee_speed_um_per_us", k);
            }
            if let Some(k) = s.knee_1pct {
                report.exact("knee_speed_1pct_um_per_us", k);
            }
            report.exact("slope_distance", s.slope_distance);
            report.exact("slope_time", s.slope_time);
            report.exact("retention_sq_at_0p55", s.retention_sq_at(0.55));
            artifacts.push(artifact("transport_curve.csv", csv_bytes(&s.curve)?));
        }
        (Experiment::EntropyFig4, LoadedNoise::Mapping(errs)) => {
            let shots = r.shots.expect("entropy experiments have a shot count");
            let times = time_grid(1.5, 0.1)?;
            let mut exact_rows = Vec::new();
            for (k, initial) in [InitialState::Ground, InitialState::Z2].into_iter().enumerate() {
                let sweep = EntropySweep {
                    initial,
                    atoms: 8,
                    preset: DetuningPreset::Fixed,
                    times_us: times.clone(),
                    shots,
                    trajectories: if errs.is_zeroed() { 1 } else { 40 },
                    seed: r.seed ^ ((k as u64) << 32),
                    cutoff_ns: 0.0,
                };
                let out = entropy_sweep(&sweep, errs)?;
                report.exact(format!("step_halving_error.{}", initial.name()), out.step_halving_error);
                let exact = exact_entropy(&sweep)?;
                for row in out.rows.iter().filter(|x| x.subsystem == sweep.atoms / 2) {
                    let key = format!("s2_half.{}.t{:.2}", initial.name(), row.t_us);
                    match row.s2_raw {
                        Some(s) => report.put(key, s, row.stderr),
                        None => report.undefined.push(key),
                    }
                }
                for row in exact.iter().filter(|x| x.subsystem == sweep.atoms / 2) {
                    report.exact(format!("s2_half_exact.{}.t{:.2}", initial.name(), row.t_us), row.s2);
                }
                artifacts.push(artifact(&format!("entropy_{}.csv", initial.name()), csv_bytes(&out.rows)?));
                exact_rows.extend(exact);
            }
            artifacts.push(artifact("entropy_exact.csv", csv_bytes(&exact_rows)?));
        }
        (Experiment::ScarEd9, _) => {
            let s = scar_analysis(8, DetuningPreset::Fixed, 2.0, 0.01)?;
            if let Some(t) = s.period_us {
                report.exact("scar_period_us", t);
            }
            report.exact("detrended_correlation", s.detrended_correlation);
            report.exact("raw_correlation", s.raw_correlation);
            report.exact("z2_below_ground_fraction", s.below_fraction);
            report.exact("min_ground_minus_z2", s.min_gap);
            report.exact("step_halving_error", s.step_halving_error);
            artifacts.push(artifact("scar_series.csv", csv_bytes(&s.rows())?));
            let p = pxp_analysis(16, 21.0, 0.05)?;
            if let Some(t) = p.revival {
                report.exact("pxp_revival_omega_t", t);
                report.exact("pxp_revival_fidelity", p.revival_fidelity);
            }
            report.exact("pxp_sites", p.sites as f64);
            report.exact("pxp_alternation", if p.alternates { 1.0 } else { 0.0 });
            artifacts.push(artifact("pxp_series.csv", csv_bytes(&p.rows)?));
        }
        (e, _) => return Err(CliError::Validation(format!("{e} got a noise model of the wrong kind"))),
    }
    artifacts.insert(0, artifact(REPORT_FILE, report.to_json()));
    Ok(RunOutput { report, artifacts })
}

// ---------------------------------------------------------------- codes

/// The two readout settings use unrelated seeds so their shot streams differ.
pub fn setting_seed(seed: u64, s: Setting) -> u64 {
    match s {
        Setting::Xside => seed,
        Setting::Zside => seed ^ 0x9e37_79b9_7f4a_7c15,
    }
}

/// Samples both readout settings of a built-in code and evaluates them.
pub fn sample_code(name: &str, noise: &NoiseModel, shots: usize, seed: u64) -> Result<CodeReport, CliError> {
    let (code, layout) = builtin_code(name).map_err(ctx("loading code"))?;
    let mut per = Vec::with_capacity(2);
    for s in Setting::BOTH {
        let c = compile_code_circuit(&code, &layout, s).map_err(ctx("compiling circuit"))?;
        per.push(sample_shots(&c, noise, shots, RngSpec::new(setting_seed(seed, s))).map_err(ctx("sampling shots"))?);
    }
    evaluate_code(&code, &SettingShots { xside: Some(&per[0]), zside: Some(&per[1]) }).map_err(ctx("evaluating code"))
}

fn setting_name(s: Setting) -> &'static str {
    match s {
        Setting::Xside => "xside",
        Setting::Zside => "zside",
    }
}

fn binomial_stderr(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n.max(1) as f64).sqrt()
}

fn code_metrics(cr: &CodeReport, r: &mut Report) {
    let n = cr.settings.first().map_or(0, |s| s.shots);
    r.put("pass_fraction", cr.pass_fraction, Some(binomial_stderr(cr.pass_fraction, n)));
    for s in &cr.settings {
        r.put(format!("pass_fraction.{}", setting_name(s.setting)), s.pass_fraction, Some(binomial_stderr(s.pass_fraction, s.shots)));
    }
    for s in &cr.stabilizers {
        r.put(format!("stabilizer.{}", s.name), s.value.mean, Some(s.value.stderr));
    }
    for l in &cr.logicals {
        r.put(format!("logical.{}.raw", l.name), l.raw.mean, Some(l.raw.stderr));
        r.put(format!("logical.{}.detected", l.name), l.detected.mean, Some(l.detected.stderr));
        if let Some(c) = &l.corrected {
            r.put(format!("logical.{}.corrected", l.name), c.mean, Some(c.stderr));
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilizerRow {
    pub name: String,
    pub setting: &'static str,
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LogicalRow {
    pub name: String,
    pub setting: &'static str,
    pub distance: usize,
    pub raw: f64,
    pub raw_stderr: f64,
    pub detected: f64,
    pub detected_stderr: f64,
    pub corrected: Option<f64>,
    pub corrected_stderr: Option<f64>,
}

fn code_tables(cr: &CodeReport) -> (Vec<StabilizerRow>, Vec<LogicalRow>) {
    let stabs = cr
        .stabilizers
        .iter()
        .map(|s| StabilizerRow {
            name: s.name.clone(),
            setting: setting_name(s.setting),
            mean: s.value.mean,
            stderr: s.value.stderr,
        })
        .collect();
    let logicals = cr
        .logicals
        .iter()
        .map(|l| LogicalRow {
            name: l.name.clone(),
            setting: setting_name(l.setting),
            distance: l.distance,
            raw: l.raw.mean,
            raw_stderr: l.raw.stderr,
            detected: l.detected.mean,
            detected_stderr: l.detected.stderr,
            corrected: l.corrected.map(|c| c.mean),
            corrected_stderr: l.corrected.map(|c| c.stderr),
        })
        .collect();
    (stabs, logicals)
}

// ---------------------------------------------------------------- transport

/// Separation distance of the Bell-pair move.
pub const BELL_MOVE_UM: f64 = 55.0;
/// Retention² drop below the plateau that marks the knee.
pub const KNEE_DROP: f64 = 1e-3;

#[derive(Debug, Clone, Serialize)]
pub struct CurveRow {
    pub speed_um_per_us: f64,
    pub move_time_us: f64,
    pub delta_n: f64,
    pub retention: f64,
    pub retention_sq: f64,
}

#[derive(Debug, Clone)]
pub struct TransportSummary {
    pub delta_n_fig1d: f64,
    pub knee: Option<f64>,
    pub knee_1pct: Option<f64>,
    /// Log-log slope of ΔN against distance at fixed time (ideally 2).
    pub slope_distance: f64,
    /// Log-log slope of ΔN against move time at fixed distance (ideally −4).
    pub slope_time: f64,
    pub curve: Vec<CurveRow>,
}

impl TransportSummary {
    pub fn retention_sq_at(&self, v: f64) -> f64 {
        self.curve.iter().min_by(|a, b| (a.speed_um_per_us - v).abs().total_cmp(&(b.speed_um_per_us - v).abs())).map_or(f64::NAN, |r| r.retention_sq)
    }
}

fn delta_n(d: f64, t: f64, traps: &TrapParams<f64>) -> f64 {
    heating_delta_n(&MoveSegment::new(0, d, 0.0, t), traps).expect("positive duration")
}

/// ΔN of the 55 μm Bell move at T = 200 μs, retention² against separation speed on 0.05..=1.0 μm/μs in
/// 0.005 steps, and the two heating scaling slopes.
pub fn transport_summary(traps: &TrapParams<f64>) -> TransportSummary {
    let speeds: Vec<f64> = (10..=200).map(|k| k as f64 * 0.005).collect();
    let rs = pair_retention_vs_speed(BELL_MOVE_UM, &speeds, traps);
    let curve: Vec<CurveRow> = rs
        .iter()
        .map(|&(v, r2)| {
            let t = 2.0 * BELL_MOVE_UM / v;
            let dn = delta_n(BELL_MOVE_UM, t, traps);
            CurveRow { speed_um_per_us: v, move_time_us: t, delta_n: dn, retention: retention(dn, traps), retention_sq: r2 }
        })
        .collect();
    let ds: Vec<f64> = (1..=10).map(|k| 10.0 * k as f64).collect();
    let ts: Vec<f64> = (1..=10).map(|k| 50.0 * k as f64).collect();
    let ln = |xs: &[f64]| xs.iter().map(|x| x.ln()).collect::<Vec<_>>();
    let slope_distance = linear_fit(&ln(&ds), &ln(&ds.iter().map(|&d| delta_n(d, 200.0, traps)).collect::<Vec<_>>())).slope;
    let slope_time = linear_fit(&ln(&ts), &ln(&ts.iter().map(|&t| delta_n(55.0, t, traps)).collect::<Vec<_>>())).slope;
    TransportSummary {
        delta_n_fig1d: delta_n(BELL_MOVE_UM, 200.0, traps),
        knee: fidelity_knee(&rs, KNEE_DROP),
        knee_1pct: fidelity_knee(&rs, 1e-2),
        slope_distance,
        slope_time,
        curve,
    }
}

// ---------------------------------------------------------------- entropy

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    Ground,
    Z2,
}

impl InitialState {
    pub fn name(self) -> &'static str {
        match self {
            InitialState::Ground => "ground",
            InitialState::Z2 => "z2",
        }
    }

    pub fn state(self, n: usize) -> ThreeLevelState {
        match self {
            InitialState::Ground => ThreeLevelState::all_ground(n),
            InitialState::Z2 => ThreeLevelState::z2(n),
        }
    }
}

/// 0, dt, 2dt, ... up to `tmax` (μs).
pub fn time_grid(tmax_us: f64, dt_us: f64) -> Result<Vec<f64>, CliError> {
    if !(dt_us > 0.0) || !(tmax_us >= 0.0) {
        return Err(CliError::Validation("time grid needs dt > 0 and tmax ≥ 0".into()));
    }
    let steps = (tmax_us / dt_us + 1e-9).floor() as usize;
    if steps > 100_000 {
        return Err(CliError::Validation(format!("{steps} time points is too many")));
    }
    // round away accumulated float noise so CSV rows read 0.15, not 0.15000000000000002
    Ok((0..=steps).map(|k| ((k as f64 * dt_us) * 1e9).round() / 1e9).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropySweep {
    pub initial: InitialState,
    pub atoms: usize,
    pub preset: DetuningPreset,
    pub times_us: Vec<f64>,
    /// Twin-copy shots per time point.
    pub shots: usize,
    pub trajectories: usize,
    pub seed: u64,
    /// Evolution cut off before the mapping, plot alignment only.
    pub cutoff_ns: f64,
}

impl EntropySweep {
    pub fn params(&self) -> HamiltonianParams {
        HamiltonianParams::scar_quench(self.atoms, self.preset)
    }
}

/// One CSV row: left block of `subsystem` sites at time `t_us`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyRow {
    pub t_us: f64,
    pub subsystem: usize,
    pub purity: f64,
    pub s2_raw: Option<f64>,
    pub s2_offset_subtracted: Option<f64>,
    pub stderr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyOutput {
    pub rows: Vec<EntropyRow>,
    pub step_halving_error: f64,
}

/// Sampled twin-copy entropies of every left block after a quench.
///
/// The classical offset is taken from the global S2 at the first time point
/// when that point is t = 0.
pub fn entropy_sweep(sweep: &EntropySweep, errs: &MappingErrorModel) -> Result<EntropyOutput, CliError> {
    if sweep.shots == 0 || sweep.trajectories == 0 {
        return Err(CliError::Validation("shots and trajectories must be positive".into()));
    }
    if !(sweep.cutoff_ns >= 0.0) {
        return Err(CliError::Validation("cutoff must be non-negative".into()));
    }
    let n = sweep.atoms;
    let params = sweep.params();
    params.validate().map_err(|e| CliError::Validation(e.to_string()))?;
    let initial = sweep.initial.state(n);
    let probe = sweep.times_us.iter().copied().find(|&t| t > 0.0).unwrap_or(0.05) * 1e-6;
    let step_err = step_halving_error(&initial, &params, probe).map_err(ctx("step-halving self-test"))?;
    if step_err > STEP_HALVING_TOLERANCE {
        return Err(CliError::Runtime {
            context: "step-halving self-test".into(),
            message: format!("discrepancy {step_err:e} above {STEP_HALVING_TOLERANCE:e}"),
        });
    }
    let times: Vec<f64> = sweep.times_us.iter().map(|t| t * 1e-6).collect();
    let shots = sample_twin_series(
        &initial,
        &params,
        &times,
        sweep.cutoff_ns * 1e-9,
        errs,
        sweep.shots,
        sweep.trajectories,
        sweep.seed,
    )
    .map_err(ctx("sampling twin copies"))?;

    let mut rows = Vec::with_capacity(times.len() * n);
    let mut global_t0 = None;
    for (i, point) in shots.iter().enumerate() {
        for k in 1..=n {
            let res = renyi_entropy(point, &interval_mask(n, 0, k)).map_err(ctx("estimating entropy"))?;
            if i == 0 && k == n && sweep.times_us[0] == 0.0 {
                global_t0 = res.s2;
            }
            let offset = global_t0.map(|g| classical_offset(g, k, n));
            let res = match offset {
                Some(o) => res.with_classical_offset(o),
                None => res,
            };
            rows.push(EntropyRow {
                t_us: sweep.times_us[i],
                subsystem: k,
                purity: res.purity,
                s2_raw: res.s2,
                s2_offset_subtracted: res.s2_corrected(),
                stderr: res.s2_stderr,
            });
        }
    }
    Ok(EntropyOutput { rows, step_halving_error: step_err })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactRow {
    pub initial: InitialState,
    pub t_us: f64,
    pub subsystem: usize,
    pub s2: f64,
}

/// Noiseless S2 of every left block along the sweep's time grid.
pub fn exact_entropy(sweep: &EntropySweep) -> Result<Vec<ExactRow>, CliError> {
    let n = sweep.atoms;
    let times: Vec<f64> = sweep.times_us.iter().map(|t| t * 1e-6).collect();
    let states = evolve_series(&sweep.initial.state(n), &sweep.params(), &times).map_err(ctx("exact evolution"))?;
    let mut rows = Vec::with_capacity(states.len() * n);
    for (s, &t) in states.iter().zip(&sweep.times_us) {
        for k in 1..=n {
            let s2 = renyi2(s, &interval_mask(n, 0, k)).map_err(ctx("exact entropy"))?;
            rows.push(ExactRow { initial: sweep.initial, t_us: t, subsystem: k, s2 });
        }
    }
    Ok(rows)
}

// ---------------------------------------------------------------- scars

/// Window of the Z2-versus-ground comparison, μs.
pub const SCAR_COMPARE_WINDOW: (f64, f64) = (0.2, 1.5);

#[derive(Debug, Clone)]
pub struct ScarAnalysis {
    pub times_us: Vec<f64>,
    /// Single-site S2 of the two middle atoms.
    pub s2_left_mid: Vec<f64>,
    pub s2_right_mid: Vec<f64>,
    pub s2_half_z2: Vec<f64>,
    pub s2_half_ground: Vec<f64>,
    /// Mean Rydberg density of the even sites, starting from |Z2>.
    pub rydberg_even: Vec<f64>,
    /// First revival of `rydberg_even`.
    pub period_us: Option<f64>,
    /// Detrended correlation of the middle-site entropies over [0, 2T].
    pub detrended_correlation: f64,
    pub raw_correlation: f64,
    /// Fraction of grid points in the compare window with S2_half(Z2) < S2_half(ground).
    pub below_fraction: f64,
    /// min over the compare window of S2_half(ground) − S2_half(Z2).
    pub min_gap: f64,
    pub step_halving_error: f64,
}

#[derive(Serialize)]
struct ScarRow {
    t_us: f64,
    s2_left_mid: f64,
    s2_right_mid: f64,
    s2_half_z2: f64,
    s2_half_ground: f64,
    rydberg_even: f64,
}

impl ScarAnalysis {
    fn rows(&self) -> Vec<ScarRow> {
        (0..self.times_us.len())
            .map(|i| ScarRow {
                t_us: self.times_us[i],
                s2_left_mid: self.s2_left_mid[i],
                s2_right_mid: self.s2_right_mid[i],
                s2_half_z2: self.s2_half_z2[i],
                s2_half_ground: self.s2_half_ground[i],
                rydberg_even: self.rydberg_even[i],
            })
            .collect()
    }
}

/// Exact noiseless quench of an `n`-atom chain from |Z2> and from the ground state.
pub fn scar_analysis(n: usize, preset: DetuningPreset, tmax_us: f64, dt_us: f64) -> Result<ScarAnalysis, CliError> {
    if n < 4 {
        return Err(CliError::Validation("scar analysis needs at least 4 atoms".into()));
    }
    let params = HamiltonianParams::scar_quench(n, preset);
    let times_us = time_grid(tmax_us, dt_us)?;
    let times: Vec<f64> = times_us.iter().map(|t| t * 1e-6).collect();
    let z2 = ThreeLevelState::z2(n);
    let step_halving_error = step_halving_error(&z2, &params, dt_us * 1e-6).map_err(ctx("step-halving self-test"))?;
    if step_halving_error > STEP_HALVING_TOLERANCE {
        return Err(CliError::Runtime {
            context: "step-halving self-test".into(),
            message: format!("discrepancy {step_halving_error:e}"),
        });
    }
    let zs = evolve_series(&z2, &params, &times).map_err(ctx("quench from Z2"))?;
    let gs = evolve_series(&ThreeLevelState::all_ground(n), &params, &times).map_err(ctx("quench from ground"))?;
    let (a, b) = (n / 2 - 1, n / 2);
    let half = interval_mask(n, 0, n / 2);
    let one = |s: &ThreeLevelState, i: usize| renyi2(s, &interval_mask(n, i, i + 1));
    let mut out = ScarAnalysis {
        times_us: times_us.clone(),
        s2_left_mid: vec![],
        s2_right_mid: vec![],
        s2_half_z2: vec![],
        s2_half_ground: vec![],
        rydberg_even: vec![],
        period_us: None,
        detrended_correlation: f64::NAN,
        raw_correlation: f64::NAN,
        below_fraction: f64::NAN,
        min_gap: f64::NAN,
        step_halving_error,
    };
    for (z, g) in zs.iter().zip(&gs) {
        out.s2_left_mid.push(one(z, a).map_err(ctx("entropy"))?);
        out.s2_right_mid.push(one(z, b).map_err(ctx("entropy"))?);
        out.s2_half_z2.push(renyi2(z, &half).map_err(ctx("entropy"))?);
        out.s2_half_ground.push(renyi2(g, &half).map_err(ctx("entropy"))?);
        let d = z.rydberg_density();
        let even: Vec<f64> = d.iter().step_by(2).copied().collect();
        out.rydberg_even.push(even.iter().sum::<f64>() / even.len() as f64);
    }
    out.period_us = revival_time(&times_us, &out.rydberg_even);
    let end = out.period_us.map_or(times_us.len(), |p| times_us.iter().take_while(|&&t| t <= 2.0 * p + 1e-12).count());
    out.detrended_correlation =
        detrended_correlation(&times_us[..end], &out.s2_left_mid[..end], &out.s2_right_mid[..end]);
    out.raw_correlation = correlation(&out.s2_left_mid[..end], &out.s2_right_mid[..end]);
    let (lo, hi) = SCAR_COMPARE_WINDOW;
    let window: Vec<usize> = (0..times_us.len()).filter(|&i| times_us[i] >= lo - 1e-12 && times_us[i] <= hi + 1e-12).collect();
    if !window.is_empty() {
        let gaps: Vec<f64> = window.iter().map(|&i| out.s2_half_ground[i] - out.s2_half_z2[i]).collect();
        out.below_fraction = gaps.iter().filter(|&&g| g > 0.0).count() as f64 / gaps.len() as f64;
        out.min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct PxpRow {
    pub omega_t: f64,
    pub fidelity: f64,
    pub s2_even: f64,
    pub s2_odd: f64,
}

#[derive(Debug, Clone)]
pub struct PxpAnalysis {
    pub sites: usize,
    pub rows: Vec<PxpRow>,
    /// First |Z2> revival in units of 1/Ω.
    pub revival: Option<f64>,
    pub revival_fidelity: f64,
    /// Odd site more entangled at T/2 and 3T/2, even site at T and 2T.
    pub alternates: bool,
}

/// |Z2> on a PXP ring of `sites` atoms with Ω = 1, sampled every `dt` up to `tmax`.
pub fn pxp_analysis(sites: usize, tmax: f64, dt: f64) -> Result<PxpAnalysis, CliError> {
    let z = PxpState::z2(sites).map_err(|e| CliError::Validation(e.to_string()))?;
    let times = time_grid(tmax, dt)?;
    let mut rows = Vec::with_capacity(times.len());
    let (mut cur, mut last) = (z.clone(), 0.0);
    for &t in &times {
        cur = pxp_evolve(&cur, 1.0, t - last).map_err(ctx("pxp evolution"))?;
        last = t;
        rows.push(PxpRow {
            omega_t: t,
            fidelity: cur.overlap(&z),
            s2_even: cur.single_site_renyi2(0),
            s2_odd: cur.single_site_renyi2(1),
        });
    }
    let fid: Vec<f64> = rows.iter().map(|r| r.fidelity).collect();
    let revival = revival_time(&times, &fid);
    let at = |t: f64| rows.iter().find(|r| r.omega_t >= t - 1e-12);
    let (mut revival_fidelity, mut alternates) = (f64::NAN, false);
    if let Some(tr) = revival {
        revival_fidelity = at(tr).map_or(f64::NAN, |r| r.fidelity);
        alternates = (1..=4).all(|h| match at(h as f64 * tr / 2.0) {
            Some(r) if h % 2 == 1 => r.s2_odd > r.s2_even,
            Some(r) => r.s2_even > r.s2_odd,
            None => false,
        });
    }
    Ok(PxpAnalysis { sites, rows, revival, revival_fidelity, alternates })
}
