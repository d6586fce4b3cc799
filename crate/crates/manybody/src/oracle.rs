use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{purity_overlap, renyi_entropy, EntropyResult};
use crate::error::ManybodyError;
use crate::hamiltonian::{Hamiltonian, HamiltonianParams};
use crate::interfere::{interfere_and_sample, TwinShot};
use crate::mapping::{coherent_map, project_loss, MappedState, MappingErrorModel, MappingMap};
use crate::state::ThreeLevelState;

fn stream(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

/// Quench to `t` and map one copy, with its own Doppler shifts held fixed
/// through the dynamics, the gap and the mapping pulse.
pub fn run_copy(
    initial: &ThreeLevelState,
    params: &HamiltonianParams,
    t: f64,
    errors: &MappingErrorModel,
    rng: &mut ChaCha8Rng,
) -> Result<MappedState, ManybodyError> {
    let n = initial.n;
    let det = errors.sample_detunings(n, rng);
    let mut p = params.clone();
    p.n_atoms = n;
    if p.site_detuning.is_empty() {
        p.site_detuning = vec![0.0; n];
    }
    if p.site_detuning.len() != n {
        return Err(ManybodyError::LengthMismatch { expected: n, got: p.site_detuning.len() });
    }
    let map_det: Vec<f64> = det.clone();
    for (s, d) in p.site_detuning.iter_mut().zip(&det) {
        *s += d;
    }
    let evolved = Hamiltonian::new(&p)?.evolve(initial, t)?;
    coherent_map(&evolved, params, errors, &map_det, rng)
}

/// Expected twin-copy purity of A for one pair of mapped copies when every
/// atom is depolarized with probability `depol`. Pairs with a lost atom drop out of A.
pub fn expected_pair_purity(
    a: &MappedState,
    b: &MappedState,
    mask: &[bool],
    depol: f64,
) -> Result<f64, ManybodyError> {
    let n = a.state.n;
    if mask.len() != n || b.state.n != n {
        return Err(ManybodyError::LengthMismatch { expected: n, got: mask.len() });
    }
    let sites: Vec<usize> = (0..n).filter(|&i| mask[i] && !a.lost[i] && !b.lost[i]).collect();
    let q = (1.0 - depol) * (1.0 - depol);
    if q == 1.0 {
        let m: Vec<bool> = (0..n).map(|i| sites.contains(&i)).collect();
        return purity_overlap(&a.state, &b.state, &m);
    }
    // each site is untouched with weight q, otherwise it contributes 1/2
    let k = sites.len();
    let mut total = 0.0;
    for subset in 0u32..(1 << k) {
        let mut m = vec![false; n];
        let mut kept = 0;
        for (bit, &s) in sites.iter().enumerate() {
            if subset >> bit & 1 == 1 {
                m[s] = true;
                kept += 1;
            }
        }
        let w = q.powi(kept) * (0.5 * (1.0 - q)).powi((k - kept as usize) as i32);
        if w > 0.0 {
            total += w * purity_overlap(&a.state, &b.state, &m)?;
        }
    }
    Ok(total)
}

/// Twin-copy purity of A after a quench of duration `t`, averaged over
/// `trajectories` noise realizations (distinct pairs i ≠ j).
///
/// Equals the exact Tr ρ_A² when `errors` is zeroed.
pub fn purity_oracle(
    initial: &ThreeLevelState,
    params: &HamiltonianParams,
    t: f64,
    mask: &[bool],
    errors: &MappingErrorModel,
    trajectories: usize,
    seed: u64,
) -> Result<f64, ManybodyError> {
    errors.validate()?;
    if mask.len() != initial.n {
        return Err(ManybodyError::LengthMismatch { expected: initial.n, got: mask.len() });
    }
    if errors.is_zeroed() {
        let s = Hamiltonian::new(params)?.evolve(initial, t)?;
        return purity_overlap(&s, &s, mask);
    }
    let m = trajectories.max(2);
    let copies: Vec<MappedState> = (0..m as u64)
        .into_par_iter()
        .map(|k| run_copy(initial, params, t, errors, &mut stream(seed, k)))
        .collect::<Result<_, _>>()?;
    let depol = errors.depolarizing(t);
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let sum = pairs
        .par_iter()
        .map(|&(i, j)| expected_pair_purity(&copies[i], &copies[j], mask, depol))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .sum::<f64>();
    Ok(sum / pairs.len() as f64)
}

/// Simulated twin-copy readouts after a quench of duration `t`. Shots are
/// spread over `trajectories` independent copy pairs, each on its own RNG stream.
pub fn sample_twin_shots(
    initial: &ThreeLevelState,
    params: &HamiltonianParams,
    t: f64,
    errors: &MappingErrorModel,
    shots: usize,
    trajectories: usize,
    seed: u64,
) -> Result<Vec<TwinShot>, ManybodyError> {
    errors.validate()?;
    let traj = trajectories.clamp(1, shots.max(1));
    let depol = errors.depolarizing(t);
    let chunks: Vec<Vec<TwinShot>> = (0..traj as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream(seed, k);
            let c1 = run_copy(initial, params, t, errors, &mut rng)?;
            let c2 = run_copy(initial, params, t, errors, &mut rng)?;
            let count = shots / traj + usize::from((k as usize) < shots % traj);
            interfere_and_sample(&c1, &c2, count, depol, &mut rng)
        })
        .collect::<Result<_, _>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// One point of the hyperfine purity benchmark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkPoint {
    pub theta: f64,
    pub p00: f64,
    pub purity: f64,
    pub purity_stderr: f64,
}

/// Both copies prepared as X(θ)|0> on every site, then read out directly.
/// Ideally P00 = 0 and the purity is 1 for every θ.
pub fn raman_benchmark(
    theta: f64,
    pairs: usize,
    shots: usize,
    errors: &MappingErrorModel,
    seed: u64,
) -> Result<(BenchmarkPoint, EntropyResult), ManybodyError> {
    errors.validate()?;
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let site = [Complex64::new(c, 0.0), Complex64::new(0.0, -s), Complex64::new(0.0, 0.0)];
    let copy = MappedState::unmapped(ThreeLevelState::product(&vec![site; pairs]));
    let mut rng = stream(seed, 0);
    let out = interfere_and_sample(&copy, &copy, shots, errors.depolarizing(0.0), &mut rng)?;
    let hits = out.iter().map(|s| (0..pairs).filter(|&i| s.singlet(i)).count()).sum::<usize>();
    let p00 = hits as f64 / (shots * pairs).max(1) as f64;
    let res = renyi_entropy(&out, &vec![true; pairs])?;
    let purity = 1.0 - 2.0 * p00;
    let purity_stderr = 2.0 * (p00 * (1.0 - p00) / (shots * pairs).max(1) as f64).sqrt();
    Ok((BenchmarkPoint { theta, p00, purity, purity_stderr }, res))
}

/// Twin-copy readouts at every time in `times` (non-decreasing, s). Each
/// trajectory evolves its two copies once through the whole grid, with fixed
/// Doppler shifts, and is mapped afresh at every time point. The initial state
/// must have no |0> population. `quench_cutoff`
/// shortens the evolution before each mapping (plot alignment), clamped at 0.
#[allow(clippy::too_many_arguments)]
pub fn sample_twin_series(
    initial: &ThreeLevelState,
    params: &HamiltonianParams,
    times: &[f64],
    quench_cutoff: f64,
    errors: &MappingErrorModel,
    shots_per_point: usize,
    trajectories: usize,
    seed: u64,
) -> Result<Vec<Vec<TwinShot>>, ManybodyError> {
    errors.validate()?;
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(ManybodyError::InvalidParams("times must be non-decreasing".into()));
    }
    let n = initial.n;
    let traj = trajectories.clamp(1, shots_per_point.max(1));
    let per_traj: Vec<Vec<Vec<TwinShot>>> = (0..traj as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream(seed, k);
            let count = shots_per_point / traj + usize::from((k as usize) < shots_per_point % traj);
            let mut copies = Vec::with_capacity(2);
            for _ in 0..2 {
                let det = errors.sample_detunings(n, &mut rng);
                let mut p = params.clone();
                p.n_atoms = n;
                let base = if p.site_detuning.is_empty() { vec![0.0; n] } else { p.site_detuning.clone() };
                p.site_detuning = base.iter().zip(&det).map(|(a, b)| a + b).collect();
                let map = MappingMap::new(n, params, errors, &det)?;
                copies.push((Hamiltonian::new(&p)?, map, initial.clone(), 0.0f64));
            }
            let mut out = Vec::with_capacity(times.len());
            for &t in times {
                let te = (t - quench_cutoff).max(0.0);
                let mut mapped = Vec::with_capacity(2);
                for (h, map, state, t0) in copies.iter_mut() {
                    if te > *t0 {
                        *state = h.evolve(state, te - *t0)?;
                        *t0 = te;
                    }
                    mapped.push(project_loss(map.apply(state)?, &mut rng));
                }
                out.push(interfere_and_sample(&mapped[0], &mapped[1], count, errors.depolarizing(t), &mut rng)?);
            }
            Ok(out)
        })
        .collect::<Result<_, ManybodyError>>()?;
    let mut merged: Vec<Vec<TwinShot>> = vec![Vec::new(); times.len()];
    for chunk in per_traj {
        for (slot, shots) in merged.iter_mut().zip(chunk) {
            slot.extend(shots);
        }
    }
    Ok(merged)
}
