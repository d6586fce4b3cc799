use num_complex::Complex64;

use crate::error::ManybodyError;
use crate::hamiltonian::{Hamiltonian, HamiltonianParams};
use crate::state::ThreeLevelState;

/// Largest ||H||·dt per Taylor step.
const STEP_NORM: f64 = 1.0;
const MAX_TERMS: usize = 60;

/// exp(−iHt)|ψ> for the chain described by `params` (t in seconds).
pub fn evolve(state: &ThreeLevelState, params: &HamiltonianParams, t: f64) -> Result<ThreeLevelState, ManybodyError> {
    Hamiltonian::new(params)?.evolve(state, t)
}

impl Hamiltonian {
    /// Truncated Taylor series in steps with ||H − c||·dt ≤ 1, c the centre of
    /// the diagonal; the series runs until a term drops below 1e-17 relative.
    pub fn evolve(&self, state: &ThreeLevelState, t: f64) -> Result<ThreeLevelState, ManybodyError> {
        self.evolve_with_step(state, t, STEP_NORM)
    }

    /// As [`Hamiltonian::evolve`] with ||H − c||·dt ≤ `step_norm`.
    pub fn evolve_with_step(&self, state: &ThreeLevelState, t: f64, step_norm: f64) -> Result<ThreeLevelState, ManybodyError> {
        if !(step_norm > 0.0) {
            return Err(ManybodyError::InvalidParams("step norm must be positive".into()));
        }
        if state.n != self.n {
            return Err(ManybodyError::LengthMismatch { expected: self.n, got: state.n });
        }
        if !(t >= 0.0) {
            return Err(ManybodyError::NegativeTime(t));
        }
        let mut v = state.amps.clone();
        if t == 0.0 {
            return Ok(state.clone());
        }
        if self.is_diagonal() {
            for (a, e) in v.iter_mut().zip(&self.diag) {
                *a *= Complex64::from_polar(1.0, -e * t);
            }
            return Ok(ThreeLevelState { n: self.n, amps: v });
        }
        let (shift, bound) = self.spectral_bounds();
        let steps = ((bound * t) / step_norm).ceil().max(1.0) as usize;
        let dt = t / steps as f64;
        let d = v.len();
        // empty sectors stay empty, so only the occupied ones are propagated
        let active: Vec<usize> = self.active_indices(&v).unwrap_or_else(|| (0..d).collect());
        let mut term = vec![Complex64::new(0.0, 0.0); d];
        let mut next = vec![Complex64::new(0.0, 0.0); d];
        let scale0: f64 = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for _ in 0..steps {
            term.copy_from_slice(&v);
            for k in 1..=MAX_TERMS {
                self.apply_shifted_on(&active, &term, &mut next, shift);
                let f = Complex64::new(0.0, -dt / k as f64);
                let mut size = 0.0;
                for &i in &active {
                    term[i] = next[i] * f;
                    size += term[i].norm_sqr();
                    v[i] += term[i];
                }
                if size.sqrt() < 1e-17 * scale0.max(1e-300) {
                    break;
                }
            }
        }
        let phase = Complex64::from_polar(1.0, -shift * t);
        v.iter_mut().for_each(|a| *a *= phase);
        Ok(ThreeLevelState { n: self.n, amps: v })
    }
}

/// States at every time in `times` (non-decreasing, seconds), evolving incrementally.
pub fn evolve_series(
    state: &ThreeLevelState,
    params: &HamiltonianParams,
    times: &[f64],
) -> Result<Vec<ThreeLevelState>, ManybodyError> {
    let h = Hamiltonian::new(params)?;
    let mut out = Vec::with_capacity(times.len());
    let (mut cur, mut t0) = (state.clone(), 0.0);
    for &t in times {
        if t < t0 {
            return Err(ManybodyError::NegativeTime(t - t0));
        }
        cur = h.evolve(&cur, t - t0)?;
        t0 = t;
        out.push(cur.clone());
    }
    Ok(out)
}

/// Largest amplitude difference between the default stepping and steps of
/// half the size, relative to the state norm.
pub fn step_halving_error(state: &ThreeLevelState, params: &HamiltonianParams, t: f64) -> Result<f64, ManybodyError> {
    let h = Hamiltonian::new(params)?;
    let a = h.evolve_with_step(state, t, STEP_NORM)?;
    let b = h.evolve_with_step(state, t, STEP_NORM / 2.0)?;
    let diff: f64 = a.amps.iter().zip(&b.amps).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    Ok(diff / state.norm())
}
