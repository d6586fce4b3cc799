use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::ManybodyError;
use crate::hamiltonian::{Hamiltonian, HamiltonianParams};
use crate::state::{digit, Level, ThreeLevelState};

/// Error sources of the Rydberg-to-hyperfine mapping and of the readout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappingErrorModel {
    /// Standard deviation of the Doppler detuning, Hz.
    pub doppler_sigma_hz: f64,
    /// Dead time between the Raman swap and the mapping pulse, s.
    pub gap_time: f64,
    /// Rabi frequency of the mapping pulse relative to the quench drive.
    pub final_pulse_omega_scale: f64,
    /// Keep the interactions on during the gap and the mapping pulse. Atoms
    /// left in |r> by a blockaded mapping pulse are lost.
    pub interactions: bool,
    /// Effective decay rate of the pair purity, 1/s.
    pub empirical_decay_rate: f64,
    /// Global purity of the t = 0 product state on `reference_atoms` atoms.
    pub t0_purity_scale: f64,
    pub reference_atoms: usize,
}

impl Default for MappingErrorModel {
    fn default() -> Self {
        MappingErrorModel {
            doppler_sigma_hz: 100e3,
            gap_time: 150e-9,
            final_pulse_omega_scale: 2.0,
            interactions: true,
            empirical_decay_rate: 1.0 / 70e-6,
            t0_purity_scale: 0.961f64.powi(8),
            reference_atoms: 8,
        }
    }
}

impl MappingErrorModel {
    /// No Doppler shifts, no gap, no interactions while mapping, no decay.
    pub fn zeroed() -> Self {
        MappingErrorModel {
            doppler_sigma_hz: 0.0,
            gap_time: 0.0,
            interactions: false,
            empirical_decay_rate: 0.0,
            t0_purity_scale: 1.0,
            ..Self::default()
        }
    }

    pub fn is_zeroed(&self) -> bool {
        self.doppler_sigma_hz == 0.0
            && self.gap_time == 0.0
            && !self.interactions
            && self.empirical_decay_rate == 0.0
            && self.t0_purity_scale == 1.0
    }

    /// Purity retained per atom pair after time `t`: scale^(1/n_ref) e^{−2γt}.
    pub fn pair_factor(&self, t: f64) -> f64 {
        let per = self.t0_purity_scale.powf(1.0 / self.reference_atoms.max(1) as f64);
        per * (-2.0 * self.empirical_decay_rate * t).exp()
    }

    /// Single-atom depolarizing probability that gives [`Self::pair_factor`]
    /// when applied to both copies: f = (1 − p)².
    ///
    /// Each depolarized atom picks I, X, Y or Z uniformly, so a pair Pauli error
    /// (1 − (1 − p)²) randomizes the singlet outcome with weight 1/2.
    pub fn depolarizing(&self, t: f64) -> f64 {
        let f = self.pair_factor(t).clamp(0.0, 1.0);
        // P(pair untouched) = (1 − p)², a touched pair gives tr(ρσ) → 1/2 on average.
        // f = q + (1 − q)/2 with q = (1 − p)².
        let q = (2.0 * f - 1.0).max(0.0);
        1.0 - q.sqrt()
    }

    pub fn validate(&self) -> Result<(), ManybodyError> {
        let ok = self.doppler_sigma_hz >= 0.0
            && self.gap_time >= 0.0
            && self.final_pulse_omega_scale > 0.0
            && self.empirical_decay_rate >= 0.0
            && self.t0_purity_scale > 0.0
            && self.t0_purity_scale <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(ManybodyError::InvalidParams("mapping error model out of range".into()))
        }
    }

    /// Per-site Doppler detunings in rad/s for one shot.
    pub fn sample_detunings<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        if self.doppler_sigma_hz == 0.0 {
            return vec![0.0; n];
        }
        let d = Normal::new(0.0, 2.0 * PI * self.doppler_sigma_hz).expect("finite sigma");
        (0..n).map(|_| d.sample(rng)).collect()
    }
}

/// Hyperfine state after mapping; lost sites sit in |r>.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappedState {
    pub state: ThreeLevelState,
    pub lost: Vec<bool>,
}

impl MappedState {
    /// Wraps a state that is already in the hyperfine space.
    pub fn unmapped(state: ThreeLevelState) -> Self {
        let n = state.n;
        MappedState { state, lost: vec![false; n] }
    }
}

/// The fixed parts of the mapping sequence: the gap and pulse Hamiltonians and durations.
struct MappingSequence {
    gap: Option<(Hamiltonian, f64)>,
    pulse: Hamiltonian,
    pulse_time: f64,
}

impl MappingSequence {
    fn new(
        n: usize,
        params: &HamiltonianParams,
        errors: &MappingErrorModel,
        detunings: &[f64],
    ) -> Result<Self, ManybodyError> {
        errors.validate()?;
        if detunings.len() != n {
            return Err(ManybodyError::LengthMismatch { expected: n, got: detunings.len() });
        }
        let mut hp = params.clone();
        hp.n_atoms = n;
        hp.delta = 0.0;
        hp.laser_phase = 0.0;
        hp.driven = vec![];
        hp.site_detuning = detunings.to_vec();
        if !errors.interactions {
            hp.v0 = 0.0;
        }
        let gap = if errors.gap_time > 0.0 {
            let mut g = hp.clone();
            g.omega = 0.0;
            Some((Hamiltonian::new(&g)?, errors.gap_time))
        } else {
            None
        };
        let omega_f = params.omega * errors.final_pulse_omega_scale;
        if !(omega_f > 0.0) {
            return Err(ManybodyError::InvalidParams("mapping pulse needs a positive Rabi frequency".into()));
        }
        hp.omega = omega_f;
        Ok(MappingSequence { gap, pulse: Hamiltonian::new(&hp)?, pulse_time: PI / omega_f })
    }

    fn run(&self, state: &ThreeLevelState) -> Result<ThreeLevelState, ManybodyError> {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let swap = [[zero, one, zero], [one, zero, zero], [zero, zero, one]];
        let mut s = state.clone();
        for site in 0..s.n {
            s.apply_local(site, &swap);
        }
        if let Some((h, t)) = &self.gap {
            s = h.evolve(&s, *t)?;
        }
        self.pulse.evolve(&s, self.pulse_time)
    }
}

/// Raman π swap of |0> and |1>, gap, then a π pulse on |1> ↔ |r> at the mapping
/// Rabi frequency. `detunings` (rad/s) act during the gap and the pulse.
/// Population still in |r> afterwards is lost, see [`coherent_map`].
pub fn mapping_pulses(
    state: &ThreeLevelState,
    params: &HamiltonianParams,
    errors: &MappingErrorModel,
    detunings: &[f64],
) -> Result<ThreeLevelState, ManybodyError> {
    MappingSequence::new(state.n, params, errors, detunings)?.run(state)
}

/// [`mapping_pulses`] as a fixed linear map on quench states (no |0> population).
///
/// Neither the swap nor the pulses change which sites sit in |0>, so every
/// {|1>, |r>} basis state maps on its own. The map is built once per set of
/// detunings and applied cheaply along a time series.
#[derive(Debug, Clone)]
pub struct MappingMap {
    n: usize,
    /// Image of the basis state with |r> on the sites of bit mask k, sparse.
    columns: Vec<Vec<(usize, Complex64)>>,
}

impl MappingMap {
    pub fn new(
        n: usize,
        params: &HamiltonianParams,
        errors: &MappingErrorModel,
        detunings: &[f64],
    ) -> Result<Self, ManybodyError> {
        let seq = MappingSequence::new(n, params, errors, detunings)?;
        let zero = Complex64::new(0.0, 0.0);
        let mut columns = Vec::with_capacity(1 << n);
        for mask in 0..1usize << n {
            let levels: Vec<Level> = (0..n).map(|s| if mask >> s & 1 == 1 { Level::Rydberg } else { Level::One }).collect();
            let out = seq.run(&ThreeLevelState::basis(&levels))?;
            columns.push(out.amps.iter().enumerate().filter(|(_, a)| **a != zero).map(|(i, a)| (i, *a)).collect());
        }
        Ok(MappingMap { n, columns })
    }

    /// Same as [`mapping_pulses`] up to rounding.
    pub fn apply(&self, state: &ThreeLevelState) -> Result<ThreeLevelState, ManybodyError> {
        let n = self.n;
        if state.n != n {
            return Err(ManybodyError::LengthMismatch { expected: n, got: state.n });
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut out = ThreeLevelState::zero(n);
        for (i, &a) in state.amps.iter().enumerate() {
            if a == zero {
                continue;
            }
            let mut mask = 0usize;
            for s in 0..n {
                match digit(i, n, s) {
                    0 => return Err(ManybodyError::InvalidParams("mapping map needs a state without |0> population".into())),
                    2 => mask |= 1 << s,
                    _ => {}
                }
            }
            for &(j, b) in &self.columns[mask] {
                out.amps[j] += a * b;
            }
        }
        Ok(out)
    }
}

/// Projective loss branch per site: an atom is lost with probability equal to
/// its |r> population, and the state is renormalized on the drawn branch.
pub fn project_loss<R: Rng + ?Sized>(mut s: ThreeLevelState, rng: &mut R) -> MappedState {
    let n = s.n;
    let zero = Complex64::new(0.0, 0.0);
    let mut lost = vec![false; n];
    for (site, l) in lost.iter_mut().enumerate() {
        let p = s.populations(site)[2];
        let gone = p > 1e-12 && rng.random::<f64>() < p;
        for (i, a) in s.amps.iter_mut().enumerate() {
            if (digit(i, n, site) == 2) != gone {
                *a = zero;
            }
        }
        s.normalize();
        *l = gone;
    }
    MappedState { state: s, lost }
}

/// [`mapping_pulses`] followed by [`project_loss`].
pub fn coherent_map<R: Rng + ?Sized>(
    state: &ThreeLevelState,
    params: &HamiltonianParams,
    errors: &MappingErrorModel,
    detunings: &[f64],
    rng: &mut R,
) -> Result<MappedState, ManybodyError> {
    Ok(project_loss(mapping_pulses(state, params, errors, detunings)?, rng))
}
