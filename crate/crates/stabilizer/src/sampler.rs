use atomarray_model::{validate_circuit, Circuit, Layer, ShotRecord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::StabilizerError;
use crate::frame::layer_gates;
use crate::gates::Gate;
use crate::noise::{Accounting, Channel, Fault, NoiseModel};
use crate::tableau::Tableau;

/// Seed plus per-shot stream: shot `k` uses stream `k` whatever the execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSpec {
    pub seed: u64,
}

impl RngSpec {
    pub fn new(seed: u64) -> Self {
        RngSpec { seed }
    }

    pub fn stream(&self, stream_id: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream_id);
        r
    }
}

/// Tableau plus loss flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerState {
    pub tableau: Tableau,
    pub lost: Vec<bool>,
}

impl StabilizerState {
    pub fn new(n: usize) -> Self {
        StabilizerState { tableau: Tableau::new(n), lost: vec![false; n] }
    }

    pub fn n(&self) -> usize {
        self.lost.len()
    }

    /// Applies a gate unless it touches a lost atom.
    pub fn apply_gate(&mut self, g: Gate) {
        match g {
            Gate::H(q) if !self.lost[q] => self.tableau.h(q),
            Gate::S(q) if !self.lost[q] => self.tableau.s(q),
            Gate::Pauli(q, p) if !self.lost[q] => self.tableau.pauli(q, p),
            Gate::Cz(a, b) if !self.lost[a] && !self.lost[b] => self.tableau.cz(a, b),
            _ => {}
        }
    }

    /// Applies one non-measurement layer of `c`; move layers leave the state unchanged.
    pub fn apply_layer(&mut self, c: &Circuit, layer: &Layer) -> Result<(), StabilizerError> {
        if matches!(layer, Layer::MeasureAll { .. }) {
            return Err(StabilizerError::MeasurementLayer);
        }
        for g in layer_gates(c, layer)? {
            self.apply_gate(g);
        }
        Ok(())
    }

    /// Removes atom `q`: its qubit is traced out and it reads 1 from now on.
    pub fn lose<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) {
        if !self.lost[q] {
            // a discarded measurement is equivalent to tracing the qubit out
            self.tableau.measure_z(q, rng);
            self.lost[q] = true;
        }
    }

    pub fn apply_fault<R: Rng + ?Sized>(&mut self, q: usize, f: Fault, rng: &mut R) {
        if self.lost[q] {
            return;
        }
        match f {
            Fault::None => {}
            Fault::X => self.tableau.x(q),
            Fault::Y => self.tableau.y(q),
            Fault::Z => self.tableau.z(q),
            Fault::Loss => self.lose(q, rng),
        }
    }

    fn channel_on<R: Rng + ?Sized>(&mut self, ch: &Channel, qubits: impl Iterator<Item = usize>, rng: &mut R) {
        if ch.is_zero() {
            return;
        }
        for q in qubits {
            if !self.lost[q] {
                let f = ch.fault(rng.random());
                self.apply_fault(q, f, rng);
            }
        }
    }

    /// Z readout of every atom; lost atoms read 1.
    pub fn measure_all<R: Rng + ?Sized>(&mut self, rng: &mut R) -> ShotRecord {
        let n = self.n();
        let mut bits = vec![1u8; n];
        for q in 0..n {
            if !self.lost[q] {
                bits[q] = self.tableau.measure_z(q, rng).0;
            }
        }
        ShotRecord::new(bits, self.lost.clone()).expect("lengths match")
    }
}

#[derive(Debug, Clone)]
enum Step {
    Gates { gates: Vec<Gate>, cz_participants: Vec<usize>, is_cz: bool, is_rotation: bool },
    Readout(Vec<Gate>),
}

/// A circuit resolved to gate lists, ready for repeated sampling.
#[derive(Debug, Clone)]
pub struct Sampler {
    n: usize,
    steps: Vec<Step>,
}

impl Sampler {
    /// Resolves the circuit without geometric validation.
    pub fn new(c: &Circuit) -> Result<Self, StabilizerError> {
        let mut steps = Vec::with_capacity(c.layers.len());
        let idx = c.index_of();
        let mut has_readout = false;
        for layer in &c.layers {
            let gates = layer_gates(c, layer)?;
            match layer {
                Layer::MeasureAll { .. } => {
                    has_readout = true;
                    steps.push(Step::Readout(gates));
                }
                Layer::ParallelCz { pairs } => {
                    let mut cz_participants = Vec::with_capacity(2 * pairs.len());
                    for &(a, b) in pairs {
                        cz_participants.push(idx[&a]);
                        cz_participants.push(idx[&b]);
                    }
                    steps.push(Step::Gates { gates, cz_participants, is_cz: true, is_rotation: false });
                }
                _ => {
                    let is_rotation =
                        matches!(layer, Layer::GlobalRotation { .. } | Layer::SublatticeRotation { .. });
                    steps.push(Step::Gates { gates, cz_participants: vec![], is_cz: false, is_rotation })
                }
            }
        }
        if !has_readout {
            return Err(StabilizerError::MissingMeasurement);
        }
        Ok(Sampler { n: c.n_atoms(), steps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// One shot with the given noise and random stream.
    pub fn run_shot<R: Rng + ?Sized>(&self, noise: &NoiseModel, rng: &mut R) -> ShotRecord {
        let n = self.n;
        let mut st = StabilizerState::new(n);
        if noise.init_loss > 0.0 {
            for q in 0..n {
                if rng.random::<f64>() < noise.init_loss {
                    st.lose(q, rng);
                }
            }
        }
        for step in &self.steps {
            match step {
                Step::Gates { gates, cz_participants, is_cz, is_rotation } => {
                    for &g in gates {
                        st.apply_gate(g);
                    }
                    match noise.accounting {
                        Accounting::PerGateLayer => {
                            if *is_cz {
                                st.channel_on(&noise.tq_layer, 0..n, rng);
                                st.channel_on(&noise.ambient_layer, 0..n, rng);
                            }
                        }
                        Accounting::GateParticipants => {
                            if *is_cz {
                                st.channel_on(&noise.tq_layer, cz_participants.iter().copied(), rng);
                                st.channel_on(&noise.ambient_layer, 0..n, rng);
                            }
                        }
                        Accounting::GateLayers => {
                            st.channel_on(&noise.tq_layer, cz_participants.iter().copied(), rng);
                            if *is_cz || *is_rotation {
                                st.channel_on(&noise.ambient_layer, 0..n, rng);
                            }
                        }
                        Accounting::PerCircuitLayer => {
                            st.channel_on(&noise.tq_layer, cz_participants.iter().copied(), rng);
                            st.channel_on(&noise.ambient_layer, 0..n, rng);
                        }
                    }
                }
                Step::Readout(gates) => {
                    for &g in gates {
                        st.apply_gate(g);
                    }
                    return st.measure_all(rng);
                }
            }
        }
        unreachable!("sampler always ends with a readout step")
    }

    /// Shots `0..n_shots` in parallel; shot `k` is reproducible from (seed, k) alone.
    pub fn sample(&self, noise: &NoiseModel, n_shots: usize, rng: RngSpec) -> Vec<ShotRecord> {
        (0..n_shots as u64)
            .into_par_iter()
            .map(|k| {
                let mut r = rng.stream(k);
                self.run_shot(noise, &mut r)
            })
            .collect()
    }
}

/// Validates `c` and samples `n_shots` noisy shots.
pub fn sample_shots(
    c: &Circuit,
    noise: &NoiseModel,
    n_shots: usize,
    rng: RngSpec,
) -> Result<Vec<ShotRecord>, StabilizerError> {
    let violations = validate_circuit(c);
    if !violations.is_empty() {
        return Err(StabilizerError::InvalidCircuit(violations));
    }
    noise.validate()?;
    Ok(Sampler::new(c)?.sample(noise, n_shots, rng))
}

/// Noiseless state just before readout (for exact expectation queries).
pub fn final_state(c: &Circuit) -> Result<StabilizerState, StabilizerError> {
    let mut st = StabilizerState::new(c.n_atoms());
    for layer in &c.layers {
        if matches!(layer, Layer::MeasureAll { .. }) {
            break;
        }
        st.apply_layer(c, layer)?;
    }
    Ok(st)
}
