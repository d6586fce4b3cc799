use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::ManybodyError;
use crate::state::{digit, dim, stride, ThreeLevelState};

/// Default cap on chain length for the dense three-level space.
pub const DEFAULT_MAX_ATOMS: usize = 10;

/// Angular frequency in rad/s for a frequency in MHz.
pub fn mhz(f: f64) -> f64 {
    2.0 * PI * f * 1e6
}

fn default_max_atoms() -> usize {
    DEFAULT_MAX_ATOMS
}

/// H/ħ = Ω/2 Σ (e^{iφ}|1><r| + h.c.) − Σ (Δ + δ_i) n_i + Σ_{i<j} V_ij n_i n_j
/// on an open chain, with V_ij = v0 (a / r_ij)^6. Rates in rad/s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianParams {
    pub n_atoms: usize,
    pub omega: f64,
    pub delta: f64,
    pub v0: f64,
    pub spacing_um: f64,
    /// Laser phase φ of the drive.
    #[serde(default)]
    pub laser_phase: f64,
    /// Extra per-site detuning δ_i (empty = none).
    #[serde(default)]
    pub site_detuning: Vec<f64>,
    /// Sites reached by the drive (empty = all).
    #[serde(default)]
    pub driven: Vec<bool>,
    #[serde(default = "default_max_atoms")]
    pub max_atoms: usize,
}

/// The two quench detunings in use for the 8-atom chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetuningPreset {
    /// Δ/2π = 0.3 MHz.
    Fixed,
    /// Δ = 0.0173 V0 (0.346 MHz at V0/2π = 20 MHz).
    ScaledToV0,
}

impl HamiltonianParams {
    pub fn chain(n_atoms: usize, omega: f64, delta: f64, v0: f64) -> Self {
        HamiltonianParams {
            n_atoms,
            omega,
            delta,
            v0,
            spacing_um: 1.0,
            laser_phase: 0.0,
            site_detuning: vec![],
            driven: vec![],
            max_atoms: DEFAULT_MAX_ATOMS,
        }
    }

    /// V0/2π = 20 MHz, Ω/2π = 3.1 MHz and the chosen detuning.
    pub fn scar_quench(n_atoms: usize, preset: DetuningPreset) -> Self {
        let v0 = mhz(20.0);
        let delta = match preset {
            DetuningPreset::Fixed => mhz(0.3),
            DetuningPreset::ScaledToV0 => 0.0173 * v0,
        };
        Self::chain(n_atoms, mhz(3.1), delta, v0)
    }

    pub fn is_blockaded(&self) -> bool {
        self.v0 > self.omega
    }

    pub fn interaction(&self, i: usize, j: usize) -> f64 {
        let r = (i as f64 - j as f64).abs();
        if r == 0.0 {
            return 0.0;
        }
        self.v0 / r.powi(6)
    }

    pub fn validate(&self) -> Result<(), ManybodyError> {
        if self.n_atoms == 0 {
            return Err(ManybodyError::InvalidParams("empty chain".into()));
        }
        if self.n_atoms > self.max_atoms {
            return Err(ManybodyError::DimensionOverflow { n: self.n_atoms, max: self.max_atoms });
        }
        if !(self.v0 >= 0.0) || !self.omega.is_finite() || !self.delta.is_finite() || !(self.spacing_um > 0.0) {
            return Err(ManybodyError::InvalidParams("rates must be finite, v0 and spacing non-negative".into()));
        }
        if !self.site_detuning.is_empty() && self.site_detuning.len() != self.n_atoms {
            return Err(ManybodyError::LengthMismatch { expected: self.n_atoms, got: self.site_detuning.len() });
        }
        if !self.driven.is_empty() && self.driven.len() != self.n_atoms {
            return Err(ManybodyError::LengthMismatch { expected: self.n_atoms, got: self.driven.len() });
        }
        Ok(())
    }
}

/// Sparse form of [`HamiltonianParams`]: the diagonal plus the 1 ↔ r couplings.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub n: usize,
    pub diag: Vec<f64>,
    /// <r|H|1> on every site.
    pub coupling: Complex64,
    strides: Vec<usize>,
    driven: Vec<bool>,
    /// Base-3 digits of every index, n per index.
    digits: Vec<u8>,
    /// Sites in |0> for every index. H never changes them, so each mask is an invariant sector.
    zero_sites: Vec<u32>,
}

impl Hamiltonian {
    pub fn new(p: &HamiltonianParams) -> Result<Self, ManybodyError> {
        p.validate()?;
        let n = p.n_atoms;
        let d = dim(n);
        let mut det = vec![p.delta; n];
        for (i, x) in p.site_detuning.iter().enumerate() {
            det[i] += x;
        }
        let mut pair = vec![vec![0.0; n]; n];
        for (i, row) in pair.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate().skip(i + 1) {
                *v = p.interaction(i, j);
            }
        }
        let mut diag = vec![0.0; d];
        let mut ryd = Vec::with_capacity(n);
        for (idx, e) in diag.iter_mut().enumerate() {
            ryd.clear();
            ryd.extend((0..n).filter(|&s| digit(idx, n, s) == 2));
            let mut v = 0.0;
            for (a, &i) in ryd.iter().enumerate() {
                v -= det[i];
                for &j in &ryd[a + 1..] {
                    v += pair[i][j];
                }
            }
            *e = v;
        }
        Ok(Hamiltonian {
            n,
            diag,
            coupling: Complex64::from_polar(p.omega / 2.0, -p.laser_phase),
            strides: (0..n).map(|s| stride(n, s)).collect(),
            driven: if p.driven.is_empty() { vec![true; n] } else { p.driven.clone() },
            digits: (0..d).flat_map(|i| (0..n).map(move |s| digit(i, n, s) as u8)).collect(),
            zero_sites: (0..d)
                .map(|i| (0..n).filter(|&s| digit(i, n, s) == 0).fold(0u32, |m, s| m | 1 << s))
                .collect(),
        })
    }

    /// No site is driven, so exp(−iHt) is a phase per basis state.
    pub fn is_diagonal(&self) -> bool {
        self.coupling == Complex64::new(0.0, 0.0) || !self.driven.iter().any(|&d| d)
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// out = (H − shift) v.
    pub fn apply_shifted(&self, v: &[Complex64], out: &mut [Complex64], shift: f64) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row(v, i, shift);
        }
    }

    /// As [`Hamiltonian::apply_shifted`] on the listed indices only. The list must be
    /// closed under H (a union of sectors); other entries of `out` are untouched.
    pub(crate) fn apply_shifted_on(&self, active: &[usize], v: &[Complex64], out: &mut [Complex64], shift: f64) {
        for &i in active {
            out[i] = self.row(v, i, shift);
        }
    }

    /// Indices of every sector that holds a nonzero amplitude of `v`; None when that is all of them.
    pub(crate) fn active_indices(&self, v: &[Complex64]) -> Option<Vec<usize>> {
        let mut live = std::collections::HashSet::new();
        for (a, &m) in v.iter().zip(&self.zero_sites) {
            if *a != Complex64::new(0.0, 0.0) {
                live.insert(m);
            }
        }
        let active: Vec<usize> = (0..v.len()).filter(|&i| live.contains(&self.zero_sites[i])).collect();
        (active.len() < v.len()).then_some(active)
    }

    #[inline]
    fn row(&self, v: &[Complex64], i: usize, shift: f64) -> Complex64 {
        let c = self.coupling;
        let cc = c.conj();
        {
            let mut acc = v[i] * (self.diag[i] - shift);
            let digits = &self.digits[i * self.n..(i + 1) * self.n];
            for ((&st, &on), &d) in self.strides.iter().zip(&self.driven).zip(digits) {
                if !on {
                    continue;
                }
                match d {
                    1 => acc += cc * v[i + st],
                    2 => acc += c * v[i - st],
                    _ => {}
                }
            }
            acc
        }
    }

    pub fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        self.apply_shifted(v, out, 0.0);
    }

    /// ⟨ψ|H|ψ⟩.
    pub fn energy(&self, s: &ThreeLevelState) -> f64 {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        self.apply(&s.amps, &mut out);
        s.amps.iter().zip(&out).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// Midpoint of the diagonal range and a bound on ||H − midpoint||.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let (lo, hi) = self.diag.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
        let mid = 0.5 * (lo + hi);
        let driven = self.driven.iter().filter(|&&d| d).count() as f64;
        (mid, 0.5 * (hi - lo) + driven * self.coupling.norm())
    }
}
