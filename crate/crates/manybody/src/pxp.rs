use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::ManybodyError;

/// Largest ring the constrained solver accepts.
pub const PXP_MAX_ATOMS: usize = 24;

/// Lucas numbers: L_0 = 2, L_1 = 1, L_n = L_{n−1} + L_{n−2}.
pub fn lucas(n: usize) -> u64 {
    let (mut a, mut b) = (2u64, 1u64);
    for _ in 0..n {
        (a, b) = (b, a + b);
    }
    a
}

/// Configurations of a ring of n sites with no two adjacent excitations
/// (site i is bit i). Sorted.
pub fn pxp_basis(n: usize) -> Vec<u32> {
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    (0..=full)
        .filter(|&c| {
            let rot = if n == 0 { 0 } else { ((c >> 1) | (c << (n - 1))) & full };
            c & rot == 0 || n == 1
        })
        .collect()
}

/// State of the PXP ring H = (Ω/2) Σ P X_i P on the blockade-constrained space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PxpState {
    pub n: usize,
    pub basis: Vec<u32>,
    pub amps: Vec<Complex64>,
}

impl PxpState {
    pub fn basis_state(n: usize, config: u32) -> Result<Self, ManybodyError> {
        if n == 0 || n > PXP_MAX_ATOMS {
            return Err(ManybodyError::DimensionOverflow { n, max: PXP_MAX_ATOMS });
        }
        let basis = pxp_basis(n);
        let idx = basis
            .binary_search(&config)
            .map_err(|_| ManybodyError::InvalidParams(format!("configuration {config:#b} violates the blockade")))?;
        let mut amps = vec![Complex64::new(0.0, 0.0); basis.len()];
        amps[idx] = Complex64::new(1.0, 0.0);
        Ok(PxpState { n, basis, amps })
    }

    /// Excitations on the even sites.
    pub fn z2(n: usize) -> Result<Self, ManybodyError> {
        let c = (0..n).step_by(2).filter(|&i| n % 2 == 0 || i + 1 < n).fold(0u32, |acc, i| acc | 1 << i);
        Self::basis_state(n, c)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn overlap(&self, other: &PxpState) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr()
    }

    pub fn excitation(&self, site: usize) -> f64 {
        self.basis.iter().zip(&self.amps).filter(|(c, _)| *c >> site & 1 == 1).map(|(_, a)| a.norm_sqr()).sum()
    }

    /// −log2 Tr ρ_i² for one site.
    pub fn single_site_renyi2(&self, site: usize) -> f64 {
        let p = self.excitation(site);
        let mut coh = Complex64::new(0.0, 0.0);
        for (c, a) in self.basis.iter().zip(&self.amps) {
            if c >> site & 1 == 1 {
                let down = c & !(1 << site);
                if let Ok(j) = self.basis.binary_search(&down) {
                    coh += a * self.amps[j].conj();
                }
            }
        }
        -(p * p + (1.0 - p) * (1.0 - p) + 2.0 * coh.norm_sqr()).log2()
    }
}

/// exp(−iHt) on the PXP ring by truncated Taylor steps with ||H||·dt ≤ 1.
pub fn pxp_evolve(state: &PxpState, omega: f64, t: f64) -> Result<PxpState, ManybodyError> {
    if !(t >= 0.0) {
        return Err(ManybodyError::NegativeTime(t));
    }
    let n = state.n;
    let neighbours: Vec<Vec<usize>> = state
        .basis
        .iter()
        .map(|&c| (0..n).filter_map(|i| state.basis.binary_search(&(c ^ (1 << i))).ok()).collect())
        .collect();
    let half = omega / 2.0;
    let bound = n as f64 * half.abs();
    let steps = (bound * t).ceil().max(1.0) as usize;
    let dt = t / steps as f64;
    let mut v = state.amps.clone();
    let mut term = v.clone();
    let mut next = v.clone();
    for _ in 0..steps {
        term.copy_from_slice(&v);
        for k in 1..=60 {
            let f = Complex64::new(0.0, -dt * half / k as f64);
            let mut size = 0.0;
            for (o, nb) in next.iter_mut().zip(&neighbours) {
                *o = nb.iter().map(|&j| term[j]).sum::<Complex64>() * f;
                size += o.norm_sqr();
            }
            std::mem::swap(&mut term, &mut next);
            v.iter_mut().zip(&term).for_each(|(a, b)| *a += b);
            if size.sqrt() < 1e-17 {
                break;
            }
        }
    }
    Ok(PxpState { n, basis: state.basis.clone(), amps: v })
}
