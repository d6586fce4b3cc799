use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::ManybodyError;
use crate::interfere::TwinShot;
use crate::state::{digit, ThreeLevelState};

/// Second Rényi entropy of a subsystem from twin-copy readouts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult {
    pub mask: Vec<bool>,
    /// Mean of (−1)^(singlets in A).
    pub purity: f64,
    pub purity_stderr: f64,
    /// −log2 purity; None when the estimate is not positive.
    pub s2: Option<f64>,
    /// Jackknife standard error of `s2`.
    pub s2_stderr: Option<f64>,
    pub non_positive: bool,
    pub shots: usize,
    /// Classical offset to subtract, if one was attached.
    pub classical_offset: Option<f64>,
}

impl EntropyResult {
    pub fn with_classical_offset(mut self, offset: f64) -> Self {
        self.classical_offset = Some(offset);
        self
    }

    /// S2 minus the attached classical offset.
    pub fn s2_corrected(&self) -> Option<f64> {
        self.s2.map(|s| s - self.classical_offset.unwrap_or(0.0))
    }
}

/// Share of the t = 0 global entropy attributed to a k-site subsystem of an N-site chain.
pub fn classical_offset(global_s2_t0: f64, k: usize, n: usize) -> f64 {
    global_s2_t0 * k as f64 / n as f64
}

pub fn renyi_entropy(shots: &[TwinShot], mask: &[bool]) -> Result<EntropyResult, ManybodyError> {
    if shots.is_empty() {
        return Err(ManybodyError::InvalidParams("no shots".into()));
    }
    if let Some(s) = shots.iter().find(|s| s.outcomes.len() != mask.len() || s.lost.len() != mask.len()) {
        return Err(ManybodyError::LengthMismatch { expected: mask.len(), got: s.outcomes.len() });
    }
    let m = shots.len();
    let total: f64 = shots.iter().map(|s| s.parity(mask)).sum();
    let purity = total / m as f64;
    // parities are ±1, so the sample variance is 1 − mean² (with Bessel's correction)
    let var = if m > 1 { (1.0 - purity * purity) * m as f64 / (m as f64 - 1.0) } else { f64::NAN };
    let purity_stderr = (var / m as f64).sqrt();
    let non_positive = purity <= 0.0;
    let s2 = (!non_positive).then(|| -purity.log2());

    let s2_stderr = if m > 1 && !non_positive {
        // leave-one-out values only depend on the dropped parity
        let loo = |p: f64| (total - p) / (m as f64 - 1.0);
        let (plus, minus) = shots.iter().fold((0usize, 0usize), |(a, b), s| if s.parity(mask) > 0.0 { (a + 1, b) } else { (a, b + 1) });
        let mut vals = Vec::with_capacity(2);
        for (count, p) in [(plus, 1.0), (minus, -1.0)] {
            if count > 0 {
                let x = loo(p);
                if x <= 0.0 {
                    vals.clear();
                    break;
                }
                vals.push((count as f64, -x.log2()));
            }
        }
        if vals.is_empty() {
            None
        } else {
            let mean = vals.iter().map(|(w, v)| w * v).sum::<f64>() / m as f64;
            let ss = vals.iter().map(|(w, v)| w * (v - mean).powi(2)).sum::<f64>();
            Some(((m as f64 - 1.0) / m as f64 * ss).sqrt())
        }
    } else {
        None
    };
    Ok(EntropyResult {
        mask: mask.to_vec(),
        purity,
        purity_stderr,
        s2,
        s2_stderr,
        non_positive,
        shots: m,
        classical_offset: None,
    })
}

/// Reshapes amplitudes into a dA x dB matrix for the subsystem `sites`.
fn split(state: &ThreeLevelState, sites: &[bool]) -> (usize, usize, Vec<Complex64>) {
    let n = state.n;
    let ka = sites.iter().filter(|&&s| s).count();
    let (da, db) = (3usize.pow(ka as u32), 3usize.pow((n - ka) as u32));
    let mut m = vec![Complex64::new(0.0, 0.0); da * db];
    for (i, a) in state.amps.iter().enumerate() {
        let (mut ia, mut ib) = (0, 0);
        for (s, &in_a) in sites.iter().enumerate() {
            let d = digit(i, n, s);
            if in_a {
                ia = ia * 3 + d;
            } else {
                ib = ib * 3 + d;
            }
        }
        m[ia * db + ib] = *a;
    }
    (da, db, m)
}

/// Tr[ρ_A σ_A] for two states on the same chain; `sites` marks A.
pub fn purity_overlap(psi: &ThreeLevelState, phi: &ThreeLevelState, sites: &[bool]) -> Result<f64, ManybodyError> {
    if psi.n != phi.n || sites.len() != psi.n {
        return Err(ManybodyError::LengthMismatch { expected: psi.n, got: phi.n.max(sites.len()) });
    }
    let (da, db, mp) = split(psi, sites);
    let (_, _, mf) = split(phi, sites);
    let zero = Complex64::new(0.0, 0.0);
    if da <= db {
        // ρ_A and σ_A directly
        let reduce = |m: &[Complex64]| {
            let mut r = vec![zero; da * da];
            for a in 0..da {
                for a2 in 0..da {
                    r[a * da + a2] = (0..db).map(|b| m[a * db + b] * m[a2 * db + b].conj()).sum();
                }
            }
            r
        };
        let (r, s) = (reduce(&mp), reduce(&mf));
        let mut tr = zero;
        for a in 0..da {
            for a2 in 0..da {
                tr += r[a * da + a2] * s[a2 * da + a];
            }
        }
        Ok(tr.re)
    } else {
        // Σ_{b,b'} |Σ_a ψ_ab φ*_ab'|²
        let mut tr = 0.0;
        for b in 0..db {
            for b2 in 0..db {
                let k: Complex64 = (0..da).map(|a| mp[a * db + b] * mf[a * db + b2].conj()).sum();
                tr += k.norm_sqr();
            }
        }
        Ok(tr)
    }
}

/// Exact −log2 Tr ρ_A².
pub fn renyi2(state: &ThreeLevelState, sites: &[bool]) -> Result<f64, ManybodyError> {
    Ok(-purity_overlap(state, state, sites)?.log2())
}

/// I(A:B) = S(A) + S(B) − S(AB).
pub fn mutual_information(s_a: f64, s_b: f64, s_ab: f64) -> f64 {
    s_a + s_b - s_ab
}

/// Mask for sites [start, end).
pub fn interval_mask(n: usize, start: usize, end: usize) -> Vec<bool> {
    (0..n).map(|i| i >= start && i < end).collect()
}
