use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cz::{matmul, Matrix4};
use crate::error::ManybodyError;
use crate::mapping::MappedState;
use crate::state::digit;

/// Outcome of one twin-copy readout. Pair outcome k = 2a + b with a the copy-1
/// bit and b the copy-2 bit; k = 0 is the singlet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwinShot {
    pub outcomes: Vec<u8>,
    pub lost: Vec<bool>,
}

impl TwinShot {
    /// Pair `site` read out as 00 with both atoms present.
    pub fn singlet(&self, site: usize) -> bool {
        !self.lost[site] && self.outcomes[site] == 0
    }

    /// (−1)^(number of singlets in `mask`).
    pub fn parity(&self, mask: &[bool]) -> f64 {
        let k = mask.iter().enumerate().filter(|&(i, &m)| m && self.singlet(i)).count();
        if k % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn kron(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> Matrix4 {
    let mut m = [[c(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = a[i / 2][j / 2] * b[i % 2][j % 2];
        }
    }
    m
}

const I2: [[Complex64; 2]; 2] = [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]];

fn pauli(k: usize) -> [[Complex64; 2]; 2] {
    match k {
        1 => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        2 => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        3 => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        _ => I2,
    }
}

/// Z on the copy-2 atom, X(π/2) on the copy-1 atom, CZ, then X(π/2) on both,
/// with X(θ) = cos(θ/2) − i sin(θ/2) X. Takes the singlet to |00>.
pub fn bell_pair_unitary() -> Matrix4 {
    let h = FRAC_1_SQRT_2;
    let xh = [[c(h, 0.0), c(0.0, -h)], [c(0.0, -h), c(h, 0.0)]];
    let mut cz = kron(&I2, &I2);
    cz[3][3] = c(-1.0, 0.0);
    let first = kron(&xh, &pauli(3));
    matmul(&kron(&xh, &xh), &matmul(&cz, &first))
}

/// Outcome relabelling caused by a Pauli error ahead of the Bell readout:
/// `perm[atom][pauli − 1][k]` for atom 0 (copy 1) or 1 (copy 2).
fn pauli_permutations(u: &Matrix4) -> [[[u8; 4]; 3]; 2] {
    let mut udag = [[c(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            udag[i][j] = u[j][i].conj();
        }
    }
    let mut out = [[[0u8; 4]; 3]; 2];
    for (atom, per_atom) in out.iter_mut().enumerate() {
        for (k, perm) in per_atom.iter_mut().enumerate() {
            let p = if atom == 0 { kron(&pauli(k + 1), &I2) } else { kron(&I2, &pauli(k + 1)) };
            let m = matmul(u, &matmul(&p, &udag));
            for (x, slot) in perm.iter_mut().enumerate() {
                *slot = (0..4).find(|&y| m[y][x].norm() > 0.5).expect("Bell frame maps Paulis to permutations") as u8;
            }
        }
    }
    out
}

/// Distribution over the 4^N joint pair outcomes (pair 0 most significant).
/// Lost sites enter as |0> and are flagged separately.
pub fn twin_distribution(copy1: &MappedState, copy2: &MappedState) -> Result<Vec<f64>, ManybodyError> {
    let n = copy1.state.n;
    if copy2.state.n != n {
        return Err(ManybodyError::LengthMismatch { expected: n, got: copy2.state.n });
    }
    let q1 = qubit_amplitudes(copy1);
    let q2 = qubit_amplitudes(copy2);
    let d = 1usize << n;
    let spread = |x: usize| -> usize {
        // bit i of x goes to bit 2i
        (0..n).fold(0, |acc, i| acc | (((x >> i) & 1) << (2 * i)))
    };
    let mut joint = vec![c(0.0, 0.0); d * d];
    for (a, &x) in q1.iter().enumerate() {
        if x == c(0.0, 0.0) {
            continue;
        }
        let sa = spread(a) << 1;
        for (b, &y) in q2.iter().enumerate() {
            joint[sa | spread(b)] = x * y;
        }
    }
    let u = bell_pair_unitary();
    for pair in 0..n {
        let st = 1usize << (2 * (n - 1 - pair));
        for base in 0..joint.len() {
            if (base / st) % 4 != 0 {
                continue;
            }
            let v = [joint[base], joint[base + st], joint[base + 2 * st], joint[base + 3 * st]];
            for (k, row) in u.iter().enumerate() {
                joint[base + k * st] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
            }
        }
    }
    Ok(joint.iter().map(|a| a.norm_sqr()).collect())
}

/// Amplitudes over 2^N with bit (N−1−site) set for |1>; |r> (lost) reads as 0.
fn qubit_amplitudes(m: &MappedState) -> Vec<Complex64> {
    let n = m.state.n;
    let mut q = vec![c(0.0, 0.0); 1 << n];
    for (i, a) in m.state.amps.iter().enumerate() {
        let bits = (0..n).fold(0usize, |acc, site| (acc << 1) | usize::from(digit(i, n, site) == 1));
        q[bits] += a;
    }
    q
}

/// Samples `shots` readouts; each atom suffers a uniformly random Pauli with
/// probability `depolarizing` before the Bell readout.
pub fn interfere_and_sample<R: Rng + ?Sized>(
    copy1: &MappedState,
    copy2: &MappedState,
    shots: usize,
    depolarizing: f64,
    rng: &mut R,
) -> Result<Vec<TwinShot>, ManybodyError> {
    let n = copy1.state.n;
    if !(0.0..=1.0).contains(&depolarizing) {
        return Err(ManybodyError::InvalidParams(format!("depolarizing probability {depolarizing}")));
    }
    let probs = twin_distribution(copy1, copy2)?;
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in &probs {
        acc += p;
        cdf.push(acc);
    }
    let perms = pauli_permutations(&bell_pair_unitary());
    let lost: Vec<bool> = copy1.lost.iter().zip(&copy2.lost).map(|(a, b)| *a || *b).collect();
    let mut out = Vec::with_capacity(shots);
    for _ in 0..shots {
        let u = rng.random::<f64>() * acc;
        let k = cdf.partition_point(|&x| x <= u).min(cdf.len() - 1);
        let mut outcomes: Vec<u8> = (0..n).map(|pair| ((k >> (2 * (n - 1 - pair))) & 3) as u8).collect();
        if depolarizing > 0.0 {
            for o in outcomes.iter_mut() {
                for perm in &perms {
                    if rng.random::<f64>() < depolarizing {
                        let which = rng.random_range(0..4usize);
                        if which > 0 {
                            *o = perm[which - 1][*o as usize];
                        }
                    }
                }
            }
        }
        out.push(TwinShot { outcomes, lost: lost.clone() });
    }
    Ok(out)
}
