use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::ManybodyError;

/// Local levels; the digit of a site in the base-3 basis index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    Zero = 0,
    One = 1,
    Rydberg = 2,
}

impl Level {
    pub fn from_digit(d: usize) -> Level {
        match d {
            0 => Level::Zero,
            1 => Level::One,
            _ => Level::Rydberg,
        }
    }
}

/// Hilbert dimension 3^n.
pub fn dim(n: usize) -> usize {
    3usize.pow(n as u32)
}

/// Place value of `site`; site 0 is the most significant digit.
pub fn stride(n: usize, site: usize) -> usize {
    3usize.pow((n - 1 - site) as u32)
}

pub fn digit(index: usize, n: usize, site: usize) -> usize {
    (index / stride(n, site)) % 3
}

/// Pure state over {|0>, |1>, |r>}^n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreeLevelState {
    pub n: usize,
    pub amps: Vec<Complex64>,
}

impl ThreeLevelState {
    pub fn zero(n: usize) -> Self {
        ThreeLevelState { n, amps: vec![Complex64::new(0.0, 0.0); dim(n)] }
    }

    pub fn basis(levels: &[Level]) -> Self {
        let n = levels.len();
        let mut s = Self::zero(n);
        let idx = levels.iter().fold(0, |acc, &l| acc * 3 + l as usize);
        s.amps[idx] = Complex64::new(1.0, 0.0);
        s
    }

    /// Product of single-site states given as (|0>, |1>, |r>) amplitudes.
    pub fn product(sites: &[[Complex64; 3]]) -> Self {
        let n = sites.len();
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for site in sites {
            let mut next = Vec::with_capacity(amps.len() * 3);
            for a in &amps {
                next.extend(site.iter().map(|c| a * c));
            }
            amps = next;
        }
        ThreeLevelState { n, amps }
    }

    /// |1 1 ... 1>, the ground state of the Rydberg chain.
    pub fn all_ground(n: usize) -> Self {
        Self::basis(&vec![Level::One; n])
    }

    /// |r 1 r 1 ...>.
    pub fn z2(n: usize) -> Self {
        let levels: Vec<Level> = (0..n).map(|i| if i % 2 == 0 { Level::Rydberg } else { Level::One }).collect();
        Self::basis(&levels)
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let k = self.norm();
        if k > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= k);
        }
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64, ManybodyError> {
        if self.n != other.n {
            return Err(ManybodyError::LengthMismatch { expected: self.n, got: other.n });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn fidelity(&self, other: &Self) -> Result<f64, ManybodyError> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Populations of (|0>, |1>, |r>) on `site`.
    pub fn populations(&self, site: usize) -> [f64; 3] {
        let mut p = [0.0; 3];
        for (i, a) in self.amps.iter().enumerate() {
            p[digit(i, self.n, site)] += a.norm_sqr();
        }
        p
    }

    pub fn rydberg_density(&self) -> Vec<f64> {
        (0..self.n).map(|s| self.populations(s)[2]).collect()
    }

    /// Applies a 3x3 single-site unitary (row = output level).
    pub fn apply_local(&mut self, site: usize, u: &[[Complex64; 3]; 3]) {
        let st = stride(self.n, site);
        for base in 0..self.amps.len() {
            if digit(base, self.n, site) != 0 {
                continue;
            }
            let v = [self.amps[base], self.amps[base + st], self.amps[base + 2 * st]];
            for (k, row) in u.iter().enumerate() {
                self.amps[base + k * st] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
            }
        }
    }
}
