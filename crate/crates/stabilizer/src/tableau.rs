//! Stabilizer tableau with destabilizers, bit-packed by qubit.

use atomarray_model::{Pauli, PauliString};
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    words: usize,
    // 2n + 1 rows: destabilizers, stabilizers, scratch
    xs: Vec<u64>,
    zs: Vec<u64>,
    signs: Vec<bool>,
}

#[inline]
fn locate(q: usize) -> (usize, u64) {
    (q / 64, 1u64 << (q % 64))
}

impl Tableau {
    /// The all-|0> state.
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        let rows = 2 * n + 1;
        let mut t = Tableau { n, words, xs: vec![0; rows * words], zs: vec![0; rows * words], signs: vec![false; rows] };
        for q in 0..n {
            let (w, m) = locate(q);
            t.xs[q * words + w] |= m;
            t.zs[(q + n) * words + w] |= m;
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn bit(v: &[u64], words: usize, row: usize, q: usize) -> bool {
        let (w, m) = locate(q);
        v[row * words + w] & m != 0
    }

    pub fn h(&mut self, q: usize) {
        let (w, m) = locate(q);
        for r in 0..2 * self.n {
            let i = r * self.words + w;
            let x = self.xs[i] & m;
            let z = self.zs[i] & m;
            if x != 0 && z != 0 {
                self.signs[r] ^= true;
            }
            self.xs[i] = (self.xs[i] & !m) | z;
            self.zs[i] = (self.zs[i] & !m) | x;
        }
    }

    pub fn s(&mut self, q: usize) {
        let (w, m) = locate(q);
        for r in 0..2 * self.n {
            let i = r * self.words + w;
            let x = self.xs[i] & m;
            if x != 0 && self.zs[i] & m != 0 {
                self.signs[r] ^= true;
            }
            self.zs[i] ^= x;
        }
    }

    pub fn x(&mut self, q: usize) {
        let (w, m) = locate(q);
        for r in 0..2 * self.n {
            if self.zs[r * self.words + w] & m != 0 {
                self.signs[r] ^= true;
            }
        }
    }

    pub fn z(&mut self, q: usize) {
        let (w, m) = locate(q);
        for r in 0..2 * self.n {
            if self.xs[r * self.words + w] & m != 0 {
                self.signs[r] ^= true;
            }
        }
    }

    pub fn y(&mut self, q: usize) {
        let (w, m) = locate(q);
        for r in 0..2 * self.n {
            let i = r * self.words + w;
            if ((self.xs[i] ^ self.zs[i]) & m) != 0 {
                self.signs[r] ^= true;
            }
        }
    }

    pub fn pauli(&mut self, q: usize, p: Pauli) {
        match p {
            Pauli::I => {}
            Pauli::X => self.x(q),
            Pauli::Y => self.y(q),
            Pauli::Z => self.z(q),
        }
    }

    pub fn cz(&mut self, a: usize, b: usize) {
        let (wa, ma) = locate(a);
        let (wb, mb) = locate(b);
        for r in 0..2 * self.n {
            let base = r * self.words;
            let xa = self.xs[base + wa] & ma != 0;
            let xb = self.xs[base + wb] & mb != 0;
            let za = self.zs[base + wa] & ma != 0;
            let zb = self.zs[base + wb] & mb != 0;
            if xa && xb && (za ^ zb) {
                self.signs[r] ^= true;
            }
            if xb {
                self.zs[base + wa] ^= ma;
            }
            if xa {
                self.zs[base + wb] ^= mb;
            }
        }
    }

    /// Row `h` ← row `i` · row `h`, with the sign rule of the CHP algorithm.
    fn rowsum(&mut self, h: usize, i: usize) {
        let wds = self.words;
        let mut e: i64 = 2 * (self.signs[h] as i64 + self.signs[i] as i64);
        for w in 0..wds {
            let x1 = self.xs[i * wds + w];
            let z1 = self.zs[i * wds + w];
            let x2 = self.xs[h * wds + w];
            let z2 = self.zs[h * wds + w];
            let pos = (x1 & z1 & !x2 & z2) | (x1 & !z1 & x2 & z2) | (!x1 & z1 & x2 & !z2);
            let neg = (x1 & z1 & x2 & !z2) | (x1 & !z1 & !x2 & z2) | (!x1 & z1 & x2 & z2);
            e += pos.count_ones() as i64 - neg.count_ones() as i64;
            self.xs[h * wds + w] = x1 ^ x2;
            self.zs[h * wds + w] = z1 ^ z2;
        }
        self.signs[h] = e.rem_euclid(4) == 2;
    }

    fn copy_row(&mut self, dst: usize, src: usize) {
        let w = self.words;
        self.xs.copy_within(src * w..(src + 1) * w, dst * w);
        self.zs.copy_within(src * w..(src + 1) * w, dst * w);
        self.signs[dst] = self.signs[src];
    }

    fn clear_row(&mut self, r: usize) {
        let w = self.words;
        self.xs[r * w..(r + 1) * w].fill(0);
        self.zs[r * w..(r + 1) * w].fill(0);
        self.signs[r] = false;
    }

    /// Measures Z on `q`; returns the outcome bit and whether it was determined.
    pub fn measure_z<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> (u8, bool) {
        let n = self.n;
        let wds = self.words;
        let p = (n..2 * n).find(|&r| Self::bit(&self.xs, wds, r, q));
        match p {
            Some(p) => {
                for r in 0..2 * n {
                    if r != p && Self::bit(&self.xs, wds, r, q) {
                        self.rowsum(r, p);
                    }
                }
                self.copy_row(p - n, p);
                self.clear_row(p);
                let (w, m) = locate(q);
                self.zs[p * wds + w] = m;
                let outcome: bool = rng.random();
                self.signs[p] = outcome;
                (outcome as u8, false)
            }
            None => {
                let scratch = 2 * n;
                self.clear_row(scratch);
                for r in 0..n {
                    if Self::bit(&self.xs, wds, r, q) {
                        self.rowsum(scratch, r + n);
                    }
                }
                (self.signs[scratch] as u8, true)
            }
        }
    }

    fn row_string(&self, r: usize) -> PauliString {
        let mut ops = Vec::with_capacity(self.n);
        for q in 0..self.n {
            ops.push(Pauli::from_bits(
                Self::bit(&self.xs, self.words, r, q),
                Self::bit(&self.zs, self.words, r, q),
            ));
        }
        PauliString::from_ops(ops).with_sign(if self.signs[r] { -1 } else { 1 })
    }

    /// Current stabilizer generators.
    pub fn stabilizers(&self) -> Vec<PauliString> {
        (self.n..2 * self.n).map(|r| self.row_string(r)).collect()
    }

    /// Eigenvalue ±1 if `p` (up to sign) is in the stabilizer group, else `None`.
    pub fn expectation(&self, p: &PauliString) -> Option<i8> {
        let gens = self.stabilizers();
        if gens.iter().any(|g| !g.commutes_with(p)) {
            return None;
        }
        let mut acc = PauliString::identity(self.n);
        for r in 0..self.n {
            if !self.row_string(r).commutes_with(p) {
                acc = acc.mul(&gens[r]);
            }
        }
        debug_assert_eq!(acc.ops(), p.ops());
        Some(acc.sign() * p.sign())
    }
}
