use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Pauli {
    #[default]
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Symplectic (x, z) bits, with Y = (1, 1).
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn commutes_with(self, other: Pauli) -> bool {
        self == Pauli::I || other == Pauli::I || self == other
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Hermitian Pauli operator on `n` qubits with a ±1 sign.
///
/// Text form is a sign followed by one symbol per qubit, e.g. `+XZI`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PauliString {
    ops: Vec<Pauli>,
    negative: bool,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString { ops: vec![Pauli::I; n], negative: false }
    }

    pub fn from_ops(ops: Vec<Pauli>) -> Self {
        PauliString { ops, negative: false }
    }

    pub fn from_sparse(n: usize, terms: &[(usize, Pauli)]) -> Self {
        let mut p = Self::identity(n);
        for &(q, s) in terms {
            p.ops[q] = s;
        }
        p
    }

    /// Same symbol on every listed qubit.
    pub fn uniform(n: usize, qubits: &[usize], s: Pauli) -> Self {
        let mut p = Self::identity(n);
        for &q in qubits {
            p.ops[q] = s;
        }
        p
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn get(&self, q: usize) -> Pauli {
        self.ops[q]
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        self.ops[q] = p;
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.ops
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn negate(&mut self) {
        self.negative = !self.negative;
    }

    pub fn with_sign(mut self, sign: i8) -> Self {
        self.negative = sign < 0;
        self
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.ops.len()).filter(|&q| self.ops[q] != Pauli::I).collect()
    }

    pub fn weight(&self) -> usize {
        self.ops.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// True when every non-identity symbol equals `s`.
    pub fn is_uniform(&self, s: Pauli) -> bool {
        self.ops.iter().all(|&p| p == Pauli::I || p == s)
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        assert_eq!(self.len(), other.len(), "pauli strings of different length");
        let anti = self.ops.iter().zip(&other.ops).filter(|(a, b)| !a.commutes_with(**b)).count();
        anti % 2 == 0
    }

    /// Product `self · other`, returned with the power `k` of the prefactor `i^k`.
    ///
    /// For commuting factors `k` is even and the result keeps a ±1 sign.
    pub fn mul_with_phase(&self, other: &PauliString) -> (PauliString, u8) {
        assert_eq!(self.len(), other.len(), "pauli strings of different length");
        // exponent of i, tracked mod 4
        let mut e: i32 = 2 * (self.negative as i32 + other.negative as i32);
        let mut ops = Vec::with_capacity(self.len());
        for (a, b) in self.ops.iter().zip(&other.ops) {
            let (x1, z1) = a.bits();
            let (x2, z2) = b.bits();
            e += phase_exponent(x1, z1, x2, z2);
            ops.push(Pauli::from_bits(x1 ^ x2, z1 ^ z2));
        }
        let e = e.rem_euclid(4) as u8;
        let negative = e >= 2;
        (PauliString { ops, negative }, e % 2)
    }

    /// Product of commuting operators. Panics if they anticommute.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        let (p, odd) = self.mul_with_phase(other);
        assert_eq!(odd, 0, "product of anticommuting paulis is not hermitian");
        p
    }

    pub fn with_qubits_permuted(&self, map: &[usize]) -> PauliString {
        let mut out = PauliString::identity(self.len());
        for (q, &p) in self.ops.iter().enumerate() {
            out.ops[map[q]] = p;
        }
        out.negative = self.negative;
        out
    }
}

/// Exponent of `i` picked up when multiplying single-qubit paulis (x1,z1)·(x2,z2).
pub(crate) fn phase_exponent(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x1, z1, x2, z2) = (x1 as i32, z1 as i32, x2 as i32, z2 as i32);
    match (x1, z1) {
        (0, 0) => 0,
        (1, 1) => z2 - x2,
        (1, 0) => z2 * (2 * x2 - 1),
        _ => x2 * (1 - 2 * z2),
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.negative { '-' } else { '+' })?;
        for p in &self.ops {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (negative, body) = match s.chars().next() {
            Some('+') => (false, &s[1..]),
            Some('-') => (true, &s[1..]),
            _ => (false, s),
        };
        let ops = body
            .chars()
            .map(|c| match c {
                'I' | '_' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(ModelError::ParsePauli(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PauliString { ops, negative })
    }
}

impl TryFrom<String> for PauliString {
    type Error = ModelError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<PauliString> for String {
    fn from(p: PauliString) -> String {
        p.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn text_round_trip() {
        for s in ["+XZI", "-YYZ", "+I"] {
            assert_eq!(ps(s).to_string(), s);
        }
        assert!("+XQ".parse::<PauliString>().is_err());
    }

    #[test]
    fn single_qubit_products() {
        // X·Z = -iY
        let (p, odd) = ps("+X").mul_with_phase(&ps("+Z"));
        assert_eq!((p.to_string(), odd), ("-Y".to_string(), 1));
        // XX · ZZ = -(iY)(iY)... = -YY
        assert_eq!(ps("+XX").mul(&ps("+ZZ")).to_string(), "-YY");
        assert_eq!(ps("+YY").mul(&ps("+YY")).to_string(), "+II");
    }

    #[test]
    fn commutation() {
        assert!(ps("+XX").commutes_with(&ps("+ZZ")));
        assert!(!ps("+XI").commutes_with(&ps("+ZI")));
        assert!(ps("+XZ").commutes_with(&ps("+ZX")));
    }
}
