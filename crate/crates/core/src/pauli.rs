// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Signed Pauli strings in symplectic (bit-packed) form and the Clifford
//! conjugation rules for CNOT, H and S.
//!
//! A string stores one X bit and one Z bit per qubit; `(1, 1)` encodes Y
//! itself (not `XZ`), so every string with a `±1` sign is Hermitian. Qubit 0
//! is the leftmost character of the text form.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Elementary Clifford gate on one or two qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    Cnot { control: usize, target: usize },
    H(usize),
    S(usize),
}

impl CliffordGate {
    /// Checks the gate's qubit indices against an `n`-qubit register.
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            CliffordGate::Cnot { control, target } => {
                if control == target {
                    return Err(Error::InvalidGate(format!(
                        "CNOT control and target are both {control}"
                    )));
                }
                for index in [control, target] {
                    if index >= n {
                        return Err(Error::QubitOutOfRange { index, n });
                    }
                }
                Ok(())
            }
            CliffordGate::H(index) | CliffordGate::S(index) => {
                if index >= n {
                    Err(Error::QubitOutOfRange { index, n })
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Result of multiplying two Hermitian Pauli strings.
///
/// The product equals `pauli` when `imaginary` is false and `i * pauli`
/// when it is true.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliProduct {
    pub pauli: PauliString,
    pub imaginary: bool,
}

/// Signed `n`-qubit Pauli operator `±P_0 ⊗ P_1 ⊗ ... ⊗ P_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    negative: bool,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliString {
            n,
            x: vec![0; w],
            z: vec![0; w],
            negative: false,
        }
    }

    /// A single non-identity factor on `qubit`.
    pub fn single(n: usize, qubit: usize, pauli: Pauli) -> Result<Self> {
        let mut p = Self::identity(n);
        p.set(qubit, pauli)?;
        Ok(p)
    }

    /// Builds a string from `(qubit, pauli)` pairs; later pairs overwrite earlier ones.
    pub fn from_sparse(n: usize, factors: &[(usize, Pauli)]) -> Result<Self> {
        let mut p = Self::identity(n);
        for &(q, f) in factors {
            p.set(q, f)?;
        }
        Ok(p)
    }

    /// Parses a compact label such as `Z1Z10` or `-X3Y4`.
    ///
    /// Qubit numbers in this form are 1-based (`Z1` is qubit 0), which is how
    /// observables are usually written down by hand.
    pub fn from_sparse_label(n: usize, text: &str) -> Result<Self> {
        let err = |reason: &str| Error::PauliParse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = text.trim();
        let (negative, body) = split_sign(trimmed);
        if body.is_empty() {
            return Err(err("empty label"));
        }
        let mut p = Self::identity(n);
        p.negative = negative;
        let mut chars = body.chars().peekable();
        while let Some(c) = chars.next() {
            let pauli = Pauli::from_char(c).ok_or_else(|| err("expected one of I, X, Y, Z"))?;
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            if digits.is_empty() {
                return Err(err("missing qubit number"));
            }
            let label: usize = digits.parse().map_err(|_| err("bad qubit number"))?;
            if label == 0 {
                return Err(err("qubit numbers start at 1"));
            }
            if label > n {
                return Err(Error::QubitOutOfRange { index: label - 1, n });
            }
            if p.get(label - 1) != Pauli::I {
                return Err(err("qubit repeated"));
            }
            p.set(label - 1, pauli)?;
        }
        Ok(p)
    }

    /// Parses either the dense text form (`+XIZ`) or a compact label (`Z1Z10`).
    pub fn parse_observable(n: usize, text: &str) -> Result<Self> {
        if text.chars().any(|c| c.is_ascii_digit()) {
            Self::from_sparse_label(n, text)
        } else {
            let p: PauliString = text.parse()?;
            if p.n != n {
                return Err(Error::SizeMismatch { left: p.n, right: n });
            }
            Ok(p)
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// `+1` or `-1`.
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

    pub fn with_sign(mut self, negative: bool) -> Self {
        self.negative = negative;
        self
    }

    pub fn negate(&mut self) {
        self.negative = !self.negative;
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        let (w, b) = (qubit / WORD, qubit % WORD);
        Pauli::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    pub fn set(&mut self, qubit: usize, pauli: Pauli) -> Result<()> {
        if qubit >= self.n {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n: self.n,
            });
        }
        let (w, b) = (qubit / WORD, qubit % WORD);
        let (xb, zb) = pauli.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
        Ok(())
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// True if every factor is I or Z (diagonal in the computational basis).
    pub fn is_diagonal(&self) -> bool {
        self.x.iter().all(|&w| w == 0)
    }

    /// Bit mask of the support, one bit per qubit.
    pub fn support_mask(&self) -> Vec<u64> {
        self.x.iter().zip(&self.z).map(|(x, z)| x | z).collect()
    }

    /// Sorted qubit indices in the support.
    pub fn support(&self) -> Vec<usize> {
        mask_to_indices(&self.support_mask())
    }

    /// True if the support overlaps the given qubit mask.
    pub fn overlaps_mask(&self, mask: &[u64]) -> bool {
        self.x
            .iter()
            .zip(&self.z)
            .zip(mask)
            .any(|((x, z), m)| (x | z) & m != 0)
    }

    fn check_size(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            Err(Error::SizeMismatch {
                left: self.n,
                right: other.n,
            })
        } else {
            Ok(())
        }
    }

    /// True iff `self * other == other * self`.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_size(other)?;
        Ok(!self.anticommutes_unchecked(other))
    }

    /// Symplectic product parity. Both strings must have the same size.
    #[inline]
    pub fn anticommutes_unchecked(&self, other: &PauliString) -> bool {
        let mut acc = 0u64;
        for w in 0..self.x.len() {
            acc ^= (self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w]);
        }
        acc.count_ones() % 2 == 1
    }

    /// Product `self * other` with its phase.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliProduct> {
        self.check_size(other)?;
        // Phase exponent of i, mod 4.
        let mut exponent: i64 = 2 * (self.negative as i64 + other.negative as i64);
        for w in 0..self.x.len() {
            let mut both = (self.x[w] | self.z[w]) & (other.x[w] | other.z[w]);
            while both != 0 {
                let b = both.trailing_zeros();
                both &= both - 1;
                let bit = |v: u64| ((v >> b) & 1) as i64;
                let (x1, z1) = (bit(self.x[w]), bit(self.z[w]));
                let (x2, z2) = (bit(other.x[w]), bit(other.z[w]));
                exponent += match (x1, z1) {
                    (1, 1) => z2 - x2,
                    (1, 0) => z2 * (2 * x2 - 1),
                    (0, 1) => x2 * (1 - 2 * z2),
                    _ => 0,
                };
            }
        }
        let exponent = exponent.rem_euclid(4);
        let pauli = PauliString {
            n: self.n,
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
            negative: exponent >= 2,
        };
        Ok(PauliProduct {
            pauli,
            imaginary: exponent % 2 == 1,
        })
    }

    /// Multiplies in place, discarding the phase. Used for Pauli frames,
    /// where only the X/Z pattern matters.
    #[inline]
    pub fn mul_assign_unsigned(&mut self, other: &PauliString) {
        for w in 0..self.x.len() {
            self.x[w] ^= other.x[w];
            self.z[w] ^= other.z[w];
        }
    }

    /// Heisenberg-picture conjugation `U† P U`.
    pub fn conjugate(&self, gate: CliffordGate) -> Result<PauliString> {
        let mut p = self.clone();
        p.conjugate_in_place(gate)?;
        Ok(p)
    }

    /// Schrödinger-picture conjugation `U P U†`.
    pub fn conjugate_forward(&self, gate: CliffordGate) -> Result<PauliString> {
        let mut p = self.clone();
        p.conjugate_forward_in_place(gate)?;
        Ok(p)
    }

    pub fn conjugate_in_place(&mut self, gate: CliffordGate) -> Result<()> {
        gate.validate(self.n)?;
        self.apply_unchecked(gate, false);
        Ok(())
    }

    pub fn conjugate_forward_in_place(&mut self, gate: CliffordGate) -> Result<()> {
        gate.validate(self.n)?;
        self.apply_unchecked(gate, true);
        Ok(())
    }

    /// Conjugation without bounds checks; gates must already be validated
    /// against this string's size.
    #[inline]
    pub(crate) fn apply_unchecked(&mut self, gate: CliffordGate, forward: bool) {
        match gate {
            CliffordGate::H(q) => {
                let (w, b) = (q / WORD, q % WORD);
                let xb = (self.x[w] >> b) & 1;
                let zb = (self.z[w] >> b) & 1;
                self.negative ^= xb & zb == 1;
                self.x[w] = (self.x[w] & !(1 << b)) | (zb << b);
                self.z[w] = (self.z[w] & !(1 << b)) | (xb << b);
            }
            CliffordGate::S(q) => {
                let (w, b) = (q / WORD, q % WORD);
                let xb = (self.x[w] >> b) & 1;
                let zb = (self.z[w] >> b) & 1;
                // S X S† = Y, S Y S† = -X; S† X S = -Y, S† Y S = X.
                let flip = if forward { xb & zb } else { xb & (zb ^ 1) };
                self.negative ^= flip == 1;
                self.z[w] ^= xb << b;
            }
            CliffordGate::Cnot { control, target } => {
                // Self-inverse: both directions share one rule.
                let (wc, bc) = (control / WORD, control % WORD);
                let (wt, bt) = (target / WORD, target % WORD);
                let xc = (self.x[wc] >> bc) & 1;
                let zc = (self.z[wc] >> bc) & 1;
                let xt = (self.x[wt] >> bt) & 1;
                let zt = (self.z[wt] >> bt) & 1;
                self.negative ^= xc & zt & (xt ^ zc ^ 1) == 1;
                self.x[wt] ^= xc << bt;
                self.z[wc] ^= zt << bc;
            }
        }
    }
}

fn split_sign(text: &str) -> (bool, &str) {
    if let Some(rest) = text.strip_prefix('+') {
        (false, rest)
    } else if let Some(rest) = text.strip_prefix('-') {
        (true, rest)
    } else if let Some(rest) = text.strip_prefix('\u{2212}') {
        (true, rest)
    } else {
        (false, text)
    }
}

/// Sorted indices of the set bits of a word mask.
pub fn mask_to_indices(mask: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (w, &word) in mask.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            out.push(w * WORD + bits.trailing_zeros() as usize);
            bits &= bits - 1;
        }
    }
    out
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        for q in 0..self.n {
            write!(f, "{}", self.get(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (negative, body) = split_sign(text.trim());
        let n = body.chars().count();
        let mut p = PauliString::identity(n).with_sign(negative);
        for (q, c) in body.chars().enumerate() {
            let pauli = Pauli::from_char(c).ok_or_else(|| Error::PauliParse {
                text: text.to_string(),
                reason: format!("unexpected character {c:?}"),
            })?;
            p.set(q, pauli)?;
        }
        Ok(p)
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn commutation_examples() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        for q in ["XYZ", "ZZI", "YYY", "IIX"] {
            assert!(p("III").commutes(&p(q)).unwrap());
        }
    }

    #[test]
    fn size_mismatch_is_an_error() {
        assert!(matches!(
            p("XX").commutes(&p("X")),
            Err(Error::SizeMismatch { .. })
        ));
        assert!(p("XX").multiply(&p("XXX")).is_err());
    }

    #[test]
    fn conjugation_examples() {
        let z = PauliString::single(3, 1, Pauli::Z).unwrap();
        assert_eq!(z.conjugate(CliffordGate::H(1)).unwrap(), p("+IXI"));
        let zt = PauliString::single(2, 1, Pauli::Z).unwrap();
        let got = zt
            .conjugate(CliffordGate::Cnot {
                control: 0,
                target: 1,
            })
            .unwrap();
        assert_eq!(got, p("+ZZ"));
        // S† X S = -Y (checked against dense matrices in the integration tests).
        assert_eq!(p("X").conjugate(CliffordGate::S(0)).unwrap(), p("-Y"));
        assert_eq!(p("X").conjugate_forward(CliffordGate::S(0)).unwrap(), p("+Y"));
    }

    #[test]
    fn multiplication_examples() {
        let xx = p("X").multiply(&p("X")).unwrap();
        assert_eq!(xx.pauli, p("+I"));
        assert!(!xx.imaginary);

        // XZ = -iY
        let xz = p("X").multiply(&p("Z")).unwrap();
        assert!(xz.imaginary);
        assert_eq!(xz.pauli, p("-Y"));

        let q = p("-XYZI");
        let prod = q.multiply(&PauliString::identity(4)).unwrap();
        assert_eq!(prod.pauli, q);
        assert!(!prod.imaginary);
    }

    #[test]
    fn gate_validation() {
        let id = PauliString::identity(2);
        assert!(id
            .conjugate(CliffordGate::Cnot {
                control: 1,
                target: 1
            })
            .is_err());
        assert!(matches!(
            id.conjugate(CliffordGate::H(2)),
            Err(Error::QubitOutOfRange { index: 2, n: 2 })
        ));
    }

    #[test]
    fn text_forms() {
        assert_eq!(p("+XIZY").to_string(), "+XIZY");
        assert_eq!(p("\u{2212}ZZ").to_string(), "-ZZ");
        assert_eq!(p("XY").to_string(), "+XY");
        assert!("XQ".parse::<PauliString>().is_err());

        let label = PauliString::from_sparse_label(10, "Z1Z4Z10").unwrap();
        assert_eq!(label.support(), vec![0, 3, 9]);
        assert!(label.is_diagonal());
        assert!(PauliString::from_sparse_label(9, "Z10").is_err());
        assert!(PauliString::from_sparse_label(9, "Z0").is_err());
        assert!(PauliString::from_sparse_label(9, "Z1Z1").is_err());
        assert_eq!(
            PauliString::parse_observable(3, "-X2").unwrap().to_string(),
            "-IXI"
        );
        assert!(PauliString::parse_observable(3, "ZZ").is_err());
    }

    #[test]
    fn wide_strings_cross_word_boundaries() {
        let a = PauliString::from_sparse(130, &[(0, Pauli::X), (64, Pauli::Z), (129, Pauli::Y)])
            .unwrap();
        assert_eq!(a.weight(), 3);
        assert_eq!(a.support(), vec![0, 64, 129]);
        let b = PauliString::single(130, 64, Pauli::X).unwrap();
        assert!(!a.commutes(&b).unwrap());
        let c = a
            .conjugate(CliffordGate::Cnot {
                control: 129,
                target: 0,
            })
            .unwrap();
        assert_eq!(c.get(0), Pauli::I);
    }
}
