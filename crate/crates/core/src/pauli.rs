//! Single-qubit Pauli letters, signed Paulis and multi-qubit Pauli observables.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn x_bit(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    pub fn z_bit(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    pub fn commutes_with(self, other: Pauli) -> bool {
        (self.x_bit() & other.z_bit()) == (self.z_bit() & other.x_bit())
    }

    /// Product `self * other = i^k * r`, returned as `(k mod 4, r)`.
    pub fn mul(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        let r = Pauli::from_bits(self.x_bit() ^ other.x_bit(), self.z_bit() ^ other.z_bit());
        let k = match (self, other) {
            (X, Y) | (Y, Z) | (Z, X) => 1,
            (Y, X) | (Z, Y) | (X, Z) => 3,
            _ => 0,
        };
        (k, r)
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Single-qubit measurement basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::X, Basis::Y, Basis::Z];

    pub fn pauli(self) -> Pauli {
        match self {
            Basis::X => Pauli::X,
            Basis::Y => Pauli::Y,
            Basis::Z => Pauli::Z,
        }
    }

    pub fn from_pauli(p: Pauli) -> Option<Self> {
        match p {
            Pauli::X => Some(Basis::X),
            Pauli::Y => Some(Basis::Y),
            Pauli::Z => Some(Basis::Z),
            Pauli::I => None,
        }
    }

    pub fn to_char(self) -> char {
        self.pauli().to_char()
    }

    pub fn from_char(c: char) -> Option<Self> {
        Pauli::from_char(c).and_then(Basis::from_pauli)
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedPauli {
    pub negative: bool,
    pub pauli: Pauli,
}

impl SignedPauli {
    pub fn plus(pauli: Pauli) -> Self {
        SignedPauli {
            negative: false,
            pauli,
        }
    }

    pub fn minus(pauli: Pauli) -> Self {
        SignedPauli {
            negative: true,
            pauli,
        }
    }

    pub fn sign(self) -> f64 {
        if self.negative {
            -1.0
        } else {
            1.0
        }
    }

    pub fn negated(self) -> Self {
        SignedPauli {
            negative: !self.negative,
            pauli: self.pauli,
        }
    }
}

impl fmt::Display for SignedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.negative { '-' } else { '+' }, self.pauli)
    }
}

/// A tensor product of Pauli letters with an overall sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliObservable {
    letters: Vec<Pauli>,
    negative: bool,
}

impl PauliObservable {
    pub fn new(letters: Vec<Pauli>, negative: bool) -> Self {
        PauliObservable { letters, negative }
    }

    /// Parses strings such as `"ZZXXZZ"` or `"-XYI"`.
    pub fn parse(s: &str) -> Result<Self> {
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let letters = body
            .chars()
            .map(|c| {
                Pauli::from_char(c)
                    .ok_or_else(|| Error::InvalidArgument(format!("bad Pauli letter '{c}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliObservable { letters, negative })
    }

    pub fn identity(n: usize) -> Self {
        PauliObservable::new(vec![Pauli::I; n], false)
    }

    /// `letter` on each of `qubits`, identity elsewhere.
    pub fn on(n: usize, letter: Pauli, qubits: &[usize]) -> Self {
        let mut letters = vec![Pauli::I; n];
        for &q in qubits {
            letters[q] = letter;
        }
        PauliObservable::new(letters, false)
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn negative(&self) -> bool {
        self.negative
    }

    pub fn arity(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }
}

impl fmt::Display for PauliObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        for p in &self.letters {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_follow_cyclic_rule() {
        assert_eq!(Pauli::X.mul(Pauli::Y), (1, Pauli::Z));
        assert_eq!(Pauli::Y.mul(Pauli::X), (3, Pauli::Z));
        assert_eq!(Pauli::Z.mul(Pauli::Z), (0, Pauli::I));
        assert_eq!(Pauli::Z.mul(Pauli::X), (1, Pauli::Y));
    }

    #[test]
    fn commutation() {
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                let expect = a == Pauli::I || b == Pauli::I || a == b;
                assert_eq!(a.commutes_with(b), expect, "{a}{b}");
            }
        }
    }

    #[test]
    fn observable_parse_roundtrip() {
        let o = PauliObservable::parse("-ZZXXZZ").unwrap();
        assert!(o.negative());
        assert_eq!(o.to_string(), "-ZZXXZZ");
        assert!(PauliObservable::parse("ZQ").is_err());
    }
}
