//! Pauli operators and multi-qubit Pauli strings in symplectic form.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{kron_all, Operator, C64, I, ONE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn operator(self) -> Operator {
        match self {
            Pauli::I => Operator::identity(2),
            Pauli::X => Operator::pauli_x(),
            Pauli::Y => Operator::pauli_y(),
            Pauli::Z => Operator::pauli_z(),
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
}

/// `i^phase * X^x * Z^z` on `n` qubits. Bit `n-1-q` of the masks belongs to
/// qubit `q`, matching basis-index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u32,
    z: u32,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!((1..=32).contains(&n));
        Self {
            n,
            x: 0,
            z: 0,
            phase: 0,
        }
    }

    /// Tensor product of `factors`, qubit 0 first.
    pub fn from_factors(factors: &[Pauli]) -> Self {
        let n = factors.len();
        let mut s = Self::identity(n);
        for (q, p) in factors.iter().enumerate() {
            let bit = 1u32 << (n - 1 - q);
            let (x, z) = p.bits();
            if x {
                s.x |= bit;
            }
            if z {
                s.z |= bit;
            }
            // Y = i X Z
            if x && z {
                s.phase = (s.phase + 1) % 4;
            }
        }
        s
    }

    pub fn single(n: usize, qubit: usize, pauli: Pauli) -> Self {
        assert!(qubit < n);
        let mut factors = vec![Pauli::I; n];
        factors[qubit] = pauli;
        Self::from_factors(&factors)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u32 {
        self.x
    }

    pub fn z_mask(&self) -> u32 {
        self.z
    }

    /// Global phase as a power of `i`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    /// The factor acting on `qubit`, ignoring the global phase.
    pub fn factor(&self, qubit: usize) -> Pauli {
        let bit = 1u32 << (self.n - 1 - qubit);
        match (self.x & bit != 0, self.z & bit != 0) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// Image of the basis state `|index>`: `P|index> = coeff |target>`.
    #[inline]
    pub fn apply_to_basis(&self, index: usize) -> (usize, C64) {
        let sign = (self.z & index as u32).count_ones() % 2;
        // i^phase * (-1)^sign
        let k = (self.phase + 2 * sign as u8) % 4;
        (index ^ self.x as usize, i_pow(k))
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        assert_eq!(self.n, other.n);
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    pub fn adjoint(&self) -> PauliString {
        let swap = 2 * ((self.x & self.z).count_ones() % 2) as u8;
        PauliString {
            phase: (4 - self.phase + swap) % 4,
            ..*self
        }
    }

    /// Dense matrix built from the 2x2 factors.
    pub fn to_operator(&self) -> Operator {
        let factors: Vec<Operator> = (0..self.n)
            .map(|q| match self.factor(q) {
                // from_factors already folded Y's i into the phase; undo it here.
                Pauli::Y => &Pauli::X.operator() * &Pauli::Z.operator(),
                p => p.operator(),
            })
            .collect();
        let m = kron_all(&factors).into_matrix();
        Operator::new(m * i_pow(self.phase))
    }
}

impl std::ops::Mul for PauliString {
    type Output = PauliString;

    fn mul(self, rhs: PauliString) -> PauliString {
        assert_eq!(self.n, rhs.n);
        // X^a Z^b X^c Z^d = (-1)^{|b & c|} X^{a^c} Z^{b^d}
        let swap = 2 * ((self.z & rhs.x).count_ones() % 2) as u8;
        PauliString {
            n: self.n,
            x: self.x ^ rhs.x,
            z: self.z ^ rhs.z,
            phase: (self.phase + rhs.phase + swap) % 4,
        }
    }
}

fn i_pow(k: u8) -> C64 {
    match k % 4 {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

/// A single-qubit Pauli error `P_q`, or the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliError {
    pub pauli: Pauli,
    pub qubit: usize,
}

impl PauliError {
    pub const IDENTITY: PauliError = PauliError {
        pauli: Pauli::I,
        qubit: 0,
    };

    pub fn new(pauli: Pauli, qubit: usize) -> Self {
        if pauli == Pauli::I {
            Self::IDENTITY
        } else {
            Self { pauli, qubit }
        }
    }

    pub fn to_string_on(&self, n: usize) -> PauliString {
        if self.pauli == Pauli::I {
            PauliString::identity(n)
        } else {
            PauliString::single(n, self.qubit, self.pauli)
        }
    }
}

impl fmt::Display for PauliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pauli {
            Pauli::I => write!(f, "I"),
            Pauli::X => write!(f, "X{}", self.qubit),
            Pauli::Y => write!(f, "Y{}", self.qubit),
            Pauli::Z => write!(f, "Z{}", self.qubit),
        }
    }
}

impl FromStr for PauliError {
    type Err = Error;

    /// Parses `I`, or `X`/`Y`/`Z` followed by a qubit index.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPauliLabel(s.to_string());
        let mut chars = s.chars();
        let pauli = match chars.next().ok_or_else(bad)? {
            'I' => Pauli::I,
            'X' => Pauli::X,
            'Y' => Pauli::Y,
            'Z' => Pauli::Z,
            _ => return Err(bad()),
        };
        let rest = chars.as_str();
        if pauli == Pauli::I {
            return if rest.is_empty() {
                Ok(Self::IDENTITY)
            } else {
                Err(bad())
            };
        }
        let qubit: usize = rest.parse().map_err(|_| bad())?;
        Ok(Self { pauli, qubit })
    }
}
