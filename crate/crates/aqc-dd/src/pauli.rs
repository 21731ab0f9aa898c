//! Phase-tracked Pauli strings on n qubits.
//!
//! A [`PauliString`] is a unit phase (one of `±1, ±i`) times a tensor
//! product of single-qubit Pauli factors. Products compose exactly, so
//! pulse coalescing and operator encoding never lose sign information.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Single-qubit Pauli factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// 2x2 matrix of this factor.
    pub fn matrix(self) -> DMatrix<Complex64> {
        let (a, b, c, d) = match self {
            Pauli::I => ((1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)),
            Pauli::X => ((0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)),
            Pauli::Y => ((0.0, 0.0), (0.0, -1.0), (0.0, 1.0), (0.0, 0.0)),
            Pauli::Z => ((1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)),
        };
        DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(a.0, a.1),
                Complex64::new(b.0, b.1),
                Complex64::new(c.0, c.1),
                Complex64::new(d.0, d.1),
            ],
        )
    }

    fn label(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn from_label(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Single-qubit product `a * b = i^k * c`; returns `(k, c)`.
fn mul_single(a: Pauli, b: Pauli) -> (u8, Pauli) {
    use Pauli::*;
    match (a, b) {
        (I, p) | (p, I) => (0, p),
        (X, X) | (Y, Y) | (Z, Z) => (0, I),
        (X, Y) => (1, Z),
        (Y, X) => (3, Z),
        (Y, Z) => (1, X),
        (Z, Y) => (3, X),
        (Z, X) => (1, Y),
        (X, Z) => (3, Y),
    }
}

/// Unit phase `i^k` with `k` in `0..4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn times(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }

    pub fn conjugate(self) -> Phase {
        Phase((4 - self.0) % 4)
    }

    /// True for `+1` and `-1`.
    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn value(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    fn label(self) -> &'static str {
        match self.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        }
    }
}

/// A phased tensor product of single-qubit Pauli factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    phase: Phase,
    factors: Vec<Pauli>,
}

impl PauliString {
    /// Identity string on `n` qubits with phase `+1`.
    pub fn identity(n: usize) -> PauliString {
        PauliString {
            phase: Phase::ONE,
            factors: vec![Pauli::I; n],
        }
    }

    /// String with `axis` on `qubit` (0-based) and identity elsewhere.
    pub fn single(n: usize, qubit: usize, axis: Pauli) -> Result<PauliString> {
        if qubit >= n {
            return Err(Error::input(format!(
                "qubit index {qubit} out of range for {n} qubits"
            )));
        }
        let mut factors = vec![Pauli::I; n];
        factors[qubit] = axis;
        Ok(PauliString {
            phase: Phase::ONE,
            factors,
        })
    }

    /// Same factor on every qubit (the stabilizer elements are built this way).
    pub fn uniform(n: usize, axis: Pauli) -> PauliString {
        PauliString {
            phase: Phase::ONE,
            factors: vec![axis; n],
        }
    }

    pub fn from_factors(factors: Vec<Pauli>) -> PauliString {
        PauliString {
            phase: Phase::ONE,
            factors,
        }
    }

    pub fn with_phase(mut self, phase: Phase) -> PauliString {
        self.phase = phase;
        self
    }

    /// Multiplies the phase by `phase`, leaving factors untouched.
    pub fn times_phase(mut self, phase: Phase) -> PauliString {
        self.phase = self.phase.times(phase);
        self
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn factors(&self) -> &[Pauli] {
        &self.factors
    }

    pub fn factor(&self, qubit: usize) -> Pauli {
        self.factors[qubit]
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.factors.iter().filter(|p| **p != Pauli::I).count()
    }

    /// True when every factor is the identity (the phase may still be any unit).
    pub fn is_identity_label(&self) -> bool {
        self.factors.iter().all(|p| *p == Pauli::I)
    }

    /// Product `self * other` with the composed unit phase.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.len() != other.len() {
            return Err(Error::input(format!(
                "pauli string length mismatch: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        let mut k = (self.phase.0 + other.phase.0) % 4;
        let factors = self
            .factors
            .iter()
            .zip(&other.factors)
            .map(|(&a, &b)| {
                let (dk, c) = mul_single(a, b);
                k = (k + dk) % 4;
                c
            })
            .collect();
        Ok(PauliString {
            phase: Phase(k),
            factors,
        })
    }

    /// Hermitian adjoint (conjugates the phase; factors are self-adjoint).
    pub fn adjoint(&self) -> PauliString {
        PauliString {
            phase: self.phase.conjugate(),
            factors: self.factors.clone(),
        }
    }

    /// True when `self * other == other * self`; Pauli strings either
    /// commute or anticommute, decided by the parity of positions whose
    /// factors anticommute.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .factors
            .iter()
            .zip(&other.factors)
            .filter(|(&a, &b)| a != Pauli::I && b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    /// Dense matrix `phase * p_1 ⊗ p_2 ⊗ ... ⊗ p_n`, qubit 0 first
    /// (most significant bit of the basis index).
    pub fn matrix(&self, n: usize) -> Result<DMatrix<Complex64>> {
        if self.len() != n {
            return Err(Error::input(format!(
                "pauli string has {} factors, expected {n}",
                self.len()
            )));
        }
        let mut m = DMatrix::from_element(1, 1, self.phase.value());
        for p in &self.factors {
            m = m.kronecker(&p.matrix());
        }
        Ok(m)
    }
}

/// `pauli_string_matrix` spelled as a free function for callers that work
/// with explicit qubit counts.
pub fn pauli_string_matrix(p: &PauliString, n: usize) -> Result<DMatrix<Complex64>> {
    p.matrix(n)
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.phase.label())?;
        for p in &self.factors {
            write!(f, "{}", p.label())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses the `Display` format, e.g. `+XXIZ`, `-iYIII`, `ZZ` (bare
    /// strings read as phase `+1`).
    fn from_str(s: &str) -> Result<PauliString> {
        let (phase, rest) = if let Some(r) = s.strip_prefix("+i") {
            (Phase::I, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (Phase::MINUS_I, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Phase::ONE, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (Phase::MINUS_ONE, r)
        } else {
            (Phase::ONE, s)
        };
        let factors = rest
            .chars()
            .map(|c| {
                Pauli::from_label(c)
                    .ok_or_else(|| Error::input(format!("invalid pauli label '{c}' in '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        if factors.is_empty() {
            return Err(Error::input(format!("empty pauli string '{s}'")));
        }
        Ok(PauliString { phase, factors })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn single_qubit_matrices() {
        let x = PauliString::single(1, 0, Pauli::X).unwrap();
        let m = x.matrix(1).unwrap();
        assert_eq!(m[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(m[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(m[(0, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn identity_tensor_is_identity() {
        let id = PauliString::identity(2);
        let m = id.matrix(2).unwrap();
        assert_eq!(max_abs_diff(&m, &DMatrix::identity(4, 4)), 0.0);
    }

    #[test]
    fn zz_is_diagonal_signs() {
        let zz = PauliString::uniform(2, Pauli::Z);
        let m = zz.matrix(2).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| m[(i, i)].re).collect();
        assert_eq!(diag, vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn length_mismatch_is_input_error() {
        let p = PauliString::identity(3);
        assert!(matches!(p.matrix(2), Err(Error::Input(_))));
        let q = PauliString::identity(2);
        assert!(matches!(p.mul(&q), Err(Error::Input(_))));
    }

    #[test]
    fn single_qubit_products_carry_phases() {
        // XY = iZ, YX = -iZ
        let x = PauliString::single(1, 0, Pauli::X).unwrap();
        let y = PauliString::single(1, 0, Pauli::Y).unwrap();
        let xy = x.mul(&y).unwrap();
        assert_eq!(xy.phase(), Phase::I);
        assert_eq!(xy.factors(), &[Pauli::Z]);
        let yx = y.mul(&x).unwrap();
        assert_eq!(yx.phase(), Phase::MINUS_I);
    }

    #[test]
    fn display_roundtrip() {
        for s in ["+XXIZ", "-iYIII", "+iZZZZ", "-XY"] {
            let p: PauliString = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        let bare: PauliString = "ZZ".parse().unwrap();
        assert_eq!(bare.to_string(), "+ZZ");
    }

    fn arb_pauli_string(n: usize) -> impl Strategy<Value = PauliString> {
        (
            0u8..4,
            proptest::collection::vec(0usize..4, n),
        )
            .prop_map(move |(k, axes)| {
                let factors = axes.iter().map(|&a| Pauli::ALL[a]).collect();
                PauliString::from_factors(factors).with_phase(Phase(k))
            })
    }

    proptest! {
        // Product closure: matrix(p*q) == matrix(p)*matrix(q) entrywise.
        #[test]
        fn product_matches_matrix_product(
            (p, q) in (1usize..=4).prop_flat_map(|n| (arb_pauli_string(n), arb_pauli_string(n)))
        ) {
            let n = p.len();
            let pq = p.mul(&q).unwrap();
            let lhs = pq.matrix(n).unwrap();
            let rhs = p.matrix(n).unwrap() * q.matrix(n).unwrap();
            prop_assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
        }

        // commutes_with agrees with the matrix commutator.
        #[test]
        fn commutation_matches_matrices(
            (p, q) in (1usize..=3).prop_flat_map(|n| (arb_pauli_string(n), arb_pauli_string(n)))
        ) {
            let n = p.len();
            let a = p.matrix(n).unwrap();
            let b = q.matrix(n).unwrap();
            let comm = &a * &b - &b * &a;
            let is_zero = comm.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12;
            prop_assert_eq!(p.commutes_with(&q), is_zero);
        }
    }

    #[test]
    fn adjoint_conjugates_phase() {
        let p: PauliString = "+iXZ".parse().unwrap();
        assert_eq!(p.adjoint().phase(), Phase::MINUS_I);
        // p * p^dagger = +I
        let prod = p.mul(&p.adjoint()).unwrap();
        assert!(prod.is_identity_label());
        assert_eq!(prod.phase(), Phase::ONE);
    }
}
