//! The `[[n, n-2, 2]]` stabilizer code used to make decoupling pulses
//! commute with the adiabatic Hamiltonian.
//!
//! The stabilizer is `{I, X, Y, Z}` with `X = ⊗σˣ`, `Y = ⊗σʸ`, `Z = ⊗σᶻ`
//! over all `n` physical qubits (`n` even). The encoded single-qubit
//! operators are weight-2:
//!
//! ```text
//! X̄_j = σˣ_1 σˣ_{j+1},   Z̄_j = σᶻ_{j+1} σᶻ_n     (1-based qubit labels)
//! ```
//!
//! so any Hamiltonian built from them stays 2-local per logical factor
//! and commutes with every stabilizer element.

use crate::error::{Error, Result};
use crate::linalg::{Operator, StateVector, C64};
use crate::pauli::{Pauli, PauliString, Phase};

/// Parameters of the `[[n, n-2, 2]]` code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeSpec {
    n_physical: usize,
}

impl CodeSpec {
    pub fn new(n_physical: usize) -> Result<CodeSpec> {
        if n_physical < 4 || n_physical % 2 != 0 {
            return Err(Error::input(format!(
                "code needs an even physical qubit count >= 4, got {n_physical}"
            )));
        }
        Ok(CodeSpec { n_physical })
    }

    /// Code for a given logical qubit count (`n_logical + 2` physical).
    pub fn for_logical(n_logical: usize) -> Result<CodeSpec> {
        CodeSpec::new(n_logical + 2)
    }

    pub fn n_physical(self) -> usize {
        self.n_physical
    }

    pub fn n_logical(self) -> usize {
        self.n_physical - 2
    }

    /// Physical Hilbert-space dimension `2^n`.
    pub fn dim(self) -> usize {
        1 << self.n_physical
    }
}

/// One term of a Hamiltonian written in the logical Pauli basis.
#[derive(Debug, Clone)]
pub struct LogicalPauliTerm {
    pub coefficient: f64,
    pub string: PauliString,
}

impl LogicalPauliTerm {
    pub fn new(coefficient: f64, string: PauliString) -> LogicalPauliTerm {
        LogicalPauliTerm {
            coefficient,
            string,
        }
    }
}

/// The four stabilizer elements `[I, X, Y, Z]` as phase-`+1` strings.
pub fn stabilizer_elements(spec: CodeSpec) -> [PauliString; 4] {
    let n = spec.n_physical();
    [
        PauliString::identity(n),
        PauliString::uniform(n, Pauli::X),
        PauliString::uniform(n, Pauli::Y),
        PauliString::uniform(n, Pauli::Z),
    ]
}

/// Encoded `X̄_j` (0-based `j < n_logical`): `σˣ` on physical qubits
/// `0` and `j+1`.
pub fn logical_x(spec: CodeSpec, j: usize) -> Result<PauliString> {
    check_logical_index(spec, j)?;
    let n = spec.n_physical();
    let mut factors = vec![Pauli::I; n];
    factors[0] = Pauli::X;
    factors[j + 1] = Pauli::X;
    Ok(PauliString::from_factors(factors))
}

/// Encoded `Z̄_j` (0-based `j < n_logical`): `σᶻ` on physical qubits
/// `j+1` and `n-1`.
pub fn logical_z(spec: CodeSpec, j: usize) -> Result<PauliString> {
    check_logical_index(spec, j)?;
    let n = spec.n_physical();
    let mut factors = vec![Pauli::I; n];
    factors[j + 1] = Pauli::Z;
    factors[n - 1] = Pauli::Z;
    Ok(PauliString::from_factors(factors))
}

fn check_logical_index(spec: CodeSpec, j: usize) -> Result<()> {
    if j >= spec.n_logical() {
        return Err(Error::input(format!(
            "logical index {j} out of range for {} logical qubits",
            spec.n_logical()
        )));
    }
    Ok(())
}

/// Maps a logical Pauli monomial to its physical encoding,
/// `Π_j (X̄_j)^{a_j} (Z̄_j)^{b_j}` with `Ȳ_j = i X̄_j Z̄_j`, keeping the
/// composed unit phase.
pub fn encode_pauli_monomial(spec: CodeSpec, p: &PauliString) -> Result<PauliString> {
    if p.len() != spec.n_logical() {
        return Err(Error::input(format!(
            "logical string has {} factors, expected {}",
            p.len(),
            spec.n_logical()
        )));
    }
    let mut acc = PauliString::identity(spec.n_physical()).with_phase(p.phase());
    for (j, factor) in p.factors().iter().enumerate() {
        let encoded = match factor {
            Pauli::I => continue,
            Pauli::X => logical_x(spec, j)?,
            Pauli::Z => logical_z(spec, j)?,
            Pauli::Y => logical_x(spec, j)?
                .mul(&logical_z(spec, j)?)?
                .times_phase(Phase::I),
        };
        acc = acc.mul(&encoded)?;
    }
    Ok(acc)
}

/// Dense matrix of `Σ_k c_k * encode(p_k)`; Hermitian because the
/// coefficients are real and every encoded monomial has a real phase
/// whenever the logical one does.
pub fn encode_hamiltonian(spec: CodeSpec, terms: &[LogicalPauliTerm]) -> Result<Operator> {
    let dim = spec.dim();
    let mut h = Operator::zeros(dim, dim);
    for term in terms {
        if !term.coefficient.is_finite() {
            return Err(Error::input(format!(
                "non-finite coefficient {} for term {}",
                term.coefficient, term.string
            )));
        }
        let encoded = encode_pauli_monomial(spec, &term.string)?;
        let m = encoded.matrix(spec.n_physical())?;
        h += m * C64::new(term.coefficient, 0.0);
    }
    Ok(h)
}

/// Codeword for a logical bit string: the unit vector fixed by both
/// stabilizer generators with eigenvalue `+1` and satisfying
/// `Z̄_j = (-1)^{bit_j}`.
///
/// Built by applying the projector `(I+X)(I+Z)/4` composed with the
/// logical-Z eigenvalue projectors to computational basis seeds in index
/// order, keeping the first non-vanishing image.
pub fn codeword(spec: CodeSpec, bits: &[bool]) -> Result<StateVector> {
    if bits.len() != spec.n_logical() {
        return Err(Error::input(format!(
            "bit string length {} does not match {} logical qubits",
            bits.len(),
            spec.n_logical()
        )));
    }
    let n = spec.n_physical();
    let dim = spec.dim();
    let id = Operator::identity(dim, dim);
    let half = C64::new(0.5, 0.0);

    let x = PauliString::uniform(n, Pauli::X).matrix(n)?;
    let z = PauliString::uniform(n, Pauli::Z).matrix(n)?;
    let mut proj = (&id + x) * half * ((&id + z) * half);
    for (j, &bit) in bits.iter().enumerate() {
        let zbar = logical_z(spec, j)?.matrix(n)?;
        let sign = if bit { -1.0 } else { 1.0 };
        proj = proj * ((&id + zbar * C64::new(sign, 0.0)) * half);
    }

    for seed in 0..dim {
        let mut v = StateVector::from(proj.column(seed).into_owned());
        let norm = v.norm();
        if norm > 1e-8 {
            v /= C64::new(norm, 0.0);
            return Ok(v);
        }
    }
    Err(Error::integrity(
        "codeword projector vanished on every basis seed",
    ))
}

/// All `2^{n_logical}` codewords in bit-string index order.
pub fn codewords(spec: CodeSpec) -> Result<Vec<StateVector>> {
    let k = spec.n_logical();
    (0..1usize << k)
        .map(|index| {
            let bits: Vec<bool> = (0..k).map(|j| (index >> (k - 1 - j)) & 1 == 1).collect();
            codeword(spec, &bits)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_norm;
    use approx::assert_relative_eq;

    fn spec4() -> CodeSpec {
        CodeSpec::new(4).unwrap()
    }

    #[test]
    fn rejects_odd_or_small_counts() {
        assert!(CodeSpec::new(3).is_err());
        assert!(CodeSpec::new(2).is_err());
        assert!(CodeSpec::new(6).is_ok());
    }

    #[test]
    fn stabilizer_x_is_all_x() {
        let [i, x, _, _] = stabilizer_elements(spec4());
        assert_eq!(x.to_string(), "+XXXX");
        assert!(i.is_identity_label());
    }

    #[test]
    fn xz_product_equals_y_up_to_unit_phase() {
        let [_, x, y, z] = stabilizer_elements(spec4());
        let xz = x.mul(&z).unwrap();
        assert_eq!(xz.factors(), y.factors());
        // phase is a unit by construction; for n=4 it is exactly +1
        assert_eq!(xz.phase(), Phase::ONE);
    }

    #[test]
    fn logical_operators_match_formulas() {
        let s = spec4();
        assert_eq!(logical_x(s, 0).unwrap().to_string(), "+XXII");
        assert_eq!(logical_x(s, 1).unwrap().to_string(), "+XIXI");
        assert_eq!(logical_z(s, 0).unwrap().to_string(), "+IZIZ");
        assert_eq!(logical_z(s, 1).unwrap().to_string(), "+IIZZ");
        assert!(logical_x(s, 2).is_err());
    }

    #[test]
    fn logical_pair_anticommutes_as_matrices() {
        let s = spec4();
        let x = logical_x(s, 0).unwrap().matrix(4).unwrap();
        let z = logical_z(s, 0).unwrap().matrix(4).unwrap();
        let anti = &x * &z + &z * &x;
        assert!(max_norm(&anti) < 1e-12);
    }

    #[test]
    fn logical_algebra_across_indices_commutes() {
        let s = spec4();
        for (a, b) in [(0usize, 1usize), (1, 0)] {
            let x = logical_x(s, a).unwrap();
            let z = logical_z(s, b).unwrap();
            assert!(x.commutes_with(&z));
        }
    }

    #[test]
    fn encode_identity_and_single_x() {
        let s = spec4();
        let id = encode_pauli_monomial(s, &PauliString::identity(2)).unwrap();
        assert!(id.is_identity_label());
        let x0 = PauliString::single(2, 0, Pauli::X).unwrap();
        assert_eq!(encode_pauli_monomial(s, &x0).unwrap().to_string(), "+XXII");
    }

    #[test]
    fn encode_zz_cancels_shared_qubit() {
        // Z̄_1 Z̄_2 = (Z on 2,4)(Z on 3,4) = Z on 2,3 (1-based labels)
        let s = spec4();
        let zz = PauliString::uniform(2, Pauli::Z);
        let enc = encode_pauli_monomial(s, &zz).unwrap();
        assert_eq!(enc.to_string(), "+IZZI");
    }

    #[test]
    fn encode_is_multiplicative() {
        let s = spec4();
        let x = PauliString::single(2, 0, Pauli::X).unwrap();
        let z = PauliString::single(2, 0, Pauli::Z).unwrap();
        let xz = x.mul(&z).unwrap();
        let lhs = encode_pauli_monomial(s, &xz).unwrap();
        let rhs = encode_pauli_monomial(s, &x)
            .unwrap()
            .mul(&encode_pauli_monomial(s, &z).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn encoded_y_is_hermitian() {
        let s = spec4();
        let y = PauliString::single(2, 1, Pauli::Y).unwrap();
        let enc = encode_pauli_monomial(s, &y).unwrap();
        assert!(enc.phase().is_real());
        let m = enc.matrix(4).unwrap();
        assert!(max_norm(&(&m - m.adjoint())) < 1e-14);
    }

    #[test]
    fn empty_hamiltonian_is_zero() {
        let h = encode_hamiltonian(spec4(), &[]).unwrap();
        assert!(max_norm(&h) == 0.0);
    }

    #[test]
    fn single_term_hamiltonian_matches_monomial() {
        let s = spec4();
        let zz = PauliString::uniform(2, Pauli::Z);
        let h = encode_hamiltonian(s, &[LogicalPauliTerm::new(1.0, zz.clone())]).unwrap();
        let m = encode_pauli_monomial(s, &zz).unwrap().matrix(4).unwrap();
        assert!(max_norm(&(h - m)) < 1e-14);
    }

    #[test]
    fn codewords_match_explicit_superpositions() {
        // For n=4 the codewords are pairwise superpositions of basis
        // states; indices listed as (bits, basis pair).
        let s = spec4();
        let cases: [(&[bool; 2], usize, usize); 4] = [
            (&[false, false], 0b0000, 0b1111),
            (&[false, true], 0b0101, 0b1010),
            (&[true, false], 0b0011, 0b1100),
            (&[true, true], 0b0110, 0b1001),
        ];
        let amp = std::f64::consts::FRAC_1_SQRT_2;
        for (bits, a, b) in cases {
            let v = codeword(s, bits).unwrap();
            assert_relative_eq!(v.norm(), 1.0, max_relative = 1e-12);
            assert!((v[a].re - amp).abs() < 1e-12, "bits {bits:?}");
            assert!((v[b].re - amp).abs() < 1e-12, "bits {bits:?}");
            let rest: f64 = (0..16)
                .filter(|i| *i != a && *i != b)
                .map(|i| v[i].norm())
                .sum();
            assert!(rest < 1e-12);
        }
    }

    /// Brute-force oracle: intersect the +1 eigenspaces of the stabilizer
    /// generators and the signed logical-Z operators, then compare with
    /// the projector construction.
    #[test]
    fn codeword_agrees_with_eigenspace_oracle() {
        let s = spec4();
        let n = 4;
        for bits in [[false, false], [true, true], [false, true]] {
            let mut ops: Vec<Operator> = vec![
                PauliString::uniform(n, Pauli::X).matrix(n).unwrap(),
                PauliString::uniform(n, Pauli::Z).matrix(n).unwrap(),
            ];
            for (j, &bit) in bits.iter().enumerate() {
                let sign = if bit { -1.0 } else { 1.0 };
                ops.push(logical_z(s, j).unwrap().matrix(n).unwrap() * C64::new(sign, 0.0));
            }
            // sum of the operators is maximized (eigenvalue = ops.len())
            // exactly on the joint +1 eigenspace
            let dim = s.dim();
            let mut sum = Operator::zeros(dim, dim);
            for op in &ops {
                sum += op;
            }
            let (values, vectors) = crate::linalg::hermitian_eigen(&(-sum)).unwrap();
            assert!((values[0] + ops.len() as f64).abs() < 1e-10);
            assert!(values[1] + ops.len() as f64 > 1e-6, "joint eigenspace is 1d");
            let oracle = StateVector::from(vectors.column(0).into_owned());
            let got = codeword(s, &bits).unwrap();
            let overlap = oracle.dotc(&got).norm();
            assert!((overlap - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn codewords_are_orthonormal_and_stabilized() {
        let s = spec4();
        let words = codewords(s).unwrap();
        assert_eq!(words.len(), 4);
        for (i, a) in words.iter().enumerate() {
            for (j, b) in words.iter().enumerate() {
                let overlap = a.dotc(b).norm();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((overlap - expect).abs() < 1e-12);
            }
        }
        let n = 4;
        for g in [
            PauliString::uniform(n, Pauli::X),
            PauliString::uniform(n, Pauli::Z),
        ] {
            let m = g.matrix(n).unwrap();
            for w in &words {
                let diff = &m * w - w.clone();
                assert!(diff.norm() < 1e-12);
            }
        }
    }

    /// Every physical single-qubit error anticommutes with at least one
    /// stabilizer element, so it can be averaged out by pulses.
    #[test]
    fn stabilizer_covers_all_single_qubit_errors() {
        let s = spec4();
        let [_, x, y, z] = stabilizer_elements(s);
        for qubit in 0..4 {
            for axis in [Pauli::X, Pauli::Y, Pauli::Z] {
                let err = PauliString::single(4, qubit, axis).unwrap();
                let covered = [&x, &y, &z].iter().any(|g| !g.commutes_with(&err));
                assert!(covered, "uncovered error {axis:?} on qubit {qubit}");
            }
        }
    }
}
