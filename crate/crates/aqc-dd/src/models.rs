//! The two adiabatic algorithms as logical Pauli polynomials, their
//! interpolation schedules, gap scans and target states.
//!
//! Grover search interpolates `H(f) = (1-f)(I - |u><u|) + f(I - |m><m|)`
//! along the arctan-optimized schedule; 2-SAT on a ring is the
//! transverse-field Ising sweep `H(s) = (1-s) Σ (I - σˣ_j)
//! + s Σ ½(I - σᶻ_j σᶻ_{j+1})` with periodic boundary conditions and a
//! linear schedule. For two logical qubits the ring visits the (1,2) bond
//! twice; the doubled coefficient is kept as written.

use serde::{Deserialize, Serialize};

use crate::encoding::{self, CodeSpec, LogicalPauliTerm};
use crate::error::{Error, Result};
use crate::linalg::{self, Operator, StateVector, C64, DEGENERACY_TOL};
use crate::pauli::{Pauli, PauliString};

/// Which algorithm a model runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Grover,
    #[serde(rename = "twosat")]
    TwoSat,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Grover => "grover",
            Algorithm::TwoSat => "twosat",
        }
    }
}

/// An adiabatic computation: algorithm, size, marked state (Grover) and
/// total run time. The schedule is fixed by the algorithm.
#[derive(Debug, Clone)]
pub struct AdiabaticModel {
    kind: Algorithm,
    n_logical: usize,
    marked: Vec<bool>,
    total_time: f64,
}

impl AdiabaticModel {
    pub fn grover(n_logical: usize, marked: Vec<bool>, total_time: f64) -> Result<AdiabaticModel> {
        if marked.len() != n_logical {
            return Err(Error::input(format!(
                "marked state has {} bits, expected {n_logical}",
                marked.len()
            )));
        }
        if total_time <= 0.0 {
            return Err(Error::input("total time must be positive".to_string()));
        }
        Ok(AdiabaticModel {
            kind: Algorithm::Grover,
            n_logical,
            marked,
            total_time,
        })
    }

    pub fn twosat(n_logical: usize, total_time: f64) -> Result<AdiabaticModel> {
        if total_time <= 0.0 {
            return Err(Error::input("total time must be positive".to_string()));
        }
        Ok(AdiabaticModel {
            kind: Algorithm::TwoSat,
            n_logical,
            marked: Vec::new(),
            total_time,
        })
    }

    pub fn kind(&self) -> Algorithm {
        self.kind
    }

    pub fn n_logical(&self) -> usize {
        self.n_logical
    }

    pub fn marked(&self) -> &[bool] {
        &self.marked
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    /// Same model with a different total run time.
    pub fn with_total_time(&self, total_time: f64) -> AdiabaticModel {
        AdiabaticModel {
            total_time,
            ..self.clone()
        }
    }

    /// Interpolation value `f` at time `t`.
    pub fn schedule(&self, t: f64) -> Result<f64> {
        match self.kind {
            Algorithm::Grover => {
                grover_schedule(t, self.total_time, 1usize << self.n_logical)
            }
            Algorithm::TwoSat => {
                if !(0.0..=self.total_time).contains(&t) {
                    return Err(Error::input(format!(
                        "time {t} outside [0, {}]",
                        self.total_time
                    )));
                }
                Ok(t / self.total_time)
            }
        }
    }

    /// Logical Pauli terms of the Hamiltonian at time `t`.
    pub fn logical_terms(&self, t: f64) -> Result<Vec<LogicalPauliTerm>> {
        let f = self.schedule(t)?;
        Ok(self.logical_terms_at_f(f))
    }

    /// Logical Pauli terms at a given interpolation value.
    pub fn logical_terms_at_f(&self, f: f64) -> Vec<LogicalPauliTerm> {
        match self.kind {
            Algorithm::Grover => grover_logical_hamiltonian(f, self.n_logical, &self.marked),
            Algorithm::TwoSat => twosat_logical_hamiltonian(f, self.n_logical),
        }
    }

    /// Dense logical Hamiltonian (dimension `2^{n_logical}`) at
    /// interpolation value `f`.
    pub fn logical_matrix_at_f(&self, f: f64) -> Result<Operator> {
        let n = self.n_logical;
        let dim = 1usize << n;
        let mut h = Operator::zeros(dim, dim);
        for term in self.logical_terms_at_f(f) {
            h += term.string.matrix(n)? * C64::new(term.coefficient, 0.0);
        }
        Ok(h)
    }
}

/// The arctan-optimized Grover interpolation
/// `f(t) = 1/2 - tan[(1 - 2t/T) arccos(1/√N)] / (2√(N-1))`.
pub fn grover_schedule(t: f64, total_time: f64, n_states: usize) -> Result<f64> {
    if n_states < 2 {
        return Err(Error::input(format!("need N >= 2, got {n_states}")));
    }
    if !(0.0..=total_time).contains(&t) {
        return Err(Error::input(format!("time {t} outside [0, {total_time}]")));
    }
    let n = n_states as f64;
    let theta = (1.0 / n.sqrt()).acos();
    let f = 0.5 - ((1.0 - 2.0 * t / total_time) * theta).tan() / (2.0 * (n - 1.0).sqrt());
    Ok(f.clamp(0.0, 1.0))
}

/// Pauli-basis expansion of
/// `(1-f)(I - |u><u|) + f(I - |m><m|)` on `n_logical` qubits:
/// `|u><u|` expands into all-X monomials with weight `1/N`, `|m><m|`
/// into all-Z monomials with signs `(-1)^{b·m}`.
pub fn grover_logical_hamiltonian(
    f: f64,
    n_logical: usize,
    marked: &[bool],
) -> Vec<LogicalPauliTerm> {
    let count = 1usize << n_logical;
    let weight = 1.0 / count as f64;
    let mut terms = Vec::with_capacity(2 * count);
    // identity: (1-f) + f - [(1-f) + f]/N
    terms.push(LogicalPauliTerm::new(
        1.0 - weight,
        PauliString::identity(n_logical),
    ));
    for mask in 1..count {
        let x_factors: Vec<Pauli> = (0..n_logical)
            .map(|j| {
                if (mask >> (n_logical - 1 - j)) & 1 == 1 {
                    Pauli::X
                } else {
                    Pauli::I
                }
            })
            .collect();
        terms.push(LogicalPauliTerm::new(
            -(1.0 - f) * weight,
            PauliString::from_factors(x_factors),
        ));

        let mut sign = 1.0;
        let z_factors: Vec<Pauli> = (0..n_logical)
            .map(|j| {
                if (mask >> (n_logical - 1 - j)) & 1 == 1 {
                    if marked[j] {
                        sign = -sign;
                    }
                    Pauli::Z
                } else {
                    Pauli::I
                }
            })
            .collect();
        terms.push(LogicalPauliTerm::new(
            -f * sign * weight,
            PauliString::from_factors(z_factors),
        ));
    }
    terms
}

/// `(1-s) Σ_j (I - σˣ_j) + s Σ_j ½(I - σᶻ_j σᶻ_{j+1})` with the ring
/// closed periodically; for `n_logical = 2` the single bond appears twice.
pub fn twosat_logical_hamiltonian(s: f64, n_logical: usize) -> Vec<LogicalPauliTerm> {
    let n = n_logical;
    let mut terms = Vec::with_capacity(2 * n + 1);
    terms.push(LogicalPauliTerm::new(
        (1.0 - s) * n as f64 + s * 0.5 * n as f64,
        PauliString::identity(n),
    ));
    for j in 0..n {
        terms.push(LogicalPauliTerm::new(
            -(1.0 - s),
            PauliString::single(n, j, Pauli::X).expect("index in range"),
        ));
    }
    // collect ZZ bonds, merging duplicates from the periodic closure
    let mut bond_terms: Vec<(Vec<Pauli>, f64)> = Vec::new();
    for j in 0..n {
        let k = (j + 1) % n;
        let mut factors = vec![Pauli::I; n];
        if j == k {
            // n = 1 ring degenerates to σᶻσᶻ = I; fold into the identity
            terms[0].coefficient -= s * 0.5;
            continue;
        }
        factors[j] = Pauli::Z;
        factors[k] = Pauli::Z;
        if let Some(entry) = bond_terms.iter_mut().find(|(f, _)| *f == factors) {
            entry.1 -= s * 0.5;
        } else {
            bond_terms.push((factors, -s * 0.5));
        }
    }
    for (factors, coefficient) in bond_terms {
        terms.push(LogicalPauliTerm::new(
            coefficient,
            PauliString::from_factors(factors),
        ));
    }
    terms
}

/// Encoded Hamiltonian at time `t`: the logical terms at `f(t)` pushed
/// through the code.
pub fn encoded_hamiltonian_at(model: &AdiabaticModel, t: f64, spec: CodeSpec) -> Result<Operator> {
    let terms = model.logical_terms(t)?;
    encoding::encode_hamiltonian(spec, &terms)
}

/// Both interpolation endpoints encoded once; the Hamiltonian at any
/// schedule value is the affine combination of the two, so sweeps never
/// re-expand Pauli terms in inner loops.
#[derive(Debug, Clone)]
pub struct EncodedSystem {
    model: AdiabaticModel,
    spec: CodeSpec,
    h_begin: Operator,
    h_problem: Operator,
    error_generators: Vec<Operator>,
}

impl EncodedSystem {
    pub fn new(model: AdiabaticModel, spec: CodeSpec) -> Result<EncodedSystem> {
        if spec.n_logical() != model.n_logical() {
            return Err(Error::input(format!(
                "code has {} logical qubits, model needs {}",
                spec.n_logical(),
                model.n_logical()
            )));
        }
        let h_begin = encoding::encode_hamiltonian(spec, &model.logical_terms_at_f(0.0))?;
        let h_problem = encoding::encode_hamiltonian(spec, &model.logical_terms_at_f(1.0))?;
        let mut error_generators = Vec::with_capacity(3 * spec.n_physical());
        for qubit in 0..spec.n_physical() {
            for axis in [Pauli::X, Pauli::Y, Pauli::Z] {
                let p = PauliString::single(spec.n_physical(), qubit, axis)?;
                error_generators.push(p.matrix(spec.n_physical())?);
            }
        }
        Ok(EncodedSystem {
            model,
            spec,
            h_begin,
            h_problem,
            error_generators,
        })
    }

    /// Per-channel error generators `σ^μ_j` in noise channel order
    /// (qubit-major, axes x, y, z).
    pub fn error_generators(&self) -> &[Operator] {
        &self.error_generators
    }

    pub fn model(&self) -> &AdiabaticModel {
        &self.model
    }

    pub fn spec(&self) -> CodeSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    /// `H̄(t) = H̄_begin + f(t) (H̄_problem - H̄_begin)`; both models are
    /// affine in the schedule value, so this equals the term-by-term
    /// encoding at `f(t)`.
    pub fn hamiltonian_at(&self, t: f64) -> Result<Operator> {
        let f = self.model.schedule(t)?;
        Ok(self.hamiltonian_at_f(f))
    }

    pub fn hamiltonian_at_f(&self, f: f64) -> Operator {
        let c = C64::new(f, 0.0);
        &self.h_begin * C64::new(1.0 - f, 0.0) + &self.h_problem * c
    }

    /// Spectral norm bound over the sweep, used to pick integrator steps.
    pub fn hamiltonian_scale(&self) -> f64 {
        let mut scale: f64 = 0.0;
        for k in 0..=10 {
            let h = self.hamiltonian_at_f(k as f64 / 10.0);
            if let Ok((values, _)) = linalg::hermitian_eigen(&h) {
                let bound = values
                    .iter()
                    .map(|v| v.abs())
                    .fold(0.0_f64, f64::max);
                scale = scale.max(bound);
            }
        }
        scale
    }
}

/// Per-instant gaps along the schedule plus the refined minimum.
#[derive(Debug, Clone)]
pub struct GapProfile {
    pub samples: Vec<(f64, f64)>,
    pub min_gap: f64,
    pub argmin: f64,
}

/// Scans the spectral gap of the logical Hamiltonian over `s ∈ [0, 1]`
/// and refines the coarse minimum with a three-point parabolic fit.
///
/// For the 2-SAT ring the scan is restricted to the even sector of the
/// global `⊗σˣ` parity, which the sweep preserves: on the full spectrum
/// the symmetry doublet collapses near `s = 1` and would report a
/// spurious vanishing gap.
pub fn gap_scan(model: &AdiabaticModel, grid_points: usize) -> Result<GapProfile> {
    if grid_points < 3 {
        return Err(Error::input(format!(
            "need at least 3 grid points, got {grid_points}"
        )));
    }
    let gap_at = |s: f64| -> Result<f64> {
        let h = model.logical_matrix_at_f(apply_schedule(model, s)?)?;
        match model.kind() {
            Algorithm::Grover => linalg::spectral_gap(&h, DEGENERACY_TOL),
            Algorithm::TwoSat => {
                let basis = even_x_parity_basis(model.n_logical());
                let restricted = basis.adjoint() * h * &basis;
                linalg::spectral_gap(&restricted, DEGENERACY_TOL)
            }
        }
    };

    let mut samples = Vec::with_capacity(grid_points);
    for k in 0..grid_points {
        let s = k as f64 / (grid_points - 1) as f64;
        samples.push((s, gap_at(s)?));
    }
    let (mut argmin, mut min_gap) = samples
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty samples");

    // parabolic refinement around the coarse minimum
    let idx = samples
        .iter()
        .position(|&(s, _)| s == argmin)
        .expect("argmin in samples");
    if idx > 0 && idx + 1 < samples.len() {
        let (s0, g0) = samples[idx - 1];
        let (s1, g1) = samples[idx];
        let (s2, g2) = samples[idx + 1];
        let denom = (s0 - s1) * (s0 - s2) * (s1 - s2);
        if denom.abs() > 0.0 {
            let a = (s2 * (g1 - g0) + s1 * (g0 - g2) + s0 * (g2 - g1)) / denom;
            if a > 0.0 {
                let b = (s2 * s2 * (g0 - g1) + s1 * s1 * (g2 - g0) + s0 * s0 * (g1 - g2)) / denom;
                let vertex = (-b / (2.0 * a)).clamp(s0, s2);
                let refined = gap_at(vertex)?;
                if refined < min_gap {
                    min_gap = refined;
                    argmin = vertex;
                }
            }
        }
    }

    Ok(GapProfile {
        samples,
        min_gap,
        argmin,
    })
}

fn apply_schedule(model: &AdiabaticModel, s: f64) -> Result<f64> {
    model.schedule(s * model.total_time())
}

/// Orthonormal basis of the `+1` eigenspace of `⊗σˣ`: columns
/// `(|b> + |~b>)/√2` over bit strings paired with their complements.
fn even_x_parity_basis(n: usize) -> Operator {
    let dim = 1usize << n;
    let half = dim / 2;
    let amp = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut basis = Operator::zeros(dim, half);
    let mut col = 0;
    for b in 0..dim {
        let flipped = !b & (dim - 1);
        if b < flipped {
            basis[(b, col)] = amp;
            basis[(flipped, col)] = amp;
            col += 1;
        }
    }
    debug_assert_eq!(col, half);
    basis
}

/// Minimum gap of the model's schedule, from a 1001-point refined scan.
pub fn min_gap(model: &AdiabaticModel) -> Result<f64> {
    Ok(gap_scan(model, 1001)?.min_gap)
}

/// The encoded final state the run is compared against: the marked
/// codeword for Grover, the symmetric cat of the all-zeros and all-ones
/// codewords for 2-SAT.
pub fn target_state(model: &AdiabaticModel, spec: CodeSpec) -> Result<StateVector> {
    match model.kind() {
        Algorithm::Grover => encoding::codeword(spec, model.marked()),
        Algorithm::TwoSat => {
            let zeros = vec![false; spec.n_logical()];
            let ones = vec![true; spec.n_logical()];
            let a = encoding::codeword(spec, &zeros)?;
            let b = encoding::codeword(spec, &ones)?;
            let mut cat = a + b;
            linalg::normalize(&mut cat);
            Ok(cat)
        }
    }
}

/// The initial encoded state: the equal superposition of all codewords,
/// i.e. the encoded uniform superposition (the ground state of either
/// model's beginning Hamiltonian).
pub fn initial_state(spec: CodeSpec) -> Result<StateVector> {
    let words = encoding::codewords(spec)?;
    let dim = spec.dim();
    let mut psi = StateVector::zeros(dim);
    for w in &words {
        psi += w;
    }
    linalg::normalize(&mut psi);
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::stabilizer_elements;
    use crate::linalg::max_norm;
    use approx::assert_relative_eq;

    fn grover2(total_time: f64) -> AdiabaticModel {
        AdiabaticModel::grover(2, vec![true, true], total_time).unwrap()
    }

    fn twosat2(total_time: f64) -> AdiabaticModel {
        AdiabaticModel::twosat(2, total_time).unwrap()
    }

    #[test]
    fn grover_schedule_endpoints_and_midpoint() {
        assert!(grover_schedule(0.0, 1.0, 4).unwrap().abs() < 1e-12);
        assert!((grover_schedule(1.0, 1.0, 4).unwrap() - 1.0).abs() < 1e-12);
        for n in [2usize, 4, 8, 64] {
            assert_relative_eq!(grover_schedule(0.5, 1.0, n).unwrap(), 0.5, epsilon = 1e-12);
        }
        assert!(grover_schedule(-0.1, 1.0, 4).is_err());
        assert!(grover_schedule(1.1, 1.0, 4).is_err());
    }

    #[test]
    fn grover_schedule_monotone_on_fine_grid() {
        let mut prev = -1.0;
        for k in 0..=1000 {
            let f = grover_schedule(k as f64 / 1000.0, 1.0, 4).unwrap();
            assert!(f >= prev, "schedule not monotone at k={k}");
            prev = f;
        }
    }

    #[test]
    fn grover_endpoint_ground_states() {
        let model = grover2(1.0);
        // f = 0: ground state is |u>, energy 0
        let h0 = model.logical_matrix_at_f(0.0).unwrap();
        let (e0, basis0) = linalg::ground_state(&h0, DEGENERACY_TOL).unwrap();
        assert!(e0.abs() < 1e-12);
        assert_eq!(basis0.len(), 1);
        for amp in basis0[0].iter() {
            assert!((amp.norm() - 0.5).abs() < 1e-10);
        }
        // f = 1: ground state is |m> = |11>, energy 0
        let h1 = model.logical_matrix_at_f(1.0).unwrap();
        let (e1, basis1) = linalg::ground_state(&h1, DEGENERACY_TOL).unwrap();
        assert!(e1.abs() < 1e-12);
        assert!((basis1[0][3].norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn grover_gap_at_half_matches_two_level_formula() {
        let model = grover2(1.0);
        let h = model.logical_matrix_at_f(0.5).unwrap();
        let gap = linalg::spectral_gap(&h, DEGENERACY_TOL).unwrap();
        assert_relative_eq!(gap, 0.5, epsilon = 1e-10);
        // two-level reduction sqrt((1-2f)^2 + 4f(1-f)/N) at a few f values
        for f in [0.2, 0.35, 0.5, 0.7] {
            let h = model.logical_matrix_at_f(f).unwrap();
            let gap = linalg::spectral_gap(&h, DEGENERACY_TOL).unwrap();
            let expect = ((1.0 - 2.0 * f).powi(2) + 4.0 * f * (1.0 - f) / 4.0).sqrt();
            assert_relative_eq!(gap, expect, epsilon = 1e-10);
        }
    }

    #[test]
    fn twosat_endpoints() {
        let model = twosat2(1.0);
        // s = 0: uniform superposition at energy 0
        let h0 = model.logical_matrix_at_f(0.0).unwrap();
        let (e0, basis0) = linalg::ground_state(&h0, DEGENERACY_TOL).unwrap();
        assert!(e0.abs() < 1e-12);
        assert_eq!(basis0.len(), 1);
        for amp in basis0[0].iter() {
            assert!((amp.norm() - 0.5).abs() < 1e-10);
        }
        // s = 1: degenerate ground space spanned by |00>, |11> at energy 0
        let h1 = model.logical_matrix_at_f(1.0).unwrap();
        let (e1, basis1) = linalg::ground_state(&h1, DEGENERACY_TOL).unwrap();
        assert!(e1.abs() < 1e-12);
        assert_eq!(basis1.len(), 2);
        for v in &basis1 {
            assert!(v[1].norm() < 1e-10 && v[2].norm() < 1e-10);
        }
    }

    #[test]
    fn twosat_double_bond_coefficient() {
        let terms = twosat_logical_hamiltonian(1.0, 2);
        let zz: Vec<_> = terms
            .iter()
            .filter(|t| t.string.factors() == [Pauli::Z, Pauli::Z])
            .collect();
        assert_eq!(zz.len(), 1);
        assert_relative_eq!(zz[0].coefficient, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn encoded_hamiltonian_commutes_with_stabilizer() {
        for model in [grover2(1.0), twosat2(1.0)] {
            let spec = CodeSpec::for_logical(2).unwrap();
            let system = EncodedSystem::new(model.clone(), spec).unwrap();
            for g in stabilizer_elements(spec) {
                let gm = g.matrix(4).unwrap();
                for k in 0..=10 {
                    let h = system.hamiltonian_at_f(k as f64 / 10.0);
                    let comm = &gm * &h - &h * &gm;
                    assert!(
                        max_norm(&comm) < 1e-12,
                        "stabilizer {g} does not commute at sample {k}"
                    );
                }
            }
        }
    }

    #[test]
    fn encoded_terms_have_bounded_weight() {
        let spec = CodeSpec::for_logical(2).unwrap();
        for model in [grover2(1.0), twosat2(1.0)] {
            for f in [0.0, 0.3, 1.0] {
                for term in model.logical_terms_at_f(f) {
                    let enc = encoding::encode_pauli_monomial(spec, &term.string).unwrap();
                    assert!(enc.weight() <= 4, "weight {} for {}", enc.weight(), enc);
                }
            }
        }
    }

    #[test]
    fn affine_form_matches_term_encoding() {
        let spec = CodeSpec::for_logical(2).unwrap();
        for model in [grover2(2.0), twosat2(2.0)] {
            let system = EncodedSystem::new(model.clone(), spec).unwrap();
            for t in [0.0, 0.6, 1.3, 2.0] {
                let direct = encoded_hamiltonian_at(&model, t, spec).unwrap();
                let cached = system.hamiltonian_at(t).unwrap();
                assert!(max_norm(&(direct - cached)) < 1e-12);
            }
        }
    }

    #[test]
    fn grover_gap_scan_finds_center() {
        let profile = gap_scan(&grover2(1.0), 101).unwrap();
        assert_relative_eq!(profile.min_gap, 0.5, epsilon = 1e-6);
        assert_relative_eq!(profile.argmin, 0.5, epsilon = 1e-6);
        // a 3-point scan still brackets the symmetric minimum
        let coarse = gap_scan(&grover2(1.0), 3).unwrap();
        assert_relative_eq!(coarse.argmin, 0.5, epsilon = 1e-12);
    }

    /// Oracle for the ring scan: the even-sector gap is
    /// `2 sqrt(s^2 + 4(1-s)^2)`, minimized at `s = 4/5` with value
    /// `4/sqrt(5)`.
    #[test]
    fn twosat_gap_scan_matches_closed_form() {
        let profile = gap_scan(&twosat2(1.0), 201).unwrap();
        assert_relative_eq!(profile.min_gap, 4.0 / 5.0_f64.sqrt(), epsilon = 1e-6);
        assert_relative_eq!(profile.argmin, 0.8, epsilon = 1e-3);
        for &(s, gap) in &profile.samples {
            let expect = 2.0 * (s * s + 4.0 * (1.0 - s) * (1.0 - s)).sqrt();
            assert_relative_eq!(gap, expect, epsilon = 1e-9);
            assert!(gap > 0.0);
        }
    }

    #[test]
    fn grover_gap_shrinks_with_size() {
        let g2 = min_gap(&grover2(1.0)).unwrap();
        let g3 = min_gap(&AdiabaticModel::grover(3, vec![true; 3], 1.0).unwrap()).unwrap();
        assert!(g3 < g2);
        assert_relative_eq!(g2, 0.5, epsilon = 1e-9);
        assert_relative_eq!(g3, 1.0 / 8.0_f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn target_states() {
        let spec = CodeSpec::for_logical(2).unwrap();
        let grover = grover2(1.0);
        let target = target_state(&grover, spec).unwrap();
        let expect = encoding::codeword(spec, &[true, true]).unwrap();
        assert!((target.dotc(&expect).norm() - 1.0).abs() < 1e-12);

        let twosat = twosat2(1.0);
        let cat = target_state(&twosat, spec).unwrap();
        assert_relative_eq!(cat.norm(), 1.0, epsilon = 1e-12);
        // eigenvector of the encoded final Hamiltonian with eigenvalue 0
        let system = EncodedSystem::new(twosat, spec).unwrap();
        let h = system.hamiltonian_at_f(1.0);
        assert!((&h * &cat).norm() < 1e-12);
    }

    #[test]
    fn initial_state_is_plus_one_of_encoded_x() {
        let spec = CodeSpec::for_logical(2).unwrap();
        let psi = initial_state(spec).unwrap();
        assert_relative_eq!(psi.norm(), 1.0, epsilon = 1e-12);
        for j in 0..2 {
            let xbar = encoding::logical_x(spec, j).unwrap().matrix(4).unwrap();
            let diff = &xbar * &psi - &psi;
            assert!(diff.norm() < 1e-12);
        }
    }
}
