//! Dense complex linear algebra on the small Hilbert spaces used here
//! (dimension at most 2^8, in practice 16).
//!
//! Matrix exponentials go through a Hermitian eigendecomposition, so
//! propagators are unitary to machine precision by construction.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
/// Dense complex operator on a 2^n-dimensional space.
pub type Operator = DMatrix<C64>;
/// Complex amplitude vector of length 2^n.
pub type StateVector = DVector<C64>;

/// Hamiltonians must be Hermitian to within this max-norm tolerance.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Propagators must satisfy `max|U†U - I| < UNITARITY_TOL`.
pub const UNITARITY_TOL: f64 = 1e-9;
/// Default tolerance for treating eigenvalues as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Largest absolute entry.
pub fn max_norm(m: &Operator) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max|H - H†|`.
pub fn hermiticity_error(h: &Operator) -> f64 {
    max_norm(&(h - h.adjoint()))
}

/// `max|U†U - I|`.
pub fn unitarity_error(u: &Operator) -> f64 {
    let d = u.nrows();
    max_norm(&(u.adjoint() * u - Operator::identity(d, d)))
}

fn require_square(m: &Operator, what: &str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::input(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

fn require_hermitian(h: &Operator, what: &str) -> Result<()> {
    require_square(h, what)?;
    let err = hermiticity_error(h);
    // Tolerance scales with the matrix magnitude so large Hamiltonians are
    // not rejected for benign rounding.
    let tol = HERMITICITY_TOL * max_norm(h).max(1.0);
    if err > tol {
        return Err(Error::input(format!(
            "{what} is not Hermitian: max|H - H†| = {err:.3e} (tol {tol:.3e})"
        )));
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted
/// ascending; eigenvector `k` is column `k` of the returned matrix.
pub fn hermitian_eigen(h: &Operator) -> Result<(Vec<f64>, Operator)> {
    require_hermitian(h, "operator")?;
    let sym = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..sym.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| sym.eigenvalues[a].total_cmp(&sym.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| sym.eigenvalues[i]).collect();
    let dim = h.nrows();
    let mut vectors = Operator::zeros(dim, dim);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &sym.eigenvectors.column(i));
    }
    Ok((values, vectors))
}

/// `exp(-i H dt)` for Hermitian `H`, evaluated as `V exp(-i λ dt) V†`.
pub fn unitary_exp(h: &Operator, dt: f64) -> Result<Operator> {
    let (values, vectors) = hermitian_eigen(h)?;
    Ok(exp_from_eigen(&values, &vectors, dt))
}

/// Same as [`unitary_exp`] but reusing an existing eigendecomposition.
pub fn exp_from_eigen(values: &[f64], vectors: &Operator, dt: f64) -> Operator {
    let dim = vectors.nrows();
    let mut scaled = vectors.clone();
    for (k, &lambda) in values.iter().enumerate() {
        let ph = C64::from_polar(1.0, -lambda * dt);
        for r in 0..dim {
            scaled[(r, k)] *= ph;
        }
    }
    scaled * vectors.adjoint()
}

/// Lowest eigenvalue and an orthonormal basis of its eigenspace
/// (every eigenvector within `degeneracy_tol` of the minimum).
pub fn ground_state(h: &Operator, degeneracy_tol: f64) -> Result<(f64, Vec<StateVector>)> {
    let (values, vectors) = hermitian_eigen(h)?;
    let lowest = values[0];
    let basis = values
        .iter()
        .enumerate()
        .take_while(|(_, &v)| v - lowest <= degeneracy_tol)
        .map(|(k, _)| StateVector::from(vectors.column(k).into_owned()))
        .collect();
    Ok((lowest, basis))
}

/// Difference between the lowest eigenvalue and the smallest eigenvalue
/// exceeding it by more than `degeneracy_tol`.
pub fn spectral_gap(h: &Operator, degeneracy_tol: f64) -> Result<f64> {
    let (values, _) = hermitian_eigen(h)?;
    let lowest = values[0];
    values
        .iter()
        .find(|&&v| v - lowest > degeneracy_tol)
        .map(|&v| v - lowest)
        .ok_or(Error::NoGap {
            lowest,
            tol: degeneracy_tol,
        })
}

fn require_density_matrix(m: &Operator, what: &str) -> Result<()> {
    require_square(m, what)?;
    if hermiticity_error(m) > 1e-10 * max_norm(m).max(1.0) {
        return Err(Error::input(format!("{what} is not Hermitian")));
    }
    let trace = m.trace();
    if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
        return Err(Error::input(format!(
            "{what} has trace {trace}, expected 1"
        )));
    }
    let sym = m.clone().symmetric_eigen();
    if sym.eigenvalues.iter().any(|&v| v < -1e-10) {
        return Err(Error::input(format!("{what} has a negative eigenvalue")));
    }
    Ok(())
}

/// Trace-norm distance `D(a, b) = (1/2) Σ |λ_i(a - b)|`, in `[0, 1]`
/// for valid density matrices.
pub fn trace_distance(a: &Operator, b: &Operator) -> Result<f64> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(Error::input(format!(
            "density matrix dimension mismatch: {}x{} vs {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    require_density_matrix(a, "first argument")?;
    require_density_matrix(b, "second argument")?;
    let diff = a - b;
    let sym = diff.symmetric_eigen();
    Ok(0.5 * sym.eigenvalues.iter().map(|v| v.abs()).sum::<f64>())
}

/// `|psi><psi|`.
pub fn projector(psi: &StateVector) -> Operator {
    psi * psi.adjoint()
}

/// Trace-norm distance between two pure states given as vectors.
pub fn pure_state_distance(a: &StateVector, b: &StateVector) -> f64 {
    let overlap = a.dotc(b).norm_sqr();
    (1.0 - overlap.min(1.0)).max(0.0).sqrt()
}

/// Normalizes in place and returns the original norm.
pub fn normalize(psi: &mut StateVector) -> f64 {
    let n = psi.norm();
    if n > 0.0 {
        *psi /= C64::new(n, 0.0);
    }
    n
}
