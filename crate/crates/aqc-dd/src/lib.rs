//! Simulator for dynamical-decoupling-protected adiabatic quantum
//! computation under classical Gaussian noise.
//!
//! Two small adiabatic algorithms (Grover search and 2-SAT on a ring)
//! are encoded into the `[[n, n-2, 2]]` stabilizer code so that
//! concatenated (CDD), Uhrig (UDD) and quadratic (QDD) decoupling
//! sequences built from the stabilizer elements commute with the
//! computation while averaging out qubit noise. Performance is measured
//! as the trace-norm distance between the ensemble-averaged final state
//! and the encoded adiabatic target.
//!
//! The crate is organized as a library with one thin command-line
//! frontend; the `examples/` directory has one runnable program per
//! capability (gap scans, noise validation, schedule inspection,
//! distance curves, pulse-interval sweeps, sequence comparisons).

pub mod cli;
pub mod encoding;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod models;
pub mod noise;
pub mod pauli;
pub mod propagation;
pub mod sequences;

pub use error::{Error, Result};
