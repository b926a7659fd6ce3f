//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the public API. Invalid numerical input is rejected
/// eagerly at type construction so that downstream math can assume physical
/// states.
#[derive(Debug, Error)]
pub enum Error {
    #[error("angle must be finite, got {0}")]
    NonFiniteAngle(f64),

    #[error("Bloch vector component must be finite, got ({x}, {y}, {z})")]
    NonFiniteBloch { x: f64, y: f64, z: f64 },

    #[error("Bloch vector norm {norm} exceeds the physical bound 1 (tolerance {tol})")]
    BlochNormExceeded { norm: f64, tol: f64 },

    #[error("density matrix is not Hermitian within tolerance {tol}: max asymmetry {max_asym}")]
    NotHermitian { max_asym: f64, tol: f64 },

    #[error("density matrix trace {trace} differs from 1 beyond tolerance {tol}")]
    TraceNotOne { trace: f64, tol: f64 },

    #[error("density matrix eigenvalue {eig} outside [0, 1] beyond tolerance {tol}")]
    NotPositive { eig: f64, tol: f64 },

    #[error("mixture weight {0} outside [0, 1]")]
    InvalidWeight(f64),

    #[error("fidelity parameters must satisfy a1 + 2*a2 = 1, got a1 = {a1}, a2 = {a2}")]
    BadFidelityParams { a1: f64, a2: f64 },

    #[error("qubit count {0} outside supported range 1..=24")]
    QubitCount(usize),

    #[error("gate indices {indices:?} invalid for a {n}-qubit register (must be distinct and < n)")]
    BadGateTargets { indices: Vec<usize>, n: usize },

    #[error("density matrix is numerically singular (min eigenvalue {min_eig} <= cutoff {cutoff})")]
    SingularDensity { min_eig: f64, cutoff: f64 },

    #[error("quadrature needs at least {min} nodes per axis, got {nodes}")]
    BadQuadrature { nodes: usize, min: usize },

    #[error("config line {line}: {msg}")]
    ConfigParse { line: usize, msg: String },

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    #[error("sweep config invalid: {0}")]
    BadSweep(String),

    #[error("verification request invalid: {0}")]
    BadVerify(String),
}

pub type Result<T> = std::result::Result<T, Error>;
