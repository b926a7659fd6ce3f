//! Numerical tolerances shared across the crate.
//!
//! Every constant documents what failure it guards against, so that a change
//! here is a deliberate physics decision rather than a convenience tweak.

/// Slack allowed on physicality checks: Bloch norms may exceed 1 and density
/// eigenvalues may dip below 0 by at most this much, covering accumulated
/// rounding from chained products without admitting genuinely unphysical
/// states.
pub const PHYSICALITY: f64 = 1e-10;

/// Tolerance for exact-identity checks on matrices (Hermiticity asymmetry,
/// deviation of the trace from 1). These identities hold to machine precision
/// for honestly constructed states, so the bound is tight.
pub const MATRIX_IDENTITY: f64 = 1e-12;

/// Angular tolerance used when classifying trigger angles as exact poles.
/// Classification is a reporting label only; it never feeds back into the
/// state math, so a loose-ish bound is safe.
pub const TRIGGER_CASE: f64 = 1e-9;

/// Bloch-norm threshold above which the quantum Fisher information switches
/// to its pure-state branch: `|s|^2 > 1 - PURE_BRANCH` drops the radial term.
/// The radial term carries a 1/(1 - |s|^2) factor whose floating-point noise
/// dominates beyond this point, while for curves that stay tangential the two
/// branches agree through the switch.
pub const PURE_BRANCH: f64 = 1e-9;

/// Eigenvalue cutoff for spectral sums and linear solves on density matrices:
/// spectral QFIM terms with `p_n + p_m` at or below this are dropped (the
/// minimal-norm SLD completion), and the vectorized QFIM refuses matrices
/// whose smallest eigenvalue is at or below it.
pub const SPECTRAL_CUTOFF: f64 = 1e-12;

/// Pass bound on the trace distance between the closed-form output state and
/// the circuit oracle in a zero-phase verification run, where the two are
/// mathematically identical. Both pipelines are short chains of f64
/// arithmetic, so anything above this signals a real defect, not rounding.
pub const ORACLE_GATE: f64 = 1e-9;
