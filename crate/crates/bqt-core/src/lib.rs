//! Bidirectional teleportation over a single shared Bell channel, with
//! trigger qubits gating each direction.
//!
//! The crate computes the exchanged states two independent ways — a
//! closed-form mixture ([`protocol`]) and a brute-force ten-qubit circuit
//! simulation ([`circuit`]) — and layers fidelity metrics, quantum Fisher
//! information (scalar and matrix, three formulations), variance bounds, and
//! figure-grid sweeps on top.

pub mod bloch;
pub mod circuit;
pub mod error;
pub mod fidelity;
pub mod fisher;
pub mod protocol;
pub mod ledger;
pub mod quad;
pub mod sweep;
pub mod verify;
pub mod tol;

mod smallmat;

pub use bloch::{
    bloch_to_density, density_to_bloch, pure_to_bloch, state_fidelity, trace_distance, Angle,
    BlochVector, DensityMatrix2, PureQubit, TriggerSpec,
};
pub use error::{Error, Result};
pub use fidelity::{
    averaged_config_fidelity, averaged_fidelity, averaged_fidelity_mc, config_fidelity,
    direction_fidelity, point_fidelity, Direction, FidelityParams,
};
pub use fisher::{
    bloch_partial_matrix, qfi_bloch, qfi_pure, qfim_bloch_entry, qfim_closed, qfim_from_curve,
    qfim_spectral, qfim_vectorized, scalar_qfi, scalar_qfi_closed, sld_solve,
    teleported_density_partial, variance_report, PureAngle, QfiMatrix, SldOutcome,
    VarianceReport,
};
pub use protocol::{
    firing_probability, firing_probability_grad, mixture_state, teleported_bloch_partial, Param,
    ProbModel, ProbOutcome, ProtocolConfig, Side,
};
pub use quad::{gauss_legendre, sphere_average, SphereRule};
pub use sweep::{
    parse_config, preset, preset_summary, run_sweep, Axis, Extrema, ParamId, Quantity,
    SweepConfig, SweepResult, PRESET_NAMES,
};
pub use ledger::{finding_titles, findings, ledger_text, Finding};
pub use verify::{run_verify, PhaseMode, TrialRecord, VerifyReport};
