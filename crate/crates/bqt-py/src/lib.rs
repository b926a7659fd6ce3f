//! Python bindings: a `Config` class wrapping one protocol configuration,
//! plus module-level functions for the pure-state information values, the
//! preset sweeps, verification, and the audit report.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use bqt_core::bloch::{trace_distance, PureQubit, TriggerSpec};
use bqt_core::fidelity::{averaged_config_fidelity, config_fidelity, Direction, FidelityParams};
use bqt_core::fisher::{qfim_from_curve, scalar_qfi, variance_report, PureAngle};
use bqt_core::protocol::{firing_probability, Param, ProbModel, ProtocolConfig, Side};
use bqt_core::quad::SphereRule;
use bqt_core::verify::PhaseMode;
use bqt_core::{ledger_text, preset, preset_summary, run_sweep, run_verify, PRESET_NAMES};

fn err(e: bqt_core::error::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

type Bloch3 = (f64, f64, f64);
/// `(axis1_values, axis2_values, grid, max_value)`.
type SweepData = (Vec<f64>, Vec<f64>, Vec<Vec<f64>>, f64);

fn parse_model(token: &str) -> PyResult<ProbModel> {
    match token {
        "overlap" => Ok(ProbModel::Overlap),
        "cross_term" => Ok(ProbModel::CrossTerm),
        other => Err(PyValueError::new_err(format!(
            "model must be 'overlap' or 'cross_term', got '{other}'"
        ))),
    }
}

fn parse_side(token: &str) -> PyResult<Side> {
    match token {
        "alice" => Ok(Side::Alice),
        "bob" => Ok(Side::Bob),
        other => Err(PyValueError::new_err(format!(
            "side must be 'alice' or 'bob', got '{other}'"
        ))),
    }
}

fn parse_direction(token: &str) -> PyResult<Direction> {
    match token {
        "ab" => Ok(Direction::AtoB),
        "ba" => Ok(Direction::BtoA),
        other => Err(PyValueError::new_err(format!(
            "direction must be 'ab' or 'ba', got '{other}'"
        ))),
    }
}

fn parse_param(token: &str) -> PyResult<Param> {
    match token {
        "theta_a" => Ok(Param::ThetaA),
        "phi_a" => Ok(Param::PhiA),
        "theta_b" => Ok(Param::ThetaB),
        "phi_b" => Ok(Param::PhiB),
        other => Err(PyValueError::new_err(format!(
            "param must be one of theta_a, phi_a, theta_b, phi_b; got '{other}'"
        ))),
    }
}

/// One protocol configuration: both data qubits, both triggers, and the
/// probability model.
#[pyclass(frozen)]
struct Config {
    inner: ProtocolConfig,
}

#[pymethods]
impl Config {
    #[new]
    #[pyo3(signature = (theta_a, phi_a, theta_b, phi_b, trigger_a, trigger_b, model = "overlap"))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        theta_a: f64,
        phi_a: f64,
        theta_b: f64,
        phi_b: f64,
        trigger_a: f64,
        trigger_b: f64,
        model: &str,
    ) -> PyResult<Self> {
        let inner = ProtocolConfig::new(
            PureQubit::new(theta_a, phi_a).map_err(err)?,
            PureQubit::new(theta_b, phi_b).map_err(err)?,
            TriggerSpec::new(trigger_a).map_err(err)?,
            TriggerSpec::new(trigger_b).map_err(err)?,
            parse_model(model)?,
        );
        Ok(Config { inner })
    }

    /// Firing probabilities `(p_a, p_b)`, clamped into [0, 1].
    fn probabilities(&self) -> (f64, f64) {
        let (pa, pb) = self.inner.probabilities();
        (pa.p, pb.p)
    }

    /// Transfer weights `(w_ab, w_ba)`.
    fn weights(&self) -> (f64, f64) {
        self.inner.weights()
    }

    /// Closed-form Bloch vector of the state received on `side`.
    fn teleported_bloch(&self, side: &str) -> PyResult<Bloch3> {
        let s = self.inner.teleported(parse_side(side)?).bloch();
        Ok((s.x, s.y, s.z))
    }

    /// Brute-force circuit simulation of the full protocol. Returns
    /// `(alice_bloch, bob_bloch, p_a, p_b)` with the output states read out
    /// as Bloch vectors.
    fn simulate(&self) -> (Bloch3, Bloch3, f64, f64) {
        let out = bqt_core::circuit::run_protocol(
            &self.inner.data_a,
            &self.inner.data_b,
            &self.inner.trigger_a,
            &self.inner.trigger_b,
        );
        let a = out.rho_at_alice.bloch();
        let b = out.rho_at_bob.bloch();
        ((a.x, a.y, a.z), (b.x, b.y, b.z), out.p_a, out.p_b)
    }

    /// Trace distance between the closed form and the circuit simulation on
    /// each register, `(alice, bob)`. Zero-phase data states make the two
    /// descriptions coincide; nonzero phases expose their opposite Bloch-y
    /// sign conventions.
    fn oracle_gap(&self) -> (f64, f64) {
        let out = bqt_core::circuit::run_protocol(
            &self.inner.data_a,
            &self.inner.data_b,
            &self.inner.trigger_a,
            &self.inner.trigger_b,
        );
        let (alice, bob) = self.inner.teleported_pair();
        (
            trace_distance(&alice, &out.rho_at_alice),
            trace_distance(&bob, &out.rho_at_bob),
        )
    }

    /// Transfer fidelity of one direction ('ab' or 'ba').
    fn fidelity(&self, direction: &str) -> PyResult<f64> {
        Ok(config_fidelity(&self.inner, parse_direction(direction)?))
    }

    /// Sphere-averaged transfer fidelity of one direction, with an
    /// `nodes` x `nodes` quadrature over the sender's data states.
    #[pyo3(signature = (direction, nodes = 64))]
    fn averaged_fidelity(&self, direction: &str, nodes: usize) -> PyResult<f64> {
        averaged_config_fidelity(
            &self.inner,
            parse_direction(direction)?,
            SphereRule::new(nodes, nodes).map_err(err)?,
        )
        .map_err(err)
    }

    /// Information matrix over `(theta_a, theta_b)` carried by the state on
    /// `side`, as `((aa, ab), (ab, bb))`.
    fn qfim(&self, side: &str) -> PyResult<((f64, f64), (f64, f64))> {
        let m = qfim_from_curve(&self.inner, parse_side(side)?);
        Ok(((m.aa, m.ab), (m.ab, m.bb)))
    }

    /// Scalar information about one angle ('theta_a', 'phi_a', 'theta_b',
    /// 'phi_b') carried by the register that receives it.
    fn scalar_qfi(&self, param: &str) -> PyResult<f64> {
        Ok(scalar_qfi(&self.inner, parse_param(param)?))
    }

    /// Simultaneous-to-individual variance-bound ratios
    /// `(delta_alice, delta_bob)`.
    fn variance_ratios(&self) -> (f64, f64) {
        let rep = variance_report(&self.inner);
        (rep.delta_alice, rep.delta_bob)
    }

    fn __repr__(&self) -> String {
        format!(
            "Config(theta_a={}, phi_a={}, theta_b={}, phi_b={}, trigger_a={}, trigger_b={})",
            self.inner.data_a.theta(),
            self.inner.data_a.phi(),
            self.inner.data_b.theta(),
            self.inner.data_b.phi(),
            self.inner.trigger_a.theta_tilde(),
            self.inner.trigger_b.theta_tilde(),
        )
    }
}

/// Trigger firing probability `(p, raw)` against a data state.
#[pyfunction]
#[pyo3(name = "firing_probability", signature = (trigger, theta, phi, model = "overlap"))]
fn firing_probability_py(trigger: f64, theta: f64, phi: f64, model: &str) -> PyResult<(f64, f64)> {
    let out = firing_probability(
        parse_model(model)?,
        &TriggerSpec::new(trigger).map_err(err)?,
        &PureQubit::new(theta, phi).map_err(err)?,
    );
    Ok((out.p, out.raw))
}

/// Information a pure qubit carries about one of its own angles
/// ('theta' -> 1, 'phi' -> sin^2 theta).
#[pyfunction]
#[pyo3(name = "qfi_pure")]
fn qfi_pure_py(theta: f64, phi: f64, angle: &str) -> PyResult<f64> {
    let state = PureQubit::new(theta, phi).map_err(err)?;
    let which = match angle {
        "theta" => PureAngle::Theta,
        "phi" => PureAngle::Phi,
        other => {
            return Err(PyValueError::new_err(format!(
                "angle must be 'theta' or 'phi', got '{other}'"
            )))
        }
    };
    Ok(bqt_core::fisher::qfi_pure(&state, which))
}

/// Overlap fidelity between an initial pure state and a received mixture
/// with faithful-transfer weight `a1` around a teleported payload.
#[pyfunction]
#[pyo3(name = "point_fidelity")]
fn point_fidelity_py(
    theta_i: f64,
    phi_i: f64,
    theta_t: f64,
    phi_t: f64,
    a1: f64,
) -> PyResult<f64> {
    let initial = PureQubit::new(theta_i, phi_i).map_err(err)?;
    let payload = PureQubit::new(theta_t, phi_t).map_err(err)?;
    let params = FidelityParams::new(a1, (1.0 - a1) / 2.0, Direction::AtoB).map_err(err)?;
    Ok(bqt_core::fidelity::point_fidelity(&initial, &payload, &params))
}

/// Run one built-in preset sweep. Returns
/// `(axis1_values, axis2_values, grid, max_value)`.
#[pyfunction]
fn sweep_preset(name: &str) -> PyResult<SweepData> {
    let cfg = preset(name).map_err(err)?;
    let result = run_sweep(&cfg).map_err(err)?;
    Ok((
        result.axis1_values,
        result.axis2_values,
        result.grid,
        result.extrema.max,
    ))
}

/// Names and one-line summaries of the built-in presets.
#[pyfunction]
fn preset_catalogue() -> Vec<(String, String)> {
    PRESET_NAMES
        .iter()
        .map(|&n| {
            (
                n.to_string(),
                preset_summary(n).expect("catalogued preset").to_string(),
            )
        })
        .collect()
}

/// Closed-form-vs-simulation verification over random configurations;
/// returns the full JSON report.
#[pyfunction]
#[pyo3(signature = (trials = 100, seed = 42, phase_mode = "zero"))]
fn verify_json(trials: usize, seed: u64, phase_mode: &str) -> PyResult<String> {
    let mode = PhaseMode::parse(phase_mode).ok_or_else(|| {
        PyValueError::new_err(format!(
            "phase_mode must be 'zero' or 'full', got '{phase_mode}'"
        ))
    })?;
    Ok(run_verify(trials, seed, mode).map_err(err)?.to_json())
}

/// The computed-vs-reference findings report.
#[pyfunction]
fn ledger_report() -> String {
    ledger_text()
}

#[pymodule]
fn bqt_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Config>()?;
    m.add_function(wrap_pyfunction!(firing_probability_py, m)?)?;
    m.add_function(wrap_pyfunction!(qfi_pure_py, m)?)?;
    m.add_function(wrap_pyfunction!(point_fidelity_py, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_preset, m)?)?;
    m.add_function(wrap_pyfunction!(preset_catalogue, m)?)?;
    m.add_function(wrap_pyfunction!(verify_json, m)?)?;
    m.add_function(wrap_pyfunction!(ledger_report, m)?)?;
    Ok(())
}
