//! The closed-form side of the exchange protocol: trigger firing
//! probabilities, the teleported output states on both sides, and analytic
//! partial derivatives of everything with respect to the four angles.
//!
//! Setup: Alice holds data qubit `(theta_a, phi_a)` and trigger `tt_a`; Bob
//! holds `(theta_b, phi_b)` and `tt_b`. Each trigger fires with a probability
//! determined by its overlap with the local data qubit. Writing `p_a`, `p_b`
//! for the firing probabilities, the state that lands on Bob's side is
//!
//! ```text
//! rho_B = w_ab * rho(q_a) + (1 - w_ab) * I/2,    w_ab = p_a * (1 - p_b)
//! ```
//!
//! i.e. Alice's data arrives exactly when her trigger fires and Bob's does
//! not; in every other branch Bob is left with the maximally mixed state.
//! Alice's side mirrors this with `w_ba = p_b * (1 - p_a)`.

use serde::Serialize;

use crate::bloch::{BlochVector, DensityMatrix2, PureQubit, TriggerSpec};

// ====== probability models ======

/// How a trigger's firing probability depends on the trigger/data overlap.
///
/// Both models agree whenever the data phase is 0 or pi.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum ProbModel {
    /// `p = |<t|q>|^2 = (1 + cos tt cos th + sin tt sin th cos phi) / 2`.
    /// Always in [0, 1]. The default.
    #[default]
    Overlap,
    /// Adds an extra `sin tt sin th sin phi / 2` term to the overlap form.
    /// For phases away from {0, pi} this can leave [0, 1]; the probability
    /// is then clamped and the excursion is reported via [`ProbOutcome`].
    CrossTerm,
}

/// A firing probability together with a record of whether the raw model
/// value had to be clamped into [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbOutcome {
    /// The clamped probability, always in [0, 1].
    pub p: f64,
    /// The raw model value before clamping.
    pub raw: f64,
}

impl ProbOutcome {
    pub fn clamped(&self) -> bool {
        self.p != self.raw
    }
}

/// Raw (unclamped) firing probability for `model`.
fn prob_raw(model: ProbModel, trig: &TriggerSpec, data: &PureQubit) -> f64 {
    let tt = trig.theta_tilde();
    let th = data.theta();
    let ph = data.phi();
    let base = 1.0 + tt.cos() * th.cos() + tt.sin() * th.sin() * ph.cos();
    match model {
        ProbModel::Overlap => 0.5 * base,
        ProbModel::CrossTerm => 0.5 * (base + tt.sin() * th.sin() * ph.sin()),
    }
}

/// Firing probability of a trigger against its local data qubit, clamped
/// into [0, 1] with the raw value preserved.
pub fn firing_probability(model: ProbModel, trig: &TriggerSpec, data: &PureQubit) -> ProbOutcome {
    let raw = prob_raw(model, trig, data);
    ProbOutcome {
        p: raw.clamp(0.0, 1.0),
        raw,
    }
}

/// Partial derivatives of the raw firing probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbGrad {
    /// d p / d theta (data polar angle).
    pub d_theta: f64,
    /// d p / d phi (data phase).
    pub d_phi: f64,
    /// d p / d tt (trigger polar angle).
    pub d_tilde: f64,
}

/// Analytic gradient of [`firing_probability`]'s raw value. Clamping is not
/// differentiated; callers working near a clamped point should treat the
/// gradient as one-sided.
pub fn firing_probability_grad(
    model: ProbModel,
    trig: &TriggerSpec,
    data: &PureQubit,
) -> ProbGrad {
    let tt = trig.theta_tilde();
    let th = data.theta();
    let ph = data.phi();
    let (extra_th, extra_ph, extra_tt) = match model {
        ProbModel::Overlap => (0.0, 0.0, 0.0),
        ProbModel::CrossTerm => (
            tt.sin() * th.cos() * ph.sin(),
            tt.sin() * th.sin() * ph.cos(),
            tt.cos() * th.sin() * ph.sin(),
        ),
    };
    ProbGrad {
        d_theta: 0.5 * (-tt.cos() * th.sin() + tt.sin() * th.cos() * ph.cos() + extra_th),
        d_phi: 0.5 * (-tt.sin() * th.sin() * ph.sin() + extra_ph),
        d_tilde: 0.5 * (-tt.sin() * th.cos() + tt.cos() * th.sin() * ph.cos() + extra_tt),
    }
}

// ====== protocol configuration and outputs ======

/// Which participant's output register is being inspected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    /// Alice's register, which receives Bob's data with weight `w_ba`.
    Alice,
    /// Bob's register, which receives Alice's data with weight `w_ab`.
    Bob,
}

/// Full configuration of one protocol run: both data qubits and both
/// triggers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProtocolConfig {
    pub data_a: PureQubit,
    pub data_b: PureQubit,
    pub trigger_a: TriggerSpec,
    pub trigger_b: TriggerSpec,
    pub model: ProbModel,
}

impl ProtocolConfig {
    pub fn new(
        data_a: PureQubit,
        data_b: PureQubit,
        trigger_a: TriggerSpec,
        trigger_b: TriggerSpec,
        model: ProbModel,
    ) -> Self {
        ProtocolConfig {
            data_a,
            data_b,
            trigger_a,
            trigger_b,
            model,
        }
    }

    /// Firing probabilities `(p_a, p_b)`.
    pub fn probabilities(&self) -> (ProbOutcome, ProbOutcome) {
        (
            firing_probability(self.model, &self.trigger_a, &self.data_a),
            firing_probability(self.model, &self.trigger_b, &self.data_b),
        )
    }

    /// Transfer weights `(w_ab, w_ba)`: the probability that exactly the
    /// sending side's trigger fired, for each direction.
    pub fn weights(&self) -> (f64, f64) {
        let (pa, pb) = self.probabilities();
        (pa.p * (1.0 - pb.p), pb.p * (1.0 - pa.p))
    }

    /// The teleported density matrix on `side`.
    pub fn teleported(&self, side: Side) -> DensityMatrix2 {
        let (w_ab, w_ba) = self.weights();
        match side {
            Side::Bob => mixture_state(&self.data_a, w_ab),
            Side::Alice => mixture_state(&self.data_b, w_ba),
        }
    }

    /// Both outputs at once: `(alice, bob)`.
    pub fn teleported_pair(&self) -> (DensityMatrix2, DensityMatrix2) {
        (self.teleported(Side::Alice), self.teleported(Side::Bob))
    }
}

/// `w * rho(q) + (1 - w) * I/2`, expressed in the Bloch picture as the
/// payload vector scaled by `w`.
pub fn mixture_state(payload: &PureQubit, w: f64) -> DensityMatrix2 {
    crate::bloch::bloch_to_density(&payload.bloch().scaled(w))
}

// ====== Bloch-output curves and their derivatives ======

/// The four protocol angles an output can be differentiated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Param {
    ThetaA,
    ThetaB,
    PhiA,
    PhiB,
}

/// Unit Bloch vector of a pure qubit and its derivatives with respect to its
/// own angles.
fn unit_and_derivs(q: &PureQubit) -> (BlochVector, BlochVector, BlochVector) {
    let (t, p) = (q.theta(), q.phi());
    let u = BlochVector {
        x: t.sin() * p.cos(),
        y: -t.sin() * p.sin(),
        z: t.cos(),
    };
    let du_dt = BlochVector {
        x: t.cos() * p.cos(),
        y: -t.cos() * p.sin(),
        z: -t.sin(),
    };
    let du_dp = BlochVector {
        x: -t.sin() * p.sin(),
        y: -t.sin() * p.cos(),
        z: 0.0,
    };
    (u, du_dt, du_dp)
}

/// The teleported Bloch vector on `side` and its analytic partial derivative
/// with respect to `param`.
///
/// The output on, say, Bob's side is `s = w_ab(angles) * u(theta_a, phi_a)`,
/// so each partial is a product-rule combination of the scalar weight
/// gradient and (for payload parameters) the payload curve derivative.
pub fn teleported_bloch_partial(cfg: &ProtocolConfig, side: Side, param: Param) -> (BlochVector, BlochVector) {
    let (pa, pb) = cfg.probabilities();
    let ga = firing_probability_grad(cfg.model, &cfg.trigger_a, &cfg.data_a);
    let gb = firing_probability_grad(cfg.model, &cfg.trigger_b, &cfg.data_b);

    // Weight and its partial with respect to `param` on the requested side.
    let (w, dw, payload, payload_is_differentiated) = match side {
        Side::Bob => {
            let w = pa.p * (1.0 - pb.p);
            let dw = match param {
                Param::ThetaA => ga.d_theta * (1.0 - pb.p),
                Param::PhiA => ga.d_phi * (1.0 - pb.p),
                Param::ThetaB => -pa.p * gb.d_theta,
                Param::PhiB => -pa.p * gb.d_phi,
            };
            let differentiated = matches!(param, Param::ThetaA | Param::PhiA);
            (w, dw, cfg.data_a, differentiated)
        }
        Side::Alice => {
            let w = pb.p * (1.0 - pa.p);
            let dw = match param {
                Param::ThetaB => gb.d_theta * (1.0 - pa.p),
                Param::PhiB => gb.d_phi * (1.0 - pa.p),
                Param::ThetaA => -pb.p * ga.d_theta,
                Param::PhiA => -pb.p * ga.d_phi,
            };
            let differentiated = matches!(param, Param::ThetaB | Param::PhiB);
            (w, dw, cfg.data_b, differentiated)
        }
    };

    let (u, du_dt, du_dp) = unit_and_derivs(&payload);
    let s = u.scaled(w);
    let mut ds = u.scaled(dw);
    if payload_is_differentiated {
        let du = match param {
            Param::ThetaA | Param::ThetaB => du_dt,
            Param::PhiA | Param::PhiB => du_dp,
        };
        ds = BlochVector {
            x: ds.x + w * du.x,
            y: ds.y + w * du.y,
            z: ds.z + w * du.z,
        };
    }
    (s, ds)
}
