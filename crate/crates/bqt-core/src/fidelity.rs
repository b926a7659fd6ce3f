//! Fidelity of the exchanged states.
//!
//! Each output register holds `w * |payload><payload| + (1 - w) * I/2`, so
//! every fidelity in this module reduces to an affine function of a squared
//! ket overlap. The module keeps two equivalent routes on purpose:
//! [`point_fidelity`] expands the overlap literally in the half-angle
//! amplitudes, while [`crate::bloch::state_fidelity`] works on Bloch vectors;
//! their agreement is pinned in the tests.

use crate::bloch::PureQubit;
use crate::error::{Error, Result};
use crate::protocol::{ProtocolConfig, Side};
use crate::quad::{self, SphereRule};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Transfer direction under consideration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Direction {
    /// Alice's data arriving at Bob's register.
    AtoB,
    /// Bob's data arriving at Alice's register.
    BtoA,
}

impl Direction {
    /// The register that receives the payload in this direction.
    pub fn receiver(self) -> Side {
        match self {
            Direction::AtoB => Side::Bob,
            Direction::BtoA => Side::Alice,
        }
    }
}

/// Mixture coefficients of a received state `a1 * |t><t| + a2 * I`.
///
/// `a1` is the faithful-transfer weight and `a2` the white-noise floor; the
/// unit-trace constraint ties them together as `a1 + 2 * a2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FidelityParams {
    pub a1: f64,
    pub a2: f64,
    pub direction: Direction,
}

impl FidelityParams {
    /// Validates `a1 in [0, 1]`, `a2 in [0, 1/2]`, and the trace constraint
    /// `a1 + 2 * a2 = 1` to within [`crate::tol::MATRIX_IDENTITY`].
    pub fn new(a1: f64, a2: f64, direction: Direction) -> Result<Self> {
        let ok = a1.is_finite()
            && a2.is_finite()
            && (0.0..=1.0).contains(&a1)
            && (0.0..=0.5).contains(&a2)
            && (a1 + 2.0 * a2 - 1.0).abs() <= crate::tol::MATRIX_IDENTITY;
        if !ok {
            return Err(Error::BadFidelityParams { a1, a2 });
        }
        Ok(FidelityParams { a1, a2, direction })
    }

    /// Coefficients realized by a protocol configuration: the transfer weight
    /// of the requested direction becomes `a1`, and the remainder is split
    /// evenly over the identity.
    pub fn from_config(cfg: &ProtocolConfig, direction: Direction) -> Self {
        let (w_ab, w_ba) = cfg.weights();
        let a1 = match direction {
            Direction::AtoB => w_ab,
            Direction::BtoA => w_ba,
        };
        FidelityParams {
            a1,
            a2: (1.0 - a1) / 2.0,
            direction,
        }
    }
}

/// Overlap fidelity `<i| (a1 |t><t| + a2 I) |i>` between the initially sent
/// state `initial` and a received mixture built around payload `teleported`.
///
/// The squared overlap is expanded literally in the half-angle amplitudes
/// `c = cos(theta/2)`, `s = e^{i phi} sin(theta/2)` of both states, so this
/// route never touches the Bloch picture and serves as an independent check
/// on it.
pub fn point_fidelity(
    initial: &PureQubit,
    teleported: &PureQubit,
    params: &FidelityParams,
) -> f64 {
    let [ci, si] = initial.amplitudes();
    let [ct, st] = teleported.amplitudes();
    let overlap = ct.conj() * ci + st.conj() * si;
    params.a2 + params.a1 * overlap.norm_sqr()
}

/// Fidelity of one transfer direction as a function of the two firing
/// probabilities alone: `(1 + p_sender (1 - p_receiver)) / 2`.
///
/// This is [`point_fidelity`] specialized to `teleported == initial`, where
/// the squared overlap is 1 and only the transfer weight survives. Bounded
/// in `[1/2, 1]`: even a dead channel leaves the maximally mixed state,
/// which has fidelity 1/2 against any pure qubit.
pub fn direction_fidelity(p_sender: f64, p_receiver: f64) -> f64 {
    0.5 * (1.0 + p_sender * (1.0 - p_receiver))
}

/// [`direction_fidelity`] evaluated on a full protocol configuration.
pub fn config_fidelity(cfg: &ProtocolConfig, direction: Direction) -> f64 {
    let (pa, pb) = cfg.probabilities();
    match direction {
        Direction::AtoB => direction_fidelity(pa.p, pb.p),
        Direction::BtoA => direction_fidelity(pb.p, pa.p),
    }
}

/// Uniform average of a pointwise fidelity over the sender's input sphere.
///
/// `fidelity_at(theta, phi)` must return the fidelity for the data state
/// with those angles. The rule must resolve at least
/// [`quad::MIN_SPHERE_NODES`] nodes per axis; the smooth integrands produced
/// by this crate then converge far below 1e-6 under grid doubling.
pub fn averaged_fidelity<F>(fidelity_at: F, rule: SphereRule) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    let worst = rule.n_theta.min(rule.n_phi);
    if worst < quad::MIN_SPHERE_NODES {
        return Err(Error::BadQuadrature {
            nodes: worst,
            min: quad::MIN_SPHERE_NODES,
        });
    }
    quad::sphere_average(fidelity_at, rule)
}

/// Monte Carlo estimate of the same sphere average, for cross-checking the
/// quadrature. Samples are drawn uniformly on the sphere (cos(theta) uniform
/// in [-1, 1], phi uniform in [0, 2pi)) from a seeded ChaCha stream, so the
/// estimate is reproducible.
pub fn averaged_fidelity_mc<F>(fidelity_at: F, samples: u64, seed: u64) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = 0.0;
    for _ in 0..samples {
        let u: f64 = rng.random_range(-1.0..=1.0);
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        acc += fidelity_at(u.acos(), phi);
    }
    acc / samples as f64
}

/// Average fidelity of one direction over the sender's data sphere, with the
/// sender's trigger and the entire receiving party fixed.
///
/// The sender's firing probability is recomputed at every sampled data
/// state; the receiver's stays at its configured value.
pub fn averaged_config_fidelity(
    cfg: &ProtocolConfig,
    direction: Direction,
    rule: SphereRule,
) -> Result<f64> {
    let (pa, pb) = cfg.probabilities();
    let (trigger, p_recv) = match direction {
        Direction::AtoB => (cfg.trigger_a, pb.p),
        Direction::BtoA => (cfg.trigger_b, pa.p),
    };
    averaged_fidelity(
        |theta, phi| {
            let data = PureQubit::new(theta, phi).expect("quadrature angles are finite");
            let p_send = crate::protocol::firing_probability(cfg.model, &trigger, &data).p;
            direction_fidelity(p_send, p_recv)
        },
        rule,
    )
}

// =====================================================================
// tests
// =====================================================================
