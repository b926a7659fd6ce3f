//! Single-qubit states: angle parameterization, Bloch vectors, and 2x2
//! density matrices, plus the fidelity and trace-distance comparisons used
//! everywhere else in the crate.
//!
//! Conventions, fixed once here:
//!
//! * A pure qubit `(theta, phi)` has ket amplitudes
//!   `(cos(theta/2), e^{i phi} sin(theta/2))`.
//! * Its Bloch vector is `(sin theta cos phi, -sin theta sin phi, cos theta)`.
//!   Note the minus sign on the y component. The shared two-qubit channel has
//!   correlation tensor `diag(+1, -1, +1)`, and this sign choice makes every
//!   teleported Bloch vector downstream equal `weight * input` with no axis
//!   flip, so the closed-form expressions stay literal.
//! * A density matrix is `rho = (I + x sx + y sy + z sz) / 2`.
//!
//! The pure-state fidelity `state_fidelity(rho, psi)` is evaluated in this
//! same convention, i.e. as `tr(rho * rho_psi)` with `rho_psi` built through
//! the Bloch map above.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tol;

// ====== angle and state parameterizations ======

/// An angle in radians. Construction rejects non-finite values; any finite
/// real is accepted (callers may wrap or fold as they see fit).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Angle(f64);

impl Angle {
    pub fn new(radians: f64) -> Result<Self> {
        if radians.is_finite() {
            Ok(Angle(radians))
        } else {
            Err(Error::NonFiniteAngle(radians))
        }
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

/// A pure qubit `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PureQubit {
    theta: Angle,
    phi: Angle,
}

impl PureQubit {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        Ok(PureQubit {
            theta: Angle::new(theta)?,
            phi: Angle::new(phi)?,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta.radians()
    }

    pub fn phi(&self) -> f64 {
        self.phi.radians()
    }

    /// Literal ket amplitudes `(cos(theta/2), e^{i phi} sin(theta/2))`.
    pub fn amplitudes(&self) -> [Complex64; 2] {
        let (t, p) = (self.theta(), self.phi());
        [
            Complex64::new((t / 2.0).cos(), 0.0),
            Complex64::from_polar((t / 2.0).sin(), p),
        ]
    }

    /// Bloch vector in the crate convention (see module docs).
    pub fn bloch(&self) -> BlochVector {
        pure_to_bloch(self)
    }

    /// Density matrix of this state in the crate convention.
    pub fn density(&self) -> DensityMatrix2 {
        bloch_to_density(&self.bloch())
    }
}

/// A trigger qubit `cos(tt/2)|0> + sin(tt/2)|1>` (real amplitudes; the polar
/// angle alone parameterizes it).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriggerSpec {
    theta_tilde: Angle,
}

impl TriggerSpec {
    pub fn new(theta_tilde: f64) -> Result<Self> {
        Ok(TriggerSpec {
            theta_tilde: Angle::new(theta_tilde)?,
        })
    }

    pub fn theta_tilde(&self) -> f64 {
        self.theta_tilde.radians()
    }

    /// Bloch vector `(sin tt, 0, cos tt)` (no y component, so the phase-sign
    /// convention does not enter).
    pub fn bloch(&self) -> BlochVector {
        let tt = self.theta_tilde();
        BlochVector {
            x: tt.sin(),
            y: 0.0,
            z: tt.cos(),
        }
    }

    /// Ket amplitudes `(cos(tt/2), sin(tt/2))`.
    pub fn amplitudes(&self) -> [Complex64; 2] {
        let tt = self.theta_tilde();
        [
            Complex64::new((tt / 2.0).cos(), 0.0),
            Complex64::new((tt / 2.0).sin(), 0.0),
        ]
    }
}

// ====== Bloch vectors ======

/// A Bloch vector with `|s| <= 1` (up to the physicality slack).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    /// Validates finiteness and the physical norm bound
    /// `|s|^2 <= 1 + tol::PHYSICALITY`.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::NonFiniteBloch { x, y, z });
        }
        let norm_sq = x * x + y * y + z * z;
        if norm_sq > 1.0 + tol::PHYSICALITY {
            return Err(Error::BlochNormExceeded {
                norm: norm_sq.sqrt(),
                tol: tol::PHYSICALITY,
            });
        }
        Ok(BlochVector { x, y, z })
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Scales toward the center of the ball; `w` in [0, 1] keeps the result
    /// physical.
    pub fn scaled(&self, w: f64) -> BlochVector {
        BlochVector {
            x: w * self.x,
            y: w * self.y,
            z: w * self.z,
        }
    }
}

// ====== density matrices ======

/// A 2x2 density matrix: Hermitian, unit trace, positive semidefinite
/// (all enforced at construction, with documented slack).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    m: [[Complex64; 2]; 2],
}

impl DensityMatrix2 {
    /// Validates Hermiticity and trace within `tol::MATRIX_IDENTITY` and
    /// eigenvalues within `[-tol::PHYSICALITY, 1 + tol::PHYSICALITY]`.
    pub fn from_entries(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let asym = [
            (m[0][1] - m[1][0].conj()).norm(),
            m[0][0].im.abs(),
            m[1][1].im.abs(),
        ]
        .into_iter()
        .fold(0.0_f64, f64::max);
        if asym > tol::MATRIX_IDENTITY {
            return Err(Error::NotHermitian {
                max_asym: asym,
                tol: tol::MATRIX_IDENTITY,
            });
        }
        let trace = m[0][0].re + m[1][1].re;
        if (trace - 1.0).abs() > tol::MATRIX_IDENTITY {
            return Err(Error::TraceNotOne {
                trace,
                tol: tol::MATRIX_IDENTITY,
            });
        }
        let rho = DensityMatrix2 { m };
        let (lo, hi) = rho.eigenvalues();
        if lo < -tol::PHYSICALITY || hi > 1.0 + tol::PHYSICALITY {
            let eig = if lo < -tol::PHYSICALITY { lo } else { hi };
            return Err(Error::NotPositive {
                eig,
                tol: tol::PHYSICALITY,
            });
        }
        Ok(rho)
    }

    /// The maximally mixed state `I/2`.
    pub fn maximally_mixed() -> Self {
        let h = Complex64::new(0.5, 0.0);
        let z = Complex64::new(0.0, 0.0);
        DensityMatrix2 { m: [[h, z], [z, h]] }
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[i][j]
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0].re + self.m[1][1].re
    }

    /// `tr(rho^2)`; equals `(1 + |s|^2) / 2` in the Bloch picture.
    pub fn purity(&self) -> f64 {
        let m = &self.m;
        (m[0][0] * m[0][0] + m[0][1] * m[1][0] + m[1][0] * m[0][1] + m[1][1] * m[1][1]).re
    }

    /// Eigenvalues `(low, high)` from the trace/determinant quadratic.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let t = self.trace();
        let det = (self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]).re;
        let disc = (t * t - 4.0 * det).max(0.0).sqrt();
        ((t - disc) / 2.0, (t + disc) / 2.0)
    }

    pub fn bloch(&self) -> BlochVector {
        density_to_bloch(self)
    }

    /// Internal constructor for matrices that are Hermitian/unit-trace by
    /// construction (e.g. built from a validated Bloch vector).
    pub(crate) fn from_entries_unchecked(m: [[Complex64; 2]; 2]) -> Self {
        DensityMatrix2 { m }
    }
}

// ====== operations ======

/// Bloch vector of a pure qubit:
/// `(sin theta cos phi, -sin theta sin phi, cos theta)`.
pub fn pure_to_bloch(q: &PureQubit) -> BlochVector {
    let (t, p) = (q.theta(), q.phi());
    BlochVector {
        x: t.sin() * p.cos(),
        y: -t.sin() * p.sin(),
        z: t.cos(),
    }
}

/// `rho = (I + s . sigma) / 2`. Physicality is guaranteed by the
/// `BlochVector` type, so this cannot fail.
pub fn bloch_to_density(s: &BlochVector) -> DensityMatrix2 {
    let half = 0.5;
    DensityMatrix2::from_entries_unchecked([
        [
            Complex64::new(half * (1.0 + s.z), 0.0),
            Complex64::new(half * s.x, -half * s.y),
        ],
        [
            Complex64::new(half * s.x, half * s.y),
            Complex64::new(half * (1.0 - s.z), 0.0),
        ],
    ])
}

/// Inverse of [`bloch_to_density`]. Input validity (Hermitian, unit trace)
/// is guaranteed by the `DensityMatrix2` type.
pub fn density_to_bloch(rho: &DensityMatrix2) -> BlochVector {
    BlochVector {
        x: 2.0 * rho.entry(0, 1).re,
        y: -2.0 * rho.entry(0, 1).im,
        z: rho.entry(0, 0).re - rho.entry(1, 1).re,
    }
}

/// Fidelity of a state against a pure reference, `tr(rho * rho_psi)` with
/// both in the crate convention. Equals `(1 + s_rho . s_psi) / 2`; the result
/// is clamped to [0, 1] against rounding.
pub fn state_fidelity(rho: &DensityMatrix2, psi: &PureQubit) -> f64 {
    let f = 0.5 * (1.0 + rho.bloch().dot(&psi.bloch()));
    f.clamp(0.0, 1.0)
}

/// Trace distance `|| a - b ||_1 / 2` via the eigenvalues of the (Hermitian)
/// difference. Always in [0, 1] for density matrices.
pub fn trace_distance(a: &DensityMatrix2, b: &DensityMatrix2) -> f64 {
    let d00 = a.entry(0, 0) - b.entry(0, 0);
    let d01 = a.entry(0, 1) - b.entry(0, 1);
    let d11 = a.entry(1, 1) - b.entry(1, 1);
    let t = d00.re + d11.re;
    let det = d00.re * d11.re - d01.norm_sqr();
    let disc = (t * t - 4.0 * det).max(0.0).sqrt();
    let (l1, l2) = ((t - disc) / 2.0, (t + disc) / 2.0);
    (l1.abs() + l2.abs()) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bloch_poles_and_equator() {
        let north = pure_to_bloch(&PureQubit::new(0.0, 0.3).unwrap());
        assert_abs_diff_eq!(north.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(north.y, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(north.z, 1.0, epsilon = 1e-15);

        let south = pure_to_bloch(&PureQubit::new(PI, 0.0).unwrap());
        assert_abs_diff_eq!(south.z, -1.0, epsilon = 1e-15);

        let equator = pure_to_bloch(&PureQubit::new(FRAC_PI_2, 0.0).unwrap());
        assert_abs_diff_eq!(equator.x, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(equator.z, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn bloch_y_sign_convention() {
        // (theta, phi) = (pi/2, pi/2) maps to (0, -1, 0): the y component
        // carries a minus sign in this crate's convention.
        let s = pure_to_bloch(&PureQubit::new(FRAC_PI_2, FRAC_PI_2).unwrap());
        assert_abs_diff_eq!(s.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.y, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.z, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn density_round_trip_center_and_pole() {
        let center = BlochVector::new(0.0, 0.0, 0.0).unwrap();
        let rho = bloch_to_density(&center);
        assert_eq!(rho.entries(), DensityMatrix2::maximally_mixed().entries());

        let s = BlochVector::new(0.3, -0.4, 0.5).unwrap();
        let back = density_to_bloch(&bloch_to_density(&s));
        assert_abs_diff_eq!(back.x, s.x, epsilon = 1e-15);
        assert_abs_diff_eq!(back.y, s.y, epsilon = 1e-15);
        assert_abs_diff_eq!(back.z, s.z, epsilon = 1e-15);
    }

    #[test]
    fn rejects_unphysical_input() {
        assert!(BlochVector::new(1.5, 0.0, 0.0).is_err());
        assert!(BlochVector::new(f64::NAN, 0.0, 0.0).is_err());
        assert!(Angle::new(f64::INFINITY).is_err());

        // Non-Hermitian.
        let bad = [[c(0.5, 0.0), c(0.1, 0.0)], [c(0.3, 0.0), c(0.5, 0.0)]];
        assert!(matches!(
            DensityMatrix2::from_entries(bad),
            Err(Error::NotHermitian { .. })
        ));

        // Trace off.
        let bad = [[c(0.6, 0.0), c(0.0, 0.0)], [c(0.6, 0.0), c(0.6, 0.0)]];
        assert!(DensityMatrix2::from_entries(bad).is_err());

        // Hermitian, unit trace, but indefinite.
        let bad = [[c(1.2, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-0.2, 0.0)]];
        assert!(matches!(
            DensityMatrix2::from_entries(bad),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn fidelity_pinned_values() {
        let ket0 = PureQubit::new(0.0, 0.0).unwrap();
        let ket1 = PureQubit::new(PI, 0.0).unwrap();
        assert_abs_diff_eq!(state_fidelity(&ket0.density(), &ket0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(state_fidelity(&ket0.density(), &ket1), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            state_fidelity(&DensityMatrix2::maximally_mixed(), &ket1),
            0.5,
            epsilon = 1e-15
        );
    }

    /// Independent eigenvalue oracle for the trace distance: diagonalize the
    /// difference by the explicit 2x2 characteristic polynomial, done here in
    /// the test rather than through the library routine.
    fn trace_distance_oracle(a: &DensityMatrix2, b: &DensityMatrix2) -> f64 {
        let d = [
            a.entry(0, 0) - b.entry(0, 0),
            a.entry(0, 1) - b.entry(0, 1),
            a.entry(1, 0) - b.entry(1, 0),
            a.entry(1, 1) - b.entry(1, 1),
        ];
        let tr = d[0] + d[3];
        let det = d[0] * d[3] - d[1] * d[2];
        let disc = (tr * tr - 4.0 * det).sqrt();
        let l1 = (tr + disc) / 2.0;
        let l2 = (tr - disc) / 2.0;
        (l1.norm() + l2.norm()) / 2.0
    }

    #[test]
    fn trace_distance_pinned_values() {
        let ket0 = PureQubit::new(0.0, 0.0).unwrap().density();
        let ket1 = PureQubit::new(PI, 0.0).unwrap().density();
        let mixed = DensityMatrix2::maximally_mixed();

        assert_abs_diff_eq!(trace_distance(&ket0, &ket0), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(trace_distance(&ket0, &ket1), 1.0, epsilon = 1e-15);

        // Frozen from the eigenvalue oracle: eigenvalues of ket0 - I/2 are
        // +1/2 and -1/2, so the distance is 1/2.
        let expected = trace_distance_oracle(&ket0, &mixed);
        assert_abs_diff_eq!(expected, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(trace_distance(&ket0, &mixed), expected, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn purity_matches_bloch_norm(x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64) {
            let n = (x * x + y * y + z * z).sqrt();
            let (x, y, z) = if n > 1.0 { (x / n, y / n, z / n) } else { (x, y, z) };
            let s = BlochVector::new(x, y, z).unwrap();
            let rho = bloch_to_density(&s);
            prop_assert!((rho.purity() - 0.5 * (1.0 + s.norm_sq())).abs() < 1e-12);
        }

        #[test]
        fn fidelity_identity_on_pure_states(theta in 0.0..std::f64::consts::PI, phi in 0.0..std::f64::consts::TAU) {
            let q = PureQubit::new(theta, phi).unwrap();
            let rho = bloch_to_density(&pure_to_bloch(&q));
            prop_assert!((state_fidelity(&rho, &q) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn round_trip_bloch_density(x in -0.57f64..0.57, y in -0.57f64..0.57, z in -0.57f64..0.57) {
            let s = BlochVector::new(x, y, z).unwrap();
            let back = density_to_bloch(&bloch_to_density(&s));
            prop_assert!((back.x - s.x).abs() < 1e-14);
            prop_assert!((back.y - s.y).abs() < 1e-14);
            prop_assert!((back.z - s.z).abs() < 1e-14);
        }

        #[test]
        fn trace_distance_is_a_bounded_metric(
            a in (-0.5f64..0.5, -0.5f64..0.5, -0.5f64..0.5),
            b in (-0.5f64..0.5, -0.5f64..0.5, -0.5f64..0.5),
        ) {
            let ra = bloch_to_density(&BlochVector::new(a.0, a.1, a.2).unwrap());
            let rb = bloch_to_density(&BlochVector::new(b.0, b.1, b.2).unwrap());
            let d = trace_distance(&ra, &rb);
            prop_assert!((0.0..=1.0).contains(&d));
            prop_assert!((d - trace_distance(&rb, &ra)).abs() < 1e-15);
            prop_assert!((d - trace_distance_oracle(&ra, &rb)).abs() < 1e-13);
        }
    }
}
