//! Quantum Fisher information of the exchanged states, scalar and matrix.
//!
//! Three independent formulations are implemented and cross-checked:
//!
//! * **Bloch** ([`qfi_bloch`], [`qfim_from_curve`]) — for a single qubit the
//!   information metric is an explicit function of the Bloch vector and its
//!   parameter derivatives.
//! * **Spectral** ([`qfim_spectral`]) — the textbook eigendecomposition sum
//!   over pairs of eigenvectors, with near-degenerate pairs dropped below a
//!   cutoff.
//! * **Vectorized** ([`qfim_vectorized`]) — column-stacking the symmetric
//!   logarithmic-derivative equation into a 4x4 linear solve; only valid for
//!   strictly positive states.
//!
//! On top of these sit the closed rational expressions for the carrier
//! curves of this protocol ([`qfim_closed`]), the symmetric
//! logarithmic-derivative solver ([`sld_solve`]), and the variance bounds
//! and ratios used by the figure sweeps ([`variance_report`]).

use num_complex::Complex64;

use crate::bloch::{BlochVector, DensityMatrix2};
use crate::error::{Error, Result};
use crate::protocol::{
    firing_probability_grad, teleported_bloch_partial, Param, ProtocolConfig, Side,
};
use crate::smallmat::{vec_col_2x2, CMat};
use crate::tol;

// ====== Bloch-picture formulation ======

/// QFI of a qubit path `s(x)` at a point, from the Bloch vector `s` and its
/// derivative `ds`.
///
/// For a strictly mixed state `F = |ds|^2 + (s . ds)^2 / (1 - |s|^2)`. On
/// the pure shell the radial term becomes 0/0; within
/// [`tol::PURE_BRANCH`] of it the tangential form `|ds|^2` is used instead,
/// which is the correct limit for norm-preserving (pure-state) paths.
pub fn qfi_bloch(s: &BlochVector, ds: &BlochVector) -> f64 {
    qfim_bloch_entry(s, ds, ds)
}

/// One entry of the Bloch-picture QFI matrix:
/// `F_ij = di . dj + (s . di)(s . dj) / (1 - |s|^2)`, with the same pure
/// branch as [`qfi_bloch`].
pub fn qfim_bloch_entry(s: &BlochVector, di: &BlochVector, dj: &BlochVector) -> f64 {
    let n2 = s.norm_sq();
    if n2 > 1.0 - tol::PURE_BRANCH {
        di.dot(dj)
    } else {
        di.dot(dj) + s.dot(di) * s.dot(dj) / (1.0 - n2)
    }
}

/// Symmetric 2x2 information matrix over the polar-angle pair
/// `(theta_a, theta_b)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QfiMatrix {
    pub aa: f64,
    pub ab: f64,
    pub bb: f64,
}

impl QfiMatrix {
    pub fn det(&self) -> f64 {
        self.aa * self.bb - self.ab * self.ab
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        [[self.aa, self.ab], [self.ab, self.bb]]
    }

    /// Smaller eigenvalue; non-negative (up to roundoff) for any valid QFIM.
    pub fn min_eigenvalue(&self) -> f64 {
        let mean = 0.5 * (self.aa + self.bb);
        let disc = (0.5 * (self.aa - self.bb)).hypot(self.ab);
        mean - disc
    }

    /// Diagonal of the inverse: the simultaneous-estimation variance bounds
    /// for the two parameters. IEEE semantics apply when the matrix is
    /// singular: entries become infinite (or NaN for an exact 0/0).
    pub fn inverse_diagonal(&self) -> (f64, f64) {
        let d = self.det();
        (self.bb / d, self.aa / d)
    }
}

/// QFIM of the state received on `side`, over `(theta_a, theta_b)`, computed
/// numerically from the analytic Bloch output curve.
pub fn qfim_from_curve(cfg: &ProtocolConfig, side: Side) -> QfiMatrix {
    let (s, da) = teleported_bloch_partial(cfg, side, Param::ThetaA);
    let (_, db) = teleported_bloch_partial(cfg, side, Param::ThetaB);
    QfiMatrix {
        aa: qfim_bloch_entry(&s, &da, &da),
        ab: qfim_bloch_entry(&s, &da, &db),
        bb: qfim_bloch_entry(&s, &db, &db),
    }
}

// ====== Closed rational forms for the carrier curves ======

/// Rational QFIM of a carrier `s = w(x_p, x_o) * u(x_p)` where only the
/// payload parameter `x_p` rotates the payload direction `u` and both
/// parameters move the weight. `kappa = dw/dx_p`, `mu = dw/dx_o`.
///
/// Returns `(f_payload, f_other, f_cross)`. Within [`tol::PURE_BRANCH`] of
/// the pure shell the limiting tangential values are used, matching the
/// branch in [`qfim_bloch_entry`].
fn carrier_qfim(w: f64, kappa: f64, mu: f64) -> (f64, f64, f64) {
    let one_minus = 1.0 - w * w;
    if one_minus < tol::PURE_BRANCH {
        (kappa * kappa + w * w, mu * mu, kappa * mu)
    } else {
        (
            (kappa * kappa + w * w * one_minus) / one_minus,
            mu * mu / one_minus,
            kappa * mu / one_minus,
        )
    }
}

/// Transfer weight of the payload arriving at `side`, the derivative of that
/// weight along the payload's own polar angle (`kappa`), and along the other
/// party's polar angle (`mu`).
fn carrier_coefficients(cfg: &ProtocolConfig, side: Side) -> (f64, f64, f64) {
    let (pa, pb) = cfg.probabilities();
    let ga = firing_probability_grad(cfg.model, &cfg.trigger_a, &cfg.data_a);
    let gb = firing_probability_grad(cfg.model, &cfg.trigger_b, &cfg.data_b);
    match side {
        // Bob holds Alice's payload with weight p_a (1 - p_b).
        Side::Bob => {
            let w = pa.p * (1.0 - pb.p);
            let kappa = (1.0 - pb.p) * ga.d_theta;
            let mu = pa.p * (-gb.d_theta);
            (w, kappa, mu)
        }
        // Alice holds Bob's payload with weight p_b (1 - p_a).
        Side::Alice => {
            let w = pb.p * (1.0 - pa.p);
            let kappa = (1.0 - pa.p) * gb.d_theta;
            let mu = pb.p * (-ga.d_theta);
            (w, kappa, mu)
        }
    }
}

/// Closed-form QFIM of the state received on `side` over
/// `(theta_a, theta_b)`: the rational expressions obtained by inserting the
/// carrier curve into the Bloch metric by hand. Agrees with
/// [`qfim_from_curve`] to machine precision; kept separate so each can
/// check the other.
pub fn qfim_closed(cfg: &ProtocolConfig, side: Side) -> QfiMatrix {
    let (w, kappa, mu) = carrier_coefficients(cfg, side);
    let (f_payload, f_other, f_cross) = carrier_qfim(w, kappa, mu);
    match side {
        // Payload parameter is theta_a, the first index.
        Side::Bob => QfiMatrix {
            aa: f_payload,
            ab: f_cross,
            bb: f_other,
        },
        // Payload parameter is theta_b, the second index.
        Side::Alice => QfiMatrix {
            aa: f_other,
            ab: f_cross,
            bb: f_payload,
        },
    }
}

/// Scalar QFI for one protocol angle, extracted from the receiving
/// register's Bloch curve. Polar angles are read from the partner's
/// register (which is where that information lands); phases likewise.
pub fn scalar_qfi(cfg: &ProtocolConfig, param: Param) -> f64 {
    let side = match param {
        Param::ThetaA | Param::PhiA => Side::Bob,
        Param::ThetaB | Param::PhiB => Side::Alice,
    };
    let (s, ds) = teleported_bloch_partial(cfg, side, param);
    qfi_bloch(&s, &ds)
}

/// Closed rational form of [`scalar_qfi`] for the polar angles:
/// `(kappa^2 + w^2 (1 - w^2)) / (1 - w^2)` on the payload's carrier.
/// Phase parameters have no dedicated rational form and fall through to the
/// curve route.
pub fn scalar_qfi_closed(cfg: &ProtocolConfig, param: Param) -> f64 {
    match param {
        Param::ThetaA => qfim_closed(cfg, Side::Bob).aa,
        Param::ThetaB => qfim_closed(cfg, Side::Alice).bb,
        Param::PhiA | Param::PhiB => scalar_qfi(cfg, param),
    }
}

// ====== Pure-state formulation ======

/// Which angle of a single pure qubit is varied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PureAngle {
    Theta,
    Phi,
}

/// QFI of a pure qubit along one of its own angles, from the ket identity
/// `F = 4 (<dpsi|dpsi> - |<psi|dpsi>|^2)` with analytic amplitude
/// derivatives. Evaluates to 1 along theta and sin^2(theta) along phi.
pub fn qfi_pure(q: &crate::bloch::PureQubit, angle: PureAngle) -> f64 {
    let amps = q.amplitudes();
    let half = 0.5 * q.theta();
    let d: [Complex64; 2] = match angle {
        PureAngle::Theta => [
            Complex64::new(-0.5 * half.sin(), 0.0),
            Complex64::from_polar(0.5 * half.cos(), q.phi()),
        ],
        PureAngle::Phi => [Complex64::ZERO, Complex64::new(0.0, 1.0) * amps[1]],
    };
    let dd = d[0].norm_sqr() + d[1].norm_sqr();
    let overlap = amps[0].conj() * d[0] + amps[1].conj() * d[1];
    4.0 * (dd - overlap.norm_sqr())
}

// ====== Density-matrix routes ======

/// Half the Pauli expansion of a Bloch derivative: the 2x2 traceless
/// Hermitian matrix `d rho = (ds . sigma) / 2`.
pub fn bloch_partial_matrix(ds: &BlochVector) -> [[Complex64; 2]; 2] {
    [
        [
            Complex64::new(0.5 * ds.z, 0.0),
            Complex64::new(0.5 * ds.x, -0.5 * ds.y),
        ],
        [
            Complex64::new(0.5 * ds.x, 0.5 * ds.y),
            Complex64::new(-0.5 * ds.z, 0.0),
        ],
    ]
}

/// Analytic parameter derivative of the density matrix received on `side`.
pub fn teleported_density_partial(
    cfg: &ProtocolConfig,
    side: Side,
    param: Param,
) -> [[Complex64; 2]; 2] {
    let (_, ds) = teleported_bloch_partial(cfg, side, param);
    bloch_partial_matrix(&ds)
}

/// `<bra| m |ket>` for 2-component kets.
fn melem(bra: &[Complex64; 2], m: &[[Complex64; 2]; 2], ket: &[Complex64; 2]) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for i in 0..2 {
        for j in 0..2 {
            acc += bra[i].conj() * m[i][j] * ket[j];
        }
    }
    acc
}

/// Eigendecomposition of a qubit density matrix: `(values, vectors)` with
/// the larger eigenvalue first. Degenerate (maximally mixed) inputs fall
/// back to the computational basis.
fn eigensystem(rho: &DensityMatrix2) -> ([f64; 2], [[Complex64; 2]; 2]) {
    let s = rho.bloch();
    let r = s.norm();
    let (nx, ny, nz) = if r < 1e-15 {
        (0.0, 0.0, 1.0)
    } else {
        (s.x / r, s.y / r, s.z / r)
    };
    let alpha = nz.clamp(-1.0, 1.0).acos();
    let beta = ny.atan2(nx);
    let (ca, sa) = ((0.5 * alpha).cos(), (0.5 * alpha).sin());
    let plus = [Complex64::new(ca, 0.0), Complex64::from_polar(sa, beta)];
    let minus = [-Complex64::from_polar(sa, -beta), Complex64::new(ca, 0.0)];
    ([(1.0 + r) / 2.0, (1.0 - r) / 2.0], [plus, minus])
}

/// Spectral-sum QFIM entry:
/// `F_ij = sum_{m,n} 2 Re(<m|di|n><n|dj|m>) / (p_m + p_n)`, restricted to
/// eigenvalue pairs with `p_m + p_n` above [`tol::SPECTRAL_CUTOFF`].
pub fn qfim_spectral(
    rho: &DensityMatrix2,
    di: &[[Complex64; 2]; 2],
    dj: &[[Complex64; 2]; 2],
) -> f64 {
    let (p, v) = eigensystem(rho);
    let mut acc = 0.0;
    for m in 0..2 {
        for n in 0..2 {
            let denom = p[m] + p[n];
            if denom <= tol::SPECTRAL_CUTOFF {
                continue;
            }
            let a = melem(&v[m], di, &v[n]);
            let b = melem(&v[n], dj, &v[m]);
            acc += 2.0 * (a * b).re / denom;
        }
    }
    acc
}

/// QFIM entry through column-stacking: vectorize the symmetric
/// logarithmic-derivative equation `d rho = (rho L + L rho) / 2` into
/// `(I (x) rho + rho^T (x) I) vec(L) = 2 vec(d rho)` and contract with
/// `vec(di)`.
///
/// Requires a strictly positive state: inputs whose smallest eigenvalue is
/// at or below [`tol::SPECTRAL_CUTOFF`] are rejected, because the 4x4
/// operator is then (numerically) singular.
pub fn qfim_vectorized(
    rho: &DensityMatrix2,
    di: &[[Complex64; 2]; 2],
    dj: &[[Complex64; 2]; 2],
) -> Result<f64> {
    let (e1, e2) = rho.eigenvalues();
    let min_eig = e1.min(e2);
    if min_eig <= tol::SPECTRAL_CUTOFF {
        return Err(Error::SingularDensity {
            min_eig,
            cutoff: tol::SPECTRAL_CUTOFF,
        });
    }
    let e = rho.entries();
    let rho_m = CMat::from_rows(&[&[e[0][0], e[0][1]], &[e[1][0], e[1][1]]]);
    let rho_t = CMat::from_rows(&[&[e[0][0], e[1][0]], &[e[0][1], e[1][1]]]);
    let id = CMat::identity(2);
    let lhs = id.kron(&rho_m).add(&rho_t.kron(&id));
    let rhs = vec_col_2x2(dj);
    let sol = lhs.lu_solve(&rhs)?;
    let vi = vec_col_2x2(di);
    let mut acc = Complex64::ZERO;
    for k in 0..4 {
        acc += vi[k].conj() * sol[k];
    }
    Ok(2.0 * acc.re)
}

/// Symmetric logarithmic derivative of `rho` along `drho`.
#[derive(Debug, Clone)]
pub struct SldOutcome {
    /// The operator `L` with `d rho = (rho L + L rho)/2`.
    pub matrix: [[Complex64; 2]; 2],
    /// False when an eigenvalue pair fell below the spectral cutoff and its
    /// component of `L` was set to zero (the minimal-norm completion).
    pub unique: bool,
}

/// Solves the symmetric logarithmic-derivative equation in the eigenbasis:
/// `L_mn = 2 <m|drho|n> / (p_m + p_n)`, dropping (zeroing) components whose
/// eigenvalue sum is at or below [`tol::SPECTRAL_CUTOFF`].
pub fn sld_solve(rho: &DensityMatrix2, drho: &[[Complex64; 2]; 2]) -> SldOutcome {
    let (p, v) = eigensystem(rho);
    let mut coeff = [[Complex64::ZERO; 2]; 2];
    let mut unique = true;
    for m in 0..2 {
        for n in 0..2 {
            let denom = p[m] + p[n];
            if denom <= tol::SPECTRAL_CUTOFF {
                unique = false;
                continue;
            }
            coeff[m][n] = 2.0 * melem(&v[m], drho, &v[n]) / denom;
        }
    }
    // L = sum_mn coeff[m][n] |m><n|.
    let mut l = [[Complex64::ZERO; 2]; 2];
    for m in 0..2 {
        for n in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    l[i][j] += coeff[m][n] * v[m][i] * v[n][j].conj();
                }
            }
        }
    }
    SldOutcome { matrix: l, unique }
}

// ====== Variance bounds and ratios ======

/// Estimation-variance bounds for the two polar angles, each judged from
/// the register that receives it, plus the independent/simultaneous ratios.
///
/// Two simultaneous bounds are reported per parameter:
///
/// * `var_sim_*` — the diagonal of the inverse of the full 2x2 QFIM of the
///   receiving register (infinite when that matrix is singular);
/// * `var_sim_direct_*` — a direct rational expression in the firing
///   probabilities, kept as a diagnostic. The `a` form reduces
///   algebraically to `1 / w^2` wherever it is defined. The `b` form
///   differentiates a probability with respect to an angle it does not
///   depend on, so its numerator vanishes identically; it is retained
///   verbatim (0 where defined, NaN at 0/0) rather than silently repaired.
///
/// The headline ratios `delta_*` use the closed reduction
/// `w^2 (1 - w^2) / (kappa^2 + w^2 (1 - w^2))`, which equals
/// `det F / (F_aa F_bb)` of the receiving register's QFIM wherever that
/// matrix is nonsingular, and extends it continuously across the singular
/// grid lines. They are NaN only at exact 0/0 corners (`w` in {0, 1} with
/// `kappa = 0`).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct VarianceReport {
    /// Independent (single-parameter) bound for theta_a: `1 / F(theta_a)`.
    pub var_ind_a: f64,
    /// Independent bound for theta_b.
    pub var_ind_b: f64,
    /// Simultaneous bound for theta_a from the inverse QFIM diagonal.
    pub var_sim_a: f64,
    /// Simultaneous bound for theta_b from the inverse QFIM diagonal.
    pub var_sim_b: f64,
    /// Direct rational simultaneous bound for theta_a (`1/w^2` a.e.).
    pub var_sim_direct_a: f64,
    /// Direct rational simultaneous bound for theta_b (0 a.e.; see above).
    pub var_sim_direct_b: f64,
    /// Independent/simultaneous variance ratio for theta_a, in [0, 1].
    pub delta_alice: f64,
    /// Independent/simultaneous variance ratio for theta_b, in [0, 1].
    pub delta_bob: f64,
}

impl VarianceReport {
    /// True when any field is non-finite (singular information matrix or an
    /// exact 0/0 corner). Flagged cells are reported, never silently fixed.
    pub fn flagged(&self) -> bool {
        ![
            self.var_ind_a,
            self.var_ind_b,
            self.var_sim_a,
            self.var_sim_b,
            self.var_sim_direct_a,
            self.var_sim_direct_b,
            self.delta_alice,
            self.delta_bob,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

/// Closed ratio of independent to simultaneous variance bound on one
/// carrier: `w^2 (1 - w^2) / (kappa^2 + w^2 (1 - w^2))`. IEEE 0/0 -> NaN at
/// the degenerate corners.
fn variance_ratio(w: f64, kappa: f64) -> f64 {
    let radial = w * w * (1.0 - w * w);
    radial / (kappa * kappa + radial)
}

/// Assembles every variance bound and ratio for one configuration.
pub fn variance_report(cfg: &ProtocolConfig) -> VarianceReport {
    let (pa, pb) = cfg.probabilities();
    let ga = firing_probability_grad(cfg.model, &cfg.trigger_a, &cfg.data_a);
    let gb = firing_probability_grad(cfg.model, &cfg.trigger_b, &cfg.data_b);

    let bob = qfim_closed(cfg, Side::Bob);
    let alice = qfim_closed(cfg, Side::Alice);
    let (w_ab, kappa_a, _) = carrier_coefficients(cfg, Side::Bob);
    let (w_ba, kappa_b, _) = carrier_coefficients(cfg, Side::Alice);

    // Direct rational simultaneous bounds, evaluated term by term exactly
    // as written so their degeneracies stay visible.
    let dpbar_b = -gb.d_theta;
    let num_a = (pa.p * dpbar_b).powi(2);
    let den_a = (1.0 - pb.p).powi(2) * pa.p.powi(4) * dpbar_b.powi(2);
    let dpbar_a_wrt_theta_b = 0.0; // p_a carries no theta_b dependence
    let num_b = (pb.p * dpbar_a_wrt_theta_b).powi(2);
    let den_b = (1.0 - pa.p).powi(2) * pb.p.powi(4) * ga.d_theta.powi(2);

    VarianceReport {
        var_ind_a: 1.0 / bob.aa,
        var_ind_b: 1.0 / alice.bb,
        var_sim_a: bob.inverse_diagonal().0,
        var_sim_b: alice.inverse_diagonal().1,
        var_sim_direct_a: num_a / den_a,
        var_sim_direct_b: num_b / den_b,
        delta_alice: variance_ratio(w_ab, kappa_a),
        delta_bob: variance_ratio(w_ba, kappa_b),
    }
}

// =====================================================================
// tests
// =====================================================================
