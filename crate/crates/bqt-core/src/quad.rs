//! Quadrature rules for averaging observables over the input-state sphere.
//!
//! Averages of the form (1/4pi) * integral f(theta, phi) sin(theta) dtheta dphi
//! are computed with Gauss-Legendre nodes in u = cos(theta) (which absorbs the
//! sin(theta) surface measure exactly) crossed with a uniform rule in phi.
//! The phi rule is the composite trapezoid on a periodic interval, where the
//! endpoint weights merge and the rule becomes a plain midpoint-free uniform
//! sum over n distinct angles.

use crate::error::{Error, Result};

/// Minimum node count accepted by the raw Gauss-Legendre constructor.
pub const MIN_NODES: usize = 2;

/// Minimum per-axis resolution accepted for sphere averages. Coarser grids
/// alias the oscillatory fidelity integrands badly enough that the doubling
/// convergence check used in tests starts to fail.
pub const MIN_SPHERE_NODES: usize = 16;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
///
/// Nodes are computed by Newton iteration on the Legendre polynomial P_n,
/// seeded with the Chebyshev-style estimate cos(pi*(i + 0.75)/(n + 0.5)),
/// which converges in a handful of steps for every practical n. Weights are
/// 2 / ((1 - x^2) P_n'(x)^2). The rule integrates polynomials up to degree
/// 2n - 1 exactly.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n < MIN_NODES {
        return Err(Error::BadQuadrature {
            nodes: n,
            min: MIN_NODES,
        });
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    // Roots come in +/- pairs; compute the upper half and mirror.
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_deriv(n, x);
            let step = p / d;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        // Recompute the derivative at the converged node for the weight.
        let (_, dp) = legendre_with_deriv(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        // The middle root of an odd-order rule sits exactly at zero.
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_with_deriv(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    Ok((nodes, weights))
}

/// P_n(x) and P_n'(x) via the three-term recurrence.
fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    // Derivative identity: (1 - x^2) P_n'(x) = n (P_{n-1}(x) - x P_n(x)).
    let d = n as f64 * (p_prev - x * p) / (1.0 - x * x);
    (p, d)
}

/// Resolution of a sphere-average rule: nodes in cos(theta) and in phi.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphereRule {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl SphereRule {
    /// Both axes must carry at least [`MIN_SPHERE_NODES`] points.
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        let worst = n_theta.min(n_phi);
        if worst < MIN_SPHERE_NODES {
            return Err(Error::BadQuadrature {
                nodes: worst,
                min: MIN_SPHERE_NODES,
            });
        }
        Ok(Self { n_theta, n_phi })
    }

    /// Default 64 x 64 grid, ample for every integrand in this crate.
    pub fn default_rule() -> Self {
        Self {
            n_theta: 64,
            n_phi: 64,
        }
    }
}

/// Uniform average of f(theta, phi) over the unit sphere:
/// (1/4pi) * integral f sin(theta) dtheta dphi.
///
/// Gauss-Legendre in u = cos(theta) handles the polar direction (theta is
/// recovered as acos(u), and the sin(theta) weight is absorbed by the
/// substitution); the azimuth is averaged over n_phi equally spaced angles,
/// which is the periodic trapezoid rule and is spectrally accurate for
/// smooth 2pi-periodic integrands.
pub fn sphere_average<F>(f: F, rule: SphereRule) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    let (nodes, weights) = gauss_legendre(rule.n_theta)?;
    if rule.n_phi < MIN_NODES {
        return Err(Error::BadQuadrature {
            nodes: rule.n_phi,
            min: MIN_NODES,
        });
    }
    let dphi = 2.0 * std::f64::consts::PI / rule.n_phi as f64;
    let mut acc = 0.0;
    for (u, w) in nodes.iter().zip(weights.iter()) {
        let theta = u.clamp(-1.0, 1.0).acos();
        let mut ring = 0.0;
        for k in 0..rule.n_phi {
            let phi = k as f64 * dphi;
            ring += f(theta, phi);
        }
        acc += w * ring / rule.n_phi as f64;
    }
    // Gauss-Legendre weights sum to 2, so dividing by 2 completes the
    // normalization to a mean value.
    Ok(acc / 2.0)
}

// =====================================================================
// tests
// =====================================================================

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_rule_is_pm_inv_sqrt3() {
        let (nodes, weights) = gauss_legendre(2).unwrap();
        let r = 1.0 / 3.0f64.sqrt();
        assert!((nodes[0] + r).abs() < 1e-15);
        assert!((nodes[1] - r).abs() < 1e-15);
        assert!((weights[0] - 1.0).abs() < 1e-15);
        assert!((weights[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn three_point_rule_matches_tabulated_values() {
        let (nodes, weights) = gauss_legendre(3).unwrap();
        let r = (3.0f64 / 5.0).sqrt();
        assert!((nodes[0] + r).abs() < 1e-15);
        assert!(nodes[1].abs() < 1e-15);
        assert!((nodes[2] - r).abs() < 1e-15);
        assert!((weights[0] - 5.0 / 9.0).abs() < 1e-15);
        assert!((weights[1] - 8.0 / 9.0).abs() < 1e-15);
        assert!((weights[2] - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_degenerate_node_counts() {
        assert!(gauss_legendre(0).is_err());
        assert!(gauss_legendre(1).is_err());
        assert!(SphereRule::new(8, 64).is_err());
        assert!(SphereRule::new(64, 8).is_err());
    }

    #[test]
    fn integrates_polynomials_exactly_to_degree_2n_minus_1() {
        // Exact moments of x^k on [-1, 1]: 0 for odd k, 2/(k+1) for even k.
        for n in [2usize, 4, 7, 16] {
            let (nodes, weights) = gauss_legendre(n).unwrap();
            for k in 0..(2 * n) {
                let quad: f64 = nodes
                    .iter()
                    .zip(weights.iter())
                    .map(|(x, w)| w * x.powi(k as i32))
                    .sum();
                let exact = if k % 2 == 1 {
                    0.0
                } else {
                    2.0 / (k as f64 + 1.0)
                };
                assert!(
                    (quad - exact).abs() < 1e-13,
                    "n={n} k={k}: quad={quad} exact={exact}"
                );
            }
        }
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [2usize, 3, 10, 33, 64] {
            let (_, weights) = gauss_legendre(n).unwrap();
            let total: f64 = weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n}: sum={total}");
        }
    }

    #[test]
    fn sphere_average_of_constant_is_the_constant() {
        let avg = sphere_average(|_, _| 1.0, SphereRule::default_rule()).unwrap();
        assert!((avg - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sphere_average_of_cos_sq_theta_is_one_third() {
        let avg = sphere_average(|t, _| t.cos().powi(2), SphereRule::default_rule()).unwrap();
        assert!((avg - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn sphere_average_of_sin_sq_theta_cos_sq_phi_is_one_third() {
        // By symmetry each Cartesian direction cosine squared averages to 1/3.
        let avg = sphere_average(
            |t, p| (t.sin() * p.cos()).powi(2),
            SphereRule::default_rule(),
        )
        .unwrap();
        assert!((avg - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn doubling_the_rule_changes_smooth_averages_negligibly() {
        // A representative smooth integrand with both polar and azimuthal
        // structure, similar in character to the fidelity surfaces.
        let f = |t: f64, p: f64| 0.5 * (1.0 + 0.5 * (t.cos() + t.sin() * p.cos()).powi(2));
        let coarse = sphere_average(f, SphereRule::new(16, 16).unwrap()).unwrap();
        let fine = sphere_average(f, SphereRule::new(32, 32).unwrap()).unwrap();
        assert!(
            (coarse - fine).abs() < 1e-6,
            "coarse={coarse} fine={fine}"
        );
    }

    #[test]
    fn large_rules_stay_stable() {
        // Node computation must not lose accuracy at higher orders.
        let (nodes, weights) = gauss_legendre(128).unwrap();
        assert_eq!(nodes.len(), 128);
        // Nodes strictly increasing and inside the open interval.
        for pair in nodes.windows(2) {
            assert!(pair[0] < pair[1]);
        }
        assert!(nodes[0] > -1.0 && nodes[127] < 1.0);
        let total: f64 = weights.iter().sum();
        assert!((total - 2.0).abs() < 1e-12);
    }
}
