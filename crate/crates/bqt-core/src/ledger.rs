//! Findings report: every place where quantities computed by this library
//! disagree with the reference description it was built from, each backed by
//! a live computation in the run that prints it. The text is deterministic:
//! repeated runs emit identical bytes.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write as _;

use crate::bloch::{trace_distance, DensityMatrix2, PureQubit, TriggerSpec};
use crate::circuit::{
    ccnot_form_basis_diffs, ccnot_projector_form, ccnot_standard, cnot_pauli_table,
    cnot_table_diffs, reference_cnot_table, run_protocol, PauliLabel,
};
use crate::fisher::{qfim_closed, scalar_qfi, variance_report};
use crate::protocol::{firing_probability, Param, ProbModel, ProtocolConfig, Side};
use crate::sweep::{preset, run_sweep};

/// Stable one-line titles, one per check. These are also the `ledger`
/// entries attached to verification reports.
pub const FINDING_TITLES: [&str; 8] = [
    "conjugation-table: the reference conjugation table disagrees with explicit matrix algebra off the diagonal",
    "double-control-polarity: the projector expansion of the doubly-controlled flip gates on inverted controls",
    "probability-cross-term: the cross-term firing-probability formula exits [0, 1] away from zero phase",
    "firing-branch-limits: the per-case output descriptions hold only at certain-fire corners",
    "fidelity-extremum: computed pole-data fidelity extrema sit at different trigger angles than stated",
    "simultaneous-variance-forms: the printed simultaneous bounds collapse; ratios use the information-matrix inverse",
    "scalar-information-form: one printed scalar information formula lacks its left-hand side; the matrix diagonal is implemented",
    "ratio-range: variance-ratio grids checked against the claimed [0, 1] range",
];

/// One ledger finding: a stable title, detail lines, and whether the check
/// confirmed a discrepancy (as opposed to verifying a claim).
#[derive(Debug, Clone)]
pub struct Finding {
    pub title: &'static str,
    pub discrepancy: bool,
    pub detail: Vec<String>,
}

/// Titles only, cheap to produce (no grids are evaluated).
pub fn finding_titles() -> Vec<String> {
    FINDING_TITLES.iter().map(|t| t.to_string()).collect()
}

fn conjugation_table_finding() -> Finding {
    let diffs = cnot_table_diffs();
    let mut detail = Vec::new();
    detail.push(
        "conjugating each two-qubit Pauli product through the controlled flip (control first)"
            .into(),
    );
    detail.push("and decomposing by explicit 4x4 algebra:".into());
    detail.push(format!("  {:10} {:12} {:12}", "input", "computed", "reference"));
    for row in PauliLabel::ALL {
        for col in PauliLabel::ALL {
            let computed = cnot_pauli_table(row, col);
            let printed = reference_cnot_table(row, col);
            let mark = if computed == printed { "" } else { "  << differs" };
            detail.push(format!(
                "  {:10} {:12} {:12}{}",
                format!("{row:?}(x){col:?}"),
                computed.to_string(),
                printed.to_string(),
                mark
            ));
        }
    }
    detail.push(format!(
        "{} of 16 cells differ; every match sits on the diagonal.",
        diffs.len()
    ));
    let transposed = PauliLabel::ALL.iter().all(|&r| {
        PauliLabel::ALL
            .iter()
            .all(|&c| reference_cnot_table(r, c) == cnot_pauli_table(c, r))
    });
    if transposed {
        detail.push(
            "every reference cell equals the computed image of the swapped input pair:".into(),
        );
        detail.push(
            "the reference grid is the computed grid transposed (rows and columns exchanged)."
                .into(),
        );
    }
    Finding {
        title: FINDING_TITLES[0],
        discrepancy: !diffs.is_empty(),
        detail,
    }
}

fn basis_label(index: usize) -> String {
    format!("|{index:03b}>")
}

fn permutation_image(m: &[[num_complex::Complex64; 8]; 8], basis: usize) -> usize {
    (0..8)
        .find(|&r| m[r][basis].norm() > 0.5)
        .expect("both gate forms are permutation matrices")
}

fn double_control_finding() -> Finding {
    let diffs = ccnot_form_basis_diffs();
    let lit = ccnot_projector_form();
    let std_ = ccnot_standard();
    let mut detail = Vec::new();
    detail.push(
        "evaluating the printed projector expansion of the doubly-controlled flip literally"
            .into(),
    );
    detail.push("and comparing its action with the standard gate on every basis state:".into());
    for basis in 0..8 {
        let li = permutation_image(&lit, basis);
        let si = permutation_image(&std_, basis);
        let mark = if li == si { "" } else { "  << differs" };
        detail.push(format!(
            "  {} -> projector form {}, standard {}{}",
            basis_label(basis),
            basis_label(li),
            basis_label(si),
            mark
        ));
    }
    detail.push(format!(
        "differs on {} of 8 basis states ({}); the printed expansion applies the flip when",
        diffs.len(),
        diffs
            .iter()
            .map(|&b| basis_label(b))
            .collect::<Vec<_>>()
            .join(", ")
    ));
    detail.push(
        "both controls are zero, the standard gate when both are one; the simulation uses the"
            .into(),
    );
    detail.push("standard polarity, matching the surrounding protocol steps.".into());
    Finding {
        title: FINDING_TITLES[1],
        discrepancy: !diffs.is_empty(),
        detail,
    }
}

fn probability_finding() -> Finding {
    let mut detail = Vec::new();
    detail.push(
        "the printed firing probability carries an extra sin*sin*sin(phi) cross term on top of"
            .into(),
    );
    detail.push(
        "the squared trigger-data overlap; the two agree wherever the phase is a multiple of pi."
            .into(),
    );
    let witness = firing_probability(
        ProbModel::CrossTerm,
        &TriggerSpec::new(FRAC_PI_2).unwrap(),
        &PureQubit::new(FRAC_PI_2, FRAC_PI_4).unwrap(),
    );
    detail.push(format!(
        "witness at trigger pi/2, data (pi/2, pi/4): raw value {:.9} clamped to {:.1}",
        witness.raw, witness.p
    ));
    let mut out_of_range = 0usize;
    let mut total = 0usize;
    for i in 0..=32 {
        let tilde = PI * i as f64 / 32.0;
        let trigger = TriggerSpec::new(tilde).unwrap();
        for j in 0..=32 {
            let theta = PI * j as f64 / 32.0;
            for k in 0..=64 {
                let phi = PI * k as f64 / 32.0;
                let q = PureQubit::new(theta, phi).unwrap();
                let p = firing_probability(ProbModel::CrossTerm, &trigger, &q);
                total += 1;
                if p.raw > 1.0 + 1e-12 || p.raw < -1e-12 {
                    out_of_range += 1;
                }
            }
        }
    }
    detail.push(format!(
        "scan over {total} (trigger, data) settings: {out_of_range} raw values leave [0, 1] \
         ({:.1}%).",
        100.0 * out_of_range as f64 / total as f64
    ));
    detail.push(
        "the squared-overlap form is the default model; the cross-term form is selectable and"
            .into(),
    );
    detail.push("clamps, with the raw value kept for diagnostics.".into());
    Finding {
        title: FINDING_TITLES[2],
        discrepancy: out_of_range > 0,
        detail,
    }
}

fn firing_branch_finding() -> Finding {
    let mut detail = Vec::new();
    // Certain single fire: sender's trigger aligned, receiver's orthogonal.
    let transfer = ProtocolConfig::new(
        PureQubit::new(PI, 0.0).unwrap(),
        PureQubit::new(0.0, 0.0).unwrap(),
        TriggerSpec::new(PI).unwrap(),
        TriggerSpec::new(PI).unwrap(),
        ProbModel::Overlap,
    );
    let (p_a, p_b) = transfer.probabilities();
    let outcome = run_protocol(
        &transfer.data_a,
        &transfer.data_b,
        &transfer.trigger_a,
        &transfer.trigger_b,
    );
    let td_pure = trace_distance(&outcome.rho_at_bob, &transfer.data_a.density());
    detail.push(format!(
        "certain lone fire (p_a = {:.1}, p_b = {:.1}): the receiver holds exactly the sender's \
         state,",
        p_a.p, p_b.p
    ));
    detail.push(format!(
        "  trace distance to the payload {:.3e} — the lone-fire description holds here.",
        td_pure
    ));
    // Both fire with certainty: the lone-fire reading would promise a pure
    // transfer from the aligned side, but the output is fully mixed.
    let both = ProtocolConfig::new(
        PureQubit::new(PI, 0.0).unwrap(),
        PureQubit::new(0.0, 0.0).unwrap(),
        TriggerSpec::new(PI).unwrap(),
        TriggerSpec::new(0.0).unwrap(),
        ProbModel::Overlap,
    );
    let (bp_a, bp_b) = both.probabilities();
    let both_out = run_protocol(&both.data_a, &both.data_b, &both.trigger_a, &both.trigger_b);
    let mixed = DensityMatrix2::maximally_mixed();
    detail.push(format!(
        "both fire with certainty (p_a = {:.1}, p_b = {:.1}): both outputs are maximally mixed,",
        bp_a.p, bp_b.p
    ));
    detail.push(format!(
        "  trace distances to the flat state {:.3e} (receiver) and {:.3e} (sender side),",
        trace_distance(&both_out.rho_at_bob, &mixed),
        trace_distance(&both_out.rho_at_alice, &mixed)
    ));
    detail.push("  despite the sender's trigger being perfectly aligned.".into());
    // Generic point: the weighted-branch average is the closed form.
    let generic = ProtocolConfig::new(
        PureQubit::new(1.1, 0.0).unwrap(),
        PureQubit::new(2.0, 0.0).unwrap(),
        TriggerSpec::new(0.6).unwrap(),
        TriggerSpec::new(2.2).unwrap(),
        ProbModel::Overlap,
    );
    let (w_ab, w_ba) = generic.weights();
    let g_out = run_protocol(
        &generic.data_a,
        &generic.data_b,
        &generic.trigger_a,
        &generic.trigger_b,
    );
    let (g_alice, g_bob) = generic.teleported_pair();
    detail.push(format!(
        "generic point (weights {:.6} and {:.6}): simulating the four firing patterns as \
         classical",
        w_ab, w_ba
    ));
    detail.push(format!(
        "  coin flips and averaging reproduces the closed form to {:.3e} / {:.3e}.",
        trace_distance(&g_out.rho_at_bob, &g_bob),
        trace_distance(&g_out.rho_at_alice, &g_alice)
    ));
    detail.push(
        "the output weight multiplies the payload and itself depends on the payload through the"
            .into(),
    );
    detail.push(
        "firing probability, so the end-to-end map is quadratic in the input state; a fixed"
            .into(),
    );
    detail.push(
        "unitary circuit plus fixed measurements is linear, so the firing events must be".into(),
    );
    detail.push(
        "classical randomness, with the conditional corrections applied only in the two".into(),
    );
    detail.push("lone-fire branches.".into());
    Finding {
        title: FINDING_TITLES[3],
        discrepancy: true,
        detail,
    }
}

fn fidelity_extremum_finding() -> Finding {
    let mut detail = Vec::new();
    let fwd = run_sweep(&preset("fig2a").unwrap()).unwrap();
    let rev = run_sweep(&preset("fig2b").unwrap()).unwrap();
    detail.push(
        "pole-data grids (both data states at the north pole, fidelity over the two trigger"
            .into(),
    );
    detail.push("angles), computed from the closed form:".into());
    detail.push(format!(
        "  forward: max {:.6} at trigger angles ({:.6}, {:.6}), min {:.6} first at ({:.6}, {:.6})",
        fwd.extrema.max,
        fwd.extrema.argmax.0,
        fwd.extrema.argmax.1,
        fwd.extrema.min,
        fwd.extrema.argmin.0,
        fwd.extrema.argmin.1
    ));
    detail.push(format!(
        "  reverse: max {:.6} at trigger angles ({:.6}, {:.6}), min {:.6} first at ({:.6}, {:.6})",
        rev.extrema.max,
        rev.extrema.argmax.0,
        rev.extrema.argmax.1,
        rev.extrema.min,
        rev.extrema.argmin.0,
        rev.extrema.argmin.1
    ));
    detail.push(
        "the reference discussion states the forward fidelity increases with the sender's \
         trigger"
            .into(),
    );
    detail.push(
        "angle and peaks at pi; the closed form is decreasing in that angle (the sender's \
         trigger"
            .into(),
    );
    detail.push(
        "at pi stops the sender's side from firing) and peaks with the sender's trigger aligned"
            .into(),
    );
    detail.push(
        "at 0 and the receiver's trigger opposed at pi. the same discussion places minima at the"
            .into(),
    );
    detail.push(
        "same sender angle as the claimed maximum; the computed minimum half-fidelity ridge lies"
            .into(),
    );
    detail.push(
        "where the receiver's trigger matches its data or the sender's trigger opposes its own."
            .into(),
    );
    Finding {
        title: FINDING_TITLES[4],
        discrepancy: true,
        detail,
    }
}

fn sample_config() -> ProtocolConfig {
    ProtocolConfig::new(
        PureQubit::new(1.0, 0.0).unwrap(),
        PureQubit::new(0.7, 0.0).unwrap(),
        TriggerSpec::new(0.4).unwrap(),
        TriggerSpec::new(1.1).unwrap(),
        ProbModel::Overlap,
    )
}

fn variance_forms_finding() -> Finding {
    let mut detail = Vec::new();
    let cfg = sample_config();
    let report = variance_report(&cfg);
    detail.push(
        "the printed simultaneous bound for the first weight angle cancels algebraically to"
            .into(),
    );
    detail.push(
        "1/(output weight)^2, which is exactly the inverse information-matrix diagonal:".into(),
    );
    detail.push(format!(
        "  sample point: matrix route {:.9}, printed form {:.9}, difference {:.3e}",
        report.var_sim_a,
        report.var_sim_direct_a,
        (report.var_sim_a - report.var_sim_direct_a).abs()
    ));
    detail.push(
        "the printed bound for the second weight angle differentiates the first side's \
         complement"
            .into(),
    );
    detail.push(
        "probability with respect to the second angle, on which it does not depend, so its"
            .into(),
    );
    detail.push(format!(
        "numerator vanishes identically: sample value {:.1} at the same point.",
        report.var_sim_direct_b
    ));
    detail.push(format!(
        "the shipped ratios therefore use the information-matrix inverse throughout; at the \
         sample point delta ratios are {:.9} and {:.9}.",
        report.delta_alice, report.delta_bob
    ));
    detail.push(
        "cells where both the numerator and denominator of a ratio vanish (certain or silenced"
            .into(),
    );
    detail.push("firing corners) stay NaN and are flagged rather than repaired.".into());
    Finding {
        title: FINDING_TITLES[5],
        discrepancy: true,
        detail,
    }
}

fn scalar_form_finding() -> Finding {
    let mut detail = Vec::new();
    let cfg = sample_config();
    let scalar = scalar_qfi(&cfg, Param::ThetaA);
    let diag = qfim_closed(&cfg, Side::Bob).aa;
    detail.push(
        "the scalar information formula for the second user is printed in full; the first"
            .into(),
    );
    detail.push(
        "user's appears as a bare expression with no left-hand side. the implemented scalar"
            .into(),
    );
    detail.push(
        "is the matching diagonal of the information matrix, which reproduces the printed"
            .into(),
    );
    detail.push("second-user form under the side swap:".into());
    detail.push(format!(
        "  sample point: scalar {:.9}, matrix diagonal {:.9}, difference {:.3e}",
        scalar,
        diag,
        (scalar - diag).abs()
    ));
    Finding {
        title: FINDING_TITLES[6],
        discrepancy: true,
        detail,
    }
}

fn ratio_range_finding() -> Finding {
    let mut detail = Vec::new();
    let mut violations = 0usize;
    for name in ["fig9a", "fig9b", "fig9c", "fig9d"] {
        let result = run_sweep(&preset(name).unwrap()).unwrap();
        let mut finite = 0usize;
        let mut outside = 0usize;
        let mut undefined = 0usize;
        for row in &result.grid {
            for &v in row {
                if v.is_finite() {
                    finite += 1;
                    if !(-1e-12..=1.0 + 1e-12).contains(&v) {
                        outside += 1;
                    }
                } else {
                    undefined += 1;
                }
            }
        }
        violations += outside;
        detail.push(format!(
            "  {name}: {finite} finite cells, {outside} outside [0, 1], {undefined} undefined \
             (0/0 corners, flagged)",
        ));
    }
    if violations == 0 {
        detail.push(
            "all finite ratio cells lie within [0, 1], consistent with the claimed range;"
                .into(),
        );
        detail.push(
            "undefined corners arise where estimation is impossible on both routes at once."
                .into(),
        );
    } else {
        detail.push(format!(
            "{violations} cells violate the claimed [0, 1] range — recorded, not hidden."
        ));
    }
    Finding {
        title: FINDING_TITLES[7],
        discrepancy: violations > 0,
        detail,
    }
}

/// Computes all findings, each backed by live computation, in stable order.
pub fn findings() -> Vec<Finding> {
    vec![
        conjugation_table_finding(),
        double_control_finding(),
        probability_finding(),
        firing_branch_finding(),
        fidelity_extremum_finding(),
        variance_forms_finding(),
        scalar_form_finding(),
        ratio_range_finding(),
    ]
}

/// Renders the full report. Byte-identical across runs.
pub fn ledger_text() -> String {
    let all = findings();
    let mut out = String::new();
    out.push_str("computed-vs-reference findings\n");
    out.push_str("==============================\n\n");
    out.push_str("checks performed (each backed by live computation in this run):\n");
    for title in FINDING_TITLES {
        let _ = writeln!(out, "  - {title}");
    }
    out.push('\n');
    for (i, finding) in all.iter().enumerate() {
        let _ = writeln!(out, "finding {}: {}", i + 1, finding.title);
        for line in &finding.detail {
            let _ = writeln!(out, "  {line}");
        }
        out.push('\n');
    }
    let discrepancies = all.iter().filter(|f| f.discrepancy).count();
    let _ = writeln!(
        out,
        "{} checks performed, {} discrepancies confirmed, {} claims verified as stated.",
        all.len(),
        discrepancies,
        all.len() - discrepancies
    );
    out
}

// =====================================================================
// tests
// =====================================================================

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ledger_is_byte_identical_across_runs() {
        assert_eq!(ledger_text(), ledger_text());
    }

    #[test]
    fn ledger_contains_the_control_polarity_finding() {
        let text = ledger_text();
        assert!(text.contains("double-control-polarity"));
        assert!(text.contains("|000> -> projector form |001>, standard |000>  << differs"));
        assert!(text.contains("|110> -> projector form |110>, standard |111>  << differs"));
    }

    #[test]
    fn ledger_contains_every_titled_finding() {
        let text = ledger_text();
        for title in FINDING_TITLES {
            assert!(text.contains(title), "missing: {title}");
        }
    }

    #[test]
    fn ledger_never_claims_silence_without_listing_checks() {
        let text = ledger_text();
        assert!(text.contains("checks performed"));
        assert!(text.contains("discrepancies confirmed"));
        let findings = findings();
        assert!(findings.iter().any(|f| f.discrepancy));
    }

    #[test]
    fn conjugation_finding_reports_the_transpose_relation() {
        let f = conjugation_table_finding();
        assert!(f.discrepancy);
        assert!(f
            .detail
            .iter()
            .any(|l| l.contains("computed grid transposed")));
        assert!(f.detail.iter().any(|l| l.contains("12 of 16")));
    }

    #[test]
    fn probability_finding_counts_out_of_range_cells() {
        let f = probability_finding();
        assert!(f.discrepancy);
        assert!(f.detail.iter().any(|l| l.contains("1.207106781")));
    }

    #[test]
    fn extremum_finding_reports_the_computed_corner() {
        let f = fidelity_extremum_finding();
        // Forward max 1 at sender trigger 0, receiver trigger pi.
        assert!(f
            .detail
            .iter()
            .any(|l| l.contains("max 1.000000 at trigger angles (0.000000, 3.141593)")));
    }

    #[test]
    fn ratio_finding_checks_all_four_presets() {
        let f = ratio_range_finding();
        for name in ["fig9a", "fig9b", "fig9c", "fig9d"] {
            assert!(f.detail.iter().any(|l| l.contains(name)), "missing {name}");
        }
    }
}
