//! Figure-grid sweeps: a two-axis parameter scan of one scalar quantity,
//! configured from plain `key = value` text, evaluated in parallel, and
//! written as a deterministic CSV.
//!
//! A sweep varies two parameter ids over uniform ranges while every other
//! protocol angle is either pinned explicitly or defaults to zero. Composite
//! ids tie several underlying angles to one value (`phi` drives both data
//! phases, `trigger_t` both trigger angles, `vartheta` all four polar
//! angles), which is how the tied-angle surfaces are expressed.

use rayon::prelude::*;

use crate::bloch::{PureQubit, TriggerSpec};
use crate::error::{Error, Result};
use crate::fidelity::{averaged_config_fidelity, config_fidelity, Direction};
use crate::fisher::{qfim_from_curve, variance_report};
use crate::protocol::{ProbModel, ProtocolConfig, Side};
use crate::quad::SphereRule;

/// Canonical order of the six underlying protocol angles.
pub const BASE_COMPONENTS: [&str; 6] = [
    "theta_a",
    "phi_a",
    "theta_b",
    "phi_b",
    "trigger_a",
    "trigger_b",
];

/// A sweepable or pinnable parameter: one of the six underlying angles or a
/// composite that drives several of them together.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamId {
    ThetaA,
    PhiA,
    ThetaB,
    PhiB,
    TriggerA,
    TriggerB,
    /// Both data phases together.
    Phi,
    /// Both trigger angles together.
    TriggerT,
    /// All four polar angles (both data, both triggers) together.
    Vartheta,
}

impl ParamId {
    pub const ALL: [ParamId; 9] = [
        ParamId::ThetaA,
        ParamId::PhiA,
        ParamId::ThetaB,
        ParamId::PhiB,
        ParamId::TriggerA,
        ParamId::TriggerB,
        ParamId::Phi,
        ParamId::TriggerT,
        ParamId::Vartheta,
    ];

    pub fn parse(token: &str) -> Option<ParamId> {
        Some(match token {
            "theta_a" => ParamId::ThetaA,
            "phi_a" => ParamId::PhiA,
            "theta_b" => ParamId::ThetaB,
            "phi_b" => ParamId::PhiB,
            "trigger_a" => ParamId::TriggerA,
            "trigger_b" => ParamId::TriggerB,
            "phi" => ParamId::Phi,
            "trigger_t" => ParamId::TriggerT,
            "vartheta" => ParamId::Vartheta,
            _ => return None,
        })
    }

    pub fn token(self) -> &'static str {
        match self {
            ParamId::ThetaA => "theta_a",
            ParamId::PhiA => "phi_a",
            ParamId::ThetaB => "theta_b",
            ParamId::PhiB => "phi_b",
            ParamId::TriggerA => "trigger_a",
            ParamId::TriggerB => "trigger_b",
            ParamId::Phi => "phi",
            ParamId::TriggerT => "trigger_t",
            ParamId::Vartheta => "vartheta",
        }
    }

    /// Indices into [`BASE_COMPONENTS`] that this id writes.
    pub fn components(self) -> &'static [usize] {
        match self {
            ParamId::ThetaA => &[0],
            ParamId::PhiA => &[1],
            ParamId::ThetaB => &[2],
            ParamId::PhiB => &[3],
            ParamId::TriggerA => &[4],
            ParamId::TriggerB => &[5],
            ParamId::Phi => &[1, 3],
            ParamId::TriggerT => &[4, 5],
            ParamId::Vartheta => &[0, 2, 4, 5],
        }
    }

    /// Position in the canonical listing, for deterministic echo order.
    fn rank(self) -> usize {
        ParamId::ALL.iter().position(|p| *p == self).unwrap()
    }
}

/// The scalar evaluated at every grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    FidelityAb,
    FidelityBa,
    QfiThetaA,
    QfiThetaB,
    DeltaAlice,
    DeltaBob,
    AvgFidelity,
}

impl Quantity {
    pub fn parse(token: &str) -> Option<Quantity> {
        Some(match token {
            "fidelity_ab" => Quantity::FidelityAb,
            "fidelity_ba" => Quantity::FidelityBa,
            "qfi_theta_a" => Quantity::QfiThetaA,
            "qfi_theta_b" => Quantity::QfiThetaB,
            "delta_alice" => Quantity::DeltaAlice,
            "delta_bob" => Quantity::DeltaBob,
            "avg_fidelity" => Quantity::AvgFidelity,
            _ => return None,
        })
    }

    pub fn token(self) -> &'static str {
        match self {
            Quantity::FidelityAb => "fidelity_ab",
            Quantity::FidelityBa => "fidelity_ba",
            Quantity::QfiThetaA => "qfi_theta_a",
            Quantity::QfiThetaB => "qfi_theta_b",
            Quantity::DeltaAlice => "delta_alice",
            Quantity::DeltaBob => "delta_bob",
            Quantity::AvgFidelity => "avg_fidelity",
        }
    }

    /// The register this quantity is naturally read from: the receiver of
    /// the payload it concerns.
    pub fn natural_side(self) -> Side {
        match self {
            Quantity::FidelityAb | Quantity::QfiThetaA | Quantity::DeltaAlice
            | Quantity::AvgFidelity => Side::Bob,
            Quantity::FidelityBa | Quantity::QfiThetaB | Quantity::DeltaBob => Side::Alice,
        }
    }
}

/// One sweep axis: a parameter id scanned over `steps` uniform values from
/// `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub id: ParamId,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|k| {
                if n == 1 {
                    self.start
                } else {
                    self.start + (self.stop - self.start) * k as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    fn echo(&self) -> String {
        format!("{}:{}:{}:{}", self.id.token(), self.start, self.stop, self.steps)
    }
}

/// Full description of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub preset: Option<String>,
    pub quantity: Quantity,
    /// Register override for the information quantities; fidelity
    /// quantities always use their natural direction. `None` means the
    /// quantity's natural side.
    pub side: Option<Side>,
    pub model: ProbModel,
    pub axis1: Axis,
    pub axis2: Axis,
    /// Pinned parameters, applied before the axes write their components.
    pub pinned: Vec<(ParamId, f64)>,
}

impl SweepConfig {
    pub fn resolved_side(&self) -> Side {
        self.side.unwrap_or_else(|| self.quantity.natural_side())
    }

    /// Structural checks: step counts, finite ranges, and component-level
    /// disjointness between the axes and every pin.
    pub fn validate(&self) -> Result<()> {
        for (label, axis) in [("axis1", &self.axis1), ("axis2", &self.axis2)] {
            if axis.steps < 2 {
                return Err(Error::BadSweep(format!(
                    "{label} needs at least 2 steps, got {}",
                    axis.steps
                )));
            }
            if !axis.start.is_finite() || !axis.stop.is_finite() {
                return Err(Error::BadSweep(format!("{label} range must be finite")));
            }
        }
        let mut owner: [Option<&'static str>; 6] = [None; 6];
        let mut claim = |id: ParamId, what: &'static str| -> Result<()> {
            for &c in id.components() {
                if let Some(prev) = owner[c] {
                    return Err(Error::BadSweep(format!(
                        "parameter `{}` is set both by {prev} and by {what} (via `{}`)",
                        BASE_COMPONENTS[c],
                        id.token()
                    )));
                }
                owner[c] = Some(what);
            }
            Ok(())
        };
        claim(self.axis1.id, "axis1")?;
        claim(self.axis2.id, "axis2")?;
        for (id, value) in &self.pinned {
            if !value.is_finite() {
                return Err(Error::BadSweep(format!(
                    "pin `{}` must be finite",
                    id.token()
                )));
            }
            claim(*id, "a pin")?;
        }
        Ok(())
    }

    /// Base components not written by either axis or any pin; these default
    /// to zero and are echoed so no silent assumption exists.
    fn defaulted_components(&self) -> Vec<usize> {
        let mut covered = [false; 6];
        for id in [self.axis1.id, self.axis2.id]
            .into_iter()
            .chain(self.pinned.iter().map(|(id, _)| *id))
        {
            for &c in id.components() {
                covered[c] = true;
            }
        }
        (0..6).filter(|&c| !covered[c]).collect()
    }

    /// Deterministic `key = value` echo of the full configuration,
    /// including resolved defaults.
    pub fn echo_lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        if let Some(p) = &self.preset {
            lines.push(format!("preset = {p}"));
        }
        lines.push(format!("quantity = {}", self.quantity.token()));
        let side = match self.resolved_side() {
            Side::Alice => "alice",
            Side::Bob => "bob",
        };
        lines.push(format!("side = {side}"));
        let model = match self.model {
            ProbModel::Overlap => "overlap",
            ProbModel::CrossTerm => "cross_term",
        };
        lines.push(format!("prob_model = {model}"));
        lines.push(format!("axis1 = {}", self.axis1.echo()));
        lines.push(format!("axis2 = {}", self.axis2.echo()));
        let mut pins = self.pinned.clone();
        pins.sort_by_key(|(id, _)| id.rank());
        for (id, value) in pins {
            lines.push(format!("pin {} = {}", id.token(), value));
        }
        for c in self.defaulted_components() {
            lines.push(format!("default {} = 0", BASE_COMPONENTS[c]));
        }
        lines
    }
}

/// Grid extrema over the finite cells, with the axis coordinates where they
/// occur.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema {
    pub max: f64,
    pub argmax: (f64, f64),
    pub min: f64,
    pub argmin: (f64, f64),
    /// Cells whose value was NaN or infinite (flagged, not hidden).
    pub non_finite: usize,
}

/// Outcome of a sweep: config echo, the row-major value grid, extrema, and
/// any diagnostics collected along the way.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub echo: Vec<String>,
    pub axis1_values: Vec<f64>,
    pub axis2_values: Vec<f64>,
    /// `grid[i][j]` is the quantity at `axis1_values[i]`, `axis2_values[j]`.
    pub grid: Vec<Vec<f64>>,
    pub extrema: Extrema,
    pub diagnostics: Vec<String>,
}

fn build_protocol(angles: [f64; 6], model: ProbModel) -> ProtocolConfig {
    ProtocolConfig::new(
        PureQubit::new(angles[0], angles[1]).expect("validated finite angle"),
        PureQubit::new(angles[2], angles[3]).expect("validated finite angle"),
        TriggerSpec::new(angles[4]).expect("validated finite angle"),
        TriggerSpec::new(angles[5]).expect("validated finite angle"),
        model,
    )
}

/// Evaluates the configured quantity at one grid point. The bool reports
/// whether either firing probability had to be clamped into [0, 1].
fn eval_cell(cfg: &SweepConfig, angles: [f64; 6]) -> (f64, bool) {
    let pc = build_protocol(angles, cfg.model);
    let (pa, pb) = pc.probabilities();
    let clamped = pa.clamped() || pb.clamped();
    let side = cfg.resolved_side();
    let value = match cfg.quantity {
        Quantity::FidelityAb => config_fidelity(&pc, Direction::AtoB),
        Quantity::FidelityBa => config_fidelity(&pc, Direction::BtoA),
        // The information quantities honor a side override: the diagonal of
        // the chosen register's information matrix.
        Quantity::QfiThetaA => qfim_from_curve(&pc, side).aa,
        Quantity::QfiThetaB => qfim_from_curve(&pc, side).bb,
        Quantity::DeltaAlice => variance_report(&pc).delta_alice,
        Quantity::DeltaBob => variance_report(&pc).delta_bob,
        Quantity::AvgFidelity => {
            let direction = match side {
                Side::Bob => Direction::AtoB,
                Side::Alice => Direction::BtoA,
            };
            averaged_config_fidelity(&pc, direction, SphereRule::default_rule())
                .expect("default quadrature rule is valid")
        }
    };
    (value, clamped)
}

/// Runs the sweep: validates, evaluates the grid (rows in parallel, ordered
/// collection, so output is independent of scheduling), and gathers
/// extrema and diagnostics.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let axis1_values = cfg.axis1.values();
    let axis2_values = cfg.axis2.values();

    let mut base = [0.0f64; 6];
    for (id, value) in &cfg.pinned {
        for &c in id.components() {
            base[c] = *value;
        }
    }

    let rows: Vec<(Vec<f64>, usize)> = axis1_values
        .par_iter()
        .map(|&v1| {
            let mut clamped = 0usize;
            let mut row = Vec::with_capacity(axis2_values.len());
            for &v2 in &axis2_values {
                let mut angles = base;
                for &c in cfg.axis1.id.components() {
                    angles[c] = v1;
                }
                for &c in cfg.axis2.id.components() {
                    angles[c] = v2;
                }
                let (value, was_clamped) = eval_cell(cfg, angles);
                if was_clamped {
                    clamped += 1;
                }
                row.push(value);
            }
            (row, clamped)
        })
        .collect();

    let clamped_cells: usize = rows.iter().map(|(_, c)| *c).sum();
    let grid: Vec<Vec<f64>> = rows.into_iter().map(|(row, _)| row).collect();

    let mut extrema = Extrema {
        max: f64::NAN,
        argmax: (f64::NAN, f64::NAN),
        min: f64::NAN,
        argmin: (f64::NAN, f64::NAN),
        non_finite: 0,
    };
    for (i, row) in grid.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                extrema.non_finite += 1;
                continue;
            }
            if extrema.max.is_nan() || v > extrema.max {
                extrema.max = v;
                extrema.argmax = (axis1_values[i], axis2_values[j]);
            }
            if extrema.min.is_nan() || v < extrema.min {
                extrema.min = v;
                extrema.argmin = (axis1_values[i], axis2_values[j]);
            }
        }
    }

    let mut diagnostics = Vec::new();
    if clamped_cells > 0 {
        diagnostics.push(format!(
            "firing probability clamped into [0, 1] at {clamped_cells} of {} cells",
            axis1_values.len() * axis2_values.len()
        ));
    }
    if extrema.non_finite > 0 {
        diagnostics.push(format!(
            "{} cells were non-finite (flagged degenerate bounds)",
            extrema.non_finite
        ));
    }
    if extrema.max.is_nan() {
        diagnostics.push("every cell was non-finite; extrema are undefined".into());
    }

    Ok(SweepResult {
        echo: cfg.echo_lines(),
        axis1_values,
        axis2_values,
        grid,
        extrema,
        diagnostics,
    })
}

impl SweepResult {
    /// Renders the CSV: `#`-prefixed config echo, a `axis1,axis2,value`
    /// header, then one row-major line per cell with every number at 12
    /// significant digits. Byte-identical across runs of the same config.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in &self.echo {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        for d in &self.diagnostics {
            out.push_str("# note: ");
            out.push_str(d);
            out.push('\n');
        }
        if self.extrema.max.is_finite() {
            out.push_str(&format!(
                "# max = {:.11e} at ({:.11e}, {:.11e})\n",
                self.extrema.max, self.extrema.argmax.0, self.extrema.argmax.1
            ));
            out.push_str(&format!(
                "# min = {:.11e} at ({:.11e}, {:.11e})\n",
                self.extrema.min, self.extrema.argmin.0, self.extrema.argmin.1
            ));
        }
        out.push_str("axis1,axis2,value\n");
        for (i, row) in self.grid.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                out.push_str(&format!(
                    "{:.11e},{:.11e},{:.11e}\n",
                    self.axis1_values[i], self.axis2_values[j], v
                ));
            }
        }
        out
    }
}

// ====== presets ======

/// Names of the built-in grids, one per published surface.
pub const PRESET_NAMES: [&str; 19] = [
    "fig2a", "fig2b", "fig3a", "fig3b", "fig4", "fig5a", "fig5b", "fig6a", "fig6b", "fig7a",
    "fig7b", "fig8a", "fig8b", "fig8c", "fig8d", "fig9a", "fig9b", "fig9c", "fig9d",
];

/// One-line behavioral description of each preset.
pub fn preset_summary(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig2a" => "pole data states; forward fidelity over both trigger angles",
        "fig2b" => "pole data states; reverse fidelity over both trigger angles",
        "fig3a" => "equator data states; forward fidelity over both trigger angles",
        "fig3b" => "equator data states; reverse fidelity over both trigger angles",
        "fig4" => "all polar angles tied; forward fidelity over the tied angle and the shared phase",
        "fig5a" => "partner data at the north pole; forward fidelity over data angle and shared trigger angle",
        "fig5b" => "partner data tilted to pi/4; forward fidelity over data angle and shared trigger angle",
        "fig6a" => "triggers at the north pole; information about theta_a over both data angles",
        "fig6b" => "triggers at the south pole; information about theta_a over both data angles",
        "fig7a" => "triggers at pi/4, zero phase; information about theta_a over both data angles",
        "fig7b" => "triggers at pi/4, quarter-turn phase; information about theta_a over both data angles",
        "fig8a" => "triggers at the north pole; information about theta_b over both data angles",
        "fig8b" => "triggers at the south pole; information about theta_b over both data angles",
        "fig8c" => "triggers at pi/4, zero phase; information about theta_b over both data angles",
        "fig8d" => "triggers at pi/4, quarter-turn phase; information about theta_b over both data angles",
        "fig9a" => "variance ratio for theta_a, zero phase, over data angle and shared trigger angle",
        "fig9b" => "variance ratio for theta_b, zero phase, over data angle and shared trigger angle",
        "fig9c" => "variance ratio for theta_a, quarter-turn phase, over data angle and shared trigger angle",
        "fig9d" => "variance ratio for theta_b, quarter-turn phase, over data angle and shared trigger angle",
        _ => return None,
    })
}

fn axis(id: ParamId, start: f64, stop: f64) -> Axis {
    Axis { id, start, stop, steps: 64 }
}

/// Builds the named preset configuration.
pub fn preset(name: &str) -> Result<SweepConfig> {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
    let (quantity, axis1, axis2, pinned): (Quantity, Axis, Axis, Vec<(ParamId, f64)>) =
        match name {
            "fig2a" | "fig2b" | "fig3a" | "fig3b" => {
                let data = if name.starts_with("fig2") { 0.0 } else { FRAC_PI_2 };
                let q = if name.ends_with('a') {
                    Quantity::FidelityAb
                } else {
                    Quantity::FidelityBa
                };
                (
                    q,
                    axis(ParamId::TriggerA, 0.0, PI),
                    axis(ParamId::TriggerB, 0.0, PI),
                    vec![(ParamId::ThetaA, data), (ParamId::ThetaB, data)],
                )
            }
            "fig4" => (
                Quantity::FidelityAb,
                axis(ParamId::Vartheta, 0.0, TAU),
                axis(ParamId::Phi, 0.0, TAU),
                vec![],
            ),
            "fig5a" | "fig5b" => {
                let tb = if name == "fig5a" { 0.0 } else { FRAC_PI_4 };
                (
                    Quantity::FidelityAb,
                    axis(ParamId::ThetaA, 0.0, PI),
                    axis(ParamId::TriggerT, 0.0, PI),
                    vec![(ParamId::ThetaB, tb)],
                )
            }
            "fig6a" | "fig6b" | "fig8a" | "fig8b" => {
                let trig = if name.ends_with('a') { 0.0 } else { PI };
                let q = if name.starts_with("fig6") {
                    Quantity::QfiThetaA
                } else {
                    Quantity::QfiThetaB
                };
                (
                    q,
                    axis(ParamId::ThetaA, 0.0, PI),
                    axis(ParamId::ThetaB, 0.0, PI),
                    vec![(ParamId::TriggerT, trig)],
                )
            }
            "fig7a" | "fig7b" | "fig8c" | "fig8d" => {
                let phase = if name.ends_with('a') || name.ends_with('c') {
                    0.0
                } else {
                    FRAC_PI_2
                };
                let q = if name.starts_with("fig7") {
                    Quantity::QfiThetaA
                } else {
                    Quantity::QfiThetaB
                };
                (
                    q,
                    axis(ParamId::ThetaA, 0.0, PI),
                    axis(ParamId::ThetaB, 0.0, PI),
                    vec![(ParamId::TriggerT, FRAC_PI_4), (ParamId::Phi, phase)],
                )
            }
            "fig9a" | "fig9c" => {
                let phase = if name == "fig9a" { 0.0 } else { FRAC_PI_2 };
                (
                    Quantity::DeltaAlice,
                    axis(ParamId::ThetaA, 0.0, PI),
                    axis(ParamId::TriggerT, 0.0, PI),
                    vec![(ParamId::ThetaB, FRAC_PI_4), (ParamId::Phi, phase)],
                )
            }
            "fig9b" | "fig9d" => {
                let phase = if name == "fig9b" { 0.0 } else { FRAC_PI_2 };
                (
                    Quantity::DeltaBob,
                    axis(ParamId::ThetaB, 0.0, PI),
                    axis(ParamId::TriggerT, 0.0, PI),
                    vec![(ParamId::ThetaA, FRAC_PI_4), (ParamId::Phi, phase)],
                )
            }
            other => return Err(Error::UnknownPreset(other.to_string())),
        };
    Ok(SweepConfig {
        preset: Some(name.to_string()),
        quantity,
        side: None,
        model: ProbModel::Overlap,
        axis1,
        axis2,
        pinned,
    })
}

// ====== configuration text ======

/// Parses one `name:start:stop:steps` axis specification.
fn parse_axis(line_no: usize, spec: &str) -> Result<Axis> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 4 {
        return Err(Error::ConfigParse {
            line: line_no,
            msg: format!("axis `{spec}` must have the form name:start:stop:steps"),
        });
    }
    let id = ParamId::parse(parts[0]).ok_or_else(|| Error::ConfigParse {
        line: line_no,
        msg: format!("unknown axis parameter `{}`", parts[0]),
    })?;
    let num = |s: &str, what: &str| -> Result<f64> {
        s.trim().parse::<f64>().map_err(|_| Error::ConfigParse {
            line: line_no,
            msg: format!("axis {what} `{s}` is not a number"),
        })
    };
    let start = num(parts[1], "start")?;
    let stop = num(parts[2], "stop")?;
    let steps = parts[3].trim().parse::<usize>().map_err(|_| Error::ConfigParse {
        line: line_no,
        msg: format!("axis steps `{}` is not a count", parts[3]),
    })?;
    Ok(Axis { id, start, stop, steps })
}

/// Parses a sweep configuration from `key = value` text.
///
/// Lines are trimmed; `#` starts a comment (full-line or trailing); blank
/// lines are skipped. A `preset = <name>` line supplies the base
/// configuration and every other line then overrides it, regardless of
/// order. Any base parameter id used as a key pins that parameter. Unknown
/// keys are errors carrying the line number.
pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let mut preset_req: Option<(usize, String)> = None;
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::ConfigParse {
            line: line_no,
            msg: "expected `key = value`".into(),
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if value.is_empty() {
            return Err(Error::ConfigParse {
                line: line_no,
                msg: format!("key `{key}` has no value"),
            });
        }
        if key == "preset" {
            if preset_req.is_some() {
                return Err(Error::ConfigParse {
                    line: line_no,
                    msg: "preset may only be set once".into(),
                });
            }
            preset_req = Some((line_no, value));
        } else {
            entries.push((line_no, key, value));
        }
    }

    // Base: the preset if named, otherwise an empty skeleton that the file
    // must fill in.
    let mut quantity: Option<Quantity> = None;
    let mut side: Option<Side> = None;
    let mut model = ProbModel::Overlap;
    let mut axis1: Option<Axis> = None;
    let mut axis2: Option<Axis> = None;
    let mut pinned: Vec<(ParamId, f64)> = Vec::new();
    let mut preset_name = None;
    if let Some((_, name)) = &preset_req {
        let base = preset(name)?;
        preset_name = base.preset.clone();
        quantity = Some(base.quantity);
        side = base.side;
        model = base.model;
        axis1 = Some(base.axis1);
        axis2 = Some(base.axis2);
        pinned = base.pinned;
    }

    for (line_no, key, value) in entries {
        match key.as_str() {
            "quantity" => {
                quantity = Some(Quantity::parse(&value).ok_or_else(|| Error::ConfigParse {
                    line: line_no,
                    msg: format!("unknown quantity `{value}`"),
                })?);
            }
            "side" => {
                side = Some(match value.as_str() {
                    "alice" => Side::Alice,
                    "bob" => Side::Bob,
                    other => {
                        return Err(Error::ConfigParse {
                            line: line_no,
                            msg: format!("side must be `alice` or `bob`, got `{other}`"),
                        })
                    }
                });
            }
            "prob_model" => {
                model = match value.as_str() {
                    "overlap" => ProbModel::Overlap,
                    "cross_term" => ProbModel::CrossTerm,
                    other => {
                        return Err(Error::ConfigParse {
                            line: line_no,
                            msg: format!(
                                "prob_model must be `overlap` or `cross_term`, got `{other}`"
                            ),
                        })
                    }
                };
            }
            "axis1" => axis1 = Some(parse_axis(line_no, &value)?),
            "axis2" => axis2 = Some(parse_axis(line_no, &value)?),
            other => match ParamId::parse(other) {
                Some(id) => {
                    let v = value.parse::<f64>().map_err(|_| Error::ConfigParse {
                        line: line_no,
                        msg: format!("pin `{other}` value `{value}` is not a number"),
                    })?;
                    // A later pin of the same id replaces the earlier one
                    // (override semantics over presets).
                    pinned.retain(|(p, _)| *p != id);
                    pinned.push((id, v));
                }
                None => {
                    return Err(Error::ConfigParse {
                        line: line_no,
                        msg: format!("unknown key `{other}`"),
                    })
                }
            },
        }
    }

    let cfg = SweepConfig {
        preset: preset_name,
        quantity: quantity.ok_or_else(|| Error::BadSweep("quantity is required".into()))?,
        side,
        model,
        axis1: axis1.ok_or_else(|| Error::BadSweep("axis1 is required".into()))?,
        axis2: axis2.ok_or_else(|| Error::BadSweep("axis2 is required".into()))?,
        pinned,
    };
    cfg.validate()?;
    Ok(cfg)
}

// =====================================================================
// tests
// =====================================================================
