//! `bqt` — sweeps, simulation-vs-closed-form verification, the audit
//! report, and the preset catalogue, from one binary.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 verification
//! failure, 3 I/O error.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use bqt_core::verify::PhaseMode;
use bqt_core::{
    ledger_text, parse_config, preset_summary, run_sweep, run_verify, PRESET_NAMES,
};

#[derive(Parser)]
#[command(
    name = "bqt",
    about = "Bidirectional trigger-teleportation: surfaces, verification, audit",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a quantity over a 2-D parameter grid and write it as CSV.
    Sweep {
        /// Path to a `key = value` sweep configuration.
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the circuit simulation against the closed form on random
    /// configurations and print a JSON report.
    Verify {
        /// Number of random configurations to draw.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Seed for the configuration stream.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// `zero` keeps all data phases at 0 (gated); `full` randomizes them
        /// (diagnostic, reports the frame gap instead of gating on it).
        #[arg(long, default_value = "zero")]
        phase_mode: String,
    },
    /// Print the computed-vs-reference findings, each backed by live
    /// computation.
    Ledger,
    /// List the built-in sweep presets.
    PresetList,
}

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_IO: u8 = 3;

fn fail(code: u8, msg: &str) -> ExitCode {
    eprintln!("bqt: {msg}");
    ExitCode::from(code)
}

/// Writes to stdout. A closed pipe is not a failure — the reader simply
/// stopped early — but any other write error is I/O.
fn write_stdout(text: &str) -> Result<(), ExitCode> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(fail(EXIT_IO, &format!("cannot write to stdout: {e}"))),
    }
}

fn cmd_sweep(config: &PathBuf, out: &PathBuf) -> ExitCode {
    let text = match std::fs::read_to_string(config) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_IO, &format!("cannot read {}: {e}", config.display())),
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_USAGE, &format!("{}: {e}", config.display())),
    };
    let result = match run_sweep(&cfg) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_USAGE, &e.to_string()),
    };
    if let Err(e) = std::fs::write(out, result.to_csv()) {
        return fail(EXIT_IO, &format!("cannot write {}: {e}", out.display()));
    }
    for note in &result.diagnostics {
        eprintln!("bqt: note: {note}");
    }
    let summary = format!(
        "wrote {} ({}x{} grid, max {:.9} at ({:.6}, {:.6}))\n",
        out.display(),
        result.axis1_values.len(),
        result.axis2_values.len(),
        result.extrema.max,
        result.extrema.argmax.0,
        result.extrema.argmax.1,
    );
    if let Err(code) = write_stdout(&summary) {
        return code;
    }
    ExitCode::SUCCESS
}

fn cmd_verify(trials: usize, seed: u64, phase_mode: &str) -> ExitCode {
    let mode = match PhaseMode::parse(phase_mode) {
        Some(m) => m,
        None => {
            return fail(
                EXIT_USAGE,
                &format!("phase-mode must be `zero` or `full`, got `{phase_mode}`"),
            )
        }
    };
    let report = match run_verify(trials, seed, mode) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_USAGE, &e.to_string()),
    };
    if let Err(code) = write_stdout(&format!("{}\n", report.to_json())) {
        return code;
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!(
            "bqt: verification failed: max trace distance {:.3e} exceeds gate {:.3e}",
            report.max_trace_distance, report.gate
        );
        ExitCode::from(EXIT_VERIFY)
    }
}

fn cmd_ledger() -> ExitCode {
    match write_stdout(&ledger_text()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}

fn cmd_preset_list() -> ExitCode {
    let mut listing = String::new();
    for name in PRESET_NAMES {
        let summary = preset_summary(name).expect("catalogued preset");
        listing.push_str(&format!("{name:<8} {summary}\n"));
    }
    match write_stdout(&listing) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; everything else is a
            // usage error.
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_USAGE) };
        }
    };
    match &cli.command {
        Command::Sweep { config, out } => cmd_sweep(config, out),
        Command::Verify { trials, seed, phase_mode } => cmd_verify(*trials, *seed, phase_mode),
        Command::Ledger => cmd_ledger(),
        Command::PresetList => cmd_preset_list(),
    }
}
