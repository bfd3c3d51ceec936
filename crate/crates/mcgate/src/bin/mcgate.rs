//! Command-line front end: decompose multi-controlled gates to QASM/JSON,
//! verify circuit files against the dense oracle, compute base-control
//! plans, and emit CNOT-count comparison CSVs.
//!
//! Exit codes: 0 success; 2 configuration error; 3 infeasible construction;
//! 4 verification failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mcgate::circuit::DecompositionReport;
use mcgate::oracle::{self, ControlSpec, DistanceMode};
use mcgate::unitary::{ApproxPlan, UnitaryMatrix2};
use mcgate::{cost, mcu, qasm, Circuit};

const EXIT_CONFIG: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "mcgate", version, about = "Multi-controlled gate decomposition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a multi-controlled gate into one-qubit gates and CNOTs.
    Decompose(DecomposeArgs),
    /// Print the base-control plan for an error budget.
    Basecontrols(BaseControlsArgs),
    /// Verify a circuit file against an ideal multi-controlled gate.
    Verify(VerifyArgs),
    /// Emit the CNOT-count comparison table as CSV.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Exact,
    #[value(name = "approx-thm1")]
    ApproxThm1,
    #[value(name = "approx-thm3")]
    ApproxThm3,
    Auto,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Qasm,
    Json,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Gate name ("x", "rx(pi/2)", "u3(a,b,c)", ...) or a JSON 2x2 matrix.
    #[arg(long)]
    gate: String,
    /// Number of control qubits; the circuit uses wires k..1 as controls
    /// (wire k is the first, b1) and wire 0 as the target.
    #[arg(long)]
    controls: usize,
    #[arg(long, value_enum, default_value = "auto")]
    strategy: Strategy,
    /// Approximation budget (operator-norm error), required by the
    /// approximate strategies.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, value_enum, default_value = "qasm")]
    format: Format,
    /// Verification mode: off, full, patterns, or sampled:<count>:<seed>.
    #[arg(long, default_value = "off")]
    verify: String,
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BaseControlsArgs {
    /// Worst-case eigenphase magnitude (accepts "pi" expressions).
    #[arg(long, conflicts_with = "gate")]
    theta: Option<String>,
    /// Gate whose largest eigenphase sets the plan.
    #[arg(long)]
    gate: Option<String>,
    #[arg(long)]
    epsilon: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Circuit file (.json circuit format or .qasm).
    circuit: PathBuf,
    /// Ideal gate the circuit should implement under the controls.
    #[arg(long)]
    gate: String,
    #[arg(long)]
    controls: usize,
    /// full, patterns, or sampled:<count>:<seed>.
    #[arg(long, default_value = "full")]
    mode: String,
    /// Accepted distance; defaults to 1e-9.
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    n_from: usize,
    #[arg(long)]
    n_to: usize,
    /// Target count for the multi-target SU(2) column.
    #[arg(long, default_value = "2")]
    nt: usize,
    /// Also build the approximate circuits (n <= 20) and append measured
    /// counts.
    #[arg(long)]
    measured: bool,
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Decompose(a) => cmd_decompose(&a),
        Command::Basecontrols(a) => cmd_basecontrols(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Compare(a) => cmd_compare(&a),
    }
}

fn config_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_CONFIG)
}

fn parse_verify_mode(s: &str) -> Result<Option<DistanceMode>, String> {
    match s {
        "off" => Ok(None),
        "full" => Ok(Some(DistanceMode::Full)),
        "patterns" => Ok(Some(DistanceMode::ControlPatterns)),
        other => {
            let parts: Vec<&str> = other.split(':').collect();
            if parts.len() == 3 && parts[0] == "sampled" {
                let count = parts[1].parse().map_err(|_| "bad sample count".to_string())?;
                let seed = parts[2].parse().map_err(|_| "bad sample seed".to_string())?;
                Ok(Some(DistanceMode::SampledColumns { count, seed }))
            } else {
                Err(format!("unknown verify mode '{other}'"))
            }
        }
    }
}

/// The fixed wire convention: controls on wires k..1 (b1 highest), target 0.
fn standard_wires(k: usize) -> (Vec<usize>, usize, usize) {
    ((1..=k).rev().collect(), 0, k + 1)
}

fn build(a: &DecomposeArgs, u: &UnitaryMatrix2) -> mcgate::Result<DecompositionReport> {
    let (controls, target, width) = standard_wires(a.controls);
    match a.strategy {
        Strategy::Exact => mcu::mcu_exact(u, &controls, target, width),
        Strategy::ApproxThm1 => mcu::mcu_approx(u, &controls, target, width, a.epsilon.unwrap()),
        Strategy::ApproxThm3 => {
            mcu::mcu_approx_opt(u, &controls, target, width, a.epsilon.unwrap())
        }
        Strategy::Auto => mcu::mcu_auto(u, &controls, target, width, a.epsilon),
    }
}

fn cmd_decompose(a: &DecomposeArgs) -> ExitCode {
    if matches!(a.strategy, Strategy::ApproxThm1 | Strategy::ApproxThm3) && a.epsilon.is_none() {
        return config_error("approximate strategies require --epsilon");
    }
    if a.controls == 0 {
        return config_error("--controls must be at least 1");
    }
    let mode = match parse_verify_mode(&a.verify) {
        Ok(m) => m,
        Err(e) => return config_error(&e),
    };
    let u = match qasm::gate_from_spec(&a.gate) {
        Ok(u) => u,
        Err(e) => return config_error(&e.to_string()),
    };
    let report = match build(a, &u) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INFEASIBLE);
        }
    };

    let rendered = match a.format {
        Format::Qasm => qasm::to_qasm(&report.circuit),
        Format::Json => report.circuit.to_json(),
    };
    if let Some(path) = &a.output {
        if let Err(e) = std::fs::write(path, rendered) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_INFEASIBLE);
        }
    } else {
        println!("{rendered}");
    }

    let mut measured: Option<f64> = None;
    if let Some(mode) = mode {
        let (controls, target, _) = standard_wires(a.controls);
        let spec = ControlSpec::single(&controls, target);
        let d = match mode {
            DistanceMode::ControlPatterns => {
                match oracle::pattern_errors(&report.circuit, &u, &spec) {
                    Ok(errs) => {
                        for (name, e) in &errs {
                            eprintln!("pattern {name}: error={e:.3e}");
                        }
                        errs.iter().map(|(_, e)| *e).fold(0.0, f64::max)
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(EXIT_INFEASIBLE);
                    }
                }
            }
            m => match oracle::distance(&report.circuit, &u, &spec, m) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_INFEASIBLE);
                }
            },
        };
        measured = Some(d);
    }

    let error_text = match (measured, report.oracle_error) {
        (Some(d), _) => format!("{d:.6e}"),
        (None, Some(p)) => format!("{p:.6e}"),
        (None, None) => "n/a".to_string(),
    };
    println!(
        "strategy={} n={} cnots={} bound={} error={}",
        report.strategy,
        a.controls + 1,
        report.cnot_count,
        report
            .bound
            .map(|b| b.to_string())
            .unwrap_or_else(|| "n/a".to_string()),
        error_text
    );

    if let Some(d) = measured {
        let budget = if report.strategy == "exact" {
            1e-9
        } else {
            a.epsilon.unwrap_or(1e-9)
        };
        if d > budget + 1e-12 {
            eprintln!("error: measured error {d:.3e} exceeds budget {budget:.3e}");
            return ExitCode::from(EXIT_VERIFY);
        }
    }
    ExitCode::SUCCESS
}

fn cmd_basecontrols(a: &BaseControlsArgs) -> ExitCode {
    let plan = if let Some(theta) = &a.theta {
        let theta = match qasm::parse_angle(theta) {
            Ok(t) => t,
            Err(e) => return config_error(&e.to_string()),
        };
        ApproxPlan::for_theta(theta.abs(), a.epsilon)
    } else if let Some(gate) = &a.gate {
        match qasm::gate_from_spec(gate) {
            Ok(u) => ApproxPlan::for_gate(&u, a.epsilon),
            Err(e) => return config_error(&e.to_string()),
        }
    } else {
        return config_error("one of --theta or --gate is required");
    };
    match plan {
        Ok(p) => {
            println!(
                "nb={} N={} predicted_error={:.6e}",
                p.n_base, p.big_n, p.predicted_error
            );
            ExitCode::SUCCESS
        }
        Err(e) => config_error(&e.to_string()),
    }
}

fn read_circuit(path: &PathBuf) -> mcgate::Result<Circuit> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| mcgate::Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    if path.extension().and_then(|e| e.to_str()) == Some("json")
        || text.trim_start().starts_with('{')
    {
        Circuit::from_json(&text)
    } else {
        qasm::parse_qasm(&text)
    }
}

fn cmd_verify(a: &VerifyArgs) -> ExitCode {
    let u = match qasm::gate_from_spec(&a.gate) {
        Ok(u) => u,
        Err(e) => return config_error(&e.to_string()),
    };
    let mode = match parse_verify_mode(&a.mode) {
        Ok(Some(m)) => m,
        Ok(None) => return config_error("verify mode 'off' is not valid here"),
        Err(e) => return config_error(&e),
    };
    let circuit = match read_circuit(&a.circuit) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let (controls, target, width) = standard_wires(a.controls);
    if circuit.width() != width {
        return config_error(&format!(
            "circuit width {} does not match {} controls + target",
            circuit.width(),
            a.controls
        ));
    }
    let spec = ControlSpec::single(&controls, target);
    let d = match mode {
        DistanceMode::ControlPatterns => match oracle::pattern_errors(&circuit, &u, &spec) {
            Ok(errs) => {
                for (name, e) in &errs {
                    println!("pattern {name}: error={e:.3e}");
                }
                errs.iter().map(|(_, e)| *e).fold(0.0, f64::max)
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INFEASIBLE);
            }
        },
        m => match oracle::distance(&circuit, &u, &spec, m) {
            Ok(d) => d,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INFEASIBLE);
            }
        },
    };
    println!("distance={d:.6e}");
    let tol = a.epsilon.unwrap_or(1e-9);
    if d > tol {
        eprintln!("error: distance {d:.3e} exceeds tolerance {tol:.3e}");
        ExitCode::from(EXIT_VERIFY)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_compare(a: &CompareArgs) -> ExitCode {
    if a.n_from < 2 || a.n_to < a.n_from {
        return config_error("need 2 <= n-from <= n-to");
    }
    let mut table = match cost::compare_table(a.n_from..=a.n_to, a.epsilon, a.nt) {
        Ok(t) => t,
        Err(e) => return config_error(&e.to_string()),
    };
    if a.measured {
        table.with_measured = true;
        let u = UnitaryMatrix2::x();
        for row in &mut table.rows {
            let n = row.n;
            if !(3..=20).contains(&n) {
                continue;
            }
            let (controls, target, width) = standard_wires(n - 1);
            if let Ok(r) = mcu::mcu_approx(&u, &controls, target, width, a.epsilon) {
                row.measured_thm1 = Some(r.cnot_count);
            }
            if let Ok(r) = mcu::mcu_approx_opt(&u, &controls, target, width, a.epsilon) {
                row.measured_thm3 = Some(r.cnot_count);
            }
        }
    }
    let csv = table.to_csv();
    if let Some(path) = &a.output {
        if let Err(e) = std::fs::write(path, csv) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_INFEASIBLE);
        }
    } else {
        print!("{csv}");
    }
    ExitCode::SUCCESS
}
