//! kslab CLI: batch verification commands with JSON reports on stdout,
//! diagnostics on stderr and stable exit codes.
//!
//! Exit codes: 0 = completed with the expected verdict class, 1 =
//! completed with a violation/contradiction finding (or an `--expect`
//! mismatch), 2 = input error. `--expect VERDICT` flips a matching
//! finding to exit 0 for CI pipelines.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use kslab::catalog;
use kslab::contextual::{run_conway_kochen_argument, ContextualModel};
use kslab::geometry::{parse_rational, Rational};
use kslab::ks::{export_cnf, search_colorings, SearchMode};
use kslab::quantum::run_sweeps;
use kslab::spacetime::{h_prime_region_check, monotonicity_probe, Event, Scenario};

#[derive(Debug, Parser)]
#[command(
    name = "kslab",
    version,
    about = "verification laboratory for direction-set colorings and twin-argument causality"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a direction set admits a valid coloring
    Verify(VerifyArgs),
    /// Run the twin-argument pipeline on a set, model and scenario
    Contextual(ContextualArgs),
    /// Cone-intersection probes and common-past membership for a scenario
    Spacetime(SpacetimeArgs),
    /// Seeded randomized sweeps over the spin-1 operator checks
    Quantum(QuantumArgs),
    /// List built-in direction sets or write one to a file
    Catalog(CatalogArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Direction-set file
    set: PathBuf,
    /// Count every valid coloring instead of stopping at the first
    #[arg(long, conflicts_with = "witness")]
    count: bool,
    /// Stop at the first witness (the default mode, made explicit)
    #[arg(long)]
    witness: bool,
    /// Also write the DIMACS CNF encoding to this path
    #[arg(long, value_name = "PATH")]
    cnf_out: Option<PathBuf>,
    /// Expected status (SAT or UNSAT); mismatches exit 1
    #[arg(long, value_name = "VERDICT")]
    expect: Option<String>,
}

#[derive(Debug, Args)]
struct ContextualArgs {
    /// Direction-set file
    set: PathBuf,
    /// Contextual model JSON
    model: PathBuf,
    /// Scenario JSON
    scenario: PathBuf,
    /// Expected verdict (CONSISTENT, CONTRADICTION, TWIN-VIOLATION,
    /// CAUSAL-DEPENDENCE-ALLOWED); matches exit 0, mismatches exit 1
    #[arg(long, value_name = "VERDICT")]
    expect: Option<String>,
}

#[derive(Debug, Args)]
struct SpacetimeArgs {
    /// Scenario JSON
    scenario: PathBuf,
    /// Comma-separated strictly increasing probe times (rationals)
    #[arg(long, value_name = "T1,T2,...")]
    probe: Option<String>,
    /// Event "t,x,y,z" to test against the common-past region at T*
    #[arg(long, value_name = "EVENT")]
    hprime: Option<String>,
    /// Expected primary verdict (probe pattern, or membership when only
    /// --hprime is given)
    #[arg(long, value_name = "VERDICT")]
    expect: Option<String>,
}

#[derive(Debug, Args)]
struct QuantumArgs {
    /// Number of randomized trials
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Seed for the deterministic generator
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct CatalogArgs {
    #[command(subcommand)]
    action: CatalogAction,
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    /// List the built-in sets
    List,
    /// Generate a built-in set and write it to a file
    Emit { name: String, path: PathBuf },
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunReport {
    schema_version: u32,
    command: &'static str,
    inputs: Vec<InputDigest>,
    result: Value,
    exit_code: i32,
}

/// Input error carrying already-collected digests, reported as exit 2.
struct InputError {
    message: String,
    inputs: Vec<InputDigest>,
}

struct Outcome {
    command: &'static str,
    inputs: Vec<InputDigest>,
    result: Value,
    /// Primary verdict string compared against `--expect`.
    verdict: String,
    /// Exit code when no expectation was given.
    default_exit: i32,
    expect: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Contextual(args) => cmd_contextual(args),
        Command::Spacetime(args) => cmd_spacetime(args),
        Command::Quantum(args) => cmd_quantum(args),
        Command::Catalog(args) => cmd_catalog(args),
    };

    match outcome {
        Ok(outcome) => {
            let exit_code = match &outcome.expect {
                Some(expected) => i32::from(expected != &outcome.verdict),
                None => outcome.default_exit,
            };
            if let Some(expected) = &outcome.expect {
                if expected != &outcome.verdict {
                    eprintln!(
                        "kslab: expected verdict {expected}, got {}",
                        outcome.verdict
                    );
                }
            }
            emit_report(RunReport {
                schema_version: 1,
                command: outcome.command,
                inputs: outcome.inputs,
                result: outcome.result,
                exit_code,
            });
            ExitCode::from(exit_code as u8)
        }
        Err(err) => {
            eprintln!("kslab: {}", err.message);
            emit_report(RunReport {
                schema_version: 1,
                command: "error",
                inputs: err.inputs,
                result: json!({ "error": err.message }),
                exit_code: 2,
            });
            ExitCode::from(2)
        }
    }
}

fn emit_report(report: RunReport) {
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serialization cannot fail")
    );
}

fn digest_file(path: &Path, inputs: &mut Vec<InputDigest>) -> Result<String, InputError> {
    let bytes = std::fs::read(path).map_err(|e| InputError {
        message: format!("{}: {e}", path.display()),
        inputs: std::mem::take(inputs),
    })?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        write!(hex, "{byte:02x}").unwrap();
    }
    inputs.push(InputDigest {
        path: path.display().to_string(),
        sha256: hex,
    });
    String::from_utf8(bytes).map_err(|e| InputError {
        message: format!("{}: not valid UTF-8: {e}", path.display()),
        inputs: std::mem::take(inputs),
    })
}

fn fail(inputs: &mut Vec<InputDigest>, message: impl Into<String>) -> InputError {
    InputError {
        message: message.into(),
        inputs: std::mem::take(inputs),
    }
}

fn load_set(path: &Path, inputs: &mut Vec<InputDigest>) -> Result<kslab::DirectionSet, InputError> {
    let text = digest_file(path, inputs)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "unnamed".to_string());
    catalog::parse_direction_set(&text, &name)
        .map_err(|e| fail(inputs, format!("{}: {e}", path.display())))
}

fn cmd_verify(args: VerifyArgs) -> Result<Outcome, InputError> {
    let mut inputs = Vec::new();
    let set = load_set(&args.set, &mut inputs)?;

    let mode = if args.count {
        SearchMode::CountAll
    } else {
        SearchMode::FirstWitness
    };
    let report = search_colorings(&set, mode);
    let structure = kslab::build_structure(&set);

    let cnf_path = match &args.cnf_out {
        Some(path) => {
            let dimacs = export_cnf(&set).to_dimacs();
            std::fs::write(path, dimacs)
                .map_err(|e| fail(&mut inputs, format!("{}: {e}", path.display())))?;
            Some(path.display().to_string())
        }
        None => None,
    };

    let mut result = report.to_json_value();
    result["set"] = json!(set.name());
    result["rays"] = json!(set.len());
    result["orthogonal_pairs"] = json!(structure.pairs().len());
    result["triads"] = json!(structure.triads().len());
    result["cnf_out"] = json!(cnf_path);

    let verdict = match report.status {
        kslab::Status::Sat => "SAT",
        kslab::Status::Unsat => "UNSAT",
    };
    Ok(Outcome {
        command: "verify",
        inputs,
        result,
        verdict: verdict.to_string(),
        default_exit: 0,
        expect: args.expect,
    })
}

fn cmd_contextual(args: ContextualArgs) -> Result<Outcome, InputError> {
    let mut inputs = Vec::new();
    let set = load_set(&args.set, &mut inputs)?;
    let model_text = digest_file(&args.model, &mut inputs)?;
    let model = ContextualModel::from_json(&model_text, &set)
        .map_err(|e| fail(&mut inputs, format!("{}: {e}", args.model.display())))?;
    let scenario_text = digest_file(&args.scenario, &mut inputs)?;
    let scenario = Scenario::from_json(&scenario_text)
        .map_err(|e| fail(&mut inputs, format!("{}: {e}", args.scenario.display())))?;

    let verdict = run_conway_kochen_argument(&set, &model, &scenario)
        .map_err(|e| fail(&mut inputs, e.to_string()))?;

    let mut result = serde_json::to_value(&verdict).expect("verdict serialization cannot fail");
    result["set"] = json!(set.name());
    result["hidden_states"] = json!(model.state_labels());

    let name = verdict.name().to_string();
    let default_exit = i32::from(name != "CONSISTENT");
    Ok(Outcome {
        command: "contextual",
        inputs,
        result,
        verdict: name,
        default_exit,
        expect: args.expect,
    })
}

fn parse_rational_arg(
    s: &str,
    what: &str,
    inputs: &mut Vec<InputDigest>,
) -> Result<Rational, InputError> {
    parse_rational(s).map_err(|msg| fail(inputs, format!("{what}: {msg}")))
}

fn cmd_spacetime(args: SpacetimeArgs) -> Result<Outcome, InputError> {
    let mut inputs = Vec::new();
    let scenario_text = digest_file(&args.scenario, &mut inputs)?;
    let scenario = Scenario::from_json(&scenario_text)
        .map_err(|e| fail(&mut inputs, format!("{}: {e}", args.scenario.display())))?;

    if args.probe.is_none() && args.hprime.is_none() {
        return Err(fail(
            &mut inputs,
            "nothing to do: pass --probe and/or --hprime",
        ));
    }

    let mut result = json!({ "scenario_c": scenario.c.to_string() });
    let mut verdict = String::new();

    if let Some(spec) = &args.probe {
        let times = spec
            .split(',')
            .map(|tok| parse_rational_arg(tok, "probe time", &mut inputs))
            .collect::<Result<Vec<_>, _>>()?;
        let (apexes, pattern) =
            monotonicity_probe(&scenario, &times).map_err(|e| fail(&mut inputs, e.to_string()))?;
        result["probe"] = json!({
            "times": times.iter().map(Rational::to_string).collect::<Vec<_>>(),
            "apex_times": apexes.iter().map(Rational::to_string).collect::<Vec<_>>(),
            "pattern": pattern,
        });
        verdict = serde_json::to_value(pattern)
            .unwrap()
            .as_str()
            .unwrap()
            .to_string();
    }

    if let Some(spec) = &args.hprime {
        let parts: Vec<&str> = spec.split(',').collect();
        if parts.len() != 4 {
            return Err(fail(
                &mut inputs,
                format!("--hprime expects t,x,y,z; got `{spec}`"),
            ));
        }
        let event = Event::new(
            parse_rational_arg(parts[0], "event time", &mut inputs)?,
            [
                parse_rational_arg(parts[1], "event x", &mut inputs)?,
                parse_rational_arg(parts[2], "event y", &mut inputs)?,
                parse_rational_arg(parts[3], "event z", &mut inputs)?,
            ],
        );
        let membership = h_prime_region_check(&scenario, &event)
            .map_err(|e| fail(&mut inputs, e.to_string()))?;
        result["hprime"] = json!({
            "event": {
                "t": event.t.to_string(),
                "x": [event.x[0].to_string(), event.x[1].to_string(), event.x[2].to_string()],
            },
            "membership": membership,
        });
        if verdict.is_empty() {
            verdict = serde_json::to_value(membership)
                .unwrap()
                .as_str()
                .unwrap()
                .to_string();
        }
    }

    let default_exit = i32::from(verdict == "violation");
    Ok(Outcome {
        command: "spacetime",
        inputs,
        result,
        verdict,
        default_exit,
        expect: args.expect,
    })
}

fn cmd_quantum(args: QuantumArgs) -> Result<Outcome, InputError> {
    let mut inputs = Vec::new();
    let report =
        run_sweeps(args.trials, args.seed).map_err(|e| fail(&mut inputs, e.to_string()))?;
    let within = report.within_tolerance;
    let result = serde_json::to_value(&report).expect("sweep serialization cannot fail");
    Ok(Outcome {
        command: "quantum",
        inputs,
        result,
        verdict: if within { "ok" } else { "tolerance-exceeded" }.to_string(),
        default_exit: i32::from(!within),
        expect: None,
    })
}

fn cmd_catalog(args: CatalogArgs) -> Result<Outcome, InputError> {
    let mut inputs = Vec::new();
    match args.action {
        CatalogAction::List => Ok(Outcome {
            command: "catalog",
            inputs,
            result: json!({ "entries": catalog::entries() }),
            verdict: "ok".to_string(),
            default_exit: 0,
            expect: None,
        }),
        CatalogAction::Emit { name, path } => {
            let set = catalog::generate(&name).map_err(|e| fail(&mut inputs, e.to_string()))?;
            let text = catalog::write_direction_set(&set);
            std::fs::write(&path, text)
                .map_err(|e| fail(&mut inputs, format!("{}: {e}", path.display())))?;
            Ok(Outcome {
                command: "catalog",
                inputs,
                result: json!({
                    "name": set.name(),
                    "path": path.display().to_string(),
                    "rays": set.len(),
                }),
                verdict: "ok".to_string(),
                default_exit: 0,
                expect: None,
            })
        }
    }
}
