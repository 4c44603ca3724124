//! `genet`: validate, instantiate, check and reason over theory documents.
//!
//! Exit status: 0 success or decided, 1 validation or conformance failure,
//! 2 conflict or several permissible actions, 3 usage error.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use genet::model::{InfluenceThresholds, MoralAgent, MoralPrinciple, PatientKind, Subject};
use genet::reasoner::{
    decide, render_decision_json, render_decision_text, render_evaluation_json,
    render_evaluation_text, DecisionKind,
};
use genet::registry::{check_conformance, instantiate, PrincipleEdit, Registry};
use genet::scenario::load_scenario;
use genet::xml::{emit_theory, parse_theory};
use genet::{EthicalTheoryInstance, ValidationReport};
use serde_json::json;

const BASE_DIR_ENV: &str = "GENET_BASE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok = 0,
    Invalid = 1,
    Undecided = 2,
    Usage = 3,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

/// Fails the command with a message on stderr.
struct Failure {
    status: Status,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        status: Status::Usage,
        message: message.into(),
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        status: Status::Invalid,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "genet",
    version,
    about = "Machine-readable normative ethical theories"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a theory document against the schema and model invariants.
    Validate { path: PathBuf },

    /// Build a theory document from a base theory.
    Instantiate(InstantiateArgs),

    /// Check that a theory document could have been built from its base theory.
    Conformance { path: PathBuf },

    /// Evaluate a scenario under a theory.
    Reason {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
        /// Report only this action.
        #[arg(long)]
        action: Option<String>,
        /// Append the full argument trace.
        #[arg(long)]
        explain: bool,
    },

    /// Inspect the registered base theories.
    Bases {
        #[command(subcommand)]
        command: BasesCommand,
    },
}

#[derive(Debug, Subcommand)]
enum BasesCommand {
    List,
    Show { name: String },
}

#[derive(Debug, clap::Args)]
struct InstantiateArgs {
    #[arg(long)]
    base: String,
    #[arg(long)]
    agent: String,
    #[arg(long = "agent-ref")]
    agent_ref: Option<String>,
    #[arg(long)]
    external: u8,
    #[arg(long)]
    substance: u8,
    #[arg(long)]
    name: String,
    /// SPEC,SUBJECT,MORALITY
    #[arg(long = "add", value_parser = parse_add)]
    add: Vec<MoralPrinciple>,
    /// SPEC,SUBJECT
    #[arg(long = "remove", value_parser = parse_remove)]
    remove: Vec<(String, Subject)>,
    /// Patient kind, for bases that leave patient kinds open. Repeatable.
    #[arg(long = "patient-kind")]
    patient_kind: Vec<PatientKind>,
    #[arg(long)]
    out: PathBuf,
}

fn parse_add(s: &str) -> Result<MoralPrinciple, String> {
    match s.split(',').collect::<Vec<_>>()[..] {
        [spec, subject, morality] => {
            let subject: Subject = subject.parse().map_err(|e| format!("{e}"))?;
            let morality = match morality {
                "true" | "1" => true,
                "false" | "0" => false,
                other => return Err(format!("`{other}` is not a boolean")),
            };
            Ok(MoralPrinciple::new(morality, subject, spec))
        }
        _ => Err("expected SPEC,SUBJECT,MORALITY".into()),
    }
}

fn parse_remove(s: &str) -> Result<(String, Subject), String> {
    match s.split(',').collect::<Vec<_>>()[..] {
        [spec, subject] => Ok((
            spec.to_owned(),
            subject.parse().map_err(|e| format!("{e}"))?,
        )),
        _ => Err("expected SPEC,SUBJECT".into()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                Status::Usage
            } else {
                Status::Ok
            }
            .into();
        }
    };
    match run(cli) {
        Ok(status) => status.into(),
        Err(f) => {
            eprintln!("genet: {}", f.message);
            f.status.into()
        }
    }
}

fn run(cli: Cli) -> Result<Status, Failure> {
    let format = cli.format;
    match cli.command {
        Command::Validate { path } => validate(&path, format),
        Command::Instantiate(args) => cmd_instantiate(args, format),
        Command::Conformance { path } => conformance(&path, format),
        Command::Reason {
            theory,
            scenario,
            action,
            explain,
        } => reason(&theory, &scenario, action.as_deref(), explain, format),
        Command::Bases { command } => bases(command, format),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn registry() -> Result<Registry, Failure> {
    match std::env::var_os(BASE_DIR_ENV) {
        Some(dir) => Registry::load_dir(&dir).map_err(|e| usage(format!("{BASE_DIR_ENV}: {e}"))),
        None => Ok(Registry::builtin()),
    }
}

fn print_report(report: &ValidationReport, format: Format) {
    match format {
        Format::Text => print!("{report}"),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({ "valid": report.is_ok(), "violations": report }))
                .unwrap()
        ),
    }
}

fn load_theory(path: &Path, format: Format) -> Result<Result<EthicalTheoryInstance, ()>, Failure> {
    let doc = read(path)?;
    Ok(parse_theory(&doc).map_err(|e| print_report(&e.report(), format)))
}

fn validate(path: &Path, format: Format) -> Result<Status, Failure> {
    match load_theory(path, format)? {
        Ok(_) => {
            print_report(&ValidationReport::new(), format);
            Ok(Status::Ok)
        }
        Err(()) => Ok(Status::Invalid),
    }
}

fn conformance(path: &Path, format: Format) -> Result<Status, Failure> {
    let registry = registry()?;
    let Ok(t) = load_theory(path, format)? else {
        return Ok(Status::Invalid);
    };
    let report =
        check_conformance(&t, &registry).map_err(|e| invalid(format!("{}: {e}", e.code())))?;
    print_report(&report, format);
    Ok(if report.is_empty() {
        Status::Ok
    } else {
        Status::Invalid
    })
}

fn cmd_instantiate(args: InstantiateArgs, format: Format) -> Result<Status, Failure> {
    let registry = registry()?;
    let base = registry
        .get(&args.base)
        .ok_or_else(|| usage(format!("unknown base theory `{}`", args.base)))?;
    let mut agent = MoralAgent::new(args.agent);
    agent.reference = args.agent_ref;
    let kinds = (!args.patient_kind.is_empty())
        .then(|| args.patient_kind.iter().copied().collect::<BTreeSet<_>>());
    let edits: Vec<PrincipleEdit> = args
        .add
        .into_iter()
        .map(PrincipleEdit::add)
        .chain(
            args.remove
                .into_iter()
                .map(|(spec, subject)| PrincipleEdit::remove(spec, subject)),
        )
        .collect();

    let instance = match instantiate(
        base,
        agent,
        InfluenceThresholds::new(args.external, args.substance),
        args.name,
        kinds,
        &edits,
    ) {
        Ok(t) => t,
        Err(e) => {
            match (&e, format) {
                (genet::InstantiateError::InvalidInstance(report), _) => {
                    print_report(report, format)
                }
                (_, Format::Text) => println!("{}\t{e}", e.code()),
                (_, Format::Json) => println!(
                    "{}",
                    serde_json::to_string_pretty(
                        &json!({ "code": e.code(), "message": e.to_string() })
                    )
                    .unwrap()
                ),
            }
            return Ok(Status::Invalid);
        }
    };
    let doc = emit_theory(&instance).map_err(|e| invalid(e.to_string()))?;
    fs::write(&args.out, doc.as_bytes())
        .map_err(|e| usage(format!("cannot write {}: {e}", args.out.display())))?;
    match format {
        Format::Text => println!(
            "wrote {} ({} principles)",
            args.out.display(),
            instance.principles.len()
        ),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "out": args.out.display().to_string(),
                "principles": instance.principles.len(),
            }))
            .unwrap()
        ),
    }
    Ok(Status::Ok)
}

fn reason(
    theory: &Path,
    scenario: &Path,
    action: Option<&str>,
    explain: bool,
    format: Format,
) -> Result<Status, Failure> {
    let Ok(t) = load_theory(theory, format)? else {
        return Ok(Status::Invalid);
    };
    let s = load_scenario(&read(scenario)?).map_err(|e| invalid(e.to_string()))?;
    let decision = decide(&t, &s).map_err(|e| invalid(e.to_string()))?;

    match action {
        Some(id) => {
            let e = decision
                .evaluation(id)
                .ok_or_else(|| usage(format!("`{id}` is not an action of scenario {}", s.name)))?;
            match format {
                Format::Text => print!("{}", render_evaluation_text(e, explain)),
                Format::Json => print!("{}", render_evaluation_json(e)),
            }
        }
        None => match format {
            Format::Text => print!("{}", render_decision_text(&decision, explain)),
            Format::Json => print!("{}", render_decision_json(&decision)),
        },
    }
    Ok(match decision.kind {
        DecisionKind::Decided => Status::Ok,
        DecisionKind::MultiplePermissible | DecisionKind::Conflict => Status::Undecided,
    })
}

fn bases(command: BasesCommand, format: Format) -> Result<Status, Failure> {
    let registry = registry()?;
    match command {
        BasesCommand::List => match format {
            Format::Text => registry.names().for_each(|n| println!("{n}")),
            Format::Json => println!(
                "{}",
                serde_json::to_string_pretty(&registry.names().collect::<Vec<_>>()).unwrap()
            ),
        },
        BasesCommand::Show { name } => {
            let b = registry
                .get(&name)
                .ok_or_else(|| usage(format!("unknown base theory `{name}`")))?;
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(b).unwrap()),
                Format::Text => {
                    println!("name: {}", b.name);
                    println!("consequentiality: {}", b.consequentiality);
                    println!("mutability: {}", b.mutability);
                    match &b.fixed_patient_kinds {
                        Some(kinds) => println!(
                            "fixedPatientKinds: {}",
                            kinds
                                .iter()
                                .map(|k| k.as_str())
                                .collect::<Vec<_>>()
                                .join(" ")
                        ),
                        None => println!("fixedPatientKinds: (set by the instantiator)"),
                    }
                    println!(
                        "freeFields: {}",
                        b.free_fields
                            .iter()
                            .map(|f| f.as_str())
                            .collect::<Vec<_>>()
                            .join(" ")
                    );
                    println!("defaultPrinciples:");
                    for p in &b.default_principles {
                        println!("  {p}");
                    }
                }
            }
        }
    }
    Ok(Status::Ok)
}
