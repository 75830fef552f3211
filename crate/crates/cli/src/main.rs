use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qsmc::check::CheckList;
use qsmc::fixtures::{fixture_document, fixture_names};
use qsmc::report::{
    classify_spec, format_table, identity_checks, run_pipeline, validate_spec, Align, PipelineError, Which,
};
use qsmc::spec_file::{parse_spec, ManifoldSpec};
use qsmc::symmetry::TensorFamily;

const OK: u8 = 0;
const FAILED: u8 = 1;
const INPUT_ERROR: u8 = 2;

/// Exact verification of frame-presented almost paracontact manifolds and
/// their quarter-symmetric metric connection.
#[derive(Debug, Parser)]
#[command(name = "qsmc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the presentation (brackets, Jacobi, metric) and the paracontact axioms.
    Validate(SpecArgs),
    /// Run every computation and compare against the spec's claimed values.
    Report(SpecArgs),
    /// Pseudosymmetry verdict for one tensor of one connection.
    Classify {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum)]
        tensor: TensorArg,
        #[arg(long, value_enum)]
        connection: ConnectionArg,
    },
    /// Structure identities of the Levi-Civita connection and the relations
    /// between both curvatures.
    Identities(SpecArgs),
    /// Built-in fixtures.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Debug, clap::Args)]
struct SpecArgs {
    /// Built-in fixture name or path to a spec document.
    spec: String,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum FixturesAction {
    List,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TensorArg {
    Riemann,
    Ricci,
    Projective,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConnectionArg {
    Lc,
    Qsmc,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(match cli.command {
        Command::Validate(args) => with_spec(&args, |spec| validate(spec, args.format)),
        Command::Report(args) => with_spec(&args, |spec| report(spec, args.format)),
        Command::Classify { spec: args, tensor, connection } => {
            with_spec(&args, |spec| classify(spec, args.format, tensor, connection))
        }
        Command::Identities(args) => with_spec(&args, |spec| identities(spec, args.format)),
        Command::Fixtures { action: FixturesAction::List } => {
            for name in fixture_names() {
                println!("{name}");
            }
            OK
        }
    })
}

/// Fixture names take precedence over paths.
fn load(arg: &str) -> Result<ManifoldSpec, String> {
    let document = match fixture_document(arg) {
        Some(doc) => doc.to_string(),
        None if Path::new(arg).is_file() => std::fs::read_to_string(arg).map_err(|e| format!("{arg}: {e}"))?,
        None => {
            let names: Vec<_> = fixture_names().collect();
            return Err(format!("{arg}: no such file or built-in fixture (fixtures: {})", names.join(", ")));
        }
    };
    parse_spec(&document)
        .map_err(|errors| errors.0.iter().map(|e| format!("{arg}: {e}")).collect::<Vec<_>>().join("\n"))
}

fn with_spec(args: &SpecArgs, run: impl FnOnce(&ManifoldSpec) -> Result<u8, PipelineError>) -> u8 {
    let spec = match load(&args.spec) {
        Ok(spec) => spec,
        Err(message) => {
            eprintln!("error: {message}");
            return INPUT_ERROR;
        }
    };
    match run(&spec) {
        Ok(code) => code,
        Err(PipelineError::InvalidPresentation(checks)) => {
            match args.format {
                Format::Machine => {
                    print_json(&json!({"name": spec.name, "error": "invalid_presentation", "checks": checks}))
                }
                Format::Human => {
                    eprintln!("error: {}: invalid frame presentation, run aborted", spec.name);
                    print!("{}", check_table(&[("presentation", &checks)]));
                }
            }
            FAILED
        }
        Err(PipelineError::Compute(e)) => {
            eprintln!("error: {}: {e}", spec.name);
            INPUT_ERROR
        }
    }
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json values serialize"));
}

fn check_table(sections: &[(&str, &CheckList)]) -> String {
    let rows: Vec<Vec<String>> = sections
        .iter()
        .flat_map(|(section, list)| {
            list.checks.iter().map(move |c| {
                let witness = c.witness.as_ref().map(|w| {
                    let idx: Vec<String> = w.iter().map(ToString::to_string).collect();
                    format!("at ({})", idx.join(","))
                });
                let note = [witness, c.detail.clone()].into_iter().flatten().collect::<Vec<_>>().join(" ");
                vec![section.to_string(), c.name.clone(), if c.passed { "pass" } else { "FAIL" }.into(), note]
            })
        })
        .collect();
    format_table(&rows, Align::Left)
}

fn status(ok: bool) -> u8 {
    if ok {
        OK
    } else {
        FAILED
    }
}

fn validate(spec: &ManifoldSpec, format: Format) -> Result<u8, PipelineError> {
    let (presentation, paracontact) = validate_spec(spec)?;
    let ok = presentation.all_passed() && paracontact.all_passed();
    match format {
        Format::Machine => print_json(&json!({
            "name": spec.name,
            "passed": ok,
            "presentation": presentation,
            "paracontact": paracontact,
        })),
        Format::Human => {
            println!("{} (n = {})", spec.name, spec.dimension);
            print!("{}", check_table(&[("presentation", &presentation), ("paracontact", &paracontact)]));
            println!("{}", if ok { "valid" } else { "invalid" });
        }
    }
    Ok(status(ok))
}

fn report(spec: &ManifoldSpec, format: Format) -> Result<u8, PipelineError> {
    let r = run_pipeline(spec)?;
    match format {
        Format::Machine => print!("{}", r.render_machine()),
        Format::Human => print!("{}", r.render_human()),
    }
    Ok(u8::try_from(r.exit_code()).unwrap_or(FAILED))
}

fn classify(
    spec: &ManifoldSpec,
    format: Format,
    tensor: TensorArg,
    connection: ConnectionArg,
) -> Result<u8, PipelineError> {
    let family = match tensor {
        TensorArg::Riemann => TensorFamily::Riemann,
        TensorArg::Ricci => TensorFamily::Ricci,
        TensorArg::Projective => TensorFamily::Projective,
    };
    let which = match connection {
        ConnectionArg::Lc => Which::LeviCivita,
        ConnectionArg::Qsmc => Which::QuarterSymmetric,
    };
    let v = classify_spec(spec, family, which)?;
    match format {
        Format::Machine => {
            let section =
                |verdict: &qsmc::symmetry::Verdict<qsmc::Rational>| qsmc::report::VerdictSection::from(verdict);
            print_json(&json!({
                "name": spec.name,
                "tensor": family,
                "connection": which,
                "full": section(&v.full),
                "xi_slice": section(&v.xi_slice),
            }));
        }
        Format::Human => {
            println!("{}", v.full);
            println!("xi-slice: {}", v.xi_slice);
        }
    }
    Ok(status(v.full.condition_holds()))
}

fn identities(spec: &ManifoldSpec, format: Format) -> Result<u8, PipelineError> {
    let checks = identity_checks(spec)?;
    match format {
        Format::Machine => print_json(&json!({"name": spec.name, "passed": checks.all_passed(), "checks": checks})),
        Format::Human => print!("{}", check_table(&[("identity", &checks)])),
    }
    Ok(status(checks.all_passed()))
}
