//! Command-line surface for the exact free-probability engine.
//!
//! Every command reads JSON inputs, writes exactly one JSON result document
//! to standard output, and reports machine-readable errors on standard
//! error. Exit codes: 0 success, 1 parse error, 2 domain error, 3 bound
//! error, 4 self-check or cross-route failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use dnfree::json::{
    cumulant_sequence_to_doc, distribution_to_doc, parse_cumulant_sequence, parse_distribution,
    parse_input, series_to_doc, to_json_string, JsonError, ParsedInput,
};
use dnfree::ncpart::{enumerate_noncrossing, mobius_full, NcError};
use dnfree::selfcheck::run_selfcheck;
use dnfree::series::SeriesError;
use dnfree::stardist::{
    check_freeness, classify_even, classify_r_diagonal, classify_semicircular,
    classify_semicircular_star, divide_free, ClassifyOutcome, StarError,
};
use dnfree::transforms::{
    cumulants_to_moments, free_add_convolve, free_mult_convolve, free_mult_convolve_all,
    moments_to_cumulants, s_transform, Distribution, MultMethod, TransformError,
};

const SCHEMA_VERSION: &str = "1";

#[derive(Parser)]
#[command(name = "dnfree", version, about = "Exact free-probability calculus over diagonal algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the noncrossing-partition lattice NC(n)
    Nc {
        /// Ground-set size
        #[arg(long)]
        n: usize,
        /// Emit one row per partition with its Kreweras complement and
        /// Möbius value
        #[arg(long)]
        table: bool,
    },
    /// Convert between moments and free cumulants
    Transform {
        /// Input JSON file
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// m2k: moments to cumulants; k2m: cumulants to moments
        #[arg(long, value_enum)]
        direction: Direction,
    },
    /// Free convolution of two distributions
    Convolve {
        /// add or mult
        #[arg(long, value_enum)]
        op: ConvOp,
        /// Multiplicative route; `all` cross-checks every route
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
        /// Input JSON files (exactly two)
        #[arg(long = "in", value_name = "FILE")]
        inputs: Vec<PathBuf>,
        /// Truncation order of the result; inputs must carry at least this
        /// many moments
        #[arg(long)]
        order: usize,
    },
    /// S-transform of a distribution with invertible mean
    Stransform {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Input truncation order; the series comes out one order lower
        #[arg(long)]
        order: usize,
    },
    /// Cumulant-pattern classifiers and the freeness check
    Classify {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        order: usize,
    },
    /// Split a distribution into n free identically-distributed parts
    Divide {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Number of parts
        #[arg(long)]
        n: usize,
    },
    /// Run the full invariant suite
    Selfcheck {
        /// Truncation order for the randomized checks
        #[arg(long)]
        order: usize,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum Direction {
    #[value(name = "m2k")]
    M2k,
    #[value(name = "k2m")]
    K2m,
}

#[derive(ValueEnum, Clone, Copy)]
enum ConvOp {
    Add,
    Mult,
}

#[derive(ValueEnum, Clone, Copy)]
enum MethodArg {
    #[value(name = "product-formula")]
    ProductFormula,
    Boxed,
    #[value(name = "s-transform")]
    STransform,
    All,
}

#[derive(ValueEnum, Clone, Copy)]
enum KindArg {
    Semicircular,
    Even,
    #[value(name = "r-diagonal")]
    RDiagonal,
    Free,
}

/// Error classes, in exit-code order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum ErrClass {
    Parse,
    Domain,
    Bounds,
}

impl ErrClass {
    fn exit_code(self) -> u8 {
        match self {
            ErrClass::Parse => 1,
            ErrClass::Domain => 2,
            ErrClass::Bounds => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ErrClass::Parse => "parse",
            ErrClass::Domain => "domain",
            ErrClass::Bounds => "bounds",
        }
    }
}

struct CliError {
    class: ErrClass,
    message: String,
}

impl CliError {
    fn parse(message: impl ToString) -> Self {
        CliError {
            class: ErrClass::Parse,
            message: message.to_string(),
        }
    }

    fn domain(message: impl ToString) -> Self {
        CliError {
            class: ErrClass::Domain,
            message: message.to_string(),
        }
    }

    fn bounds(message: impl ToString) -> Self {
        CliError {
            class: ErrClass::Bounds,
            message: message.to_string(),
        }
    }
}

fn class_of_nc(err: &NcError) -> ErrClass {
    match err {
        NcError::GroundSetBounds { .. } => ErrClass::Bounds,
        _ => ErrClass::Domain,
    }
}

fn class_of_series(err: &SeriesError) -> ErrClass {
    match err {
        SeriesError::Lattice(inner) => class_of_nc(inner),
        SeriesError::MissingCoefficient { .. } | SeriesError::DegreeOutOfRange { .. } => {
            ErrClass::Bounds
        }
        _ => ErrClass::Domain,
    }
}

fn class_of_transform(err: &TransformError) -> ErrClass {
    match err {
        TransformError::Lattice(inner) => class_of_nc(inner),
        TransformError::Series(inner) => class_of_series(inner),
        TransformError::OrderTooSmall { .. } => ErrClass::Bounds,
        _ => ErrClass::Domain,
    }
}

fn class_of_star(err: &StarError) -> ErrClass {
    match err {
        StarError::Lattice(inner) => class_of_nc(inner),
        StarError::Transform(inner) => class_of_transform(inner),
        StarError::OrderTooSmall { .. } | StarError::WordTooLong { .. } => ErrClass::Bounds,
        _ => ErrClass::Domain,
    }
}

impl From<NcError> for CliError {
    fn from(err: NcError) -> Self {
        CliError {
            class: class_of_nc(&err),
            message: err.to_string(),
        }
    }
}

impl From<TransformError> for CliError {
    fn from(err: TransformError) -> Self {
        CliError {
            class: class_of_transform(&err),
            message: err.to_string(),
        }
    }
}

impl From<StarError> for CliError {
    fn from(err: StarError) -> Self {
        CliError {
            class: class_of_star(&err),
            message: err.to_string(),
        }
    }
}

impl From<JsonError> for CliError {
    fn from(err: JsonError) -> Self {
        CliError::parse(err)
    }
}

#[derive(Serialize)]
struct ResultDocument {
    schema_version: &'static str,
    command: Value,
    provenance: Value,
    payload: Value,
}

struct RunOutput {
    document: ResultDocument,
    exit_code: u8,
    stderr_note: Option<String>,
}

impl RunOutput {
    fn ok(document: ResultDocument) -> Self {
        RunOutput {
            document,
            exit_code: 0,
            stderr_note: None,
        }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|err| CliError::parse(format!("cannot read {}: {}", path.display(), err)))
}

fn read_distribution(path: &Path) -> Result<Distribution, CliError> {
    let text = read_input(path)?;
    parse_distribution(&text)
        .map_err(|err| CliError::parse(format!("{}: {}", path.display(), err)))
}

fn require_order(d: &Distribution, order: usize, path: &Path) -> Result<Distribution, CliError> {
    if order == 0 {
        return Err(CliError::bounds("--order must be at least 1"));
    }
    if d.order() < order {
        return Err(CliError::bounds(format!(
            "{} carries order {}, but --order {} was requested; no extrapolation",
            path.display(),
            d.order(),
            order
        )));
    }
    Ok(d.truncate(order)?)
}

fn classify_payload(kind: &str, outcome: &ClassifyOutcome) -> Value {
    json!({
        "kind": kind,
        "result": outcome.classification.name(),
        "detail": outcome.detail,
        "notices": outcome.notices,
    })
}

fn run(command: &Command) -> Result<RunOutput, CliError> {
    match command {
        Command::Nc { n, table } => {
            let partitions = enumerate_noncrossing(*n)?;
            let mut payload = json!({
                "n": n,
                "count": partitions.len(),
            });
            if *table {
                let rows: Vec<Value> = partitions
                    .iter()
                    .map(|pi| {
                        json!({
                            "partition": pi.to_string(),
                            "kreweras": pi.kreweras().to_string(),
                            "mobius": mobius_full(pi).to_string(),
                        })
                    })
                    .collect();
                payload["table"] = Value::Array(rows);
            }
            Ok(RunOutput::ok(ResultDocument {
                schema_version: SCHEMA_VERSION,
                command: json!({"verb": "nc", "n": n, "table": table}),
                provenance: json!({"method": "lattice-enumeration"}),
                payload,
            }))
        }
        Command::Transform { input, direction } => {
            let text = read_input(input)?;
            let (payload, method, direction_name) = match direction {
                Direction::M2k => {
                    let d = parse_distribution(&text)
                        .map_err(|err| CliError::parse(format!("{}: {}", input.display(), err)))?;
                    let k = moments_to_cumulants(&d)?;
                    (
                        json!({"cumulants": cumulant_sequence_to_doc(&k)}),
                        "mobius-inversion",
                        "m2k",
                    )
                }
                Direction::K2m => {
                    let k = parse_cumulant_sequence(&text)
                        .map_err(|err| CliError::parse(format!("{}: {}", input.display(), err)))?;
                    let d = cumulants_to_moments(&k)?;
                    (
                        json!({"distribution": distribution_to_doc(&d)}),
                        "partition-sum",
                        "k2m",
                    )
                }
            };
            Ok(RunOutput::ok(ResultDocument {
                schema_version: SCHEMA_VERSION,
                command: json!({
                    "verb": "transform",
                    "direction": direction_name,
                    "inputs": [input.display().to_string()],
                }),
                provenance: json!({"method": method}),
                payload,
            }))
        }
        Command::Convolve {
            op,
            method,
            inputs,
            order,
        } => {
            if inputs.len() != 2 {
                return Err(CliError::parse(format!(
                    "convolve needs exactly two --in files, got {}",
                    inputs.len()
                )));
            }
            let x = require_order(&read_distribution(&inputs[0])?, *order, &inputs[0])?;
            let y = require_order(&read_distribution(&inputs[1])?, *order, &inputs[1])?;
            let echo = json!({
                "verb": "convolve",
                "op": match op { ConvOp::Add => "add", ConvOp::Mult => "mult" },
                "order": order,
                "inputs": [inputs[0].display().to_string(), inputs[1].display().to_string()],
            });
            match op {
                ConvOp::Add => {
                    let sum = free_add_convolve(&x, &y)?;
                    Ok(RunOutput::ok(ResultDocument {
                        schema_version: SCHEMA_VERSION,
                        command: echo,
                        provenance: json!({"method": "cumulant-additivity"}),
                        payload: json!({"distribution": distribution_to_doc(&sum)}),
                    }))
                }
                ConvOp::Mult => {
                    let single = |m: MultMethod| -> Result<RunOutput, CliError> {
                        let product = free_mult_convolve(&x, &y, m)?;
                        Ok(RunOutput::ok(ResultDocument {
                            schema_version: SCHEMA_VERSION,
                            command: echo.clone(),
                            provenance: json!({"method": m.name()}),
                            payload: json!({"distribution": distribution_to_doc(&product)}),
                        }))
                    };
                    match method {
                        MethodArg::ProductFormula => single(MultMethod::ProductFormula),
                        MethodArg::Boxed => single(MultMethod::Boxed),
                        MethodArg::STransform => single(MultMethod::STransform),
                        MethodArg::All => {
                            let report = free_mult_convolve_all(&x, &y)?;
                            let document = ResultDocument {
                                schema_version: SCHEMA_VERSION,
                                command: echo,
                                provenance: json!({
                                    "method": "all",
                                    "routes": ["product-formula", "boxed", "s-transform"],
                                }),
                                payload: json!({
                                    "distribution": distribution_to_doc(report.distribution()),
                                    "agreement": report.agreement,
                                }),
                            };
                            if report.agreement {
                                Ok(RunOutput::ok(document))
                            } else {
                                // three independent routes disagreeing is an
                                // internal invariant failure, not a user error
                                Ok(RunOutput {
                                    document,
                                    exit_code: 4,
                                    stderr_note: Some(
                                        "multiplicative convolution routes disagree".to_string(),
                                    ),
                                })
                            }
                        }
                    }
                }
            }
        }
        Command::Stransform { input, order } => {
            let d = require_order(&read_distribution(input)?, *order, input)?;
            let series = s_transform(&d)?;
            Ok(RunOutput::ok(ResultDocument {
                schema_version: SCHEMA_VERSION,
                command: json!({
                    "verb": "stransform",
                    "order": order,
                    "inputs": [input.display().to_string()],
                }),
                provenance: json!({"method": "r-inverse-shift"}),
                payload: json!({"series": series_to_doc(&series)}),
            }))
        }
        Command::Classify { input, kind, order } => {
            let text = read_input(input)?;
            let parsed = parse_input(&text)
                .map_err(|err| CliError::parse(format!("{}: {}", input.display(), err)))?;
            let (kind_name, payload) = match (kind, parsed) {
                (KindArg::Semicircular, ParsedInput::Distribution(d)) => {
                    let outcome = classify_semicircular(&d, *order)?;
                    ("semicircular", classify_payload("semicircular", &outcome))
                }
                (KindArg::Semicircular, ParsedInput::Joint(j)) => {
                    let outcome = classify_semicircular_star(&j.joint, *order)?;
                    ("semicircular", classify_payload("semicircular", &outcome))
                }
                (KindArg::Even, ParsedInput::Distribution(d)) => {
                    let outcome = classify_even(&d, *order)?;
                    ("even", classify_payload("even", &outcome))
                }
                (KindArg::Even, ParsedInput::Joint(_)) => {
                    return Err(CliError::domain(
                        "classify --kind even expects a plain distribution, not a joint table",
                    ))
                }
                (KindArg::RDiagonal, ParsedInput::Joint(j)) => {
                    let outcome = classify_r_diagonal(&j.joint, *order)?;
                    ("r-diagonal", classify_payload("r-diagonal", &outcome))
                }
                (KindArg::RDiagonal, ParsedInput::Distribution(_)) => {
                    return Err(CliError::domain(
                        "classify --kind r-diagonal needs a one-variable star table",
                    ))
                }
                (KindArg::Free, ParsedInput::Joint(j)) => {
                    if j.joint.n_vars() < 2 {
                        return Err(CliError::domain(
                            "classify --kind free needs a joint table with two variables",
                        ));
                    }
                    let report = check_freeness(&j.joint, (0, 1), *order)?;
                    let mut payload = json!({
                        "kind": "free",
                        "result": if report.free { "holds" } else { "fails" },
                    });
                    if let Some((word, cumulant)) = &report.witness {
                        payload["witness"] = json!({
                            "word": word.render(&j.var_names),
                            "cumulant": cumulant
                                .entries()
                                .iter()
                                .map(|r| r.to_string())
                                .collect::<Vec<_>>(),
                        });
                    }
                    ("free", payload)
                }
                (KindArg::Free, ParsedInput::Distribution(_)) => {
                    return Err(CliError::domain(
                        "classify --kind free needs a joint table with two variables",
                    ))
                }
            };
            Ok(RunOutput::ok(ResultDocument {
                schema_version: SCHEMA_VERSION,
                command: json!({
                    "verb": "classify",
                    "kind": kind_name,
                    "order": order,
                    "inputs": [input.display().to_string()],
                }),
                provenance: json!({"method": match kind {
                    KindArg::Free => "mixed-cumulant-scan",
                    _ => "cumulant-pattern",
                }}),
                payload,
            }))
        }
        Command::Divide { input, n } => {
            let d = read_distribution(input)?;
            let part = divide_free(&d, *n)?;
            Ok(RunOutput::ok(ResultDocument {
                schema_version: SCHEMA_VERSION,
                command: json!({
                    "verb": "divide",
                    "n": n,
                    "inputs": [input.display().to_string()],
                }),
                provenance: json!({"method": "cumulant-scaling"}),
                payload: json!({"distribution": distribution_to_doc(&part), "parts": n}),
            }))
        }
        Command::Selfcheck { order } => {
            if *order == 0 {
                return Err(CliError::bounds("--order must be at least 1"));
            }
            let report = run_selfcheck(*order);
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
                .collect();
            let all_passed = report.all_passed();
            let document = ResultDocument {
                schema_version: SCHEMA_VERSION,
                command: json!({"verb": "selfcheck", "order": order}),
                provenance: json!({"method": "invariant-suite"}),
                payload: json!({
                    "order": report.order,
                    "passed": report.passed(),
                    "failed": report.failed(),
                    "checks": checks,
                }),
            };
            Ok(RunOutput {
                document,
                exit_code: if all_passed { 0 } else { 4 },
                stderr_note: (!all_passed)
                    .then(|| format!("{} selfcheck invariant(s) failed", report.failed())),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{}", err);
                return ExitCode::SUCCESS;
            }
            let message = err.to_string();
            eprintln!(
                "{}",
                serde_json::to_string(&json!({
                    "error": {"class": "parse", "message": message}
                }))
                .expect("error document serializes")
            );
            return ExitCode::from(1);
        }
    };
    match run(&cli.command) {
        Ok(output) => {
            print!("{}", to_json_string(&output.document));
            if let Some(note) = output.stderr_note {
                eprintln!(
                    "{}",
                    serde_json::to_string(&json!({
                        "error": {"class": "selfcheck", "message": note}
                    }))
                    .expect("error document serializes")
                );
            }
            ExitCode::from(output.exit_code)
        }
        Err(err) => {
            eprintln!(
                "{}",
                serde_json::to_string(&json!({
                    "error": {"class": err.class.name(), "message": err.message}
                }))
                .expect("error document serializes")
            );
            ExitCode::from(err.class.exit_code())
        }
    }
}
