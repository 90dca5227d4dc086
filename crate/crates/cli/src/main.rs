//! Command-line front end: parse a signature and a bivector expression, run
//! the analysis/decomposition/rotor pipelines or the randomized verification
//! suites, and emit either human-readable tables or versioned JSON.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 unsupported input
//! (Jordanesque bivectors, zero divisors, π-boundary rotors), 3 parse error.

mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bivector_spectra::cayley_hamilton::ChError;
use bivector_spectra::decomp::{self, DecompError};
use bivector_spectra::ga_core::{GaError, Multivector, Signature, Tolerance};
use bivector_spectra::oracle::{self, OracleError};
use bivector_spectra::rotor_cayley::{self, ExpMethod, RotorError};
use bivector_spectra::spectral::{self, SpectralConfig, SpectralData, SpectralError};
use bivector_spectra::verify::{self, Suite};

use report::{AnalysisReport, ErrorBody, ErrorReport, RotorReport, SuiteReport, VerifyReport};

const EXIT_OK: i32 = 0;
const EXIT_NUMERICAL: i32 = 1;
const EXIT_UNSUPPORTED: i32 = 2;
const EXIT_PARSE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "bivector-spectra",
    version,
    about = "Spectra, invariant decompositions and rotors of bivectors in R_{p,q,r}"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// W ladder, characteristic polynomial, spectrum and classification.
    Analyze(ExprArgs),
    /// Invariant decomposition into commuting simple bivectors.
    Decompose(ExprArgs),
    /// Rotor synthesis from a bivector generator.
    Rotor(RotorArgs),
    /// Randomized verification suites (deterministic under --seed).
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ExprArgs {
    /// Signature `p,q,r` (the degenerate count r may be omitted).
    #[arg(long)]
    sig: String,
    /// Bivector expression, e.g. "e12 + 2*e34".
    expr: Option<String>,
    /// Expression as a flag (alternative to the positional argument).
    #[arg(long = "expr", value_name = "EXPR", conflicts_with = "expr")]
    expr_flag: Option<String>,
    /// Emit the machine-readable JSON report.
    #[arg(long)]
    json: bool,
    /// Relative tolerance override (absolute floor stays at 1e-13).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct RotorArgs {
    #[command(flatten)]
    expr: ExprArgs,
    /// Rotor construction: the exponential or the Cayley transform.
    #[arg(long, value_enum, default_value_t = RotorMethod::Exp)]
    method: RotorMethod,
}

#[derive(Clone, Copy, ValueEnum)]
enum RotorMethod {
    Exp,
    Cayley,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which battery to run: ch | simplicial | spectral | all.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Sample count (the simplicial suite reads it per signature).
    #[arg(long)]
    count: Option<usize>,
    /// Largest p+q (ch, spectral) or n (simplicial) to sample.
    #[arg(long)]
    max_dim: Option<usize>,
    #[arg(long)]
    json: bool,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_PARSE,
            };
            let _ = err.print();
            return code;
        }
    };
    match cli.command {
        Command::Analyze(args) => expr_command(&args, None),
        Command::Decompose(args) => expr_command(&args, Some(Action::Decompose)),
        Command::Rotor(args) => expr_command(&args.expr, Some(Action::Rotor(args.method))),
        Command::Verify(args) => cmd_verify(&args),
    }
}

enum Action {
    Decompose,
    Rotor(RotorMethod),
}

fn expr_command(args: &ExprArgs, action: Option<Action>) -> i32 {
    let result = (|| -> Result<(AnalysisReport, Signature), Failure> {
        let (sig, b, config) = parse_input(args)?;
        let report = match &action {
            None => cmd_analyze(sig, &b, &config)?,
            Some(Action::Decompose) => cmd_decompose(sig, &b, &config)?,
            Some(Action::Rotor(method)) => cmd_rotor(sig, &b, &config, *method)?,
        };
        Ok((report, sig))
    })();
    match result {
        Ok((analysis, sig)) => {
            if args.json {
                println!("{}", report::to_json(&analysis));
            } else {
                print!("{}", report::render_analysis_table(&analysis, sig));
            }
            EXIT_OK
        }
        Err(failure) => failure.emit(args.json),
    }
}

fn parse_input(args: &ExprArgs) -> Result<(Signature, Multivector, SpectralConfig), Failure> {
    let sig: Signature = args.sig.parse().map_err(Failure::from_ga)?;
    let expr = match (&args.expr, &args.expr_flag) {
        (Some(e), None) | (None, Some(e)) => e.clone(),
        _ => {
            return Err(Failure {
                exit: EXIT_PARSE,
                code: "parse_error",
                message: "provide exactly one expression (positional or --expr)".into(),
            })
        }
    };
    let b = bivector_spectra::parse_multivector(&expr, sig).map_err(Failure::from_ga)?;
    let mut config = SpectralConfig::default();
    if let Some(rel) = args.tol {
        config.tol = Tolerance::new(rel, 1e-13);
    }
    Ok((sig, b, config))
}

/// Ladder, polynomial, spectrum, classification; warns (without failing)
/// when the adjoint action is Jordan-defective.
fn cmd_analyze(
    sig: Signature,
    b: &Multivector,
    config: &SpectralConfig,
) -> Result<AnalysisReport, Failure> {
    let data = spectral::spectrum_with(b, config)?;
    let mut out = report::empty_report("analyze", sig, b);
    report::spectral_section(&mut out, &data);
    if let Some(warning) = jordanesque_warning(b, &data) {
        out.warnings.push(warning);
    }
    Ok(out)
}

fn cmd_decompose(
    sig: Signature,
    b: &Multivector,
    config: &SpectralConfig,
) -> Result<AnalysisReport, Failure> {
    let data = spectral::spectrum_with(b, config)?;
    let decomposition = decomp::decompose_from_spectrum(b, &data)?;
    let mut out = report::empty_report("decompose", sig, b);
    report::spectral_section(&mut out, &data);
    out.residuals
        .insert("decomposition_sum".into(), decomposition.residual);
    out.decomposition = Some(report::decomposition_section(&decomposition));
    Ok(out)
}

fn cmd_rotor(
    sig: Signature,
    b: &Multivector,
    config: &SpectralConfig,
    method: RotorMethod,
) -> Result<AnalysisReport, Failure> {
    let data = spectral::spectrum_with(b, config)?;
    let mut out = report::empty_report("rotor", sig, b);
    report::spectral_section(&mut out, &data);
    let (rotor, method_label) = match method {
        RotorMethod::Exp => {
            let exp = rotor_cayley::exp_bivector(b)?;
            let label = match exp.method {
                ExpMethod::Factored { parts } => {
                    format!("exp: product of {parts} commuting simple factor(s)")
                }
                ExpMethod::Series => "exp: series fallback (no real decomposition)".to_string(),
            };
            (exp.rotor, label)
        }
        RotorMethod::Cayley => (rotor_cayley::cayley(b)?, "cayley".to_string()),
    };
    out.residuals
        .insert("rotor_unit".into(), rotor.unit_residual());
    let mut tangent_echo = String::from("(undefined at the pi-rotation boundary)");
    let mut scalar_part = f64::NAN;
    match rotor_cayley::tangent_decomposition(&rotor) {
        Ok((s, t)) => {
            scalar_part = s;
            tangent_echo = t.to_string();
            if let Ok(reconstructed) = spectral::outer_exp(&t) {
                let residual = (&reconstructed * s).distance(&rotor.value);
                out.residuals.insert("tangent_identity".into(), residual);
            }
        }
        Err(RotorError::PiBoundary) => {
            out.warnings.push(
                "rotor scalar part vanishes; tangent decomposition undefined (pi boundary)"
                    .to_string(),
            );
        }
        Err(other) => return Err(other.into()),
    }
    out.rotor = Some(RotorReport {
        method: method_label,
        value: rotor.value.to_string(),
        unit_residual: rotor.unit_residual(),
        scalar_part,
        tangent: tangent_echo,
    });
    Ok(out)
}

fn jordanesque_warning(b: &Multivector, data: &SpectralData) -> Option<String> {
    let a = oracle::adjoint_matrix(b).ok()?;
    for pair in data.nonzero_pairs() {
        let found = oracle::eigenvectors_for(&a, pair.mu).ok()?.len();
        if found < pair.multiplicity {
            return Some(format!(
                "Jordanesque: eigenvalue class mu = {} has {} eigenvector(s) for multiplicity {}; \
                 no decomposition into commuting simple bivectors exists",
                pair.mu, found, pair.multiplicity
            ));
        }
    }
    None
}

fn cmd_verify(args: &VerifyArgs) -> i32 {
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        match args.suite.parse::<Suite>() {
            Ok(s) => vec![s],
            Err(message) => {
                return Failure {
                    exit: EXIT_PARSE,
                    code: "parse_error",
                    message,
                }
                .emit(args.json)
            }
        }
    };
    let mut suite_reports = Vec::new();
    for suite in suites {
        let count = args.count.unwrap_or_else(|| suite.default_count());
        let max_dim = args.max_dim.unwrap_or_else(|| suite.default_max_dim());
        let records = suite.run(args.seed, count, max_dim);
        suite_reports.push(SuiteReport {
            suite: suite.name().to_string(),
            count,
            max_dim,
            pass: verify::all_pass(&records),
            records,
        });
    }
    let report = VerifyReport {
        schema: report::SCHEMA,
        command: "verify".to_string(),
        seed: args.seed,
        pass: suite_reports.iter().all(|s| s.pass),
        suites: suite_reports,
    };
    if args.json {
        println!("{}", report::to_json(&report));
    } else {
        print!("{}", report::render_verify_table(&report));
    }
    if report.pass {
        EXIT_OK
    } else {
        EXIT_NUMERICAL
    }
}

// ---- error classification ----

struct Failure {
    exit: i32,
    code: &'static str,
    message: String,
}

impl Failure {
    fn from_ga(err: GaError) -> Self {
        let (exit, code) = match &err {
            GaError::NonInvertible { .. } => (EXIT_UNSUPPORTED, "non_invertible"),
            _ => (EXIT_PARSE, "parse_error"),
        };
        Failure {
            exit,
            code,
            message: err.to_string(),
        }
    }

    fn emit(self, json: bool) -> i32 {
        if json {
            let body = ErrorReport {
                schema: report::SCHEMA,
                error: ErrorBody {
                    code: self.code.to_string(),
                    message: self.message.clone(),
                    paper_note: paper_note(self.code).to_string(),
                },
            };
            println!("{}", report::to_json(&body));
        } else {
            eprintln!("error [{}]: {}", self.code, self.message);
        }
        self.exit
    }
}

impl From<SpectralError> for Failure {
    fn from(err: SpectralError) -> Self {
        let message = err.to_string();
        let (exit, code) = match err {
            SpectralError::NonBivector => (EXIT_UNSUPPORTED, "non_bivector"),
            SpectralError::NonRealInput(_) => (EXIT_UNSUPPORTED, "non_real_input"),
            SpectralError::Ga(e) => return Failure::from_ga(e),
            SpectralError::Oracle(e) => return e.into(),
            SpectralError::InternalConsistency { .. }
            | SpectralError::RootResidual { .. }
            | SpectralError::OracleMismatch { .. } => (EXIT_NUMERICAL, "numerical_failure"),
        };
        Failure { exit, code, message }
    }
}

impl From<OracleError> for Failure {
    fn from(err: OracleError) -> Self {
        let message = err.to_string();
        let (exit, code) = match err {
            OracleError::NonBivector => (EXIT_UNSUPPORTED, "non_bivector"),
            OracleError::NonRealInput(_) => (EXIT_UNSUPPORTED, "non_real_input"),
            OracleError::Ga(e) => return Failure::from_ga(e),
            OracleError::NonConvergence { .. } | OracleError::ResidualTooLarge { .. } => {
                (EXIT_NUMERICAL, "numerical_failure")
            }
        };
        Failure { exit, code, message }
    }
}

impl From<DecompError> for Failure {
    fn from(err: DecompError) -> Self {
        let message = err.to_string();
        let (exit, code) = match err {
            DecompError::Jordanesque(_) => (EXIT_UNSUPPORTED, "jordanesque"),
            DecompError::RequiresEigenPairing { .. } => {
                (EXIT_UNSUPPORTED, "requires_eigen_pairing")
            }
            DecompError::NonInvertibleCos { .. } => (EXIT_UNSUPPORTED, "non_invertible"),
            DecompError::ComplexEigenvalue { .. } => (EXIT_UNSUPPORTED, "complex_eigenvalue"),
            DecompError::Unsupported(_) => (EXIT_UNSUPPORTED, "unsupported"),
            DecompError::NotReal { .. } | DecompError::NumericalFailure { .. } => {
                (EXIT_NUMERICAL, "numerical_failure")
            }
            DecompError::Ga(e) => return Failure::from_ga(e),
            DecompError::Spectral(e) => return e.into(),
            DecompError::Oracle(e) => return e.into(),
        };
        Failure { exit, code, message }
    }
}

impl From<RotorError> for Failure {
    fn from(err: RotorError) -> Self {
        let message = err.to_string();
        let (exit, code) = match err {
            RotorError::PiBoundary => (EXIT_UNSUPPORTED, "pi_boundary"),
            RotorError::LogUndefined(_) | RotorError::InvalidInput(_) => {
                (EXIT_UNSUPPORTED, "unsupported")
            }
            RotorError::NotSimple { .. }
            | RotorError::NotARotor { .. }
            | RotorError::NotAntiSelfReverse { .. }
            | RotorError::InternalConsistency { .. } => (EXIT_NUMERICAL, "numerical_failure"),
            RotorError::Decomp(e) => return e.into(),
            RotorError::Spectral(e) => return e.into(),
            RotorError::Oracle(e) => return e.into(),
            RotorError::Ga(e) => return Failure::from_ga(e),
        };
        Failure { exit, code, message }
    }
}

impl From<ChError> for Failure {
    fn from(err: ChError) -> Self {
        let message = err.to_string();
        let (exit, code) = match err {
            ChError::InvalidInput(_) | ChError::Unsupported(_) => {
                (EXIT_UNSUPPORTED, "unsupported")
            }
            ChError::Ga(e) => return Failure::from_ga(e),
            ChError::Spectral(e) => return e.into(),
        };
        Failure { exit, code, message }
    }
}

/// Supplementary context attached to every machine-readable error code.
fn paper_note(code: &str) -> &'static str {
    match code {
        "jordanesque" => {
            "the bivector has fewer eigenvectors than its effective dimension, so no \
             decomposition into commuting simple bivectors exists; such inputs are \
             detected and reported only"
        }
        "requires_eigen_pairing" => {
            "the outer-tangent formula needs all eigenvalue pairs distinct; repeated \
             pairs are handled by pairing eigenvectors v+ with partners v- such that \
             v+ . v- is nonzero"
        }
        "non_invertible" => {
            "the element is a zero divisor; for the outer cosine this happens exactly \
             when an eigenvalue pair repeats"
        }
        "complex_eigenvalue" => {
            "a squared eigenvalue is non-real, so the affected class has no real \
             simple part and the real decomposition does not exist"
        }
        "pi_boundary" => {
            "the rotor's scalar part vanishes, so the tangent decomposition \
             R = <R>0 * outer-exp(T) is undefined"
        }
        "non_bivector" => "this operation is defined for grade-2 inputs only",
        "non_real_input" => {
            "public entry points take real bivectors; complex ones arise only as \
             internal intermediates"
        }
        "unsupported" => "the input falls outside the supported constructions",
        "numerical_failure" => {
            "a residual exceeded its tolerance and the computation refused to return \
             an unverified result"
        }
        "parse_error" => {
            "expression grammar: term (('+'|'-') term)*, term = [coefficient['i']'*'] \
             blade | coefficient, blade = e<digits> or e<d>('_'<digits>)+"
        }
        _ => "",
    }
}
