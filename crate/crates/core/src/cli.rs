//! Command-line surface. Parsing lives here so the commands can be driven
//! in-process; `main.rs` only maps the outcome to stdout and an exit code.
//!
//! Exit codes: 0 success, 2 parse error, 3 precondition violation,
//! 4 search budget exhausted, 5 failed gallery assertion.

use std::fmt::Write as _;
use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::closure::{generated_subalgebra, ClosureAudit};
use crate::construct::{consistent_set, nilpotent_partner, split_diagonal, GeneratorCertificate};
use crate::error::Error;
use crate::field::{FieldSpec, Scalar};
use crate::gallery;
use crate::matrix::Matrix;

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_GALLERY: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    Example1,
    Example2,
    Lambda,
    Lambda12,
}

#[derive(Debug, Parser)]
#[command(
    name = "slgen",
    version,
    about = "Certified nilpotent generators of sl_n"
)]
pub struct Cli {
    /// Coefficient field: `q` or `fp:<p>`.
    #[arg(long, global = true)]
    pub field: Option<FieldSpec>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximum number of sampled scalings.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Run the pairwise bracket-closure audit on computed closures.
    #[arg(long, global = true)]
    pub audit: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a certified nilpotent partner for a nonzero nilpotent matrix.
    Partner { matrix: String },
    /// Decide whether two matrices generate sl_n.
    Verify { x: String, y: String },
    /// Compute the subalgebra generated by one or more matrices.
    Closure {
        #[arg(required = true)]
        matrices: Vec<String>,
    },
    /// Print a consistent set of size n.
    Consistent {
        #[arg(long)]
        n: usize,
    },
    /// Split a diagonal matrix into a rank-one nilpotent plus a nilpotent.
    Split { matrix: String },
    /// Run one of the worked examples.
    Examples {
        #[arg(value_enum)]
        name: ExampleName,
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated entries for example1.
        #[arg(long)]
        alphas: Option<String>,
    },
    /// Exhaustive search for a nilpotent partner of E_12 in sl_3(F_2).
    F2check,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_PARSE,
            Error::BudgetExhausted { .. } => EXIT_BUDGET,
            _ => EXIT_PRECONDITION,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Per-invocation settings shared by the commands.
#[derive(Debug, Clone, Copy)]
pub struct CliConfig {
    pub field: Option<FieldSpec>,
    pub seed: u64,
    pub budget: usize,
    pub format: Format,
    pub audit: bool,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            field: None,
            seed: 0,
            budget: crate::construct::DEFAULT_BUDGET,
            format: Format::Json,
            audit: false,
        }
    }
}

impl CliConfig {
    fn field(&self) -> FieldSpec {
        self.field.unwrap_or(FieldSpec::RATIONALS)
    }
}

pub fn parse_matrix(text: &str) -> Result<Matrix, CliError> {
    serde_json::from_str(text).map_err(|e| CliError {
        code: EXIT_PARSE,
        message: format!("cannot parse matrix: {e}"),
    })
}

/// Reads a matrix file; `-` reads standard input.
pub fn read_matrix(path: &str, cfg: &CliConfig) -> Result<Matrix, CliError> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| CliError {
        code: EXIT_PARSE,
        message: format!("cannot read {path}: {e}"),
    })?;
    let m = parse_matrix(&text)?;
    if let Some(f) = cfg.field {
        if f != m.field() {
            return Err(Error::FieldMismatch(f.to_string(), m.field().to_string()).into());
        }
    }
    Ok(m)
}

/// Runs the partner pipeline and re-verifies the certificate from scratch.
pub fn cmd_partner(x: &Matrix, cfg: &CliConfig) -> Result<GeneratorCertificate, CliError> {
    let mut cert = nilpotent_partner(x, cfg.seed, cfg.budget)?;
    cert.verified = cert.verified && cert.reverify()?;
    Ok(cert)
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub n: usize,
    pub field: FieldSpec,
    pub closure_dim: usize,
    pub generates: bool,
    pub x_nilpotent: bool,
    pub y_nilpotent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<ClosureAudit>,
}

pub fn cmd_verify(x: &Matrix, y: &Matrix, cfg: &CliConfig) -> Result<Verdict, CliError> {
    let cl = generated_subalgebra(&[x.clone(), y.clone()])?;
    Ok(Verdict {
        n: x.n(),
        field: x.field(),
        closure_dim: cl.dim,
        generates: cl.is_sln(),
        x_nilpotent: x.is_nilpotent(),
        y_nilpotent: y.is_nilpotent(),
        audit: cfg.audit.then(|| cl.audit()),
    })
}

fn render<T: Serialize>(value: &T, text: impl FnOnce() -> String, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializable") + "\n",
        Format::Text => text(),
    }
}

fn scalars(v: &[Scalar]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn parse_alphas(s: &str, field: FieldSpec) -> Result<Vec<Scalar>, CliError> {
    Ok(s.split(',')
        .map(|t| field.parse_scalar(t))
        .collect::<Result<Vec<_>, _>>()?)
}

fn gallery_outcome(stdout: String, holds: bool) -> Outcome {
    Outcome {
        stdout,
        stderr: if holds {
            String::new()
        } else {
            "gallery assertion failed\n".into()
        },
        code: if holds { 0 } else { EXIT_GALLERY },
    }
}

fn ok(stdout: String) -> Outcome {
    Outcome {
        stdout,
        stderr: String::new(),
        code: 0,
    }
}

pub fn cmd_examples(
    name: ExampleName,
    n: Option<usize>,
    alphas: Option<&str>,
    cfg: &CliConfig,
) -> Result<Outcome, CliError> {
    let field = cfg.field();
    let f = cfg.format;
    Ok(match name {
        ExampleName::Example1 => {
            let alphas = match alphas {
                Some(s) => parse_alphas(s, field)?,
                None => gallery::default_example1_alphas(n.unwrap_or(3), field, cfg.seed)?,
            };
            let d = gallery::example1_pair(&alphas)?;
            let text = || {
                format!(
                    "example1 n={} field={}\nalphas: {}\npartial sums: {}\n[A, B] = diag(alphas): {}\nclosure dim: {} of {}\ngenerates: {}\n",
                    d.n,
                    d.field,
                    scalars(&d.alphas),
                    scalars(&d.partial_sums),
                    d.bracket_is_diag_alphas,
                    d.closure_dim,
                    d.n * d.n - 1,
                    d.generates
                )
            };
            gallery_outcome(render(&d, text, f), d.holds())
        }
        ExampleName::Example2 => {
            let d = gallery::example2_pair(n.unwrap_or(3), field)?;
            let text = || {
                format!(
                    "example2 n={} field={}\nclosure dim: {} of {}\ngenerates: {}\n",
                    d.n,
                    d.field,
                    d.closure_dim,
                    d.n * d.n - 1,
                    d.generates
                )
            };
            gallery_outcome(render(&d, text, f), d.matches_parity())
        }
        ExampleName::Lambda => {
            let r = gallery::lambda_subalgebra(n.unwrap_or(4), field)?;
            let text = || {
                format!(
                    "lambda n={} field={}\ndim: {} (proper: {})\nbracket closed: {}\ncontains M: {}\ncontains N: {}\nclosure of (M, N): dim {}, inside lambda: {}\n",
                    r.n, r.field, r.lambda_dim, r.proper, r.bracket_closed, r.contains_m, r.contains_n, r.closure_dim, r.closure_in_lambda
                )
            };
            gallery_outcome(render(&r, text, f), r.holds())
        }
        ExampleName::Lambda12 => {
            let r = gallery::lambda12_check()?;
            let text = || {
                format!(
                    "lambda1: dim {}, closed {}, A1 {}, B {}\nlambda2: dim {}, closed {}, A2 {}, A3 {}, B {}\n",
                    r.lambda1_dim,
                    r.lambda1_closed,
                    r.a1_in_lambda1,
                    r.b_in_lambda1,
                    r.lambda2_dim,
                    r.lambda2_closed,
                    r.a2_in_lambda2,
                    r.a3_in_lambda2,
                    r.b_in_lambda2
                )
            };
            gallery_outcome(render(&r, text, f), r.holds())
        }
    })
}

pub fn cmd_f2check(cfg: &CliConfig) -> Result<Outcome, CliError> {
    let r = gallery::f2_counterexample()?;
    let value = json!({ "verdict": r.verdict(), "report": &r });
    let text = || {
        let mut s = format!("{}\n", r.verdict());
        let _ = writeln!(s, "candidates: {}", r.total_candidates);
        let _ = writeln!(
            s,
            "nilpotent: {} (by rank {:?})",
            r.nilpotent_count, r.nilpotent_by_rank
        );
        let _ = writeln!(s, "closure dims with E_12: {:?}", r.closure_dims);
        let _ = writeln!(
            s,
            "rank-one candidates with corner entry: {} ({} persymmetric, {} antidiagonal pairs), generating: {}",
            r.rank_two.corner_candidates, r.rank_two.persymmetric, r.rank_two.antidiagonal_pairs, r.rank_two.generating
        );
        s
    };
    Ok(gallery_outcome(render(&value, text, cfg.format), r.holds()))
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = CliConfig {
        field: cli.field,
        seed: cli.seed,
        budget: cli.budget as usize,
        format: cli.format,
        audit: cli.audit,
    };
    let f = cfg.format;
    match &cli.command {
        Command::Partner { matrix } => {
            let x = read_matrix(matrix, &cfg)?;
            let cert = cmd_partner(&x, &cfg)?;
            let text = || {
                format!(
                    "x:\n{}y:\n{}closure dim: {} of {}\nnilpotent: x {}, y {}\nalphas: {}\nverified: {}\n",
                    cert.x,
                    cert.y,
                    cert.closure_dim,
                    cert.n * cert.n - 1,
                    cert.x_nilpotent,
                    cert.y_nilpotent,
                    scalars(&cert.provenance.alphas),
                    cert.verified
                )
            };
            let mut out = ok(render(&cert, text, f));
            if cert.provenance.existence_not_guaranteed {
                out.stderr = format!(
                    "warning: {} is a finite field; partner existence is not guaranteed there\n",
                    cert.field
                );
            }
            if !cert.verified {
                out.code = 1;
            }
            Ok(out)
        }
        Command::Verify { x, y } => {
            let (x, y) = (read_matrix(x, &cfg)?, read_matrix(y, &cfg)?);
            let v = cmd_verify(&x, &y, &cfg)?;
            let text = || {
                format!(
                    "closure dim: {}\ngenerates: {}\n",
                    v.closure_dim, v.generates
                )
            };
            Ok(ok(render(&v, text, f)))
        }
        Command::Closure { matrices } => {
            let gens = matrices
                .iter()
                .map(|p| read_matrix(p, &cfg))
                .collect::<Result<Vec<_>, _>>()?;
            let cl = generated_subalgebra(&gens)?;
            let audit = cfg.audit.then(|| cl.audit());
            let value = json!({
                "n": cl.n,
                "field": cl.field,
                "dim": cl.dim,
                "generates": cl.is_sln(),
                "basis": &cl.basis,
                "audit": audit,
            });
            let text = || {
                let mut s = format!("dim: {}\ngenerates: {}\n", cl.dim, cl.is_sln());
                for b in &cl.basis {
                    let _ = write!(s, "\n{b}");
                }
                s
            };
            let mut out = ok(render(&value, text, f));
            if audit.is_some_and(|a| !a.passed()) {
                out.code = 1;
            }
            Ok(out)
        }
        Command::Consistent { n } => {
            let s = consistent_set(*n, cfg.field(), Some(cfg.seed))?;
            let value = json!({ "field": s.field, "values": &s.values, "consistent": s.verify() });
            Ok(ok(render(
                &value,
                || format!("{}\n", scalars(&s.values)),
                f,
            )))
        }
        Command::Split { matrix } => {
            let c = read_matrix(matrix, &cfg)?;
            let s = split_diagonal(&c)?;
            let value = json!({ "a": &s.a, "b": &s.b });
            Ok(ok(render(&value, || format!("a:\n{}b:\n{}", s.a, s.b), f)))
        }
        Command::Examples { name, n, alphas } => cmd_examples(*name, *n, alphas.as_deref(), &cfg),
        Command::F2check => cmd_f2check(&cfg),
    }
}
