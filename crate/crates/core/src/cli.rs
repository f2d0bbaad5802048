//! Command-line front end.
//!
//! Bundles are read as JSON (`{"torus", "A"}`, `{"torus", "matrix"}` or
//! `{"torus", "descriptor"}`) from `--input` or standard input. Results go
//! to standard output as JSON or, with `--format table`, as aligned text.
//! Exit status: 0 on success, 1 on a domain error, 2 on a usage error.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::classify::{self, BundleDescriptor};
use crate::cocycle::{self, EquivalenceWitness, FactorOfAutomorphy};
use crate::error::{Error, Result};
use crate::functors;
use crate::isogeny::{self, IsogenyContext};
use crate::jordan::jordan_block;
use crate::json::{BundleSpec, FactorWire, MatrixWire};
use crate::matrix::LaurentMatrix;
use crate::scalar::{format_complex, parse_complex, C64};
use crate::theta::{self, ThetaCharacteristic};
use crate::torus::Torus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(
    name = "automorphy",
    version,
    about = "Vector bundles on C*/<q> via factors of automorphy"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,

    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Bundle JSON file; standard input when absent or `-`.
    #[arg(long, short = 'i')]
    input: Option<PathBuf>,
}

fn complex(s: &str) -> std::result::Result<C64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normal form of the indecomposable bundle of rank r, degree d, parameter a.
    NormalForm {
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        tau: C64,
        #[arg(short = 'r', long)]
        rank: usize,
        #[arg(short = 'd', long, allow_negative_numbers = true)]
        degree: i64,
        #[arg(short = 'a', long, value_parser = complex, allow_hyphen_values = true, default_value = "1")]
        param: C64,
    },
    /// Jordan block A_r(a) as a degree-zero bundle.
    Deg0Form {
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        tau: C64,
        #[arg(short = 'r', long)]
        rank: usize,
        #[arg(short = 'a', long, value_parser = complex, allow_hyphen_values = true, default_value = "1")]
        param: C64,
    },
    /// Tensor product of two bundles on the same torus.
    Tensor {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Symmetric power.
    Sym {
        #[arg(short = 'n', long)]
        power: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Exterior power.
    Wedge {
        #[arg(short = 'k', long)]
        power: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Dual bundle.
    Dual {
        #[command(flatten)]
        input: Input,
    },
    /// Pullback to the r-fold cover.
    Pullback {
        #[arg(short = 'r', long)]
        degree: u32,
        #[command(flatten)]
        input: Input,
    },
    /// Pushforward from the r-fold cover; the input torus is the cover.
    Pushforward {
        #[arg(short = 'r', long)]
        degree: u32,
        #[command(flatten)]
        input: Input,
    },
    /// Pullback of the pushforward, compared with its predicted diagonal blocks.
    Roundtrip {
        #[arg(short = 'r', long)]
        degree: u32,
        #[command(flatten)]
        input: Input,
    },
    /// The cocycle A(m, u).
    Iterate {
        #[arg(short = 'm', long, allow_negative_numbers = true)]
        steps: i64,
        #[command(flatten)]
        input: Input,
    },
    /// Degree from the winding number of the determinant.
    Degree {
        #[command(flatten)]
        input: Input,
    },
    /// Rank.
    Rank {
        #[command(flatten)]
        input: Input,
    },
    /// Descriptor of a degree-zero Jordan-block bundle.
    Recognize {
        #[command(flatten)]
        input: Input,
    },
    /// Triviality test for constant line bundles and [[1, a(u)], [0, 1]].
    TrivialCheck {
        #[arg(long, default_value_t = 10)]
        nu_range: u32,
        #[command(flatten)]
        input: Input,
    },
    /// Decomposition of F_p ⊗ F_q, with the Jordan type of A_p(1) ⊗ A_q(1).
    CgTable {
        #[arg(short = 'p')]
        p: usize,
        #[arg(short = 'q')]
        q: usize,
    },
    /// Quasi-periodicity check of a theta function with characteristic a tau + b.
    ThetaCheck {
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        tau: C64,
        #[arg(short = 'a', long, default_value_t = 0.0, allow_negative_numbers = true)]
        char_a: f64,
        #[arg(short = 'b', long, default_value_t = 0.0, allow_negative_numbers = true)]
        char_b: f64,
        #[arg(long, default_value_t = theta::DEFAULT_TERMS)]
        terms: u32,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Checks A(u) B(u) = B(q u) A'(u) for a witness matrix B.
    VerifyWitness {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Matrix JSON of the witness.
        #[arg(long)]
        witness: PathBuf,
    },
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit status.
pub fn run<I, T>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    match execute(&cli, stdin) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => out.to_json(),
                Format::Table => out.to_table(),
            };
            let _ = writeln!(stdout, "{text}");
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

enum Output {
    Factor(FactorOfAutomorphy),
    Factors(Vec<FactorOfAutomorphy>, Value),
    Fields(Value),
}

fn factor_value(f: &FactorOfAutomorphy) -> Value {
    serde_json::to_value(FactorWire::from(f)).expect("finite coefficients serialize")
}

fn factor_table(f: &FactorOfAutomorphy) -> String {
    format!(
        "tau = {}\nrank = {}\n{}",
        format_complex(f.torus().tau()),
        f.rank(),
        f.generator().to_string().trim_end()
    )
}

fn value_table(v: &Value) -> String {
    match v {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            map.iter()
                .map(|(k, v)| format!("{k:<width$}  {}", scalar_text(v)))
                .collect::<Vec<_>>()
                .join("\n")
        }
        other => scalar_text(other),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

impl Output {
    fn to_json(&self) -> String {
        match self {
            Output::Factor(f) => factor_value(f).to_string(),
            Output::Factors(fs, extra) => {
                let mut v = extra.clone();
                v["blocks"] = Value::Array(fs.iter().map(factor_value).collect());
                v.to_string()
            }
            Output::Fields(v) => v.to_string(),
        }
    }

    fn to_table(&self) -> String {
        match self {
            Output::Factor(f) => factor_table(f),
            Output::Factors(fs, extra) => {
                let mut parts = vec![value_table(extra)];
                for (i, f) in fs.iter().enumerate() {
                    parts.push(format!("block {i}\n{}", factor_table(f)));
                }
                parts.join("\n\n")
            }
            Output::Fields(v) => value_table(v),
        }
    }
}

fn read_source(path: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| Error::Parse(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| Error::Parse(format!("cannot read standard input: {e}")))?;
            Ok(s)
        }
    }
}

fn load(input: &Input, stdin: &mut dyn Read) -> Result<FactorOfAutomorphy> {
    BundleSpec::parse(&read_source(input.input.as_ref(), stdin)?)?.factor()
}

fn load_path(path: &PathBuf, stdin: &mut dyn Read) -> Result<FactorOfAutomorphy> {
    BundleSpec::parse(&read_source(Some(path), stdin)?)?.factor()
}

/// The context whose cover is the torus of `f`.
fn context_below(f: &FactorOfAutomorphy, r: u32) -> Result<IsogenyContext> {
    if r == 0 {
        return Err(Error::Domain("covering degree must be positive".into()));
    }
    IsogenyContext::new(Torus::new(f.torus().tau() / r as f64)?, r)
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Output> {
    Ok(match &cli.command {
        Command::NormalForm {
            tau,
            rank,
            degree,
            param,
        } => Output::Factor(classify::normal_form(&Torus::new(*tau)?, *rank, *degree, *param)?),
        Command::Deg0Form { tau, rank, param } => {
            Output::Factor(classify::normal_form_deg0(&Torus::new(*tau)?, *rank, *param)?)
        }
        Command::Tensor { left, right } => {
            Output::Factor(functors::tensor(&load_path(left, stdin)?, &load_path(right, stdin)?)?)
        }
        Command::Sym { power, input } => Output::Factor(functors::sym_power(&load(input, stdin)?, *power)?),
        Command::Wedge { power, input } => Output::Factor(functors::wedge_power(&load(input, stdin)?, *power)?),
        Command::Dual { input } => Output::Factor(functors::dual(&load(input, stdin)?)?),
        Command::Pullback { degree, input } => {
            let f = load(input, stdin)?;
            let ctx = IsogenyContext::new(*f.torus(), *degree)?;
            Output::Factor(isogeny::pullback(&ctx, &f)?)
        }
        Command::Pushforward { degree, input } => {
            let f = load(input, stdin)?;
            let ctx = context_below(&f, *degree)?;
            Output::Factor(isogeny::pushforward(&ctx, &f)?)
        }
        Command::Roundtrip { degree, input } => {
            let f = load(input, stdin)?;
            let ctx = context_below(&f, *degree)?;
            let back = isogeny::pullback(&ctx, &isogeny::pushforward(&ctx, &f)?)?;
            let blocks = isogeny::roundtrip_diag(&ctx, &f)?;
            let gens: Vec<LaurentMatrix> = blocks.iter().map(|b| b.generator().clone()).collect();
            let residual = back.generator().relative_residual(&LaurentMatrix::block_diag(&gens)?)?;
            let extra = json!({ "residual": residual, "holds": residual <= cocycle::IDENTITY_TOL });
            Output::Factors(blocks, extra)
        }
        Command::Iterate { steps, input } => {
            let f = load(input, stdin)?;
            Output::Factor(FactorOfAutomorphy::new(*f.torus(), cocycle::iterate(&f, *steps)?)?)
        }
        Command::Degree { input } => Output::Fields(json!({ "degree": classify::degree(&load(input, stdin)?)? })),
        Command::Rank { input } => Output::Fields(json!({ "rank": classify::rank(&load(input, stdin)?) })),
        Command::Recognize { input } => {
            let d: Option<BundleDescriptor> = classify::recognize_deg0(&load(input, stdin)?)?;
            Output::Fields(json!({ "descriptor": d }))
        }
        Command::TrivialCheck { nu_range, input } => Output::Fields(trivial_check(&load(input, stdin)?, *nu_range)?),
        Command::CgTable { p, q } => {
            let indices = functors::clebsch_gordan_f(*p, *q)?;
            let one = C64::new(1.0, 0.0);
            let product = jordan_block(*p, one).kronecker(&jordan_block(*q, one));
            let jordan = cocycle::jordan_type_unipotent(&product, one)?;
            Output::Fields(json!({ "p": p, "q": q, "indices": indices, "jordan": jordan, "agree": indices == jordan }))
        }
        Command::ThetaCheck {
            tau,
            char_a,
            char_b,
            terms,
            samples,
        } => {
            let t = Torus::new(*tau)?;
            let xi = ThetaCharacteristic::new(*char_a, *char_b)?;
            let report = theta::verify_characteristic(&t, &xi, *terms, *samples, cli.seed);
            Output::Fields(serde_json::to_value(report).expect("report serializes"))
        }
        Command::VerifyWitness { left, right, witness } => {
            let f = load_path(left, stdin)?;
            let g = load_path(right, stdin)?;
            let text = read_source(Some(witness), stdin)?;
            let wire: MatrixWire = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let w = EquivalenceWitness::new(LaurentMatrix::try_from(&wire)?)?;
            Output::Fields(json!({ "holds": cocycle::check_witness(&f, &g, &w)? }))
        }
    })
}

fn trivial_check(f: &FactorOfAutomorphy, nu_range: u32) -> Result<Value> {
    if f.rank() == 1 && f.generator().as_constant().is_some() {
        let nu = cocycle::is_trivial_rank1_constant(f, nu_range)?;
        return Ok(json!({ "trivial": nu.is_some(), "nu": nu }));
    }
    let b = cocycle::is_trivial_unipotent2(f)?;
    let b = b.map(|p| {
        let m = LaurentMatrix::diagonal(vec![p]).expect("one entry");
        MatrixWire::from(&m).entries.swap_remove(0)
    });
    Ok(json!({ "trivial": b.is_some(), "b": b }))
}
