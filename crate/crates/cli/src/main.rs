//! `witt`: batch command-line access to witt-core with JSON in and out.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use witt_core::dual::{
    dual_comul, dual_mul, express_in_c, f_push_b, f_push_big_c, f_push_c, remark_report, subalgebra_rank, MonomialKey,
};
use witt_core::index::{TruncationSet, Window};
use witt_core::json;
use witt_core::series::witt_series_iso_check;
use witt_core::verify::{self, Mode};
use witt_core::witt::TableCache;
use witt_core::{ErrorClass, MultiIndex, Op, Ring, WittError};

const EXIT_MALFORMED: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "witt", version, about = "Exact Witt vectors, truncated power series and graded-dual computations")]
struct Cli {
    /// Write the result here instead of standard output (`-` is stdout).
    #[arg(long, global = true)]
    out: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Inputs {
    /// JSON payload: a file path, `-` for stdin, or inline JSON. Repeat for
    /// binary operations.
    #[arg(long = "in")]
    inputs: Vec<String>,
}

#[derive(Args, Clone)]
struct SetSpec {
    #[arg(long)]
    n: Option<usize>,

    /// Truncation set as a JSON array of indices, e.g. `[[1,0],[0,1]]`.
    #[arg(long = "S")]
    s: Option<String>,

    /// Use the nonzero part of the window of total degree at most d.
    #[arg(long = "window-deg")]
    window_deg: Option<u32>,

    /// Use the nonzero part of the box below `i,j,...`.
    #[arg(long = "window-box")]
    window_box: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Ghost components of a Witt vector.
    Ghost(Inputs),
    /// Witt vector with the given ghost components.
    Unghost(Inputs),
    /// Witt sum of two vectors.
    Add(Inputs),
    /// Witt product of two vectors.
    Mul(Inputs),
    /// Witt negation.
    Neg(Inputs),
    /// Universal polynomials for an operation on a truncation set.
    Universal {
        #[command(flatten)]
        set: SetSpec,
        #[arg(long)]
        op: String,
        /// Accepted for symmetry with other commands; tables are always over Z.
        #[arg(long)]
        ring: Option<String>,
    },
    /// Restrict a Witt vector to a smaller truncation set.
    Restrict {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        set: SetSpec,
    },
    /// Split a Witt vector into its zero-pattern blocks.
    Decompose(Inputs),
    /// Factor coordinates of a series with constant term 1.
    Factor(Inputs),
    /// Expand factor coordinates into a series.
    Expand(Inputs),
    /// Logarithm of a series over a Q-algebra.
    Log(Inputs),
    /// Exponential of a series with constant term 0.
    Exp(Inputs),
    /// Check that Witt addition matches series multiplication.
    IsoCheck(Inputs),
    /// Computations in the graded dual.
    #[command(subcommand)]
    Dual(DualCommand),
    /// Images under the map induced by t -> t_1 + ... + t_n.
    Fpush {
        /// One of `b`, `C`, `c`.
        #[arg(long)]
        op: String,
        /// Index for `b`, e.g. `1,1`.
        #[arg(long)]
        key: Option<String>,
        /// Degree m for `C` and `c`.
        #[arg(long = "M")]
        m: Option<u32>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "Z")]
        ring: String,
    },
    /// Run the invariant suite.
    Verify {
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Subcommand)]
enum DualCommand {
    /// Product of two dual elements.
    Mul(Inputs),
    /// One bidegree component of the coproduct.
    Comul {
        #[command(flatten)]
        inputs: Inputs,
        /// Left multidegree, e.g. `1,0`.
        #[arg(long)]
        split: String,
    },
    /// Write a dual-basis element in terms of the C generators.
    Express {
        #[arg(long)]
        ring: String,
        /// Monomial key, e.g. `(1,1,1)` or `(1)+(1)`.
        #[arg(long)]
        key: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Rank of the C-monomials in one multidegree.
    Rank {
        #[arg(long)]
        ring: String,
        /// Multidegree, e.g. `1,1,1`.
        #[arg(long = "M")]
        m: String,
    },
    /// The degree-(1,1,1) report for the C generators in three variables.
    Remark {
        #[arg(long)]
        ring: String,
    },
}

/// A failure together with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<WittError> for Failure {
    fn from(e: WittError) -> Self {
        let code = match e.class() {
            ErrorClass::Malformed => EXIT_MALFORMED,
            ErrorClass::Domain => EXIT_DOMAIN,
            ErrorClass::Internal => EXIT_INTERNAL,
        };
        Failure { code, message: e.to_string() }
    }
}

fn malformed(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_MALFORMED, message: message.into() }
}

type Outcome = std::result::Result<(Value, u8), Failure>;

fn read_payload(arg: &str) -> std::result::Result<Value, Failure> {
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| malformed(format!("stdin: {e}")))?;
        s
    } else if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| malformed(format!("{arg}: {e}")))?
    };
    Ok(json::parse(&text)?)
}

fn payloads(inputs: &Inputs, expected: usize) -> std::result::Result<Vec<Value>, Failure> {
    if inputs.inputs.len() != expected {
        return Err(malformed(format!("expected {expected} --in payload(s), got {}", inputs.inputs.len())));
    }
    inputs.inputs.iter().map(|a| read_payload(a)).collect()
}

fn one(inputs: &Inputs) -> std::result::Result<Value, Failure> {
    Ok(payloads(inputs, 1)?.remove(0))
}

fn two(inputs: &Inputs) -> std::result::Result<(Value, Value), Failure> {
    let mut p = payloads(inputs, 2)?;
    let b = p.pop().expect("two payloads");
    Ok((p.pop().expect("two payloads"), b))
}

fn parse_index(s: &str) -> std::result::Result<MultiIndex, Failure> {
    Ok(MultiIndex::parse_key(s.trim().trim_start_matches('(').trim_end_matches(')'))?)
}

fn resolve_set(spec: &SetSpec, n_hint: Option<usize>) -> std::result::Result<TruncationSet, Failure> {
    let given = [spec.s.is_some(), spec.window_deg.is_some(), spec.window_box.is_some()].iter().filter(|&&b| b).count();
    if given != 1 {
        return Err(malformed("give exactly one of --S, --window-deg, --window-box"));
    }
    if let Some(b) = &spec.window_box {
        let bound = parse_index(b)?;
        if spec.n.is_some_and(|n| n != bound.dim()) {
            return Err(WittError::DimensionMismatch { expected: spec.n.unwrap_or(0), got: bound.dim() }.into());
        }
        return Ok(Window::boxed(&bound)?.truncation_set());
    }
    let n = spec.n.or(n_hint).ok_or_else(|| malformed("--n is required"))?;
    if let Some(d) = spec.window_deg {
        return Ok(Window::degree(n, d)?.truncation_set());
    }
    let value = json::parse(spec.s.as_deref().expect("checked above"))?;
    Ok(json::set_from_json(n, &value)?)
}

fn ok(v: Value) -> Outcome {
    Ok((v, 0))
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Ghost(i) => ok(json::ghost_to_json(&json::witt_from_json(&one(&i)?)?.ghost())),
        Command::Unghost(i) => ok(json::witt_to_json(&json::ghost_from_json(&one(&i)?)?.unghost()?)),
        Command::Add(i) => run_binary(Op::Add, &i),
        Command::Mul(i) => run_binary(Op::Mul, &i),
        Command::Neg(i) => ok(json::witt_to_json(&json::witt_from_json(&one(&i)?)?.neg()?)),
        Command::Universal { set, op, ring } => {
            if let Some(r) = ring {
                Ring::parse(&r)?;
            }
            let op = Op::parse(&op)?;
            let set = Arc::new(resolve_set(&set, None)?);
            ok(json::table_to_json(&*TableCache::global().get(&set, op)?))
        }
        Command::Restrict { inputs, set } => {
            let w = json::witt_from_json(&one(&inputs)?)?;
            let sub = Arc::new(resolve_set(&set, Some(w.set().dim()))?);
            ok(json::witt_to_json(&w.restrict(&sub)?))
        }
        Command::Decompose(i) => ok(json::decomposition_to_json(&json::witt_from_json(&one(&i)?)?.decompose()?)),
        Command::Factor(i) => ok(json::factor_to_json(&json::series_from_json(&one(&i)?)?.factorize())),
        Command::Expand(i) => ok(json::series_to_json(&json::factor_from_json(&one(&i)?)?.expand())),
        Command::Log(i) => ok(json::unnormalized_to_json(&json::series_from_json(&one(&i)?)?.log()?)),
        Command::Exp(i) => ok(json::series_to_json(&json::unnormalized_from_json(&one(&i)?)?.exp()?)),
        Command::IsoCheck(i) => {
            let (a, b) = two(&i)?;
            let holds = witt_series_iso_check(&json::witt_from_json(&a)?, &json::witt_from_json(&b)?)?;
            Ok((json!({"holds": holds}), if holds { 0 } else { EXIT_INTERNAL }))
        }
        Command::Dual(d) => run_dual(d),
        Command::Fpush { op, key, m, n, ring } => run_fpush(&op, key.as_deref(), m, n, &Ring::parse(&ring)?),
        Command::Verify { quick } => {
            let report = verify::run(if quick { Mode::Quick } else { Mode::Full });
            Ok((report.to_json(), if report.passed() { 0 } else { EXIT_INTERNAL }))
        }
    }
}

fn run_binary(op: Op, i: &Inputs) -> Outcome {
    let (a, b) = two(i)?;
    let (u, v) = (json::witt_from_json(&a)?, json::witt_from_json(&b)?);
    ok(json::witt_to_json(&u.op(op, Some(&v))?))
}

fn run_dual(d: DualCommand) -> Outcome {
    match d {
        DualCommand::Mul(i) => {
            let (a, b) = two(&i)?;
            ok(json::dual_to_json(&dual_mul(&json::dual_from_json(&a)?, &json::dual_from_json(&b)?)?))
        }
        DualCommand::Comul { inputs, split } => {
            let x = json::dual_from_json(&one(&inputs)?)?;
            ok(json::tensor_to_json(&dual_comul(&x, &parse_index(&split)?)?))
        }
        DualCommand::Express { ring, key, n } => {
            let ring = Ring::parse(&ring)?;
            let n = match n {
                Some(n) => n,
                None => key.split('+').next().map(|f| f.split(',').count()).unwrap_or(1),
            };
            let key = MonomialKey::parse_key(n, &key)?;
            ok(json::cexpr_to_json(&express_in_c(&ring, n, &key)?))
        }
        DualCommand::Rank { ring, m } => {
            let ring = Ring::parse(&ring)?;
            let d = parse_index(&m)?;
            let (rank, dimension) = subalgebra_rank(&ring, &d)?;
            ok(json!({"ring": ring.to_string(), "D": json::index_to_json(&d), "rank": rank, "dimension": dimension}))
        }
        DualCommand::Remark { ring } => ok(json::remark_to_json(&remark_report(&Ring::parse(&ring)?)?)),
    }
}

fn run_fpush(op: &str, key: Option<&str>, m: Option<u32>, n: Option<usize>, ring: &Ring) -> Outcome {
    match op {
        "b" => {
            let index = parse_index(key.ok_or_else(|| malformed("fpush --op b needs --key"))?)?;
            let (coeff, target) = f_push_b(ring, &index)?;
            let terms = json!({ format!("b{target}"): ring.render(&coeff) });
            ok(json!({"ring": ring.to_string(), "n": 1, "terms": terms}))
        }
        "C" | "c" => {
            let m = m.ok_or_else(|| malformed(format!("fpush --op {op} needs --M")))?;
            let n = n.ok_or_else(|| malformed(format!("fpush --op {op} needs --n")))?;
            if op == "C" {
                ok(json::cexpr_to_json(&f_push_big_c(ring, m, n)?))
            } else {
                ok(json::graded_dual_to_json(&f_push_c(ring, m, n)?))
            }
        }
        other => Err(malformed(format!("unknown fpush kind {other:?}; expected b, C or c"))),
    }
}

fn emit(out: Option<&str>, value: &Value) -> std::result::Result<(), Failure> {
    let text = format!("{}\n", json::to_canonical_string(value));
    match out {
        None | Some("-") => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush())
        }
        Some(path) => std::fs::write(PathBuf::from(path), text),
    }
    .map_err(|e| Failure { code: EXIT_INTERNAL, message: format!("writing output: {e}") })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache_dir = std::env::var_os("WITT_CACHE_DIR").map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".witt-cache"));
    TableCache::init_global(Some(cache_dir));

    let result = run(cli.command).and_then(|(value, code)| emit(cli.out.as_deref(), &value).map(|_| code));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("witt: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
