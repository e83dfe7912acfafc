//! Command-line front end. [`run`] takes the argument vector (program name
//! first) and returns the exit code with everything written to stdout and
//! stderr, so it can be driven from tests.
//!
//! Exit codes: 0 success, 1 hypothesis violation, 2 malformed input,
//! 3 internal consistency failure.

use std::io::Read;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::dmodule::rr_operator;
use crate::error::{Error, Result};
use crate::exact::rational::{parse, to_string};
use crate::exact::Rational;
use crate::golyshev::d3_family;
use crate::gwcalc::{counting_matrix, CountingMatrix, Evaluator, Insertion, InvariantKey};
use crate::iseries::{iseries, regularized};
use crate::json::{parse_rational_value, rational_value, rationals_value};
use crate::variety::{necessary_condition, parse_variety, Variety};

#[derive(Parser, Debug)]
#[command(
    name = "gwfano",
    version,
    about = "Exact Gromov-Witten data of Fano complete intersections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Variety JSON: a file path, `-` for stdin, or the JSON text itself.
    input: String,
    /// Truncation order in q.
    #[arg(long, default_value_t = 10)]
    order: usize,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Treat a failed necessary condition as an error.
    #[arg(long)]
    strict: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Index, dimension, degrees and the necessary condition.
    Check(Common),
    /// The I-series with the index-one correction applied.
    Iseries(Common),
    /// The regularized fundamental term.
    Regularized(Common),
    /// The Riemann-Roch type operator.
    Operator {
        #[command(flatten)]
        common: Common,
        /// Divide by the power of D equal to the codimension.
        #[arg(long)]
        reduced: bool,
    },
    /// Annihilation, closed form and index-one line vanishing.
    Verify(Common),
    /// One invariant, given as {"insertions":[{"a":0,"c":3},...],"d":1}.
    Invariant {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        key: String,
    },
    /// Counting matrix of a threefold.
    Matrix(Common),
    /// D3 operator of a threefold or of {"matrix": [[...], ...]}.
    D3 {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_lambda)]
        lambda: Option<Rational>,
    },
    /// Power series solution of the D3 operator in t = -1/z.
    #[command(name = "d3-solve")]
    D3Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_lambda, default_value = "0")]
        lambda: Rational,
    },
}

fn parse_lambda(s: &str) -> std::result::Result<Rational, String> {
    parse(s).map_err(|e| e.to_string())
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_hypothesis_violation() {
        1
    } else if e.is_internal() {
        3
    } else {
        2
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let mut out = Output::default();
    match dispatch(cli.command, &mut out) {
        Ok(code) => Outcome {
            code,
            stdout: out.stdout,
            stderr: out.stderr,
        },
        Err(e) => {
            out.stderr.push_str(&format!("error: {e}\n"));
            Outcome {
                code: exit_code(&e),
                stdout: out.stdout,
                stderr: out.stderr,
            }
        }
    }
}

#[derive(Default)]
struct Output {
    stdout: String,
    stderr: String,
}

impl Output {
    fn emit(&mut self, json_mode: bool, value: &Value, text: impl FnOnce() -> String) {
        if json_mode {
            self.stdout
                .push_str(&serde_json::to_string(value).expect("JSON values serialize"));
            self.stdout.push('\n');
        } else {
            self.stdout.push_str(&text());
            if !self.stdout.ends_with('\n') {
                self.stdout.push('\n');
            }
        }
    }

    fn warn(&mut self, msg: &str) {
        self.stderr.push_str(&format!("warning: {msg}\n"));
    }
}

fn read_input(input: &str) -> Result<String> {
    let trimmed = input.trim_start();
    if trimmed.starts_with('{') {
        return Ok(input.to_string());
    }
    if input == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Malformed(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(input).map_err(|e| Error::Malformed(format!("{input}: {e}")))
}

fn load_variety(c: &Common, out: &mut Output) -> Result<Variety> {
    let v = parse_variety(&read_input(&c.input)?)?;
    for w in v.warnings() {
        out.warn(&w);
    }
    Ok(v)
}

fn dispatch(cmd: Command, out: &mut Output) -> Result<i32> {
    match cmd {
        Command::Check(c) => check(&c, out),
        Command::Iseries(c) => {
            let v = load_variety(&c, out)?;
            let s = iseries(&v, c.order);
            let terms: Vec<Value> = s
                .corrected
                .coeffs()
                .iter()
                .enumerate()
                .map(|(d, cls)| json!({"d": d, "coeffs": rationals_value(cls.coeffs())}))
                .collect();
            let value = json!({"alpha": rational_value(&s.alpha), "terms": terms});
            out.emit(c.json, &value, || {
                let mut t = format!("alpha = {}\n", to_string(&s.alpha));
                for (d, cls) in s.corrected.coeffs().iter().enumerate() {
                    t.push_str(&format!("I_{d} = {cls}\n"));
                }
                t
            });
            Ok(0)
        }
        Command::Regularized(c) => {
            let v = load_variety(&c, out)?;
            let r = regularized(&v, c.order)?;
            let value = json!({"coeffs": rationals_value(&r.coeffs)});
            out.emit(c.json, &value, || {
                r.coeffs
                    .iter()
                    .map(to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            });
            Ok(0)
        }
        Command::Operator { common: c, reduced } => {
            let v = load_variety(&c, out)?;
            let mut op = rr_operator(&v);
            if reduced {
                op = op.left_divide_power_of_d(v.codim() as u32)?;
            }
            out.emit(c.json, &op.to_json(), || op.to_string());
            Ok(0)
        }
        Command::Verify(c) => verify(&c, out),
        Command::Invariant { common: c, key } => {
            let v = load_variety(&c, out)?;
            let key = parse_key(&key)?;
            let value = Evaluator::new(&v).evaluate(&key);
            let json_value = json!({"value": rational_value(&value)});
            out.emit(c.json, &json_value, || to_string(&value));
            Ok(0)
        }
        Command::Matrix(c) => {
            let v = load_variety(&c, out)?;
            let m = counting_matrix(&v)?;
            let nums = v.numerics()?;
            let value = json!({
                "deg": rational_value(&nums.anticanonical_degree),
                "index": nums.index,
                "matrix": matrix_value(&m),
            });
            out.emit(c.json, &value, || matrix_text(&m));
            Ok(0)
        }
        Command::D3 { common: c, lambda } => {
            let m = load_matrix(&c, out)?;
            let fam = d3_family(&m)?;
            match lambda {
                Some(lam) => {
                    let op = fam.at(&lam);
                    out.emit(c.json, &op.to_json(), || op.to_string());
                }
                None => out.emit(c.json, &fam.l.to_json(), || fam.l.to_string()),
            }
            Ok(0)
        }
        Command::D3Solve { common: c, lambda } => {
            let m = load_matrix(&c, out)?;
            let s = d3_family(&m)?.solve(&lambda, c.order)?;
            let value = json!({"lambda": rational_value(&lambda), "variable": "t=-1/z", "coeffs": rationals_value(s.coeffs())});
            out.emit(c.json, &value, || {
                s.coeffs()
                    .iter()
                    .map(to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            });
            Ok(0)
        }
    }
}

fn check(c: &Common, out: &mut Output) -> Result<i32> {
    let v = load_variety(c, out)?;
    let nums = v.numerics()?;
    let (condition, report) = match &v {
        Variety::Weighted(w) => {
            let r = necessary_condition(w);
            (
                Some(r.holds),
                serde_json::to_value(&r).expect("report serializes"),
            )
        }
        Variety::Toric(_) => (None, Value::String("not checked".into())),
    };
    let value = json!({
        "index": nums.index,
        "dim": nums.dim,
        "h_degree": rational_value(&nums.h_degree),
        "anticanonical_degree": rational_value(&nums.anticanonical_degree),
        "necessary_condition": report,
        "warnings": v.warnings(),
    });
    out.emit(c.json, &value, || {
        let cond = match condition {
            Some(b) => b.to_string(),
            None => "not checked".into(),
        };
        format!(
            "index {}\ndim {}\nH^n degree {}\nanticanonical degree {}\nnecessary condition {}",
            nums.index,
            nums.dim,
            to_string(&nums.h_degree),
            to_string(&nums.anticanonical_degree),
            cond
        )
    });
    if c.strict && condition == Some(false) {
        out.stderr.push_str("error: necessary condition fails\n");
        return Ok(1);
    }
    Ok(0)
}

fn verify(c: &Common, out: &mut Output) -> Result<i32> {
    let v = load_variety(c, out)?;
    // the closed-form comparison is built into `regularized`
    let reg = regularized(&v, c.order)?;
    let image = rr_operator(&v).apply(&reg.to_series())?;
    if !image.is_zero() {
        return Err(Error::InternalInconsistency(format!(
            "L[I] does not vanish: {image}"
        )));
    }
    let mut lines = vec![
        format!("L[I]=0 through q^{}", image.order()),
        "closed form matches".to_string(),
    ];
    let no_lines = if v.index() == 1 && c.order >= 1 {
        let i1 = iseries(&v, 1).corrected.coeff(1).coeff(0);
        if !num_traits::Zero::is_zero(&i1) {
            return Err(Error::InternalInconsistency(format!(
                "index 1 but [H^0] I_1 = {}",
                to_string(&i1)
            )));
        }
        lines.push("index 1: [H^0] I_1 = 0".to_string());
        Value::Bool(true)
    } else {
        Value::Null
    };
    let value = json!({
        "annihilated_through": image.order(),
        "closed_form": true,
        "index_one_line_vanishing": no_lines,
    });
    out.emit(c.json, &value, || lines.join("; "));
    Ok(0)
}

fn parse_key(s: &str) -> Result<InvariantKey> {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct KeyInput {
        insertions: Vec<Insertion>,
        d: u64,
    }
    let k: KeyInput = serde_json::from_str(s).map_err(|e| Error::Malformed(format!("key: {e}")))?;
    Ok(InvariantKey::new(k.insertions, k.d))
}

fn matrix_value(m: &CountingMatrix) -> Value {
    Value::Array(m.a.iter().map(|row| rationals_value(row)).collect())
}

fn matrix_text(m: &CountingMatrix) -> String {
    m.a.iter()
        .map(|row| row.iter().map(to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

/// A counting matrix from `{"matrix": ...}` or from a threefold.
fn load_matrix(c: &Common, out: &mut Output) -> Result<CountingMatrix> {
    let text = read_input(&c.input)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::Malformed(e.to_string()))?;
    match value.get("matrix") {
        Some(rows) => parse_matrix(rows),
        None => {
            let v = parse_variety(&text)?;
            for w in v.warnings() {
                out.warn(&w);
            }
            counting_matrix(&v)
        }
    }
}

fn parse_matrix(rows: &Value) -> Result<CountingMatrix> {
    let bad = || Error::Malformed("matrix must be 4 rows of 4 rationals".into());
    let rows = rows.as_array().filter(|r| r.len() == 4).ok_or_else(bad)?;
    let mut a: [[Rational; 4]; 4] = Default::default();
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().filter(|r| r.len() == 4).ok_or_else(bad)?;
        for (j, x) in row.iter().enumerate() {
            a[i][j] = parse_rational_value(x)?;
        }
    }
    Ok(CountingMatrix { a })
}
