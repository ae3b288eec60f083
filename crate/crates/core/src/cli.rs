//! Command-line front end.
//!
//! Every subcommand builds a [`Document`] (command, inputs, result rows,
//! summary) which is rendered as an aligned table, CSV, or a single JSON
//! object. Rationals are always emitted as `"p/q"` strings.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::exact_arith::{format_rational, Rational};
use crate::hyper_series::{
    classify, eval_exact, eval_numeric_with_budget, Classification, HypSeries, DEFAULT_MAX_TERMS,
};
use crate::sesma_identity::{explore_sum, sweep, verify, IdentityError, IdentityReport, VerifyError};
use crate::term_recognize::{recognize, IntPolynomial, TermRatio};
use crate::whipple::{match_whipple, rhs_exact_terminating, rhs_numeric};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed rational {text:?} at byte {offset}")]
    Malformed { text: String, offset: usize },
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("expected an integer, got {0:?}")]
    NotInteger(String),
}

/// Parses `[+-]digits[/digits]`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let bytes = text.as_bytes();
    let malformed = |offset: usize| ParseError::Malformed { text: text.to_string(), offset };
    let mut pos = 0;
    if matches!(bytes.first(), Some(b'+' | b'-')) {
        pos += 1;
    }
    let digits = |start: usize| {
        bytes[start..].iter().take_while(|b| b.is_ascii_digit()).count()
    };
    let num_len = digits(pos);
    if num_len == 0 {
        return Err(malformed(pos));
    }
    let num_end = pos + num_len;
    let numer: BigInt = text[..num_end].parse().map_err(|_| malformed(0))?;
    if num_end == bytes.len() {
        return Ok(Rational::from_integer(numer));
    }
    if bytes[num_end] != b'/' {
        return Err(malformed(num_end));
    }
    let den_start = num_end + 1;
    let den_len = digits(den_start);
    if den_len == 0 {
        return Err(malformed(den_start));
    }
    if den_start + den_len != bytes.len() {
        return Err(malformed(den_start + den_len));
    }
    let denom: BigInt = text[den_start..].parse().map_err(|_| malformed(den_start))?;
    if denom == BigInt::from(0) {
        return Err(ParseError::ZeroDenominator(text.to_string()));
    }
    Ok(Rational::new(numer, denom))
}

/// Comma-separated rationals; the empty string is the empty list.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>, ParseError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|item| parse_rational(item.trim())).collect()
}

pub fn parse_integer_list(text: &str) -> Result<Vec<BigInt>, ParseError> {
    parse_rational_list(text)?
        .into_iter()
        .map(|r| {
            if r.is_integer() {
                Ok(r.to_integer())
            } else {
                Err(ParseError::NotInteger(format_rational(&r)))
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "hypercert",
    version,
    about = "Exact hypergeometric series evaluation and binomial identity certification"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SeriesArgs {
    /// Upper parameters, comma separated (e.g. `-3,5/2`).
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    upper: String,
    /// Lower parameters, comma separated.
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    lower: String,
    /// Series argument.
    #[arg(long, allow_hyphen_values = true)]
    z: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify and sum a pFq series.
    Eval {
        #[command(flatten)]
        series: SeriesArgs,
        /// Use the floating-point path instead of exact summation.
        #[arg(long)]
        numeric: bool,
        /// Truncation tolerance for --numeric.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Term budget for nonterminating --numeric evaluation.
        #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
        max_terms: usize,
    },
    /// Rewrite a term ratio P(n)/Q(n) as prefactor * pFq.
    Recognize {
        /// Coefficients of P, ascending powers of n.
        #[arg(long, allow_hyphen_values = true)]
        num: String,
        /// Coefficients of Q, ascending powers of n.
        #[arg(long, allow_hyphen_values = true)]
        den: String,
        /// Initial term t(0).
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        t0: String,
    },
    /// Match Whipple's second summation and evaluate its closed forms.
    Whipple {
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Certify the binomial identity at one (k, m).
    Verify {
        k: u64,
        m: u64,
        /// Report the exact sum without asserting its value (allows k < m).
        #[arg(long)]
        explore: bool,
    },
    /// Certify the identity for all 0 <= m <= k <= max-k.
    Sweep {
        #[arg(long)]
        max_k: u64,
        /// Worker threads (default: all available).
        #[arg(long)]
        jobs: Option<usize>,
    },
}

/// A rendered command result.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub columns: Vec<String>,
    pub results: Vec<Map<String, Value>>,
    pub summary: Map<String, Value>,
}

impl Document {
    fn new(command: &str, inputs: Value, columns: &[&str]) -> Self {
        Document {
            command: command.to_string(),
            inputs: as_map(inputs),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            results: Vec::new(),
            summary: Map::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "summary": self.summary,
        })
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
                s.push('\n');
                s
            }
            OutputFormat::Csv => self.render_csv(),
            OutputFormat::Table => self.render_table(),
        }
    }

    fn cells(&self, row: &Map<String, Value>) -> Vec<String> {
        self.columns
            .iter()
            .map(|c| row.get(c).map(cell_text).unwrap_or_default())
            .collect()
    }

    fn render_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.columns).expect("in-memory write");
        for row in &self.results {
            writer.write_record(self.cells(row)).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8")
    }

    fn render_table(&self) -> String {
        let rows: Vec<Vec<String>> = self.results.iter().map(|r| self.cells(r)).collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| rows.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        let line = |cells: &[String], out: &mut String| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            out.push_str(padded.join("  ").trim_end());
            out.push('\n');
        };
        line(&self.columns, &mut out);
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        line(&rule, &mut out);
        for r in &rows {
            line(r, &mut out);
        }
        if !self.summary.is_empty() {
            let parts: Vec<String> = self
                .summary
                .iter()
                .map(|(k, v)| format!("{k}: {}", cell_text(v)))
                .collect();
            let _ = writeln!(out, "{}", parts.join(", "));
        }
        out
    }
}

fn as_map(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(cell_text).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn rational_value(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

fn rationals_value(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(rational_value).collect())
}

fn float_value(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

/// Exit code and the text for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: String) -> Self {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: message }
    }
}

/// Runs the CLI on `argv` (program name first).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let text = err.render().to_string();
            return if err.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let synopsis = "usage: hypercert [--format table|json|csv] <eval|recognize|whipple|verify|sweep> ...\n";
    match execute(&cli.command) {
        Ok((doc, code)) => Outcome { code, stdout: doc.render(cli.format), stderr: String::new() },
        Err(message) => Outcome::usage(format!("error: {message}\n{synopsis}")),
    }
}

fn parse_series(args: &SeriesArgs) -> Result<HypSeries, ParseError> {
    Ok(HypSeries::new(
        parse_rational_list(&args.upper)?,
        parse_rational_list(&args.lower)?,
        parse_rational(args.z.trim())?,
    ))
}

fn series_inputs(s: &HypSeries) -> Value {
    json!({
        "upper": rationals_value(&s.upper),
        "lower": rationals_value(&s.lower),
        "z": rational_value(&s.argument),
    })
}

fn execute(command: &Command) -> Result<(Document, i32), String> {
    match command {
        Command::Eval { series, numeric, tol, max_terms } => {
            let s = parse_series(series).map_err(|e| e.to_string())?;
            if !(*tol > 0.0) {
                return Err(format!("--tol must be positive, got {tol}"));
            }
            Ok(eval_document(&s, numeric.then_some((*tol, *max_terms))))
        }
        Command::Recognize { num, den, t0 } => {
            let ratio = TermRatio {
                num: IntPolynomial::new(parse_integer_list(num).map_err(|e| e.to_string())?),
                den: IntPolynomial::new(parse_integer_list(den).map_err(|e| e.to_string())?),
                t0: parse_rational(t0.trim()).map_err(|e| e.to_string())?,
            };
            Ok(recognize_document(&ratio))
        }
        Command::Whipple { series } => {
            let s = parse_series(series).map_err(|e| e.to_string())?;
            Ok(whipple_document(&s))
        }
        Command::Verify { k, m, explore } => {
            if *explore {
                return Ok(explore_document(*k, *m));
            }
            verify_document(*k, *m)
        }
        Command::Sweep { max_k, jobs } => {
            if *jobs == Some(0) {
                return Err("--jobs must be at least 1".to_string());
            }
            sweep_document(*max_k, *jobs)
        }
    }
}

/// `eval`: classification plus exact (`numeric = None`) or floating value.
pub fn eval_document(s: &HypSeries, numeric: Option<(f64, usize)>) -> (Document, i32) {
    let mut inputs = series_inputs(s);
    inputs["mode"] = json!(if numeric.is_some() { "numeric" } else { "exact" });
    if let Some((tol, _)) = numeric {
        inputs["tol"] = float_value(tol);
    }
    let mut doc = Document::new("eval", inputs, &["series", "classification", "value", "error"]);
    let class = classify(s);
    let mut row = Map::new();
    row.insert("series".into(), json!(s.to_string()));
    row.insert("classification".into(), json!(class.to_string()));
    let outcome = match numeric {
        None => eval_exact(s).map(|v| rational_value(&v)),
        Some((tol, budget)) => eval_numeric_with_budget(s, tol, budget).map(float_value),
    };
    let code = match outcome {
        Ok(v) => {
            row.insert("value".into(), v);
            row.insert("error".into(), Value::Null);
            EXIT_OK
        }
        Err(e) => {
            row.insert("value".into(), Value::Null);
            row.insert("error".into(), json!(e.to_string()));
            EXIT_FAILURE
        }
    };
    doc.results.push(row);
    doc.summary.insert("ok".into(), json!(code == EXIT_OK));
    (doc, code)
}

/// `recognize`: prefactor and canonical series of a term ratio.
pub fn recognize_document(r: &TermRatio) -> (Document, i32) {
    let coeffs = |p: &IntPolynomial| {
        Value::Array(p.coefficients().iter().map(|c| json!(c.to_string())).collect())
    };
    let inputs = json!({
        "num": coeffs(&r.num),
        "den": coeffs(&r.den),
        "t0": rational_value(&r.t0),
    });
    let mut doc = Document::new(
        "recognize",
        inputs,
        &["prefactor", "p", "q", "upper", "lower", "z", "series", "error"],
    );
    let mut row = Map::new();
    let code = match recognize(r) {
        Ok(ps) => {
            row.insert("prefactor".into(), rational_value(&ps.prefactor));
            row.insert("p".into(), json!(ps.series.p()));
            row.insert("q".into(), json!(ps.series.q()));
            row.insert("upper".into(), rationals_value(&ps.series.upper));
            row.insert("lower".into(), rationals_value(&ps.series.lower));
            row.insert("z".into(), rational_value(&ps.series.argument));
            row.insert("series".into(), json!(ps.series.to_string()));
            row.insert("error".into(), Value::Null);
            EXIT_OK
        }
        Err(e) => {
            row.insert("error".into(), json!(e.to_string()));
            EXIT_FAILURE
        }
    };
    doc.results.push(row);
    doc.summary.insert("recognized".into(), json!(code == EXIT_OK));
    (doc, code)
}

/// `whipple`: the match and both closed forms where defined.
pub fn whipple_document(s: &HypSeries) -> (Document, i32) {
    let mut doc = Document::new(
        "whipple",
        series_inputs(s),
        &["a", "b", "c", "rhs_exact", "rhs_numeric", "series_exact", "note"],
    );
    let Some(w) = match_whipple(s) else {
        doc.summary.insert("matched".into(), json!(false));
        return (doc, EXIT_FAILURE);
    };
    let mut row = Map::new();
    row.insert("a".into(), rational_value(&w.a));
    row.insert("b".into(), rational_value(&w.b));
    row.insert("c".into(), rational_value(&w.c));
    let mut notes = Vec::new();
    match rhs_exact_terminating(&w) {
        Ok(v) => {
            row.insert("rhs_exact".into(), rational_value(&v));
        }
        Err(e) => {
            row.insert("rhs_exact".into(), Value::Null);
            notes.push(format!("exact: {e}"));
        }
    }
    match rhs_numeric(&w) {
        Ok(v) => {
            row.insert("rhs_numeric".into(), float_value(v));
        }
        Err(e) => {
            row.insert("rhs_numeric".into(), Value::Null);
            notes.push(format!("numeric: {e}"));
        }
    }
    let series_exact = match classify(s) {
        Classification::Terminating(_) => eval_exact(s).ok().map(|v| rational_value(&v)),
        _ => None,
    };
    row.insert("series_exact".into(), series_exact.unwrap_or(Value::Null));
    row.insert(
        "note".into(),
        if notes.is_empty() { Value::Null } else { json!(notes.join("; ")) },
    );
    doc.results.push(row);
    doc.summary.insert("matched".into(), json!(true));
    (doc, EXIT_OK)
}

const REPORT_COLUMNS: [&str; 6] = ["k", "m", "direct", "via_series", "via_whipple", "all_equal_one"];

fn report_row(r: &IdentityReport) -> Map<String, Value> {
    as_map(json!({
        "k": r.k,
        "m": r.m,
        "direct": rational_value(&r.direct),
        "via_series": rational_value(&r.via_series),
        "via_whipple": rational_value(&r.via_whipple),
        "all_equal_one": r.all_equal_one,
    }))
}

fn identity_failure(e: VerifyError) -> Result<(Document, i32), String> {
    match e {
        VerifyError::Precondition(p @ IdentityError::KBelowM { .. }) => {
            Err(format!("{p} (use --explore to evaluate the sum anyway)"))
        }
        VerifyError::Precondition(p) => Err(p.to_string()),
        VerifyError::Pathways { k, m, failures } => {
            let mut doc = Document::new("verify", json!({"k": k, "m": m}), &["k", "m", "error"]);
            let message = failures.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
            doc.results.push(as_map(json!({"k": k, "m": m, "error": message})));
            doc.summary.insert("all_pass".into(), json!(false));
            Ok((doc, EXIT_FAILURE))
        }
    }
}

/// `verify K M`.
pub fn verify_document(k: u64, m: u64) -> Result<(Document, i32), String> {
    let report = match verify(k, m) {
        Ok(r) => r,
        Err(e) => return identity_failure(e),
    };
    let mut doc = Document::new("verify", json!({"k": k, "m": m}), &REPORT_COLUMNS);
    doc.results.push(report_row(&report));
    doc.summary.insert("all_pass".into(), json!(report.all_equal_one));
    let code = if report.all_equal_one { EXIT_OK } else { EXIT_FAILURE };
    Ok((doc, code))
}

/// `verify K M --explore`: the exact left-hand side, no assertion.
pub fn explore_document(k: u64, m: u64) -> (Document, i32) {
    let mut doc = Document::new(
        "verify",
        json!({"k": k, "m": m, "explore": true}),
        &["k", "m", "direct", "k_ge_m"],
    );
    doc.results.push(as_map(json!({
        "k": k,
        "m": m,
        "direct": rational_value(&explore_sum(k, m)),
        "k_ge_m": k >= m,
    })));
    (doc, EXIT_OK)
}

/// `sweep --max-k K`.
pub fn sweep_document(k_max: u64, jobs: Option<usize>) -> Result<(Document, i32), String> {
    let reports = match sweep(k_max, jobs) {
        Ok(r) => r,
        Err(e) => return identity_failure(e),
    };
    let mut doc = Document::new("sweep", json!({"max_k": k_max}), &REPORT_COLUMNS);
    doc.results = reports.iter().map(report_row).collect();
    let passed = reports.iter().filter(|r| r.all_equal_one).count();
    let all_pass = passed == reports.len();
    doc.summary.insert("count".into(), json!(reports.len()));
    doc.summary.insert("passed".into(), json!(passed));
    doc.summary.insert("all_pass".into(), json!(all_pass));
    doc.summary
        .insert("result".into(), json!(format!("{passed}/{} pass", reports.len())));
    Ok((doc, if all_pass { EXIT_OK } else { EXIT_FAILURE }))
}
