//! The `cubres` command line: argument parsing, integer expressions, and
//! text or JSON rendering of every command's result.
//!
//! [`run`] is pure apart from the work itself: it takes the argument list
//! and returns the exit code together with what would go to stdout and
//! stderr, so the binary is a three-line wrapper.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::character::{chi_int, CharValue, CharacterContext};
use crate::decompose::{decompose_prime, Decomposition};
use crate::factor::{FactorError, DEFAULT_FACTOR_BOUND};
use crate::ratchar::{RatCharError, RationalCharacter, DEFAULT_FALLBACK_BOUND};
use crate::selftest::{self, Scale};
use crate::slopes::{g_gamma, slope_set, GammaParams, Slope};
use crate::solver::{decide, Method, SolverError};
use crate::tables::{build_table, DEFAULT_SEARCH_BOUND};

pub const EXIT_OK: i32 = 0;
/// `is-cr` answered "no", or `selftest` saw a failure.
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNFACTORED: i32 = 3;
pub const EXIT_NOT_COPRIME: i32 = 4;
/// The rational rules and the direct character disagreed.
pub const EXIT_MISMATCH: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Structured,
}

#[derive(Debug, Clone, Args)]
pub struct CliConfig {
    /// Output format; `structured` prints one JSON document.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,
    /// Largest `p` searched when filling a residue table.
    #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND, value_parser = positive, global = true)]
    pub search_bound: u64,
    /// Trial-division bound used before Pollard rho.
    #[arg(long, default_value_t = DEFAULT_FACTOR_BOUND, value_parser = positive, global = true)]
    pub factor_bound: u64,
    /// Largest auxiliary prime tried by the general slope law.
    #[arg(long, default_value_t = DEFAULT_FALLBACK_BOUND, value_parser = positive, global = true)]
    pub fallback_bound: u64,
}

fn positive(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("bound must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Parser)]
#[command(name = "cubres", version, about = "Cubic residues, cubic characters and Lehmer slopes")]
struct Cli {
    #[command(flatten)]
    config: CliConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ChiMethod {
    Direct,
    Rules,
    #[default]
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a prime p ≡ 1 (mod 3) as 4p = L^2 + 27M^2.
    Decompose {
        /// Decimal integer or expression such as (3^19+5^82)/4.
        p: String,
    },
    /// Cubic character of c modulo the prime p.
    Chi {
        #[arg(long, value_enum, default_value_t = ChiMethod::Both)]
        method: ChiMethod,
        p: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
    },
    /// Is c a cube modulo m? Exit status 0 for yes, 1 for no.
    IsCr {
        #[arg(long, default_value = "exponentiation")]
        method: Method,
        #[arg(allow_hyphen_values = true)]
        c: String,
        m: String,
    },
    /// Residue table f_q(l, m) of the cubic character of q.
    Table { q: u64 },
    /// The slope function g_gamma modulo q and its value census.
    Slopes {
        q: u64,
        /// gamma = c + d w given as "c,d".
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        gamma: String,
    },
    /// Run the acceptance checks.
    Selftest {
        #[arg(default_value = "quick")]
        scale: Scale,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("unexpected {found} at offset {at} in {input:?}")]
    Unexpected { input: String, at: usize, found: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{num} is not divisible by {den}")]
    Inexact { num: BigInt, den: BigInt },
    #[error("exponent {0} is out of range")]
    Exponent(BigInt),
}

/// Parse a decimal integer or an arithmetic expression over integers with
/// `+ - * / ^` and parentheses, e.g. `(3^19+5^82)/4`. Division must be
/// exact.
pub fn parse_integer(input: &str) -> Result<BigInt, ExprError> {
    let tokens: Vec<(usize, char)> = input.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut parser = ExprParser { input, tokens, pos: 0 };
    let value = parser.expr()?;
    match parser.peek() {
        None => Ok(value),
        Some(_) => Err(parser.unexpected()),
    }
}

struct ExprParser<'a> {
    input: &'a str,
    tokens: Vec<(usize, char)>,
    pos: usize,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<char> {
        self.tokens.get(self.pos).map(|t| t.1)
    }

    fn unexpected(&self) -> ExprError {
        let (at, found) = match self.tokens.get(self.pos) {
            Some(&(i, c)) => (i, format!("{c:?}")),
            None => (self.input.len(), "end of input".to_string()),
        };
        ExprError::Unexpected {
            input: self.input.to_string(),
            at,
            found,
        }
    }

    fn expr(&mut self) -> Result<BigInt, ExprError> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BigInt, ExprError> {
        let mut acc = self.power()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let rhs = self.power()?;
            acc = if op == '*' {
                acc * rhs
            } else {
                if rhs.is_zero() {
                    return Err(ExprError::DivisionByZero);
                }
                let (q, r) = acc.div_rem(&rhs);
                if !r.is_zero() {
                    return Err(ExprError::Inexact { num: acc, den: rhs });
                }
                q
            };
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<BigInt, ExprError> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let exp = self.power()?;
        match exp.to_u32() {
            Some(e) if e <= 1 << 16 => Ok(num_traits::pow(base, e as usize)),
            _ => Err(ExprError::Exponent(exp)),
        }
    }

    fn atom(&mut self) -> Result<BigInt, ExprError> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.atom()?)
            }
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(d) = self.peek().filter(char::is_ascii_digit) {
                    digits.push(d);
                    self.pos += 1;
                }
                Ok(digits.parse().expect("ascii digits"))
            }
            _ => Err(self.unexpected()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDoc {
    pub a: String,
    pub b: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeDoc {
    pub p: String,
    pub l: String,
    pub m: String,
    pub pi: PairDoc,
    pub omega_image: String,
}

impl From<&Decomposition> for DecomposeDoc {
    fn from(d: &Decomposition) -> Self {
        DecomposeDoc {
            p: d.p.to_string(),
            l: d.l.to_string(),
            m: d.m.to_string(),
            pi: PairDoc {
                a: d.pi.a.to_string(),
                b: d.pi.b.to_string(),
            },
            omega_image: d.omega_image.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorValueDoc {
    pub q: String,
    pub e: u32,
    pub rule: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiDoc {
    pub p: String,
    pub c: String,
    pub method: String,
    pub value: String,
    /// Per-prime breakdown from the rational rules; empty for `direct`.
    pub factors: Vec<FactorValueDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueDoc {
    pub c: String,
    pub m: String,
    pub method: String,
    pub residue: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeMapEntry {
    pub t: String,
    /// `None` where numerator and denominator vanish together.
    pub slope: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeCount {
    pub slope: String,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopesDoc {
    pub q: String,
    pub gamma: PairDoc,
    pub map: Vec<SlopeMapEntry>,
    pub values: Vec<SlopeCount>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionDoc {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestDoc {
    pub scale: String,
    pub passed: bool,
    pub criteria: Vec<CriterionDoc>,
}

/// Result of one invocation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn failure(code: i32, message: impl std::fmt::Display) -> Self {
        CliOutput {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

/// Parse `args` (including the program name) and execute the command.
pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutput {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CliOutput {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let cfg = &cli.config;
    match &cli.command {
        Command::Decompose { p } => cmd_decompose(cfg, p),
        Command::Chi { method, p, c } => cmd_chi(cfg, *method, p, c),
        Command::IsCr { method, c, m } => cmd_is_cr(cfg, *method, c, m),
        Command::Table { q } => cmd_table(cfg, *q),
        Command::Slopes { q, gamma } => cmd_slopes(cfg, *q, gamma),
        Command::Selftest { scale } => cmd_selftest(cfg, *scale),
    }
}

fn emit<T: Serialize>(cfg: &CliConfig, doc: &T, text: impl FnOnce() -> String) -> String {
    match cfg.format {
        OutputFormat::Text => text(),
        OutputFormat::Structured => {
            let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
            s.push('\n');
            s
        }
    }
}

fn ok(stdout: String) -> CliOutput {
    CliOutput {
        code: EXIT_OK,
        stdout,
        stderr: String::new(),
    }
}

macro_rules! try_or_exit {
    ($e:expr, $code:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return CliOutput::failure($code, err),
        }
    };
}

fn cmd_decompose(cfg: &CliConfig, p: &str) -> CliOutput {
    let p = try_or_exit!(parse_integer(p), EXIT_USAGE);
    let d = try_or_exit!(decompose_prime(&p), EXIT_USAGE);
    let doc = DecomposeDoc::from(&d);
    ok(emit(cfg, &doc, || {
        format!(
            "p = {}\nL = {}\nM = {}\npi = {} = ({}, {})\n",
            d.p, d.l, d.m, d.pi, d.pi.a, d.pi.b
        )
    }))
}

fn unfactored(cofactor: &BigInt, bound: u64) -> CliOutput {
    CliOutput::failure(
        EXIT_UNFACTORED,
        format!("could not factor within bound {bound}; unfactored cofactor: {cofactor}"),
    )
}

fn ratchar_failure(e: RatCharError) -> CliOutput {
    match e {
        RatCharError::Factor(FactorError::Unfactored { cofactor, bound }) => unfactored(&cofactor, bound),
        RatCharError::Decompose(_) | RatCharError::NotPrime(_) => CliOutput::failure(EXIT_USAGE, e),
        other => CliOutput::failure(EXIT_MISMATCH, other),
    }
}

fn cmd_chi(cfg: &CliConfig, method: ChiMethod, p: &str, c: &str) -> CliOutput {
    let p = try_or_exit!(parse_integer(p), EXIT_USAGE);
    let c = try_or_exit!(parse_integer(c), EXIT_USAGE);
    let d = try_or_exit!(decompose_prime(&p), EXIT_USAGE);

    let direct = (method != ChiMethod::Rules).then(|| chi_int(&CharacterContext::from_decomposition(&d), &c));
    let mut factors = Vec::new();
    let mut rules = None;
    if method != ChiMethod::Direct {
        let rc = RationalCharacter::from_decomposition(d.clone()).with_fallback_bound(cfg.fallback_bound);
        if !c.is_zero() && !c.is_multiple_of(&d.p) {
            let f = match crate::factor::factor(&c, cfg.factor_bound) {
                Ok(f) => f,
                Err(FactorError::Unfactored { cofactor, bound }) => return unfactored(&cofactor, bound),
                Err(e) => return CliOutput::failure(EXIT_USAGE, e),
            };
            let parts = match rc.explain_factored(&f) {
                Ok(parts) => parts,
                Err(e) => return ratchar_failure(e),
            };
            factors = parts
                .iter()
                .map(|(q, e, ev)| FactorValueDoc {
                    q: q.to_string(),
                    e: *e,
                    rule: ev.rule.to_string(),
                    value: ev.value.to_string(),
                })
                .collect();
            rules = Some(
                parts
                    .iter()
                    .fold(CharValue::ONE, |acc, (_, e, ev)| acc * ev.value.pow(*e as u64)),
            );
        } else {
            rules = Some(CharValue::Zero);
        }
    }
    let value = match (rules, direct) {
        (Some(r), Some(x)) if r != x => {
            return CliOutput::failure(
                EXIT_MISMATCH,
                format!("rational rules give {r} but the direct character gives {x} for c = {c}, p = {p}"),
            )
        }
        (Some(v), _) | (None, Some(v)) => v,
        (None, None) => unreachable!("at least one method runs"),
    };
    let doc = ChiDoc {
        p: p.to_string(),
        c: c.to_string(),
        method: format!("{method:?}").to_lowercase(),
        value: value.to_string(),
        factors,
    };
    ok(emit(cfg, &doc, || format!("{value}\n")))
}

fn cmd_is_cr(cfg: &CliConfig, method: Method, c: &str, m: &str) -> CliOutput {
    let c = try_or_exit!(parse_integer(c), EXIT_USAGE);
    let m = try_or_exit!(parse_integer(m), EXIT_USAGE);
    let residue = match decide(&c, &m, method, cfg.factor_bound) {
        Ok(r) => r,
        Err(SolverError::NotCoprime { c, m, gcd }) => {
            return CliOutput::failure(EXIT_NOT_COPRIME, format!("gcd({c}, {m}) = {gcd} > 1"))
        }
        Err(SolverError::Factor(FactorError::Unfactored { cofactor, bound })) => return unfactored(&cofactor, bound),
        Err(SolverError::RatChar(e)) => return ratchar_failure(e),
        Err(e) => return CliOutput::failure(EXIT_USAGE, e),
    };
    let doc = ResidueDoc {
        c: c.to_string(),
        m: m.to_string(),
        method: method.to_string(),
        residue,
    };
    let stdout = emit(cfg, &doc, || if residue { "yes\n".into() } else { "no\n".into() });
    CliOutput {
        code: if residue { EXIT_OK } else { EXIT_NO },
        stdout,
        stderr: String::new(),
    }
}

fn cmd_table(cfg: &CliConfig, q: u64) -> CliOutput {
    let table = try_or_exit!(build_table(q, cfg.search_bound), EXIT_USAGE);
    ok(emit(cfg, &table.to_document(), || table.render_text()))
}

fn parse_gamma(s: &str) -> Result<GammaParams, String> {
    let (c, d) = s
        .split_once(',')
        .ok_or_else(|| format!("gamma must be \"c,d\", got {s:?}"))?;
    let c: i64 = c.trim().parse().map_err(|e| format!("gamma c: {e}"))?;
    let d: i64 = d.trim().parse().map_err(|e| format!("gamma d: {e}"))?;
    Ok(GammaParams::new(c, d))
}

fn cmd_slopes(cfg: &CliConfig, q: u64, gamma: &str) -> CliOutput {
    let gp = try_or_exit!(parse_gamma(gamma), EXIT_USAGE);
    let set = try_or_exit!(slope_set(gp, q), EXIT_USAGE);
    let map: Vec<(Slope, Option<Slope>)> = Slope::all(q).map(|t| (t, g_gamma(gp, t, q).ok())).collect();
    let mut values: Vec<(Slope, usize)> = set.multiplicity.iter().map(|(s, n)| (*s, *n)).collect();
    values.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let doc = SlopesDoc {
        q: q.to_string(),
        gamma: PairDoc {
            a: gp.c.to_string(),
            b: gp.d.to_string(),
        },
        map: map
            .iter()
            .map(|(t, s)| SlopeMapEntry {
                t: t.to_string(),
                slope: s.map(|s| s.to_string()),
            })
            .collect(),
        values: values
            .iter()
            .map(|(s, n)| SlopeCount {
                slope: s.to_string(),
                multiplicity: *n,
            })
            .collect(),
    };
    ok(emit(cfg, &doc, || {
        let mut out = format!("g_gamma for gamma = {} modulo {q}\n", gp.to_eisenstein());
        for (t, s) in &map {
            match s {
                Some(s) => writeln!(out, "  t = {t:>4} -> {s}").unwrap(),
                None => writeln!(out, "  t = {t:>4} -> undefined").unwrap(),
            }
        }
        let census: Vec<String> = values.iter().map(|(s, n)| format!("{s}:x{n}")).collect();
        writeln!(out, "values: {{{}}}", census.join(", ")).unwrap();
        writeln!(out, "distinct values: {}", values.len()).unwrap();
        out
    }))
}

fn cmd_selftest(cfg: &CliConfig, scale: Scale) -> CliOutput {
    let outcomes = selftest::run_all(scale);
    let passed = outcomes.iter().all(|o| o.ok());
    let doc = SelftestDoc {
        scale: format!("{scale:?}").to_lowercase(),
        passed,
        criteria: outcomes
            .iter()
            .map(|o| CriterionDoc {
                id: o.id,
                title: o.title.to_string(),
                passed: o.ok(),
                detail: o.detail.clone(),
                elapsed_ms: o.elapsed.as_millis() as u64,
            })
            .collect(),
    };
    let stdout = emit(cfg, &doc, || {
        let mut out = String::new();
        for o in &outcomes {
            writeln!(out, "{o}").unwrap();
        }
        let n = outcomes.iter().filter(|o| o.ok()).count();
        writeln!(out, "{n}/{} criteria passed ({})", outcomes.len(), selftest::describe_scale(scale)).unwrap();
        out
    });
    CliOutput {
        code: if passed { EXIT_OK } else { EXIT_NO },
        stdout,
        stderr: String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> CliOutput {
        run(std::iter::once("cubres").chain(args.iter().copied()))
    }

    #[test]
    fn expressions() {
        assert_eq!(parse_integer("63601").unwrap(), BigInt::from(63601));
        assert_eq!(parse_integer(" -12 ").unwrap(), BigInt::from(-12));
        assert_eq!(parse_integer("2^3^2").unwrap(), BigInt::from(512));
        assert_eq!(parse_integer("(3^19+5^82)/4").unwrap(), selftest::big_example_prime());
        assert_eq!(parse_integer("3^19 - 2*5").unwrap(), BigInt::from(1162261457));
        assert!(matches!(parse_integer("7/2"), Err(ExprError::Inexact { .. })));
        assert_eq!(parse_integer("1/0"), Err(ExprError::DivisionByZero));
        assert!(matches!(parse_integer("2^"), Err(ExprError::Unexpected { .. })));
        assert!(matches!(parse_integer("(1"), Err(ExprError::Unexpected { .. })));
        assert!(matches!(parse_integer("2^99999999"), Err(ExprError::Exponent(_))));
    }

    #[test]
    fn decompose_command() {
        let out = cli(&["decompose", "63601"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("L = 19\nM = 97"));
        assert!(cli(&["decompose", "7"]).stdout.contains("L = 1\nM = 1"));
        assert_eq!(cli(&["decompose", "11"]).code, EXIT_USAGE);
        assert_eq!(cli(&["decompose", "15"]).code, EXIT_USAGE);
    }

    #[test]
    fn chi_command() {
        assert_eq!(cli(&["chi", "63601", "490"]).stdout, "1\n");
        assert_eq!(cli(&["chi", "--method", "rules", "63601", "2"]).stdout, "w2\n");
        assert_eq!(cli(&["chi", "--method", "direct", "63601", "7"]).stdout, "w\n");
        assert_eq!(cli(&["chi", "(3^19+5^82)/4", "1982"]).stdout, "w2\n");
        assert_eq!(cli(&["chi", "63601", "0"]).stdout, "0\n");
        assert_eq!(cli(&["chi", "63601", "-2"]).stdout, "w2\n");
    }

    #[test]
    fn chi_reports_unfactored_cofactor() {
        let n = "(2^61-1)*(2^89-1)";
        let out = cli(&["--factor-bound", "10", "chi", "--method", "rules", "63601", n]);
        assert_eq!(out.code, EXIT_UNFACTORED);
        let cofactor = parse_integer(n).unwrap().to_string();
        assert!(out.stderr.contains(&cofactor), "{}", out.stderr);
        assert_eq!(cli(&["--factor-bound", "10", "chi", "--method", "direct", "63601", n]).code, 0);
    }

    #[test]
    fn is_cr_command() {
        let out = cli(&["is-cr", "490", "63601"]);
        assert_eq!((out.code, out.stdout.as_str()), (0, "yes\n"));
        assert_eq!(cli(&["is-cr", "8", "9"]).code, 0);
        let out = cli(&["is-cr", "2", "7"]);
        assert_eq!((out.code, out.stdout.as_str()), (1, "no\n"));
        assert_eq!(cli(&["is-cr", "6", "9"]).code, EXIT_NOT_COPRIME);
        assert_eq!(cli(&["is-cr", "2", "1"]).code, EXIT_USAGE);
        assert_eq!(cli(&["is-cr", "--method", "rules", "1982", "(3^19+5^82)/4"]).code, 1);
    }

    #[test]
    fn table_command() {
        let out = cli(&["table", "2"]);
        assert_eq!(out.code, 0);
        assert_eq!(out.stdout.lines().filter(|l| l.contains('|')).count(), 4);
        let out = cli(&["--format", "structured", "table", "11"]);
        let doc: crate::tables::TableDocument = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(doc.cells().unwrap().len(), 11);
        assert_eq!(cli(&["table", "9"]).code, EXIT_USAGE);
    }

    #[test]
    fn slopes_command() {
        let out = cli(&["slopes", "5", "--gamma", "-1,-1"]);
        assert!(out.stdout.contains("values: {3:x3, 4:x3}"), "{}", out.stdout);
        let out = cli(&["slopes", "5", "--gamma", "0,1"]);
        assert!(out.stdout.contains("values: {1:x3, 2:x3}"), "{}", out.stdout);
        let out = cli(&["slopes", "11", "--gamma", "1,0"]);
        assert!(out.stdout.contains("distinct values: 4"));
        let out = cli(&["slopes", "7", "--gamma", "-1,-1"]);
        assert!(out.stdout.contains("values: {2:x3, 4:x3, 1:x1, 6:x1}"), "{}", out.stdout);
        assert_eq!(cli(&["slopes", "7", "--gamma", "2,3"]).code, EXIT_USAGE);
        assert_eq!(cli(&["slopes", "7", "--gamma", "2"]).code, EXIT_USAGE);
    }

    #[test]
    fn bad_flags() {
        assert_eq!(cli(&["--search-bound", "0", "table", "5"]).code, EXIT_USAGE);
        assert_eq!(cli(&["--format", "yaml", "table", "5"]).code, EXIT_USAGE);
        assert_eq!(cli(&["frobnicate"]).code, EXIT_USAGE);
        assert_eq!(cli(&["--help"]).code, EXIT_OK);
    }
}
