//! Text formats for branches, semigroups and multiplicity sequences, and the
//! JSON encodings used by the CLI.
//!
//! Branch grammar (see `docs/formats.md`):
//!
//! ```text
//! x = t^8; y = t^12 + t^14 + t^15
//! x = 3/2*t^4 - t^6; y = t^9; prec = 40
//! ```

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::branch::{BranchError, CharExponents, PlaneBranch};
use crate::multseq::MultiplicitySequence;
use crate::semigroup::{AperySet, NumericalSemigroup};
use crate::series::{Rational, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{name} assigned twice (line {line}, column {column})")]
    DuplicateVariable {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("missing assignment to {0}")]
    MissingVariable(&'static str),
    #[error("exponent must be positive (line {line}, column {column})")]
    NonPositiveExponent { line: usize, column: usize },
    #[error("term t^{exponent} is not below the declared precision {precision}")]
    TermBeyondPrecision { exponent: u64, precision: u64 },
    #[error("not a numerical semigroup: {0}")]
    NotNumericalSemigroup(String),
    #[error("sequence must be non-increasing ({prev} then {next})")]
    NotNonIncreasing { prev: u64, next: u64 },
    #[error("invalid branch: {0}")]
    InvalidBranch(BranchError),
}

pub type Result<T> = std::result::Result<T, ParseError>;

/// The three statements of a branch as written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchSource {
    pub x_text: String,
    pub y_text: String,
    pub declared_precision: Option<u64>,
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Cursor {
    fn new(src: &str) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    /// Skips spaces and tabs (not newlines, which separate statements).
    fn skip_blank(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t' | '\r')) {
            self.bump();
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(ParseError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.bump();
                Ok(())
            }
            Some(d) => self.error(format!("expected '{c}', found '{d}'")),
            None => self.error(format!("expected '{c}', found end of input")),
        }
    }

    fn digits(&mut self) -> Result<String> {
        let mut s = String::new();
        while let Some(c @ '0'..='9') = self.peek() {
            s.push(c);
            self.bump();
        }
        if s.is_empty() {
            return match self.peek() {
                Some(d) => self.error(format!("expected a digit, found '{d}'")),
                None => self.error("expected a digit, found end of input"),
            };
        }
        Ok(s)
    }

    fn nat(&mut self) -> Result<u64> {
        let (line, column) = (self.line, self.column);
        let s = self.digits()?;
        s.parse().map_err(|_| ParseError::Syntax {
            line,
            column,
            message: format!("number {s} is too large"),
        })
    }

    fn ident(&mut self) -> Result<String> {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphabetic() {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if s.is_empty() {
            return match self.peek() {
                Some(d) => self.error(format!("expected x, y or prec, found '{d}'")),
                None => self.error("expected x, y or prec, found end of input"),
            };
        }
        Ok(s)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn slice_from(&self, start: usize) -> String {
        self.chars[start..self.pos].iter().collect::<String>().trim().to_string()
    }
}

/// A term as read: coefficient, exponent and where the exponent started.
struct Term {
    coeff: Rational,
    exponent: u64,
    line: usize,
    column: usize,
}

fn parse_series_terms(c: &mut Cursor) -> Result<Vec<Term>> {
    let mut terms = Vec::new();
    c.skip_blank();
    // a lone 0 is the zero series
    if c.peek() == Some('0') {
        let save = (c.pos, c.line, c.column);
        c.bump();
        c.skip_blank();
        if matches!(c.peek(), None | Some(';' | '\n')) {
            return Ok(terms);
        }
        (c.pos, c.line, c.column) = save;
    }
    let mut first = true;
    loop {
        c.skip_blank();
        let mut negative = false;
        match c.peek() {
            Some('+') if !first => {
                c.bump();
            }
            Some('-') => {
                c.bump();
                negative = true;
            }
            _ if !first => break,
            _ => {}
        }
        c.skip_blank();
        let coeff = if matches!(c.peek(), Some('0'..='9')) {
            let num = BigInt::parse_bytes(c.digits()?.as_bytes(), 10).expect("digits");
            let den = if c.peek() == Some('/') {
                c.bump();
                let (dl, dc) = (c.line, c.column);
                let d = BigInt::parse_bytes(c.digits()?.as_bytes(), 10).expect("digits");
                if d.is_zero() {
                    return Err(ParseError::Syntax {
                        line: dl,
                        column: dc,
                        message: "zero denominator".into(),
                    });
                }
                d
            } else {
                BigInt::from(1)
            };
            c.skip_blank();
            c.expect('*')?;
            c.skip_blank();
            Rational::new(num, den)
        } else {
            Rational::from_integer(BigInt::from(1))
        };
        c.expect('t')?;
        c.skip_blank();
        c.expect('^')?;
        c.skip_blank();
        let (line, column) = (c.line, c.column);
        let exponent = c.nat()?;
        terms.push(Term {
            coeff: if negative { -coeff } else { coeff },
            exponent,
            line,
            column,
        });
        first = false;
    }
    Ok(terms)
}

fn terms_to_series(terms: &[Term], precision: u64) -> Result<TruncatedSeries> {
    for t in terms {
        if t.exponent == 0 {
            return Err(ParseError::NonPositiveExponent {
                line: t.line,
                column: t.column,
            });
        }
        if t.exponent >= precision {
            return Err(ParseError::TermBeyondPrecision {
                exponent: t.exponent,
                precision,
            });
        }
    }
    Ok(TruncatedSeries::from_terms(
        terms.iter().map(|t| (t.exponent, t.coeff.clone())),
        precision,
    ))
}

struct Statements {
    x: Option<(Vec<Term>, String)>,
    y: Option<(Vec<Term>, String)>,
    prec: Option<u64>,
}

fn parse_statements(input: &str) -> Result<Statements> {
    let mut c = Cursor::new(input);
    let mut st = Statements {
        x: None,
        y: None,
        prec: None,
    };
    loop {
        c.skip_ws();
        while c.peek() == Some(';') {
            c.bump();
            c.skip_ws();
        }
        if c.at_end() {
            break;
        }
        let (line, column) = (c.line, c.column);
        let name = c.ident()?;
        c.skip_blank();
        c.expect('=')?;
        let dup = || ParseError::DuplicateVariable {
            name: name.clone(),
            line,
            column,
        };
        match name.as_str() {
            "x" | "y" => {
                let start = c.pos;
                let terms = parse_series_terms(&mut c)?;
                let text = c.slice_from(start);
                let slot = if name == "x" { &mut st.x } else { &mut st.y };
                if slot.is_some() {
                    return Err(dup());
                }
                *slot = Some((terms, text));
            }
            "prec" => {
                c.skip_blank();
                let (pl, pc) = (c.line, c.column);
                let p = c.nat()?;
                if p == 0 {
                    return Err(ParseError::Syntax {
                        line: pl,
                        column: pc,
                        message: "precision must be positive".into(),
                    });
                }
                if st.prec.is_some() {
                    return Err(dup());
                }
                st.prec = Some(p);
            }
            _ => {
                return Err(ParseError::Syntax {
                    line,
                    column,
                    message: format!("unknown variable '{name}'"),
                })
            }
        }
        c.skip_blank();
        match c.peek() {
            None => break,
            Some(';' | '\n') => {
                c.bump();
            }
            Some(d) => return c.error(format!("unexpected '{d}'")),
        }
    }
    Ok(st)
}

/// Splits a branch description into its statements.
pub fn parse_branch_source(input: &str) -> Result<BranchSource> {
    let st = parse_statements(input)?;
    let (_, x_text) = st.x.ok_or(ParseError::MissingVariable("x"))?;
    let (_, y_text) = st.y.ok_or(ParseError::MissingVariable("y"))?;
    Ok(BranchSource {
        x_text,
        y_text,
        declared_precision: st.prec,
    })
}

/// `x = <series>; y = <series> [; prec = N]`. Without `prec` the branch is
/// an exact polynomial parametrization read at `1 +` its largest exponent.
pub fn parse_branch(input: &str) -> Result<PlaneBranch> {
    let st = parse_statements(input)?;
    let (xt, _) = st.x.ok_or(ParseError::MissingVariable("x"))?;
    let (yt, _) = st.y.ok_or(ParseError::MissingVariable("y"))?;
    let max_exp = xt.iter().chain(&yt).map(|t| t.exponent).max().unwrap_or(0);
    let precision = st.prec.unwrap_or(max_exp + 1);
    let x = terms_to_series(&xt, precision)?;
    let y = terms_to_series(&yt, precision)?;
    let built = if st.prec.is_some() {
        PlaneBranch::new(x, y)
    } else {
        PlaneBranch::polynomial(x, y)
    };
    built.map_err(ParseError::InvalidBranch)
}

fn parse_list(input: &str, allow_power: bool) -> Result<Vec<(u64, u64)>> {
    let mut c = Cursor::new(input);
    c.skip_ws();
    let bracketed = c.peek() == Some('<');
    if bracketed {
        c.bump();
    }
    let mut out = Vec::new();
    loop {
        c.skip_ws();
        let v = c.nat()?;
        c.skip_ws();
        let mut h = 1;
        if allow_power && c.peek() == Some('^') {
            c.bump();
            c.skip_ws();
            let (l, col) = (c.line, c.column);
            h = c.nat()?;
            if h == 0 {
                return Err(ParseError::Syntax {
                    line: l,
                    column: col,
                    message: "repetition count must be positive".into(),
                });
            }
            c.skip_ws();
        }
        out.push((v, h));
        match c.peek() {
            Some(',') => {
                c.bump();
            }
            _ => break,
        }
    }
    if bracketed {
        c.expect('>')?;
    }
    c.skip_ws();
    if let Some(d) = c.peek() {
        return c.error(format!("unexpected '{d}'"));
    }
    Ok(out)
}

/// `<a0,a1,...>` or `a0,a1,...`; the generators are returned as written.
pub fn parse_semigroup(input: &str) -> Result<Vec<u64>> {
    let gens: Vec<u64> = parse_list(input, false)?.into_iter().map(|p| p.0).collect();
    if gens.contains(&0) {
        return Err(ParseError::NotNumericalSemigroup(
            "generators must be positive".into(),
        ));
    }
    let g = gens.iter().fold(0u64, |a, &b| a.gcd(&b));
    if g != 1 {
        return Err(ParseError::NotNumericalSemigroup(format!(
            "generators have gcd {g}"
        )));
    }
    Ok(gens)
}

/// Comma list of `e` or `e^h`.
pub fn parse_multseq(input: &str) -> Result<MultiplicitySequence> {
    let runs = parse_list(input, true)?;
    let mut prev: Option<u64> = None;
    for &(e, _) in &runs {
        if e == 0 {
            return Err(ParseError::Syntax {
                line: 1,
                column: 1,
                message: "multiplicities must be positive".into(),
            });
        }
        if let Some(p) = prev {
            if e > p {
                return Err(ParseError::NotNonIncreasing { prev: p, next: e });
            }
        }
        prev = Some(e);
    }
    Ok(MultiplicitySequence::from_runs(&runs).expect("checked non-increasing"))
}

pub fn render_branch(b: &PlaneBranch) -> String {
    b.to_string()
}

pub fn render_semigroup(s: &NumericalSemigroup) -> String {
    s.to_string()
}

pub fn render_multseq(e: &MultiplicitySequence) -> String {
    e.to_string()
}

/// Integers that may not survive a double are written as strings.
pub fn json_u64(n: u64) -> Value {
    if n <= (1u64 << 53) {
        json!(n)
    } else {
        json!(n.to_string())
    }
}

pub fn json_i64(n: i64) -> Value {
    if n.unsigned_abs() <= (1u64 << 53) {
        json!(n)
    } else {
        json!(n.to_string())
    }
}

pub fn json_u64s(v: &[u64]) -> Value {
    Value::Array(v.iter().map(|&n| json_u64(n)).collect())
}

/// `"p/q"`, or `"p"` for integers.
pub fn json_rational(r: &Rational) -> Value {
    if r.is_integer() {
        json!(r.numer().to_string())
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        json!(format!("{sign}{}/{}", r.numer().abs(), r.denom()))
    }
}

pub fn semigroup_json(s: &NumericalSemigroup) -> Value {
    json!({
        "generators": json_u64s(s.min_generators()),
        "conductor": json_u64(s.conductor()),
        "frobenius": json_i64(s.frobenius()),
        "genus": json_u64(s.genus()),
        "symmetric": s.is_symmetric(),
    })
}

pub fn gaps_json(s: &NumericalSemigroup) -> Value {
    json!({ "gaps": json_u64s(&s.gaps()) })
}

pub fn multseq_json(e: &MultiplicitySequence) -> Value {
    json!({
        "runs": Value::Array(
            e.runs()
                .iter()
                .map(|&(v, c)| json!([json_u64(v), json_u64(c)]))
                .collect()
        )
    })
}

pub fn apery_json(a: &AperySet) -> Value {
    json!({ "base": json_u64(a.base), "values": json_u64s(&a.values) })
}

pub fn char_exponents_json(e: &CharExponents) -> Value {
    json!({ "delta": json_u64s(&e.delta), "d": json_u64s(&e.d) })
}

pub fn series_json(s: &TruncatedSeries) -> Value {
    json!({
        "precision": json_u64(s.precision()),
        "terms": Value::Array(
            s.terms()
                .map(|(e, c)| json!([json_u64(e), json_rational(c)]))
                .collect()
        ),
    })
}

/// Compact JSON with keys in sorted order.
pub fn render_json(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{rat, ratio};

    #[test]
    fn branch_examples() {
        let b = parse_branch("x = t^8; y = t^12 + t^14 + t^15").unwrap();
        assert_eq!(b.x().to_string(), "t^8");
        assert_eq!(b.y().to_string(), "t^12 + t^14 + t^15");
        assert_eq!(b.precision(), 16);
        assert!(b.is_exact());

        let b = parse_branch("x = t^1; y = t^1").unwrap();
        assert_eq!(b.precision(), 2);

        let b = parse_branch("x = 3/2*t^4 - t^6; y = t^9; prec = 40").unwrap();
        assert_eq!(b.precision(), 40);
        assert!(!b.is_exact());
        assert_eq!(b.x().coeff(4), Some(ratio(3, 2)));
        assert_eq!(b.x().coeff(6), Some(rat(-1)));
    }

    #[test]
    fn branch_grammar_details() {
        let b = parse_branch("prec = 20\n y = t^5 + 2*t^3 + t^5\n x = -t^2").unwrap();
        assert_eq!(b.y().to_string(), "2*t^3 + 2*t^5");
        assert_eq!(b.x().to_string(), "-t^2");
        let b = parse_branch("x=t^2;y=-1/3*t^3;").unwrap();
        assert_eq!(b.y().coeff(3), Some(ratio(-1, 3)));
        let b = parse_branch("x = t^1; y = 0; prec = 5").unwrap();
        assert!(b.y().is_zero());
    }

    #[test]
    fn branch_errors() {
        assert!(matches!(
            parse_branch("x = t^2; x = t^3; y = t^3"),
            Err(ParseError::DuplicateVariable { line: 1, column: 10, .. })
        ));
        assert!(matches!(
            parse_branch("x = t^0 + t^2; y = t^3"),
            Err(ParseError::NonPositiveExponent { line: 1, column: 7 })
        ));
        assert!(matches!(
            parse_branch("x = t^2;\ny = t^3 +"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_branch("x = t^2; y = t^30; prec = 10"),
            Err(ParseError::TermBeyondPrecision { exponent: 30, precision: 10 })
        ));
        assert_eq!(parse_branch("x = t^2"), Err(ParseError::MissingVariable("y")));
        assert!(matches!(
            parse_branch("x = t^2; y = 2 t^3"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_branch("x = t^2; y = t^4"),
            Err(ParseError::InvalidBranch(BranchError::GcdNotOne { gcd: 2 }))
        ));
        assert!(matches!(
            parse_branch("x = t^2; y = 1/0*t^3"),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn semigroup_examples() {
        assert_eq!(parse_semigroup("<30,42,280,855>").unwrap(), vec![30, 42, 280, 855]);
        assert_eq!(parse_semigroup("4,5,6").unwrap(), vec![4, 5, 6]);
        assert!(matches!(
            parse_semigroup("<2,4>"),
            Err(ParseError::NotNumericalSemigroup(_))
        ));
        assert!(matches!(parse_semigroup("<2,3"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_semigroup("2,,3"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn multseq_examples() {
        let e = parse_multseq("30,12^2,6^13,4,2^9,1^2").unwrap();
        assert_eq!(e.runs(), &[(30, 1), (12, 2), (6, 13), (4, 1), (2, 9)]);
        assert_eq!(parse_multseq("6,4,2,2").unwrap().runs(), &[(6, 1), (4, 1), (2, 2)]);
        assert_eq!(
            parse_multseq("2,3"),
            Err(ParseError::NotNonIncreasing { prev: 2, next: 3 })
        );
        assert!(parse_multseq("1").unwrap().is_empty());
    }

    #[test]
    fn json_examples() {
        let s = NumericalSemigroup::from_generators(&[8, 12, 26, 53]).unwrap();
        let j = render_json(&semigroup_json(&s));
        assert!(j.starts_with("{\"conductor\":84,"));
        assert!(j.contains("\"generators\":[8,12,26,53]"));
        let e = parse_multseq("30,12^2,6^13,4,2^9").unwrap();
        assert_eq!(
            render_json(&multseq_json(&e)),
            "{\"runs\":[[30,1],[12,2],[6,13],[4,1],[2,9]]}"
        );
        assert_eq!(
            render_json(&gaps_json(&NumericalSemigroup::naturals())),
            "{\"gaps\":[]}"
        );
        assert_eq!(json_rational(&ratio(-3, 2)), json!("-3/2"));
        assert_eq!(json_u64(1 << 60), json!("1152921504606846976"));
    }
}
