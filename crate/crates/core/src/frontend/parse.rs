//! Expression and problem-file parsing.
//!
//! Problem files are line oriented:
//!
//! ```text
//! field Fp 5            # or: field Q
//! source vars x y
//! target vars u v
//! X ideal: x^2 - y      # optional
//! phi: u = x + y, v = x*y
//! f: x^2 + y^2, x
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::arith::{Field, FieldSpec};
use crate::descent::DescentProblem;
use crate::error::{Error, Result};
use crate::poly::{MonomialOrder, Poly, PolyRing};
use crate::ratfunc::RationalFunction;

// Guards against accidental blow-up from typos such as `x^1000000`.
const MAX_EXPONENT: u64 = 10_000;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Equals,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    column: usize,
}

fn lex(text: &str, line: usize, first_column: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = first_column + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Int(digits.parse().unwrap()),
                column,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                column,
            });
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '=' => Tok::Equals,
            _ => return Err(Error::parse(line, column, format!("unexpected character `{c}`"))),
        };
        out.push(Token { tok, column });
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    line: usize,
    end_column: usize,
    ring: &'a Arc<PolyRing<FieldSpec>>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_column, |t| t.column)
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.column(), msg)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.checked_add(&self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.checked_sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let (mut acc, mut last_was_number) = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.checked_mul(&self.unary()?.0)?;
                    last_was_number = false;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let column = self.column();
                    let divisor = self.unary()?.0;
                    acc = self.divide(&acc, &divisor, column)?;
                    last_was_number = false;
                }
                // coefficient times monomial, as in `3x^2`
                Some(Tok::Ident(_)) if last_was_number => {
                    acc = acc.checked_mul(&self.power()?.0)?;
                    last_was_number = false;
                }
                Some(Tok::Ident(_)) | Some(Tok::LParen) | Some(Tok::Int(_)) => {
                    return Err(self.error("expected `*` between factors"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn divide(&self, a: &RationalFunction, b: &RationalFunction, column: usize) -> Result<RationalFunction> {
        if !b.is_zero() {
            return a.checked_div(b);
        }
        let p = self.ring.field().characteristic();
        let msg = if p > 0 && b.constant_value().is_some() {
            format!("coefficient not reducible mod {p}")
        } else {
            "division by zero".to_string()
        };
        Err(Error::parse(self.line, column, msg))
    }

    fn unary(&mut self) -> Result<(RationalFunction, bool)> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok((self.unary()?.0.neg(), false))
            }
            Some(Tok::Plus) => {
                self.bump();
                Ok((self.unary()?.0, false))
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<(RationalFunction, bool)> {
        let (base, is_number) = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok((base, is_number));
        }
        self.bump();
        let column = self.column();
        match self.bump() {
            Some(Tok::Int(e)) => {
                let e = u64::try_from(&e)
                    .ok()
                    .filter(|&e| e <= MAX_EXPONENT)
                    .ok_or_else(|| Error::parse(self.line, column, format!("exponent larger than {MAX_EXPONENT}")))?;
                Ok((base.pow(e), false))
            }
            _ => Err(Error::parse(
                self.line,
                column,
                "expected a non-negative integer exponent",
            )),
        }
    }

    fn atom(&mut self) -> Result<(RationalFunction, bool)> {
        let column = self.column();
        match self.bump() {
            Some(Tok::Int(n)) => {
                let c = self.ring.field().from_bigint(&n);
                Ok((RationalFunction::constant(self.ring, c), true))
            }
            Some(Tok::Ident(name)) => match self.ring.var_index(&name) {
                Some(i) => Ok((RationalFunction::var(self.ring, i), false)),
                None => Err(Error::parse(self.line, column, format!("unknown variable `{name}`"))),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    self.pos -= 1;
                    return Err(self.error("expected `)`"));
                }
                Ok((inner, false))
            }
            Some(_) => {
                self.pos -= 1;
                Err(self.error("expected a number, variable or `(`"))
            }
            None => Err(self.error("unexpected end of expression")),
        }
    }
}

fn parse_tokens(
    tokens: &[Token],
    ring: &Arc<PolyRing<FieldSpec>>,
    line: usize,
    end_column: usize,
) -> Result<RationalFunction> {
    let mut p = Parser {
        tokens,
        pos: 0,
        line,
        end_column,
        ring,
    };
    if tokens.is_empty() {
        return Err(p.error("empty expression"));
    }
    let value = p.expr()?;
    if p.pos < tokens.len() {
        return Err(p.error("unexpected token after expression"));
    }
    Ok(value)
}

fn require_polynomial(value: RationalFunction, line: usize, column: usize) -> Result<Poly> {
    value.as_polynomial().ok_or_else(|| {
        Error::parse(
            line,
            column,
            "expected a polynomial, found a fraction with non-constant denominator",
        )
    })
}

/// Parses a rational expression in the variables of `ring`.
pub fn parse_rational_function(text: &str, ring: &Arc<PolyRing<FieldSpec>>) -> Result<RationalFunction> {
    let tokens = lex(text, 1, 1)?;
    let ring = grevlex(ring)?;
    parse_tokens(&tokens, &ring, 1, text.chars().count() + 1)
}

/// Parses a polynomial in the variables of `ring`.
pub fn parse_polynomial(text: &str, ring: &Arc<PolyRing<FieldSpec>>) -> Result<Poly> {
    let value = parse_rational_function(text, ring)?;
    require_polynomial(value, 1, 1)?.in_ring(ring)
}

fn grevlex(ring: &Arc<PolyRing<FieldSpec>>) -> Result<Arc<PolyRing<FieldSpec>>> {
    if ring.order() == MonomialOrder::Grevlex {
        Ok(ring.clone())
    } else {
        ring.with_order(MonomialOrder::Grevlex)
    }
}

/// Raw text of a problem file together with its parse.
#[derive(Debug, Clone)]
pub struct ProblemSource {
    pub text: String,
    pub problem: DescentProblem,
    /// Line number of each section keyword.
    pub locations: BTreeMap<&'static str, usize>,
}

struct Section<'a> {
    line: usize,
    column: usize,
    body: &'a str,
}

const SECTIONS: [(&str, &str); 6] = [
    ("field", "field"),
    ("source vars", "source vars"),
    ("target vars", "target vars"),
    ("X ideal", "X ideal:"),
    ("phi", "phi:"),
    ("f", "f:"),
];

fn split_sections(text: &str) -> Result<(BTreeMap<&'static str, Section<'_>>, usize)> {
    let mut found: BTreeMap<&'static str, Section<'_>> = BTreeMap::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap();
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = content.chars().count() - trimmed.chars().count();
        let matched = SECTIONS.iter().find(|(_, kw)| {
            trimmed.starts_with(kw)
                && (kw.ends_with(':') || trimmed[kw.len()..].chars().next().is_none_or(char::is_whitespace))
        });
        let Some((name, kw)) = matched else {
            let word: String = trimmed
                .chars()
                .take_while(|c| !c.is_whitespace() && *c != ':')
                .collect();
            return Err(Error::parse(line, indent + 1, format!("unknown section `{word}`")));
        };
        if let Some(prev) = found.get(name) {
            return Err(Error::parse(
                line,
                indent + 1,
                format!("duplicate section `{name}` (first on line {})", prev.line),
            ));
        }
        let body = &trimmed[kw.len()..];
        found.insert(
            name,
            Section {
                line,
                column: indent + kw.chars().count() + 1,
                body,
            },
        );
    }
    Ok((found, last_line))
}

fn parse_field(s: &Section<'_>) -> Result<FieldSpec> {
    let words: Vec<&str> = s.body.split_whitespace().collect();
    let err = |msg: String| Error::parse(s.line, s.column + 1, msg);
    match words.as_slice() {
        ["Q"] => Ok(FieldSpec::rationals()),
        ["Fp", p] => {
            let p: u64 = p.parse().map_err(|_| err(format!("`{p}` is not a valid modulus")))?;
            FieldSpec::prime(p).map_err(|e| err(e.to_string()))
        }
        _ => Err(err("expected `field Q` or `field Fp <prime>`".to_string())),
    }
}

fn parse_names(s: &Section<'_>) -> Result<Vec<String>> {
    let mut names = Vec::new();
    for tok in lex(s.body, s.line, s.column)? {
        match tok.tok {
            Tok::Ident(name) => {
                if names.contains(&name) {
                    return Err(Error::parse(
                        s.line,
                        tok.column,
                        format!("variable `{name}` listed twice"),
                    ));
                }
                names.push(name);
            }
            Tok::Comma => {}
            _ => return Err(Error::parse(s.line, tok.column, "expected a variable name")),
        }
    }
    if names.is_empty() {
        return Err(Error::parse(s.line, s.column, "expected at least one variable name"));
    }
    Ok(names)
}

/// Splits a token list at top-level commas.
fn split_commas(tokens: &[Token]) -> Vec<&[Token]> {
    let mut depth = 0i32;
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, t) in tokens.iter().enumerate() {
        match t.tok {
            Tok::LParen => depth += 1,
            Tok::RParen => depth -= 1,
            Tok::Comma if depth == 0 => {
                parts.push(&tokens[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&tokens[start..]);
    parts
}

fn parse_poly_list(s: &Section<'_>, ring: &Arc<PolyRing<FieldSpec>>) -> Result<Vec<Poly>> {
    let tokens = lex(s.body, s.line, s.column)?;
    let end = s.column + s.body.chars().count();
    split_commas(&tokens)
        .into_iter()
        .map(|part| {
            let column = part.first().map_or(end, |t| t.column);
            let value = parse_tokens(part, ring, s.line, end)?;
            require_polynomial(value, s.line, column)
        })
        .collect()
}

fn parse_phi(s: &Section<'_>, ring: &Arc<PolyRing<FieldSpec>>, targets: &[String]) -> Result<Vec<Poly>> {
    let tokens = lex(s.body, s.line, s.column)?;
    let end = s.column + s.body.chars().count();
    let mut assigned: Vec<Option<Poly>> = vec![None; targets.len()];
    for part in split_commas(&tokens) {
        let column = part.first().map_or(end, |t| t.column);
        let (name, name_col) = match part {
            [Token {
                tok: Tok::Ident(name),
                column,
            }, Token { tok: Tok::Equals, .. }, ..] => (name, *column),
            _ => return Err(Error::parse(s.line, column, "expected `<target> = <polynomial>`")),
        };
        let Some(index) = targets.iter().position(|t| t == name) else {
            return Err(Error::parse(
                s.line,
                name_col,
                format!("`{name}` is not a target variable"),
            ));
        };
        if assigned[index].is_some() {
            return Err(Error::parse(s.line, name_col, format!("`{name}` assigned twice")));
        }
        let value = parse_tokens(&part[2..], ring, s.line, end)?;
        let rhs_col = part.get(2).map_or(end, |t| t.column);
        assigned[index] = Some(require_polynomial(value, s.line, rhs_col)?);
    }
    if let Some(i) = assigned.iter().position(Option::is_none) {
        return Err(Error::parse(
            s.line,
            s.column,
            format!("no assignment for target variable `{}`", targets[i]),
        ));
    }
    Ok(assigned.into_iter().map(Option::unwrap).collect())
}

/// Parses a problem file.
pub fn parse_problem(text: &str) -> Result<DescentProblem> {
    Ok(parse_problem_source(text)?.problem)
}

/// Parses a problem file, keeping the text and section locations.
pub fn parse_problem_source(text: &str) -> Result<ProblemSource> {
    let (sections, last_line) = split_sections(text)?;
    let missing = |name: &str| Error::parse(last_line + 1, 1, format!("missing required section `{name}`"));
    let get = |name: &'static str| sections.get(name).ok_or_else(|| missing(name));
    let field = parse_field(get("field")?)?;
    let sources = parse_names(get("source vars")?)?;
    let targets = parse_names(get("target vars")?)?;
    if let Some(v) = targets.iter().find(|v| sources.contains(v)) {
        let s = get("target vars")?;
        return Err(Error::parse(
            s.line,
            s.column,
            format!("`{v}` is both a source and a target variable"),
        ));
    }
    let ring = PolyRing::new(field, sources.iter().cloned(), MonomialOrder::Grevlex)?;
    let ideal = match sections.get("X ideal") {
        Some(s) => parse_poly_list(s, &ring)?,
        None => Vec::new(),
    };
    let phi = parse_phi(get("phi")?, &ring, &targets)?;
    let f = parse_poly_list(get("f")?, &ring)?;
    let problem = DescentProblem::new(field, &sources, &targets, ideal, phi, f)?;
    let locations = sections.iter().map(|(k, s)| (*k, s.line)).collect();
    Ok(ProblemSource {
        text: text.to_string(),
        problem,
        locations,
    })
}

/// Canonical problem-file text; parses back to the same problem.
pub fn render_problem(problem: &DescentProblem) -> String {
    let field = problem.field();
    let mut out = String::new();
    if field.is_rationals() {
        out.push_str("field Q\n");
    } else {
        out.push_str(&format!("field Fp {}\n", field.characteristic()));
    }
    out.push_str(&format!("source vars {}\n", problem.source().vars().join(" ")));
    out.push_str(&format!("target vars {}\n", problem.target().vars().join(" ")));
    let list = |ps: &[Poly]| ps.iter().map(Poly::render).collect::<Vec<_>>().join(", ");
    if !problem.ideal().is_empty() {
        out.push_str(&format!("X ideal: {}\n", list(problem.ideal())));
    }
    let assignments: Vec<String> = problem
        .target()
        .vars()
        .iter()
        .zip(problem.phi())
        .map(|(y, p)| format!("{y} = {}", p.render()))
        .collect();
    out.push_str(&format!("phi: {}\n", assignments.join(", ")));
    out.push_str(&format!("f: {}\n", list(problem.f())));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_fixture() {
        let p =
            parse_problem("field Q\nsource vars x y\ntarget vars u v\nphi: u = x + y, v = x*y\nf: x^2 + y^2").unwrap();
        assert_eq!(p.phi()[0].render(), "x + y");
        assert_eq!(p.phi()[1].render(), "x*y");
        assert_eq!(p.f()[0].render(), "x^2 + y^2");
        assert!(p.ideal().is_empty());
    }

    #[test]
    fn frobenius_fixture() {
        let p = parse_problem("field Fp 5\nsource vars t\ntarget vars y\nphi: y = t^5\nf: t").unwrap();
        assert_eq!(p.field().characteristic(), 5);
        assert_eq!(p.phi()[0].render(), "t^5");
    }

    fn err(text: &str) -> (usize, usize, String) {
        match parse_problem(text) {
            Err(Error::Parse { line, column, message }) => (line, column, message),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_locations() {
        let (l, _, m) = err("field Fp 4\nsource vars t\ntarget vars y\nphi: y = t\nf: t");
        assert_eq!(l, 1);
        assert!(m.contains("not a prime"), "{m}");
        let (l, c, m) = err("field Q\nsource vars t\ntarget vars y\nphi: y = t\nf: t + s");
        assert_eq!((l, c), (5, 8));
        assert!(m.contains("unknown variable `s`"));
        let (l, _, m) = err("field Fp 5\nsource vars t\ntarget vars y\nphi: y = t/5\nf: t");
        assert_eq!(l, 4);
        assert!(m.contains("not reducible mod 5"));
        let (l, _, m) = err("field Q\nsource vars t\nsource vars s\n");
        assert_eq!(l, 3);
        assert!(m.contains("duplicate"));
        let (l, _, m) = err("field Q\nsource vars t\ntarget vars y\nf: t");
        assert_eq!(l, 5);
        assert!(m.contains("missing required section `phi`"));
        let (_, _, m) = err("field Q\nsource vars x y\ntarget vars u\nphi: u = x y\nf: x");
        assert!(m.contains("expected `*`"));
        let (_, _, m) = err("field Q\nsource vars x\ntarget vars u\nphi: u = x\nf: (x + 1");
        assert!(m.contains("expected `)`"));
        let (_, _, m) = err("field Q\nsource vars x\ntarget vars u\nphi: u = x\nf: 1/x");
        assert!(m.contains("expected a polynomial"));
    }

    #[test]
    fn comments_coefficients_and_fractions() {
        let p = parse_problem(
            "# a comment\nfield Q   # trailing\n source vars x , y\ntarget vars u\n\nphi: u = 3x^2*y - 1/2\nf: -(x - y)^2 + 2y",
        )
        .unwrap();
        assert_eq!(p.phi()[0].render(), "3*x^2*y - 1/2");
        assert_eq!(p.f()[0].render(), "-x^2 + 2*x*y - y^2 + 2*y");
        let p = parse_problem("field Fp 7\nsource vars x\ntarget vars u\nphi: u = x/2\nf: x").unwrap();
        assert_eq!(p.phi()[0].render(), "4*x");
    }

    #[test]
    fn render_round_trip() {
        let text =
            "field Fp 5\nsource vars x y\ntarget vars u v\nX ideal: x^2 - y\nphi: v = x*y, u = x + 3\nf: x, y^2 + 1\n";
        let p = parse_problem(text).unwrap();
        let rendered = render_problem(&p);
        assert_eq!(
            rendered,
            "field Fp 5\nsource vars x y\ntarget vars u v\nX ideal: x^2 + 4*y\nphi: u = x + 3, v = x*y\nf: x, y^2 + 1\n"
        );
        let again = parse_problem(&rendered).unwrap();
        assert_eq!(render_problem(&again), rendered);
        assert_eq!(again.phi(), p.phi());
    }

    #[test]
    fn rational_function_text() {
        let ring = PolyRing::new(FieldSpec::RATIONALS, ["u", "v"], MonomialOrder::Grevlex).unwrap();
        let h = parse_rational_function("(u + v) / (u*v)", &ring).unwrap();
        assert_eq!(h.render(), "(u + v) / (u*v)");
        assert_eq!(parse_rational_function(&h.render(), &ring).unwrap(), h);
        assert!(parse_polynomial("u/v", &ring).is_err());
    }
}
