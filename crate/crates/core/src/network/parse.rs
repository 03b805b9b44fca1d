//! Line-oriented reaction DSL.
//!
//! ```text
//! # comment
//! R1: A + B <-> C + D ; kf=1 kb=0.5
//! R2: 2 A -> B ; kf=3
//! in: 0 -> A ; kf=1/2
//! ```

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Pow, Signed, Zero};

use super::{NetworkBuilder, NetworkError, ReactionNetwork};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    Network(NetworkError),
    /// The input declares no reactions.
    Empty,
}

/// Parse failure with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(msg) => {
                write!(f, "line {}, column {}: {msg}", self.line, self.column)
            }
            ParseErrorKind::Network(e) => write!(f, "line {}: {e}", self.line),
            ParseErrorKind::Empty => f.write_str("network declares no reactions"),
        }
    }
}

impl core::error::Error for ParseError {}

/// Parses an exact rational: integer, decimal (with optional exponent) or
/// fraction `p/q`. A leading sign is accepted.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_rational(p)?;
        let q = parse_rational(q)?;
        if q.is_zero() {
            return None;
        }
        return Some(p / q);
    }
    let (negative, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: String = [int_part, frac_part].concat();
    let numer: BigInt = digits.parse().ok()?;
    let scale = exponent - i32::try_from(frac_part.len()).ok()?;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(numer * Pow::pow(&ten, scale.unsigned_abs()))
    } else {
        Rational::new(numer, Pow::pow(&ten, scale.unsigned_abs()))
    };
    Some(if negative { -value } else { value })
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Number(String),
    Plus,
    Arrow,
    BiArrow,
    Colon,
    Semi,
    Equals,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) | Token::Number(s) => write!(f, "`{s}`"),
            Token::Plus => f.write_str("`+`"),
            Token::Arrow => f.write_str("`->`"),
            Token::BiArrow => f.write_str("`<->`"),
            Token::Colon => f.write_str("`:`"),
            Token::Semi => f.write_str("`;`"),
            Token::Equals => f.write_str("`=`"),
        }
    }
}

type Spanned = (Token, usize);

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        kind: ParseErrorKind::Syntax(msg.into()),
    }
}

fn tokenize(text: &str, line: usize) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let rest = |k: usize| chars.get(i + k).copied();
        match c {
            '+' => {
                out.push((Token::Plus, col));
                i += 1;
            }
            ':' => {
                out.push((Token::Colon, col));
                i += 1;
            }
            ';' => {
                out.push((Token::Semi, col));
                i += 1;
            }
            '=' => {
                out.push((Token::Equals, col));
                i += 1;
            }
            '-' if rest(1) == Some('>') => {
                out.push((Token::Arrow, col));
                i += 2;
            }
            '<' if rest(1) == Some('-') && rest(2) == Some('>') => {
                out.push((Token::BiArrow, col));
                i += 3;
            }
            c if c == '-' || c == '.' || c.is_ascii_digit() => {
                let start = i;
                i += 1;
                while i < chars.len() {
                    let d = chars[i];
                    let exp_follows = matches!(d, 'e' | 'E')
                        && match chars.get(i + 1) {
                            Some(n) if n.is_ascii_digit() => true,
                            Some('+' | '-') => chars.get(i + 2).is_some_and(char::is_ascii_digit),
                            _ => false,
                        };
                    if d.is_ascii_digit() || d == '.' || d == '/' {
                        i += 1;
                    } else if exp_follows {
                        i += 2;
                    } else {
                        break;
                    }
                }
                out.push((Token::Number(chars[start..i].iter().collect()), col));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Token::Ident(chars[start..i].iter().collect()), col));
            }
            other => return Err(syntax(line, col, alloc::format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct LineParser<'a> {
    tokens: &'a [Spanned],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl LineParser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_column, |(_, c)| *c)
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        syntax(self.line, self.column(), msg)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Token) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.error(alloc::format!("expected {want}, found {t}"))),
            None => Err(self.error(alloc::format!("expected {want}, found end of line"))),
        }
    }

    fn number(&mut self) -> Result<Rational, ParseError> {
        let col = self.column();
        match self.next() {
            Some(Token::Number(s)) => parse_rational(&s)
                .ok_or_else(|| syntax(self.line, col, alloc::format!("malformed number `{s}`"))),
            Some(t) => Err(syntax(self.line, col, alloc::format!("expected a number, found {t}"))),
            None => Err(syntax(self.line, col, "expected a number, found end of line")),
        }
    }

    fn side(&mut self) -> Result<Vec<(String, Rational)>, ParseError> {
        // The literal `0` on its own is the zero complex.
        if let (Some(Token::Number(s)), next) = (self.peek(), self.tokens.get(self.pos + 1)) {
            let ends = matches!(next, None | Some((Token::Arrow | Token::BiArrow | Token::Semi, _)));
            if ends && parse_rational(s).is_some_and(|v| v.is_zero()) {
                self.pos += 1;
                return Ok(Vec::new());
            }
        }
        let mut terms = Vec::new();
        loop {
            let coeff = if matches!(self.peek(), Some(Token::Number(_))) {
                let col = self.column();
                let c = self.number()?;
                if !c.is_positive() {
                    return Err(syntax(self.line, col, "stoichiometric coefficient must be positive"));
                }
                c
            } else {
                Rational::from_integer(1.into())
            };
            match self.next() {
                Some(Token::Ident(name)) => terms.push((name, coeff)),
                Some(t) => {
                    self.pos -= 1;
                    return Err(self.error(alloc::format!("expected a species name, found {t}")));
                }
                None => return Err(self.error("expected a species name, found end of line")),
            }
            if self.peek() == Some(&Token::Plus) {
                self.pos += 1;
            } else {
                return Ok(terms);
            }
        }
    }
}

/// Parses the reaction DSL into a validated network.
pub fn parse_network(text: &str) -> Result<ReactionNetwork, ParseError> {
    let mut builder = NetworkBuilder::new();
    let mut count = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let tokens = tokenize(content, line)?;
        let mut p = LineParser {
            tokens: &tokens,
            pos: 0,
            line,
            end_column: content.chars().count() + 1,
        };
        let label = match p.next() {
            Some(Token::Ident(l)) => l,
            _ => {
                p.pos = 0;
                return Err(p.error("expected a reaction label"));
            }
        };
        p.expect(Token::Colon)?;
        let lhs = p.side()?;
        let reversible = match p.next() {
            Some(Token::Arrow) => false,
            Some(Token::BiArrow) => true,
            _ => {
                p.pos -= 1;
                return Err(p.error("expected `->` or `<->`"));
            }
        };
        let rhs = p.side()?;
        p.expect(Token::Semi)?;

        let mut kf = None;
        let mut kb = None;
        while let Some(tok) = p.peek().cloned() {
            let col = p.column();
            let Token::Ident(key) = tok else {
                return Err(p.error(alloc::format!("expected `kf=` or `kb=`, found {tok}")));
            };
            p.pos += 1;
            p.expect(Token::Equals)?;
            let value = p.number()?;
            let slot = match key.as_str() {
                "kf" => &mut kf,
                "kb" => &mut kb,
                other => {
                    return Err(syntax(line, col, alloc::format!("unknown rate key `{other}`")))
                }
            };
            if slot.replace(value).is_some() {
                return Err(syntax(line, col, alloc::format!("rate `{key}` given twice")));
            }
        }
        let Some(kf) = kf else {
            return Err(p.error("missing `kf=`"));
        };

        let lhs_ref: Vec<(&str, Rational)> = lhs.iter().map(|(s, c)| (s.as_str(), c.clone())).collect();
        let rhs_ref: Vec<(&str, Rational)> = rhs.iter().map(|(s, c)| (s.as_str(), c.clone())).collect();
        builder
            .reaction(&label, &lhs_ref, &rhs_ref, reversible, kf, kb)
            .map_err(|e| ParseError {
                line,
                column: 1,
                kind: ParseErrorKind::Network(e),
            })?;
        count += 1;
    }
    if count == 0 {
        return Err(ParseError {
            line: 0,
            column: 0,
            kind: ParseErrorKind::Empty,
        });
    }
    Ok(builder.build())
}
