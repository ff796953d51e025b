use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use super::{BinOp, Expr, Func};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at byte {offset}: found {found}, expected one of {}", .expected.join(", "))]
    Syntax {
        offset: usize,
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("malformed number `{text}` at byte {offset}")]
    BadNumber { text: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Empty => None,
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::BadNumber { offset, .. } => Some(*offset),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Complex64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(c) => write!(f, "number {c}"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' => out.push((Tok::Star, start)),
            b'/' => out.push((Tok::Slash, start)),
            b'^' => out.push((Tok::Caret, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // exponent part: e, E followed by optional sign and digits
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError::BadNumber {
                    text: text.to_string(),
                    offset: start,
                })?;
                let imaginary = i < bytes.len()
                    && bytes[i] == b'i'
                    && !bytes.get(i + 1).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_');
                if imaginary {
                    i += 1;
                    out.push((Tok::Num(Complex64::new(0.0, value)), start));
                } else {
                    out.push((Tok::Num(Complex64::new(value, 0.0)), start));
                }
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    offset: start,
                    found: format!("`{ch}`"),
                    expected: vec!["number", "identifier", "operator", "`(`", "`)`"],
                });
            }
        }
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

const PRIMARY_START: &[&str] = &["number", "`z`", "`i`", "`pi`", "function call", "`(`", "`-`"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            found: self.peek().to_string(),
            expected: expected.to_vec(),
        }
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::bin(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Num(c) => {
                self.bump();
                Ok(Expr::Lit(c))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "z" => Ok(Expr::Var),
                    "i" => Ok(Expr::Lit(Complex64::new(0.0, 1.0))),
                    "pi" => Ok(Expr::Pi),
                    other => match Func::from_name(other) {
                        Some(func) => {
                            self.expect(Tok::LParen, "`(`")?;
                            let arg = self.expr()?;
                            self.expect(Tok::RParen, "`)`")?;
                            Ok(Expr::call(func, arg))
                        }
                        None => Err(ParseError::UnknownIdentifier {
                            name: other.to_string(),
                            offset,
                        }),
                    },
                }
            }
            _ => Err(self.error(PRIMARY_START)),
        }
    }
}

/// Parse an expression in `z`.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    if src.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variable_and_literals() {
        assert_eq!(parse("z").unwrap(), Expr::Var);
        assert_eq!(parse("i").unwrap(), Expr::Lit(Complex64::new(0.0, 1.0)));
        assert_eq!(parse("2.5i").unwrap(), Expr::Lit(Complex64::new(0.0, 2.5)));
        assert_eq!(parse("1e-3").unwrap(), Expr::real(1e-3));
        assert_eq!(parse("pi").unwrap(), Expr::Pi);
    }

    #[test]
    fn pow_with_negated_exponent() {
        let e = parse("(1-z)^(-0.3)").unwrap();
        let Expr::Bin(BinOp::Pow, base, exp) = e else { panic!("not a pow node") };
        assert_eq!(*base, Expr::bin(BinOp::Sub, Expr::real(1.0), Expr::Var));
        assert_eq!(*exp, Expr::Neg(Box::new(Expr::real(0.3))));
    }

    #[test]
    fn precedence_and_associativity() {
        // pow binds tighter than unary minus
        assert_eq!(
            parse("-z^2").unwrap(),
            Expr::Neg(Box::new(Expr::bin(BinOp::Pow, Expr::Var, Expr::real(2.0))))
        );
        // pow is right associative
        assert_eq!(
            parse("z^2^3").unwrap(),
            Expr::bin(BinOp::Pow, Expr::Var, Expr::bin(BinOp::Pow, Expr::real(2.0), Expr::real(3.0)))
        );
        // subtraction is left associative
        assert_eq!(
            parse("1-z-2").unwrap(),
            Expr::bin(BinOp::Sub, Expr::bin(BinOp::Sub, Expr::real(1.0), Expr::Var), Expr::real(2.0))
        );
        // mul binds tighter than add
        assert_eq!(
            parse("1+2*z").unwrap(),
            Expr::bin(BinOp::Add, Expr::real(1.0), Expr::bin(BinOp::Mul, Expr::real(2.0), Expr::Var))
        );
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(parse("   "), Err(ParseError::Empty));
        let err = parse("z + w").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownIdentifier {
                name: "w".into(),
                offset: 4
            }
        );
        let err = parse("(1 - z").unwrap_err();
        assert_eq!(err.offset(), Some(6));
        assert!(matches!(err, ParseError::Syntax { ref expected, .. } if expected == &vec!["`)`"]));
        let err = parse("z * ").unwrap_err();
        assert_eq!(err.offset(), Some(4));
        let err = parse("z z").unwrap_err();
        assert_eq!(err.offset(), Some(2));
        assert!(parse("sin(z)").is_err());
        assert!(parse("1.2.3").is_err());
        assert!(parse("z # 2").is_err());
    }
}
