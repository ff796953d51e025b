//! A small language for analytic functions of one complex variable `z`.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          (right associative)
//! primary := number ['i'] | 'i' | 'z' | 'pi'
//!          | ('exp' | 'log' | 'sqrt') '(' expr ')' | '(' expr ')'
//! ```
//!
//! Evaluation uses principal branches throughout.

mod diff;
mod parser;

use std::fmt;

use num_complex::Complex64;

use crate::error::{finite, EvalError};
use crate::funcore::{principal_log, principal_pow, principal_sqrt};

pub use diff::differentiate;
pub use parser::{parse, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        match name {
            "exp" => Some(Func::Exp),
            "log" => Some(Func::Log),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Expression tree. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var,
    Lit(Complex64),
    Pi,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn real(x: f64) -> Expr {
        Expr::Lit(Complex64::new(x, 0.0))
    }

    pub fn bin(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Bin(op, Box::new(l), Box::new(r))
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    /// True when the tree does not reference `z`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Var => false,
            Expr::Lit(_) | Expr::Pi => true,
            Expr::Neg(a) | Expr::Call(_, a) => a.is_constant(),
            Expr::Bin(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    pub fn as_literal(&self) -> Option<Complex64> {
        match self {
            Expr::Lit(c) => Some(*c),
            Expr::Pi => Some(Complex64::new(std::f64::consts::PI, 0.0)),
            _ => None,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Expr::Var | Expr::Lit(_) | Expr::Pi => 1,
            Expr::Neg(a) | Expr::Call(_, a) => 1 + a.size(),
            Expr::Bin(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let v = match self {
            Expr::Var => z,
            Expr::Lit(c) => *c,
            Expr::Pi => Complex64::new(std::f64::consts::PI, 0.0),
            Expr::Neg(a) => -a.eval(z)?,
            Expr::Bin(op, a, b) => {
                let x = a.eval(z)?;
                let y = b.eval(z)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == Complex64::new(0.0, 0.0) {
                            return Err(EvalError::Pole { at: z });
                        }
                        x / y
                    }
                    BinOp::Pow => pow_at(x, y, z)?,
                }
            }
            Expr::Call(f, a) => {
                let x = a.eval(z)?;
                match f {
                    Func::Exp => x.exp(),
                    Func::Log => principal_log(x).map_err(|_| EvalError::BranchPoint {
                        at: z,
                        what: "log(0)",
                    })?,
                    Func::Sqrt => principal_sqrt(x),
                }
            }
        };
        finite(z, v)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Bin(BinOp::Pow, ..) => 4,
            Expr::Lit(c) if !literal_is_atomic(*c) => 0,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Var => write!(f, "z"),
            Expr::Pi => write!(f, "pi"),
            Expr::Lit(c) => write_literal(f, *c),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.write_at(f, 3)
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write_at(f, 0)?;
                write!(f, ")")
            }
            Expr::Bin(op, a, b) => {
                let (sym, lp, rp) = match op {
                    BinOp::Add => (" + ", 1, 2),
                    BinOp::Sub => (" - ", 1, 2),
                    BinOp::Mul => ("*", 2, 3),
                    BinOp::Div => ("/", 2, 3),
                    BinOp::Pow => ("^", 5, 3),
                };
                a.write_at(f, lp)?;
                write!(f, "{sym}")?;
                b.write_at(f, rp)
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

fn literal_is_atomic(c: Complex64) -> bool {
    let real = c.im == 0.0 && !c.re.is_sign_negative();
    let imag = c.re == 0.0 && !c.re.is_sign_negative() && !c.im.is_sign_negative();
    real || imag
}

fn write_literal(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    if c.im == 0.0 && !c.re.is_sign_negative() {
        write!(f, "{}", c.re)
    } else if c.re == 0.0 && !c.re.is_sign_negative() && !c.im.is_sign_negative() {
        if c.im == 1.0 {
            write!(f, "i")
        } else {
            write!(f, "{}i", c.im)
        }
    } else {
        // non-canonical literal (from constant folding): spell it as arithmetic
        let re = Expr::real(c.re.abs());
        let re = if c.re.is_sign_negative() { Expr::Neg(Box::new(re)) } else { re };
        let im = Expr::Lit(Complex64::new(0.0, c.im.abs()));
        let op = if c.im.is_sign_negative() { BinOp::Sub } else { BinOp::Add };
        Expr::bin(op, re, im).write_at(f, 0)
    }
}

fn pow_at(base: Complex64, exponent: Complex64, z: Complex64) -> Result<Complex64, EvalError> {
    principal_pow(base, exponent).map_err(|_| EvalError::BranchPoint {
        at: z,
        what: "0^a with Re(a) <= 0",
    })
}
