//! Recursive-descent parser producing the shared expression AST.
//!
//! Precedence: `*` and `/` bind tighter than `+` and `-`; unary `-` binds
//! tightest. `if`/`else` and `while` bodies are always braced. Variables
//! must be assigned before they are first read; the check runs during
//! parsing (branches of an `if` contribute the intersection of their
//! assignment sets, a `while` body contributes nothing since it may run
//! zero times).

use std::collections::BTreeSet;

use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};
use qz_domain::{BinOp, CmpOp, Expr, RelExpr};
use thiserror::Error;

use crate::lexer::{tokenize, LexError, Token, TokenKind};

/// A statement of the analysis language.
#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Assign(String, Expr),
    Assume(RelExpr),
    If(RelExpr, Vec<Stmt>, Vec<Stmt>),
    While(RelExpr, Vec<Stmt>),
}

/// A parsed program.
#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub stmts: Vec<Stmt>,
}

impl Program {
    /// Every variable the program assigns, in name order. Because reads
    /// are checked against prior assignments, this is the full variable
    /// set of the program.
    pub fn vars(&self) -> BTreeSet<String> {
        fn walk(stmts: &[Stmt], out: &mut BTreeSet<String>) {
            for s in stmts {
                match s {
                    Stmt::Assign(name, _) => {
                        out.insert(name.clone());
                    }
                    Stmt::Assume(_) => {}
                    Stmt::If(_, t, e) => {
                        walk(t, out);
                        walk(e, out);
                    }
                    Stmt::While(_, body) => walk(body, out),
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(&self.stmts, &mut out);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("{line}:{col}: expected {expected}, found {found}")]
    Unexpected {
        expected: String,
        found: String,
        line: usize,
        col: usize,
    },
    #[error("unexpected end of input; expected {expected}")]
    Eof { expected: String },
    #[error("{line}:{col}: numeric literal `{text}` overflows binary64")]
    NumberOverflow {
        text: String,
        line: usize,
        col: usize,
    },
    #[error("{line}:{col}: empty interval literal (lower bound exceeds upper bound)")]
    EmptyInterval { line: usize, col: usize },
    #[error("{line}:{col}: variable `{name}` is read before assignment")]
    ReadBeforeAssign {
        name: String,
        line: usize,
        col: usize,
    },
}

/// Parses a source text into a checked program.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        defined: BTreeSet::new(),
    };
    let mut stmts = Vec::new();
    while p.peek().is_some() {
        stmts.push(p.stmt()?);
    }
    Ok(Program { stmts })
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Variables definitely assigned on every path to the current point.
    defined: BTreeSet<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn take(&mut self, kind: &TokenKind) -> bool {
        if self.peek().map(|t| &t.kind) == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::Unexpected {
                expected: expected.to_string(),
                found: t.kind.to_string(),
                line: t.line,
                col: t.col,
            },
            None => ParseError::Eof {
                expected: expected.to_string(),
            },
        }
    }

    fn expect(&mut self, kind: &TokenKind, expected: &str) -> Result<Token, ParseError> {
        if self.peek().map(|t| &t.kind) == Some(kind) {
            Ok(self.advance().unwrap())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.unexpected("a statement"));
        };
        match tok.kind {
            TokenKind::Ident(name) => {
                self.advance();
                self.expect(&TokenKind::Assign, "`=`")?;
                let rhs = self.expr()?;
                self.expect(&TokenKind::Semi, "`;`")?;
                self.defined.insert(name.clone());
                Ok(Stmt::Assign(name, rhs))
            }
            TokenKind::KwAssume => {
                self.advance();
                self.expect(&TokenKind::LParen, "`(`")?;
                let rel = self.rel()?;
                self.expect(&TokenKind::RParen, "`)`")?;
                self.expect(&TokenKind::Semi, "`;`")?;
                Ok(Stmt::Assume(rel))
            }
            TokenKind::KwIf => {
                self.advance();
                self.expect(&TokenKind::LParen, "`(`")?;
                let cond = self.rel()?;
                self.expect(&TokenKind::RParen, "`)`")?;
                let entry = self.defined.clone();
                let then_block = self.block()?;
                let after_then = std::mem::replace(&mut self.defined, entry);
                let else_block = if self.take(&TokenKind::KwElse) {
                    self.block()?
                } else {
                    Vec::new()
                };
                let after_else = std::mem::take(&mut self.defined);
                self.defined = after_then.intersection(&after_else).cloned().collect();
                Ok(Stmt::If(cond, then_block, else_block))
            }
            TokenKind::KwWhile => {
                self.advance();
                self.expect(&TokenKind::LParen, "`(`")?;
                let cond = self.rel()?;
                self.expect(&TokenKind::RParen, "`)`")?;
                let entry = self.defined.clone();
                let body = self.block()?;
                // The body may run zero times, so its assignments do not
                // count as definite after the loop.
                self.defined = entry;
                Ok(Stmt::While(cond, body))
            }
            _ => Err(self.unexpected("a statement (`ident =`, `assume`, `if`, or `while`)")),
        }
    }

    fn block(&mut self) -> Result<Vec<Stmt>, ParseError> {
        self.expect(&TokenKind::LBrace, "`{`")?;
        let mut stmts = Vec::new();
        while !self.take(&TokenKind::RBrace) {
            if self.peek().is_none() {
                return Err(self.unexpected("`}`"));
            }
            stmts.push(self.stmt()?);
        }
        Ok(stmts)
    }

    fn rel(&mut self) -> Result<RelExpr, ParseError> {
        let lhs = self.expr()?;
        let cmp = match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Ge) => CmpOp::Ge,
            Some(TokenKind::Le) => CmpOp::Le,
            Some(TokenKind::Gt) => CmpOp::Gt,
            Some(TokenKind::Lt) => CmpOp::Lt,
            Some(TokenKind::EqEq) => CmpOp::Eq,
            Some(TokenKind::Ne) => CmpOp::Ne,
            _ => return Err(self.unexpected("a comparison operator")),
        };
        self.advance();
        let rhs = self.expr()?;
        Ok(RelExpr::new(lhs, cmp, rhs))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.term()?;
        loop {
            let op = match self.peek().map(|t| &t.kind) {
                Some(TokenKind::Plus) => BinOp::Add,
                Some(TokenKind::Minus) => BinOp::Sub,
                _ => break,
            };
            self.advance();
            e = Expr::bin(op, e, self.term()?);
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.factor()?;
        loop {
            let op = match self.peek().map(|t| &t.kind) {
                Some(TokenKind::Star) => BinOp::Mul,
                Some(TokenKind::Slash) => BinOp::Div,
                _ => break,
            };
            self.advance();
            e = Expr::bin(op, e, self.factor()?);
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        const EXPECTED: &str = "a number, identifier, `[`, `(`, `-`, or `sqrt`";
        let Some(tok) = self.peek().cloned() else {
            return Err(self.unexpected(EXPECTED));
        };
        match tok.kind {
            TokenKind::Number(text) => {
                self.advance();
                let (value, conv_err) = parse_literal(&text, tok.line, tok.col)?;
                Ok(Expr::Const { value, conv_err })
            }
            TokenKind::Ident(name) => {
                self.advance();
                if !self.defined.contains(&name) {
                    return Err(ParseError::ReadBeforeAssign {
                        name,
                        line: tok.line,
                        col: tok.col,
                    });
                }
                Ok(Expr::Var(name))
            }
            TokenKind::LBracket => {
                self.advance();
                let lo = self.signed_endpoint(Endpoint::Lower)?;
                self.expect(&TokenKind::Comma, "`,`")?;
                let hi = self.signed_endpoint(Endpoint::Upper)?;
                self.expect(&TokenKind::RBracket, "`]`")?;
                if lo > hi {
                    return Err(ParseError::EmptyInterval {
                        line: tok.line,
                        col: tok.col,
                    });
                }
                Ok(Expr::Range { lo, hi })
            }
            TokenKind::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(&TokenKind::RParen, "`)`")?;
                Ok(e)
            }
            TokenKind::Minus => {
                self.advance();
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            TokenKind::KwSqrt => {
                self.advance();
                self.expect(&TokenKind::LParen, "`(`")?;
                let e = self.expr()?;
                self.expect(&TokenKind::RParen, "`)`")?;
                Ok(Expr::Sqrt(Box::new(e)))
            }
            _ => Err(self.unexpected(EXPECTED)),
        }
    }

    /// An interval-literal endpoint: a number with an optional leading
    /// minus. The binary64 endpoint is rounded outward so the represented
    /// interval encloses the written decimal one.
    fn signed_endpoint(&mut self, which: Endpoint) -> Result<f64, ParseError> {
        let neg = self.take(&TokenKind::Minus);
        let tok = self.peek().cloned();
        let Some(Token {
            kind: TokenKind::Number(text),
            line,
            col,
        }) = tok
        else {
            return Err(self.unexpected("a number"));
        };
        self.advance();
        let signed = if neg { format!("-{text}") } else { text };
        let (value, _) = parse_literal(&signed, line, col)?;
        Ok(round_outward(&signed, value, which))
    }
}

#[derive(Clone, Copy)]
enum Endpoint {
    Lower,
    Upper,
}

/// Parses a numeric literal to binary64 plus an upper bound on the
/// decimal→binary64 conversion error (zero when exactly representable).
fn parse_literal(text: &str, line: usize, col: usize) -> Result<(f64, f64), ParseError> {
    let value: f64 = text
        .parse()
        .expect("scanner only produces well-formed numerals");
    if !value.is_finite() {
        return Err(ParseError::NumberOverflow {
            text: text.to_string(),
            line,
            col,
        });
    }
    let diff = (exact_decimal(text) - BigRational::from_float(value).unwrap()).abs();
    if diff.is_zero() {
        Ok((value, 0.0))
    } else {
        // `to_f64` rounds to nearest; two upward steps make the bound sound.
        let approx = diff.to_f64().filter(|v| v.is_finite()).unwrap_or(f64::MAX);
        Ok((value, approx.next_up().next_up()))
    }
}

/// The exact rational value a decimal numeral denotes. Exponents beyond
/// ±4000 are clamped toward zero, which can only enlarge the distance to
/// the parsed binary64 value (the bound stays sound; overflowing literals
/// are rejected before this runs).
fn exact_decimal(text: &str) -> BigRational {
    let (mant, exp) = match text.find(['e', 'E']) {
        Some(i) => {
            let e = &text[i + 1..];
            let exp = e.parse::<i64>().unwrap_or_else(|_| {
                if e.starts_with('-') {
                    i64::MIN
                } else {
                    i64::MAX
                }
            });
            (&text[..i], exp)
        }
        None => (text, 0i64),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    let digits: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .expect("scanner only produces decimal digits");
    let shift = exp
        .saturating_sub(frac_part.len() as i64)
        .clamp(-4000, 4000);
    let pow = num::pow::pow(BigInt::from(10), shift.unsigned_abs() as usize);
    if shift >= 0 {
        BigRational::from_integer(digits * pow)
    } else {
        BigRational::new(digits, pow)
    }
}

/// Nudges a parsed endpoint one step outward when rounding-to-nearest
/// moved it inside the written decimal value.
fn round_outward(text: &str, value: f64, which: Endpoint) -> f64 {
    let exact = exact_decimal(text);
    let parsed = BigRational::from_float(value).unwrap();
    match which {
        Endpoint::Lower if parsed > exact => value.next_down(),
        Endpoint::Upper if parsed < exact => value.next_up(),
        _ => value,
    }
}
