//! Arithmetic and relational expression trees.
//!
//! This is the shared AST between the program frontend and the abstract
//! domains. Numeric literals carry the (nonnegative) magnitude of their
//! decimal→binary64 conversion error so that analyses accounting for
//! floating point can treat source constants as the exact decimals they
//! denote.

use std::fmt;

/// Binary arithmetic operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl fmt::Display for BinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        })
    }
}

/// An arithmetic expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// A numeric literal: the rounded binary64 value plus an upper bound on
    /// `|decimal − value|` (zero when the literal is exactly representable).
    Const { value: f64, conv_err: f64 },
    /// A nondeterministic input `[lo, hi]` with `lo ≤ hi`.
    Range { lo: f64, hi: f64 },
    Var(String),
    Bin {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Neg(Box<Expr>),
    Sqrt(Box<Expr>),
}

impl Expr {
    /// An exactly-representable constant (no conversion error).
    pub fn number(value: f64) -> Expr {
        Expr::Const {
            value,
            conv_err: 0.0,
        }
    }

    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn bin(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Bin {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    /// Applies `f` to every variable name in the tree.
    pub fn for_each_var(&self, f: &mut impl FnMut(&str)) {
        match self {
            Expr::Const { .. } | Expr::Range { .. } => {}
            Expr::Var(name) => f(name),
            Expr::Bin { lhs, rhs, .. } => {
                lhs.for_each_var(f);
                rhs.for_each_var(f);
            }
            Expr::Neg(e) | Expr::Sqrt(e) => e.for_each_var(f),
        }
    }
}

/// Relational comparison operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Ge,
    Le,
    Gt,
    Lt,
    Eq,
    Ne,
}

impl CmpOp {
    /// The comparison holding exactly when `self` does not. Over an abstract
    /// real domain strict and non-strict variants collapse (boundaries are
    /// kept on both sides), so this is a sound branch negation.
    pub fn negated(self) -> CmpOp {
        match self {
            CmpOp::Ge => CmpOp::Lt,
            CmpOp::Lt => CmpOp::Ge,
            CmpOp::Le => CmpOp::Gt,
            CmpOp::Gt => CmpOp::Le,
            CmpOp::Eq => CmpOp::Ne,
            CmpOp::Ne => CmpOp::Eq,
        }
    }

    /// True when the comparison `v ⋈ 0` holds.
    pub fn holds_against_zero(self, v: f64) -> bool {
        match self {
            CmpOp::Ge => v >= 0.0,
            CmpOp::Le => v <= 0.0,
            CmpOp::Gt => v > 0.0,
            CmpOp::Lt => v < 0.0,
            CmpOp::Eq => v == 0.0,
            CmpOp::Ne => v != 0.0,
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmpOp::Ge => ">=",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Lt => "<",
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
        })
    }
}

/// A comparison between two expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct RelExpr {
    pub lhs: Expr,
    pub cmp: CmpOp,
    pub rhs: Expr,
}

impl RelExpr {
    pub fn new(lhs: Expr, cmp: CmpOp, rhs: Expr) -> RelExpr {
        RelExpr { lhs, cmp, rhs }
    }

    /// The complementary comparison (for else-branches).
    pub fn negated(&self) -> RelExpr {
        RelExpr {
            lhs: self.lhs.clone(),
            cmp: self.cmp.negated(),
            rhs: self.rhs.clone(),
        }
    }

    /// The normalized left-hand side of `(lhs − rhs) ⋈ 0`. When the right
    /// side is literally zero the left side is returned as-is, keeping
    /// guard trees minimal.
    pub fn normalized_diff(&self) -> Expr {
        match &self.rhs {
            Expr::Const { value, conv_err } if *value == 0.0 && *conv_err == 0.0 => {
                self.lhs.clone()
            }
            _ => Expr::bin(BinOp::Sub, self.lhs.clone(), self.rhs.clone()),
        }
    }

    pub fn for_each_var(&self, f: &mut impl FnMut(&str)) {
        self.lhs.for_each_var(f);
        self.rhs.for_each_var(f);
    }
}
