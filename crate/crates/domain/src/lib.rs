//! Abstract environments for range analysis of straight-line and branching
//! arithmetic programs.
//!
//! The main environment, [`QuadVector`], binds program variables to shared
//! quadratic forms and supports the usual abstract-interpretation operations:
//! expression evaluation, assignment, join/meet over a common variable set,
//! and guard refinement by constraint back-propagation. Two cheaper
//! backends over the same expression language — plain intervals and affine
//! forms — live in [`baseline`], with [`AnyEnv`] dispatching between all
//! three.

pub mod baseline;
pub mod env;
pub mod expr;
pub mod guard;
pub mod join;
pub mod value;

pub use baseline::{AffValue, AffineEnv, AnyEnv, Backend, IntervalEnv};
pub use env::{box_leq, QuadVector, VarBox};
pub use expr::{BinOp, CmpOp, Expr, RelExpr};
pub use join::{argmin, extend, join_q, meet_q, JoinParts};
pub use value::{Concretization, DomainError, DomainValue, EvalNote, EvalSettings};
