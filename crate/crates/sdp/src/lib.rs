//! Certified range bounds for quadratic forms over boxed noise symbols.
//!
//! The exact range of a quadratic form is an NP-hard nonconvex problem,
//! so this crate bounds it from both sides:
//!
//! * [`lift`] rewrites the form as a trace objective over a rank-one
//!   matrix and relaxes it to a box-constrained semidefinite program;
//! * [`admm_solve`] solves the relaxation with a projection-based
//!   splitting loop;
//! * [`certify_upper`] turns the solver's multipliers into an upper
//!   bound that is verified independently with outward rounding, so
//!   solver inaccuracy can cost tightness but never soundness;
//! * [`gamma_sdp`] packages both sides and clamps against the
//!   coefficient-sum range, which it can therefore only improve;
//! * [`grid_range`] approximates the true range from the inside by
//!   sampling, for sandwich-style validation of the outer bounds.

pub mod admm;
pub mod certify;
pub mod gamma;
pub mod grid;
pub mod matrix;
pub mod problem;

pub use admm::{admm_solve, AdmmOutcome, AdmmParams};
pub use certify::certify_upper;
pub use gamma::{certified_sup, certified_sup_with, gamma_sdp, gamma_sdp_with};
pub use grid::grid_range;
pub use matrix::{Dense, Eigen, EigenError, SymMatrix};
pub use problem::{lift, rank_one, BoxSdp};
