//! Quadratic and affine noise-symbol forms with rigorous floating-point
//! error accounting.
//!
//! A *quadratic form* represents a set of reals
//!
//! ```text
//! q(t) = c + Σᵢ bᵢ εᵢ + Σ_{i≤j} aᵢⱼ εᵢ εⱼ + c± ε± + c₊ ε₊ + c₋ ε₋
//! ```
//!
//! where the plain symbols `εᵢ` range over `[−1, 1]` and are shared between
//! forms (they carry correlations), while `ε± ∈ [−1, 1]`, `ε₊ ∈ [0, 1]` and
//! `ε₋ ∈ [−1, 0]` are per-form error slots that soak up nonlinear remainders
//! and rounding error. All operations are *sound*: the concretization of an
//! operation's result always contains every real value the operation can
//! take over the operands' concretizations.
//!
//! The crate also provides the affine (degree-1) variant used as a baseline,
//! error-free transformations (`two_sum` / `two_product`), directed-rounding
//! scalar helpers, interval types, and minimum-range linear bands for `1/x`
//! and `√x`.

pub mod affine;
pub mod eft;
pub mod interval;
pub mod minrange;
pub mod parse;
pub mod quad;
pub mod registry;
pub mod round;

pub use affine::AffineForm;
pub use interval::{ExtInterval, Interval, IntervalError};
pub use minrange::{min_range_band, BandError, LinearBand, UnaryFn};
pub use parse::{parse_form, FormParseError};
pub use quad::{route_range_to_slots, FormError, NoisePoint, QuadForm};
pub use registry::{NoiseRegistry, NoiseSym};
