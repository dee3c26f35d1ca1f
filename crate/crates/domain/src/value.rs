//! Domain values, concretization selection, and evaluation settings.

use qz_forms::{ExtInterval, QuadForm};
use qz_sdp::gamma_sdp;
use thiserror::Error;

/// Errors from environment-level operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("variable `{0}` is not bound in the environment")]
    Unbound(String),
    #[error("environments bind different variable sets (`{0}` on one side only)")]
    VarSetMismatch(String),
}

/// Which interval concretization to use for quadratic forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Concretization {
    /// Closed-form coefficient-sum bounds; cheap and always available.
    #[default]
    Mt,
    /// Certified semidefinite bounds, clamped to never exceed the
    /// coefficient-sum bounds.
    Sdp,
}

impl Concretization {
    /// The configured interval enclosure of a form's range.
    pub fn range(self, q: &QuadForm) -> ExtInterval {
        match self {
            Concretization::Mt => q.concretize_mt(),
            Concretization::Sdp => gamma_sdp(q),
        }
    }
}

impl std::fmt::Display for Concretization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Concretization::Mt => "mt",
            Concretization::Sdp => "sdp",
        })
    }
}

/// Settings threaded through evaluation, joins, and guards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalSettings {
    pub conc: Concretization,
    /// Account for the decimal→binary64 conversion error of source
    /// literals. (Operator rounding is always accounted, regardless.)
    pub fp: bool,
    /// Number of forward/backward refinement rounds a guard runs.
    pub backward_passes: usize,
}

impl Default for EvalSettings {
    fn default() -> Self {
        EvalSettings {
            conc: Concretization::Mt,
            fp: false,
            backward_passes: 1,
        }
    }
}

/// An abstract value: a quadratic form, or one of the two lattice extremes.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainValue {
    /// No concrete value (unreachable).
    Bottom,
    Form(QuadForm),
    /// Any real value.
    Top,
}

impl DomainValue {
    pub fn is_bottom(&self) -> bool {
        matches!(self, DomainValue::Bottom)
    }

    pub fn is_top(&self) -> bool {
        matches!(self, DomainValue::Top)
    }

    pub fn as_form(&self) -> Option<&QuadForm> {
        match self {
            DomainValue::Form(q) => Some(q),
            _ => None,
        }
    }

    /// The value's interval range under the chosen concretization.
    /// `Bottom` has no range.
    pub fn range(&self, conc: Concretization) -> Option<ExtInterval> {
        match self {
            DomainValue::Bottom => None,
            DomainValue::Form(q) => Some(conc.range(q)),
            DomainValue::Top => Some(ExtInterval::whole()),
        }
    }
}

/// Notes emitted when evaluation loses information or hits a partial
/// operation; surfaced as analyzer warnings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalNote {
    /// A divisor's range contains zero; the quotient became `Top`.
    DivisorMayBeZero,
    /// A √ argument's range is entirely negative; the result became `Top`.
    SqrtOfNegative,
    /// Coefficient arithmetic left the representable range; the result
    /// became `Top`.
    RangeOverflow,
}

impl std::fmt::Display for EvalNote {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EvalNote::DivisorMayBeZero => {
                "divisor range contains zero; quotient widened to top"
            }
            EvalNote::SqrtOfNegative => {
                "sqrt argument range is entirely negative; result widened to top"
            }
            EvalNote::RangeOverflow => {
                "coefficient overflow; result widened to top"
            }
        })
    }
}
