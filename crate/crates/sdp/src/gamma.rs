//! Relaxation-backed concretization of quadratic forms.

use crate::admm::{admm_solve, AdmmParams};
use crate::certify::certify_upper;
use crate::problem::{lift, BoxSdp};
use qz_forms::{ExtInterval, QuadForm};

/// Certified upper bound on the optimum of one lifted problem: the best
/// of the solver-seeded and the objective-seeded certificates, or +∞
/// when the solve hit its iteration cap (the caller then falls back to
/// the coefficient-sum bound).
fn certified_max(problem: &BoxSdp, params: &AdmmParams) -> f64 {
    let outcome = admm_solve(problem, params);
    if !outcome.converged {
        return f64::INFINITY;
    }
    let from_dual = certify_upper(problem, &outcome.dual_pos, &outcome.dual_neg);
    let from_objective = certify_upper(
        problem,
        &problem.objective.entrywise_pos(),
        &problem.objective.entrywise_neg(),
    );
    from_dual.min(from_objective)
}

fn negated(problem: &BoxSdp) -> BoxSdp {
    BoxSdp {
        objective: problem.objective.scaled(-1.0),
        lower: problem.lower.clone(),
        upper: problem.upper.clone(),
        slack: problem.slack,
    }
}

/// Certified upper bound on `sup q` over the noise box. Always sound;
/// +∞ when no certificate is available.
pub fn certified_sup(q: &QuadForm) -> f64 {
    certified_sup_with(q, &AdmmParams::default())
}

pub fn certified_sup_with(q: &QuadForm, params: &AdmmParams) -> f64 {
    certified_max(&lift(q), params)
}

/// Concretization through the semidefinite relaxation, clamped against
/// the coefficient-sum range so it can only tighten. Forms without
/// quadratic terms skip the solver: their coefficient-sum range is
/// already exact.
pub fn gamma_sdp(q: &QuadForm) -> ExtInterval {
    gamma_sdp_with(q, &AdmmParams::default())
}

pub fn gamma_sdp_with(q: &QuadForm, params: &AdmmParams) -> ExtInterval {
    let mt = q.concretize_mt();
    if q.quad().is_empty() {
        return mt;
    }
    let problem = lift(q);
    let hi = certified_max(&problem, params).min(mt.hi());
    // inf q = −sup(−q), solved on the same box with the objective negated.
    let lo = (-certified_max(&negated(&problem), params)).max(mt.lo());
    // Both endpoints are outer bounds of the same nonempty range, so
    // they cannot cross.
    ExtInterval::new(lo, hi).unwrap_or(mt)
}
