//! Independently checked upper-bound certificates for the box
//! relaxation.
//!
//! For `max tr(M·X)` over `L ≤ X ≤ U`, `X ⪰ 0`, any entrywise
//! nonnegative P and N with `P − N − M ⪰ 0` give
//! `tr(M·X) ≤ tr(P·U) − tr(N·L)`: split `M = P − N − S`, bound
//! `tr(P·X) ≤ tr(P·U)` and `tr(N·X) ≥ tr(N·L)` entrywise, and drop
//! `tr(S·X) ≥ 0`. The bound is evaluated with outward rounding, so it
//! holds no matter where the candidate pair came from.

use crate::matrix::SymMatrix;
use crate::problem::BoxSdp;
use qz_forms::round::{add_up, sub_up};

fn all_finite(m: &SymMatrix) -> bool {
    let n = m.n();
    (0..n).all(|i| (i..n).all(|j| m.get(i, j).is_finite()))
}

fn is_exactly_zero(m: &SymMatrix) -> bool {
    let n = m.n();
    (0..n).all(|i| (i..n).all(|j| m.get(i, j) == 0.0))
}

/// Certified upper bound on the relaxation optimum derived from a
/// candidate multiplier pair. The pair is clamped entrywise nonnegative
/// and, when `P − N − M` is not provably PSD, repaired by a diagonal
/// shift on P. Returns +∞ when the candidate is unusable; never returns
/// an unsound (too small) value.
pub fn certify_upper(problem: &BoxSdp, pos: &SymMatrix, neg: &SymMatrix) -> f64 {
    if !all_finite(pos) || !all_finite(neg) {
        return f64::INFINITY;
    }
    let mut pos = pos.entrywise_pos();
    let neg = neg.entrywise_pos();
    let slack_matrix = pos.sub(&neg).sub(&problem.objective);
    if !is_exactly_zero(&slack_matrix) {
        let norm = slack_matrix.frob_norm();
        let eig = match slack_matrix.jacobi_eigen() {
            Ok(eig) if norm.is_finite() => eig,
            _ => return f64::INFINITY,
        };
        let min_eig = eig.values.iter().copied().fold(f64::INFINITY, f64::min);
        // How far the computed spectrum can sit from the true one: the
        // residual off-diagonal mass, plus rotation roundoff (≲ 3e−13·‖S‖
        // for 50 sweeps at these dimensions) and the rounding of forming
        // S itself whenever any rotation ran. Zero rotations mean the
        // input was exactly diagonal and the values are exact.
        let eig_slop = eig.off_norm
            + if eig.rotations > 0 {
                1e-12 * (1.0 + norm)
            } else {
                0.0
            };
        if min_eig < eig_slop {
            // Shift P's diagonal until P − N − M is PSD with margin; the
            // trailing term covers the rounding of the shift itself.
            let n = problem.dim();
            let max_diag = (0..n).map(|i| pos.get(i, i).abs()).fold(0.0_f64, f64::max);
            let shift =
                1.000001 * (eig_slop - min_eig) + 1e-13 * (1.0 + max_diag);
            if !shift.is_finite() {
                return f64::INFINITY;
            }
            pos.add_diag(shift);
        }
    }
    let bound = sub_up(
        pos.trace_product_up(&problem.upper),
        neg.trace_product_down(&problem.lower),
    );
    let bound = add_up(bound, problem.slack);
    if bound.is_nan() {
        f64::INFINITY
    } else {
        bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admm::{admm_solve, AdmmParams};
    use crate::problem::lift;
    use qz_forms::parse_form;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_dual_for_the_square_form_certifies_one() {
        // For q = ε₁² the objective has a single unit diagonal entry;
        // pricing it against its upper bound 1 is the exact dual.
        let q = parse_form("e1*e1").unwrap();
        let problem = lift(&q);
        let pos = problem.objective.entrywise_pos();
        let neg = problem.objective.entrywise_neg();
        assert_eq!(certify_upper(&problem, &pos, &neg), 1.0);
    }

    #[test]
    fn zero_duals_certify_zero_for_a_negative_semidefinite_objective() {
        // q = −ε₁²: M ⪯ 0, so P = N = 0 is already a valid pair and the
        // bound is exactly 0 = sup q.
        let q = parse_form("-1*e1*e1").unwrap();
        let problem = lift(&q);
        let zero = SymMatrix::zeros(problem.dim());
        assert_eq!(certify_upper(&problem, &zero, &zero), 0.0);
    }

    #[test]
    fn perturbed_duals_stay_sound_and_reasonable_after_repair() {
        // Jittered copies of the solver's multipliers must still certify
        // a bound between the true sup 1/4 and the coefficient-sum bound 1.
        let q = parse_form("e1 - e1*e1").unwrap();
        let problem = lift(&q);
        let out = admm_solve(&problem, &AdmmParams::default());
        assert!(out.converged);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let d = problem.dim();
            let jitter = |m: &SymMatrix, rng: &mut ChaCha8Rng| {
                SymMatrix::from_fn(d, |i, j| m.get(i, j) + rng.random_range(-1e-3..1e-3))
            };
            let pos = jitter(&out.dual_pos, &mut rng);
            let neg = jitter(&out.dual_neg, &mut rng);
            let bound = certify_upper(&problem, &pos, &neg);
            assert!(bound >= 0.25, "repaired bound {bound} undershoots sup");
            assert!(bound <= 1.0, "repaired bound {bound} exceeds the naive bound");
        }
    }

    #[test]
    fn repair_makes_an_indefinite_candidate_usable() {
        let q = parse_form("2 - e1*e1 + e1*e2").unwrap();
        let problem = lift(&q);
        // Zero duals have slack matrix −M, indefinite here; the repair
        // must still yield a finite, sound bound.
        let zero = SymMatrix::zeros(problem.dim());
        let bound = certify_upper(&problem, &zero, &zero);
        assert!(bound.is_finite());
        // sup q = 2 + sup(ε₁ε₂ − ε₁²) ≥ q(0, 0) = 2.
        assert!(bound >= 2.0);
    }

    #[test]
    fn garbage_candidates_are_rejected() {
        let q = parse_form("e1*e1").unwrap();
        let problem = lift(&q);
        let zero = SymMatrix::zeros(problem.dim());
        let mut bad = SymMatrix::zeros(problem.dim());
        bad.set(0, 0, f64::NAN);
        assert_eq!(certify_upper(&problem, &bad, &zero), f64::INFINITY);
        let mut inf = SymMatrix::zeros(problem.dim());
        inf.set(0, 1, f64::INFINITY);
        assert_eq!(certify_upper(&problem, &zero, &inf), f64::INFINITY);
    }
}
