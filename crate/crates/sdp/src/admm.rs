//! A splitting solver for the box-constrained semidefinite relaxation.
//!
//! `max tr(M·X)` over `L ≤ X ≤ U`, `X ⪰ 0` is split into a box-feasible
//! iterate and a PSD-feasible iterate that are driven together by an
//! ADMM loop in scaled form. The solver is only a proposal engine: the
//! entrywise duals it reports seed the certificate in
//! [`crate::certify`], which is checked independently, so an inaccurate
//! or unconverged solve can cost tightness but never soundness.

use crate::matrix::SymMatrix;
use crate::problem::BoxSdp;

#[derive(Debug, Clone)]
pub struct AdmmParams {
    /// Penalty weight ρ coupling the two iterates.
    pub rho: f64,
    /// Over-relaxation factor α ∈ [1, 2).
    pub relaxation: f64,
    /// Absolute tolerance on both primal and dual residuals.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for AdmmParams {
    fn default() -> Self {
        AdmmParams {
            rho: 1.0,
            relaxation: 1.6,
            tol: 1e-7,
            max_iters: 5000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AdmmOutcome {
    /// Box-feasible iterate.
    pub x: SymMatrix,
    /// PSD-feasible iterate.
    pub z: SymMatrix,
    /// Nonnegative parts of the entrywise box multipliers M − ρ·u:
    /// `dual_pos` prices the upper bounds, `dual_neg` the lower bounds.
    pub dual_pos: SymMatrix,
    pub dual_neg: SymMatrix,
    /// Objective value at `z` (plain arithmetic; diagnostic only).
    pub value: f64,
    pub iterations: usize,
    /// False once the iteration cap was hit or the PSD projection gave
    /// up; the iterates are then best-effort only.
    pub converged: bool,
}

pub fn admm_solve(problem: &BoxSdp, params: &AdmmParams) -> AdmmOutcome {
    let d = problem.dim();
    let rho = params.rho;
    let alpha = params.relaxation;
    let mut z = SymMatrix::zeros(d);
    let mut u = SymMatrix::zeros(d);
    let mut x = SymMatrix::zeros(d);
    let mut iterations = 0;
    let mut converged = false;
    for iter in 1..=params.max_iters {
        iterations = iter;
        // Box step: argmax of tr(M·x) − ρ/2·‖x − z + u‖² over the box.
        x = z
            .sub(&u)
            .add_scaled(&problem.objective, 1.0 / rho)
            .clamp_box(&problem.lower, &problem.upper);
        // Over-relaxed blend feeds the PSD projection and the dual.
        let x_hat = x.scaled(alpha).add_scaled(&z, 1.0 - alpha);
        let projected = match x_hat.add(&u).project_psd() {
            Ok(projected) => projected,
            Err(_) => break,
        };
        let z_prev = std::mem::replace(&mut z, projected);
        u = u.add(&x_hat).sub(&z);
        let primal = x.frob_dist(&z);
        let dual = rho * z.frob_dist(&z_prev);
        if !primal.is_finite() || !dual.is_finite() {
            break;
        }
        if primal <= params.tol && dual <= params.tol {
            converged = true;
            break;
        }
    }
    let value = problem.objective.trace_product(&z);
    let multiplier = problem.objective.add_scaled(&u, -rho);
    AdmmOutcome {
        x,
        z,
        dual_pos: multiplier.entrywise_pos(),
        dual_neg: multiplier.entrywise_neg(),
        value,
        iterations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::lift;
    use qz_forms::parse_form;

    fn solve(text: &str) -> AdmmOutcome {
        admm_solve(&lift(&parse_form(text).unwrap()), &AdmmParams::default())
    }

    fn solve_negated(text: &str) -> AdmmOutcome {
        let problem = lift(&parse_form(text).unwrap());
        let negated = BoxSdp {
            objective: problem.objective.scaled(-1.0),
            lower: problem.lower,
            upper: problem.upper,
            slack: problem.slack,
        };
        admm_solve(&negated, &AdmmParams::default())
    }

    #[test]
    fn square_form_optima() {
        // sup ε₁² = 1, inf ε₁² = 0 (inf solved by negating the objective).
        let sup = solve("e1*e1");
        assert!(sup.converged);
        assert!((sup.value - 1.0).abs() < 1e-6, "sup value {}", sup.value);
        let inf = solve_negated("e1*e1");
        assert!(inf.converged);
        assert!((-inf.value - 0.0).abs() < 1e-6, "inf value {}", -inf.value);
    }

    #[test]
    fn downward_parabola_optimum() {
        // The PSD constraint forces X₁₅² ≤ X₁₁·1, so the relaxed optimum
        // of max(t − s) with t² ≤ s is exactly 1/4.
        let out = solve("e1 - e1*e1");
        assert!(out.converged);
        assert!((out.value - 0.25).abs() < 1e-5, "value {}", out.value);
    }

    #[test]
    fn two_symbol_parabola_optima() {
        let sup = solve("e1 - e2 - e1*e1");
        assert!(sup.converged);
        assert!((sup.value - 1.25).abs() < 1e-4, "sup value {}", sup.value);
        let inf = solve_negated("e1 - e2 - e1*e1");
        assert!(inf.converged);
        assert!((-inf.value + 3.0).abs() < 1e-4, "inf value {}", -inf.value);
    }

    #[test]
    fn iterates_stay_in_their_feasible_sets() {
        let q = parse_form("1 + e1 - e2 + e1*e2 - e2*e2 + 0.5*ep").unwrap();
        let problem = lift(&q);
        let out = admm_solve(&problem, &AdmmParams::default());
        for i in 0..problem.dim() {
            for j in i..problem.dim() {
                let v = out.x.get(i, j);
                assert!(v >= problem.lower.get(i, j) && v <= problem.upper.get(i, j));
                assert!(out.dual_pos.get(i, j) >= 0.0);
                assert!(out.dual_neg.get(i, j) >= 0.0);
            }
        }
        let scale = out.z.frob_norm().max(1e-30);
        assert!(out.z.min_eigenvalue().unwrap() >= -1e-9 * scale);
    }
}
