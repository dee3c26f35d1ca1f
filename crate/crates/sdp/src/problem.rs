//! Lifting a quadratic form over boxed noise symbols into a
//! box-constrained semidefinite relaxation.
//!
//! A form q(ε) with m plain symbols is rewritten as tr(M·X) with
//! X = v·vᵀ, where v stacks the plain symbols, the three error-slot
//! coordinates, and a final homogenization coordinate fixed at 1.
//! Dropping the rank-one constraint to X ⪰ 0 plus entrywise bounds
//! L ≤ X ≤ U (exact products of the coordinate ranges) gives a convex
//! relaxation whose maximum dominates sup q.

use crate::matrix::SymMatrix;
use qz_forms::round::add_up;
use qz_forms::{NoisePoint, NoiseSym, QuadForm};

/// `max tr(objective·X)` subject to `lower ≤ X ≤ upper` entrywise and
/// `X ⪰ 0`. `slack` bounds `sup |q − tr(objective·vvᵀ)|` over the box;
/// it is zero unless halving a coefficient rounded (subnormal inputs).
#[derive(Debug, Clone)]
pub struct BoxSdp {
    pub objective: SymMatrix,
    pub lower: SymMatrix,
    pub upper: SymMatrix,
    pub slack: f64,
}

impl BoxSdp {
    pub fn dim(&self) -> usize {
        self.objective.n()
    }
}

/// Range of lifted coordinate `k` for a form with `m` plain symbols:
/// plain symbols, then the symmetric / nonnegative / nonpositive error
/// slots, then the homogenization coordinate.
fn coord_range(k: usize, m: usize) -> (f64, f64) {
    if k < m {
        (-1.0, 1.0)
    } else if k == m {
        (-1.0, 1.0)
    } else if k == m + 1 {
        (0.0, 1.0)
    } else if k == m + 2 {
        (-1.0, 0.0)
    } else {
        (1.0, 1.0)
    }
}

/// Halve a coefficient, recording any rounding (possible only for
/// subnormal magnitudes) as symmetric slack.
fn halve(x: f64, slack: &mut f64) -> f64 {
    let h = x / 2.0;
    let back = 2.0 * h;
    if back != x {
        // `back` is exact, so `x − back` is the representation error.
        *slack = add_up(*slack, (x - back).abs());
    }
    h
}

/// Build the lifted relaxation of `q`. Plain symbols occupy coordinates
/// `0..m` in sorted order (the order of [`QuadForm::plain_symbols`]).
pub fn lift(q: &QuadForm) -> BoxSdp {
    let plain: Vec<NoiseSym> = q.plain_symbols().into_iter().collect();
    let m = plain.len();
    let d = m + 4;
    let index: std::collections::BTreeMap<NoiseSym, usize> = plain
        .iter()
        .enumerate()
        .map(|(pos, &s)| (s, pos))
        .collect();

    let mut slack = 0.0;
    let mut obj = SymMatrix::zeros(d);
    obj.set(d - 1, d - 1, q.center());
    for (&s, &b) in q.linear() {
        obj.set(index[&s], d - 1, halve(b, &mut slack));
    }
    obj.set(m, d - 1, halve(q.sym_err(), &mut slack));
    obj.set(m + 1, d - 1, halve(q.pos_err(), &mut slack));
    obj.set(m + 2, d - 1, halve(q.neg_err(), &mut slack));
    for (&(i, j), &a) in q.quad() {
        let (ii, jj) = (index[&i], index[&j]);
        if ii == jj {
            obj.set(ii, ii, a);
        } else {
            obj.set(ii, jj, halve(a, &mut slack));
        }
    }

    // Entrywise bounds on X_kl = v_k·v_l from the coordinate ranges; all
    // endpoint products are exact (endpoints lie in {−1, 0, 1}).
    let mut lower = SymMatrix::zeros(d);
    let mut upper = SymMatrix::zeros(d);
    for k in 0..d {
        let (klo, khi) = coord_range(k, m);
        for l in k..d {
            let (llo, lhi) = coord_range(l, m);
            let products = [klo * llo, klo * lhi, khi * llo, khi * lhi];
            lower.set(k, l, products.iter().copied().fold(f64::INFINITY, f64::min));
            upper.set(
                k,
                l,
                products.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            );
        }
    }
    // Diagonal entries are squares; tighten their lower bounds to zero
    // (coordinates whose range straddles zero would otherwise get −1).
    for k in 0..d {
        let v = lower.get(k, k).max(0.0);
        lower.set(k, k, v);
    }

    BoxSdp {
        objective: obj,
        lower,
        upper,
        slack,
    }
}

/// The rank-one lift of a concrete noise assignment, for feasibility
/// checks in tests and for decoding: `X = v·vᵀ`.
pub fn rank_one(point: &NoisePoint, plain: &[NoiseSym]) -> SymMatrix {
    let m = plain.len();
    let d = m + 4;
    let mut v = vec![0.0; d];
    for (k, &s) in plain.iter().enumerate() {
        v[k] = point.value(s);
    }
    v[m] = point.sym;
    v[m + 1] = point.pos;
    v[m + 2] = point.neg;
    v[m + 3] = 1.0;
    SymMatrix::from_fn(d, |i, j| v[i] * v[j])
}
