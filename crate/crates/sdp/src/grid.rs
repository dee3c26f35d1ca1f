//! A sampling oracle that approximates a form's true range from the
//! inside, used to sandwich the outer concretizations.
//!
//! Every reported endpoint comes from evaluating the form at an
//! admissible noise assignment with inward rounding: the low endpoint
//! is a round-up evaluation (≥ the true value there, hence ≥ the true
//! minimum) and the high endpoint a round-down evaluation. The returned
//! interval is therefore contained in the true range up to the one-ulp
//! corner handled at the end.

use qz_forms::{ExtInterval, NoisePoint, NoiseSym, QuadForm};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Sampling is deterministic: the oracle is an oracle, not a benchmark.
const SAMPLE_SEED: u64 = 0x51D9_A1D0;
/// Random samples used when the symbol count makes a dense grid
/// impractical.
const SAMPLE_COUNT: usize = 100_000;
/// Cap on dense-grid evaluations, shared across dimensions.
const DENSE_BUDGET: f64 = 2.0e6;
/// At most this many box vertices are enumerated exhaustively.
const VERTEX_LIMIT_BITS: usize = 16;

/// Points per axis for an m-dimensional dense grid: the requested
/// resolution, capped so the total stays within the evaluation budget.
fn dense_per_axis(m: usize, resolution: usize) -> usize {
    let cap = DENSE_BUDGET.powf(1.0 / m as f64) as usize;
    resolution.max(2).min(cap.max(2))
}

fn grid_coord(k: usize, per_axis: usize) -> f64 {
    (-1.0 + 2.0 * k as f64 / (per_axis - 1) as f64).clamp(-1.0, 1.0)
}

/// Inner approximation of the range of `q` over the noise box. For up
/// to three plain symbols the box is swept on a dense grid with about
/// `resolution` points per axis; beyond that, all (capped) ±1 vertices,
/// the origin, and a fixed batch of random points are sampled. Error
/// slots are handled exactly: each sample is evaluated once at the
/// slot values minimizing the form and once at those maximizing it.
pub fn grid_range(q: &QuadForm, resolution: usize) -> ExtInterval {
    let plain: Vec<NoiseSym> = q.plain_symbols().into_iter().collect();
    let m = plain.len();
    let mut lo_in = f64::INFINITY;
    let mut hi_in = f64::NEG_INFINITY;
    let mut visit = |coords: &[f64]| {
        let assignment: BTreeMap<NoiseSym, f64> =
            plain.iter().copied().zip(coords.iter().copied()).collect();
        let low_point = NoisePoint {
            plain: assignment.clone(),
            sym: -1.0,
            pos: 0.0,
            neg: -1.0,
        };
        let high_point = NoisePoint {
            plain: assignment,
            sym: 1.0,
            pos: 1.0,
            neg: 0.0,
        };
        let (_, value_up) = q.eval_bounds(&low_point);
        let (value_down, _) = q.eval_bounds(&high_point);
        lo_in = lo_in.min(value_up);
        hi_in = hi_in.max(value_down);
    };

    if m == 0 {
        visit(&[]);
    } else if m <= 3 {
        let per_axis = dense_per_axis(m, resolution);
        let mut index = vec![0usize; m];
        loop {
            let coords: Vec<f64> = index.iter().map(|&k| grid_coord(k, per_axis)).collect();
            visit(&coords);
            // Odometer increment; done once every axis wraps.
            let mut axis = 0;
            loop {
                index[axis] += 1;
                if index[axis] < per_axis {
                    break;
                }
                index[axis] = 0;
                axis += 1;
                if axis == m {
                    break;
                }
            }
            if axis == m {
                break;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        if m <= VERTEX_LIMIT_BITS {
            for mask in 0u32..(1u32 << m) {
                let coords: Vec<f64> = (0..m)
                    .map(|i| if mask & (1 << i) != 0 { 1.0 } else { -1.0 })
                    .collect();
                visit(&coords);
            }
        } else {
            for _ in 0..(1usize << VERTEX_LIMIT_BITS) {
                let coords: Vec<f64> = (0..m)
                    .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
                    .collect();
                visit(&coords);
            }
        }
        visit(&vec![0.0; m]);
        for _ in 0..SAMPLE_COUNT {
            let coords: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..=1.0)).collect();
            visit(&coords);
        }
    }

    // Inward rounding can invert the pair by an ulp when the form is
    // (near-)constant; order it rather than fail.
    if lo_in > hi_in {
        std::mem::swap(&mut lo_in, &mut hi_in);
    }
    ExtInterval::new(lo_in, hi_in).unwrap_or_else(|_| ExtInterval::whole())
}
