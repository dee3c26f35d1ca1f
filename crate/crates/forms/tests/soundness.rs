//! Monte-Carlo soundness of every form operation against an exact rational
//! oracle: evaluating the operand forms at concrete noise values (exactly,
//! with arbitrary-precision rationals), applying the real-arithmetic
//! operation, and checking membership in the result's concretization.

use std::collections::BTreeMap;

use num::BigRational;
use num::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qz_forms::{
    min_range_band, ExtInterval, Interval, NoisePoint, NoiseRegistry, NoiseSym, QuadForm, UnaryFn,
};

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

fn eval_rat(q: &QuadForm, t: &NoisePoint) -> BigRational {
    let mut acc = rat(q.center());
    for (s, &b) in q.linear() {
        acc += rat(b) * rat(t.value(*s));
    }
    for (&(i, j), &a) in q.quad() {
        acc += rat(a) * rat(t.value(i)) * rat(t.value(j));
    }
    acc += rat(q.sym_err()) * rat(t.sym);
    acc += rat(q.pos_err()) * rat(t.pos);
    acc += rat(q.neg_err()) * rat(t.neg);
    acc
}

fn contains_rat(i: &ExtInterval, v: &BigRational) -> bool {
    let lo_ok = i.lo() == f64::NEG_INFINITY || rat(i.lo()) <= *v;
    let hi_ok = i.hi() == f64::INFINITY || *v <= rat(i.hi());
    lo_ok && hi_ok
}

fn random_form(rng: &mut ChaCha8Rng, syms: &[NoiseSym]) -> QuadForm {
    let center = rng.random_range(-2.0..2.0);
    let mut linear = Vec::new();
    for &s in syms {
        if rng.random_bool(0.7) {
            linear.push((s, rng.random_range(-2.0..2.0)));
        }
    }
    let mut quad = Vec::new();
    for (ai, &a) in syms.iter().enumerate() {
        for &b in &syms[ai..] {
            if rng.random_bool(0.4) {
                quad.push(((a, b), rng.random_range(-2.0..2.0)));
            }
        }
    }
    let slot = |rng: &mut ChaCha8Rng| {
        if rng.random_bool(0.5) {
            rng.random_range(0.0..1.0)
        } else {
            0.0
        }
    };
    let (pm, pos, neg) = (slot(rng), slot(rng), slot(rng));
    QuadForm::new(center, linear, quad, pm, pos, neg).expect("finite coefficients")
}

/// A noise value from the dyadic grid k/16, k ∈ [−16, 16]. Grid values keep
/// the rational oracle's denominators small (and therefore fast) while
/// still covering the range, including both endpoints.
fn grid_val(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-16..=16i32) as f64 / 16.0
}

fn grid_unit(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(0..=16i32) as f64 / 16.0
}

/// A concrete assignment: shared plain values plus per-form slot values
/// (slots are local to each form and independent between operands).
fn random_point(rng: &mut ChaCha8Rng, syms: &[NoiseSym]) -> NoisePoint {
    let plain: BTreeMap<NoiseSym, f64> = syms.iter().map(|&s| (s, grid_val(rng))).collect();
    NoisePoint {
        plain,
        sym: grid_val(rng),
        pos: grid_unit(rng),
        neg: -grid_unit(rng),
    }
}

fn with_slots(shared: &NoisePoint, rng: &mut ChaCha8Rng) -> NoisePoint {
    NoisePoint {
        plain: shared.plain.clone(),
        sym: grid_val(rng),
        pos: grid_unit(rng),
        neg: -grid_unit(rng),
    }
}

fn sym_pool(n: u64) -> Vec<NoiseSym> {
    (1..=n).map(NoiseSym::from_id).collect()
}

const PAIRS: usize = 200;
const POINTS: usize = 200;

#[test]
fn add_is_sound_against_rational_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..PAIRS {
        let syms = sym_pool(rng.random_range(0..=4));
        let x = random_form(&mut rng, &syms);
        let y = random_form(&mut rng, &syms);
        let z = x.add(&y).unwrap();
        let zbox = z.concretize_mt();
        for _ in 0..POINTS {
            let shared = random_point(&mut rng, &syms);
            let tx = with_slots(&shared, &mut rng);
            let ty = with_slots(&shared, &mut rng);
            let v = eval_rat(&x, &tx) + eval_rat(&y, &ty);
            assert!(
                contains_rat(&zbox, &v),
                "x(t)+y(t) = {v} escapes {zbox} for x = {x}, y = {y}"
            );
        }
    }
}

#[test]
fn neg_is_sound_and_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..PAIRS {
        let syms = sym_pool(rng.random_range(0..=4));
        let x = random_form(&mut rng, &syms);
        let z = x.neg();
        let zbox = z.concretize_mt();
        let xbox = x.concretize_mt();
        assert_eq!(zbox.lo(), -xbox.hi());
        assert_eq!(zbox.hi(), -xbox.lo());
        for _ in 0..POINTS / 10 {
            let t = random_point(&mut rng, &syms);
            let v = -eval_rat(&x, &t);
            assert!(contains_rat(&zbox, &v));
        }
    }
}

#[test]
fn scale_is_sound_against_rational_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..PAIRS {
        let syms = sym_pool(rng.random_range(0..=4));
        let x = random_form(&mut rng, &syms);
        let k: f64 = if rng.random_bool(0.1) {
            0.0
        } else {
            rng.random_range(-3.0..3.0)
        };
        let z = x.scale(k).unwrap();
        let zbox = z.concretize_mt();
        for _ in 0..POINTS {
            let t = random_point(&mut rng, &syms);
            let v = rat(k) * eval_rat(&x, &t);
            assert!(
                contains_rat(&zbox, &v),
                "k·x(t) = {v} escapes {zbox} for k = {k}, x = {x}"
            );
        }
    }
}

#[test]
fn mul_is_sound_against_rational_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..PAIRS {
        let syms = sym_pool(rng.random_range(0..=4));
        let x = random_form(&mut rng, &syms);
        let y = random_form(&mut rng, &syms);
        let z = x.mul(&y).unwrap();
        let zbox = z.concretize_mt();
        for _ in 0..POINTS {
            let shared = random_point(&mut rng, &syms);
            let tx = with_slots(&shared, &mut rng);
            let ty = with_slots(&shared, &mut rng);
            let v = eval_rat(&x, &tx) * eval_rat(&y, &ty);
            assert!(
                contains_rat(&zbox, &v),
                "x(t)·y(t) = {v} escapes {zbox} for x = {x}, y = {y}"
            );
        }
    }
}

#[test]
fn recip_band_is_sound_against_rational_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut tested = 0;
    while tested < PAIRS {
        let syms = sym_pool(rng.random_range(0..=3));
        let mut x = random_form(&mut rng, &syms);
        // Shift away from zero so 1/x is defined on the whole box.
        x = x.add(&QuadForm::constant(6.0).unwrap()).unwrap();
        let dom = match x.concretize_mt().bounded() {
            Some(i) if i.lo() > 0.0 => i,
            _ => continue,
        };
        tested += 1;
        let band = min_range_band(UnaryFn::Recip, dom).unwrap();
        for _ in 0..POINTS {
            let t = random_point(&mut rng, &syms);
            let v = eval_rat(&x, &t);
            assert!(!v.is_zero());
            let f = rat(1.0) / &v;
            let lo = rat(band.slope) * &v + rat(band.offset) - rat(band.radius);
            let hi = rat(band.slope) * &v + rat(band.offset) + rat(band.radius);
            assert!(
                lo <= f && f <= hi,
                "1/x(t) escapes the band for x = {x}, dom = {dom}"
            );
        }
    }
}

#[test]
fn sqrt_band_is_sound_against_rational_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut tested = 0;
    while tested < PAIRS {
        let syms = sym_pool(rng.random_range(0..=3));
        let mut x = random_form(&mut rng, &syms);
        x = x.add(&QuadForm::constant(8.0).unwrap()).unwrap();
        let dom = match x.concretize_mt().bounded() {
            Some(i) if i.lo() >= 0.0 => i,
            _ => continue,
        };
        tested += 1;
        let band = min_range_band(UnaryFn::Sqrt, dom).unwrap();
        for _ in 0..POINTS {
            let t = random_point(&mut rng, &syms);
            let v = eval_rat(&x, &t);
            // Check lo ≤ √v ≤ hi by comparing squares (everything rational).
            let lo = rat(band.slope) * &v + rat(band.offset) - rat(band.radius);
            let hi = rat(band.slope) * &v + rat(band.offset) + rat(band.radius);
            let lo_ok = lo <= BigRational::zero() || &lo * &lo <= v;
            let hi_ok = hi >= BigRational::zero() && v <= &hi * &hi;
            assert!(
                lo_ok && hi_ok,
                "√x(t) escapes the band for x = {x}, dom = {dom}"
            );
        }
    }
}

/// One ulp at the magnitude of `x`.
fn ulp_at(x: f64) -> f64 {
    let a = x.abs();
    a.next_up() - a
}

#[test]
fn abstraction_round_trip_encloses_with_tiny_slack() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let reg = NoiseRegistry::new();
    for k in 0..1000 {
        let (lo, hi) = match k % 4 {
            0 => {
                let a: f64 = rng.random_range(-1e3..1e3);
                let b: f64 = rng.random_range(-1e3..1e3);
                (a.min(b), a.max(b))
            }
            1 => {
                // Tiny widths around an arbitrary center.
                let c: f64 = rng.random_range(-1.0..1.0);
                (c, c + c.abs().max(1e-30) * 1e-12)
            }
            2 => {
                // Point intervals.
                let c: f64 = rng.random_range(-1e6..1e6);
                (c, c)
            }
            _ => {
                let a: f64 = rng.random_range(-1e12..0.0);
                let b: f64 = rng.random_range(0.0..1e12);
                (a, b)
            }
        };
        let i = Interval::new(lo, hi).unwrap();
        let q = QuadForm::from_interval(i, &reg);
        let back = q.concretize_mt();
        assert!(
            back.lo() <= i.lo() && i.hi() <= back.hi(),
            "γ(α([{lo}, {hi}])) = {back} does not enclose the input"
        );
        // Slack budget: 4 ulp at the interval's dominant magnitude (the
        // midpoint and radius are represented at that scale).
        let allowed = 4.0 * ulp_at(lo.abs().max(hi.abs()));
        assert!(
            i.lo() - back.lo() <= allowed && back.hi() - i.hi() <= allowed,
            "round-trip slack exceeds 4 ulp at scale: [{lo}, {hi}] -> {back}"
        );
    }
}

#[test]
fn slots_stay_nonnegative_under_random_op_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let syms = sym_pool(3);
    for _ in 0..200 {
        let mut acc = random_form(&mut rng, &syms);
        for _ in 0..6 {
            let other = random_form(&mut rng, &syms);
            acc = match rng.random_range(0..4) {
                0 => acc.add(&other).unwrap(),
                1 => acc.neg(),
                2 => acc.scale(rng.random_range(-2.0..2.0)).unwrap(),
                _ => acc.mul(&other).unwrap(),
            };
            assert!(acc.sym_err() >= 0.0 && acc.pos_err() >= 0.0 && acc.neg_err() >= 0.0);
        }
    }
}
