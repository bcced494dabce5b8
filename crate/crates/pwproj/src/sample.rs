//! Seeded random instances: numbers, near-identity matrices, interval sets,
//! words and group elements. Everything draws from a caller-supplied RNG so
//! runs are reproducible from a single seed.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pwproj_core::algebraic::RealAlgebraic;
use pwproj_core::measure::IntervalSet;
use pwproj_core::number::{int, QSqrt2, Rational};
use pwproj_core::piecewise::PiecewiseMap;
use pwproj_core::poly::Poly;
use pwproj_core::projective::{ClosedInterval, Mat2};
use pwproj_core::word::{Letter, Word};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// p/q with |p| ≤ num, 1 ≤ q ≤ den.
pub fn rational(rng: &mut impl Rng, num: i64, den: i64) -> Rational {
    Rational::new(rng.random_range(-num..=num).into(), rng.random_range(1..=den).into())
}

pub fn qsqrt2(rng: &mut impl Rng) -> QSqrt2 {
    let s = if rng.random_bool(0.25) {
        Rational::zero()
    } else {
        rational(rng, 50, 30)
    };
    QSqrt2::new(rational(rng, 50, 30), s)
}

pub fn nonzero_qsqrt2(rng: &mut impl Rng) -> QSqrt2 {
    loop {
        let x = qsqrt2(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A rational strictly inside (−bound, bound), bound > 0.
pub fn small_rational(rng: &mut impl Rng, bound: &Rational) -> Rational {
    let m: i64 = rng.random_range(1..=64);
    let den = bound.denom() * BigInt::from(m);
    let top = (bound.numer() * BigInt::from(m)).to_i64().expect("small bound");
    Rational::new(rng.random_range(-top + 1..top).into(), den)
}

/// |x| < bound, with a √2 part half the time.
pub fn small_qsqrt2(rng: &mut impl Rng, bound: &Rational) -> QSqrt2 {
    loop {
        let r = small_rational(rng, bound);
        let s = if rng.random_bool(0.5) {
            small_rational(rng, bound) / int(2)
        } else {
            Rational::zero()
        };
        let x = QSqrt2::new(r, s);
        if x.abs() < QSqrt2::from_rational(bound.clone()) {
            return x;
        }
    }
}

/// A determinant-one matrix with `dist_to_identity < delta` (delta ≤ 1/2).
pub fn near_identity(rng: &mut impl Rng, delta: &Rational) -> Mat2 {
    let half = delta / int(2);
    loop {
        let one = QSqrt2::one();
        let a = &one + small_qsqrt2(rng, &half);
        let b = small_qsqrt2(rng, &half);
        let c = small_qsqrt2(rng, &half);
        let d = (&one + &b * &c) / &a;
        if let Ok(m) = Mat2::new(a, b, c, d) {
            if m.within(delta) && !m.is_identity() {
                return m;
            }
        }
    }
}

/// Distinct sorted rationals from `lo + (hi − lo)·k/grid`, 0 ≤ k ≤ grid.
fn grid_points(rng: &mut impl Rng, lo: &Rational, hi: &Rational, count: usize, grid: u64) -> Vec<Rational> {
    let mut ks: Vec<u64> = rand::seq::index::sample(rng, grid as usize + 1, count)
        .into_iter()
        .map(|k| k as u64)
        .collect();
    ks.sort_unstable();
    let width = hi - lo;
    ks.into_iter()
        .map(|k| lo + &width * Rational::new(k.into(), grid.into()))
        .collect()
}

fn rational_ends(iv: &ClosedInterval) -> (Rational, Rational) {
    let lo = iv.lo().as_rational().expect("rational interval").clone();
    let hi = iv.hi().as_rational().expect("rational interval").clone();
    (lo, hi)
}

/// A union of 1..=max_parts disjoint rational intervals inside `iv`.
pub fn rational_set(rng: &mut impl Rng, iv: &ClosedInterval, max_parts: usize) -> IntervalSet {
    let (lo, hi) = rational_ends(iv);
    let parts = rng.random_range(1..=max_parts);
    let grid = rng.random_range(4 * parts as u64..=400);
    let pts = grid_points(rng, &lo, &hi, 2 * parts, grid);
    let pairs: Vec<(Rational, Rational)> = pts.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect();
    IntervalSet::rational(&pairs)
}

/// `iv` minus up to four short gaps, so μ(J) ≥ 3μ(I)/5.
pub fn large_subset(rng: &mut impl Rng, iv: &ClosedInterval) -> IntervalSet {
    let (lo, hi) = rational_ends(iv);
    let width = &hi - &lo;
    let mut j = IntervalSet::from_closed(iv);
    for _ in 0..rng.random_range(0..=4) {
        let len = &width * Rational::new(rng.random_range(1..=10).into(), 100.into());
        let start = &lo + (&width - &len) * Rational::new(rng.random_range(0..=1000).into(), 1000.into());
        let end = &start + &len;
        j = j.subtract(&IntervalSet::rational(&[(start, end)]));
    }
    j
}

pub fn word(rng: &mut impl Rng, max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    Word::reduce((0..len).map(|_| *Letter::ALL.choose(rng).expect("four letters")))
}

/// A product of up to `max_len` generators and inverses.
pub fn element(rng: &mut impl Rng, gens: &[PiecewiseMap], max_len: usize) -> PiecewiseMap {
    let mut g = PiecewiseMap::identity();
    for _ in 0..rng.random_range(0..=max_len) {
        let s = gens.choose(rng).expect("generators");
        g = if rng.random_bool(0.5) { g.then(s) } else { g.then(&s.inverse()) };
    }
    g
}

/// Rational, ℚ(√2), or a root of a random integer quadratic or cubic.
pub fn algebraic(rng: &mut impl Rng) -> RealAlgebraic {
    match rng.random_range(0..4) {
        0 => RealAlgebraic::from_rational(rational(rng, 100, 40)),
        1 => RealAlgebraic::from_qsqrt2(qsqrt2(rng)),
        _ => loop {
            let deg = rng.random_range(2..=3);
            let mut coeffs: Vec<Rational> = (0..deg).map(|_| int(rng.random_range(-20..=20))).collect();
            coeffs.push(int(rng.random_range(1..=6)));
            let roots = RealAlgebraic::roots_of(&Poly::from_rationals(&coeffs));
            if let Some(x) = roots.choose(rng) {
                return x.clone();
            }
        },
    }
}

pub fn positive_rational(rng: &mut impl Rng) -> Rational {
    loop {
        let q = rational(rng, 60, 30);
        if q.is_positive() && q < Rational::one() {
            return q;
        }
    }
}
