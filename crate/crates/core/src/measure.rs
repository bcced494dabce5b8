//! Finite unions of half-open intervals with algebraic endpoints and their
//! Lebesgue measure.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::Zero;

use crate::algebraic::RealAlgebraic;
use crate::number::{int, QSqrt2, Rational};
use crate::piecewise::PiecewiseMap;
use crate::projective::{ClosedInterval, Mat2};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Bound {
    NegInf,
    Finite(RealAlgebraic),
    PosInf,
}

impl Bound {
    pub fn finite(&self) -> Option<&RealAlgebraic> {
        match self {
            Bound::Finite(x) => Some(x),
            _ => None,
        }
    }

    fn cmp_qsqrt2(&self, v: &QSqrt2) -> Ordering {
        match self {
            Bound::NegInf => Ordering::Less,
            Bound::Finite(x) => x.cmp_qsqrt2(v),
            Bound::PosInf => Ordering::Greater,
        }
    }
}

impl From<RealAlgebraic> for Bound {
    fn from(x: RealAlgebraic) -> Self {
        Bound::Finite(x)
    }
}

impl From<Rational> for Bound {
    fn from(q: Rational) -> Self {
        Bound::Finite(RealAlgebraic::from_rational(q))
    }
}

impl From<QSqrt2> for Bound {
    fn from(v: QSqrt2) -> Self {
        Bound::Finite(RealAlgebraic::from_qsqrt2(v))
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("-inf"),
            Bound::Finite(x) => write!(f, "{}", x),
            Bound::PosInf => f.write_str("inf"),
        }
    }
}

/// `[lo, hi)` with `lo < hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    pub fn new(lo: Bound, hi: Bound) -> Option<Self> {
        (lo < hi).then_some(Interval { lo, hi })
    }

    /// Does the closure contain `v`.
    fn closure_contains(&self, v: &QSqrt2) -> bool {
        self.lo.cmp_qsqrt2(v) != Ordering::Greater && self.hi.cmp_qsqrt2(v) != Ordering::Less
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasureError {
    Unbounded,
    /// An endpoint lies outside ℚ(√2); use [`IntervalSet::measure_enclosure`].
    NotExact,
    /// A pole of the map lies in the closure of the set.
    PoleInSet { pole: QSqrt2 },
}

impl fmt::Display for MeasureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureError::Unbounded => f.write_str("set has an infinite endpoint"),
            MeasureError::NotExact => f.write_str("endpoint outside Q(sqrt2); only an enclosure is available"),
            MeasureError::PoleInSet { pole } => write!(f, "pole {} lies in the closure of the set", pole),
        }
    }
}

impl core::error::Error for MeasureError {}

/// Sorted, disjoint, non-adjacent half-open intervals.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn interval(lo: impl Into<Bound>, hi: impl Into<Bound>) -> Self {
        match Interval::new(lo.into(), hi.into()) {
            Some(iv) => IntervalSet {
                intervals: alloc::vec![iv],
            },
            None => IntervalSet::empty(),
        }
    }

    pub fn from_closed(iv: &ClosedInterval) -> Self {
        Self::interval(iv.lo().clone(), iv.hi().clone())
    }

    /// Union of arbitrary (possibly overlapping, unsorted) intervals.
    pub fn from_intervals(ivs: impl IntoIterator<Item = (Bound, Bound)>) -> Self {
        let mut parts: Vec<Interval> = ivs
            .into_iter()
            .filter_map(|(lo, hi)| Interval::new(lo, hi))
            .collect();
        parts.sort_by(|x, y| x.lo.cmp(&y.lo));
        let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
        for iv in parts {
            match out.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => out.push(iv),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn rational(pairs: &[(Rational, Rational)]) -> Self {
        Self::from_intervals(
            pairs
                .iter()
                .map(|(l, h)| (Bound::from(l.clone()), Bound::from(h.clone()))),
        )
    }

    /// Trusts the caller on the invariants; used by deserialization after
    /// its own checks.
    pub fn from_sorted_unchecked(intervals: Vec<Interval>) -> Self {
        IntervalSet { intervals }
    }

    /// Checks sortedness, disjointness and non-adjacency.
    pub fn from_sorted(intervals: Vec<Interval>) -> Option<Self> {
        let ok = intervals.iter().all(|iv| iv.lo < iv.hi)
            && intervals.windows(2).all(|w| w[0].hi < w[1].lo);
        ok.then_some(IntervalSet { intervals })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Boundary points in increasing order; membership toggles at each.
    fn boundaries(&self) -> impl Iterator<Item = &Bound> {
        self.intervals.iter().flat_map(|iv| [&iv.lo, &iv.hi])
    }

    fn from_boundaries(bs: Vec<Bound>) -> Self {
        debug_assert!(bs.len().is_multiple_of(2));
        let mut it = bs.into_iter();
        let mut intervals = Vec::new();
        while let (Some(lo), Some(hi)) = (it.next(), it.next()) {
            intervals.push(Interval { lo, hi });
        }
        IntervalSet { intervals }
    }

    /// Endpoint sweep evaluating `keep(in_a, in_b)` on every elementary cell.
    fn combine(&self, other: &Self, keep: impl Fn(bool, bool) -> bool) -> Self {
        let a: Vec<&Bound> = self.boundaries().collect();
        let b: Vec<&Bound> = other.boundaries().collect();
        let (mut i, mut j) = (0, 0);
        let (mut in_a, mut in_b, mut in_out) = (false, false, false);
        let mut out = Vec::new();
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.cmp(y),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            let point = if ord == Ordering::Greater { b[j] } else { a[i] };
            if ord != Ordering::Greater {
                in_a = !in_a;
                i += 1;
            }
            if ord != Ordering::Less {
                in_b = !in_b;
                j += 1;
            }
            let now = keep(in_a, in_b);
            if now != in_out {
                out.push(point.clone());
                in_out = now;
            }
        }
        Self::from_boundaries(out)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |x, y| x || y)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.combine(other, |x, y| x && y)
    }

    pub fn subtract(&self, other: &Self) -> Self {
        self.combine(other, |x, y| x && !y)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.subtract(other).is_empty()
    }

    /// Exact measure when every endpoint lies in ℚ(√2).
    pub fn measure(&self) -> Result<QSqrt2, MeasureError> {
        let mut total = QSqrt2::zero();
        for iv in &self.intervals {
            let (Bound::Finite(lo), Bound::Finite(hi)) = (&iv.lo, &iv.hi) else {
                return Err(MeasureError::Unbounded);
            };
            let (Some(l), Some(h)) = (lo.exact(), hi.exact()) else {
                return Err(MeasureError::NotExact);
            };
            total = total + (h - l);
        }
        Ok(total)
    }

    /// Rationals `lo ≤ μ ≤ hi` with `hi − lo ≤ width`.
    pub fn measure_enclosure(&self, width: &Rational) -> Result<(Rational, Rational), MeasureError> {
        let n = int(2 * self.intervals.len().max(1) as i64);
        let w = width / n;
        let (mut lo, mut hi) = (Rational::zero(), Rational::zero());
        for iv in &self.intervals {
            let (Bound::Finite(a), Bound::Finite(b)) = (&iv.lo, &iv.hi) else {
                return Err(MeasureError::Unbounded);
            };
            let (al, ah) = a.approx(&w);
            let (bl, bh) = b.approx(&w);
            lo += bl - ah;
            hi += bh - al;
        }
        if lo < Rational::zero() {
            lo = Rational::zero();
        }
        Ok((lo, hi))
    }

    /// Image under a Möbius map whose pole avoids the closure of the set.
    pub fn pushforward(&self, g: &Mat2) -> Result<Self, MeasureError> {
        if let Some(pole) = g.pole() {
            if self.intervals.iter().any(|iv| iv.closure_contains(&pole)) {
                return Err(MeasureError::PoleInSet { pole });
            }
        }
        let map = |b: &Bound| -> Bound {
            match b {
                Bound::Finite(x) => Bound::Finite(g.act_finite(x).expect("pole excluded")),
                other => other.clone(),
            }
        };
        // increasing, so order and disjointness carry over
        let intervals = self
            .intervals
            .iter()
            .map(|iv| Interval {
                lo: map(&iv.lo),
                hi: map(&iv.hi),
            })
            .collect();
        Ok(IntervalSet { intervals })
    }

    /// Image under a piecewise map, cell by cell.
    pub fn pushforward_pw(&self, f: &PiecewiseMap) -> Self {
        let bps = f.breakpoints();
        let mut parts = Vec::new();
        for (k, piece) in f.pieces().iter().enumerate() {
            let lo = if k == 0 { Bound::NegInf } else { Bound::Finite(bps[k - 1].clone()) };
            let hi = if k == bps.len() { Bound::PosInf } else { Bound::Finite(bps[k].clone()) };
            let cell = self.intersect(&IntervalSet::interval(lo, hi));
            let image = cell
                .pushforward(piece)
                .expect("poles lie outside their cells");
            parts.extend(image.intervals.into_iter().map(|iv| (iv.lo, iv.hi)));
        }
        Self::from_intervals(parts)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("{}");
        }
        for (k, iv) in self.intervals.iter().enumerate() {
            if k > 0 {
                f.write_str(" u ")?;
            }
            write!(f, "[{}, {})", iv.lo, iv.hi)?;
        }
        Ok(())
    }
}
