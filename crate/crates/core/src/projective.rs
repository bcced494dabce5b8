//! PSL₂(ℚ(√2)) acting on ℝ ∪ {∞}.
//!
//! `act` is the column form x ↦ (ax + b)/(cx + d). With that, the right
//! action x·(g then h) = (x·g)·h corresponds to the matrix product h·g, which
//! is what [`Mat2::then`] computes. [`Mat2::product`] is the plain product.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_traits::Zero;

use crate::algebraic::RealAlgebraic;
use crate::number::{is_dyadic, QSqrt2, Rational};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatError {
    /// The determinant is zero or negative.
    BadDeterminant(QSqrt2),
    /// The determinant has no square root in ℚ(√2), so the matrix cannot be
    /// scaled to determinant one.
    DeterminantNotSquare(QSqrt2),
    Parse(String),
}

impl fmt::Display for MatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatError::BadDeterminant(d) => write!(f, "determinant {} is not positive", d),
            MatError::DeterminantNotSquare(d) => {
                write!(f, "determinant {} is not a square in Q(sqrt2)", d)
            }
            MatError::Parse(s) => write!(f, "cannot parse matrix: {}", s),
        }
    }
}

impl core::error::Error for MatError {}

/// A determinant-one matrix, stored with the sign making the first nonzero
/// entry of (a, b, c, d) positive, so equality in PSL₂ is field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    a: QSqrt2,
    b: QSqrt2,
    c: QSqrt2,
    d: QSqrt2,
}

/// A point of ℝ ∪ {∞}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjPoint {
    Finite(RealAlgebraic),
    Infinity,
}

impl ProjPoint {
    pub fn finite(&self) -> Option<&RealAlgebraic> {
        match self {
            ProjPoint::Finite(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }
}

impl From<RealAlgebraic> for ProjPoint {
    fn from(x: RealAlgebraic) -> Self {
        ProjPoint::Finite(x)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(x) => write!(f, "{}", x),
            ProjPoint::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    /// PSL₂(ℤ); breakpoints rational.
    Integers,
    /// PSL₂(ℤ[√2, 1/2]) = PSL₂(ℤ[1/√2]); breakpoints hyperbolic fixed points.
    ZSqrt2Halves,
}

impl Ring {
    pub fn contains(self, x: &QSqrt2) -> bool {
        match self {
            Ring::Integers => x.s().is_zero() && x.r().is_integer(),
            Ring::ZSqrt2Halves => is_dyadic(x.r()) && is_dyadic(x.s()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Elliptic,
    Parabolic(ProjPoint),
    /// Fixed points in increasing order, ∞ last.
    Hyperbolic(ProjPoint, ProjPoint),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityHasNoType;

impl fmt::Display for IdentityHasNoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("the identity has no fixed-point classification")
    }
}

impl core::error::Error for IdentityHasNoType {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleInInterval {
    pub pole: QSqrt2,
}

impl fmt::Display for PoleInInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pole {} lies in the interval", self.pole)
    }
}

impl core::error::Error for PoleInInterval {}

/// A compact interval with endpoints in ℚ(√2).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedInterval {
    lo: QSqrt2,
    hi: QSqrt2,
}

impl ClosedInterval {
    pub fn new(lo: QSqrt2, hi: QSqrt2) -> Option<Self> {
        (lo < hi).then_some(ClosedInterval { lo, hi })
    }

    pub fn rational(lo: Rational, hi: Rational) -> Option<Self> {
        Self::new(lo.into(), hi.into())
    }

    pub fn unit() -> Self {
        ClosedInterval {
            lo: QSqrt2::zero(),
            hi: QSqrt2::one(),
        }
    }

    pub fn lo(&self) -> &QSqrt2 {
        &self.lo
    }

    pub fn hi(&self) -> &QSqrt2 {
        &self.hi
    }

    pub fn length(&self) -> QSqrt2 {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> QSqrt2 {
        (&self.lo + &self.hi).mul_rational(&Rational::new(1.into(), 2.into()))
    }

    pub fn contains(&self, x: &QSqrt2) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &ClosedInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Smallest R with I ⊆ [−R, R].
    pub fn radius(&self) -> QSqrt2 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Concentric interval scaled by `factor` about the midpoint.
    pub fn scaled(&self, factor: &Rational) -> ClosedInterval {
        let mid = self.midpoint();
        let half = (&self.hi - &mid).mul_rational(factor);
        ClosedInterval {
            lo: &mid - &half,
            hi: &mid + &half,
        }
    }
}

impl fmt::Display for ClosedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Mat2 {
    /// Scales to determinant one when the determinant is a square in
    /// ℚ(√2); otherwise rejects.
    pub fn new(a: QSqrt2, b: QSqrt2, c: QSqrt2, d: QSqrt2) -> Result<Self, MatError> {
        let det = &(&a * &d) - &(&b * &c);
        if !det.is_positive() {
            return Err(MatError::BadDeterminant(det));
        }
        if det.is_one() {
            return Ok(Self::canonical(a, b, c, d));
        }
        let root = det
            .sqrt_exact()
            .ok_or_else(|| MatError::DeterminantNotSquare(det.clone()))?
            .abs();
        Ok(Self::canonical(&a / &root, &b / &root, &c / &root, &d / &root))
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self, MatError> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    fn canonical(a: QSqrt2, b: QSqrt2, c: QSqrt2, d: QSqrt2) -> Self {
        let first = [&a, &b, &c, &d]
            .into_iter()
            .find(|x| !x.is_zero())
            .map(|x| x.is_negative())
            .unwrap_or(false);
        if first {
            Mat2 {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            Mat2 { a, b, c, d }
        }
    }

    pub fn identity() -> Self {
        Mat2 {
            a: QSqrt2::one(),
            b: QSqrt2::zero(),
            c: QSqrt2::zero(),
            d: QSqrt2::one(),
        }
    }

    /// t ↦ t + r.
    pub fn translation(r: QSqrt2) -> Self {
        Mat2 {
            a: QSqrt2::one(),
            b: r,
            c: QSqrt2::zero(),
            d: QSqrt2::one(),
        }
    }

    /// t ↦ t/(r·t + 1).
    pub fn lower(r: QSqrt2) -> Self {
        Self::canonical(QSqrt2::one(), QSqrt2::zero(), r, QSqrt2::one())
    }

    /// diag(√2, 1/√2), i.e. t ↦ 2t.
    pub fn gamma() -> Self {
        Mat2 {
            a: QSqrt2::sqrt2(),
            b: QSqrt2::zero(),
            c: QSqrt2::zero(),
            d: QSqrt2::new(Rational::zero(), Rational::new(1.into(), 2.into())),
        }
    }

    pub fn a(&self) -> &QSqrt2 {
        &self.a
    }

    pub fn b(&self) -> &QSqrt2 {
        &self.b
    }

    pub fn c(&self) -> &QSqrt2 {
        &self.c
    }

    pub fn d(&self) -> &QSqrt2 {
        &self.d
    }

    pub fn entries(&self) -> [&QSqrt2; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Plain matrix product `self · rhs`.
    pub fn product(&self, rhs: &Mat2) -> Mat2 {
        Self::canonical(
            &(&self.a * &rhs.a) + &(&self.b * &rhs.c),
            &(&self.a * &rhs.b) + &(&self.b * &rhs.d),
            &(&self.c * &rhs.a) + &(&self.d * &rhs.c),
            &(&self.c * &rhs.b) + &(&self.d * &rhs.d),
        )
    }

    /// Apply `self`, then `h`.
    pub fn then(&self, h: &Mat2) -> Mat2 {
        h.product(self)
    }

    pub fn inverse(&self) -> Mat2 {
        Self::canonical(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    pub fn trace(&self) -> QSqrt2 {
        &self.a + &self.d
    }

    /// Finite pole −d/c, if any.
    pub fn pole(&self) -> Option<QSqrt2> {
        (!self.c.is_zero()).then(|| &(-&self.d) / &self.c)
    }

    pub fn fixes_infinity(&self) -> bool {
        self.c.is_zero()
    }

    pub fn act(&self, x: &ProjPoint) -> ProjPoint {
        match x {
            ProjPoint::Infinity => {
                if self.c.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(RealAlgebraic::from_qsqrt2(&self.a / &self.c))
                }
            }
            ProjPoint::Finite(v) => match self.act_finite(v) {
                Some(y) => ProjPoint::Finite(y),
                None => ProjPoint::Infinity,
            },
        }
    }

    pub fn act_finite(&self, x: &RealAlgebraic) -> Option<RealAlgebraic> {
        x.apply_moebius(&self.a, &self.b, &self.c, &self.d)
    }

    pub fn act_qsqrt2(&self, x: &QSqrt2) -> Option<QSqrt2> {
        let den = &(&self.c * x) + &self.d;
        if den.is_zero() {
            return None;
        }
        Some(&(&(&self.a * x) + &self.b) / &den)
    }

    /// min over ±g of max(|a − 1|, |b|, |c|, |d − 1|).
    pub fn dist_to_identity(&self) -> QSqrt2 {
        let one = QSqrt2::one();
        let off = self.b.abs().max(self.c.abs());
        let plus = (&self.a - &one).abs().max((&self.d - &one).abs()).max(off.clone());
        let minus = (&self.a + &one).abs().max((&self.d + &one).abs()).max(off);
        plus.min(minus)
    }

    /// dist_to_identity < δ, exactly.
    pub fn within(&self, delta: &Rational) -> bool {
        self.dist_to_identity() < *delta
    }

    /// g′(x) = 1/(cx + d)².
    pub fn derivative_at(&self, x: &QSqrt2) -> Option<QSqrt2> {
        let den = &(&self.c * x) + &self.d;
        (!den.is_zero()).then(|| {
            let sq = &den * &den;
            &QSqrt2::one() / &sq
        })
    }

    /// Exact (inf, sup) of g′ over the interval; the extremes are at the
    /// endpoints since 1/(cx + d)² is monotone away from the pole.
    pub fn derivative_bounds(&self, iv: &ClosedInterval) -> Result<(QSqrt2, QSqrt2), PoleInInterval> {
        if let Some(pole) = self.pole() {
            if iv.contains(&pole) {
                return Err(PoleInInterval { pole });
            }
        }
        let x = self.derivative_at(iv.lo()).expect("pole excluded");
        let y = self.derivative_at(iv.hi()).expect("pole excluded");
        Ok(if x <= y { (x, y) } else { (y, x) })
    }

    /// c·t² + (d − a)·t − b, whose roots are the finite fixed points.
    pub fn fixed_point_poly(&self) -> Poly {
        Poly::new(alloc::vec![-&self.b, &self.d - &self.a, self.c.clone()])
    }

    pub fn classify(&self) -> Result<Classification, IdentityHasNoType> {
        if self.is_identity() {
            return Err(IdentityHasNoType);
        }
        let tr = self.trace().abs();
        let two = QSqrt2::from_int(2);
        match tr.cmp(&two) {
            Ordering::Less => Ok(Classification::Elliptic),
            Ordering::Equal => {
                if self.c.is_zero() {
                    Ok(Classification::Parabolic(ProjPoint::Infinity))
                } else {
                    let half = Rational::new(1.into(), 2.into());
                    let x = (&(&self.a - &self.d) / &self.c).mul_rational(&half);
                    Ok(Classification::Parabolic(ProjPoint::Finite(RealAlgebraic::from_qsqrt2(x))))
                }
            }
            Ordering::Greater => {
                if self.c.is_zero() {
                    let x = &self.b / &(&self.d - &self.a);
                    return Ok(Classification::Hyperbolic(
                        ProjPoint::Finite(RealAlgebraic::from_qsqrt2(x)),
                        ProjPoint::Infinity,
                    ));
                }
                let mut roots: Vec<RealAlgebraic> = RealAlgebraic::roots_of(&self.fixed_point_poly());
                debug_assert_eq!(roots.len(), 2);
                let hi = roots.pop().expect("two fixed points");
                let lo = roots.pop().expect("two fixed points");
                Ok(Classification::Hyperbolic(ProjPoint::Finite(lo), ProjPoint::Finite(hi)))
            }
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > QSqrt2::from_int(2)
    }

    pub fn in_ring(&self, ring: Ring) -> bool {
        self.entries().into_iter().all(|x| ring.contains(x))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}; {} {}]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Mat2 {
    type Err = MatError;

    /// `[a b; c d]`, entries in the `QSqrt2` text form.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| MatError::Parse(alloc::format!("{:?}: {}", s, why));
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| bad("expected [a b; c d]"))?;
        let mut entries = Vec::with_capacity(4);
        for row in inner.split(';') {
            let cols: Vec<&str> = row.split_whitespace().collect();
            if cols.len() != 2 {
                return Err(bad("each row needs two entries"));
            }
            for c in cols {
                entries.push(c.parse::<QSqrt2>().map_err(|e| bad(&alloc::format!("{}", e)))?);
            }
        }
        if entries.len() != 4 {
            return Err(bad("expected two rows"));
        }
        let d = entries.pop().unwrap();
        let c = entries.pop().unwrap();
        let b = entries.pop().unwrap();
        let a = entries.pop().unwrap();
        Mat2::new(a, b, c, d)
    }
}
