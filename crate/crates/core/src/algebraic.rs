//! Real algebraic numbers as (square-free polynomial over ℚ(√2), isolating
//! interval with rational endpoints).
//!
//! Keeping the defining polynomial over ℚ(√2) means Möbius images under
//! matrices with ℚ(√2) entries are computed by substitution with no growth
//! in degree. The rational polynomial used for serialization is the
//! square-free norm of the stored one.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::number::{ceil_int, denominator_lcm, int, rat, rational_sqrt, QSqrt2, Rational, ZSqrt2};
use crate::poly::{count_roots, Poly};

/// Largest degree accepted for a defining polynomial.
pub const MAX_DEGREE: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraicError {
    ZeroPolynomial,
    ConstantPolynomial,
    DegreeTooLarge(usize),
    NotSquarefree,
    EmptyInterval,
    /// The open isolating interval holds this many roots instead of one.
    RootCount(usize),
}

impl fmt::Display for AlgebraicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraicError::ZeroPolynomial => f.write_str("defining polynomial is zero"),
            AlgebraicError::ConstantPolynomial => f.write_str("defining polynomial is constant"),
            AlgebraicError::DegreeTooLarge(d) => {
                write!(f, "degree {} exceeds the supported maximum {}", d, MAX_DEGREE)
            }
            AlgebraicError::NotSquarefree => f.write_str("defining polynomial is not square-free"),
            AlgebraicError::EmptyInterval => f.write_str("isolating interval is empty (lo >= hi)"),
            AlgebraicError::RootCount(n) => {
                write!(f, "isolating interval contains {} roots, expected exactly 1", n)
            }
        }
    }
}

impl core::error::Error for AlgebraicError {}

/// A real algebraic number.
///
/// Invariants: `poly` is monic and square-free with degree in `1..=8`; it
/// has exactly one root in the open interval `(lo, hi)`, and is nonzero with
/// opposite signs at `lo` and `hi`. Degree-one polynomials mark values of
/// ℚ(√2), which compare and transform without refinement.
#[derive(Clone)]
pub struct RealAlgebraic {
    poly: Arc<Poly>,
    lo: Rational,
    hi: Rational,
}

impl RealAlgebraic {
    pub fn from_rational(q: Rational) -> Self {
        let lo = &q - Rational::one();
        let hi = &q + Rational::one();
        RealAlgebraic {
            poly: Arc::new(Poly::root_at(QSqrt2::from_rational(q))),
            lo,
            hi,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    pub fn from_qsqrt2(v: QSqrt2) -> Self {
        if v.is_rational() {
            return Self::from_rational(v.r().clone());
        }
        let (lo, hi) = v.enclose(&(v.s().abs() / int(4)));
        RealAlgebraic {
            poly: Arc::new(Poly::root_at(v)),
            lo,
            hi,
        }
    }

    /// Validates `poly` and `(lo, hi)` and reduces the defining polynomial
    /// when the root lies in a smaller extension (linear over ℚ(√2), or a
    /// ℚ(√2)-quadratic factor of a rational quartic).
    pub fn new(poly: Poly, lo: Rational, hi: Rational) -> Result<Self, AlgebraicError> {
        let deg = poly.degree().ok_or(AlgebraicError::ZeroPolynomial)?;
        if deg == 0 {
            return Err(AlgebraicError::ConstantPolynomial);
        }
        if deg > MAX_DEGREE {
            return Err(AlgebraicError::DegreeTooLarge(deg));
        }
        if lo >= hi {
            return Err(AlgebraicError::EmptyInterval);
        }
        let poly = poly.monic();
        if !poly.is_squarefree() {
            return Err(AlgebraicError::NotSquarefree);
        }
        let seq = poly.sturm_sequence();
        let n = open_count(&seq, &lo, &hi);
        if n != 1 {
            return Err(AlgebraicError::RootCount(n));
        }
        Ok(match shrink_to_sign_change(&poly, &seq, lo, hi) {
            Isolated::Exact(q) => Self::from_rational(q),
            Isolated::Interval(lo, hi) => reduce(poly, lo, hi),
        })
    }

    /// Same as [`RealAlgebraic::new`] for a polynomial with rational
    /// coefficients in ascending order.
    pub fn from_rational_poly(coeffs: &[Rational], lo: Rational, hi: Rational) -> Result<Self, AlgebraicError> {
        Self::new(Poly::from_rationals(coeffs), lo, hi)
    }

    /// All real roots of a nonzero polynomial, increasing.
    pub fn roots_of(poly: &Poly) -> Vec<Self> {
        let p = poly.squarefree_part();
        match p.degree() {
            None | Some(0) => return Vec::new(),
            Some(1) => return vec![Self::from_qsqrt2(-&p.coeffs()[0])],
            Some(2) => {
                let c = p.coeffs();
                let disc = &(&c[1] * &c[1]) - &c[0].mul_rational(&int(4));
                if disc.is_negative() {
                    return Vec::new();
                }
                if let Some(root) = disc.sqrt_exact() {
                    let half = rat(1, 2);
                    let a = (&-&c[1] - &root).mul_rational(&half);
                    let b = (&-&c[1] + &root).mul_rational(&half);
                    return vec![Self::from_qsqrt2(a), Self::from_qsqrt2(b)];
                }
            }
            Some(_) => {}
        }
        let seq = p.sturm_sequence();
        let bound = p.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((lo, hi)) = stack.pop() {
            let n = open_count(&seq, &lo, &hi);
            if n == 0 {
                continue;
            }
            if n == 1 {
                out.push(match shrink_to_sign_change(&p, &seq, lo, hi) {
                    Isolated::Exact(q) => Self::from_rational(q),
                    Isolated::Interval(lo, hi) => reduce(p.clone(), lo, hi),
                });
                continue;
            }
            let mid = split_point(&lo, &hi);
            if p.sign_at(&mid) == Ordering::Equal {
                out.push(Self::from_rational(mid.clone()));
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            } else {
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
        out.sort();
        out
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    /// The value, when it lies in ℚ(√2).
    pub fn exact(&self) -> Option<QSqrt2> {
        (self.degree() == 1).then(|| -&self.poly.coeffs()[0])
    }

    pub fn is_exact(&self) -> bool {
        self.degree() == 1
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.exact().and_then(|v| v.as_rational().cloned())
    }

    fn sign_lo(&self) -> Ordering {
        self.poly.sign_at(&self.lo)
    }

    /// Position of the root relative to a rational `m` in `(lo, hi)`.
    fn locate(&self, sign_lo: Ordering, m: &Rational) -> Ordering {
        match self.poly.sign_at(m) {
            Ordering::Equal => Ordering::Equal,
            s if s == sign_lo => Ordering::Greater,
            _ => Ordering::Less,
        }
    }

    /// Halves the isolating interval.
    pub fn refine(&self) -> Self {
        let mid = split_point(&self.lo, &self.hi);
        match self.locate(self.sign_lo(), &mid) {
            Ordering::Equal => Self::from_rational(mid),
            Ordering::Greater => RealAlgebraic {
                poly: self.poly.clone(),
                lo: mid,
                hi: self.hi.clone(),
            },
            Ordering::Less => RealAlgebraic {
                poly: self.poly.clone(),
                lo: self.lo.clone(),
                hi: mid,
            },
        }
    }

    /// Bisects down to width ≤ 2⁻⁴⁸ at short dyadic points, so that the
    /// isolator has small endpoints and distinct numbers rarely overlap.
    fn tightened(self) -> Self {
        let width = rat(1, 1 << 48);
        let mut cur = self;
        while !cur.is_exact() && &cur.hi - &cur.lo > width {
            cur = cur.refine();
        }
        cur
    }

    /// Rationals `lo < x < hi` with `hi - lo <= width`, by bisection from the
    /// stored isolator.
    pub fn approx(&self, width: &Rational) -> (Rational, Rational) {
        if let Some(v) = self.exact() {
            if &self.hi - &self.lo <= *width {
                return (self.lo.clone(), self.hi.clone());
            }
            return v.enclose(width);
        }
        let mut cur = self.clone();
        while &cur.hi - &cur.lo > *width {
            cur = cur.refine();
            if let Some(v) = cur.exact() {
                return v.enclose(width);
            }
        }
        (cur.lo, cur.hi)
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(v) = self.exact() {
            return v.to_f64();
        }
        let (lo, hi) = self.approx(&rat(1, 1 << 60));
        ((lo + hi) / int(2)).to_f64().unwrap_or(f64::NAN)
    }

    pub fn signum(&self) -> Ordering {
        self.cmp_rational(&Rational::zero())
    }

    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        if let Some(v) = self.exact() {
            return v.partial_cmp(q).expect("total");
        }
        if q <= &self.lo {
            return Ordering::Greater;
        }
        if q >= &self.hi {
            return Ordering::Less;
        }
        self.locate(self.sign_lo(), q)
    }

    /// Compares with an element of ℚ(√2) exactly.
    pub fn cmp_qsqrt2(&self, v: &QSqrt2) -> Ordering {
        if let Some(x) = self.exact() {
            return x.cmp(v);
        }
        if let Some(q) = v.as_rational() {
            return self.cmp_rational(q);
        }
        if v <= &self.lo {
            return Ordering::Greater;
        }
        if v >= &self.hi {
            return Ordering::Less;
        }
        match self.poly.eval(v).signum() {
            Ordering::Equal => Ordering::Equal,
            s if s == self.sign_lo() => Ordering::Greater,
            _ => Ordering::Less,
        }
    }

    /// Does `q` vanish at this number.
    pub fn is_root_of(&self, q: &Poly) -> bool {
        if q.is_zero() {
            return true;
        }
        if let Some(v) = self.exact() {
            return q.eval(&v).is_zero();
        }
        let g = self.poly.gcd(q);
        if g.degree().unwrap_or(0) == 0 {
            return false;
        }
        // g divides the square-free defining polynomial, so it is nonzero at
        // lo and hi and has at most one root in between
        g.sign_at(&self.lo) != g.sign_at(&self.hi)
    }

    /// `(a·x + b)/(c·x + d)`; `None` when `c·x + d = 0`. The matrix must be
    /// invertible.
    pub fn apply_moebius(&self, a: &QSqrt2, b: &QSqrt2, c: &QSqrt2, d: &QSqrt2) -> Option<Self> {
        if let Some(v) = self.exact() {
            let den = &(c * &v) + d;
            if den.is_zero() {
                return None;
            }
            let num = &(a * &v) + b;
            return Some(Self::from_qsqrt2(&num / &den));
        }
        let mut cur = self.clone();
        if !c.is_zero() {
            let pole = &(-d) / c;
            // move the closed isolator off the pole
            loop {
                if pole < cur.lo || pole > cur.hi {
                    break;
                }
                if pole > cur.lo && pole < cur.hi && cur.cmp_qsqrt2(&pole) == Ordering::Equal {
                    return None;
                }
                cur = cur.refine();
                if cur.is_exact() {
                    return cur.apply_moebius(a, b, c, d);
                }
            }
        }
        // x = (d·y - b)/(-c·y + a)
        let q = cur.poly.substitute_moebius(d, &-b, &-c, a).monic();
        let lm = denominator_lcm([a, b, c, d]);
        let [za, zb, zc, zd] = [a, b, c, d].map(|x| ZSqrt2::scaled(x, &lm));
        let image = |t: &Rational| -> QSqrt2 {
            let (p, q) = (t.numer(), t.denom());
            let num = za.mul_int(p).add(&zb.mul_int(q));
            let den = zc.mul_int(p).add(&zd.mul_int(q));
            num.div(&den)
        };
        let ya = image(&cur.lo);
        let yb = image(&cur.hi);
        debug_assert!(ya < yb);
        Some(
            match (ya.as_rational(), yb.as_rational()) {
                (Some(l), Some(h)) => RealAlgebraic {
                    poly: Arc::new(q),
                    lo: l.clone(),
                    hi: h.clone(),
                },
                _ => rationalize_bracket(q, ya, yb),
            }
            .tightened(),
        )
    }

    /// Serialized form: a square-free polynomial with rational coefficients
    /// (ascending) and an isolating interval for it.
    pub fn rational_repr(&self) -> (Vec<Rational>, Rational, Rational) {
        if let Some(v) = self.exact() {
            if let Some(q) = v.as_rational() {
                return (vec![-q, Rational::one()], self.lo.clone(), self.hi.clone());
            }
            // t² - 2r·t + (r² - 2s²); the enclosure must exclude the conjugate
            let (lo, hi) = if &self.hi - &self.lo < v.s().abs() {
                (self.lo.clone(), self.hi.clone())
            } else {
                v.enclose(&(v.s().abs() / int(2)))
            };
            let coeffs = vec![v.norm(), -(v.r() * int(2)), Rational::one()];
            return (coeffs, lo, hi);
        }
        if let Some(cs) = self.poly.rational_coeffs() {
            return (cs, self.lo.clone(), self.hi.clone());
        }
        let n = self.poly.norm().squarefree_part();
        let seq = n.sturm_sequence();
        let mut cur = self.clone();
        while open_count(&seq, &cur.lo, &cur.hi) != 1 {
            cur = cur.refine();
        }
        let coeffs = n
            .rational_coeffs()
            .expect("norm has rational coefficients");
        (coeffs, cur.lo, cur.hi)
    }
}

/// A dyadic rational in the middle half of `(lo, hi)` with a short
/// denominator.
fn split_point(lo: &Rational, hi: &Rational) -> Rational {
    let w = hi - lo;
    let quarter = &w / int(4);
    let bits = |x: &BigInt| x.bits() as i64;
    // 2^-k ≤ w/2
    let k = (bits(w.denom()) - bits(w.numer()) + 2).max(0) as usize;
    let scale = Rational::from_integer(BigInt::one() << k);
    let j = ceil_int(&((lo + &quarter) * &scale));
    let m = Rational::new(j, BigInt::one() << k);
    debug_assert!(&m > lo && &m < hi);
    m
}

enum Isolated {
    Exact(Rational),
    Interval(Rational, Rational),
}

/// Roots in the open interval.
fn open_count(seq: &[Poly], lo: &Rational, hi: &Rational) -> usize {
    let n = count_roots(seq, lo, hi);
    if seq[0].sign_at(hi) == Ordering::Equal {
        n - 1
    } else {
        n
    }
}

/// Given exactly one root in `(lo, hi)`, narrows until `p` is nonzero at
/// both ends.
fn shrink_to_sign_change(p: &Poly, seq: &[Poly], mut lo: Rational, mut hi: Rational) -> Isolated {
    loop {
        let zl = p.sign_at(&lo) == Ordering::Equal;
        let zh = p.sign_at(&hi) == Ordering::Equal;
        if !zl && !zh {
            return Isolated::Interval(lo, hi);
        }
        let mid = split_point(&lo, &hi);
        if p.sign_at(&mid) == Ordering::Equal {
            return Isolated::Exact(mid);
        }
        if open_count(seq, &lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// Replaces a ℚ(√2) bracket `(ya, yb)` around the unique root of `q` by a
/// rational one.
fn rationalize_bracket(q: Poly, ya: QSqrt2, yb: QSqrt2) -> RealAlgebraic {
    let sign_a = q.sign_at_exact(&ya);
    debug_assert_ne!(sign_a, Ordering::Equal);
    let (mut lo, mut hi) = (ya, yb);
    loop {
        if let (Some(l), Some(h)) = (lo.as_rational(), hi.as_rational()) {
            return RealAlgebraic {
                poly: Arc::new(q),
                lo: l.clone(),
                hi: h.clone(),
            };
        }
        let m = QSqrt2::rational_between(&lo, &hi);
        match q.sign_at(&m) {
            Ordering::Equal => return RealAlgebraic::from_rational(m),
            s if s == sign_a => lo = QSqrt2::from_rational(m),
            _ => hi = QSqrt2::from_rational(m),
        }
    }
}

/// Lowers the defining polynomial where possible. The input is monic,
/// square-free, with a sign-changing isolator.
fn reduce(poly: Poly, lo: Rational, hi: Rational) -> RealAlgebraic {
    match poly.degree() {
        Some(2) => {
            let c = poly.coeffs();
            let disc = &(&c[1] * &c[1]) - &c[0].mul_rational(&int(4));
            if let Some(root) = disc.sqrt_exact() {
                let half = rat(1, 2);
                for cand in [(&-&c[1] - &root).mul_rational(&half), (&-&c[1] + &root).mul_rational(&half)] {
                    if cand > lo && cand < hi {
                        return RealAlgebraic::from_qsqrt2(cand);
                    }
                }
                unreachable!("the isolated root is one of the two roots");
            }
        }
        Some(4) if poly.is_rational() => {
            if let Some(q) = split_conjugate_quadratics(&poly, &lo, &hi) {
                return reduce(q, lo, hi);
            }
        }
        _ => {}
    }
    RealAlgebraic {
        poly: Arc::new(poly),
        lo,
        hi,
    }
    .tightened()
}

/// For a monic rational quartic `P = q·q̄` with `q` quadratic over ℚ(√2),
/// returns the factor with a root in `(lo, hi)`.
///
/// Writing `q = t² + (b0 + b1√2)t + (c0 + c1√2)` gives
/// `P = (t² + b0·t + c0)² − 2(b1·t + c1)²`, so `b0 = p3/2`, and `s = b1²`
/// is a rational root of a cubic resolvent.
fn split_conjugate_quadratics(p: &Poly, lo: &Rational, hi: &Rational) -> Option<Poly> {
    let c: Vec<Rational> = p.rational_coeffs()?;
    let (p0, p1, p2, p3) = (&c[0], &c[1], &c[2], &c[3]);
    let two = int(2);
    let b0 = p3 / &two;
    let k = (p2 - &b0 * &b0) / &two;
    let mut candidates: Vec<(Rational, Rational, Rational, Rational)> = Vec::new();

    // b1 = 0
    if p1 == &(&two * &b0 * &k) {
        let c1sq = (&k * &k - p0) / &two;
        if let Some(c1) = rational_sqrt(&c1sq) {
            if !c1.is_zero() {
                candidates.push((b0.clone(), Rational::zero(), k.clone(), c1));
            }
        }
    }
    // b1 ≠ 0
    let e = &two * &b0 * &k - p1;
    let resolvent = [
        -(&e * &e),
        int(8) * &k * &k - int(4) * &b0 * &e - int(8) * p0,
        int(16) * &k - int(4) * &b0 * &b0,
        int(8),
    ];
    for s in positive_rational_roots(&resolvent) {
        if let Some(b1) = rational_sqrt(&s) {
            let c0 = &k + &s;
            let c1 = (&two * &b0 * &c0 - p1) / (int(4) * &b1);
            candidates.push((b0.clone(), b1, c0, c1));
        }
    }
    for (b0, b1, c0, c1) in candidates {
        for sign in [Rational::one(), -Rational::one()] {
            let q = Poly::new(vec![
                QSqrt2::new(c0.clone(), &c1 * &sign),
                QSqrt2::new(b0.clone(), &b1 * &sign),
                QSqrt2::one(),
            ]);
            if q.mul(&q.conj()) != *p {
                continue;
            }
            let seq = q.sturm_sequence();
            if open_count(&seq, lo, hi) == 1 {
                return Some(q);
            }
        }
    }
    None
}

/// Positive rational roots of a polynomial with rational coefficients.
///
/// After clearing denominators, a rational root times the leading
/// coefficient is an integer; real roots are refined until that lattice
/// point is unique and then tested exactly.
fn positive_rational_roots(coeffs: &[Rational]) -> Vec<Rational> {
    let p = Poly::from_rationals(coeffs);
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let denom_lcm = coeffs.iter().fold(BigInt::one(), |acc, q| {
        num_integer::Integer::lcm(&acc, q.denom())
    });
    let lead = (coeffs[deg].clone() * Rational::from_integer(denom_lcm)).to_integer();
    let lead_abs = Rational::from_integer(lead.abs());
    let step = Rational::one() / &lead_abs;
    let mut out = Vec::new();
    for root in RealAlgebraic::roots_of(&p) {
        if root.signum() != Ordering::Greater {
            continue;
        }
        if let Some(q) = root.as_rational() {
            out.push(q);
            continue;
        }
        let (l, h) = root.approx(&(&step / int(2)));
        // the only lattice point k/|lead| that can lie in (l, h)
        let k = (&h * &lead_abs).floor();
        let cand = k / &lead_abs;
        if cand > l && p.sign_at(&cand) == Ordering::Equal {
            out.push(cand);
        }
    }
    out
}

impl PartialEq for RealAlgebraic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for RealAlgebraic {}

impl PartialOrd for RealAlgebraic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RealAlgebraic {
    /// Exact comparison. Equality is decided by a common root of the two
    /// defining polynomials inside the overlap of the isolators; unequal
    /// values are separated by bisection.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.exact(), other.exact()) {
            (Some(x), Some(y)) => return x.cmp(&y),
            (Some(x), None) => return other.cmp_qsqrt2(&x).reverse(),
            (None, Some(y)) => return self.cmp_qsqrt2(&y),
            (None, None) => {}
        }
        if self.hi <= other.lo {
            return Ordering::Less;
        }
        if other.hi <= self.lo {
            return Ordering::Greater;
        }
        let ol = core::cmp::max(&self.lo, &other.lo).clone();
        let oh = core::cmp::min(&self.hi, &other.hi).clone();
        let common = if Arc::ptr_eq(&self.poly, &other.poly) || self.poly == other.poly {
            (*self.poly).clone()
        } else {
            self.poly.gcd(&other.poly)
        };
        if common.degree().unwrap_or(0) >= 1 && common.sign_at(&ol) != common.sign_at(&oh) {
            return Ordering::Equal;
        }
        // distinct values: separate by bisecting the overlap
        let (sx, sy) = (self.sign_lo(), other.sign_lo());
        let (mut x, mut y) = (self.clone(), other.clone());
        loop {
            if x.hi <= y.lo {
                return Ordering::Less;
            }
            if y.hi <= x.lo {
                return Ordering::Greater;
            }
            let l = core::cmp::max(&x.lo, &y.lo);
            let h = core::cmp::min(&x.hi, &y.hi);
            let m = split_point(l, h);
            let px = x.locate(sx, &m);
            let py = y.locate(sy, &m);
            match (px, py) {
                (Ordering::Less, Ordering::Less) => {
                    x.hi = m.clone();
                    y.hi = m;
                }
                (Ordering::Greater, Ordering::Greater) => {
                    x.lo = m.clone();
                    y.lo = m;
                }
                (Ordering::Equal, Ordering::Equal) => return Ordering::Equal,
                (px, py) => {
                    // x vs m and y vs m differ, which orders x against y
                    return if px < py { Ordering::Less } else { Ordering::Greater };
                }
            }
        }
    }
}

impl fmt::Debug for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact() {
            Some(v) => write!(f, "{}", v),
            None => write!(
                f,
                "root of {} in ({}, {}) ~ {:.12}",
                self.poly,
                self.lo,
                self.hi,
                self.to_f64()
            ),
        }
    }
}

impl From<Rational> for RealAlgebraic {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl From<QSqrt2> for RealAlgebraic {
    fn from(v: QSqrt2) -> Self {
        Self::from_qsqrt2(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&k| QSqrt2::from_int(k)).collect())
    }

    fn root(c: &[i64], lo: (i64, i64), hi: (i64, i64)) -> RealAlgebraic {
        RealAlgebraic::new(rp(c), rat(lo.0, lo.1), rat(hi.0, hi.1)).unwrap()
    }

    #[test]
    fn compare_examples() {
        let sqrt2 = root(&[-2, 0, 1], (1, 1), (2, 1));
        assert!(sqrt2.is_exact(), "√2 reduces to an exact ℚ(√2) value");
        let three_halves = RealAlgebraic::new(rp(&[-3, 2]), int(0), int(5)).unwrap();
        assert_eq!(sqrt2.cmp(&three_halves), Ordering::Less);
        let sqrt2_wide = root(&[-2, 0, 1], (0, 1), (100, 1));
        assert_eq!(sqrt2, sqrt2_wide);
        let sqrt3 = root(&[-3, 0, 1], (1, 1), (2, 1));
        assert!(!sqrt3.is_exact());
        assert_eq!(RealAlgebraic::from_int(0).cmp(&sqrt3), Ordering::Less);
        assert_eq!(sqrt3.cmp(&sqrt2), Ordering::Greater);
    }

    #[test]
    fn equality_with_different_polynomials() {
        // √3 as a root of t² - 3 and of (t² - 3)(t - 5)
        let a = root(&[-3, 0, 1], (1, 1), (2, 1));
        let b = RealAlgebraic::new(rp(&[15, -3, -5, 1]), rat(3, 2), rat(7, 4)).unwrap();
        assert_eq!(a, b);
        let c = RealAlgebraic::new(rp(&[15, -3, -5, 1]), rat(-2, 1), rat(-3, 2)).unwrap();
        assert!(c < a);
    }

    #[test]
    fn moebius_examples() {
        let zero = RealAlgebraic::from_int(0);
        let one = QSqrt2::one();
        let z = QSqrt2::zero();
        assert_eq!(zero.apply_moebius(&one, &z, &z, &one).unwrap(), zero);
        let x = RealAlgebraic::from_int(1);
        let y = x.apply_moebius(&one, &z, &one, &one).unwrap();
        assert_eq!(y, RealAlgebraic::from_rational(rat(1, 2)));
        let sqrt3 = root(&[-3, 0, 1], (1, 1), (2, 1));
        let shifted = sqrt3.apply_moebius(&one, &one, &z, &one).unwrap();
        assert_eq!(shifted.poly(), &rp(&[-2, -2, 1]));
        assert!(shifted.cmp_rational(&int(2)) == Ordering::Greater);
        assert!(shifted.cmp_rational(&int(3)) == Ordering::Less);
        // pole
        let m1 = -QSqrt2::one();
        assert!(x.apply_moebius(&one, &z, &one, &m1).is_none());
    }

    #[test]
    fn moebius_with_sqrt2_entries_roundtrips() {
        let x = root(&[-3, 0, 1], (1, 1), (2, 1));
        let s = QSqrt2::sqrt2();
        let h = QSqrt2::new(rat(1, 2), Rational::zero());
        // (√2 1/2; 0 1/√2) and its inverse
        let inv_s = QSqrt2::new(Rational::zero(), rat(1, 2));
        let y = x.apply_moebius(&s, &h, &QSqrt2::zero(), &inv_s).unwrap();
        assert!(!y.poly().is_rational());
        let back = y
            .apply_moebius(&inv_s, &-h.clone(), &QSqrt2::zero(), &s)
            .unwrap();
        assert_eq!(back, x);
        let expect = 2.0 * 3f64.sqrt() + 0.5 * core::f64::consts::SQRT_2;
        assert!((y.to_f64() - expect).abs() < 1e-12);
    }

    #[test]
    fn approx_widths() {
        let sqrt2 = root(&[-2, 0, 1], (1, 1), (2, 1));
        let (lo, hi) = sqrt2.approx(&rat(1, 100));
        assert!(&hi - &lo <= rat(1, 100));
        assert!(&lo * &lo < int(2) && &hi * &hi > int(2) && lo.is_positive());
        let wide = root(&[-3, 0, 1], (1, 1), (2, 1));
        let (lo, hi) = wide.approx(&int(2));
        assert!(&hi - &lo <= rat(1, 1 << 48));
        assert!(&lo * &lo < int(3) && &hi * &hi > int(3));
        let third = RealAlgebraic::from_rational(rat(1, 3));
        let (lo, hi) = third.approx(&rat(1, 1000));
        assert!(lo < rat(1, 3) && hi > rat(1, 3));
    }

    #[test]
    fn roots_of_polynomials() {
        let r = RealAlgebraic::roots_of(&rp(&[0, -1, 0, 1]));
        assert_eq!(r.len(), 3);
        assert_eq!(r[1], RealAlgebraic::from_int(0));
        let r = RealAlgebraic::roots_of(&rp(&[-1, -1, 1]));
        assert_eq!(r.len(), 2);
        assert!((r[0].to_f64() - (1.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((r[1].to_f64() - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!(RealAlgebraic::roots_of(&rp(&[1, 0, 1])).is_empty());
    }

    #[test]
    fn conjugate_quartic_splits_back() {
        // q = t² - (1 + √2): roots ±sqrt(1+√2); norm t⁴ - 2t² - 1
        let q = Poly::new(vec![
            QSqrt2::new(int(-1), int(-1)),
            QSqrt2::zero(),
            QSqrt2::one(),
        ]);
        let x = RealAlgebraic::roots_of(&q).pop().unwrap();
        let (coeffs, lo, hi) = x.rational_repr();
        assert_eq!(coeffs, vec![int(-1), int(0), int(-2), int(0), int(1)]);
        let back = RealAlgebraic::from_rational_poly(&coeffs, lo, hi).unwrap();
        assert_eq!(back.degree(), 2);
        assert_eq!(back.poly(), &q);
        assert_eq!(back, x);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            RealAlgebraic::new(rp(&[-2, 0, 1]), int(-2), int(2)).unwrap_err(),
            AlgebraicError::RootCount(2)
        );
        assert_eq!(
            RealAlgebraic::new(rp(&[1, -2, 1]), int(0), int(2)).unwrap_err(),
            AlgebraicError::NotSquarefree
        );
        assert_eq!(
            RealAlgebraic::new(rp(&[-2, 0, 1]), int(2), int(1)).unwrap_err(),
            AlgebraicError::EmptyInterval
        );
    }

    #[test]
    fn endpoint_roots_are_nudged() {
        // roots 1 and 2 of (t-1)(t-2); isolate 2 with (1, 3)
        let x = RealAlgebraic::new(rp(&[2, -3, 1]), int(1), int(3)).unwrap();
        assert_eq!(x, RealAlgebraic::from_int(2));
    }
}
