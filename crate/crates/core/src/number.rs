//! Rationals and the real quadratic field ℚ(√2).

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Builds `n/d` from machine integers. Panics on a zero denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical text form `p/q` with `q > 0` and the fraction reduced.
pub fn format_rational(q: &Rational) -> String {
    let mut s = q.numer().to_string();
    s.push('/');
    s.push_str(&q.denom().to_string());
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseNumberError {
    pub input: String,
    pub reason: &'static str,
}

impl fmt::Display for ParseNumberError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse {:?}: {}", self.input, self.reason)
    }
}

impl core::error::Error for ParseNumberError {}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseNumberError> {
    let err = |reason| ParseNumberError {
        input: s.to_string(),
        reason,
    };
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| err("bad numerator"))?;
    let d = BigInt::from_str(d).map_err(|_| err("bad denominator"))?;
    if d.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// Rationals `(lo, hi)` with `lo < √2 < hi` and `hi - lo = 2^-bits`.
pub fn sqrt2_bounds(bits: u64) -> (Rational, Rational) {
    let scale = BigInt::one() << bits;
    let root = (BigInt::from(2) * &scale * &scale).sqrt();
    let lo = Rational::new(root.clone(), scale.clone());
    let hi = Rational::new(root + 1, scale);
    (lo, hi)
}

/// Smallest `k` with `2^-k <= w`, for `w > 0`.
fn bits_for_width(w: &Rational) -> u64 {
    // 2^-k <= n/d  <=>  d <= n * 2^k
    let mut k = 0u64;
    let d = w.denom();
    let mut n = w.numer().clone();
    while &n < d {
        n <<= 1;
        k += 1;
    }
    k
}

/// Exact square root of a non-negative rational, when it is rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Is the denominator a power of two.
pub fn is_dyadic(q: &Rational) -> bool {
    let d = q.denom();
    match d.trailing_zeros() {
        Some(tz) => (d >> tz).is_one(),
        None => false,
    }
}

/// The real number `r + s·√2`.
///
/// The representation is unique because √2 is irrational, so the derived
/// equality and hash agree with equality of real values.
#[derive(Clone, PartialEq, Eq)]
pub struct QSqrt2 {
    r: Rational,
    s: Rational,
}

// Ratio's own hash runs a continued-fraction expansion to be
// representation-independent; ours are always reduced, so hash the parts.
impl core::hash::Hash for QSqrt2 {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        for q in [&self.r, &self.s] {
            q.numer().hash(state);
            q.denom().hash(state);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DivisionByZero;

impl fmt::Display for DivisionByZero {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("division by zero in Q(sqrt2)")
    }
}

impl core::error::Error for DivisionByZero {}

impl QSqrt2 {
    pub fn new(r: Rational, s: Rational) -> Self {
        QSqrt2 { r, s }
    }

    pub fn from_rational(r: Rational) -> Self {
        QSqrt2 {
            r,
            s: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn sqrt2() -> Self {
        QSqrt2 {
            r: Rational::zero(),
            s: Rational::one(),
        }
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn s(&self) -> &Rational {
        &self.s
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.r.is_one() && self.s.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.s.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.r)
    }

    /// `r - s√2`
    pub fn conj(&self) -> Self {
        QSqrt2 {
            r: self.r.clone(),
            s: -&self.s,
        }
    }

    /// Field norm `r² - 2s²`.
    pub fn norm(&self) -> Rational {
        &self.r * &self.r - int(2) * &self.s * &self.s
    }

    /// Exact sign, decided on `sign(r)`, `sign(s)` and `r²` against `2s²`.
    pub fn signum(&self) -> Ordering {
        let sr = self.r.cmp(&Rational::zero());
        let ss = self.s.cmp(&Rational::zero());
        match (sr, ss) {
            (Ordering::Equal, o) | (o, Ordering::Equal) => o,
            (a, b) if a == b => a,
            // opposite signs: the term with the larger square wins
            (sr, _) => {
                let r2 = &self.r * &self.r;
                let s2 = int(2) * &self.s * &self.s;
                match r2.cmp(&s2) {
                    Ordering::Greater => sr,
                    Ordering::Less => sr.reverse(),
                    Ordering::Equal => unreachable!("sqrt 2 is irrational"),
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(QSqrt2 {
            r: &self.r / &n,
            s: -&self.s / &n,
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, DivisionByZero> {
        let inv = rhs.inv().ok_or(DivisionByZero)?;
        Ok(self * &inv)
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        QSqrt2 {
            r: &self.r * q,
            s: &self.s * q,
        }
    }

    /// Square root inside ℚ(√2), if the value is a square there.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        if self.s.is_zero() {
            if let Some(q) = rational_sqrt(&self.r) {
                return Some(Self::from_rational(q));
            }
            // r = 2v²  gives  sqrt(r) = v√2
            let half = &self.r / int(2);
            return rational_sqrt(&half).map(|v| QSqrt2::new(Rational::zero(), v));
        }
        // (u + v√2)² = (u² + 2v²) + 2uv√2
        let n = rational_sqrt(&self.norm())?;
        for cand in [(&self.r + &n) / int(2), (&self.r - &n) / int(2)] {
            if let Some(u) = rational_sqrt(&cand) {
                if u.is_zero() {
                    continue;
                }
                let v = &self.s / (int(2) * &u);
                let root = QSqrt2::new(u, v);
                if &(&root * &root) == self {
                    return Some(root.abs());
                }
            }
        }
        None
    }

    /// Rationals `lo < self < hi` (or `lo <= self <= hi` never; always
    /// strict) with `hi - lo <= width`.
    pub fn enclose(&self, width: &Rational) -> (Rational, Rational) {
        debug_assert!(width.is_positive());
        if self.s.is_zero() {
            let h = width / int(4);
            return (&self.r - &h, &self.r + h);
        }
        let target = width / self.s.abs();
        let (lo2, hi2) = sqrt2_bounds(bits_for_width(&target));
        if self.s.is_positive() {
            (&self.r + &self.s * lo2, &self.r + &self.s * hi2)
        } else {
            (&self.r + &self.s * hi2, &self.r + &self.s * lo2)
        }
    }

    /// A rational strictly between `lo` and `hi`, close to their midpoint.
    pub fn rational_between(lo: &Self, hi: &Self) -> Rational {
        debug_assert!(lo < hi);
        let mid = (lo + hi).mul_rational(&rat(1, 2));
        if let Some(m) = mid.as_rational() {
            return m.clone();
        }
        let gap = hi - lo;
        let mut w = rat(1, 4);
        let gap_lo = loop {
            let (l, _) = gap.enclose(&w);
            if l.is_positive() {
                break l;
            }
            w /= int(16);
        };
        let (l, h) = mid.enclose(&(gap_lo / int(4)));
        (l + h) / int(2)
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let r = self.r.to_f64().unwrap_or(f64::NAN);
        let s = self.s.to_f64().unwrap_or(f64::NAN);
        r + s * core::f64::consts::SQRT_2
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl From<Rational> for QSqrt2 {
    fn from(r: Rational) -> Self {
        QSqrt2::from_rational(r)
    }
}

impl From<i64> for QSqrt2 {
    fn from(n: i64) -> Self {
        QSqrt2::from_int(n)
    }
}

impl Ord for QSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.s == other.s {
            return self.r.cmp(&other.r);
        }
        (self - other).signum()
    }
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq<Rational> for QSqrt2 {
    fn eq(&self, other: &Rational) -> bool {
        self.s.is_zero() && &self.r == other
    }
}

impl PartialOrd<Rational> for QSqrt2 {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        if self.s.is_zero() {
            return Some(self.r.cmp(other));
        }
        Some(QSqrt2::new(&self.r - other, self.s.clone()).signum())
    }
}

impl fmt::Debug for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s.is_zero() {
            return write!(f, "{}", self.r);
        }
        if self.r.is_zero() {
            return write!(f, "{}*sqrt2", self.s);
        }
        if self.s.is_negative() {
            write!(f, "{}-{}*sqrt2", self.r, -&self.s)
        } else {
            write!(f, "{}+{}*sqrt2", self.r, self.s)
        }
    }
}

/// Parses `p/q`, `p/q*sqrt2`, `sqrt2`, `-sqrt2`, or a sum/difference of a
/// rational part and a `sqrt2` part, e.g. `1/2-3*sqrt2`.
impl FromStr for QSqrt2 {
    type Err = ParseNumberError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(ParseNumberError {
                input: s.to_string(),
                reason: "empty",
            });
        }
        // split at a sign that is not leading
        let split = t
            .char_indices()
            .skip(1)
            .find(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i);
        let (first, second) = match split {
            Some(i) => (&t[..i], Some(&t[i..])),
            None => (&t[..], None),
        };
        let mut out = QSqrt2::zero();
        for term in core::iter::once(first).chain(second) {
            out = out + parse_term(term, s)?;
        }
        Ok(out)
    }
}

fn parse_term(term: &str, whole: &str) -> Result<QSqrt2, ParseNumberError> {
    let term = term.strip_prefix('+').unwrap_or(term);
    if let Some(coef) = term.strip_suffix("sqrt2") {
        let coef = coef.strip_suffix('*').unwrap_or(coef);
        let c = match coef {
            "" => Rational::one(),
            "-" => -Rational::one(),
            c => parse_rational(c).map_err(|e| ParseNumberError {
                input: whole.to_string(),
                reason: e.reason,
            })?,
        };
        Ok(QSqrt2::new(Rational::zero(), c))
    } else {
        parse_rational(term).map(QSqrt2::from_rational)
    }
}

macro_rules! forward_binop {
    ($Trait:ident, $method:ident, $body:expr) => {
        impl<'a> $Trait<&'a QSqrt2> for &'a QSqrt2 {
            type Output = QSqrt2;
            fn $method(self, rhs: &'a QSqrt2) -> QSqrt2 {
                let f: fn(&QSqrt2, &QSqrt2) -> QSqrt2 = $body;
                f(self, rhs)
            }
        }
        impl $Trait<QSqrt2> for QSqrt2 {
            type Output = QSqrt2;
            fn $method(self, rhs: QSqrt2) -> QSqrt2 {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $Trait<&'a QSqrt2> for QSqrt2 {
            type Output = QSqrt2;
            fn $method(self, rhs: &'a QSqrt2) -> QSqrt2 {
                (&self).$method(rhs)
            }
        }
        impl<'a> $Trait<QSqrt2> for &'a QSqrt2 {
            type Output = QSqrt2;
            fn $method(self, rhs: QSqrt2) -> QSqrt2 {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |x, y| QSqrt2 {
    r: &x.r + &y.r,
    s: &x.s + &y.s,
});
forward_binop!(Sub, sub, |x, y| QSqrt2 {
    r: &x.r - &y.r,
    s: &x.s - &y.s,
});
forward_binop!(Mul, mul, |x, y| {
    if x.s.is_zero() {
        return y.mul_rational(&x.r);
    }
    if y.s.is_zero() {
        return x.mul_rational(&y.r);
    }
    QSqrt2 {
        r: &x.r * &y.r + int(2) * &x.s * &y.s,
        s: &x.r * &y.s + &x.s * &y.r,
    }
});
// Panics on division by zero, like the rational operator; use
// `checked_div` where the divisor is not known to be nonzero.
forward_binop!(Div, div, |x, y| x
    .checked_div(y)
    .expect("division by zero in Q(sqrt2)"));

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 {
            r: -self.r,
            s: -self.s,
        }
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 {
            r: -&self.r,
            s: -&self.s,
        }
    }
}

impl Zero for QSqrt2 {
    fn zero() -> Self {
        QSqrt2::zero()
    }
    fn is_zero(&self) -> bool {
        QSqrt2::is_zero(self)
    }
}

impl One for QSqrt2 {
    fn one() -> Self {
        QSqrt2::one()
    }
}

/// Integer power of a rational, used for small closed-form bounds.
pub fn rational_pow(q: &Rational, e: u32) -> Rational {
    num_traits::pow(q.clone(), e as usize)
}

/// `ceil(q)` as an integer.
pub fn ceil_int(q: &Rational) -> BigInt {
    q.numer().div_ceil(q.denom())
}

/// a + b√2 with integer a, b.
#[derive(Clone)]
pub(crate) struct ZSqrt2 {
    pub a: BigInt,
    pub b: BigInt,
}

impl ZSqrt2 {
    pub fn zero() -> Self {
        ZSqrt2 { a: BigInt::zero(), b: BigInt::zero() }
    }

    pub fn one() -> Self {
        ZSqrt2 { a: BigInt::one(), b: BigInt::zero() }
    }

    /// `l·x`, where `l` is a common denominator of both parts of `x`.
    pub fn scaled(x: &QSqrt2, l: &BigInt) -> Self {
        let part = |q: &Rational| q.numer() * (l / q.denom());
        ZSqrt2 { a: part(x.r()), b: part(x.s()) }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        ZSqrt2 { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    pub fn mul(&self, o: &Self) -> Self {
        ZSqrt2 {
            a: &self.a * &o.a + BigInt::from(2) * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        ZSqrt2 { a: &self.a * k, b: &self.b * k }
    }

    /// `self / other` in ℚ(√2).
    pub fn div(&self, other: &Self) -> QSqrt2 {
        let conj = ZSqrt2 { a: other.a.clone(), b: -&other.b };
        let n = other.mul(&conj).a;
        let x = self.mul(&conj);
        QSqrt2::new(Rational::new(x.a, n.clone()), Rational::new(x.b, n))
    }
}

pub(crate) fn denominator_lcm<'a>(xs: impl IntoIterator<Item = &'a QSqrt2>) -> BigInt {
    let mut l = BigInt::one();
    for x in xs {
        for d in [x.r().denom(), x.s().denom()] {
            if !d.is_one() {
                l = l.lcm(d);
            }
        }
    }
    l
}
