//! Dense univariate polynomials with coefficients in ℚ(√2).

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::number::{denominator_lcm, int, QSqrt2, Rational, ZSqrt2};

fn zmul(p: &[ZSqrt2], q: &[ZSqrt2]) -> Vec<ZSqrt2> {
    let mut out = vec![ZSqrt2::zero(); p.len() + q.len() - 1];
    for (i, x) in p.iter().enumerate() {
        for (j, y) in q.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

trait SignOrd {
    fn sign_ord(&self) -> Ordering;
}

impl SignOrd for BigInt {
    fn sign_ord(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

/// Coefficients in ascending order, no trailing zeros. The zero polynomial
/// has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<QSqrt2>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: QSqrt2) -> Self {
        Self::new(vec![c])
    }

    pub fn new(mut coeffs: Vec<QSqrt2>) -> Self {
        while coeffs.last().is_some_and(QSqrt2::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_rationals(coeffs: &[Rational]) -> Self {
        Self::new(coeffs.iter().cloned().map(QSqrt2::from_rational).collect())
    }

    /// `t - v`
    pub fn root_at(v: QSqrt2) -> Self {
        Self::new(vec![-v, QSqrt2::one()])
    }

    pub fn coeffs(&self) -> &[QSqrt2] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&QSqrt2> {
        self.coeffs.last()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(QSqrt2::is_rational)
    }

    pub fn rational_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs
            .iter()
            .map(|c| c.as_rational().cloned())
            .collect()
    }

    pub fn eval(&self, x: &QSqrt2) -> QSqrt2 {
        let mut acc = QSqrt2::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> QSqrt2 {
        let mut acc = QSqrt2::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc.mul_rational(x) + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> Ordering {
        let Some(n) = self.degree() else {
            return Ordering::Equal;
        };
        // q^n·P(p/q) = Σ cₖ·pᵏ·q^(n−k), summed as unreduced fractions
        let (p, q) = (x.numer(), x.denom());
        let mut terms = Vec::with_capacity(n + 1);
        let mut pk = BigInt::one();
        for _ in 0..=n {
            terms.push(pk.clone());
            pk *= p;
        }
        let mut qk = BigInt::one();
        for k in (0..=n).rev() {
            terms[k] *= &qk;
            qk *= q;
        }
        let sum = |part: &dyn Fn(&QSqrt2) -> &Rational| -> (BigInt, BigInt) {
            let (mut num, mut den) = (BigInt::zero(), BigInt::one());
            for (c, t) in self.coeffs.iter().zip(&terms) {
                let c = part(c);
                if c.is_zero() {
                    continue;
                }
                num = &num * c.denom() + c.numer() * t * &den;
                den *= c.denom();
            }
            (num, den)
        };
        let (a, da) = sum(&|c| c.r());
        if self.is_rational() {
            return a.sign_ord();
        }
        let (b, db) = sum(&|c| c.s());
        // sign of a/da + (b/db)·√2 with da, db > 0
        match (a.sign_ord(), b.sign_ord()) {
            (Ordering::Equal, o) | (o, Ordering::Equal) => o,
            (x, y) if x == y => x,
            (sa, _) => {
                let lhs = &a * &a * &db * &db;
                let rhs = BigInt::from(2) * &b * &b * &da * &da;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => unreachable!("sqrt 2 is irrational"),
                }
            }
        }
    }

    pub fn sign_at_exact(&self, x: &QSqrt2) -> Ordering {
        match x.as_rational() {
            Some(q) => self.sign_at(q),
            None => self.eval(x).signum(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul_rational(&int(k as i64)))
                .collect(),
        )
    }

    pub fn scale(&self, k: &QSqrt2) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv().expect("leading coefficient is nonzero")),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = QSqrt2::zero();
        Self::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&z) + other.coeffs.get(k).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![QSqrt2::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dl = divisor.leading().expect("division by the zero polynomial");
        let dl_inv = dl.inv().expect("nonzero");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![QSqrt2::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &dl_inv;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &(&c * dc);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) | Some(1) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// `self / gcd(self, self')`, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) <= 1 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            self.monic()
        } else {
            self.div_rem(&g).0.monic()
        }
    }

    /// Coefficient-wise Galois conjugate `√2 ↦ -√2`.
    pub fn conj(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(QSqrt2::conj).collect(),
        }
    }

    /// `self · conj(self)`, a polynomial with rational coefficients.
    pub fn norm(&self) -> Self {
        if self.is_rational() {
            return self.mul(self);
        }
        self.mul(&self.conj())
    }

    /// `(γy + δ)^n · p((αy + β)/(γy + δ))` where `n = deg p`.
    ///
    /// Expanded over ℤ[√2] after clearing denominators, so the intermediate
    /// products never pay for fraction normalization.
    pub fn substitute_moebius(&self, alpha: &QSqrt2, beta: &QSqrt2, gamma: &QSqrt2, delta: &QSqrt2) -> Self {
        let n = match self.degree() {
            None => return Self::zero(),
            Some(n) => n,
        };
        let lp = denominator_lcm(self.coeffs.iter());
        let lm = denominator_lcm([alpha, beta, gamma, delta]);
        let p: Vec<ZSqrt2> = self.coeffs.iter().map(|c| ZSqrt2::scaled(c, &lp)).collect();
        let num = vec![ZSqrt2::scaled(beta, &lm), ZSqrt2::scaled(alpha, &lm)];
        let den = vec![ZSqrt2::scaled(delta, &lm), ZSqrt2::scaled(gamma, &lm)];
        let mut num_pow = vec![vec![ZSqrt2::one()]];
        let mut den_pow = vec![vec![ZSqrt2::one()]];
        for k in 1..=n {
            num_pow.push(zmul(&num_pow[k - 1], &num));
            den_pow.push(zmul(&den_pow[k - 1], &den));
        }
        let mut out = vec![ZSqrt2::zero(); n + 1];
        for (k, c) in p.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, t) in zmul(&num_pow[k], &den_pow[n - k]).iter().enumerate() {
                out[j] = out[j].add(&c.mul(t));
            }
        }
        // undo the scaling by lp·lmⁿ
        let mut scale = lp;
        for _ in 0..n {
            scale *= &lm;
        }
        Self::new(
            out.into_iter()
                .map(|z| {
                    QSqrt2::new(
                        Rational::new(z.a, scale.clone()),
                        Rational::new(z.b, scale.clone()),
                    )
                })
                .collect(),
        )
    }

    /// Canonical Sturm sequence `p, p', -rem(...)...`.
    pub fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }

    /// Rational `B` with every real root strictly inside `(-B, B)`.
    pub fn root_bound(&self) -> Rational {
        let lead = self.leading().expect("nonzero polynomial");
        let lead_abs_lo = abs_lower_bound(lead);
        let mut m = Rational::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let v = abs_upper_bound(c) / &lead_abs_lo;
            if v > m {
                m = v;
            }
        }
        m + Rational::one()
    }
}

/// Rational upper bound for `|x|`.
fn abs_upper_bound(x: &QSqrt2) -> Rational {
    x.r().abs() + x.s().abs() * crate::number::rat(3, 2)
}

/// Positive rational lower bound for `|x|`, `x ≠ 0`.
fn abs_lower_bound(x: &QSqrt2) -> Rational {
    if x.is_rational() {
        return x.r().abs();
    }
    let a = x.abs();
    let mut w = crate::number::rat(1, 2);
    loop {
        let (lo, _) = a.enclose(&w);
        if lo.is_positive() {
            return lo;
        }
        w /= int(16);
    }
}

/// Sign changes of the sequence evaluated at `x`, zeros skipped.
pub fn sign_variations(seq: &[Poly], x: &Rational) -> usize {
    let mut count = 0;
    let mut last = Ordering::Equal;
    for p in seq {
        let s = p.sign_at(x);
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots in `(lo, hi]` of the first member of a
/// Sturm sequence.
pub fn count_roots(seq: &[Poly], lo: &Rational, hi: &Rational) -> usize {
    sign_variations(seq, lo).saturating_sub(sign_variations(seq, hi))
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({})", c)?,
                1 => write!(f, "({})t", c)?,
                _ => write!(f, "({})t^{}", c, k)?,
            }
        }
        Ok(())
    }
}

impl Default for Poly {
    fn default() -> Self {
        Self::zero()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(QSqrt2::one())
    }
}

impl core::ops::Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        Poly::mul(&self, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&k| QSqrt2::from_int(k)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (t-1)(t-2) and (t-1)(t+3)
        let a = p(&[2, -3, 1]);
        let b = p(&[-3, 2, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        let (q, r) = a.div_rem(&p(&[-1, 1]));
        assert_eq!(q, p(&[-2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn squarefree() {
        let sq = p(&[1, -2, 1]); // (t-1)^2
        assert!(!sq.is_squarefree());
        assert_eq!(sq.squarefree_part(), p(&[-1, 1]));
        assert!(p(&[-2, 0, 1]).is_squarefree());
    }

    #[test]
    fn sturm_counts() {
        let f = p(&[0, -1, 0, 1]); // t^3 - t, roots -1, 0, 1
        let seq = f.sturm_sequence();
        assert_eq!(count_roots(&seq, &rat(-2, 1), &rat(2, 1)), 3);
        assert_eq!(count_roots(&seq, &rat(-1, 2), &rat(1, 2)), 1);
        assert_eq!(count_roots(&seq, &rat(1, 2), &rat(2, 1)), 1);
        // over Q(sqrt2): t^2 - sqrt2 has roots ±2^(1/4)
        let g = Poly::new(vec![-QSqrt2::sqrt2(), QSqrt2::zero(), QSqrt2::one()]);
        let seq = g.sturm_sequence();
        assert_eq!(count_roots(&seq, &rat(0, 1), &rat(2, 1)), 1);
        assert_eq!(count_roots(&seq, &rat(-2, 1), &rat(2, 1)), 2);
        let b = g.root_bound();
        assert_eq!(count_roots(&seq, &-b.clone(), &b), 2);
    }

    #[test]
    fn moebius_substitution() {
        // p(t) = t^2 - 2; substitute t = y - 1  ->  y^2 - 2y - 1
        let f = p(&[-2, 0, 1]);
        let one = QSqrt2::one();
        let g = f.substitute_moebius(&one, &-one.clone(), &QSqrt2::zero(), &one);
        assert_eq!(g, p(&[-1, -2, 1]));
    }

    #[test]
    fn norm_is_rational() {
        let g = Poly::new(vec![-QSqrt2::sqrt2(), QSqrt2::zero(), QSqrt2::one()]);
        let n = g.norm();
        assert!(n.is_rational());
        assert_eq!(n, p(&[-2, 0, 0, 0, 1]));
    }
}
