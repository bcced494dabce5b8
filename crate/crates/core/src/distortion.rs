//! Measure distortion of near-identity Möbius maps on a compact interval.
//!
//! If every entry of g (best sign) is within δ of the identity and
//! I ⊆ [−R, R], then |cx + d − 1| < (R + 1)δ =: k on I, so
//! g′ = 1/(cx + d)² lies strictly between (1 + k)⁻² and (1 − k)⁻². Since
//! μ(J·g) = ∫_J g′, the ratio μ(J·g)/μ(J) is inside (1 − ε, 1 + ε) as soon
//! as (1 − k)⁻² ≤ 1 + ε and (1 + k)⁻² ≥ 1 − ε.

use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::measure::{IntervalSet, MeasureError};
use crate::number::{ceil_int, int, QSqrt2, Rational};
use crate::projective::{ClosedInterval, Mat2};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistortionCert {
    pub interval: ClosedInterval,
    pub epsilon: Rational,
    pub delta: Rational,
    /// Rational R with I ⊆ [−R, R].
    pub radius: Rational,
    /// k = (R + 1)δ.
    pub k: Rational,
    /// (1 + k)⁻², a strict lower bound for g′ on I.
    pub derivative_lower: Rational,
    /// (1 − k)⁻², a strict upper bound for g′ on I.
    pub derivative_upper: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistortionError {
    EpsilonOutOfRange(Rational),
    DeltaNotPositive(Rational),
    /// The stated δ does not satisfy the derivation.
    NotCertified { delta: Rational },
    EmptySet,
    NotInInterval,
    PoleInInterval { pole: QSqrt2 },
    Measure(MeasureError),
}

impl fmt::Display for DistortionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistortionError::EpsilonOutOfRange(e) => write!(f, "epsilon {} is not in (0, 1)", e),
            DistortionError::DeltaNotPositive(d) => write!(f, "delta {} is not positive", d),
            DistortionError::NotCertified { delta } => write!(f, "delta {} is not certified by the derivation", delta),
            DistortionError::EmptySet => f.write_str("J is empty; the ratio is undefined"),
            DistortionError::NotInInterval => f.write_str("J is not contained in I"),
            DistortionError::PoleInInterval { pole } => write!(f, "pole {} lies in I", pole),
            DistortionError::Measure(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for DistortionError {}

impl From<MeasureError> for DistortionError {
    fn from(e: MeasureError) -> Self {
        DistortionError::Measure(e)
    }
}

/// Smallest rational upper bound of |x| over I that is cheap to state.
fn rational_radius(iv: &ClosedInterval) -> Rational {
    let r = iv.radius();
    match r.as_rational() {
        Some(q) => q.clone(),
        None => r.enclose(&Rational::new(1.into(), 1024.into())).1,
    }
}

fn bounds(radius: &Rational, delta: &Rational) -> (Rational, Rational, Rational) {
    let k = (radius + Rational::one()) * delta;
    let one = Rational::one();
    let lower = one.clone() / ((&one + &k) * (&one + &k));
    let upper = if k < one {
        one.clone() / ((&one - &k) * (&one - &k))
    } else {
        Rational::zero()
    };
    (k, lower, upper)
}

fn holds(radius: &Rational, epsilon: &Rational, delta: &Rational) -> bool {
    let (k, lower, upper) = bounds(radius, delta);
    let one = Rational::one();
    k < one && upper <= &one + epsilon && lower >= &one - epsilon
}

fn check_epsilon(epsilon: &Rational) -> Result<(), DistortionError> {
    if !epsilon.is_positive() || epsilon >= &Rational::one() {
        return Err(DistortionError::EpsilonOutOfRange(epsilon.clone()));
    }
    Ok(())
}

/// Certificate for a given δ, or an error if the derivation does not cover it.
pub fn certify_delta(iv: &ClosedInterval, epsilon: &Rational, delta: &Rational) -> Result<DistortionCert, DistortionError> {
    check_epsilon(epsilon)?;
    if !delta.is_positive() {
        return Err(DistortionError::DeltaNotPositive(delta.clone()));
    }
    let radius = rational_radius(iv);
    if !holds(&radius, epsilon, delta) {
        return Err(DistortionError::NotCertified { delta: delta.clone() });
    }
    let (k, derivative_lower, derivative_upper) = bounds(&radius, delta);
    Ok(DistortionCert {
        interval: iv.clone(),
        epsilon: epsilon.clone(),
        delta: delta.clone(),
        radius,
        k,
        derivative_lower,
        derivative_upper,
    })
}

/// The largest δ of the form 1/n that the derivation certifies.
pub fn distortion_delta(iv: &ClosedInterval, epsilon: &Rational) -> Result<DistortionCert, DistortionError> {
    check_epsilon(epsilon)?;
    let radius = rational_radius(iv);
    let ok = |n: &Rational| holds(&radius, epsilon, &(Rational::one() / n));
    // the conditions are monotone in δ: find the least n by doubling then bisection
    let mut hi = int(1);
    while !ok(&hi) {
        hi *= int(2);
    }
    let mut lo = &hi / int(2);
    if lo < int(1) {
        lo = Rational::zero();
    }
    // invariant: ok(hi), !ok(lo) (or lo = 0)
    while &hi - &lo > Rational::one() {
        let mid = Rational::from_integer(ceil_int(&((&lo + &hi) / int(2))));
        if mid >= hi {
            break;
        }
        if ok(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    certify_delta(iv, epsilon, &(Rational::one() / hi))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistortionCheck {
    /// μ(J·g)/μ(J), exact.
    pub ratio: QSqrt2,
    /// 1 − ε < ratio < 1 + ε.
    pub inside: bool,
}

pub fn check_distortion(
    g: &Mat2,
    iv: &ClosedInterval,
    j: &IntervalSet,
    epsilon: &Rational,
) -> Result<DistortionCheck, DistortionError> {
    if j.is_empty() {
        return Err(DistortionError::EmptySet);
    }
    if !j.is_subset(&IntervalSet::from_closed(iv)) {
        return Err(DistortionError::NotInInterval);
    }
    if let Some(pole) = g.pole() {
        if iv.contains(&pole) {
            return Err(DistortionError::PoleInInterval { pole });
        }
    }
    let before = j.measure()?;
    let after = j.pushforward(g)?.measure()?;
    let ratio = &after / &before;
    let one = QSqrt2::one();
    let eps = QSqrt2::from_rational(epsilon.clone());
    let inside = ratio > &one - &eps && ratio < &one + &eps;
    Ok(DistortionCheck { ratio, inside })
}
