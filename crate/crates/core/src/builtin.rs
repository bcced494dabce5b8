//! Stock elements: Thompson's F in the piecewise PSL₂(ℤ) model, affine
//! maps, Γ and its conjugates, and the splice lift of a hyperbolic matrix.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::algebraic::RealAlgebraic;
use crate::number::{rat, QSqrt2};
use crate::piecewise::PiecewiseMap;
use crate::projective::{ClosedInterval, Mat2, MatError};

/// x₀: t ↦ t + 1, and x₁: identity on (−∞, 0], t/(1 − t) on [0, 1/2],
/// 3 − 1/t on [1/2, 1], t + 1 on [1, ∞).
pub fn thompson_f() -> [PiecewiseMap; 2] {
    let m = |a, b, c, d| Mat2::from_ints(a, b, c, d).expect("determinant one");
    let x0 = PiecewiseMap::global(m(1, 1, 0, 1));
    let x1 = PiecewiseMap::new(
        vec![
            RealAlgebraic::from_int(0),
            RealAlgebraic::from_rational(rat(1, 2)),
            RealAlgebraic::from_int(1),
        ],
        vec![m(1, 0, 0, 1), m(1, 0, -1, 1), m(3, -1, 1, 0), m(1, 1, 0, 1)],
    )
    .expect("x1 is a valid piecewise map");
    [x0, x1]
}

/// The defining relators of F, [x₀x₁⁻¹, x₀⁻¹x₁x₀] and [x₀x₁⁻¹, x₀⁻²x₁x₀²],
/// evaluated on the builtin generators. Both should be the identity.
pub fn thompson_relators() -> [PiecewiseMap; 2] {
    let [x0, x1] = thompson_f();
    let x0i = x0.inverse();
    let a = x0.then(&x1.inverse());
    let comm = |p: &PiecewiseMap, q: &PiecewiseMap| PiecewiseMap::then_all([p, q, &p.inverse(), &q.inverse()]);
    let b1 = PiecewiseMap::then_all([&x0i, &x1, &x0]);
    let b2 = PiecewiseMap::then_all([&x0i, &x0i, &x1, &x0, &x0]);
    [comm(&a, &b1), comm(&a, &b2)]
}

pub fn translation(r: QSqrt2) -> PiecewiseMap {
    PiecewiseMap::global(Mat2::translation(r))
}

/// t ↦ a·t + r; `a` must be a positive square in ℚ(√2) up to the
/// normalization of [`Mat2::new`].
pub fn affine(a: QSqrt2, r: QSqrt2) -> Result<PiecewiseMap, MatError> {
    Ok(PiecewiseMap::global(Mat2::new(a, r, QSqrt2::zero(), QSqrt2::one())?))
}

/// Γ (t ↦ 2t) and the Γ-conjugate Γ⁻¹·x₁·Γ of the second F generator.
pub fn gamma_conjugators() -> Vec<PiecewiseMap> {
    let g = PiecewiseMap::global(Mat2::gamma());
    let [_, x1] = thompson_f();
    let conj = g.inverse().then(&x1).then(&g);
    vec![g, conj]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    ThompsonF,
    Translation(QSqrt2),
    GammaConjugators,
}

impl Builtin {
    pub fn generators(&self) -> Vec<PiecewiseMap> {
        match self {
            Builtin::ThompsonF => thompson_f().to_vec(),
            Builtin::Translation(r) => vec![translation(r.clone())],
            Builtin::GammaConjugators => gamma_conjugators(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownBuiltin(pub alloc::string::String);

impl fmt::Display for UnknownBuiltin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown generator set {:?} (expected thompson-f, translation(r), gamma-conjugators)",
            self.0
        )
    }
}

impl core::error::Error for UnknownBuiltin {}

impl FromStr for Builtin {
    type Err = UnknownBuiltin;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t {
            "thompson-f" => return Ok(Builtin::ThompsonF),
            "gamma-conjugators" => return Ok(Builtin::GammaConjugators),
            _ => {}
        }
        t.strip_prefix("translation(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|r| r.parse::<QSqrt2>().ok())
            .map(Builtin::Translation)
            .ok_or_else(|| UnknownBuiltin(s.into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpliceError {
    /// c = 0: a fixed point is at ∞.
    FixesInfinity,
    NotHyperbolic,
    /// The interval is not strictly between the two fixed points.
    NotFlanking,
}

impl fmt::Display for SpliceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpliceError::FixesInfinity => f.write_str("matrix fixes infinity; fixed points are not both finite"),
            SpliceError::NotHyperbolic => f.write_str("matrix is not hyperbolic"),
            SpliceError::NotFlanking => f.write_str("fixed points do not flank the interval"),
        }
    }
}

impl core::error::Error for SpliceError {}

/// Does `m` have finite fixed points ξ₁ < lo and ξ₂ > hi.
///
/// With f(t) = c·t² + (d − a)·t − b, f has the sign of c outside
/// [ξ₁, ξ₂] and the opposite sign strictly inside, so no roots need
/// isolating.
pub fn flanks(m: &Mat2, iv: &ClosedInterval) -> Result<(), SpliceError> {
    if m.c().is_zero() {
        return Err(SpliceError::FixesInfinity);
    }
    if !m.is_hyperbolic() {
        return Err(SpliceError::NotHyperbolic);
    }
    let f = m.fixed_point_poly();
    let sc = m.c().signum();
    let inside = |x: &QSqrt2| f.sign_at_exact(x) == sc.reverse() && sc != Ordering::Equal;
    if inside(iv.lo()) && inside(iv.hi()) {
        Ok(())
    } else {
        Err(SpliceError::NotFlanking)
    }
}

/// Identity on (−∞, ξ₁], `m` on [ξ₁, ξ₂], identity on [ξ₂, ∞), where
/// ξ₁ < ξ₂ are the fixed points of `m`.
pub fn splice_lift(m: &Mat2, iv: &ClosedInterval) -> Result<PiecewiseMap, SpliceError> {
    flanks(m, iv)?;
    let mut roots = RealAlgebraic::roots_of(&m.fixed_point_poly());
    debug_assert_eq!(roots.len(), 2);
    let hi = roots.pop().expect("hyperbolic");
    let lo = roots.pop().expect("hyperbolic");
    Ok(PiecewiseMap::new(
        vec![lo, hi],
        vec![Mat2::identity(), m.clone(), Mat2::identity()],
    )
    .expect("fixed points make the splice continuous"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::int;
    use crate::projective::Ring;

    #[test]
    fn thompson_relations() {
        for r in thompson_relators() {
            assert!(r.is_identity());
        }
        let [x0, x1] = thompson_f();
        let comm = PiecewiseMap::then_all([&x0, &x1, &x0.inverse(), &x1.inverse()]);
        assert!(!comm.is_identity());
    }

    #[test]
    fn builtin_names() {
        assert_eq!("thompson-f".parse::<Builtin>().unwrap(), Builtin::ThompsonF);
        let t = "translation(1)".parse::<Builtin>().unwrap();
        assert_eq!(t.generators(), vec![PiecewiseMap::global(Mat2::from_ints(1, 1, 0, 1).unwrap())]);
        assert!("free-group".parse::<Builtin>().is_err());
        for g in gamma_conjugators() {
            assert!(g.validate(Ring::ZSqrt2Halves).is_empty());
        }
    }

    #[test]
    fn affine_maps() {
        let g = affine(QSqrt2::from_int(2), QSqrt2::zero()).unwrap();
        assert_eq!(g, PiecewiseMap::global(Mat2::gamma()));
        assert!(affine(QSqrt2::from_int(3), QSqrt2::zero()).is_err());
    }

    #[test]
    fn splice_example() {
        // fixed points of (3 1; 2 1) are (1 ± √3)/2
        let m = Mat2::from_ints(3, 1, 2, 1).unwrap();
        let iv = ClosedInterval::rational(int(0), rat(1, 2)).unwrap();
        let lift = splice_lift(&m, &iv).unwrap();
        assert_eq!(lift.breakpoints().len(), 2);
        assert!((lift.breakpoints()[0].to_f64() - (1.0 - 3f64.sqrt()) / 2.0).abs() < 1e-12);
        for k in 0..10 {
            let x = RealAlgebraic::from_rational(rat(k, 20));
            assert_eq!(lift.eval(&x), m.act_finite(&x).unwrap());
        }
        assert!(lift.agrees_on(&iv, &m));
        assert!(lift.then(&lift.inverse()).is_identity());
        assert!(lift.validate(Ring::Integers).contains(&crate::piecewise::Violation::IrrationalBreakpoint { index: 0 }));
        assert!(lift.validate(Ring::ZSqrt2Halves).is_empty());
    }

    #[test]
    fn splice_preconditions() {
        let iv = ClosedInterval::rational(int(1), int(2)).unwrap();
        assert_eq!(splice_lift(&Mat2::gamma(), &iv).unwrap_err(), SpliceError::FixesInfinity);
        let m = Mat2::from_ints(3, 1, 2, 1).unwrap();
        assert_eq!(splice_lift(&m, &iv).unwrap_err(), SpliceError::NotFlanking);
        let s = Mat2::from_ints(0, -1, 1, 0).unwrap();
        assert_eq!(splice_lift(&s, &iv).unwrap_err(), SpliceError::NotHyperbolic);
    }
}
