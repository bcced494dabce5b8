//! Piecewise projective homeomorphisms of ℝ fixing ∞.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

use crate::algebraic::RealAlgebraic;
use crate::number::QSqrt2;
use crate::projective::{ClosedInterval, Mat2, Ring};

/// Breakpoints ξ₁ < … < ξₙ and n + 1 pieces; piece k acts on
/// [ξₖ, ξₖ₊₁] with ξ₀ = −∞ and ξₙ₊₁ = +∞.
///
/// Values are kept canonical (adjacent pieces differ), so `==` is equality
/// of maps. The hash only looks at the pieces, which is cheap and
/// consistent with `==`.
#[derive(Clone)]
pub struct PiecewiseMap {
    breakpoints: Vec<RealAlgebraic>,
    pieces: Vec<Mat2>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PwError {
    LengthMismatch { breakpoints: usize, pieces: usize },
    Unsorted { index: usize },
    /// Adjacent pieces send breakpoint `index` to different points.
    Discontinuous { index: usize, breakpoint: RealAlgebraic },
    /// The pole of piece `piece` lies in its closed cell.
    PoleInCell { piece: usize, pole: QSqrt2 },
    /// An outer piece does not fix ∞.
    MovesInfinity { piece: usize },
}

impl fmt::Display for PwError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PwError::LengthMismatch { breakpoints, pieces } => write!(
                f,
                "{} breakpoints need {} pieces, got {}",
                breakpoints,
                breakpoints + 1,
                pieces
            ),
            PwError::Unsorted { index } => write!(f, "breakpoint {} is not above its predecessor", index),
            PwError::Discontinuous { index, breakpoint } => {
                write!(f, "pieces disagree at breakpoint {} ({})", index, breakpoint)
            }
            PwError::PoleInCell { piece, pole } => {
                write!(f, "piece {} has its pole {} inside its cell (not increasing)", piece, pole)
            }
            PwError::MovesInfinity { piece } => write!(f, "outer piece {} does not fix infinity", piece),
        }
    }
}

impl core::error::Error for PwError {}

/// One failed clause of [`PiecewiseMap::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Structure(PwError),
    /// Adjacent pieces are equal; the map is not in canonical form.
    NotCanonical { index: usize },
    EntryOutsideRing { piece: usize },
    /// For the integer ring: breakpoint not rational.
    IrrationalBreakpoint { index: usize },
    /// Breakpoint is not a hyperbolic fixed point over the ring.
    NotHyperbolicBreakpoint { index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Structure(e) => write!(f, "{}", e),
            Violation::NotCanonical { index } => write!(f, "pieces around breakpoint {} are equal", index),
            Violation::EntryOutsideRing { piece } => write!(f, "piece {} has an entry outside the ring", piece),
            Violation::IrrationalBreakpoint { index } => write!(f, "breakpoint {} is not rational", index),
            Violation::NotHyperbolicBreakpoint { index } => {
                write!(f, "breakpoint {} is not a hyperbolic fixed point", index)
            }
        }
    }
}

impl PiecewiseMap {
    pub fn identity() -> Self {
        Self::global(Mat2::identity())
    }

    /// A single Möbius map on all of ℝ; it must fix ∞.
    pub fn global(m: Mat2) -> Self {
        assert!(m.fixes_infinity(), "a global piece must fix infinity");
        PiecewiseMap {
            breakpoints: Vec::new(),
            pieces: alloc::vec![m],
        }
    }

    /// Checks every invariant except canonicity, then merges equal
    /// neighbours.
    pub fn new(breakpoints: Vec<RealAlgebraic>, pieces: Vec<Mat2>) -> Result<Self, PwError> {
        check_structure(&breakpoints, &pieces)?;
        Ok(Self::merged(breakpoints, pieces))
    }

    fn merged(breakpoints: Vec<RealAlgebraic>, pieces: Vec<Mat2>) -> Self {
        let mut bs = Vec::with_capacity(breakpoints.len());
        let mut ps = Vec::with_capacity(pieces.len());
        let mut it = pieces.into_iter();
        ps.push(it.next().expect("at least one piece"));
        for (b, p) in breakpoints.into_iter().zip(it) {
            if ps.last() != Some(&p) {
                bs.push(b);
                ps.push(p);
            }
        }
        PiecewiseMap {
            breakpoints: bs,
            pieces: ps,
        }
    }

    pub fn normalize(&self) -> Self {
        Self::merged(self.breakpoints.clone(), self.pieces.clone())
    }

    pub fn breakpoints(&self) -> &[RealAlgebraic] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Mat2] {
        &self.pieces
    }

    pub fn is_identity(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0].is_identity()
    }

    /// Index of the piece acting at `x`; at a breakpoint either neighbour
    /// gives the same value and the left one is returned.
    pub fn piece_index(&self, x: &RealAlgebraic) -> usize {
        self.breakpoints.partition_point(|b| b < x)
    }

    pub fn piece_index_qsqrt2(&self, x: &QSqrt2) -> usize {
        self.breakpoints
            .partition_point(|b| b.cmp_qsqrt2(x) == Ordering::Less)
    }

    pub fn eval(&self, x: &RealAlgebraic) -> RealAlgebraic {
        self.pieces[self.piece_index(x)]
            .act_finite(x)
            .expect("poles lie outside their cells")
    }

    pub fn eval_qsqrt2(&self, x: &QSqrt2) -> QSqrt2 {
        self.pieces[self.piece_index_qsqrt2(x)]
            .act_qsqrt2(x)
            .expect("poles lie outside their cells")
    }

    /// Images of the breakpoints, increasing.
    fn breakpoint_images(&self) -> Vec<RealAlgebraic> {
        self.breakpoints
            .iter()
            .zip(&self.pieces)
            .map(|(b, p)| p.act_finite(b).expect("poles lie outside their cells"))
            .collect()
    }

    /// The map x ↦ (x·self)·g.
    pub fn then(&self, g: &PiecewiseMap) -> PiecewiseMap {
        if g.breakpoints.is_empty() {
            let h = &g.pieces[0];
            return Self::merged(
                self.breakpoints.clone(),
                self.pieces.iter().map(|p| p.then(h)).collect(),
            );
        }
        if self.breakpoints.is_empty() {
            let f = &self.pieces[0];
            let finv = f.inverse();
            return Self::merged(
                g.breakpoints
                    .iter()
                    .map(|b| finv.act_finite(b).expect("affine pieces have no pole"))
                    .collect(),
                g.pieces.iter().map(|p| f.then(p)).collect(),
            );
        }
        let images = self.breakpoint_images();
        let mut breakpoints = Vec::with_capacity(images.len() + g.breakpoints.len());
        let mut pieces = Vec::with_capacity(images.len() + g.breakpoints.len() + 1);
        let (mut i, mut j) = (0, 0);
        pieces.push(self.pieces[0].then(&g.pieces[0]));
        while i < images.len() || j < g.breakpoints.len() {
            let step = match (images.get(i), g.breakpoints.get(j)) {
                (Some(y), Some(eta)) => y.cmp(eta),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => unreachable!(),
            };
            match step {
                Ordering::Less => {
                    breakpoints.push(self.breakpoints[i].clone());
                    i += 1;
                }
                Ordering::Equal => {
                    breakpoints.push(self.breakpoints[i].clone());
                    i += 1;
                    j += 1;
                }
                Ordering::Greater => {
                    // pull η back through the piece of self covering it
                    let pre = self.pieces[i]
                        .inverse()
                        .act_finite(&g.breakpoints[j])
                        .expect("poles lie outside their cells");
                    breakpoints.push(pre);
                    j += 1;
                }
            }
            pieces.push(self.pieces[i].then(&g.pieces[j]));
        }
        Self::merged(breakpoints, pieces)
    }

    pub fn inverse(&self) -> PiecewiseMap {
        PiecewiseMap {
            breakpoints: self.breakpoint_images(),
            pieces: self.pieces.iter().map(Mat2::inverse).collect(),
        }
    }

    /// Product of a sequence, applied left to right.
    pub fn then_all<'a>(maps: impl IntoIterator<Item = &'a PiecewiseMap>) -> PiecewiseMap {
        maps.into_iter()
            .fold(PiecewiseMap::identity(), |acc, m| acc.then(m))
    }

    /// All invariants, canonicity, and ring membership: entries in the ring;
    /// for the integers every breakpoint rational; otherwise every
    /// breakpoint a hyperbolic fixed point of an element over the ring.
    ///
    /// A breakpoint in ℚ(√2) qualifies because ℤ[√2] is a PID: such a point
    /// is the image of 0 under PSL₂(ℤ[√2]), and 0 is a hyperbolic fixed
    /// point of diag(√2, 1/√2). Otherwise the transition matrix at the
    /// breakpoint, which lies over the ring and fixes it, must be hyperbolic.
    pub fn validate(&self, ring: Ring) -> Vec<Violation> {
        let mut out = Vec::new();
        if let Err(e) = check_structure(&self.breakpoints, &self.pieces) {
            out.push(Violation::Structure(e));
            return out;
        }
        for (k, w) in self.pieces.windows(2).enumerate() {
            if w[0] == w[1] {
                out.push(Violation::NotCanonical { index: k });
            }
        }
        for (k, p) in self.pieces.iter().enumerate() {
            if !p.in_ring(ring) {
                out.push(Violation::EntryOutsideRing { piece: k });
            }
        }
        for (k, b) in self.breakpoints.iter().enumerate() {
            match ring {
                Ring::Integers => {
                    if b.as_rational().is_none() {
                        out.push(Violation::IrrationalBreakpoint { index: k });
                    }
                }
                Ring::ZSqrt2Halves => {
                    let transition = self.pieces[k].then(&self.pieces[k + 1].inverse());
                    if !b.is_exact() && !transition.is_hyperbolic() {
                        out.push(Violation::NotHyperbolicBreakpoint { index: k });
                    }
                }
            }
        }
        out
    }

    /// Pieces whose cell meets the interior of `iv`.
    pub fn pieces_on(&self, iv: &ClosedInterval) -> &[Mat2] {
        let first = self.piece_index_qsqrt2(iv.lo());
        // cells strictly left of hi
        let last = self
            .breakpoints
            .partition_point(|b| b.cmp_qsqrt2(iv.hi()) == Ordering::Less);
        let first = if first < self.breakpoints.len() && self.breakpoints[first].cmp_qsqrt2(iv.lo()) == Ordering::Equal {
            first + 1
        } else {
            first
        };
        &self.pieces[first..=last]
    }

    /// Every piece meeting the interior of `iv` equals `m`.
    pub fn agrees_on(&self, iv: &ClosedInterval, m: &Mat2) -> bool {
        self.pieces_on(iv).iter().all(|p| p == m)
    }
}

fn check_structure(breakpoints: &[RealAlgebraic], pieces: &[Mat2]) -> Result<(), PwError> {
    if pieces.len() != breakpoints.len() + 1 {
        return Err(PwError::LengthMismatch {
            breakpoints: breakpoints.len(),
            pieces: pieces.len(),
        });
    }
    for (k, w) in breakpoints.windows(2).enumerate() {
        if w[0] >= w[1] {
            return Err(PwError::Unsorted { index: k + 1 });
        }
    }
    let last = pieces.len() - 1;
    for k in [0, last] {
        if !pieces[k].fixes_infinity() {
            return Err(PwError::MovesInfinity { piece: k });
        }
    }
    for k in 1..last {
        if let Some(pole) = pieces[k].pole() {
            let left = &breakpoints[k - 1];
            let right = &breakpoints[k];
            if left.cmp_qsqrt2(&pole) != Ordering::Greater && right.cmp_qsqrt2(&pole) != Ordering::Less {
                return Err(PwError::PoleInCell { piece: k, pole });
            }
        }
    }
    for (k, b) in breakpoints.iter().enumerate() {
        let (l, r) = (&pieces[k], &pieces[k + 1]);
        if l == r {
            continue;
        }
        // b·l = b·r  iff  b is fixed by l then r⁻¹
        let t = l.then(&r.inverse());
        if !b.is_root_of(&t.fixed_point_poly()) {
            return Err(PwError::Discontinuous {
                index: k,
                breakpoint: b.clone(),
            });
        }
    }
    Ok(())
}

impl PartialEq for PiecewiseMap {
    fn eq(&self, other: &Self) -> bool {
        self.pieces == other.pieces && self.breakpoints == other.breakpoints
    }
}

impl Eq for PiecewiseMap {}

impl Hash for PiecewiseMap {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.pieces.hash(state);
    }
}

impl fmt::Debug for PiecewiseMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("PiecewiseMap{")?;
        for (k, p) in self.pieces.iter().enumerate() {
            if k > 0 {
                write!(f, " | {} | ", self.breakpoints[k - 1])?;
            }
            write!(f, "{}", p)?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{thompson_f, translation};
    use crate::number::{int, rat, Rational};

    fn r(n: i64, d: i64) -> RealAlgebraic {
        RealAlgebraic::from_rational(rat(n, d))
    }

    #[test]
    fn merges_equal_pieces() {
        let id = Mat2::identity();
        let m = PiecewiseMap::new(alloc::vec![r(0, 1)], alloc::vec![id.clone(), id]).unwrap();
        assert!(m.is_identity());
        assert!(m.breakpoints().is_empty());
        let [x0, x1] = thompson_f();
        assert_eq!(x1.normalize(), x1);
        // split x1's last cell at 5 and merge it back
        let mut bs = x1.breakpoints().to_vec();
        let mut ps = x1.pieces().to_vec();
        bs.push(r(5, 1));
        ps.push(ps.last().unwrap().clone());
        let split = PiecewiseMap::new(bs, ps).unwrap();
        assert_eq!(split, x1);
        assert_eq!(x0.pieces().len(), 1);
    }

    #[test]
    fn detects_violations() {
        let id = Mat2::identity();
        let t = Mat2::translation(QSqrt2::one());
        assert!(matches!(
            PiecewiseMap::new(alloc::vec![r(0, 1)], alloc::vec![id.clone(), t]),
            Err(PwError::Discontinuous { index: 0, .. })
        ));
        assert!(matches!(
            PiecewiseMap::new(alloc::vec![r(1, 1), r(0, 1)], alloc::vec![id.clone(), id.clone(), id.clone()]),
            Err(PwError::Unsorted { .. })
        ));
        let s = Mat2::from_ints(0, -1, 1, 0).unwrap();
        assert!(matches!(
            PiecewiseMap::new(alloc::vec![r(0, 1)], alloc::vec![id, s]),
            Err(PwError::MovesInfinity { piece: 1 })
        ));
    }

    #[test]
    fn composition_matches_pointwise() {
        let [x0, x1] = thompson_f();
        let prod = x0.then(&x1);
        for k in -20..20 {
            let x = r(k, 7);
            assert_eq!(prod.eval(&x), x1.eval(&x0.eval(&x)));
        }
        assert!(prod.then(&prod.inverse()).is_identity());
        assert!(x1.inverse().then(&x1).is_identity());
        let left = x0.then(&x1).then(&x0.inverse());
        let right = x0.then(&x1.then(&x0.inverse()));
        assert_eq!(left, right);
    }

    #[test]
    fn inverse_of_translation() {
        let t = translation(QSqrt2::one());
        assert_eq!(t.inverse(), translation(-QSqrt2::one()));
        assert!(PiecewiseMap::identity().inverse().is_identity());
    }

    #[test]
    fn ring_validation() {
        let [x0, x1] = thompson_f();
        assert!(x0.validate(Ring::Integers).is_empty());
        assert!(x1.validate(Ring::Integers).is_empty());
        let g = PiecewiseMap::global(Mat2::gamma());
        assert_eq!(g.validate(Ring::Integers), alloc::vec![Violation::EntryOutsideRing { piece: 0 }]);
        assert!(g.validate(Ring::ZSqrt2Halves).is_empty());
    }

    #[test]
    fn pieces_on_interval() {
        let [_, x1] = thompson_f();
        let unit = ClosedInterval::unit();
        assert_eq!(x1.pieces_on(&unit).len(), 2);
        let half = ClosedInterval::rational(Rational::from(int(0)), rat(1, 2)).unwrap();
        assert_eq!(x1.pieces_on(&half), &x1.pieces()[1..2]);
    }
}
