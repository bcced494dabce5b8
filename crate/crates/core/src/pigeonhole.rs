//! The pigeonhole step: for J ⊆ I with μ(J) ≥ μ(I)/2 and six near-identity
//! maps, some positive-measure L ⊆ I is moved into J by four of
//! {1, g₁, …, g₆}.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::One;

use crate::distortion::{distortion_delta, DistortionError};
use crate::measure::{Bound, IntervalSet, MeasureError};
use crate::number::{ceil_int, int, rat, QSqrt2, Rational};
use crate::projective::{ClosedInterval, Mat2};

/// ε of the lemma.
pub fn lemma_epsilon() -> Rational {
    rat(1, 48)
}

/// I′: I scaled by 1 + 1/49 about its midpoint, so μ(I′∖I) = μ(I)/49,
/// strictly below μ(I)/48.
pub fn enlarged(iv: &ClosedInterval) -> ClosedInterval {
    iv.scaled(&rat(50, 49))
}

/// Largest δ = 1/n with I·h ⊆ I′ whenever dist(h, 1) < δ.
///
/// For x ∈ I ⊆ [−R, R]: |x·h − x| = |(a−1)x + b − cx² − (d−1)x| / |cx + d|
/// < δ(R + 1)² / (1 − (R + 1)δ), which must not exceed the margin
/// μ(I)/98 on either side.
pub fn containment_delta(iv: &ClosedInterval) -> Rational {
    let radius = match iv.radius().as_rational() {
        Some(q) => q.clone(),
        None => iv.radius().enclose(&rat(1, 1024)).1,
    };
    let len = iv.length();
    let margin = match len.as_rational() {
        Some(q) => q.clone(),
        None => len.enclose(&rat(1, 1 << 20)).0,
    } / int(98);
    let r1 = &radius + Rational::one();
    // δ(R+1)² ≤ margin(1 − (R+1)δ)  ⇔  δ ≤ margin / ((R+1)² + margin(R+1))
    let bound = &margin / (&r1 * &r1 + &margin * &r1);
    Rational::one() / Rational::from_integer(ceil_int(&(Rational::one() / bound)))
}

/// The δ used to pick the translating words: small enough for both the
/// distortion and the containment condition.
pub fn lemma_delta(iv: &ClosedInterval, epsilon: &Rational) -> Result<Rational, DistortionError> {
    let d = distortion_delta(iv, epsilon)?.delta;
    Ok(d.min(containment_delta(iv)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PigeonholeError {
    JNotInI,
    JTooSmall { measure_j: QSqrt2, half_i: QSqrt2 },
    /// Derivative bounds of gᵢ⁻¹ on I not inside (1 − 1/48, 1 + 1/48).
    Distortion { index: usize, lower: QSqrt2, upper: QSqrt2 },
    PoleInInterval { index: usize, pole: QSqrt2 },
    /// I·gᵢ⁻¹ ⊄ I′.
    Containment { index: usize },
    Measure(MeasureError),
    /// Σ μ(Lᵢ) ≤ 3μ(I) even though the preconditions held.
    IntegralBound { total: QSqrt2 },
    /// Σ μ(Lᵢ) ≠ Σ coverage·μ(cell).
    CoverageIdentity { total: QSqrt2, by_cells: QSqrt2 },
    /// No cell has coverage ≥ 4; contradicts the integral bound.
    NoFourfoldCell,
    /// The returned L fails L·gᵢ ⊆ J.
    ContainmentRecheck { index: usize },
}

impl fmt::Display for PigeonholeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PigeonholeError::JNotInI => f.write_str("J is not contained in I"),
            PigeonholeError::JTooSmall { measure_j, half_i } => {
                write!(f, "mu(J) = {} is below mu(I)/2 = {}", measure_j, half_i)
            }
            PigeonholeError::Distortion { index, lower, upper } => write!(
                f,
                "g{}^-1 has derivative range [{}, {}] on I, not inside (1 - 1/48, 1 + 1/48)",
                index, lower, upper
            ),
            PigeonholeError::PoleInInterval { index, pole } => {
                write!(f, "g{}^-1 has its pole {} in I", index, pole)
            }
            PigeonholeError::Containment { index } => write!(f, "I.g{}^-1 is not inside I'", index),
            PigeonholeError::Measure(e) => write!(f, "{}", e),
            PigeonholeError::IntegralBound { total } => {
                write!(f, "sum of mu(L_i) = {} does not exceed 3 mu(I)", total)
            }
            PigeonholeError::CoverageIdentity { total, by_cells } => write!(
                f,
                "sum of mu(L_i) = {} but the cell decomposition gives {}",
                total, by_cells
            ),
            PigeonholeError::NoFourfoldCell => f.write_str("no cell is covered at least four times"),
            PigeonholeError::ContainmentRecheck { index } => write!(f, "L.g{} is not inside J", index),
        }
    }
}

impl core::error::Error for PigeonholeError {}

impl From<MeasureError> for PigeonholeError {
    fn from(e: MeasureError) -> Self {
        PigeonholeError::Measure(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub lo: Bound,
    pub hi: Bound,
    /// Indices i with the cell inside Lᵢ.
    pub cover: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PigeonholeWitness {
    pub l: IntervalSet,
    /// Four indices into {0 = identity, 1..=6}.
    pub indices: [usize; 4],
    pub measure_l: QSqrt2,
    /// Lᵢ = (J·gᵢ⁻¹) ∩ I for i = 0..=6.
    pub l_sets: Vec<IntervalSet>,
    pub cells: Vec<Cell>,
    /// Σ μ(Lᵢ).
    pub total: QSqrt2,
    pub measure_i: QSqrt2,
}

/// Runs the lemma on explicit data. All preconditions are checked exactly
/// first; `gs[k]` is g_{k+1}.
pub fn pigeonhole_witness(iv: &ClosedInterval, j: &IntervalSet, gs: &[Mat2; 6]) -> Result<PigeonholeWitness, PigeonholeError> {
    let i_set = IntervalSet::from_closed(iv);
    if !j.is_subset(&i_set) {
        return Err(PigeonholeError::JNotInI);
    }
    let measure_i = iv.length();
    let measure_j = j.measure()?;
    let half_i = measure_i.mul_rational(&rat(1, 2));
    if measure_j < half_i {
        return Err(PigeonholeError::JTooSmall { measure_j, half_i });
    }
    let eps = QSqrt2::from_rational(lemma_epsilon());
    let one = QSqrt2::one();
    let outer = enlarged(iv);
    let mut maps = Vec::with_capacity(7);
    maps.push(Mat2::identity());
    for (k, g) in gs.iter().enumerate() {
        let index = k + 1;
        let inv = g.inverse();
        let (lower, upper) = inv
            .derivative_bounds(iv)
            .map_err(|e| PigeonholeError::PoleInInterval { index, pole: e.pole })?;
        if lower <= &one - &eps || upper >= &one + &eps {
            return Err(PigeonholeError::Distortion { index, lower, upper });
        }
        let a = inv.act_qsqrt2(iv.lo()).expect("pole excluded");
        let b = inv.act_qsqrt2(iv.hi()).expect("pole excluded");
        if !(outer.contains(&a) && outer.contains(&b)) {
            return Err(PigeonholeError::Containment { index });
        }
        maps.push(g.clone());
    }

    let l_sets: Vec<IntervalSet> = maps
        .iter()
        .map(|g| Ok(j.pushforward(&g.inverse())?.intersect(&i_set)))
        .collect::<Result<_, MeasureError>>()?;
    let mut total = QSqrt2::zero();
    for l in &l_sets {
        total = total + l.measure()?;
    }
    if total <= measure_i.mul_rational(&int(3)) {
        return Err(PigeonholeError::IntegralBound { total });
    }

    let cells = arrangement(&l_sets);
    let mut by_cells = QSqrt2::zero();
    let mut groups: BTreeMap<Vec<usize>, (usize, QSqrt2)> = BTreeMap::new();
    for (n, cell) in cells.iter().enumerate() {
        let m = cell_measure(cell)?;
        by_cells = by_cells + m.mul_rational(&int(cell.cover.len() as i64));
        if cell.cover.len() >= 4 {
            let e = groups
                .entry(cell.cover.clone())
                .or_insert((n, QSqrt2::zero()));
            e.1 = &e.1 + &m;
        }
    }
    if by_cells != total {
        return Err(PigeonholeError::CoverageIdentity { total, by_cells });
    }
    // largest measure; ties to the group whose first cell is leftmost
    let best = groups
        .iter()
        .max_by(|x, y| x.1 .1.cmp(&y.1 .1).then(y.1 .0.cmp(&x.1 .0)))
        .map(|(cover, _)| cover.clone())
        .ok_or(PigeonholeError::NoFourfoldCell)?;
    let l = IntervalSet::from_intervals(
        cells
            .iter()
            .filter(|c| c.cover == best)
            .map(|c| (c.lo.clone(), c.hi.clone())),
    );
    let measure_l = l.measure()?;
    let indices = [best[0], best[1], best[2], best[3]];
    for &index in &indices {
        if !l.pushforward(&maps[index])?.is_subset(j) {
            return Err(PigeonholeError::ContainmentRecheck { index });
        }
    }
    Ok(PigeonholeWitness {
        l,
        indices,
        measure_l,
        l_sets,
        cells,
        total,
        measure_i,
    })
}

fn cell_measure(c: &Cell) -> Result<QSqrt2, MeasureError> {
    IntervalSet::interval(c.lo.clone(), c.hi.clone()).measure()
}

/// Elementary cells between consecutive endpoints of all sets, with the
/// sets covering each. Cells covered by nothing are dropped.
fn arrangement(sets: &[IntervalSet]) -> Vec<Cell> {
    let mut points: Vec<&Bound> = sets
        .iter()
        .flat_map(|s| s.intervals().iter().flat_map(|iv| [&iv.lo, &iv.hi]))
        .collect();
    points.sort();
    points.dedup();
    let mut cursor = alloc::vec![0usize; sets.len()];
    let mut cells = Vec::new();
    for w in points.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mut cover = Vec::new();
        for (k, s) in sets.iter().enumerate() {
            let ivs = s.intervals();
            while cursor[k] < ivs.len() && &ivs[cursor[k]].hi <= lo {
                cursor[k] += 1;
            }
            if cursor[k] < ivs.len() && &ivs[cursor[k]].lo <= lo {
                cover.push(k);
            }
        }
        if !cover.is_empty() {
            cells.push(Cell {
                lo: lo.clone(),
                hi: hi.clone(),
                cover,
            });
        }
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_j() -> IntervalSet {
        IntervalSet::from_closed(&ClosedInterval::unit())
    }

    #[test]
    fn deltas_for_unit_interval() {
        let unit = ClosedInterval::unit();
        assert_eq!(containment_delta(&unit), rat(1, 394));
        assert_eq!(lemma_delta(&unit, &lemma_epsilon()).unwrap(), rat(1, 394));
        let outer = enlarged(&unit);
        assert_eq!(outer.lo(), &QSqrt2::from_rational(rat(-1, 98)));
        assert_eq!(outer.length(), QSqrt2::from_rational(rat(50, 49)));
    }

    #[test]
    fn identity_instance() {
        let gs: [Mat2; 6] = core::array::from_fn(|_| Mat2::identity());
        let w = pigeonhole_witness(&ClosedInterval::unit(), &unit_j(), &gs).unwrap();
        assert_eq!(w.l, unit_j());
        assert_eq!(w.indices, [0, 1, 2, 3]);
        assert_eq!(w.total, QSqrt2::from_int(7));
        assert_eq!(w.cells.len(), 1);
        assert_eq!(w.cells[0].cover.len(), 7);
    }

    #[test]
    fn translation_instance() {
        let gs: [Mat2; 6] =
            core::array::from_fn(|k| Mat2::translation(QSqrt2::from_rational(rat(k as i64 + 1, 1000))));
        let w = pigeonhole_witness(&ClosedInterval::unit(), &unit_j(), &gs).unwrap();
        assert!(w.measure_l.is_positive());
        for &i in &w.indices {
            let g = if i == 0 { Mat2::identity() } else { gs[i - 1].clone() };
            assert!(w.l.pushforward(&g).unwrap().is_subset(&unit_j()));
        }
        // L_i = [0, 1 - i/1000), all seven cover [0, 994/1000)
        assert_eq!(w.l, IntervalSet::rational(&[(int(0), rat(994, 1000))]));
    }

    #[test]
    fn precondition_failures() {
        let unit = ClosedInterval::unit();
        let ok: [Mat2; 6] = core::array::from_fn(|_| Mat2::identity());
        let small = IntervalSet::rational(&[(int(0), rat(1, 3))]);
        assert!(matches!(
            pigeonhole_witness(&unit, &small, &ok),
            Err(PigeonholeError::JTooSmall { .. })
        ));
        let outside = IntervalSet::rational(&[(int(0), int(2))]);
        assert_eq!(pigeonhole_witness(&unit, &outside, &ok), Err(PigeonholeError::JNotInI));
        let mut far = ok.clone();
        far[2] = Mat2::translation(QSqrt2::from_rational(rat(1, 50)));
        assert_eq!(
            pigeonhole_witness(&unit, &unit_j(), &far),
            Err(PigeonholeError::Containment { index: 3 })
        );
        let mut bent = ok;
        bent[0] = Mat2::lower(QSqrt2::from_rational(rat(1, 4)));
        assert!(matches!(
            pigeonhole_witness(&unit, &unit_j(), &bent),
            Err(PigeonholeError::Distortion { index: 1, .. })
        ));
    }
}
