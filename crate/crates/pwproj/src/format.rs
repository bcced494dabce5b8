//! JSON representations of every exported type.
//!
//! Each type maps to a plain serde `Repr`; reading goes through the repr and
//! then validates it, so a structurally valid file with bad mathematics
//! (determinant ≠ 1, unsorted breakpoints, a δ that does not certify) is
//! rejected with the path of the offending field.

use std::fmt::Display;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use pwproj_core::algebraic::RealAlgebraic;
use pwproj_core::distortion::{certify_delta, DistortionCert};
use pwproj_core::marriage::{
    EgsReport, Edge, FiniteSubset, HallViolation, MarriageReport, MatchingCertificate, TranslatingSet,
};
use pwproj_core::measure::{Bound, Interval, IntervalSet};
use pwproj_core::number::{format_rational, parse_rational, QSqrt2, Rational};
use pwproj_core::piecewise::{PiecewiseMap, PwError};
use pwproj_core::pigeonhole::{Cell, PigeonholeWitness};
use pwproj_core::projective::{ClosedInterval, Mat2};
use pwproj_core::word::{GeneratorPair, NoRelationCert, SearchStats, TranslatingWords, Word};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct SchemaError {
    /// Dotted path from the document root, e.g. `pieces[2].a.r`.
    pub path: String,
    pub message: String,
}

impl SchemaError {
    pub fn new(message: impl Into<String>) -> Self {
        SchemaError {
            path: String::new(),
            message: message.into(),
        }
    }

    /// Prefixes the path with the enclosing field or index.
    pub fn within(mut self, seg: &str) -> Self {
        self.path = if self.path.is_empty() {
            seg.to_string()
        } else if self.path.starts_with('[') {
            format!("{seg}{}", self.path)
        } else {
            format!("{seg}.{}", self.path)
        };
        self
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation at {0}")]
    Schema(#[from] SchemaError),
}

pub trait Exported: Sized {
    type Repr: Serialize + DeserializeOwned;

    fn to_repr(&self) -> Self::Repr;
    fn from_repr(repr: Self::Repr) -> Result<Self, SchemaError>;
}

pub fn to_value<T: Exported>(x: &T) -> serde_json::Value {
    serde_json::to_value(x.to_repr()).expect("reprs serialize")
}

/// Pretty JSON with a trailing newline; field order is fixed by the repr.
pub fn to_json<T: Exported>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(&x.to_repr()).expect("reprs serialize");
    s.push('\n');
    s
}

pub fn from_json<T: Exported>(s: &str) -> Result<T, FormatError> {
    let repr: T::Repr = serde_json::from_str(s)?;
    Ok(T::from_repr(repr)?)
}

pub fn from_value<T: Exported>(v: serde_json::Value) -> Result<T, FormatError> {
    let repr: T::Repr = serde_json::from_value(v)?;
    Ok(T::from_repr(repr)?)
}

fn at<T>(r: Result<T, SchemaError>, seg: impl Display) -> Result<T, SchemaError> {
    r.map_err(|e| e.within(&seg.to_string()))
}

fn list<R, T>(items: Vec<R>, f: impl Fn(R) -> Result<T, SchemaError>) -> Result<Vec<T>, SchemaError> {
    items
        .into_iter()
        .enumerate()
        .map(|(i, r)| at(f(r), format_args!("[{i}]")))
        .collect()
}

fn reprs<T: Exported>(xs: &[T]) -> Vec<T::Repr> {
    xs.iter().map(Exported::to_repr).collect()
}

fn parse_list<T: Exported>(xs: Vec<T::Repr>) -> Result<Vec<T>, SchemaError> {
    list(xs, T::from_repr)
}

impl Exported for Rational {
    type Repr = String;

    fn to_repr(&self) -> String {
        format_rational(self)
    }

    fn from_repr(s: String) -> Result<Self, SchemaError> {
        parse_rational(&s).map_err(|e| SchemaError::new(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QSqrt2Repr {
    pub r: String,
    pub s: String,
}

impl Exported for QSqrt2 {
    type Repr = QSqrt2Repr;

    fn to_repr(&self) -> QSqrt2Repr {
        QSqrt2Repr {
            r: self.r().to_repr(),
            s: self.s().to_repr(),
        }
    }

    fn from_repr(x: QSqrt2Repr) -> Result<Self, SchemaError> {
        Ok(QSqrt2::new(at(Rational::from_repr(x.r), "r")?, at(Rational::from_repr(x.s), "s")?))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealAlgebraicRepr {
    /// Rational coefficients, constant term first.
    pub poly: Vec<String>,
    pub lo: String,
    pub hi: String,
}

impl Exported for RealAlgebraic {
    type Repr = RealAlgebraicRepr;

    fn to_repr(&self) -> RealAlgebraicRepr {
        let (poly, lo, hi) = self.rational_repr();
        RealAlgebraicRepr {
            poly: reprs(&poly),
            lo: lo.to_repr(),
            hi: hi.to_repr(),
        }
    }

    fn from_repr(x: RealAlgebraicRepr) -> Result<Self, SchemaError> {
        let poly = at(parse_list::<Rational>(x.poly), "poly")?;
        let lo = at(Rational::from_repr(x.lo), "lo")?;
        let hi = at(Rational::from_repr(x.hi), "hi")?;
        RealAlgebraic::from_rational_poly(&poly, lo, hi).map_err(|e| SchemaError::new(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mat2Repr {
    pub a: QSqrt2Repr,
    pub b: QSqrt2Repr,
    pub c: QSqrt2Repr,
    pub d: QSqrt2Repr,
}

impl Exported for Mat2 {
    type Repr = Mat2Repr;

    fn to_repr(&self) -> Mat2Repr {
        Mat2Repr {
            a: self.a().to_repr(),
            b: self.b().to_repr(),
            c: self.c().to_repr(),
            d: self.d().to_repr(),
        }
    }

    fn from_repr(x: Mat2Repr) -> Result<Self, SchemaError> {
        Mat2::new(
            at(QSqrt2::from_repr(x.a), "a")?,
            at(QSqrt2::from_repr(x.b), "b")?,
            at(QSqrt2::from_repr(x.c), "c")?,
            at(QSqrt2::from_repr(x.d), "d")?,
        )
        .map_err(|e| SchemaError::new(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosedIntervalRepr {
    pub lo: QSqrt2Repr,
    pub hi: QSqrt2Repr,
}

impl Exported for ClosedInterval {
    type Repr = ClosedIntervalRepr;

    fn to_repr(&self) -> ClosedIntervalRepr {
        ClosedIntervalRepr {
            lo: self.lo().to_repr(),
            hi: self.hi().to_repr(),
        }
    }

    fn from_repr(x: ClosedIntervalRepr) -> Result<Self, SchemaError> {
        let lo = at(QSqrt2::from_repr(x.lo), "lo")?;
        let hi = at(QSqrt2::from_repr(x.hi), "hi")?;
        ClosedInterval::new(lo, hi).ok_or_else(|| SchemaError::new("need lo < hi"))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiecewiseMapRepr {
    pub breakpoints: Vec<RealAlgebraicRepr>,
    pub pieces: Vec<Mat2Repr>,
}

impl Exported for PiecewiseMap {
    type Repr = PiecewiseMapRepr;

    fn to_repr(&self) -> PiecewiseMapRepr {
        PiecewiseMapRepr {
            breakpoints: reprs(self.breakpoints()),
            pieces: reprs(self.pieces()),
        }
    }

    fn from_repr(x: PiecewiseMapRepr) -> Result<Self, SchemaError> {
        let bps = at(parse_list::<RealAlgebraic>(x.breakpoints), "breakpoints")?;
        let pieces = at(parse_list::<Mat2>(x.pieces), "pieces")?;
        let n = pieces.len();
        let f = PiecewiseMap::new(bps, pieces).map_err(|e| {
            let path = match &e {
                PwError::LengthMismatch { .. } => "pieces".to_string(),
                PwError::Unsorted { index } | PwError::Discontinuous { index, .. } => format!("breakpoints[{index}]"),
                PwError::PoleInCell { piece, .. } | PwError::MovesInfinity { piece } => format!("pieces[{piece}]"),
            };
            SchemaError::new(e.to_string()).within(&path)
        })?;
        // only canonical forms are written, so anything else was edited by hand
        if f.pieces().len() != n {
            return Err(SchemaError::new("map is not in canonical form (adjacent equal pieces)"));
        }
        Ok(f)
    }
}

/// `"-inf"`, `"inf"`, or a finite algebraic number.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundRepr {
    Infinite(String),
    Finite(RealAlgebraicRepr),
}

impl Exported for Bound {
    type Repr = BoundRepr;

    fn to_repr(&self) -> BoundRepr {
        match self {
            Bound::NegInf => BoundRepr::Infinite("-inf".into()),
            Bound::PosInf => BoundRepr::Infinite("inf".into()),
            Bound::Finite(x) => BoundRepr::Finite(x.to_repr()),
        }
    }

    fn from_repr(x: BoundRepr) -> Result<Self, SchemaError> {
        match x {
            BoundRepr::Infinite(s) => match s.as_str() {
                "-inf" => Ok(Bound::NegInf),
                "inf" | "+inf" => Ok(Bound::PosInf),
                _ => Err(SchemaError::new(format!("expected \"-inf\", \"inf\" or a number, found {s:?}"))),
            },
            BoundRepr::Finite(r) => RealAlgebraic::from_repr(r).map(Bound::Finite),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalRepr {
    pub lo: BoundRepr,
    pub hi: BoundRepr,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalSetRepr {
    pub intervals: Vec<IntervalRepr>,
}

fn interval_from(x: IntervalRepr) -> Result<Interval, SchemaError> {
    let lo = at(Bound::from_repr(x.lo), "lo")?;
    let hi = at(Bound::from_repr(x.hi), "hi")?;
    Interval::new(lo, hi).ok_or_else(|| SchemaError::new("need lo < hi"))
}

impl Exported for IntervalSet {
    type Repr = IntervalSetRepr;

    fn to_repr(&self) -> IntervalSetRepr {
        IntervalSetRepr {
            intervals: self
                .intervals()
                .iter()
                .map(|iv| IntervalRepr {
                    lo: iv.lo.to_repr(),
                    hi: iv.hi.to_repr(),
                })
                .collect(),
        }
    }

    fn from_repr(x: IntervalSetRepr) -> Result<Self, SchemaError> {
        let ivs = at(list(x.intervals, interval_from), "intervals")?;
        IntervalSet::from_sorted(ivs)
            .ok_or_else(|| SchemaError::new("intervals must be sorted and separated by gaps").within("intervals"))
    }
}

impl Exported for Word {
    type Repr = String;

    fn to_repr(&self) -> String {
        self.to_string()
    }

    fn from_repr(s: String) -> Result<Self, SchemaError> {
        let w: Word = s.parse().map_err(|e: pwproj_core::word::BadLetter| SchemaError::new(e.to_string()))?;
        if w.len() != s.chars().filter(|c| !c.is_whitespace()).count() {
            return Err(SchemaError::new(format!("word {s:?} is not reduced")));
        }
        Ok(w)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorPairRepr {
    pub name: String,
    pub a: Mat2Repr,
    pub b: Mat2Repr,
    pub provenance: String,
}

impl Exported for GeneratorPair {
    type Repr = GeneratorPairRepr;

    fn to_repr(&self) -> GeneratorPairRepr {
        GeneratorPairRepr {
            name: self.name.clone(),
            a: self.a.to_repr(),
            b: self.b.to_repr(),
            provenance: self.provenance.clone(),
        }
    }

    fn from_repr(x: GeneratorPairRepr) -> Result<Self, SchemaError> {
        Ok(GeneratorPair::new(
            x.name,
            at(Mat2::from_repr(x.a), "a")?,
            at(Mat2::from_repr(x.b), "b")?,
            x.provenance,
        ))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteSubsetRepr {
    pub elements: Vec<PiecewiseMapRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl Exported for FiniteSubset {
    type Repr = FiniteSubsetRepr;

    fn to_repr(&self) -> FiniteSubsetRepr {
        FiniteSubsetRepr {
            elements: reprs(self.elements()),
            labels: self.labels().map(<[String]>::to_vec),
        }
    }

    fn from_repr(x: FiniteSubsetRepr) -> Result<Self, SchemaError> {
        let elements = at(parse_list::<PiecewiseMap>(x.elements), "elements")?;
        let n = elements.len();
        let u = FiniteSubset::new(elements).map_err(|e| {
            SchemaError::new(format!("same element as elements[{}]", e.first)).within(&format!("elements[{}]", e.second))
        })?;
        match x.labels {
            None => Ok(u),
            Some(l) if l.len() == n => Ok(u.with_labels(l)),
            Some(_) => Err(SchemaError::new("one label per element").within("labels")),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranslatingSetRepr {
    pub pair: GeneratorPairRepr,
    pub interval: ClosedIntervalRepr,
    pub epsilon: String,
    pub delta: String,
    pub words: Vec<String>,
    pub elements: Vec<PiecewiseMapRepr>,
}

impl Exported for TranslatingSet {
    type Repr = TranslatingSetRepr;

    fn to_repr(&self) -> TranslatingSetRepr {
        TranslatingSetRepr {
            pair: self.pair.to_repr(),
            interval: self.interval.to_repr(),
            epsilon: self.epsilon.to_repr(),
            delta: self.delta.to_repr(),
            words: reprs(&self.words),
            elements: reprs(&self.elements),
        }
    }

    /// Loading re-runs every invariant check, so a tampered file is refused.
    fn from_repr(x: TranslatingSetRepr) -> Result<Self, SchemaError> {
        let t = TranslatingSet {
            pair: at(GeneratorPair::from_repr(x.pair), "pair")?,
            interval: at(ClosedInterval::from_repr(x.interval), "interval")?,
            epsilon: at(Rational::from_repr(x.epsilon), "epsilon")?,
            delta: at(Rational::from_repr(x.delta), "delta")?,
            words: at(parse_list::<Word>(x.words), "words")?,
            elements: at(parse_list::<PiecewiseMap>(x.elements), "elements")?,
        };
        t.check().map_err(|e| SchemaError::new(format!("invariant: {e}")))?;
        Ok(t)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistortionCertRepr {
    pub interval: ClosedIntervalRepr,
    pub epsilon: String,
    pub delta: String,
    pub radius: String,
    pub k: String,
    pub derivative_lower: String,
    pub derivative_upper: String,
}

impl Exported for DistortionCert {
    type Repr = DistortionCertRepr;

    fn to_repr(&self) -> DistortionCertRepr {
        DistortionCertRepr {
            interval: self.interval.to_repr(),
            epsilon: self.epsilon.to_repr(),
            delta: self.delta.to_repr(),
            radius: self.radius.to_repr(),
            k: self.k.to_repr(),
            derivative_lower: self.derivative_lower.to_repr(),
            derivative_upper: self.derivative_upper.to_repr(),
        }
    }

    /// The constants are recomputed and must match what the file claims.
    fn from_repr(x: DistortionCertRepr) -> Result<Self, SchemaError> {
        let claimed = DistortionCert {
            interval: at(ClosedInterval::from_repr(x.interval), "interval")?,
            epsilon: at(Rational::from_repr(x.epsilon), "epsilon")?,
            delta: at(Rational::from_repr(x.delta), "delta")?,
            radius: at(Rational::from_repr(x.radius), "radius")?,
            k: at(Rational::from_repr(x.k), "k")?,
            derivative_lower: at(Rational::from_repr(x.derivative_lower), "derivative_lower")?,
            derivative_upper: at(Rational::from_repr(x.derivative_upper), "derivative_upper")?,
        };
        let fresh = certify_delta(&claimed.interval, &claimed.epsilon, &claimed.delta)
            .map_err(|e| SchemaError::new(format!("delta does not certify: {e}")))?;
        let fields = [
            ("radius", &fresh.radius, &claimed.radius),
            ("k", &fresh.k, &claimed.k),
            ("derivative_lower", &fresh.derivative_lower, &claimed.derivative_lower),
            ("derivative_upper", &fresh.derivative_upper, &claimed.derivative_upper),
        ];
        if let Some((name, want, _)) = fields.iter().find(|(_, a, b)| a != b) {
            return Err(SchemaError::new(format!(
                "does not match the recomputed value {}",
                format_rational(want)
            ))
            .within(name));
        }
        Ok(claimed)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoRelationCertRepr {
    pub pair: String,
    pub max_len: usize,
    pub words_checked: u64,
}

impl Exported for NoRelationCert {
    type Repr = NoRelationCertRepr;

    fn to_repr(&self) -> NoRelationCertRepr {
        NoRelationCertRepr {
            pair: self.pair.clone(),
            max_len: self.max_len,
            words_checked: self.words_checked,
        }
    }

    fn from_repr(x: NoRelationCertRepr) -> Result<Self, SchemaError> {
        Ok(NoRelationCert {
            pair: x.pair,
            max_len: x.max_len,
            words_checked: x.words_checked,
        })
    }
}

#[derive(Serialize, Deserialize, Clone, Copy, Default)]
#[serde(deny_unknown_fields)]
pub struct SearchStatsRepr {
    pub cores_examined: u64,
    pub not_reduced: u64,
    pub candidates: u64,
    pub too_far: u64,
    pub pole_in_interval: u64,
    pub fixes_infinity: u64,
    pub not_hyperbolic: u64,
    pub not_flanking: u64,
    pub duplicate: u64,
}

impl Exported for SearchStats {
    type Repr = SearchStatsRepr;

    fn to_repr(&self) -> SearchStatsRepr {
        SearchStatsRepr {
            cores_examined: self.cores_examined,
            not_reduced: self.not_reduced,
            candidates: self.candidates,
            too_far: self.too_far,
            pole_in_interval: self.pole_in_interval,
            fixes_infinity: self.fixes_infinity,
            not_hyperbolic: self.not_hyperbolic,
            not_flanking: self.not_flanking,
            duplicate: self.duplicate,
        }
    }

    fn from_repr(x: SearchStatsRepr) -> Result<Self, SchemaError> {
        Ok(SearchStats {
            cores_examined: x.cores_examined,
            not_reduced: x.not_reduced,
            candidates: x.candidates,
            too_far: x.too_far,
            pole_in_interval: x.pole_in_interval,
            fixes_infinity: x.fixes_infinity,
            not_hyperbolic: x.not_hyperbolic,
            not_flanking: x.not_flanking,
            duplicate: x.duplicate,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranslatingWordsRepr {
    pub delta: String,
    pub words: Vec<String>,
    pub cores: Vec<String>,
    pub matrices: Vec<Mat2Repr>,
    pub stats: SearchStatsRepr,
}

impl Exported for TranslatingWords {
    type Repr = TranslatingWordsRepr;

    fn to_repr(&self) -> TranslatingWordsRepr {
        TranslatingWordsRepr {
            delta: self.delta.to_repr(),
            words: reprs(&self.words),
            cores: reprs(&self.cores),
            matrices: reprs(&self.matrices),
            stats: self.stats.to_repr(),
        }
    }

    fn from_repr(x: TranslatingWordsRepr) -> Result<Self, SchemaError> {
        let t = TranslatingWords {
            delta: at(Rational::from_repr(x.delta), "delta")?,
            words: at(parse_list::<Word>(x.words), "words")?,
            cores: at(parse_list::<Word>(x.cores), "cores")?,
            matrices: at(parse_list::<Mat2>(x.matrices), "matrices")?,
            stats: at(SearchStats::from_repr(x.stats), "stats")?,
        };
        if t.words.len() != t.cores.len() || t.words.len() != t.matrices.len() {
            return Err(SchemaError::new("words, cores and matrices differ in length"));
        }
        Ok(t)
    }
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(deny_unknown_fields)]
pub struct EdgeRepr {
    pub color: u8,
    pub source: usize,
    pub translator: usize,
    pub target: usize,
}

impl Exported for Edge {
    type Repr = EdgeRepr;

    fn to_repr(&self) -> EdgeRepr {
        EdgeRepr {
            color: self.color,
            source: self.source,
            translator: self.translator,
            target: self.target,
        }
    }

    fn from_repr(x: EdgeRepr) -> Result<Self, SchemaError> {
        if x.color != 1 && x.color != 2 {
            return Err(SchemaError::new(format!("color must be 1 or 2, found {}", x.color)).within("color"));
        }
        Ok(Edge {
            color: x.color,
            source: x.source,
            translator: x.translator,
            target: x.target,
        })
    }
}

/// Edges refer to `elements` by position (the serial numbers).
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchingCertificateRepr {
    pub translators: Vec<PiecewiseMapRepr>,
    pub elements: Vec<PiecewiseMapRepr>,
    pub u1: Vec<usize>,
    pub u2: Vec<usize>,
    pub edges: Vec<EdgeRepr>,
}

impl Exported for MatchingCertificate {
    type Repr = MatchingCertificateRepr;

    fn to_repr(&self) -> MatchingCertificateRepr {
        MatchingCertificateRepr {
            translators: reprs(&self.translators),
            elements: reprs(&self.elements),
            u1: self.u1.clone(),
            u2: self.u2.clone(),
            edges: reprs(&self.edges),
        }
    }

    fn from_repr(x: MatchingCertificateRepr) -> Result<Self, SchemaError> {
        Ok(MatchingCertificate {
            translators: at(parse_list::<PiecewiseMap>(x.translators), "translators")?,
            elements: at(parse_list::<PiecewiseMap>(x.elements), "elements")?,
            u1: x.u1,
            u2: x.u2,
            edges: at(parse_list::<Edge>(x.edges), "edges")?,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HallViolationRepr {
    pub translators: Vec<PiecewiseMapRepr>,
    pub elements: Vec<PiecewiseMapRepr>,
    /// (color, element serial) pairs.
    pub vertices: Vec<(u8, usize)>,
    pub neighbourhood: Vec<usize>,
}

impl Exported for HallViolation {
    type Repr = HallViolationRepr;

    fn to_repr(&self) -> HallViolationRepr {
        HallViolationRepr {
            translators: reprs(&self.translators),
            elements: reprs(&self.elements),
            vertices: self.vertices.clone(),
            neighbourhood: self.neighbourhood.clone(),
        }
    }

    fn from_repr(x: HallViolationRepr) -> Result<Self, SchemaError> {
        let v = HallViolation {
            translators: at(parse_list::<PiecewiseMap>(x.translators), "translators")?,
            elements: at(parse_list::<PiecewiseMap>(x.elements), "elements")?,
            vertices: x.vertices,
            neighbourhood: x.neighbourhood,
        };
        let n = v.elements.len();
        if let Some(i) = v.vertices.iter().position(|&(c, g)| !(c == 1 || c == 2) || g >= n) {
            return Err(SchemaError::new("bad color or element index").within(&format!("vertices[{i}]")));
        }
        if let Some(i) = v.neighbourhood.iter().position(|&g| g >= n) {
            return Err(SchemaError::new("element index out of range").within(&format!("neighbourhood[{i}]")));
        }
        Ok(v)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarriageReportRepr {
    pub size: usize,
    pub lhs: usize,
    pub rhs: usize,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<PiecewiseMapRepr>>>,
}

impl Exported for MarriageReport {
    type Repr = MarriageReportRepr;

    fn to_repr(&self) -> MarriageReportRepr {
        MarriageReportRepr {
            size: self.size,
            lhs: self.lhs,
            rhs: self.rhs,
            pass: self.pass,
            witness: self.witness.as_ref().map(|w| w.iter().map(|row| reprs(row)).collect()),
        }
    }

    fn from_repr(x: MarriageReportRepr) -> Result<Self, SchemaError> {
        if x.rhs != 2 * x.size {
            return Err(SchemaError::new("rhs must be 2·size").within("rhs"));
        }
        if x.pass != (x.lhs >= x.rhs) {
            return Err(SchemaError::new("pass disagrees with lhs ≥ rhs").within("pass"));
        }
        let witness = match x.witness {
            None => None,
            Some(rows) => Some(at(list(rows, parse_list::<PiecewiseMap>), "witness")?),
        };
        Ok(MarriageReport {
            size: x.size,
            lhs: x.lhs,
            rhs: x.rhs,
            pass: x.pass,
            witness,
        })
    }
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(deny_unknown_fields)]
pub struct EgsReportRepr {
    pub u1: usize,
    pub u2: usize,
    pub lhs: usize,
    pub middle: usize,
    pub union_plus_intersection: usize,
    pub rhs: usize,
    pub identity_holds: bool,
    pub bound_holds: bool,
    pub counting_holds: bool,
    pub pass: bool,
}

impl Exported for EgsReport {
    type Repr = EgsReportRepr;

    fn to_repr(&self) -> EgsReportRepr {
        EgsReportRepr {
            u1: self.u1,
            u2: self.u2,
            lhs: self.lhs,
            middle: self.middle,
            union_plus_intersection: self.union_plus_intersection,
            rhs: self.rhs,
            identity_holds: self.identity_holds,
            bound_holds: self.bound_holds,
            counting_holds: self.counting_holds,
            pass: self.pass,
        }
    }

    fn from_repr(x: EgsReportRepr) -> Result<Self, SchemaError> {
        if x.pass != (x.identity_holds && x.bound_holds && x.counting_holds) {
            return Err(SchemaError::new("pass disagrees with the three checks").within("pass"));
        }
        Ok(EgsReport {
            u1: x.u1,
            u2: x.u2,
            lhs: x.lhs,
            middle: x.middle,
            union_plus_intersection: x.union_plus_intersection,
            rhs: x.rhs,
            identity_holds: x.identity_holds,
            bound_holds: x.bound_holds,
            counting_holds: x.counting_holds,
            pass: x.pass,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellRepr {
    pub lo: BoundRepr,
    pub hi: BoundRepr,
    pub cover: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PigeonholeWitnessRepr {
    pub l: IntervalSetRepr,
    pub indices: [usize; 4],
    pub measure_l: QSqrt2Repr,
    pub l_sets: Vec<IntervalSetRepr>,
    pub cells: Vec<CellRepr>,
    pub total: QSqrt2Repr,
    pub measure_i: QSqrt2Repr,
}

impl Exported for PigeonholeWitness {
    type Repr = PigeonholeWitnessRepr;

    fn to_repr(&self) -> PigeonholeWitnessRepr {
        PigeonholeWitnessRepr {
            l: self.l.to_repr(),
            indices: self.indices,
            measure_l: self.measure_l.to_repr(),
            l_sets: reprs(&self.l_sets),
            cells: self
                .cells
                .iter()
                .map(|c| CellRepr {
                    lo: c.lo.to_repr(),
                    hi: c.hi.to_repr(),
                    cover: c.cover.clone(),
                })
                .collect(),
            total: self.total.to_repr(),
            measure_i: self.measure_i.to_repr(),
        }
    }

    fn from_repr(x: PigeonholeWitnessRepr) -> Result<Self, SchemaError> {
        let cells = list(x.cells, |c| {
            Ok(Cell {
                lo: at(Bound::from_repr(c.lo), "lo")?,
                hi: at(Bound::from_repr(c.hi), "hi")?,
                cover: c.cover,
            })
        });
        Ok(PigeonholeWitness {
            l: at(IntervalSet::from_repr(x.l), "l")?,
            indices: x.indices,
            measure_l: at(QSqrt2::from_repr(x.measure_l), "measure_l")?,
            l_sets: at(parse_list::<IntervalSet>(x.l_sets), "l_sets")?,
            cells: at(cells, "cells")?,
            total: at(QSqrt2::from_repr(x.total), "total")?,
            measure_i: at(QSqrt2::from_repr(x.measure_i), "measure_i")?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pwproj_core::builtin::thompson_f;
    use pwproj_core::number::rat;

    #[test]
    fn paths_point_at_the_bad_field() {
        let f = &thompson_f()[1];
        let mut v = to_value(f);
        v["pieces"][1]["c"]["s"] = "1/0".into();
        match from_value::<PiecewiseMap>(v) {
            Err(FormatError::Schema(e)) => assert_eq!(e.path, "pieces[1].c.s"),
            other => panic!("{other:?}"),
        }
        let mut v = to_value(f);
        v["pieces"][0]["a"]["r"] = "3/1".into();
        match from_value::<PiecewiseMap>(v) {
            Err(FormatError::Schema(e)) => assert_eq!(e.path, "pieces[0]"),
            other => panic!("{other:?}"),
        }
        let mut v = to_value(f);
        v["breakpoints"].as_array_mut().unwrap().swap(0, 2);
        match from_value::<PiecewiseMap>(v) {
            Err(FormatError::Schema(e)) => assert_eq!(e.path, "breakpoints[1]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rat(-3, 6).to_repr(), "-1/2");
        assert_eq!(rat(4, 1).to_repr(), "4/1");
        assert!(Rational::from_repr("x".into()).is_err());
    }

    #[test]
    fn unbounded_interval_sets() {
        let s = IntervalSet::interval(Bound::NegInf, rat(1, 3));
        let json = to_json(&s);
        assert!(json.contains("\"-inf\""));
        assert_eq!(from_json::<IntervalSet>(&json).unwrap(), s);
        assert!(from_json::<IntervalSet>(r#"{"intervals":[{"lo":"minus","hi":"inf"}]}"#).is_err());
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(from_json::<QSqrt2>(r#"{"r":"1/1","s":"0/1","t":"1"}"#).is_err());
        assert!(from_json::<QSqrt2>(r#"{"r":"1/1"}"#).is_err());
    }
}
