//! Finite instances of the 2-marriage condition for the translating set
//! S₁ = T̃ ∪ {1}, S₂ = T̃.
//!
//! Left translation s·g is "apply g, then s", i.e. `g.then(s)`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::{HashMap, HashSet};

use crate::matching::{hall_violator, hopcroft_karp};
use crate::number::Rational;
use crate::piecewise::{PiecewiseMap, Violation};
use crate::pigeonhole::lemma_delta;
use crate::pipeline::verify_agreement;
use crate::projective::{ClosedInterval, Ring};
use crate::word::{GeneratorPair, Word};

/// Number of translating elements besides the identity.
pub const TRANSLATING_ELEMENTS: usize = 12;

/// |S₁| + |S₂|.
pub const PIECE_COUNT: usize = (TRANSLATING_ELEMENTS + 1) + TRANSLATING_ELEMENTS;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSubset {
    elements: Vec<PiecewiseMap>,
    labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DuplicateElement {
    pub first: usize,
    pub second: usize,
}

impl fmt::Display for DuplicateElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "elements {} and {} are equal", self.first, self.second)
    }
}

impl core::error::Error for DuplicateElement {}

impl FiniteSubset {
    pub fn empty() -> Self {
        FiniteSubset {
            elements: Vec::new(),
            labels: None,
        }
    }

    pub fn new(elements: Vec<PiecewiseMap>) -> Result<Self, DuplicateElement> {
        first_duplicate(&elements).map_or(Ok(()), |(first, second)| Err(DuplicateElement { first, second }))?;
        Ok(FiniteSubset { elements, labels: None })
    }

    /// Keeps the first occurrence of each element.
    pub fn dedup(elements: impl IntoIterator<Item = PiecewiseMap>) -> Self {
        let mut table = ElementTable::new();
        for g in elements {
            table.intern(g);
        }
        FiniteSubset {
            elements: table.into_items(),
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.elements.len());
        self.labels = Some(labels);
        self
    }

    pub fn elements(&self) -> &[PiecewiseMap] {
        &self.elements
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn first_duplicate(items: &[PiecewiseMap]) -> Option<(usize, usize)> {
    let mut seen: HashMap<&PiecewiseMap, usize> = HashMap::new();
    for (k, g) in items.iter().enumerate() {
        if let Some(&first) = seen.get(g) {
            return Some((first, k));
        }
        seen.insert(g, k);
    }
    None
}

/// Interning table: each distinct map gets a serial number.
#[derive(Clone, Debug, Default)]
pub struct ElementTable {
    items: Vec<PiecewiseMap>,
    index: HashMap<PiecewiseMap, usize>,
}

impl ElementTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, g: PiecewiseMap) -> usize {
        if let Some(&id) = self.index.get(&g) {
            return id;
        }
        let id = self.items.len();
        self.items.push(g.clone());
        self.index.insert(g, id);
        id
    }

    pub fn get(&self, g: &PiecewiseMap) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn items(&self) -> &[PiecewiseMap] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn into_items(self) -> Vec<PiecewiseMap> {
        self.items
    }
}

/// All products of at most `radius` generators and their inverses, in
/// breadth-first order (generators in the given order, each followed by its
/// inverse).
pub fn ball(gens: &[PiecewiseMap], radius: usize) -> FiniteSubset {
    let mut letters = Vec::with_capacity(2 * gens.len());
    for g in gens {
        letters.push(g.clone());
        letters.push(g.inverse());
    }
    let mut table = ElementTable::new();
    table.intern(PiecewiseMap::identity());
    let mut frontier = 0..1;
    for _ in 0..radius {
        let start = table.len();
        for k in frontier.clone() {
            let x = table.items()[k].clone();
            for l in &letters {
                table.intern(x.then(l));
            }
        }
        frontier = start..table.len();
    }
    FiniteSubset {
        elements: table.into_items(),
        labels: None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslatingSet {
    /// g₁..g₆ then h₁..h₆.
    pub elements: Vec<PiecewiseMap>,
    pub words: Vec<Word>,
    pub interval: ClosedInterval,
    pub delta: Rational,
    pub epsilon: Rational,
    pub pair: GeneratorPair,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TsetError {
    WrongCount { elements: usize, words: usize },
    IsIdentity { index: usize },
    Duplicate { first: usize, second: usize },
    Disagrees { index: usize },
    TooFar { index: usize },
    DeltaNotCertified { delta: Rational, certified: Option<Rational> },
    Ring { index: usize, violations: Vec<Violation> },
}

impl fmt::Display for TsetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TsetError::WrongCount { elements, words } => write!(
                f,
                "expected {} elements and words, got {} and {}",
                TRANSLATING_ELEMENTS, elements, words
            ),
            TsetError::IsIdentity { index } => write!(f, "element {} is the identity", index),
            TsetError::Duplicate { first, second } => write!(f, "elements {} and {} coincide", first, second),
            TsetError::Disagrees { index } => write!(f, "element {} does not agree with its word on I", index),
            TsetError::TooFar { index } => write!(f, "word {} is not within delta of the identity", index),
            TsetError::DeltaNotCertified { delta, certified } => match certified {
                Some(c) => write!(f, "delta {} exceeds the certified {}", delta, c),
                None => write!(f, "delta {} cannot be certified", delta),
            },
            TsetError::Ring { index, violations } => {
                write!(f, "element {} leaves the ring:", index)?;
                for v in violations {
                    write!(f, " {};", v)?;
                }
                Ok(())
            }
        }
    }
}

impl core::error::Error for TsetError {}

impl TranslatingSet {
    /// Identity first, then the twelve elements.
    pub fn translators(&self) -> Vec<PiecewiseMap> {
        let mut out = Vec::with_capacity(TRANSLATING_ELEMENTS + 1);
        out.push(PiecewiseMap::identity());
        out.extend(self.elements.iter().cloned());
        out
    }

    pub fn check(&self) -> Result<(), TsetError> {
        let n = self.elements.len();
        if n != TRANSLATING_ELEMENTS || self.words.len() != TRANSLATING_ELEMENTS {
            return Err(TsetError::WrongCount {
                elements: n,
                words: self.words.len(),
            });
        }
        match lemma_delta(&self.interval, &self.epsilon) {
            Ok(c) if self.delta <= c => {}
            Ok(c) => {
                return Err(TsetError::DeltaNotCertified {
                    delta: self.delta.clone(),
                    certified: Some(c),
                })
            }
            Err(_) => {
                return Err(TsetError::DeltaNotCertified {
                    delta: self.delta.clone(),
                    certified: None,
                })
            }
        }
        let mut seen: HashMap<&PiecewiseMap, usize> = HashMap::new();
        for (k, g) in self.elements.iter().enumerate() {
            if g.is_identity() {
                return Err(TsetError::IsIdentity { index: k });
            }
            if let Some(&first) = seen.get(g) {
                return Err(TsetError::Duplicate { first, second: k });
            }
            seen.insert(g, k);
            if !self.pair.eval(&self.words[k]).within(&self.delta) {
                return Err(TsetError::TooFar { index: k });
            }
            if !verify_agreement(g, &self.words[k], &self.pair, &self.interval) {
                return Err(TsetError::Disagrees { index: k });
            }
            let violations = g.validate(Ring::ZSqrt2Halves);
            if !violations.is_empty() {
                return Err(TsetError::Ring { index: k, violations });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarriageReport {
    pub size: usize,
    /// |S₁·u|.
    pub lhs: usize,
    /// 2|u|.
    pub rhs: usize,
    pub pass: bool,
    /// On failure: row k holds s·g for every translator s, g = u[k].
    pub witness: Option<Vec<Vec<PiecewiseMap>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EgsReport {
    pub u1: usize,
    pub u2: usize,
    /// |S₁u₁ ∪ S₂u₂|.
    pub lhs: usize,
    /// |T̃(u₁ ∪ u₂) ∪ u₁|.
    pub middle: usize,
    /// |u₁ ∪ u₂| + |u₁ ∩ u₂|.
    pub union_plus_intersection: usize,
    /// |u₁| + |u₂|.
    pub rhs: usize,
    pub identity_holds: bool,
    pub bound_holds: bool,
    pub counting_holds: bool,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    /// 1 or 2.
    pub color: u8,
    /// Index into the certificate's element table.
    pub source: usize,
    /// Index into the translators; color 2 excludes 0 (the identity).
    pub translator: usize,
    pub target: usize,
}

/// Self-contained evenly colored 2-matching: edges reference `elements`
/// by serial number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingCertificate {
    pub elements: Vec<PiecewiseMap>,
    pub translators: Vec<PiecewiseMap>,
    pub u1: Vec<usize>,
    pub u2: Vec<usize>,
    /// One per left vertex: u₁ in order, then u₂.
    pub edges: Vec<Edge>,
}

/// Left vertices V (color, element) with |N(V)| < |V|.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallViolation {
    pub elements: Vec<PiecewiseMap>,
    pub translators: Vec<PiecewiseMap>,
    pub vertices: Vec<(u8, usize)>,
    pub neighbourhood: Vec<usize>,
}

impl HallViolation {
    /// Recomputes N(V) from the translators: (|V|, |N(V)|).
    pub fn recount(&self) -> (usize, usize) {
        let mut nbhd: HashSet<PiecewiseMap> = HashSet::new();
        for &(color, g) in &self.vertices {
            let first = if color == 1 { 0 } else { 1 };
            for s in &self.translators[first..] {
                nbhd.insert(self.elements[g].then(s));
            }
        }
        (self.vertices.len(), nbhd.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateViolation {
    TranslatorsNotDistinct,
    FirstTranslatorNotIdentity,
    BadIndex { edge: usize },
    WrongEdgeCount { expected: usize, found: usize },
    /// Edge `edge` does not start at the left vertex in its position.
    WrongSource { edge: usize },
    ColorSet { edge: usize },
    WrongProduct { edge: usize },
    DuplicateTarget { first: usize, second: usize },
}

impl fmt::Display for CertificateViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateViolation::TranslatorsNotDistinct => f.write_str("translators are not distinct"),
            CertificateViolation::FirstTranslatorNotIdentity => f.write_str("translator 0 is not the identity"),
            CertificateViolation::BadIndex { edge } => write!(f, "edge {} has an index out of range", edge),
            CertificateViolation::WrongEdgeCount { expected, found } => {
                write!(f, "expected {} edges, found {}", expected, found)
            }
            CertificateViolation::WrongSource { edge } => write!(f, "edge {} does not cover its left vertex", edge),
            CertificateViolation::ColorSet { edge } => write!(f, "edge {} uses a translator outside its color set", edge),
            CertificateViolation::WrongProduct { edge } => write!(f, "edge {}: s·g differs from the target", edge),
            CertificateViolation::DuplicateTarget { first, second } => {
                write!(f, "edges {} and {} share a target", first, second)
            }
        }
    }
}

/// Translates of interned elements under a fixed translator list whose
/// first entry is the identity; S₁ is the whole list, S₂ drops the identity.
#[derive(Clone, Debug)]
pub struct TranslateTable {
    translators: Vec<PiecewiseMap>,
    table: ElementTable,
    /// Row of translate ids per element id (empty until computed).
    rows: Vec<Vec<usize>>,
}

/// Maximum matching on interned ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdMatching {
    Perfect(Vec<Edge>),
    Violation { vertices: Vec<(u8, usize)>, neighbourhood: Vec<usize> },
}

impl TranslateTable {
    pub fn new(translators: Vec<PiecewiseMap>) -> Self {
        assert!(
            translators.first().is_some_and(PiecewiseMap::is_identity),
            "translator 0 must be the identity"
        );
        TranslateTable {
            translators,
            table: ElementTable::new(),
            rows: Vec::new(),
        }
    }

    pub fn for_set(t: &TranslatingSet) -> Self {
        Self::new(t.translators())
    }

    pub fn translators(&self) -> &[PiecewiseMap] {
        &self.translators
    }

    pub fn elements(&self) -> &[PiecewiseMap] {
        self.table.items()
    }

    /// Interns `g` and all its translates.
    pub fn add(&mut self, g: PiecewiseMap) -> usize {
        let id = self.table.intern(g);
        self.rows.resize(self.table.len(), Vec::new());
        if self.rows[id].is_empty() {
            let g = self.table.items()[id].clone();
            let row: Vec<usize> = self
                .translators
                .iter()
                .map(|s| self.table.intern(g.then(s)))
                .collect();
            self.rows.resize(self.table.len(), Vec::new());
            self.rows[id] = row;
        }
        id
    }

    /// Translate ids of `id` by S₁ (index 0 is `id` itself).
    pub fn row(&self, id: usize) -> &[usize] {
        let r = &self.rows[id];
        assert!(!r.is_empty(), "element {} was not added", id);
        r
    }

    fn color_row(&self, color: u8, id: usize) -> &[usize] {
        let r = self.row(id);
        if color == 1 {
            r
        } else {
            &r[1..]
        }
    }

    pub fn marriage(&self, u: &[usize]) -> MarriageReport {
        let mut products: HashSet<usize> = HashSet::new();
        for &g in u {
            products.extend(self.row(g).iter().copied());
        }
        let lhs = products.len();
        let rhs = 2 * u.len();
        let pass = lhs >= rhs;
        let witness = (!pass).then(|| {
            u.iter()
                .map(|&g| self.row(g).iter().map(|&p| self.elements()[p].clone()).collect())
                .collect()
        });
        MarriageReport {
            size: u.len(),
            lhs,
            rhs,
            pass,
            witness,
        }
    }

    pub fn egs(&self, u1: &[usize], u2: &[usize]) -> EgsReport {
        let mut lhs: HashSet<usize> = HashSet::new();
        for &g in u1 {
            lhs.extend(self.color_row(1, g).iter().copied());
        }
        for &g in u2 {
            lhs.extend(self.color_row(2, g).iter().copied());
        }
        let set1: HashSet<usize> = u1.iter().copied().collect();
        let set2: HashSet<usize> = u2.iter().copied().collect();
        let mut middle: HashSet<usize> = set1.clone();
        for &g in set1.union(&set2) {
            middle.extend(self.color_row(2, g).iter().copied());
        }
        let union = set1.union(&set2).count();
        let inter = set1.intersection(&set2).count();
        let rhs = u1.len() + u2.len();
        let identity_holds = lhs == middle;
        let bound_holds = middle.len() >= union + inter;
        let counting_holds = union + inter == rhs;
        EgsReport {
            u1: u1.len(),
            u2: u2.len(),
            lhs: lhs.len(),
            middle: middle.len(),
            union_plus_intersection: union + inter,
            rhs,
            identity_holds,
            bound_holds,
            counting_holds,
            pass: identity_holds && bound_holds && counting_holds && lhs.len() >= rhs,
        }
    }

    /// Hopcroft–Karp on left vertices u₁ (color 1) ⊔ u₂ (color 2). Edge
    /// sources and targets are element ids.
    pub fn matching(&self, u1: &[usize], u2: &[usize]) -> IdMatching {
        let left: Vec<(u8, usize)> = u1
            .iter()
            .map(|&g| (1, g))
            .chain(u2.iter().map(|&g| (2, g)))
            .collect();
        let mut right_of: HashMap<usize, usize> = HashMap::new();
        let mut right_ids: Vec<usize> = Vec::new();
        let mut adj: Vec<Vec<usize>> = Vec::with_capacity(left.len());
        // adjacency entry k of color-c vertex corresponds to translator k + (c - 1)
        for &(color, g) in &left {
            let nbrs = self
                .color_row(color, g)
                .iter()
                .map(|&p| {
                    *right_of.entry(p).or_insert_with(|| {
                        right_ids.push(p);
                        right_ids.len() - 1
                    })
                })
                .collect();
            adj.push(nbrs);
        }
        let m = hopcroft_karp(&adj, right_ids.len());
        if let Some((set, nbhd)) = hall_violator(&adj, &m) {
            return IdMatching::Violation {
                vertices: set.into_iter().map(|k| left[k]).collect(),
                neighbourhood: nbhd.into_iter().map(|v| right_ids[v]).collect(),
            };
        }
        let edges = left
            .iter()
            .enumerate()
            .map(|(k, &(color, g))| {
                let v = m.left[k].expect("perfect");
                let slot = adj[k].iter().position(|&w| w == v).expect("matched along an edge");
                Edge {
                    color,
                    source: g,
                    translator: slot + usize::from(color - 1),
                    target: right_ids[v],
                }
            })
            .collect();
        IdMatching::Perfect(edges)
    }

    /// Packages id-level results with a compact element table.
    pub fn certificate(&self, u1: &[usize], u2: &[usize], edges: &[Edge]) -> MatchingCertificate {
        let mut local = ElementTable::new();
        let mut map = |id: usize| local.intern(self.elements()[id].clone());
        let u1: Vec<usize> = u1.iter().map(|&g| map(g)).collect();
        let u2: Vec<usize> = u2.iter().map(|&g| map(g)).collect();
        let edges = edges
            .iter()
            .map(|e| Edge {
                color: e.color,
                source: map(e.source),
                translator: e.translator,
                target: map(e.target),
            })
            .collect();
        MatchingCertificate {
            elements: local.into_items(),
            translators: self.translators.clone(),
            u1,
            u2,
            edges,
        }
    }

    pub fn violation(&self, vertices: &[(u8, usize)], neighbourhood: &[usize]) -> HallViolation {
        let mut local = ElementTable::new();
        let vertices = vertices
            .iter()
            .map(|&(c, g)| (c, local.intern(self.elements()[g].clone())))
            .collect();
        let neighbourhood = neighbourhood
            .iter()
            .map(|&p| local.intern(self.elements()[p].clone()))
            .collect();
        HallViolation {
            elements: local.into_items(),
            translators: self.translators.clone(),
            vertices,
            neighbourhood,
        }
    }

    fn add_all(&mut self, u: &FiniteSubset) -> Vec<usize> {
        u.elements().iter().map(|g| self.add(g.clone())).collect()
    }
}

pub fn check_2marriage(t: &TranslatingSet, u: &FiniteSubset) -> MarriageReport {
    let mut table = TranslateTable::for_set(t);
    let ids = table.add_all(u);
    table.marriage(&ids)
}

pub fn check_egs_condition(t: &TranslatingSet, u1: &FiniteSubset, u2: &FiniteSubset) -> EgsReport {
    let mut table = TranslateTable::for_set(t);
    let a = table.add_all(u1);
    let b = table.add_all(u2);
    table.egs(&a, &b)
}

pub fn extract_matching(
    t: &TranslatingSet,
    u1: &FiniteSubset,
    u2: &FiniteSubset,
) -> Result<MatchingCertificate, HallViolation> {
    extract_with(t.translators(), u1, u2)
}

/// [`extract_matching`] for an arbitrary translator list (identity first).
pub fn extract_with(
    translators: Vec<PiecewiseMap>,
    u1: &FiniteSubset,
    u2: &FiniteSubset,
) -> Result<MatchingCertificate, HallViolation> {
    let mut table = TranslateTable::new(translators);
    let a = table.add_all(u1);
    let b = table.add_all(u2);
    match table.matching(&a, &b) {
        IdMatching::Perfect(edges) => Ok(table.certificate(&a, &b, &edges)),
        IdMatching::Violation { vertices, neighbourhood } => Err(table.violation(&vertices, &neighbourhood)),
    }
}

/// Recomputes certificates against a fixed translator list, remembering
/// which (translator, source, target) triples have already been checked.
#[derive(Clone, Debug)]
pub struct Auditor {
    translators: Vec<PiecewiseMap>,
    structural: Vec<CertificateViolation>,
    /// Products by source map, one slot per translator.
    checked: HashMap<PiecewiseMap, Vec<Option<PiecewiseMap>>>,
}

impl Auditor {
    pub fn new(translators: Vec<PiecewiseMap>) -> Self {
        let mut structural = Vec::new();
        if !translators.first().is_some_and(PiecewiseMap::is_identity) {
            structural.push(CertificateViolation::FirstTranslatorNotIdentity);
        }
        if first_duplicate(&translators).is_some() {
            structural.push(CertificateViolation::TranslatorsNotDistinct);
        }
        Auditor {
            translators,
            structural,
            checked: HashMap::new(),
        }
    }

    pub fn translators(&self) -> &[PiecewiseMap] {
        &self.translators
    }

    fn product(&mut self, t: usize, g: &PiecewiseMap) -> &PiecewiseMap {
        if !self.checked.contains_key(g) {
            self.checked.insert(g.clone(), alloc::vec![None; self.translators.len()]);
        }
        let row = self.checked.get_mut(g).expect("just inserted");
        row[t].get_or_insert_with(|| g.then(&self.translators[t]))
    }

    /// Recomputes every row of `table` and checks that its elements are
    /// pairwise distinct as maps.
    pub fn verify_table(&self, table: &TranslateTable) -> Result<VerifiedRows, TableFault> {
        if !self.structural.is_empty() {
            return Err(TableFault::Structural(self.structural.clone()));
        }
        if table.translators != self.translators {
            return Err(TableFault::Structural(alloc::vec![CertificateViolation::TranslatorsNotDistinct]));
        }
        let elements = table.elements();
        if let Some((i, j)) = first_duplicate(elements) {
            return Err(TableFault::DuplicateElement(i, j));
        }
        let mut rows = alloc::vec![None; elements.len()];
        for (id, row) in table.rows.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            for (t, s) in self.translators.iter().enumerate() {
                let ok = row.get(t).is_some_and(|&x| x < elements.len() && elements[id].then(s) == elements[x]);
                if !ok {
                    return Err(TableFault::WrongRow { id, translator: t });
                }
            }
            rows[id] = Some(row.clone());
        }
        Ok(VerifiedRows {
            translators: self.translators.len(),
            rows,
        })
    }

    /// [`Auditor::audit`] against verified rows: products are row lookups
    /// and distinct ids are distinct maps. Sources without a row are
    /// reported as bad indices.
    pub fn audit_ids(
        &self,
        rows: &VerifiedRows,
        u1: &[usize],
        u2: &[usize],
        edges: &[Edge],
    ) -> Result<(), Vec<CertificateViolation>> {
        let mut bad = self.structural.clone();
        let expected = u1.len() + u2.len();
        if edges.len() != expected {
            bad.push(CertificateViolation::WrongEdgeCount {
                expected,
                found: edges.len(),
            });
        }
        let left = u1.iter().map(|&g| (1u8, g)).chain(u2.iter().map(|&g| (2u8, g)));
        let n = rows.rows.len();
        let mut targets: Vec<(usize, usize)> = Vec::new();
        for (k, (e, (color, g))) in edges.iter().zip(left).enumerate() {
            let row = match rows.rows.get(e.source) {
                Some(Some(r)) if e.target < n && g < n && e.translator < rows.translators => r,
                _ => {
                    bad.push(CertificateViolation::BadIndex { edge: k });
                    continue;
                }
            };
            if e.color != color || e.source != g {
                bad.push(CertificateViolation::WrongSource { edge: k });
            }
            if !(e.color == 1 || (e.color == 2 && e.translator >= 1)) {
                bad.push(CertificateViolation::ColorSet { edge: k });
            }
            if row[e.translator] != e.target {
                bad.push(CertificateViolation::WrongProduct { edge: k });
            }
            targets.push((e.target, k));
        }
        targets.sort_unstable();
        for w in targets.windows(2) {
            if w[0].0 == w[1].0 {
                bad.push(CertificateViolation::DuplicateTarget {
                    first: w[0].1.min(w[1].1),
                    second: w[0].1.max(w[1].1),
                });
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(bad)
        }
    }

    /// Every clause of a certificate over `elements`.
    pub fn audit(
        &mut self,
        elements: &[PiecewiseMap],
        u1: &[usize],
        u2: &[usize],
        edges: &[Edge],
    ) -> Result<(), Vec<CertificateViolation>> {
        let mut bad = self.structural.clone();
        let expected = u1.len() + u2.len();
        if edges.len() != expected {
            bad.push(CertificateViolation::WrongEdgeCount {
                expected,
                found: edges.len(),
            });
        }
        let left = u1.iter().map(|&g| (1u8, g)).chain(u2.iter().map(|&g| (2u8, g)));
        let n = elements.len();
        let mut ok_edges: Vec<usize> = Vec::new();
        for (k, (e, (color, g))) in edges.iter().zip(left).enumerate() {
            if e.source >= n || e.target >= n || g >= n || e.translator >= self.translators.len() {
                bad.push(CertificateViolation::BadIndex { edge: k });
                continue;
            }
            if e.color != color || e.source != g {
                bad.push(CertificateViolation::WrongSource { edge: k });
            }
            if !(e.color == 1 || (e.color == 2 && e.translator >= 1)) {
                bad.push(CertificateViolation::ColorSet { edge: k });
            }
            if self.product(e.translator, &elements[e.source]) != &elements[e.target] {
                bad.push(CertificateViolation::WrongProduct { edge: k });
            }
            ok_edges.push(k);
        }
        // distinct targets, compared as maps
        for (x, &i) in ok_edges.iter().enumerate() {
            for &j in &ok_edges[x + 1..] {
                let (ti, tj) = (edges[i].target, edges[j].target);
                if ti == tj || elements[ti] == elements[tj] {
                    bad.push(CertificateViolation::DuplicateTarget { first: i, second: j });
                }
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(bad)
        }
    }
}

/// Translate rows of a table, each recomputed by an [`Auditor`] from the
/// maps themselves, over an element list known to be pairwise distinct.
/// Certificates over such a table can be audited on ids alone.
#[derive(Clone, Debug)]
pub struct VerifiedRows {
    translators: usize,
    /// `None` for elements the table holds only as translates.
    rows: Vec<Option<Vec<usize>>>,
}

/// Why a table failed verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableFault {
    Structural(Vec<CertificateViolation>),
    /// Elements `0` and `1` are the same map.
    DuplicateElement(usize, usize),
    /// Row entry `translator` of element `id` names the wrong map.
    WrongRow { id: usize, translator: usize },
}

impl fmt::Display for TableFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableFault::Structural(v) => {
                f.write_str("translator list rejected:")?;
                for x in v {
                    write!(f, " {};", x)?;
                }
                Ok(())
            }
            TableFault::DuplicateElement(i, j) => write!(f, "elements {} and {} coincide", i, j),
            TableFault::WrongRow { id, translator } => {
                write!(f, "translate {} of element {} is wrong", translator, id)
            }
        }
    }
}

impl VerifiedRows {
    pub fn has_row(&self, id: usize) -> bool {
        self.rows.get(id).is_some_and(Option::is_some)
    }
}

pub fn validate_certificate(cert: &MatchingCertificate) -> Result<(), Vec<CertificateViolation>> {
    Auditor::new(cert.translators.clone()).audit(&cert.elements, &cert.u1, &cert.u2, &cert.edges)
}
