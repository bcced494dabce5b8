//! Reduced words in a free group ⟨a, b⟩ and their evaluation in PSL₂.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::builtin::{flanks, SpliceError};
use crate::number::{rat, QSqrt2, Rational};
use crate::projective::{ClosedInterval, Mat2};

/// Ordered a < A < b < B, with A = a⁻¹ and B = b⁻¹.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'A' => Some(Letter::AInv),
            'b' => Some(Letter::B),
            'B' => Some(Letter::BInv),
            _ => None,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Letter>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadLetter {
    pub position: usize,
    pub found: char,
}

impl fmt::Display for BadLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unexpected {:?} at column {}; words use a, A, b, B", self.found, self.position + 1)
    }
}

impl core::error::Error for BadLetter {}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::reduce(self.0.iter().chain(&other.0).copied())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn power(letter: Letter, n: usize) -> Word {
        Word(alloc::vec![letter; n])
    }

    /// xⁱ·w·x⁻ⁱ when that concatenation is already reduced.
    pub fn conjugate(x: Letter, i: usize, core: &Word) -> Option<Word> {
        let first = *core.0.first()?;
        let last = *core.0.last()?;
        if i > 0 && (first == x.inverse() || last == x) {
            return None;
        }
        let mut v = Vec::with_capacity(core.len() + 2 * i);
        v.extend(core::iter::repeat_n(x, i));
        v.extend_from_slice(&core.0);
        v.extend(core::iter::repeat_n(x.inverse(), i));
        Some(Word(v))
    }
}

impl FromStr for Word {
    type Err = BadLetter;

    /// Letters a, A, b, B; whitespace is ignored; the result is reduced.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut letters = Vec::with_capacity(s.len());
        for (position, c) in s.chars().enumerate() {
            if c.is_whitespace() {
                continue;
            }
            letters.push(Letter::from_char(c).ok_or(BadLetter { position, found: c })?);
        }
        Ok(Word::reduce(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({:?})", alloc::format!("{}", self))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorPair {
    pub name: String,
    pub a: Mat2,
    pub b: Mat2,
    pub provenance: String,
}

impl GeneratorPair {
    pub fn new(name: impl Into<String>, a: Mat2, b: Mat2, provenance: impl Into<String>) -> Self {
        GeneratorPair {
            name: name.into(),
            a,
            b,
            provenance: provenance.into(),
        }
    }

    /// Matrices of a, A, b, B in [`Letter`] order.
    pub fn letter_matrices(&self) -> [Mat2; 4] {
        [self.a.clone(), self.a.inverse(), self.b.clone(), self.b.inverse()]
    }

    pub fn eval(&self, w: &Word) -> Mat2 {
        let m = self.letter_matrices();
        w.letters()
            .iter()
            .fold(Mat2::identity(), |acc, l| acc.then(&m[l.index()]))
    }
}

fn upper(s: QSqrt2) -> Mat2 {
    Mat2::translation(s)
}

fn lower(t: QSqrt2) -> Mat2 {
    Mat2::lower(t)
}

/// a = U(s)·L(t), b = L(t)·U(s) as plain products, with U(s) = (1 s; 0 1)
/// and L(t) = (1 0; t 1).
fn twisted_pair(name: &str, s: QSqrt2, t: QSqrt2, provenance: &str) -> GeneratorPair {
    let (u, l) = (upper(s), lower(t));
    GeneratorPair::new(name, u.product(&l), l.product(&u), provenance)
}

/// Default pair. U(2⁻ᵏ) is the Γ-conjugate Γ⁻ᵏ·T·Γᵏ of T = U(1) and
/// L(t) = S·U(−t)·S⁻¹, so both generators lie in ⟨PSL₂(ℤ), Γ⟩; they are
/// within 2⁻⁹ of the identity and hyperbolic.
pub fn gamma_dyadic() -> GeneratorPair {
    twisted_pair(
        "gamma-dyadic",
        QSqrt2::from_rational(rat(1, 512)),
        QSqrt2::from_rational(rat(1, 4096)),
        "a = U(2^-9)*L(2^-12), b = L(2^-12)*U(2^-9); U(2^-k) = Gamma^-k T Gamma^k, L(t) = S U(-t) S^-1",
    )
}

/// Like [`gamma_dyadic`] with an irrational upper entry √2/1024, giving
/// entries in ℤ[1/√2] with nonzero √2 parts.
pub fn sqrt2_parabolic() -> GeneratorPair {
    twisted_pair(
        "sqrt2-parabolic",
        QSqrt2::new(Rational::from_integer(0.into()), rat(1, 1024)),
        QSqrt2::from_rational(rat(1, 4096)),
        "a = U(sqrt2/1024)*L(2^-12), b = L(2^-12)*U(sqrt2/1024); U(sqrt2 2^-k) = Gamma^-(2k+1) T Gamma^(2k+1)",
    )
}

/// The classical free (and discrete) pair; near-identity words do not exist.
pub fn sanov() -> GeneratorPair {
    GeneratorPair::new(
        "sanov",
        Mat2::from_ints(1, 2, 0, 1).expect("det 1"),
        Mat2::from_ints(1, 0, 2, 1).expect("det 1"),
        "a = (1 2; 0 1), b = (1 0; 2 1): Sanov's free subgroup of PSL2(Z), discrete",
    )
}

pub fn stock_pairs() -> Vec<GeneratorPair> {
    alloc::vec![gamma_dyadic(), sqrt2_parabolic(), sanov()]
}

pub fn stock_pair(name: &str) -> Option<GeneratorPair> {
    stock_pairs().into_iter().find(|p| p.name == name)
}

/// Depth-first walk over reduced words of length ≤ `max_len` in
/// lexicographic order, carrying prefix evaluations. `visit` returns the
/// depth limit to continue with (allowing pruning).
fn walk(pair: &GeneratorPair, max_len: usize, mut visit: impl FnMut(&[Letter], &Mat2) -> usize) {
    let m = pair.letter_matrices();
    let mut limit = max_len;
    let mut word: Vec<Letter> = Vec::new();
    // stack of (evaluation of prefix, next letter index to try)
    let mut stack: Vec<(Mat2, usize)> = alloc::vec![(Mat2::identity(), 0)];
    limit = limit.min(visit(&word, &stack[0].0));
    while let Some(top) = stack.last_mut() {
        let depth = word.len();
        if depth >= limit || top.1 >= 4 {
            stack.pop();
            word.pop();
            continue;
        }
        let l = Letter::ALL[top.1];
        top.1 += 1;
        if word.last() == Some(&l.inverse()) {
            continue;
        }
        let next = top.0.then(&m[l.index()]);
        word.push(l);
        limit = limit.min(visit(&word, &next));
        stack.push((next, 0));
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoRelationCert {
    pub pair: String,
    pub max_len: usize,
    /// Nonempty reduced words evaluated.
    pub words_checked: u64,
}

/// Exhaustively checks that no nonempty reduced word of length ≤ `max_len`
/// evaluates to the identity. On failure returns the shortest such word,
/// lexicographically first among those.
pub fn certify_no_relation(pair: &GeneratorPair, max_len: usize) -> Result<NoRelationCert, Word> {
    let mut best: Option<Word> = None;
    let mut count = 0u64;
    walk(pair, max_len, |w, m| {
        if w.is_empty() {
            return usize::MAX;
        }
        count += 1;
        if m.is_identity() {
            best = Some(Word(w.to_vec()));
            // only strictly shorter words can improve on this one
            return w.len() - 1;
        }
        usize::MAX
    });
    match best {
        Some(w) => Err(w),
        None => Ok(NoRelationCert {
            pair: pair.name.clone(),
            max_len,
            words_checked: count,
        }),
    }
}

/// Reduced words of length ≤ `max_len` with dist(eval, 1) < δ, closest first
/// (then shortlex). The empty word is always included.
pub fn near_identity_scan(pair: &GeneratorPair, delta: &Rational, max_len: usize) -> Vec<(Word, QSqrt2)> {
    let mut out = Vec::new();
    walk(pair, max_len, |w, m| {
        let d = m.dist_to_identity();
        if d < *delta {
            out.push((Word(w.to_vec()), d));
        }
        usize::MAX
    });
    out.sort_by(|x, y| {
        x.1.cmp(&y.1)
            .then(x.0.len().cmp(&y.0.len()))
            .then(x.0.cmp(&y.0))
    });
    out
}

/// Why candidates were rejected during the translating-word search.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub cores_examined: u64,
    /// Cores whose conjugate xⁱ·w·x⁻ⁱ is not reduced.
    pub not_reduced: u64,
    pub candidates: u64,
    pub too_far: u64,
    pub pole_in_interval: u64,
    pub fixes_infinity: u64,
    pub not_hyperbolic: u64,
    pub not_flanking: u64,
    pub duplicate: u64,
}

impl fmt::Display for SearchStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cores {}, non-reduced {}, candidates {}, dist>=delta {}, pole in I {}, fixes inf {}, not hyperbolic {}, not flanking {}, duplicate {}",
            self.cores_examined,
            self.not_reduced,
            self.candidates,
            self.too_far,
            self.pole_in_interval,
            self.fixes_infinity,
            self.not_hyperbolic,
            self.not_flanking,
            self.duplicate
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslatingWords {
    /// g₁..g₆ (aⁱ w a⁻ⁱ) then h₁..h₆ (bⁱ w′ b⁻ⁱ).
    pub words: Vec<Word>,
    pub cores: Vec<Word>,
    pub matrices: Vec<Mat2>,
    pub delta: Rational,
    pub stats: SearchStats,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchExhausted {
    /// 'g' or 'h'.
    pub family: char,
    pub found: usize,
    pub max_core_len: usize,
    pub stats: SearchStats,
}

impl fmt::Display for SearchExhausted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "word search exhausted at core length {}: found {}/6 {}-words; {}",
            self.max_core_len, self.found, self.family, self.stats
        )
    }
}

impl core::error::Error for SearchExhausted {}

/// Reduced words of exactly `len` letters, lexicographic.
fn words_of_length(len: usize, mut f: impl FnMut(&[Letter]) -> bool) {
    if len == 0 {
        return;
    }
    let mut w: Vec<Letter> = Vec::with_capacity(len);
    let mut next: Vec<usize> = alloc::vec![0];
    while let Some(top) = next.last_mut() {
        if *top >= 4 {
            next.pop();
            w.pop();
            continue;
        }
        let l = Letter::ALL[*top];
        *top += 1;
        if w.last() == Some(&l.inverse()) {
            continue;
        }
        w.push(l);
        if w.len() == len {
            if !f(&w) {
                return;
            }
            w.pop();
        } else {
            next.push(0);
        }
    }
}

/// Checks one evaluated candidate against the word-set conditions.
pub fn candidate_ok(m: &Mat2, delta: &Rational, iv: &ClosedInterval) -> Result<(), Rejection> {
    if !m.within(delta) {
        return Err(Rejection::TooFar);
    }
    if let Some(p) = m.pole() {
        if iv.contains(&p) {
            return Err(Rejection::PoleInInterval);
        }
    }
    match flanks(m, iv) {
        Ok(()) => Ok(()),
        Err(SpliceError::FixesInfinity) => Err(Rejection::FixesInfinity),
        Err(SpliceError::NotHyperbolic) => Err(Rejection::NotHyperbolic),
        Err(SpliceError::NotFlanking) => Err(Rejection::NotFlanking),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rejection {
    TooFar,
    PoleInInterval,
    FixesInfinity,
    NotHyperbolic,
    NotFlanking,
}

/// Searches g₁..g₆ = aⁱ·w·a⁻ⁱ and h₁..h₆ = bⁱ·w′·b⁻ⁱ, each within δ of the
/// identity, with pole outside I and hyperbolic with finite fixed points
/// flanking I, all twelve distinct. Cores are tried by length, then
/// lexicographically, then i ascending; each slot takes the first
/// candidate that passes.
pub fn find_translating_words(
    pair: &GeneratorPair,
    delta: &Rational,
    iv: &ClosedInterval,
    max_core_len: usize,
) -> Result<TranslatingWords, SearchExhausted> {
    let lm = pair.letter_matrices();
    let mut stats = SearchStats::default();
    let mut words = Vec::with_capacity(12);
    let mut cores = Vec::with_capacity(12);
    let mut matrices: Vec<Mat2> = Vec::with_capacity(12);
    for (family, x) in [('g', Letter::A), ('h', Letter::B)] {
        // xⁱ and x⁻ⁱ for i = 1..=6
        let mut pow = alloc::vec![(Mat2::identity(), Mat2::identity())];
        for i in 1..=6 {
            let (p, q): &(Mat2, Mat2) = &pow[i - 1];
            pow.push((p.then(&lm[x.index()]), q.then(&lm[x.inverse().index()])));
        }
        let mut slots: [Option<(Word, Word, Mat2)>; 6] = Default::default();
        'outer: for len in 1..=max_core_len {
            let mut done = false;
            words_of_length(len, |core| {
                stats.cores_examined += 1;
                let core_word = Word(core.to_vec());
                let c = pair.eval(&core_word);
                for i in 1..=6 {
                    if slots[i - 1].is_some() {
                        continue;
                    }
                    let Some(w) = Word::conjugate(x, i, &core_word) else {
                        stats.not_reduced += 1;
                        continue;
                    };
                    stats.candidates += 1;
                    // xⁱ, then w, then x⁻ⁱ
                    let m = pow[i].0.then(&c).then(&pow[i].1);
                    match candidate_ok(&m, delta, iv) {
                        Err(Rejection::TooFar) => stats.too_far += 1,
                        Err(Rejection::PoleInInterval) => stats.pole_in_interval += 1,
                        Err(Rejection::FixesInfinity) => stats.fixes_infinity += 1,
                        Err(Rejection::NotHyperbolic) => stats.not_hyperbolic += 1,
                        Err(Rejection::NotFlanking) => stats.not_flanking += 1,
                        Ok(()) => {
                            let dup = matrices.contains(&m)
                                || slots.iter().flatten().any(|(_, _, q)| q == &m);
                            if dup {
                                stats.duplicate += 1;
                            } else {
                                slots[i - 1] = Some((w, core_word.clone(), m));
                            }
                        }
                    }
                }
                done = slots.iter().all(Option::is_some);
                !done
            });
            if done {
                break 'outer;
            }
        }
        let found = slots.iter().filter(|s| s.is_some()).count();
        if found < 6 {
            return Err(SearchExhausted {
                family,
                found,
                max_core_len,
                stats,
            });
        }
        for (w, core, m) in slots.into_iter().flatten() {
            words.push(w);
            cores.push(core);
            matrices.push(m);
        }
    }
    Ok(TranslatingWords {
        words,
        cores,
        matrices,
        delta: delta.clone(),
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::int;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn reduction() {
        assert!(w("aA").is_empty());
        assert!(w("abBA").is_empty());
        assert_eq!(w("aabB a"), w("aaa"));
        assert_eq!(w("aaa").len(), 3);
        assert_eq!(w("ab").inverse(), w("BA"));
        assert!("abc".parse::<Word>().is_err());
        assert_eq!(Word::reduce(w("ab").letters().iter().copied()), w("ab"));
    }

    #[test]
    fn evaluation() {
        let p = sanov();
        assert!(p.eval(&Word::empty()).is_identity());
        assert_eq!(p.eval(&w("a")), p.a);
        // "ab" applies a then b
        assert_eq!(p.eval(&w("ab")), Mat2::from_ints(1, 2, 2, 5).unwrap());
        assert_eq!(p.a.product(&p.b), Mat2::from_ints(5, 2, 2, 1).unwrap());
        let (u, v) = (w("abA"), w("Bab"));
        assert_eq!(p.eval(&u.concat(&v)), p.eval(&u).then(&p.eval(&v)));
    }

    #[test]
    fn conjugate_form() {
        let core = w("b");
        assert_eq!(Word::conjugate(Letter::A, 2, &core), Some(w("aabAA")));
        assert_eq!(Word::conjugate(Letter::A, 1, &w("Ab")), None);
        assert_eq!(Word::conjugate(Letter::A, 1, &w("ba")), None);
    }

    #[test]
    fn sabotaged_pairs() {
        let a = sanov().a;
        let same = GeneratorPair::new("same", a.clone(), a.clone(), "");
        assert_eq!(certify_no_relation(&same, 6), Err(w("aB")));
        let square = GeneratorPair::new("square", a.clone(), a.product(&a), "");
        assert_eq!(certify_no_relation(&square, 6), Err(w("aaB")));
    }

    #[test]
    fn sanov_is_free_to_length_six() {
        let c = certify_no_relation(&sanov(), 6).unwrap();
        // 4·3^(k-1) words of length k
        assert_eq!(c.words_checked, (1..=6).map(|k| 4 * 3u64.pow(k - 1)).sum::<u64>());
    }

    #[test]
    fn near_identity() {
        let found = near_identity_scan(&sanov(), &rat(1, 2), 5);
        assert_eq!(found, alloc::vec![(Word::empty(), QSqrt2::from_int(0))]);
        let found = near_identity_scan(&gamma_dyadic(), &rat(1, 100), 2);
        assert_eq!(found.len(), 1 + 4 + 12);
        assert!(found.windows(2).all(|p| p[0].1 <= p[1].1));
    }

    #[test]
    fn default_pair_words() {
        let iv = ClosedInterval::unit();
        let tw = find_translating_words(&gamma_dyadic(), &rat(1, 394), &iv, 4).unwrap();
        assert_eq!(tw.words.len(), 12);
        assert_eq!(tw.words[0], w("abA"));
        assert_eq!(tw.words[6], w("baB"));
        for (word, m) in tw.words.iter().zip(&tw.matrices) {
            assert_eq!(&gamma_dyadic().eval(word), m);
            assert!(candidate_ok(m, &rat(1, 394), &iv).is_ok());
        }
        for i in 0..12 {
            for j in 0..i {
                assert_ne!(tw.matrices[i], tw.matrices[j]);
            }
        }
    }

    #[test]
    fn search_failures() {
        let iv = ClosedInterval::unit();
        let e = find_translating_words(&gamma_dyadic(), &rat(1, 394), &iv, 0).unwrap_err();
        assert_eq!(e.found, 0);
        assert_eq!(e.family, 'g');
        let e = find_translating_words(&sanov(), &rat(1, 394), &iv, 3).unwrap_err();
        assert_eq!(e.stats.too_far, e.stats.candidates);
        // a generous δ accepts the first hyperbolic flanking conjugates
        let big = find_translating_words(&sanov(), &int(100), &iv, 3);
        if let Ok(tw) = big {
            assert!(tw.words[0].len() >= 3);
        }
    }
}
