//! Interval and ε → certified δ → twelve words → lifted translating set.

use core::fmt;

use num_traits::{One, Signed};

use crate::builtin::{splice_lift, SpliceError};
use crate::distortion::{certify_delta, DistortionCert, DistortionError};
use crate::marriage::{TranslatingSet, TsetError};
use crate::number::Rational;
use crate::piecewise::PiecewiseMap;
use crate::pigeonhole::{lemma_delta, lemma_epsilon};
use crate::projective::ClosedInterval;
use crate::word::{find_translating_words, gamma_dyadic, GeneratorPair, SearchExhausted, TranslatingWords, Word};

/// What the marriage campaign checks after the set is built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignPlan {
    /// Radius of the ball over T̃ ∪ {Thompson generators} that subsets are drawn from.
    pub radius: usize,
    /// Every subset of the ball with at most this many elements.
    pub exhaustive_max: usize,
    pub random_count: usize,
    pub random_max: usize,
    /// Random (u₁, u₂) pairs for the EGS identity.
    pub egs_count: usize,
    pub seed: u64,
}

impl CampaignPlan {
    pub fn empty() -> Self {
        CampaignPlan {
            radius: 0,
            exhaustive_max: 0,
            random_count: 0,
            random_max: 0,
            egs_count: 0,
            seed: 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.exhaustive_max == 0 && self.random_count == 0 && self.egs_count == 0
    }
}

impl Default for CampaignPlan {
    fn default() -> Self {
        CampaignPlan {
            radius: 2,
            exhaustive_max: 2,
            random_count: 10_000,
            random_max: 8,
            egs_count: 1_000,
            seed: 7,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub interval: ClosedInterval,
    pub epsilon: Rational,
    pub pair: GeneratorPair,
    pub max_core_len: usize,
    pub plan: CampaignPlan,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            interval: ClosedInterval::unit(),
            epsilon: lemma_epsilon(),
            pair: gamma_dyadic(),
            max_core_len: 12,
            plan: CampaignPlan::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildError {
    Distortion(DistortionError),
    Exhausted(SearchExhausted),
    Lift { index: usize, word: Word, error: SpliceError },
    Invariant(TsetError),
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::Distortion(e) => write!(f, "delta: {}", e),
            BuildError::Exhausted(e) => write!(f, "{}", e),
            BuildError::Lift { index, word, error } => write!(f, "lifting word {} ({}): {}", index, word, error),
            BuildError::Invariant(e) => write!(f, "translating set invariant: {}", e),
        }
    }
}

impl core::error::Error for BuildError {}

/// Every piece of `elem` meeting the interior of I equals the word's matrix.
pub fn verify_agreement(elem: &PiecewiseMap, w: &Word, gens: &GeneratorPair, iv: &ClosedInterval) -> bool {
    elem.agrees_on(iv, &gens.eval(w))
}

/// Every stage artifact of a successful build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub distortion: DistortionCert,
    pub words: TranslatingWords,
    pub set: TranslatingSet,
}

pub fn construct(cfg: &PipelineConfig) -> Result<Construction, BuildError> {
    if !cfg.epsilon.is_positive() || cfg.epsilon >= Rational::one() {
        return Err(BuildError::Distortion(DistortionError::EpsilonOutOfRange(cfg.epsilon.clone())));
    }
    let delta = lemma_delta(&cfg.interval, &cfg.epsilon).map_err(BuildError::Distortion)?;
    let distortion = certify_delta(&cfg.interval, &cfg.epsilon, &delta).map_err(BuildError::Distortion)?;
    let found =
        find_translating_words(&cfg.pair, &delta, &cfg.interval, cfg.max_core_len).map_err(BuildError::Exhausted)?;
    let mut elements = alloc::vec::Vec::with_capacity(found.words.len());
    for (index, (m, w)) in found.matrices.iter().zip(&found.words).enumerate() {
        let g = splice_lift(m, &cfg.interval).map_err(|error| BuildError::Lift {
            index,
            word: w.clone(),
            error,
        })?;
        elements.push(g);
    }
    let set = TranslatingSet {
        elements,
        words: found.words.clone(),
        interval: cfg.interval.clone(),
        delta,
        epsilon: cfg.epsilon.clone(),
        pair: cfg.pair.clone(),
    };
    set.check().map_err(BuildError::Invariant)?;
    Ok(Construction {
        distortion,
        words: found,
        set,
    })
}

pub fn build_translating_set(cfg: &PipelineConfig) -> Result<TranslatingSet, BuildError> {
    construct(cfg).map(|c| c.set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use crate::number::rat;
    use crate::marriage::{check_2marriage, FiniteSubset, PIECE_COUNT};
    use crate::word::sanov;

    #[test]
    fn default_build() {
        let t = build_translating_set(&PipelineConfig::default()).unwrap();
        assert_eq!(t.elements.len(), 12);
        assert_eq!(t.translators().len() + t.elements.len(), PIECE_COUNT);
        assert_eq!(t.delta, rat(1, 394));
        assert_eq!(t.words[0].to_string(), "abA");
        assert_eq!(t.words[6].to_string(), "baB");
        for (g, w) in t.elements.iter().zip(&t.words) {
            assert!(verify_agreement(g, w, &t.pair, &t.interval));
            assert!(verify_agreement(&g.normalize(), w, &t.pair, &t.interval));
            assert!(!verify_agreement(&PiecewiseMap::identity(), w, &t.pair, &t.interval));
        }
        let again = build_translating_set(&PipelineConfig::default()).unwrap();
        assert_eq!(t, again);
        let id = FiniteSubset::new(alloc::vec![PiecewiseMap::identity()]).unwrap();
        let r = check_2marriage(&t, &id);
        assert_eq!((r.lhs, r.rhs), (13, 2));
        assert!(check_2marriage(&t, &FiniteSubset::empty()).pass);
    }

    #[test]
    fn failures() {
        let cfg = PipelineConfig {
            max_core_len: 0,
            ..PipelineConfig::default()
        };
        assert!(matches!(build_translating_set(&cfg), Err(BuildError::Exhausted(_))));
        let cfg = PipelineConfig {
            pair: sanov(),
            max_core_len: 3,
            ..PipelineConfig::default()
        };
        match build_translating_set(&cfg) {
            Err(BuildError::Exhausted(e)) => assert_eq!(e.stats.candidates, e.stats.too_far),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn tampered_set_rejected() {
        let mut t = build_translating_set(&PipelineConfig::default()).unwrap();
        t.elements.swap(0, 1);
        assert_eq!(t.check(), Err(TsetError::Disagrees { index: 0 }));
        t.elements.swap(0, 1);
        t.elements[3] = t.elements[2].clone();
        assert!(matches!(t.check(), Err(TsetError::Duplicate { .. })));
    }
}
