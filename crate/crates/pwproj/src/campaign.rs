//! The marriage campaign: build the translating set, then check the
//! 2-marriage inequality, extract a matching and re-audit it on every
//! subset of the plan.
//!
//! All group elements are interned once in a [`TranslateTable`], so subset
//! checks work on integer ids. Before any subset is checked an [`Auditor`]
//! recomputes every translate row from the maps themselves and confirms
//! the interned maps are pairwise distinct; certificates are then audited
//! on ids against those verified rows. The example certificate is also
//! audited in full, map by map.

use std::time::Instant;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use pwproj_core::builtin::thompson_f;
use pwproj_core::marriage::{
    ball, validate_certificate, Auditor, IdMatching, MatchingCertificate, TableFault, TranslateTable, VerifiedRows,
};
use pwproj_core::piecewise::PiecewiseMap;
use pwproj_core::pipeline::{construct, Construction, PipelineConfig};

use crate::config::{resolved, Resolved};
use crate::format::to_value;
use crate::sample;

/// Refuse plans whose exhaustive phase would not fit in memory.
pub const MAX_EXHAUSTIVE: u128 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Exhaustive,
    Random,
    Egs,
}

/// One checked instance. Members are positions in the pool; for the
/// single-subset phases the matching is for u₁ = u₂ = u.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetRecord {
    pub id: usize,
    pub phase: Phase,
    pub u1: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u2: Option<Vec<usize>>,
    pub size: usize,
    pub lhs: usize,
    pub rhs: usize,
    pub pass: bool,
    /// The extracted matching passed the independent audit.
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity_holds: Option<bool>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseCount {
    pub checked: usize,
    pub passed: usize,
    pub certified: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Aggregate {
    pub exhaustive: PhaseCount,
    pub random: PhaseCount,
    pub egs: PhaseCount,
    pub failures: usize,
}

impl Aggregate {
    pub fn recount(records: &[SubsetRecord]) -> Self {
        let mut a = Aggregate::default();
        for r in records {
            let c = match r.phase {
                Phase::Exhaustive => &mut a.exhaustive,
                Phase::Random => &mut a.random,
                Phase::Egs => &mut a.egs,
            };
            c.checked += 1;
            c.passed += usize::from(r.pass);
            c.certified += usize::from(r.certified);
            a.failures += usize::from(!r.ok());
        }
        a
    }
}

impl SubsetRecord {
    pub fn ok(&self) -> bool {
        self.pass && self.certified && self.identity_holds != Some(false)
    }
}

/// A failed instance with whatever evidence was produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub id: usize,
    pub reason: String,
    /// Marriage report with witness, Hall violator, or audit findings.
    pub evidence: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: Resolved,
    /// Construction artifacts; absent when the build failed.
    pub distortion: Option<serde_json::Value>,
    pub words: Option<serde_json::Value>,
    pub tset: Option<serde_json::Value>,
    pub build_error: Option<String>,
    pub pool_size: usize,
    pub aggregate: Aggregate,
    pub failures: Vec<Failure>,
    #[serde(skip)]
    pub records: Vec<SubsetRecord>,
}

impl CampaignReport {
    pub fn all_pass(&self) -> bool {
        self.build_error.is_none() && self.failures.is_empty() && self.aggregate.failures == 0
    }
}

/// Wall-clock seconds per stage; kept apart from the report so that reports
/// stay byte-identical across runs.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Timing {
    pub stages: Vec<(String, f64)>,
}

impl Timing {
    fn lap(&mut self, name: &str, since: &mut Instant) {
        self.stages.push((name.to_string(), since.elapsed().as_secs_f64()));
        *since = Instant::now();
    }
}

pub struct CampaignOutput {
    pub report: CampaignReport,
    pub construction: Option<Construction>,
    /// Certificate of the largest certified instance.
    pub example: Option<MatchingCertificate>,
    pub timing: Timing,
}

#[derive(Clone, Debug)]
enum Instance {
    Single(Phase, Vec<usize>),
    Pair(Vec<usize>, Vec<usize>),
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// All subsets of {0..n} with at most k elements, by size then lexicographically.
fn small_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for size in 1..=k.min(n) {
        let mut c: Vec<usize> = (0..size).collect();
        loop {
            out.push(c.clone());
            let mut i = size;
            while i > 0 && c[i - 1] == n - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            c[i - 1] += 1;
            for j in i..size {
                c[j] = c[j - 1] + 1;
            }
        }
    }
    out
}

/// Generators of the pool: the translating set plus Thompson's F.
pub fn pool_generators(elements: &[PiecewiseMap]) -> Vec<PiecewiseMap> {
    let mut gens = elements.to_vec();
    gens.extend(thompson_f());
    gens
}

fn plan_instances(cfg: &PipelineConfig, pool: usize) -> Result<Vec<Instance>, String> {
    let plan = &cfg.plan;
    let mut out = Vec::new();
    if plan.exhaustive_max > 0 {
        let count: u128 = (0..=plan.exhaustive_max as u128).map(|k| binomial(pool as u128, k)).sum();
        if count > MAX_EXHAUSTIVE {
            return Err(format!(
                "exhaustive phase would check {count} subsets of a pool of {pool}; limit is {MAX_EXHAUSTIVE}"
            ));
        }
        out.extend(small_subsets(pool, plan.exhaustive_max).into_iter().map(|u| Instance::Single(Phase::Exhaustive, u)));
    }
    let mut rng = sample::rng(plan.seed);
    let max = plan.random_max.min(pool);
    for _ in 0..plan.random_count {
        let size = rng.random_range(1..=max.max(1)).min(pool);
        let mut u = sample(&mut rng, pool, size).into_vec();
        u.sort_unstable();
        out.push(Instance::Single(Phase::Random, u));
    }
    for _ in 0..plan.egs_count {
        let s1 = rng.random_range(0..=max);
        let mut u1 = sample(&mut rng, pool, s1).into_vec();
        // u₂ shares a random part of u₁ so that intersections are exercised
        let shared = rng.random_range(0..=s1);
        let fresh = rng.random_range(0..=max - shared.min(max));
        let mut u2: Vec<usize> = u1[..shared].to_vec();
        for g in sample(&mut rng, pool, fresh.min(pool)) {
            if !u2.contains(&g) {
                u2.push(g);
            }
        }
        u1.sort_unstable();
        u2.sort_unstable();
        out.push(Instance::Pair(u1, u2));
    }
    Ok(out)
}

struct Checked {
    record: SubsetRecord,
    failure: Option<Failure>,
}

fn check_instance(
    table: &TranslateTable,
    ids: &[usize],
    auditor: &Auditor,
    rows: &Result<VerifiedRows, TableFault>,
    id: usize,
    inst: &Instance,
) -> Checked {
    let (phase, u1, u2) = match inst {
        Instance::Single(p, u) => (*p, u, None),
        Instance::Pair(a, b) => (Phase::Egs, a, Some(b)),
    };
    let a: Vec<usize> = u1.iter().map(|&k| ids[k]).collect();
    let b: Vec<usize> = u2.map_or_else(|| a.clone(), |u| u.iter().map(|&k| ids[k]).collect());
    let (lhs, rhs, pass, identity, mut evidence) = match u2 {
        None => {
            let r = table.marriage(&a);
            let ev = (!r.pass).then(|| to_value(&r));
            (r.lhs, r.rhs, r.pass, None, ev)
        }
        Some(_) => {
            let r = table.egs(&a, &b);
            let ev = (!r.pass).then(|| to_value(&r));
            (r.lhs, r.rhs, r.pass, Some(r.identity_holds), ev)
        }
    };
    let mut reason = (!pass).then(|| "marriage inequality fails".to_string());
    let certified = match table.matching(&a, &b) {
        IdMatching::Perfect(_) if rows.is_err() => {
            reason.get_or_insert_with(|| "translate table failed verification".into());
            false
        }
        IdMatching::Perfect(edges) => match auditor.audit_ids(rows.as_ref().expect("checked"), &a, &b, &edges) {
            Ok(()) => true,
            Err(v) => {
                reason.get_or_insert_with(|| "certificate rejected by audit".into());
                evidence.get_or_insert_with(|| {
                    serde_json::json!({
                        "violations": v.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                        "certificate": to_value(&table.certificate(&a, &b, &edges)),
                    })
                });
                false
            }
        },
        IdMatching::Violation { vertices, neighbourhood } => {
            reason.get_or_insert_with(|| "no perfect matching".into());
            evidence.get_or_insert_with(|| to_value(&table.violation(&vertices, &neighbourhood)));
            false
        }
    };
    let record = SubsetRecord {
        id,
        phase,
        u1: u1.clone(),
        u2: u2.cloned(),
        size: u1.len() + u2.map_or(0, Vec::len),
        lhs,
        rhs,
        pass,
        certified,
        identity_holds: identity,
    };
    let failure = (!record.ok()).then(|| Failure {
        id,
        reason: reason.unwrap_or_else(|| "set identity fails".into()),
        evidence: evidence.unwrap_or(serde_json::Value::Null),
    });
    Checked { record, failure }
}

/// Runs on the current rayon pool; `--jobs` is applied by the caller.
pub fn run_campaign(cfg: &PipelineConfig) -> CampaignOutput {
    let mut timing = Timing::default();
    let mut clock = Instant::now();
    let mut report = CampaignReport {
        config: resolved(cfg),
        distortion: None,
        words: None,
        tset: None,
        build_error: None,
        pool_size: 0,
        aggregate: Aggregate::default(),
        failures: Vec::new(),
        records: Vec::new(),
    };
    let c = match construct(cfg) {
        Ok(c) => c,
        Err(e) => {
            report.build_error = Some(e.to_string());
            return CampaignOutput {
                report,
                construction: None,
                example: None,
                timing,
            };
        }
    };
    timing.lap("construction", &mut clock);
    report.distortion = Some(to_value(&c.distortion));
    report.words = Some(to_value(&c.words));
    report.tset = Some(to_value(&c.set));
    if cfg.plan.is_empty() {
        return CampaignOutput {
            report,
            construction: Some(c),
            example: None,
            timing,
        };
    }

    let pool = ball(&pool_generators(&c.set.elements), cfg.plan.radius);
    report.pool_size = pool.len();
    timing.lap("pool", &mut clock);
    let mut table = TranslateTable::for_set(&c.set);
    let ids: Vec<usize> = pool.elements().iter().map(|g| table.add(g.clone())).collect();
    timing.lap("translates", &mut clock);

    let instances = match plan_instances(cfg, pool.len()) {
        Ok(v) => v,
        Err(e) => {
            report.build_error = Some(e);
            return CampaignOutput {
                report,
                construction: Some(c),
                example: None,
                timing,
            };
        }
    };
    let auditor = Auditor::new(c.set.translators());
    let rows = auditor.verify_table(&table);
    if let Err(e) = &rows {
        report.build_error = Some(format!("translate table: {e}"));
    }
    timing.lap("verify", &mut clock);
    let checked: Vec<Checked> = instances
        .par_iter()
        .enumerate()
        .map(|(id, inst)| check_instance(&table, &ids, &auditor, &rows, id, inst))
        .collect();
    timing.lap("checks", &mut clock);

    for ch in checked {
        report.failures.extend(ch.failure);
        report.records.push(ch.record);
    }
    report.aggregate = Aggregate::recount(&report.records);
    let best = report
        .records
        .iter()
        .filter(|r| r.certified)
        .max_by_key(|r| (r.size, std::cmp::Reverse(r.id)));
    let example = best.and_then(|r| {
        let a: Vec<usize> = r.u1.iter().map(|&k| ids[k]).collect();
        let b: Vec<usize> = r.u2.as_ref().map_or_else(|| a.clone(), |u| u.iter().map(|&k| ids[k]).collect());
        match table.matching(&a, &b) {
            IdMatching::Perfect(edges) => Some((r.id, table.certificate(&a, &b, &edges))),
            IdMatching::Violation { .. } => None,
        }
    });
    let example = example.and_then(|(id, cert)| match validate_certificate(&cert) {
        Ok(()) => Some(cert),
        Err(v) => {
            report.failures.push(Failure {
                id,
                reason: "example certificate rejected by full audit".into(),
                evidence: serde_json::json!({
                    "violations": v.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                }),
            });
            None
        }
    });
    CampaignOutput {
        report,
        construction: Some(c),
        example,
        timing,
    }
}
