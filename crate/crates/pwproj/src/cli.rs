//! Command-line entry points. Exit status: 0 when everything checked passes,
//! 1 for a verified negative finding, 2 for usage, input or config errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use pwproj_core::builtin::{thompson_relators, Builtin};
use pwproj_core::distortion::{certify_delta, distortion_delta, DistortionCert};
use pwproj_core::marriage::{
    ball, check_2marriage, extract_matching, validate_certificate, FiniteSubset, TranslatingSet,
};
use pwproj_core::measure::IntervalSet;
use pwproj_core::number::{format_rational, parse_rational, QSqrt2};
use pwproj_core::pigeonhole::{lemma_delta, pigeonhole_witness, PigeonholeError};
use pwproj_core::pipeline::{construct, BuildError, PipelineConfig};
use pwproj_core::projective::{ClosedInterval, Mat2, Ring};
use pwproj_core::word::{certify_no_relation, find_translating_words, GeneratorPair};

use crate::bundle::{config_json, Bundle};
use crate::campaign::{pool_generators, run_campaign};
use crate::config::{lookup_pair, parse_epsilon, parse_interval, read_pair_file, ConfigError, ConfigFile};
use crate::format::{
    from_json, to_json, ClosedIntervalRepr, Exported, IntervalSetRepr, Mat2Repr, SchemaError,
};
use crate::sample;
use crate::text::{format_words, parse_maps};

#[derive(Debug, Parser)]
#[command(name = "pwproj", version, about = "Exact checks for a 25-piece paradoxical decomposition of a piecewise projective group")]
pub struct Cli {
    /// Seed for every random choice (overrides the config's campaign seed).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Artifact directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct BuildArgs {
    /// TOML config; flags below override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Compact interval I as lo,hi.
    #[arg(long)]
    pub interval: Option<String>,
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Shipped generator pair.
    #[arg(long, conflicts_with = "pair_file")]
    pub pair: Option<String>,
    /// Generator pair as JSON.
    #[arg(long)]
    pub pair_file: Option<PathBuf>,
    #[arg(long)]
    pub max_core_len: Option<usize>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct PlanArgs {
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long)]
    pub exhaustive_max: Option<usize>,
    #[arg(long)]
    pub random_count: Option<usize>,
    #[arg(long)]
    pub random_max: Option<usize>,
    #[arg(long)]
    pub egs_count: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for the twelve conjugate words near the identity.
    FindWords(BuildArgs),
    /// Certified δ for an interval and ε, with the derivation constants.
    Distortion {
        #[arg(long, default_value = "0,1")]
        interval: String,
        #[arg(long, default_value = "1/48")]
        epsilon: String,
        /// Certify this δ instead of deriving one.
        #[arg(long)]
        delta: Option<String>,
    },
    /// Build and check the translating set.
    BuildSet(BuildArgs),
    /// Check |(T̃ ∪ {1})·u| ≥ 2|u| for one finite subset.
    CheckMarriage(SubsetArgs),
    /// Extract and validate an evenly colored 2-matching certificate.
    ExtractMatching {
        #[command(flatten)]
        subset: SubsetArgs,
        /// Second subset (defaults to the first).
        #[arg(long)]
        u2: Option<PathBuf>,
    },
    /// Fourfold-covered set L for six maps near the identity.
    Pigeonhole {
        /// Instance JSON {interval, j, maps}; a random valid instance otherwise.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Self-checks of a builtin generator library.
    VerifyRelations {
        /// thompson-f, gamma-conjugators or translation(r).
        #[arg(long)]
        group: String,
    },
    /// No nonempty reduced word of length ≤ L evaluates to the identity.
    NoRelation {
        #[arg(long, conflicts_with = "pair_file")]
        pair: Option<String>,
        #[arg(long)]
        pair_file: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
    },
    /// Build the set and run the marriage campaign.
    Campaign {
        #[command(flatten)]
        build: BuildArgs,
        #[command(flatten)]
        plan: PlanArgs,
    },
}

#[derive(Debug, Args, Clone)]
pub struct SubsetArgs {
    /// Translating set JSON; built from the default config when omitted.
    #[arg(long)]
    pub tset: Option<PathBuf>,
    /// Subset as JSON {elements: [...]} or one map per line in the clause grammar.
    #[arg(long)]
    pub subset: Option<PathBuf>,
    /// Use the ball of this radius over T̃ ∪ F-generators instead.
    #[arg(long, conflicts_with = "subset")]
    pub ball_radius: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Negative(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Negative(_) => 1,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        usage(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        usage(format!("writing artifacts: {e}"))
    }
}

type Outcome = Result<(), CliError>;

/// Parses and runs; the return value is the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    log::info!("invocation: {cli:?}");
    if let Some(j) = cli.jobs {
        // only fails if a global pool exists already, which then stays in use
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let bundle = Bundle::new(&cli.out);
    match &cli.command {
        Command::FindWords(b) => find_words(&resolve(b, None, cli.seed)?, &bundle),
        Command::Distortion { interval, epsilon, delta } => distortion(interval, epsilon, delta.as_deref(), &bundle),
        Command::BuildSet(b) => build_set(&resolve(b, None, cli.seed)?, &bundle),
        Command::CheckMarriage(s) => check_marriage(s),
        Command::ExtractMatching { subset, u2 } => extract(subset, u2.as_deref(), &bundle),
        Command::Pigeonhole { input } => pigeonhole(input.as_deref(), cli.seed.unwrap_or(7), &bundle),
        Command::VerifyRelations { group } => verify_relations(group),
        Command::NoRelation {
            pair,
            pair_file,
            max_len,
        } => no_relation(pair.as_deref(), pair_file.as_deref(), *max_len, &bundle),
        Command::Campaign { build, plan } => campaign(&resolve(build, Some(plan), cli.seed)?, &bundle),
    }
}

/// Config file, then flags, then `--seed`.
pub fn resolve(b: &BuildArgs, plan: Option<&PlanArgs>, seed: Option<u64>) -> Result<PipelineConfig, CliError> {
    let mut file = match &b.config {
        Some(p) => ConfigFile::read(p)?,
        None => ConfigFile::default(),
    };
    if b.interval.is_some() {
        file.interval.clone_from(&b.interval);
    }
    if b.epsilon.is_some() {
        file.epsilon.clone_from(&b.epsilon);
    }
    if b.pair.is_some() || b.pair_file.is_some() {
        file.pair.clone_from(&b.pair);
        file.pair_file.clone_from(&b.pair_file);
    }
    if b.max_core_len.is_some() {
        file.max_core_len = b.max_core_len;
    }
    let mut cfg = file.resolve()?;
    if let Some(p) = plan {
        let c = &mut cfg.plan;
        c.radius = p.radius.unwrap_or(c.radius);
        c.exhaustive_max = p.exhaustive_max.unwrap_or(c.exhaustive_max);
        c.random_count = p.random_count.unwrap_or(c.random_count);
        c.random_max = p.random_max.unwrap_or(c.random_max);
        c.egs_count = p.egs_count.unwrap_or(c.egs_count);
    }
    if let Some(s) = seed {
        cfg.plan.seed = s;
    }
    log::info!("resolved config: {}", crate::config::render(&cfg));
    Ok(cfg)
}

fn find_words(cfg: &PipelineConfig, bundle: &Bundle) -> Outcome {
    let delta = lemma_delta(&cfg.interval, &cfg.epsilon).map_err(usage)?;
    match find_translating_words(&cfg.pair, &delta, &cfg.interval, cfg.max_core_len) {
        Ok(found) => {
            let p = bundle.write_text("words", "words.txt", &format_words(&found.words))?;
            bundle.write("words", "search.json", &found)?;
            print!("{}", format_words(&found.words));
            println!("delta {}  {}", format_rational(&delta), found.stats);
            println!("wrote {}", p.display());
            Ok(())
        }
        Err(e) => {
            println!("search exhausted: {e}");
            println!("{}", e.stats);
            Err(CliError::Negative(format!("no complete word set for pair {}", cfg.pair.name)))
        }
    }
}

fn print_cert(c: &DistortionCert) {
    println!("interval         [{}, {}]", c.interval.lo(), c.interval.hi());
    println!("epsilon          {}", format_rational(&c.epsilon));
    println!("delta            {}", format_rational(&c.delta));
    println!("radius R         {}", format_rational(&c.radius));
    println!("k = (R+1)delta   {}", format_rational(&c.k));
    println!("(1+k)^-2         {}", format_rational(&c.derivative_lower));
    println!("(1-k)^-2         {}", format_rational(&c.derivative_upper));
}

fn distortion(interval: &str, epsilon: &str, delta: Option<&str>, bundle: &Bundle) -> Outcome {
    let iv = parse_interval(interval).map_err(|m| usage(format!("--interval: {m}")))?;
    let eps = parse_epsilon(epsilon).map_err(|m| usage(format!("--epsilon: {m}")))?;
    log::info!("resolved: interval {iv}, epsilon {}", format_rational(&eps));
    let cert = match delta {
        None => distortion_delta(&iv, &eps).map_err(usage)?,
        Some(d) => {
            let d = parse_rational(d).map_err(|e| usage(format!("--delta: {e}")))?;
            certify_delta(&iv, &eps, &d).map_err(|e| CliError::Negative(format!("delta not certified: {e}")))?
        }
    };
    print_cert(&cert);
    let p = bundle.write("cert", "distortion.json", &cert)?;
    println!("wrote {}", p.display());
    Ok(())
}

fn build_set(cfg: &PipelineConfig, bundle: &Bundle) -> Outcome {
    match construct(cfg) {
        Ok(c) => {
            bundle.write("cert", "distortion.json", &c.distortion)?;
            bundle.write_text("words", "words.txt", &format_words(&c.words.words))?;
            bundle.write("words", "search.json", &c.words)?;
            let p = bundle.write("tset", "tset.json", &c.set)?;
            bundle.write_text("reports", "config.json", &config_json(cfg))?;
            println!(
                "translating set: {} elements + identity, delta {}, pair {}",
                c.set.elements.len(),
                format_rational(&c.set.delta),
                c.set.pair.name
            );
            for (w, g) in c.set.words.iter().zip(&c.set.elements) {
                println!("  {w:<24} {} breakpoints", g.breakpoints().len());
            }
            println!("wrote {}", p.display());
            Ok(())
        }
        Err(e @ (BuildError::Exhausted(_) | BuildError::Lift { .. })) => {
            if let BuildError::Exhausted(x) = &e {
                println!("{}", x.stats);
            }
            Err(CliError::Negative(format!("build failed: {e}")))
        }
        Err(e) => Err(usage(format!("build failed: {e}"))),
    }
}

fn read_file(p: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))
}

fn load<T: Exported>(p: &Path) -> Result<T, CliError> {
    from_json(&read_file(p)?).map_err(|e| usage(format!("{}: {e}", p.display())))
}

fn load_tset(p: Option<&Path>) -> Result<TranslatingSet, CliError> {
    match p {
        Some(p) => load(p),
        None => construct(&PipelineConfig::default())
            .map(|c| c.set)
            .map_err(|e| usage(format!("default build failed: {e}"))),
    }
}

fn load_subset(p: &Path) -> Result<FiniteSubset, CliError> {
    let text = read_file(p)?;
    if text.trim_start().starts_with('{') {
        return from_json(&text).map_err(|e| usage(format!("{}: {e}", p.display())));
    }
    let maps = parse_maps(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?;
    FiniteSubset::new(maps).map_err(|e| usage(format!("{}: {e}", p.display())))
}

fn subset_for(t: &TranslatingSet, s: &SubsetArgs, file: Option<&Path>) -> Result<FiniteSubset, CliError> {
    match (file, s.ball_radius) {
        (Some(p), _) => load_subset(p),
        (None, Some(r)) => Ok(ball(&pool_generators(&t.elements), r)),
        (None, None) => Err(usage("give --subset FILE or --ball-radius N")),
    }
}

fn check_marriage(s: &SubsetArgs) -> Outcome {
    let t = load_tset(s.tset.as_deref())?;
    let u = subset_for(&t, s, s.subset.as_deref())?;
    let r = check_2marriage(&t, &u);
    println!("|u| = {}  |S1.u| = {}  2|u| = {}  {}", r.size, r.lhs, r.rhs, if r.pass { "PASS" } else { "FAIL" });
    if r.pass {
        Ok(())
    } else {
        print!("{}", to_json(&r));
        Err(CliError::Negative("2-marriage inequality fails".into()))
    }
}

fn extract(s: &SubsetArgs, u2: Option<&Path>, bundle: &Bundle) -> Outcome {
    let t = load_tset(s.tset.as_deref())?;
    let u1 = subset_for(&t, s, s.subset.as_deref())?;
    let u2 = match u2 {
        Some(p) => load_subset(p)?,
        None => u1.clone(),
    };
    match extract_matching(&t, &u1, &u2) {
        Ok(cert) => {
            let p = bundle.write("cert", "matching.json", &cert)?;
            match validate_certificate(&cert) {
                Ok(()) => {
                    println!("{} edges, certificate valid; wrote {}", cert.edges.len(), p.display());
                    Ok(())
                }
                Err(v) => Err(CliError::Negative(format!("extracted certificate fails validation: {v:?}"))),
            }
        }
        Err(v) => {
            let p = bundle.write("cert", "hall-violation.json", &v)?;
            let (n, m) = v.recount();
            println!("Hall violation: {n} vertices, {m} neighbours; wrote {}", p.display());
            Err(CliError::Negative("no evenly colored 2-matching".into()))
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PigeonholeInputRepr {
    pub interval: ClosedIntervalRepr,
    pub j: IntervalSetRepr,
    pub maps: Vec<Mat2Repr>,
}

/// An interval, J ⊆ I, and six matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PigeonholeInput {
    pub interval: ClosedInterval,
    pub j: IntervalSet,
    pub maps: [Mat2; 6],
}

impl Exported for PigeonholeInput {
    type Repr = PigeonholeInputRepr;

    fn to_repr(&self) -> PigeonholeInputRepr {
        PigeonholeInputRepr {
            interval: self.interval.to_repr(),
            j: self.j.to_repr(),
            maps: self.maps.iter().map(Exported::to_repr).collect(),
        }
    }

    fn from_repr(x: PigeonholeInputRepr) -> Result<Self, SchemaError> {
        let interval = ClosedInterval::from_repr(x.interval).map_err(|e| e.within("interval"))?;
        let j = IntervalSet::from_repr(x.j).map_err(|e| e.within("j"))?;
        let n = x.maps.len();
        let maps: Vec<Mat2> = x
            .maps
            .into_iter()
            .enumerate()
            .map(|(i, m)| Mat2::from_repr(m).map_err(|e| e.within(&format!("maps[{i}]"))))
            .collect::<Result<_, _>>()?;
        let maps: [Mat2; 6] = maps
            .try_into()
            .map_err(|_| SchemaError::new(format!("expected 6 matrices, found {n}")).within("maps"))?;
        Ok(PigeonholeInput { interval, j, maps })
    }
}

/// A valid instance on [0, 1]: J is I minus short gaps, the maps lie within
/// the lemma's δ.
pub fn random_pigeonhole(seed: u64) -> PigeonholeInput {
    let mut rng = sample::rng(seed);
    let iv = ClosedInterval::unit();
    let delta = lemma_delta(&iv, &pwproj_core::pigeonhole::lemma_epsilon()).expect("unit interval");
    PigeonholeInput {
        j: sample::large_subset(&mut rng, &iv),
        maps: std::array::from_fn(|_| sample::near_identity(&mut rng, &delta)),
        interval: iv,
    }
}

fn pigeonhole(input: Option<&Path>, seed: u64, bundle: &Bundle) -> Outcome {
    let inst = match input {
        Some(p) => load::<PigeonholeInput>(p)?,
        None => random_pigeonhole(seed),
    };
    bundle.write("cert", "pigeonhole-input.json", &inst)?;
    match pigeonhole_witness(&inst.interval, &inst.j, &inst.maps) {
        Ok(w) => {
            let p = bundle.write("cert", "pigeonhole.json", &w)?;
            println!("indices {:?}", w.indices);
            println!("mu(L)            {}", w.measure_l);
            println!("sum mu(L_i)      {}", w.total);
            println!("3 mu(I)          {}", &w.measure_i * &QSqrt2::from_int(3));
            println!("wrote {}", p.display());
            Ok(())
        }
        Err(
            e @ (PigeonholeError::IntegralBound { .. }
            | PigeonholeError::CoverageIdentity { .. }
            | PigeonholeError::NoFourfoldCell
            | PigeonholeError::ContainmentRecheck { .. }),
        ) => Err(CliError::Negative(format!("lemma conclusion fails: {e}"))),
        Err(e) => Err(usage(format!("instance violates a precondition: {e}"))),
    }
}

fn verify_relations(group: &str) -> Outcome {
    let b: Builtin = group.parse().map_err(usage)?;
    let gens = b.generators();
    let ring = match b {
        Builtin::ThompsonF => Ring::Integers,
        _ => Ring::ZSqrt2Halves,
    };
    let mut failures = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let v = g.validate(ring);
        println!("generator {i}: {} breakpoints, {} violations ({ring:?})", g.breakpoints().len(), v.len());
        failures.extend(v.iter().map(|x| format!("generator {i}: {x}")));
        if !g.then(&g.inverse()).is_identity() || g.is_identity() {
            failures.push(format!("generator {i}: inverse law or nontriviality fails"));
        }
    }
    if b == Builtin::ThompsonF {
        for (k, r) in thompson_relators().iter().enumerate() {
            let ok = r.is_identity();
            println!("relation {}: {}", k + 1, if ok { "identity" } else { "NOT identity" });
            if !ok {
                failures.push(format!("relation {} fails", k + 1));
            }
        }
    }
    if failures.is_empty() {
        println!("PASS");
        Ok(())
    } else {
        Err(CliError::Negative(failures.join("; ")))
    }
}

fn pair_from(pair: Option<&str>, file: Option<&Path>) -> Result<GeneratorPair, CliError> {
    match (pair, file) {
        (_, Some(p)) => Ok(read_pair_file(p)?),
        (Some(n), None) => lookup_pair(n).map_err(usage),
        (None, None) => Err(usage("give --pair NAME or --pair-file FILE")),
    }
}

fn no_relation(pair: Option<&str>, file: Option<&Path>, max_len: usize, bundle: &Bundle) -> Outcome {
    let p = pair_from(pair, file)?;
    log::info!("resolved: pair {}, max_len {max_len}", p.name);
    match certify_no_relation(&p, max_len) {
        Ok(cert) => {
            let path = bundle.write("cert", &format!("no-relation-{}.json", p.name), &cert)?;
            println!(
                "no relation of length <= {} for {} ({} words); wrote {}",
                cert.max_len,
                p.name,
                cert.words_checked,
                path.display()
            );
            Ok(())
        }
        Err(w) => {
            println!("relation: {w} (length {}) evaluates to the identity", w.len());
            Err(CliError::Negative(format!("pair {} satisfies the relation {w}", p.name)))
        }
    }
}

fn campaign(cfg: &PipelineConfig, bundle: &Bundle) -> Outcome {
    let out = run_campaign(cfg);
    bundle.write_campaign(&out)?;
    let r = &out.report;
    if let Some(e) = &r.build_error {
        return Err(CliError::Negative(format!("campaign stopped: {e}")));
    }
    let a = &r.aggregate;
    println!("pool {} elements", r.pool_size);
    for (name, c) in [("exhaustive", a.exhaustive), ("random", a.random), ("egs", a.egs)] {
        println!("{name:<11} checked {:>7}  passed {:>7}  certified {:>7}", c.checked, c.passed, c.certified);
    }
    println!("failures {}; wrote {}", a.failures, bundle.root().display());
    if r.all_pass() {
        Ok(())
    } else {
        Err(CliError::Negative(format!("{} failing instances", a.failures)))
    }
}
