//! Random-instance generation, brute-force possible-worlds flattening, and
//! executable differential checks of the algebra's equivalence laws:
//!
//! * redundancy removal changes no information content (checked through the
//!   canonical closure of both sides),
//! * each generalized operator's information content equals the lifted image
//!   of its disjunctive-level counterpart,
//! * every operator output is normalized as produced,
//! * on definite consistent inputs the operators degenerate to classical
//!   relational algebra.
//!
//! Trials are deterministic: every trial derives its own seed from the run
//! seed, and a recorded violation replays from that seed alone. Trials that
//! overrun the combinatorial cap are counted as skipped, never dropped
//! silently.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dp::{dp_intersect, dp_join, dp_norm, dp_normrep, dp_project, dp_reducerep, dp_rep, dp_select, dp_union};
use crate::error::{Error, Result};
use crate::formula::{Atom, Formula};
use crate::gdp::{
    canonical_closure, g_intersect, g_is_normalized, g_join, g_norm, g_project, g_reduce, g_rep,
    g_select, g_union, lift_binary, lift_unary,
};
use crate::model::{
    enumerate_tuple_space, DisjParaRelation, GenDisjParaRelation, ParaRelation, Scheme, SchemeRef,
    Symbol, Tuple, TupleSet, DEFAULT_CAP,
};

/// Bounds for random instance generation. Generation is deterministic given
/// the seed.
#[derive(Debug, Clone)]
pub struct GenConfig {
    pub seed: u64,
    /// Attributes per scheme, 1..=2.
    pub max_attrs: usize,
    /// Values per attribute domain, 2..=4.
    pub max_domain: usize,
    /// Tuple sets per relation component, 0..=3.
    pub max_tuple_sets: usize,
    /// Tuples per tuple set, 1..=3.
    pub max_set_size: usize,
    pub trials: usize,
    pub cap: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0xD15C0,
            max_attrs: 2,
            max_domain: 4,
            max_tuple_sets: 3,
            max_set_size: 3,
            trials: 100,
            cap: DEFAULT_CAP,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = (1..=2).contains(&self.max_attrs)
            && (2..=4).contains(&self.max_domain)
            && self.max_tuple_sets <= 3
            && (1..=3).contains(&self.max_set_size)
            && self.cap > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::Validation(format!(
                "generation bounds out of range: {self:?}"
            )))
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one trial within a run: stable under concurrency and sufficient
/// on its own to replay the trial.
pub fn trial_seed(run_seed: u64, suite: u64, trial: u64) -> u64 {
    splitmix64(run_seed ^ splitmix64((suite << 32) ^ trial))
}

fn trial_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gen_domain(cfg: &GenConfig, rng: &mut impl Rng) -> Vec<String> {
    let size = rng.gen_range(2..=cfg.max_domain);
    (1..=size).map(|i| format!("v{i}")).collect()
}

/// A random scheme within the configured bounds.
pub fn gen_scheme(cfg: &GenConfig, rng: &mut impl Rng) -> SchemeRef {
    let n = rng.gen_range(1..=cfg.max_attrs);
    let names = ["A", "B"];
    Scheme::new(
        "fuzz",
        (0..n).map(|i| (names[i], gen_domain(cfg, rng))),
    )
    .expect("generated scheme is valid")
}

/// A pair of schemes sharing attribute B with one domain, suitable for
/// natural join.
pub fn gen_join_schemes(cfg: &GenConfig, rng: &mut impl Rng) -> (SchemeRef, SchemeRef) {
    let shared = gen_domain(cfg, rng);
    let left = if cfg.max_attrs >= 2 && rng.gen_bool(0.7) {
        Scheme::new("left", [("A", gen_domain(cfg, rng)), ("B", shared.clone())]).unwrap()
    } else {
        Scheme::new("left", [("B", shared.clone())]).unwrap()
    };
    let right = if cfg.max_attrs >= 2 && rng.gen_bool(0.7) {
        Scheme::new("right", [("B", shared), ("C", gen_domain(cfg, rng))]).unwrap()
    } else {
        Scheme::new("right", [("B", shared)]).unwrap()
    };
    (left, right)
}

fn gen_component(
    cfg: &GenConfig,
    space: &[Tuple],
    rng: &mut impl Rng,
) -> BTreeSet<TupleSet> {
    let n = rng.gen_range(0..=cfg.max_tuple_sets);
    let mut out = BTreeSet::new();
    for _ in 0..n {
        let k = rng.gen_range(1..=cfg.max_set_size);
        let tuples: BTreeSet<Tuple> = (0..k)
            .map(|_| space[rng.gen_range(0..space.len())].clone())
            .collect();
        out.insert(TupleSet::new(tuples).expect("draw is nonempty"));
    }
    out
}

/// A random relation on the scheme, normalized and reduced.
pub fn gen_relation(
    cfg: &GenConfig,
    scheme: &SchemeRef,
    rng: &mut impl Rng,
) -> GenDisjParaRelation {
    let space: Vec<Tuple> = enumerate_tuple_space(scheme, cfg.cap)
        .expect("bounded scheme fits any sane cap")
        .into_iter()
        .collect();
    let raw = GenDisjParaRelation {
        scheme: scheme.clone(),
        positive: gen_component(cfg, &space, rng),
        negative: gen_component(cfg, &space, rng),
    };
    g_reduce(&g_norm(&raw))
}

/// A random definite, internally consistent relation: singleton positive
/// sets and singleton negative sets over disjoint tuples.
pub fn gen_definite_relation(
    cfg: &GenConfig,
    scheme: &SchemeRef,
    rng: &mut impl Rng,
) -> GenDisjParaRelation {
    let space: Vec<Tuple> = enumerate_tuple_space(scheme, cfg.cap)
        .expect("bounded scheme fits any sane cap")
        .into_iter()
        .collect();
    let mut positive: BTreeSet<TupleSet> = BTreeSet::new();
    for _ in 0..rng.gen_range(0..=cfg.max_tuple_sets) {
        positive.insert(TupleSet::singleton(
            space[rng.gen_range(0..space.len())].clone(),
        ));
    }
    let taken: BTreeSet<Tuple> = positive.iter().flat_map(|s| s.iter().cloned()).collect();
    let free: Vec<&Tuple> = space.iter().filter(|t| !taken.contains(*t)).collect();
    let mut negative: BTreeSet<TupleSet> = BTreeSet::new();
    if !free.is_empty() {
        for _ in 0..rng.gen_range(0..=cfg.max_tuple_sets) {
            negative.insert(TupleSet::singleton(
                free[rng.gen_range(0..free.len())].clone(),
            ));
        }
    }
    GenDisjParaRelation { scheme: scheme.clone(), positive, negative }
}

/// A random formula of depth at most 3 over =, ¬, ∧, ∨ with constants drawn
/// from the scheme's domains.
pub fn gen_formula(scheme: &Scheme, rng: &mut impl Rng) -> Formula {
    let depth = rng.gen_range(0..=3);
    gen_formula_depth(scheme, rng, depth)
}

fn gen_formula_depth(scheme: &Scheme, rng: &mut impl Rng, depth: usize) -> Formula {
    if depth == 0 {
        return gen_atom(scheme, rng);
    }
    match rng.gen_range(0..10) {
        0..=3 => gen_atom(scheme, rng),
        4 | 5 => Formula::Not(Box::new(gen_formula_depth(scheme, rng, depth - 1))),
        6 | 7 => Formula::And(
            Box::new(gen_formula_depth(scheme, rng, depth - 1)),
            Box::new(gen_formula_depth(scheme, rng, depth - 1)),
        ),
        _ => Formula::Or(
            Box::new(gen_formula_depth(scheme, rng, depth - 1)),
            Box::new(gen_formula_depth(scheme, rng, depth - 1)),
        ),
    }
}

fn gen_atom(scheme: &Scheme, rng: &mut impl Rng) -> Formula {
    match rng.gen_range(0..10) {
        0 => Formula::True,
        1 => Formula::False,
        _ => {
            let attrs = scheme.attributes();
            let a = &attrs[rng.gen_range(0..attrs.len())];
            // attribute-to-attribute equality only between equal domains
            if attrs.len() > 1 && rng.gen_bool(0.2) {
                let b = &attrs[rng.gen_range(0..attrs.len())];
                if a.name != b.name && a.domain == b.domain {
                    return Formula::Atom(Atom::AttrAttr {
                        left: a.name.clone(),
                        right: b.name.clone(),
                    });
                }
            }
            let values: Vec<&Symbol> = a.domain.iter().collect();
            let v = values[rng.gen_range(0..values.len())];
            Formula::Atom(Atom::AttrConst { attr: a.name.clone(), value: v.clone() })
        }
    }
}

/// Fully definite content of a set of disjunctive paraconsistent relations.
pub fn flatten_dp_members(
    members: &BTreeSet<DisjParaRelation>,
    cap: usize,
) -> Result<BTreeSet<ParaRelation>> {
    let mut worlds: BTreeSet<ParaRelation> = BTreeSet::new();
    for member in members {
        worlds.extend(dp_rep(&dp_norm(member), cap)?.relations);
    }
    Ok(dp_reducerep(&dp_normrep(&worlds)))
}

/// Fully definite information content: every disjunction on both sides
/// resolved every possible way, cleaned of inconsistent and non-minimal
/// worlds. This is the deepest oracle the engine has.
pub fn flatten_worlds(r: &GenDisjParaRelation, cap: usize) -> Result<BTreeSet<ParaRelation>> {
    flatten_dp_members(&g_rep(r, cap)?, cap)
}

/// A violation carries everything needed to reproduce and diagnose it.
#[derive(Debug, Clone)]
pub struct Violation {
    pub trial: usize,
    pub trial_seed: u64,
    pub detail: String,
}

/// How far the comparison had to descend before the two sides agreed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MismatchTier {
    /// Raw member sets differed; equal after per-member normalization,
    /// reduction, and cross-member minimization.
    DpClosure,
    /// Member sets differed even closed; equal as fully definite
    /// possible-worlds content. Arises when resolved negative disjunctions
    /// refine positive sets on one side only.
    WorldsOnly,
}

/// A trial where the two sides differed raw but agreed under the canonical
/// closure. Reported for analysis, never counted as a failure.
#[derive(Debug, Clone)]
pub struct ClosureMismatch {
    pub trial: usize,
    pub trial_seed: u64,
    pub tier: MismatchTier,
}

/// Outcome of one differential suite.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub theorem: String,
    pub trials_run: usize,
    pub violations: Vec<Violation>,
    pub closure_only: Vec<ClosureMismatch>,
    pub skipped: usize,
    pub notes: Vec<String>,
}

impl CheckReport {
    fn new(theorem: &str) -> CheckReport {
        CheckReport {
            theorem: theorem.to_string(),
            trials_run: 0,
            violations: Vec::new(),
            closure_only: Vec::new(),
            skipped: 0,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Folds another report into this one, keeping per-suite notes.
    pub fn merge(&mut self, other: CheckReport) {
        self.trials_run += other.trials_run;
        self.skipped += other.skipped;
        self.notes.push(format!(
            "suite {}: {} trials, {} violations, {} closure-only, {} skipped",
            other.theorem,
            other.trials_run,
            other.violations.len(),
            other.closure_only.len(),
            other.skipped
        ));
        self.notes.extend(other.notes);
        self.violations.extend(other.violations);
        self.closure_only.extend(other.closure_only);
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "theorem {}: {} trials, {} violations, {} closure-only mismatches, {} skipped (cap)",
            self.theorem,
            self.trials_run,
            self.violations.len(),
            self.closure_only.len(),
            self.skipped
        )?;
        for note in &self.notes {
            writeln!(f, "  note: {note}")?;
        }
        if !self.closure_only.is_empty() {
            let seeds: Vec<String> = self
                .closure_only
                .iter()
                .map(|c| {
                    let tier = match c.tier {
                        MismatchTier::DpClosure => "dp-closure",
                        MismatchTier::WorldsOnly => "worlds",
                    };
                    format!("{:#x} ({tier})", c.trial_seed)
                })
                .collect();
            writeln!(f, "  closure-only trial seeds: {}", seeds.join(", "))?;
        }
        for v in &self.violations {
            writeln!(
                f,
                "  VIOLATION trial {} seed {:#x}:\n{}",
                v.trial, v.trial_seed, v.detail
            )?;
        }
        Ok(())
    }
}

fn show_gdp(label: &str, r: &GenDisjParaRelation) -> String {
    let side = |s: &BTreeSet<TupleSet>| {
        s.iter()
            .map(|ts| format!("{{{ts}}}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    format!(
        "    {label}: scheme {} positive [{}] negative [{}]",
        r.scheme.name(),
        side(&r.positive),
        side(&r.negative)
    )
}

fn show_dp_members(label: &str, members: &BTreeSet<DisjParaRelation>) -> String {
    let mut out = format!("    {label} ({} members):", members.len());
    for m in members {
        let pos = m
            .positive
            .iter()
            .map(|ts| format!("{{{ts}}}"))
            .collect::<Vec<_>>()
            .join(", ");
        let neg = m
            .negative
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        out.push_str(&format!("\n      <positive [{pos}] negative [{neg}]>"));
    }
    out
}

struct TrialOutcome {
    raw_equal: bool,
    /// Equal after the member-level closure, if not raw.
    dp_closure_equal: bool,
    /// Equal as fully definite possible-worlds content, if not closed.
    worlds_equal: bool,
    consistency_ok: bool,
    literal_union_form_equal: Option<bool>,
    detail: Option<String>,
}

/// The operator suites runnable individually.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorCheck {
    Union,
    Intersect,
    Select,
    Project,
    Join,
}

impl OperatorCheck {
    pub fn label(&self) -> &'static str {
        match self {
            OperatorCheck::Union => "2-union",
            OperatorCheck::Intersect => "2-intersect",
            OperatorCheck::Select => "3-select",
            OperatorCheck::Project => "3-project",
            OperatorCheck::Join => "3-join",
        }
    }

    fn suite_id(&self) -> u64 {
        match self {
            OperatorCheck::Union => 2,
            OperatorCheck::Intersect => 3,
            OperatorCheck::Select => 4,
            OperatorCheck::Project => 5,
            OperatorCheck::Join => 6,
        }
    }
}

fn compare_sides(
    output: &GenDisjParaRelation,
    inputs_shown: String,
    lhs_raw: BTreeSet<DisjParaRelation>,
    rhs_raw: BTreeSet<DisjParaRelation>,
    literal_union_form_equal: Option<bool>,
) -> Result<TrialOutcome> {
    let consistency_ok = g_is_normalized(output);
    let raw_equal = lhs_raw == rhs_raw;
    let lhs = canonical_closure(&lhs_raw)?;
    let rhs = canonical_closure(&rhs_raw)?;
    let closure_equal = lhs == rhs;
    let detail = if !closure_equal || !consistency_ok {
        let mut d = inputs_shown;
        if !consistency_ok {
            d.push_str("\n    output is not normalized");
            d.push('\n');
            d.push_str(&show_gdp("output", output));
        }
        d.push('\n');
        d.push_str(&show_dp_members("lhs closure", &lhs));
        d.push('\n');
        d.push_str(&show_dp_members("rhs closure", &rhs));
        let diff: BTreeSet<DisjParaRelation> = lhs
            .symmetric_difference(&rhs)
            .cloned()
            .collect();
        d.push('\n');
        d.push_str(&show_dp_members("canonical diff", &diff));
        Some(d)
    } else {
        None
    };
    Ok(TrialOutcome {
        raw_equal,
        closure_equal,
        consistency_ok,
        literal_union_form_equal,
        detail,
    })
}

fn run_operator_trial(
    cfg: &GenConfig,
    op: OperatorCheck,
    rng: &mut ChaCha8Rng,
) -> Result<TrialOutcome> {
    let cap = cfg.cap;
    match op {
        OperatorCheck::Union | OperatorCheck::Intersect => {
            let scheme = gen_scheme(cfg, rng);
            let r = gen_relation(cfg, &scheme, rng);
            let s = gen_relation(cfg, &scheme, rng);
            let output = match op {
                OperatorCheck::Union => g_union(&r, &s, cap)?,
                _ => g_intersect(&r, &s, cap)?,
            };
            let lhs_raw = g_rep(&output, cap)?;
            let rep_r = g_rep(&r, cap)?;
            let rep_s = g_rep(&s, cap)?;
            let rhs_raw = match op {
                OperatorCheck::Union => {
                    lift_binary(|a, b| dp_union(a, b, cap), &rep_r, &rep_s, cap)?
                }
                _ => lift_binary(|a, b| dp_intersect(a, b, cap), &rep_r, &rep_s, cap)?,
            };
            // the stated intersection law uses the lifted union image; report
            // how often that literal form happens to agree, informationally
            let literal = if op == OperatorCheck::Intersect {
                let alt = lift_binary(|a, b| dp_union(a, b, cap), &rep_r, &rep_s, cap)?;
                Some(canonical_closure(&alt)? == canonical_closure(&lhs_raw)?)
            } else {
                None
            };
            let inputs = format!("{}\n{}", show_gdp("R", &r), show_gdp("S", &s));
            compare_sides(&output, inputs, lhs_raw, rhs_raw, literal)
        }
        OperatorCheck::Select => {
            let scheme = gen_scheme(cfg, rng);
            let r = gen_relation(cfg, &scheme, rng);
            let f = gen_formula(&scheme, rng);
            let output = g_select(&r, &f, cap)?;
            let lhs_raw = g_rep(&output, cap)?;
            let rhs_raw = lift_unary(|d| dp_select(d, &f, cap), &g_rep(&r, cap)?, cap)?;
            let inputs = format!("{}\n    formula: {f:?}", show_gdp("R", &r));
            compare_sides(&output, inputs, lhs_raw, rhs_raw, None)
        }
        OperatorCheck::Project => {
            let scheme = gen_scheme(cfg, rng);
            let r = gen_relation(cfg, &scheme, rng);
            let attrs = scheme.attributes();
            let keep: BTreeSet<Symbol> = if attrs.len() == 1 || rng.gen_bool(0.3) {
                attrs.iter().map(|a| a.name.clone()).collect()
            } else {
                let i = rng.gen_range(0..attrs.len());
                BTreeSet::from([attrs[i].name.clone()])
            };
            let target = scheme.project(&keep, "fuzz_proj").expect("subset of scheme");
            let output = g_project(&r, &target, cap)?;
            let lhs_raw = g_rep(&output, cap)?;
            let rhs_raw = lift_unary(|d| dp_project(d, &target, cap), &g_rep(&r, cap)?, cap)?;
            let inputs = format!(
                "{}\n    project onto {}",
                show_gdp("R", &r),
                target
                    .attributes()
                    .iter()
                    .map(|a| a.name.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            );
            compare_sides(&output, inputs, lhs_raw, rhs_raw, None)
        }
        OperatorCheck::Join => {
            let (ls, rs) = gen_join_schemes(cfg, rng);
            let r = gen_relation(cfg, &ls, rng);
            let s = gen_relation(cfg, &rs, rng);
            let output = g_join(&r, &s, cap)?;
            let lhs_raw = g_rep(&output, cap)?;
            let rhs_raw = lift_binary(
                |a, b| dp_join(a, b, cap),
                &g_rep(&r, cap)?,
                &g_rep(&s, cap)?,
                cap,
            )?;
            let inputs = format!("{}\n{}", show_gdp("R", &r), show_gdp("S", &s));
            compare_sides(&output, inputs, lhs_raw, rhs_raw, None)
        }
    }
}

/// Differential suite for one operator: compares the information content of
/// the operator output against the lifted image, under canonical closure,
/// and checks the output is normalized.
pub fn check_operator(cfg: &GenConfig, op: OperatorCheck) -> CheckReport {
    let mut report = CheckReport::new(op.label());
    let mut literal_equal = 0usize;
    let mut literal_unequal = 0usize;
    for trial in 0..cfg.trials {
        let seed = trial_seed(cfg.seed, op.suite_id(), trial as u64);
        let mut rng = trial_rng(seed);
        match run_operator_trial(cfg, op, &mut rng) {
            Err(Error::CombinatorialLimit { .. }) => {
                report.skipped += 1;
            }
            Err(e) => {
                report.trials_run += 1;
                report.violations.push(Violation {
                    trial,
                    trial_seed: seed,
                    detail: format!("    internal error: {e}"),
                });
            }
            Ok(outcome) => {
                report.trials_run += 1;
                match outcome.literal_union_form_equal {
                    Some(true) => literal_equal += 1,
                    Some(false) => literal_unequal += 1,
                    None => {}
                }
                if !outcome.closure_equal || !outcome.consistency_ok {
                    report.violations.push(Violation {
                        trial,
                        trial_seed: seed,
                        detail: outcome.detail.unwrap_or_default(),
                    });
                } else if !outcome.raw_equal {
                    report.closure_only.push(ClosureMismatch { trial, trial_seed: seed });
                }
            }
        }
    }
    if op == OperatorCheck::Intersect {
        report.notes.push(format!(
            "literal union-image form of the intersection law: equal on {literal_equal} trials, \
             unequal on {literal_unequal} (informational only)"
        ));
    }
    report
}

/// Per trial, generates a relation and checks that reduction preserves the
/// information content under the canonical closure.
pub fn check_theorem1(cfg: &GenConfig) -> CheckReport {
    let mut report = CheckReport::new("1");
    for trial in 0..cfg.trials {
        let seed = trial_seed(cfg.seed, 1, trial as u64);
        let mut rng = trial_rng(seed);
        let scheme = gen_scheme(cfg, &mut rng);
        let r = gen_relation(cfg, &scheme, &mut rng);
        let run = || -> Result<(bool, bool, String)> {
            let lhs_raw = g_rep(&g_reduce(&r), cfg.cap)?;
            let rhs_raw = g_rep(&r, cfg.cap)?;
            let raw_equal = lhs_raw == rhs_raw;
            let lhs = canonical_closure(&lhs_raw)?;
            let rhs = canonical_closure(&rhs_raw)?;
            let detail = if lhs != rhs {
                format!(
                    "{}\n{}\n{}",
                    show_gdp("R", &r),
                    show_dp_members("rep of reduced", &lhs),
                    show_dp_members("rep of original", &rhs)
                )
            } else {
                String::new()
            };
            Ok((raw_equal, lhs == rhs, detail))
        };
        match run() {
            Err(Error::CombinatorialLimit { .. }) => report.skipped += 1,
            Err(e) => {
                report.trials_run += 1;
                report.violations.push(Violation {
                    trial,
                    trial_seed: seed,
                    detail: format!("    internal error: {e}"),
                });
            }
            Ok((raw_equal, closure_equal, detail)) => {
                report.trials_run += 1;
                if !closure_equal {
                    report.violations.push(Violation { trial, trial_seed: seed, detail });
                } else if !raw_equal {
                    report.closure_only.push(ClosureMismatch { trial, trial_seed: seed });
                }
            }
        }
    }
    report
}

/// Union and intersection suites, merged into one report.
pub fn check_theorem2(cfg: &GenConfig) -> CheckReport {
    let mut report = CheckReport::new("2");
    report.merge(check_operator(cfg, OperatorCheck::Union));
    report.merge(check_operator(cfg, OperatorCheck::Intersect));
    report
}

/// Selection, projection, and join suites, merged into one report.
pub fn check_theorem3(cfg: &GenConfig) -> CheckReport {
    let mut report = CheckReport::new("3");
    report.merge(check_operator(cfg, OperatorCheck::Select));
    report.merge(check_operator(cfg, OperatorCheck::Project));
    report.merge(check_operator(cfg, OperatorCheck::Join));
    report
}

// Naive classical relational algebra over plain tuple sets. These evaluators
// deliberately share nothing with the paraconsistent operators beyond the
// core value types.

pub fn classical_select(tuples: &BTreeSet<Tuple>, f: &Formula) -> BTreeSet<Tuple> {
    tuples.iter().filter(|t| f.eval(t)).cloned().collect()
}

pub fn classical_project(tuples: &BTreeSet<Tuple>, target: &SchemeRef) -> BTreeSet<Tuple> {
    tuples
        .iter()
        .map(|t| {
            let pairs: Vec<(Symbol, Symbol)> = t
                .iter()
                .filter(|(k, _)| target.has_attribute(k.as_str()))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            Tuple::new(target, pairs).expect("restriction conforms to target")
        })
        .collect()
}

pub fn classical_join(
    left: &BTreeSet<Tuple>,
    right: &BTreeSet<Tuple>,
    joined: &SchemeRef,
) -> BTreeSet<Tuple> {
    let mut out = BTreeSet::new();
    for a in left {
        'pair: for b in right {
            let mut pairs: Vec<(Symbol, Symbol)> =
                a.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            for (k, v) in b.iter() {
                match a.get(k.as_str()) {
                    Some(existing) if existing != v => continue 'pair,
                    Some(_) => {}
                    None => pairs.push((k.clone(), v.clone())),
                }
            }
            out.insert(Tuple::new(joined, pairs).expect("merge conforms to joined scheme"));
        }
    }
    out
}

pub fn classical_union(left: &BTreeSet<Tuple>, right: &BTreeSet<Tuple>) -> BTreeSet<Tuple> {
    left.union(right).cloned().collect()
}

pub fn classical_intersect(left: &BTreeSet<Tuple>, right: &BTreeSet<Tuple>) -> BTreeSet<Tuple> {
    left.intersection(right).cloned().collect()
}

fn definite_tuples(r: &GenDisjParaRelation) -> BTreeSet<Tuple> {
    r.positive.iter().flat_map(|s| s.iter().cloned()).collect()
}

fn singletons(tuples: &BTreeSet<Tuple>) -> BTreeSet<TupleSet> {
    tuples.iter().cloned().map(TupleSet::singleton).collect()
}

/// On definite consistent inputs, every operator's positive component must
/// equal the classical evaluator's answer as singleton sets.
pub fn classical_degeneration_check(cfg: &GenConfig) -> CheckReport {
    let mut report = CheckReport::new("classical");
    for trial in 0..cfg.trials {
        let seed = trial_seed(cfg.seed, 7, trial as u64);
        let mut rng = trial_rng(seed);
        let run = |rng: &mut ChaCha8Rng| -> Result<Vec<(String, BTreeSet<TupleSet>, BTreeSet<Tuple>)>> {
            let cap = cfg.cap;
            let scheme = gen_scheme(cfg, rng);
            let r = gen_definite_relation(cfg, &scheme, rng);
            let s = gen_definite_relation(cfg, &scheme, rng);
            let r_tuples = definite_tuples(&r);
            let s_tuples = definite_tuples(&s);
            let f = gen_formula(&scheme, rng);
            let attrs = scheme.attributes();
            let keep: BTreeSet<Symbol> = BTreeSet::from([attrs[rng.gen_range(0..attrs.len())].name.clone()]);
            let target = scheme.project(&keep, "fuzz_proj").expect("subset");

            let (jl, jr) = gen_join_schemes(cfg, rng);
            let r2 = gen_definite_relation(cfg, &jl, rng);
            let s2 = gen_definite_relation(cfg, &jr, rng);
            let joined = jl.join(&jr, format!("{}_{}", jl.name(), jr.name()))?;

            Ok(vec![
                (
                    "select".into(),
                    g_select(&r, &f, cap)?.positive,
                    classical_select(&r_tuples, &f),
                ),
                (
                    "project".into(),
                    g_project(&r, &target, cap)?.positive,
                    classical_project(&r_tuples, &target),
                ),
                (
                    "union".into(),
                    g_union(&r, &s, cap)?.positive,
                    classical_union(&r_tuples, &s_tuples),
                ),
                (
                    "intersect".into(),
                    g_intersect(&r, &s, cap)?.positive,
                    classical_intersect(&r_tuples, &s_tuples),
                ),
                (
                    "join".into(),
                    g_join(&r2, &s2, cap)?.positive,
                    classical_join(&definite_tuples(&r2), &definite_tuples(&s2), &joined),
                ),
            ])
        };
        match run(&mut rng) {
            Err(Error::CombinatorialLimit { .. }) => report.skipped += 1,
            Err(e) => {
                report.trials_run += 1;
                report.violations.push(Violation {
                    trial,
                    trial_seed: seed,
                    detail: format!("    internal error: {e}"),
                });
            }
            Ok(results) => {
                report.trials_run += 1;
                for (name, got, classical) in results {
                    if got != singletons(&classical) {
                        report.violations.push(Violation {
                            trial,
                            trial_seed: seed,
                            detail: format!(
                                "    {name}: positive component {:?} != classical {:?}",
                                got, classical
                            ),
                        });
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letters() -> SchemeRef {
        Scheme::new("item", [("VAL", vec!["a", "b", "c", "d", "e", "f", "g", "i"])]).unwrap()
    }

    fn tup(s: &SchemeRef, v: &str) -> Tuple {
        Tuple::from_values(s, [v]).unwrap()
    }

    fn tset(s: &SchemeRef, vs: &[&str]) -> TupleSet {
        TupleSet::new(vs.iter().map(|v| tup(s, v))).unwrap()
    }

    fn gdp(s: &SchemeRef, pos: &[&[&str]], neg: &[&[&str]]) -> GenDisjParaRelation {
        GenDisjParaRelation::new(
            s.clone(),
            pos.iter().map(|vs| tset(s, vs)),
            neg.iter().map(|vs| tset(s, vs)),
        )
        .unwrap()
    }

    #[test]
    fn generation_is_deterministic_and_normalized() {
        let cfg = GenConfig::default();
        cfg.validate().unwrap();
        let scheme = letters();
        let a = gen_relation(&cfg, &scheme, &mut trial_rng(42));
        let b = gen_relation(&cfg, &scheme, &mut trial_rng(42));
        assert_eq!(a, b);

        for trial in 0..100 {
            let mut rng = trial_rng(trial_seed(cfg.seed, 99, trial));
            let scheme = gen_scheme(&cfg, &mut rng);
            let r = gen_relation(&cfg, &scheme, &mut rng);
            assert!(g_is_normalized(&r), "unnormalized generated relation {r:?}");
            assert_eq!(g_reduce(&r), r, "unreduced generated relation {r:?}");
        }
    }

    #[test]
    fn generation_with_zero_sets_is_empty() {
        let cfg = GenConfig { max_tuple_sets: 0, ..GenConfig::default() };
        let scheme = letters();
        let r = gen_relation(&cfg, &scheme, &mut trial_rng(7));
        assert!(r.positive.is_empty());
        assert!(r.negative.is_empty());
    }

    #[test]
    fn flatten_definite_relation_is_single_world() {
        let s = letters();
        let r = gdp(&s, &[&["a"], &["b"]], &[&["c"]]);
        let worlds = flatten_worlds(&r, 10_000).unwrap();
        assert_eq!(
            worlds,
            BTreeSet::from([ParaRelation::new(
                s.clone(),
                [tup(&s, "a"), tup(&s, "b")],
                [tup(&s, "c")],
            )
            .unwrap()])
        );
    }

    #[test]
    fn flatten_example3_minimizes_to_one_world() {
        let s = letters();
        let r = gdp(
            &s,
            &[&["b", "e"], &["c", "d"], &["e", "g"]],
            &[&["b"], &["c", "e"], &["c", "d", "g"]],
        );
        let worlds = flatten_worlds(&r, 10_000).unwrap();
        assert_eq!(
            worlds,
            BTreeSet::from([ParaRelation::new(
                s.clone(),
                [tup(&s, "e"), tup(&s, "d")],
                [tup(&s, "b"), tup(&s, "c")],
            )
            .unwrap()])
        );
    }

    #[test]
    fn flatten_drops_fully_negated_worlds() {
        // one member of the expansion has its positive set wholly negated at
        // the dp level and contributes nothing
        let s = letters();
        let r = gdp(&s, &[&["a", "b"]], &[&["a", "c"]]);
        let worlds = flatten_worlds(&r, 10_000).unwrap();
        for w in &worlds {
            assert!(w.positive.intersection(&w.negative).next().is_none());
        }
        assert_eq!(worlds, flatten_worlds(&g_reduce(&r), 10_000).unwrap());
    }

    #[test]
    fn theorem1_report_on_small_run_is_clean() {
        let cfg = GenConfig::default().with_trials(60).with_seed(0xFEED);
        let report = check_theorem1(&cfg);
        assert_eq!(report.trials_run + report.skipped, 60);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn theorem1_holds_on_published_reduction_example() {
        let s = letters();
        let r = gdp(
            &s,
            &[&["a"], &["b", "c"], &["c", "d"], &["a", "e"], &["f", "g"]],
            &[&["b"], &["c", "e"], &["i"], &["d", "e", "f"]],
        );
        let lhs = canonical_closure(&g_rep(&g_reduce(&r), 100_000).unwrap()).unwrap();
        let rhs = canonical_closure(&g_rep(&r, 100_000).unwrap()).unwrap();
        assert_eq!(lhs, rhs);

        let empty = GenDisjParaRelation::empty(s.clone());
        assert_eq!(
            g_rep(&g_reduce(&empty), 1000).unwrap(),
            g_rep(&empty, 1000).unwrap()
        );
    }

    #[test]
    fn operator_checks_pass_on_small_runs() {
        let cfg = GenConfig::default().with_trials(25).with_seed(0xBEEF);
        for op in [
            OperatorCheck::Union,
            OperatorCheck::Intersect,
            OperatorCheck::Select,
            OperatorCheck::Project,
            OperatorCheck::Join,
        ] {
            let report = check_operator(&cfg, op);
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn classical_degeneration_on_small_run() {
        let cfg = GenConfig::default().with_trials(40).with_seed(0xCAFE);
        let report = classical_degeneration_check(&cfg);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn trial_zero_runs_produce_empty_reports() {
        let cfg = GenConfig::default().with_trials(0);
        let report = check_theorem1(&cfg);
        assert_eq!(report.trials_run, 0);
        assert!(report.passed());
    }
}
