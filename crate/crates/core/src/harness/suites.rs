//! One property suite per metatheorem or lemma.
//!
//! Every case is a pure function of a base judgement and a per-case seed,
//! so cases can run in any order (or in parallel) and a failing case can
//! be re-run on a shrunk judgement.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use super::gen::{context_scheme, enumerate_typed, sample_typed, GenError, Sampler};
use super::GenConfig;
use crate::candidates::{adequation_failure, member_test_fuel};
use crate::reduction::{build_graph, eterm_reducts, is_sn_bounded, redexes, reducts, step, ReductionGraph};
use crate::syntax::{
    alpha_eq, apply_seq, fresh_name, struct_subst, struct_subst_seq, subst, ETerm, FreeNames, Seq, Term, Type,
};
use crate::typing::{infer, judge, Contexts, Judgement};

/// Budget for the auxiliary terms that lemma instances are built from.
const PIECE_BUDGET: usize = 6;
/// Fuel for checking the premises of a lemma; an inconclusive premise
/// makes the instance a skip, never a failure.
const PREMISE_FUEL: usize = 5_000;
const PREMISE_MAX_SIZE: usize = 400;
/// Give up shrinking after this many accepted replacements.
const SHRINK_ROUNDS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteName {
    SubjectReduction,
    Confluence,
    StrongNormalization,
    SubstitutionLemma,
    NicePreservation,
    IntLemma,
    DeltaLemma,
    CandidateClosure,
    MuN,
    Adequation,
}

impl SuiteName {
    pub const ALL: [SuiteName; 10] = [
        SuiteName::SubjectReduction,
        SuiteName::Confluence,
        SuiteName::StrongNormalization,
        SuiteName::SubstitutionLemma,
        SuiteName::NicePreservation,
        SuiteName::IntLemma,
        SuiteName::DeltaLemma,
        SuiteName::CandidateClosure,
        SuiteName::MuN,
        SuiteName::Adequation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::SubjectReduction => "subject_reduction",
            SuiteName::Confluence => "confluence",
            SuiteName::StrongNormalization => "strong_normalization",
            SuiteName::SubstitutionLemma => "substitution_lemma",
            SuiteName::NicePreservation => "nice_preservation",
            SuiteName::IntLemma => "int_lemma",
            SuiteName::DeltaLemma => "delta_lemma",
            SuiteName::CandidateClosure => "candidate_closure",
            SuiteName::MuN => "mu_N",
            SuiteName::Adequation => "adequation",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown suite `{0}`")]
pub struct UnknownSuite(pub String);

impl FromStr for SuiteName {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<SuiteName, UnknownSuite> {
        SuiteName::ALL.into_iter().find(|n| n.as_str() == s).ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

/// Number of cases whose reduction graph used each rule schema.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub beta: usize,
    pub proj: usize,
    pub case: usize,
    pub perm: usize,
    pub classical: usize,
}

impl Coverage {
    fn add(&mut self, used: [bool; 5]) {
        let slots = [&mut self.beta, &mut self.proj, &mut self.case, &mut self.perm, &mut self.classical];
        for (slot, u) in slots.into_iter().zip(used) {
            *slot += usize::from(u);
        }
    }

    /// Schema names that no case exercised.
    pub fn missing(&self) -> Vec<&'static str> {
        let counts = [self.beta, self.proj, self.case, self.perm, self.classical];
        crate::reduction::RedexKind::SCHEMA_NAMES.iter().zip(counts).filter(|(_, c)| *c == 0).map(|(n, _)| *n).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Which check failed, e.g. `item2` of a lemma or `coverage`.
    pub check: String,
    pub judgement: String,
    pub term: String,
    /// The base term after greedy shrinking.
    pub minimized: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite_name: String,
    pub cases_run: usize,
    pub cases_skipped: usize,
    /// Instances run per individual check (lemma items and the like).
    pub checks: BTreeMap<String, usize>,
    pub coverage: Coverage,
    pub failures: Vec<Failure>,
    pub runtime_millis: u64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The judgements every suite runs over.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub exhaustive: Vec<Judgement>,
    pub sampled: Vec<Judgement>,
}

impl Corpus {
    pub fn build(cfg: &GenConfig) -> Result<Corpus, GenError> {
        Ok(Corpus { exhaustive: enumerate_typed(cfg), sampled: sample_typed(cfg)? })
    }

    pub fn len(&self) -> usize {
        self.exhaustive.len() + self.sampled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Judgement> {
        self.exhaustive.iter().chain(&self.sampled)
    }
}

/// Outcome of one check within a case.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Check {
    Pass,
    Skip,
    Fail(String),
}

#[derive(Clone, Debug, Default)]
struct CaseOutcome {
    checks: Vec<(&'static str, Check)>,
    coverage: [bool; 5],
}

impl CaseOutcome {
    fn record(&mut self, name: &'static str, c: Check) {
        self.checks.push((name, c));
    }

    fn cover(&mut self, g: &ReductionGraph) {
        for (slot, n) in self.coverage.iter_mut().zip(g.schema_counts()) {
            *slot |= n > 0;
        }
    }

    fn failing(&self, name: &str) -> bool {
        self.checks.iter().any(|(n, c)| *n == name && matches!(c, Check::Fail(_)))
    }
}

struct CaseCtx<'a> {
    cfg: &'a GenConfig,
    seed: u64,
}

impl CaseCtx<'_> {
    fn sampler(&self) -> Sampler {
        Sampler::new(self.seed, &self.cfg.type_pool).open()
    }
}

type CaseFn = fn(&CaseCtx<'_>, &Judgement) -> CaseOutcome;

fn case_fn(name: SuiteName) -> CaseFn {
    match name {
        SuiteName::SubjectReduction => subject_reduction,
        SuiteName::Confluence => confluence,
        SuiteName::StrongNormalization => strong_normalization,
        SuiteName::SubstitutionLemma => substitution_lemma,
        SuiteName::NicePreservation => nice_preservation,
        SuiteName::IntLemma => int_lemma,
        SuiteName::DeltaLemma => delta_lemma,
        SuiteName::CandidateClosure => candidate_closure,
        SuiteName::MuN => mu_n,
        SuiteName::Adequation => adequation,
    }
}

fn case_seed(base: u64, index: usize) -> u64 {
    base ^ (index as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Builds the corpus for `cfg` and runs one suite over it.
pub fn run_suite(name: SuiteName, cfg: &GenConfig) -> Result<SuiteReport, GenError> {
    Ok(run_suite_on(name, cfg, &Corpus::build(cfg)?))
}

/// Runs one suite over a prebuilt corpus.
/// Evenly spaced indices `0..len`, at most `cap` of them.
fn stride(len: usize, cap: usize) -> Vec<usize> {
    if len <= cap {
        return (0..len).collect();
    }
    (0..cap).map(|k| k * len / cap).collect()
}

/// Corpus positions a suite visits. The position also seeds the case, so a
/// judgement gets the same instance whichever subset it lands in.
fn select_cases<'c>(name: SuiteName, cfg: &GenConfig, corpus: &'c Corpus) -> Vec<(usize, &'c Judgement)> {
    let all: Vec<&Judgement> = corpus.iter().collect();
    let ex = corpus.exhaustive.len();
    let idx: Vec<usize> = match name {
        SuiteName::IntLemma | SuiteName::DeltaLemma => stride(all.len(), cfg.lemma_cases),
        SuiteName::Adequation => {
            (0..ex).chain(stride(corpus.sampled.len(), cfg.adequation_samples).into_iter().map(|k| ex + k)).collect()
        }
        _ => (0..all.len()).collect(),
    };
    idx.into_iter().map(|i| (i, all[i])).collect()
}

pub fn run_suite_on(name: SuiteName, cfg: &GenConfig, corpus: &Corpus) -> SuiteReport {
    let start = Instant::now();
    let f = case_fn(name);
    let cases = select_cases(name, cfg, corpus);
    let run = |&(i, j): &(usize, &Judgement)| f(&CaseCtx { cfg, seed: case_seed(cfg.seed, i) }, j);
    #[cfg(feature = "parallel")]
    let outcomes: Vec<CaseOutcome> = {
        use rayon::prelude::*;
        cases.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<CaseOutcome> = cases.iter().map(run).collect();

    let mut report = SuiteReport {
        suite_name: name.to_string(),
        cases_run: 0,
        cases_skipped: 0,
        checks: BTreeMap::new(),
        coverage: Coverage::default(),
        failures: Vec::new(),
        runtime_millis: 0,
    };
    for (&(i, j), out) in cases.iter().zip(&outcomes) {
        if out.checks.iter().all(|(_, c)| *c == Check::Skip) {
            report.cases_skipped += 1;
            continue;
        }
        report.cases_run += 1;
        report.coverage.add(out.coverage);
        for (check, c) in &out.checks {
            if *c != Check::Skip {
                *report.checks.entry(check.to_string()).or_default() += 1;
            }
            if let Check::Fail(detail) = c {
                let ctx = CaseCtx { cfg, seed: case_seed(cfg.seed, i) };
                let minimized = shrink(j, |k| f(&ctx, k).failing(check));
                report.failures.push(Failure {
                    check: check.to_string(),
                    judgement: j.to_string(),
                    term: j.term().to_string(),
                    minimized: minimized.term().to_string(),
                    detail: detail.clone(),
                });
            }
        }
    }
    if name == SuiteName::StrongNormalization {
        let missing = report.coverage.missing();
        if !missing.is_empty() {
            report.failures.push(Failure {
                check: "coverage".into(),
                judgement: String::new(),
                term: String::new(),
                minimized: String::new(),
                detail: format!("CoverageError: no case exercised {}", missing.join(", ")),
            });
        }
    }
    report.failures.sort_by(|a, b| (&a.check, &a.term, &a.detail).cmp(&(&b.check, &b.term, &b.detail)));
    report.runtime_millis = start.elapsed().as_millis() as u64;
    report
}

/// The whole run as written by `suite --name all`.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub config: GenConfig,
    pub corpus: CorpusSummary,
    pub suites: Vec<SuiteReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusSummary {
    /// How contexts for exhaustive enumeration are chosen.
    pub context_scheme: String,
    pub contexts: usize,
    pub exhaustive: usize,
    pub sampled: usize,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    /// Same report with every timing field zeroed.
    pub fn without_timing(&self) -> RunReport {
        let mut r = self.clone();
        for s in &mut r.suites {
            s.runtime_millis = 0;
        }
        r
    }
}

pub fn run_suites(names: &[SuiteName], cfg: &GenConfig) -> Result<RunReport, GenError> {
    let corpus = Corpus::build(cfg)?;
    let suites = names.iter().map(|&n| run_suite_on(n, cfg, &corpus)).collect();
    Ok(RunReport {
        config: cfg.clone(),
        corpus: CorpusSummary {
            context_scheme: "empty; x:T for each pool type T; x:T(i), y:T(i+1) ; a:T(i+2) for each i. \
                             Subterm types range over the subformulas of the pool, which keeps \
                             exhaustive enumeration finite and small."
                .into(),
            contexts: context_scheme(&cfg.type_pool).len(),
            exhaustive: corpus.exhaustive.len(),
            sampled: corpus.sampled.len(),
        },
        suites,
    })
}

/// Greedily replaces subterms by same-typed variables in scope while
/// `still_fails` holds, preferring large subterms first.
pub fn shrink(j: &Judgement, still_fails: impl Fn(&Judgement) -> bool) -> Judgement {
    let mut current = j.clone();
    'rounds: for _ in 0..SHRINK_ROUNDS {
        let mut positions = crate::typing::typed_positions(current.ctx(), current.term());
        positions.sort_by_key(|(p, _, _)| std::cmp::Reverse(current.term().subterm_at(p).map_or(0, Term::size)));
        for (path, ctx, ty) in positions {
            if current.term().subterm_at(&path).map_or(0, Term::size) <= 1 {
                break;
            }
            for (x, xt) in &ctx.gamma {
                if *xt != ty {
                    continue;
                }
                let Some(t) = current.term().replace_at(&path, Term::var(x.clone())) else { continue };
                let Ok(k) = judge(current.ctx(), &t) else { continue };
                if k.ty() == current.ty() && still_fails(&k) {
                    current = k;
                    continue 'rounds;
                }
            }
        }
        break;
    }
    current
}

fn graph_or_fail(t: &Term, fuel: usize) -> Result<ReductionGraph, String> {
    build_graph(t, fuel).map_err(|e| format!("{t}: {e}"))
}

fn sn_check(out: &mut CaseOutcome, t: &Term, fuel: usize) -> Check {
    match build_graph(t, fuel) {
        Ok(g) => {
            out.cover(&g);
            Check::Pass
        }
        Err(e) => Check::Fail(format!("not shown SN: {t} ({e})")),
    }
}

/// Whether a premise is shown SN within the premise fuel.
fn premise(t: &Term) -> bool {
    is_sn_bounded(t, PREMISE_FUEL, PREMISE_MAX_SIZE).is_sn()
}

fn subject_reduction(ctx: &CaseCtx<'_>, j: &Judgement) -> CaseOutcome {
    let mut out = CaseOutcome::default();
    let g = match graph_or_fail(j.term(), ctx.cfg.fuel) {
        Ok(g) => g,
        Err(e) => {
            out.record("reducts_typed", Check::Fail(e));
            return out;
        }
    };
    out.cover(&g);
    for (src, edges) in g.edges().iter().enumerate() {
        for (s, dst) in edges {
            let t = &g.nodes()[*dst];
            match infer(j.ctx(), t) {
                Ok(ty) if ty == *j.ty() => {}
                other => {
                    let got = other.map_or_else(|e| e.to_string(), |t| t.to_string());
                    let detail = format!("{} --{s}--> {t} has {got}", g.nodes()[src]);
                    out.record("reducts_typed", Check::Fail(detail));
                    return out;
                }
            }
        }
    }
    out.record("reducts_typed", Check::Pass);
    out
}

fn confluence(ctx: &CaseCtx<'_>, j: &Judgement) -> CaseOutcome {
    let mut out = CaseOutcome::default();
    let check = match graph_or_fail(j.term(), ctx.cfg.fuel) {
        Ok(g) => {
            out.cover(&g);
            let nfs = g.normal_forms();
            if nfs.len() == 1 {
                Check::Pass
            } else {
                let shown: Vec<String> = nfs.iter().map(|t| t.to_string()).collect();
                Check::Fail(format!("{} normal forms: {}", nfs.len(), shown.join(" | ")))
            }
        }
        Err(e) => Check::Fail(e),
    };
    out.record("unique_normal_form", check);
    out
}

fn strong_normalization(ctx: &CaseCtx<'_>, j: &Judgement) -> CaseOutcome {
    let mut out = CaseOutcome::default();
    let c = match build_graph(j.term(), ctx.cfg.fuel) {
        Ok(g) => {
            out.cover(&g);
            // η must drop by at least one along every edge
            let bad = g.edges().iter().enumerate().find_map(|(i, es)| {
                es.iter().find(|(_, k)| g.eta_of(*k) + 1 > g.eta_of(i)).map(|(s, _)| s.clone())
            });
            match bad {
                None => Check::Pass,
                Some(s) => Check::Fail(format!("eta does not decrease across {s}")),
            }
        }
        Err(e) => Check::Fail(format!("not SN within fuel: {e}")),
    };
    out.record("sn", c);
    out
}

/// `(λw:ty. w) t`, a guaranteed redex of the same type as `t`.
fn with_redex(t: Term, ty: &Type) -> Term {
    let free = FreeNames::of_term(&t).lambda;
    let w = if free.contains("w") { fresh_name("w", &|n| free.contains(n)) } else { "w".to_string() };
    Term::apply(Term::lam(w.clone(), ty.clone(), Term::var(w)), t)
}

/// A single typed E-term eliminating `ty` that has at least one reduct.
fn reducible_elim(s: &mut Sampler, ctx: &Contexts, ty: &Type) -> Option<ETerm> {
    let (seq, _, _) = s.elim_seq(ctx, ty, 1, PIECE_BUDGET, true).ok()?;
    let e = seq.0.into_iter().next()?;
    if !eterm_reducts(&e).is_empty() {
        return Some(e);
    }
    match (e, ty) {
        (ETerm::Arg(u), Type::Arrow(a, _)) => Some(ETerm::Arg(with_redex(u, a))),
        (ETerm::Case { ann, left_var, left, right_var, right }, _) => {
            let left = with_redex(left, &ann);
            Some(ETerm::Case { ann, left_var, left, right_var, right })
        }
        _ => None,
    }
}

fn pick_free<'a>(s: &mut Sampler, names: impl Iterator<Item = (&'a String, &'a Type)>) -> Option<(String, Type)> {
    let all: Vec<_> = names.collect();
    all.choose(s.rng()).map(|(n, t)| ((*n).clone(), (*t).clone()))
}

fn substitution_lemma(ctx: &CaseCtx<'_>, j: &Judgement) -> CaseOutcome {
    let mut out = CaseOutcome::default();
    let mut s = ctx.sampler();
    let u = j.term();
    let free = FreeNames::of_term(u);
    let x = pick_free(&mut s, j.ctx().gamma.iter().filter(|(x, _)| free.lambda.contains(*x)));
    let a = pick_free(&mut s, j.ctx().delta.iter().filter(|(a, _)| free.mu.contains(*a)));

    // item 1: a step of u survives substitution into u
    let steps = redexes(u);
    let reduct = steps.choose(s.rng()).map(|st| step(u, st).expect("valid step"));
    let one_step = |from: &Term, to: &Term| reducts(from).iter().any(|r| alpha_eq(r, to));
    let item1_lambda = match (&reduct, &x) {
        (Some(u2), Some((x, xt))) => match s.term_in(j.ctx(), xt, PIECE_BUDGET) {
            Ok((t, _)) => {
                let (l, r) = (subst(u, x, &t), subst(u2, x, &t));
                if one_step(&l, &r) {
                    Check::Pass
                } else {
                    Check::Fail(format!("{l} does not reduce in one step to {r}"))
                }
            }
            Err(_) => Check::Skip,
        },
        _ => Check::Skip,
    };
    out.record("item1_lambda", item1_lambda);
    let item1_mu = match (&reduct, &a) {
        (Some(u2), Some((a, at))) => match s.elim_seq(j.ctx(), at, 1, PIECE_BUDGET, true) {
            Ok((seq, _, _)) if !seq.is_empty() => {
                let e = &seq.0[0];
                let (l, r) = (struct_subst(u, a, e), struct_subst(u2, a, e));
                if one_step(&l, &r) {
                    Check::Pass
                } else {
                    Check::Fail(format!("{l} does not reduce in one step to {r}"))
                }
            }
            _ => Check::Skip,
        },
        _ => Check::Skip,
    };
    out.record("item1_mu", item1_mu);

    // item 2: a step inside the substituted piece, followed by many steps
    // of the host term
    let t = j.term();
    let reaches = |from: &Term, to: &Term| match build_graph(from, ctx.cfg.fuel) {
        Ok(g) if g.find(to).is_some() => Check::Pass,
        Ok(_) => Check::Fail(format!("{to} is not reachable from {from}")),
        Err(e) => Check::Fail(format!("{from}: {e}")),
    };
    let item2_lambda = match &x {
        Some((x, xt)) => match s.term_in(j.ctx(), xt, PIECE_BUDGET) {
            Ok((v, _)) => {
                let v = if redexes(&v).is_empty() { with_redex(v, xt) } else { v };
                let rs = reducts(&v);
                let v2 = rs.choose(s.rng()).expect("has a redex");
                reaches(&subst(t, x, &v), &subst(t, x, v2))
            }
            Err(_) => Check::Skip,
        },
        None => Check::Skip,
    };
    out.record("item2_lambda", item2_lambda);
    let item2_mu = match &a {
        Some((a, at)) => match reducible_elim(&mut s, j.ctx(), at) {
            Some(e) => {
                let rs = eterm_reducts(&e);
                let e2 = rs.choose(s.rng()).expect("has a reduct");
                reaches(&struct_subst_seq(t, a, &Seq(vec![e])), &struct_subst_seq(t, a, &Seq(vec![e2.clone()])))
            }
            None => Check::Skip,
        },
        None => Check::Skip,
    };
    out.record("item2_mu", item2_mu);
    if let Ok(g) = build_graph(j.term(), ctx.cfg.fuel) {
        out.cover(&g);
    }
    out
}

fn nice_preservation(ctx: &CaseCtx<'_>, j: &Judgement) -> CaseOutcome {
    let mut out = CaseOutcome::default();
    let mut s = ctx.sampler();
    let len = s.rng().gen_range(1..=3);
    let Ok((mut seq, _, _)) = s.elim_seq(j.ctx(), j.ty(), len, PIECE_BUDGET, true) else {
        out.record("nice", Check::Skip);
        return out;
    };
    if seq.is_empty() || !seq.is_nice() {
        out.record("nice", Check::Skip);
        return out;
    }
    // make sure one element can step
    let i = s.rng().gen_range(0..seq.len());
    if let ETerm::Arg(u) = &seq.0[i] {
        if redexes(u).is_empty() {
            let ty = infer(j.ctx(), u).unwrap_or(Type::Bottom);
            seq.0[i] = ETerm::Arg(with_redex(u.clone(), &ty));
        }
    }
    let mut stepped = false;
    for (k, w) in seq.iter().enumerate() {
        for w2 in eterm_reducts(w) {
            stepped = true;
            let mut next = seq.clone();
            next.0[k] = w2;
            if !next.is_nice() {
                out.record("nice", Check::Fail(format!("reducing element {k} of {seq} gives {next}")));
                return out;
            }
        }
    }
    out.record("nice", if stepped { Check::Pass } else { Check::Skip });
    out
}

fn nice_seq(s: &mut Sampler, ctx: &Contexts, ty: &Type) -> Option<(Seq, Contexts)> {
    let len = s.rng().gen_range(1..=3);
    s.elim_seq(ctx, ty, len, PIECE_BUDGET, true).ok().map(|(w, _, c)| (w, c))
}

fn binder_avoiding(base: &str, ctx: &Contexts, avoid: &[&Term]) -> String {
    let mut taken: std::collections::HashSet<String> = ctx.gamma.keys().cloned().collect();
    for t in avoid {
        taken.extend(FreeNames::of_term(t).lambda);
    }
    if taken.contains(base) {
        fresh_name(base, &|n| taken.contains(n))
    } else {
        base.to_string()
    }
}

fn int_lemma(ctx: &CaseCtx<'_>, j: &Judgement) -> CaseOutcome {
    let mut out = CaseOutcome::default();
    let mut s = ctx.sampler();
    let pool = ctx.cfg.type_pool.clone();
    let fuel = ctx.cfg.fuel;

    // item 1: (x w̄) for a variable x and a nice w̄ of SN E-terms
    let c = match nice_seq(&mut s, j.ctx(), j.ty()) {
        Some((w, c)) => {
            let x = binder_avoiding("x", &c, &[]);
            if w.iter().all(|e| premise(&crate::reduction::embed_eterm(e))) {
                sn_check(&mut out, &apply_seq(Term::var(x), &w), fuel)
            } else {
                Check::Skip
            }
        }
        None => Check::Skip,
    };
    out.record("item1", c);

    // item 2: ((λx.t) u w̄) with t the base term
    let t = j.term();
    let free = FreeNames::of_term(t);
    let (x, xt) = pick_free(&mut s, j.ctx().gamma.iter().filter(|(x, _)| free.lambda.contains(*x)))
        .unwrap_or_else(|| (binder_avoiding("x", j.ctx(), &[t]), pool.choose(s.rng()).expect("pool").clone()));
    let c = match (s.term_in(j.ctx(), &xt, PIECE_BUDGET), nice_seq(&mut s, j.ctx(), j.ty())) {
        (Ok((u, _)), Some((w, _))) => {
            if premise(&u) && premise(&apply_seq(subst(t, &x, &u), &w)) {
                let redex = Term::apply(Term::lam(x.clone(), xt.clone(), t.clone()), u);
                sn_check(&mut out, &apply_seq(redex, &w), fuel)
            } else {
                Check::Skip
            }
        }
        _ => Check::Skip,
    };
    out.record("item2", c);

    // item 3: ((<t1, t2> πi) w̄)
    let other = pool.choose(s.rng()).expect("pool").clone();
    let c = match s.term_in(j.ctx(), &other, PIECE_BUDGET) {
        Ok((t2, _)) => {
            let first = s.rng().gen_bool(0.5);
            let (pair, proj) = if first {
                (Term::pair(t.clone(), t2.clone()), ETerm::Proj1)
            } else {
                (Term::pair(t2.clone(), t.clone()), ETerm::Proj2)
            };
            match nice_seq(&mut s, j.ctx(), j.ty()) {
                Some((w, _)) if premise(t) && premise(&t2) && premise(&apply_seq(t.clone(), &w)) => {
                    sn_check(&mut out, &apply_seq(Term::app(pair, proj), &w), fuel)
                }
                _ => Check::Skip,
            }
        }
        Err(_) => Check::Skip,
    };
    out.record("item3", c);

    // item 4: (ωi t [x1.u1, x2.u2])
    let other = pool.choose(s.rng()).expect("pool").clone();
    let result = pool.choose(s.rng()).expect("pool").clone();
    let left = s.rng().gen_bool(0.5);
    let x1 = binder_avoiding("x1", j.ctx(), &[t]);
    let x2 = binder_avoiding("x2", j.ctx(), &[t]);
    let (ty1, ty2) = if left { (j.ty().clone(), other.clone()) } else { (other.clone(), j.ty().clone()) };
    let c = match (
        s.term_in(&j.ctx().clone().with_var(x1.clone(), ty1), &result, PIECE_BUDGET),
        s.term_in(&j.ctx().clone().with_var(x2.clone(), ty2), &result, PIECE_BUDGET),
    ) {
        (Ok((u1, _)), Ok((u2, _))) => {
            let (inj, taken) = if left {
                (Term::inl(other, t.clone()), subst(&u1, &x1, t))
            } else {
                (Term::inr(other, t.clone()), subst(&u2, &x2, t))
            };
            if premise(t) && premise(&u1) && premise(&u2) && premise(&taken) {
                let case = ETerm::Case { ann: result, left_var: x1, left: u1, right_var: x2, right: u2 };
                sn_check(&mut out, &Term::app(inj, case), fuel)
            } else {
                Check::Skip
            }
        }
        _ => Check::Skip,
    };
    out.record("item4", c);

    // item 5: (μa.t w̄), and t[a:=*w₁][a:=*w̄′] = t[a:=*w̄]
    let (a, at, body) = mu_instance(&mut s, j);
    let mut mu_ctx = j.ctx().clone();
    mu_ctx.delta.remove(&a);
    let (c5, comp) = match nice_seq(&mut s, &mu_ctx, &at) {
        Some((w, _)) if !w.is_empty() => {
            let substituted = struct_subst_seq(&body, &a, &w);
            let comp = match w.0.split_first() {
                Some((w1, rest)) => {
                    let stepwise = struct_subst_seq(&struct_subst(&body, &a, w1), &a, &Seq(rest.to_vec()));
                    if alpha_eq(&stepwise, &substituted) {
                        Check::Pass
                    } else {
                        Check::Fail(format!("{stepwise} differs from {substituted}"))
                    }
                }
                None => unreachable!("w is nonempty"),
            };
            let c = if premise(&substituted) {
                sn_check(&mut out, &apply_seq(Term::mu(a.clone(), at.clone(), body.clone()), &w), fuel)
            } else {
                Check::Skip
            };
            (c, comp)
        }
        _ => (Check::Skip, Check::Skip),
    };
    out.record("item5", c5);
    out.record("item5_composition", comp);
    out
}

/// A μ-name, its type and a body of type `⊥` derived from the base
/// judgement: the judgement itself if it is a μ-abstraction, a `⊥`-typed
/// term with a name from Δ, or `[a] t` for a fresh `a`.
fn mu_instance(s: &mut Sampler, j: &Judgement) -> (String, Type, Term) {
    if let Term::Mu(a, ann, body) = j.term() {
        return (a.clone(), ann.clone(), (**body).clone());
    }
    if *j.ty() == Type::Bottom && !j.ctx().delta.is_empty() {
        let names: Vec<_> = j.ctx().delta.iter().collect();
        let (a, at) = names.choose(s.rng()).expect("nonempty");
        return ((*a).clone(), (*at).clone(), j.term().clone());
    }
    let taken = FreeNames::of_term(j.term()).mu;
    let a = if taken.contains("a") { fresh_name("a", &|n| taken.contains(n)) } else { "a".to_string() };
    (a.clone(), j.ty().clone(), Term::named(a, j.term().clone()))
}

fn delta_lemma(ctx: &CaseCtx<'_>, j: &Judgement) -> CaseOutcome {
    let mut out = CaseOutcome::default();
    let mut s = ctx.sampler();
    let sums: Vec<&Type> = ctx.cfg.type_pool.iter().filter(|t| matches!(t, Type::Or(..))).collect();
    let default_sum = Type::or(Type::var("P"), Type::var("Q"));
    let sum = sums.choose(s.rng()).copied().unwrap_or(&default_sum).clone();
    let c = delta_instance(&mut s, j, &sum)
        .map(|(premise_term, conclusion)| {
            if premise(&premise_term) {
                sn_check(&mut out, &conclusion, ctx.cfg.fuel)
            } else {
                Check::Skip
            }
        })
        .unwrap_or(Check::Skip);
    out.record("delta", c);
    out
}

/// `(t [x.(u w̄), y.(v w̄)])` and `((t [x.u, y.v]) w̄)` with `u` the base
/// term, weakened by a fresh `x`.
fn delta_instance(s: &mut Sampler, j: &Judgement, sum: &Type) -> Option<(Term, Term)> {
    let Type::Or(_, b) = sum else { return None };
    let (t, c1) = s.term_in(j.ctx(), sum, PIECE_BUDGET).ok()?;
    let (w, c2) = nice_seq(s, &c1, j.ty())?;
    let mut taken: std::collections::HashSet<String> = c2.gamma.keys().cloned().collect();
    taken.extend(FreeNames::of_term(&t).lambda);
    taken.extend(FreeNames::of_seq(&w).lambda);
    let x = fresh_name("x", &|n| taken.contains(n));
    let y = fresh_name("y", &|n| taken.contains(n));
    let (v, _) = s.term_in(&c2.clone().with_var(y.clone(), (**b).clone()), j.ty(), PIECE_BUDGET).ok()?;
    let u = j.term().clone();
    let result = crate::typing::elim_type_seq(j.ty(), &w).ok()?;
    let case_of = |l: Term, r: Term, ann: Type| ETerm::Case {
        ann,
        left_var: x.clone(),
        left: l,
        right_var: y.clone(),
        right: r,
    };
    let pushed = Term::app(t.clone(), case_of(apply_seq(u.clone(), &w), apply_seq(v.clone(), &w), result));
    let outer = apply_seq(Term::app(t, case_of(u, v, j.ty().clone())), &w);
    Some((pushed, outer))
}

fn candidate_closure(ctx: &CaseCtx<'_>, j: &Judgement) -> CaseOutcome {
    let mut out = CaseOutcome::default();
    let (depth, fuel) = (ctx.cfg.depth, ctx.cfg.fuel);
    if !member_test_fuel(j.term(), j.ty(), depth, fuel) {
        out.record("closed_under_reduction", Check::Skip);
        return out;
    }
    let g = match graph_or_fail(j.term(), fuel) {
        Ok(g) => g,
        Err(e) => {
            out.record("closed_under_reduction", Check::Fail(e));
            return out;
        }
    };
    out.cover(&g);
    for (i, t) in g.nodes().iter().enumerate().skip(1) {
        if !member_test_fuel(t, j.ty(), depth, fuel) {
            out.record("closed_under_reduction", Check::Fail(format!("reduct {t} fails the member test")));
            return out;
        }
        if g.eta_of(i) >= g.eta() {
            out.record("closed_under_reduction", Check::Fail(format!("eta does not drop at reduct {t}")));
            return out;
        }
    }
    out.record("closed_under_reduction", Check::Pass);
    out
}

fn mu_n(ctx: &CaseCtx<'_>, j: &Judgement) -> CaseOutcome {
    let mut out = CaseOutcome::default();
    let mut s = ctx.sampler();
    let t = j.term();
    if !premise(t) {
        out.record("mu_in_candidate", Check::Skip);
        return out;
    }
    let ty = ctx.cfg.type_pool.choose(s.rng()).expect("pool").clone();
    let taken = FreeNames::of_term(t).mu;
    let a = if taken.contains("a") { fresh_name("a", &|n| taken.contains(n)) } else { "a".to_string() };
    let m = Term::mu(a, ty.clone(), t.clone());
    let c = if member_test_fuel(&m, &ty, ctx.cfg.depth, ctx.cfg.fuel) {
        if let Ok(g) = build_graph(&m, ctx.cfg.fuel) {
            out.cover(&g);
        }
        Check::Pass
    } else {
        Check::Fail(format!("{m} fails the member test at {ty}"))
    };
    out.record("mu_in_candidate", c);
    out
}

fn adequation(ctx: &CaseCtx<'_>, j: &Judgement) -> CaseOutcome {
    let mut out = CaseOutcome::default();
    if let Ok(g) = build_graph(j.term(), ctx.cfg.fuel) {
        out.cover(&g);
    }
    let c = match adequation_failure(j, ctx.cfg.depth, ctx.cfg.fuel) {
        None => Check::Pass,
        Some(f) => Check::Fail(format!("{} rejected by {}", f.instance, f.rejected_by)),
    };
    out.record("adequation", c);
    out
}
