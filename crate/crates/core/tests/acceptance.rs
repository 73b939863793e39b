//! End-to-end acceptance run over the default corpus. Prints one
//! PASS/FAIL line per criterion and exits nonzero if any criterion fails.
//!
//! `cargo test -p lambdamu-core --test acceptance`

mod support;

use std::time::{Duration, Instant};

use lambdamu_core::candidates::{battery, battery_is_sn, member_test};
use lambdamu_core::harness::{run_suite_on, run_suites, Corpus, GenConfig, SuiteName, SuiteReport};
use lambdamu_core::reduction::DEFAULT_FUEL;
use lambdamu_core::syntax::{parse_term, Seq, Term, Type};
use lambdamu_core::typing::{infer, Judgement};

use support::naive::naive_type;

const SR_BUDGET: Duration = Duration::from_secs(300);
const LEMMA_MIN_CASES: usize = 2_000;

struct Outcome {
    n: usize,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(n: usize, name: &'static str, problems: Vec<String>, summary: String) -> Outcome {
    let pass = problems.is_empty();
    let detail = if pass { summary } else { problems.join("; ") };
    Outcome { n, name, pass, detail }
}

fn suite_problems(r: &SuiteReport) -> Vec<String> {
    r.failures
        .iter()
        .take(3)
        .map(|f| format!("{} [{}] {} (minimized {}): {}", r.suite_name, f.check, f.judgement, f.minimized, f.detail))
        .collect()
}

fn naive_agrees(j: &Judgement) -> bool {
    let list = |m: &std::collections::BTreeMap<String, Type>| m.iter().map(|(k, v)| (k.clone(), v.clone())).collect::<Vec<_>>();
    let slow = naive_type(&list(&j.ctx().gamma), &list(&j.ctx().delta), j.term());
    slow == infer(j.ctx(), j.term()).ok()
}

fn main() {
    let cfg = GenConfig::default();
    assert_eq!(cfg.fuel, DEFAULT_FUEL);
    assert_eq!(DEFAULT_FUEL, 1_000_000);
    let start = Instant::now();
    let corpus = Corpus::build(&cfg).expect("corpus builds");
    let corpus_time = start.elapsed();
    eprintln!(
        "corpus: {} exhaustive (size <= {}) + {} sampled (size <= {}) in {:.1}s",
        corpus.exhaustive.len(),
        cfg.max_size,
        corpus.sampled.len(),
        cfg.sample_max_size,
        corpus_time.as_secs_f64()
    );
    let mut results = Vec::new();

    // 1. subject reduction
    let t = Instant::now();
    let sr = run_suite_on(SuiteName::SubjectReduction, &cfg, &corpus);
    let sr_time = corpus_time + t.elapsed();
    let mut problems = suite_problems(&sr);
    if corpus.sampled.len() != 10_000 {
        problems.push(format!("expected 10000 samples, got {}", corpus.sampled.len()));
    }
    if sr_time > SR_BUDGET {
        problems.push(format!("took {:.0}s including corpus build", sr_time.as_secs_f64()));
    }
    results.push(outcome(
        1,
        "subject reduction",
        problems,
        format!("{} judgements, {:.1}s including corpus build", sr.cases_run, sr_time.as_secs_f64()),
    ));

    // 2. strong normalization with full redex coverage
    let sn = run_suite_on(SuiteName::StrongNormalization, &cfg, &corpus);
    let mut problems = suite_problems(&sn);
    if !sn.coverage.missing().is_empty() {
        problems.push(format!("no coverage for {:?}", sn.coverage.missing()));
    }
    if sn.cases_run != corpus.len() {
        problems.push(format!("{} of {} judgements run", sn.cases_run, corpus.len()));
    }
    results.push(outcome(2, "strong normalization", problems, format!("{} judgements, coverage {:?}", sn.cases_run, sn.coverage)));

    // 3. confluence
    let cf = run_suite_on(SuiteName::Confluence, &cfg, &corpus);
    let mut problems = suite_problems(&cf);
    if cf.cases_run < corpus.exhaustive.len() {
        problems.push(format!("only {} graphs checked", cf.cases_run));
    }
    results.push(outcome(3, "confluence", problems, format!("{} graphs with a unique normal form", cf.cases_run)));

    // 4. lemma suites
    let mut problems = Vec::new();
    let mut counts = Vec::new();
    for name in [SuiteName::SubstitutionLemma, SuiteName::NicePreservation, SuiteName::IntLemma, SuiteName::DeltaLemma] {
        let r = run_suite_on(name, &cfg, &corpus);
        problems.extend(suite_problems(&r));
        for (check, n) in &r.checks {
            if *n < LEMMA_MIN_CASES {
                problems.push(format!("{} {}: only {} instances", r.suite_name, check, n));
            }
        }
        if name == SuiteName::IntLemma {
            for item in ["item1", "item2", "item3", "item4", "item5", "item5_composition"] {
                if !r.checks.contains_key(item) {
                    problems.push(format!("int_lemma never ran {item}"));
                }
            }
            if r.checks.get("item5") > r.checks.get("item5_composition") {
                problems.push("composition identity not checked on every item-5 instance".into());
            }
        }
        counts.push(format!("{} {:?}", r.suite_name, r.checks));
    }
    results.push(outcome(4, "lemma suites", problems, counts.join(", ")));

    // 5. candidates
    let mut problems = Vec::new();
    let mut batteries = 0;
    for ty in &cfg.type_pool {
        for d in 0..=2 {
            let b = battery(ty, d);
            batteries += 1;
            if !b.seqs.iter().all(Seq::is_nice) {
                problems.push(format!("battery({ty}, {d}) has a sequence that is not nice"));
            }
            if !b.contains(&Seq::empty()) {
                problems.push(format!("battery({ty}, {d}) lacks the empty sequence"));
            }
            if !battery_is_sn(&b, DEFAULT_FUEL) {
                problems.push(format!("battery({ty}, {d}) has a non-SN element"));
            }
            if d < 2 {
                let next = battery(ty, d + 1);
                if let Some(s) = b.seqs.iter().find(|s| !next.contains(s)) {
                    problems.push(format!("battery({ty}, {d}) element {s:?} missing at depth {}", d + 1));
                }
            }
            if !member_test(&Term::var("q"), ty, d) {
                problems.push(format!("variable rejected at {ty}, depth {d}"));
            }
            let mu_z = Term::mu("a", ty.clone(), Term::var("z"));
            if !member_test(&mu_z, ty, d) {
                problems.push(format!("{mu_z} rejected at {ty}, depth {d}"));
            }
        }
    }
    let cc = run_suite_on(SuiteName::CandidateClosure, &cfg, &corpus);
    problems.extend(suite_problems(&cc));
    let mn = run_suite_on(SuiteName::MuN, &cfg, &corpus);
    problems.extend(suite_problems(&mn));
    results.push(outcome(
        5,
        "candidates",
        problems,
        format!("{batteries} batteries; candidate_closure {} and mu_N {} cases", cc.cases_run, mn.cases_run),
    ));

    // 6. adequation
    let ad = run_suite_on(SuiteName::Adequation, &cfg, &corpus);
    let mut problems = suite_problems(&ad);
    if ad.cases_run < corpus.exhaustive.len() {
        problems.push(format!("only {} of {} exhaustive judgements", ad.cases_run, corpus.exhaustive.len()));
    }
    let remark = parse_term("\\z:bot. mu a:P. z").unwrap();
    let remark_ty = Type::arrow(Type::Bottom, Type::var("P"));
    if !member_test(&remark, &remark_ty, 2) {
        problems.push(format!("{remark} rejected at {remark_ty}"));
    }
    results.push(outcome(
        6,
        "adequation",
        problems,
        format!("{} judgements at depth {} ({} exhaustive), {remark} in I({remark_ty})", ad.cases_run, cfg.depth, corpus.exhaustive.len()),
    ));

    // 7. naive checker cross-check
    let disagreements: Vec<String> = corpus.iter().filter(|j| !naive_agrees(j)).take(3).map(|j| j.to_string()).collect();
    results.push(outcome(7, "naive checker agrees", disagreements, format!("{} judgements", corpus.len())));

    // 8. determinism, on a smaller corpus so "all" can run twice
    let small = GenConfig { max_size: 5, sample_count: 1_000, lemma_cases: 300, adequation_samples: 50, ..cfg.clone() };
    let a = run_suites(&SuiteName::ALL, &small).unwrap().without_timing();
    let b = run_suites(&SuiteName::ALL, &small).unwrap().without_timing();
    let (ja, jb) = (serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let mut problems = Vec::new();
    if ja != jb {
        problems.push("reports differ".into());
    }
    if !a.passed() {
        problems.push("small run has failures".into());
    }
    results.push(outcome(8, "determinism", problems, format!("two runs of all suites, {} bytes of identical report", ja.len())));

    for r in &results {
        println!("criterion {} {:<24} {}  {}", r.n, r.name, if r.pass { "PASS" } else { "FAIL" }, r.detail);
    }
    let failed: Vec<usize> = results.iter().filter(|r| !r.pass).map(|r| r.n).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria passed", results.len());
}
