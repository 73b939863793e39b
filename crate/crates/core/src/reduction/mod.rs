//! Cut elimination: redex discovery and one-step contraction.
//!
//! Five rule schemata:
//!
//! ```text
//! (λx.u v)                      ▷ u[x:=v]
//! (⟨t₁,t₂⟩ πᵢ)                  ▷ tᵢ
//! (ωᵢ t [x₁.u₁, x₂.u₂])          ▷ uᵢ[xᵢ:=t]
//! ((t [x₁.u₁, x₂.u₂]) ε)         ▷ (t [x₁.(u₁ ε), x₂.(u₂ ε)])
//! (μa.t ε)                      ▷ μa.t[a:=*ε]
//! ```
//!
//! The last two re-annotate: the case result (resp. μ) type `C` becomes
//! `elim_type(C, ε)`. When the annotation cannot be eliminated (untyped
//! input) the old annotation is kept and the step is reported as stale.

mod graph;
mod normalize;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{
    canonical, fresh_name, rename_mu, struct_subst, subst, ETerm, FreeNames, Term, Type,
};
use crate::typing::{elim_type, fmt_path};

pub use graph::{
    build_graph, build_graph_bounded, eta, eta_eterm, eta_seq, is_sn, is_sn_bounded, is_sn_eterm, GraphStats,
    ReductionGraph, SnVerdict,
};
pub use normalize::{format_trace, normalize, Normalized, Strategy, TraceStep};

/// Default bound on node expansions when building reduction graphs.
pub const DEFAULT_FUEL: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RedexKind {
    Beta,
    ProjPair(u8),
    CaseInj(u8),
    Permutative,
    Classical,
}

impl RedexKind {
    /// Index into the five schemata (projections and injections are
    /// grouped), used for coverage accounting.
    pub fn schema(self) -> usize {
        match self {
            RedexKind::Beta => 0,
            RedexKind::ProjPair(_) => 1,
            RedexKind::CaseInj(_) => 2,
            RedexKind::Permutative => 3,
            RedexKind::Classical => 4,
        }
    }

    pub const SCHEMA_NAMES: [&'static str; 5] = ["beta", "proj", "case", "perm", "classical"];
}

impl fmt::Display for RedexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RedexKind::Beta => f.write_str("beta"),
            RedexKind::ProjPair(i) => write!(f, "proj{i}"),
            RedexKind::CaseInj(i) => write!(f, "case{i}"),
            RedexKind::Permutative => f.write_str("perm"),
            RedexKind::Classical => f.write_str("classical"),
        }
    }
}

/// A redex position (child indices from the root) and its kind.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ReductionStep {
    pub path: Vec<usize>,
    pub kind: RedexKind,
}

impl fmt::Display for ReductionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", fmt_path(&self.path), self.kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("no {kind} redex at {}", fmt_path(.path))]
    InvalidStep { path: Vec<usize>, kind: RedexKind },
    #[error("fuel exhausted after {0} node expansions")]
    FuelExhausted(usize),
    #[error("reduction graph contains a cycle")]
    Cycle,
    #[error("{} distinct normal forms reached", .0.len())]
    NotConfluent(Vec<Term>),
}

/// Classifies `t` if its root is a redex.
pub fn redex_kind(t: &Term) -> Option<RedexKind> {
    let Term::App(head, e) = t else { return None };
    match (&**head, &**e) {
        (Term::Lam(..), ETerm::Arg(_)) => Some(RedexKind::Beta),
        (Term::Pair(..), ETerm::Proj1) => Some(RedexKind::ProjPair(1)),
        (Term::Pair(..), ETerm::Proj2) => Some(RedexKind::ProjPair(2)),
        (Term::Inl(..), ETerm::Case { .. }) => Some(RedexKind::CaseInj(1)),
        (Term::Inr(..), ETerm::Case { .. }) => Some(RedexKind::CaseInj(2)),
        (Term::App(_, inner), _) if inner.is_case() => Some(RedexKind::Permutative),
        (Term::Mu(..), _) => Some(RedexKind::Classical),
        _ => None,
    }
}

/// All redexes of `t` in lexicographic path order (leftmost-outermost
/// first).
pub fn redexes(t: &Term) -> Vec<ReductionStep> {
    fn walk(t: &Term, path: &mut Vec<usize>, out: &mut Vec<ReductionStep>) {
        if let Some(kind) = redex_kind(t) {
            out.push(ReductionStep { path: path.clone(), kind });
        }
        for i in 0..3 {
            if let Some(c) = t.child(i) {
                path.push(i);
                walk(c, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(t, &mut Vec::new(), &mut out);
    out
}

/// Contracts a root redex. The flag is set when a re-annotation had to be
/// skipped because the annotation does not match the elimination.
pub fn contract(t: &Term) -> Option<(Term, bool)> {
    let Term::App(head, e) = t else { return None };
    match (&**head, &**e) {
        (Term::Lam(x, _, body), ETerm::Arg(v)) => Some((subst(body, x, v), false)),
        (Term::Pair(a, _), ETerm::Proj1) => Some(((**a).clone(), false)),
        (Term::Pair(_, b), ETerm::Proj2) => Some(((**b).clone(), false)),
        (Term::Inl(_, v), ETerm::Case { left_var, left, .. }) => Some((subst(left, left_var, v), false)),
        (Term::Inr(_, v), ETerm::Case { right_var, right, .. }) => Some((subst(right, right_var, v), false)),
        (Term::App(scrutinee, inner), eps) if inner.is_case() => {
            let ETerm::Case { ann, left_var, left, right_var, right } = &**inner else { unreachable!() };
            let fv = FreeNames::of_eterm(eps);
            let (left_var, left) = push_into_branch(left_var, left, eps, &fv);
            let (right_var, right) = push_into_branch(right_var, right, eps, &fv);
            let (ann, stale) = reannotate(ann, eps);
            let case = ETerm::Case { ann, left_var, left, right_var, right };
            Some((Term::app((**scrutinee).clone(), case), stale))
        }
        (Term::Mu(a, ann, body), eps) => {
            let fv = FreeNames::of_eterm(eps);
            let (a, body) = if fv.mu.contains(a) {
                let body_fv = FreeNames::of_term(body);
                let b = fresh_name(a, &|n| fv.mu.contains(n) || body_fv.mu.contains(n));
                let renamed = rename_mu(body, a, &b);
                (b, renamed)
            } else {
                (a.clone(), (**body).clone())
            };
            let body = struct_subst(&body, &a, eps);
            let (ann, stale) = reannotate(ann, eps);
            Some((Term::Mu(a, ann, Box::new(body)), stale))
        }
        _ => None,
    }
}

fn push_into_branch(x: &str, body: &Term, eps: &ETerm, fv: &FreeNames) -> (String, Term) {
    if fv.lambda.contains(x) {
        let body_fv = FreeNames::of_term(body);
        let y = fresh_name(x, &|n| fv.lambda.contains(n) || body_fv.lambda.contains(n));
        let renamed = subst(body, x, &Term::Var(y.clone()));
        (y, Term::app(renamed, eps.clone()))
    } else {
        (x.to_string(), Term::app(body.clone(), eps.clone()))
    }
}

fn reannotate(ann: &Type, eps: &ETerm) -> (Type, bool) {
    match elim_type(ann, eps) {
        Ok(t) => (t, false),
        Err(_) => (ann.clone(), true),
    }
}

/// Performs `s` on `t`, also reporting whether annotations went stale.
pub fn step_annotated(t: &Term, s: &ReductionStep) -> Result<(Term, bool), ReduceError> {
    let invalid = || ReduceError::InvalidStep { path: s.path.clone(), kind: s.kind };
    let mut stale = false;
    let out = t.map_at(&s.path, &mut |sub| {
        if redex_kind(sub) != Some(s.kind) {
            return None;
        }
        let (r, st) = contract(sub)?;
        stale = st;
        Some(r)
    });
    out.map(|t| (t, stale)).ok_or_else(invalid)
}

pub fn step(t: &Term, s: &ReductionStep) -> Result<Term, ReduceError> {
    step_annotated(t, s).map(|(t, _)| t)
}

/// All one-step reducts, one per alpha-class, in redex order.
pub fn reducts(t: &Term) -> Vec<Term> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for s in redexes(t) {
        let r = step(t, &s).expect("redexes yields valid steps");
        if seen.insert(canonical(&r)) {
            out.push(r);
        }
    }
    out
}

/// Name of the placeholder head used to reduce a bare E-term. Not a valid
/// identifier, so it never clashes with user names.
pub(crate) const HOLE: &str = "#hole";

pub(crate) fn embed_eterm(e: &ETerm) -> Term {
    Term::app(Term::var(HOLE), e.clone())
}

fn unembed(t: Term) -> ETerm {
    match t {
        Term::App(h, e) if matches!(&*h, Term::Var(x) if x == HOLE) => *e,
        _ => unreachable!("reduction never touches the placeholder head"),
    }
}

/// One-step reducts of an E-term: reductions inside an argument or inside
/// a case branch.
pub fn eterm_reducts(e: &ETerm) -> Vec<ETerm> {
    reducts(&embed_eterm(e)).into_iter().map(unembed).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse_term};

    fn tm(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn root(kind: RedexKind) -> ReductionStep {
        ReductionStep { path: vec![], kind }
    }

    #[test]
    fn redex_examples() {
        assert_eq!(redexes(&tm("(\\x:P. x) y")), vec![root(RedexKind::Beta)]);
        assert_eq!(redexes(&tm("(z case[R]{x. x | y. y}) p1")), vec![root(RedexKind::Permutative)]);
        assert_eq!(redexes(&tm("(mu a:P/\\Q. [a] z) p1")), vec![root(RedexKind::Classical)]);
        assert!(redexes(&tm("mu a:P. [a] x")).is_empty());
    }

    #[test]
    fn redexes_are_in_path_order() {
        let t = tm("<(\\x:P. x) y, (\\x:P. x) ((\\x:P. x) z)>");
        let paths: Vec<_> = redexes(&t).into_iter().map(|s| s.path).collect();
        assert_eq!(paths, vec![vec![0], vec![1], vec![1, 1]]);
    }

    #[test]
    fn step_examples() {
        assert_eq!(step(&tm("(\\x:P. x) y"), &root(RedexKind::Beta)).unwrap(), tm("y"));
        assert_eq!(step(&tm("<u, v> p2"), &root(RedexKind::ProjPair(2))).unwrap(), tm("v"));
        assert_eq!(
            step(&tm("(z case[P/\\Q]{x. u | y. v}) p1"), &root(RedexKind::Permutative)).unwrap(),
            tm("z case[P]{x. u p1 | y. v p1}")
        );
        assert_eq!(
            step(&tm("(mu a:P->Q. [a] f) y"), &root(RedexKind::Classical)).unwrap(),
            tm("mu a:Q. [a] (f y)")
        );
        assert_eq!(
            step(&tm("inr[P] w case[R]{x. f x | y. g y}"), &root(RedexKind::CaseInj(2))).unwrap(),
            tm("g w")
        );
    }

    #[test]
    fn stale_steps_are_rejected() {
        let err = step(&tm("x y"), &root(RedexKind::Beta)).unwrap_err();
        assert!(matches!(err, ReduceError::InvalidStep { .. }));
        let err = step(&tm("(\\x:P. x) y"), &root(RedexKind::Classical)).unwrap_err();
        assert!(matches!(err, ReduceError::InvalidStep { .. }));
    }

    #[test]
    fn permutation_avoids_capturing_the_eliminator() {
        // x is free in the pushed argument and bound by the left branch
        let t = tm("(z case[P->R]{x. f | y. g}) x");
        let r = step(&t, &root(RedexKind::Permutative)).unwrap();
        assert!(alpha_eq(&r, &tm("z case[R]{q. f x | y. g x}")));
    }

    #[test]
    fn classical_step_avoids_capturing_a_free_mu_name() {
        // the argument mentions the outer a
        let t = tm("(mu a:P->Q. [a] f) (mu c:P. [a] k)");
        let (r, stale) = step_annotated(&t, &root(RedexKind::Classical)).unwrap();
        assert!(!stale);
        assert!(alpha_eq(&r, &tm("mu b:Q. [b] (f (mu c:P. [a] k))")));
    }

    #[test]
    fn untyped_annotation_goes_stale() {
        let (r, stale) = step_annotated(&tm("(mu a:P. [a] f) p1"), &root(RedexKind::Classical)).unwrap();
        assert!(stale);
        assert_eq!(r, tm("mu a:P. [a] (f p1)"));
    }

    #[test]
    fn reducts_examples() {
        assert!(reducts(&tm("y")).is_empty());
        assert_eq!(reducts(&tm("<(\\x:P.x) y, (\\x:P.x) z>")).len(), 2);
        assert!(reducts(&tm("mu a:P. [a] x")).is_empty());
        // two redexes, one alpha-class of reducts
        let t = tm("(\\x:P.x) ((\\z:P.z) y)");
        assert_eq!(redexes(&t).len(), 2);
        assert_eq!(reducts(&t).len(), 1);
    }

    #[test]
    fn eterm_reducts_stay_in_place() {
        let e = ETerm::Case {
            ann: Type::var("R"),
            left_var: "x".into(),
            left: tm("(\\w:P. w) x"),
            right_var: "y".into(),
            right: tm("y"),
        };
        let rs = eterm_reducts(&e);
        assert_eq!(rs.len(), 1);
        assert!(matches!(&rs[0], ETerm::Case { left, .. } if *left == tm("x")));
        assert!(eterm_reducts(&ETerm::Proj1).is_empty());
    }
}
