//! Finite, depth-bounded approximations of reducibility candidates.
//!
//! Every candidate here is the image `I(A)` of a type under the
//! interpretation sending all propositional variables to the set of
//! strongly normalizing terms. A [`Battery`] is a finite set of nice
//! sequences inside `I(A)⊥`; a term passes [`member_test`] when it stays
//! strongly normalizing under every sequence of the battery. Passing is a
//! necessary condition for membership in `I(A)`, never a sufficient one.
//!
//! Batteries and inhabitant sets contain free variables. `k` stands for an
//! arbitrary λ-variable and `z` for one of type `⊥`. Any λ-variable lies in
//! every candidate, so a clash with a free variable of the tested term
//! does not affect soundness.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use crate::harness::Enumerator;
use crate::reduction::{is_sn, is_sn_eterm, DEFAULT_FUEL};
use crate::syntax::{apply_seq, canonical_seq, fresh_name, ETerm, FreeNames, Seq, Substitution, Term, Type};
use crate::typing::{elim_type, Contexts, Judgement};

/// Name of the generic λ-variable used by inhabitants and batteries.
pub const VAR: &str = "k";
/// Name of the `⊥`-typed variable used under μ and in constant cases.
pub const BOTTOM_VAR: &str = "z";

/// Closed inhabitants added per type at depth 2 and above.
const CLOSED_PER_TYPE: usize = 3;

/// Upper bound on substitution combinations tried by [`adequation_check`].
pub const MAX_COMBINATIONS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Candidate {
    /// All strongly normalizing terms.
    Sn,
}

/// Assignment of candidates to propositional variables. Only the
/// everything-is-SN interpretation is supported.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Interpretation {
    vars: BTreeMap<String, Candidate>,
}

impl Interpretation {
    /// Sends every variable of `ty` to [`Candidate::Sn`].
    pub fn sn_for(ty: &Type) -> Interpretation {
        let mut vars = BTreeMap::new();
        for s in ty.subformulas() {
            if let Type::Var(p) = s {
                vars.insert(p, Candidate::Sn);
            }
        }
        Interpretation { vars }
    }

    pub fn get(&self, var: &str) -> Option<Candidate> {
        self.vars.get(var).copied()
    }

    /// Defined on every variable of `ty`.
    pub fn covers(&self, ty: &Type) -> bool {
        ty.subformulas().iter().all(|s| match s {
            Type::Var(p) => self.vars.contains_key(p),
            _ => true,
        })
    }
}

/// A finite set of nice sequences approximating `I(ty)⊥`. Always
/// contains the empty sequence, listed first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Battery {
    pub ty: Type,
    pub depth: usize,
    pub seqs: Vec<Seq>,
}

impl Battery {
    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seqs.is_empty()
    }

    /// Up to alpha.
    pub fn contains(&self, seq: &Seq) -> bool {
        let key = canonical_seq(seq);
        self.seqs.iter().any(|s| canonical_seq(s) == key)
    }
}

type Memo<T> = Mutex<HashMap<(Type, usize), Arc<T>>>;

fn battery_memo() -> &'static Memo<Battery> {
    static MEMO: OnceLock<Memo<Battery>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

fn inhabitant_memo() -> &'static Memo<Vec<Term>> {
    static MEMO: OnceLock<Memo<Vec<Term>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

fn memoized<T>(memo: &Memo<T>, ty: &Type, depth: usize, build: impl FnOnce() -> T) -> Arc<T> {
    let key = (ty.clone(), depth);
    if let Some(v) = memo.lock().expect("memo poisoned").get(&key) {
        return v.clone();
    }
    // built outside the lock: construction recurses into the same memo
    let v = Arc::new(build());
    memo.lock().expect("memo poisoned").entry(key).or_insert(v).clone()
}

/// A finite subset of `I(ty)`: a variable, μ-abstractions over a vacuous
/// name, and from depth 2 on a few closed inhabitants.
pub fn inhabitants(ty: &Type, depth: usize) -> Arc<Vec<Term>> {
    memoized(inhabitant_memo(), ty, depth, || build_inhabitants(ty, depth))
}

fn build_inhabitants(ty: &Type, depth: usize) -> Vec<Term> {
    let mut out = vec![Term::var(VAR)];
    if depth >= 1 {
        let z = Term::var(BOTTOM_VAR);
        let redex = Term::apply(Term::lam("w", Type::Bottom, Term::var("w")), z.clone());
        for body in [z, redex] {
            out.push(Term::mu("a", ty.clone(), body));
        }
    }
    if depth >= 2 {
        let mut en = Enumerator::new(std::slice::from_ref(ty));
        out.extend(en.of_type(&Contexts::new(), ty, depth + 1).into_iter().take(CLOSED_PER_TYPE));
    }
    out
}

/// The depth-bounded battery for `ty`; `battery(ty, d)` is included in
/// `battery(ty, d + 1)`.
pub fn battery(ty: &Type, depth: usize) -> Arc<Battery> {
    memoized(battery_memo(), ty, depth, || build_battery(ty, depth))
}

fn build_battery(ty: &Type, depth: usize) -> Battery {
    let mut seqs = vec![Seq::empty()];
    if depth > 0 {
        let d = depth - 1;
        match ty {
            Type::Var(_) | Type::Bottom => {}
            Type::Arrow(a, b) => {
                let rest = battery(b, d);
                for u in inhabitants(a, d).iter() {
                    for v in &rest.seqs {
                        seqs.push(v.prepend(ETerm::Arg(u.clone())));
                    }
                }
            }
            Type::And(a, b) => {
                for v in &battery(a, d).seqs {
                    seqs.push(v.prepend(ETerm::Proj1));
                }
                for v in &battery(b, d).seqs {
                    seqs.push(v.prepend(ETerm::Proj2));
                }
            }
            Type::Or(a, b) => {
                let (left, right) = (battery(a, d), battery(b, d));
                for u in &left.seqs {
                    for v in &right.seqs {
                        seqs.push(Seq(vec![spine_case(a, u, v)]));
                    }
                }
                let z = Term::var(BOTTOM_VAR);
                seqs.push(Seq(vec![ETerm::Case {
                    ann: Type::Bottom,
                    left_var: "x".into(),
                    left: z.clone(),
                    right_var: "y".into(),
                    right: z,
                }]));
            }
        }
    }
    let mut seen = HashSet::new();
    seqs.retain(|s| seen.insert(canonical_seq(s)));
    Battery { ty: ty.clone(), depth, seqs }
}

/// `[x.(x ū), y.(y v̄)]`, annotated with the type `ū` leaves of `left`.
fn spine_case(left_ty: &Type, u: &Seq, v: &Seq) -> ETerm {
    let ann = u
        .iter()
        .try_fold(left_ty.clone(), |t, e| elim_type(&t, e).ok())
        .unwrap_or(Type::Bottom);
    let free = FreeNames::of_seq(u).lambda;
    let x = if free.contains("x") { fresh_name("x", &|n| free.contains(n)) } else { "x".to_string() };
    let free = FreeNames::of_seq(v).lambda;
    let y = if free.contains("y") { fresh_name("y", &|n| free.contains(n)) } else { "y".to_string() };
    ETerm::Case {
        ann,
        left: apply_seq(Term::var(x.clone()), u),
        left_var: x,
        right: apply_seq(Term::var(y.clone()), v),
        right_var: y,
    }
}

/// Every element of every sequence of the battery is strongly
/// normalizing within `fuel`.
pub fn battery_is_sn(b: &Battery, fuel: usize) -> bool {
    b.seqs.iter().flat_map(|s| s.iter()).all(|e| is_sn_eterm(e, fuel).is_sn())
}

/// `(t w̄)` is strongly normalizing for every `w̄` in `battery(ty, depth)`.
/// Running out of fuel counts as a failure.
pub fn member_test(t: &Term, ty: &Type, depth: usize) -> bool {
    member_test_fuel(t, ty, depth, DEFAULT_FUEL)
}

pub fn member_test_fuel(t: &Term, ty: &Type, depth: usize, fuel: usize) -> bool {
    first_rejecting(t, ty, depth, fuel).is_none()
}

/// The first battery sequence under which `t` is not shown SN.
pub fn first_rejecting(t: &Term, ty: &Type, depth: usize, fuel: usize) -> Option<Seq> {
    battery(ty, depth).seqs.iter().find(|w| !is_sn(&apply_seq(t.clone(), w), fuel).is_sn()).cloned()
}

/// A substitution instance on which the adequation check failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdequationFailure {
    /// The term after substituting candidates into the judgement.
    pub instance: Term,
    pub rejected_by: Seq,
}

/// Substitutes inhabitants for the free λ-variables and battery
/// sequences for the free μ-names of `j`, then runs [`member_test`] at
/// the judgement's type. At most [`MAX_COMBINATIONS`] combinations are
/// tried: all of them when the product is small enough, otherwise
/// combination `k` takes option `k mod nᵢ` in coordinate `i`, which still
/// uses every option of every coordinate.
pub fn adequation_check(j: &Judgement, depth: usize) -> bool {
    adequation_failure(j, depth, DEFAULT_FUEL).is_none()
}

pub fn adequation_failure(j: &Judgement, depth: usize, fuel: usize) -> Option<AdequationFailure> {
    let free = FreeNames::of_term(j.term());
    let mut lambda: Vec<(&String, Arc<Vec<Term>>)> = Vec::new();
    for (x, ty) in &j.ctx().gamma {
        if free.lambda.contains(x) {
            lambda.push((x, inhabitants(ty, depth)));
        }
    }
    let mut mu: Vec<(&String, Arc<Battery>)> = Vec::new();
    for (a, ty) in &j.ctx().delta {
        if free.mu.contains(a) {
            mu.push((a, battery(ty, depth)));
        }
    }
    let radices: Vec<usize> =
        lambda.iter().map(|(_, v)| v.len()).chain(mu.iter().map(|(_, b)| b.seqs.len())).collect();
    for choice in combinations(&radices) {
        let mut s = Substitution::new();
        for ((x, opts), &i) in lambda.iter().zip(&choice) {
            s = s.term(x.as_str(), opts[i].clone());
        }
        for ((a, bat), &i) in mu.iter().zip(&choice[lambda.len()..]) {
            s = s.structural(a.as_str(), bat.seqs[i].clone());
        }
        let instance = s.apply(j.term());
        if let Some(w) = first_rejecting(&instance, j.ty(), depth, fuel) {
            return Some(AdequationFailure { instance, rejected_by: w });
        }
    }
    None
}

/// Index tuples for the given radices, capped at [`MAX_COMBINATIONS`].
pub fn combinations(radices: &[usize]) -> Vec<Vec<usize>> {
    if radices.contains(&0) {
        return Vec::new();
    }
    let total = radices.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n));
    match total {
        Some(total) if total <= MAX_COMBINATIONS => (0..total)
            .map(|mut k| {
                radices
                    .iter()
                    .map(|&n| {
                        let i = k % n;
                        k /= n;
                        i
                    })
                    .collect()
            })
            .collect(),
        _ => (0..MAX_COMBINATIONS).map(|k| radices.iter().map(|&n| k % n).collect()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, parse_type};
    use crate::typing::judge;

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn tm(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn atomic_battery_is_trivial() {
        for d in 0..4 {
            assert_eq!(battery(&ty("P"), d).seqs, vec![Seq::empty()]);
            assert_eq!(battery(&ty("bot"), d).seqs, vec![Seq::empty()]);
        }
    }

    #[test]
    fn arrow_battery_at_depth_one() {
        let b = battery(&ty("P -> Q"), 1);
        assert_eq!(b.seqs, vec![Seq::empty(), Seq(vec![ETerm::Arg(Term::var(VAR))])]);
    }

    #[test]
    fn or_battery_at_depth_one() {
        let b = battery(&ty("P \\/ Q"), 1);
        assert_eq!(b.len(), 3);
        let ETerm::Case { left, right, .. } = &b.seqs[1].0[0] else { panic!("expected a case") };
        assert_eq!((left, right), (&tm("x"), &tm("y")));
        let ETerm::Case { left, right, .. } = &b.seqs[2].0[0] else { panic!("expected a case") };
        assert_eq!((left, right), (&tm("z"), &tm("z")));
    }

    #[test]
    fn inhabitants_grow_with_depth() {
        assert_eq!(*inhabitants(&ty("P"), 0), vec![tm("k")]);
        assert!(inhabitants(&ty("P"), 1).contains(&tm("mu a:P. z")));
        assert!(inhabitants(&ty("P -> P"), 2).contains(&tm("\\v0:P. v0")));
    }

    #[test]
    fn membership_examples() {
        assert!(member_test(&tm("\\x:P. x"), &ty("P -> P"), 2));
        assert!(member_test(&tm("mu a:P. z"), &ty("P"), 2));
        assert!(member_test(&tm("\\z:bot. mu a:P. z"), &ty("bot -> P"), 2));
        for d in 0..=2 {
            assert!(member_test(&tm("x"), &ty("(P -> Q) /\\ (P \\/ Q)"), d));
        }
        // δ is normal, so it passes the empty sequence, but δ δ diverges
        let delta = tm("\\x:P. x x");
        assert!(member_test_fuel(&delta, &ty("P"), 2, 1000));
        let omega_arg = Seq(vec![ETerm::Arg(delta.clone())]);
        assert!(!is_sn(&apply_seq(delta, &omega_arg), 1000).is_sn());
    }

    #[test]
    fn adequation_examples() {
        let j = judge(&Contexts::new(), &tm("\\z:bot. mu a:P. z")).unwrap();
        assert!(adequation_check(&j, 2));
        let j = judge(&Contexts::new().with_var("x", ty("P")), &tm("x")).unwrap();
        assert!(adequation_check(&j, 2));
        let j = judge(&Contexts::new(), &tm("(\\x:P -> P. x) (\\y:P. y)")).unwrap();
        assert!(adequation_check(&j, 0));
    }

    #[test]
    fn structural_substitution_is_applied() {
        let ctx = Contexts::new().with_var("f", ty("P \\/ Q")).with_mu("b", ty("P \\/ Q"));
        let j = judge(&ctx, &tm("mu c:P. [b] f")).unwrap();
        assert!(adequation_failure(&j, 2, DEFAULT_FUEL).is_none());
    }

    #[test]
    fn combination_cap() {
        assert_eq!(combinations(&[2, 3]).len(), 6);
        assert_eq!(combinations(&[]), vec![Vec::<usize>::new()]);
        let big = combinations(&[10, 10]);
        assert_eq!(big.len(), MAX_COMBINATIONS);
        for i in 0..10 {
            assert!(big.iter().any(|c| c[0] == i) && big.iter().any(|c| c[1] == i));
        }
    }

    #[test]
    fn interpretation_covers_type_variables() {
        let t = ty("(P -> Q) \\/ bot");
        let i = Interpretation::sn_for(&t);
        assert!(i.covers(&t));
        assert_eq!(i.get("Q"), Some(Candidate::Sn));
        assert!(!i.covers(&ty("R")));
    }
}
