//! Free names, capture-avoiding substitution, structural substitution and
//! alpha-equivalence.

use std::collections::{HashMap, HashSet};

use super::term::{apply_seq, ETerm, Seq, Term};

/// Free λ-names and free μ-names of a term.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeNames {
    pub lambda: HashSet<String>,
    pub mu: HashSet<String>,
}

impl FreeNames {
    pub fn of_term(t: &Term) -> FreeNames {
        let mut fv = FreeNames::default();
        fv.add_term(t, &mut Vec::new(), &mut Vec::new());
        fv
    }

    pub fn of_eterm(e: &ETerm) -> FreeNames {
        let mut fv = FreeNames::default();
        fv.add_eterm(e, &mut Vec::new(), &mut Vec::new());
        fv
    }

    pub fn of_seq(seq: &Seq) -> FreeNames {
        let mut fv = FreeNames::default();
        for w in seq {
            fv.add_eterm(w, &mut Vec::new(), &mut Vec::new());
        }
        fv
    }

    fn add_term<'a>(&mut self, t: &'a Term, lams: &mut Vec<&'a str>, mus: &mut Vec<&'a str>) {
        match t {
            Term::Var(x) => {
                if !lams.contains(&x.as_str()) {
                    self.lambda.insert(x.clone());
                }
            }
            Term::Lam(x, _, b) => {
                lams.push(x);
                self.add_term(b, lams, mus);
                lams.pop();
            }
            Term::App(h, e) => {
                self.add_term(h, lams, mus);
                self.add_eterm(e, lams, mus);
            }
            Term::Pair(a, b) => {
                self.add_term(a, lams, mus);
                self.add_term(b, lams, mus);
            }
            Term::Inl(_, b) | Term::Inr(_, b) => self.add_term(b, lams, mus),
            Term::Mu(a, _, b) => {
                mus.push(a);
                self.add_term(b, lams, mus);
                mus.pop();
            }
            Term::Named(a, b) => {
                if !mus.contains(&a.as_str()) {
                    self.mu.insert(a.clone());
                }
                self.add_term(b, lams, mus);
            }
        }
    }

    fn add_eterm<'a>(&mut self, e: &'a ETerm, lams: &mut Vec<&'a str>, mus: &mut Vec<&'a str>) {
        match e {
            ETerm::Arg(t) => self.add_term(t, lams, mus),
            ETerm::Proj1 | ETerm::Proj2 => {}
            ETerm::Case { left_var, left, right_var, right, .. } => {
                lams.push(left_var);
                self.add_term(left, lams, mus);
                lams.pop();
                lams.push(right_var);
                self.add_term(right, lams, mus);
                lams.pop();
            }
        }
    }

    fn extend(&mut self, other: FreeNames) {
        self.lambda.extend(other.lambda);
        self.mu.extend(other.mu);
    }
}

/// Returns `base` decorated with primes until it avoids `taken`.
pub fn fresh_name(base: &str, taken: &dyn Fn(&str) -> bool) -> String {
    let stem = base.trim_end_matches('\'');
    let mut candidate = format!("{stem}'");
    while taken(&candidate) {
        candidate.push('\'');
    }
    candidate
}

#[derive(Clone, Debug)]
enum MuAction {
    Rename(String),
    Append(Seq),
}

/// A simultaneous substitution `[x₁:=u₁, …, a₁:=*w̄₁, …]`.
///
/// Every `(a v)` with `a` in the structural part becomes `(a (v' w̄))`
/// where `v'` is `v` with the whole substitution applied; the inserted
/// sequence is never traversed.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    terms: HashMap<String, Term>,
    mus: HashMap<String, MuAction>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn term(mut self, x: impl Into<String>, v: Term) -> Substitution {
        self.terms.insert(x.into(), v);
        self
    }

    pub fn structural(mut self, a: impl Into<String>, seq: Seq) -> Substitution {
        self.mus.insert(a.into(), MuAction::Append(seq));
        self
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.mus.is_empty()
    }

    pub fn apply(&self, t: &Term) -> Term {
        if self.is_empty() {
            return t.clone();
        }
        self.go(t)
    }

    pub fn apply_eterm(&self, e: &ETerm) -> ETerm {
        if self.is_empty() {
            return e.clone();
        }
        self.go_eterm(e)
    }

    fn go(&self, t: &Term) -> Term {
        match t {
            Term::Var(x) => self.terms.get(x).cloned().unwrap_or_else(|| t.clone()),
            Term::Lam(x, ann, body) => {
                let (x, sub) = self.under_lambda(x, body);
                Term::Lam(x, ann.clone(), Box::new(sub.apply(body)))
            }
            Term::App(h, e) => Term::App(Box::new(self.go(h)), Box::new(self.go_eterm(e))),
            Term::Pair(a, b) => Term::Pair(Box::new(self.go(a)), Box::new(self.go(b))),
            Term::Inl(ann, b) => Term::Inl(ann.clone(), Box::new(self.go(b))),
            Term::Inr(ann, b) => Term::Inr(ann.clone(), Box::new(self.go(b))),
            Term::Mu(a, ann, body) => {
                let (a, sub) = self.under_mu(a, body);
                Term::Mu(a, ann.clone(), Box::new(sub.apply(body)))
            }
            Term::Named(a, body) => {
                let v = self.go(body);
                match self.mus.get(a) {
                    None => Term::Named(a.clone(), Box::new(v)),
                    Some(MuAction::Rename(b)) => Term::Named(b.clone(), Box::new(v)),
                    Some(MuAction::Append(seq)) => Term::Named(a.clone(), Box::new(apply_seq(v, seq))),
                }
            }
        }
    }

    fn go_eterm(&self, e: &ETerm) -> ETerm {
        match e {
            ETerm::Arg(t) => ETerm::Arg(self.go(t)),
            ETerm::Proj1 => ETerm::Proj1,
            ETerm::Proj2 => ETerm::Proj2,
            ETerm::Case { ann, left_var, left, right_var, right } => {
                let (left_var, ls) = self.under_lambda(left_var, left);
                let (right_var, rs) = self.under_lambda(right_var, right);
                ETerm::Case {
                    ann: ann.clone(),
                    left_var,
                    left: ls.apply(left),
                    right_var,
                    right: rs.apply(right),
                }
            }
        }
    }

    /// The part of `self` that can affect `body`, minus the entries named
    /// by the binder.
    fn restrict(&self, body: &Term) -> (Substitution, FreeNames) {
        let fv = FreeNames::of_term(body);
        let sub = Substitution {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| fv.lambda.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
            mus: self
                .mus
                .iter()
                .filter(|(k, _)| fv.mu.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        };
        (sub, fv)
    }

    /// Names free in the range; a binder with one of these names must move.
    fn range_names(&self) -> FreeNames {
        let mut names = FreeNames::default();
        for v in self.terms.values() {
            names.extend(FreeNames::of_term(v));
        }
        for act in self.mus.values() {
            match act {
                MuAction::Rename(b) => {
                    names.mu.insert(b.clone());
                }
                MuAction::Append(seq) => names.extend(FreeNames::of_seq(seq)),
            }
        }
        names
    }

    fn under_lambda(&self, x: &str, body: &Term) -> (String, Substitution) {
        let (mut sub, fv) = self.restrict(body);
        sub.terms.remove(x);
        if sub.is_empty() {
            return (x.to_string(), sub);
        }
        let danger = sub.range_names();
        if !danger.lambda.contains(x) {
            return (x.to_string(), sub);
        }
        let y = fresh_name(x, &|n| danger.lambda.contains(n) || fv.lambda.contains(n));
        sub.terms.insert(x.to_string(), Term::Var(y.clone()));
        (y, sub)
    }

    fn under_mu(&self, a: &str, body: &Term) -> (String, Substitution) {
        let (mut sub, fv) = self.restrict(body);
        sub.mus.remove(a);
        if sub.is_empty() {
            return (a.to_string(), sub);
        }
        let danger = sub.range_names();
        if !danger.mu.contains(a) {
            return (a.to_string(), sub);
        }
        let b = fresh_name(a, &|n| danger.mu.contains(n) || fv.mu.contains(n));
        sub.mus.insert(a.to_string(), MuAction::Rename(b.clone()));
        (b, sub)
    }
}

/// `t[x:=v]`
pub fn subst(t: &Term, x: &str, v: &Term) -> Term {
    Substitution::new().term(x, v.clone()).apply(t)
}

/// `e[x:=v]`
pub fn subst_eterm(e: &ETerm, x: &str, v: &Term) -> ETerm {
    Substitution::new().term(x, v.clone()).apply_eterm(e)
}

/// `w̄[x:=v]`, pointwise.
pub fn subst_seq(seq: &Seq, x: &str, v: &Term) -> Seq {
    let sub = Substitution::new().term(x, v.clone());
    Seq(seq.iter().map(|w| sub.apply_eterm(w)).collect())
}

/// `t[a:=*e]`
pub fn struct_subst(t: &Term, a: &str, e: &ETerm) -> Term {
    struct_subst_seq(t, a, &Seq(vec![e.clone()]))
}

/// `t[a:=*w̄]`; the identity when `w̄` is empty.
pub fn struct_subst_seq(t: &Term, a: &str, seq: &Seq) -> Term {
    if seq.is_empty() {
        return t.clone();
    }
    Substitution::new().structural(a, seq.clone()).apply(t)
}

/// `e[a:=*w̄]` on an E-term.
pub fn struct_subst_eterm(e: &ETerm, a: &str, seq: &Seq) -> ETerm {
    if seq.is_empty() {
        return e.clone();
    }
    Substitution::new().structural(a, seq.clone()).apply_eterm(e)
}

/// `body` with free occurrences of the μ-name `a` renamed to `b`.
pub fn rename_mu(body: &Term, a: &str, b: &str) -> Term {
    let sub = Substitution {
        terms: HashMap::new(),
        mus: HashMap::from([(a.to_string(), MuAction::Rename(b.to_string()))]),
    };
    sub.apply(body)
}

/// Alpha-canonical form: every binder is renamed to `%n` where `n`
/// counts binders in pre-order. Two terms are alpha-equivalent iff their
/// canonical forms are equal. Canonical names are not valid identifiers,
/// so they never collide with free names.
pub fn canonical(t: &Term) -> Term {
    Canon::default().term(t)
}

pub fn canonical_eterm(e: &ETerm) -> ETerm {
    Canon::default().eterm(e)
}

pub fn canonical_seq(seq: &Seq) -> Seq {
    let mut c = Canon::default();
    Seq(seq.iter().map(|w| c.eterm(w)).collect())
}

pub fn alpha_eq(t: &Term, u: &Term) -> bool {
    canonical(t) == canonical(u)
}

pub fn alpha_eq_eterm(e: &ETerm, f: &ETerm) -> bool {
    canonical_eterm(e) == canonical_eterm(f)
}

#[derive(Default)]
struct Canon {
    next: usize,
    lams: Vec<(String, String)>,
    mus: Vec<(String, String)>,
}

impl Canon {
    fn fresh(&mut self) -> String {
        let n = format!("%{}", self.next);
        self.next += 1;
        n
    }

    fn lookup(scope: &[(String, String)], x: &str) -> Option<String> {
        scope.iter().rev().find(|(k, _)| k == x).map(|(_, v)| v.clone())
    }

    fn bind_lam(&mut self, x: &str, body: &Term) -> (String, Term) {
        let n = self.fresh();
        self.lams.push((x.to_string(), n.clone()));
        let b = self.term(body);
        self.lams.pop();
        (n, b)
    }

    fn term(&mut self, t: &Term) -> Term {
        match t {
            Term::Var(x) => Term::Var(Self::lookup(&self.lams, x).unwrap_or_else(|| x.clone())),
            Term::Lam(x, ann, body) => {
                let (n, b) = self.bind_lam(x, body);
                Term::Lam(n, ann.clone(), Box::new(b))
            }
            Term::App(h, e) => {
                let h = self.term(h);
                Term::App(Box::new(h), Box::new(self.eterm(e)))
            }
            Term::Pair(a, b) => {
                let a = self.term(a);
                Term::Pair(Box::new(a), Box::new(self.term(b)))
            }
            Term::Inl(ann, b) => Term::Inl(ann.clone(), Box::new(self.term(b))),
            Term::Inr(ann, b) => Term::Inr(ann.clone(), Box::new(self.term(b))),
            Term::Mu(a, ann, body) => {
                let n = self.fresh();
                self.mus.push((a.clone(), n.clone()));
                let b = self.term(body);
                self.mus.pop();
                Term::Mu(n, ann.clone(), Box::new(b))
            }
            Term::Named(a, body) => {
                let a = Self::lookup(&self.mus, a).unwrap_or_else(|| a.clone());
                Term::Named(a, Box::new(self.term(body)))
            }
        }
    }

    fn eterm(&mut self, e: &ETerm) -> ETerm {
        match e {
            ETerm::Arg(t) => ETerm::Arg(self.term(t)),
            ETerm::Proj1 => ETerm::Proj1,
            ETerm::Proj2 => ETerm::Proj2,
            ETerm::Case { ann, left_var, left, right_var, right } => {
                let (lv, l) = self.bind_lam(left_var, left);
                let (rv, r) = self.bind_lam(right_var, right);
                ETerm::Case { ann: ann.clone(), left_var: lv, left: l, right_var: rv, right: r }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, Type};

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn subst_examples() {
        assert_eq!(subst(&p("x"), "x", &p("y")), p("y"));
        assert_eq!(subst(&p("\\x:P. x"), "x", &p("y")), p("\\x:P. x"));
        let renamed = subst(&p("\\y:P. x"), "x", &p("y"));
        assert_eq!(renamed, Term::lam("y'", Type::var("P"), Term::var("y")));
    }

    #[test]
    fn subst_under_case_branch_avoids_capture() {
        let t = p("z case[R]{y. x | w. w}");
        let out = subst(&t, "x", &p("y"));
        assert!(alpha_eq(&out, &p("z case[R]{q. y | w. w}")));
        assert!(!alpha_eq(&out, &p("z case[R]{y. y | w. w}")));
    }

    #[test]
    fn struct_subst_examples() {
        assert_eq!(struct_subst(&p("[a] x"), "a", &ETerm::Arg(p("y"))), p("[a] (x y)"));
        assert_eq!(
            struct_subst(&p("[a] ([a] x)"), "a", &ETerm::Proj1),
            p("[a] (([a] (x p1)) p1)")
        );
        assert_eq!(struct_subst(&p("[b] x"), "a", &ETerm::Arg(p("y"))), p("[b] x"));
        let seq = Seq(vec![ETerm::Arg(p("y")), ETerm::Proj1]);
        assert_eq!(struct_subst_seq(&p("[a] x"), "a", &seq), p("[a] ((x y) p1)"));
        assert_eq!(struct_subst_seq(&p("[a] x"), "a", &Seq::empty()), p("[a] x"));
    }

    #[test]
    fn struct_subst_stops_at_rebinding_mu() {
        let t = p("[a] (mu a:P. [a] x)");
        let out = struct_subst(&t, "a", &ETerm::Proj2);
        assert_eq!(out, p("[a] ((mu a:P. [a] x) p2)"));
    }

    #[test]
    fn struct_subst_renames_capturing_binders() {
        // the inserted argument mentions y and b, which the term binds
        let t = p("\\y:P. mu b:Q. [a] y");
        let e = ETerm::Arg(p("mu c:R. [b] y"));
        let out = struct_subst(&t, "a", &e);
        let fv = FreeNames::of_term(&out);
        assert!(fv.lambda.contains("y"));
        assert!(fv.mu.contains("b"));
        assert!(fv.mu.contains("a"));
    }

    #[test]
    fn alpha_examples() {
        assert!(alpha_eq(&p("\\x:P. x"), &p("\\y:P. y")));
        assert!(!alpha_eq(&p("\\x:P. x"), &p("\\x:Q. x")));
        assert!(alpha_eq(&p("mu a:P. [a] x"), &p("mu b:P. [b] x")));
        assert!(!alpha_eq(&p("\\x:P. y"), &p("\\y:P. y")));
        assert!(!alpha_eq(&p("mu a:P. [c] x"), &p("mu c:P. [c] x")));
    }

    #[test]
    fn fresh_name_strips_existing_primes() {
        let taken = |n: &str| n == "x'";
        assert_eq!(fresh_name("x''", &taken), "x''");
        assert_eq!(fresh_name("x", &taken), "x''");
    }
}
