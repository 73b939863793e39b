//! Formulas and proof terms.
//!
//! λ-names and μ-names live in separate namespaces; both are plain
//! identifiers and the constructor they appear in decides which alphabet
//! they belong to.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A propositional formula built from variables and `⊥` with `→`, `∧`, `∨`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Var(String),
    Bottom,
    Arrow(Box<Type>, Box<Type>),
    And(Box<Type>, Box<Type>),
    Or(Box<Type>, Box<Type>),
}

impl Type {
    pub fn var(name: impl Into<String>) -> Type {
        Type::Var(name.into())
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn and(left: Type, right: Type) -> Type {
        Type::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: Type, right: Type) -> Type {
        Type::Or(Box::new(left), Box::new(right))
    }

    /// `¬A`, encoded as `A → ⊥`.
    pub fn negation(t: Type) -> Type {
        Type::arrow(t, Type::Bottom)
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Type::Var(_) | Type::Bottom)
    }

    /// All subformulas, including `self`, in pre-order without duplicates.
    pub fn subformulas(&self) -> Vec<Type> {
        fn walk(t: &Type, out: &mut Vec<Type>) {
            if !out.contains(t) {
                out.push(t.clone());
            }
            match t {
                Type::Var(_) | Type::Bottom => {}
                Type::Arrow(a, b) | Type::And(a, b) | Type::Or(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

/// A proof term.
///
/// The four annotation sites (λ parameter, missing disjunct of an
/// injection, μ result, case result) make typing syntax-directed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Lam(String, Type, Box<Term>),
    App(Box<Term>, Box<ETerm>),
    Pair(Box<Term>, Box<Term>),
    /// `inl[B] t : A ∨ B`; the annotation is the absent right disjunct.
    Inl(Type, Box<Term>),
    /// `inr[A] t : A ∨ B`; the annotation is the absent left disjunct.
    Inr(Type, Box<Term>),
    Mu(String, Type, Box<Term>),
    /// `[a] t`: hands `t` to the continuation named `a`.
    Named(String, Box<Term>),
}

/// An elimination: something a term can be applied to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ETerm {
    Arg(Term),
    Proj1,
    Proj2,
    Case {
        ann: Type,
        left_var: String,
        left: Term,
        right_var: String,
        right: Term,
    },
}

/// A finite sequence of eliminations `w₁ … wₙ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Seq(pub Vec<ETerm>);

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn lam(x: impl Into<String>, ann: Type, body: Term) -> Term {
        Term::Lam(x.into(), ann, Box::new(body))
    }

    pub fn app(head: Term, arg: ETerm) -> Term {
        Term::App(Box::new(head), Box::new(arg))
    }

    /// `(head arg)` with a term argument.
    pub fn apply(head: Term, arg: Term) -> Term {
        Term::app(head, ETerm::Arg(arg))
    }

    pub fn pair(fst: Term, snd: Term) -> Term {
        Term::Pair(Box::new(fst), Box::new(snd))
    }

    pub fn inl(other: Type, body: Term) -> Term {
        Term::Inl(other, Box::new(body))
    }

    pub fn inr(other: Type, body: Term) -> Term {
        Term::Inr(other, Box::new(body))
    }

    pub fn mu(a: impl Into<String>, ann: Type, body: Term) -> Term {
        Term::Mu(a.into(), ann, Box::new(body))
    }

    pub fn named(a: impl Into<String>, body: Term) -> Term {
        Term::Named(a.into(), Box::new(body))
    }

    /// Number of AST nodes. Annotations are not counted and an `Arg`
    /// wrapper adds nothing beyond its term.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Lam(_, _, b) | Term::Inl(_, b) | Term::Inr(_, b) => 1 + b.size(),
            Term::Mu(_, _, b) | Term::Named(_, b) => 1 + b.size(),
            Term::App(h, e) => 1 + h.size() + e.size(),
            Term::Pair(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// The immediate subterm at child index `i`, using the same numbering
    /// as reduction paths: App head 0, argument/left branch 1, right
    /// branch 2.
    pub fn child(&self, i: usize) -> Option<&Term> {
        match (self, i) {
            (Term::Lam(_, _, b), 0)
            | (Term::Inl(_, b), 0)
            | (Term::Inr(_, b), 0)
            | (Term::Mu(_, _, b), 0)
            | (Term::Named(_, b), 0) => Some(b),
            (Term::Pair(a, _), 0) => Some(a),
            (Term::Pair(_, b), 1) => Some(b),
            (Term::App(h, _), 0) => Some(h),
            (Term::App(_, e), 1) => match &**e {
                ETerm::Arg(t) => Some(t),
                ETerm::Case { left, .. } => Some(left),
                _ => None,
            },
            (Term::App(_, e), 2) => match &**e {
                ETerm::Case { right, .. } => Some(right),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn subterm_at(&self, path: &[usize]) -> Option<&Term> {
        path.iter().try_fold(self, |t, &i| t.child(i))
    }

    /// Rebuilds `self` with the subterm at `path` replaced by `f(old)`.
    pub fn map_at(&self, path: &[usize], f: &mut dyn FnMut(&Term) -> Option<Term>) -> Option<Term> {
        let Some((&i, rest)) = path.split_first() else {
            return f(self);
        };
        let rebuilt = match (self, i) {
            (Term::Lam(x, a, b), 0) => Term::Lam(x.clone(), a.clone(), Box::new(b.map_at(rest, f)?)),
            (Term::Inl(a, b), 0) => Term::Inl(a.clone(), Box::new(b.map_at(rest, f)?)),
            (Term::Inr(a, b), 0) => Term::Inr(a.clone(), Box::new(b.map_at(rest, f)?)),
            (Term::Mu(x, a, b), 0) => Term::Mu(x.clone(), a.clone(), Box::new(b.map_at(rest, f)?)),
            (Term::Named(x, b), 0) => Term::Named(x.clone(), Box::new(b.map_at(rest, f)?)),
            (Term::Pair(a, b), 0) => Term::Pair(Box::new(a.map_at(rest, f)?), b.clone()),
            (Term::Pair(a, b), 1) => Term::Pair(a.clone(), Box::new(b.map_at(rest, f)?)),
            (Term::App(h, e), 0) => Term::App(Box::new(h.map_at(rest, f)?), e.clone()),
            (Term::App(h, e), 1 | 2) => {
                let e = match (&**e, i) {
                    (ETerm::Arg(t), 1) => ETerm::Arg(t.map_at(rest, f)?),
                    (ETerm::Case { ann, left_var, left, right_var, right }, _) => {
                        let (left, right) = if i == 1 {
                            (left.map_at(rest, f)?, right.clone())
                        } else {
                            (left.clone(), right.map_at(rest, f)?)
                        };
                        ETerm::Case {
                            ann: ann.clone(),
                            left_var: left_var.clone(),
                            left,
                            right_var: right_var.clone(),
                            right,
                        }
                    }
                    _ => return None,
                };
                Term::App(h.clone(), Box::new(e))
            }
            _ => return None,
        };
        Some(rebuilt)
    }

    pub fn replace_at(&self, path: &[usize], new: Term) -> Option<Term> {
        let mut new = Some(new);
        self.map_at(path, &mut |_| new.take())
    }

    /// Whether any μ-binder or `[a]` occurs.
    pub fn is_classical(&self) -> bool {
        match self {
            Term::Mu(..) | Term::Named(..) => true,
            Term::Var(_) => false,
            Term::Lam(_, _, b) | Term::Inl(_, b) | Term::Inr(_, b) => b.is_classical(),
            Term::Pair(a, b) => a.is_classical() || b.is_classical(),
            Term::App(h, e) => h.is_classical() || e.is_classical(),
        }
    }
}

impl ETerm {
    pub fn size(&self) -> usize {
        match self {
            ETerm::Arg(t) => t.size(),
            ETerm::Proj1 | ETerm::Proj2 => 1,
            ETerm::Case { left, right, .. } => 1 + left.size() + right.size(),
        }
    }

    pub fn is_case(&self) -> bool {
        matches!(self, ETerm::Case { .. })
    }

    fn is_classical(&self) -> bool {
        match self {
            ETerm::Arg(t) => t.is_classical(),
            ETerm::Proj1 | ETerm::Proj2 => false,
            ETerm::Case { left, right, .. } => left.is_classical() || right.is_classical(),
        }
    }
}

impl Seq {
    pub fn empty() -> Seq {
        Seq(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ETerm> {
        self.0.iter()
    }

    /// Only the last element may be a case.
    pub fn is_nice(&self) -> bool {
        match self.0.split_last() {
            None => true,
            Some((_, init)) => init.iter().all(|w| !w.is_case()),
        }
    }

    /// No element is a case.
    pub fn is_good(&self) -> bool {
        self.0.iter().all(|w| !w.is_case())
    }

    /// `w · self`
    pub fn prepend(&self, w: ETerm) -> Seq {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(w);
        v.extend(self.0.iter().cloned());
        Seq(v)
    }
}

impl From<Vec<ETerm>> for Seq {
    fn from(v: Vec<ETerm>) -> Seq {
        Seq(v)
    }
}

impl<'a> IntoIterator for &'a Seq {
    type Item = &'a ETerm;
    type IntoIter = std::slice::Iter<'a, ETerm>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// `(t w₁ … wₙ)`; `t` itself for the empty sequence.
pub fn apply_seq(t: Term, seq: &Seq) -> Term {
    seq.0.iter().fold(t, |acc, w| Term::app(acc, w.clone()))
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_type(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(self))
    }
}

impl fmt::Display for ETerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_eterm(self))
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        let parts: Vec<String> = self.0.iter().map(crate::syntax::print_eterm).collect();
        f.write_str(&parts.join(" "))
    }
}

impl Serialize for Type {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Type {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Type, D::Error> {
        let s = String::deserialize(d)?;
        crate::syntax::parse_type(&s).map_err(serde::de::Error::custom)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Term, D::Error> {
        let s = String::deserialize(d)?;
        crate::syntax::parse_term(&s).map_err(serde::de::Error::custom)
    }
}
