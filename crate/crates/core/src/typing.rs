//! Syntax-directed checking of `Γ ⊢ t : A ; Δ`.
//!
//! With the four annotation sites every rule synthesizes, so checking is
//! just synthesis followed by comparison.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::syntax::{ETerm, Seq, Term, Type};

/// `Γ` (λ-names) and `Δ` (μ-names).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Contexts {
    pub gamma: BTreeMap<String, Type>,
    pub delta: BTreeMap<String, Type>,
}

impl Contexts {
    pub fn new() -> Contexts {
        Contexts::default()
    }

    pub fn with_var(mut self, x: impl Into<String>, t: Type) -> Contexts {
        self.gamma.insert(x.into(), t);
        self
    }

    pub fn with_mu(mut self, a: impl Into<String>, t: Type) -> Contexts {
        self.delta.insert(a.into(), t);
        self
    }

    /// Whether every declaration of `self` also appears in `other`.
    pub fn is_sub_context_of(&self, other: &Contexts) -> bool {
        self.gamma.iter().all(|(k, v)| other.gamma.get(k) == Some(v))
            && self.delta.iter().all(|(k, v)| other.delta.get(k) == Some(v))
    }
}

impl fmt::Display for Contexts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.gamma.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        let d: Vec<String> = self.delta.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        write!(f, "{} ; {}", g.join(", "), d.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("rule {rule} failed at {}: {message}", fmt_path(.path))]
    Rule { rule: &'static str, path: Vec<usize>, message: String },
    #[error("unbound variable `{name}` at {}", fmt_path(.path))]
    UnboundVariable { name: String, path: Vec<usize> },
    #[error("unbound mu-name `{name}` at {}", fmt_path(.path))]
    UnboundMu { name: String, path: Vec<usize> },
    #[error("annotation mismatch at {}: annotated {expected}, found {actual}", fmt_path(.path))]
    AnnotationMismatch { path: Vec<usize>, expected: Type, actual: Type },
    #[error("expected type {expected}, found {actual}")]
    Mismatch { expected: Type, actual: Type },
}

impl TypeError {
    pub fn path(&self) -> Option<&[usize]> {
        match self {
            TypeError::Rule { path, .. }
            | TypeError::UnboundVariable { path, .. }
            | TypeError::UnboundMu { path, .. }
            | TypeError::AnnotationMismatch { path, .. } => Some(path),
            TypeError::Mismatch { .. } => None,
        }
    }
}

/// Dot-separated child indices, `root` for the empty path.
pub fn fmt_path(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot eliminate {ty} with {elim}")]
pub struct ElimMismatch {
    pub ty: Type,
    pub elim: String,
}

/// Result type of eliminating a `ty` with `e`.
pub fn elim_type(ty: &Type, e: &ETerm) -> Result<Type, ElimMismatch> {
    match (ty, e) {
        (Type::Arrow(_, b), ETerm::Arg(_)) => Ok((**b).clone()),
        (Type::And(a, _), ETerm::Proj1) => Ok((**a).clone()),
        (Type::And(_, b), ETerm::Proj2) => Ok((**b).clone()),
        (Type::Or(..), ETerm::Case { ann, .. }) => Ok(ann.clone()),
        _ => Err(ElimMismatch { ty: ty.clone(), elim: crate::syntax::print_eterm(e) }),
    }
}

/// A derivable sequent. Only `check` and `judge` construct one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Judgement {
    ctx: Contexts,
    term: Term,
    ty: Type,
}

impl Judgement {
    pub fn ctx(&self) -> &Contexts {
        &self.ctx
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn ty(&self) -> &Type {
        &self.ty
    }
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.ctx.gamma.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        let d: Vec<String> = self.ctx.delta.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        write!(f, "{} |- {} : {}", g.join(", "), self.term, self.ty)?;
        if !d.is_empty() {
            write!(f, " ; {}", d.join(", "))?;
        }
        Ok(())
    }
}

/// The type left after eliminating `ty` by each element of `seq` in turn.
pub fn elim_type_seq(ty: &Type, seq: &Seq) -> Result<Type, ElimMismatch> {
    seq.iter().try_fold(ty.clone(), |t, e| elim_type(&t, e))
}

/// The unique `A` with `Γ ⊢ t : A ; Δ`.
pub fn infer(ctx: &Contexts, t: &Term) -> Result<Type, TypeError> {
    Checker { gamma: ctx.gamma.clone(), delta: ctx.delta.clone(), path: Vec::new() }.infer(t)
}

pub fn check(ctx: &Contexts, t: &Term, expected: &Type) -> Result<Judgement, TypeError> {
    let actual = infer(ctx, t)?;
    if actual != *expected {
        return Err(TypeError::Mismatch { expected: expected.clone(), actual });
    }
    Ok(Judgement { ctx: ctx.clone(), term: t.clone(), ty: actual })
}

/// Infers and packages the judgement.
pub fn judge(ctx: &Contexts, t: &Term) -> Result<Judgement, TypeError> {
    let ty = infer(ctx, t)?;
    Ok(Judgement { ctx: ctx.clone(), term: t.clone(), ty })
}

struct Checker {
    gamma: BTreeMap<String, Type>,
    delta: BTreeMap<String, Type>,
    path: Vec<usize>,
}

impl Checker {
    fn rule<T>(&self, rule: &'static str, message: String) -> Result<T, TypeError> {
        Err(TypeError::Rule { rule, path: self.path.clone(), message })
    }

    fn at<T>(&mut self, i: usize, f: impl FnOnce(&mut Self) -> T) -> T {
        self.path.push(i);
        let r = f(self);
        self.path.pop();
        r
    }

    fn bind_lambda<T>(&mut self, x: &str, a: &Type, f: impl FnOnce(&mut Self) -> T) -> T {
        let saved = self.gamma.insert(x.to_string(), a.clone());
        let r = f(self);
        match saved {
            Some(old) => self.gamma.insert(x.to_string(), old),
            None => self.gamma.remove(x),
        };
        r
    }

    fn infer(&mut self, t: &Term) -> Result<Type, TypeError> {
        match t {
            Term::Var(x) => self.gamma.get(x).cloned().ok_or_else(|| TypeError::UnboundVariable {
                name: x.clone(),
                path: self.path.clone(),
            }),
            Term::Lam(x, a, body) => {
                let b = self.at(0, |c| c.bind_lambda(x, a, |c| c.infer(body)))?;
                Ok(Type::arrow(a.clone(), b))
            }
            Term::Pair(u, v) => {
                let a = self.at(0, |c| c.infer(u))?;
                let b = self.at(1, |c| c.infer(v))?;
                Ok(Type::and(a, b))
            }
            Term::Inl(b, u) => Ok(Type::or(self.at(0, |c| c.infer(u))?, b.clone())),
            Term::Inr(a, u) => Ok(Type::or(a.clone(), self.at(0, |c| c.infer(u))?)),
            Term::Named(a, u) => {
                let Some(expected) = self.delta.get(a).cloned() else {
                    return Err(TypeError::UnboundMu { name: a.clone(), path: self.path.clone() });
                };
                let got = self.at(0, |c| c.infer(u))?;
                if got != expected {
                    return self.rule("abs_i", format!("`{a}` expects {expected}, body has type {got}"));
                }
                Ok(Type::Bottom)
            }
            Term::Mu(a, ann, u) => {
                let saved = self.delta.insert(a.clone(), ann.clone());
                let body = self.at(0, |c| c.infer(u));
                match saved {
                    Some(old) => self.delta.insert(a.clone(), old),
                    None => self.delta.remove(a),
                };
                let body = body?;
                if body != Type::Bottom {
                    return self.rule("abs_e", format!("body must have type bot, found {body}"));
                }
                Ok(ann.clone())
            }
            Term::App(head, e) => {
                let h = self.at(0, |c| c.infer(head))?;
                self.eliminate(h, e)
            }
        }
    }

    fn eliminate(&mut self, h: Type, e: &ETerm) -> Result<Type, TypeError> {
        match (h, e) {
            (Type::Arrow(a, b), ETerm::Arg(v)) => {
                let got = self.at(1, |c| c.infer(v))?;
                if got != *a {
                    return self.rule("->e", format!("argument has type {got}, expected {a}"));
                }
                Ok(*b)
            }
            (h, ETerm::Arg(_)) => self.rule("->e", format!("applied a term of type {h}")),
            (Type::And(a, _), ETerm::Proj1) => Ok(*a),
            (Type::And(_, b), ETerm::Proj2) => Ok(*b),
            (h, ETerm::Proj1) => self.rule("/\\e1", format!("projection from {h}")),
            (h, ETerm::Proj2) => self.rule("/\\e2", format!("projection from {h}")),
            (Type::Or(a, b), ETerm::Case { ann, left_var, left, right_var, right }) => {
                let cl = self.at(1, |c| c.bind_lambda(left_var, &a, |c| c.infer(left)))?;
                if cl != *ann {
                    let mut path = self.path.clone();
                    path.push(1);
                    return Err(TypeError::AnnotationMismatch { path, expected: ann.clone(), actual: cl });
                }
                let cr = self.at(2, |c| c.bind_lambda(right_var, &b, |c| c.infer(right)))?;
                if cr != *ann {
                    let mut path = self.path.clone();
                    path.push(2);
                    return Err(TypeError::AnnotationMismatch { path, expected: ann.clone(), actual: cr });
                }
                Ok(ann.clone())
            }
            (h, ETerm::Case { .. }) => self.rule("\\/e", format!("case analysis on {h}")),
        }
    }
}

/// Every subterm position of `t` together with the context in scope there
/// and the subterm's type. Positions under ill-typed parts are skipped.
pub fn typed_positions(ctx: &Contexts, t: &Term) -> Vec<(Vec<usize>, Contexts, Type)> {
    fn walk(ctx: &Contexts, t: &Term, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, Contexts, Type)>) {
        let Ok(ty) = infer(ctx, t) else { return };
        out.push((path.clone(), ctx.clone(), ty.clone()));
        let mut visit = |i: usize, c: &Contexts, s: &Term, out: &mut Vec<_>| {
            path.push(i);
            walk(c, s, path, out);
            path.pop();
        };
        match t {
            Term::Var(_) => {}
            Term::Lam(x, a, b) => visit(0, &ctx.clone().with_var(x.clone(), a.clone()), b, out),
            Term::Inl(_, b) | Term::Inr(_, b) | Term::Named(_, b) => visit(0, ctx, b, out),
            Term::Mu(a, ann, b) => visit(0, &ctx.clone().with_mu(a.clone(), ann.clone()), b, out),
            Term::Pair(a, b) => {
                visit(0, ctx, a, out);
                visit(1, ctx, b, out);
            }
            Term::App(h, e) => {
                visit(0, ctx, h, out);
                match &**e {
                    ETerm::Arg(v) => visit(1, ctx, v, out),
                    ETerm::Proj1 | ETerm::Proj2 => {}
                    ETerm::Case { left_var, left, right_var, right, .. } => {
                        if let Ok(Type::Or(a, b)) = infer(ctx, h) {
                            visit(1, &ctx.clone().with_var(left_var.clone(), *a), left, out);
                            visit(2, &ctx.clone().with_var(right_var.clone(), *b), right, out);
                        }
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(ctx, t, &mut Vec::new(), &mut out);
    out
}
