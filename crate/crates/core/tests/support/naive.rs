//! A deliberately naive rule-by-rule type checker used as an oracle for
//! `typing::infer`. Contexts are association lists searched from the
//! back; every rule is a separate match arm with no shared helpers.

use lambdamu_core::syntax::{ETerm, Term, Type};

pub fn naive_type(
    gamma: &[(String, Type)],
    delta: &[(String, Type)],
    t: &Term,
) -> Option<Type> {
    match t {
        // ax
        Term::Var(x) => gamma.iter().rev().find(|(n, _)| n == x).map(|(_, a)| a.clone()),
        // ->i
        Term::Lam(x, a, body) => {
            let mut g = gamma.to_vec();
            g.push((x.clone(), a.clone()));
            let b = naive_type(&g, delta, body)?;
            Some(Type::Arrow(Box::new(a.clone()), Box::new(b)))
        }
        // /\i
        Term::Pair(u, v) => {
            let a = naive_type(gamma, delta, u)?;
            let b = naive_type(gamma, delta, v)?;
            Some(Type::And(Box::new(a), Box::new(b)))
        }
        // \/i1, \/i2
        Term::Inl(b, u) => {
            let a = naive_type(gamma, delta, u)?;
            Some(Type::Or(Box::new(a), Box::new(b.clone())))
        }
        Term::Inr(a, u) => {
            let b = naive_type(gamma, delta, u)?;
            Some(Type::Or(Box::new(a.clone()), Box::new(b)))
        }
        // abs_i
        Term::Named(a, u) => {
            let expected = delta.iter().rev().find(|(n, _)| n == a)?.1.clone();
            let got = naive_type(gamma, delta, u)?;
            if got == expected {
                Some(Type::Bottom)
            } else {
                None
            }
        }
        // abs_e
        Term::Mu(a, ann, u) => {
            let mut d = delta.to_vec();
            d.push((a.clone(), ann.clone()));
            if naive_type(gamma, &d, u)? == Type::Bottom {
                Some(ann.clone())
            } else {
                None
            }
        }
        Term::App(head, e) => {
            let h = naive_type(gamma, delta, head)?;
            match (h, &**e) {
                // ->e
                (Type::Arrow(a, b), ETerm::Arg(v)) => {
                    if naive_type(gamma, delta, v)? == *a {
                        Some(*b)
                    } else {
                        None
                    }
                }
                // /\e1, /\e2
                (Type::And(a, _), ETerm::Proj1) => Some(*a),
                (Type::And(_, b), ETerm::Proj2) => Some(*b),
                // \/e
                (Type::Or(a, b), ETerm::Case { ann, left_var, left, right_var, right }) => {
                    let mut gl = gamma.to_vec();
                    gl.push((left_var.clone(), *a));
                    let mut gr = gamma.to_vec();
                    gr.push((right_var.clone(), *b));
                    let cl = naive_type(&gl, delta, left)?;
                    let cr = naive_type(&gr, delta, right)?;
                    if cl == *ann && cr == *ann {
                        Some(cl)
                    } else {
                        None
                    }
                }
                _ => None,
            }
        }
    }
}
