//! Pretty printer; output always re-parses to an alpha-equal term.

use super::term::{ETerm, Term, Type};

pub fn print_type(t: &Type) -> String {
    let mut out = String::new();
    ty(t, Prec::Arrow, &mut out);
    out
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Arrow,
    Or,
    And,
    Atom,
}

fn ty(t: &Type, ctx: Prec, out: &mut String) {
    let own = match t {
        Type::Var(_) | Type::Bottom => Prec::Atom,
        Type::Arrow(..) => Prec::Arrow,
        Type::Or(..) => Prec::Or,
        Type::And(..) => Prec::And,
    };
    let parens = own < ctx;
    if parens {
        out.push('(');
    }
    match t {
        Type::Var(x) => out.push_str(x),
        Type::Bottom => out.push_str("bot"),
        Type::Arrow(a, b) => {
            ty(a, Prec::Or, out);
            out.push_str(" -> ");
            ty(b, Prec::Arrow, out);
        }
        Type::Or(a, b) => {
            ty(a, Prec::Or, out);
            out.push_str(" \\/ ");
            ty(b, Prec::And, out);
        }
        Type::And(a, b) => {
            ty(a, Prec::And, out);
            out.push_str(" /\\ ");
            ty(b, Prec::Atom, out);
        }
    }
    if parens {
        out.push(')');
    }
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    term(t, &mut out);
    out
}

pub fn print_eterm(e: &ETerm) -> String {
    let mut out = String::new();
    eterm(e, &mut out);
    out
}

/// Binder forms extend as far right as possible.
fn is_open(t: &Term) -> bool {
    matches!(t, Term::Lam(..) | Term::Mu(..))
}

fn term(t: &Term, out: &mut String) {
    match t {
        Term::Lam(x, ann, body) => {
            out.push('\\');
            out.push_str(x);
            out.push(':');
            out.push_str(&print_type(ann));
            out.push_str(". ");
            term(body, out);
        }
        Term::Mu(a, ann, body) => {
            out.push_str("mu ");
            out.push_str(a);
            out.push(':');
            out.push_str(&print_type(ann));
            out.push_str(". ");
            term(body, out);
        }
        Term::App(h, e) => {
            if is_open(h) {
                parenthesized(h, out);
            } else {
                term(h, out);
            }
            out.push(' ');
            eterm(e, out);
        }
        _ => head(t, out),
    }
}

fn parenthesized(t: &Term, out: &mut String) {
    out.push('(');
    term(t, out);
    out.push(')');
}

/// Prints `t` so that it parses as a single `Head`.
fn head(t: &Term, out: &mut String) {
    match t {
        Term::Var(x) => out.push_str(x),
        Term::Pair(a, b) => {
            out.push('<');
            term(a, out);
            out.push_str(", ");
            term(b, out);
            out.push('>');
        }
        Term::Inl(ann, b) | Term::Inr(ann, b) => {
            out.push_str(if matches!(t, Term::Inl(..)) { "inl[" } else { "inr[" });
            out.push_str(&print_type(ann));
            out.push_str("] ");
            head(b, out);
        }
        Term::Named(a, b) => {
            out.push('[');
            out.push_str(a);
            out.push_str("] ");
            head(b, out);
        }
        Term::Lam(..) | Term::Mu(..) | Term::App(..) => parenthesized(t, out),
    }
}

fn eterm(e: &ETerm, out: &mut String) {
    match e {
        ETerm::Arg(t) => head(t, out),
        ETerm::Proj1 => out.push_str("p1"),
        ETerm::Proj2 => out.push_str("p2"),
        ETerm::Case { ann, left_var, left, right_var, right } => {
            out.push_str("case[");
            out.push_str(&print_type(ann));
            out.push_str("]{");
            out.push_str(left_var);
            out.push_str(". ");
            term(left, out);
            out.push_str(" | ");
            out.push_str(right_var);
            out.push_str(". ");
            term(right, out);
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, parse_type};

    #[test]
    fn print_examples() {
        assert_eq!(print_term(&Term::lam("x", Type::var("P"), Term::var("x"))), "\\x:P. x");
        assert_eq!(print_term(&Term::pair(Term::var("x"), Term::var("y"))), "<x, y>");
        let t = parse_term("mu a:P. [a](f y)").unwrap();
        assert_eq!(print_term(&t), "mu a:P. [a] (f y)");
    }

    #[test]
    fn types_minimal_parens() {
        for src in ["P -> Q -> R", "(P -> Q) -> R", "P /\\ Q \\/ R", "P /\\ (Q \\/ R)", "P \\/ (Q \\/ R)", "P \\/ Q \\/ R", "((P -> bot) -> bot) -> P"] {
            assert_eq!(print_type(&parse_type(src).unwrap()), src);
        }
    }

    #[test]
    fn open_heads_and_arguments_are_parenthesized() {
        for src in [
            "(\\x:P. x) y",
            "f (\\x:P. x) z",
            "(mu a:P -> P. [a] f) y",
            "f (g y)",
            "inl[Q] (f x)",
            "[a] (x p1)",
            "<(\\x:P. x) y, z case[R]{u. u | v. \\w:P. v}>",
            "inr[P] inl[Q] [a] x",
        ] {
            let t = parse_term(src).unwrap();
            assert_eq!(print_term(&t), src);
        }
    }
}
