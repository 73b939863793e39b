//! Recursive-descent parser for the ASCII concrete syntax.

use thiserror::Error;

use super::term::{ETerm, Term, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unbound mu-name `{name}` at {line}:{col}")]
    UnboundMu { name: String, line: usize, col: usize },
}

const RESERVED: &[&str] = &["bot", "mu", "inl", "inr", "case", "p1", "p2"];

pub fn is_reserved(ident: &str) -> bool {
    RESERVED.contains(&ident)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Kw(&'static str),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    const SYMBOLS: &[&str] = &[
        "->", "\\/", "/\\", "\\", ":", ".", "<", ">", ",", "[", "]", "(", ")", "{", "}", "|",
    ];
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let tok = match RESERVED.iter().find(|k| **k == word) {
                Some(k) => Tok::Kw(k),
                None => Tok::Ident(word),
            };
            out.push(Token { tok, line, col });
            col += i - start;
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                out.push(Token { tok: Tok::Sym(s), line, col });
                i += s.len();
                col += s.len();
            }
            None => {
                return Err(ParseError::Syntax { line, col, msg: format!("unexpected character `{c}`") });
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    strict: bool,
    mu_scope: Vec<String>,
}

impl Parser {
    fn new(src: &str, strict: bool) -> Result<Parser, ParseError> {
        Ok(Parser { toks: lex(src)?, pos: 0, strict, mu_scope: Vec::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let t = &self.toks[self.pos];
        Err(ParseError::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Kw(k) => format!("keyword `{k}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }

    fn expect(&mut self, sym: &'static str) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(sym) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{sym}`, found {}", Self::describe(self.peek())))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected identifier, found {}", Self::describe(&other))),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            other => self.error(format!("unexpected {} after end of expression", Self::describe(other))),
        }
    }

    // Type ::= OrT ("->" Type)?
    fn ty(&mut self) -> Result<Type, ParseError> {
        let lhs = self.or_ty()?;
        if *self.peek() == Tok::Sym("->") {
            self.bump();
            return Ok(Type::arrow(lhs, self.ty()?));
        }
        Ok(lhs)
    }

    fn or_ty(&mut self) -> Result<Type, ParseError> {
        let mut lhs = self.and_ty()?;
        while *self.peek() == Tok::Sym("\\/") {
            self.bump();
            lhs = Type::or(lhs, self.and_ty()?);
        }
        Ok(lhs)
    }

    fn and_ty(&mut self) -> Result<Type, ParseError> {
        let mut lhs = self.atom_ty()?;
        while *self.peek() == Tok::Sym("/\\") {
            self.bump();
            lhs = Type::and(lhs, self.atom_ty()?);
        }
        Ok(lhs)
    }

    fn atom_ty(&mut self) -> Result<Type, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Type::Var(s))
            }
            Tok::Kw("bot") => {
                self.bump();
                Ok(Type::Bottom)
            }
            Tok::Sym("(") => {
                self.bump();
                let t = self.ty()?;
                self.expect(")")?;
                Ok(t)
            }
            other => self.error(format!("expected a type, found {}", Self::describe(&other))),
        }
    }

    fn starts_head(tok: &Tok) -> bool {
        matches!(
            tok,
            Tok::Ident(_) | Tok::Kw("inl" | "inr" | "mu") | Tok::Sym("\\" | "<" | "[" | "(")
        )
    }

    // Term ::= Head EArg*
    fn term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.head()?;
        loop {
            let tok = self.peek().clone();
            let e = match tok {
                Tok::Kw("p1") => {
                    self.bump();
                    ETerm::Proj1
                }
                Tok::Kw("p2") => {
                    self.bump();
                    ETerm::Proj2
                }
                Tok::Kw("case") => self.case()?,
                ref tok if Self::starts_head(tok) => ETerm::Arg(self.head()?),
                _ => break,
            };
            t = Term::app(t, e);
        }
        Ok(t)
    }

    fn case(&mut self) -> Result<ETerm, ParseError> {
        self.bump();
        self.expect("[")?;
        let ann = self.ty()?;
        self.expect("]")?;
        self.expect("{")?;
        let left_var = self.ident()?;
        self.expect(".")?;
        let left = self.term()?;
        self.expect("|")?;
        let right_var = self.ident()?;
        self.expect(".")?;
        let right = self.term()?;
        self.expect("}")?;
        Ok(ETerm::Case { ann, left_var, left, right_var, right })
    }

    fn head(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                Ok(Term::Var(x))
            }
            Tok::Sym("\\") => {
                self.bump();
                let x = self.ident()?;
                self.expect(":")?;
                let ann = self.ty()?;
                self.expect(".")?;
                Ok(Term::lam(x, ann, self.term()?))
            }
            Tok::Sym("<") => {
                self.bump();
                let a = self.term()?;
                self.expect(",")?;
                let b = self.term()?;
                self.expect(">")?;
                Ok(Term::pair(a, b))
            }
            Tok::Kw(k @ ("inl" | "inr")) => {
                self.bump();
                self.expect("[")?;
                let ann = self.ty()?;
                self.expect("]")?;
                let body = self.head()?;
                Ok(if k == "inl" { Term::inl(ann, body) } else { Term::inr(ann, body) })
            }
            Tok::Kw("mu") => {
                self.bump();
                let a = self.ident()?;
                self.expect(":")?;
                let ann = self.ty()?;
                self.expect(".")?;
                self.mu_scope.push(a.clone());
                let body = self.term();
                self.mu_scope.pop();
                Ok(Term::mu(a, ann, body?))
            }
            Tok::Sym("[") => {
                self.bump();
                let at = self.toks[self.pos].clone();
                let a = self.ident()?;
                if self.strict && !self.mu_scope.contains(&a) {
                    return Err(ParseError::UnboundMu { name: a, line: at.line, col: at.col });
                }
                self.expect("]")?;
                Ok(Term::named(a, self.head()?))
            }
            Tok::Sym("(") => {
                self.bump();
                let t = self.term()?;
                self.expect(")")?;
                Ok(t)
            }
            other => self.error(format!("expected a term, found {}", Self::describe(&other))),
        }
    }
}

pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(src, false)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

/// Parses a term; free μ-names are accepted.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    parse_term_with(src, false)
}

/// With `strict`, every `[a] t` must sit under a `mu a`.
pub fn parse_term_with(src: &str, strict: bool) -> Result<Term, ParseError> {
    let mut p = Parser::new(src, strict)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses a comma-separated list of `name:Type` declarations.
pub fn parse_decls(src: &str) -> Result<Vec<(String, Type)>, ParseError> {
    let mut p = Parser::new(src, false)?;
    let mut out = Vec::new();
    if *p.peek() == Tok::Eof {
        return Ok(out);
    }
    loop {
        let x = p.ident()?;
        p.expect(":")?;
        out.push((x, p.ty()?));
        if *p.peek() == Tok::Sym(",") {
            p.bump();
        } else {
            break;
        }
    }
    p.finish()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Type {
        Type::var(s)
    }

    #[test]
    fn type_examples() {
        assert_eq!(parse_type("P -> P").unwrap(), Type::arrow(p("P"), p("P")));
        assert_eq!(
            parse_type("bot -> P \\/ Q").unwrap(),
            Type::arrow(Type::Bottom, Type::or(p("P"), p("Q")))
        );
        assert_eq!(
            parse_type("P /\\ Q \\/ R").unwrap(),
            Type::or(Type::and(p("P"), p("Q")), p("R"))
        );
        assert_eq!(
            parse_type("P -> Q -> R").unwrap(),
            Type::arrow(p("P"), Type::arrow(p("Q"), p("R")))
        );
        assert_eq!(
            parse_type("P /\\ Q /\\ R").unwrap(),
            Type::and(Type::and(p("P"), p("Q")), p("R"))
        );
    }

    #[test]
    fn term_examples() {
        assert_eq!(parse_term("\\x:P. x").unwrap(), Term::lam("x", p("P"), Term::var("x")));
        assert_eq!(
            parse_term("(mu a:P. [a] y) p1").unwrap(),
            Term::app(Term::mu("a", p("P"), Term::named("a", Term::var("y"))), ETerm::Proj1)
        );
        assert_eq!(
            parse_term("z case[R]{x. x | y. y}").unwrap(),
            Term::app(
                Term::var("z"),
                ETerm::Case {
                    ann: p("R"),
                    left_var: "x".into(),
                    left: Term::var("x"),
                    right_var: "y".into(),
                    right: Term::var("y"),
                }
            )
        );
    }

    #[test]
    fn application_is_left_associative() {
        let t = parse_term("f x y").unwrap();
        let expected = Term::apply(Term::apply(Term::var("f"), Term::var("x")), Term::var("y"));
        assert_eq!(t, expected);
    }

    #[test]
    fn injection_takes_a_head_only() {
        let t = parse_term("inl[Q] x y").unwrap();
        assert_eq!(t, Term::apply(Term::inl(p("Q"), Term::var("x")), Term::var("y")));
    }

    #[test]
    fn comments_are_skipped() {
        let t = parse_term("-- identity\n\\x:P. x -- trailing").unwrap();
        assert_eq!(t, Term::lam("x", p("P"), Term::var("x")));
    }

    #[test]
    fn errors_carry_position() {
        match parse_term("\\x:P.\n  )") {
            Err(ParseError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_type("P ->").is_err());
        assert!(parse_term("x y )").is_err());
        assert!(parse_term("\\case:P. x").is_err());
    }

    #[test]
    fn strict_mode_rejects_free_mu_names() {
        assert!(parse_term("[a] x").is_ok());
        assert!(matches!(parse_term_with("[a] x", true), Err(ParseError::UnboundMu { .. })));
        assert!(parse_term_with("mu a:P. [a] x", true).is_ok());
    }

    #[test]
    fn declarations() {
        let d = parse_decls("f:P->P, y:P").unwrap();
        assert_eq!(d, vec![("f".into(), Type::arrow(p("P"), p("P"))), ("y".into(), p("P"))]);
        assert!(parse_decls("").unwrap().is_empty());
        assert!(parse_decls("f P").is_err());
    }
}
