//! Abstract syntax, parser and printer for terms.

use std::fmt;

use itertools::Itertools;

use super::lexer::{Cursor, Pos, Tok};
use crate::error::Result;
use crate::rational::Rational;

pub const KEYWORDS: [&str; 13] =
    ["let", "in", "fst", "snd", "return", "thunk", "force", "sample", "flip", "fail", "ask", "or", "fresh"];

/// A term with the position of its first token. Equality ignores positions.
#[derive(Clone, Debug)]
pub struct Term {
    pub kind: TermKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TermKind {
    Var(String),
    /// A point label of some base space.
    Lit(String),
    /// `()`, pairs and the internal `n`-tuples used by testing contexts.
    Tuple(Vec<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
    Let(String, Box<Term>, Box<Term>),
    Return(Box<Term>),
    Thunk(Box<Term>),
    Force(Box<Term>),
    Sample(Vec<(String, Rational)>),
    Flip(Rational),
    Fail,
    Ask,
    Or(Vec<Term>),
    Fresh,
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        self.kind == other.kind
    }
}

impl From<TermKind> for Term {
    fn from(kind: TermKind) -> Term {
        Term { kind, pos: Pos::default() }
    }
}

impl Term {
    pub fn var(x: &str) -> Term {
        TermKind::Var(x.into()).into()
    }

    pub fn lit(l: &str) -> Term {
        TermKind::Lit(l.into()).into()
    }

    pub fn tuple(items: Vec<Term>) -> Term {
        TermKind::Tuple(items).into()
    }

    pub fn let_in(x: &str, a: Term, b: Term) -> Term {
        TermKind::Let(x.into(), Box::new(a), Box::new(b)).into()
    }

    pub fn thunk(t: Term) -> Term {
        TermKind::Thunk(Box::new(t)).into()
    }

    pub fn force(t: Term) -> Term {
        TermKind::Force(Box::new(t)).into()
    }

    pub fn ret(t: Term) -> Term {
        TermKind::Return(Box::new(t)).into()
    }

    /// Variables free in the term, in first-occurrence order.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match &self.kind {
            TermKind::Var(x) => {
                if !bound.contains(x) && !out.contains(x) {
                    out.push(x.clone());
                }
            }
            TermKind::Let(x, a, b) => {
                a.collect_free(bound, out);
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            _ => self.children().for_each(|c| c.collect_free(bound, out)),
        }
    }

    fn children(&self) -> impl Iterator<Item = &Term> {
        let v: Vec<&Term> = match &self.kind {
            TermKind::Tuple(ts) | TermKind::Or(ts) => ts.iter().collect(),
            TermKind::Fst(t) | TermKind::Snd(t) | TermKind::Return(t) | TermKind::Thunk(t) | TermKind::Force(t) => {
                vec![t]
            }
            TermKind::Let(_, a, b) => vec![a, b],
            _ => Vec::new(),
        };
        v.into_iter()
    }

    /// `self[v/x]`. `v` must be closed, so no capture can occur.
    pub fn subst(&self, x: &str, v: &Term) -> Term {
        let go = |t: &Term| Box::new(t.subst(x, v));
        let kind = match &self.kind {
            TermKind::Var(y) if y == x => return v.clone(),
            TermKind::Let(y, a, b) if y == x => TermKind::Let(y.clone(), go(a), b.clone()),
            TermKind::Let(y, a, b) => TermKind::Let(y.clone(), go(a), go(b)),
            TermKind::Tuple(ts) => TermKind::Tuple(ts.iter().map(|t| t.subst(x, v)).collect()),
            TermKind::Or(ts) => TermKind::Or(ts.iter().map(|t| t.subst(x, v)).collect()),
            TermKind::Fst(t) => TermKind::Fst(go(t)),
            TermKind::Snd(t) => TermKind::Snd(go(t)),
            TermKind::Return(t) => TermKind::Return(go(t)),
            TermKind::Thunk(t) => TermKind::Thunk(go(t)),
            TermKind::Force(t) => TermKind::Force(go(t)),
            k => k.clone(),
        };
        Term { kind, pos: self.pos }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub pos: Pos,
    pub msg: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: warning: {}", self.pos, self.msg)
    }
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub term: Term,
    pub warnings: Vec<Warning>,
}

/// Parses a closed term.
pub fn parse(src: &str) -> Result<Parsed> {
    parse_open(src, &[])
}

/// Parses a term whose free variables may include `bound`. Identifiers that
/// are neither bound nor keywords are literals.
pub fn parse_open(src: &str, bound: &[&str]) -> Result<Parsed> {
    let mut cur = Cursor::new(src)?;
    let mut p = Parser { scope: bound.iter().map(|s| s.to_string()).collect(), warnings: Vec::new() };
    let term = p.term(&mut cur)?;
    if !cur.at_eof() {
        return Err(cur.unexpected("end of input"));
    }
    Ok(Parsed { term, warnings: p.warnings })
}

pub(crate) struct Parser {
    pub scope: Vec<String>,
    pub warnings: Vec<Warning>,
}

impl Parser {
    pub fn new() -> Parser {
        Parser { scope: Vec::new(), warnings: Vec::new() }
    }

    pub fn term(&mut self, cur: &mut Cursor) -> Result<Term> {
        let pos = cur.pos();
        if cur.eat_kw("let") {
            let xpos = cur.pos();
            let x = cur.ident()?;
            if KEYWORDS.contains(&x.as_str()) {
                return Err(super::lexer::syntax_error(xpos, format!("`{x}` is a keyword")));
            }
            cur.expect_sym("=")?;
            let a = self.term(cur)?;
            cur.expect_kw("in")?;
            if self.scope.contains(&x) {
                self.warnings.push(Warning { pos: xpos, msg: format!("`{x}` shadows an earlier binder") });
            }
            self.scope.push(x.clone());
            let b = self.term(cur);
            self.scope.pop();
            return Ok(Term { kind: TermKind::Let(x, Box::new(a), Box::new(b?)), pos });
        }
        self.app(cur)
    }

    fn app(&mut self, cur: &mut Cursor) -> Result<Term> {
        let pos = cur.pos();
        let wrap: Option<fn(Box<Term>) -> TermKind> = match cur.peek() {
            Tok::Ident(k) if k == "fst" => Some(TermKind::Fst),
            Tok::Ident(k) if k == "snd" => Some(TermKind::Snd),
            Tok::Ident(k) if k == "force" => Some(TermKind::Force),
            Tok::Ident(k) if k == "return" => Some(TermKind::Return),
            _ => None,
        };
        if let Some(w) = wrap {
            cur.next();
            let arg = self.app(cur)?;
            return Ok(Term { kind: w(Box::new(arg)), pos });
        }
        if cur.eat_kw("flip") {
            return Ok(Term { kind: TermKind::Flip(cur.rational()?), pos });
        }
        self.atom(cur)
    }

    fn atom(&mut self, cur: &mut Cursor) -> Result<Term> {
        let pos = cur.pos();
        let at = |kind| Ok(Term { kind, pos });
        match cur.peek().clone() {
            Tok::Sym("(") => {
                cur.next();
                if cur.eat_sym(")") {
                    return at(TermKind::Tuple(Vec::new()));
                }
                let first = self.term(cur)?;
                if cur.eat_sym(")") {
                    return Ok(first);
                }
                cur.expect_sym(",")?;
                let mut items = vec![first];
                items.extend(cur.list(",", ")", |c| self.term(c))?);
                at(TermKind::Tuple(items))
            }
            Tok::Ident(k) if k == "thunk" => {
                cur.next();
                cur.expect_sym("{")?;
                let body = self.term(cur)?;
                cur.expect_sym("}")?;
                at(TermKind::Thunk(Box::new(body)))
            }
            Tok::Ident(k) if k == "sample" => {
                cur.next();
                cur.expect_sym("{")?;
                let items = cur.list(",", "}", |c| {
                    let l = c.label()?;
                    c.expect_sym(":")?;
                    Ok((l, c.rational()?))
                })?;
                at(TermKind::Sample(items))
            }
            Tok::Ident(k) if k == "or" => {
                cur.next();
                cur.expect_sym("(")?;
                let items = cur.list(",", ")", |c| self.term(c))?;
                if items.is_empty() {
                    return Err(super::lexer::syntax_error(pos, "`or` needs at least one branch"));
                }
                at(TermKind::Or(items))
            }
            Tok::Ident(k) if k == "fail" => {
                cur.next();
                at(TermKind::Fail)
            }
            Tok::Ident(k) if k == "ask" => {
                cur.next();
                at(TermKind::Ask)
            }
            Tok::Ident(k) if k == "fresh" => {
                cur.next();
                at(TermKind::Fresh)
            }
            Tok::Ident(k) if KEYWORDS.contains(&k.as_str()) => Err(cur.unexpected("a term")),
            Tok::Ident(x) => {
                cur.next();
                at(if self.scope.contains(&x) { TermKind::Var(x) } else { TermKind::Lit(x) })
            }
            Tok::Int(l) => {
                cur.next();
                at(TermKind::Lit(l))
            }
            _ => Err(cur.unexpected("a term")),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Arguments of prefix forms are parsed at application level, so only
        // `let` needs parentheses there.
        let arg = |t: &Term| match t.kind {
            TermKind::Let(..) => format!("({t})"),
            _ => t.to_string(),
        };
        match &self.kind {
            TermKind::Var(x) | TermKind::Lit(x) => f.write_str(x),
            TermKind::Tuple(ts) if ts.len() == 1 => write!(f, "({},)", ts[0]),
            TermKind::Tuple(ts) => write!(f, "({})", ts.iter().join(", ")),
            TermKind::Fst(t) => write!(f, "fst {}", arg(t)),
            TermKind::Snd(t) => write!(f, "snd {}", arg(t)),
            TermKind::Let(x, a, b) => write!(f, "let {x} = {a} in {b}"),
            TermKind::Return(t) => write!(f, "return {}", arg(t)),
            TermKind::Thunk(t) => write!(f, "thunk {{ {t} }}"),
            TermKind::Force(t) => write!(f, "force {}", arg(t)),
            TermKind::Sample(items) => {
                write!(f, "sample {{ {} }}", items.iter().map(|(l, q)| format!("{l}: {q}")).join(", "))
            }
            TermKind::Flip(q) => write!(f, "flip {q}"),
            TermKind::Fail => f.write_str("fail"),
            TermKind::Ask => f.write_str("ask"),
            TermKind::Or(ts) => write!(f, "or({})", ts.iter().join(", ")),
            TermKind::Fresh => f.write_str("fresh"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::LabError;
    use proptest::prelude::*;

    #[test]
    fn let_flip_pair() {
        let t = parse("let x = flip 1/2 in (x, x)").unwrap().term;
        let want = Term::let_in(
            "x",
            TermKind::Flip(Rational::new(1, 2)).into(),
            Term::tuple(vec![Term::var("x"), Term::var("x")]),
        );
        assert_eq!(t, want);
    }

    #[test]
    fn thunked_choice_parses() {
        let t = parse("thunk { or(tt, ff) }").unwrap().term;
        assert_eq!(t, Term::thunk(TermKind::Or(vec![Term::lit("tt"), Term::lit("ff")]).into()));
    }

    #[test]
    fn force_binds_tighter_than_let() {
        let t = parse("let c = thunk { tt } in force c").unwrap().term;
        let TermKind::Let(_, _, body) = t.kind else { panic!("not a let") };
        assert_eq!(*body, Term::force(Term::var("c")));
        let u = parse("force let c = x in c");
        assert!(u.is_err(), "let is not an application argument");
    }

    #[test]
    fn unbalanced_brace_reports_position() {
        let err = parse("thunk {\n  or(tt, ff)\n").unwrap_err();
        assert_eq!(
            err,
            LabError::Syntax { line: 3, col: 1, msg: "expected `}`, found end of input".into() }
        );
    }

    #[test]
    fn shadowing_warns() {
        let p = parse("let x = tt in # first\nlet x = ff in x").unwrap();
        assert_eq!(p.warnings.len(), 1);
        assert_eq!(p.warnings[0].pos, Pos { line: 2, col: 5 });
    }

    #[test]
    fn substitution_respects_shadowing() {
        let t = parse_open("(x, let x = ff in x)", &["x"]).unwrap().term;
        let s = t.subst("x", &Term::lit("tt"));
        assert_eq!(s, parse("(tt, let x = ff in x)").unwrap().term);
        assert!(s.free_vars().is_empty());
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let lit = prop_oneof![Just("tt"), Just("ff"), Just("a")].prop_map(Term::lit);
        let leaf = prop_oneof![
            lit,
            Just(Term::tuple(Vec::new())),
            Just(TermKind::Fail.into()),
            Just(TermKind::Ask.into()),
            Just(TermKind::Fresh.into()),
            (0i64..=4).prop_map(|k| TermKind::Flip(Rational::new(k, 4)).into()),
            Just(TermKind::Sample(vec![("tt".into(), Rational::new(1, 3)), ("ff".into(), Rational::new(2, 3))]).into()),
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 1..=3).prop_map(Term::tuple),
                prop::collection::vec(inner.clone(), 1..=3).prop_map(|ts| TermKind::Or(ts).into()),
                inner.clone().prop_map(|t| TermKind::Fst(Box::new(t)).into()),
                inner.clone().prop_map(Term::force),
                inner.clone().prop_map(Term::ret),
                inner.clone().prop_map(Term::thunk),
                (inner.clone(), inner).prop_map(|(a, b)| {
                    // Reference the binder so printing has to keep it a variable.
                    Term::let_in("v", a, Term::tuple(vec![Term::var("v"), b]))
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_roundtrips(t in arb_term()) {
            let printed = t.to_string();
            let back = parse(&printed).map_err(|e| TestCaseError::fail(format!("{printed}: {e}")))?;
            prop_assert_eq!(back.term, t);
        }
    }
}
