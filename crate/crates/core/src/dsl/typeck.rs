//! Typing with per-monad gating of primitives, elaborating into a core
//! language with resolved literals and variable indices.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use super::syntax::{Term, TermKind};
use crate::error::{LabError, Result};
use crate::monads::Monad;
use crate::rational::Rational;
use crate::space::{FinSpace, Point};

/// Named base spaces visible to programs.
pub type Spaces = BTreeMap<String, FinSpace>;

/// Which monad a program is interpreted in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Effect {
    Monad(Monad),
    /// The name-generation monad truncated at the given stage bound.
    NameGen(usize),
}

impl Effect {
    pub const DEFAULT_STAGE_BOUND: usize = 5;

    pub fn parse(s: &str) -> Option<Effect> {
        if s == "namegen" {
            return Some(Effect::NameGen(Self::DEFAULT_STAGE_BOUND));
        }
        Monad::parse(s).map(Effect::Monad)
    }

    pub fn name(self) -> &'static str {
        match self {
            Effect::Monad(m) => m.name(),
            Effect::NameGen(_) => "namegen",
        }
    }

    pub fn monad(self) -> Option<Monad> {
        match self {
            Effect::Monad(m) => Some(m),
            Effect::NameGen(_) => None,
        }
    }

    fn allows(self, prim: Prim) -> bool {
        use Monad::*;
        match (prim, self) {
            (Prim::Sample, Effect::Monad(m)) => matches!(m, Distribution | Giry | SubGiry),
            (Prim::Fail, Effect::Monad(m)) => matches!(m, Maybe | SubGiry),
            (Prim::Ask, Effect::Monad(m)) => m == Reader,
            (Prim::Or, Effect::Monad(m)) => m == Lower,
            (Prim::Fresh, e) => matches!(e, Effect::NameGen(_)),
            _ => false,
        }
    }
}

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy)]
enum Prim {
    Sample,
    Fail,
    Ask,
    Or,
    Fresh,
}

impl Prim {
    fn name(self) -> &'static str {
        match self {
            Prim::Sample => "sample",
            Prim::Fail => "fail",
            Prim::Ask => "ask",
            Prim::Or => "or",
            Prim::Fresh => "fresh",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Type {
    Base(String),
    /// The object of names; only under name generation.
    Name,
    /// Unit is the empty tuple.
    Tuple(Vec<Type>),
    /// `T τ`.
    Thunk(Box<Type>),
    /// The type of `fail`, a subtype of everything.
    Empty,
}

impl Type {
    pub fn unit() -> Type {
        Type::Tuple(Vec::new())
    }

    pub fn base(name: &str) -> Type {
        Type::Base(name.into())
    }

    pub fn thunked(t: Type) -> Type {
        Type::Thunk(Box::new(t))
    }

    /// Least upper bound, treating `Empty` as bottom.
    pub fn join(&self, other: &Type) -> Option<Type> {
        match (self, other) {
            (Type::Empty, t) | (t, Type::Empty) => Some(t.clone()),
            (Type::Tuple(a), Type::Tuple(b)) if a.len() == b.len() => {
                a.iter().zip(b).map(|(x, y)| x.join(y)).collect::<Option<Vec<_>>>().map(Type::Tuple)
            }
            (Type::Thunk(a), Type::Thunk(b)) => a.join(b).map(Type::thunked),
            (a, b) if a == b => Some(a.clone()),
            _ => None,
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Base(s) => f.write_str(s),
            Type::Name => f.write_str("name"),
            Type::Tuple(ts) if ts.is_empty() => f.write_str("1"),
            Type::Tuple(ts) => write!(f, "({})", ts.iter().join(" × ")),
            Type::Thunk(t) => write!(f, "thunked({t})"),
            Type::Empty => f.write_str("0"),
        }
    }
}

/// Elaborated terms. Variables are indices into the environment, counted
/// from the outermost binder.
#[derive(Debug, Clone, PartialEq)]
pub enum Core {
    Var(usize),
    Lit(Point),
    Tuple(Vec<Typed>),
    Proj(usize, Box<Typed>),
    Let(Box<Typed>, Box<Typed>),
    Thunk(Box<Typed>),
    Force(Box<Typed>),
    Sample(Vec<(Point, Rational)>),
    Fail,
    Ask,
    Or(Vec<Typed>),
    Fresh,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Typed {
    pub core: Core,
    pub ty: Type,
}

fn err_at(t: &Term, msg: impl fmt::Display) -> LabError {
    LabError::Type(format!("{}: {msg}", t.pos))
}

pub const BOOL: &str = "bool";

struct Checker<'a> {
    effect: Effect,
    spaces: &'a Spaces,
}

/// Types `t` in context `ctx` (outermost binding first) and elaborates it.
pub fn typecheck(t: &Term, ctx: &[(String, Type)], effect: Effect, spaces: &Spaces) -> Result<Typed> {
    let mut env = ctx.to_vec();
    Checker { effect, spaces }.check(t, &mut env)
}

impl Checker<'_> {
    fn gate(&self, t: &Term, prim: Prim) -> Result<()> {
        if self.effect.allows(prim) {
            Ok(())
        } else {
            Err(err_at(t, format!("`{}` is not available under `{}`", prim.name(), self.effect)))
        }
    }

    fn space_usable(&self, s: &FinSpace) -> bool {
        match self.effect {
            Effect::Monad(m) => m.accepts(s.kind()),
            Effect::NameGen(_) => true,
        }
    }

    /// The base space containing every label. `tt`/`ff` prefer `bool`;
    /// otherwise the space must be unique.
    fn resolve(&self, t: &Term, labels: &[&str]) -> Result<String> {
        let holds = |s: &FinSpace| labels.iter().all(|l| s.contains(&Point::label(l)));
        let cands: Vec<&String> =
            self.spaces.iter().filter(|(_, s)| self.space_usable(s) && holds(s)).map(|(n, _)| n).collect();
        let boolish = labels.iter().all(|l| *l == "tt" || *l == "ff");
        if boolish && cands.iter().any(|n| *n == BOOL) {
            return Ok(BOOL.into());
        }
        match cands.as_slice() {
            [one] => Ok((*one).clone()),
            [] if labels.len() == 1 => {
                Err(err_at(t, format!("unbound variable or unknown literal `{}`", labels[0])))
            }
            [] => Err(err_at(
                t,
                format!("no usable space contains {}", labels.iter().map(|l| format!("`{l}`")).join(", ")),
            )),
            many => Err(err_at(
                t,
                format!("ambiguous literal {}: found in {}", labels.iter().join(", "), many.iter().join(", ")),
            )),
        }
    }

    fn bool_space(&self, t: &Term) -> Result<()> {
        match self.spaces.get(BOOL) {
            Some(s) if self.space_usable(s) && s.contains(&Point::label("tt")) && s.contains(&Point::label("ff")) => {
                Ok(())
            }
            _ => Err(err_at(t, "a usable `bool` space with points tt, ff is required")),
        }
    }

    fn check(&self, t: &Term, env: &mut Vec<(String, Type)>) -> Result<Typed> {
        let typed = |core, ty| Ok(Typed { core, ty });
        match &t.kind {
            TermKind::Var(x) => match env.iter().rposition(|(y, _)| y == x) {
                Some(i) => typed(Core::Var(i), env[i].1.clone()),
                None => Err(err_at(t, format!("unbound variable `{x}`"))),
            },
            TermKind::Lit(l) => {
                let s = self.resolve(t, &[l.as_str()])?;
                typed(Core::Lit(Point::label(l)), Type::Base(s))
            }
            TermKind::Tuple(ts) => {
                let items = ts.iter().map(|u| self.check(u, env)).collect::<Result<Vec<_>>>()?;
                let ty = Type::Tuple(items.iter().map(|i| i.ty.clone()).collect());
                typed(Core::Tuple(items), ty)
            }
            TermKind::Fst(u) | TermKind::Snd(u) => {
                let i = usize::from(matches!(t.kind, TermKind::Snd(_)));
                let inner = self.check(u, env)?;
                let ty = match &inner.ty {
                    Type::Tuple(fs) if fs.len() == 2 => fs[i].clone(),
                    Type::Empty => Type::Empty,
                    other => return Err(err_at(t, format!("projection from non-pair type {other}"))),
                };
                typed(Core::Proj(i, Box::new(inner)), ty)
            }
            TermKind::Let(x, a, b) => {
                let a = self.check(a, env)?;
                env.push((x.clone(), a.ty.clone()));
                let b = self.check(b, env);
                env.pop();
                let b = b?;
                let ty = b.ty.clone();
                typed(Core::Let(Box::new(a), Box::new(b)), ty)
            }
            TermKind::Return(u) => self.check(u, env),
            TermKind::Thunk(u) => {
                let inner = self.check(u, env)?;
                let ty = Type::thunked(inner.ty.clone());
                typed(Core::Thunk(Box::new(inner)), ty)
            }
            TermKind::Force(u) => {
                let inner = self.check(u, env)?;
                let ty = match &inner.ty {
                    Type::Thunk(x) => (**x).clone(),
                    Type::Empty => Type::Empty,
                    other => return Err(err_at(t, format!("`force` expects a thunk, found {other}"))),
                };
                typed(Core::Force(Box::new(inner)), ty)
            }
            TermKind::Sample(items) => {
                self.gate(t, Prim::Sample)?;
                if items.is_empty() {
                    return Err(err_at(t, "`sample` needs at least one outcome"));
                }
                let labels: Vec<&str> = items.iter().map(|(l, _)| l.as_str()).collect();
                let s = self.resolve(t, &labels)?;
                self.weights(t, items.iter().map(|(_, q)| q))?;
                let pts = items.iter().map(|(l, q)| (Point::label(l), q.clone())).collect();
                typed(Core::Sample(pts), Type::Base(s))
            }
            TermKind::Flip(q) => {
                self.gate(t, Prim::Sample)?;
                self.bool_space(t)?;
                let rest = Rational::one() - q;
                self.weights(t, [q, &rest])?;
                let pts = vec![(Point::label("tt"), q.clone()), (Point::label("ff"), rest)];
                typed(Core::Sample(pts), Type::base(BOOL))
            }
            TermKind::Fail => {
                self.gate(t, Prim::Fail)?;
                typed(Core::Fail, Type::Empty)
            }
            TermKind::Ask => {
                self.gate(t, Prim::Ask)?;
                self.bool_space(t)?;
                typed(Core::Ask, Type::base(BOOL))
            }
            TermKind::Or(ts) => {
                self.gate(t, Prim::Or)?;
                let items = ts.iter().map(|u| self.check(u, env)).collect::<Result<Vec<_>>>()?;
                let mut ty = Type::Empty;
                for (u, i) in ts.iter().zip(&items) {
                    ty = ty
                        .join(&i.ty)
                        .ok_or_else(|| err_at(u, format!("branch of type {} does not match {ty}", i.ty)))?;
                }
                typed(Core::Or(items), ty)
            }
            TermKind::Fresh => {
                self.gate(t, Prim::Fresh)?;
                typed(Core::Fresh, Type::Name)
            }
        }
    }

    /// Probabilities summing to 1, or at most 1 under sub-probability.
    fn weights<'q>(&self, t: &Term, qs: impl IntoIterator<Item = &'q Rational>) -> Result<()> {
        let mut total = Rational::zero();
        for q in qs {
            if !q.is_probability() {
                return Err(err_at(t, format!("weight {q} is not a probability")));
            }
            total = total + q;
        }
        let ok = match self.effect {
            Effect::Monad(Monad::SubGiry) => total <= Rational::one(),
            _ => total.is_one(),
        };
        if ok {
            Ok(())
        } else {
            Err(err_at(t, format!("weights sum to {total}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::syntax::parse;
    use crate::space::Kind;

    fn spaces() -> Spaces {
        let mut s = Spaces::new();
        s.insert(BOOL.into(), FinSpace::labels(BOOL, Kind::Set, &["tt", "ff"]).unwrap());
        s.insert("three".into(), FinSpace::labels("three", Kind::Set, &["a", "b", "c"]).unwrap());
        s
    }

    fn ty(src: &str, m: &str) -> Result<Type> {
        let t = parse(src).unwrap().term;
        typecheck(&t, &[], Effect::parse(m).unwrap(), &spaces()).map(|t| t.ty)
    }

    #[test]
    fn flip_is_bool_under_giry() {
        assert_eq!(ty("flip 1/2", "giry").unwrap(), Type::base(BOOL));
    }

    #[test]
    fn ask_is_rejected_under_giry() {
        let err = ty("ask", "giry").unwrap_err();
        assert!(err.to_string().contains("`ask` is not available under `giry`"), "{err}");
    }

    #[test]
    fn thunked_choice_under_lower() {
        assert_eq!(ty("thunk { or(tt, ff) }", "lower").unwrap(), Type::thunked(Type::base(BOOL)));
    }

    #[test]
    fn gating_table() {
        let cases = [
            ("sample { a: 1 }", ["distribution", "giry", "subgiry"].as_slice()),
            ("fail", &["maybe", "subgiry"]),
            ("ask", &["reader"]),
            ("or(a)", &["lower"]),
            ("fresh", &["namegen"]),
        ];
        for (src, ok) in cases {
            for m in ["distribution", "giry", "subgiry", "maybe", "reader", "lower", "namegen"] {
                assert_eq!(ty(src, m).is_ok(), ok.contains(&m), "{src} under {m}");
            }
        }
    }

    #[test]
    fn errors_are_reported() {
        assert!(ty("force tt", "lower").unwrap_err().to_string().contains("expects a thunk"));
        assert!(ty("or(tt, a)", "lower").unwrap_err().to_string().contains("does not match"));
        assert!(ty("zz", "lower").unwrap_err().to_string().contains("unknown literal `zz`"));
        assert!(ty("sample { a: 1/2, tt: 1/2 }", "giry").unwrap_err().to_string().contains("no usable space"));
        assert!(ty("sample { a: 1/2 }", "giry").unwrap_err().to_string().contains("sum to 1/2"));
        assert!(ty("sample { a: 1/2 }", "subgiry").is_ok());
        assert_eq!(ty("(fail, a)", "maybe").unwrap(), Type::Tuple(vec![Type::Empty, Type::base("three")]));
    }
}
