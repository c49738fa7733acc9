//! The monadic interpretation of elaborated terms.
//!
//! Values are points: base labels, tuples, and elements of `TX` wrapped as
//! points of the object `TX`. A term in context `Γ` denotes the map sending
//! an environment (one point per variable) to an element of `T⟦τ⟧`.

use std::fmt;

use itertools::Itertools;

use super::typeck::{Core, Effect, Spaces, Type, Typed};
use crate::error::{LabError, Result};
use crate::kleisli::KleisliMorphism;
use crate::monads::{Measure, Monad, MonadOps, Obj, TElem};
use crate::namegen::{NameGen, NgVal, Staged};
use crate::space::{self, FinSpace, Kind, Point};

/// A closed program's value: an element of `T⟦τ⟧`, or of `T⟦τ⟧(0)` under
/// name generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    T(TElem),
    Ng(NgVal),
}

impl Outcome {
    /// Number of listed outcomes: support points, generators, or names in
    /// the fresh block.
    pub fn size(&self) -> usize {
        match self {
            Outcome::T(TElem::Measure(m)) => m.len(),
            Outcome::T(TElem::Closed(c)) => c.generators().len(),
            Outcome::T(TElem::Maybe(v)) => usize::from(v.is_some()),
            Outcome::T(TElem::Reader(a, b)) => 1 + usize::from(a != b),
            Outcome::Ng(v) => v.block().unwrap_or(0),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::T(t) => write!(f, "{t}"),
            Outcome::Ng(v) => write!(f, "{v}"),
        }
    }
}

/// `⟦Γ ⊢ t : τ⟧`.
#[derive(Debug, Clone)]
pub struct Denotation {
    effect: Effect,
    ctx: Vec<(String, Type)>,
    body: Typed,
    spaces: Spaces,
}

fn unsupported(effect: Effect, what: &str) -> LabError {
    LabError::Unsupported { monad: effect.name().into(), what: what.into() }
}

impl Denotation {
    pub(crate) fn new(effect: Effect, ctx: Vec<(String, Type)>, body: Typed, spaces: Spaces) -> Denotation {
        Denotation { effect, ctx, body, spaces }
    }

    pub fn effect(&self) -> Effect {
        self.effect
    }

    pub fn ty(&self) -> &Type {
        &self.body.ty
    }

    pub fn ctx(&self) -> &[(String, Type)] {
        &self.ctx
    }

    pub fn body(&self) -> &Typed {
        &self.body
    }

    fn base(&self, name: &str) -> Result<&FinSpace> {
        self.spaces.get(name).ok_or_else(|| LabError::Type(format!("unknown space `{name}`")))
    }

    /// The object interpreting `ty`.
    pub fn obj(&self, ty: &Type) -> Result<Obj> {
        Ok(match ty {
            Type::Base(s) => Obj::space(self.base(s)?),
            Type::Tuple(ts) => Obj::Prod(ts.iter().map(|t| self.obj(t)).collect::<Result<_>>()?),
            Type::Thunk(t) => Obj::t(self.obj(t)?),
            Type::Empty => Obj::space(&FinSpace::discrete("0", Kind::Set, Vec::new())?),
            Type::Name => return Err(unsupported(self.effect, "names")),
        })
    }

    /// The staged object interpreting `ty` under name generation. Base
    /// spaces become constant presheaves on their labels.
    pub fn staged(&self, ty: &Type) -> Result<Staged> {
        Ok(match ty {
            Type::Base(s) => Staged::Consts(
                self.base(s)?
                    .points()
                    .iter()
                    .map(|p| p.as_label().map(Into::into).ok_or_else(|| LabError::Type(format!("`{p}` is not a label"))))
                    .collect::<Result<_>>()?,
            ),
            Type::Name => Staged::Names,
            Type::Tuple(ts) => Staged::Product(ts.iter().map(|t| self.staged(t)).collect::<Result<_>>()?),
            Type::Thunk(t) => Staged::t(self.staged(t)?),
            Type::Empty => Staged::Consts(Vec::new()),
        })
    }

    fn monad(&self) -> Result<Monad> {
        self.effect.monad().ok_or_else(|| unsupported(self.effect, "point-level evaluation"))
    }

    /// `⟦τ⟧` as a finite space, when it is one. Plain-set factors are read
    /// as discrete spaces of the kind of the other factors.
    pub fn space(&self, ty: &Type) -> Result<FinSpace> {
        let m = self.monad()?;
        match ty {
            Type::Base(s) => Ok(self.base(s)?.clone()),
            Type::Tuple(ts) => {
                let fs = ts.iter().map(|t| self.space(t)).collect::<Result<Vec<_>>>()?;
                product(fs)
            }
            Type::Thunk(t) => m.t_space(&self.space(t)?),
            Type::Empty => FinSpace::discrete("0", Kind::Set, Vec::new()),
            Type::Name => Err(unsupported(self.effect, "names")),
        }
    }

    /// `⟦Γ⟧`: the product of the context, whose points are tuples.
    pub fn context_space(&self) -> Result<FinSpace> {
        product(self.ctx.iter().map(|(_, t)| self.space(t)).collect::<Result<_>>()?)
    }

    /// `⟦t⟧(env)` for one point per context variable.
    pub fn apply(&self, env: &[Point]) -> Result<TElem> {
        let m = self.monad()?;
        if env.len() != self.ctx.len() {
            return Err(LabError::Mismatch(format!("{} values for a context of {}", env.len(), self.ctx.len())));
        }
        self.eval(m, &self.body, env)
    }

    fn eval(&self, m: Monad, t: &Typed, env: &[Point]) -> Result<TElem> {
        match &t.core {
            Core::Var(i) => m.eta(&self.obj(&t.ty)?, &env[*i]),
            Core::Lit(p) => m.eta(&self.obj(&t.ty)?, p),
            Core::Tuple(items) => {
                let factors = items.iter().map(|i| self.obj(&i.ty)).collect::<Result<Vec<_>>>()?;
                let ts = items.iter().map(|i| self.eval(m, i, env)).collect::<Result<Vec<_>>>()?;
                m.nabla(&factors, &ts)
            }
            Core::Proj(k, u) => {
                let v = self.eval(m, u, env)?;
                m.fmap(&self.obj(&t.ty)?, &v, &|p| {
                    p.as_tuple()
                        .and_then(|items| items.get(*k))
                        .cloned()
                        .ok_or_else(|| LabError::IllFormed(format!("`{p}` is not a pair")))
                })
            }
            Core::Let(a, b) => {
                let ta = self.eval(m, a, env)?;
                m.bind(&self.obj(&b.ty)?, &ta, &|v| {
                    let mut inner = env.to_vec();
                    inner.push(v.clone());
                    self.eval(m, b, &inner)
                })
            }
            Core::Thunk(u) => {
                let inner = self.eval(m, u, env)?;
                m.eta(&Obj::t(self.obj(&u.ty)?), &Point::elem(inner))
            }
            Core::Force(u) => {
                let v = self.eval(m, u, env)?;
                m.mu(&self.obj(&t.ty)?, &v)
            }
            Core::Sample(items) => {
                let o = self.obj(&t.ty)?;
                let ws = items.iter().map(|(p, q)| Ok((o.atom_rep(p)?, q.clone()))).collect::<Result<Vec<_>>>()?;
                Ok(TElem::Measure(Measure::from_weights(ws)))
            }
            Core::Fail => match m {
                Monad::Maybe => Ok(TElem::Maybe(None)),
                Monad::SubGiry => Ok(TElem::Measure(Measure::zero())),
                _ => Err(unsupported(self.effect, "fail")),
            },
            Core::Ask => Ok(TElem::Reader(Point::label("tt"), Point::label("ff"))),
            Core::Or(items) => {
                let mut pts = Vec::new();
                for i in items {
                    let v = self.eval(m, i, env)?;
                    let c = v.as_closed().ok_or_else(|| unsupported(self.effect, "or"))?;
                    pts.extend(c.generators().iter().cloned());
                }
                m.closure_elem(&self.obj(&t.ty)?, &pts)
            }
            Core::Fresh => Err(unsupported(self.effect, "fresh")),
        }
    }

    /// `⟦t⟧` at stage `s` of the name-generation monad.
    pub fn apply_ng(&self, s: usize, env: &[NgVal]) -> Result<NgVal> {
        let Effect::NameGen(bound) = self.effect else {
            return Err(unsupported(self.effect, "staged evaluation"));
        };
        let env = env
            .iter()
            .zip(&self.ctx)
            .map(|(v, (_, t))| Ok((v.clone(), self.staged(t)?)))
            .collect::<Result<Vec<_>>>()?;
        self.eval_ng(&NameGen::new(bound), &self.body, s, &env)
    }

    fn eval_ng(&self, ng: &NameGen, t: &Typed, s: usize, env: &[(NgVal, Staged)]) -> Result<NgVal> {
        match &t.core {
            Core::Var(i) => Ok(ng.eta(&env[*i].0)),
            Core::Lit(p) => Ok(ng.eta(&NgVal::constant(&p.to_string()))),
            Core::Tuple(items) => {
                let factors = items.iter().map(|i| self.staged(&i.ty)).collect::<Result<Vec<_>>>()?;
                let ts = items.iter().map(|i| self.eval_ng(ng, i, s, env)).collect::<Result<Vec<_>>>()?;
                ng.nabla(&factors, s, &ts)
            }
            Core::Proj(k, u) => {
                let v = self.eval_ng(ng, u, s, env)?;
                ng.fmap(&self.staged(&t.ty)?, s, &v, &|_, p| match p {
                    NgVal::Tuple(items) if *k < items.len() => Ok(items[*k].clone()),
                    _ => Err(LabError::IllFormed(format!("`{p}` is not a pair"))),
                })
            }
            Core::Let(a, b) => {
                let ta = self.eval_ng(ng, a, s, env)?;
                let sa = self.staged(&a.ty)?;
                let id: Vec<usize> = (0..s).collect();
                ng.bind(&self.staged(&b.ty)?, s, &ta, &|s2, v| {
                    // Move the environment up to the stage the value lives at.
                    let mut inner = env
                        .iter()
                        .map(|(w, x)| Ok((ng.transport(x, w, s, s2, &id)?, x.clone())))
                        .collect::<Result<Vec<_>>>()?;
                    inner.push((v.clone(), sa.clone()));
                    self.eval_ng(ng, b, s2, &inner)
                })
            }
            Core::Thunk(u) => Ok(ng.eta(&self.eval_ng(ng, u, s, env)?)),
            Core::Force(u) => {
                let v = self.eval_ng(ng, u, s, env)?;
                ng.mu(&self.staged(&t.ty)?, s, &v)
            }
            Core::Fresh => ng.normalize(&Staged::Names, s, 1, NgVal::name(s)),
            Core::Sample(_) | Core::Fail | Core::Ask | Core::Or(_) => Err(unsupported(self.effect, "this primitive")),
        }
    }

    /// The value of a closed term.
    pub fn run(&self) -> Result<Outcome> {
        match self.effect {
            Effect::Monad(_) => self.apply(&[]).map(Outcome::T),
            Effect::NameGen(_) => self.apply_ng(0, &[]).map(Outcome::Ng),
        }
    }

    /// The Kleisli morphism `⟦Γ⟧ ⇝ ⟦τ⟧`, when both sides are finite spaces.
    pub fn kernel(&self) -> Result<KleisliMorphism> {
        let m = self.monad()?;
        let (dom, cod) = (self.context_space()?, self.space(self.ty())?);
        let (dom, cod) = unify_pair(dom, cod)?;
        KleisliMorphism::new(m, &dom, &cod, |p| self.apply(p.as_tuple().unwrap_or_default()))
    }

    /// Equality of denotations: same type, same value on every environment.
    /// Name-generation terms are compared at stage 0.
    pub fn same_as(&self, other: &Denotation) -> Result<bool> {
        if self.ty() != other.ty() || self.ctx.iter().map(|c| &c.1).ne(other.ctx.iter().map(|c| &c.1)) {
            return Ok(false);
        }
        match self.effect {
            Effect::Monad(_) => {
                if self.ctx.is_empty() {
                    return Ok(self.apply(&[])? == other.apply(&[])?);
                }
                for p in self.context_space()?.points() {
                    let env = p.as_tuple().unwrap_or_default();
                    if self.apply(env)? != other.apply(env)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Effect::NameGen(bound) => {
                let ng = NameGen::new(bound);
                let factors =
                    self.ctx.iter().map(|(_, t)| ng.values(&self.staged(t)?, 0)).collect::<Result<Vec<_>>>()?;
                for env in factors.into_iter().multi_cartesian_product() {
                    if self.apply_ng(0, &env)? != other.apply_ng(0, &env)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// The kind every factor can be read in, if any.
fn common_kind<'a>(fs: impl IntoIterator<Item = &'a FinSpace>) -> Result<Kind> {
    let mut kind = Kind::Set;
    for f in fs {
        match (kind, f.kind()) {
            (_, Kind::Set) => {}
            (Kind::Set, k) => kind = k,
            (k, k2) if k == k2 => {}
            (k, k2) => return Err(LabError::KindMismatch(format!("{k} and {k2} factors"))),
        }
    }
    Ok(kind)
}

fn as_kind(f: FinSpace, kind: Kind) -> Result<FinSpace> {
    if f.kind() == kind {
        Ok(f)
    } else {
        FinSpace::discrete(f.name(), kind, f.points().to_vec())
    }
}

fn product(fs: Vec<FinSpace>) -> Result<FinSpace> {
    let kind = common_kind(&fs)?;
    if fs.is_empty() {
        return Ok(FinSpace::unit(kind));
    }
    let fs = fs.into_iter().map(|f| as_kind(f, kind)).collect::<Result<Vec<_>>>()?;
    space::product_n(&fs)
}

fn unify_pair(a: FinSpace, b: FinSpace) -> Result<(FinSpace, FinSpace)> {
    let kind = common_kind([&a, &b])?;
    Ok((as_kind(a, kind)?, as_kind(b, kind)?))
}
