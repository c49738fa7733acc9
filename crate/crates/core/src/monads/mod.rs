//! The concrete monads: distribution, finite Giry `P`, finite sub-Giry `M`,
//! maybe, read-only state over two environments, and lower Vietoris `H`.

mod elem;
pub mod laws;
mod obj;

pub use elem::{Closed, Measure, TElem};
pub use obj::Obj;

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::rational::Rational;
use crate::space::{FinSpace, Kind, Point};

/// The six instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Monad {
    Distribution,
    Giry,
    SubGiry,
    Maybe,
    Reader,
    Lower,
}

impl Monad {
    pub const ALL: [Monad; 6] = [
        Monad::Distribution,
        Monad::Giry,
        Monad::SubGiry,
        Monad::Maybe,
        Monad::Reader,
        Monad::Lower,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Monad::Distribution => "distribution",
            Monad::Giry => "giry",
            Monad::SubGiry => "subgiry",
            Monad::Maybe => "maybe",
            Monad::Reader => "reader",
            Monad::Lower => "lower",
        }
    }

    /// Accepts the long names and the usual letters `P`, `M`, `H`.
    pub fn parse(s: &str) -> Option<Monad> {
        Some(match s {
            "distribution" | "dist" => Monad::Distribution,
            "giry" | "P" => Monad::Giry,
            "subgiry" | "M" => Monad::SubGiry,
            "maybe" => Monad::Maybe,
            "reader" => Monad::Reader,
            "lower" | "H" => Monad::Lower,
            _ => return None,
        })
    }

    pub fn is_measure(self) -> bool {
        matches!(self, Monad::Distribution | Monad::Giry | Monad::SubGiry)
    }

    /// Whether `TX` is finite for finite `X`.
    pub fn has_finite_t(self) -> bool {
        !self.is_measure()
    }

    /// Base kinds the monad acts on. Plain sets count as discrete spaces.
    pub fn accepts(self, kind: Kind) -> bool {
        match self {
            Monad::Distribution | Monad::Maybe | Monad::Reader => kind == Kind::Set,
            Monad::Giry | Monad::SubGiry => kind != Kind::Top,
            Monad::Lower => kind != Kind::Meas,
        }
    }

    /// The instances whose sampling maps are jointly monic.
    pub fn is_observational(self) -> bool {
        self != Monad::Reader
    }

    pub fn check_space(self, x: &FinSpace) -> Result<()> {
        if self.accepts(x.kind()) {
            Ok(())
        } else {
            Err(LabError::KindMismatch(format!(
                "monad `{}` does not act on {} space `{}`",
                self.name(),
                x.kind(),
                x.name()
            )))
        }
    }

    fn measure_of(self, t: &TElem) -> Result<&Measure> {
        t.as_measure().ok_or_else(|| self.wrong(t))
    }

    fn wrong(self, t: &TElem) -> LabError {
        LabError::IllFormed(format!("{} `{t}` is not an element for monad `{}`", t.describe(), self.name()))
    }

    fn inner<'a>(self, p: &'a Point) -> Result<&'a TElem> {
        p.as_elem()
            .ok_or_else(|| LabError::IllFormed(format!("`{p}` is not an element of a T-object")))
    }

    // ---- validation -----------------------------------------------------

    /// Whether `p` is a well-formed point of `x`, recursing into `T`.
    pub fn member(self, x: &Obj, p: &Point) -> Result<()> {
        match x {
            Obj::Space(s) => s.require(p).map(|_| ()),
            Obj::Prod(fs) => match p.as_tuple() {
                Some(items) if items.len() == fs.len() => {
                    fs.iter().zip(items).try_for_each(|(f, q)| self.member(f, q))
                }
                _ => Err(LabError::UnknownPoint { point: p.to_string(), space: x.to_string() }),
            },
            Obj::T(inner) => self.validate(inner, self.inner(p)?),
        }
    }

    /// Checks that `t` is a canonical element of `T x`.
    pub fn validate(self, x: &Obj, t: &TElem) -> Result<()> {
        match (self, t) {
            (m, TElem::Measure(mu)) if m.is_measure() => {
                for (k, w) in mu.iter() {
                    self.member(x, k)?;
                    if x.atom_rep(k)? != *k {
                        return Err(LabError::IllFormed(format!(
                            "measure key `{k}` is not its atom's representative"
                        )));
                    }
                    if w.is_negative() || w.is_zero() {
                        return Err(LabError::IllFormed(format!("weight {w} at `{k}`")));
                    }
                }
                let total = mu.total();
                let ok = if m == Monad::SubGiry { total <= Rational::one() } else { total.is_one() };
                if ok {
                    Ok(())
                } else {
                    Err(LabError::Normalization(format!("total mass {total} of `{mu}`")))
                }
            }
            (Monad::Maybe, TElem::Maybe(v)) => v.as_ref().map_or(Ok(()), |p| self.member(x, p)),
            (Monad::Reader, TElem::Reader(a, b)) => {
                self.member(x, a)?;
                self.member(x, b)
            }
            (Monad::Lower, TElem::Closed(c)) => {
                for g in c.generators() {
                    self.member(x, g)?;
                }
                if x.canonical_closed(c.generators())? != *c {
                    return Err(LabError::IllFormed(format!("closed set `{c}` is not in canonical form")));
                }
                Ok(())
            }
            _ => Err(self.wrong(t)),
        }
    }

    /// Canonical closed set generated by arbitrary points (closure of the set).
    pub fn closure_elem<'a>(self, x: &Obj, pts: impl IntoIterator<Item = &'a Point>) -> Result<TElem> {
        Ok(TElem::Closed(x.canonical_closed(pts)?))
    }

    // ---- enumeration and sampling ----------------------------------------

    /// Every point of `x`, for objects that are finite under this monad.
    pub fn points(self, x: &Obj, limit: usize) -> Result<Vec<Point>> {
        match x {
            Obj::Space(s) => Ok(s.points().to_vec()),
            Obj::T(inner) => Ok(self.enumerate_t(inner, limit)?.into_iter().map(Point::elem).collect()),
            Obj::Prod(fs) => {
                let mut acc: Vec<Vec<Point>> = vec![Vec::new()];
                for f in fs {
                    let pts = self.points(f, limit)?;
                    if acc.len().saturating_mul(pts.len()) > limit {
                        return Err(LabError::TooLarge(format!("points of {x}")));
                    }
                    acc = acc
                        .iter()
                        .flat_map(|t| {
                            pts.iter().map(move |p| {
                                let mut u = t.clone();
                                u.push(p.clone());
                                u
                            })
                        })
                        .collect();
                }
                Ok(acc.into_iter().map(Point::Tuple).collect())
            }
        }
    }

    /// Every element of `T x`, in sorted order; measure monads are refused.
    pub fn enumerate_t(self, x: &Obj, limit: usize) -> Result<Vec<TElem>> {
        let mut out = match self {
            Monad::Maybe => {
                let pts = self.points(x, limit)?;
                std::iter::once(TElem::Maybe(None))
                    .chain(pts.into_iter().map(|p| TElem::Maybe(Some(p))))
                    .collect()
            }
            Monad::Reader => {
                let pts = self.points(x, limit)?;
                if pts.len().saturating_mul(pts.len()) > limit {
                    return Err(LabError::TooLarge(format!("T({x})")));
                }
                pts.iter()
                    .flat_map(|a| pts.iter().map(move |b| TElem::Reader(a.clone(), b.clone())))
                    .collect()
            }
            Monad::Lower => {
                let pts = self.points(x, limit)?;
                let mut reps = Vec::new();
                for p in &pts {
                    if x.class_rep(p)? == *p {
                        reps.push(p.clone());
                    }
                }
                // comparable[i][j]: reps i and j may not both be generators.
                let n = reps.len();
                let mut comparable = vec![vec![false; n]; n];
                for i in 0..n {
                    for j in 0..n {
                        comparable[i][j] = i != j && (x.leq(&reps[i], &reps[j])? || x.leq(&reps[j], &reps[i])?);
                    }
                }
                let mut out = Vec::new();
                let mut chosen: Vec<usize> = Vec::new();
                antichains(&reps, &comparable, 0, &mut chosen, &mut out, limit, x)?;
                out
            }
            _ => {
                return Err(LabError::Unsupported {
                    monad: self.name().into(),
                    what: "enumeration of an infinite T-object".into(),
                })
            }
        };
        out.sort();
        Ok(out)
    }

    /// A random point of `x`; `T`-levels get a random element.
    pub fn sample_point<R: Rng>(self, x: &Obj, rng: &mut R, max_support: usize) -> Result<Point> {
        match x {
            Obj::Space(s) => {
                if s.is_empty() {
                    return Err(LabError::Precondition(format!("cannot sample from empty `{}`", s.name())));
                }
                Ok(s.point(rng.random_range(0..s.len())).clone())
            }
            Obj::Prod(fs) => Ok(Point::Tuple(
                fs.iter().map(|f| self.sample_point(f, rng, max_support)).collect::<Result<_>>()?,
            )),
            Obj::T(inner) => Ok(Point::elem(self.sample_t(inner, rng, max_support)?)),
        }
    }

    /// Whether `x` has a point. `T∅` is empty for distribution, Giry and
    /// reader, and a single point for the others.
    pub fn inhabited(self, x: &Obj) -> bool {
        match x {
            Obj::Space(s) => !s.is_empty(),
            Obj::Prod(fs) => fs.iter().all(|f| self.inhabited(f)),
            Obj::T(inner) => matches!(self, Monad::SubGiry | Monad::Maybe | Monad::Lower) || self.inhabited(inner),
        }
    }

    /// A random element of `T x` with at most `max_support` support points.
    pub fn sample_t<R: Rng>(self, x: &Obj, rng: &mut R, max_support: usize) -> Result<TElem> {
        let max_support = max_support.max(1);
        if !self.inhabited(x) {
            return match self {
                Monad::SubGiry => Ok(TElem::Measure(Measure::zero())),
                Monad::Maybe => Ok(TElem::Maybe(None)),
                Monad::Lower => Ok(TElem::Closed(Closed::empty())),
                _ => Err(LabError::Precondition(format!("cannot sample from empty T-object under {self}"))),
            };
        }
        match self {
            Monad::Distribution | Monad::Giry | Monad::SubGiry => {
                if self == Monad::SubGiry && rng.random_ratio(1, 10) {
                    return Ok(TElem::Measure(Measure::zero()));
                }
                let k = rng.random_range(1..=max_support);
                let mut keys = Vec::new();
                for _ in 0..k {
                    let p = x.atom_rep(&self.sample_point(x, rng, max_support)?)?;
                    if !keys.contains(&p) {
                        keys.push(p);
                    }
                }
                let raw: Vec<i64> = keys.iter().map(|_| rng.random_range(1..=4)).collect();
                let sum: i64 = raw.iter().sum();
                let mut scale = Rational::new(1, sum);
                if self == Monad::SubGiry && rng.random_bool(0.5) {
                    let d = rng.random_range(2..=4);
                    scale = scale * Rational::new(rng.random_range(1..d), d);
                }
                Ok(TElem::Measure(Measure::from_weights(
                    keys.into_iter().zip(raw).map(|(p, w)| (p, Rational::from_integer(w) * &scale)),
                )))
            }
            Monad::Maybe => {
                if rng.random_ratio(1, 4) {
                    Ok(TElem::Maybe(None))
                } else {
                    Ok(TElem::Maybe(Some(self.sample_point(x, rng, max_support)?)))
                }
            }
            Monad::Reader => Ok(TElem::Reader(
                self.sample_point(x, rng, max_support)?,
                self.sample_point(x, rng, max_support)?,
            )),
            Monad::Lower => {
                let k = rng.random_range(0..=max_support);
                let pts = (0..k)
                    .map(|_| self.sample_point(x, rng, max_support))
                    .collect::<Result<Vec<_>>>()?;
                self.closure_elem(x, &pts)
            }
        }
    }

    /// Elements of `T x`: all of them when few enough, otherwise `samples`
    /// random ones. The flag reports which.
    pub fn elements<R: Rng>(
        self,
        x: &Obj,
        limit: usize,
        samples: usize,
        rng: &mut R,
    ) -> Result<(Vec<TElem>, bool)> {
        if self.has_finite_t() {
            match self.enumerate_t(x, limit) {
                Ok(all) => return Ok((all, true)),
                Err(LabError::TooLarge(_)) => {}
                Err(e) => return Err(e),
            }
        }
        if !self.inhabited(x) {
            let all = if self.inhabited(&Obj::t(x.clone())) { vec![self.sample_t(x, rng, 1)?] } else { Vec::new() };
            return Ok((all, true));
        }
        let mut out = Vec::with_capacity(samples);
        for _ in 0..samples {
            out.push(self.sample_t(x, rng, 3)?);
        }
        out.sort();
        out.dedup();
        Ok((out, false))
    }

    // ---- representable T-objects -----------------------------------------

    /// `TX` as a finite space, when it is finite.
    pub fn t_space(self, x: &FinSpace) -> Result<FinSpace> {
        self.check_space(x)?;
        match self {
            Monad::Maybe | Monad::Reader => {
                let pts = self.enumerate_t(&Obj::space(x), 1 << 16)?.into_iter().map(Point::elem).collect();
                FinSpace::discrete(&format!("{}({})", self.name(), x.name()), Kind::Set, pts)
            }
            Monad::Lower => lower_vietoris_space(x),
            _ => Err(LabError::NotRepresentable(format!("{}({})", self.name(), x.name()))),
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn antichains(
    reps: &[Point],
    comparable: &[Vec<bool>],
    k: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<TElem>,
    limit: usize,
    x: &Obj,
) -> Result<()> {
    if k == reps.len() {
        if out.len() >= limit {
            return Err(LabError::TooLarge(format!("H({x})")));
        }
        out.push(TElem::Closed(Closed::from_canonical(chosen.iter().map(|&i| reps[i].clone()).collect())));
        return Ok(());
    }
    antichains(reps, comparable, k + 1, chosen, out, limit, x)?;
    if chosen.iter().all(|&i| !comparable[i][k]) {
        chosen.push(k);
        antichains(reps, comparable, k + 1, chosen, out, limit, x)?;
        chosen.pop();
    }
    Ok(())
}

/// `HX` as a topological space: closed sets of `X`, with the topology
/// generated by `{C : C ∩ U ≠ ∅}` for open `U`. On a finite carrier its
/// specialization order is inclusion.
pub fn lower_vietoris_space(x: &FinSpace) -> Result<FinSpace> {
    if x.kind() == Kind::Meas {
        return Err(LabError::MissingStructure(x.name().to_string(), "topology"));
    }
    let o = Obj::space(x);
    let pts: Vec<Point> = Monad::Lower.enumerate_t(&o, 1 << 16)?.into_iter().map(Point::elem).collect();
    let t = Obj::t(o);
    FinSpace::from_preorder(&format!("H({})", x.name()), pts, |a, b| t.leq(a, b).unwrap_or(false))
}

impl fmt::Display for Monad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The structure maps of a monad, acting on canonical elements.
///
/// [`Monad`] is the real implementation; the trait exists so law checks can
/// also be run against deliberately broken variants.
pub trait MonadOps: Send + Sync {
    fn monad(&self) -> Monad;

    /// `η_X(p)`.
    fn eta(&self, x: &Obj, p: &Point) -> Result<TElem>;

    /// `μ_X(ρ)` for `ρ ∈ TTX`.
    fn mu(&self, x: &Obj, rho: &TElem) -> Result<TElem>;

    /// `(Tg)(t)` for a structure-preserving `g` into `y`.
    fn fmap(&self, y: &Obj, t: &TElem, g: &dyn Fn(&Point) -> Result<Point>) -> Result<TElem>;

    /// `∇ : TX₁ × … × TXₙ → T(X₁ × … × Xₙ)`; `n = 0` gives `η(())`.
    fn nabla(&self, factors: &[Obj], ts: &[TElem]) -> Result<TElem>;

    /// Kleisli extension: `μ ∘ T(f)` applied to `t`.
    fn bind(&self, y: &Obj, t: &TElem, f: &dyn Fn(&Point) -> Result<TElem>) -> Result<TElem> {
        let ty = Obj::t(y.clone());
        let lifted = self.fmap(&ty, t, &|p| Ok(Point::elem(f(p)?)))?;
        self.mu(y, &lifted)
    }

    /// `Tη` applied to `t ∈ TX`, landing in `TTX`.
    fn t_eta(&self, x: &Obj, t: &TElem) -> Result<TElem> {
        let tx = Obj::t(x.clone());
        self.fmap(&tx, t, &|p| Ok(Point::elem(self.eta(x, p)?)))
    }

    /// `η_{TX}` applied to `t ∈ TX`.
    fn eta_t(&self, x: &Obj, t: &TElem) -> Result<TElem> {
        self.eta(&Obj::t(x.clone()), &Point::elem(t.clone()))
    }
}

impl MonadOps for Monad {
    fn monad(&self) -> Monad {
        *self
    }

    fn eta(&self, x: &Obj, p: &Point) -> Result<TElem> {
        match self {
            Monad::Distribution | Monad::Giry | Monad::SubGiry => {
                Ok(TElem::Measure(Measure::dirac(x.atom_rep(p)?)))
            }
            Monad::Maybe => Ok(TElem::Maybe(Some(p.clone()))),
            Monad::Reader => Ok(TElem::Reader(p.clone(), p.clone())),
            Monad::Lower => self.closure_elem(x, [p]),
        }
    }

    fn mu(&self, x: &Obj, rho: &TElem) -> Result<TElem> {
        match self {
            Monad::Distribution | Monad::Giry | Monad::SubGiry => {
                let outer = self.measure_of(rho)?;
                let mut acc = Measure::zero();
                for (p, w) in outer.iter() {
                    let inner = self.measure_of(self.inner(p)?)?;
                    for (q, v) in inner.iter() {
                        acc.add(q.clone(), w * v);
                    }
                }
                Ok(TElem::Measure(acc))
            }
            Monad::Maybe => match rho {
                TElem::Maybe(None) => Ok(TElem::Maybe(None)),
                TElem::Maybe(Some(p)) => match self.inner(p)? {
                    t @ TElem::Maybe(_) => Ok(t.clone()),
                    t => Err(self.wrong(t)),
                },
                t => Err(self.wrong(t)),
            },
            Monad::Reader => match rho {
                TElem::Reader(a, b) => match (self.inner(a)?, self.inner(b)?) {
                    (TElem::Reader(a0, _), TElem::Reader(_, b1)) => Ok(TElem::Reader(a0.clone(), b1.clone())),
                    (t, _) => Err(self.wrong(t)),
                },
                t => Err(self.wrong(t)),
            },
            Monad::Lower => {
                let outer = rho.as_closed().ok_or_else(|| self.wrong(rho))?;
                let mut pts = Vec::new();
                for g in outer.generators() {
                    let inner = self.inner(g)?;
                    let c = inner.as_closed().ok_or_else(|| self.wrong(inner))?;
                    pts.extend(c.generators().iter().cloned());
                }
                self.closure_elem(x, &pts)
            }
        }
    }

    fn fmap(&self, y: &Obj, t: &TElem, g: &dyn Fn(&Point) -> Result<Point>) -> Result<TElem> {
        match (self, t) {
            (m, TElem::Measure(mu)) if m.is_measure() => {
                let mut acc = Measure::zero();
                for (p, w) in mu.iter() {
                    acc.add(y.atom_rep(&g(p)?)?, w.clone());
                }
                Ok(TElem::Measure(acc))
            }
            (Monad::Maybe, TElem::Maybe(v)) => Ok(TElem::Maybe(v.as_ref().map(g).transpose()?)),
            (Monad::Reader, TElem::Reader(a, b)) => Ok(TElem::Reader(g(a)?, g(b)?)),
            (Monad::Lower, TElem::Closed(c)) => {
                let imgs = c.generators().iter().map(g).collect::<Result<Vec<_>>>()?;
                self.closure_elem(y, &imgs)
            }
            _ => Err(self.wrong(t)),
        }
    }

    fn nabla(&self, factors: &[Obj], ts: &[TElem]) -> Result<TElem> {
        if factors.len() != ts.len() {
            return Err(LabError::Mismatch(format!(
                "∇ over {} factors given {} elements",
                factors.len(),
                ts.len()
            )));
        }
        let prod = Obj::Prod(factors.to_vec());
        match self {
            Monad::Distribution | Monad::Giry | Monad::SubGiry => {
                let mut acc: Vec<(Vec<Point>, Rational)> = vec![(Vec::new(), Rational::one())];
                for t in ts {
                    let m = self.measure_of(t)?;
                    acc = acc
                        .iter()
                        .flat_map(|(k, w)| {
                            m.iter().map(move |(p, v)| {
                                let mut k2 = k.clone();
                                k2.push(p.clone());
                                (k2, w * v)
                            })
                        })
                        .collect();
                }
                Ok(TElem::Measure(Measure::from_weights(
                    acc.into_iter().map(|(k, w)| (Point::Tuple(k), w)),
                )))
            }
            Monad::Maybe => {
                let mut items = Vec::with_capacity(ts.len());
                for t in ts {
                    match t {
                        TElem::Maybe(Some(p)) => items.push(p.clone()),
                        TElem::Maybe(None) => return Ok(TElem::Maybe(None)),
                        t => return Err(self.wrong(t)),
                    }
                }
                Ok(TElem::Maybe(Some(Point::Tuple(items))))
            }
            Monad::Reader => {
                let mut first = Vec::with_capacity(ts.len());
                let mut second = Vec::with_capacity(ts.len());
                for t in ts {
                    match t {
                        TElem::Reader(a, b) => {
                            first.push(a.clone());
                            second.push(b.clone());
                        }
                        t => return Err(self.wrong(t)),
                    }
                }
                Ok(TElem::Reader(Point::Tuple(first), Point::Tuple(second)))
            }
            Monad::Lower => {
                let mut acc: Vec<Vec<Point>> = vec![Vec::new()];
                for t in ts {
                    let c = t.as_closed().ok_or_else(|| self.wrong(t))?;
                    acc = acc
                        .iter()
                        .flat_map(|k| {
                            c.generators().iter().map(move |p| {
                                let mut k2 = k.clone();
                                k2.push(p.clone());
                                k2
                            })
                        })
                        .collect();
                }
                let pts: Vec<Point> = acc.into_iter().map(Point::Tuple).collect();
                self.closure_elem(&prod, &pts)
            }
        }
    }
}

/// Parses `name` as a monad, with an error listing the accepted names.
pub fn monad_by_name(name: &str) -> Result<Monad> {
    Monad::parse(name).ok_or_else(|| {
        LabError::Precondition(format!(
            "unknown monad `{name}` (expected one of: distribution, giry, subgiry, maybe, reader, lower)"
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Point {
        Point::label(s)
    }

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn bool_set() -> FinSpace {
        FinSpace::labels("bool", Kind::Set, &["tt", "ff"]).unwrap()
    }

    #[test]
    fn dirac_on_plain_set() {
        let x = Obj::space(&bool_set());
        assert_eq!(
            Monad::Distribution.eta(&x, &p("tt")).unwrap(),
            TElem::Measure(Measure::dirac(p("tt")))
        );
    }

    #[test]
    fn giry_eta_identifies_codiscrete_points() {
        let c = FinSpace::codiscrete("c", Kind::Meas, vec![p("x"), p("x'")]).unwrap();
        let o = Obj::space(&c);
        assert_eq!(Monad::Giry.eta(&o, &p("x")).unwrap(), Monad::Giry.eta(&o, &p("x'")).unwrap());
    }

    #[test]
    fn lower_eta_on_sierpinski_is_point_closure() {
        let s = FinSpace::from_generators("S", Kind::Top, vec![p("0"), p("1")], &[vec![p("1")]]).unwrap();
        let o = Obj::space(&s);
        let e = Monad::Lower.eta(&o, &p("1")).unwrap();
        // the closure {0,1} has the single maximal generator 1
        assert_eq!(e.as_closed().unwrap().generators().len(), 1);
        assert!(o.closed_contains(e.as_closed().unwrap(), &p("0")).unwrap());
    }

    #[test]
    fn mixture_of_diracs() {
        let x = Obj::space(&bool_set());
        let rho = Measure::from_weights([
            (Point::elem(Measure::dirac(p("tt")).into()), r(1, 2)),
            (Point::elem(Measure::dirac(p("ff")).into()), r(1, 2)),
        ]);
        let m = Monad::Giry.mu(&x, &rho.into()).unwrap();
        assert_eq!(m, Measure::from_weights([(p("tt"), r(1, 2)), (p("ff"), r(1, 2))]).into());
    }

    #[test]
    fn lower_mu_is_union() {
        let x = Obj::space(&bool_set());
        let h = Monad::Lower;
        let rho = h
            .closure_elem(
                &Obj::t(x.clone()),
                &[
                    Point::elem(h.closure_elem(&x, &[]).unwrap()),
                    Point::elem(h.closure_elem(&x, &[p("tt")]).unwrap()),
                    Point::elem(h.closure_elem(&x, &[p("ff")]).unwrap()),
                ],
            )
            .unwrap();
        assert_eq!(h.mu(&x, &rho).unwrap(), h.closure_elem(&x, &[p("tt"), p("ff")]).unwrap());
    }

    #[test]
    fn pushforward_sums_preimages() {
        let x = FinSpace::labels("X", Kind::Set, &["a", "b"]).unwrap();
        let y = FinSpace::labels("Y", Kind::Set, &["c"]).unwrap();
        let m: TElem = Measure::from_weights([(p("a"), r(1, 3)), (p("b"), r(2, 3))]).into();
        let _ = x;
        let out = Monad::Distribution.fmap(&Obj::space(&y), &m, &|_| Ok(p("c"))).unwrap();
        assert_eq!(out, Measure::dirac(p("c")).into());
    }

    #[test]
    fn nabla_products() {
        let a = Obj::space(&FinSpace::labels("A", Kind::Set, &["a", "b"]).unwrap());
        let c = Obj::space(&FinSpace::labels("C", Kind::Set, &["c", "d"]).unwrap());
        let u = |x: &str, y: &str| -> TElem { Measure::from_weights([(p(x), r(1, 2)), (p(y), r(1, 2))]).into() };
        let prod = Monad::Giry.nabla(&[a, c], &[u("a", "b"), u("c", "d")]).unwrap();
        let m = prod.as_measure().unwrap();
        assert_eq!(m.len(), 4);
        assert!(m.iter().all(|(_, w)| *w == r(1, 4)));
    }

    #[test]
    fn lower_nabla_rectangle() {
        let b = Obj::space(&bool_set());
        let h = Monad::Lower;
        let t = h.closure_elem(&b, &[p("tt")]).unwrap();
        let tf = h.closure_elem(&b, &[p("tt"), p("ff")]).unwrap();
        let out = h.nabla(&[b.clone(), b.clone()], &[t, tf]).unwrap();
        let want = h
            .closure_elem(
                &Obj::Prod(vec![b.clone(), b]),
                &[Point::pair(p("tt"), p("tt")), Point::pair(p("tt"), p("ff"))],
            )
            .unwrap();
        assert_eq!(out, want);
    }

    #[test]
    fn h_of_unit_is_sierpinski() {
        let one = FinSpace::unit(Kind::Top);
        let h1 = lower_vietoris_space(&one).unwrap();
        assert_eq!(h1.len(), 2);
        assert_eq!(h1.members(100).unwrap().len(), 3);
        assert!(!h1.leq(1, 0) || !h1.leq(0, 1));
    }

    #[test]
    fn h_of_discrete_bool_has_four_points() {
        let b = FinSpace::labels("bool", Kind::Top, &["tt", "ff"]).unwrap();
        assert_eq!(lower_vietoris_space(&b).unwrap().len(), 4);
    }

    #[test]
    fn validation_rejects_bad_elements() {
        let x = Obj::space(&bool_set());
        let half: TElem = Measure::from_weights([(p("tt"), r(1, 2))]).into();
        assert!(Monad::Giry.validate(&x, &half).is_err());
        assert!(Monad::SubGiry.validate(&x, &half).is_ok());
        assert!(Monad::Maybe.validate(&x, &half).is_err());
        assert!(Monad::Maybe.validate(&x, &TElem::Maybe(Some(p("zz")))).is_err());
    }
}
