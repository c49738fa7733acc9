//! The thunk-force structure at the level of elements.
//!
//! For the measure monads `TA` is infinite, so morphisms into or out of it
//! are represented by their action on individual points; the same
//! representation is used for every monad so the axioms are checked
//! uniformly. For finite `TA` the literal morphisms are built in `laws`.

use std::sync::Arc;

use super::KleisliMorphism;
use crate::error::{LabError, Result};
use crate::monads::{Monad, MonadOps, Obj, TElem};
use crate::space::Point;

type ArrowFn<'a> = dyn Fn(&Point) -> Result<TElem> + Send + Sync + 'a;

/// A Kleisli arrow `dom ⇝ cod` given pointwise.
#[derive(Clone)]
pub struct Arrow<'a> {
    pub monad: Monad,
    pub dom: Obj,
    pub cod: Obj,
    f: Arc<ArrowFn<'a>>,
}

impl<'a> Arrow<'a> {
    pub fn new(
        monad: Monad,
        dom: Obj,
        cod: Obj,
        f: impl Fn(&Point) -> Result<TElem> + Send + Sync + 'a,
    ) -> Arrow<'a> {
        Arrow { monad, dom, cod, f: Arc::new(f) }
    }

    pub fn from_kernel(k: &'a KleisliMorphism) -> Arrow<'a> {
        Arrow::new(k.monad(), Obj::space(k.domain()), Obj::space(k.codomain()), move |p| {
            Ok(k.eval(p)?.clone())
        })
    }

    pub fn identity(monad: Monad, a: &Obj) -> Arrow<'a> {
        let o = a.clone();
        Arrow::new(monad, a.clone(), a.clone(), move |p| monad.eta(&o, p))
    }

    pub fn apply(&self, p: &Point) -> Result<TElem> {
        (self.f)(p)
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &Arrow<'a>) -> Result<Arrow<'a>> {
        if self.cod != g.dom {
            return Err(LabError::Mismatch(format!("{} ⇝ {} then {} ⇝ {}", self.dom, self.cod, g.dom, g.cod)));
        }
        let (f, g2) = (self.clone(), g.clone());
        let m = self.monad;
        let z = g.cod.clone();
        Ok(Arrow::new(m, self.dom.clone(), g.cod.clone(), move |p| {
            m.bind(&z, &f.apply(p)?, &|y| g2.apply(y))
        }))
    }

    /// Whether `η ∘ f♯ = Tη ∘ f♯` at each of the given points.
    pub fn thunkable_on(&self, points: &[Point]) -> Result<Option<Point>> {
        for p in points {
            let t = self.apply(p)?;
            if self.monad.eta_t(&self.cod, &t)? != self.monad.t_eta(&self.cod, &t)? {
                return Ok(Some(p.clone()));
            }
        }
        Ok(None)
    }
}

/// `thunk_A : A ⇝ TA` with `thunk♯ = η_{TA} ∘ η_A`.
pub fn thunk<'a>(monad: Monad, a: &Obj) -> Arrow<'a> {
    let o = a.clone();
    Arrow::new(monad, a.clone(), Obj::t(a.clone()), move |p| {
        monad.eta_t(&o, &monad.eta(&o, p)?)
    })
}

/// `force_A : TA ⇝ A` with `force♯ = 1_{TA}`.
pub fn force<'a>(monad: Monad, a: &Obj) -> Arrow<'a> {
    Arrow::new(monad, Obj::t(a.clone()), a.clone(), |p| {
        p.as_elem().cloned().ok_or_else(|| LabError::IllFormed(format!("`{p}` is not an element")))
    })
}

/// `Lf : TA ⇝ TB` with `(Lf)♯ = η_{TB} ∘ (f♯)†`.
pub fn lift<'a>(f: &Arrow<'a>) -> Arrow<'a> {
    let g = f.clone();
    let m = f.monad;
    let b = f.cod.clone();
    Arrow::new(m, Obj::t(f.dom.clone()), Obj::t(f.cod.clone()), move |p| {
        let t = p.as_elem().ok_or_else(|| LabError::IllFormed(format!("`{p}` is not an element")))?;
        let ext = m.bind(&b, t, &|y| g.apply(y))?;
        m.eta_t(&b, &ext)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{FinSpace, Kind};

    #[test]
    fn thunk_of_t_in_h_bool() {
        let b = FinSpace::labels("bool", Kind::Top, &["tt", "ff"]).unwrap();
        let o = Obj::space(&b);
        let th = thunk(Monad::Lower, &o);
        let out = th.apply(&Point::label("tt")).unwrap();
        // ↓{↓{tt}}: the closure of the single point ↓{tt} in H(bool)
        let inner = Monad::Lower.closure_elem(&o, &[Point::label("tt")]).unwrap();
        let want = Monad::Lower.closure_elem(&Obj::t(o), &[Point::elem(inner)]).unwrap();
        assert_eq!(out, want);
    }

    #[test]
    fn force_after_thunk_is_identity() {
        let b = FinSpace::labels("bool", Kind::Set, &["tt", "ff"]).unwrap();
        let o = Obj::space(&b);
        for m in [Monad::Distribution, Monad::Maybe, Monad::Reader] {
            let ft = thunk(m, &o).then(&force(m, &o)).unwrap();
            for p in b.points() {
                assert_eq!(ft.apply(p).unwrap(), m.eta(&o, p).unwrap());
            }
        }
    }
}
