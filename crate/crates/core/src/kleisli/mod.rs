//! Kleisli morphisms between finite spaces, the copy-discard structure, the
//! thunk-force structure and the classifiers.

mod classify;
pub mod laws;
mod thunk;

pub use classify::{
    classify, classify_capped, is_copyable, is_deterministic, is_discardable, is_thunkable, pure_witnesses, Classification,
    PureWitnesses,
};
pub use thunk::{force, lift, thunk, Arrow};

use std::fmt;

use rand::Rng;

use crate::error::{LabError, Result};
use crate::monads::{Monad, MonadOps, Obj, TElem};
use crate::space::{self, BaseMap, FinSpace, Point};

/// `f : A ⇝ B`, stored as `f♯ : A → TB` in domain carrier order.
#[derive(Clone, PartialEq, Eq)]
pub struct KleisliMorphism {
    monad: Monad,
    domain: FinSpace,
    codomain: FinSpace,
    table: Vec<TElem>,
}

impl KleisliMorphism {
    pub fn new(
        monad: Monad,
        domain: &FinSpace,
        codomain: &FinSpace,
        f: impl Fn(&Point) -> Result<TElem>,
    ) -> Result<KleisliMorphism> {
        let table = domain.points().iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::from_table(monad, domain, codomain, table)
    }

    /// Validates every value and the structural condition the base category
    /// imposes: kernels of the finite Giry monads must be constant on the
    /// atoms of the domain, and `H`-valued maps must be continuous (monotone
    /// into inclusion order).
    pub fn from_table(
        monad: Monad,
        domain: &FinSpace,
        codomain: &FinSpace,
        table: Vec<TElem>,
    ) -> Result<KleisliMorphism> {
        monad.check_space(domain)?;
        monad.check_space(codomain)?;
        if table.len() != domain.len() {
            return Err(LabError::Mismatch(format!(
                "table has {} entries for domain `{}` of size {}",
                table.len(),
                domain.name(),
                domain.len()
            )));
        }
        let cod = Obj::space(codomain);
        for t in &table {
            monad.validate(&cod, t)?;
        }
        match monad {
            Monad::Giry | Monad::SubGiry => {
                for i in 0..domain.len() {
                    if table[i] != table[domain.atom_rep(i)] {
                        return Err(LabError::NotStructurePreserving(format!(
                            "kernel is not constant on the atom of `{}`",
                            domain.point(i)
                        )));
                    }
                }
            }
            Monad::Lower => {
                for y in 0..domain.len() {
                    for x in domain.below(y).ones() {
                        let (c, d) = (table[x].as_closed().unwrap(), table[y].as_closed().unwrap());
                        if !cod.closed_subset(c, d)? {
                            return Err(LabError::NotStructurePreserving(format!(
                                "map into H({}) is not continuous at `{}` ≤ `{}`",
                                codomain.name(),
                                domain.point(x),
                                domain.point(y)
                            )));
                        }
                    }
                }
            }
            _ => {}
        }
        Ok(KleisliMorphism { monad, domain: domain.clone(), codomain: codomain.clone(), table })
    }

    pub fn monad(&self) -> Monad {
        self.monad
    }

    pub fn domain(&self) -> &FinSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &FinSpace {
        &self.codomain
    }

    pub fn table(&self) -> &[TElem] {
        &self.table
    }

    pub fn at(&self, i: usize) -> &TElem {
        &self.table[i]
    }

    pub fn eval(&self, p: &Point) -> Result<&TElem> {
        Ok(&self.table[self.domain.require(p)?])
    }

    /// `η_X`, the identity of the Kleisli category.
    pub fn identity(monad: Monad, x: &FinSpace) -> Result<KleisliMorphism> {
        let o = Obj::space(x);
        Self::new(monad, x, x, |p| monad.eta(&o, p))
    }

    /// `η ∘ g`.
    pub fn pure(monad: Monad, g: &BaseMap) -> Result<KleisliMorphism> {
        let o = Obj::space(g.codomain());
        Self::new(monad, g.domain(), g.codomain(), |p| monad.eta(&o, g.apply(p)?))
    }

    /// `self ∘ k`, i.e. `x ↦ μ(T(self♯)(k♯ x))`.
    pub fn after(&self, k: &KleisliMorphism) -> Result<KleisliMorphism> {
        kleisli_compose(self, k)
    }

    /// `self ⊗ other : A × C ⇝ B × D`, via `∇`.
    pub fn tensor(&self, other: &KleisliMorphism) -> Result<KleisliMorphism> {
        same_monad(self, other)?;
        let m = self.monad;
        let dom = space::product_n(&[self.domain.clone(), other.domain.clone()])?;
        let cod = space::product_n(&[self.codomain.clone(), other.codomain.clone()])?;
        let factors = [Obj::space(&self.codomain), Obj::space(&other.codomain)];
        KleisliMorphism::new(m, &dom, &cod, |p| {
            let [a, c] = p.as_tuple().unwrap() else { unreachable!("pair") };
            m.nabla(&factors, &[self.eval(a)?.clone(), other.eval(c)?.clone()])
        })
    }
}

fn same_monad(a: &KleisliMorphism, b: &KleisliMorphism) -> Result<()> {
    if a.monad != b.monad {
        return Err(LabError::Mismatch(format!("monads {} and {}", a.monad, b.monad)));
    }
    Ok(())
}

/// `h ∘ k` in the Kleisli category: `μ ∘ T(h♯) ∘ k♯`.
pub fn kleisli_compose(h: &KleisliMorphism, k: &KleisliMorphism) -> Result<KleisliMorphism> {
    same_monad(h, k)?;
    if k.codomain != h.domain {
        return Err(LabError::Mismatch(format!(
            "cannot compose {} ⇝ {} after {} ⇝ {}",
            h.domain.name(),
            h.codomain.name(),
            k.domain.name(),
            k.codomain.name()
        )));
    }
    let m = h.monad;
    let z = Obj::space(&h.codomain);
    let table = k
        .table
        .iter()
        .map(|t| m.bind(&z, t, &|y| Ok(h.eval(y)?.clone())))
        .collect::<Result<Vec<_>>>()?;
    KleisliMorphism::from_table(m, &k.domain, &h.codomain, table)
}

/// `copy_X : X ⇝ X × X`, `x ↦ η(x, x)`.
pub fn copy(monad: Monad, x: &FinSpace) -> Result<KleisliMorphism> {
    let xx = space::product_n(&[x.clone(), x.clone()])?;
    let o = Obj::space(&xx);
    KleisliMorphism::new(monad, x, &xx, |p| monad.eta(&o, &Point::pair(p.clone(), p.clone())))
}

/// `del_X : X ⇝ 1`, `x ↦ η(())`.
pub fn del(monad: Monad, x: &FinSpace) -> Result<KleisliMorphism> {
    let one = FinSpace::unit(x.kind());
    let o = Obj::space(&one);
    KleisliMorphism::new(monad, x, &one, |_| monad.eta(&o, &Point::unit()))
}

/// A random kernel `x ⇝ y` respecting the structural constraints. About a
/// third of the values are units, so pure and deterministic kernels occur.
pub fn random_kernel<R: Rng>(
    monad: Monad,
    x: &FinSpace,
    y: &FinSpace,
    rng: &mut R,
    max_support: usize,
) -> Result<KleisliMorphism> {
    let oy = Obj::space(y);
    let mut raw: Vec<TElem> = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let r = x.atom_rep(i);
        let t = if r < i {
            raw[r].clone()
        } else if !y.is_empty() && rng.random_ratio(1, 3) {
            monad.eta(&oy, y.point(rng.random_range(0..y.len())))?
        } else {
            monad.sample_t(&oy, rng, max_support)?
        };
        raw.push(t);
    }
    if monad == Monad::Lower {
        // Make the map monotone: f(b) = ⋃ { raw(a) : a ≤ b }.
        raw = (0..x.len())
            .map(|b| {
                let pts: Vec<Point> = x
                    .below(b)
                    .ones()
                    .flat_map(|a| raw[a].as_closed().unwrap().generators().iter().cloned().collect::<Vec<_>>())
                    .collect();
                monad.closure_elem(&oy, &pts)
            })
            .collect::<Result<_>>()?;
    }
    KleisliMorphism::from_table(monad, x, y, raw)
}

/// Every kernel `x ⇝ y` for a monad with finite `T`, or `None` above `cap`.
pub fn all_kernels(monad: Monad, x: &FinSpace, y: &FinSpace, cap: usize) -> Result<Option<Vec<KleisliMorphism>>> {
    let values = monad.enumerate_t(&Obj::space(y), cap)?;
    let total = (values.len() as u128).checked_pow(x.len() as u32);
    if total.is_none_or(|t| t > cap as u128) {
        return Ok(None);
    }
    if total == Some(0) {
        return Ok(Some(Vec::new()));
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; x.len()];
    loop {
        let table = idx.iter().map(|&i| values[i].clone()).collect();
        if let Ok(k) = KleisliMorphism::from_table(monad, x, y, table) {
            out.push(k);
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                return Ok(Some(out));
            }
            idx[i] += 1;
            if idx[i] < values.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

impl fmt::Debug for KleisliMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⇝ {} @{} {{", self.domain.name(), self.codomain.name(), self.monad)?;
        for (i, t) in self.table.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} ↦ {t}", self.domain.point(i))?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for KleisliMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monads::Measure;
    use crate::rational::Rational;
    use crate::space::Kind;

    fn p(s: &str) -> Point {
        Point::label(s)
    }

    fn meas(items: &[(&str, i64, i64)]) -> TElem {
        Measure::from_weights(items.iter().map(|&(l, a, b)| (p(l), Rational::new(a, b)))).into()
    }

    #[test]
    fn chapman_kolmogorov_example() {
        let a = FinSpace::labels("A", Kind::Set, &["a"]).unwrap();
        let xy = FinSpace::labels("XY", Kind::Set, &["x", "y"]).unwrap();
        let zw = FinSpace::labels("ZW", Kind::Set, &["z", "w"]).unwrap();
        let m = Monad::Distribution;
        let k = KleisliMorphism::new(m, &a, &xy, |_| Ok(meas(&[("x", 1, 3), ("y", 2, 3)]))).unwrap();
        let h = KleisliMorphism::new(m, &xy, &zw, |q| {
            Ok(if q.as_label() == Some("x") { meas(&[("z", 1, 1)]) } else { meas(&[("z", 1, 2), ("w", 1, 2)]) })
        })
        .unwrap();
        let hk = kleisli_compose(&h, &k).unwrap();
        // oracle: z = 1/3·1 + 2/3·1/2, w = 2/3·1/2
        assert_eq!(hk.at(0), &meas(&[("z", 2, 3), ("w", 1, 3)]));
    }

    #[test]
    fn identity_is_unit() {
        let x = FinSpace::labels("X", Kind::Set, &["a", "b"]).unwrap();
        let mut rng = crate::sample::seeded(3);
        for m in [Monad::Distribution, Monad::Maybe, Monad::Reader] {
            let k = random_kernel(m, &x, &x, &mut rng, 2).unwrap();
            let id = KleisliMorphism::identity(m, &x).unwrap();
            assert_eq!(kleisli_compose(&k, &id).unwrap(), k);
            assert_eq!(kleisli_compose(&id, &k).unwrap(), k);
        }
    }

    #[test]
    fn nothing_absorbs() {
        let x = FinSpace::labels("X", Kind::Set, &["a", "b"]).unwrap();
        let nothing = KleisliMorphism::new(Monad::Maybe, &x, &x, |_| Ok(TElem::Maybe(None))).unwrap();
        for k in all_kernels(Monad::Maybe, &x, &x, 100).unwrap().unwrap() {
            assert_eq!(kleisli_compose(&nothing, &k).unwrap(), nothing);
        }
    }

    #[test]
    fn giry_kernels_must_respect_atoms() {
        let c = FinSpace::codiscrete("C", Kind::Meas, vec![p("x"), p("y")]).unwrap();
        let b = FinSpace::labels("B", Kind::Meas, &["tt", "ff"]).unwrap();
        let bad = KleisliMorphism::new(Monad::Giry, &c, &b, |q| {
            Ok(meas(&[(if q.as_label() == Some("x") { "tt" } else { "ff" }, 1, 1)]))
        });
        assert!(matches!(bad, Err(LabError::NotStructurePreserving(_))));
    }

    #[test]
    fn copy_of_coin_is_diagonal() {
        let b = FinSpace::labels("B", Kind::Meas, &["tt", "ff"]).unwrap();
        let one = FinSpace::unit(Kind::Meas);
        let coin = KleisliMorphism::new(Monad::Giry, &one, &b, |_| Ok(meas(&[("tt", 1, 2), ("ff", 1, 2)]))).unwrap();
        let out = kleisli_compose(&copy(Monad::Giry, &b).unwrap(), &coin).unwrap();
        let m = out.at(0).as_measure().unwrap();
        assert!(m.support().all(|q| {
            let t = q.as_tuple().unwrap();
            t[0] == t[1]
        }));
        assert_eq!(m.len(), 2);
    }
}
