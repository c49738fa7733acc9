use std::fmt;

use super::{copy, del, kleisli_compose, KleisliMorphism};
use crate::error::{LabError, Result};
use crate::monads::{MonadOps, Obj};
use crate::space::BaseMap;

/// The base maps `g` with `η ∘ g = f♯`.
#[derive(Debug, Clone)]
pub struct PureWitnesses {
    /// Total number of witnesses (saturating).
    pub count: u128,
    /// The first witnesses in lexicographic table order, at most the cap.
    pub maps: Vec<BaseMap>,
}

/// Solves `η(g(x)) = f♯(x)` fiberwise: each `f♯(x)` must lie in the image of
/// `η`, and any choice from the fibers is a witness. Structure preservation
/// of the choices follows from that of `f` (a measurable kernel is constant
/// on atoms; a continuous one is monotone), and is re-checked anyway.
pub fn pure_witnesses(f: &KleisliMorphism, cap: usize) -> Result<PureWitnesses> {
    let m = f.monad();
    let (x, y) = (f.domain(), f.codomain());
    let oy = Obj::space(y);
    let units = y.points().iter().map(|b| m.eta(&oy, b)).collect::<Result<Vec<_>>>()?;
    let fibers: Vec<Vec<usize>> = f
        .table()
        .iter()
        .map(|t| (0..y.len()).filter(|&j| units[j] == *t).collect())
        .collect();
    let count = fibers.iter().fold(1u128, |acc, fib| acc.saturating_mul(fib.len() as u128));
    let mut maps = Vec::new();
    if count > 0 {
        let mut idx = vec![0usize; x.len()];
        'outer: while maps.len() < cap {
            let table = idx.iter().zip(&fibers).map(|(&i, fib)| fib[i]).collect();
            maps.push(BaseMap::from_indices(x, y, table).map_err(|e| {
                LabError::Internal(format!("pure witness is not structure-preserving: {e}"))
            })?);
            let mut i = 0;
            loop {
                if i == idx.len() {
                    break 'outer;
                }
                idx[i] += 1;
                if idx[i] < fibers[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }
    Ok(PureWitnesses { count, maps })
}

/// `η_{TB} ∘ f♯ = Tη_B ∘ f♯`, checked pointwise in `TTB`.
pub fn is_thunkable(f: &KleisliMorphism) -> Result<bool> {
    let m = f.monad();
    let oy = Obj::space(f.codomain());
    for t in f.table() {
        if m.eta_t(&oy, t)? != m.t_eta(&oy, t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `copy ∘ f = (f ⊗ f) ∘ copy`.
pub fn is_copyable(f: &KleisliMorphism) -> Result<bool> {
    let m = f.monad();
    let lhs = kleisli_compose(&copy(m, f.codomain())?, f)?;
    let rhs = kleisli_compose(&f.tensor(f)?, &copy(m, f.domain())?)?;
    Ok(lhs.table() == rhs.table())
}

/// `del ∘ f = del`.
pub fn is_discardable(f: &KleisliMorphism) -> Result<bool> {
    let m = f.monad();
    let lhs = kleisli_compose(&del(m, f.codomain())?, f)?;
    Ok(lhs.table() == del(m, f.domain())?.table())
}

pub fn is_deterministic(f: &KleisliMorphism) -> Result<bool> {
    Ok(is_copyable(f)? && is_discardable(f)?)
}

/// All classifier verdicts for one morphism.
#[derive(Debug, Clone)]
pub struct Classification {
    pub pure: Vec<BaseMap>,
    pub pure_count: u128,
    pub thunkable: bool,
    pub copyable: bool,
    pub discardable: bool,
    pub deterministic: bool,
}

impl Classification {
    pub fn is_pure(&self) -> bool {
        self.pure_count > 0
    }

    pub fn uniquely_pure(&self) -> bool {
        self.pure_count == 1
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pure={} (witnesses: {}) thunkable={} copyable={} discardable={} deterministic={}",
            self.is_pure(),
            self.pure_count,
            self.thunkable,
            self.copyable,
            self.discardable,
            self.deterministic
        )
    }
}

/// Runs every classifier and checks `pure ⇒ thunkable ⇒ deterministic`.
/// A violated chain is reported as an internal error.
pub fn classify(f: &KleisliMorphism) -> Result<Classification> {
    classify_capped(f, 16)
}

pub fn classify_capped(f: &KleisliMorphism, witness_cap: usize) -> Result<Classification> {
    let w = pure_witnesses(f, witness_cap)?;
    let copyable = is_copyable(f)?;
    let discardable = is_discardable(f)?;
    let c = Classification {
        pure: w.maps,
        pure_count: w.count,
        thunkable: is_thunkable(f)?,
        copyable,
        discardable,
        deterministic: copyable && discardable,
    };
    if c.is_pure() && !c.thunkable {
        return Err(LabError::Internal(format!("pure but not thunkable: {f}")));
    }
    if c.thunkable && !c.deterministic {
        return Err(LabError::Internal(format!("thunkable but not deterministic: {f}")));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kleisli::all_kernels;
    use crate::monads::{Measure, Monad, TElem};
    use crate::rational::Rational;
    use crate::space::{FinSpace, Kind, Point};

    fn p(s: &str) -> Point {
        Point::label(s)
    }

    #[test]
    fn identity_has_one_witness() {
        let x = FinSpace::labels("X", Kind::Set, &["a", "b", "c"]).unwrap();
        let id = KleisliMorphism::identity(Monad::Distribution, &x).unwrap();
        let w = pure_witnesses(&id, 8).unwrap();
        assert_eq!(w.count, 1);
        assert_eq!(w.maps[0], BaseMap::identity(&x));
    }

    #[test]
    fn codiscrete_giry_point_has_two_witnesses() {
        let one = FinSpace::unit(Kind::Meas);
        let c = FinSpace::codiscrete("c", Kind::Meas, vec![p("x"), p("x'")]).unwrap();
        let k = KleisliMorphism::new(Monad::Giry, &one, &c, |_| Ok(Measure::dirac(p("x")).into())).unwrap();
        let cl = classify(&k).unwrap();
        assert_eq!(cl.pure_count, 2);
        assert!(cl.thunkable && !cl.uniquely_pure());
    }

    #[test]
    fn fair_coin_is_not_thunkable() {
        let one = FinSpace::unit(Kind::Meas);
        let b = FinSpace::labels("bool", Kind::Meas, &["tt", "ff"]).unwrap();
        let coin: TElem =
            Measure::from_weights([(p("tt"), Rational::new(1, 2)), (p("ff"), Rational::new(1, 2))]).into();
        let k = KleisliMorphism::new(Monad::Giry, &one, &b, |_| Ok(coin.clone())).unwrap();
        let cl = classify(&k).unwrap();
        assert!(cl.pure.is_empty() && !cl.thunkable && !cl.copyable && cl.discardable);
    }

    #[test]
    fn subgiry_discardable_iff_total_mass_one() {
        let one = FinSpace::unit(Kind::Meas);
        let b = FinSpace::labels("bool", Kind::Meas, &["tt", "ff"]).unwrap();
        let half: TElem = Measure::from_weights([(p("tt"), Rational::new(1, 2))]).into();
        let k = KleisliMorphism::new(Monad::SubGiry, &one, &b, |_| Ok(half.clone())).unwrap();
        assert!(!is_discardable(&k).unwrap());
        // zero-one valued but not normalized: copyable, not deterministic
        let zero: TElem = Measure::zero().into();
        let z = KleisliMorphism::new(Monad::SubGiry, &one, &b, |_| Ok(zero.clone())).unwrap();
        assert!(is_copyable(&z).unwrap() && !is_deterministic(&z).unwrap());
    }

    #[test]
    fn maybe_discardable_is_pure_and_reader_all_deterministic() {
        let x = FinSpace::labels("X", Kind::Set, &["a", "b"]).unwrap();
        for k in all_kernels(Monad::Maybe, &x, &x, 1000).unwrap().unwrap() {
            let c = classify(&k).unwrap();
            assert!(c.copyable);
            assert_eq!(c.discardable, c.is_pure());
            assert_eq!(c.thunkable, c.is_pure());
        }
        let mut witness = false;
        for k in all_kernels(Monad::Reader, &x, &x, 1000).unwrap().unwrap() {
            let c = classify(&k).unwrap();
            assert!(c.deterministic);
            witness |= !c.thunkable;
        }
        assert!(witness);
    }
}
