use std::fmt;

use super::{FinSpace, Kind, Point};
use crate::error::{LabError, Result};

/// A structure-preserving map between finite spaces, stored as a table of
/// codomain indices in domain carrier order.
#[derive(Clone, PartialEq, Eq)]
pub struct BaseMap {
    domain: FinSpace,
    codomain: FinSpace,
    table: Vec<usize>,
}

impl BaseMap {
    pub fn new(domain: &FinSpace, codomain: &FinSpace, f: impl Fn(&Point) -> Point) -> Result<BaseMap> {
        let table = domain
            .points()
            .iter()
            .map(|p| codomain.require(&f(p)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(domain, codomain, table)
    }

    pub fn from_indices(domain: &FinSpace, codomain: &FinSpace, table: Vec<usize>) -> Result<BaseMap> {
        if table.len() != domain.len() || table.iter().any(|&j| j >= codomain.len()) {
            return Err(LabError::Mismatch(format!(
                "table does not describe a map {} -> {}",
                domain.name(),
                codomain.name()
            )));
        }
        let map = BaseMap { domain: domain.clone(), codomain: codomain.clone(), table };
        map.check_preserving()?;
        Ok(map)
    }

    pub fn identity(x: &FinSpace) -> BaseMap {
        BaseMap { domain: x.clone(), codomain: x.clone(), table: (0..x.len()).collect() }
    }

    /// Plain sets count as discrete, so they may map to or from either
    /// structured kind; measurable and topological spaces do not mix.
    fn check_preserving(&self) -> Result<()> {
        let (d, c) = (&self.domain, &self.codomain);
        let kinds = (d.kind(), c.kind());
        if matches!(kinds, (Kind::Meas, Kind::Top) | (Kind::Top, Kind::Meas)) {
            return Err(LabError::KindMismatch(format!("map {} -> {}", d.name(), c.name())));
        }
        if kinds.0 == Kind::Meas || kinds.1 == Kind::Meas {
            // Measurable iff every domain atom lands inside one codomain atom.
            for i in 0..d.len() {
                let r = d.atom_rep(i);
                if c.atom_index(self.table[i]) != c.atom_index(self.table[r]) {
                    return Err(LabError::NotStructurePreserving(format!(
                        "{} -> {} splits the atom of `{}`",
                        d.name(),
                        c.name(),
                        d.point(i)
                    )));
                }
            }
        }
        if kinds.0 == Kind::Top || kinds.1 == Kind::Top {
            // Finite spaces: continuous iff monotone for specialization.
            for y in 0..d.len() {
                for x in d.below(y).ones() {
                    if !c.leq(self.table[x], self.table[y]) {
                        return Err(LabError::NotStructurePreserving(format!(
                            "{} -> {} is not continuous at `{}` ≤ `{}`",
                            d.name(),
                            c.name(),
                            d.point(x),
                            d.point(y)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> &FinSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &FinSpace {
        &self.codomain
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn image_index(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn apply(&self, p: &Point) -> Result<&Point> {
        let i = self.domain.require(p)?;
        Ok(self.codomain.point(self.table[i]))
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &BaseMap) -> Result<BaseMap> {
        compose(self, g)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain.len()];
        self.table.iter().all(|&j| !std::mem::replace(&mut seen[j], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.codomain.len()];
        for &j in &self.table {
            seen[j] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// The inverse map, if bijective and the inverse is structure-preserving.
    pub fn inverse(&self) -> Option<BaseMap> {
        if !(self.is_injective() && self.is_surjective()) {
            return None;
        }
        let mut inv = vec![0; self.codomain.len()];
        for (i, &j) in self.table.iter().enumerate() {
            inv[j] = i;
        }
        BaseMap::from_indices(&self.codomain, &self.domain, inv).ok()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.inverse().is_some()
    }
}

/// `g ∘ f`.
pub fn compose(f: &BaseMap, g: &BaseMap) -> Result<BaseMap> {
    if f.codomain != g.domain {
        return Err(LabError::Mismatch(format!(
            "cannot compose {} -> {} with {} -> {}",
            f.domain.name(),
            f.codomain.name(),
            g.domain.name(),
            g.codomain.name()
        )));
    }
    Ok(BaseMap {
        domain: f.domain.clone(),
        codomain: g.codomain.clone(),
        table: f.table.iter().map(|&j| g.table[j]).collect(),
    })
}

impl fmt::Debug for BaseMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {{", self.domain.name(), self.codomain.name())?;
        for (i, &j) in self.table.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{} ↦ {}", self.domain.point(i), self.codomain.point(j))?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::FinSpace;

    #[test]
    fn permutation_composition() {
        let x = FinSpace::labels("X", Kind::Set, &["a", "b", "c"]).unwrap();
        // sigma = (a b), tau = (b c); tau ∘ sigma sends a->c, b->a, c->b
        let sigma = BaseMap::from_indices(&x, &x, vec![1, 0, 2]).unwrap();
        let tau = BaseMap::from_indices(&x, &x, vec![0, 2, 1]).unwrap();
        let both = compose(&sigma, &tau).unwrap();
        assert_eq!(both.table(), &[2, 0, 1]);
        assert_eq!(compose(&BaseMap::identity(&x), &sigma).unwrap(), sigma);
        assert_ne!(sigma, tau);
    }

    #[test]
    fn measurability_is_checked() {
        let codisc = FinSpace::codiscrete("C", Kind::Meas, vec!["x".into(), "y".into()]).unwrap();
        let disc = FinSpace::labels("D", Kind::Meas, &["x", "y"]).unwrap();
        assert!(BaseMap::new(&codisc, &disc, |p| p.clone()).is_err());
        assert!(BaseMap::new(&disc, &codisc, |p| p.clone()).is_ok());
    }

    #[test]
    fn continuity_is_checked() {
        let s = FinSpace::from_generators("S", Kind::Top, vec!["0".into(), "1".into()], &[vec!["1".into()]]).unwrap();
        let flip = |p: &Point| Point::label(if p.as_label() == Some("0") { "1" } else { "0" });
        assert!(BaseMap::new(&s, &s, flip).is_err());
        assert!(BaseMap::identity(&s).is_isomorphism());
    }
}
