use std::collections::BTreeSet;
use std::fmt;

use super::{Closed, TElem};
use crate::error::{LabError, Result};
use crate::space::{FinSpace, Kind, Point};

/// An object built from finite spaces by products and applications of the
/// monad. `TX` is usually infinite for the measure monads, so it is never
/// materialized; the operations below only need its canonical forms.
#[derive(Clone, PartialEq, Eq)]
pub enum Obj {
    Space(FinSpace),
    T(Box<Obj>),
    Prod(Vec<Obj>),
}

impl Obj {
    pub fn space(x: &FinSpace) -> Obj {
        Obj::Space(x.clone())
    }

    pub fn t(x: Obj) -> Obj {
        Obj::T(Box::new(x))
    }

    /// `T^k X`.
    pub fn t_iter(x: &FinSpace, k: usize) -> Obj {
        (0..k).fold(Obj::space(x), |o, _| Obj::t(o))
    }

    pub fn power(x: Obj, n: usize) -> Obj {
        Obj::Prod(vec![x; n])
    }

    pub fn unit() -> Obj {
        Obj::Prod(Vec::new())
    }

    pub fn kind(&self) -> Kind {
        match self {
            Obj::Space(s) => s.kind(),
            Obj::T(x) => x.kind(),
            Obj::Prod(fs) => fs.first().map_or(Kind::Set, Obj::kind),
        }
    }

    fn components<'a>(&self, fs: &'a [Obj], p: &'a Point) -> Result<&'a [Point]> {
        match p.as_tuple() {
            Some(items) if items.len() == fs.len() => Ok(items),
            _ => Err(LabError::UnknownPoint { point: p.to_string(), space: self.to_string() }),
        }
    }

    /// Structural membership; elements of `TX` are only checked for shape.
    pub fn has_point(&self, p: &Point) -> bool {
        match self {
            Obj::Space(s) => s.contains(p),
            Obj::T(_) => p.as_elem().is_some(),
            Obj::Prod(fs) => match p.as_tuple() {
                Some(items) if items.len() == fs.len() => {
                    fs.iter().zip(items).all(|(f, q)| f.has_point(q))
                }
                _ => false,
            },
        }
    }

    /// Representative of the atom containing `p`. On `TX` the evaluation
    /// maps separate points, so every point is its own atom.
    pub fn atom_rep(&self, p: &Point) -> Result<Point> {
        match self {
            Obj::Space(s) => Ok(s.point(s.atom_rep(s.require(p)?)).clone()),
            Obj::T(_) => Ok(p.clone()),
            Obj::Prod(fs) => {
                let items = self.components(fs, p)?;
                Ok(Point::Tuple(
                    fs.iter().zip(items).map(|(f, q)| f.atom_rep(q)).collect::<Result<_>>()?,
                ))
            }
        }
    }

    /// Specialization preorder. On `HX` it is inclusion of closed sets; on
    /// every other `TX` it is equality.
    pub fn leq(&self, a: &Point, b: &Point) -> Result<bool> {
        match self {
            Obj::Space(s) => Ok(s.leq(s.require(a)?, s.require(b)?)),
            Obj::T(inner) => match (a.as_elem(), b.as_elem()) {
                (Some(TElem::Closed(c)), Some(TElem::Closed(d))) => inner.closed_subset(c, d),
                _ => Ok(a == b),
            },
            Obj::Prod(fs) => {
                let (xs, ys) = (self.components(fs, a)?, self.components(fs, b)?);
                for ((f, x), y) in fs.iter().zip(xs).zip(ys) {
                    if !f.leq(x, y)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Least representative of the specialization class of `p`.
    pub fn class_rep(&self, p: &Point) -> Result<Point> {
        match self {
            Obj::Space(s) => Ok(s.point(s.class_rep(s.require(p)?)).clone()),
            Obj::T(_) => Ok(p.clone()),
            Obj::Prod(fs) => {
                let items = self.components(fs, p)?;
                Ok(Point::Tuple(
                    fs.iter().zip(items).map(|(f, q)| f.class_rep(q)).collect::<Result<_>>()?,
                ))
            }
        }
    }

    /// `C ⊆ D` for closed sets of this object.
    pub fn closed_subset(&self, c: &Closed, d: &Closed) -> Result<bool> {
        for g in c.generators() {
            let mut found = false;
            for h in d.generators() {
                if self.leq(g, h)? {
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The closure of a finite set of points, in canonical generator form.
    pub fn canonical_closed<'a>(&self, pts: impl IntoIterator<Item = &'a Point>) -> Result<Closed> {
        let reps: BTreeSet<Point> = pts.into_iter().map(|p| self.class_rep(p)).collect::<Result<_>>()?;
        let mut keep = BTreeSet::new();
        for p in &reps {
            let mut dominated = false;
            for q in &reps {
                if p != q && self.leq(p, q)? {
                    dominated = true;
                    break;
                }
            }
            if !dominated {
                keep.insert(p.clone());
            }
        }
        Ok(Closed::from_canonical(keep))
    }

    /// Whether `p` lies in the closed set `c`.
    pub fn closed_contains(&self, c: &Closed, p: &Point) -> Result<bool> {
        for g in c.generators() {
            if self.leq(p, g)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// All points, when the object is a finite space or product of them.
    pub fn base_points(&self) -> Option<Vec<Point>> {
        match self {
            Obj::Space(s) => Some(s.points().to_vec()),
            Obj::T(_) => None,
            Obj::Prod(fs) => {
                let mut acc = vec![Vec::new()];
                for f in fs {
                    let pts = f.base_points()?;
                    acc = acc
                        .into_iter()
                        .flat_map(|t: Vec<Point>| {
                            pts.iter().map(move |p| {
                                let mut u = t.clone();
                                u.push(p.clone());
                                u
                            })
                        })
                        .collect();
                }
                Some(acc.into_iter().map(Point::Tuple).collect())
            }
        }
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obj::Space(s) => f.write_str(s.name()),
            Obj::T(x) => write!(f, "T({x})"),
            Obj::Prod(fs) if fs.is_empty() => f.write_str("1"),
            Obj::Prod(fs) => {
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("×")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
