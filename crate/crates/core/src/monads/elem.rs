use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::rational::Rational;
use crate::space::Point;

/// A finitely supported measure. For measurable spaces the keys are atom
/// representatives, so equal measures on the algebra are equal as maps.
/// Zero weights are never stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Measure(BTreeMap<Point, Rational>);

impl Measure {
    pub fn zero() -> Measure {
        Measure(BTreeMap::new())
    }

    pub fn dirac(p: Point) -> Measure {
        Measure(BTreeMap::from([(p, Rational::one())]))
    }

    /// Builds from weighted points, summing repeats and dropping zeros.
    pub fn from_weights(items: impl IntoIterator<Item = (Point, Rational)>) -> Measure {
        let mut m = Measure::zero();
        for (p, w) in items {
            m.add(p, w);
        }
        m
    }

    pub fn add(&mut self, p: Point, w: Rational) {
        if w.is_zero() {
            return;
        }
        match self.0.get_mut(&p) {
            Some(v) => {
                *v = &*v + &w;
                if v.is_zero() {
                    self.0.remove(&p);
                }
            }
            None => {
                self.0.insert(p, w);
            }
        }
    }

    pub fn weight(&self, p: &Point) -> Rational {
        self.0.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.0.values().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, &Rational)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scaled(&self, c: &Rational) -> Measure {
        Measure::from_weights(self.0.iter().map(|(p, w)| (p.clone(), w * c)))
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (p, w)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}: {w}")?;
        }
        f.write_str("}")
    }
}

/// A closed set, stored as the antichain of its maximal points (one least
/// representative per specialization class). The set itself is the
/// down-closure of these generators.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Closed(BTreeSet<Point>);

impl Closed {
    pub fn empty() -> Closed {
        Closed(BTreeSet::new())
    }

    /// Trusts that `gens` is already canonical; see `Obj::canonical_closed`.
    pub(crate) fn from_canonical(gens: BTreeSet<Point>) -> Closed {
        Closed(gens)
    }

    pub fn generators(&self) -> &BTreeSet<Point> {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Closed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("↓{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// An element of `TX` for one of the concrete monads.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TElem {
    Measure(Measure),
    Maybe(Option<Point>),
    /// Values in the two environments.
    Reader(Point, Point),
    Closed(Closed),
}

impl TElem {
    pub fn as_measure(&self) -> Option<&Measure> {
        match self {
            TElem::Measure(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_closed(&self) -> Option<&Closed> {
        match self {
            TElem::Closed(c) => Some(c),
            _ => None,
        }
    }

    fn variant(&self) -> &'static str {
        match self {
            TElem::Measure(_) => "measure",
            TElem::Maybe(_) => "maybe value",
            TElem::Reader(..) => "reader value",
            TElem::Closed(_) => "closed set",
        }
    }

    pub(crate) fn describe(&self) -> &'static str {
        self.variant()
    }
}

impl fmt::Display for TElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TElem::Measure(m) => write!(f, "{m}"),
            TElem::Maybe(Some(p)) => write!(f, "just {p}"),
            TElem::Maybe(None) => f.write_str("nothing"),
            TElem::Reader(a, b) => write!(f, "<{a}, {b}>"),
            TElem::Closed(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Debug for TElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Measure> for TElem {
    fn from(m: Measure) -> Self {
        TElem::Measure(m)
    }
}

impl From<Closed> for TElem {
    fn from(c: Closed) -> Self {
        TElem::Closed(c)
    }
}
