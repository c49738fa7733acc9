//! Finite sets, finite measurable spaces and finite topological spaces.
//!
//! A measurable structure is stored as its atoms and a topology as its
//! specialization preorder (`below[y]` is the closure of `{y}`). On a finite
//! carrier both encodings are lossless; the explicit set families are
//! produced on demand by [`FinSpace::members`].

pub mod enumerate;
mod map;
mod point;

pub use map::BaseMap;
pub use point::Point;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{LabError, Result};

pub type Subset = BTreeSet<Point>;
pub type Family = BTreeSet<Subset>;

/// Which base category a space lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Set,
    Meas,
    Top,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Set => "set",
            Kind::Meas => "meas",
            Kind::Top => "top",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        match s {
            "set" => Some(Kind::Set),
            "meas" => Some(Kind::Meas),
            "top" => Some(Kind::Top),
            _ => None,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A finite space. Cheap to clone; immutable after construction.
///
/// The carrier is kept sorted, so carrier order, `Ord` on points and the
/// iteration order of [`Subset`] all agree.
#[derive(Clone)]
pub struct FinSpace(Arc<Inner>);

struct Inner {
    name: String,
    kind: Kind,
    points: Vec<Point>,
    index: HashMap<Point, usize>,
    // Atom index of each point. Singletons unless `kind == Meas`.
    atom_of: Vec<usize>,
    atoms: Vec<Vec<usize>>,
    // below[y] = closure of {y}. Just {y} unless `kind == Top`.
    below: Vec<FixedBitSet>,
    // Least point equivalent to each point under the preorder.
    class_rep: Vec<usize>,
}

impl PartialEq for FinSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.kind == other.0.kind
                && self.0.points == other.0.points
                && self.0.atom_of == other.0.atom_of
                && self.0.below == other.0.below)
    }
}

impl Eq for FinSpace {}

impl fmt::Debug for FinSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]{{", self.0.name, self.0.kind)?;
        for (i, p) in self.0.points.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

fn bitset(n: usize, members: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for i in members {
        s.insert(i);
    }
    s
}

fn sorted_unique(name: &str, mut points: Vec<Point>) -> Result<Vec<Point>> {
    points.sort();
    for w in points.windows(2) {
        if w[0] == w[1] {
            return Err(LabError::InvalidStructure(format!(
                "duplicate point `{}` in `{name}`",
                w[0]
            )));
        }
    }
    Ok(points)
}

impl FinSpace {
    fn build(
        name: String,
        kind: Kind,
        points: Vec<Point>,
        atom_of: Vec<usize>,
        below: Vec<FixedBitSet>,
    ) -> FinSpace {
        let n = points.len();
        let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut atoms: Vec<Vec<usize>> = Vec::new();
        let mut renumber: HashMap<usize, usize> = HashMap::new();
        let mut atom_of_canon = vec![0; n];
        for i in 0..n {
            let id = *renumber.entry(atom_of[i]).or_insert_with(|| {
                atoms.push(Vec::new());
                atoms.len() - 1
            });
            atoms[id].push(i);
            atom_of_canon[i] = id;
        }
        let class_rep = (0..n)
            .map(|i| {
                (0..n)
                    .find(|&j| below[i].contains(j) && below[j].contains(i))
                    .unwrap_or(i)
            })
            .collect();
        FinSpace(Arc::new(Inner {
            name,
            kind,
            points,
            index,
            atom_of: atom_of_canon,
            atoms,
            below,
            class_rep,
        }))
    }

    /// A space where every subset is measurable (resp. open).
    pub fn discrete(name: &str, kind: Kind, points: Vec<Point>) -> Result<FinSpace> {
        let points = sorted_unique(name, points)?;
        let n = points.len();
        let below = (0..n).map(|i| bitset(n, [i])).collect();
        Ok(Self::build(name.to_string(), kind, points, (0..n).collect(), below))
    }

    /// A space whose only measurable (resp. open) sets are empty and full.
    pub fn codiscrete(name: &str, kind: Kind, points: Vec<Point>) -> Result<FinSpace> {
        if kind == Kind::Set {
            return Err(LabError::KindMismatch(
                "a plain set has no codiscrete structure".into(),
            ));
        }
        let n = points.len();
        Self::from_generators(name, kind, points, &[]).map(|s| {
            debug_assert_eq!(s.len(), n);
            s
        })
    }

    /// Discrete space on string labels; convenient in tests and demos.
    pub fn labels(name: &str, kind: Kind, labels: &[&str]) -> Result<FinSpace> {
        Self::discrete(name, kind, labels.iter().map(|l| Point::label(l)).collect())
    }

    /// The smallest algebra (for `Meas`) or topology (for `Top`) containing
    /// the generating subsets. A plain set takes no generators.
    pub fn from_generators(
        name: &str,
        kind: Kind,
        points: Vec<Point>,
        generators: &[Vec<Point>],
    ) -> Result<FinSpace> {
        let points = sorted_unique(name, points)?;
        let n = points.len();
        let index: HashMap<&Point, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            let mut s = FixedBitSet::with_capacity(n);
            for p in g {
                let i = *index.get(p).ok_or_else(|| LabError::UnknownPoint {
                    point: p.to_string(),
                    space: name.to_string(),
                })?;
                s.insert(i);
            }
            gens.push(s);
        }
        match kind {
            Kind::Set => {
                if !gens.is_empty() {
                    return Err(LabError::KindMismatch(format!(
                        "plain set `{name}` takes no generators"
                    )));
                }
                let below = (0..n).map(|i| bitset(n, [i])).collect();
                Ok(Self::build(name.to_string(), kind, points, (0..n).collect(), below))
            }
            Kind::Meas => {
                // Points with the same membership signature share an atom.
                let sig = |i: usize| gens.iter().map(|g| g.contains(i)).collect::<Vec<_>>();
                let sigs: Vec<Vec<bool>> = (0..n).map(sig).collect();
                let atom_of = (0..n).map(|i| (0..n).find(|&j| sigs[j] == sigs[i]).unwrap()).collect();
                let below = (0..n).map(|i| bitset(n, [i])).collect();
                Ok(Self::build(name.to_string(), kind, points, atom_of, below))
            }
            Kind::Top => {
                // x lies in cl{y} iff every generating open containing x contains y.
                let below = (0..n)
                    .map(|y| {
                        bitset(
                            n,
                            (0..n).filter(|&x| gens.iter().all(|g| !g.contains(x) || g.contains(y))),
                        )
                    })
                    .collect();
                Ok(Self::build(name.to_string(), kind, points, (0..n).collect(), below))
            }
        }
    }

    /// A measurable space given by its atoms.
    pub fn from_atoms(name: &str, points: Vec<Point>, atoms: &[Vec<Point>]) -> Result<FinSpace> {
        let points = sorted_unique(name, points)?;
        let n = points.len();
        let mut atom_of = vec![usize::MAX; n];
        for (a, block) in atoms.iter().enumerate() {
            for p in block {
                let i = points.binary_search(p).map_err(|_| LabError::UnknownPoint {
                    point: p.to_string(),
                    space: name.to_string(),
                })?;
                if atom_of[i] != usize::MAX {
                    return Err(LabError::InvalidStructure(format!("atoms of `{name}` overlap at `{p}`")));
                }
                atom_of[i] = a;
            }
        }
        if atom_of.contains(&usize::MAX) || atoms.iter().any(|a| a.is_empty()) {
            return Err(LabError::InvalidStructure(format!(
                "atoms of `{name}` do not partition the carrier"
            )));
        }
        let below = (0..n).map(|i| bitset(n, [i])).collect();
        Ok(Self::build(name.to_string(), Kind::Meas, points, atom_of, below))
    }

    /// A topological space given by its specialization preorder:
    /// `leq(x, y)` holds iff `x` lies in the closure of `{y}`.
    pub fn from_preorder(
        name: &str,
        points: Vec<Point>,
        leq: impl Fn(&Point, &Point) -> bool,
    ) -> Result<FinSpace> {
        let points = sorted_unique(name, points)?;
        let n = points.len();
        let below: Vec<FixedBitSet> = (0..n)
            .map(|y| bitset(n, (0..n).filter(|&x| leq(&points[x], &points[y]))))
            .collect();
        for x in 0..n {
            if !below[x].contains(x) {
                return Err(LabError::InvalidStructure(format!("preorder on `{name}` is not reflexive")));
            }
            for y in 0..n {
                if below[y].contains(x) && !below[x].is_subset(&below[y]) {
                    return Err(LabError::InvalidStructure(format!(
                        "preorder on `{name}` is not transitive"
                    )));
                }
            }
        }
        Ok(Self::build(name.to_string(), Kind::Top, points, (0..n).collect(), below))
    }

    /// The one-point space of the given kind; its point is the empty tuple.
    pub fn unit(kind: Kind) -> FinSpace {
        Self::discrete("1", kind, vec![Point::unit()]).expect("one point")
    }

    pub fn renamed(&self, name: &str) -> FinSpace {
        let i = &self.0;
        Self::build(name.to_string(), i.kind, i.points.clone(), i.atom_of.clone(), i.below.clone())
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn kind(&self) -> Kind {
        self.0.kind
    }

    pub fn len(&self) -> usize {
        self.0.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.0.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.0.points[i]
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.0.index.get(p).copied()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.0.index.contains_key(p)
    }

    /// Index of `p`, or an unknown-point error.
    pub fn require(&self, p: &Point) -> Result<usize> {
        self.index_of(p).ok_or_else(|| LabError::UnknownPoint {
            point: p.to_string(),
            space: self.0.name.clone(),
        })
    }

    // ---- measurable structure -------------------------------------------

    /// Atom index of point `i`; plain and topological spaces have singleton atoms.
    pub fn atom_index(&self, i: usize) -> usize {
        self.0.atom_of[i]
    }

    pub fn atom_count(&self) -> usize {
        self.0.atoms.len()
    }

    pub fn atom_members(&self, atom: usize) -> &[usize] {
        &self.0.atoms[atom]
    }

    /// The least point of the atom containing `i`; measures are keyed by it.
    pub fn atom_rep(&self, i: usize) -> usize {
        self.0.atoms[self.0.atom_of[i]][0]
    }

    /// Minimal nonempty measurable sets, in carrier order of their least point.
    pub fn atoms(&self) -> Result<Vec<Subset>> {
        if self.0.kind != Kind::Meas {
            return Err(LabError::MissingStructure(self.0.name.clone(), "algebra"));
        }
        Ok(self
            .0
            .atoms
            .iter()
            .map(|a| a.iter().map(|&i| self.0.points[i].clone()).collect())
            .collect())
    }

    // ---- topological structure ------------------------------------------

    /// `x ≤ y` in the specialization preorder: `x` lies in the closure of `{y}`.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.0.below[y].contains(x)
    }

    /// Indices in the closure of `{y}`.
    pub fn below(&self, y: usize) -> &FixedBitSet {
        &self.0.below[y]
    }

    /// Least point of the specialization class of `i`.
    pub fn class_rep(&self, i: usize) -> usize {
        self.0.class_rep[i]
    }

    pub fn is_t0(&self) -> bool {
        (0..self.len()).all(|i| self.0.class_rep[i] == i)
    }

    /// Smallest closed superset.
    pub fn closure(&self, s: &Subset) -> Result<Subset> {
        if self.0.kind != Kind::Top {
            return Err(LabError::MissingStructure(self.0.name.clone(), "topology"));
        }
        let mut acc = FixedBitSet::with_capacity(self.len());
        for p in s {
            acc.union_with(&self.0.below[self.require(p)?]);
        }
        Ok(acc.ones().map(|i| self.0.points[i].clone()).collect())
    }

    // ---- explicit set families ------------------------------------------

    /// The measurable sets (for `Meas`) or open sets (for `Top`); a plain set
    /// is reported with its full powerset. Fails above `limit` members.
    pub fn members(&self, limit: usize) -> Result<Family> {
        let n = self.len();
        let blocks: Vec<FixedBitSet> = match self.0.kind {
            Kind::Top => {
                let mut out = Vec::new();
                for closed in down_sets(self, limit)? {
                    let mut open = bitset(n, 0..n);
                    open.difference_with(&closed);
                    out.push(open);
                }
                out
            }
            _ => {
                let k = self.0.atoms.len();
                if k >= usize::BITS as usize || (1usize << k) > limit {
                    return Err(LabError::TooLarge(format!("algebra of `{}`", self.0.name)));
                }
                (0..1usize << k)
                    .map(|mask| {
                        bitset(
                            n,
                            (0..k)
                                .filter(|a| mask >> a & 1 == 1)
                                .flat_map(|a| self.0.atoms[a].iter().copied()),
                        )
                    })
                    .collect()
            }
        };
        Ok(blocks
            .into_iter()
            .map(|b| b.ones().map(|i| self.0.points[i].clone()).collect())
            .collect())
    }

    /// Closed subsets of a topological space (every subset for other kinds).
    pub fn closed_sets(&self, limit: usize) -> Result<Family> {
        Ok(down_sets(self, limit)?
            .into_iter()
            .map(|b| b.ones().map(|i| self.0.points[i].clone()).collect())
            .collect())
    }

    pub fn subset_of(&self, idx: impl IntoIterator<Item = usize>) -> Subset {
        idx.into_iter().map(|i| self.0.points[i].clone()).collect()
    }
}

/// All down-closed subsets, found by deciding points along a linear
/// extension of the preorder (so everything below a point is decided first).
fn down_sets(x: &FinSpace, limit: usize) -> Result<Vec<FixedBitSet>> {
    let n = x.len();
    // Classes ordered by the size of their down-set: a valid linear extension.
    let mut reps: Vec<usize> = (0..n).filter(|&i| x.class_rep(i) == i).collect();
    reps.sort_by_key(|&r| (x.below(r).count_ones(..), r));
    let mut out = Vec::new();
    let mut current = FixedBitSet::with_capacity(n);
    fn go(
        x: &FinSpace,
        reps: &[usize],
        k: usize,
        current: &mut FixedBitSet,
        out: &mut Vec<FixedBitSet>,
        limit: usize,
    ) -> Result<()> {
        if k == reps.len() {
            if out.len() >= limit {
                return Err(LabError::TooLarge(format!("closed sets of `{}`", x.name())));
            }
            out.push(current.clone());
            return Ok(());
        }
        let r = reps[k];
        go(x, reps, k + 1, current, out, limit)?;
        let strictly_below_included = x
            .below(r)
            .ones()
            .all(|b| x.class_rep(b) == r || current.contains(b));
        if strictly_below_included {
            let saved = current.clone();
            current.union_with(x.below(r));
            go(x, reps, k + 1, current, out, limit)?;
            *current = saved;
        }
        Ok(())
    }
    go(x, &reps, 0, &mut current, &mut out, limit)?;
    Ok(out)
}

/// Which family [`complete_structure`] closes up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureKind {
    Algebra,
    Topology,
}

/// Smallest algebra or topology on `carrier` containing `generators`.
pub fn complete_structure(
    carrier: &Subset,
    generators: &[Subset],
    kind: StructureKind,
) -> Result<Family> {
    let kind = match kind {
        StructureKind::Algebra => Kind::Meas,
        StructureKind::Topology => Kind::Top,
    };
    let gens: Vec<Vec<Point>> = generators.iter().map(|g| g.iter().cloned().collect()).collect();
    let space = FinSpace::from_generators("carrier", kind, carrier.iter().cloned().collect(), &gens)?;
    space.members(1 << 20)
}

/// Binary product with its projections; kinds must agree.
pub fn product(x: &FinSpace, y: &FinSpace) -> Result<(FinSpace, BaseMap, BaseMap)> {
    let space = product_n(&[x.clone(), y.clone()])?;
    let p1 = BaseMap::new(&space, x, |p| p.as_tuple().unwrap()[0].clone())?;
    let p2 = BaseMap::new(&space, y, |p| p.as_tuple().unwrap()[1].clone())?;
    Ok((space, p1, p2))
}

/// n-ary product with tuple points. The empty product needs a kind, so it
/// is rejected here; use [`FinSpace::unit`].
pub fn product_n(factors: &[FinSpace]) -> Result<FinSpace> {
    let Some(first) = factors.first() else {
        return Err(LabError::Precondition("empty product has no kind; use FinSpace::unit".into()));
    };
    let kind = first.kind();
    if let Some(f) = factors.iter().find(|f| f.kind() != kind) {
        return Err(LabError::KindMismatch(format!(
            "product of `{}` ({}) with `{}` ({})",
            first.name(),
            kind,
            f.name(),
            f.kind()
        )));
    }
    // Index tuples in lexicographic order; this is also the sorted point order.
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for f in factors {
        let mut next = Vec::with_capacity(tuples.len() * f.len());
        for t in &tuples {
            for i in 0..f.len() {
                let mut u = t.clone();
                u.push(i);
                next.push(u);
            }
        }
        tuples = next;
    }
    let n = tuples.len();
    let points: Vec<Point> = tuples
        .iter()
        .map(|t| Point::Tuple(t.iter().zip(factors).map(|(&i, f)| f.point(i).clone()).collect()))
        .collect();
    let code = |t: &[usize], g: &dyn Fn(&FinSpace, usize) -> usize| -> Vec<usize> {
        t.iter().zip(factors).map(|(&i, f)| g(f, i)).collect()
    };
    let atom_key: Vec<Vec<usize>> = tuples.iter().map(|t| code(t, &|f, i| f.atom_index(i))).collect();
    let atom_of = (0..n).map(|i| (0..n).find(|&j| atom_key[j] == atom_key[i]).unwrap()).collect();
    let below = (0..n)
        .map(|y| {
            bitset(
                n,
                (0..n).filter(|&x| {
                    tuples[x]
                        .iter()
                        .zip(&tuples[y])
                        .zip(factors)
                        .all(|((&a, &b), f)| f.leq(a, b))
                }),
            )
        })
        .collect();
    let name = factors.iter().map(|f| f.name().to_string()).collect::<Vec<_>>().join("×");
    Ok(FinSpace::build(name, kind, points, atom_of, below))
}

/// The n-fold power `X^n`; `X^0` is the unit space of the same kind.
pub fn power(x: &FinSpace, n: usize) -> Result<FinSpace> {
    if n == 0 {
        return Ok(FinSpace::unit(x.kind()));
    }
    product_n(&vec![x.clone(); n])
}

/// Quotient of a topological space by its specialization equivalence, with
/// the quotient map. Points of the quotient are the least class members.
pub fn kolmogorov_quotient(x: &FinSpace) -> Result<(FinSpace, BaseMap)> {
    if x.kind() != Kind::Top {
        return Err(LabError::MissingStructure(x.name().to_string(), "topology"));
    }
    let reps: Vec<Point> = (0..x.len())
        .filter(|&i| x.class_rep(i) == i)
        .map(|i| x.point(i).clone())
        .collect();
    let q = FinSpace::from_preorder(&format!("{}/~", x.name()), reps, |a, b| {
        x.leq(x.index_of(a).unwrap(), x.index_of(b).unwrap())
    })?;
    let map = BaseMap::new(x, &q, |p| x.point(x.class_rep(x.index_of(p).unwrap())).clone())?;
    Ok((q, map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[&str]) -> Subset {
        items.iter().map(|s| Point::label(s)).collect()
    }

    fn sierpinski() -> FinSpace {
        FinSpace::from_generators("S", Kind::Top, vec!["0".into(), "1".into()], &[vec!["1".into()]]).unwrap()
    }

    #[test]
    fn codiscrete_algebra_is_trivial() {
        let fam = complete_structure(&set(&["x", "x'"]), &[], StructureKind::Algebra).unwrap();
        assert_eq!(fam, [set(&[]), set(&["x", "x'"])].into_iter().collect());
    }

    #[test]
    fn one_generator_algebra() {
        let fam = complete_structure(&set(&["a", "b", "c"]), &[set(&["a"])], StructureKind::Algebra).unwrap();
        let want: Family = [set(&[]), set(&["a"]), set(&["b", "c"]), set(&["a", "b", "c"])]
            .into_iter()
            .collect();
        assert_eq!(fam, want);
        let x = FinSpace::from_generators("X", Kind::Meas, vec!["a".into(), "b".into(), "c".into()], &[vec!["a".into()]])
            .unwrap();
        assert_eq!(x.atoms().unwrap(), vec![set(&["a"]), set(&["b", "c"])]);
    }

    #[test]
    fn sierpinski_closure() {
        let s = sierpinski();
        assert_eq!(s.closure(&set(&["1"])).unwrap(), set(&["0", "1"]));
        assert_eq!(s.closure(&set(&["0"])).unwrap(), set(&["0"]));
        assert_eq!(s.closure(&set(&[])).unwrap(), set(&[]));
        assert!(s.atoms().is_err());
    }

    /// Oracle: all unions of basic rectangles U×V. There are nine rectangles
    /// but only six distinct unions.
    #[test]
    fn sierpinski_square_opens_match_rectangle_unions() {
        let s = sierpinski();
        let (sq, _, _) = product(&s, &s).unwrap();
        let opens_s = s.members(100).unwrap();
        let rects: Vec<Subset> = opens_s
            .iter()
            .flat_map(|u| {
                opens_s.iter().map(move |v| {
                    u.iter()
                        .flat_map(|a| v.iter().map(move |b| Point::pair(a.clone(), b.clone())))
                        .collect::<Subset>()
                })
            })
            .collect();
        assert_eq!(rects.len(), 9);
        let mut unions = Family::new();
        for mask in 0u32..(1 << rects.len()) {
            let u: Subset = (0..rects.len())
                .filter(|i| mask >> i & 1 == 1)
                .flat_map(|i| rects[i].iter().cloned())
                .collect();
            unions.insert(u);
        }
        assert_eq!(sq.members(1000).unwrap(), unions);
        assert_eq!(unions.len(), 6);
    }

    #[test]
    fn empty_space_structures() {
        let e = FinSpace::discrete("E", Kind::Top, vec![]).unwrap();
        assert_eq!(e.members(10).unwrap().len(), 1);
        let e = FinSpace::discrete("E", Kind::Meas, vec![]).unwrap();
        assert_eq!(e.members(10).unwrap().len(), 1);
    }

    #[test]
    fn mixed_kinds_rejected() {
        let a = FinSpace::labels("A", Kind::Meas, &["a"]).unwrap();
        let b = FinSpace::labels("B", Kind::Top, &["b"]).unwrap();
        assert!(matches!(product(&a, &b), Err(LabError::KindMismatch(_))));
    }

    #[test]
    fn kolmogorov_quotient_of_indiscrete_pair() {
        let x = FinSpace::codiscrete("X", Kind::Top, vec!["a".into(), "b".into(), "c".into()]).unwrap();
        let (q, map) = kolmogorov_quotient(&x).unwrap();
        assert_eq!(q.len(), 1);
        assert!(map.is_surjective());
        assert!(!x.is_t0());
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(FinSpace::labels("D", Kind::Set, &["a", "a"]).is_err());
    }
}
