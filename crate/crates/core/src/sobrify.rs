//! The equalizer `DX` of the unit fork `X → TX ⇉ TTX`, its inclusion
//! `θ : DX → TX`, the unit `e : X → DX`, and the action of `D` on
//! thunkable morphisms.
//!
//! `DX` is found by characterization rather than by enumerating `TX`:
//! zero-one measures for the measure monads, irreducible closed sets for
//! `H`, units for the rest. Every candidate is then tested against the fork
//! and those that fail are kept aside in [`Sobrification::rejected`].

use std::fmt;

use rand::Rng;

use crate::error::{LabError, Result};
use crate::kleisli::{all_kernels, is_thunkable, kleisli_compose, KleisliMorphism};
use crate::monads::laws::all_maps;
use crate::monads::{Measure, Monad, MonadOps, Obj, TElem};
use crate::report::{CheckRecord, Mode, Report};
use crate::sample::seeded;
use crate::space::{BaseMap, FinSpace, Kind, Point};

#[derive(Clone, Debug)]
pub struct Sobrification {
    monad: Monad,
    x: FinSpace,
    dx: FinSpace,
    theta: Vec<TElem>,
    e: BaseMap,
    rejected: Vec<TElem>,
}

impl Sobrification {
    pub fn monad(&self) -> Monad {
        self.monad
    }

    pub fn space(&self) -> &FinSpace {
        &self.x
    }

    pub fn dx(&self) -> &FinSpace {
        &self.dx
    }

    /// `θ(d)` for the `i`-th point of `DX`.
    pub fn theta(&self, i: usize) -> &TElem {
        &self.theta[i]
    }

    pub fn thetas(&self) -> &[TElem] {
        &self.theta
    }

    pub fn e(&self) -> &BaseMap {
        &self.e
    }

    /// Characterized candidates that failed the fork equations.
    pub fn rejected(&self) -> &[TElem] {
        &self.rejected
    }

    /// The point of `DX` whose image under `θ` is `t`.
    pub fn theta_index(&self, t: &TElem) -> Option<usize> {
        self.dx.index_of(&Point::elem(t.clone()))
    }

    /// `θ♭ : DX ⇝ X`.
    pub fn theta_flat(&self) -> Result<KleisliMorphism> {
        KleisliMorphism::from_table(self.monad, &self.dx, &self.x, self.theta.clone())
    }

    pub fn is_sober(&self) -> bool {
        self.e.is_isomorphism()
    }
}

impl fmt::Display for Sobrification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "D for {} on `{}`: {} point(s)", self.monad, self.x.name(), self.dx.len())?;
        for (i, t) in self.theta.iter().enumerate() {
            writeln!(f, "  θ(d{i}) = {t}")?;
        }
        for (i, p) in self.x.points().iter().enumerate() {
            writeln!(f, "  e({p}) = d{}", self.e.image_index(i))?;
        }
        for t in &self.rejected {
            writeln!(f, "  rejected candidate {t}")?;
        }
        Ok(())
    }
}

/// Whether `t ∈ TX` satisfies `η_{TX}(t) = Tη(t)`.
pub fn fork_holds(ops: &dyn MonadOps, x: &Obj, t: &TElem) -> Result<bool> {
    Ok(ops.eta_t(x, t)? == ops.t_eta(x, t)?)
}

/// Irreducible closed sets of a finite space. Every nonempty closed set is
/// the closure of its maximal specialization classes, and it is irreducible
/// exactly when there is one such class; so the candidates are the point
/// closures.
fn irreducible_closed(x: &FinSpace) -> Result<Vec<TElem>> {
    let o = Obj::space(x);
    let mut out = Vec::new();
    for p in x.points() {
        let c = Monad::Lower.closure_elem(&o, [p])?;
        if c.as_closed().is_some_and(|c| c.generators().len() == 1) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Zero-one measures: weight 1 on exactly one atom, or, for sub-probability
/// measures, on at most one atom.
fn zero_one(m: Monad, x: &FinSpace) -> Vec<TElem> {
    let mut out: Vec<TElem> = (0..x.atom_count())
        .map(|a| Measure::dirac(x.point(x.atom_rep(x.atom_members(a)[0])).clone()).into())
        .collect();
    if m == Monad::SubGiry {
        out.push(Measure::zero().into());
    }
    out
}

pub fn sobrify(m: Monad, x: &FinSpace) -> Result<Sobrification> {
    m.check_space(x)?;
    let o = Obj::space(x);
    let candidates = match m {
        Monad::Distribution | Monad::Giry | Monad::SubGiry => zero_one(m, x),
        Monad::Lower => irreducible_closed(x)?,
        Monad::Maybe | Monad::Reader => x.points().iter().map(|p| m.eta(&o, p)).collect::<Result<_>>()?,
    };
    let (mut theta, mut rejected) = (Vec::new(), Vec::new());
    for t in candidates {
        if fork_holds(&m, &o, &t)? {
            theta.push(t);
        } else {
            rejected.push(t);
        }
    }
    theta.sort();
    theta.dedup();
    let pts: Vec<Point> = theta.iter().cloned().map(Point::elem).collect();
    let name = format!("D{}({})", m.name(), x.name());
    let dx = match (m, x.kind()) {
        (Monad::Lower, Kind::Top) => {
            let to = Obj::t(o.clone());
            FinSpace::from_preorder(&name, pts, |a, b| to.leq(a, b).unwrap_or(false))?
        }
        (_, Kind::Meas) => {
            // Subspace algebra induced by the evaluation maps p ↦ p(A).
            let gens: Vec<Vec<Point>> = x
                .atoms()?
                .iter()
                .map(|atom| {
                    pts.iter()
                        .filter(|d| {
                            let mu = d.as_elem().and_then(TElem::as_measure).unwrap();
                            mu.support().any(|s| atom.contains(s))
                        })
                        .cloned()
                        .collect()
                })
                .collect();
            FinSpace::from_generators(&name, Kind::Meas, pts, &gens)?
        }
        (_, kind) => FinSpace::discrete(&name, kind, pts)?,
    };
    let mut table = Vec::with_capacity(x.len());
    for p in x.points() {
        let u = m.eta(&o, p)?;
        let i = dx
            .index_of(&Point::elem(u.clone()))
            .ok_or_else(|| LabError::Internal(format!("η({p}) = {u} is not in D{}", x.name())))?;
        table.push(i);
    }
    let e = BaseMap::from_indices(x, &dx, table)
        .map_err(|err| LabError::Internal(format!("e is not structure-preserving: {err}")))?;
    Ok(Sobrification { monad: m, x: x.clone(), dx, theta, e, rejected })
}

pub fn is_sober(m: Monad, x: &FinSpace) -> Result<bool> {
    Ok(sobrify(m, x)?.is_sober())
}

/// `Df : DY → DZ` for thunkable `f : Y ⇝ Z`, the unique map with
/// `θ ∘ Df = (f ∘ θ♭)♯`.
pub fn d_on_morphism(sy: &Sobrification, sz: &Sobrification, f: &KleisliMorphism) -> Result<BaseMap> {
    if f.domain() != sy.space() || f.codomain() != sz.space() || f.monad() != sy.monad() {
        return Err(LabError::Mismatch(format!("{f} against D{} → D{}", sy.space().name(), sz.space().name())));
    }
    if !is_thunkable(f)? {
        return Err(LabError::Precondition(format!("D is only defined on thunkable morphisms; {f} is not")));
    }
    let m = f.monad();
    let oz = Obj::space(sz.space());
    let mut table = Vec::with_capacity(sy.dx().len());
    for t in sy.thetas() {
        let image = m.bind(&oz, t, &|y| Ok(f.eval(y)?.clone()))?;
        table.push(
            sz.theta_index(&image)
                .ok_or_else(|| LabError::Internal(format!("{image} does not satisfy the fork")))?,
        );
    }
    BaseMap::from_indices(sy.dx(), sz.dx(), table)
}

/// The thunkable morphism `θ ∘ g : X ⇝ Y` corresponding to `g : X → DY`.
pub fn from_d_map(sy: &Sobrification, g: &BaseMap) -> Result<KleisliMorphism> {
    let table = g.table().iter().map(|&i| sy.theta(i).clone()).collect();
    KleisliMorphism::from_table(sy.monad(), g.domain(), sy.space(), table)
}

/// The base map `X → DY` corresponding to a thunkable `f : X ⇝ Y`.
pub fn to_d_map(sy: &Sobrification, f: &KleisliMorphism) -> Result<BaseMap> {
    let table = f
        .table()
        .iter()
        .map(|t| sy.theta_index(t).ok_or_else(|| LabError::Precondition(format!("{t} is not in D{}", sy.space().name()))))
        .collect::<Result<Vec<_>>>()?;
    BaseMap::from_indices(f.domain(), sy.dx(), table)
}

/// The fork equations at every point of `x`, and for representable `TX`
/// the split-equalizer equations `μ ∘ η_T = 1`, `Tμ ∘ Tη_T = 1` and
/// `Tμ ∘ η_{TT} = η_T ∘ μ` on `TTX`.
pub fn unit_fork_check(ops: &dyn MonadOps, x: &FinSpace, limit: usize) -> Result<Report> {
    let m = ops.monad();
    m.check_space(x)?;
    let o = Obj::space(x);
    let to = Obj::t(o.clone());
    let mut rep = Report::new();
    let mut bad = None;
    for p in x.points() {
        if !fork_holds(ops, &o, &ops.eta(&o, p)?)? {
            bad = Some(format!("at {p}"));
            break;
        }
    }
    rep.push(CheckRecord::verdict("fork-on-units", bad.is_none(), Mode::Exhaustive, x.len(), bad));
    if !m.has_finite_t() {
        return Ok(rep);
    }
    let tx = m.enumerate_t(&o, limit)?;
    let ttx = match m.enumerate_t(&to, limit) {
        Ok(v) => v,
        Err(LabError::TooLarge(_)) => Vec::new(),
        Err(e) => return Err(e),
    };
    let mut bad = None;
    for t in &tx {
        let back = ops.mu(&o, &ops.eta_t(&o, t)?)?;
        if back != *t {
            bad = Some(format!("μ(η({t})) = {back}"));
            break;
        }
    }
    rep.push(CheckRecord::verdict("split-mu-eta", bad.is_none(), Mode::Exhaustive, tx.len(), bad));
    let tmu = |r: &TElem| ops.fmap(&to, r, &|q| Ok(Point::elem(ops.mu(&o, q.as_elem().unwrap())?)));
    let (mut bad1, mut bad2) = (None, None);
    for r in &ttx {
        let up = ops.fmap(&Obj::t(to.clone()), r, &|q| Ok(Point::elem(ops.eta_t(&o, q.as_elem().unwrap())?)))?;
        if bad1.is_none() && tmu(&up)? != *r {
            bad1 = Some(format!("at {r}"));
        }
        let lhs = tmu(&ops.eta_t(&to, r)?)?;
        let rhs = ops.eta_t(&o, &ops.mu(&o, r)?)?;
        if bad2.is_none() && lhs != rhs {
            bad2 = Some(format!("at {r}: {lhs} ≠ {rhs}"));
        }
    }
    if !ttx.is_empty() {
        rep.push(CheckRecord::verdict("split-Tmu-Teta", bad1.is_none(), Mode::Exhaustive, ttx.len(), bad1));
        rep.push(CheckRecord::verdict("split-Tmu-eta", bad2.is_none(), Mode::Exhaustive, ttx.len(), bad2));
    }
    Ok(rep)
}

/// `D` is idempotent at `x`: `DX` is sober, `θ♭` is a Kleisli isomorphism
/// with inverse `η ∘ e`, and `Tθ` is injective.
pub fn idempotence_check(m: Monad, x: &FinSpace, pairs: usize, seed: u64) -> Result<Report> {
    let s = sobrify(m, x)?;
    let ss = sobrify(m, s.dx())?;
    let mut rep = Report::new();
    rep.push(CheckRecord::verdict(
        "DX-sober",
        ss.is_sober(),
        Mode::Exhaustive,
        s.dx().len(),
        (!ss.is_sober()).then(|| format!("D(DX) has {} points, DX has {}", ss.dx().len(), s.dx().len())),
    ));
    let tf = s.theta_flat()?;
    let pe = KleisliMorphism::pure(m, s.e())?;
    let left = kleisli_compose(&tf, &pe)? == KleisliMorphism::identity(m, x)?;
    let right = kleisli_compose(&pe, &tf)? == KleisliMorphism::identity(m, s.dx())?;
    rep.push(CheckRecord::verdict(
        "theta-flat-iso",
        left && right,
        Mode::Exhaustive,
        x.len() + s.dx().len(),
        (!(left && right)).then(|| format!("θ♭∘e = 1: {left}, e∘θ♭ = 1: {right}")),
    ));
    let o = Obj::space(x);
    let odx = Obj::space(s.dx());
    let tt = Obj::t(o.clone());
    let t_theta = |t: &TElem| m.fmap(&tt, t, &|d| Ok(Point::elem(s.theta(s.dx().require(d)?).clone())));
    if m.has_finite_t() {
        let elems = m.enumerate_t(&odx, 1 << 14)?;
        let mut images: Vec<TElem> = elems.iter().map(t_theta).collect::<Result<_>>()?;
        images.sort();
        images.dedup();
        let ok = images.len() == elems.len();
        rep.push(CheckRecord::verdict(
            "T-theta-injective",
            ok,
            Mode::Exhaustive,
            elems.len(),
            (!ok).then(|| format!("{} elements, {} images", elems.len(), images.len())),
        ));
    } else if !m.inhabited(&Obj::t(odx.clone())) {
        rep.push(CheckRecord::pass("T-theta-injective", Mode::Exhaustive, 0).with_detail("T(DX) is empty"));
    } else {
        let mut rng = seeded(seed);
        let mut bad = None;
        let mut n = 0;
        for _ in 0..pairs {
            let (a, b) = (m.sample_t(&odx, &mut rng, 3)?, m.sample_t(&odx, &mut rng, 3)?);
            let b = if rng.random_ratio(1, 4) { a.clone() } else { b };
            n += 1;
            if (a == b) != (t_theta(&a)? == t_theta(&b)?) {
                bad = Some(format!("{a} and {b}"));
                break;
            }
        }
        rep.push(CheckRecord::verdict("T-theta-injective", bad.is_none(), Mode::Sampled, n, bad).with_seed(Some(seed)));
    }
    Ok(rep)
}

/// Functoriality and naturality of `D` on `x`, and the correspondence between
/// thunkable morphisms `x ⇝ x` and base maps `x → Dx`.
pub fn functor_suite(m: Monad, x: &FinSpace, cap: usize) -> Result<Report> {
    let s = sobrify(m, x)?;
    let mut rep = Report::new();
    let id = KleisliMorphism::identity(m, x)?;
    let did = d_on_morphism(&s, &s, &id)?;
    rep.push(CheckRecord::verdict("D-identity", did == BaseMap::identity(s.dx()), Mode::Exhaustive, 1, None));

    let maps = all_maps(x, x, cap);
    let maps_all = maps.is_some();
    let maps = maps.unwrap_or_else(|| vec![BaseMap::identity(x)]);
    let mode = |all: bool| if all { Mode::Exhaustive } else { Mode::Sampled };
    let mut bad = None;
    for g in &maps {
        let dg = d_on_morphism(&s, &s, &KleisliMorphism::pure(m, g)?)?;
        if g.then(s.e())? != s.e().then(&dg)? {
            bad = Some(format!("g = {g:?}"));
            break;
        }
    }
    rep.push(CheckRecord::verdict("e-natural", bad.is_none(), mode(maps_all), maps.len(), bad));

    let (thunkables, complete) = match m.has_finite_t().then(|| all_kernels(m, x, x, cap)).transpose()? {
        Some(Some(all)) => {
            let mut t = Vec::new();
            for k in all {
                if is_thunkable(&k)? {
                    t.push(k);
                }
            }
            (t, true)
        }
        _ => (maps.iter().map(|g| KleisliMorphism::pure(m, g)).collect::<Result<Vec<_>>>()?, false),
    };
    let mut bad = None;
    'outer: for f in &thunkables {
        let df = d_on_morphism(&s, &s, f)?;
        for g in thunkables.iter().take(16) {
            let dgf = d_on_morphism(&s, &s, &kleisli_compose(g, f)?)?;
            if dgf != df.then(&d_on_morphism(&s, &s, g)?)? {
                bad = Some(format!("f = {f}, g = {g}"));
                break 'outer;
            }
        }
    }
    rep.push(CheckRecord::verdict("D-composition", bad.is_none(), mode(complete), thunkables.len(), bad));

    let dmaps = all_maps(x, s.dx(), cap);
    let mut bad = None;
    if let Some(dmaps) = &dmaps {
        for g in dmaps {
            let f = from_d_map(&s, g)?;
            if !is_thunkable(&f)? || to_d_map(&s, &f)? != *g {
                bad = Some(format!("g = {g:?}"));
                break;
            }
        }
        if bad.is_none() && complete && dmaps.len() != thunkables.len() {
            bad = Some(format!("{} thunkable morphisms but {} maps into DX", thunkables.len(), dmaps.len()));
        }
    }
    let cases = dmaps.as_ref().map_or(0, Vec::len);
    rep.push(CheckRecord::verdict("thunkable-bijection", bad.is_none(), mode(complete && dmaps.is_some()), cases, bad));
    Ok(rep)
}
