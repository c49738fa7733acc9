//! Repeated sampling of outer elements `ρ ∈ TTX`: the observations
//! `observe_n(ρ) ∈ T(X^n)`, distinguishing searches, exhaustive and sampled
//! observationality checks, integrals against result objects, and the
//! deterministic-implies-thunkable sweep.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{LabError, Result};
use crate::kleisli::{classify_capped, KleisliMorphism};
use crate::monads::{Closed, Measure, Monad, MonadOps, Obj, TElem};
use crate::rational::Rational;
use crate::report::{CheckRecord, Mode, Report};
use crate::sample::{derive_seed, seeded};
use crate::space::{FinSpace, Point};

/// `μ_{X^n}(T(p ↦ ∇(p, …, p))(ρ))`: draw an inner element once, then sample
/// it `n` times independently. Points of the result are `n`-tuples.
pub fn observe_n(m: Monad, x: &Obj, rho: &TElem, n: usize) -> Result<TElem> {
    let factors = vec![x.clone(); n];
    let xn = Obj::power(x.clone(), n);
    m.bind(&xn, rho, &|p| {
        let inner = p.as_elem().ok_or_else(|| LabError::IllFormed(format!("`{p}` is not an element")))?;
        m.nabla(&factors, &vec![inner.clone(); n])
    })
}

/// Outcome of a distinguishing search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Distinction {
    EqualUpTo(usize),
    Distinguished { n: usize, left: TElem, right: TElem },
}

impl Distinction {
    pub fn n(&self) -> Option<usize> {
        match self {
            Distinction::Distinguished { n, .. } => Some(*n),
            Distinction::EqualUpTo(_) => None,
        }
    }
}

impl fmt::Display for Distinction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distinction::EqualUpTo(b) => write!(f, "equal up to n = {b}"),
            Distinction::Distinguished { n, left, right } => {
                write!(f, "distinguished at n = {n}: {left} vs {right}")
            }
        }
    }
}

/// The least `n ≤ n_max` at which the observations differ.
pub fn distinguish(m: Monad, x: &Obj, rho: &TElem, rho2: &TElem, n_max: usize) -> Result<Distinction> {
    for n in 0..=n_max {
        let (a, b) = (observe_n(m, x, rho, n)?, observe_n(m, x, rho2, n)?);
        if a != b {
            return Ok(Distinction::Distinguished { n, left: a, right: b });
        }
    }
    Ok(Distinction::EqualUpTo(n_max))
}

/// Result of checking injectivity of `(observe_0, …, observe_{n_max})` on all of `TTX`.
#[derive(Debug, Clone)]
pub struct Observationality {
    pub outers: usize,
    /// Least `n` for which `observe_0..=observe_n` is already injective.
    pub minimal_n: Option<usize>,
    /// A pair no `n ≤ n_max` separates.
    pub collision: Option<(TElem, TElem)>,
}

/// Enumerates `TTX` and refines it by successive observations. Only for
/// monads with finite `T`; the measure monads use [`sampled_observationality`].
pub fn brute_observationality(m: Monad, x: &FinSpace, n_max: usize, limit: usize) -> Result<Observationality> {
    if !m.has_finite_t() {
        return Err(LabError::Unsupported { monad: m.name().into(), what: "exhaustive observationality".into() });
    }
    let o = Obj::space(x);
    let outers = m.enumerate_t(&Obj::t(o.clone()), limit)?;
    let mut classes: Vec<Vec<usize>> = vec![(0..outers.len()).collect()];
    for n in 0..=n_max {
        let obs: Vec<TElem> = outers.par_iter().map(|r| observe_n(m, &o, r, n)).collect::<Result<_>>()?;
        classes = classes
            .into_iter()
            .flat_map(|class| {
                let mut split: BTreeMap<&TElem, Vec<usize>> = BTreeMap::new();
                for i in class {
                    split.entry(&obs[i]).or_default().push(i);
                }
                split.into_values().collect::<Vec<_>>()
            })
            .filter(|c| c.len() > 1)
            .collect();
        if classes.is_empty() {
            return Ok(Observationality { outers: outers.len(), minimal_n: Some(n), collision: None });
        }
    }
    let c = &classes[0];
    Ok(Observationality {
        outers: outers.len(),
        minimal_n: None,
        collision: Some((outers[c[0]].clone(), outers[c[1]].clone())),
    })
}

/// A random outer over `x` together with a partner sharing its first
/// moment: `δ_{μρ}` when they differ, otherwise an independent draw.
/// `None` when no distinct partner turns up, as on a space whose `TTX` is a
/// single point.
fn random_pair<R: Rng>(m: Monad, o: &Obj, rng: &mut R) -> Result<Option<(TElem, TElem)>> {
    let to = Obj::t(o.clone());
    let a = m.sample_t(&to, rng, 3)?;
    if rng.random_bool(0.5) {
        let flat = m.eta(&to, &Point::elem(m.mu(o, &a)?))?;
        if flat != a {
            return Ok(Some((a, flat)));
        }
    }
    for _ in 0..64 {
        let b = m.sample_t(&to, rng, 3)?;
        if b != a {
            return Ok(Some((a, b)));
        }
    }
    Ok(None)
}

fn support_size(t: &TElem) -> usize {
    match t {
        TElem::Measure(mu) => mu.len(),
        TElem::Closed(c) => c.generators().len(),
        _ => 1,
    }
}

/// Seeded random pairs of distinct outers over the given spaces, each
/// required to be separated at some `n` no larger than the combined outer
/// support size. About half the pairs are moment-matched at `n = 1`.
pub fn sampled_observationality(m: Monad, spaces: &[FinSpace], pairs: usize, seed: u64) -> Result<CheckRecord> {
    let usable: Vec<&FinSpace> = spaces.iter().filter(|s| m.accepts(s.kind()) && !s.is_empty()).collect();
    if usable.is_empty() {
        return Err(LabError::Precondition(format!("no space usable with {m}")));
    }
    let results: Vec<Result<(usize, Option<String>)>> = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeded(derive_seed(seed, i as u64));
            let mut drawn = None;
            for _ in 0..64 {
                let x = usable[rng.random_range(0..usable.len())];
                let o = Obj::space(x);
                if let Some((a, b)) = random_pair(m, &o, &mut rng)? {
                    drawn = Some((x, o, a, b));
                    break;
                }
            }
            let (x, o, a, b) =
                drawn.ok_or_else(|| LabError::Precondition("no two distinct outers over the given spaces".into()))?;
            let bound = support_size(&a) + support_size(&b);
            Ok(match distinguish(m, &o, &a, &b, bound)? {
                Distinction::Distinguished { n, .. } => (n, None),
                Distinction::EqualUpTo(_) => (0, Some(format!("on `{}`: {a} and {b} equal up to n = {bound}", x.name()))),
            })
        })
        .collect();
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, r) in results.into_iter().enumerate() {
        let (n, miss) = r?;
        if let Some(w) = miss {
            return Ok(CheckRecord::fail("observational-sampled", Mode::Sampled, i + 1, w).with_seed(Some(seed)));
        }
        *hist.entry(n).or_default() += 1;
    }
    let detail = hist.iter().map(|(n, c)| format!("n={n}: {c}")).join(", ");
    Ok(CheckRecord::pass("observational-sampled", Mode::Sampled, pairs)
        .with_detail(format!("no counterexample found; first distinguishing n: {detail}"))
        .with_seed(Some(seed)))
}

/// A test map `X → S` into a result object with a monoid.
#[derive(Debug, Clone)]
pub enum TestMap {
    /// Values in `[0, 1]` with multiplication, for the measure monads.
    Weights(Vec<Rational>),
    /// Indicator of an open set, valued in the Sierpinski space with meet.
    Open(Vec<bool>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Rat(Rational),
    Bool(bool),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rat(q) => write!(f, "{q}"),
            Value::Bool(b) => write!(f, "{}", *b as u8),
        }
    }
}

impl TestMap {
    pub fn indicator(x: &FinSpace, set: &[Point]) -> Vec<Rational> {
        x.points().iter().map(|p| if set.contains(p) { Rational::one() } else { Rational::zero() }).collect()
    }

    fn check(&self, m: Monad, x: &FinSpace) -> Result<()> {
        match self {
            TestMap::Weights(w) if m.is_measure() || m == Monad::Distribution => {
                if w.len() != x.len() || w.iter().any(|q| *q < Rational::zero() || *q > Rational::one()) {
                    return Err(LabError::Precondition("weights must give a value in [0, 1] per point".into()));
                }
                for i in 0..x.len() {
                    if w[i] != w[x.atom_rep(i)] {
                        return Err(LabError::NotStructurePreserving("weights must be constant on atoms".into()));
                    }
                }
                Ok(())
            }
            TestMap::Open(u) if m == Monad::Lower => {
                if u.len() != x.len() {
                    return Err(LabError::Precondition("one flag per point expected".into()));
                }
                for y in 0..x.len() {
                    for a in x.below(y).ones() {
                        if u[a] && !u[y] {
                            return Err(LabError::NotStructurePreserving("indicator is not of an open set".into()));
                        }
                    }
                }
                Ok(())
            }
            _ => Err(LabError::Unsupported { monad: m.name().into(), what: "this result object".into() }),
        }
    }
}

fn measure(t: &TElem) -> Result<&Measure> {
    t.as_measure().ok_or_else(|| LabError::IllFormed(format!("{t} is not a measure")))
}

fn closed(t: &TElem) -> Result<&Closed> {
    t.as_closed().ok_or_else(|| LabError::IllFormed(format!("{t} is not a closed set")))
}

fn eps(x: &FinSpace, h: &TestMap, t: &TElem) -> Result<Value> {
    Ok(match h {
        TestMap::Weights(w) => {
            let mu = measure(t)?;
            let mut s = Rational::zero();
            for (p, q) in mu.iter() {
                s = s + q * &w[x.require(p)?];
            }
            Value::Rat(s)
        }
        TestMap::Open(u) => {
            // U is up-closed, so C meets U iff some maximal generator lies in U.
            let mut hit = false;
            for g in closed(t)?.generators() {
                hit |= u[x.require(g)?];
            }
            Value::Bool(hit)
        }
    })
}

/// `ε_h(t)`: the expectation of `h` under a measure, or whether a closed set
/// meets the open set `h`.
pub fn epsilon_integral(m: Monad, x: &FinSpace, h: &TestMap, t: &TElem) -> Result<Value> {
    h.check(m, x)?;
    m.validate(&Obj::space(x), t)?;
    eps(x, h, t)
}

fn product(vals: &[Value], unit: Value) -> Value {
    vals.iter().fold(unit, |acc, v| match (acc, v) {
        (Value::Rat(a), Value::Rat(b)) => Value::Rat(a * b),
        (Value::Bool(a), Value::Bool(b)) => Value::Bool(a && *b),
        (a, _) => a,
    })
}

/// `ε_{ε_{h₁}⋯ε_{hₙ}}(ρ)`: integrate the pointwise product of the inner
/// integrals against the outer element. In debug builds the value is
/// cross-checked against integrating `h₁ ⊗ ⋯ ⊗ hₙ` over `observe_n(ρ)`.
pub fn monoid_test(m: Monad, x: &FinSpace, rho: &TElem, hs: &[TestMap]) -> Result<Value> {
    for h in hs {
        h.check(m, x)?;
    }
    let unit = if m == Monad::Lower { Value::Bool(true) } else { Value::Rat(Rational::one()) };
    let inner = |p: &Point| -> Result<Value> {
        let t = p.as_elem().ok_or_else(|| LabError::IllFormed(format!("`{p}` is not an element")))?;
        let vals = hs.iter().map(|h| eps(x, h, t)).collect::<Result<Vec<_>>>()?;
        Ok(product(&vals, unit.clone()))
    };
    let v = match m {
        Monad::Lower => {
            let mut hit = false;
            for g in closed(rho)?.generators() {
                hit |= inner(g)? == Value::Bool(true);
            }
            Value::Bool(hit)
        }
        _ => {
            let mut s = Rational::zero();
            for (p, q) in measure(rho)?.iter() {
                let Value::Rat(v) = inner(p)? else { unreachable!() };
                s = s + q * &v;
            }
            Value::Rat(s)
        }
    };
    if cfg!(debug_assertions) {
        let via = integrate_observation(m, x, rho, hs)?;
        if via != v {
            return Err(LabError::Internal(format!("monoid test {v} disagrees with observation integral {via}")));
        }
    }
    Ok(v)
}

/// `∫ h₁ ⊗ ⋯ ⊗ hₙ d(observe_n ρ)`.
pub fn integrate_observation(m: Monad, x: &FinSpace, rho: &TElem, hs: &[TestMap]) -> Result<Value> {
    let obs = observe_n(m, &Obj::space(x), rho, hs.len())?;
    let coords = |p: &Point| -> Result<Vec<usize>> {
        p.as_tuple().unwrap_or_default().iter().map(|q| x.require(q)).collect()
    };
    Ok(match m {
        Monad::Lower => {
            let mut hit = false;
            for g in closed(&obs)?.generators() {
                let idx = coords(g)?;
                hit |= hs.iter().zip(&idx).all(|(h, &i)| matches!(h, TestMap::Open(u) if u[i]));
            }
            Value::Bool(hit)
        }
        _ => {
            let mut s = Rational::zero();
            for (p, q) in measure(&obs)?.iter() {
                let idx = coords(p)?;
                let mut w = q.clone();
                for (h, &i) in hs.iter().zip(&idx) {
                    if let TestMap::Weights(ws) = h {
                        w = w * &ws[i];
                    }
                }
                s = s + w;
            }
            Value::Rat(s)
        }
    })
}

/// For observational monads every deterministic kernel must be thunkable;
/// for the reader monad deterministic-not-thunkable kernels are expected,
/// and the check passes when one is found.
pub fn det_implies_thunkable_suite(m: Monad, kernels: &[KleisliMorphism]) -> Result<Report> {
    let mut rep = Report::new();
    let mut det = 0;
    let mut witness = None;
    for k in kernels {
        let c = classify_capped(k, 1)?;
        if c.deterministic {
            det += 1;
            if !c.thunkable && witness.is_none() {
                witness = Some(k.clone());
            }
        }
    }
    let rec = if m.is_observational() {
        CheckRecord::verdict(
            "deterministic-implies-thunkable",
            witness.is_none(),
            Mode::Exhaustive,
            kernels.len(),
            witness.map(|k| format!("deterministic but not thunkable: {k}")),
        )
        .with_detail(format!("{det} deterministic kernels"))
    } else {
        CheckRecord::verdict(
            "non-observational-counterexample",
            witness.is_some(),
            Mode::Exhaustive,
            kernels.len(),
            None,
        )
        .with_detail(match &witness {
            Some(k) => format!("deterministic but not thunkable, as expected without observationality: {k}"),
            None => "no deterministic-not-thunkable kernel found".into(),
        })
    };
    rep.push(rec);
    Ok(rep)
}

/// Pushforward of `t ∈ T(X^n)` along a map of coordinates.
fn reindex(m: Monad, x: &Obj, t: &TElem, pick: &[usize]) -> Result<TElem> {
    let target = Obj::power(x.clone(), pick.len());
    m.fmap(&target, t, &|p| {
        let items = p.as_tuple().ok_or_else(|| LabError::IllFormed(format!("`{p}` is not a tuple")))?;
        Ok(Point::Tuple(pick.iter().map(|&i| items[i].clone()).collect()))
    })
}

/// `observe_n(ρ)` is invariant under coordinate permutations.
pub fn exchangeable(m: Monad, x: &Obj, rho: &TElem, n: usize) -> Result<Option<Vec<usize>>> {
    let obs = observe_n(m, x, rho, n)?;
    for perm in (0..n).permutations(n) {
        if reindex(m, x, &obs, &perm)? != obs {
            return Ok(Some(perm));
        }
    }
    Ok(None)
}

/// Discarding coordinate `i` of `observe_n(ρ)` gives `observe_{n-1}(ρ)`, for every `i`.
pub fn marginal_consistent(m: Monad, x: &Obj, rho: &TElem, n: usize) -> Result<Option<usize>> {
    if n == 0 {
        return Ok(None);
    }
    let obs = observe_n(m, x, rho, n)?;
    let lower = observe_n(m, x, rho, n - 1)?;
    for i in 0..n {
        let keep: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        if reindex(m, x, &obs, &keep)? != lower {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Exchangeability and marginal consistency of every outer for `n ≤ n_max`,
/// and separation of every pair of distinct outers within `n_max`.
pub fn definetti_check(m: Monad, x: &FinSpace, outers: &[TElem], n_max: usize) -> Result<Report> {
    let o = Obj::space(x);
    let mut rep = Report::new();
    let mut bad = None;
    let mut cases = 0;
    'ex: for r in outers {
        for n in 0..=n_max {
            cases += 1;
            if let Some(p) = exchangeable(m, &o, r, n)? {
                bad = Some(format!("{r} at n = {n} under permutation {p:?}"));
                break 'ex;
            }
        }
    }
    rep.push(CheckRecord::verdict("exchangeable", bad.is_none(), Mode::Exhaustive, cases, bad));
    let mut bad = None;
    let mut cases = 0;
    'mc: for r in outers {
        for n in 1..=n_max {
            cases += 1;
            if let Some(i) = marginal_consistent(m, &o, r, n)? {
                bad = Some(format!("{r} at n = {n}, dropping coordinate {i}"));
                break 'mc;
            }
        }
    }
    rep.push(CheckRecord::verdict("marginal-consistent", bad.is_none(), Mode::Exhaustive, cases, bad));
    let mut bad = None;
    let mut found = Vec::new();
    let mut cases = 0;
    for (i, j) in (0..outers.len()).tuple_combinations() {
        if outers[i] == outers[j] {
            continue;
        }
        cases += 1;
        match distinguish(m, &o, &outers[i], &outers[j], n_max)? {
            Distinction::Distinguished { n, .. } => found.push(n),
            Distinction::EqualUpTo(_) => {
                bad = Some(format!("{} and {} agree up to n = {n_max}", outers[i], outers[j]));
                break;
            }
        }
    }
    rep.push(
        CheckRecord::verdict("distinct-outers-separated", bad.is_none(), Mode::Exhaustive, cases, bad)
            .with_detail(format!("distinguishing n: {found:?}")),
    );
    Ok(rep)
}

/// A coin with bias `q` on `{tt, ff}`.
pub fn coin(q: Rational) -> TElem {
    Measure::from_weights([(Point::label("ff"), Rational::one() - &q), (Point::label("tt"), q)]).into()
}

/// A finite mixture of inner elements.
pub fn mixture(items: impl IntoIterator<Item = (Rational, TElem)>) -> TElem {
    Measure::from_weights(items.into_iter().map(|(w, t)| (Point::elem(t), w))).into()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Kind;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn bool_set() -> FinSpace {
        FinSpace::labels("bool", Kind::Set, &["tt", "ff"]).unwrap()
    }

    fn tup(items: &[&str]) -> Point {
        Point::Tuple(items.iter().map(|s| Point::label(s)).collect())
    }

    /// Σ_p ρ(p) · p^{⊗n}, computed directly on weights.
    fn moment_oracle(rho: &[(Rational, Vec<(&str, Rational)>)], n: usize) -> Measure {
        let mut out = Measure::zero();
        for (w, inner) in rho {
            for combo in (0..n).map(|_| inner.iter()).multi_cartesian_product() {
                let mut q = w.clone();
                let mut key = Vec::new();
                for (l, v) in combo {
                    q = q * v;
                    key.push(Point::label(l));
                }
                out.add(Point::Tuple(key), q);
            }
        }
        out
    }

    #[test]
    fn diagonal_versus_square() {
        let m = Monad::Distribution;
        let o = Obj::space(&bool_set());
        let diag = mixture([(r(1, 2), coin(r(1, 1))), (r(1, 2), coin(r(0, 1)))]);
        let fair = mixture([(r(1, 1), coin(r(1, 2)))]);
        let d2 = observe_n(m, &o, &diag, 2).unwrap();
        let oracle = moment_oracle(
            &[(r(1, 2), vec![("tt", r(1, 1))]), (r(1, 2), vec![("ff", r(1, 1))])],
            2,
        );
        assert_eq!(d2, TElem::Measure(oracle));
        assert_eq!(d2.as_measure().unwrap().weight(&tup(&["tt", "tt"])), r(1, 2));
        let f2 = observe_n(m, &o, &fair, 2).unwrap();
        assert_eq!(f2.as_measure().unwrap().len(), 4);
        assert_eq!(observe_n(m, &o, &diag, 1).unwrap(), observe_n(m, &o, &fair, 1).unwrap());
        assert_eq!(distinguish(m, &o, &diag, &fair, 4).unwrap().n(), Some(2));
        assert_eq!(distinguish(m, &o, &diag, &diag, 4).unwrap(), Distinction::EqualUpTo(4));
    }

    #[test]
    fn observe_one_is_mu_and_zero_is_mass() {
        let m = Monad::SubGiry;
        let b = FinSpace::labels("bool", Kind::Meas, &["tt", "ff"]).unwrap();
        let o = Obj::space(&b);
        let mut rng = seeded(5);
        for _ in 0..30 {
            let rho = m.sample_t(&Obj::t(o.clone()), &mut rng, 3).unwrap();
            let one = observe_n(m, &o, &rho, 1).unwrap();
            let unwrapped = m.fmap(&o, &one, &|p| Ok(p.as_tuple().unwrap()[0].clone())).unwrap();
            assert_eq!(unwrapped, m.mu(&o, &rho).unwrap());
            let zero = observe_n(m, &o, &rho, 0).unwrap();
            // samp_0 = del: the mass of the outer measure, not of μρ
            assert_eq!(zero.as_measure().unwrap().total(), rho.as_measure().unwrap().total());
        }
    }

    #[test]
    fn h_full_versus_diagonal() {
        let b = FinSpace::labels("bool", Kind::Top, &["tt", "ff"]).unwrap();
        let o = Obj::space(&b);
        let h = Monad::Lower;
        let both = h.closure_elem(&o, &[Point::label("tt"), Point::label("ff")]).unwrap();
        let tt = h.closure_elem(&o, &[Point::label("tt")]).unwrap();
        let ff = h.closure_elem(&o, &[Point::label("ff")]).unwrap();
        let to = Obj::t(o.clone());
        let m1 = h.closure_elem(&to, &[Point::elem(both)]).unwrap();
        let m2 = h.closure_elem(&to, &[Point::elem(tt), Point::elem(ff)]).unwrap();
        let d = distinguish(h, &o, &m1, &m2, 3).unwrap();
        let Distinction::Distinguished { n: 2, left, right } = d else { panic!("{d}") };
        assert_eq!(left.as_closed().unwrap().generators().len(), 4);
        assert_eq!(right.as_closed().unwrap().generators().len(), 2);
    }

    #[test]
    fn maybe_and_h_are_observational_on_small_spaces() {
        let x = FinSpace::labels("X", Kind::Set, &["a", "b"]).unwrap();
        let res = brute_observationality(Monad::Maybe, &x, 3, 1 << 12).unwrap();
        assert_eq!(res.minimal_n, Some(1));
        let y = FinSpace::labels("Y", Kind::Top, &["a", "b"]).unwrap();
        let res = brute_observationality(Monad::Lower, &y, 3, 1 << 12).unwrap();
        assert!(res.minimal_n.is_some_and(|n| n <= 2), "{res:?}");
        // reader is not observational: η(a,b)-style outers collapse
        let res = brute_observationality(Monad::Reader, &x, 3, 1 << 12).unwrap();
        assert!(res.collision.is_some());
    }

    #[test]
    fn integrals() {
        let m = Monad::Distribution;
        let b = bool_set();
        let p = coin(r(1, 3));
        let one = TestMap::Weights(vec![r(1, 1); 2]);
        assert_eq!(epsilon_integral(m, &b, &one, &p).unwrap(), Value::Rat(r(1, 1)));
        let ind = TestMap::Weights(TestMap::indicator(&b, &[Point::label("tt")]));
        assert_eq!(epsilon_integral(m, &b, &ind, &p).unwrap(), Value::Rat(r(1, 3)));
        let diag = mixture([(r(1, 2), coin(r(1, 1))), (r(1, 2), coin(r(0, 1)))]);
        let fair = mixture([(r(1, 1), coin(r(1, 2)))]);
        let hs = [ind.clone(), ind.clone()];
        assert_eq!(monoid_test(m, &b, &diag, &hs).unwrap(), Value::Rat(r(1, 2)));
        assert_eq!(monoid_test(m, &b, &fair, &hs).unwrap(), Value::Rat(r(1, 4)));
        assert_eq!(monoid_test(m, &b, &fair, &[]).unwrap(), Value::Rat(r(1, 1)));
        assert!(epsilon_integral(Monad::Reader, &b, &ind, &p).is_err());
    }

    #[test]
    fn h_integral_is_intersection() {
        let s = FinSpace::from_generators("S", Kind::Top, vec!["0".into(), "1".into()], &[vec!["1".into()]]).unwrap();
        let o = Obj::space(&s);
        let c = Monad::Lower.closure_elem(&o, &[Point::label("0")]).unwrap();
        let u = TestMap::Open(vec![false, true]);
        assert_eq!(epsilon_integral(Monad::Lower, &s, &u, &c).unwrap(), Value::Bool(false));
        let all = Monad::Lower.closure_elem(&o, &[Point::label("1")]).unwrap();
        assert_eq!(epsilon_integral(Monad::Lower, &s, &u, &all).unwrap(), Value::Bool(true));
        assert!(epsilon_integral(Monad::Lower, &s, &TestMap::Open(vec![true, false]), &c).is_err());
    }

    #[test]
    fn definetti_on_equal_mean_mixtures() {
        let b = bool_set();
        let wide = mixture([(r(1, 2), coin(r(1, 4))), (r(1, 2), coin(r(3, 4)))]);
        let fair = mixture([(r(1, 1), coin(r(1, 2)))]);
        let rep = definetti_check(Monad::Distribution, &b, &[wide.clone(), fair.clone()], 3).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
        assert_eq!(distinguish(Monad::Distribution, &Obj::space(&b), &wide, &fair, 3).unwrap().n(), Some(2));
    }

    #[test]
    fn sampled_distribution_pairs() {
        let spaces = [bool_set(), FinSpace::labels("three", Kind::Set, &["a", "b", "c"]).unwrap()];
        let rec = sampled_observationality(Monad::Distribution, &spaces, 200, 7).unwrap();
        assert!(!rec.is_failure(), "{rec:?}");
    }
}
