//! A stage-bounded model of the name-generation monad on presheaves over
//! finite sets and injections.
//!
//! Stage `s` is the set of names `{0, …, s-1}`. An element of `TX` at stage
//! `s` is a class `[b, x]` with `x ∈ X(s + b)`: the names `s, …, s+b-1` are
//! fresh and bound. Classes are kept in a normal form: unused fresh names
//! are dropped and the remaining ones are numbered in order of first
//! occurrence. Every stage is capped at a bound `K`, and operations that
//! would need a larger stage fail with [`LabError::StageBound`].

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{LabError, Result};
use crate::report::{CheckRecord, Mode, Report};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NgVal {
    Name(usize),
    Const(Arc<str>),
    Tuple(Vec<NgVal>),
    /// `[b, body]`; the body lives `b` stages up.
    Class(usize, Box<NgVal>),
}

impl NgVal {
    pub fn name(i: usize) -> NgVal {
        NgVal::Name(i)
    }

    pub fn constant(s: &str) -> NgVal {
        NgVal::Const(s.into())
    }

    pub fn class(b: usize, body: NgVal) -> NgVal {
        NgVal::Class(b, Box::new(body))
    }

    pub fn block(&self) -> Option<usize> {
        match self {
            NgVal::Class(b, _) => Some(*b),
            _ => None,
        }
    }

    /// Free names at stage `s`, in order of first occurrence.
    pub fn free_names(&self, s: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_free(s, &mut out);
        out
    }

    fn collect_free(&self, s: usize, out: &mut Vec<usize>) {
        match self {
            NgVal::Name(i) => {
                if *i < s && !out.contains(i) {
                    out.push(*i);
                }
            }
            NgVal::Const(_) => {}
            NgVal::Tuple(items) => items.iter().for_each(|v| v.collect_free(s, out)),
            NgVal::Class(c, body) => {
                let mut inner = Vec::new();
                body.collect_free(s + c, &mut inner);
                for i in inner {
                    if i < s && !out.contains(&i) {
                        out.push(i);
                    }
                }
            }
        }
    }

    /// Whether every name is below the stage it occurs at; a class body
    /// lives `c` stages further up.
    pub fn fits_stage(&self, s: usize) -> bool {
        match self {
            NgVal::Name(i) => *i < s,
            NgVal::Const(_) => true,
            NgVal::Tuple(items) => items.iter().all(|v| v.fits_stage(s)),
            NgVal::Class(c, body) => body.fits_stage(s + c),
        }
    }

    /// The action of an injection `f : s → s'` given as a table.
    pub fn rename(&self, s: usize, s2: usize, f: &[usize]) -> NgVal {
        match self {
            NgVal::Name(i) => NgVal::Name(f[*i]),
            NgVal::Const(_) => self.clone(),
            NgVal::Tuple(items) => NgVal::Tuple(items.iter().map(|v| v.rename(s, s2, f)).collect()),
            NgVal::Class(c, body) => {
                let g: Vec<usize> = (0..s + c).map(|i| if i < s { f[i] } else { s2 + (i - s) }).collect();
                NgVal::class(*c, body.rename(s + c, s2 + c, &g))
            }
        }
    }
}

impl fmt::Display for NgVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NgVal::Name(i) => write!(f, "#{i}"),
            NgVal::Const(c) => f.write_str(c),
            NgVal::Tuple(items) => write!(f, "({})", items.iter().join(", ")),
            NgVal::Class(b, body) => write!(f, "[{b}, {body}]"),
        }
    }
}

impl fmt::Debug for NgVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A presheaf given by generating values; stage `s` holds every injective
/// renaming of a generator from a stage `t ≤ s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub generators: Vec<(usize, NgVal)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Staged {
    Names,
    Consts(Vec<Arc<str>>),
    Product(Vec<Staged>),
    T(Box<Staged>),
    Table(Arc<Table>),
}

impl Staged {
    pub fn t(x: Staged) -> Staged {
        Staged::T(Box::new(x))
    }

    pub fn unit() -> Staged {
        Staged::Product(Vec::new())
    }

    pub fn consts(labels: &[&str]) -> Staged {
        Staged::Consts(labels.iter().map(|s| Arc::from(*s)).collect())
    }

    pub fn power(x: Staged, n: usize) -> Staged {
        Staged::Product(vec![x; n])
    }

    pub fn table(name: &str, generators: Vec<(usize, NgVal)>) -> Result<Staged> {
        for (s, v) in &generators {
            if !v.fits_stage(*s) {
                return Err(LabError::InvalidStructure(format!("value {v} of `{name}` is not at stage {s}")));
            }
        }
        Ok(Staged::Table(Arc::new(Table { name: name.into(), generators })))
    }
}

impl fmt::Display for Staged {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Staged::Names => f.write_str("N"),
            Staged::Consts(cs) => write!(f, "{{{}}}", cs.iter().join(", ")),
            Staged::Product(fs) if fs.is_empty() => f.write_str("1"),
            Staged::Product(fs) => write!(f, "{}", fs.iter().map(|x| format!("{x}")).join(" × ")),
            Staged::T(x) => write!(f, "T({x})"),
            Staged::Table(t) => f.write_str(&t.name),
        }
    }
}

/// All injections `a → b`, as tables.
fn injections(a: usize, b: usize) -> Vec<Vec<usize>> {
    if a > b {
        return Vec::new();
    }
    (0..b).permutations(a).collect()
}

/// The name-generation monad truncated at stage `bound`.
#[derive(Clone, Copy, Debug)]
pub struct NameGen {
    pub bound: usize,
}

impl NameGen {
    pub fn new(bound: usize) -> NameGen {
        NameGen { bound }
    }

    fn check_stage(&self, s: usize) -> Result<()> {
        if s > self.bound {
            return Err(LabError::StageBound { bound: self.bound, needed: s });
        }
        Ok(())
    }

    /// `X(s)`, sorted.
    pub fn values(&self, x: &Staged, s: usize) -> Result<Vec<NgVal>> {
        self.check_stage(s)?;
        Ok(match x {
            Staged::Names => (0..s).map(NgVal::Name).collect(),
            Staged::Consts(cs) => cs.iter().map(|c| NgVal::Const(c.clone())).collect(),
            Staged::Product(fs) => {
                if fs.is_empty() {
                    return Ok(vec![NgVal::Tuple(Vec::new())]);
                }
                let parts = fs.iter().map(|f| self.values(f, s)).collect::<Result<Vec<_>>>()?;
                parts.into_iter().multi_cartesian_product().map(NgVal::Tuple).collect()
            }
            Staged::Table(t) => {
                let mut out = BTreeSet::new();
                for (st, v) in &t.generators {
                    for f in injections(*st, s) {
                        out.insert(v.rename(*st, s, &f));
                    }
                }
                out.into_iter().collect()
            }
            Staged::T(inner) => {
                let mut out = BTreeSet::new();
                for b in 0..=self.bound - s {
                    for v in self.values(inner, s + b)? {
                        out.insert(self.normalize(inner, s, b, v)?);
                    }
                }
                out.into_iter().collect()
            }
        })
    }

    pub fn contains(&self, x: &Staged, s: usize, v: &NgVal) -> Result<bool> {
        Ok(match (x, v) {
            (Staged::Names, NgVal::Name(i)) => *i < s,
            (Staged::Consts(cs), NgVal::Const(c)) => cs.contains(c),
            (Staged::Product(fs), NgVal::Tuple(items)) if fs.len() == items.len() => {
                let mut ok = true;
                for (f, it) in fs.iter().zip(items) {
                    ok &= self.contains(f, s, it)?;
                }
                ok
            }
            (Staged::Table(_), _) => self.values(x, s)?.binary_search(v).is_ok(),
            (Staged::T(inner), NgVal::Class(b, body)) => {
                self.check_stage(s + b)?;
                self.contains(inner, s + b, body)? && self.normalize(inner, s, *b, (**body).clone())? == *v
            }
            _ => false,
        })
    }

    /// The action of an injection `f : s → s2` on `X`. Unlike
    /// [`NgVal::rename`] this renormalizes nested classes, which an
    /// injection can leave non-normal when `X` is not nominal.
    pub fn transport(&self, x: &Staged, v: &NgVal, s: usize, s2: usize, f: &[usize]) -> Result<NgVal> {
        match (x, v) {
            (Staged::Product(fs), NgVal::Tuple(items)) => Ok(NgVal::Tuple(
                fs.iter().zip(items).map(|(fx, it)| self.transport(fx, it, s, s2, f)).collect::<Result<_>>()?,
            )),
            (Staged::T(inner), NgVal::Class(c, body)) => {
                let g: Vec<usize> = (0..s + c).map(|i| if i < s { f[i] } else { s2 + (i - s) }).collect();
                let body = self.transport(inner, body, s + c, s2 + c, &g)?;
                self.normalize(inner, s2, *c, body)
            }
            _ => Ok(v.rename(s, s2, f)),
        }
    }

    /// A value `w ∈ X(s2)` whose inclusion into stage `s` is `v`, if any.
    pub fn restrict(&self, x: &Staged, v: &NgVal, s: usize, s2: usize) -> Result<Option<NgVal>> {
        Ok(match x {
            Staged::Names | Staged::Consts(_) | Staged::Table(_) => {
                let ok = v.free_names(s).iter().all(|&i| i < s2) && self.contains(x, s2, v)?;
                ok.then(|| v.clone())
            }
            Staged::Product(fs) => {
                let NgVal::Tuple(items) = v else { return Ok(None) };
                let mut out = Vec::new();
                for (f, it) in fs.iter().zip(items) {
                    match self.restrict(f, it, s, s2)? {
                        Some(w) => out.push(w),
                        None => return Ok(None),
                    }
                }
                Some(NgVal::Tuple(out))
            }
            Staged::T(inner) => {
                // Treat the names s2..s as fresh. Renaming acts on values
                // syntactically, so the result includes back to `v` exactly
                // when none of those names occurs free.
                let NgVal::Class(c, body) = v else { return Ok(None) };
                if v.free_names(s).iter().any(|&i| i >= s2) {
                    return Ok(None);
                }
                Some(self.normalize(inner, s2, (s - s2) + c, (**body).clone())?)
            }
        })
    }

    /// Normal form of the raw class `[b, body]` at stage `s`, `body ∈ X(s+b)`.
    pub fn normalize(&self, x: &Staged, s: usize, b: usize, body: NgVal) -> Result<NgVal> {
        self.check_stage(s + b)?;
        let used: Vec<usize> = body.free_names(s + b).into_iter().filter(|&i| i >= s).collect();
        let mut perm: Vec<usize> = (0..s).collect();
        perm.resize(s + b, usize::MAX);
        for (j, &u) in used.iter().enumerate() {
            perm[u] = s + j;
        }
        let mut next = s + used.len();
        for slot in perm.iter_mut().skip(s) {
            if *slot == usize::MAX {
                *slot = next;
                next += 1;
            }
        }
        let body = body.rename(s + b, s + b, &perm);
        for k in used.len()..=b {
            if let Some(w) = self.restrict(x, &body, s + b, s + k)? {
                return Ok(NgVal::class(k, w));
            }
        }
        Err(LabError::Normalization(format!("[{b}, {body}] at stage {s} does not restrict to itself")))
    }

    pub fn eta(&self, v: &NgVal) -> NgVal {
        NgVal::class(0, v.clone())
    }

    /// `μ [b, [c, z]] = [b + c, z]`, normalized.
    pub fn mu(&self, x: &Staged, s: usize, rho: &NgVal) -> Result<NgVal> {
        let NgVal::Class(b, inner) = rho else { return Err(not_class(rho)) };
        let NgVal::Class(c, z) = &**inner else { return Err(not_class(inner)) };
        self.normalize(x, s, b + c, (**z).clone())
    }

    /// `(Tf)[b, v] = [b, f(v)]` for a natural `f` into `y`.
    pub fn fmap(&self, y: &Staged, s: usize, t: &NgVal, f: &dyn Fn(usize, &NgVal) -> Result<NgVal>) -> Result<NgVal> {
        let NgVal::Class(b, v) = t else { return Err(not_class(t)) };
        self.normalize(y, s, *b, f(s + b, v)?)
    }

    pub fn bind(&self, y: &Staged, s: usize, t: &NgVal, f: &dyn Fn(usize, &NgVal) -> Result<NgVal>) -> Result<NgVal> {
        let lifted = self.fmap(&Staged::t(y.clone()), s, t, f)?;
        self.mu(y, s, &lifted)
    }

    /// `∇([b₁, v₁], …, [bₙ, vₙ]) = [b₁ + … + bₙ, (v₁, …, vₙ)]` with the blocks
    /// placed side by side.
    pub fn nabla(&self, factors: &[Staged], s: usize, ts: &[NgVal]) -> Result<NgVal> {
        let mut total = 0;
        let mut items = Vec::with_capacity(ts.len());
        let blocks: Vec<usize> = ts.iter().map(|t| t.block().ok_or_else(|| not_class(t))).collect::<Result<_>>()?;
        let big = s + blocks.iter().sum::<usize>();
        self.check_stage(big)?;
        for (t, &b) in ts.iter().zip(&blocks) {
            let NgVal::Class(_, v) = t else { unreachable!() };
            let f: Vec<usize> = (0..s + b).map(|i| if i < s { i } else { i + total }).collect();
            items.push(self.transport(&factors[items.len()], v, s + b, big, &f)?);
            total += b;
        }
        self.normalize(&Staged::Product(factors.to_vec()), s, total, NgVal::Tuple(items))
    }

    /// `samp_n(ρ)`: the inner class sampled `n` times.
    pub fn observe_n(&self, x: &Staged, s: usize, rho: &NgVal, n: usize) -> Result<NgVal> {
        let factors = vec![x.clone(); n];
        self.bind(&Staged::Product(factors.clone()), s, rho, &|st, p| self.nabla(&factors, st, &vec![p.clone(); n]))
    }

    /// Whether `η_{TX}(t) = Tη(t)`.
    pub fn fork_holds(&self, x: &Staged, s: usize, t: &NgVal) -> Result<bool> {
        let lhs = self.eta(t);
        let rhs = self.fmap(&Staged::t(x.clone()), s, t, &|_, v| Ok(self.eta(v)))?;
        Ok(lhs == rhs)
    }

    /// Equality in the colimit, decided by searching for injections
    /// `f : s+b → s+d`, `f' : s+b' → s+d` fixing `s` with `f(x) = f'(x')`.
    pub fn colimit_equal(&self, obj: &Staged, s: usize, b: usize, x: &NgVal, b2: usize, x2: &NgVal) -> Result<bool> {
        for d in b.max(b2)..=self.bound.saturating_sub(s) {
            let extend = |bb: usize| -> Vec<Vec<usize>> {
                injections(bb, d).into_iter().map(|g| (0..s).chain(g.into_iter().map(|i| s + i)).collect()).collect()
            };
            let lhs: BTreeSet<NgVal> =
                extend(b).iter().map(|f| self.transport(obj, x, s + b, s + d, f)).collect::<Result<_>>()?;
            for f in extend(b2) {
                if lhs.contains(&self.transport(obj, x2, s + b2, s + d, &f)?) {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Pullback preservation: for every value at every stage and every two
    /// subsets `A, B` of its stage, support on `A` and on `B` implies support
    /// on `A ∩ B`. Returns a violating `(stage, value, A, B)` if any.
    pub fn nominal_violation(&self, x: &Staged) -> Result<Option<(usize, NgVal, Vec<usize>, Vec<usize>)>> {
        for s in 0..=self.bound {
            let vals = self.values(x, s)?;
            let subsets: Vec<Vec<usize>> = (0..s).powerset().collect();
            for v in &vals {
                let supported: Vec<bool> =
                    subsets.iter().map(|a| self.restrict_to(x, v, s, a)).collect::<Result<_>>()?;
                for (i, a) in subsets.iter().enumerate() {
                    for (j, bset) in subsets.iter().enumerate().skip(i + 1) {
                        if supported[i] && supported[j] {
                            let meet: Vec<usize> = a.iter().copied().filter(|e| bset.contains(e)).collect();
                            let k = subsets.iter().position(|c| *c == meet).unwrap();
                            if !supported[k] {
                                return Ok(Some((s, v.clone(), a.clone(), bset.clone())));
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// Whether `v ∈ X(s)` lies in the image of `X(A) → X(s)`.
    fn restrict_to(&self, x: &Staged, v: &NgVal, s: usize, a: &[usize]) -> Result<bool> {
        // Reorder so that A comes first, keeping the relative order.
        let mut perm = vec![0; s];
        let rest: Vec<usize> = (0..s).filter(|i| !a.contains(i)).collect();
        for (j, &i) in a.iter().chain(&rest).enumerate() {
            perm[i] = j;
        }
        Ok(self.restrict(x, &v.rename(s, s, &perm), s, a.len())?.is_some())
    }

    pub fn is_nominal(&self, x: &Staged) -> Result<bool> {
        Ok(self.nominal_violation(x)?.is_none())
    }

    /// `e : X → DX` is a bijection at every stage, where `DX(s)` is the set
    /// of fork solutions in `TX(s)`. Returns the first failing stage.
    pub fn sober_violation(&self, x: &Staged) -> Result<Option<usize>> {
        let tx = Staged::t(x.clone());
        for s in 0..=self.bound {
            let units: BTreeSet<NgVal> = self.values(x, s)?.iter().map(|v| self.eta(v)).collect();
            let mut solutions = BTreeSet::new();
            for t in self.values(&tx, s)? {
                if self.fork_holds(x, s, &t)? {
                    solutions.insert(t);
                }
            }
            if units != solutions {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }
}

fn not_class(v: &NgVal) -> LabError {
    LabError::IllFormed(format!("{v} is not a class"))
}

fn check(name: &str, cases: usize, bad: Option<String>) -> CheckRecord {
    CheckRecord::verdict(name, bad.is_none(), Mode::Exhaustive, cases, bad)
}

/// Monad, naturality and monoidal laws on `x` at every stage where the
/// needed levels fit under the bound, plus `T1 ≅ 1`.
pub fn ng_law_suite(ng: &NameGen, x: &Staged) -> Result<Report> {
    let tx = Staged::t(x.clone());
    let ttx = Staged::t(tx.clone());
    let mut rep = Report::new();
    let stages: Vec<usize> = (0..=ng.bound.min(2)).collect();
    let mut cases = [0usize; 8];
    let mut bad: [Option<String>; 8] = Default::default();
    let xx = Staged::Product(vec![x.clone(), x.clone()]);
    let diag = |_: usize, v: &NgVal| Ok(NgVal::Tuple(vec![v.clone(), v.clone()]));
    let swap = |_: usize, v: &NgVal| match v {
        NgVal::Tuple(items) => Ok(NgVal::Tuple(vec![items[1].clone(), items[0].clone()])),
        _ => Err(LabError::IllFormed(format!("{v} is not a pair"))),
    };
    for &s in &stages {
        for t in ng.values(&tx, s)? {
            cases[0] += 1;
            if bad[0].is_none() {
                let l = ng.mu(x, s, &ng.eta(&t))?;
                let r = ng.mu(x, s, &ng.fmap(&tx, s, &t, &|_, v| Ok(ng.eta(v)))?)?;
                if l != t || r != t {
                    bad[0] = Some(format!("at stage {s}: {t}"));
                }
            }
            cases[2] += 1;
            if bad[2].is_none() {
                let lhs = ng.fmap(&xx, s, &t, &diag)?;
                let rhs = ng.fmap(&xx, s, &t, &diag)?;
                if lhs != rhs || ng.fmap(x, s, &t, &|_, v| Ok(v.clone()))? != t {
                    bad[2] = Some(format!("at stage {s}: {t}"));
                }
            }
            for u in ng.values(&tx, s)? {
                let Ok(tu) = ng.nabla(&[x.clone(), x.clone()], s, &[t.clone(), u.clone()]) else { continue };
                cases[3] += 1;
                let ut = ng.nabla(&[x.clone(), x.clone()], s, &[u.clone(), t.clone()])?;
                if bad[3].is_none() && ng.fmap(&xx, s, &tu, &swap)? != ut {
                    bad[3] = Some(format!("at stage {s}: {t}, {u}"));
                }
                cases[4] += 1;
                let seq = ng.bind(&xx, s, &t, &|st, a| {
                    let u2 = ng.transport(&tx, &u, s, st, &(0..s).collect::<Vec<_>>())?;
                    ng.bind(&xx, st, &u2, &|st2, bv| {
                        let a2 = ng.transport(x, a, st, st2, &(0..st).collect::<Vec<_>>())?;
                        Ok(ng.eta(&NgVal::Tuple(vec![a2, bv.clone()])))
                    })
                })?;
                if bad[4].is_none() && seq != tu {
                    bad[4] = Some(format!("at stage {s}: {t}, {u}: {seq} vs {tu}"));
                }
                let unit = ng.nabla(&[x.clone()], s, &[t.clone()])?;
                cases[5] += 1;
                if bad[5].is_none() && ng.fmap(x, s, &unit, &|_, v| Ok(tuple_item(v, 0)))? != t {
                    bad[5] = Some(format!("at stage {s}: {t}"));
                }
            }
        }
        if s + 1 <= ng.bound {
            for r in ng.values(&ttx, s)? {
                cases[1] += 1;
                if bad[1].is_none() {
                    let l = ng.fmap(&xx, s, &ng.mu(x, s, &r)?, &diag)?;
                    let r2 = ng.mu(&xx, s, &ng.fmap(&Staged::t(xx.clone()), s, &r, &|st, t| ng.fmap(&xx, st, t, &diag))?)?;
                    if l != r2 {
                        bad[1] = Some(format!("μ-naturality at stage {s}: {r}"));
                    }
                }
            }
        }
    }
    // associativity on TTTX at stage 0
    for r in ng.values(&Staged::t(ttx.clone()), 0)? {
        cases[6] += 1;
        let l = ng.mu(x, 0, &ng.mu(&tx, 0, &r)?)?;
        let r2 = ng.mu(x, 0, &ng.fmap(&tx, 0, &r, &|st, t| ng.mu(x, st, t))?)?;
        if l != r2 {
            bad[6] = Some(format!("{r}"));
            break;
        }
    }
    for s in 0..=ng.bound {
        let n = ng.values(&Staged::t(Staged::unit()), s)?.len();
        cases[7] += 1;
        if n != 1 && bad[7].is_none() {
            bad[7] = Some(format!("T1 has {n} classes at stage {s}"));
        }
    }
    let names = [
        "unit-laws",
        "mu-naturality",
        "functor-laws",
        "nabla-symmetry",
        "commutativity",
        "nabla-unary",
        "associativity",
        "affine",
    ];
    for (i, name) in names.iter().enumerate() {
        rep.push(check(name, cases[i], bad[i].take()));
    }
    Ok(rep)
}

fn tuple_item(v: &NgVal, i: usize) -> NgVal {
    match v {
        NgVal::Tuple(items) => items[i].clone(),
        _ => v.clone(),
    }
}

/// Outcome for one pair in the observationality experiment.
#[derive(Clone, Debug)]
pub struct NgPair {
    pub stage: usize,
    pub left: NgVal,
    pub right: NgVal,
    /// Least distinguishing `n`, if found within the bound.
    pub n: Option<usize>,
    /// `|b| + |b'| + 1` for the outer blocks.
    pub limit: usize,
}

/// Every pair of distinct `TTX` classes at stages `≤ max_stage`, separated
/// by `samp_n`. Pairs for which `samp_n` at `n = |b|+|b'|+1` would exceed
/// the stage bound are reported as truncated and skipped.
pub fn ng_observationality_experiment(ng: &NameGen, x: &Staged, max_stage: usize) -> Result<(Report, Vec<NgPair>)> {
    let ttx = Staged::t(Staged::t(x.clone()));
    let mut pairs = Vec::new();
    let mut truncated = 0;
    for s in 0..=max_stage.min(ng.bound) {
        let outers = ng.values(&ttx, s)?;
        for (a, b) in outers.iter().tuple_combinations() {
            let limit = a.block().unwrap() + b.block().unwrap() + 1;
            let mut n_found = None;
            let mut cut = false;
            for n in 0..=limit {
                match (ng.observe_n(x, s, a, n), ng.observe_n(x, s, b, n)) {
                    (Ok(l), Ok(r)) => {
                        if l != r {
                            n_found = Some(n);
                            break;
                        }
                    }
                    (Err(LabError::StageBound { .. }), _) | (_, Err(LabError::StageBound { .. })) => {
                        cut = true;
                        break;
                    }
                    (Err(e), _) | (_, Err(e)) => return Err(e),
                }
            }
            if cut && n_found.is_none() {
                truncated += 1;
                continue;
            }
            pairs.push(NgPair { stage: s, left: a.clone(), right: b.clone(), n: n_found, limit });
        }
    }
    let mut rep = Report::new();
    let miss = pairs.iter().find(|p| p.n.is_none());
    rep.push(
        check(
            "ng-distinguished",
            pairs.len(),
            miss.map(|p| format!("stage {}: {} and {} not separated up to n = {}", p.stage, p.left, p.right, p.limit)),
        )
        .with_detail(format!("{truncated} pair(s) skipped: stage bound reached before n = |b|+|b'|+1")),
    );
    let over = pairs.iter().find(|p| p.n.is_some_and(|n| n > p.limit));
    let max_n = pairs.iter().filter_map(|p| p.n).max().unwrap_or(0);
    rep.push(
        check("ng-bound", pairs.len(), over.map(|p| format!("{} vs {} needs n = {:?}", p.left, p.right, p.n)))
            .with_detail(format!("largest distinguishing n = {max_n}")),
    );
    Ok((rep, pairs))
}

/// Nominality of `x` and of `T x`, and sobriety of each nominal one.
pub fn ng_nominal_report(ng: &NameGen, x: &Staged) -> Result<Report> {
    let mut rep = Report::new();
    let nominal = ng.nominal_violation(x)?;
    let sober = ng.sober_violation(x)?;
    rep.push(CheckRecord::info(
        "nominal",
        match &nominal {
            None => format!("{x} is nominal"),
            Some((s, v, a, b)) => format!("{x} is not nominal: {v} at stage {s} is supported by {a:?} and {b:?} only"),
        },
    ));
    rep.push(CheckRecord::info(
        "sober",
        match sober {
            None => format!("{x} is sober"),
            Some(s) => format!("{x} is not sober: the unit fork is not an equalizer at stage {s}"),
        },
    ));
    rep.push(check(
        "nominal-implies-sober",
        1,
        (nominal.is_none() && sober.is_some()).then(|| format!("{x} is nominal but not sober")),
    ));
    let small = NameGen::new(ng.bound.min(4));
    let tx = Staged::t(x.clone());
    rep.push(check(
        "T-nominal",
        1,
        small.nominal_violation(&tx)?.map(|(s, v, _, _)| format!("T({x}) fails at stage {s} on {v}")),
    ));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ng() -> NameGen {
        NameGen::new(5)
    }

    #[test]
    fn garbage_collection_and_alpha() {
        let g = ng();
        let n = Staged::Names;
        assert_eq!(g.normalize(&n, 1, 2, NgVal::name(0)).unwrap(), NgVal::class(0, NgVal::name(0)));
        let nn = Staged::Product(vec![n.clone(), n.clone()]);
        let a = g.normalize(&nn, 0, 2, NgVal::Tuple(vec![NgVal::name(0), NgVal::name(1)])).unwrap();
        let b = g.normalize(&nn, 0, 2, NgVal::Tuple(vec![NgVal::name(1), NgVal::name(0)])).unwrap();
        assert_eq!(a, b);
        let v = g.normalize(&nn, 0, 3, NgVal::Tuple(vec![NgVal::name(2), NgVal::name(2)])).unwrap();
        assert_eq!(v, NgVal::class(1, NgVal::Tuple(vec![NgVal::name(0), NgVal::name(0)])));
        for s in 0..=2 {
            for t in g.values(&Staged::t(nn.clone()), s).unwrap() {
                let NgVal::Class(b, body) = &t else { panic!() };
                assert_eq!(g.normalize(&nn, s, *b, (**body).clone()).unwrap(), t);
            }
        }
    }

    #[test]
    fn table_values_must_fit_their_stage() {
        // [1, #1] at stage 1: the body may use the private name #1
        assert!(Staged::table("t", vec![(1, NgVal::class(1, NgVal::name(1)))]).is_ok());
        assert!(Staged::table("t", vec![(1, NgVal::name(1))]).is_err());
        assert!(Staged::table("t", vec![(1, NgVal::class(1, NgVal::name(2)))]).is_err());
    }

    fn some_name() -> Staged {
        Staged::table("someName", vec![(1, NgVal::constant("u"))]).unwrap()
    }

    #[test]
    fn normal_forms_decide_colimit_equality() {
        let g = NameGen::new(4);
        let objects = [
            Staged::Names,
            Staged::Product(vec![Staged::Names, Staged::Names]),
            some_name(),
        ];
        for x in &objects {
            let s = 1;
            let mut raws = Vec::new();
            for b in 0..=2 {
                for v in g.values(x, s + b).unwrap() {
                    raws.push((b, v));
                }
            }
            for (b, v) in &raws {
                for (b2, v2) in &raws {
                    let nf = g.normalize(x, s, *b, v.clone()).unwrap() == g.normalize(x, s, *b2, v2.clone()).unwrap();
                    assert_eq!(nf, g.colimit_equal(x, s, *b, v, *b2, v2).unwrap(), "{x}: [{b}, {v}] vs [{b2}, {v2}]");
                }
            }
        }
    }

    #[test]
    fn t1_is_one_and_laws_hold() {
        let g = ng();
        for s in 0..=5 {
            assert_eq!(g.values(&Staged::t(Staged::unit()), s).unwrap().len(), 1);
        }
        for x in [Staged::Names, Staged::consts(&["tt", "ff"]), Staged::Product(vec![Staged::Names, Staged::Names])] {
            let rep = ng_law_suite(&NameGen::new(4), &x).unwrap();
            assert!(rep.passed(), "{x}: {}", rep.to_text());
        }
    }

    #[test]
    fn shared_versus_independent_fresh_name() {
        let g = ng();
        let n = Staged::Names;
        let outers = g.values(&Staged::t(Staged::t(n.clone())), 0).unwrap();
        let shared = NgVal::class(1, NgVal::class(0, NgVal::name(0)));
        let indep = NgVal::class(0, NgVal::class(1, NgVal::name(0)));
        assert_eq!(outers, vec![indep.clone(), shared.clone()]);
        assert_eq!(g.observe_n(&n, 0, &shared, 1).unwrap(), g.observe_n(&n, 0, &indep, 1).unwrap());
        let s2 = g.observe_n(&n, 0, &shared, 2).unwrap();
        let i2 = g.observe_n(&n, 0, &indep, 2).unwrap();
        assert_eq!(s2, NgVal::class(1, NgVal::Tuple(vec![NgVal::name(0), NgVal::name(0)])));
        assert_eq!(i2, NgVal::class(2, NgVal::Tuple(vec![NgVal::name(0), NgVal::name(1)])));
        let (rep, pairs) = ng_observationality_experiment(&g, &n, 1).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
        assert!(pairs.iter().any(|p| p.n == Some(2)));
    }

    #[test]
    fn nominal_and_sober() {
        let g = NameGen::new(4);
        assert!(g.is_nominal(&Staged::Names).unwrap());
        assert!(g.is_nominal(&Staged::t(Staged::Names)).unwrap());
        assert!(g.sober_violation(&Staged::Names).unwrap().is_none());
        assert!(!g.is_nominal(&some_name()).unwrap());
        assert_eq!(g.sober_violation(&some_name()).unwrap(), Some(0));
        let rep = ng_nominal_report(&g, &Staged::Product(vec![Staged::Names, Staged::Names])).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
    }

    #[test]
    fn bound_is_enforced() {
        let g = NameGen::new(2);
        let n = Staged::Names;
        let fresh = NgVal::class(1, NgVal::name(0));
        let rho = NgVal::class(0, fresh);
        assert!(g.observe_n(&n, 0, &rho, 2).is_ok());
        assert!(matches!(g.observe_n(&n, 0, &rho, 3), Err(LabError::StageBound { bound: 2, needed: 3 })));
    }
}
