//! Copy-discard laws, thunk-force axioms, Kleisli category laws, the
//! inclusion chain and the discardable-composite property, as report-producing suites.

use rand::Rng;

use super::classify::classify_capped;
use super::thunk::{force, lift, thunk, Arrow};
use super::{all_kernels, copy, del, is_copyable, is_discardable, kleisli_compose, random_kernel, KleisliMorphism};
use crate::error::{LabError, Result};
use crate::monads::laws::{all_maps, capped, differ, run_law, LawConfig};
use crate::monads::{Monad, MonadOps, Obj};
use crate::report::{CheckRecord, Mode, Report};
use crate::sample::seeded;
use crate::space::{self, BaseMap, FinSpace, Point};

/// All kernels `x ⇝ y` when there are at most `cap`, else `samples` random ones.
pub fn test_kernels<R: Rng>(
    m: Monad,
    x: &FinSpace,
    y: &FinSpace,
    cap: usize,
    samples: usize,
    rng: &mut R,
) -> Result<(Vec<KleisliMorphism>, bool)> {
    if y.is_empty() {
        // only the empty kernel, and only out of the empty space
        let ks = if x.is_empty() { vec![KleisliMorphism::from_table(m, x, y, Vec::new())?] } else { Vec::new() };
        return Ok((ks, true));
    }
    if m.has_finite_t() {
        if let Some(all) = all_kernels(m, x, y, cap)? {
            return Ok((all, true));
        }
    }
    let ks = (0..samples).map(|_| random_kernel(m, x, y, rng, 3)).collect::<Result<Vec<_>>>()?;
    Ok((ks, false))
}

fn same_table(name: &str, lhs: &KleisliMorphism, rhs: &KleisliMorphism) -> CheckRecord {
    let n = lhs.domain().len();
    for i in 0..n {
        if lhs.at(i) != rhs.at(i) {
            return CheckRecord::fail(
                name,
                Mode::Exhaustive,
                i + 1,
                format!("at {}: {} ≠ {}", lhs.domain().point(i), lhs.at(i), rhs.at(i)),
            );
        }
    }
    CheckRecord::pass(name, Mode::Exhaustive, n)
}

/// Counit, coassociativity and cocommutativity of `(copy, del)` on `x`.
pub fn cd_suite(m: Monad, x: &FinSpace) -> Result<Report> {
    let mut rep = Report::new();
    let cp = copy(m, x)?;
    let id = KleisliMorphism::identity(m, x)?;
    let dl = del(m, x)?;
    let one = FinSpace::unit(x.kind());
    let (one_x, _, _) = space::product(&one, x)?;
    let (x_one, _, _) = space::product(x, &one)?;
    let left = kleisli_compose(&dl.tensor(&id)?, &cp)?;
    let lunit = KleisliMorphism::pure(m, &BaseMap::new(x, &one_x, |p| Point::pair(Point::unit(), p.clone()))?)?;
    rep.push(same_table("counit-left", &left, &lunit));
    let right = kleisli_compose(&id.tensor(&dl)?, &cp)?;
    let runit = KleisliMorphism::pure(m, &BaseMap::new(x, &x_one, |p| Point::pair(p.clone(), Point::unit()))?)?;
    rep.push(same_table("counit-right", &right, &runit));
    let lhs = kleisli_compose(&cp.tensor(&id)?, &cp)?;
    let rhs = kleisli_compose(&id.tensor(&cp)?, &cp)?;
    let assoc = BaseMap::new(lhs.codomain(), rhs.codomain(), |t| {
        let [ab, c] = t.as_tuple().unwrap() else { unreachable!() };
        let [a, b] = ab.as_tuple().unwrap() else { unreachable!() };
        Point::pair(a.clone(), Point::pair(b.clone(), c.clone()))
    })?;
    let lhs = kleisli_compose(&KleisliMorphism::pure(m, &assoc)?, &lhs)?;
    rep.push(same_table("coassociativity", &lhs, &rhs));
    let swap = BaseMap::new(cp.codomain(), cp.codomain(), |t| {
        let [a, b] = t.as_tuple().unwrap() else { unreachable!() };
        Point::pair(b.clone(), a.clone())
    })?;
    let swapped = kleisli_compose(&KleisliMorphism::pure(m, &swap)?, &cp)?;
    rep.push(same_table("cocommutativity", &swapped, &cp));
    Ok(rep)
}

/// The five thunk-force axioms, checked pointwise on elements, plus the
/// literal `force ∘ thunk = 1` and `L(force) ∘ thunk_L = 1` when `TX` is finite.
pub fn thunk_force_suite(m: Monad, x: &FinSpace, cfg: &LawConfig) -> Result<Report> {
    let mut rng = seeded(cfg.seed);
    let a = Obj::space(x);
    let ta = Obj::t(a.clone());
    let (ks, ks_all) = test_kernels(m, x, x, 64, 12, &mut rng)?;
    let (elems, el_all) = m.elements(&a, cfg.enum_limit, cfg.samples, &mut rng)?;
    let tpoints: Vec<Point> = elems.into_iter().map(Point::elem).collect();
    let exhaustive = ks_all && el_all;
    let mut rep = Report::new();

    let cases: Vec<(usize, Point)> =
        (0..ks.len()).flat_map(|i| tpoints.iter().map(move |t| (i, t.clone()))).collect();
    let (cases, all) = capped(cases, cfg.max_cases);
    rep.push(run_law("force-natural", exhaustive && all, cases.clone(), |(i, t)| {
        let f = Arrow::from_kernel(&ks[i]);
        let lhs = lift(&f).then(&force(m, &a))?.apply(&t)?;
        let rhs = force(m, &a).then(&f)?.apply(&t)?;
        Ok(differ(format!("f = {}, t = {t}", ks[i]), &lhs, &rhs))
    }));
    rep.push(run_law("thunk-L-natural", exhaustive && all, cases, |(i, t)| {
        let f = Arrow::from_kernel(&ks[i]);
        let lhs = lift(&f).then(&thunk(m, &ta))?.apply(&t)?;
        let rhs = thunk(m, &ta).then(&lift(&lift(&f)))?.apply(&t)?;
        Ok(differ(format!("f = {}, t = {t}", ks[i]), &lhs, &rhs))
    }));
    rep.push(run_law("thunk-thunk", true, x.points(), |p| {
        let lhs = thunk(m, &a).then(&lift(&thunk(m, &a)))?.apply(p)?;
        let rhs = thunk(m, &a).then(&thunk(m, &ta))?.apply(p)?;
        Ok(differ(format!("a = {p}"), &lhs, &rhs))
    }));
    rep.push(run_law("force-thunk", true, x.points(), |p| {
        let lhs = thunk(m, &a).then(&force(m, &a))?.apply(p)?;
        Ok(differ(format!("a = {p}"), &lhs, &m.eta(&a, p)?))
    }));
    rep.push(run_law("L-force-thunk-L", el_all, &tpoints, |t| {
        let lhs = thunk(m, &ta).then(&lift(&force(m, &a)))?.apply(t)?;
        Ok(differ(format!("t = {t}"), &lhs, &m.eta(&ta, t)?))
    }));

    if m.has_finite_t() {
        rep.extend(representable_thunk_force(m, x)?);
    }
    for r in &mut rep.records {
        if r.mode == Mode::Sampled {
            r.seed = Some(cfg.seed);
        }
    }
    Ok(rep)
}

/// `thunk_X : X ⇝ TX` as a literal morphism into the finite space `TX`.
pub fn thunk_morphism(m: Monad, x: &FinSpace, tx: &FinSpace) -> Result<KleisliMorphism> {
    let a = Obj::space(x);
    let otx = Obj::space(tx);
    KleisliMorphism::new(m, x, tx, |p| m.eta(&otx, &Point::elem(m.eta(&a, p)?)))
}

/// `force_X : TX ⇝ X` as a literal morphism out of the finite space `TX`.
pub fn force_morphism(m: Monad, x: &FinSpace, tx: &FinSpace) -> Result<KleisliMorphism> {
    KleisliMorphism::new(m, tx, x, |p| {
        p.as_elem().cloned().ok_or_else(|| LabError::IllFormed(format!("`{p}` is not an element")))
    })
}

/// `Lf : TA ⇝ TB` between the finite spaces `TA` and `TB`.
pub fn lift_morphism(f: &KleisliMorphism, ta: &FinSpace, tb: &FinSpace) -> Result<KleisliMorphism> {
    let m = f.monad();
    let b = Obj::space(f.codomain());
    let otb = Obj::space(tb);
    KleisliMorphism::new(m, ta, tb, |p| {
        let t = p.as_elem().ok_or_else(|| LabError::IllFormed(format!("`{p}` is not an element")))?;
        let ext = m.bind(&b, t, &|y| Ok(f.eval(y)?.clone()))?;
        m.eta(&otb, &Point::elem(ext))
    })
}

fn representable_thunk_force(m: Monad, x: &FinSpace) -> Result<Report> {
    let mut rep = Report::new();
    let tx = m.t_space(x)?;
    let th = thunk_morphism(m, x, &tx)?;
    let fo = force_morphism(m, x, &tx)?;
    rep.push(same_table("literal-force-thunk", &kleisli_compose(&fo, &th)?, &KleisliMorphism::identity(m, x)?));
    if tx.len() <= 64 {
        let ttx = m.t_space(&tx)?;
        let th_l = thunk_morphism(m, &tx, &ttx)?;
        let lforce = lift_morphism(&fo, &ttx, &tx)?;
        rep.push(same_table(
            "literal-L-force-thunk-L",
            &kleisli_compose(&lforce, &th_l)?,
            &KleisliMorphism::identity(m, &tx)?,
        ));
    }
    Ok(rep)
}

/// Associativity and unit laws of Kleisli composition on `x`.
pub fn category_suite(m: Monad, x: &FinSpace, cfg: &LawConfig) -> Result<Report> {
    let mut rng = seeded(cfg.seed);
    let (ks, all) = test_kernels(m, x, x, 32, 10, &mut rng)?;
    let id = KleisliMorphism::identity(m, x)?;
    let mut rep = Report::new();
    rep.push(run_law("kleisli-unit", all, &ks, |k| {
        for (side, c) in [("left", kleisli_compose(&id, k)?), ("right", kleisli_compose(k, &id)?)] {
            if c != *k {
                return Ok(Some(format!("{side} unit fails for {k}")));
            }
        }
        Ok(None)
    }));
    let n = ks.len();
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |l| (i, j, l))))
        .collect();
    let (triples, tri_all) = capped(triples, cfg.max_cases);
    rep.push(run_law("kleisli-associativity", all && tri_all, triples, |(i, j, l)| {
        let (f, g, h) = (&ks[i], &ks[j], &ks[l]);
        let lhs = kleisli_compose(h, &kleisli_compose(g, f)?)?;
        let rhs = kleisli_compose(&kleisli_compose(h, g)?, f)?;
        Ok((lhs != rhs).then(|| format!("f = {f}, g = {g}, h = {h}")))
    }));
    if !all {
        for r in &mut rep.records {
            r.seed = Some(cfg.seed);
        }
    }
    Ok(rep)
}

/// Tallies of the classifier over a family of kernels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChainTally {
    pub total: usize,
    pub pure: usize,
    pub non_unique_pure: usize,
    pub thunkable: usize,
    pub deterministic: usize,
    /// Deterministic but not thunkable.
    pub det_not_thunkable: usize,
}

impl ChainTally {
    pub fn summary(&self) -> String {
        format!(
            "{} kernels: {} pure ({} not uniquely), {} thunkable, {} deterministic, {} deterministic-not-thunkable",
            self.total, self.pure, self.non_unique_pure, self.thunkable, self.deterministic, self.det_not_thunkable
        )
    }
}

/// Classifies every kernel, checking the chain; returns the tally and the
/// first deterministic-not-thunkable kernel, if any.
pub fn classify_all(ks: &[KleisliMorphism]) -> Result<(ChainTally, Option<KleisliMorphism>)> {
    let mut t = ChainTally::default();
    let mut witness = None;
    for k in ks {
        let c = classify_capped(k, 2)?;
        t.total += 1;
        t.pure += c.is_pure() as usize;
        t.non_unique_pure += (c.pure_count > 1) as usize;
        t.thunkable += c.thunkable as usize;
        t.deterministic += c.deterministic as usize;
        if c.deterministic && !c.thunkable {
            t.det_not_thunkable += 1;
            witness.get_or_insert_with(|| k.clone());
        }
    }
    Ok((t, witness))
}

/// `pure ⊆ thunkable ⊆ deterministic` on `random` kernels between the given
/// spaces, plus every kernel between spaces of size ≤ 3 when `T` is finite.
pub fn inclusion_chain_suite(m: Monad, spaces: &[FinSpace], random: usize, cfg: &LawConfig) -> Result<Report> {
    let mut rng = seeded(cfg.seed);
    let usable: Vec<&FinSpace> = spaces.iter().filter(|s| m.accepts(s.kind()) && !s.is_empty()).collect();
    let mut rep = Report::new();
    if usable.is_empty() {
        return Ok(rep);
    }
    let mut ks = Vec::with_capacity(random);
    for _ in 0..random {
        let x = usable[rng.random_range(0..usable.len())];
        let y = usable[rng.random_range(0..usable.len())];
        ks.push(random_kernel(m, x, y, &mut rng, 3)?);
    }
    rep.push(chain_record("inclusion-chain-random", Mode::Sampled, &ks).with_seed(Some(cfg.seed)));
    if m.has_finite_t() {
        let small: Vec<&FinSpace> = usable.iter().copied().filter(|s| s.len() <= 3).collect();
        let mut all = Vec::new();
        let mut complete = true;
        for x in &small {
            for y in &small {
                match all_kernels(m, x, y, 20_000)? {
                    Some(v) => all.extend(v),
                    None => complete = false,
                }
            }
        }
        let mode = if complete { Mode::Exhaustive } else { Mode::Sampled };
        rep.push(chain_record("inclusion-chain-exhaustive", mode, &all));
    }
    Ok(rep)
}

fn chain_record(name: &str, mode: Mode, ks: &[KleisliMorphism]) -> CheckRecord {
    match classify_all(ks) {
        Ok((t, _)) => CheckRecord::pass(name, mode, t.total).with_detail(t.summary()),
        Err(e) => CheckRecord::fail(name, mode, ks.len(), e.to_string()),
    }
}

/// A retraction `r` with `r ∘ g = 1`, searched among all kernels when `T`
/// is finite and small enough, otherwise among pure maps only.
pub fn find_retraction(g: &KleisliMorphism, cap: usize) -> Result<Option<KleisliMorphism>> {
    let m = g.monad();
    let (b, c) = (g.domain(), g.codomain());
    if b.len() > 4 || c.len() > 4 {
        return Ok(None);
    }
    let id = KleisliMorphism::identity(m, b)?;
    let candidates: Vec<KleisliMorphism> = match m.has_finite_t().then(|| all_kernels(m, c, b, cap)).transpose()? {
        Some(Some(all)) => all,
        _ => all_maps(c, b, cap)
            .unwrap_or_default()
            .iter()
            .map(|r| KleisliMorphism::pure(m, r))
            .collect::<Result<_>>()?,
    };
    for r in candidates {
        if kleisli_compose(&r, g)? == id {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// Discardable composites: with `gf` and `g` discardable, `f` is
/// discardable; with `gf` and `g` copyable and `g` split monic, `f` is
/// copyable. Checked on random composable pairs; reports how many pairs
/// met each hypothesis.
pub fn gfg_suite(m: Monad, spaces: &[FinSpace], pairs: usize, cfg: &LawConfig) -> Result<Report> {
    let mut rng = seeded(cfg.seed);
    let usable: Vec<&FinSpace> =
        spaces.iter().filter(|s| m.accepts(s.kind()) && !s.is_empty() && s.len() <= 4).collect();
    let mut rep = Report::new();
    if usable.is_empty() {
        return Ok(rep);
    }
    let (mut hyp1, mut hyp2) = (0, 0);
    for _ in 0..pairs {
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| usable[rng.random_range(0..usable.len())];
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let f = random_kernel(m, a, b, &mut rng, 2)?;
        let g = if rng.random_bool(0.5) {
            // Bias towards split monics: pure maps from a random base map.
            let maps = all_maps(b, c, 256).unwrap_or_default();
            if maps.is_empty() {
                random_kernel(m, b, c, &mut rng, 2)?
            } else {
                KleisliMorphism::pure(m, &maps[rng.random_range(0..maps.len())])?
            }
        } else {
            random_kernel(m, b, c, &mut rng, 2)?
        };
        let gf = kleisli_compose(&g, &f)?;
        if is_discardable(&gf)? && is_discardable(&g)? {
            hyp1 += 1;
            if !is_discardable(&f)? {
                rep.push(CheckRecord::fail("gfg-discardable", Mode::Sampled, hyp1, format!("f = {f}, g = {g}")));
                return Ok(rep);
            }
        }
        if is_copyable(&gf)? && is_copyable(&g)? && find_retraction(&g, 4096)?.is_some() {
            hyp2 += 1;
            if !is_copyable(&f)? {
                rep.push(CheckRecord::fail("gfg-copyable", Mode::Sampled, hyp2, format!("f = {f}, g = {g}")));
                return Ok(rep);
            }
        }
    }
    rep.push(CheckRecord::pass("gfg-discardable", Mode::Sampled, hyp1).with_seed(Some(cfg.seed)));
    rep.push(CheckRecord::pass("gfg-copyable", Mode::Sampled, hyp2).with_seed(Some(cfg.seed)));
    Ok(rep)
}

/// Thunkable morphisms compose, and `thunk` and every `Lf` are thunkable.
pub fn thunkable_closure_suite(m: Monad, x: &FinSpace, cfg: &LawConfig) -> Result<Report> {
    let mut rng = seeded(cfg.seed);
    let (ks, all) = test_kernels(m, x, x, 64, 40, &mut rng)?;
    let thunkables: Vec<&KleisliMorphism> =
        ks.iter().filter(|k| super::is_thunkable(k).unwrap_or(false)).collect();
    let mut rep = Report::new();
    let pairs: Vec<(usize, usize)> =
        (0..thunkables.len()).flat_map(|i| (0..thunkables.len()).map(move |j| (i, j))).collect();
    let (pairs, p_all) = capped(pairs, cfg.max_cases);
    rep.push(run_law("thunkable-composition", all && p_all, pairs, |(i, j)| {
        let c = kleisli_compose(thunkables[j], thunkables[i])?;
        Ok((!super::is_thunkable(&c)?).then(|| format!("{} then {}", thunkables[i], thunkables[j])))
    }));
    let a = Obj::space(x);
    rep.push(run_law("thunk-is-thunkable", true, [()], |_| {
        Ok(thunk(m, &a).thunkable_on(x.points())?.map(|p| format!("at {p}")))
    }));
    let (elems, el_all) = m.elements(&a, cfg.enum_limit, cfg.samples, &mut rng)?;
    let tpoints: Vec<Point> = elems.into_iter().map(Point::elem).collect();
    rep.push(run_law("lift-is-thunkable", all && el_all, &ks, |k| {
        let f = Arrow::from_kernel(k);
        Ok(lift(&f).thunkable_on(&tpoints)?.map(|p| format!("L({k}) at {p}")))
    }));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Kind;

    fn cfg() -> LawConfig {
        LawConfig { samples: 20, max_cases: 3000, ..LawConfig::default() }
    }

    fn space_for(m: Monad) -> FinSpace {
        let kind = match m {
            Monad::Giry | Monad::SubGiry => Kind::Meas,
            Monad::Lower => Kind::Top,
            _ => Kind::Set,
        };
        FinSpace::labels("bool", kind, &["tt", "ff"]).unwrap()
    }

    #[test]
    fn cd_and_thunk_force_hold_everywhere() {
        for m in Monad::ALL {
            let x = space_for(m);
            let rep = cd_suite(m, &x).unwrap();
            assert!(rep.passed(), "{m}: {}", rep.to_text());
            let rep = thunk_force_suite(m, &x, &cfg()).unwrap();
            assert!(rep.passed(), "{m}: {}", rep.to_text());
            let rep = category_suite(m, &x, &cfg()).unwrap();
            assert!(rep.passed(), "{m}: {}", rep.to_text());
            let rep = thunkable_closure_suite(m, &x, &cfg()).unwrap();
            assert!(rep.passed(), "{m}: {}", rep.to_text());
        }
    }

    #[test]
    fn chain_and_gfg() {
        for m in Monad::ALL {
            let x = space_for(m);
            let one = FinSpace::unit(x.kind());
            let spaces = [x, one];
            let rep = inclusion_chain_suite(m, &spaces, 50, &cfg()).unwrap();
            assert!(rep.passed(), "{m}: {}", rep.to_text());
            let rep = gfg_suite(m, &spaces, 30, &cfg()).unwrap();
            assert!(rep.passed(), "{m}: {}", rep.to_text());
        }
    }

    #[test]
    fn retraction_of_a_section() {
        let x = FinSpace::labels("X", Kind::Set, &["a", "b"]).unwrap();
        let id = KleisliMorphism::identity(Monad::Maybe, &x).unwrap();
        assert!(find_retraction(&id, 100).unwrap().is_some());
        let collapse = KleisliMorphism::pure(
            Monad::Maybe,
            &BaseMap::new(&x, &x, |_| Point::label("a")).unwrap(),
        )
        .unwrap();
        assert!(find_retraction(&collapse, 100).unwrap().is_none());
    }
}
