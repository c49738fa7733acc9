//! Monad, functor and monoidal laws, checked on the elements of a small space.

use rand_chacha::ChaCha8Rng;

use super::{Monad, MonadOps, Obj, TElem};
use crate::error::{LabError, Result};
use crate::report::{CheckRecord, Mode, Report};
use crate::sample::seeded;
use crate::space::{BaseMap, FinSpace, Point};

#[derive(Debug, Clone)]
pub struct LawConfig {
    /// Largest element set enumerated before falling back to sampling.
    pub enum_limit: usize,
    /// Random elements drawn per level when sampling.
    pub samples: usize,
    /// Cap on tuples (pairs, triples, map pairs) checked per law.
    pub max_cases: usize,
    pub seed: u64,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig { enum_limit: 4096, samples: 30, max_cases: 2000, seed: 0 }
    }
}

/// Runs a law over `cases`, stopping at the first counterexample. A law
/// returns `Ok(None)` when it holds, `Ok(Some(witness))` when it fails.
pub(crate) fn run_law<I, F>(name: &str, exhaustive: bool, cases: I, law: F) -> CheckRecord
where
    I: IntoIterator,
    F: Fn(I::Item) -> Result<Option<String>>,
{
    let mode = if exhaustive { Mode::Exhaustive } else { Mode::Sampled };
    let mut n = 0;
    for case in cases {
        n += 1;
        match law(case) {
            Ok(None) => {}
            Ok(Some(w)) => return CheckRecord::fail(name, mode, n, w),
            Err(e) => return CheckRecord::fail(name, mode, n, format!("error: {e}")),
        }
    }
    CheckRecord::pass(name, mode, n)
}

pub(crate) fn differ(ctx: String, lhs: &TElem, rhs: &TElem) -> Option<String> {
    (lhs != rhs).then(|| format!("{ctx}: {lhs} ≠ {rhs}"))
}

/// All structure-preserving maps `x → y`, or `None` when there are more than `cap`.
pub fn all_maps(x: &FinSpace, y: &FinSpace, cap: usize) -> Option<Vec<BaseMap>> {
    let (n, m) = (x.len(), y.len());
    let total = (m as u128).checked_pow(n as u32)?;
    if total > cap as u128 {
        return None;
    }
    let mut out = Vec::new();
    let mut table = vec![0usize; n];
    loop {
        if let Ok(f) = BaseMap::from_indices(x, y, table.clone()) {
            out.push(f);
        }
        let mut i = 0;
        loop {
            if i == n {
                return Some(out);
            }
            table[i] += 1;
            if table[i] < m {
                break;
            }
            table[i] = 0;
            i += 1;
        }
        if m == 0 {
            return Some(out);
        }
    }
}

fn map_fn(g: &BaseMap) -> impl Fn(&Point) -> Result<Point> + '_ {
    move |p| g.apply(p).cloned()
}

/// Takes at most `cap` items, spreading the picks evenly. The flag says
/// whether everything was kept.
pub(crate) fn capped<T: Clone>(items: Vec<T>, cap: usize) -> (Vec<T>, bool) {
    if items.len() <= cap {
        return (items, true);
    }
    let step = items.len() as f64 / cap as f64;
    ((0..cap).map(|i| items[(i as f64 * step) as usize].clone()).collect(), false)
}

fn pairs<A: Clone, B: Clone>(a: &[A], b: &[B]) -> Vec<(A, B)> {
    a.iter().flat_map(|x| b.iter().map(move |y| (x.clone(), y.clone()))).collect()
}

struct Levels {
    tx: Vec<TElem>,
    ttx: Vec<TElem>,
    tttx: Vec<TElem>,
    exhaustive: [bool; 3],
}

fn levels(m: Monad, x: &FinSpace, cfg: &LawConfig, rng: &mut ChaCha8Rng) -> Result<Levels> {
    let o = Obj::space(x);
    let (tx, e1) = m.elements(&o, cfg.enum_limit, cfg.samples, rng)?;
    let (ttx, e2) = m.elements(&Obj::t(o.clone()), cfg.enum_limit, cfg.samples, rng)?;
    let (tttx, e3) = m.elements(&Obj::t(Obj::t(o)), cfg.enum_limit, cfg.samples, rng)?;
    Ok(Levels { tx, ttx, tttx, exhaustive: [e1, e2, e3] })
}

/// Unit, associativity, naturality, functoriality, monoidality, symmetry
/// and commutativity of `ops` on the space `x`, plus an affineness record.
pub fn law_suite(ops: &dyn MonadOps, x: &FinSpace, cfg: &LawConfig) -> Result<Report> {
    let m = ops.monad();
    m.check_space(x)?;
    let mut rng = seeded(cfg.seed);
    let lv = levels(m, x, cfg, &mut rng)?;
    let o = Obj::space(x);
    let to = Obj::t(o.clone());
    let xx = Obj::Prod(vec![o.clone(), o.clone()]);
    let maps = all_maps(x, x, 256);
    let (maps, maps_all) = match maps {
        Some(ms) => (ms, true),
        None => (vec![BaseMap::identity(x)], false),
    };
    let mut rep = Report::new();
    let seed = Some(cfg.seed);

    rep.push(run_law("left-unit", lv.exhaustive[0], &lv.tx, |t| {
        let lhs = ops.mu(&o, &ops.eta_t(&o, t)?)?;
        Ok(differ(format!("t = {t}"), &lhs, t))
    }));
    rep.push(run_law("right-unit", lv.exhaustive[0], &lv.tx, |t| {
        let lhs = ops.mu(&o, &ops.t_eta(&o, t)?)?;
        Ok(differ(format!("t = {t}"), &lhs, t))
    }));
    rep.push(run_law("associativity", lv.exhaustive[2], &lv.tttx, |r| {
        let lhs = ops.mu(&o, &ops.mu(&to, r)?)?;
        let tmu = ops.fmap(&to, r, &|p| {
            let inner = p.as_elem().ok_or_else(|| LabError::Internal("expected element".into()))?;
            Ok(Point::elem(ops.mu(&o, inner)?))
        })?;
        let rhs = ops.mu(&o, &tmu)?;
        Ok(differ(format!("R = {r}"), &lhs, &rhs))
    }));
    rep.push(run_law("eta-naturality", maps_all, pairs(&maps, x.points()), |(g, p)| {
        let lhs = ops.fmap(&o, &ops.eta(&o, &p)?, &map_fn(&g))?;
        let rhs = ops.eta(&o, g.apply(&p)?)?;
        Ok(differ(format!("g = {g:?}, x = {p}"), &lhs, &rhs))
    }));
    let (mu_cases, mu_all) = capped(pairs(&maps, &lv.ttx), cfg.max_cases);
    rep.push(run_law("mu-naturality", maps_all && lv.exhaustive[1] && mu_all, mu_cases, |(g, r)| {
        let lhs = ops.fmap(&o, &ops.mu(&o, &r)?, &map_fn(&g))?;
        let ttg = ops.fmap(&to, &r, &|p| {
            let inner = p.as_elem().ok_or_else(|| LabError::Internal("expected element".into()))?;
            Ok(Point::elem(ops.fmap(&o, inner, &map_fn(&g))?))
        })?;
        let rhs = ops.mu(&o, &ttg)?;
        Ok(differ(format!("g = {g:?}, R = {r}"), &lhs, &rhs))
    }));
    rep.push(run_law("functor-identity", lv.exhaustive[0], &lv.tx, |t| {
        let lhs = ops.fmap(&o, t, &|p| Ok(p.clone()))?;
        Ok(differ(format!("t = {t}"), &lhs, t))
    }));
    let map_pairs = pairs(&maps, &maps);
    let (comp_cases, comp_all) = capped(
        map_pairs.iter().flat_map(|(g, h)| lv.tx.iter().map(move |t| (g.clone(), h.clone(), t.clone()))).collect(),
        cfg.max_cases,
    );
    rep.push(run_law("functor-composition", maps_all && lv.exhaustive[0] && comp_all, comp_cases, |(g, h, t)| {
        let gh = g.then(&h)?;
        let lhs = ops.fmap(&o, &t, &map_fn(&gh))?;
        let rhs = ops.fmap(&o, &ops.fmap(&o, &t, &map_fn(&g))?, &map_fn(&h))?;
        Ok(differ(format!("g = {g:?}, h = {h:?}, t = {t}"), &lhs, &rhs))
    }));
    rep.push(run_law("nabla-unit", true, pairs(x.points(), x.points()), |(a, b)| {
        let lhs = ops.nabla(&[o.clone(), o.clone()], &[ops.eta(&o, &a)?, ops.eta(&o, &b)?])?;
        let rhs = ops.eta(&xx, &Point::pair(a.clone(), b.clone()))?;
        Ok(differ(format!("x = {a}, y = {b}"), &lhs, &rhs))
    }));
    let (tx_pairs, pairs_all) = capped(pairs(&lv.tx, &lv.tx), cfg.max_cases);
    rep.push(run_law("nabla-symmetry", lv.exhaustive[0] && pairs_all, tx_pairs.clone(), |(p, q)| {
        let pq = ops.nabla(&[o.clone(), o.clone()], &[p.clone(), q.clone()])?;
        let lhs = ops.fmap(&xx, &pq, &|t| swap(t))?;
        let rhs = ops.nabla(&[o.clone(), o.clone()], &[q.clone(), p.clone()])?;
        Ok(differ(format!("p = {p}, q = {q}"), &lhs, &rhs))
    }));
    let triples: Vec<(TElem, TElem, TElem)> = tx_pairs
        .iter()
        .flat_map(|(p, q)| lv.tx.iter().map(move |r| (p.clone(), q.clone(), r.clone())))
        .collect();
    let (triples, triples_all) = capped(triples, cfg.max_cases);
    rep.push(run_law(
        "nabla-associativity",
        lv.exhaustive[0] && pairs_all && triples_all,
        triples,
        |(p, q, r)| {
            let left = ops.nabla(
                &[xx.clone(), o.clone()],
                &[ops.nabla(&[o.clone(), o.clone()], &[p.clone(), q.clone()])?, r.clone()],
            )?;
            let right = ops.nabla(
                &[o.clone(), xx.clone()],
                &[p.clone(), ops.nabla(&[o.clone(), o.clone()], &[q.clone(), r.clone()])?],
            )?;
            let xyz = Obj::Prod(vec![o.clone(), xx.clone()]);
            let lhs = ops.fmap(&xyz, &left, &|t| reassociate(t))?;
            Ok(differ(format!("p = {p}, q = {q}, r = {r}"), &lhs, &right))
        },
    ));
    let (nat_cases, nat_all) = capped(
        map_pairs
            .iter()
            .flat_map(|(f, g)| tx_pairs.iter().map(move |(p, q)| (f.clone(), g.clone(), p.clone(), q.clone())))
            .collect(),
        cfg.max_cases,
    );
    rep.push(run_law(
        "nabla-naturality",
        maps_all && lv.exhaustive[0] && pairs_all && nat_all,
        nat_cases,
        |(f, g, p, q)| {
            let lhs = ops.nabla(
                &[o.clone(), o.clone()],
                &[ops.fmap(&o, &p, &map_fn(&f))?, ops.fmap(&o, &q, &map_fn(&g))?],
            )?;
            let pq = ops.nabla(&[o.clone(), o.clone()], &[p.clone(), q.clone()])?;
            let rhs = ops.fmap(&xx, &pq, &|t| {
                let c = t.as_tuple().ok_or_else(|| LabError::Internal("expected pair".into()))?;
                Ok(Point::pair(f.apply(&c[0])?.clone(), g.apply(&c[1])?.clone()))
            })?;
            Ok(differ(format!("f = {f:?}, g = {g:?}, p = {p}, q = {q}"), &lhs, &rhs))
        },
    ));
    let (tt_pairs, tt_all) = capped(pairs(&lv.ttx, &lv.ttx), cfg.max_cases.min(4000));
    rep.push(run_law("nabla-mu", lv.exhaustive[1] && tt_all, tt_pairs, |(a, b)| {
        let nested = ops.nabla(&[to.clone(), to.clone()], &[a.clone(), b.clone()])?;
        let lifted = ops.fmap(&Obj::t(xx.clone()), &nested, &|t| {
            let c = t.as_tuple().ok_or_else(|| LabError::Internal("expected pair".into()))?;
            let (p, q) = (elem(&c[0])?, elem(&c[1])?);
            Ok(Point::elem(ops.nabla(&[o.clone(), o.clone()], &[p.clone(), q.clone()])?))
        })?;
        let lhs = ops.mu(&xx, &lifted)?;
        let rhs = ops.nabla(&[o.clone(), o.clone()], &[ops.mu(&o, &a)?, ops.mu(&o, &b)?])?;
        Ok(differ(format!("P = {a}, Q = {b}"), &lhs, &rhs))
    }));
    rep.push(run_law("commutativity", lv.exhaustive[0] && pairs_all, tx_pairs, |(p, q)| {
        let lhs = ops.bind(&xx, &p, &|a| ops.bind(&xx, &q, &|b| ops.eta(&xx, &Point::pair(a.clone(), b.clone()))))?;
        let rhs = ops.bind(&xx, &q, &|b| ops.bind(&xx, &p, &|a| ops.eta(&xx, &Point::pair(a.clone(), b.clone()))))?;
        let nab = ops.nabla(&[o.clone(), o.clone()], &[p.clone(), q.clone()])?;
        Ok(differ(format!("p = {p}, q = {q}"), &lhs, &rhs)
            .or_else(|| differ(format!("∇ vs sequencing, p = {p}, q = {q}"), &nab, &lhs)))
    }));
    rep.push(affine_record(ops, cfg)?);
    for r in &mut rep.records {
        if r.mode == Mode::Sampled {
            r.seed = seed;
        }
    }
    Ok(rep)
}

fn elem(p: &Point) -> Result<&TElem> {
    p.as_elem().ok_or_else(|| LabError::Internal(format!("`{p}` is not an element")))
}

fn swap(t: &Point) -> Result<Point> {
    match t.as_tuple() {
        Some([a, b]) => Ok(Point::pair(b.clone(), a.clone())),
        _ => Err(LabError::Internal(format!("`{t}` is not a pair"))),
    }
}

/// ((a, b), c) ↦ (a, (b, c)).
fn reassociate(t: &Point) -> Result<Point> {
    if let Some([ab, c]) = t.as_tuple() {
        if let Some([a, b]) = ab.as_tuple() {
            return Ok(Point::pair(a.clone(), Point::pair(b.clone(), c.clone())));
        }
    }
    Err(LabError::Internal(format!("`{t}` is not of the form ((a, b), c)")))
}

/// Whether `T1` has exactly one element; a witness otherwise.
pub fn affine_witness(ops: &dyn MonadOps, cfg: &LawConfig) -> Result<Option<TElem>> {
    let m = ops.monad();
    let one = Obj::unit();
    let unit = ops.eta(&one, &Point::unit())?;
    let mut rng = seeded(cfg.seed);
    let candidates = match m.enumerate_t(&one, cfg.enum_limit) {
        Ok(all) => all,
        Err(_) => {
            let mut c = Vec::new();
            for _ in 0..cfg.samples.max(20) {
                c.push(m.sample_t(&one, &mut rng, 1)?);
            }
            c
        }
    };
    Ok(candidates.into_iter().find(|t| *t != unit && m.validate(&one, t).is_ok()))
}

fn affine_record(ops: &dyn MonadOps, cfg: &LawConfig) -> Result<CheckRecord> {
    Ok(match affine_witness(ops, cfg)? {
        None => CheckRecord::info("affine", "T1 ≅ 1"),
        Some(w) => CheckRecord::info("affine", "T1 has more than one element").with_witness(w.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monads::Measure;
    use crate::rational::Rational;
    use crate::space::Kind;

    /// μ with a weight typo: the first inner weight is doubled.
    struct TypoMu;

    impl MonadOps for TypoMu {
        fn monad(&self) -> Monad {
            Monad::Giry
        }
        fn eta(&self, x: &Obj, p: &Point) -> Result<TElem> {
            Monad::Giry.eta(x, p)
        }
        fn mu(&self, x: &Obj, rho: &TElem) -> Result<TElem> {
            let good = Monad::Giry.mu(x, rho)?;
            let m = good.as_measure().unwrap().clone();
            let mut it = m.iter();
            Ok(match it.next() {
                Some((p, w)) if m.len() > 1 => {
                    let mut out = Measure::from_weights(it.map(|(q, v)| (q.clone(), v.clone())));
                    out.add(p.clone(), w * &Rational::from_integer(2));
                    out.into()
                }
                _ => good.clone(),
            })
        }
        fn fmap(&self, y: &Obj, t: &TElem, g: &dyn Fn(&Point) -> Result<Point>) -> Result<TElem> {
            Monad::Giry.fmap(y, t, g)
        }
        fn nabla(&self, f: &[Obj], ts: &[TElem]) -> Result<TElem> {
            Monad::Giry.nabla(f, ts)
        }
    }

    fn small_cfg() -> LawConfig {
        LawConfig { samples: 25, max_cases: 2000, ..LawConfig::default() }
    }

    #[test]
    fn all_instances_pass_on_bool() {
        for m in Monad::ALL {
            let kind = match m {
                Monad::Giry | Monad::SubGiry => Kind::Meas,
                Monad::Lower => Kind::Top,
                _ => Kind::Set,
            };
            let x = FinSpace::labels("bool", kind, &["tt", "ff"]).unwrap();
            let rep = law_suite(&m, &x, &small_cfg()).unwrap();
            assert!(rep.passed(), "{m}: {}", rep.to_text());
        }
    }

    #[test]
    fn corrupted_mu_is_caught() {
        let x = FinSpace::labels("bool", Kind::Meas, &["tt", "ff"]).unwrap();
        let rep = law_suite(&TypoMu, &x, &small_cfg()).unwrap();
        let f = rep.first_failure().expect("typo must be caught");
        assert!(f.witness.is_some());
    }

    #[test]
    fn affineness() {
        let cfg = small_cfg();
        assert!(affine_witness(&Monad::Giry, &cfg).unwrap().is_none());
        assert!(affine_witness(&Monad::Distribution, &cfg).unwrap().is_none());
        assert!(affine_witness(&Monad::Reader, &cfg).unwrap().is_none());
        assert!(affine_witness(&Monad::SubGiry, &cfg).unwrap().is_some());
        assert!(affine_witness(&Monad::Maybe, &cfg).unwrap().is_some());
        assert!(affine_witness(&Monad::Lower, &cfg).unwrap().is_some());
    }
}
