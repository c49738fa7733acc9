//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines come out in
//! order; the process exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use effects_lab::corpus::Corpus;
use effects_lab::dsl::{m1m2_report, Effect};
use effects_lab::kleisli::{classify, pure_witnesses};
use effects_lab::kleisli::laws::{
    cd_suite, classify_all, inclusion_chain_suite, test_kernels, thunk_force_suite, ChainTally,
};
use effects_lab::kleisli::{all_kernels, KleisliMorphism};
use effects_lab::monads::laws::{all_maps, law_suite, LawConfig};
use effects_lab::namegen::{ng_law_suite, ng_observationality_experiment, NameGen, Staged};
use effects_lab::observe::{
    brute_observationality, det_implies_thunkable_suite, distinguish, observe_n, sampled_observationality,
    definetti_check, Distinction,
};
use effects_lab::sample::seeded;
use effects_lab::sobrify::{idempotence_check, sobrify};
use effects_lab::space::enumerate::{measurable_spaces, set_space, topologies};
use effects_lab::space::{kolmogorov_quotient, Subset};
use effects_lab::{BaseMap, FinSpace, Kind, Monad, Obj, Point, Report, TElem};

type Outcome = Result<String, String>;

fn report_ok(rep: &Report) -> Result<(), String> {
    match rep.first_failure() {
        None => Ok(()),
        Some(r) => Err(format!("{}: {}", r.check, r.witness.clone().unwrap_or_default())),
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    let el = t.elapsed();
    if el <= limit {
        Ok(())
    } else {
        Err(format!("took {el:?}, limit {limit:?}"))
    }
}

fn criterion_1(c: &Corpus) -> Outcome {
    let t = Instant::now();
    let cfg = LawConfig::default();
    let mut runs = 0;
    for m in Monad::ALL {
        for x in c.small_spaces(m, 4) {
            let mut rep = law_suite(&m, &x, &cfg).map_err(|e| e.to_string())?;
            rep.extend(cd_suite(m, &x).map_err(|e| e.to_string())?);
            rep.extend(thunk_force_suite(m, &x, &cfg).map_err(|e| e.to_string())?);
            report_ok(&rep).map_err(|e| format!("{m} on {}: {e}", x.name()))?;
            runs += 1;
        }
    }
    within(t, Duration::from_secs(30))?;
    Ok(format!("{runs} monad/space pairs in {:.1?}", t.elapsed()))
}

fn criterion_2(c: &Corpus) -> Outcome {
    let cfg = LawConfig::default();
    let mut notes = Vec::new();
    for m in Monad::ALL {
        let spaces = c.small_spaces(m, 4);
        let rep = inclusion_chain_suite(m, &spaces, 1000, &cfg).map_err(|e| e.to_string())?;
        report_ok(&rep).map_err(|e| format!("{m}: {e}"))?;
        let random = rep.get("inclusion-chain-random").ok_or("missing random record")?;
        if random.cases != 1000 {
            return Err(format!("{m}: {} random kernels", random.cases));
        }
        if m.has_finite_t() {
            let ex = rep.get("inclusion-chain-exhaustive").ok_or("missing exhaustive record")?;
            if ex.mode != effects_lab::Mode::Exhaustive {
                return Err(format!("{m}: exhaustive enumeration was capped"));
            }
            notes.push(format!("{m} {} exhaustive", ex.cases));
        }
    }
    Ok(notes.join(", "))
}

fn all_between(m: Monad, spaces: &[FinSpace]) -> Result<Vec<KleisliMorphism>, String> {
    let mut ks = Vec::new();
    for x in spaces {
        for y in spaces {
            let v = all_kernels(m, x, y, 100_000).map_err(|e| e.to_string())?.ok_or("too many kernels")?;
            ks.extend(v);
        }
    }
    Ok(ks)
}

fn criterion_3(c: &Corpus) -> Outcome {
    // maybe: a kernel is deterministic iff total, and total kernels are the
    // |Y|^|X| functions.
    let sets = vec![set_space(1), set_space(2), set_space(3)];
    let (t, _) = classify_all(&all_between(Monad::Maybe, &sets)?).map_err(|e| e.to_string())?;
    let total: usize = sets.iter().flat_map(|x| sets.iter().map(move |y| y.len().pow(x.len() as u32))).sum();
    let want = ChainTally { pure: total, thunkable: total, deterministic: total, ..t.clone() };
    if t != want || t.non_unique_pure != 0 {
        return Err(format!("maybe: {}", t.summary()));
    }

    let env = c.kernel("env").map_err(|e| e.to_string())?;
    let ce = classify(env).map_err(|e| e.to_string())?;
    if !(ce.deterministic && !ce.thunkable) {
        return Err(format!("reader `env`: {ce}"));
    }
    let (rt, w) = classify_all(&all_between(Monad::Reader, &[set_space(2)])?).map_err(|e| e.to_string())?;
    if w.is_none() {
        return Err(format!("reader: {}", rt.summary()));
    }

    let cd = c.space("codiscrete2").map_err(|e| e.to_string())?;
    let one = FinSpace::unit(Kind::Meas);
    let g = BaseMap::new(&one, cd, |_| Point::label("x")).map_err(|e| e.to_string())?;
    let f = KleisliMorphism::pure(Monad::Giry, &g).map_err(|e| e.to_string())?;
    let cf = classify(&f).map_err(|e| e.to_string())?;
    let w = pure_witnesses(&f, 8).map_err(|e| e.to_string())?;
    if !(cf.thunkable && cf.is_pure() && !cf.uniquely_pure() && w.count == 2) {
        return Err(format!("giry on codiscrete2: {cf}, {} witnesses", w.count));
    }
    Ok(format!(
        "maybe {total} pure = thunkable = deterministic; reader {} det-not-thunkable; codiscrete δ_x has 2 witnesses",
        rt.det_not_thunkable
    ))
}

fn irreducible_closed(x: &FinSpace) -> Result<BTreeSet<Subset>, String> {
    let closed = x.closed_sets(1 << 16).map_err(|e| e.to_string())?;
    Ok(closed
        .iter()
        .filter(|c| {
            !c.is_empty()
                && !closed.iter().any(|a| {
                    a != *c && a.is_subset(c) && closed.iter().any(|b| b != *c && b.is_subset(c) && a.union(b).eq(c.iter()))
                })
        })
        .cloned()
        .collect())
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let mut tops = 0;
    for n in 0..=4 {
        for x in topologies(n).map_err(|e| e.to_string())? {
            let s = sobrify(Monad::Lower, &x).map_err(|e| e.to_string())?;
            let mut got = BTreeSet::new();
            for th in s.thetas() {
                let gens: Subset = th.as_closed().ok_or("not a closed set")?.generators().clone();
                got.insert(x.closure(&gens).map_err(|e| e.to_string())?);
            }
            if got != irreducible_closed(&x)? {
                return Err(format!("{}: DX is not the irreducible closed sets", x.name()));
            }
            let (q, _) = kolmogorov_quotient(&x).map_err(|e| e.to_string())?;
            let o = Obj::space(&x);
            let iso = BaseMap::new(&q, s.dx(), |p| Point::elem(Monad::Lower.closure_elem(&o, [p]).unwrap()))
                .map_err(|e| e.to_string())?;
            if !iso.is_isomorphism() {
                return Err(format!("{}: DX is not homeomorphic to the Kolmogorov quotient", x.name()));
            }
            report_ok(&idempotence_check(Monad::Lower, &x, 0, 0).map_err(|e| e.to_string())?)
                .map_err(|e| format!("{}: {e}", x.name()))?;
            tops += 1;
        }
    }
    let mut meas = 0;
    for n in 0..=4 {
        for x in measurable_spaces(n).map_err(|e| e.to_string())? {
            let s = sobrify(Monad::Giry, &x).map_err(|e| e.to_string())?;
            let ok = s.dx().len() == x.atom_count()
                && (0..x.len()).all(|i| {
                    (0..x.len()).all(|j| (s.e().image_index(i) == s.e().image_index(j)) == (x.atom_index(i) == x.atom_index(j)))
                });
            if !ok {
                return Err(format!("{}: DX is not the atoms", x.name()));
            }
            report_ok(&idempotence_check(Monad::Giry, &x, 50, 0).map_err(|e| e.to_string())?)
                .map_err(|e| format!("{}: {e}", x.name()))?;
            meas += 1;
        }
    }
    within(t, Duration::from_secs(120))?;
    Ok(format!("{tops} topologies, {meas} measurable spaces in {:.1?}", t.elapsed()))
}

fn criterion_5() -> Outcome {
    let mut worst = 0;
    for n in 0..=3 {
        for x in topologies(n).map_err(|e| e.to_string())? {
            let r = brute_observationality(Monad::Lower, &x, 3, 1 << 16).map_err(|e| e.to_string())?;
            match r.minimal_n {
                Some(k) => worst = worst.max(k),
                None => return Err(format!("lower on {}: collision {:?}", x.name(), r.collision)),
            }
        }
    }
    for n in 0..=4 {
        let x = set_space(n);
        let r = brute_observationality(Monad::Maybe, &x, 1, 1 << 16).map_err(|e| e.to_string())?;
        if r.minimal_n.is_none_or(|k| k > 1) {
            return Err(format!("maybe on {}: {:?}", x.name(), r.collision));
        }
    }
    Ok(format!("lower injective by n = {worst}; maybe by n = 1"))
}

fn criterion_6() -> Outcome {
    let spaces: Vec<FinSpace> = (1..=4).map(set_space).collect();
    let rec = sampled_observationality(Monad::Distribution, &spaces, 10_000, 0).map_err(|e| e.to_string())?;
    if rec.is_failure() {
        return Err(rec.witness.unwrap_or_default());
    }
    Ok(rec.detail.unwrap_or_default())
}

fn criterion_7(c: &Corpus) -> Outcome {
    let cfg = LawConfig::default();
    let mut notes = Vec::new();
    for m in [Monad::Giry, Monad::Distribution, Monad::Maybe, Monad::Lower, Monad::Reader] {
        let spaces = c.small_spaces(m, 3);
        let mut rng = seeded(cfg.seed);
        let mut ks: Vec<KleisliMorphism> = c.kernels.values().filter(|k| k.monad() == m).cloned().collect();
        for x in &spaces {
            for y in &spaces {
                ks.extend(test_kernels(m, x, y, 20_000, 40, &mut rng).map_err(|e| e.to_string())?.0);
                // pure maps and their Kleisli composites with the sampled kernels
                for g in all_maps(x, y, 64).unwrap_or_default() {
                    ks.push(KleisliMorphism::pure(m, &g).map_err(|e| e.to_string())?);
                }
            }
        }
        let rep = det_implies_thunkable_suite(m, &ks).map_err(|e| e.to_string())?;
        report_ok(&rep).map_err(|e| format!("{m}: {e}"))?;
        notes.push(format!("{m} {}", ks.len()));
    }
    Ok(format!("kernels checked: {}", notes.join(", ")))
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    for m in [Monad::Lower, Monad::Giry] {
        let rep = m1m2_report(Effect::Monad(m), 4).map_err(|e| e.to_string())?;
        report_ok(&rep).map_err(|e| format!("{m}: {e}"))?;
        let witness = rep
            .records
            .iter()
            .find(|r| r.check.ends_with("C2-differ"))
            .and_then(|r| r.witness.clone())
            .ok_or("no C_2 witness")?;
        notes.push(format!("{m}: {}", witness.replace('\n', "; ")));
    }
    Ok(notes.join(" | "))
}

fn criterion_9(c: &Corpus) -> Outcome {
    let mut notes = Vec::new();
    for m in Monad::ALL {
        let outers: Vec<_> = c.outers_for(m).collect();
        if outers.is_empty() {
            continue;
        }
        let x = outers[0].space.clone();
        let elems: Vec<TElem> = outers.iter().filter(|o| o.space == x).map(|o| o.elem.clone()).collect();
        let rep = definetti_check(m, &x, &elems, 4).map_err(|e| e.to_string())?;
        for r in &rep.records {
            // total mass of a sub-probability outer is not preserved by marginals
            let skip = r.check == "marginal-consistent" && m == Monad::SubGiry;
            if r.is_failure() && !skip {
                return Err(format!("{m}: {}: {}", r.check, r.witness.clone().unwrap_or_default()));
            }
        }
        notes.push(format!("{m} {}", elems.len()));
    }
    // pairs of distinct bool outers that agree on observe_1
    let mut seps = Vec::new();
    for m in Monad::ALL {
        let outers: Vec<_> = c.outers_for(m).collect();
        for (i, a) in outers.iter().enumerate() {
            for b in &outers[i + 1..] {
                if a.space != b.space || a.elem == b.elem {
                    continue;
                }
                let o = Obj::space(&a.space);
                let same1 = observe_n(m, &o, &a.elem, 1).map_err(|e| e.to_string())?
                    == observe_n(m, &o, &b.elem, 1).map_err(|e| e.to_string())?;
                if !same1 {
                    continue;
                }
                match distinguish(m, &o, &a.elem, &b.elem, 3).map_err(|e| e.to_string())? {
                    Distinction::Distinguished { n, .. } if n == 2 || n == 3 => {
                        seps.push(format!("{}/{} n={n}", a.name, b.name))
                    }
                    d => return Err(format!("{} vs {}: {d:?}", a.name, b.name)),
                }
            }
        }
    }
    if seps.is_empty() {
        return Err("no outer pair agrees on observe_1".into());
    }
    Ok(format!("outers per monad: {}; separated: {}", notes.join(", "), seps.join(", ")))
}

fn criterion_10(c: &Corpus) -> Outcome {
    let t = Instant::now();
    let ng = NameGen::new(5);
    for (name, x) in &c.staged {
        report_ok(&ng_law_suite(&ng, x).map_err(|e| e.to_string())?).map_err(|e| format!("{name}: {e}"))?;
    }
    report_ok(&ng_law_suite(&ng, &Staged::unit()).map_err(|e| e.to_string())?)?;
    let mut pairs = 0;
    let mut worst = 0;
    for x in [Staged::Names, Staged::unit(), Staged::consts(&["red", "green"])] {
        let (rep, ps) = ng_observationality_experiment(&ng, &x, 5).map_err(|e| e.to_string())?;
        report_ok(&rep).map_err(|e| format!("{x}: {e}"))?;
        for p in &ps {
            match p.n {
                Some(n) if n <= p.limit => worst = worst.max(n),
                _ => return Err(format!("{} vs {}: {:?} > {}", p.left, p.right, p.n, p.limit)),
            }
        }
        pairs += ps.len();
    }
    within(t, Duration::from_secs(120))?;
    Ok(format!("{pairs} pairs distinguished, largest n = {worst}, in {:.1?}", t.elapsed()))
}

fn main() {
    let corpus = Corpus::shipped();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("laws", Box::new(|| criterion_1(&corpus))),
        ("inclusion chain", Box::new(|| criterion_2(&corpus))),
        ("separating examples", Box::new(|| criterion_3(&corpus))),
        ("sobrification", Box::new(criterion_4)),
        ("lower and maybe observationality", Box::new(criterion_5)),
        ("distribution observationality", Box::new(criterion_6)),
        ("deterministic implies thunkable", Box::new(|| criterion_7(&corpus))),
        ("M1/M2 contexts", Box::new(criterion_8)),
        ("de Finetti", Box::new(|| criterion_9(&corpus))),
        ("name generation", Box::new(|| criterion_10(&corpus))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = run();
        eprintln!("[criterion {} took {:.1?}]", i + 1, t.elapsed());
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
