//! Corpus-level operations behind each command-line verb. Each returns a
//! [`Report`]; the front end only parses flags and prints.

use crate::corpus::Corpus;
use crate::dsl::{distinguish_programs, m1m2_report, Effect};
use crate::error::{LabError, Result};
use crate::kleisli::laws::{cd_suite, inclusion_chain_suite, thunk_force_suite};
use crate::kleisli::{classify, pure_witnesses, KleisliMorphism};
use crate::monads::laws::{law_suite, LawConfig};
use crate::monads::{Monad, Obj, TElem};
use crate::namegen::{ng_law_suite, ng_nominal_report, ng_observationality_experiment, NameGen, Staged};
use crate::observe::{definetti_check, distinguish, observe_n, sampled_observationality, Distinction};
use crate::report::{CheckRecord, Mode, Report};
use crate::sobrify::{idempotence_check, sobrify};
use crate::space::{BaseMap, FinSpace, Kind};

/// Largest space the `laws` suites run on.
pub const LAW_SPACE_LIMIT: usize = 4;

/// Random kernels per monad in the inclusion-chain suite.
pub const CHAIN_SAMPLES: usize = 1000;

fn classification_record(name: &str, k: &KleisliMorphism) -> Result<CheckRecord> {
    let c = classify(k)?;
    let mut detail = format!("{k}\n{c}");
    for g in &c.pure {
        detail.push_str(&format!("\npure witness: {g:?}"));
    }
    if c.pure_count > c.pure.len() as u128 {
        detail.push_str(&format!("\n({} more witnesses)", c.pure_count - c.pure.len() as u128));
    }
    Ok(CheckRecord::info(format!("classify/{name}"), detail))
}

/// Classifier verdicts for the named corpus kernels, or all of them.
pub fn classify_report(corpus: &Corpus, names: &[String]) -> Result<Report> {
    let mut rep = Report::new();
    if names.is_empty() {
        for (name, k) in &corpus.kernels {
            rep.push(classification_record(name, k)?);
        }
    } else {
        for name in names {
            rep.push(classification_record(name, corpus.kernel(name)?)?);
        }
    }
    Ok(rep)
}

/// The kernel of a corpus program, classified.
pub fn classify_prog_report(corpus: &Corpus, name: &str) -> Result<Report> {
    let p = corpus.program(name)?;
    let k = p.denotation.kernel()?;
    let mut rep = Report::new();
    rep.push(classification_record(name, &k)?);
    Ok(rep)
}

/// `DX`, `θ` and `e` for `m` on `x`, optionally followed by the
/// idempotence check with `pairs` sampled pairs for the measure monads.
pub fn sobrify_report(m: Monad, x: &FinSpace, idempotence: bool, pairs: usize, seed: u64) -> Result<Report> {
    let s = sobrify(m, x)?;
    let mut rep = Report::new();
    rep.push(CheckRecord::info(
        format!("sobrify/{m}/{}", x.name()),
        format!("{s}sober: {}", s.is_sober()).trim_end().to_string(),
    ));
    if idempotence {
        rep.extend(idempotence_check(m, x, pairs, seed)?.scoped(&format!("idempotence/{m}/{}", x.name())));
    }
    Ok(rep)
}

fn outer_pair<'a>(corpus: &'a Corpus, a: &str, b: &str) -> Result<(&'a crate::corpus::OuterDef, &'a crate::corpus::OuterDef)> {
    let (oa, ob) = (corpus.outer(a)?, corpus.outer(b)?);
    if oa.monad != ob.monad || oa.space != ob.space {
        return Err(LabError::Precondition(format!(
            "`{a}` is over `{}` under {}, `{b}` over `{}` under {}",
            oa.space.name(),
            oa.monad,
            ob.space.name(),
            ob.monad
        )));
    }
    Ok((oa, ob))
}

/// Compares two outer elements by `observe_n` for `n ≤ n_max`. Distinct
/// elements that no `n` separates fail the check.
pub fn equiv_report(corpus: &Corpus, a: &str, b: &str, n_max: usize) -> Result<Report> {
    let (oa, ob) = outer_pair(corpus, a, b)?;
    let (m, o) = (oa.monad, Obj::space(&oa.space));
    let check = format!("equiv/{a}/{b}");
    let mut rep = Report::new();
    if oa.elem == ob.elem {
        rep.push(CheckRecord::pass(check, Mode::Example, 1).with_detail("identical elements"));
        return Ok(rep);
    }
    rep.push(match distinguish(m, &o, &oa.elem, &ob.elem, n_max)? {
        Distinction::Distinguished { n, left, right } => CheckRecord::pass(check, Mode::Exhaustive, n + 1)
            .with_detail(format!("distinguished at n = {n}"))
            .with_witness(format!("observe_{n}({a}) = {left}\nobserve_{n}({b}) = {right}")),
        Distinction::EqualUpTo(n) => CheckRecord::fail(
            check,
            Mode::Exhaustive,
            n + 1,
            format!("observe_{n}({a}) = observe_{n}({b}) = {}", observe_n(m, &o, &oa.elem, n)?),
        )
        .with_detail(format!("distinct elements agree for every n ≤ {n}")),
    });
    Ok(rep)
}

/// Seeded random pairs of outers over the corpus spaces with at most
/// `LAW_SPACE_LIMIT` points, each required to be separated.
pub fn equiv_sampled_report(corpus: &Corpus, m: Monad, pairs: usize, seed: u64) -> Result<Report> {
    let spaces: Vec<FinSpace> = corpus.small_spaces(m, LAW_SPACE_LIMIT).into_iter().filter(|s| !s.is_empty()).collect();
    let mut rep = Report::new();
    rep.push(sampled_observationality(m, &spaces, pairs, seed)?);
    Ok(rep.scoped(&format!("equiv/{m}")))
}

/// Compares two corpus programs of thunk type by their testing contexts.
pub fn equiv_prog_report(corpus: &Corpus, p: &str, q: &str, n_max: usize) -> Result<Report> {
    let (dp, dq) = (corpus.program(p)?, corpus.program(q)?);
    let effect = dp.denotation.effect();
    if effect != dq.denotation.effect() {
        return Err(LabError::Precondition(format!("`{p}` runs under {effect}, `{q}` under {}", dq.denotation.effect())));
    }
    let check = format!("equiv-prog/{p}/{q}");
    let mut rep = Report::new();
    rep.push(match distinguish_programs(&dp.term, &dq.term, n_max, effect, &corpus.spaces)? {
        Some((n, a, b)) => CheckRecord::info(check, format!("distinguished at n = {n}"))
            .with_witness(format!("C_{n}[{p}] = {a}\nC_{n}[{q}] = {b}")),
        None => CheckRecord::info(check, format!("C_n agree for every n ≤ {n_max}")),
    });
    Ok(rep)
}

/// Monad, copy-discard and thunk-force laws on every corpus space with at
/// most `LAW_SPACE_LIMIT` points, then the inclusion chain per monad.
pub fn laws_report(corpus: &Corpus, monads: &[Monad], cfg: &LawConfig) -> Result<Report> {
    let mut rep = Report::new();
    for &m in monads {
        let spaces = corpus.small_spaces(m, LAW_SPACE_LIMIT);
        for x in &spaces {
            let scope = format!("{m}/{}", x.name());
            rep.extend(law_suite(&m, x, cfg)?.scoped(&scope));
            rep.extend(cd_suite(m, x)?.scoped(&scope));
            rep.extend(thunk_force_suite(m, x, cfg)?.scoped(&scope));
        }
        rep.extend(inclusion_chain_suite(m, &spaces, CHAIN_SAMPLES, cfg)?.scoped(m.name()));
    }
    Ok(rep)
}

/// The introductory pair under lower and under Giry.
pub fn demo_m1m2(n_max: usize) -> Result<Report> {
    let mut rep = m1m2_report(Effect::Monad(Monad::Lower), n_max)?;
    rep.extend(m1m2_report(Effect::Monad(Monad::Giry), n_max)?);
    Ok(rep)
}

/// Giry on the codiscrete two-point space: `DX` has one point, and the
/// Dirac kernel `1 ⇝ X` is pure with exactly two witnesses.
pub fn demo_codiscrete(corpus: &Corpus) -> Result<Report> {
    let x = corpus.space("codiscrete2")?;
    let mut rep = sobrify_report(Monad::Giry, x, false, 0, 0)?;
    let s = sobrify(Monad::Giry, x)?;
    rep.push(CheckRecord::verdict(
        "codiscrete/one-point-DX",
        s.dx().len() == 1,
        Mode::Example,
        1,
        (s.dx().len() != 1).then(|| format!("DX has {} points", s.dx().len())),
    ));
    let one = FinSpace::unit(Kind::Meas);
    let p = x.point(0).clone();
    let f = KleisliMorphism::pure(Monad::Giry, &BaseMap::new(&one, x, |_| p.clone())?)?;
    let c = classify(&f)?;
    let w = pure_witnesses(&f, 8)?;
    let ok = c.thunkable && c.is_pure() && !c.uniquely_pure() && w.count == 2;
    rep.push(
        CheckRecord::verdict("codiscrete/two-pure-witnesses", ok, Mode::Example, 1, None)
            .with_detail(format!("{f}\n{c}"))
            .with_witness(w.maps.iter().map(|g| format!("{g:?}")).collect::<Vec<_>>().join("\n")),
    );
    Ok(rep)
}

/// Exchangeability, marginals and separation of the corpus outers, per
/// monad and base space. Marginals are only required of outers whose inner
/// measures are normalized.
pub fn demo_definetti(corpus: &Corpus, n_max: usize) -> Result<Report> {
    let mut rep = Report::new();
    for m in Monad::ALL {
        let mut by_space: Vec<(FinSpace, Vec<TElem>)> = Vec::new();
        for o in corpus.outers_for(m) {
            match by_space.iter_mut().find(|(x, _)| *x == o.space) {
                Some((_, v)) => v.push(o.elem.clone()),
                None => by_space.push((o.space.clone(), vec![o.elem.clone()])),
            }
        }
        for (x, elems) in by_space {
            let mut sub = definetti_check(m, &x, &elems, n_max)?;
            if m == Monad::SubGiry {
                for r in &mut sub.records {
                    if r.check == "marginal-consistent" {
                        *r = CheckRecord::info(
                            r.check.clone(),
                            "not required: total mass of a subprobability outer changes with n",
                        );
                    }
                }
            }
            rep.extend(sub.scoped(&format!("definetti/{m}/{}", x.name())));
        }
    }
    Ok(rep)
}

/// Laws, nominality and the observationality experiment for each staged
/// object of the corpus, truncated at `stage_bound`.
pub fn namegen_report(corpus: &Corpus, stage_bound: usize, objects: &[String]) -> Result<Report> {
    let ng = NameGen::new(stage_bound);
    let mut chosen: Vec<(String, Staged)> = Vec::new();
    if objects.is_empty() {
        chosen.extend(corpus.staged.iter().map(|(k, v)| (k.clone(), v.clone())));
    } else {
        for name in objects {
            chosen.push((name.clone(), corpus.staged_object(name)?.clone()));
        }
    }
    let mut rep = Report::new();
    for (name, x) in &chosen {
        let scope = format!("namegen/{name}");
        rep.extend(ng_law_suite(&ng, x)?.scoped(&scope));
        rep.extend(ng_nominal_report(&ng, x)?.scoped(&scope));
        if matches!(x, Staged::Names | Staged::Consts(_)) {
            rep.extend(ng_observationality_experiment(&ng, x, 2)?.0.scoped(&scope));
        }
    }
    Ok(rep)
}

/// The name-generation demo: laws on `N`, `1` and a two-constant object,
/// and the observationality experiment on `N`.
pub fn demo_namegen(stage_bound: usize) -> Result<Report> {
    let ng = NameGen::new(stage_bound);
    let mut rep = Report::new();
    for (name, x) in [("N", Staged::Names), ("1", Staged::unit())] {
        rep.extend(ng_law_suite(&ng, &x)?.scoped(&format!("namegen/{name}")));
    }
    let (exp, pairs) = ng_observationality_experiment(&ng, &Staged::Names, 2)?;
    rep.extend(exp.scoped("namegen/N"));
    for p in pairs.iter().take(6) {
        rep.push(CheckRecord::info(
            "namegen/N/pair",
            format!(
                "stage {}: {} vs {} separated at n = {}",
                p.stage,
                p.left,
                p.right,
                p.n.map_or("-".into(), |n| n.to_string())
            ),
        ));
    }
    Ok(rep)
}
