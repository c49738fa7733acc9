//! A first-order call-by-value language with thunks, interpreted in any of
//! the monads.
//!
//! ```text
//! t ::= x | () | (t, t) | fst t | snd t | let x = t in t | return t
//!     | thunk { t } | force t | sample { lit: q, ... } | flip q | fail
//!     | ask | or(t, ..., t) | fresh | lit
//! ```
//!
//! Each primitive is only available under its monad. The testing context
//! `C_n[M] = let c = M in (force c, …, force c)` runs a thunk `n` times; its
//! value must agree with `observe_n` of the outer element `⟦M⟧`.

mod denote;
pub mod lexer;
pub mod syntax;
mod typeck;

pub use denote::{Denotation, Outcome};
pub use syntax::{parse, parse_open, Parsed, Term, TermKind, Warning};
pub use typeck::{typecheck, Core, Effect, Spaces, Type, Typed, BOOL};

use crate::error::{LabError, Result};
use crate::namegen::NameGen;
use crate::observe;
use crate::report::{CheckRecord, Mode, Report};
use crate::space::{FinSpace, Kind};

/// Typechecks and interprets a closed term.
pub fn compile(t: &Term, effect: Effect, spaces: &Spaces) -> Result<Denotation> {
    compile_open(t, &[], effect, spaces)
}

pub fn compile_open(t: &Term, ctx: &[(String, Type)], effect: Effect, spaces: &Spaces) -> Result<Denotation> {
    let body = typecheck(t, ctx, effect, spaces)?;
    Ok(Denotation::new(effect, ctx.to_vec(), body, spaces.clone()))
}

/// Parses, typechecks and interprets closed source text.
pub fn compile_str(src: &str, effect: Effect, spaces: &Spaces) -> Result<Denotation> {
    compile(&parse(src)?.term, effect, spaces)
}

/// `C_n[M]`.
pub fn context_term(m: &Term, n: usize) -> Term {
    let forces = (0..n).map(|_| Term::force(Term::var("c"))).collect();
    Term::let_in("c", m.clone(), Term::tuple(forces))
}

fn require_thunk(d: &Denotation) -> Result<()> {
    match d.ty() {
        Type::Thunk(_) => Ok(()),
        t => Err(LabError::Type(format!("testing contexts need a thunked type, found {t}"))),
    }
}

/// Runs `C_n[M]` through the interpreter.
pub fn run_context_n(m: &Term, n: usize, effect: Effect, spaces: &Spaces) -> Result<Outcome> {
    require_thunk(&compile(m, effect, spaces)?)?;
    compile(&context_term(m, n), effect, spaces)?.run()
}

/// `observe_n` applied to the outer element `⟦M⟧`.
pub fn observe_program(d: &Denotation, n: usize) -> Result<Outcome> {
    require_thunk(d)?;
    let Type::Thunk(inner) = d.ty() else { unreachable!() };
    match (d.effect(), d.run()?) {
        (Effect::Monad(m), Outcome::T(rho)) => observe::observe_n(m, &d.obj(inner)?, &rho, n).map(Outcome::T),
        (Effect::NameGen(bound), Outcome::Ng(rho)) => {
            NameGen::new(bound).observe_n(&d.staged(inner)?, 0, &rho, n).map(Outcome::Ng)
        }
        _ => Err(LabError::Internal("outcome does not match effect".into())),
    }
}

/// The least `n ≤ n_max` at which `C_n[M] ≠ C_n[M']`, with both values.
pub fn distinguish_programs(
    m: &Term,
    m2: &Term,
    n_max: usize,
    effect: Effect,
    spaces: &Spaces,
) -> Result<Option<(usize, Outcome, Outcome)>> {
    for n in 0..=n_max {
        let (a, b) = (run_context_n(m, n, effect, spaces)?, run_context_n(m2, n, effect, spaces)?);
        if a != b {
            return Ok(Some((n, a, b)));
        }
    }
    Ok(None)
}

/// Spaces with just `bool = {tt, ff}`.
pub fn bool_spaces() -> Spaces {
    let b = FinSpace::labels(BOOL, Kind::Set, &["tt", "ff"]).expect("two labels");
    Spaces::from([(BOOL.to_string(), b)])
}

/// The two programs that both return true or false: `M1` re-runs the
/// choice on every force, `M2` makes it once.
pub fn intro_pair(effect: Effect) -> Result<(Term, Term)> {
    let (m1, m2) = match effect {
        Effect::Monad(crate::Monad::Lower) => ("thunk { or(tt, ff) }", "or(thunk { tt }, thunk { ff })"),
        Effect::Monad(m) if m.is_measure() => ("thunk { flip 1/2 }", "let b = flip 1/2 in thunk { return b }"),
        Effect::NameGen(_) => ("thunk { fresh }", "let a = fresh in thunk { return a }"),
        _ => {
            return Err(LabError::Unsupported {
                monad: effect.name().into(),
                what: "a two-valued choice".into(),
            })
        }
    };
    Ok((parse(m1)?.term, parse(m2)?.term))
}

/// Compares `C_1` and `C_2` of the intro pair and checks that the testing
/// contexts agree with `observe_n` for `n ≤ n_max`.
pub fn m1m2_report(effect: Effect, n_max: usize) -> Result<Report> {
    let spaces = bool_spaces();
    let (m1, m2) = intro_pair(effect)?;
    let c = |t: &Term, n| run_context_n(t, n, effect, &spaces);
    let (a1, b1, a2, b2) = (c(&m1, 1)?, c(&m2, 1)?, c(&m1, 2)?, c(&m2, 2)?);
    let mut rep = Report::new();
    rep.push(
        CheckRecord::verdict("C1-equal", a1 == b1, Mode::Example, 1, None)
            .with_detail(format!("C_1[M1] = {a1}\nC_1[M2] = {b1}")),
    );
    rep.push(
        CheckRecord::verdict("C2-differ", a2 != b2, Mode::Example, 1, None)
            .with_witness(format!("C_2[M1] = {a2}\nC_2[M2] = {b2}"))
            .with_detail(format!("M1 = {m1}\nM2 = {m2}")),
    );
    let mut cases = 0;
    let mut bad = None;
    for m in [&m1, &m2] {
        let d = compile(m, effect, &spaces)?;
        for n in 0..=n_max {
            cases += 1;
            let (ctx, obs) = (c(m, n)?, observe_program(&d, n)?);
            if ctx != obs && bad.is_none() {
                bad = Some(format!("{m} at n = {n}: context {ctx}, observe {obs}"));
            }
        }
    }
    rep.push(CheckRecord::verdict("context-agrees-observe", bad.is_none(), Mode::Exhaustive, cases, bad));
    rep.push(CheckRecord::info(
        "C2-outcome-counts",
        format!("C_2[M1] lists {} outcomes, C_2[M2] lists {}", a2.size(), b2.size()),
    ));
    Ok(rep.scoped(&format!("m1m2/{effect}")))
}
