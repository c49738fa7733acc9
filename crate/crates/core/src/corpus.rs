//! The corpus file format: named spaces, kernels, outer elements, programs
//! and staged objects, one block each.
//!
//! ```text
//! space bool { kind = set; points = [tt, ff]; }
//! space c2 { kind = meas; points = [x, y]; generators = []; }
//! kernel k : bool -> bool @ giry { tt -> { tt: 1/2, ff: 1/2 }; ff -> { ff: 1 }; }
//! outer r : bool @ giry { { { tt: 1 }: 1/2, { ff: 1 }: 1/2 } }
//! program m @ lower { thunk { or(tt, ff) } }
//! staged nn = N * N;
//! staged u { stage 1 = [u]; }
//! include "more.lab"
//! ```
//!
//! Elements are written per monad: measures as `{ p: q, … }`, maybe as a
//! point or `Nothing`, reader as a pair `(p, q)`, lower Vietoris as a set of
//! generators `{ p, … }`. Omitting `generators` gives the discrete
//! structure; `generators = []` gives the codiscrete one.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::dsl::lexer::{syntax_error, Cursor, Pos, Tok};
use crate::dsl::syntax::Parser;
use crate::dsl::{self, Denotation, Effect, Spaces, Term, Warning};
use crate::error::{LabError, Result};
use crate::kleisli::KleisliMorphism;
use crate::monads::{Measure, Monad, Obj, TElem};
use crate::namegen::{NgVal, Staged};
use crate::space::{FinSpace, Kind, Point};

#[derive(Debug, Clone)]
pub struct OuterDef {
    pub name: String,
    pub monad: Monad,
    pub space: FinSpace,
    /// An element of `TTX`.
    pub elem: TElem,
}

#[derive(Debug, Clone)]
pub struct ProgramDef {
    pub name: String,
    pub term: Term,
    pub denotation: Denotation,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub spaces: Spaces,
    pub kernels: BTreeMap<String, KleisliMorphism>,
    pub outers: BTreeMap<String, OuterDef>,
    pub programs: BTreeMap<String, ProgramDef>,
    pub staged: BTreeMap<String, Staged>,
}

const SHIPPED: &str = include_str!("../corpus/shipped.lab");

impl Corpus {
    /// The corpus bundled with the library.
    pub fn shipped() -> Corpus {
        Corpus::parse_str(SHIPPED).expect("shipped corpus parses")
    }

    /// Parses source text; `include` paths are relative to the working
    /// directory.
    pub fn parse_str(src: &str) -> Result<Corpus> {
        let mut loader = Loader { corpus: Corpus::default(), stack: Vec::new() };
        loader.source(src, Path::new("."))?;
        Ok(loader.corpus)
    }

    pub fn load(path: &Path) -> Result<Corpus> {
        let mut loader = Loader { corpus: Corpus::default(), stack: Vec::new() };
        loader.file(path)?;
        Ok(loader.corpus)
    }

    pub fn space(&self, name: &str) -> Result<&FinSpace> {
        lookup(&self.spaces, "space", name)
    }

    pub fn kernel(&self, name: &str) -> Result<&KleisliMorphism> {
        lookup(&self.kernels, "kernel", name)
    }

    pub fn outer(&self, name: &str) -> Result<&OuterDef> {
        lookup(&self.outers, "outer", name)
    }

    pub fn program(&self, name: &str) -> Result<&ProgramDef> {
        lookup(&self.programs, "program", name)
    }

    pub fn staged_object(&self, name: &str) -> Result<&Staged> {
        lookup(&self.staged, "staged object", name)
    }

    /// Spaces with at most `n` points that `m` acts on, sorted by name.
    pub fn small_spaces(&self, m: Monad, n: usize) -> Vec<FinSpace> {
        self.spaces.values().filter(|s| s.len() <= n && m.accepts(s.kind())).cloned().collect()
    }

    /// Outer elements for monad `m`.
    pub fn outers_for(&self, m: Monad) -> impl Iterator<Item = &OuterDef> {
        self.outers.values().filter(move |o| o.monad == m)
    }
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, what: &str, name: &str) -> Result<&'a T> {
    map.get(name).ok_or_else(|| {
        let known: Vec<&str> = map.keys().map(String::as_str).collect();
        LabError::Precondition(format!("unknown {what} `{name}` (known: {})", known.join(", ")))
    })
}

struct Loader {
    corpus: Corpus,
    stack: Vec<PathBuf>,
}

/// Attaches a position to errors that do not carry one.
fn at<T>(pos: Pos, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        e @ LabError::Syntax { .. } => e,
        e => syntax_error(pos, e.to_string()),
    })
}

fn insert<T>(map: &mut BTreeMap<String, T>, what: &str, name: String, pos: Pos, v: T) -> Result<()> {
    if map.contains_key(&name) {
        return Err(syntax_error(pos, format!("duplicate {what} `{name}`")));
    }
    map.insert(name, v);
    Ok(())
}

impl Loader {
    fn file(&mut self, path: &Path) -> Result<()> {
        let canon = path.canonicalize().map_err(|e| LabError::Precondition(format!("{}: {e}", path.display())))?;
        if self.stack.contains(&canon) {
            return Err(LabError::Precondition(format!("include cycle through {}", path.display())));
        }
        let src = std::fs::read_to_string(&canon)
            .map_err(|e| LabError::Precondition(format!("{}: {e}", path.display())))?;
        self.stack.push(canon.clone());
        let dir = canon.parent().map(Path::to_path_buf).unwrap_or_default();
        let r = self.source(&src, &dir).map_err(|e| match e {
            LabError::Syntax { line, col, msg } if self.stack.len() > 1 => {
                LabError::Syntax { line, col, msg: format!("in {}: {msg}", path.display()) }
            }
            e => e,
        });
        self.stack.pop();
        r
    }

    fn source(&mut self, src: &str, dir: &Path) -> Result<()> {
        let mut cur = Cursor::new(src)?;
        while !cur.at_eof() {
            let pos = cur.pos();
            let kw = cur.ident()?;
            match kw.as_str() {
                "space" => self.space(&mut cur)?,
                "kernel" => self.kernel(&mut cur)?,
                "outer" => self.outer(&mut cur)?,
                "program" => self.program(&mut cur)?,
                "staged" => self.staged(&mut cur)?,
                "include" => {
                    let Tok::Str(p) = cur.next().tok else {
                        return Err(syntax_error(pos, "`include` expects a quoted path"));
                    };
                    cur.eat_sym(";");
                    self.file(&dir.join(p))?;
                }
                other => return Err(syntax_error(pos, format!("unknown block `{other}`"))),
            }
        }
        Ok(())
    }

    fn space_ref(&self, cur: &mut Cursor) -> Result<FinSpace> {
        let pos = cur.pos();
        let name = cur.ident()?;
        at(pos, self.corpus.space(&name).cloned())
    }

    fn monad(&self, cur: &mut Cursor) -> Result<Monad> {
        let pos = cur.pos();
        let name = cur.ident()?;
        Monad::parse(&name).ok_or_else(|| syntax_error(pos, format!("unknown monad `{name}`")))
    }

    fn space(&mut self, cur: &mut Cursor) -> Result<()> {
        let pos = cur.pos();
        let name = cur.ident()?;
        cur.expect_sym("{")?;
        let (mut kind, mut points, mut gens, mut atoms) = (Kind::Set, None, None, None);
        while !cur.eat_sym("}") {
            let kpos = cur.pos();
            let key = cur.ident()?;
            cur.expect_sym("=")?;
            match key.as_str() {
                "kind" => {
                    let k = cur.ident()?;
                    kind = Kind::parse(&k).ok_or_else(|| syntax_error(kpos, format!("unknown kind `{k}`")))?;
                }
                "points" => points = Some(label_list(cur)?),
                "generators" => gens = Some(nested_list(cur)?),
                "atoms" => atoms = Some(nested_list(cur)?),
                _ => return Err(syntax_error(kpos, format!("unknown space field `{key}`"))),
            }
            cur.expect_sym(";")?;
        }
        let points = points.ok_or_else(|| syntax_error(pos, format!("space `{name}` has no points")))?;
        let space = at(
            pos,
            match (gens, atoms) {
                (Some(_), Some(_)) => Err(LabError::InvalidStructure("give generators or atoms, not both".into())),
                (Some(g), None) => FinSpace::from_generators(&name, kind, points, &g),
                (None, Some(a)) if kind == Kind::Meas => FinSpace::from_atoms(&name, points, &a),
                (None, Some(_)) => Err(LabError::KindMismatch("atoms need kind = meas".into())),
                (None, None) => FinSpace::discrete(&name, kind, points),
            },
        )?;
        insert(&mut self.corpus.spaces, "space", name, pos, space)
    }

    fn kernel(&mut self, cur: &mut Cursor) -> Result<()> {
        let pos = cur.pos();
        let name = cur.ident()?;
        cur.expect_sym(":")?;
        let a = self.space_ref(cur)?;
        cur.expect_sym("->")?;
        let b = self.space_ref(cur)?;
        cur.expect_sym("@")?;
        let m = self.monad(cur)?;
        cur.expect_sym("{")?;
        let cod = Obj::space(&b);
        let mut rows: BTreeMap<Point, TElem> = BTreeMap::new();
        while !cur.eat_sym("}") {
            let rpos = cur.pos();
            let p = point(cur, m, &Obj::space(&a))?;
            cur.expect_sym("->")?;
            let t = elem(cur, m, &cod)?;
            cur.expect_sym(";")?;
            if rows.insert(p.clone(), t).is_some() {
                return Err(syntax_error(rpos, format!("`{p}` is given twice")));
            }
        }
        let k = at(
            pos,
            KleisliMorphism::new(m, &a, &b, |p| {
                rows.get(p).cloned().ok_or_else(|| LabError::Precondition(format!("no row for `{p}`")))
            }),
        )?;
        insert(&mut self.corpus.kernels, "kernel", name, pos, k)
    }

    fn outer(&mut self, cur: &mut Cursor) -> Result<()> {
        let pos = cur.pos();
        let name = cur.ident()?;
        cur.expect_sym(":")?;
        let x = self.space_ref(cur)?;
        cur.expect_sym("@")?;
        let m = self.monad(cur)?;
        at(pos, m.check_space(&x))?;
        cur.expect_sym("{")?;
        let e = elem(cur, m, &Obj::t(Obj::space(&x)))?;
        cur.expect_sym("}")?;
        let def = OuterDef { name: name.clone(), monad: m, space: x, elem: e };
        insert(&mut self.corpus.outers, "outer", name, pos, def)
    }

    fn program(&mut self, cur: &mut Cursor) -> Result<()> {
        let pos = cur.pos();
        let name = cur.ident()?;
        cur.expect_sym("@")?;
        let epos = cur.pos();
        let ename = cur.ident()?;
        let effect = Effect::parse(&ename).ok_or_else(|| syntax_error(epos, format!("unknown monad `{ename}`")))?;
        cur.expect_sym("{")?;
        let mut p = Parser::new();
        let term = p.term(cur)?;
        cur.expect_sym("}")?;
        let denotation = at(pos, dsl::compile(&term, effect, &self.corpus.spaces))?;
        let def = ProgramDef { name: name.clone(), term, denotation, warnings: p.warnings };
        insert(&mut self.corpus.programs, "program", name, pos, def)
    }

    fn staged(&mut self, cur: &mut Cursor) -> Result<()> {
        let pos = cur.pos();
        let name = cur.ident()?;
        let obj = if cur.eat_sym("=") {
            let o = self.staged_expr(cur)?;
            cur.expect_sym(";")?;
            o
        } else {
            cur.expect_sym("{")?;
            let mut gens = Vec::new();
            while !cur.eat_sym("}") {
                cur.expect_kw("stage")?;
                let s = cur.usize()?;
                cur.expect_sym("=")?;
                cur.expect_sym("[")?;
                gens.extend(cur.list(",", "]", ng_val)?.into_iter().map(|v| (s, v)));
                cur.expect_sym(";")?;
            }
            at(pos, Staged::table(&name, gens))?
        };
        insert(&mut self.corpus.staged, "staged object", name, pos, obj)
    }

    fn staged_expr(&self, cur: &mut Cursor) -> Result<Staged> {
        let mut factors = vec![self.staged_atom(cur)?];
        while cur.eat_sym("*") {
            factors.push(self.staged_atom(cur)?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Staged::Product(factors) })
    }

    fn staged_atom(&self, cur: &mut Cursor) -> Result<Staged> {
        let pos = cur.pos();
        if cur.eat_sym("(") {
            let e = self.staged_expr(cur)?;
            cur.expect_sym(")")?;
            return Ok(e);
        }
        if cur.eat_sym("{") {
            let labels = cur.list(",", "}", Cursor::label)?;
            return Ok(Staged::Consts(labels.into_iter().map(Into::into).collect()));
        }
        if matches!(cur.peek(), Tok::Int(s) if s == "1") {
            cur.next();
            return Ok(Staged::unit());
        }
        let name = cur.ident()?;
        Ok(match name.as_str() {
            "N" => Staged::Names,
            "T" => {
                cur.expect_sym("(")?;
                let e = self.staged_expr(cur)?;
                cur.expect_sym(")")?;
                Staged::t(e)
            }
            _ => at(pos, self.corpus.staged_object(&name).cloned())?,
        })
    }
}

fn label_list(cur: &mut Cursor) -> Result<Vec<Point>> {
    cur.expect_sym("[")?;
    Ok(cur.list(",", "]", Cursor::label)?.into_iter().map(|l| Point::label(&l)).collect())
}

fn nested_list(cur: &mut Cursor) -> Result<Vec<Vec<Point>>> {
    cur.expect_sym("[")?;
    cur.list(",", "]", label_list)
}

/// `#k`, a label, a tuple `(v, …)` or a class `[b, v]`.
fn ng_val(cur: &mut Cursor) -> Result<NgVal> {
    if let Tok::Name(k) = cur.peek() {
        let k = *k;
        cur.next();
        return Ok(NgVal::name(k));
    }
    if cur.eat_sym("(") {
        return Ok(NgVal::Tuple(cur.list(",", ")", ng_val)?));
    }
    if cur.eat_sym("[") {
        let b = cur.usize()?;
        cur.expect_sym(",")?;
        let v = ng_val(cur)?;
        cur.expect_sym("]")?;
        return Ok(NgVal::class(b, v));
    }
    Ok(NgVal::constant(&cur.label()?))
}

/// A point of `x`; points of `T`-objects are elements.
pub fn point(cur: &mut Cursor, m: Monad, x: &Obj) -> Result<Point> {
    let pos = cur.pos();
    match x {
        Obj::Space(s) => {
            let p = Point::label(&cur.label()?);
            at(pos, s.require(&p))?;
            Ok(p)
        }
        Obj::Prod(fs) => {
            cur.expect_sym("(")?;
            let mut items = Vec::with_capacity(fs.len());
            for (i, f) in fs.iter().enumerate() {
                if i > 0 {
                    cur.expect_sym(",")?;
                }
                items.push(point(cur, m, f)?);
            }
            cur.eat_sym(",");
            cur.expect_sym(")")?;
            Ok(Point::Tuple(items))
        }
        Obj::T(inner) => Ok(Point::elem(elem(cur, m, inner)?)),
    }
}

/// An element of `T x` in the syntax of monad `m`, in canonical form.
pub fn elem(cur: &mut Cursor, m: Monad, x: &Obj) -> Result<TElem> {
    let pos = cur.pos();
    let t = match m {
        Monad::Distribution | Monad::Giry | Monad::SubGiry => {
            cur.expect_sym("{")?;
            let items = cur.list(",", "}", |c| {
                let p = point(c, m, x)?;
                c.expect_sym(":")?;
                Ok((p, c.rational()?))
            })?;
            let items = items.into_iter().map(|(p, q)| Ok((x.atom_rep(&p)?, q))).collect::<Result<Vec<_>>>();
            TElem::Measure(Measure::from_weights(at(pos, items)?))
        }
        Monad::Maybe => {
            if cur.eat_kw("Nothing") {
                TElem::Maybe(None)
            } else {
                cur.eat_kw("Just");
                TElem::Maybe(Some(point(cur, m, x)?))
            }
        }
        Monad::Reader => {
            cur.expect_sym("(")?;
            let a = point(cur, m, x)?;
            cur.expect_sym(",")?;
            let b = point(cur, m, x)?;
            cur.expect_sym(")")?;
            TElem::Reader(a, b)
        }
        Monad::Lower => {
            cur.expect_sym("{")?;
            let pts = cur.list(",", "}", |c| point(c, m, x))?;
            at(pos, m.closure_elem(x, &pts))?
        }
    };
    at(pos, m.validate(x, &t))?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    #[test]
    fn shipped_corpus_loads() {
        let c = Corpus::shipped();
        assert!(c.spaces.contains_key("bool"));
        assert_eq!(c.space("codiscrete2").unwrap().atom_count(), 1);
        assert!(!c.kernels.is_empty() && !c.outers.is_empty() && !c.programs.is_empty() && !c.staged.is_empty());
        for p in c.programs.values() {
            assert!(p.warnings.is_empty(), "{}: {:?}", p.name, p.warnings);
        }
    }

    #[test]
    fn blocks_parse() {
        let src = r#"
            space bool { kind = set; points = [tt, ff]; }
            space s { kind = top; points = [0, 1]; generators = [[1]]; }
            kernel k : bool -> bool @ giry { tt -> { tt: 1/2, ff: 1/2 }; ff -> { ff: 1 }; }
            kernel h : s -> s @ lower { 0 -> {0}; 1 -> {1, 0}; }
            kernel r : bool -> bool @ reader { tt -> (tt, ff); ff -> (ff, ff); }
            kernel mb : bool -> bool @ maybe { tt -> Nothing; ff -> Just tt; }
            outer o : bool @ giry { { { tt: 1 }: 1/2, { ff: 1 }: 1/2 } }
            program p @ lower { thunk { or(tt, ff) } }
            staged nn = N * T(N);
            staged u { stage 1 = [u, (#0, u)]; }
        "#;
        let c = Corpus::parse_str(src).unwrap();
        let k = c.kernel("k").unwrap();
        assert_eq!(
            *k.eval(&Point::label("tt")).unwrap(),
            TElem::Measure(Measure::from_weights([
                (Point::label("tt"), Rational::new(1, 2)),
                (Point::label("ff"), Rational::new(1, 2)),
            ]))
        );
        assert_eq!(c.kernel("h").unwrap().at(1).as_closed().unwrap().generators().len(), 1);
        assert_eq!(c.outer("o").unwrap().elem.as_measure().unwrap().len(), 2);
        assert_eq!(c.staged_object("nn").unwrap().to_string(), "N × T(N)");
    }

    #[test]
    fn errors_carry_positions() {
        let cases = [
            ("space b { kind = set; points = [a]\n}", 2, 1),
            ("space b { kind = set; points = [a]; }\nkernel k : b -> c @ giry { }", 2, 17),
            ("space b { kind = set; points = [a]; }\nkernel k : b -> b @ giry {\n a -> { a: 1/2 }; }", 3, 7),
            ("space b { kind = set; points = [a]; }\nprogram p @ giry { thunk { or(a) } }", 2, 9),
            ("space b { kind = set; points = [a]; }\nspace b { kind = set; points = [c]; }", 2, 7),
            ("frob x", 1, 1),
        ];
        for (src, line, col) in cases {
            match Corpus::parse_str(src) {
                Err(LabError::Syntax { line: l, col: c, msg }) => assert_eq!((l, c), (line, col), "{src}: {msg}"),
                other => panic!("{src}: {other:?}"),
            }
        }
    }

    #[test]
    fn include_resolves_relative_paths_and_cycles() {
        let dir = std::env::temp_dir().join(format!("effects-lab-corpus-{}", std::process::id()));
        std::fs::create_dir_all(dir.join("sub")).unwrap();
        std::fs::write(dir.join("sub/base.lab"), "space b { kind = set; points = [a]; }").unwrap();
        std::fs::write(dir.join("main.lab"), "include \"sub/base.lab\"\nprogram p @ lower { a }").unwrap();
        std::fs::write(dir.join("loop.lab"), "include \"loop.lab\"").unwrap();
        let c = Corpus::load(&dir.join("main.lab")).unwrap();
        assert!(c.programs.contains_key("p"));
        let err = Corpus::load(&dir.join("loop.lab")).unwrap_err();
        assert!(err.to_string().contains("cycle"), "{err}");
        std::fs::remove_dir_all(dir).unwrap();
    }
}
