//! A small expression language for composites of structure maps.
//!
//! ```text
//! expr := ten ((';' | 'o') ten)*      f;g = g∘f,  f o g = f∘g
//! ten  := atom ('*' atom)*
//! atom := '(' expr ')' | name | name '(' obj (',' obj)* ')'
//! obj  := oatom ('*' oatom)*          oatom := name | '1' | '(' obj ')'
//! ```
//!
//! Built-in atoms: `id(V)`, `m(A)`, `u(A)`, `cm(C)`, `cu(C)`, `S(H)`,
//! `br(V,W)`, `act(X)`, `coact(X)`. Any other bare name is looked up among the
//! environment's morphisms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bundle::{AlgebraBundle, Bundle, CoalgebraBundle};
use crate::field::Field;
use crate::graded::{braiding, tensor, GradedSpace, Grading, Morphism};
use crate::hopf::{equation, Algebra, Coalgebra, HopfAlgebra};
use crate::report::Report;

/// A factor of an object expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObjAtom {
    Name(String),
    One,
}

/// `A*B*…`, flattened.
pub type Obj = Vec<ObjAtom>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Id,
    Mul,
    Unit,
    Comul,
    Counit,
    Antipode,
    Braid,
    Act,
    Coact,
}

impl Builtin {
    pub const ALL: [Builtin; 9] = [
        Builtin::Id,
        Builtin::Mul,
        Builtin::Unit,
        Builtin::Comul,
        Builtin::Counit,
        Builtin::Antipode,
        Builtin::Braid,
        Builtin::Act,
        Builtin::Coact,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Builtin::Id => "id",
            Builtin::Mul => "m",
            Builtin::Unit => "u",
            Builtin::Comul => "cm",
            Builtin::Counit => "cu",
            Builtin::Antipode => "S",
            Builtin::Braid => "br",
            Builtin::Act => "act",
            Builtin::Coact => "coact",
        }
    }

    fn from_keyword(s: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.keyword() == s)
    }

    fn arity(self) -> usize {
        if self == Builtin::Braid {
            2
        } else {
            1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Builtin(Builtin, Vec<Obj>),
    Name(String),
    Tensor(Box<Expr>, Box<Expr>),
    /// `a ; b`, i.e. `b∘a`.
    Then(Box<Expr>, Box<Expr>),
    /// `a o b`, i.e. `a∘b`.
    Compose(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn tensor(a: Expr, b: Expr) -> Expr {
        Expr::Tensor(Box::new(a), Box::new(b))
    }

    pub fn then(a: Expr, b: Expr) -> Expr {
        Expr::Then(Box::new(a), Box::new(b))
    }

    pub fn compose(a: Expr, b: Expr) -> Expr {
        Expr::Compose(Box::new(a), Box::new(b))
    }
}

// --- printing -------------------------------------------------------------------

fn write_obj(f: &mut fmt::Formatter<'_>, o: &Obj) -> fmt::Result {
    for (i, a) in o.iter().enumerate() {
        if i > 0 {
            write!(f, "*")?;
        }
        match a {
            ObjAtom::Name(n) => write!(f, "{n}")?,
            ObjAtom::One => write!(f, "1")?,
        }
    }
    Ok(())
}

impl Expr {
    fn level(&self) -> u8 {
        match self {
            Expr::Then(..) | Expr::Compose(..) => 1,
            Expr::Tensor(..) => 2,
            _ => 3,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Builtin(b, args) => {
                write!(f, "{}(", b.keyword())?;
                for (i, o) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write_obj(f, o)?;
                }
                write!(f, ")")
            }
            Expr::Name(n) => write!(f, "{n}"),
            Expr::Tensor(a, b) => {
                a.write_at(f, 2)?;
                write!(f, " * ")?;
                b.write_at(f, 3)
            }
            Expr::Then(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " ; ")?;
                b.write_at(f, 2)
            }
            Expr::Compose(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " o ")?;
                b.write_at(f, 2)
            }
        }
    }
}

/// Canonical form with the fewest parentheses that parse back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

// --- lexing and parsing ------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    One,
    LParen,
    RParen,
    Comma,
    Star,
    Semi,
    Compose,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("name `{s}`"),
            Tok::One => "`1`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Star => "`*`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Compose => "`o`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at position {position}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    /// 1-based character position.
    pub position: usize,
    pub expected: Vec<String>,
    pub found: String,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '′'
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '*' => Some(Tok::Star),
            ';' => Some(Tok::Semi),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, pos));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if is_name_char(c) {
            let start = i;
            while i < chars.len() && is_name_char(chars[i]) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let tok = match word.as_str() {
                "o" => Tok::Compose,
                "1" => Tok::One,
                _ => Tok::Ident(word),
            };
            out.push((tok, pos));
        } else {
            return Err(ParseError { position: pos, expected: vec!["a token".into()], found: format!("`{c}`") });
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        let (tok, pos) = &self.toks[self.at];
        Err(ParseError { position: *pos, expected: expected.iter().map(|s| s.to_string()).collect(), found: tok.describe() })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, expected: &[&str]) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.fail(expected)
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.ten()?;
        loop {
            match self.peek() {
                Tok::Semi => {
                    self.bump();
                    e = Expr::then(e, self.ten()?);
                }
                Tok::Compose => {
                    self.bump();
                    e = Expr::compose(e, self.ten()?);
                }
                _ => return Ok(e),
            }
        }
    }

    fn ten(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.atom()?;
        while *self.peek() == Tok::Star {
            self.bump();
            e = Expr::tensor(e, self.atom()?);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, &["`)`", "`*`", "`;`", "`o`"])?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                match Builtin::from_keyword(&name) {
                    Some(b) => {
                        self.expect(Tok::LParen, &["`(`"])?;
                        let mut args = vec![self.obj()?];
                        for _ in 1..b.arity() {
                            self.expect(Tok::Comma, &["`,`", "`*`"])?;
                            args.push(self.obj()?);
                        }
                        self.expect(Tok::RParen, &["`)`", "`*`"])?;
                        Ok(Expr::Builtin(b, args))
                    }
                    None => Ok(Expr::Name(name)),
                }
            }
            _ => self.fail(&["a name", "`(`"]),
        }
    }

    fn obj(&mut self) -> Result<Obj, ParseError> {
        let mut o = self.obj_atom()?;
        while *self.peek() == Tok::Star {
            self.bump();
            o.extend(self.obj_atom()?);
        }
        Ok(o)
    }

    fn obj_atom(&mut self) -> Result<Obj, ParseError> {
        match self.peek().clone() {
            Tok::Ident(n) => {
                self.bump();
                Ok(vec![ObjAtom::Name(n)])
            }
            Tok::One => {
                self.bump();
                Ok(vec![ObjAtom::One])
            }
            Tok::LParen => {
                self.bump();
                let o = self.obj()?;
                self.expect(Tok::RParen, &["`)`", "`*`"])?;
                Ok(o)
            }
            _ => self.fail(&["an object name", "`1`", "`(`"]),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(&["`*`", "`;`", "`o`", "end of input"]);
    }
    Ok(e)
}

// --- environment, typing, evaluation ---------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DslError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("type error in `{expr}`: {detail}")]
    Type { expr: String, detail: String },
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
}

/// Named spaces and structure maps visible to expressions.
#[derive(Clone, Debug)]
pub struct Environment<F: Field> {
    grading: Arc<Grading<F>>,
    spaces: BTreeMap<String, GradedSpace<F>>,
    algebras: BTreeMap<String, Algebra<F>>,
    coalgebras: BTreeMap<String, Coalgebra<F>>,
    antipodes: BTreeMap<String, Morphism<F>>,
    actions: BTreeMap<String, Morphism<F>>,
    coactions: BTreeMap<String, Morphism<F>>,
    morphisms: BTreeMap<String, Morphism<F>>,
}

fn insert_unique<T>(map: &mut BTreeMap<String, T>, kind: &'static str, name: &str, v: T) -> Result<(), DslError> {
    if map.contains_key(name) {
        return Err(DslError::Duplicate { kind, name: name.to_string() });
    }
    map.insert(name.to_string(), v);
    Ok(())
}

impl<F: Field> Environment<F> {
    pub fn new(grading: Arc<Grading<F>>) -> Self {
        Environment {
            grading,
            spaces: BTreeMap::new(),
            algebras: BTreeMap::new(),
            coalgebras: BTreeMap::new(),
            antipodes: BTreeMap::new(),
            actions: BTreeMap::new(),
            coactions: BTreeMap::new(),
            morphisms: BTreeMap::new(),
        }
    }

    fn check_grading(&self, v: &GradedSpace<F>, name: &str) -> Result<(), DslError> {
        if **v.grading() != *self.grading {
            return Err(DslError::Type { expr: name.to_string(), detail: "grading differs from the environment".into() });
        }
        Ok(())
    }

    pub fn add_space(&mut self, name: &str, v: GradedSpace<F>) -> Result<(), DslError> {
        self.check_grading(&v, name)?;
        insert_unique(&mut self.spaces, "space", name, v.with_label(name))
    }

    /// Registers or reuses the space `name`; an existing space must agree.
    fn ensure_space(&mut self, name: &str, v: &GradedSpace<F>) -> Result<(), DslError> {
        match self.spaces.get(name) {
            Some(w) if w == v => Ok(()),
            Some(_) => Err(DslError::Duplicate { kind: "space", name: name.to_string() }),
            None => self.add_space(name, v.clone()),
        }
    }

    pub fn add_algebra(&mut self, name: &str, a: Algebra<F>) -> Result<(), DslError> {
        self.ensure_space(name, &a.carrier)?;
        insert_unique(&mut self.algebras, "algebra", name, a)
    }

    pub fn add_coalgebra(&mut self, name: &str, c: Coalgebra<F>) -> Result<(), DslError> {
        self.ensure_space(name, &c.carrier)?;
        insert_unique(&mut self.coalgebras, "coalgebra", name, c)
    }

    pub fn add_hopf(&mut self, name: &str, h: &HopfAlgebra<F>) -> Result<(), DslError> {
        self.add_algebra(name, h.algebra.clone())?;
        self.add_coalgebra(name, h.coalgebra.clone())?;
        insert_unique(&mut self.antipodes, "antipode", name, h.antipode.clone())
    }

    pub fn add_action(&mut self, name: &str, f: Morphism<F>) -> Result<(), DslError> {
        insert_unique(&mut self.actions, "action", name, f)
    }

    pub fn add_coaction(&mut self, name: &str, f: Morphism<F>) -> Result<(), DslError> {
        insert_unique(&mut self.coactions, "coaction", name, f)
    }

    pub fn add_morphism(&mut self, name: &str, f: Morphism<F>) -> Result<(), DslError> {
        if Builtin::from_keyword(name).is_some() || name == "o" {
            return Err(DslError::Duplicate { kind: "reserved word", name: name.to_string() });
        }
        self.check_grading(f.dom(), name)?;
        insert_unique(&mut self.morphisms, "morphism", name, f)
    }

    /// Names `P`, `H`, `B` with their structures, plus `act(P)` or `coact(P)`.
    pub fn from_bundle(b: &Bundle<F>) -> Result<Self, DslError> {
        let g = b.hopf().carrier().grading().clone();
        let mut env = Environment::new(g);
        env.add_hopf("H", b.hopf())?;
        match b {
            Bundle::Algebra(x) => env.add_algebra_bundle(x)?,
            Bundle::Comonoid(x) => env.add_coalgebra_bundle(x)?,
        }
        Ok(env)
    }

    fn add_algebra_bundle(&mut self, b: &AlgebraBundle<F>) -> Result<(), DslError> {
        self.add_algebra("P", b.p().clone())?;
        self.add_algebra("B", b.base.clone())?;
        self.add_coaction("P", b.rho().clone())?;
        self.add_morphism("pi", b.pi.clone())
    }

    fn add_coalgebra_bundle(&mut self, b: &CoalgebraBundle<F>) -> Result<(), DslError> {
        self.add_coalgebra("P", b.p().clone())?;
        self.add_coalgebra("B", b.base.clone())?;
        self.add_action("P", b.act().clone())?;
        self.add_morphism("pi", b.pi.clone())
    }

    pub fn grading(&self) -> &Arc<Grading<F>> {
        &self.grading
    }

    pub fn space_names(&self) -> impl Iterator<Item = &String> {
        self.spaces.keys()
    }

    pub fn object(&self, o: &Obj) -> Result<GradedSpace<F>, DslError> {
        let mut acc = GradedSpace::unit(self.grading.clone());
        for a in o {
            if let ObjAtom::Name(n) = a {
                let v = self.spaces.get(n).ok_or_else(|| DslError::Unknown { kind: "space", name: n.clone() })?;
                acc = acc.tensor(v).map_err(|e| DslError::Type { expr: n.clone(), detail: e.to_string() })?;
            }
        }
        Ok(acc)
    }

    fn single<'a, T>(map: &'a BTreeMap<String, T>, kind: &'static str, o: &Obj) -> Result<&'a T, DslError> {
        let name = match o.as_slice() {
            [ObjAtom::Name(n)] => n,
            _ => return Err(DslError::Unknown { kind, name: display_obj(o) }),
        };
        map.get(name).ok_or_else(|| DslError::Unknown { kind, name: name.clone() })
    }

    fn builtin(&self, b: Builtin, args: &[Obj]) -> Result<Morphism<F>, DslError> {
        let a = &args[0];
        Ok(match b {
            Builtin::Id => Morphism::identity(&self.object(a)?),
            Builtin::Mul => Self::single(&self.algebras, "algebra", a)?.m.clone(),
            Builtin::Unit => Self::single(&self.algebras, "algebra", a)?.u.clone(),
            Builtin::Comul => Self::single(&self.coalgebras, "coalgebra", a)?.delta.clone(),
            Builtin::Counit => Self::single(&self.coalgebras, "coalgebra", a)?.eps.clone(),
            Builtin::Antipode => Self::single(&self.antipodes, "Hopf algebra", a)?.clone(),
            Builtin::Act => Self::single(&self.actions, "action", a)?.clone(),
            Builtin::Coact => Self::single(&self.coactions, "coaction", a)?.clone(),
            Builtin::Braid => {
                let (v, w) = (self.object(a)?, self.object(&args[1])?);
                braiding(&v, &w).map_err(|e| DslError::Type { expr: "br".into(), detail: e.to_string() })?
            }
        })
    }
}

fn display_obj(o: &Obj) -> String {
    o.iter()
        .map(|a| match a {
            ObjAtom::Name(n) => n.as_str(),
            ObjAtom::One => "1",
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Domain and codomain, without computing any matrix.
pub fn typecheck<F: Field>(e: &Expr, env: &Environment<F>) -> Result<(GradedSpace<F>, GradedSpace<F>), DslError> {
    match e {
        Expr::Builtin(b, args) => {
            let f = env.builtin(*b, args)?;
            Ok((f.dom().clone(), f.cod().clone()))
        }
        Expr::Name(n) => {
            let f = env.morphisms.get(n).ok_or_else(|| DslError::Unknown { kind: "morphism", name: n.clone() })?;
            Ok((f.dom().clone(), f.cod().clone()))
        }
        Expr::Tensor(a, b) => {
            let (da, ca) = typecheck(a, env)?;
            let (db, cb) = typecheck(b, env)?;
            let err = |x: crate::TypeError| DslError::Type { expr: e.to_string(), detail: x.to_string() };
            Ok((da.tensor(&db).map_err(err)?, ca.tensor(&cb).map_err(err)?))
        }
        Expr::Then(a, b) | Expr::Compose(a, b) => {
            let (first, second) = if matches!(e, Expr::Then(..)) { (a, b) } else { (b, a) };
            let (d1, c1) = typecheck(first, env)?;
            let (d2, c2) = typecheck(second, env)?;
            if c1 != d2 {
                return Err(DslError::Type {
                    expr: e.to_string(),
                    detail: format!(
                        "`{first}` ends at {} but `{second}` starts at {}",
                        c1.describe(),
                        d2.describe()
                    ),
                });
            }
            Ok((d1, c2))
        }
    }
}

pub fn evaluate<F: Field>(e: &Expr, env: &Environment<F>) -> Result<Morphism<F>, DslError> {
    typecheck(e, env)?;
    eval_typed(e, env)
}

fn eval_typed<F: Field>(e: &Expr, env: &Environment<F>) -> Result<Morphism<F>, DslError> {
    let err = |x: crate::TypeError| DslError::Type { expr: e.to_string(), detail: x.to_string() };
    match e {
        Expr::Builtin(b, args) => env.builtin(*b, args),
        Expr::Name(n) => Ok(env.morphisms[n].clone()),
        Expr::Tensor(a, b) => tensor(&eval_typed(a, env)?, &eval_typed(b, env)?).map_err(err),
        Expr::Then(a, b) => eval_typed(b, env)?.compose(&eval_typed(a, env)?).map_err(err),
        Expr::Compose(a, b) => eval_typed(a, env)?.compose(&eval_typed(b, env)?).map_err(err),
    }
}

/// Exact comparison; differing endpoints are a type error.
pub fn assert_equal<F: Field>(name: &str, lhs: &Expr, rhs: &Expr, env: &Environment<F>) -> Result<Report, DslError> {
    let (dl, cl) = typecheck(lhs, env)?;
    let (dr, cr) = typecheck(rhs, env)?;
    if dl != dr || cl != cr {
        return Err(DslError::Type {
            expr: format!("{lhs} == {rhs}"),
            detail: format!(
                "sides have types {} → {} and {} → {}",
                dl.describe(),
                cl.describe(),
                dr.describe(),
                cr.describe()
            ),
        });
    }
    let l = eval_typed(lhs, env)?;
    let r = eval_typed(rhs, env)?;
    let mut report = Report::new();
    equation(&mut report, name, &format!("{lhs} == {rhs}"), Ok(l), Ok(r));
    Ok(report)
}

/// One `EXPECT lhs == rhs` line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assertion {
    pub line: usize,
    pub lhs: Expr,
    pub rhs: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {error}")]
pub struct AssertionFileError {
    pub line: usize,
    pub error: DslError,
}

pub fn parse_assertions(text: &str) -> Result<Vec<Assertion>, AssertionFileError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let bad = |detail: &str| AssertionFileError {
            line,
            error: DslError::Parse(ParseError { position: 1, expected: vec![detail.into()], found: format!("`{body}`") }),
        };
        let rest = body.strip_prefix("EXPECT").ok_or_else(|| bad("`EXPECT`"))?;
        let (l, r) = rest.split_once("==").ok_or_else(|| bad("`==`"))?;
        let lhs = parse(l).map_err(|e| AssertionFileError { line, error: e.into() })?;
        let rhs = parse(r).map_err(|e| AssertionFileError { line, error: e.into() })?;
        out.push(Assertion { line, lhs, rhs });
    }
    Ok(out)
}

/// Runs every assertion; a type error fails that assertion only.
pub fn run_assertions<F: Field>(assertions: &[Assertion], env: &Environment<F>) -> Report {
    let mut r = Report::new();
    for a in assertions {
        let name = format!("expect.line{:03}", a.line);
        match assert_equal(&name, &a.lhs, &a.rhs, env) {
            Ok(sub) => r.checks.extend(sub.checks),
            Err(e) => {
                r.check(&name, format!("{} == {}", a.lhs, a.rhs), false).with("error", e);
            }
        }
    }
    r
}

// --- random well-typed expressions -------------------------------------------------

/// Symbolic signature used by the generator: the factors of an object.
type Word = Vec<String>;

fn word_obj(w: &[String]) -> Obj {
    if w.is_empty() {
        vec![ObjAtom::One]
    } else {
        w.iter().map(|n| ObjAtom::Name(n.clone())).collect()
    }
}

/// Atoms usable at the head of `remaining`, with how many factors they
/// consume and what they produce.
fn candidates<F: Field>(env: &Environment<F>, remaining: &[String]) -> Vec<(Expr, usize, Word)> {
    let mut out = Vec::new();
    if let Some(x) = remaining.first() {
        out.push((Expr::Builtin(Builtin::Id, vec![word_obj(&remaining[..1])]), 1, vec![x.clone()]));
        if env.coalgebras.contains_key(x) {
            out.push((Expr::Builtin(Builtin::Comul, vec![word_obj(&remaining[..1])]), 1, vec![x.clone(), x.clone()]));
            out.push((Expr::Builtin(Builtin::Counit, vec![word_obj(&remaining[..1])]), 1, vec![]));
        }
        if env.antipodes.contains_key(x) {
            out.push((Expr::Builtin(Builtin::Antipode, vec![word_obj(&remaining[..1])]), 1, vec![x.clone()]));
        }
        if let Some(y) = remaining.get(1) {
            out.push((
                Expr::Builtin(Builtin::Braid, vec![word_obj(&remaining[..1]), word_obj(&remaining[1..2])]),
                2,
                vec![y.clone(), x.clone()],
            ));
            if x == y && env.algebras.contains_key(x) {
                out.push((Expr::Builtin(Builtin::Mul, vec![word_obj(&remaining[..1])]), 2, vec![x.clone()]));
            }
        }
    }
    out
}

/// A tensor of atoms consuming the whole of `input`; returns it with its output.
fn random_layer<F: Field>(env: &Environment<F>, input: &[String], rng: &mut impl Rng, max_width: usize) -> (Expr, Word) {
    let mut pieces: Vec<(Expr, Word)> = Vec::new();
    let mut i = 0;
    while i < input.len() {
        let cands = candidates(env, &input[i..]);
        let narrow: Vec<_> = cands.iter().filter(|c| c.2.len() <= c.1 || input.len() < max_width).collect();
        let pick = narrow.choose(rng).copied().unwrap_or(&cands[0]);
        pieces.push((pick.0.clone(), pick.2.clone()));
        i += pick.1;
    }
    if input.is_empty() || rng.gen_bool(0.15) {
        let units: Vec<&String> = env.algebras.keys().collect();
        if let Some(a) = units.choose(rng) {
            let at = rng.gen_range(0..=pieces.len());
            pieces.insert(at, (Expr::Builtin(Builtin::Unit, vec![vec![ObjAtom::Name((*a).clone())]]), vec![(*a).clone()]));
        }
    }
    if pieces.is_empty() {
        return (Expr::Builtin(Builtin::Id, vec![vec![ObjAtom::One]]), vec![]);
    }
    let mut it = pieces.into_iter();
    let (mut e, mut w) = it.next().expect("nonempty");
    for (e2, w2) in it {
        e = Expr::tensor(e, e2);
        w.extend(w2);
    }
    (e, w)
}

/// A random well-typed expression of `layers` composed tensor layers over
/// the environment's structure maps, starting from random spaces.
pub fn random_expr<F: Field>(env: &Environment<F>, rng: &mut impl Rng, layers: usize) -> Expr {
    let names: Vec<&String> = env.spaces.keys().collect();
    let width = rng.gen_range(1..=2);
    let start: Vec<String> = (0..width).map(|_| (*names.choose(rng).expect("some space")).clone()).collect();
    random_chain(env, rng, &start, layers).0
}

/// Like [`random_expr`] but starting at the tensor of the named spaces;
/// returns the factors of the codomain as well.
pub fn random_chain<F: Field>(env: &Environment<F>, rng: &mut impl Rng, start: &[String], layers: usize) -> (Expr, Vec<String>) {
    let mut input: Word = start.to_vec();
    let mut stages = Vec::new();
    for _ in 0..layers.max(1) {
        let (e, out) = random_layer(env, &input, rng, 4);
        stages.push(e);
        input = out;
    }
    let mut it = stages.into_iter();
    let mut e = it.next().expect("one layer");
    for s in it {
        e = if rng.gen_bool(0.5) {
            Expr::then(e, s)
        } else {
            // `s o e` means the same composite
            Expr::compose(s, e)
        };
    }
    (e, input)
}
