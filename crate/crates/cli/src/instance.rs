//! The plain-text instance format.
//!
//! ```text
//! field rational                      # or: field prime 7
//! grading cyclic 2 row 1 -1           # or: grading trivial
//! space H dim 2 degrees 0 1
//! morphism mH : H*H -> H
//!   0 0 1
//!   1 1 1
//! end
//! hopf H m=mH u=uH cm=cmH cu=cuH S=SH
//! algebra P m=mP u=uP
//! coalgebra C cm=cmC cu=cuC
//! comodule_algebra P algebra=P hopf=H coaction=rho
//! module_coalgebra P coalgebra=P hopf=H action=act
//! bundle total=P base=B pi=pi         # base and pi optional
//! module V action=actV                # a right module over the bundle's base
//! ```
//!
//! Matrix entries are `row col value` with rows indexing the codomain.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use hgl_core::bundle::{AlgebraBundle, Bundle, CoalgebraBundle, ComoduleAlgebra, ModuleCoalgebra, RightModule};
use hgl_core::field::is_prime;
use hgl_core::{Algebra, Coalgebra, Field, Fp, GradedSpace, Grading, GradingKind, HopfAlgebra, Morphism, Rational};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct InstanceError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, InstanceError> {
    Err(InstanceError { line, message: message.into() })
}

#[derive(Clone, Debug)]
pub struct Instance<F: Field> {
    pub grading: Arc<Grading<F>>,
    pub spaces: BTreeMap<String, GradedSpace<F>>,
    pub morphisms: BTreeMap<String, Morphism<F>>,
    pub algebras: BTreeMap<String, Algebra<F>>,
    pub coalgebras: BTreeMap<String, Coalgebra<F>>,
    pub hopfs: BTreeMap<String, HopfAlgebra<F>>,
    pub comodule_algebras: BTreeMap<String, ComoduleAlgebra<F>>,
    pub module_coalgebras: BTreeMap<String, ModuleCoalgebra<F>>,
    pub bundle: Option<Bundle<F>>,
    /// Right modules over the bundle's base, with their declaration lines.
    pub modules: BTreeMap<String, (usize, RightModule<F>)>,
}

/// An instance over whichever field its `field` line names.
#[derive(Clone, Debug)]
pub enum AnyInstance {
    Rational(Instance<Rational>),
    Prime(Instance<Fp>),
}

struct Line<'a> {
    number: usize,
    words: Vec<&'a str>,
    raw: &'a str,
}

fn content_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("").trim();
            (!body.is_empty()).then(|| Line { number: i + 1, words: body.split_whitespace().collect(), raw: body })
        })
        .collect()
}

pub fn parse_instance(text: &str) -> Result<AnyInstance, InstanceError> {
    let lines = content_lines(text);
    let (rest, field) = match lines.first() {
        Some(l) if l.words[0] == "field" => (&lines[1..], Some(l)),
        _ => (&lines[..], None),
    };
    match field.map(|l| (l.number, l.words.as_slice())) {
        None | Some((_, ["field", "rational"])) => Ok(AnyInstance::Rational(parse_body(rest, Rational::from_i64(1))?)),
        Some((n, ["field", "prime", p])) => {
            let p: u32 = p.parse().map_err(|_| InstanceError { line: n, message: format!("`{p}` is not a prime") })?;
            if !is_prime(p) {
                return err(n, format!("{p} is not prime"));
            }
            Ok(AnyInstance::Prime(parse_body(rest, Fp::new(1, p))?))
        }
        Some((n, _)) => err(n, "expected `field rational` or `field prime <p>`"),
    }
}

fn key_values<'a>(l: &Line<'a>, from: usize, allowed: &[&str]) -> Result<BTreeMap<&'a str, &'a str>, InstanceError> {
    let mut out = BTreeMap::new();
    for w in &l.words[from..] {
        let (k, v) = w.split_once('=').ok_or_else(|| InstanceError { line: l.number, message: format!("expected key=value, found `{w}`") })?;
        if !allowed.contains(&k) {
            return err(l.number, format!("unknown key `{k}`; expected one of {}", allowed.join(", ")));
        }
        if out.insert(k, v).is_some() {
            return err(l.number, format!("key `{k}` given twice"));
        }
    }
    Ok(out)
}

fn required<'a>(l: &Line<'_>, kv: &BTreeMap<&str, &'a str>, key: &str) -> Result<&'a str, InstanceError> {
    kv.get(key).copied().ok_or_else(|| InstanceError { line: l.number, message: format!("missing `{key}=`") })
}

fn lookup<'m, T>(map: &'m BTreeMap<String, T>, kind: &str, name: &str, line: usize) -> Result<&'m T, InstanceError> {
    map.get(name).ok_or_else(|| InstanceError { line, message: format!("{kind} `{name}` is not defined") })
}

fn fresh<T>(map: &BTreeMap<String, T>, kind: &str, name: &str, line: usize) -> Result<(), InstanceError> {
    if map.contains_key(name) {
        return err(line, format!("{kind} `{name}` defined twice"));
    }
    if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
        return err(line, format!("`{name}` is not a valid name"));
    }
    Ok(())
}

fn name_arg<'a>(l: &Line<'a>) -> Result<&'a str, InstanceError> {
    l.words.get(1).copied().ok_or_else(|| InstanceError { line: l.number, message: format!("`{}` needs a name", l.words[0]) })
}

fn parse_grading<F: Field>(l: Option<&Line<'_>>, ctx: &F) -> Result<Grading<F>, InstanceError> {
    let Some(l) = l else { return Ok(Grading::trivial_over(ctx)) };
    match l.words.as_slice() {
        ["grading", "trivial"] => Ok(Grading::trivial_over(ctx)),
        ["grading", "cyclic", n, "row", row @ ..] => {
            let n: usize = n.parse().map_err(|_| InstanceError { line: l.number, message: format!("bad order `{n}`") })?;
            let row = row
                .iter()
                .map(|s| F::parse_in(s, ctx))
                .collect::<Result<Vec<F>, _>>()
                .map_err(|e| InstanceError { line: l.number, message: e.to_string() })?;
            Grading::cyclic_from_row(n, &row).map_err(|e| InstanceError { line: l.number, message: e.to_string() })
        }
        _ => err(l.number, "expected `grading trivial` or `grading cyclic <n> row <χ(1,0)> … <χ(1,n-1)>`"),
    }
}

fn parse_body<F: Field>(lines: &[Line<'_>], ctx: F) -> Result<Instance<F>, InstanceError> {
    let (grading_line, lines) = match lines.first() {
        Some(l) if l.words[0] == "grading" => (Some(l), &lines[1..]),
        _ => (None, lines),
    };
    let grading = Arc::new(parse_grading(grading_line, &ctx)?);
    let mut inst = Instance {
        grading: grading.clone(),
        spaces: BTreeMap::new(),
        morphisms: BTreeMap::new(),
        algebras: BTreeMap::new(),
        coalgebras: BTreeMap::new(),
        hopfs: BTreeMap::new(),
        comodule_algebras: BTreeMap::new(),
        module_coalgebras: BTreeMap::new(),
        bundle: None,
        modules: BTreeMap::new(),
    };
    let mut i = 0;
    while i < lines.len() {
        let l = &lines[i];
        i += 1;
        let n = l.number;
        let te = |e: hgl_core::TypeError| InstanceError { line: n, message: e.to_string() };
        match l.words[0] {
            "space" => {
                let name = name_arg(l)?;
                fresh(&inst.spaces, "space", name, n)?;
                let dim: usize = match l.words.get(2..4) {
                    Some(["dim", d]) => d.parse().map_err(|_| InstanceError { line: n, message: format!("bad dimension `{d}`") })?,
                    _ => return err(n, "expected `space <name> dim <d> [degrees …]`"),
                };
                let degrees = match l.words.get(4) {
                    None => vec![0; dim],
                    Some(&"degrees") => l.words[5..]
                        .iter()
                        .map(|d| d.parse::<usize>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| InstanceError { line: n, message: "degrees must be non-negative integers".into() })?,
                    Some(w) => return err(n, format!("unexpected `{w}`")),
                };
                if degrees.len() != dim {
                    return err(n, format!("{} degrees given for dimension {dim}", degrees.len()));
                }
                let v = GradedSpace::new(name, degrees, grading.clone()).map_err(te)?;
                inst.spaces.insert(name.to_string(), v);
            }
            "morphism" => {
                let name = name_arg(l)?;
                fresh(&inst.morphisms, "morphism", name, n)?;
                let sig = l.raw.splitn(2, ':').nth(1).ok_or_else(|| InstanceError { line: n, message: "expected `morphism <name> : <dom> -> <cod>`".into() })?;
                let (d, c) = sig.split_once("->").ok_or_else(|| InstanceError { line: n, message: "expected `->` in the signature".into() })?;
                let dom = object(&inst, d, n)?;
                let cod = object(&inst, c, n)?;
                let mut entries = Vec::new();
                loop {
                    let Some(e) = lines.get(i) else { return err(n, format!("morphism `{name}` has no `end`")) };
                    i += 1;
                    match e.words.as_slice() {
                        ["end"] => break,
                        [r, col, v] => {
                            let idx = |s: &str, bound: usize, what: &str| -> Result<usize, InstanceError> {
                                let k: usize = s.parse().map_err(|_| InstanceError { line: e.number, message: format!("bad {what} index `{s}`") })?;
                                if k >= bound {
                                    return err(e.number, format!("{what} index {k} out of range (dimension {bound})"));
                                }
                                Ok(k)
                            };
                            let r = idx(r, cod.dim(), "row")?;
                            let col = idx(col, dom.dim(), "column")?;
                            let v = F::parse_in(v, &ctx).map_err(|x| InstanceError { line: e.number, message: x.to_string() })?;
                            entries.push((r, col, v));
                        }
                        _ => return err(e.number, "expected `row col value` or `end`"),
                    }
                }
                let f = Morphism::from_triplets(dom, cod, entries).map_err(te)?;
                inst.morphisms.insert(name.to_string(), f);
            }
            "algebra" => {
                let name = name_arg(l)?;
                fresh(&inst.algebras, "algebra", name, n)?;
                let kv = key_values(l, 2, &["m", "u"])?;
                let m = lookup(&inst.morphisms, "morphism", required(l, &kv, "m")?, n)?.clone();
                let u = lookup(&inst.morphisms, "morphism", required(l, &kv, "u")?, n)?.clone();
                let a = Algebra::new(m.cod().clone().with_label(name), m, u).map_err(te)?;
                inst.algebras.insert(name.to_string(), a);
            }
            "coalgebra" => {
                let name = name_arg(l)?;
                fresh(&inst.coalgebras, "coalgebra", name, n)?;
                let kv = key_values(l, 2, &["cm", "cu"])?;
                let d = lookup(&inst.morphisms, "morphism", required(l, &kv, "cm")?, n)?.clone();
                let e = lookup(&inst.morphisms, "morphism", required(l, &kv, "cu")?, n)?.clone();
                let c = Coalgebra::new(d.dom().clone().with_label(name), d, e).map_err(te)?;
                inst.coalgebras.insert(name.to_string(), c);
            }
            "hopf" => {
                let name = name_arg(l)?;
                fresh(&inst.hopfs, "Hopf algebra", name, n)?;
                let kv = key_values(l, 2, &["m", "u", "cm", "cu", "S"])?;
                let get = |k: &str| -> Result<Morphism<F>, InstanceError> {
                    Ok(lookup(&inst.morphisms, "morphism", required(l, &kv, k)?, n)?.clone())
                };
                let (m, u, d, e, s) = (get("m")?, get("u")?, get("cm")?, get("cu")?, get("S")?);
                let carrier = m.cod().clone().with_label(name);
                let alg = Algebra::new(carrier.clone(), m, u).map_err(te)?;
                let co = Coalgebra::new(carrier, d, e).map_err(te)?;
                let h = HopfAlgebra::new(alg, co, s).map_err(te)?;
                inst.hopfs.insert(name.to_string(), h);
            }
            "comodule_algebra" => {
                let name = name_arg(l)?;
                fresh(&inst.comodule_algebras, "comodule algebra", name, n)?;
                let kv = key_values(l, 2, &["algebra", "hopf", "coaction"])?;
                let algebra = lookup(&inst.algebras, "algebra", required(l, &kv, "algebra")?, n)?.clone();
                let hopf = lookup(&inst.hopfs, "Hopf algebra", required(l, &kv, "hopf")?, n)?.clone();
                let coaction = lookup(&inst.morphisms, "morphism", required(l, &kv, "coaction")?, n)?.clone();
                let want = algebra.carrier.tensor(hopf.carrier()).map_err(te)?;
                if coaction.dom() != &algebra.carrier || coaction.cod() != &want {
                    return err(n, format!("coaction must have type {} → {}", algebra.carrier.describe(), want.describe()));
                }
                let coaction = coaction.retype(&algebra.carrier, &want).map_err(te)?;
                inst.comodule_algebras.insert(name.to_string(), ComoduleAlgebra { algebra, hopf, coaction });
            }
            "module_coalgebra" => {
                let name = name_arg(l)?;
                fresh(&inst.module_coalgebras, "module coalgebra", name, n)?;
                let kv = key_values(l, 2, &["coalgebra", "hopf", "action"])?;
                let coalgebra = lookup(&inst.coalgebras, "coalgebra", required(l, &kv, "coalgebra")?, n)?.clone();
                let hopf = lookup(&inst.hopfs, "Hopf algebra", required(l, &kv, "hopf")?, n)?.clone();
                let action = lookup(&inst.morphisms, "morphism", required(l, &kv, "action")?, n)?.clone();
                let want = coalgebra.carrier.tensor(hopf.carrier()).map_err(te)?;
                if action.dom() != &want || action.cod() != &coalgebra.carrier {
                    return err(n, format!("action must have type {} → {}", want.describe(), coalgebra.carrier.describe()));
                }
                let action = action.retype(&want, &coalgebra.carrier).map_err(te)?;
                inst.module_coalgebras.insert(name.to_string(), ModuleCoalgebra { coalgebra, hopf, action });
            }
            "bundle" => {
                if inst.bundle.is_some() {
                    return err(n, "only one bundle per instance");
                }
                let kv = key_values(l, 1, &["total", "base", "pi"])?;
                let total = required(l, &kv, "total")?;
                let base_pi = match (kv.get("base"), kv.get("pi")) {
                    (Some(b), Some(p)) => Some((*b, lookup(&inst.morphisms, "morphism", p, n)?.clone())),
                    (None, None) => None,
                    _ => return err(n, "give both `base=` and `pi=`, or neither"),
                };
                let fail = |e: hgl_core::Error| InstanceError { line: n, message: e.to_string() };
                let bundle = if let Some(x) = inst.comodule_algebras.get(total) {
                    Bundle::Algebra(match base_pi {
                        Some((b, pi)) => {
                            let base = lookup(&inst.algebras, "algebra", b, n)?.clone();
                            let pi = pi.retype(&base.carrier, x.p()).map_err(te)?;
                            AlgebraBundle::new(x.clone(), base, pi).map_err(fail)?
                        }
                        None => AlgebraBundle::over_coinvariants(x.clone()).map_err(fail)?,
                    })
                } else if let Some(x) = inst.module_coalgebras.get(total) {
                    Bundle::Comonoid(match base_pi {
                        Some((b, pi)) => {
                            let base = lookup(&inst.coalgebras, "coalgebra", b, n)?.clone();
                            let pi = pi.retype(x.p(), &base.carrier).map_err(te)?;
                            CoalgebraBundle::new(x.clone(), base, pi).map_err(fail)?
                        }
                        None => CoalgebraBundle::over_invariants(x.clone()).map_err(fail)?,
                    })
                } else {
                    return err(n, format!("`{total}` is neither a comodule algebra nor a module coalgebra"));
                };
                inst.bundle = Some(bundle);
            }
            "module" => {
                let name = name_arg(l)?;
                fresh(&inst.modules, "module", name, n)?;
                let kv = key_values(l, 2, &["action"])?;
                let action = lookup(&inst.morphisms, "morphism", required(l, &kv, "action")?, n)?.clone();
                let carrier = action.cod().clone().with_label(name);
                inst.modules.insert(name.to_string(), (n, RightModule { carrier, action }));
            }
            "field" | "grading" => return err(n, format!("`{}` must come first", l.words[0])),
            "end" => return err(n, "`end` without a morphism"),
            w => return err(n, format!("unknown directive `{w}`")),
        }
    }
    Ok(inst)
}

fn object<F: Field>(inst: &Instance<F>, text: &str, line: usize) -> Result<GradedSpace<F>, InstanceError> {
    let mut acc = GradedSpace::unit(inst.grading.clone());
    let mut labels = Vec::new();
    for part in text.split('*').map(str::trim) {
        if part == "1" {
            continue;
        }
        let v = lookup(&inst.spaces, "space", part, line)?;
        acc = acc.tensor(v).map_err(|e| InstanceError { line, message: e.to_string() })?;
        labels.push(part);
    }
    Ok(if labels.is_empty() { acc } else { acc.with_label(labels.join("⊗")) })
}

// --- export ---------------------------------------------------------------------

/// Writes instances whose spaces are named by role.
pub struct Writer<F: Field> {
    out: String,
    _field: std::marker::PhantomData<F>,
}

impl<F: Field> Writer<F> {
    pub fn new(grading: &Arc<Grading<F>>, field: &str, comment: &str) -> Self {
        let mut out = String::new();
        for c in comment.lines() {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(out, "field {field}");
        match grading.kind() {
            GradingKind::Trivial => {
                let _ = writeln!(out, "grading trivial");
            }
            GradingKind::Cyclic(n) => {
                let row: Vec<String> = grading.row().iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "grading cyclic {n} row {}", row.join(" "));
            }
        }
        Writer { out, _field: std::marker::PhantomData }
    }

    pub fn space(&mut self, name: &str, v: &GradedSpace<F>) {
        let _ = write!(self.out, "\nspace {name} dim {}", v.dim());
        if v.degrees().iter().any(|&d| d != 0) {
            let ds: Vec<String> = v.degrees().iter().map(|d| d.to_string()).collect();
            let _ = write!(self.out, " degrees {}", ds.join(" "));
        }
        self.out.push('\n');
    }

    pub fn morphism(&mut self, name: &str, dom: &str, cod: &str, f: &Morphism<F>) {
        let _ = writeln!(self.out, "morphism {name} : {dom} -> {cod}");
        for (i, j, v) in f.matrix().entries() {
            let _ = writeln!(self.out, "  {i} {j} {v}");
        }
        self.out.push_str("end\n");
    }

    pub fn line(&mut self, s: &str) {
        self.out.push_str(s);
        self.out.push('\n');
    }

    pub fn hopf(&mut self, name: &str, h: &HopfAlgebra<F>) {
        self.space(name, h.carrier());
        let hh = format!("{name}*{name}");
        self.morphism(&format!("m{name}"), &hh, name, h.m());
        self.morphism(&format!("u{name}"), "1", name, h.u());
        self.morphism(&format!("cm{name}"), name, &hh, h.delta());
        self.morphism(&format!("cu{name}"), name, "1", h.eps());
        self.morphism(&format!("S{name}"), name, name, &h.antipode);
        self.line(&format!("hopf {name} m=m{name} u=u{name} cm=cm{name} cu=cu{name} S=S{name}"));
    }

    pub fn algebra(&mut self, name: &str, a: &Algebra<F>) {
        self.space(name, &a.carrier);
        self.morphism(&format!("m{name}"), &format!("{name}*{name}"), name, &a.m);
        self.morphism(&format!("u{name}"), "1", name, &a.u);
        self.line(&format!("algebra {name} m=m{name} u=u{name}"));
    }

    pub fn coalgebra(&mut self, name: &str, c: &Coalgebra<F>) {
        self.space(name, &c.carrier);
        self.morphism(&format!("cm{name}"), name, &format!("{name}*{name}"), &c.delta);
        self.morphism(&format!("cu{name}"), name, "1", &c.eps);
        self.line(&format!("coalgebra {name} cm=cm{name} cu=cu{name}"));
    }

    /// `H`, `P`, `B` and `pi`, on whichever side the bundle lives.
    pub fn bundle(&mut self, b: &Bundle<F>) {
        self.hopf("H", b.hopf());
        match b {
            Bundle::Algebra(x) => {
                self.algebra("P", x.p());
                self.morphism("rhoP", "P", "P*H", x.rho());
                self.line("comodule_algebra P algebra=P hopf=H coaction=rhoP");
                self.algebra("B", &x.base);
                self.morphism("pi", "B", "P", &x.pi);
            }
            Bundle::Comonoid(x) => {
                self.coalgebra("P", x.p());
                self.morphism("actP", "P*H", "P", x.act());
                self.line("module_coalgebra P coalgebra=P hopf=H action=actP");
                self.coalgebra("B", &x.base);
                self.morphism("pi", "P", "B", &x.pi);
            }
        }
        self.line("\nbundle total=P base=B pi=pi");
    }

    pub fn module(&mut self, name: &str, base: &str, m: &RightModule<F>) {
        self.space(name, &m.carrier);
        self.morphism(&format!("act{name}"), &format!("{name}*{base}"), name, &m.action);
        self.line(&format!("module {name} action=act{name}"));
    }

    pub fn finish(self) -> String {
        self.out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hgl_core::catalog::{q_z2, trivial_bundle};

    #[test]
    fn round_trip_through_text() {
        let b = Bundle::Algebra(trivial_bundle(&q_z2()));
        let mut w = Writer::new(b.hopf().carrier().grading(), "rational", "trivial");
        w.bundle(&b);
        let text = w.finish();
        let AnyInstance::Rational(inst) = parse_instance(&text).unwrap() else { panic!("field") };
        let back = inst.bundle.unwrap();
        assert_eq!(back.as_algebra().rho().matrix(), b.as_algebra().rho().matrix());
        assert!(back.check_principal().passed());
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse_instance("field rational\nspace H dim 2\nmorphism f : H -> K\nend\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_instance("field prime 8\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_instance("space H dim 1\nmorphism f : H -> H\n 0 0 1/0\nend\n").unwrap_err();
        assert_eq!(e.line, 3);
    }
}
