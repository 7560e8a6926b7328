//! Algebras, coalgebras and Hopf algebras given by structure constants, with
//! axiom checkers and the braided tensor-product constructions.

use crate::field::Field;
use crate::graded::{braiding, chain, tensor, tensor_all, GradedSpace, Morphism, TypeError};
use crate::limits::is_isomorphism;
use crate::report::Report;
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct Algebra<F: Field> {
    pub carrier: GradedSpace<F>,
    pub m: Morphism<F>,
    pub u: Morphism<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Coalgebra<F: Field> {
    pub carrier: GradedSpace<F>,
    pub delta: Morphism<F>,
    pub eps: Morphism<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HopfAlgebra<F: Field> {
    pub algebra: Algebra<F>,
    pub coalgebra: Coalgebra<F>,
    pub antipode: Morphism<F>,
}

fn expect_type<F: Field>(f: &Morphism<F>, dom: &GradedSpace<F>, cod: &GradedSpace<F>, what: &str) -> Result<(), TypeError> {
    if f.dom() != dom || f.cod() != cod {
        return Err(TypeError::Mismatch {
            what: what.to_string(),
            expected: format!("{} → {}", dom.describe(), cod.describe()),
            found: format!("{} → {}", f.dom().describe(), f.cod().describe()),
        });
    }
    Ok(())
}

pub(crate) fn unit_of<F: Field>(v: &GradedSpace<F>) -> GradedSpace<F> {
    GradedSpace::unit(v.grading().clone())
}

impl<F: Field> Algebra<F> {
    pub fn new(carrier: GradedSpace<F>, m: Morphism<F>, u: Morphism<F>) -> Result<Self, TypeError> {
        expect_type(&m, &carrier.tensor(&carrier)?, &carrier, "multiplication")?;
        expect_type(&u, &unit_of(&carrier), &carrier, "unit")?;
        Ok(Algebra { m: m.retype(&carrier.tensor(&carrier)?, &carrier)?, u: u.retype(&unit_of(&carrier), &carrier)?, carrier })
    }

    pub fn id(&self) -> Morphism<F> {
        Morphism::identity(&self.carrier)
    }

    /// The coalgebra whose structure maps are the transposes.
    pub fn dualize(&self) -> Coalgebra<F> {
        Coalgebra { carrier: self.carrier.dual(), delta: self.m.dualize(), eps: self.u.dualize() }
    }
}

impl<F: Field> Coalgebra<F> {
    pub fn new(carrier: GradedSpace<F>, delta: Morphism<F>, eps: Morphism<F>) -> Result<Self, TypeError> {
        expect_type(&delta, &carrier, &carrier.tensor(&carrier)?, "comultiplication")?;
        expect_type(&eps, &carrier, &unit_of(&carrier), "counit")?;
        Ok(Coalgebra {
            delta: delta.retype(&carrier, &carrier.tensor(&carrier)?)?,
            eps: eps.retype(&carrier, &unit_of(&carrier))?,
            carrier,
        })
    }

    pub fn id(&self) -> Morphism<F> {
        Morphism::identity(&self.carrier)
    }

    pub fn dualize(&self) -> Algebra<F> {
        Algebra { carrier: self.carrier.dual(), m: self.delta.dualize(), u: self.eps.dualize() }
    }
}

impl<F: Field> HopfAlgebra<F> {
    pub fn new(algebra: Algebra<F>, coalgebra: Coalgebra<F>, antipode: Morphism<F>) -> Result<Self, TypeError> {
        if algebra.carrier != coalgebra.carrier {
            return Err(TypeError::Mismatch {
                what: "Hopf algebra carriers".into(),
                expected: algebra.carrier.describe(),
                found: coalgebra.carrier.describe(),
            });
        }
        expect_type(&antipode, &algebra.carrier, &algebra.carrier, "antipode")?;
        Ok(HopfAlgebra { algebra, coalgebra, antipode })
    }

    pub fn carrier(&self) -> &GradedSpace<F> {
        &self.algebra.carrier
    }

    pub fn m(&self) -> &Morphism<F> {
        &self.algebra.m
    }

    pub fn u(&self) -> &Morphism<F> {
        &self.algebra.u
    }

    pub fn delta(&self) -> &Morphism<F> {
        &self.coalgebra.delta
    }

    pub fn eps(&self) -> &Morphism<F> {
        &self.coalgebra.eps
    }

    pub fn id(&self) -> Morphism<F> {
        Morphism::identity(self.carrier())
    }

    pub fn dim(&self) -> usize {
        self.carrier().dim()
    }

    /// The dual Hopf algebra: multiplication and comultiplication swap roles.
    pub fn dualize(&self) -> HopfAlgebra<F> {
        HopfAlgebra {
            algebra: self.coalgebra.dualize(),
            coalgebra: self.algebra.dualize(),
            antipode: self.antipode.dualize(),
        }
    }

    pub fn relabel(&self, label: &str) -> HopfAlgebra<F> {
        let c = self.carrier().clone().with_label(label);
        let cc = c.tensor(&c).expect("same grading");
        let one = unit_of(&c);
        let r = |f: &Morphism<F>, d: &GradedSpace<F>, e: &GradedSpace<F>| f.retype(d, e).expect("same spaces");
        HopfAlgebra {
            algebra: Algebra { m: r(self.m(), &cc, &c), u: r(self.u(), &one, &c), carrier: c.clone() },
            coalgebra: Coalgebra { delta: r(self.delta(), &c, &cc), eps: r(self.eps(), &c, &one), carrier: c.clone() },
            antipode: r(&self.antipode, &c, &c),
        }
    }
}

/// Record `lhs = rhs` as a check; the defect `lhs − rhs` is attached on
/// failure, and a typing failure counts as a failed check.
pub(crate) fn equation<F: Field>(
    report: &mut Report,
    name: &str,
    anchor: &str,
    lhs: Result<Morphism<F>, Error>,
    rhs: Result<Morphism<F>, Error>,
) -> bool {
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => match l.sub(&r) {
            Ok(d) if d.is_zero() => {
                report.check(name, anchor, true);
                true
            }
            Ok(d) => {
                let (i, j, v) = d.matrix().entries().next().map(|(i, j, v)| (i, j, v.clone())).expect("nonzero");
                report
                    .check(name, anchor, false)
                    .with("first_difference", format!("({i},{j}): {} vs {}", l.matrix().get(i, j), r.matrix().get(i, j)))
                    .with("defect_entry", v)
                    .with_morphism("defect", &d);
                false
            }
            Err(e) => {
                report.check(name, anchor, false).with("error", e);
                false
            }
        },
        (Err(e), _) | (_, Err(e)) => {
            report.check(name, anchor, false).with("error", e);
            false
        }
    }
}

pub fn check_algebra<F: Field>(a: &Algebra<F>) -> Report {
    let mut r = Report::new();
    let id = a.id();
    let anchor = "algebra axioms";
    equation(
        &mut r,
        "algebra.associativity",
        anchor,
        tensor(&a.m, &id).and_then(|x| a.m.compose(&x)).map_err(Error::from),
        tensor(&id, &a.m).and_then(|x| a.m.compose(&x)).map_err(Error::from),
    );
    equation(&mut r, "algebra.left_unit", anchor, tensor(&a.u, &id).and_then(|x| a.m.compose(&x)).map_err(Error::from), Ok(id.clone()));
    equation(&mut r, "algebra.right_unit", anchor, tensor(&id, &a.u).and_then(|x| a.m.compose(&x)).map_err(Error::from), Ok(id));
    r
}

pub fn check_coalgebra<F: Field>(c: &Coalgebra<F>) -> Report {
    let mut r = Report::new();
    let id = c.id();
    let anchor = "coalgebra axioms";
    equation(
        &mut r,
        "coalgebra.coassociativity",
        anchor,
        tensor(&c.delta, &id).and_then(|x| x.compose(&c.delta)).map_err(Error::from),
        tensor(&id, &c.delta).and_then(|x| x.compose(&c.delta)).map_err(Error::from),
    );
    equation(&mut r, "coalgebra.left_counit", anchor, tensor(&c.eps, &id).and_then(|x| x.compose(&c.delta)).map_err(Error::from), Ok(id.clone()));
    equation(&mut r, "coalgebra.right_counit", anchor, tensor(&id, &c.eps).and_then(|x| x.compose(&c.delta)).map_err(Error::from), Ok(id));
    r
}

/// A⊗B with multiplication (m_A⊗m_B)∘(id⊗τ_{B,A}⊗id) and unit u_A⊗u_B.
pub fn braided_tensor_algebra<F: Field>(a: &Algebra<F>, b: &Algebra<F>) -> Result<Algebra<F>, TypeError> {
    let carrier = a.carrier.tensor(&b.carrier)?;
    let middle = tensor_all(&[&a.id(), &braiding(&b.carrier, &a.carrier)?, &b.id()])?;
    let m = tensor(&a.m, &b.m)?.compose(&middle)?;
    let u = tensor(&a.u, &b.u)?;
    let cc = carrier.tensor(&carrier)?;
    Ok(Algebra { m: m.retype(&cc, &carrier)?, u: u.retype(&unit_of(&carrier), &carrier)?, carrier })
}

/// C⊗D with comultiplication (id⊗τ_{C,D}⊗id)∘(Δ_C⊗Δ_D) and counit ε_C⊗ε_D.
pub fn braided_tensor_coalgebra<F: Field>(c: &Coalgebra<F>, d: &Coalgebra<F>) -> Result<Coalgebra<F>, TypeError> {
    let carrier = c.carrier.tensor(&d.carrier)?;
    let middle = tensor_all(&[&c.id(), &braiding(&c.carrier, &d.carrier)?, &d.id()])?;
    let delta = middle.compose(&tensor(&c.delta, &d.delta)?)?;
    let eps = tensor(&c.eps, &d.eps)?;
    let cc = carrier.tensor(&carrier)?;
    Ok(Coalgebra { delta: delta.retype(&carrier, &cc)?, eps: eps.retype(&carrier, &unit_of(&carrier))?, carrier })
}

/// Comultiplication τ∘Δ, same counit.
pub fn opposite_coalgebra<F: Field>(c: &Coalgebra<F>) -> Result<Coalgebra<F>, TypeError> {
    let delta = braiding(&c.carrier, &c.carrier)?.compose(&c.delta)?;
    Ok(Coalgebra { carrier: c.carrier.clone(), delta, eps: c.eps.clone() })
}

pub fn check_hopf<F: Field>(h: &HopfAlgebra<F>) -> Report {
    let mut r = check_algebra(&h.algebra);
    r.checks.extend(check_coalgebra(&h.coalgebra).checks);
    let anchor = "bialgebra compatibility in the braided tensor algebra";
    let hh = braided_tensor_algebra(&h.algebra, &h.algebra).map_err(Error::from);
    let id = h.id();
    let one = Morphism::identity(&unit_of(h.carrier()));
    match hh {
        Ok(hh) => {
            equation(
                &mut r,
                "bialgebra.delta_multiplicative",
                anchor,
                h.delta().compose(h.m()).map_err(Error::from),
                tensor(h.delta(), h.delta()).and_then(|d| hh.m.compose(&d)).map_err(Error::from),
            );
            equation(&mut r, "bialgebra.delta_unital", anchor, h.delta().compose(h.u()).map_err(Error::from), Ok(hh.u.clone()));
        }
        Err(e) => {
            r.check("bialgebra.delta_multiplicative", anchor, false).with("error", e);
        }
    }
    equation(
        &mut r,
        "bialgebra.eps_multiplicative",
        anchor,
        h.eps().compose(h.m()).map_err(Error::from),
        tensor(h.eps(), h.eps()).map_err(Error::from),
    );
    equation(&mut r, "bialgebra.eps_unital", anchor, h.eps().compose(h.u()).map_err(Error::from), Ok(one));
    let s = &h.antipode;
    let ue = h.u().compose(h.eps()).map_err(Error::from);
    equation(
        &mut r,
        "antipode.left",
        "antipode law",
        chain(&[h.delta(), &tensor(s, &id).expect("same grading"), h.m()]).map_err(Error::from),
        ue.clone(),
    );
    equation(
        &mut r,
        "antipode.right",
        "antipode law",
        chain(&[h.delta(), &tensor(&id, s).expect("same grading"), h.m()]).map_err(Error::from),
        ue,
    );
    let v = is_isomorphism(s);
    let involutive = s.compose(s).map(|x| x.is_identity()).unwrap_or(false);
    r.info("antipode.bijective", "bijective antipode")
        .with("bijective", v.is_iso())
        .with("rank", v.rank)
        .with("involutive", involutive);
    r
}

/// S∘m = m∘(S⊗S)∘τ and Δ∘S = τ∘(S⊗S)∘Δ, consequences of the Hopf axioms.
pub fn check_antipode_anti_morphism<F: Field>(h: &HopfAlgebra<F>) -> Report {
    let mut r = Report::new();
    let c = h.carrier();
    let s = &h.antipode;
    let ss = tensor(s, s).expect("same grading");
    let tau = braiding(c, c).expect("same grading");
    equation(
        &mut r,
        "antipode.anti_multiplicative",
        "antipode reverses products",
        s.compose(h.m()).map_err(Error::from),
        chain(&[&tau, &ss, h.m()]).map_err(Error::from),
    );
    equation(
        &mut r,
        "antipode.anti_comultiplicative",
        "antipode reverses coproducts",
        h.delta().compose(s).map_err(Error::from),
        chain(&[h.delta(), &ss, &tau]).map_err(Error::from),
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};
    use crate::graded::Grading;
    use crate::matrix::Matrix;
    use std::sync::Arc;

    type Q = Rational;

    fn mk(dom: &GradedSpace<Q>, cod: &GradedSpace<Q>, rows: &[&[i64]]) -> Morphism<Q> {
        Morphism::new(dom.clone(), cod.clone(), Matrix::from_i64_rows(rows)).unwrap()
    }

    /// ℚ[g]/(g²−1) typed in by hand, basis {1, g}.
    fn z2_algebra() -> Algebra<Q> {
        let h = GradedSpace::plain("H", 2, Arc::new(Grading::trivial()));
        let hh = h.tensor(&h).unwrap();
        let one = unit_of(&h);
        // 1·1=1, 1·g=g, g·1=g, g·g=1
        let m = mk(&hh, &h, &[&[1, 0, 0, 1], &[0, 1, 1, 0]]);
        let u = mk(&one, &h, &[&[1], &[0]]);
        Algebra::new(h, m, u).unwrap()
    }

    fn z2_hopf() -> HopfAlgebra<Q> {
        let a = z2_algebra();
        let h = a.carrier.clone();
        let hh = h.tensor(&h).unwrap();
        let one = unit_of(&h);
        let delta = mk(&h, &hh, &[&[1, 0], &[0, 0], &[0, 0], &[0, 1]]);
        let eps = mk(&h, &one, &[&[1, 1]]);
        // S(g) = g⁻¹ = g
        let s = Morphism::identity(&h);
        HopfAlgebra::new(a, Coalgebra::new(h, delta, eps).unwrap(), s).unwrap()
    }

    #[test]
    fn group_algebra_of_z2_is_hopf() {
        let h = z2_hopf();
        let r = check_hopf(&h);
        assert!(r.passed(), "{}", r.render_text());
        assert_eq!(r.get("antipode.bijective").unwrap().get("involutive"), Some("true"));
        assert!(check_antipode_anti_morphism(&h).passed());
    }

    #[test]
    fn unit_algebra_and_broken_unit() {
        let g = Arc::new(Grading::<Q>::trivial());
        let one = GradedSpace::unit(g);
        let a = Algebra::new(one.clone(), Morphism::identity(&one), Morphism::identity(&one)).unwrap();
        assert!(check_algebra(&a).passed());
        let bad = Algebra::new(one.clone(), Morphism::identity(&one), Morphism::identity(&one).scale(&Q::integer(2))).unwrap();
        let r = check_algebra(&bad);
        assert!(!r.get("algebra.left_unit").unwrap().passed());
        assert_eq!(r.get("algebra.left_unit").unwrap().get("defect_entry"), Some("1"));
        assert!(r.get("algebra.associativity").unwrap().passed());
    }

    #[test]
    fn dual_of_group_algebra_is_a_coalgebra() {
        let a = z2_algebra();
        let c = a.dualize();
        assert!(check_coalgebra(&c).passed());
        // transposed multiplication table: Δ(δ_1) = δ_1⊗δ_1 + δ_g⊗δ_g
        assert_eq!(c.delta.matrix(), &Matrix::from_i64_rows(&[&[1, 0], &[0, 1], &[0, 1], &[1, 0]]));
        let one = unit_of(&c.carrier);
        let perturbed = Coalgebra::new(c.carrier.clone(), c.delta.clone(), mk(&c.carrier, &one, &[&[1, 1]])).unwrap();
        assert!(!check_coalgebra(&perturbed).get("coalgebra.left_counit").unwrap().passed());
        let unit_coalg = Coalgebra::new(one.clone(), Morphism::identity(&one), Morphism::identity(&one)).unwrap();
        assert!(check_coalgebra(&unit_coalg).passed());
    }

    #[test]
    fn dualize_swaps_axiom_verdicts() {
        let good = z2_algebra();
        let one = unit_of(&good.carrier);
        let bad = Algebra::new(good.carrier.clone(), good.m.clone(), mk(&one, &good.carrier, &[&[1], &[1]])).unwrap();
        for a in [good, bad] {
            let alg: Vec<_> = check_algebra(&a).checks.iter().map(|c| c.verdict).collect();
            let coalg: Vec<_> = check_coalgebra(&a.dualize()).checks.iter().map(|c| c.verdict).collect();
            assert_eq!(alg, coalg);
        }
    }

    #[test]
    fn zero_antipode_fails() {
        // on ℤ₂ the identity is the antipode, so the forced failure uses S = 0
        let mut h = z2_hopf();
        assert!(check_hopf(&h).passed());
        h.antipode = Morphism::zero(h.carrier(), h.carrier());
        let r = check_hopf(&h);
        assert!(!r.get("antipode.left").unwrap().passed());
        assert!(r.get("antipode.left").unwrap().get("defect").is_some());
    }

    /// Λ(x) = ℚ[x]/(x²), x odd, in super vector spaces.
    fn exterior() -> Algebra<Q> {
        let g = Arc::new(Grading::cyclic(2, Q::integer(-1)).unwrap());
        let a = GradedSpace::new("Λ", vec![0, 1], g).unwrap();
        let aa = a.tensor(&a).unwrap();
        let m = mk(&aa, &a, &[&[1, 0, 0, 0], &[0, 1, 1, 0]]);
        let u = mk(&unit_of(&a), &a, &[&[1], &[0]]);
        Algebra::new(a, m, u).unwrap()
    }

    #[test]
    fn super_tensor_algebra_sign() {
        let l = exterior();
        let t = braided_tensor_algebra(&l, &l).unwrap();
        assert!(check_algebra(&t).passed());
        // basis of Λ⊗Λ: 1⊗1, 1⊗x, x⊗1, x⊗x; (1⊗x)·(x⊗1) = −x⊗x
        let n = 4;
        let col = |i: usize, j: usize| i * n + j;
        assert_eq!(t.m.matrix().get(3, col(1, 2)), Q::integer(-1));
        assert_eq!(t.m.matrix().get(3, col(2, 1)), Q::integer(1));
        let unit = Algebra::new(unit_of(&l.carrier), Morphism::identity(&unit_of(&l.carrier)), Morphism::identity(&unit_of(&l.carrier))).unwrap();
        assert_eq!(braided_tensor_algebra(&l, &unit).unwrap(), l);
    }

    #[test]
    fn super_tensor_coalgebra_is_dual() {
        let l = exterior();
        let c = l.dualize();
        let tc = braided_tensor_coalgebra(&c, &c).unwrap();
        assert!(check_coalgebra(&tc).passed());
        assert_eq!(tc.delta, braided_tensor_algebra(&l, &l).unwrap().m.dualize());
    }

    #[test]
    fn opposite_of_cocommutative_is_itself() {
        let h = z2_hopf();
        let op = opposite_coalgebra(&h.coalgebra).unwrap();
        assert_eq!(op, h.coalgebra);
        assert_eq!(opposite_coalgebra(&op).unwrap(), h.coalgebra);
    }

    #[test]
    fn prime_field_group_algebra() {
        // 𝔽₇ℤ₂ with trivial grading bound to the field
        let ctx = Fp::new(1, 7);
        let g = Arc::new(Grading::trivial_over(&ctx));
        let h = GradedSpace::plain("H", 2, g);
        let m = Morphism::from_triplets(
            h.tensor(&h).unwrap(),
            h.clone(),
            vec![(0, 0, ctx), (1, 1, ctx), (1, 2, ctx), (0, 3, ctx)],
        )
        .unwrap();
        let u = Morphism::from_triplets(unit_of(&h), h.clone(), vec![(0, 0, ctx)]).unwrap();
        assert!(check_algebra(&Algebra::new(h, m, u).unwrap()).passed());
    }
}
