//! The monoid `P□_B P` and the quantum category attached to a comonoid-side
//! bundle: objects `B′ = P^H`, morphisms `G = (P⊗P)^H`.

use crate::bundle::{diagonal_action, identity, CoalgebraBundle};
use crate::field::Field;
use crate::graded::{tensor, tensor_all, GradedSpace, Morphism};
use crate::hopf::{braided_tensor_coalgebra, check_coalgebra, opposite_coalgebra, unit_of, Coalgebra};
use crate::limits::{coequaliser, factor_through_coequaliser, factor_through_equaliser, kernel_of, Coequaliser, Equaliser, FactorizationError};
use crate::matrix::Matrix;
use crate::report::Report;
use crate::Error;

/// The common kernel of several maps out of one space.
pub fn joint_equaliser<F: Field>(pairs: &[(Morphism<F>, Morphism<F>)], label: &str) -> Result<Equaliser<F>, Error> {
    let dom = pairs.first().map(|(f, _)| f.dom().clone()).ok_or_else(|| Error::Precondition("no maps".into()))?;
    let mut degrees = Vec::new();
    let mut stacked = Matrix::zeros(0, dom.dim());
    for (f, g) in pairs {
        let d = f.sub(&g.retype(f.dom(), f.cod())?)?;
        degrees.extend_from_slice(d.cod().degrees());
        stacked = stacked.vstack(d.matrix());
    }
    let sum = GradedSpace::new("⊕", degrees, dom.grading().clone())?;
    let d = Morphism::new(dom, sum, stacked)?;
    Ok(kernel_of(&d, label))
}

/// Solve `x∘q = c`; the flag says whether `q` is surjective (so `x` is unique).
pub fn factor_through<F: Field>(c: &Morphism<F>, q: &Morphism<F>, what: &str) -> Result<(Morphism<F>, bool), Error> {
    let xt = q.matrix().transpose().solve(&c.matrix().transpose()).ok_or_else(|| FactorizationError {
        what: what.to_string(),
        through: format!("the map onto {}", q.cod().label()),
        detail: "composite does not vanish on the kernel".into(),
    })?;
    let x = Morphism::new(q.cod().clone(), c.cod().clone(), xt.transpose())?;
    Ok((x, q.matrix().rank() == q.cod().dim()))
}

/// `P□_B P` with multiplication induced by `id⊗ε⊗id` on `P□_B P□_B P`
/// and unit induced by `Δ_P`.
#[derive(Clone, Debug)]
pub struct CotensorMonoid<F: Field> {
    pub carrier: Equaliser<F>,
    pub triple: Equaliser<F>,
    pub mult: Morphism<F>,
    pub unit: Morphism<F>,
}

/// `P^{□n}` inside `P^{⊗n}`.
fn cotensor_power<F: Field>(b: &CoalgebraBundle<F>, n: usize) -> Result<Equaliser<F>, Error> {
    let right = b.p_right()?.coaction;
    let left = b.p_left()?.coaction;
    let id = b.p().id();
    let mut pairs = Vec::new();
    for k in 0..n.saturating_sub(1) {
        let mut l: Vec<&Morphism<F>> = vec![&id; n];
        let mut r: Vec<&Morphism<F>> = vec![&id; n];
        l[k] = &right;
        r[k + 1] = &left;
        pairs.push((tensor_all(&l)?, tensor_all(&r)?));
    }
    let label = vec!["P"; n].join("□");
    if pairs.is_empty() {
        let p = &b.p().carrier;
        return Ok(Equaliser { space: p.clone(), inclusion: Morphism::identity(p) });
    }
    let e = joint_equaliser(&pairs, &label)?;
    Ok(e)
}

/// `id^{k}⊗f⊗id^{rest}` on `P^{⊗n}`.
fn at_slot<F: Field>(b: &CoalgebraBundle<F>, n: usize, k: usize, f: &Morphism<F>) -> Result<Morphism<F>, Error> {
    let id = b.p().id();
    let maps: Vec<&Morphism<F>> = (0..n).map(|i| if i == k { f } else { &id }).collect();
    Ok(tensor_all(&maps)?)
}

pub fn cotensor_monoid<F: Field>(b: &CoalgebraBundle<F>) -> Result<CotensorMonoid<F>, Error> {
    let two = cotensor_power(b, 2)?;
    let three = cotensor_power(b, 3)?;
    let contract = at_slot(b, 3, 1, &b.p().eps)?;
    let mult = factor_through_equaliser(&contract.compose(&three.inclusion)?, &two.inclusion)?;
    let unit = factor_through_equaliser(&b.p().delta, &two.inclusion)?;
    Ok(CotensorMonoid { carrier: two, triple: three, mult, unit })
}

pub fn check_cotensor_monoid<F: Field>(b: &CoalgebraBundle<F>, m: &CotensorMonoid<F>) -> Report {
    let mut r = Report::new();
    let anchor = "P□_B P is a monoid";
    identity(&mut r, "monoid.associativity", anchor, || {
        let four = cotensor_power(b, 4)?;
        let c1 = at_slot(b, 4, 1, &b.p().eps)?.compose(&four.inclusion)?;
        let c2 = at_slot(b, 4, 2, &b.p().eps)?.compose(&four.inclusion)?;
        let l = factor_through_equaliser(&c1, &m.triple.inclusion)?;
        let rr = factor_through_equaliser(&c2, &m.triple.inclusion)?;
        Ok((m.mult.compose(&l)?, m.mult.compose(&rr)?))
    });
    identity(&mut r, "monoid.left_unit", anchor, || {
        let c = at_slot(b, 2, 0, &b.p().delta)?.retype(m.carrier.inclusion.cod(), m.triple.inclusion.cod())?;
        let x = factor_through_equaliser(&c.compose(&m.carrier.inclusion)?, &m.triple.inclusion)?;
        Ok((m.mult.compose(&x)?, Morphism::identity(&m.carrier.space)))
    });
    identity(&mut r, "monoid.right_unit", anchor, || {
        let c = at_slot(b, 2, 1, &b.p().delta)?.retype(m.carrier.inclusion.cod(), m.triple.inclusion.cod())?;
        let x = factor_through_equaliser(&c.compose(&m.carrier.inclusion)?, &m.triple.inclusion)?;
        Ok((m.mult.compose(&x)?, Morphism::identity(&m.carrier.space)))
    });
    r.check("monoid.dimension", anchor, true).with("dim", m.carrier.space.dim());
    r
}

/// The data `(B′, G, s, t, m_G, u_G, Δ_G, ε_G)`.
#[derive(Clone, Debug)]
pub struct QuantumCategory<F: Field> {
    pub objects: Coalgebra<F>,
    pub objects_projection: Morphism<F>,
    pub morphisms: Coalgebra<F>,
    pub morphisms_projection: Morphism<F>,
    pub source: Morphism<F>,
    pub target: Morphism<F>,
    pub unit: Morphism<F>,
    pub composable: Equaliser<F>,
    pub composition: Morphism<F>,
    /// Whether the composable pairs are reached by `P⊗(P□_B P)⊗P`.
    pub composition_unique: bool,
}

impl<F: Field> QuantumCategory<F> {
    pub fn g(&self) -> &GradedSpace<F> {
        &self.morphisms.carrier
    }

    pub fn b(&self) -> &GradedSpace<F> {
        &self.objects.carrier
    }

    /// `ℓ = (s⊗id)Δ_G: G → B′⊗G`.
    pub fn left_coaction(&self) -> Result<Morphism<F>, Error> {
        Ok(tensor(&self.source, &Morphism::identity(self.g()))?.compose(&self.morphisms.delta)?)
    }

    /// `r = (id⊗t)Δ_G: G → G⊗B′`.
    pub fn right_coaction(&self) -> Result<Morphism<F>, Error> {
        Ok(tensor(&Morphism::identity(self.g()), &self.target)?.compose(&self.morphisms.delta)?)
    }
}

/// `G = (P⊗P)^H` with `Π_G`.
pub fn morphisms_object<F: Field>(b: &CoalgebraBundle<F>) -> Result<Coequaliser<F>, Error> {
    let act = diagonal_action(&b.total)?;
    let pp = b.p().carrier.tensor(&b.p().carrier)?;
    let trivial = tensor(&Morphism::identity(&pp), b.h().eps())?.retype(act.dom(), act.cod())?;
    let mut q = coequaliser(&act, &trivial)?;
    q.space = q.space.clone().with_label("G");
    q.projection = q.projection.retype(&pp, &q.space)?;
    Ok(q)
}

pub fn build_quantum_category<F: Field>(b: &CoalgebraBundle<F>) -> Result<QuantumCategory<F>, Error> {
    let p = b.p();
    let (objects, pb) = b.invariants_base()?.clone();
    let objects = Coalgebra { carrier: objects.carrier.clone().with_label("B′"), ..objects };
    let pb = pb.retype(&p.carrier, &objects.carrier)?;
    let objects = Coalgebra::new(
        objects.carrier.clone(),
        objects.delta.retype(&objects.carrier, &objects.carrier.tensor(&objects.carrier)?)?,
        objects.eps.retype(&objects.carrier, &unit_of(&objects.carrier))?,
    )?;
    let gq = morphisms_object(b)?;
    let pg = gq.projection.clone();
    let g = gq.space.clone();
    let pp_coalg = braided_tensor_coalgebra(p, &opposite_coalgebra(p)?)?;
    let delta_g = factor_through_coequaliser(&tensor(&pg, &pg)?.compose(&pp_coalg.delta)?, &pg)
        .map_err(|e| Error::Precondition(format!("comultiplication of G: {e}")))?;
    let eps_g = factor_through_coequaliser(&pp_coalg.eps, &pg).map_err(|e| Error::Precondition(format!("counit of G: {e}")))?;
    let morphisms = Coalgebra::new(g.clone(), delta_g.retype(&g, &g.tensor(&g)?)?, eps_g.retype(&g, &unit_of(&g))?)?;
    let src = tensor(&pb, &p.eps)?;
    let source = factor_through_coequaliser(&src.retype(pg.dom(), &objects.carrier)?, &pg)
        .map_err(|e| Error::Precondition(format!("source: {e}")))?;
    let tgt = tensor(&p.eps, &pb)?;
    let target = factor_through_coequaliser(&tgt.retype(pg.dom(), &objects.carrier)?, &pg)
        .map_err(|e| Error::Precondition(format!("target: {e}")))?;
    let unit = factor_through_coequaliser(&pg.compose(&p.delta)?, &pb).map_err(|e| Error::Precondition(format!("unit: {e}")))?;
    let mut qc = QuantumCategory {
        objects,
        objects_projection: pb,
        morphisms,
        morphisms_projection: pg.clone(),
        source,
        target,
        unit,
        composable: Equaliser { space: g.clone(), inclusion: Morphism::identity(&g) },
        composition: Morphism::identity(&g),
        composition_unique: false,
    };
    // G□_{B′}G
    let idg = Morphism::identity(&g);
    let ell = qc.left_coaction()?;
    let r = qc.right_coaction()?;
    let gg = joint_equaliser(&[(tensor(&r, &idg)?, tensor(&idg, &ell)?)], "G□G")?;
    // m_G from Π_G∘(ϱ⊗id)∘(id⊗ε⊗id⊗id)∘(id⊗can⁻¹⊗id) on P⊗(P□_B P)⊗P
    let pbp = b.cotensor_pp()?;
    let can_inv = b.can_inverse()?;
    let idp = p.id();
    let h = b.h();
    let composite = tensor_all(&[&idp, can_inv, &idp])
        .map_err(Error::from)
        .and_then(|x| Ok(tensor_all(&[&idp, &p.eps, &h.id(), &idp])?.compose(&x)?))
        .and_then(|x| Ok(tensor(b.act(), &idp)?.compose(&x)?))
        .and_then(|x| Ok(pg.compose(&x)?))?;
    let j = tensor_all(&[&idp, &pbp.inclusion, &idp])?;
    let q = tensor(&pg, &pg)?.compose(&j.retype(composite.dom(), &tensor(&pg, &pg)?.dom().clone())?)?;
    let q = factor_through_equaliser(&q, &gg.inclusion).map_err(|e| Error::Precondition(format!("composable pairs: {e}")))?;
    let (m, unique) = factor_through(&composite, &q, "composition of G")?;
    qc.composable = gg;
    qc.composition = m;
    qc.composition_unique = unique;
    Ok(qc)
}

pub fn check_quantum_category<F: Field>(b: &CoalgebraBundle<F>, qc: &QuantumCategory<F>) -> Report {
    let mut r = Report::new();
    r.check("qcat.dimensions", "objects and morphisms", true)
        .with("objects_dim", qc.b().dim())
        .with("morphisms_dim", qc.g().dim())
        .with("composable_dim", qc.composable.space.dim());
    r.check("qcat.composition_unique", "composition is induced", qc.composition_unique);
    r.absorb("qcat.morphisms.", check_coalgebra(&qc.morphisms));
    let anchor = "source and target";
    let (s, t) = (&qc.source, &qc.target);
    let bo = &qc.objects;
    for (name, f) in [("source", s), ("target", t)] {
        identity(&mut r, &format!("qcat.{name}.comultiplicative"), anchor, || {
            Ok((bo.delta.compose(f)?, tensor(f, f)?.compose(&qc.morphisms.delta)?))
        });
        identity(&mut r, &format!("qcat.{name}.counital"), anchor, || Ok((bo.eps.compose(f)?, qc.morphisms.eps.clone())));
        identity(&mut r, &format!("qcat.{name}.unit"), anchor, || Ok((f.compose(&qc.unit)?, bo.id())));
    }
    let anchor = "composition and identities";
    let idg = Morphism::identity(qc.g());
    let m = &qc.composition;
    let inc = &qc.composable.inclusion;
    identity(&mut r, "qcat.left_unit", anchor, || {
        let c = tensor(&qc.unit, &idg)?.compose(&qc.left_coaction()?)?;
        Ok((m.compose(&factor_through_equaliser(&c, inc)?)?, idg.clone()))
    });
    identity(&mut r, "qcat.right_unit", anchor, || {
        let c = tensor(&idg, &qc.unit)?.compose(&qc.right_coaction()?)?;
        Ok((m.compose(&factor_through_equaliser(&c, inc)?)?, idg.clone()))
    });
    identity(&mut r, "qcat.associativity", anchor, || {
        let ell = qc.left_coaction()?;
        let rr = qc.right_coaction()?;
        let three = joint_equaliser(
            &[
                (tensor_all(&[&rr, &idg, &idg])?, tensor_all(&[&idg, &ell, &idg])?),
                (tensor_all(&[&idg, &rr, &idg])?, tensor_all(&[&idg, &idg, &ell])?),
            ],
            "G□G□G",
        )?;
        let left_in = tensor(inc, &idg)?;
        let right_in = tensor(&idg, inc)?;
        let x = factor_through_equaliser(&three.inclusion.retype(three.inclusion.dom(), left_in.cod())?, &left_in)?;
        let y = factor_through_equaliser(&three.inclusion.retype(three.inclusion.dom(), right_in.cod())?, &right_in)?;
        let lx = factor_through_equaliser(&tensor(m, &idg)?.compose(&x)?, inc)?;
        let ry = factor_through_equaliser(&tensor(&idg, m)?.compose(&y)?, inc)?;
        Ok((m.compose(&lx)?, m.compose(&ry)?))
    });
    let _ = b;
    r
}

/// Build and verify; construction failures become failed checks.
pub fn quantum_category_report<F: Field>(b: &CoalgebraBundle<F>) -> Report {
    let mut r = Report::new();
    match cotensor_monoid(b) {
        Ok(m) => r.absorb("", check_cotensor_monoid(b, &m)),
        Err(e) => {
            r.check("monoid.construction", "P□_B P is a monoid", false).with("error", e);
        }
    }
    match build_quantum_category(b) {
        Ok(qc) => {
            r.check("qcat.construction", "quantum category", true);
            r.absorb("", check_quantum_category(b, &qc));
        }
        Err(e) => {
            r.check("qcat.construction", "quantum category", false).with("error", e);
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{degenerate_comonoid_bundle, q_z2, sweedler, trivial_comonoid_bundle};

    #[test]
    fn trivial_z2_quantum_category() {
        let b = trivial_comonoid_bundle(&q_z2());
        let r = quantum_category_report(&b);
        assert!(r.passed(), "{}", r.render_text());
        let qc = build_quantum_category(&b).unwrap();
        assert_eq!(qc.b().dim(), 1);
        assert_eq!(qc.g().dim(), 2);
        let m = cotensor_monoid(&b).unwrap();
        assert_eq!(m.carrier.space.dim(), 4);
    }

    #[test]
    fn degenerate_h_one() {
        let b = degenerate_comonoid_bundle(&q_z2().coalgebra);
        let r = quantum_category_report(&b);
        assert!(r.passed(), "{}", r.render_text());
        let qc = build_quantum_category(&b).unwrap();
        assert_eq!(qc.g().dim(), 4);
        assert_eq!(qc.b().dim(), 2);
    }

    #[test]
    fn sweedler_completes() {
        let b = trivial_comonoid_bundle(&sweedler());
        let qc = build_quantum_category(&b).unwrap();
        assert_eq!(qc.g().dim(), 4);
        let r = check_quantum_category(&b, &qc);
        assert!(r.get("qcat.morphisms.coalgebra.coassociativity").unwrap().passed());
    }
}
