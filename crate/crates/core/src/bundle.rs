//! Comodule algebras and module coalgebras, their bases, the canonical map
//! and the conditions deciding principality.
//!
//! The algebra side works with a right H-comodule algebra `P`, a base
//! algebra `B` and an algebra map `π: B → P`. The comonoid side works with a
//! right H-module coalgebra `P`, a base coalgebra `B` and a coalgebra map
//! `π: P → B`. Transposing every structure matrix turns one into the other.

use std::sync::OnceLock;

use crate::field::Field;
use crate::graded::{braiding, chain, tensor, tensor_all, GradedSpace, Morphism};
use crate::hopf::{
    braided_tensor_algebra, braided_tensor_coalgebra, check_algebra, check_coalgebra, check_hopf, equation,
    Algebra, Coalgebra, HopfAlgebra,
};
use crate::limits::{
    coequaliser, equaliser, factor_through_coequaliser, factor_through_equaliser, is_isomorphism, Coequaliser,
    Equaliser, IsoVerdict, LinearProblem, LinearSolution,
};
use crate::report::{matrix_text, Report};
use crate::Error;

/// Record an identity computed by a closure; errors count as failures.
pub(crate) fn identity<F: Field>(
    report: &mut Report,
    name: &str,
    anchor: &str,
    sides: impl FnOnce() -> Result<(Morphism<F>, Morphism<F>), Error>,
) -> bool {
    match sides() {
        Ok((l, r)) => equation(report, name, anchor, Ok(l), Ok(r)),
        Err(e) => {
            report.check(name, anchor, false).with("error", e);
            false
        }
    }
}

// --- modules and comodules over a base -----------------------------------

/// `M` with a right action `M⊗B → M`.
#[derive(Clone, Debug)]
pub struct RightModule<F: Field> {
    pub carrier: GradedSpace<F>,
    pub action: Morphism<F>,
}

/// `N` with a left action `B⊗N → N`.
#[derive(Clone, Debug)]
pub struct LeftModule<F: Field> {
    pub carrier: GradedSpace<F>,
    pub action: Morphism<F>,
}

/// `M` with a right coaction `M → M⊗B`.
#[derive(Clone, Debug)]
pub struct RightComodule<F: Field> {
    pub carrier: GradedSpace<F>,
    pub coaction: Morphism<F>,
}

/// `N` with a left coaction `N → B⊗N`.
#[derive(Clone, Debug)]
pub struct LeftComodule<F: Field> {
    pub carrier: GradedSpace<F>,
    pub coaction: Morphism<F>,
}

pub fn check_right_module<F: Field>(m: &RightModule<F>, b: &Algebra<F>) -> Report {
    let mut r = Report::new();
    let id = Morphism::identity(&m.carrier);
    identity(&mut r, "module.associativity", "right module axioms", || {
        Ok((
            m.action.compose(&tensor(&m.action, &b.id())?)?,
            m.action.compose(&tensor(&id, &b.m)?)?,
        ))
    });
    identity(&mut r, "module.unit", "right module axioms", || Ok((m.action.compose(&tensor(&id, &b.u)?)?, id.clone())));
    r
}

pub fn check_right_comodule<F: Field>(m: &RightComodule<F>, c: &Coalgebra<F>) -> Report {
    let mut r = Report::new();
    let id = Morphism::identity(&m.carrier);
    identity(&mut r, "comodule.coassociativity", "right comodule axioms", || {
        Ok((
            tensor(&m.coaction, &c.id())?.compose(&m.coaction)?,
            tensor(&id, &c.delta)?.compose(&m.coaction)?,
        ))
    });
    identity(&mut r, "comodule.counit", "right comodule axioms", || {
        Ok((tensor(&id, &c.eps)?.compose(&m.coaction)?, id.clone()))
    });
    r
}

/// `M ⊗_B N`: the coequaliser of `act_M⊗id` and `id⊗act_N` on `M⊗B⊗N`.
pub fn tensor_over<F: Field>(m: &RightModule<F>, n: &LeftModule<F>, b: &GradedSpace<F>) -> Result<Coequaliser<F>, Error> {
    let idm = Morphism::identity(&m.carrier);
    let idn = Morphism::identity(&n.carrier);
    let left = tensor(&m.action, &idn)?;
    let right = tensor(&idm, &n.action)?;
    let mbn = GradedSpace::tensor_all(&[&m.carrier, b, &n.carrier])?;
    let left = left.retype(&mbn, left.cod())?;
    let right = right.retype(&mbn, right.cod())?;
    let mut q = coequaliser(&left, &right)?;
    let label = format!("{}⊗_B {}", m.carrier.label(), n.carrier.label());
    q.space = q.space.with_label(label.clone());
    q.projection = q.projection.retype(q.projection.dom(), &q.space)?;
    Ok(q)
}

/// `M □_B N`: the equaliser of `λ_M⊗id` and `id⊗λ_N` into `M⊗B⊗N`.
pub fn cotensor<F: Field>(m: &RightComodule<F>, n: &LeftComodule<F>) -> Result<Equaliser<F>, Error> {
    let idm = Morphism::identity(&m.carrier);
    let idn = Morphism::identity(&n.carrier);
    let left = tensor(&m.coaction, &idn)?;
    let right = tensor(&idm, &n.coaction)?;
    let right = right.retype(right.dom(), left.cod())?;
    let mut e = equaliser(&left, &right)?;
    let label = format!("{}□_B {}", m.carrier.label(), n.carrier.label());
    e.space = e.space.with_label(label);
    e.inclusion = e.inclusion.retype(&e.space, e.inclusion.cod())?;
    Ok(e)
}

// --- total spaces -----------------------------------------------------------

/// Right H-comodule algebra `(P, ρ: P → P⊗H)`.
#[derive(Clone, Debug)]
pub struct ComoduleAlgebra<F: Field> {
    pub algebra: Algebra<F>,
    pub hopf: HopfAlgebra<F>,
    pub coaction: Morphism<F>,
}

/// Right H-module coalgebra `(P, ϱ: P⊗H → P)`.
#[derive(Clone, Debug)]
pub struct ModuleCoalgebra<F: Field> {
    pub coalgebra: Coalgebra<F>,
    pub hopf: HopfAlgebra<F>,
    pub action: Morphism<F>,
}

impl<F: Field> ComoduleAlgebra<F> {
    pub fn p(&self) -> &GradedSpace<F> {
        &self.algebra.carrier
    }

    pub fn dualize(&self) -> ModuleCoalgebra<F> {
        ModuleCoalgebra { coalgebra: self.algebra.dualize(), hopf: self.hopf.dualize(), action: self.coaction.dualize() }
    }
}

impl<F: Field> ModuleCoalgebra<F> {
    pub fn p(&self) -> &GradedSpace<F> {
        &self.coalgebra.carrier
    }

    pub fn dualize(&self) -> ComoduleAlgebra<F> {
        ComoduleAlgebra { algebra: self.coalgebra.dualize(), hopf: self.hopf.dualize(), coaction: self.action.dualize() }
    }
}

pub fn check_comodule_algebra<F: Field>(x: &ComoduleAlgebra<F>) -> Report {
    let mut r = Report::new();
    let (p, h, rho) = (&x.algebra, &x.hopf, &x.coaction);
    let anchor = "right comodule algebra";
    identity(&mut r, "coaction.coassociativity", anchor, || {
        Ok((tensor(rho, &h.id())?.compose(rho)?, tensor(&p.id(), h.delta())?.compose(rho)?))
    });
    identity(&mut r, "coaction.counit", anchor, || Ok((tensor(&p.id(), h.eps())?.compose(rho)?, p.id())));
    identity(&mut r, "coaction.multiplicative", anchor, || {
        let ph = braided_tensor_algebra(p, &h.algebra)?;
        Ok((rho.compose(&p.m)?, ph.m.compose(&tensor(rho, rho)?)?))
    });
    identity(&mut r, "coaction.unital", anchor, || Ok((rho.compose(&p.u)?, tensor(&p.u, h.u())?)));
    r
}

pub fn check_module_coalgebra<F: Field>(x: &ModuleCoalgebra<F>) -> Report {
    let mut r = Report::new();
    let (p, h, act) = (&x.coalgebra, &x.hopf, &x.action);
    let anchor = "right module coalgebra";
    identity(&mut r, "action.associativity", anchor, || {
        Ok((act.compose(&tensor(act, &h.id())?)?, act.compose(&tensor(&p.id(), h.m())?)?))
    });
    identity(&mut r, "action.unit", anchor, || Ok((act.compose(&tensor(&p.id(), h.u())?)?, p.id())));
    identity(&mut r, "action.comultiplicative", anchor, || {
        let ph = braided_tensor_coalgebra(p, &h.coalgebra)?;
        Ok((p.delta.compose(act)?, tensor(act, act)?.compose(&ph.delta)?))
    });
    identity(&mut r, "action.counital", anchor, || Ok((p.eps.compose(act)?, tensor(&p.eps, h.eps())?)));
    r
}

/// `P^{coH}`: the equaliser of `ρ` and `id⊗u_H`, with the induced algebra.
pub fn coinvariants<F: Field>(x: &ComoduleAlgebra<F>) -> Result<(Algebra<F>, Morphism<F>), Error> {
    let p = &x.algebra;
    let trivial = tensor(&p.id(), x.hopf.u())?;
    let trivial = trivial.retype(&p.carrier, x.coaction.cod())?;
    let e = equaliser(&x.coaction, &trivial)?;
    let b = e.space.clone().with_label("B");
    let iota = e.inclusion.retype(&b, &p.carrier)?;
    let m = factor_through_equaliser(&p.m.compose(&tensor(&iota, &iota)?)?, &iota)?;
    let u = factor_through_equaliser(&p.u, &iota)?;
    Ok((Algebra::new(b, m, u)?, iota))
}

/// `P/H`: the coequaliser of `id⊗ε_H` and `ϱ`, with the induced coalgebra.
pub fn invariants_base<F: Field>(x: &ModuleCoalgebra<F>) -> Result<(Coalgebra<F>, Morphism<F>), Error> {
    let p = &x.coalgebra;
    let trivial = tensor(&p.id(), x.hopf.eps())?;
    let trivial = trivial.retype(x.action.dom(), &p.carrier)?;
    let q = coequaliser(&trivial, &x.action)?;
    let b = q.space.clone().with_label("B");
    let proj = q.projection.retype(&p.carrier, &b)?;
    let delta = factor_through_coequaliser(&tensor(&proj, &proj)?.compose(&p.delta)?, &proj)?;
    let eps = factor_through_coequaliser(&p.eps, &proj)?;
    Ok((Coalgebra::new(b, delta, eps)?, proj))
}

// --- bundles -------------------------------------------------------------------

fn cached<'a, T>(cell: &'a OnceLock<Result<T, Error>>, f: impl FnOnce() -> Result<T, Error>) -> Result<&'a T, Error> {
    cell.get_or_init(f).as_ref().map_err(Clone::clone)
}

/// Comodule algebra `P` over `H` with base algebra `B` and `π: B → P`.
#[derive(Clone, Debug)]
pub struct AlgebraBundle<F: Field> {
    pub total: ComoduleAlgebra<F>,
    pub base: Algebra<F>,
    pub pi: Morphism<F>,
    cache: AlgebraCache<F>,
}

#[derive(Clone, Debug)]
struct AlgebraCache<F: Field> {
    coinvariants: OnceLock<Result<(Algebra<F>, Morphism<F>), Error>>,
    tensor_pp: OnceLock<Result<Coequaliser<F>, Error>>,
    can: OnceLock<Result<Morphism<F>, Error>>,
    can_verdict: OnceLock<Result<IsoVerdict<F>, Error>>,
}

/// Module coalgebra `P` over `H` with base coalgebra `B` and `π: P → B`.
#[derive(Clone, Debug)]
pub struct CoalgebraBundle<F: Field> {
    pub total: ModuleCoalgebra<F>,
    pub base: Coalgebra<F>,
    pub pi: Morphism<F>,
    cache: CoalgebraCache<F>,
}

#[derive(Clone, Debug)]
struct CoalgebraCache<F: Field> {
    base: OnceLock<Result<(Coalgebra<F>, Morphism<F>), Error>>,
    cotensor_pp: OnceLock<Result<Equaliser<F>, Error>>,
    can: OnceLock<Result<Morphism<F>, Error>>,
    can_verdict: OnceLock<Result<IsoVerdict<F>, Error>>,
}

impl<F: Field> AlgebraBundle<F> {
    pub fn new(total: ComoduleAlgebra<F>, base: Algebra<F>, pi: Morphism<F>) -> Result<Self, Error> {
        if pi.dom() != &base.carrier || pi.cod() != total.p() {
            return Err(Error::Precondition(format!(
                "π must map the base {} to the total space {}",
                base.carrier.describe(),
                total.p().describe()
            )));
        }
        let pi = pi.retype(&base.carrier, total.p())?;
        Ok(AlgebraBundle { total, base, pi, cache: AlgebraCache { coinvariants: OnceLock::new(), tensor_pp: OnceLock::new(), can: OnceLock::new(), can_verdict: OnceLock::new() } })
    }

    /// The instance whose base is the computed coinvariant subalgebra.
    pub fn over_coinvariants(total: ComoduleAlgebra<F>) -> Result<Self, Error> {
        let (b, iota) = coinvariants(&total)?;
        Self::new(total, b, iota)
    }

    pub fn p(&self) -> &Algebra<F> {
        &self.total.algebra
    }

    pub fn h(&self) -> &HopfAlgebra<F> {
        &self.total.hopf
    }

    pub fn rho(&self) -> &Morphism<F> {
        &self.total.coaction
    }

    /// `P` as a right `B`-module, `x·b = x π(b)`.
    pub fn p_right(&self) -> Result<RightModule<F>, Error> {
        let p = self.p();
        Ok(RightModule { carrier: p.carrier.clone(), action: p.m.compose(&tensor(&p.id(), &self.pi)?)? })
    }

    /// `P` as a left `B`-module, `b·x = π(b) x`.
    pub fn p_left(&self) -> Result<LeftModule<F>, Error> {
        let p = self.p();
        Ok(LeftModule { carrier: p.carrier.clone(), action: p.m.compose(&tensor(&self.pi, &p.id())?)? })
    }

    pub fn coinvariants(&self) -> Result<&(Algebra<F>, Morphism<F>), Error> {
        cached(&self.cache.coinvariants, || coinvariants(&self.total))
    }

    /// `Π: P⊗P ↠ P⊗_B P`.
    pub fn tensor_pp(&self) -> Result<&Coequaliser<F>, Error> {
        cached(&self.cache.tensor_pp, || tensor_over(&self.p_right()?, &self.p_left()?, &self.base.carrier))
    }

    /// `can: P⊗_B P → P⊗H`, induced by `(m_P⊗id_H)∘(id_P⊗ρ)`.
    pub fn canonical_map(&self) -> Result<&Morphism<F>, Error> {
        cached(&self.cache.can, || {
            let c = self.can_precomposite()?;
            Ok(factor_through_coequaliser(&c, &self.tensor_pp()?.projection)?)
        })
    }

    /// `(m_P⊗id_H)∘(id_P⊗ρ)` on `P⊗P`.
    pub fn can_precomposite(&self) -> Result<Morphism<F>, Error> {
        let p = self.p();
        Ok(tensor(&p.m, &self.h().id())?.compose(&tensor(&p.id(), self.rho())?)?)
    }

    pub fn can_verdict(&self) -> Result<&IsoVerdict<F>, Error> {
        cached(&self.cache.can_verdict, || Ok(is_isomorphism(self.canonical_map()?)))
    }

    pub fn can_inverse(&self) -> Result<&Morphism<F>, Error> {
        self.can_verdict()?
            .inverse
            .as_ref()
            .ok_or_else(|| Error::Precondition("the canonical map is not bijective".into()))
    }

    /// `h ↦ can⁻¹(1⊗h)`, a map `H → P⊗_B P`.
    pub fn translation_map(&self) -> Result<Morphism<F>, Error> {
        let p = self.p();
        Ok(self.can_inverse()?.compose(&tensor(&p.u, &self.h().id())?)?)
    }

    /// `m|: B⊗P → P`.
    pub fn restricted_multiplication(&self) -> Result<Morphism<F>, Error> {
        Ok(self.p_left()?.action)
    }

    pub fn dualize(&self) -> CoalgebraBundle<F> {
        CoalgebraBundle::new(self.total.dualize(), self.base.dualize(), self.pi.dualize())
            .expect("transposition preserves typing")
    }
}

impl<F: Field> CoalgebraBundle<F> {
    pub fn new(total: ModuleCoalgebra<F>, base: Coalgebra<F>, pi: Morphism<F>) -> Result<Self, Error> {
        if pi.cod() != &base.carrier || pi.dom() != total.p() {
            return Err(Error::Precondition(format!(
                "π must map the total space {} to the base {}",
                total.p().describe(),
                base.carrier.describe()
            )));
        }
        let pi = pi.retype(total.p(), &base.carrier)?;
        Ok(CoalgebraBundle { total, base, pi, cache: CoalgebraCache { base: OnceLock::new(), cotensor_pp: OnceLock::new(), can: OnceLock::new(), can_verdict: OnceLock::new() } })
    }

    pub fn over_invariants(total: ModuleCoalgebra<F>) -> Result<Self, Error> {
        let (b, proj) = invariants_base(&total)?;
        Self::new(total, b, proj)
    }

    pub fn p(&self) -> &Coalgebra<F> {
        &self.total.coalgebra
    }

    pub fn h(&self) -> &HopfAlgebra<F> {
        &self.total.hopf
    }

    pub fn act(&self) -> &Morphism<F> {
        &self.total.action
    }

    /// `P` as a right `B`-comodule, `(id⊗π)∘Δ_P`.
    pub fn p_right(&self) -> Result<RightComodule<F>, Error> {
        let p = self.p();
        Ok(RightComodule { carrier: p.carrier.clone(), coaction: tensor(&p.id(), &self.pi)?.compose(&p.delta)? })
    }

    /// `P` as a left `B`-comodule, `(π⊗id)∘Δ_P`.
    pub fn p_left(&self) -> Result<LeftComodule<F>, Error> {
        let p = self.p();
        Ok(LeftComodule { carrier: p.carrier.clone(), coaction: tensor(&self.pi, &p.id())?.compose(&p.delta)? })
    }

    pub fn invariants_base(&self) -> Result<&(Coalgebra<F>, Morphism<F>), Error> {
        cached(&self.cache.base, || invariants_base(&self.total))
    }

    /// `ι: P□_B P ↪ P⊗P`.
    pub fn cotensor_pp(&self) -> Result<&Equaliser<F>, Error> {
        cached(&self.cache.cotensor_pp, || cotensor(&self.p_right()?, &self.p_left()?))
    }

    /// `can: P⊗H → P□_B P`, induced by `(id_P⊗ϱ)∘(Δ_P⊗id_H)`.
    pub fn canonical_map(&self) -> Result<&Morphism<F>, Error> {
        cached(&self.cache.can, || {
            let c = self.can_precomposite()?;
            Ok(factor_through_equaliser(&c, &self.cotensor_pp()?.inclusion)?)
        })
    }

    pub fn can_precomposite(&self) -> Result<Morphism<F>, Error> {
        let p = self.p();
        Ok(tensor(&p.id(), self.act())?.compose(&tensor(&p.delta, &self.h().id())?)?)
    }

    pub fn can_verdict(&self) -> Result<&IsoVerdict<F>, Error> {
        cached(&self.cache.can_verdict, || Ok(is_isomorphism(self.canonical_map()?)))
    }

    pub fn can_inverse(&self) -> Result<&Morphism<F>, Error> {
        self.can_verdict()?
            .inverse
            .as_ref()
            .ok_or_else(|| Error::Precondition("the canonical map is not bijective".into()))
    }

    /// `λ = (π⊗id)∘Δ_P: P → B⊗P`.
    pub fn restricted_comultiplication(&self) -> Result<Morphism<F>, Error> {
        Ok(self.p_left()?.coaction)
    }

    pub fn dualize(&self) -> AlgebraBundle<F> {
        AlgebraBundle::new(self.total.dualize(), self.base.dualize(), self.pi.dualize())
            .expect("transposition preserves typing")
    }
}

// --- conditions ------------------------------------------------------------

/// Outcome of condition (A): the comparison isomorphism between the supplied
/// base and the computed one, when it exists.
#[derive(Clone, Debug)]
pub struct ConditionA<F: Field> {
    pub report: Report,
    pub comparison: Option<Morphism<F>>,
}

impl<F: Field> ConditionA<F> {
    pub fn holds(&self) -> bool {
        self.report.passed()
    }
}

pub fn check_condition_a_algebra<F: Field>(b: &AlgebraBundle<F>) -> ConditionA<F> {
    let mut r = Report::new();
    let anchor = "base is the coinvariant equaliser";
    identity(&mut r, "condition_A.coinvariant_image", anchor, || {
        let trivial = tensor(&b.p().id(), b.h().u())?.retype(&b.p().carrier, b.rho().cod())?;
        Ok((b.rho().compose(&b.pi)?, trivial.compose(&b.pi)?))
    });
    identity(&mut r, "condition_A.pi_multiplicative", anchor, || {
        Ok((b.pi.compose(&b.base.m)?, b.p().m.compose(&tensor(&b.pi, &b.pi)?)?))
    });
    identity(&mut r, "condition_A.pi_unital", anchor, || Ok((b.pi.compose(&b.base.u)?, b.p().u.clone())));
    let mut comparison = None;
    match b.coinvariants() {
        Ok((computed, iota)) => {
            let c = factor_through_equaliser(&b.pi, iota);
            let ok = match &c {
                Ok(c) => {
                    let v = is_isomorphism(c);
                    let chk = r.check("condition_A", anchor, v.is_iso());
                    chk.with("base_dim", b.base.carrier.dim())
                        .with("coinvariants_dim", computed.carrier.dim())
                        .with("comparison_rank", v.rank)
                        .with_morphism("comparison", c);
                    if !v.is_iso() {
                        chk.with("comparison_kernel_dim", v.kernel.cols());
                    }
                    v.is_iso()
                }
                Err(e) => {
                    r.check("condition_A", anchor, false)
                        .with("base_dim", b.base.carrier.dim())
                        .with("coinvariants_dim", computed.carrier.dim())
                        .with("error", e);
                    false
                }
            };
            if ok {
                comparison = c.ok();
            }
        }
        Err(e) => {
            r.check("condition_A", anchor, false).with("error", e);
        }
    }
    ConditionA { report: r, comparison }
}

pub fn check_condition_a_coalgebra<F: Field>(b: &CoalgebraBundle<F>) -> ConditionA<F> {
    let mut r = Report::new();
    let anchor = "base is the invariant coequaliser";
    identity(&mut r, "condition_A.coinvariant_image", anchor, || {
        let trivial = tensor(&b.p().id(), b.h().eps())?.retype(b.act().dom(), &b.p().carrier)?;
        Ok((b.pi.compose(b.act())?, b.pi.compose(&trivial)?))
    });
    identity(&mut r, "condition_A.pi_multiplicative", anchor, || {
        Ok((b.base.delta.compose(&b.pi)?, tensor(&b.pi, &b.pi)?.compose(&b.p().delta)?))
    });
    identity(&mut r, "condition_A.pi_unital", anchor, || Ok((b.base.eps.compose(&b.pi)?, b.p().eps.clone())));
    let mut comparison = None;
    match b.invariants_base() {
        Ok((computed, proj)) => {
            let c = factor_through_coequaliser(&b.pi, proj);
            match &c {
                Ok(cm) => {
                    let v = is_isomorphism(cm);
                    let chk = r.check("condition_A", anchor, v.is_iso());
                    chk.with("base_dim", b.base.carrier.dim())
                        .with("coinvariants_dim", computed.carrier.dim())
                        .with("comparison_rank", v.rank)
                        .with_morphism("comparison", cm);
                    if !v.is_iso() {
                        chk.with("comparison_kernel_dim", v.kernel.cols());
                    } else {
                        comparison = Some(cm.clone());
                    }
                }
                Err(e) => {
                    r.check("condition_A", anchor, false)
                        .with("base_dim", b.base.carrier.dim())
                        .with("coinvariants_dim", computed.carrier.dim())
                        .with("error", e);
                }
            }
        }
        Err(e) => {
            r.check("condition_A", anchor, false).with("error", e);
        }
    }
    ConditionA { report: r, comparison }
}

fn can_report<F: Field>(r: &mut Report, can: Result<&Morphism<F>, Error>, verdict: Result<&IsoVerdict<F>, Error>) -> bool {
    let anchor = "canonical map is bijective";
    match (can, verdict) {
        (Ok(can), Ok(v)) => {
            let chk = r.check("condition_B", anchor, v.is_iso());
            chk.with("domain_dim", can.dom().dim())
                .with("codomain_dim", can.cod().dim())
                .with("rank", v.rank)
                .with("kernel_dim", v.kernel.cols())
                .with("corank", v.cokernel_dim)
                .with_morphism("can", can);
            match &v.inverse {
                Some(inv) => {
                    chk.with_morphism("can_inverse", inv);
                }
                None if v.kernel.cols() > 0 => {
                    chk.with("kernel_witness", matrix_text(&v.kernel));
                }
                None => {}
            }
            v.is_iso()
        }
        (Err(e), _) | (_, Err(e)) => {
            r.check("condition_B", anchor, false).with("error", e);
            false
        }
    }
}

pub fn check_condition_b_algebra<F: Field>(b: &AlgebraBundle<F>) -> Report {
    let mut r = Report::new();
    can_report(&mut r, b.canonical_map(), b.can_verdict());
    r
}

pub fn check_condition_b_coalgebra<F: Field>(b: &CoalgebraBundle<F>) -> Report {
    let mut r = Report::new();
    can_report(&mut r, b.canonical_map(), b.can_verdict());
    r
}

/// Outcome of a section/splitting search.
#[derive(Clone, Debug)]
pub struct SplittingOutcome<F: Field> {
    pub solution: Option<Morphism<F>>,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    pub solution_space_dim: usize,
}

impl<F: Field> From<LinearSolution<F>> for SplittingOutcome<F> {
    fn from(s: LinearSolution<F>) -> Self {
        let dim = if s.particular.is_some() { s.homogeneous.len() } else { 0 };
        SplittingOutcome {
            solution: s.particular,
            unknowns: s.unknowns,
            equations: s.equations,
            rank: s.rank,
            solution_space_dim: dim,
        }
    }
}

/// Section `s: P → B⊗P` of `m|: B⊗P → P`; left `B`-linear and, when
/// `colinear`, right `H`-colinear.
pub fn algebra_section<F: Field>(b: &AlgebraBundle<F>, colinear: bool) -> Result<SplittingOutcome<F>, Error> {
    let mr = b.restricted_multiplication()?;
    let bp = mr.dom().clone();
    let p = b.p().carrier.clone();
    let idb = b.base.id();
    let idp = b.p().id();
    let mb_id = tensor(&b.base.m, &idp)?;
    let mut problem = LinearProblem::new(&p, &bp)
        .equation(|s| Ok(mr.compose(s)?), idp.clone())
        .homogeneous(|s| Ok(s.compose(&mr)?.sub(&mb_id.compose(&tensor(&idb, s)?)?)?));
    if colinear {
        let idb_rho = tensor(&idb, b.rho())?;
        let idh = b.h().id();
        let rho = b.rho().clone();
        problem = problem.homogeneous(move |s| Ok(idb_rho.compose(s)?.sub(&tensor(s, &idh)?.compose(&rho)?)?));
    }
    Ok(problem.solve()?.into())
}

/// Retraction `r: B⊗P → P` of `λ: P → B⊗P`; left `B`-colinear and, when
/// `linear`, right `H`-linear.
pub fn coalgebra_retraction<F: Field>(b: &CoalgebraBundle<F>, linear: bool) -> Result<SplittingOutcome<F>, Error> {
    let lam = b.restricted_comultiplication()?;
    let bp = lam.cod().clone();
    let p = b.p().carrier.clone();
    let idb = b.base.id();
    let idp = b.p().id();
    let db_id = tensor(&b.base.delta, &idp)?;
    let mut problem = LinearProblem::new(&bp, &p)
        .equation(|r| Ok(r.compose(&lam)?), idp.clone())
        .homogeneous(|r| Ok(lam.compose(r)?.sub(&tensor(&idb, r)?.compose(&db_id)?)?));
    if linear {
        let idb_act = tensor(&idb, b.act())?;
        let idh = b.h().id();
        let act = b.act().clone();
        problem = problem.homogeneous(move |r| Ok(r.compose(&idb_act)?.sub(&act.compose(&tensor(r, &idh)?)?)?));
    }
    Ok(problem.solve()?.into())
}

/// Trace ideal of `P` as a left `B`-module: the span of the images of all
/// `B`-linear maps `P → B`. Returns its dimension and the generating maps.
pub fn trace_ideal<F: Field>(b: &AlgebraBundle<F>) -> Result<(usize, Vec<Morphism<F>>), Error> {
    let mr = b.restricted_multiplication()?;
    let idb = b.base.id();
    let mb = b.base.m.clone();
    let sol = LinearProblem::new(&b.p().carrier, &b.base.carrier)
        .homogeneous(|f| Ok(f.compose(&mr)?.sub(&mb.compose(&tensor(&idb, f)?)?)?))
        .solve()?;
    let maps = sol.homogeneous;
    let stacked = maps
        .iter()
        .fold(crate::matrix::Matrix::zeros(b.base.carrier.dim(), 0), |acc, f| acc.hstack(f.matrix()));
    Ok((stacked.rank(), maps))
}

/// Dual of [`trace_ideal`]: `B`-colinear maps `B → P`; returns the rank of
/// their stacked matrices (the codimension of the common kernel).
pub fn cotrace<F: Field>(b: &CoalgebraBundle<F>) -> Result<(usize, Vec<Morphism<F>>), Error> {
    let lam = b.restricted_comultiplication()?;
    let idb = b.base.id();
    let db = b.base.delta.clone();
    let sol = LinearProblem::new(&b.base.carrier, &b.p().carrier)
        .homogeneous(|g| Ok(lam.compose(g)?.sub(&tensor(&idb, g)?.compose(&db)?)?))
        .solve()?;
    let maps = sol.homogeneous;
    let stacked = maps
        .iter()
        .fold(crate::matrix::Matrix::zeros(0, b.base.carrier.dim()), |acc, g| acc.vstack(g.matrix()));
    Ok((stacked.rank(), maps))
}

fn splitting_check<F: Field>(r: &mut Report, name: &str, anchor: &str, key: &str, out: Result<SplittingOutcome<F>, Error>) -> bool {
    match out {
        Ok(o) => {
            let ok = o.solution.is_some();
            let chk = r.check(name, anchor, ok);
            chk.with("unknowns", o.unknowns).with("equations", o.equations).with("rank", o.rank);
            match &o.solution {
                Some(s) => {
                    chk.with("solution_space_dim", o.solution_space_dim).with_morphism(key, s);
                }
                None => {
                    chk.with("certificate", "linear system inconsistent");
                }
            }
            ok
        }
        Err(e) => {
            r.check(name, anchor, false).with("error", e);
            false
        }
    }
}

pub fn equivariant_projectivity<F: Field>(b: &AlgebraBundle<F>) -> Report {
    let mut r = Report::new();
    splitting_check(
        &mut r,
        "condition_C.equivariant_projectivity",
        "B-linear H-colinear section of the restricted multiplication",
        "section",
        algebra_section(b, true),
    );
    r
}

pub fn equivariant_coprojectivity<F: Field>(b: &CoalgebraBundle<F>) -> Report {
    let mut r = Report::new();
    splitting_check(
        &mut r,
        "condition_C.equivariant_projectivity",
        "B-colinear H-linear retraction of the restricted comultiplication",
        "section",
        coalgebra_retraction(b, true),
    );
    r
}

pub fn faithful_flatness<F: Field>(b: &AlgebraBundle<F>) -> Report {
    let mut r = Report::new();
    let anchor = "projective and trace ideal equals the base";
    let projective = splitting_check(&mut r, "condition_C.projective", anchor, "splitting", algebra_section(b, false));
    let generator = match trace_ideal(b) {
        Ok((dim, maps)) => {
            let ok = dim == b.base.carrier.dim() && b.p().carrier.dim() > 0;
            r.check("condition_C.generator", anchor, ok)
                .with("trace_ideal_dim", dim)
                .with("base_dim", b.base.carrier.dim())
                .with("linear_functionals", maps.len());
            ok
        }
        Err(e) => {
            r.check("condition_C.generator", anchor, false).with("error", e);
            false
        }
    };
    r.check("condition_C.faithful_flatness", anchor, projective && generator);
    r
}

pub fn faithful_coflatness<F: Field>(b: &CoalgebraBundle<F>) -> Report {
    let mut r = Report::new();
    let anchor = "projective and trace ideal equals the base";
    let projective =
        splitting_check(&mut r, "condition_C.projective", anchor, "splitting", coalgebra_retraction(b, false));
    let generator = match cotrace(b) {
        Ok((dim, maps)) => {
            let ok = dim == b.base.carrier.dim() && b.p().carrier.dim() > 0;
            r.check("condition_C.generator", anchor, ok)
                .with("trace_ideal_dim", dim)
                .with("base_dim", b.base.carrier.dim())
                .with("linear_functionals", maps.len());
            ok
        }
        Err(e) => {
            r.check("condition_C.generator", anchor, false).with("error", e);
            false
        }
    };
    r.check("condition_C.faithful_flatness", anchor, projective && generator);
    r
}

fn verdict_of(r: &Report, name: &str) -> bool {
    r.get(name).is_some_and(|c| c.passed())
}

fn principal_summary(r: &mut Report, h: &HopfAlgebra<impl Field>) {
    let a = verdict_of(r, "condition_A");
    let b = verdict_of(r, "condition_B");
    let ep = verdict_of(r, "condition_C.equivariant_projectivity");
    let ff = verdict_of(r, "condition_C.faithful_flatness");
    let bijective = check_hopf(h).get("antipode.bijective").and_then(|c| c.get("bijective")) == Some("true");
    let anchor = "equivariant projectivity and faithful flatness agree";
    if bijective {
        r.check("condition_C.agreement", anchor, ep == ff)
            .with("equivariantly_projective", ep)
            .with("faithfully_flat", ff);
    } else {
        r.info("condition_C.agreement", anchor)
            .with("equivariantly_projective", ep)
            .with("faithfully_flat", ff)
            .with("warning", "antipode not bijective; equivalence of the two criteria not asserted");
    }
    let structure = ["structure.hopf", "structure.total", "structure.base"].iter().all(|n| verdict_of(r, n));
    let principal = structure && a && b && ep && ff;
    r.check("principal", "principal bundle", principal)
        .with("structures", structure)
        .with("condition_A", a)
        .with("condition_B", b)
        .with("equivariant_projectivity", ep)
        .with("faithful_flatness", ff);
}

fn structure_summary(r: &mut Report, name: &str, anchor: &str, sub: Report) {
    let failed: Vec<String> = sub.failures().map(|c| c.name.clone()).collect();
    let chk = r.check(name, anchor, failed.is_empty());
    if !failed.is_empty() {
        chk.with("failed", failed.join(","));
    }
}

/// Conditions (A), (B), (C) on the algebra side. Check names coincide with
/// those of [`check_principal_coalgebra`] so the two sides can be compared.
pub fn check_principal_algebra<F: Field>(b: &AlgebraBundle<F>) -> Report {
    let mut r = Report::new();
    structure_summary(&mut r, "structure.hopf", "Hopf algebra axioms", check_hopf(b.h()));
    structure_summary(&mut r, "structure.total", "total space axioms", check_comodule_algebra(&b.total));
    structure_summary(&mut r, "structure.base", "base axioms", check_algebra(&b.base));
    r.checks.extend(check_condition_a_algebra(b).report.checks);
    r.checks.extend(check_condition_b_algebra(b).checks);
    r.checks.extend(equivariant_projectivity(b).checks);
    r.checks.extend(faithful_flatness(b).checks);
    principal_summary(&mut r, b.h());
    r
}

pub fn check_principal_coalgebra<F: Field>(b: &CoalgebraBundle<F>) -> Report {
    let mut r = Report::new();
    structure_summary(&mut r, "structure.hopf", "Hopf algebra axioms", check_hopf(b.h()));
    structure_summary(&mut r, "structure.total", "total space axioms", check_module_coalgebra(&b.total));
    structure_summary(&mut r, "structure.base", "base axioms", check_coalgebra(&b.base));
    r.checks.extend(check_condition_a_coalgebra(b).report.checks);
    r.checks.extend(check_condition_b_coalgebra(b).checks);
    r.checks.extend(equivariant_coprojectivity(b).checks);
    r.checks.extend(faithful_coflatness(b).checks);
    principal_summary(&mut r, b.h());
    r
}

/// `can` is left `P`-linear and right `H`-colinear (algebra side).
pub fn check_can_equivariance_algebra<F: Field>(b: &AlgebraBundle<F>) -> Report {
    let mut r = Report::new();
    let anchor = "canonical map is left P-linear and right H-colinear";
    identity(&mut r, "can.p_linear", anchor, || {
        let can_pi = b.canonical_map()?.compose(&b.tensor_pp()?.projection)?;
        let p = b.p();
        Ok((
            can_pi.compose(&tensor(&p.m, &p.id())?)?,
            tensor(&p.m, &b.h().id())?.compose(&tensor(&p.id(), &can_pi)?)?,
        ))
    });
    identity(&mut r, "can.h_colinear", anchor, || {
        let can_pi = b.canonical_map()?.compose(&b.tensor_pp()?.projection)?;
        let p = b.p();
        Ok((
            tensor(&p.id(), b.h().delta())?.compose(&can_pi)?,
            tensor(&can_pi, &b.h().id())?.compose(&tensor(&p.id(), b.rho())?)?,
        ))
    });
    r
}

/// `can` is left `P`-colinear and right `H`-linear (comonoid side), checked
/// after the inclusion `P□_B P ↪ P⊗P`.
pub fn check_can_equivariance_coalgebra<F: Field>(b: &CoalgebraBundle<F>) -> Report {
    let mut r = Report::new();
    let anchor = "canonical map is left P-colinear and right H-linear";
    identity(&mut r, "can.p_colinear", anchor, || {
        let ic = b.cotensor_pp()?.inclusion.compose(b.canonical_map()?)?;
        let p = b.p();
        Ok((
            tensor(&p.delta, &p.id())?.compose(&ic)?,
            tensor(&p.id(), &ic)?.compose(&tensor(&p.delta, &b.h().id())?)?,
        ))
    });
    identity(&mut r, "can.h_linear", anchor, || {
        let ic = b.cotensor_pp()?.inclusion.compose(b.canonical_map()?)?;
        let p = b.p();
        Ok((
            ic.compose(&tensor(&p.id(), b.h().m())?)?,
            tensor(&p.id(), b.act())?.compose(&tensor(&ic, &b.h().id())?)?,
        ))
    });
    r
}

/// On `P = H` over the ground field: `can⁻¹(1⊗h) = Π((S⊗id)Δ(h))`.
pub fn check_translation_formula<F: Field>(b: &AlgebraBundle<F>) -> Report {
    let mut r = Report::new();
    identity(&mut r, "can.translation_formula", "translation map of the trivial bundle", || {
        let h = b.h();
        let expected = b.tensor_pp()?.projection.compose(&tensor(&h.antipode, &h.id())?.compose(h.delta())?)?;
        let t = b.translation_map()?;
        Ok((t.retype(expected.dom(), expected.cod())?, expected))
    });
    r
}

/// Either side of the construction.
#[derive(Clone, Debug)]
pub enum Bundle<F: Field> {
    Algebra(AlgebraBundle<F>),
    Comonoid(CoalgebraBundle<F>),
}

impl<F: Field> Bundle<F> {
    pub fn check_principal(&self) -> Report {
        match self {
            Bundle::Algebra(b) => check_principal_algebra(b),
            Bundle::Comonoid(b) => check_principal_coalgebra(b),
        }
    }

    pub fn dualize(&self) -> Bundle<F> {
        match self {
            Bundle::Algebra(b) => Bundle::Comonoid(b.dualize()),
            Bundle::Comonoid(b) => Bundle::Algebra(b.dualize()),
        }
    }

    pub fn side(&self) -> &'static str {
        match self {
            Bundle::Algebra(_) => "algebra",
            Bundle::Comonoid(_) => "comonoid",
        }
    }

    pub fn hopf(&self) -> &HopfAlgebra<F> {
        match self {
            Bundle::Algebra(b) => b.h(),
            Bundle::Comonoid(b) => b.h(),
        }
    }

    pub fn as_algebra(&self) -> AlgebraBundle<F> {
        match self {
            Bundle::Algebra(b) => b.clone(),
            Bundle::Comonoid(b) => b.dualize(),
        }
    }

    pub fn as_comonoid(&self) -> CoalgebraBundle<F> {
        match self {
            Bundle::Algebra(b) => b.dualize(),
            Bundle::Comonoid(b) => b.clone(),
        }
    }
}

/// The two `can` matrices of an algebra-side instance and its dual are
/// transposes once the bases of `P⊗_B P` and `(P□_B P)` are compared.
pub fn check_can_duality<F: Field>(alg: &AlgebraBundle<F>, co: &CoalgebraBundle<F>) -> Report {
    let mut r = Report::new();
    identity(&mut r, "duality.can_transpose", "canonical maps of dual instances are transposes", || {
        let pi = &alg.tensor_pp()?.projection;
        let iota = &co.cotensor_pp()?.inclusion;
        // basis comparison: ι_dual = Πᵀ ∘ φ
        let pit = pi.dualize().retype(&pi.cod().dual(), iota.cod())?;
        let phi = factor_through_equaliser(iota, &pit)?;
        if !is_isomorphism(&phi).is_iso() {
            return Err(Error::Precondition("bases of the dual tensor products are not comparable".into()));
        }
        let can_t = alg.canonical_map()?.dualize();
        // can_co : P*⊗H* → P□P ; canᵀ : P*⊗H* → (P⊗_B P)*
        let lhs = phi.compose(co.canonical_map()?)?;
        Ok((lhs.retype(can_t.dom(), can_t.cod())?, can_t))
    });
    r
}

/// `(ϱ⊗ϱ)∘(id⊗τ_{P,H}⊗id)∘(id⊗id⊗Δ_H)`: the diagonal action on `P⊗P`.
pub fn diagonal_action<F: Field>(x: &ModuleCoalgebra<F>) -> Result<Morphism<F>, Error> {
    let p = x.p();
    let idp = Morphism::identity(p);
    let h = &x.hopf;
    let spread = tensor_all(&[&idp, &idp, h.delta()])?;
    let swap = tensor_all(&[&idp, &braiding(p, h.carrier())?, &h.id()])?;
    let act2 = tensor(&x.action, &x.action)?;
    Ok(chain(&[&spread, &swap, &act2])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::unit_of;
    use crate::field::Rational;
    use crate::graded::Grading;
    use crate::matrix::Matrix;
    use std::sync::Arc;

    type Q = Rational;

    fn mk(dom: &GradedSpace<Q>, cod: &GradedSpace<Q>, rows: &[&[i64]]) -> Morphism<Q> {
        Morphism::new(dom.clone(), cod.clone(), Matrix::from_i64_rows(rows)).unwrap()
    }

    /// ℚℤ₂ typed by hand, basis {1, g}.
    fn z2() -> HopfAlgebra<Q> {
        let h = GradedSpace::plain("H", 2, Arc::new(Grading::trivial()));
        let hh = h.tensor(&h).unwrap();
        let one = unit_of(&h);
        let a = Algebra::new(h.clone(), mk(&hh, &h, &[&[1, 0, 0, 1], &[0, 1, 1, 0]]), mk(&one, &h, &[&[1], &[0]])).unwrap();
        let c = Coalgebra::new(h.clone(), mk(&h, &hh, &[&[1, 0], &[0, 0], &[0, 0], &[0, 1]]), mk(&h, &one, &[&[1, 1]])).unwrap();
        HopfAlgebra::new(a, c, Morphism::identity(&h)).unwrap()
    }

    fn trivial_bundle() -> AlgebraBundle<Q> {
        let h = z2();
        let total = ComoduleAlgebra { algebra: h.algebra.clone(), hopf: h.clone(), coaction: h.delta().clone() };
        let one = unit_of(h.carrier());
        let k = Algebra::new(one.clone(), Morphism::identity(&one), Morphism::identity(&one)).unwrap();
        AlgebraBundle::new(total, k, h.u().clone()).unwrap()
    }

    #[test]
    fn coinvariants_of_regular_coaction() {
        let b = trivial_bundle();
        assert!(check_comodule_algebra(&b.total).passed());
        let (base, iota) = b.coinvariants().unwrap();
        assert_eq!(base.carrier.dim(), 1);
        // spanned by 1
        assert_eq!(iota.matrix(), &Matrix::from_i64_rows(&[&[1], &[0]]));
    }

    #[test]
    fn trivial_coaction_has_everything_coinvariant() {
        let h = z2();
        let p = h.algebra.clone();
        let rho = tensor(&p.id(), h.u()).unwrap().retype(&p.carrier, &p.carrier.tensor(h.carrier()).unwrap()).unwrap();
        let x = ComoduleAlgebra { algebra: p, hopf: h, coaction: rho };
        assert!(check_comodule_algebra(&x).passed());
        let (base, iota) = coinvariants(&x).unwrap();
        assert_eq!(base.carrier.dim(), 2);
        assert!(iota.matrix().is_identity());
    }

    #[test]
    fn trivial_bundle_is_principal() {
        let b = trivial_bundle();
        let r = check_principal_algebra(&b);
        assert!(r.passed(), "{}", r.render_text());
        let can = b.canonical_map().unwrap();
        assert_eq!(can.dom().dim(), 4);
        // can(x⊗y) = x y₁ ⊗ y₂ on group-likes: a⊗b ↦ ab⊗b
        let expected = Matrix::from_i64_rows(&[
            &[1, 0, 0, 0],
            &[0, 0, 0, 1],
            &[0, 0, 1, 0],
            &[0, 1, 0, 0],
        ]);
        assert_eq!(can.compose(&b.tensor_pp().unwrap().projection).unwrap().matrix(), &expected);
        assert!(check_translation_formula(&b).passed());
        assert!(check_can_equivariance_algebra(&b).passed());
    }

    #[test]
    fn dual_pipeline_agrees() {
        let b = trivial_bundle();
        let d = b.dualize();
        assert!(check_module_coalgebra(&d.total).passed());
        assert_eq!(check_principal_algebra(&b).verdicts(), check_principal_coalgebra(&d).verdicts());
        assert!(check_can_duality(&b, &d).passed());
        assert!(check_can_equivariance_coalgebra(&d).passed());
        let (base, _) = d.invariants_base().unwrap();
        assert_eq!(base.carrier.dim(), 1);
    }

    #[test]
    fn oversized_base_fails_condition_a() {
        let b = trivial_bundle();
        let p = b.p().clone();
        let big = AlgebraBundle::new(b.total.clone(), p.clone(), p.id()).unwrap();
        let a = check_condition_a_algebra(&big);
        assert!(!a.holds());
        assert!(a.comparison.is_none());
    }

    #[test]
    fn cotensor_and_tensor_over_unit() {
        let b = trivial_bundle();
        let pp = b.tensor_pp().unwrap();
        assert_eq!(pp.space.dim(), 4);
        let d = b.dualize();
        assert_eq!(d.cotensor_pp().unwrap().space.dim(), 4);
    }

    #[test]
    fn regular_module_over_itself() {
        let h = z2();
        let m = RightModule { carrier: h.carrier().clone(), action: h.m().clone() };
        let n = LeftModule { carrier: h.carrier().clone(), action: h.m().clone() };
        assert!(check_right_module(&m, &h.algebra).passed());
        assert_eq!(tensor_over(&m, &n, h.carrier()).unwrap().space.dim(), 2);
        let c = RightComodule { carrier: h.carrier().clone(), coaction: h.delta().clone() };
        let lc = LeftComodule { carrier: h.carrier().clone(), coaction: h.delta().clone() };
        assert!(check_right_comodule(&c, &h.coalgebra).passed());
        assert_eq!(cotensor(&c, &lc).unwrap().space.dim(), 2);
    }
}
