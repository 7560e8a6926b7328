//! Small worked examples: group algebras, function algebras, Sweedler's
//! four-dimensional algebra, braided lines, and bundles built from them.

use std::sync::Arc;

use crate::bundle::{AlgebraBundle, CoalgebraBundle, ComoduleAlgebra, ModuleCoalgebra};
use crate::field::{Field, Fp, Rational};
use crate::graded::{GradedSpace, Grading, Morphism};
use crate::hopf::{unit_of, Algebra, Coalgebra, HopfAlgebra};

type Entries<F> = Vec<(usize, F)>;

/// Algebra on `carrier` from a product table `i·j = Σ c_k e_k` and a unit vector.
pub fn algebra_from_fns<F: Field>(
    carrier: &GradedSpace<F>,
    mul: impl Fn(usize, usize) -> Entries<F>,
    unit: Entries<F>,
) -> Algebra<F> {
    let n = carrier.dim();
    let cc = carrier.tensor(carrier).expect("same grading");
    let m = Morphism::from_triplets(
        cc,
        carrier.clone(),
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).flat_map(|(i, j)| {
            mul(i, j).into_iter().map(move |(k, v)| (k, i * n + j, v))
        }).collect::<Vec<_>>(),
    )
    .expect("product table respects degrees");
    let u = Morphism::from_triplets(unit_of(carrier), carrier.clone(), unit.into_iter().map(|(k, v)| (k, 0, v)))
        .expect("unit has degree zero");
    Algebra::new(carrier.clone(), m, u).expect("typed")
}

/// Coalgebra from `Δ(e_i) = Σ c e_j⊗e_k` and `ε(e_i)`.
pub fn coalgebra_from_fns<F: Field>(
    carrier: &GradedSpace<F>,
    comul: impl Fn(usize) -> Vec<(usize, usize, F)>,
    counit: impl Fn(usize) -> F,
) -> Coalgebra<F> {
    let n = carrier.dim();
    let cc = carrier.tensor(carrier).expect("same grading");
    let delta = Morphism::from_triplets(
        carrier.clone(),
        cc,
        (0..n).flat_map(|i| comul(i).into_iter().map(move |(j, k, v)| (j * n + k, i, v))).collect::<Vec<_>>(),
    )
    .expect("coproduct respects degrees");
    let eps = Morphism::from_triplets(carrier.clone(), unit_of(carrier), (0..n).map(|i| (0, i, counit(i))))
        .expect("counit respects degrees");
    Coalgebra::new(carrier.clone(), delta, eps).expect("typed")
}

pub fn linear_map<F: Field>(
    dom: &GradedSpace<F>,
    cod: &GradedSpace<F>,
    image: impl Fn(usize) -> Entries<F>,
) -> Morphism<F> {
    Morphism::from_triplets(
        dom.clone(),
        cod.clone(),
        (0..dom.dim()).flat_map(|j| image(j).into_iter().map(move |(i, v)| (i, j, v))).collect::<Vec<_>>(),
    )
    .expect("map respects degrees")
}

/// Group algebra with basis the group elements, `0` the identity.
pub fn group_algebra<F: Field>(
    label: &str,
    grading: Arc<Grading<F>>,
    order: usize,
    mul: impl Fn(usize, usize) -> usize,
    inv: impl Fn(usize) -> usize,
) -> HopfAlgebra<F> {
    let one = grading.one();
    let h = GradedSpace::plain(label, order, grading);
    let a = algebra_from_fns(&h, |i, j| vec![(mul(i, j), one.clone())], vec![(0, one.clone())]);
    let c = coalgebra_from_fns(&h, |i| vec![(i, i, one.clone())], |_| one.clone());
    let s = linear_map(&h, &h, |i| vec![(inv(i), one.clone())]);
    HopfAlgebra::new(a, c, s).expect("typed")
}

/// Functions on a finite group, basis of point indicators `δ_g`.
pub fn function_algebra<F: Field>(
    label: &str,
    grading: Arc<Grading<F>>,
    order: usize,
    mul: impl Fn(usize, usize) -> usize,
    inv: impl Fn(usize) -> usize,
) -> HopfAlgebra<F> {
    let one = grading.one();
    let h = GradedSpace::plain(label, order, grading);
    let a = algebra_from_fns(
        &h,
        |i, j| if i == j { vec![(i, one.clone())] } else { vec![] },
        (0..order).map(|i| (i, one.clone())).collect(),
    );
    let pairs: Vec<Vec<(usize, usize)>> = (0..order)
        .map(|g| (0..order).flat_map(|a| (0..order).map(move |b| (a, b))).filter(|&(a, b)| mul(a, b) == g).collect())
        .collect();
    let c = coalgebra_from_fns(
        &h,
        |g| pairs[g].iter().map(|&(a, b)| (a, b, one.clone())).collect(),
        |g| if g == 0 { one.clone() } else { F::zero() },
    );
    let s = linear_map(&h, &h, |g| vec![(inv(g), one.clone())]);
    HopfAlgebra::new(a, c, s).expect("typed")
}

pub fn cyclic_group_algebra<F: Field>(label: &str, grading: Arc<Grading<F>>, n: usize) -> HopfAlgebra<F> {
    group_algebra(label, grading, n, |a, b| (a + b) % n, |a| (n - a) % n)
}

pub fn cyclic_function_algebra<F: Field>(label: &str, grading: Arc<Grading<F>>, n: usize) -> HopfAlgebra<F> {
    function_algebra(label, grading, n, |a, b| (a + b) % n, |a| (n - a) % n)
}

fn q(n: i64) -> Rational {
    Rational::integer(n)
}

fn qgrading() -> Arc<Grading<Rational>> {
    Arc::new(Grading::trivial())
}

pub fn q_z2() -> HopfAlgebra<Rational> {
    cyclic_group_algebra("H", qgrading(), 2)
}

pub fn q_z3() -> HopfAlgebra<Rational> {
    cyclic_group_algebra("H", qgrading(), 3)
}

pub fn q_z4() -> HopfAlgebra<Rational> {
    cyclic_group_algebra("H", qgrading(), 4)
}

pub fn fun_z2() -> HopfAlgebra<Rational> {
    cyclic_function_algebra("H", qgrading(), 2)
}

/// 𝔽₇ℤ₃, trivially graded.
pub fn f7_z3() -> HopfAlgebra<Fp> {
    let g = Arc::new(Grading::trivial_over(&Fp::new(1, 7)));
    cyclic_group_algebra("H", g, 3)
}

/// Permutations of {0,1,2}, identity first.
pub const S3: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];

fn s3_index(p: [usize; 3]) -> usize {
    S3.iter().position(|&x| x == p).expect("permutation")
}

/// `(a·b)(i) = a(b(i))`.
pub fn s3_mul(a: usize, b: usize) -> usize {
    let (a, b) = (S3[a], S3[b]);
    s3_index([a[b[0]], a[b[1]], a[b[2]]])
}

pub fn s3_inv(a: usize) -> usize {
    let p = S3[a];
    let mut inv = [0; 3];
    for (i, &v) in p.iter().enumerate() {
        inv[v] = i;
    }
    s3_index(inv)
}

pub fn q_s3() -> HopfAlgebra<Rational> {
    group_algebra("H", qgrading(), 6, s3_mul, s3_inv)
}

/// Sweedler's algebra, basis `1, g, x, gx`: `g² = 1`, `x² = 0`, `xg = −gx`,
/// `Δx = x⊗1 + g⊗x`.
pub fn sweedler() -> HopfAlgebra<Rational> {
    let h = GradedSpace::plain("H", 4, qgrading());
    // index = a + 2b for g^a x^b
    let split = |i: usize| (i % 2, i / 2);
    let idx = |a: usize, b: usize| (a % 2) + 2 * b;
    let a = algebra_from_fns(
        &h,
        |i, j| {
            let ((a, b), (c, d)) = (split(i), split(j));
            if b + d >= 2 {
                return vec![];
            }
            let sign = if b * c % 2 == 1 { -1 } else { 1 };
            vec![(idx(a + c, b + d), q(sign))]
        },
        vec![(0, q(1))],
    );
    let c = coalgebra_from_fns(
        &h,
        |i| match i {
            0 => vec![(0, 0, q(1))],
            1 => vec![(1, 1, q(1))],
            2 => vec![(2, 0, q(1)), (1, 2, q(1))],
            _ => vec![(3, 1, q(1)), (0, 3, q(1))],
        },
        |i| if i < 2 { q(1) } else { q(0) },
    );
    let s = linear_map(&h, &h, |i| match i {
        0 => vec![(0, q(1))],
        1 => vec![(1, q(1))],
        2 => vec![(3, q(-1))],
        _ => vec![(2, q(1))],
    });
    HopfAlgebra::new(a, c, s).expect("typed")
}

/// Gaussian binomial `[n choose k]_q`.
fn q_binomial<F: Field>(n: usize, k: usize, qv: &F, one: &F) -> F {
    // Pascal: [n,k] = [n-1,k-1] + q^k [n-1,k]
    let mut row = vec![one.clone()];
    for m in 1..=n {
        let mut next = vec![F::zero(); m + 1];
        for j in 0..=m {
            let mut v = F::zero();
            if j >= 1 {
                v = v + row[j - 1].clone();
            }
            if j < m {
                let mut qk = one.clone();
                for _ in 0..j {
                    qk = qk * qv.clone();
                }
                v = v + qk * row[j].clone();
            }
            next[j] = v;
        }
        row = next;
    }
    row[k].clone()
}

/// `𝕜[x]/(x^n)` with `deg x = 1` in the ℤ/n grading `χ(a,b) = q^{ab}`, `x`
/// primitive. Requires `q` a primitive n-th root of unity.
pub fn braided_line<F: Field>(n: usize, qv: F) -> HopfAlgebra<F> {
    let grading = Arc::new(Grading::cyclic(n, qv.clone()).expect("q^n = 1"));
    let one = grading.one();
    let h = GradedSpace::new("H", (0..n).collect(), grading).expect("degrees below n");
    let a = algebra_from_fns(&h, |i, j| if i + j < n { vec![(i + j, one.clone())] } else { vec![] }, vec![(0, one.clone())]);
    let c = coalgebra_from_fns(
        &h,
        |i| (0..=i).map(|k| (k, i - k, q_binomial(i, k, &qv, &one))).collect(),
        |i| if i == 0 { one.clone() } else { F::zero() },
    );
    // S(x^i) = (−1)^i q^{i(i−1)/2} x^i
    let s = linear_map(&h, &h, |i| {
        let mut v = if i % 2 == 0 { one.clone() } else { -one.clone() };
        for _ in 0..i * i.saturating_sub(1) / 2 {
            v = v * qv.clone();
        }
        vec![(i, v)]
    });
    HopfAlgebra::new(a, c, s).expect("typed")
}

/// `𝔽₇[x]/(x³)` with `q = 2`.
pub fn braided_line_f7() -> HopfAlgebra<Fp> {
    braided_line(3, Fp::new(2, 7))
}

/// `ℚ[x]/(x²)` with `x` odd.
pub fn super_line() -> HopfAlgebra<Rational> {
    braided_line(2, q(-1))
}

/// The unit object as a Hopf algebra.
pub fn trivial_hopf<F: Field>(grading: Arc<Grading<F>>) -> HopfAlgebra<F> {
    let one = GradedSpace::unit(grading);
    let id = Morphism::identity(&one);
    let a = Algebra::new(one.clone(), id.clone(), id.clone()).expect("typed");
    let c = Coalgebra::new(one.clone(), id.clone(), id.clone()).expect("typed");
    HopfAlgebra::new(a, c, id).expect("typed")
}

/// ℚℤ₂ with the antipode replaced by zero.
pub fn broken_antipode() -> HopfAlgebra<Rational> {
    let mut h = q_z2();
    h.antipode = Morphism::zero(h.carrier(), h.carrier());
    h
}

/// The ground field as an algebra on `𝟏`.
pub fn ground_algebra<F: Field>(grading: Arc<Grading<F>>) -> Algebra<F> {
    let one = GradedSpace::unit(grading);
    let id = Morphism::identity(&one);
    Algebra::new(one.clone().with_label("B"), id.clone(), id).expect("typed")
}

/// `P = H` coacting on itself by `Δ`, over the ground field via the unit.
pub fn trivial_bundle<F: Field>(h: &HopfAlgebra<F>) -> AlgebraBundle<F> {
    let h = h.relabel("H");
    let p_space = h.carrier().clone().with_label("P");
    let p = Algebra::new(p_space.clone(), h.m().clone(), h.u().clone()).expect("typed");
    let rho = h.delta().retype(&p_space, &p_space.tensor(h.carrier()).expect("same grading")).expect("typed");
    let total = ComoduleAlgebra { algebra: p, hopf: h.clone(), coaction: rho };
    let base = ground_algebra(h.carrier().grading().clone());
    let pi = h.u().retype(&base.carrier, &p_space).expect("typed");
    AlgebraBundle::new(total, base, pi).expect("typed")
}

/// `Fun(X)` for `|X| = n`, basis of point indicators.
pub fn points_algebra(label: &str, n: usize) -> Algebra<Rational> {
    let x = GradedSpace::plain(label, n, qgrading());
    algebra_from_fns(&x, |i, j| if i == j { vec![(i, q(1))] } else { vec![] }, (0..n).map(|i| (i, q(1))).collect())
}

/// A right ℤ₂-action on `X = {0..n}` given by an involution `σ`, turned into
/// the `Fun(ℤ₂)`-comodule algebra `Fun(X)`, `ρ(f)(x, g) = f(x·g)`; the base
/// is the computed coinvariant subalgebra.
pub fn action_bundle(sigma: &[usize]) -> AlgebraBundle<Rational> {
    let n = sigma.len();
    let h = fun_z2();
    let p = points_algebra("P", n);
    let ph = p.carrier.tensor(h.carrier()).expect("same grading");
    // ρ(δ_x) = Σ_{y·g = x} δ_y ⊗ δ_g
    let rho = linear_map(&p.carrier, &ph, |x| {
        (0..n)
            .flat_map(|y| [(y, 0), (y, 1)])
            .filter(|&(y, g)| (if g == 0 { y } else { sigma[y] }) == x)
            .map(|(y, g)| (y * 2 + g, q(1)))
            .collect()
    });
    let total = ComoduleAlgebra { algebra: p, hopf: h, coaction: rho };
    AlgebraBundle::over_coinvariants(total).expect("coinvariants of a comodule algebra")
}

/// ℚℤ₄ over ℚℤ₂ through `h ↦ g²`, coacting by `g^k ↦ g^k ⊗ h^k`.
pub fn z4_over_z2() -> AlgebraBundle<Rational> {
    let h = q_z2();
    let big = q_z4();
    let p_space = big.carrier().clone().with_label("P");
    let p = Algebra::new(p_space.clone(), big.m().clone(), big.u().clone()).expect("typed");
    let ph = p_space.tensor(h.carrier()).expect("same grading");
    let rho = linear_map(&p_space, &ph, |k| vec![(k * 2 + k % 2, q(1))]);
    let total = ComoduleAlgebra { algebra: p, hopf: h.clone(), coaction: rho };
    let b_space = h.carrier().clone().with_label("B");
    let base = Algebra::new(b_space.clone(), h.m().clone(), h.u().clone()).expect("typed");
    let pi = linear_map(&b_space, &p_space, |k| vec![(2 * k, q(1))]);
    AlgebraBundle::new(total, base, pi).expect("typed")
}

/// `𝕜[t]/(t²)`, basis `1, t`.
pub fn dual_numbers() -> Algebra<Rational> {
    let b = GradedSpace::plain("B", 2, qgrading());
    algebra_from_fns(&b, |i, j| if i + j < 2 { vec![(i + j, q(1))] } else { vec![] }, vec![(0, q(1))])
}

/// `P = 𝕜` over `B = 𝕜[t]/(t²)` via `t ↦ 0`, with `H = 𝟏`. Not flat.
pub fn non_flat() -> AlgebraBundle<Rational> {
    let g = qgrading();
    let h = trivial_hopf(g.clone());
    let p_space = GradedSpace::unit(g).with_label("P");
    let id = Morphism::identity(&p_space);
    let p = Algebra::new(p_space.clone(), id.clone(), id.clone()).expect("typed");
    let total = ComoduleAlgebra { algebra: p, hopf: h, coaction: id };
    let base = dual_numbers();
    let pi = linear_map(&base.carrier, &p_space, |k| if k == 0 { vec![(0, q(1))] } else { vec![] });
    AlgebraBundle::new(total, base, pi).expect("typed")
}

/// `P = H` acting on itself by `m`, over the ground field via `ε`.
pub fn trivial_comonoid_bundle<F: Field>(h: &HopfAlgebra<F>) -> CoalgebraBundle<F> {
    let h = h.relabel("H");
    let p_space = h.carrier().clone().with_label("P");
    let pp = p_space.tensor(&p_space).expect("same grading");
    let p = Coalgebra::new(
        p_space.clone(),
        h.delta().retype(&p_space, &pp).expect("typed"),
        h.eps().retype(&p_space, &unit_of(&p_space)).expect("typed"),
    )
    .expect("typed");
    let act = h.m().retype(&p_space.tensor(h.carrier()).expect("same grading"), &p_space).expect("typed");
    let total = ModuleCoalgebra { coalgebra: p, hopf: h.clone(), action: act };
    let one = GradedSpace::unit(h.carrier().grading().clone()).with_label("B");
    let id = Morphism::identity(&one);
    let base = Coalgebra::new(one.clone(), id.clone(), id).expect("typed");
    let pi = h.eps().retype(&p_space, &one).expect("typed");
    CoalgebraBundle::new(total, base, pi).expect("typed")
}

/// A coalgebra `P` over itself with `H = 𝟏`.
pub fn degenerate_comonoid_bundle<F: Field>(c: &Coalgebra<F>) -> CoalgebraBundle<F> {
    let h = trivial_hopf(c.carrier.grading().clone());
    let p_space = c.carrier.clone().with_label("P");
    let pp = p_space.tensor(&p_space).expect("same grading");
    let p = Coalgebra::new(
        p_space.clone(),
        c.delta.retype(&p_space, &pp).expect("typed"),
        c.eps.retype(&p_space, &unit_of(&p_space)).expect("typed"),
    )
    .expect("typed");
    let act = Morphism::identity(&p_space);
    let total = ModuleCoalgebra { coalgebra: p.clone(), hopf: h, action: act };
    let b_space = p_space.clone().with_label("B");
    let base = Coalgebra::new(
        b_space.clone(),
        p.delta.retype(&b_space, &b_space.tensor(&b_space).expect("same grading")).expect("typed"),
        p.eps.retype(&b_space, &unit_of(&b_space)).expect("typed"),
    )
    .expect("typed");
    let pi = Morphism::identity(&p_space).retype(&p_space, &b_space).expect("typed");
    CoalgebraBundle::new(total, base, pi).expect("typed")
}

/// Every involution of `{0..n}`.
pub fn involutions(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<Option<usize>>, out: &mut Vec<Vec<usize>>) {
        match prefix.iter().position(Option::is_none) {
            None => out.push(prefix.iter().map(|x| x.expect("filled")).collect()),
            Some(i) => {
                prefix[i] = Some(i);
                go(prefix, out);
                for j in i + 1..prefix.len() {
                    if prefix[j].is_none() {
                        prefix[i] = Some(j);
                        prefix[j] = Some(i);
                        go(prefix, out);
                        prefix[j] = None;
                    }
                }
                prefix[i] = None;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut vec![None; n], &mut out);
    out
}

/// Named Hopf algebras used by the CLI and the tests.
pub fn named_rational(name: &str) -> Option<HopfAlgebra<Rational>> {
    Some(match name {
        "QZ2" => q_z2(),
        "QZ3" => q_z3(),
        "QZ4" => q_z4(),
        "QS3" => q_s3(),
        "FunZ2" => fun_z2(),
        "Sweedler" => sweedler(),
        "SuperLine" => super_line(),
        "One" => trivial_hopf(qgrading()),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::check_principal_algebra;
    use crate::hopf::check_hopf;

    #[test]
    fn catalog_hopf_algebras_pass() {
        for h in [q_z2(), q_z3(), q_s3(), fun_z2(), sweedler(), super_line(), trivial_hopf(qgrading())] {
            let r = check_hopf(&h);
            assert!(r.passed(), "{}", r.render_text());
        }
        assert!(check_hopf(&f7_z3()).passed());
        let r = check_hopf(&braided_line_f7());
        assert!(r.passed(), "{}", r.render_text());
        assert!(!check_hopf(&broken_antipode()).passed());
    }

    #[test]
    fn q_binomials() {
        let one = q(1);
        assert_eq!(q_binomial(2, 1, &q(3), &one), q(4));
        assert_eq!(q_binomial(3, 1, &q(2), &one), q(7));
        assert_eq!(q_binomial(4, 2, &q(1), &one), q(6));
    }

    #[test]
    fn involution_counts() {
        let counts: Vec<usize> = (0..5).map(|n| involutions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 10]);
    }

    #[test]
    fn fixtures_typecheck() {
        assert!(check_principal_algebra(&trivial_bundle(&q_z2())).passed());
        assert!(check_principal_algebra(&action_bundle(&[1, 0])).passed());
        assert!(!check_principal_algebra(&action_bundle(&[0])).passed());
        let r = check_principal_algebra(&z4_over_z2());
        assert!(r.passed(), "{}", r.render_text());
        assert!(!check_principal_algebra(&non_flat()).passed());
    }
}
