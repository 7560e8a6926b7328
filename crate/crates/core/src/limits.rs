//! Equalisers, coequalisers, factorization through them, and a solver for
//! unknown morphisms subject to linear constraints.

use crate::field::Field;
use crate::graded::{GradedSpace, Morphism, TypeError};
use crate::matrix::Matrix;
use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{what} does not factor through {through}: {detail}")]
pub struct FactorizationError {
    pub what: String,
    pub through: String,
    pub detail: String,
}

/// An equaliser `ι: E ↪ X`.
#[derive(Clone, Debug)]
pub struct Equaliser<F: Field> {
    pub space: GradedSpace<F>,
    pub inclusion: Morphism<F>,
}

/// A coequaliser `Π: Y ↠ Q`.
#[derive(Clone, Debug)]
pub struct Coequaliser<F: Field> {
    pub space: GradedSpace<F>,
    pub projection: Morphism<F>,
}

fn parallel<F: Field>(f: &Morphism<F>, g: &Morphism<F>) -> Result<Morphism<F>, TypeError> {
    f.sub(g)
}

/// Kernel of `f − g`. Basis vectors are homogeneous: the one attached to a
/// free column has that column's degree.
pub fn equaliser<F: Field>(f: &Morphism<F>, g: &Morphism<F>) -> Result<Equaliser<F>, TypeError> {
    let d = parallel(f, g)?;
    Ok(kernel_of(&d, "E"))
}

pub fn kernel_of<F: Field>(d: &Morphism<F>, label: &str) -> Equaliser<F> {
    let k = d.matrix().kernel();
    let degrees = (0..k.cols()).map(|c| d.dom().degree(leading_row(&k, c))).collect();
    let space = d.dom().with_degrees(label, degrees);
    let inclusion = Morphism::raw(space.clone(), d.dom().clone(), k);
    Equaliser { space, inclusion }
}

/// Cokernel of `f − g`, as the rows of a left-kernel basis.
pub fn coequaliser<F: Field>(f: &Morphism<F>, g: &Morphism<F>) -> Result<Coequaliser<F>, TypeError> {
    let d = parallel(f, g)?;
    Ok(cokernel_of(&d, "Q"))
}

pub fn cokernel_of<F: Field>(d: &Morphism<F>, label: &str) -> Coequaliser<F> {
    let k = d.matrix().transpose().kernel();
    let degrees = (0..k.cols()).map(|c| d.cod().degree(leading_row(&k, c))).collect();
    let space = d.cod().with_degrees(label, degrees);
    let projection = Morphism::raw(d.cod().clone(), space.clone(), k.transpose());
    Coequaliser { space, projection }
}

/// First nonzero row of column `c`. Columns are never zero here.
fn leading_row<F: Field>(m: &Matrix<F>, c: usize) -> usize {
    (0..m.rows()).find(|&r| !m.get(r, c).is_zero()).expect("basis vector is nonzero")
}

/// The unique `x` with `ι ∘ x = c`.
pub fn factor_through_equaliser<F: Field>(
    c: &Morphism<F>,
    iota: &Morphism<F>,
) -> Result<Morphism<F>, FactorizationError> {
    let err = |detail: String| FactorizationError {
        what: format!("map into {}", c.cod().label()),
        through: format!("the inclusion of {}", iota.dom().label()),
        detail,
    };
    if c.cod() != iota.cod() {
        return Err(err(format!("codomains differ ({} vs {})", c.cod().describe(), iota.cod().describe())));
    }
    let x = iota
        .matrix()
        .solve(c.matrix())
        .ok_or_else(|| err("image not contained in the subobject".into()))?;
    if iota.matrix().rank() != iota.dom().dim() {
        return Err(err("inclusion is not injective".into()));
    }
    Ok(Morphism::raw(c.dom().clone(), iota.dom().clone(), x))
}

/// The unique `x` with `x ∘ Π = c`.
pub fn factor_through_coequaliser<F: Field>(
    c: &Morphism<F>,
    pi: &Morphism<F>,
) -> Result<Morphism<F>, FactorizationError> {
    let err = |detail: String| FactorizationError {
        what: format!("map out of {}", c.dom().label()),
        through: format!("the projection onto {}", pi.cod().label()),
        detail,
    };
    if c.dom() != pi.dom() {
        return Err(err(format!("domains differ ({} vs {})", c.dom().describe(), pi.dom().describe())));
    }
    let xt = pi
        .matrix()
        .transpose()
        .solve(&c.matrix().transpose())
        .ok_or_else(|| err("map does not vanish on the kernel of the projection".into()))?;
    if pi.matrix().rank() != pi.cod().dim() {
        return Err(err("projection is not surjective".into()));
    }
    Ok(Morphism::raw(pi.cod().clone(), c.cod().clone(), xt.transpose()))
}

/// Invertibility verdict with its witness.
#[derive(Clone, Debug)]
pub struct IsoVerdict<F: Field> {
    pub rank: usize,
    pub inverse: Option<Morphism<F>>,
    /// Kernel basis as columns (empty when injective).
    pub kernel: Matrix<F>,
    pub cokernel_dim: usize,
}

impl<F: Field> IsoVerdict<F> {
    pub fn is_iso(&self) -> bool {
        self.inverse.is_some()
    }
}

pub fn is_isomorphism<F: Field>(f: &Morphism<F>) -> IsoVerdict<F> {
    let kernel = f.matrix().kernel();
    let rank = f.dom().dim() - kernel.cols();
    let cokernel_dim = f.cod().dim() - rank;
    let inverse = if kernel.cols() == 0 && cokernel_dim == 0 {
        let inv = f.matrix().inverse().expect("full rank square matrix");
        Some(Morphism::raw(f.cod().clone(), f.dom().clone(), inv))
    } else {
        None
    };
    IsoVerdict { rank, inverse, kernel, cokernel_dim }
}

type Constraint<'a, F> = (Box<dyn Fn(&Morphism<F>) -> Result<Morphism<F>, Error> + Sync + 'a>, Option<Morphism<F>>);

/// Unknown degree-preserving `X: dom → cod` subject to linear equations
/// `L_k(X) = r_k` (homogeneous when no right-hand side is given).
pub struct LinearProblem<'a, F: Field> {
    dom: GradedSpace<F>,
    cod: GradedSpace<F>,
    constraints: Vec<Constraint<'a, F>>,
}

/// Result of [`LinearProblem::solve`].
#[derive(Clone, Debug)]
pub struct LinearSolution<F: Field> {
    /// Least-pivot particular solution, if the system is consistent.
    pub particular: Option<Morphism<F>>,
    /// Basis of the solutions of the homogeneous system.
    pub homogeneous: Vec<Morphism<F>>,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
}

impl<'a, F: Field> LinearProblem<'a, F> {
    pub fn new(dom: &GradedSpace<F>, cod: &GradedSpace<F>) -> Self {
        LinearProblem { dom: dom.clone(), cod: cod.clone(), constraints: Vec::new() }
    }

    pub fn equation(
        mut self,
        lhs: impl Fn(&Morphism<F>) -> Result<Morphism<F>, Error> + Sync + 'a,
        rhs: Morphism<F>,
    ) -> Self {
        self.constraints.push((Box::new(lhs), Some(rhs)));
        self
    }

    pub fn homogeneous(mut self, lhs: impl Fn(&Morphism<F>) -> Result<Morphism<F>, Error> + Sync + 'a) -> Self {
        self.constraints.push((Box::new(lhs), None));
        self
    }

    pub fn solve(&self) -> Result<LinearSolution<F>, Error> {
        let one = self.dom.grading().one();
        let slots: Vec<(usize, usize)> = (0..self.cod.dim())
            .flat_map(|i| (0..self.dom.dim()).map(move |j| (i, j)))
            .filter(|&(i, j)| self.cod.degree(i) == self.dom.degree(j))
            .collect();
        let zero = Morphism::zero(&self.dom, &self.cod);
        // sizes of each constraint's output, from its value at zero
        let mut offsets = Vec::new();
        let mut total = 0;
        let mut rhs_entries = Vec::new();
        for (lhs, rhs) in &self.constraints {
            let at_zero = lhs(&zero)?;
            let cols = at_zero.dom().dim();
            offsets.push((total, cols));
            if let Some(r) = rhs {
                if r.matrix().shape() != at_zero.matrix().shape() {
                    return Err(TypeError::Mismatch {
                        what: "right-hand side of a linear constraint".into(),
                        expected: format!("{:?}", at_zero.matrix().shape()),
                        found: format!("{:?}", r.matrix().shape()),
                    }
                    .into());
                }
                rhs_entries.extend(r.matrix().entries().map(|(i, j, v)| (total + i * cols + j, 0, v.clone())));
            }
            total += at_zero.matrix().rows() * cols;
        }
        let mut entries = Vec::new();
        for (k, &(i, j)) in slots.iter().enumerate() {
            let x = Morphism::raw(
                self.dom.clone(),
                self.cod.clone(),
                Matrix::from_triplets(self.cod.dim(), self.dom.dim(), [(i, j, one.clone())]),
            );
            for ((lhs, _), &(offset, cols)) in self.constraints.iter().zip(&offsets) {
                let image = lhs(&x)?;
                entries.extend(image.matrix().entries().map(|(r, c, v)| (offset + r * cols + c, k, v.clone())));
            }
        }
        let a = Matrix::from_triplets(total, slots.len(), entries);
        let b = Matrix::from_triplets(total, 1, rhs_entries);
        let unpack = |column: Vec<F>| {
            let entries = slots.iter().zip(column).map(|(&(i, j), v)| (i, j, v));
            Morphism::raw(
                self.dom.clone(),
                self.cod.clone(),
                Matrix::from_triplets(self.cod.dim(), self.dom.dim(), entries),
            )
        };
        let particular = a.solve(&b).map(|x| unpack(x.column(0)));
        let kernel = a.kernel();
        let homogeneous = (0..kernel.cols()).map(|c| unpack(kernel.column(c))).collect();
        Ok(LinearSolution { particular, homogeneous, unknowns: slots.len(), equations: total, rank: a.rank() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::graded::{tensor, Grading};
    use proptest::prelude::*;
    use std::sync::Arc;

    type Q = Rational;

    fn space(dim: usize) -> GradedSpace<Q> {
        GradedSpace::plain("V", dim, Arc::new(Grading::trivial()))
    }

    fn morph(dom: usize, cod: usize, rows: &[&[i64]]) -> Morphism<Q> {
        Morphism::new(space(dom), space(cod), Matrix::from_i64_rows(rows)).unwrap()
    }

    #[test]
    fn equaliser_examples() {
        let f = morph(2, 2, &[&[1, 2], &[3, 4]]);
        let e = equaliser(&f, &f).unwrap();
        assert!(e.inclusion.is_identity());
        let v = space(2);
        let e = equaliser(&Morphism::identity(&v), &Morphism::zero(&v, &v)).unwrap();
        assert_eq!(e.space.dim(), 0);
        let a = morph(2, 2, &[&[1, 0], &[0, 0]]);
        let b = morph(2, 2, &[&[0, 0], &[0, 1]]);
        assert_eq!(equaliser(&a, &b).unwrap().space.dim(), 0);
    }

    #[test]
    fn coequaliser_examples() {
        let f = morph(2, 2, &[&[1, 2], &[3, 4]]);
        assert!(coequaliser(&f, &f).unwrap().projection.is_identity());
        let v = space(2);
        let q = coequaliser(&Morphism::identity(&v), &Morphism::zero(&v, &v)).unwrap();
        assert_eq!(q.space.dim(), 0);
    }

    #[test]
    fn factorization_examples() {
        let f = morph(2, 3, &[&[1, 0], &[0, 1], &[1, 1]]);
        let g = morph(2, 3, &[&[1, 0], &[0, 1], &[0, 0]]);
        let e = equaliser(&f, &g).unwrap();
        assert_eq!(e.space.dim(), 1);
        let x = factor_through_equaliser(&e.inclusion, &e.inclusion).unwrap();
        assert!(x.is_identity());
        let z = Morphism::zero(&space(1), e.inclusion.cod());
        assert!(factor_through_equaliser(&z, &e.inclusion).unwrap().is_zero());
        let outside = morph(1, 2, &[&[1], &[0]]);
        assert!(factor_through_equaliser(&outside, &e.inclusion).is_err());

        let q = coequaliser(&f, &g).unwrap();
        assert!(factor_through_coequaliser(&q.projection, &q.projection).unwrap().is_identity());
        let c = morph(3, 1, &[&[1, 0, 0]]);
        assert!(factor_through_coequaliser(&c, &q.projection).is_ok());
        let c = morph(3, 1, &[&[0, 0, 1]]);
        assert!(factor_through_coequaliser(&c, &q.projection).is_err());
    }

    #[test]
    fn iso_verdicts() {
        let v = space(3);
        let id = is_isomorphism(&Morphism::identity(&v));
        assert!(id.inverse.unwrap().is_identity());
        let r = is_isomorphism(&morph(2, 1, &[&[1, 1]]));
        assert!(!r.is_iso());
        assert_eq!((r.rank, r.kernel.cols(), r.cokernel_dim), (1, 1, 0));
        let c = is_isomorphism(&morph(1, 2, &[&[1], &[1]]));
        assert_eq!(c.cokernel_dim, 1);
    }

    #[test]
    fn linear_problem_finds_inverse() {
        let a = morph(2, 2, &[&[1, 1], &[0, 1]]);
        let v = space(2);
        let sol = LinearProblem::new(&v, &v)
            .equation(|x| Ok(a.compose(x)?), Morphism::identity(&v))
            .solve()
            .unwrap();
        let x = sol.particular.unwrap();
        assert!(a.compose(&x).unwrap().is_identity());
        assert!(sol.homogeneous.is_empty());
    }

    fn small(dom: usize, cod: usize) -> impl Strategy<Value = Morphism<Q>> {
        proptest::collection::vec(-2i64..=2, dom * cod).prop_map(move |v| {
            Morphism::new(space(dom), space(cod), Matrix::from_dense(cod, dom, v.into_iter().map(Q::integer).collect()))
                .unwrap()
        })
    }

    proptest! {
        #[test]
        fn equaliser_universal_property(f in small(3, 2), g in small(3, 2), t in small(2, 3)) {
            let e = equaliser(&f, &g).unwrap();
            prop_assert!(f.sub(&g).unwrap().compose(&e.inclusion).unwrap().is_zero());
            // project an arbitrary test map into the equaliser and factor it
            let c = e.inclusion.compose(&factor_or_zero(&e, &t)).unwrap();
            let x = factor_through_equaliser(&c, &e.inclusion).unwrap();
            prop_assert_eq!(e.inclusion.compose(&x).unwrap(), c);
            prop_assert_eq!(e.inclusion.matrix().rank(), e.space.dim());
        }

        #[test]
        fn coequaliser_universal_property(f in small(2, 3), g in small(2, 3), t in small(3, 2)) {
            let q = coequaliser(&f, &g).unwrap();
            prop_assert!(q.projection.compose(&f.sub(&g).unwrap()).unwrap().is_zero());
            let c = t.compose(&Morphism::identity(t.dom())).unwrap();
            let killed = c.compose(&f.sub(&g).unwrap()).unwrap().is_zero();
            prop_assert_eq!(factor_through_coequaliser(&c, &q.projection).is_ok(), killed);
        }

        #[test]
        fn tensor_preserves_equalisers(f in small(3, 2), g in small(3, 2), w in 0usize..3) {
            let e = equaliser(&f, &g).unwrap();
            let idw = Morphism::identity(&space(w));
            let fw = tensor(&f, &idw).unwrap();
            let gw = tensor(&g, &idw).unwrap();
            let ew = equaliser(&fw, &gw).unwrap();
            prop_assert_eq!(ew.space.dim(), e.space.dim() * w);
            let iw = tensor(&e.inclusion, &idw).unwrap();
            let x = factor_through_equaliser(&iw, &ew.inclusion).unwrap();
            prop_assert!(is_isomorphism(&x).is_iso());
        }
    }

    /// Some map into the equaliser built from `t` (zero when dimensions collapse).
    fn factor_or_zero(e: &Equaliser<Q>, t: &Morphism<Q>) -> Morphism<Q> {
        let dim = e.space.dim();
        let entries = t.matrix().entries().filter(|(i, _, _)| *i < dim).map(|(i, j, v)| (i, j, v.clone()));
        Morphism::from_triplets(t.dom().clone(), e.space.clone(), entries.collect::<Vec<_>>()).unwrap()
    }
}
