//! Graded vector spaces with a bicharacter braiding, and degree-preserving
//! morphisms between them.
//!
//! Tensor bases are ordered lexicographically with the left factor major:
//! `e_i ⊗ f_j` sits at index `i * dim W + j`. The monoidal structure is
//! strict, so `V ⊗ 𝟏` and `V` are the same space.

use std::fmt;
use std::sync::Arc;

use crate::field::Field;
use crate::matrix::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradingKind {
    Trivial,
    Cyclic(usize),
}

/// A grading group (trivial or ℤ/n) together with a bicharacter χ.
#[derive(Clone, Debug, PartialEq)]
pub struct Grading<F: Field> {
    kind: GradingKind,
    /// χ(a, b) at index `a * order + b`.
    chi: Vec<F>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GradingError {
    #[error("cyclic grading needs a positive order")]
    ZeroOrder,
    #[error("bicharacter table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("χ({a},{b}) = {value} violates the bicharacter laws")]
    NotBicharacter { a: usize, b: usize, value: String },
    #[error("χ(1,b) row {row:?} is not of the form q^b with q^{n} = 1")]
    BadRow { row: Vec<String>, n: usize },
}

impl<F: Field> Grading<F> {
    /// Plain vector spaces; the braiding is the flip.
    pub fn trivial() -> Self {
        Grading { kind: GradingKind::Trivial, chi: vec![F::one()] }
    }

    /// Trivial grading whose unit scalar carries the field context of `ctx`.
    pub fn trivial_over(ctx: &F) -> Self {
        Grading { kind: GradingKind::Trivial, chi: vec![ctx.context_one()] }
    }

    /// ℤ/n with χ(a, b) = q^{ab}; `q` must satisfy q^n = 1.
    pub fn cyclic(n: usize, q: F) -> Result<Self, GradingError> {
        if n == 0 {
            return Err(GradingError::ZeroOrder);
        }
        let one = q.context_one();
        let mut powers = vec![one.clone()];
        for k in 1..=n {
            powers.push(powers[k - 1].clone() * q.clone());
        }
        if powers[n] != one {
            return Err(GradingError::BadRow { row: powers[..n].iter().map(|v| v.to_string()).collect(), n });
        }
        let chi = (0..n * n).map(|k| powers[(k / n) * (k % n) % n].clone()).collect();
        Ok(Grading { kind: GradingKind::Cyclic(n), chi })
    }

    /// ℤ/n from the row χ(1, 0), …, χ(1, n−1).
    pub fn cyclic_from_row(n: usize, row: &[F]) -> Result<Self, GradingError> {
        let describe = || row.iter().map(|v| v.to_string()).collect::<Vec<_>>();
        if row.len() != n {
            return Err(GradingError::TableSize { expected: n, found: row.len() });
        }
        if n == 0 {
            return Err(GradingError::ZeroOrder);
        }
        let q = if n > 1 { row[1].clone() } else { row[0].clone() };
        let grading = Self::cyclic(n, q).map_err(|_| GradingError::BadRow { row: describe(), n })?;
        if (0..n).any(|b| grading.chi(1 % n, b) != row[b]) {
            return Err(GradingError::BadRow { row: describe(), n });
        }
        Ok(grading)
    }

    /// Arbitrary table, validated against the bicharacter laws.
    pub fn from_table(kind: GradingKind, chi: Vec<F>) -> Result<Self, GradingError> {
        let n = match kind {
            GradingKind::Trivial => 1,
            GradingKind::Cyclic(0) => return Err(GradingError::ZeroOrder),
            GradingKind::Cyclic(n) => n,
        };
        if chi.len() != n * n {
            return Err(GradingError::TableSize { expected: n * n, found: chi.len() });
        }
        let g = Grading { kind, chi };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), GradingError> {
        let n = self.order();
        let one = self.one();
        for a in 0..n {
            for b in 0..n {
                let bad = |value: &F| GradingError::NotBicharacter { a, b, value: value.to_string() };
                if (a == 0 || b == 0) && self.chi(a, b) != one {
                    return Err(bad(&self.chi(a, b)));
                }
                for c in 0..n {
                    let left = self.chi(self.add(a, b), c);
                    if left != self.chi(a, c) * self.chi(b, c) {
                        return Err(bad(&left));
                    }
                    let right = self.chi(a, self.add(b, c));
                    if right != self.chi(a, b) * self.chi(a, c) {
                        return Err(bad(&right));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> GradingKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        match self.kind {
            GradingKind::Trivial => 1,
            GradingKind::Cyclic(n) => n,
        }
    }

    pub fn chi(&self, a: usize, b: usize) -> F {
        self.chi[a * self.order() + b].clone()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        (a + b) % self.order()
    }

    pub fn neg(&self, a: usize) -> usize {
        (self.order() - a % self.order()) % self.order()
    }

    /// The unit scalar, carrying the field context.
    pub fn one(&self) -> F {
        self.chi[0].clone()
    }

    pub fn scalar(&self, n: i64) -> F {
        self.one() * F::from_i64(n)
    }

    /// Grading for dual spaces: the transposed bicharacter, so that the
    /// transpose of τ_{V,W} is τ_{W*,V*}.
    pub fn dual(&self) -> Self {
        let n = self.order();
        let chi = (0..n * n).map(|k| self.chi(k % n, k / n)).collect();
        Grading { kind: self.kind, chi }
    }

    /// `χ(1,0) … χ(1,n−1)`, the row used by the instance file format.
    pub fn row(&self) -> Vec<F> {
        let n = self.order();
        (0..n).map(|b| self.chi(1 % n, b)).collect()
    }
}

/// A finite-dimensional graded space. Equality compares degrees and grading
/// only; the label is for messages.
#[derive(Clone)]
pub struct GradedSpace<F: Field> {
    degrees: Vec<usize>,
    grading: Arc<Grading<F>>,
    label: String,
}

impl<F: Field> PartialEq for GradedSpace<F> {
    fn eq(&self, other: &Self) -> bool {
        self.degrees == other.degrees && (Arc::ptr_eq(&self.grading, &other.grading) || self.grading == other.grading)
    }
}

impl<F: Field> fmt::Debug for GradedSpace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl<F: Field> GradedSpace<F> {
    pub fn new(label: impl Into<String>, degrees: Vec<usize>, grading: Arc<Grading<F>>) -> Result<Self, TypeError> {
        if let Some(&d) = degrees.iter().find(|&&d| d >= grading.order()) {
            return Err(TypeError::BadDegree { degree: d, order: grading.order() });
        }
        Ok(GradedSpace { degrees, grading, label: label.into() })
    }

    /// A space concentrated in degree zero.
    pub fn plain(label: impl Into<String>, dim: usize, grading: Arc<Grading<F>>) -> Self {
        GradedSpace { degrees: vec![0; dim], grading, label: label.into() }
    }

    pub fn unit(grading: Arc<Grading<F>>) -> Self {
        Self::plain("𝟏", 1, grading)
    }

    pub fn zero(grading: Arc<Grading<F>>) -> Self {
        Self::plain("0", 0, grading)
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn grading(&self) -> &Arc<Grading<F>> {
        &self.grading
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn is_unit(&self) -> bool {
        self.degrees == [0]
    }

    pub fn describe(&self) -> String {
        if self.degrees.iter().all(|&d| d == 0) {
            format!("{} (dim {})", self.label, self.dim())
        } else {
            format!("{} (dim {}, degrees {:?})", self.label, self.dim(), self.degrees)
        }
    }

    pub fn same_grading(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.grading, &other.grading) || self.grading == other.grading
    }

    pub fn tensor(&self, other: &Self) -> Result<Self, TypeError> {
        if !self.same_grading(other) {
            return Err(TypeError::GradingMismatch { left: self.describe(), right: other.describe() });
        }
        let degrees = self
            .degrees
            .iter()
            .flat_map(|&a| other.degrees.iter().map(move |&b| self.grading.add(a, b)))
            .collect();
        let label = match (self.label.as_str(), other.label.as_str()) {
            ("𝟏", l) | (l, "𝟏") => l.to_string(),
            (a, b) => format!("{a}⊗{b}"),
        };
        Ok(GradedSpace { degrees, grading: self.grading.clone(), label })
    }

    /// Tensor product of a list of spaces (the unit for an empty list needs
    /// a grading, so the list must be nonempty).
    pub fn tensor_all(spaces: &[&Self]) -> Result<Self, TypeError> {
        let (first, rest) = spaces.split_first().expect("tensor of an empty list");
        rest.iter().try_fold((*first).clone(), |acc, s| acc.tensor(s))
    }

    pub fn dual(&self) -> Self {
        let label = match self.label.strip_suffix('*') {
            Some(base) => base.to_string(),
            None if self.label == "𝟏" => self.label.clone(),
            None => format!("{}*", self.label),
        };
        GradedSpace {
            degrees: self.degrees.iter().map(|&d| self.grading.neg(d)).collect(),
            grading: Arc::new(self.grading.dual()),
            label,
        }
    }

    /// Subspace spanned by the given basis degrees, sharing this grading.
    pub fn with_degrees(&self, label: impl Into<String>, degrees: Vec<usize>) -> Self {
        GradedSpace { degrees, grading: self.grading.clone(), label: label.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("cannot compose: {outer} expects {expected} but {inner} produces {found}")]
    Composition { outer: String, inner: String, expected: String, found: String },
    #[error("matrix is {rows}x{cols} but {cod} ← {dom} needs {need_rows}x{need_cols}")]
    Shape { rows: usize, cols: usize, need_rows: usize, need_cols: usize, dom: String, cod: String },
    #[error("entry ({row},{col}) maps degree {from} to degree {to}; morphisms must preserve degree")]
    NotDegreePreserving { row: usize, col: usize, from: usize, to: usize },
    #[error("spaces {left} and {right} live over different gradings")]
    GradingMismatch { left: String, right: String },
    #[error("degree {degree} out of range for a grading of order {order}")]
    BadDegree { degree: usize, order: usize },
    #[error("{what}: expected {expected}, found {found}")]
    Mismatch { what: String, expected: String, found: String },
}

/// A degree-preserving linear map, stored as a `cod × dom` matrix.
#[derive(Clone, PartialEq)]
pub struct Morphism<F: Field> {
    dom: GradedSpace<F>,
    cod: GradedSpace<F>,
    matrix: Matrix<F>,
}

impl<F: Field> fmt::Debug for Morphism<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {}: {:?}", self.dom.describe(), self.cod.describe(), self.matrix)
    }
}

impl<F: Field> Morphism<F> {
    pub fn new(dom: GradedSpace<F>, cod: GradedSpace<F>, matrix: Matrix<F>) -> Result<Self, TypeError> {
        if matrix.shape() != (cod.dim(), dom.dim()) {
            return Err(TypeError::Shape {
                rows: matrix.rows(),
                cols: matrix.cols(),
                need_rows: cod.dim(),
                need_cols: dom.dim(),
                dom: dom.describe(),
                cod: cod.describe(),
            });
        }
        if !dom.same_grading(&cod) {
            return Err(TypeError::GradingMismatch { left: dom.describe(), right: cod.describe() });
        }
        for (i, j, _) in matrix.entries() {
            if cod.degree(i) != dom.degree(j) {
                return Err(TypeError::NotDegreePreserving { row: i, col: j, from: dom.degree(j), to: cod.degree(i) });
            }
        }
        Ok(Morphism { dom, cod, matrix })
    }

    /// Build from `(row, col, value)` triples.
    pub fn from_triplets(
        dom: GradedSpace<F>,
        cod: GradedSpace<F>,
        entries: impl IntoIterator<Item = (usize, usize, F)>,
    ) -> Result<Self, TypeError> {
        let m = Matrix::from_triplets(cod.dim(), dom.dim(), entries);
        Self::new(dom, cod, m)
    }

    /// Callers guarantee shape and degree compatibility.
    pub(crate) fn raw(dom: GradedSpace<F>, cod: GradedSpace<F>, matrix: Matrix<F>) -> Self {
        debug_assert_eq!(matrix.shape(), (cod.dim(), dom.dim()));
        Morphism { dom, cod, matrix }
    }

    pub fn identity(v: &GradedSpace<F>) -> Self {
        Morphism::raw(v.clone(), v.clone(), Matrix::scalar(v.dim(), v.grading().one()))
    }

    pub fn zero(dom: &GradedSpace<F>, cod: &GradedSpace<F>) -> Self {
        Morphism::raw(dom.clone(), cod.clone(), Matrix::zeros(cod.dim(), dom.dim()))
    }

    pub fn dom(&self) -> &GradedSpace<F> {
        &self.dom
    }

    pub fn cod(&self) -> &GradedSpace<F> {
        &self.cod
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<F> {
        self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.matrix.is_identity()
    }

    pub fn relabel(mut self, dom: &str, cod: &str) -> Self {
        self.dom.label = dom.to_string();
        self.cod.label = cod.to_string();
        self
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Morphism<F>) -> Result<Morphism<F>, TypeError> {
        compose(self, inner)
    }

    /// Diagrammatic order: `self ; next` is `next ∘ self`.
    pub fn then(&self, next: &Morphism<F>) -> Result<Morphism<F>, TypeError> {
        compose(next, self)
    }

    pub fn tensor(&self, other: &Morphism<F>) -> Result<Morphism<F>, TypeError> {
        tensor(self, other)
    }

    fn check_parallel(&self, other: &Self, what: &str) -> Result<(), TypeError> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(TypeError::Mismatch {
                what: what.to_string(),
                expected: format!("{} → {}", self.dom.describe(), self.cod.describe()),
                found: format!("{} → {}", other.dom.describe(), other.cod.describe()),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, TypeError> {
        self.check_parallel(other, "sum of morphisms")?;
        Ok(Morphism::raw(self.dom.clone(), self.cod.clone(), self.matrix.add(&other.matrix)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TypeError> {
        self.check_parallel(other, "difference of morphisms")?;
        Ok(Morphism::raw(self.dom.clone(), self.cod.clone(), self.matrix.sub(&other.matrix)))
    }

    pub fn scale(&self, s: &F) -> Self {
        Morphism::raw(self.dom.clone(), self.cod.clone(), self.matrix.scale(s))
    }

    pub fn dualize(&self) -> Self {
        dualize(self)
    }

    /// Replace the domain/codomain by equal spaces with other labels.
    pub fn retype(&self, dom: &GradedSpace<F>, cod: &GradedSpace<F>) -> Result<Self, TypeError> {
        if *dom != self.dom || *cod != self.cod {
            return Err(TypeError::Mismatch {
                what: "retyping".into(),
                expected: format!("{} → {}", self.dom.describe(), self.cod.describe()),
                found: format!("{} → {}", dom.describe(), cod.describe()),
            });
        }
        Ok(Morphism::raw(dom.clone(), cod.clone(), self.matrix.clone()))
    }
}

pub fn compose<F: Field>(outer: &Morphism<F>, inner: &Morphism<F>) -> Result<Morphism<F>, TypeError> {
    if outer.dom != inner.cod {
        return Err(TypeError::Composition {
            outer: outer.dom.label.clone(),
            inner: inner.cod.label.clone(),
            expected: outer.dom.describe(),
            found: inner.cod.describe(),
        });
    }
    Ok(Morphism::raw(inner.dom.clone(), outer.cod.clone(), outer.matrix.mul(&inner.matrix)))
}

/// Compose a chain given in diagrammatic order: `chain(&[f, g, h]) = h ∘ g ∘ f`.
pub fn chain<F: Field>(maps: &[&Morphism<F>]) -> Result<Morphism<F>, TypeError> {
    let (first, rest) = maps.split_first().expect("empty composition chain");
    rest.iter().try_fold((*first).clone(), |acc, m| compose(m, &acc))
}

pub fn tensor<F: Field>(f: &Morphism<F>, g: &Morphism<F>) -> Result<Morphism<F>, TypeError> {
    let dom = f.dom.tensor(&g.dom)?;
    let cod = f.cod.tensor(&g.cod)?;
    Ok(Morphism::raw(dom, cod, f.matrix.kron(&g.matrix)))
}

/// Tensor product of several morphisms, left to right.
pub fn tensor_all<F: Field>(maps: &[&Morphism<F>]) -> Result<Morphism<F>, TypeError> {
    let (first, rest) = maps.split_first().expect("tensor of an empty list");
    rest.iter().try_fold((*first).clone(), |acc, m| tensor(&acc, m))
}

/// τ_{V,W}: e_i ⊗ f_j ↦ χ(deg f_j, deg e_i) f_j ⊗ e_i.
pub fn braiding<F: Field>(v: &GradedSpace<F>, w: &GradedSpace<F>) -> Result<Morphism<F>, TypeError> {
    let dom = v.tensor(w)?;
    let cod = w.tensor(v)?;
    let (dv, dw) = (v.dim(), w.dim());
    let g = v.grading();
    let entries = (0..dv).flat_map(|i| {
        (0..dw).map(move |j| (j * dv + i, i * dw + j, g.chi(w.degree(j), v.degree(i))))
    });
    Ok(Morphism::raw(dom, cod, Matrix::from_triplets(dw * dv, dv * dw, entries)))
}

/// Transpose: the finite-dimensional realization of passing to the opposite
/// category. Degrees are negated and the bicharacter transposed.
pub fn dualize<F: Field>(f: &Morphism<F>) -> Morphism<F> {
    Morphism::raw(f.cod.dual(), f.dom.dual(), f.matrix.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};
    use proptest::prelude::*;

    type Q = Rational;

    fn trivial() -> Arc<Grading<Q>> {
        Arc::new(Grading::trivial())
    }

    fn super_grading() -> Arc<Grading<Q>> {
        Arc::new(Grading::cyclic(2, Q::integer(-1)).unwrap())
    }

    fn m(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn swap_composed_with_itself() {
        let v = GradedSpace::plain("V", 2, trivial());
        let s = Morphism::new(v.clone(), v.clone(), m(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(compose(&s, &s).unwrap(), Morphism::identity(&v));
        let z = Morphism::zero(&v, &v);
        assert!(compose(&z, &s).unwrap().is_zero());
        assert_eq!(compose(&Morphism::identity(&v), &s).unwrap(), s);
    }

    #[test]
    fn composition_checks_inner_objects() {
        let g = trivial();
        let v = GradedSpace::plain("V", 2, g.clone());
        let w = GradedSpace::plain("W", 3, g);
        let err = compose(&Morphism::identity(&v), &Morphism::identity(&w)).unwrap_err();
        assert!(matches!(err, TypeError::Composition { .. }));
    }

    #[test]
    fn tensor_examples() {
        let g = trivial();
        let one = GradedSpace::unit(g.clone());
        let v = GradedSpace::plain("V", 2, g.clone());
        let w = GradedSpace::plain("W", 3, g.clone());
        assert_eq!(
            tensor(&Morphism::identity(&v), &Morphism::identity(&w)).unwrap(),
            Morphism::identity(&v.tensor(&w).unwrap())
        );
        let s = Morphism::new(v.clone(), v.clone(), m(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(tensor(&s, &Morphism::identity(&one)).unwrap(), s);
        let two = Morphism::new(one.clone(), one.clone(), m(&[&[2]])).unwrap();
        assert_eq!(tensor(&two, &s).unwrap().matrix(), &m(&[&[0, 2], &[2, 0]]));
    }

    #[test]
    fn braiding_examples() {
        let g = trivial();
        let v = GradedSpace::plain("V", 2, g.clone());
        let flip = braiding(&v, &v).unwrap();
        assert_eq!(
            flip.matrix(),
            &m(&[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]])
        );
        let sg = super_grading();
        let odd = GradedSpace::new("X", vec![1], sg.clone()).unwrap();
        assert_eq!(braiding(&odd, &odd).unwrap().matrix(), &m(&[&[-1]]));
        let unit = GradedSpace::unit(sg.clone());
        let w = GradedSpace::new("W", vec![0, 1, 1], sg).unwrap();
        assert!(braiding(&unit, &w).unwrap().is_identity());
        assert!(braiding(&w, &unit).unwrap().is_identity());
    }

    #[test]
    fn grading_validation() {
        assert!(Grading::cyclic(3, Q::integer(2)).is_err());
        let w = Fp::new(2, 7);
        let g = Grading::cyclic(3, w).unwrap();
        assert_eq!(g.chi(2, 2), Fp::new(2, 7)); // 2^4 = 16 = 2
        assert_eq!(Grading::cyclic_from_row(3, &g.row()).unwrap(), g);
        let bad = vec![Q::integer(1), Q::integer(1), Q::integer(1), Q::integer(2)];
        assert!(Grading::from_table(GradingKind::Cyclic(2), bad).is_err());
    }

    #[test]
    fn degree_preservation_is_enforced() {
        let sg = super_grading();
        let v = GradedSpace::new("V", vec![0, 1], sg).unwrap();
        let err = Morphism::new(v.clone(), v.clone(), m(&[&[0, 1], &[0, 0]])).unwrap_err();
        assert!(matches!(err, TypeError::NotDegreePreserving { row: 0, col: 1, .. }));
    }

    #[test]
    fn dualize_examples() {
        let sg = super_grading();
        let v = GradedSpace::new("V", vec![0, 1], sg).unwrap();
        let f = Morphism::new(v.clone(), v.clone(), m(&[&[3, 0], &[0, 5]])).unwrap();
        assert_eq!(dualize(&dualize(&f)), f);
        assert!(dualize(&Morphism::identity(&v)).is_identity());
    }

    // --- property tests -------------------------------------------------

    fn graded_space(g: Arc<Grading<Q>>, max_dim: usize) -> impl Strategy<Value = GradedSpace<Q>> {
        let n = g.order();
        proptest::collection::vec(0..n, 0..=max_dim)
            .prop_map(move |d| GradedSpace::new("V", d, g.clone()).unwrap())
    }

    fn any_grading() -> impl Strategy<Value = Arc<Grading<Q>>> {
        prop_oneof![Just(trivial()), Just(super_grading())]
    }

    /// A random degree-preserving endomorphism.
    fn endo(v: GradedSpace<Q>) -> impl Strategy<Value = Morphism<Q>> {
        let d = v.dim();
        proptest::collection::vec(-2i64..=2, d * d).prop_map(move |vals| {
            let entries = vals
                .iter()
                .enumerate()
                .filter(|(k, _)| v.degree(k / d) == v.degree(k % d))
                .map(|(k, &x)| (k / d, k % d, Q::integer(x)))
                .collect::<Vec<_>>();
            Morphism::from_triplets(v.clone(), v.clone(), entries).unwrap()
        })
    }

    fn triple() -> impl Strategy<Value = (GradedSpace<Q>, GradedSpace<Q>, GradedSpace<Q>)> {
        any_grading().prop_flat_map(|g| (graded_space(g.clone(), 3), graded_space(g.clone(), 3), graded_space(g, 2)))
    }

    proptest! {
        #[test]
        fn hexagons((x, y, z) in triple()) {
            let id = Morphism::identity;
            let lhs = tensor(&id(&y), &braiding(&x, &z).unwrap()).unwrap()
                .compose(&tensor(&braiding(&x, &y).unwrap(), &id(&z)).unwrap()).unwrap();
            prop_assert_eq!(lhs, braiding(&x, &y.tensor(&z).unwrap()).unwrap());
            let lhs = tensor(&braiding(&x, &z).unwrap(), &id(&y)).unwrap()
                .compose(&tensor(&id(&x), &braiding(&y, &z).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(lhs, braiding(&x.tensor(&y).unwrap(), &z).unwrap());
        }

        #[test]
        fn braiding_is_natural((f, w) in any_grading().prop_flat_map(|g| {
            (graded_space(g.clone(), 3).prop_flat_map(endo), graded_space(g, 3))
        })) {
            let v = f.dom().clone();
            let lhs = braiding(&v, &w).unwrap().compose(&tensor(&f, &Morphism::identity(&w)).unwrap()).unwrap();
            let rhs = tensor(&Morphism::identity(&w), &f).unwrap().compose(&braiding(&v, &w).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn tensor_is_functorial((f1, f2, g1, g2) in any_grading().prop_flat_map(|g| {
            (graded_space(g.clone(), 3), graded_space(g, 2))
        }).prop_flat_map(|(v, w)| (endo(v.clone()), endo(v), endo(w.clone()), endo(w)))) {
            let lhs = tensor(&f1.compose(&f2).unwrap(), &g1.compose(&g2).unwrap()).unwrap();
            let rhs = tensor(&f1, &g1).unwrap().compose(&tensor(&f2, &g2).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn dualize_is_contravariant((f, g) in any_grading()
            .prop_flat_map(|g| graded_space(g, 3))
            .prop_flat_map(|v| (endo(v.clone()), endo(v)))) {
            prop_assert_eq!(dualize(&f.compose(&g).unwrap()), dualize(&g).compose(&dualize(&f)).unwrap());
            prop_assert_eq!(dualize(&dualize(&f)), f);
        }
    }
}
