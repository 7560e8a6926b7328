//! Sparse exact matrices.
//!
//! Storage is row-major with each row a column-sorted list of nonzero
//! entries. Structure-constant matrices are overwhelmingly sparse (Kronecker
//! products of permutation-like maps), so every operation here skips zeros.

use std::fmt;

use crate::field::Field;

#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, F)>>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<F: Field> {
    pub reduced: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, F::one())
    }

    pub fn scalar(n: usize, value: F) -> Self {
        let data = (0..n)
            .map(|i| if value.is_zero() { Vec::new() } else { vec![(i, value.clone())] })
            .collect();
        Matrix { rows: n, cols: n, data }
    }

    /// Build from `(row, col, value)` triples; duplicates are summed.
    pub fn from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, F)>) -> Self {
        let mut data: Vec<Vec<(usize, F)>> = vec![Vec::new(); rows];
        for (i, j, v) in entries {
            assert!(i < rows && j < cols, "entry ({i},{j}) outside {rows}x{cols}");
            data[i].push((j, v));
        }
        for row in &mut data {
            row.sort_by_key(|(j, _)| *j);
            let mut merged: Vec<(usize, F)> = Vec::with_capacity(row.len());
            for (j, v) in row.drain(..) {
                match merged.last_mut() {
                    Some((lj, lv)) if *lj == j => *lv = lv.clone() + v,
                    _ => merged.push((j, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            *row = merged;
        }
        Matrix { rows, cols, data }
    }

    pub fn from_dense(rows: usize, cols: usize, values: Vec<F>) -> Self {
        assert_eq!(values.len(), rows * cols, "dense data has wrong length");
        let entries = values.into_iter().enumerate().map(|(k, v)| (k / cols.max(1), k % cols.max(1), v));
        Self::from_triplets(rows, cols, entries)
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let entries = rows.iter().enumerate().flat_map(|(i, row)| {
            assert_eq!(row.len(), c, "ragged rows");
            row.iter().enumerate().map(move |(j, &v)| (i, j, F::from_i64(v)))
        });
        Self::from_triplets(r, c, entries)
    }

    /// Build column by column from vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Self {
        let entries = columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().enumerate().map(move |(i, v)| (i, j, v.clone())));
        Self::from_triplets(rows, columns.len(), entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[(usize, F)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self
                .data
                .iter()
                .enumerate()
                .all(|(i, row)| row.len() == 1 && row[0].0 == i && row[0].1 == F::one())
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &F)> + '_ {
        self.data.iter().enumerate().flat_map(|(i, row)| row.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<Vec<(usize, F)>> = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                data[*j].push((i, v.clone()));
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v.clone())
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        self.map(|v| s.clone() * v.clone())
    }

    fn map(&self, f: impl Fn(&F) -> F) -> Self {
        let data = self
            .data
            .iter()
            .map(|row| {
                row.iter()
                    .filter_map(|(j, v)| {
                        let w = f(v);
                        (!w.is_zero()).then_some((*j, w))
                    })
                    .collect()
            })
            .collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "adding matrices of different shapes");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| axpy_row(a, &F::one(), b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "subtracting matrices of different shapes");
        let minus = -F::one();
        let data = self.data.iter().zip(&other.data).map(|(a, b)| axpy_row(a, &minus, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ in product");
        let mut out = Vec::with_capacity(self.rows);
        let mut acc: Vec<Option<F>> = vec![None; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        for row in &self.data {
            for (k, a) in row {
                for (j, b) in &other.data[*k] {
                    let term = a.clone() * b.clone();
                    match &mut acc[*j] {
                        Some(v) => *v = v.clone() + term,
                        slot @ None => {
                            *slot = Some(term);
                            touched.push(*j);
                        }
                    }
                }
            }
            touched.sort_unstable();
            let mut new_row = Vec::with_capacity(touched.len());
            for &j in &touched {
                if let Some(v) = acc[j].take() {
                    if !v.is_zero() {
                        new_row.push((j, v));
                    }
                }
            }
            touched.clear();
            out.push(new_row);
        }
        Matrix { rows: self.rows, cols: other.cols, data: out }
    }

    /// Kronecker product; row `i*r2 + k`, column `j*c2 + l` holds `a_ij b_kl`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = other.shape();
        let mut data = Vec::with_capacity(self.rows * r2);
        for row_a in &self.data {
            for row_b in &other.data {
                let mut new_row = Vec::with_capacity(row_a.len() * row_b.len());
                for (j, a) in row_a {
                    for (l, b) in row_b {
                        new_row.push((j * c2 + l, a.clone() * b.clone()));
                    }
                }
                data.push(new_row);
            }
        }
        Matrix { rows: self.rows * r2, cols: self.cols * c2, data }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack with different row counts");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut row = a.clone();
                row.extend(b.iter().map(|(j, v)| (j + self.cols, v.clone())));
                row
            })
            .collect();
        Matrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack with different column counts");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let data = rows.iter().map(|&i| self.data[i].clone()).collect();
        Matrix { rows: rows.len(), cols: self.cols, data }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut position = vec![usize::MAX; self.cols];
        for (new, &old) in cols.iter().enumerate() {
            position[old] = new;
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut new_row: Vec<(usize, F)> = row
                    .iter()
                    .filter(|(j, _)| position[*j] != usize::MAX)
                    .map(|(j, v)| (position[*j], v.clone()))
                    .collect();
                new_row.sort_by_key(|(j, _)| *j);
                new_row
            })
            .collect();
        Matrix { rows: self.rows, cols: cols.len(), data }
    }

    /// Gauss-Jordan elimination; pivots are taken in the leftmost available
    /// column, from the lowest-index row carrying it.
    pub fn rref(&self) -> Rref<F> {
        self.rref_limited(self.cols)
    }

    /// Elimination that only places pivots in columns `< limit`.
    pub fn rref_limited(&self, limit: usize) -> Rref<F> {
        let mut rows: Vec<Vec<(usize, F)>> = self.data.iter().filter(|r| !r.is_empty()).cloned().collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        // rows[rank..] have no entries in pivot columns; their leading column
        // is therefore at least the current column.
        let mut leads: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
        for col in 0..limit.min(self.cols) {
            let Some(offset) = leads[rank..].iter().position(|&l| l == col) else {
                continue;
            };
            let p = rank + offset;
            rows.swap(rank, p);
            leads.swap(rank, p);
            let inv = rows[rank][0].1.inv().expect("leading entry is nonzero");
            if inv != F::one() {
                for (_, v) in rows[rank].iter_mut() {
                    *v = v.clone() * inv.clone();
                }
            }
            let pivot_row = rows[rank].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == rank {
                    continue;
                }
                let Ok(k) = row.binary_search_by_key(&col, |(c, _)| *c) else {
                    continue;
                };
                let factor = -row[k].1.clone();
                *row = axpy_row(row, &factor, &pivot_row);
                leads[i] = row.first().map_or(usize::MAX, |(c, _)| *c);
            }
            pivots.push(col);
            rank += 1;
        }
        let n = rows.len();
        let reduced = Matrix { rows: n, cols: self.cols, data: rows };
        let mut reduced = reduced;
        // drop rows eliminated to zero (can only happen below the rank)
        reduced.data.retain(|r| !r.is_empty());
        reduced.rows = reduced.data.len();
        Rref { reduced, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the null space, as the columns of a `cols × k` matrix. The
    /// basis vector for free column `f` has a 1 in position `f`.
    pub fn kernel(&self) -> Matrix<F> {
        let Rref { reduced, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut free_index = vec![usize::MAX; self.cols];
        for (k, &f) in free.iter().enumerate() {
            free_index[f] = k;
        }
        let mut entries = Vec::new();
        for (k, &f) in free.iter().enumerate() {
            entries.push((f, k, F::one()));
        }
        for (i, &p) in pivots.iter().enumerate() {
            for (c, v) in reduced.row(i) {
                if *c != p && free_index[*c] != usize::MAX {
                    entries.push((p, free_index[*c], -v.clone()));
                }
            }
        }
        Matrix::from_triplets(self.cols, free.len(), entries)
    }

    /// A solution `x` of `self · x = rhs` with all free variables zero, or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &Matrix<F>) -> Option<Matrix<F>> {
        assert_eq!(self.rows, rhs.rows, "solve: right-hand side has wrong height");
        let aug = self.hstack(rhs);
        let Rref { reduced, pivots } = aug.rref_limited(self.cols);
        // a nonzero row without a pivot has its support in the rhs block
        if reduced.rows() > pivots.len() {
            return None;
        }
        let mut entries = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            for (c, v) in reduced.row(i) {
                if *c >= self.cols {
                    entries.push((p, c - self.cols, v.clone()));
                }
            }
        }
        Some(Matrix::from_triplets(self.cols, rhs.cols, entries))
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Matrix::identity(self.rows))?;
        (self.rank() == self.rows).then_some(x)
    }

    /// Basis of the column space, chosen among the columns themselves (pivot
    /// columns of the echelon form).
    pub fn column_space(&self) -> Matrix<F> {
        let pivots = self.rref().pivots;
        self.select_columns(&pivots)
    }

    pub fn to_dense(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).collect()).collect()
    }

    /// Entry-wise map into another field.
    pub fn map_into<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix::from_triplets(self.rows, self.cols, self.entries().map(|(i, j, v)| (i, j, f(v))))
    }
}

/// `a + s·b` on sparse sorted rows.
fn axpy_row<F: Field>(a: &[(usize, F)], s: &F, b: &[(usize, F)]) -> Vec<(usize, F)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(usize::MAX, |e| e.0);
        let cb = b.get(j).map_or(usize::MAX, |e| e.0);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            let v = s.clone() * b[j].1.clone();
            if !v.is_zero() {
                out.push((cb, v));
            }
            j += 1;
        } else {
            let v = a[i].1.clone() + s.clone() * b[j].1.clone();
            if !v.is_zero() {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for (i, row) in self.to_dense().iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};
    use proptest::prelude::*;

    type M = Matrix<Rational>;

    fn m(rows: &[&[i64]]) -> M {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn swap_squares_to_identity() {
        let s = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(s.mul(&s), M::identity(2));
    }

    #[test]
    fn kron_by_hand() {
        let a = m(&[&[2]]);
        let s = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.kron(&s), m(&[&[0, 2], &[2, 0]]));
        let b = m(&[&[1, 2], &[3, 4]]);
        let expected = m(&[
            &[0, 1, 0, 2],
            &[1, 0, 2, 0],
            &[0, 3, 0, 4],
            &[3, 0, 4, 0],
        ]);
        assert_eq!(b.kron(&s), expected);
    }

    #[test]
    fn kernel_of_diag() {
        let d = m(&[&[1, 0], &[0, -1]]);
        assert_eq!(d.kernel().cols(), 0);
        let z = M::zeros(2, 3);
        assert_eq!(z.kernel(), M::identity(3));
    }

    #[test]
    fn kernel_basis_is_canonical() {
        // x + y + z = 0
        let a = m(&[&[1, 1, 1]]);
        let k = a.kernel();
        assert_eq!(k, m(&[&[-1, -1], &[1, 0], &[0, 1]]));
        // same row space, different presentation: identical basis
        let b = m(&[&[2, 2, 2], &[-1, -1, -1]]);
        assert_eq!(b.kernel(), k);
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), M::identity(2));
        let singular = m(&[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_none());
        assert!(singular.solve(&m(&[&[1], &[0]])).is_none());
        let x = singular.solve(&m(&[&[1], &[2]])).unwrap();
        assert_eq!(x, m(&[&[1], &[0]]));
    }

    #[test]
    fn empty_matrices() {
        let e = M::zeros(0, 3);
        assert_eq!(e.kernel(), M::identity(3));
        assert_eq!(M::zeros(3, 0).kernel().shape(), (0, 0));
        assert_eq!(M::identity(0).inverse().unwrap().shape(), (0, 0));
        assert_eq!(M::zeros(2, 0).mul(&M::zeros(0, 4)), M::zeros(2, 4));
    }

    #[test]
    fn prime_field_rank() {
        // [[1,2],[2,4]] has rank 1 everywhere; [[1,1],[1,-1]] has rank 1 mod 2
        let a: Matrix<Fp> = Matrix::from_triplets(
            2,
            2,
            vec![(0, 0, Fp::new(1, 2)), (0, 1, Fp::new(1, 2)), (1, 0, Fp::new(1, 2)), (1, 1, Fp::new(-1, 2))],
        );
        assert_eq!(a.rank(), 1);
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = M> {
        proptest::collection::vec(-2i64..=2, rows * cols)
            .prop_map(move |v| Matrix::from_dense(rows, cols, v.into_iter().map(Rational::integer).collect()))
    }

    proptest! {
        #[test]
        fn kernel_is_annihilated(a in small_matrix(3, 4)) {
            let k = a.kernel();
            prop_assert!(a.mul(&k).is_zero());
            prop_assert_eq!(k.cols() + a.rank(), 4);
        }

        #[test]
        fn kron_is_functorial(a in small_matrix(2, 2), b in small_matrix(2, 2), c in small_matrix(2, 2), d in small_matrix(2, 2)) {
            prop_assert_eq!(a.mul(&b).kron(&c.mul(&d)), a.kron(&c).mul(&b.kron(&d)));
        }

        #[test]
        fn transpose_reverses_products(a in small_matrix(2, 3), b in small_matrix(3, 2)) {
            prop_assert_eq!(a.mul(&b).transpose(), b.transpose().mul(&a.transpose()));
        }

        #[test]
        fn solve_returns_a_solution(a in small_matrix(3, 3), x in small_matrix(3, 1)) {
            let rhs = a.mul(&x);
            let y = a.solve(&rhs).expect("consistent by construction");
            prop_assert_eq!(a.mul(&y), rhs);
        }
    }
}
