//! Dense exact matrices and the deterministic elimination routines the rest
//! of the crate is built on.
//!
//! Shape errors in the arithmetic operators are programming errors and
//! panic; the morphism layer checks shapes and reports them as [`Error`]s.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarField};

/// Row-major dense matrix over a single [`ScalarField`].
///
/// `0 × n` and `n × 0` matrices are valid and carry their shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: ScalarField,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl Matrix {
    pub fn new(field: ScalarField, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| e.field() != field) {
            return Err(Error::FieldMismatch(field, bad.field()));
        }
        Ok(Matrix { field, rows, cols, entries })
    }

    pub fn zeros(field: ScalarField, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: ScalarField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        m
    }

    /// Builds a matrix from small integers, mapped into `field`.
    pub fn from_i64(field: ScalarField, rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols, "value count does not match shape");
        let entries = values.iter().map(|&v| field.from_i64(v)).collect();
        Matrix { field, rows, cols, entries }
    }

    pub fn from_fn(
        field: ScalarField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Matrix { field, rows, cols, entries }
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, value: Scalar) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.field, rhs.field, "field mismatch in product");
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ in product");
        let zero = self.field.zero();
        Matrix::from_fn(self.field, self.rows, rhs.cols, |r, c| {
            (0..self.cols).fold(zero.clone(), |acc, k| {
                let a = self.get(r, k);
                if a.is_zero() {
                    acc
                } else {
                    &acc + &(a * rhs.get(k, c))
                }
            })
        })
    }

    fn zip_with(&self, rhs: &Matrix, op: impl Fn(&Scalar, &Scalar) -> Scalar) -> Matrix {
        assert_eq!(self.field, rhs.field, "field mismatch");
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| op(a, b)).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, entries }
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn neg(&self) -> Matrix {
        let entries = self.entries.iter().map(|a| -a).collect();
        Matrix { entries, ..self.clone() }
    }

    pub fn scale(&self, k: &Scalar) -> Matrix {
        let entries = self.entries.iter().map(|a| a * k).collect();
        Matrix { entries, ..self.clone() }
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "row counts differ in hstack");
        Matrix::from_fn(self.field, self.rows, self.cols + rhs.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                rhs.get(r, c - self.cols).clone()
            }
        })
    }

    /// `self` on top of `rhs`.
    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols, "column counts differ in vstack");
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&rhs.entries);
        Matrix { field: self.field, rows: self.rows + rhs.rows, cols: self.cols, entries }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, cols.len(), |r, c| self.get(r, cols[c]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, rows.len(), self.cols, |r, c| self.get(rows[r], c).clone())
    }

    /// Gauss–Jordan elimination. The pivot is the first nonzero entry of
    /// the current column at or below the current row.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv();
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let v = m.get(r, c) - &(&factor * m.get(row, c));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Canonical nullspace basis as columns: one column per free variable,
    /// that variable set to 1 and the other free variables to 0, in
    /// increasing free-column order.
    pub fn nullspace_basis(&self) -> Matrix {
        let Rref { matrix: r, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(self.field, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, self.field.one());
            for (i, &pc) in pivots.iter().enumerate() {
                basis.set(pc, k, -r.get(i, fc));
            }
        }
        basis
    }

    /// Rows form the RREF basis of `{ y : y · self = 0 }`.
    pub fn left_nullspace_basis(&self) -> Matrix {
        let rows = self.transpose().nullspace_basis().transpose();
        let Rref { matrix, pivots } = rows.rref();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        matrix.select_rows(&keep)
    }

    /// Solves `self · X = rhs` column by column.
    ///
    /// Returns the particular solution with every free variable set to 0,
    /// or `None` when some column is inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Result<Option<Matrix>> {
        if rhs.rows != self.rows {
            return Err(Error::Shape(format!(
                "solve: {}x{} system with {}-row right-hand side",
                self.rows, self.cols, rhs.rows
            )));
        }
        if rhs.field != self.field {
            return Err(Error::FieldMismatch(self.field, rhs.field));
        }
        let Rref { matrix: r, pivots } = self.hstack(rhs).rref();
        if pivots.last().is_some_and(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for k in 0..rhs.cols {
                x.set(pc, k, r.get(i, self.cols + k).clone());
            }
        }
        Ok(Some(x))
    }

    /// Like [`Matrix::solve`], but eliminating the unknowns in the given
    /// order, so a different particular solution is picked in general.
    pub fn solve_with_order(&self, rhs: &Matrix, order: &[usize]) -> Result<Option<Matrix>> {
        if order.len() != self.cols {
            return Err(Error::Shape(format!(
                "variable order of length {} for {} unknowns",
                order.len(),
                self.cols
            )));
        }
        let Some(y) = self.select_columns(order).solve(rhs)? else {
            return Ok(None);
        };
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols);
        for (k, &var) in order.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(var, c, y.get(k, c).clone());
            }
        }
        Ok(Some(x))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: ScalarField = ScalarField::Rationals;
    const GF7: ScalarField = ScalarField::Prime(7);

    #[test]
    fn rref_examples() {
        let id = Matrix::identity(Q, 2);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.pivots, vec![0, 1]);

        let z = Matrix::zeros(Q, 1, 1);
        let r = z.rref();
        assert_eq!(r.matrix, z);
        assert!(r.pivots.is_empty());

        let m = Matrix::from_i64(Q, 2, 2, &[2, 4, 1, 2]);
        let r = m.rref();
        assert_eq!(r.matrix, Matrix::from_i64(Q, 2, 2, &[1, 2, 0, 0]));
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.rank(), 1);
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(Matrix::identity(Q, 3).nullspace_basis(), Matrix::zeros(Q, 3, 0));
        assert_eq!(
            Matrix::from_i64(Q, 1, 2, &[1, 1]).nullspace_basis(),
            Matrix::from_i64(Q, 2, 1, &[-1, 1])
        );
        assert_eq!(Matrix::zeros(Q, 3, 2).nullspace_basis(), Matrix::identity(Q, 2));
    }

    #[test]
    fn left_nullspace_examples() {
        assert_eq!(Matrix::identity(Q, 3).left_nullspace_basis(), Matrix::zeros(Q, 0, 3));
        assert_eq!(
            Matrix::from_i64(Q, 2, 1, &[1, 1]).left_nullspace_basis(),
            Matrix::from_i64(Q, 1, 2, &[1, -1])
        );
        assert_eq!(Matrix::zeros(Q, 2, 3).left_nullspace_basis(), Matrix::identity(Q, 2));
    }

    #[test]
    fn solve_examples() {
        let b = Matrix::from_i64(Q, 3, 1, &[4, -1, 7]);
        assert_eq!(Matrix::identity(Q, 3).solve(&b).unwrap(), Some(b));

        let m = Matrix::from_i64(Q, 1, 2, &[1, 1]);
        let x = m.solve(&Matrix::from_i64(Q, 1, 1, &[2])).unwrap();
        assert_eq!(x, Some(Matrix::from_i64(Q, 2, 1, &[2, 0])));

        let x = Matrix::zeros(Q, 1, 1).solve(&Matrix::from_i64(Q, 1, 1, &[1])).unwrap();
        assert_eq!(x, None);

        assert!(m.solve(&Matrix::zeros(Q, 2, 1)).is_err());
    }

    #[test]
    fn solve_with_reversed_order_picks_other_particular_solution() {
        let m = Matrix::from_i64(Q, 1, 2, &[1, 1]);
        let b = Matrix::from_i64(Q, 1, 1, &[2]);
        let x = m.solve_with_order(&b, &[1, 0]).unwrap().unwrap();
        assert_eq!(x, Matrix::from_i64(Q, 2, 1, &[0, 2]));
    }

    #[test]
    fn empty_shapes() {
        let m = Matrix::zeros(Q, 0, 3);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.nullspace_basis(), Matrix::identity(Q, 3));
        assert_eq!(m.left_nullspace_basis(), Matrix::zeros(Q, 0, 0));
        let n = Matrix::zeros(Q, 3, 0);
        assert_eq!(n.nullspace_basis(), Matrix::zeros(Q, 0, 0));
        assert_eq!(n.left_nullspace_basis(), Matrix::identity(Q, 3));
        assert_eq!(n.mul(&m), Matrix::zeros(Q, 3, 3));
    }

    #[test]
    fn display_form() {
        let m = Matrix::from_i64(Q, 2, 2, &[1, 0, -3, 2]).scale(&Q.parse_scalar("1/2").unwrap());
        assert_eq!(m.to_string(), "2x2 [1/2, 0; -3/2, 1]");
    }

    fn matrix(field: ScalarField) -> impl Strategy<Value = Matrix> {
        (0usize..6, 0usize..6).prop_flat_map(move |(r, c)| {
            prop::collection::vec(prop_oneof![3 => Just(0i64), 7 => -3i64..=3], r * c)
                .prop_map(move |v| Matrix::from_i64(field, r, c, &v))
        })
    }

    fn any_matrix() -> impl Strategy<Value = Matrix> {
        prop_oneof![matrix(Q), matrix(GF7)]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn rref_is_idempotent(m in any_matrix()) {
            let r = m.rref();
            prop_assert_eq!(r.matrix.rref(), r.clone());
            prop_assert!(r.pivots.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn rank_of_transpose(m in any_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn nullspaces_annihilate(m in any_matrix()) {
            let n = m.nullspace_basis();
            prop_assert!(m.mul(&n).is_zero());
            prop_assert_eq!(m.cols(), m.rank() + n.cols());
            prop_assert_eq!(n.rank(), n.cols());
            let l = m.left_nullspace_basis();
            prop_assert!(l.mul(&m).is_zero());
            prop_assert_eq!(l.rows(), m.rows() - m.rank());
            prop_assert_eq!(l.rref().matrix, l);
        }

        #[test]
        fn solve_recovers_consistent_rhs(
            (m, x) in any_matrix().prop_flat_map(|m| {
                let (f, c) = (m.field(), m.cols());
                (Just(m), prop::collection::vec(-3i64..=3, c).prop_map(move |v| Matrix::from_i64(f, c, 1, &v)))
            })
        ) {
            let b = m.mul(&x);
            let sol = m.solve(&b).unwrap().expect("consistent system");
            prop_assert_eq!(m.mul(&sol), b);
        }
    }
}
