//! Coordinate-format sparse matrices over a [`Scalar`].

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<S> {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), S>,
}

/// One stored entry as `(row, col, re, im)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Triple {
    pub row: usize,
    pub col: usize,
    pub re: f64,
    pub im: f64,
}

impl<S: Scalar> SparseMatrix<S> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(values: impl IntoIterator<Item = S>) -> Self {
        let values: Vec<S> = values.into_iter().collect();
        let mut m = SparseMatrix::zero(values.len(), values.len());
        for (i, v) in values.into_iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), S> {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(S::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) outside a {}x{} matrix", self.rows, self.cols);
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    fn accumulate(&mut self, i: usize, j: usize, v: S) {
        let e = self.entries.entry((i, j)).or_insert_with(S::zero);
        *e = e.clone() + v;
        if S::EXACT && e.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, got: other.rows * other.cols });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (&(i, j), v) in &other.entries {
            out.accumulate(i, j, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = SparseMatrix::zero(self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            out.accumulate(i, j, v.clone() * s.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut by_row: BTreeMap<usize, Vec<(usize, &S)>> = BTreeMap::new();
        for (&(k, j), v) in &other.entries {
            by_row.entry(k).or_default().push((j, v));
        }
        let mut out = SparseMatrix::zero(self.rows, other.cols);
        for (&(i, k), a) in &self.entries {
            for &(j, b) in by_row.get(&k).into_iter().flatten() {
                out.accumulate(i, j, a.clone() * b.clone());
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = SparseMatrix::zero(self.cols, self.rows);
        for (&(i, j), v) in &self.entries {
            out.set(j, i, v.conj());
        }
        out
    }

    /// Nonzero entries of column `j`.
    pub fn column(&self, j: usize) -> Vec<(usize, S)> {
        self.entries.iter().filter(|((_, c), _)| *c == j).map(|(&(i, _), v)| (i, v.clone())).collect()
    }

    /// Largest Euclidean norm among the listed columns and the column
    /// attaining it.
    pub fn max_column_norm(&self, columns: &[usize]) -> (f64, Option<usize>) {
        let mut sums: BTreeMap<usize, f64> = BTreeMap::new();
        for (&(_, j), v) in &self.entries {
            *sums.entry(j).or_default() += v.to_complex().norm_sqr();
        }
        let mut best = (0.0, None);
        for &j in columns {
            let n = sums.get(&j).copied().unwrap_or(0.0).sqrt();
            if n > best.0 {
                best = (n, Some(j));
            }
        }
        best
    }

    /// First listed column holding a nonzero entry.
    pub fn first_nonzero_column(&self, columns: &[usize]) -> Option<usize> {
        let wanted: std::collections::BTreeSet<usize> = columns.iter().copied().collect();
        self.entries
            .iter()
            .filter(|(&(_, j), v)| wanted.contains(&j) && !v.is_zero())
            .map(|(&(_, j), _)| j)
            .min()
    }

    pub fn to_complex(&self) -> SparseMatrix<Complex64> {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(k, v)| (*k, v.to_complex())).collect(),
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            m[(i, j)] = v.to_complex();
        }
        m
    }

    pub fn triples(&self) -> Vec<Triple> {
        self.entries
            .iter()
            .map(|(&(row, col), v)| {
                let z = v.to_complex();
                Triple { row, col, re: z.re, im: z.im }
            })
            .collect()
    }
}

impl SparseMatrix<Complex64> {
    pub fn from_triples(rows: usize, cols: usize, triples: &[Triple]) -> Result<Self> {
        let mut m = SparseMatrix::zero(rows, cols);
        for t in triples {
            if t.row >= rows || t.col >= cols {
                return Err(Error::Precondition(format!("triple ({}, {}) outside a {rows}x{cols} matrix", t.row, t.col)));
            }
            m.set(t.row, t.col, Complex64::new(t.re, t.im));
        }
        Ok(m)
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for (&(i, j), a) in &self.entries {
            out[i] += a * v[j];
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::PhaseScalar;

    #[test]
    fn products_and_adjoints() {
        let mut a = SparseMatrix::<PhaseScalar>::zero(2, 2);
        a.set(0, 1, PhaseScalar::from_int(2));
        let b = a.adjoint();
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.get(0, 0), PhaseScalar::from_int(4));
        assert_eq!(ab.nnz(), 1);
        assert!(a.mul(&a).unwrap().entries().is_empty());
        assert_eq!(a.sub(&a).unwrap().nnz(), 0);
        assert_eq!(SparseMatrix::<PhaseScalar>::identity(3).max_column_norm(&[0, 2]).0, 1.0);
        let c = a.to_complex();
        let back = SparseMatrix::from_triples(2, 2, &c.triples()).unwrap();
        assert_eq!(back, c);
        assert!(a.mul(&SparseMatrix::zero(3, 1)).is_err());
        assert_eq!(a.first_nonzero_column(&[0]), None);
        assert_eq!(a.first_nonzero_column(&[0, 1]), Some(1));
    }
}
