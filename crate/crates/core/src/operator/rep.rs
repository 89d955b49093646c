//! Truncated Weyl representations on `ℓ²(∏_j [0, M_j])`:
//! `π(a_j) δ_n = (∏_{l<j} λ_{lj}^{n_l}) √n_j δ_{n−e_j}` and `π(a_j*) = π(a_j)*`.
//!
//! `π(a_j*)` would push the top layer `n_j = M_j` out of the window; those
//! images are dropped, and relations involving `a_j*` are checked only on
//! basis vectors strictly inside the window.

use std::collections::HashMap;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use super::sparse::SparseMatrix;
use super::surd::SurdScalar;
use crate::algebra::{AlgebraElement, FloatTheta, ThetaMatrix};
use crate::error::{Error, Result};
use crate::phase::{Phase, PhaseScalar};
use crate::scalar::Scalar;
use crate::window::{lattice_box, Point};

/// Default residual tolerance for float-mode relation checks.
pub const RELATION_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct TruncatedRep<S> {
    bounds: Vec<u32>,
    basis: Vec<Point>,
    index: HashMap<Point, usize>,
    gens: Vec<SparseMatrix<S>>,
    stars: Vec<SparseMatrix<S>>,
    lambda: Vec<Vec<S>>,
}

fn build<S: Scalar>(
    bounds: &[u32],
    lambda: Vec<Vec<S>>,
    phase: impl Fn(usize, &Point) -> S,
    sqrt: impl Fn(u64) -> S,
) -> Result<TruncatedRep<S>> {
    if bounds.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let basis = lattice_box(bounds);
    let index: HashMap<Point, usize> = basis.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let n = basis.len();
    let gens: Vec<SparseMatrix<S>> = (0..bounds.len())
        .map(|j| {
            let mut g = SparseMatrix::zero(n, n);
            for (col, k) in basis.iter().enumerate() {
                if k[j] == 0 {
                    continue;
                }
                let mut lower = k.clone();
                lower[j] -= 1;
                g.set(index[&lower], col, phase(j, k) * sqrt(k[j] as u64));
            }
            g
        })
        .collect();
    let stars = gens.iter().map(SparseMatrix::adjoint).collect();
    Ok(TruncatedRep { bounds: bounds.to_vec(), basis, index, gens, stars, lambda })
}

/// Exact representation for rational `Θ`.
pub fn weyl_rep(bounds: &[u32], theta: &ThetaMatrix) -> Result<TruncatedRep<SurdScalar>> {
    if theta.m() != bounds.len() {
        return Err(Error::DimensionMismatch { expected: bounds.len(), got: theta.m() });
    }
    let m = bounds.len();
    let lambda = (0..m).map(|j| (0..m).map(|k| SurdScalar::from_phase(theta.lambda(j, k))).collect()).collect();
    build(
        bounds,
        lambda,
        |j, k| {
            let angle = (0..j).fold(Rational64::zero(), |acc, l| acc + theta.get(l, j) * Rational64::from_integer(k[l]));
            SurdScalar::from_phase(Phase::from_angle(angle))
        },
        SurdScalar::sqrt,
    )
}

/// Double-precision representation; `Θ` may be irrational.
pub fn weyl_rep_float(bounds: &[u32], theta: &FloatTheta) -> Result<TruncatedRep<Complex64>> {
    if theta.m() != bounds.len() {
        return Err(Error::DimensionMismatch { expected: bounds.len(), got: theta.m() });
    }
    let m = bounds.len();
    let turn = |x: f64| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x);
    let lambda = (0..m).map(|j| (0..m).map(|k| turn(theta.get(j, k))).collect()).collect();
    build(
        bounds,
        lambda,
        |j, k| turn((0..j).map(|l| theta.get(l, j) * k[l] as f64).sum()),
        |n| Complex64::new((n as f64).sqrt(), 0.0),
    )
}

impl<S: Scalar> TruncatedRep<S> {
    pub fn m(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Point] {
        &self.basis
    }

    pub fn index_of(&self, p: &[i64]) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// `π(a_j)`, zero-based `j`.
    pub fn generator(&self, j: usize) -> &SparseMatrix<S> {
        &self.gens[j]
    }

    pub fn generator_star(&self, j: usize) -> &SparseMatrix<S> {
        &self.stars[j]
    }

    /// Overwrite one entry of `π(a_j)`, for negative controls.
    pub fn set_generator_entry(&mut self, j: usize, row: usize, col: usize, v: S) {
        self.gens[j].set(row, col, v);
        self.stars[j] = self.gens[j].adjoint();
    }

    /// `π(a_j)* π(a_j)`.
    pub fn number(&self, j: usize) -> SparseMatrix<S> {
        self.stars[j].mul(&self.gens[j]).expect("square")
    }

    /// Basis indices `n` with `n_j + depth ≤ M_j` for every `j`.
    pub fn interior(&self, depth: u32) -> Vec<usize> {
        (0..self.basis.len())
            .filter(|&i| self.basis[i].iter().zip(&self.bounds).all(|(&k, &b)| k + depth as i64 <= b as i64))
            .collect()
    }

    fn coefficient(c: &PhaseScalar) -> S {
        c.terms().fold(S::zero(), |acc, (p, r)| acc + S::from_rational(r) * S::from_phase(*p))
    }

    /// `π(x)` as the product of truncated generator matrices, term by term.
    pub fn matrix_of(&self, x: &AlgebraElement) -> Result<SparseMatrix<S>> {
        if x.presentation().m() != self.m() {
            return Err(Error::DimensionMismatch { expected: self.m(), got: x.presentation().m() });
        }
        let n = self.dim();
        let mut out = SparseMatrix::zero(n, n);
        for (key, c) in x.terms() {
            let mut term = SparseMatrix::identity(n).scale(&Self::coefficient(c));
            for l in key.word() {
                let g = if l.star { &self.stars[l.index] } else { &self.gens[l.index] };
                term = term.mul(g)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    fn verdict(&self, identity: String, residual: &SparseMatrix<S>, columns: &[usize], tolerance: f64) -> OperatorReport {
        let (norm, worst) = residual.max_column_norm(columns);
        if S::EXACT {
            let first = residual.first_nonzero_column(columns);
            OperatorReport {
                identity,
                residual: if first.is_none() { 0.0 } else { norm },
                tolerance: 0.0,
                pass: first.is_none(),
                witness: first.map(|c| self.basis[c].clone()),
            }
        } else {
            let pass = norm <= tolerance;
            OperatorReport { identity, residual: norm, tolerance, pass, witness: (!pass).then(|| worst.map(|c| self.basis[c].clone())).flatten() }
        }
    }

    /// `π(x)* = π(x*)` on basis vectors at depth `max letters of x` inside
    /// the window.
    pub fn adjoint_consistency(&self, x: &AlgebraElement, tolerance: f64) -> Result<OperatorReport> {
        let lhs = self.matrix_of(x)?.adjoint();
        let rhs = self.matrix_of(&x.involute())?;
        let depth = x.max_letter_count() as u32;
        Ok(self.verdict(format!("π({x})* = π(({x})*)"), &lhs.sub(&rhs)?, &self.interior(depth), tolerance))
    }
}

/// Residual of one operator identity on the checked basis vectors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorReport {
    pub identity: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// A basis vector on which the identity fails.
    pub witness: Option<Point>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationReport {
    pub exact: bool,
    pub dimension: usize,
    pub interior_dimension: usize,
    pub identities: Vec<OperatorReport>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.identities.iter().all(|r| r.pass)
    }
}

/// Every defining relation as an operator identity on the basis vectors
/// where it is meaningful, plus `π(a_j)* π(a_j) = diag(n_j)`.
pub fn check_relations<S: Scalar>(rep: &TruncatedRep<S>, tolerance: f64) -> Result<RelationReport> {
    let m = rep.m();
    let all: Vec<usize> = (0..rep.dim()).collect();
    let inner = rep.interior(1);
    let mut identities = Vec::new();
    for j in 0..m {
        let (a, s) = (rep.generator(j), rep.generator_star(j));
        let comm = a.mul(s)?.sub(&s.mul(a)?)?.sub(&SparseMatrix::identity(rep.dim()))?;
        identities.push(rep.verdict(format!("a{0} a{0}* - a{0}* a{0} - 1", j + 1), &comm, &inner, tolerance));
        let diag = SparseMatrix::diagonal(rep.basis().iter().map(|k| S::from_int(k[j])));
        identities.push(rep.verdict(format!("a{0}* a{0} - N{0}", j + 1), &rep.number(j).sub(&diag)?, &all, tolerance));
    }
    for j in 0..m {
        for k in 0..m {
            if j == k {
                continue;
            }
            let (aj, ak, sj) = (rep.generator(j), rep.generator(k), rep.generator_star(j));
            let lam = rep.lambda[j][k].clone();
            if j < k {
                let r = aj.mul(ak)?.sub(&ak.mul(aj)?.scale(&lam))?;
                identities.push(rep.verdict(format!("a{} a{} - λ{}{} a{} a{}", j + 1, k + 1, j + 1, k + 1, k + 1, j + 1), &r, &all, tolerance));
            }
            let r = sj.mul(ak)?.sub(&ak.mul(sj)?.scale(&lam.conj()))?;
            identities.push(rep.verdict(
                format!("a{}* a{} - λ{}{}⁻¹ a{} a{}*", j + 1, k + 1, j + 1, k + 1, k + 1, j + 1),
                &r,
                &inner,
                tolerance,
            ));
        }
    }
    Ok(RelationReport { exact: S::EXACT, dimension: rep.dim(), interior_dimension: inner.len(), identities })
}
