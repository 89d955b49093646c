//! Graph norms `‖ξ‖_a = ⟨ξ, (1 + π(a)*π(a)) ξ⟩^{1/2}` and the bound
//! `‖ξ‖_{a_i} ≤ (5/4) ‖ξ‖_b` for `b = Σ_i a_i* a_i`.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::rep::TruncatedRep;
use super::sparse::SparseMatrix;
use crate::algebra::AlgebraElement;
use crate::error::Result;
use crate::scalar::Scalar;

pub const DIRECTED_BOUND: f64 = 1.25;

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

/// `(‖ξ‖² + ‖Aξ‖²)^{1/2}`.
pub fn graph_norm_matrix(xi: &[Complex64], a: &SparseMatrix<Complex64>) -> f64 {
    (norm(xi).powi(2) + norm(&a.apply(xi)).powi(2)).sqrt()
}

pub fn graph_norm<S: Scalar>(xi: &[Complex64], a: &AlgebraElement, rep: &TruncatedRep<S>) -> Result<f64> {
    Ok(graph_norm_matrix(xi, &rep.matrix_of(a)?.to_complex()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphNormReport {
    pub samples: usize,
    pub checks: usize,
    pub violations: usize,
    pub max_ratio: f64,
    pub bound: f64,
    /// Index into the list and the offending vector as `[re, im]` pairs.
    pub counterexample: Option<(usize, Vec<[f64; 2]>)>,
}

impl GraphNormReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Random vector: half the draws have coordinates of widely varying size,
/// the other half decay geometrically from a random basis index so that
/// low-lying modes dominate.
pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let unit = |rng: &mut R| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    if rng.random_bool(0.5) {
        (0..n).map(|_| unit(rng) * 10f64.powf(rng.random_range(-3.0..0.0))).collect()
    } else {
        let start = rng.random_range(0..n.max(1));
        let r: f64 = rng.random_range(0.0..0.5);
        (0..n).map(|k| if k < start { Complex64::new(0.0, 0.0) } else { unit(rng) * r.powi((k - start) as i32) }).collect()
    }
}

/// Sample `samples` vectors and test `‖ξ‖_{a_i} ≤ (5/4)‖ξ‖_b` for every `i`,
/// with `π(b) = Σ_i π(a_i)* π(a_i)`.
pub fn graph_norm_directed_check<S: Scalar, R: Rng + ?Sized>(
    rep: &TruncatedRep<S>,
    a_list: &[AlgebraElement],
    samples: usize,
    rng: &mut R,
) -> Result<GraphNormReport> {
    let mats: Vec<SparseMatrix<Complex64>> =
        a_list.iter().map(|a| rep.matrix_of(a).map(|m| m.to_complex())).collect::<Result<_>>()?;
    let mut b = SparseMatrix::zero(rep.dim(), rep.dim());
    for t in &mats {
        b = b.add(&t.adjoint().mul(t)?)?;
    }
    let mut report =
        GraphNormReport { samples, checks: 0, violations: 0, max_ratio: 0.0, bound: DIRECTED_BOUND, counterexample: None };
    for _ in 0..samples {
        let xi = random_vector(rng, rep.dim());
        let nb = graph_norm_matrix(&xi, &b);
        for (i, t) in mats.iter().enumerate() {
            report.checks += 1;
            let ratio = graph_norm_matrix(&xi, t) / nb;
            report.max_ratio = report.max_ratio.max(ratio);
            if ratio > DIRECTED_BOUND {
                report.violations += 1;
                report.counterexample.get_or_insert_with(|| (i, xi.iter().map(|z| [z.re, z.im]).collect()));
            }
        }
    }
    Ok(report)
}
