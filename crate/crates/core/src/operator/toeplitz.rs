//! The truncated unilateral shift `S` and `Q = i(1 + S)(1 − S)⁻¹`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::cayley::cayley;
use super::rep::OperatorReport;
use crate::error::{Error, Result};

/// Residual tolerance for the Toeplitz identities.
pub const TOEPLITZ_TOLERANCE: f64 = 1e-10;

/// `S δ_k = δ_{k+1}`, with `S δ_{N−1} = 0`.
pub fn truncated_shift(n: usize) -> DMatrix<Complex64> {
    let mut s = DMatrix::zeros(n, n);
    for k in 0..n.saturating_sub(1) {
        s[(k + 1, k)] = Complex64::new(1.0, 0.0);
    }
    s
}

/// `Q = i(1 + S)(1 − S)⁻¹`; `1 − S` is unipotent, so always invertible.
pub fn toeplitz_generator(n: usize) -> Result<DMatrix<Complex64>> {
    if n < 3 {
        return Err(Error::Precondition(format!("truncation size {n} is below 3")));
    }
    let s = truncated_shift(n);
    let id = DMatrix::<Complex64>::identity(n, n);
    let one_minus = &id - &s;
    // Q (1 − S) = i(1 + S): solve (1 − S)ᵀ Qᵀ = (i(1 + S))ᵀ.
    let rhs = ((&id + &s) * Complex64::i()).transpose();
    let q = one_minus
        .transpose()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("1 − S".into()))?
        .transpose();
    Ok(q)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ToeplitzReport {
    pub size: usize,
    pub identities: Vec<OperatorReport>,
}

impl ToeplitzReport {
    pub fn passed(&self) -> bool {
        self.identities.iter().all(|r| r.pass)
    }
}

fn on_interior(identity: &str, m: &DMatrix<Complex64>, n: usize) -> OperatorReport {
    let (residual, worst) = (0..n - 1)
        .map(|k| (m.column(k).norm(), k))
        .fold((0.0, None), |acc, (r, k)| if r > acc.0 { (r, Some(k)) } else { acc });
    let pass = residual < TOEPLITZ_TOLERANCE;
    OperatorReport {
        identity: identity.into(),
        residual,
        tolerance: TOEPLITZ_TOLERANCE,
        pass,
        witness: if pass { None } else { worst.map(|k| vec![k as i64]) },
    }
}

/// `(Q + i)·(1/2i)(1 − S) = 1`, `(Q*Q + 1)·¼(1 − S)(1 − S*) = 1` and
/// `cayley(Q) = S`, each on columns `0..N−2`.
pub fn toeplitz_suite(n: usize) -> Result<ToeplitzReport> {
    let q = toeplitz_generator(n)?;
    let s = truncated_shift(n);
    let id = DMatrix::<Complex64>::identity(n, n);
    let i = Complex64::i();
    let first = (&q + &id * i) * ((&id - &s) / (i * 2.0)) - &id;
    let second = (q.adjoint() * &q + &id) * ((&id - &s) * (&id - s.adjoint()) / Complex64::new(4.0, 0.0)) - &id;
    let c = cayley(&q)?.transform;
    Ok(ToeplitzReport {
        size: n,
        identities: vec![
            on_interior("(Q + i)(1 - S)/(2i) = 1", &first, n),
            on_interior("(Q*Q + 1)(1 - S)(1 - S*)/4 = 1", &second, n),
            on_interior("cayley(Q) = S", &(c - &s), n),
        ],
    })
}
