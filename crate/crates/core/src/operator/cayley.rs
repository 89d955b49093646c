//! Cayley transforms `c = (T − i)(T + i)⁻¹` of finite matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Unitarity defects at or below this count as regular self-adjoint.
pub const REGULARITY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct CayleyReport {
    pub transform: DMatrix<Complex64>,
    /// `‖T − T*‖` (Frobenius).
    pub hermitian_defect: f64,
    /// `‖c* c − 1‖` (Frobenius).
    pub isometry_defect: f64,
    /// `‖c c* − 1‖` (Frobenius).
    pub coisometry_defect: f64,
    pub regular_self_adjoint: bool,
}

fn i_times(n: usize) -> DMatrix<Complex64> {
    DMatrix::identity(n, n) * Complex64::i()
}

pub fn cayley(t: &DMatrix<Complex64>) -> Result<CayleyReport> {
    if !t.is_square() {
        return Err(Error::DimensionMismatch { expected: t.nrows(), got: t.ncols() });
    }
    let n = t.nrows();
    let plus = t + i_times(n);
    let minus = t - i_times(n);
    // c = (T − i)(T + i)⁻¹, i.e. c (T + i) = (T − i); solve the transposed system.
    let lu = plus.transpose().lu();
    let transform = lu
        .solve(&minus.transpose())
        .ok_or_else(|| Error::Singular("T + i is not invertible; the input is not Hermitian".into()))?
        .transpose();
    if transform.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Singular("T + i is numerically singular".into()));
    }
    let id = DMatrix::<Complex64>::identity(n, n);
    let isometry_defect = (transform.adjoint() * &transform - &id).norm();
    let coisometry_defect = (&transform * transform.adjoint() - &id).norm();
    let hermitian_defect = (t - t.adjoint()).norm();
    Ok(CayleyReport {
        regular_self_adjoint: isometry_defect <= REGULARITY_TOLERANCE && coisometry_defect <= REGULARITY_TOLERANCE,
        transform,
        hermitian_defect,
        isometry_defect,
        coisometry_defect,
    })
}

/// Lower bound `‖c* c − 1‖ ≥ 2 ‖T − T*‖₂ / (‖T‖₂ + 1)²`, with the spectral
/// norms bounded through Frobenius norms.
pub fn defect_lower_bound(t: &DMatrix<Complex64>) -> f64 {
    let n = t.nrows() as f64;
    let skew = (t - t.adjoint()).norm() / n.sqrt();
    2.0 * skew / (t.norm() + 1.0).powi(2)
}

/// Cayley transform of the truncated Toeplitz generator, measured on the
/// columns that the truncation leaves intact.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeficiencyReport {
    pub size: usize,
    /// `‖(c* c − 1) δ_k‖`, maximized over interior columns.
    pub isometry_defect: f64,
    /// `‖(c c* − 1) δ_0‖`.
    pub coisometry_defect: f64,
    /// Isometric on the interior but not coisometric.
    pub non_unitary_isometry: bool,
}

pub fn deficiency_model(n: usize) -> Result<DeficiencyReport> {
    let q = super::toeplitz::toeplitz_generator(n)?;
    let c = cayley(&q)?.transform;
    let id = DMatrix::<Complex64>::identity(n, n);
    let iso = c.adjoint() * &c - &id;
    let co = &c * c.adjoint() - &id;
    let isometry_defect = (0..n - 1).map(|k| iso.column(k).norm()).fold(0.0, f64::max);
    let coisometry_defect = co.column(0).norm();
    Ok(DeficiencyReport {
        size: n,
        isometry_defect,
        coisometry_defect,
        non_unitary_isometry: isometry_defect <= REGULARITY_TOLERANCE && coisometry_defect > REGULARITY_TOLERANCE,
    })
}
