//! Positivity of `[⟨ξ_k, π(a_k* a_l) ξ_l⟩]_{k,l}` for diagonal
//! representations of the degree-0 part.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Signed;
use serde::Serialize;

use crate::algebra::{AlgebraElement, Presentation};
use crate::characters::{evaluate, Character};
use crate::error::{Error, Result};
use crate::phase::PhaseScalar;
use crate::window::lattice_box;

/// `π(x) δ_n = χ_n(x) δ_n` for degree-0 `x`.
#[derive(Clone, Debug)]
pub struct DiagonalRep {
    pres: Arc<Presentation>,
    points: Vec<Character>,
}

impl DiagonalRep {
    pub fn new(pres: &Arc<Presentation>, points: Vec<Character>) -> Result<DiagonalRep> {
        if let Some(p) = points.iter().find(|p| p.dim() != pres.m()) {
            return Err(Error::DimensionMismatch { expected: pres.m(), got: p.dim() });
        }
        Ok(DiagonalRep { pres: pres.clone(), points })
    }

    /// One basis vector per lattice point of `∏_j [0, M_j]`.
    pub fn lattice(pres: &Arc<Presentation>, bounds: &[u32]) -> Result<DiagonalRep> {
        DiagonalRep::new(pres, lattice_box(bounds).iter().map(|p| Character::lattice(p)).collect())
    }

    pub fn dim(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Character] {
        &self.points
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InducibilityVerdict {
    pub size: usize,
    pub min_eigenvalue: f64,
    /// Exact value for a single-element family.
    pub exact_value: Option<String>,
    /// `Σ_{k,l} ⟨ξ_k, π(a_k* a_l) ξ_l⟩`.
    pub total: f64,
    pub positive: bool,
}

pub const PSD_TOLERANCE: f64 = 1e-9;

/// Assemble the Gram matrix of the family and test it for positive
/// semidefiniteness: exactly for one element, by eigenvalues otherwise.
pub fn inducibility_matrix_check(rep: &DiagonalRep, family: &[(AlgebraElement, Vec<PhaseScalar>)]) -> Result<InducibilityVerdict> {
    let mut degree = None;
    for (a, xi) in family {
        if xi.len() != rep.dim() {
            return Err(Error::DimensionMismatch { expected: rep.dim(), got: xi.len() });
        }
        if a.presentation().m() != rep.pres.m() {
            return Err(Error::PresentationMismatch);
        }
        if a.is_zero() {
            continue;
        }
        let d = a.homogeneous_degree().ok_or_else(|| Error::MixedDegrees(format!("{a} is not homogeneous")))?;
        match &degree {
            None => degree = Some(d),
            Some(g) if *g != d => return Err(Error::MixedDegrees(format!("degrees {g:?} and {d:?} in one family"))),
            Some(_) => {}
        }
    }
    let n = family.len();
    let mut gram = vec![vec![PhaseScalar::zero(); n]; n];
    for k in 0..n {
        let ak = family[k].0.involute();
        for l in 0..n {
            let prod = ak.multiply(&family[l].0)?;
            let mut acc = PhaseScalar::zero();
            for (i, chi) in rep.points.iter().enumerate() {
                let (xk, xl) = (&family[k].1[i], &family[l].1[i]);
                if xk.is_formally_zero() || xl.is_formally_zero() {
                    continue;
                }
                acc += &(&(&xk.conj() * &evaluate(chi, &prod)?) * xl);
            }
            gram[k][l] = acc;
        }
    }
    let dense = DMatrix::from_fn(n, n, |k, l| gram[k][l].to_complex());
    let total = dense.iter().map(|z| z.re).sum();
    if n == 0 {
        return Ok(InducibilityVerdict { size: 0, min_eigenvalue: 0.0, exact_value: None, total, positive: true });
    }
    let scale = dense.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let hermitian = (&dense + dense.adjoint()) * Complex64::new(0.5, 0.0);
    let min_eigenvalue = hermitian.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
    if n == 1 {
        let exact = gram[0][0].real_rational();
        let positive = match &exact {
            Some(v) => !v.is_negative(),
            None => min_eigenvalue >= -PSD_TOLERANCE * scale,
        };
        return Ok(InducibilityVerdict {
            size: 1,
            min_eigenvalue,
            exact_value: exact.map(|v| v.to_string()),
            total,
            positive,
        });
    }
    Ok(InducibilityVerdict { size: n, min_eigenvalue, exact_value: None, total, positive: min_eigenvalue >= -PSD_TOLERANCE * scale })
}
