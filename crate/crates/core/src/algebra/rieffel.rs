//! Rieffel deformation of the graded product by the bicharacter `Λ_Θ`.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::Zero;

use super::element::{AlgebraElement, Degree};
use super::presentation::ThetaMatrix;
use crate::error::{Error, Result};
use crate::phase::{Phase, PhaseScalar};

/// `Λ(g, h) = ∏_{j<k} λ_jk^{g_k h_j}`.
pub fn lambda_cocycle(theta: &ThetaMatrix, g: &[i64], h: &[i64]) -> Phase {
    let m = theta.m();
    debug_assert!(g.len() == m && h.len() == m);
    let mut acc = Rational64::zero();
    for j in 0..m {
        if h[j] == 0 {
            continue;
        }
        for k in (j + 1)..m {
            if g[k] != 0 {
                acc += theta.get(j, k) * Rational64::from_integer(g[k] * h[j]);
            }
        }
    }
    Phase::from_angle(acc)
}

fn check_dims(x: &AlgebraElement, theta: &ThetaMatrix) -> Result<()> {
    let m = x.presentation().m();
    if theta.m() != m {
        return Err(Error::DimensionMismatch { expected: m, got: theta.m() });
    }
    Ok(())
}

fn components(x: &AlgebraElement) -> BTreeMap<Degree, AlgebraElement> {
    x.degrees().into_iter().map(|d| {
        let c = x.degree_component(&d);
        (d, c)
    }).collect()
}

/// `a_g ⋆ b_h = Λ(g, h) a_g b_h`, extended bilinearly.
pub fn rieffel_product(x: &AlgebraElement, y: &AlgebraElement, theta: &ThetaMatrix) -> Result<AlgebraElement> {
    check_dims(x, theta)?;
    let mut out = AlgebraElement::zero(x.presentation());
    let ys = components(y);
    for (g, xg) in components(x) {
        for (h, yh) in &ys {
            let prod = xg.multiply(yh)?;
            let phase = lambda_cocycle(theta, &g, h);
            out = out.try_add(&prod.scale(&PhaseScalar::from_phase(phase)))?;
        }
    }
    Ok(out)
}

/// `a_g† = conj(Λ(−g, g)) a_g*`, extended antilinearly.
pub fn rieffel_involute(x: &AlgebraElement, theta: &ThetaMatrix) -> Result<AlgebraElement> {
    check_dims(x, theta)?;
    let mut out = AlgebraElement::zero(x.presentation());
    for (g, xg) in components(x) {
        let neg: Degree = g.iter().map(|v| -v).collect();
        let phase = lambda_cocycle(theta, &neg, &g).conj();
        out = out.try_add(&xg.involute().scale(&PhaseScalar::from_phase(phase)))?;
    }
    Ok(out)
}
