//! Twisted convolution algebras of finite groupoids.
//!
//! `(f * h)(γ) = Σ_{αβ = γ} f(α) h(β) φ(α, β)` and
//! `f*(γ) = conj(φ(γ⁻¹, γ)) · conj(f(γ⁻¹))`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{FiniteGroupoid, OneCochain, TwoCocycle};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct ConvolutionElement<S> {
    fingerprint: u64,
    coeffs: BTreeMap<usize, S>,
}

impl<S: Scalar> ConvolutionElement<S> {
    pub fn zero(g: &FiniteGroupoid) -> Self {
        ConvolutionElement { fingerprint: g.fingerprint(), coeffs: BTreeMap::new() }
    }

    /// Indicator of one arrow.
    pub fn delta(g: &FiniteGroupoid, a: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(a, S::one());
        ConvolutionElement { fingerprint: g.fingerprint(), coeffs }
    }

    pub fn from_coeffs(g: &FiniteGroupoid, coeffs: impl IntoIterator<Item = (usize, S)>) -> Result<Self> {
        let mut out = ConvolutionElement::zero(g);
        for (a, c) in coeffs {
            if a >= g.len() {
                return Err(Error::Precondition(format!("arrow index {a} out of range")));
            }
            out.add_at(a, c);
        }
        Ok(out)
    }

    fn add_at(&mut self, a: usize, c: S) {
        let e = self.coeffs.entry(a).or_insert_with(S::zero);
        *e = e.clone() + c;
        if S::EXACT && e.is_zero() {
            self.coeffs.remove(&a);
        }
    }

    pub fn coeff(&self, a: usize) -> S {
        self.coeffs.get(&a).cloned().unwrap_or_else(S::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, S> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.fingerprint != other.fingerprint {
            return Err(Error::GroupoidMismatch);
        }
        let mut out = self.clone();
        for (a, c) in &other.coeffs {
            out.add_at(*a, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = ConvolutionElement { fingerprint: self.fingerprint, coeffs: BTreeMap::new() };
        for (a, c) in &self.coeffs {
            out.add_at(*a, c.clone() * s.clone());
        }
        out
    }

    /// Largest coefficient modulus of `self − other`.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut keys: Vec<usize> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .map(|a| (self.coeff(a) - other.coeff(a)).to_complex().norm())
            .fold(0.0, f64::max)
    }
}

fn check(g: &FiniteGroupoid, fp: u64, twist: &TwoCocycle) -> Result<()> {
    if fp != g.fingerprint() || twist.fingerprint() != g.fingerprint() {
        return Err(Error::GroupoidMismatch);
    }
    Ok(())
}

pub fn convolution<S: Scalar>(
    g: &FiniteGroupoid,
    x: &ConvolutionElement<S>,
    y: &ConvolutionElement<S>,
    twist: &TwoCocycle,
) -> Result<ConvolutionElement<S>> {
    check(g, x.fingerprint, twist)?;
    check(g, y.fingerprint, twist)?;
    let mut out = ConvolutionElement::zero(g);
    for (&a, fa) in &x.coeffs {
        let source = g.arrow(a).source;
        for (&b, fb) in &y.coeffs {
            if g.arrow(b).target != source {
                continue;
            }
            let ab = g.compose(a, b).expect("closed under composition");
            let phase = twist.get(a, b).ok_or(Error::UndefinedPair(a, b))?;
            out.add_at(ab, fa.clone() * fb.clone() * S::from_phase(phase));
        }
    }
    Ok(out)
}

pub fn involution<S: Scalar>(
    g: &FiniteGroupoid,
    x: &ConvolutionElement<S>,
    twist: &TwoCocycle,
) -> Result<ConvolutionElement<S>> {
    check(g, x.fingerprint, twist)?;
    let mut out = ConvolutionElement::zero(g);
    for (&a, fa) in &x.coeffs {
        let inv = g.inverse(a);
        let phase = twist.get(a, inv).ok_or(Error::UndefinedPair(a, inv))?;
        // The coefficient at γ = a⁻¹ is conj(φ(γ⁻¹, γ)) conj(f(γ⁻¹)) = conj(φ(a, a⁻¹) f(a)).
        out.add_at(inv, (fa.clone() * S::from_phase(phase)).conj());
    }
    Ok(out)
}

/// Pointwise multiplication by `ψ`. It carries `∂ψ`-twisted convolution to
/// untwisted convolution.
pub fn twist_by_cochain<S: Scalar>(
    g: &FiniteGroupoid,
    x: &ConvolutionElement<S>,
    psi: &OneCochain,
) -> Result<ConvolutionElement<S>> {
    if x.fingerprint != g.fingerprint() {
        return Err(Error::GroupoidMismatch);
    }
    let mut out = ConvolutionElement::zero(g);
    for (&a, fa) in &x.coeffs {
        out.add_at(a, fa.clone() * S::from_phase(psi.get(a)));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixUnitReport {
    pub size: usize,
    pub products_checked: usize,
    pub mismatches: usize,
    pub first_mismatch: Option<(usize, usize)>,
}

impl MatrixUnitReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

/// Compare `δ_α * δ_β` (trivial twist) with `e_{xy} e_{zw} = δ_{yz} e_{xw}`,
/// where arrow `α` corresponds to `e_{target, source}`.
pub fn matrix_unit_check(g: &FiniteGroupoid) -> Result<MatrixUnitReport> {
    let iso = g
        .pair_isomorphism()
        .ok_or_else(|| Error::NotPairGroupoid("matrix units need a pair groupoid".into()))?;
    let n = g.objects().len();
    let mut unit_of = BTreeMap::new();
    for (a, &(x, y)) in iso.iter().enumerate() {
        unit_of.insert((x, y), a);
    }
    let trivial = TwoCocycle::trivial(g);
    let mut report = MatrixUnitReport { size: n, products_checked: 0, mismatches: 0, first_mismatch: None };
    for a in 0..g.len() {
        for b in 0..g.len() {
            report.products_checked += 1;
            let lhs = convolution::<crate::phase::PhaseScalar>(
                g,
                &ConvolutionElement::delta(g, a),
                &ConvolutionElement::delta(g, b),
                &trivial,
            )?;
            let ((x, y), (z, w)) = (iso[a], iso[b]);
            let rhs = if y == z {
                ConvolutionElement::delta(g, unit_of[&(x, w)])
            } else {
                ConvolutionElement::zero(g)
            };
            if lhs != rhs {
                report.mismatches += 1;
                report.first_mismatch.get_or_insert((a, b));
            }
        }
    }
    Ok(report)
}
