//! Scalar fields shared by the convolution algebras and the operator lab.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::phase::{rational_to_f64, Phase, PhaseScalar};

/// Coefficient ring with a conjugation, embedding the rational phases.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Whether equality is exact (formal) rather than floating point.
    const EXACT: bool;

    fn conj(&self) -> Self;
    fn from_phase(p: Phase) -> Self;
    fn from_rational(c: &BigRational) -> Self;
    fn to_complex(&self) -> Complex64;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(n.into()))
    }
}

impl Scalar for PhaseScalar {
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        PhaseScalar::conj(self)
    }
    fn from_phase(p: Phase) -> Self {
        PhaseScalar::from_phase(p)
    }
    fn from_rational(c: &BigRational) -> Self {
        PhaseScalar::from_rational(c.clone())
    }
    fn to_complex(&self) -> Complex64 {
        PhaseScalar::to_complex(self)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn from_phase(p: Phase) -> Self {
        p.to_complex()
    }
    fn from_rational(c: &BigRational) -> Self {
        Complex64::new(rational_to_f64(c), 0.0)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}
