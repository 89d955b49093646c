//! Exact scalars `Σ_s c_s √s` with `c_s` in the rational phase ring and
//! `s` square-free.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::phase::{Phase, PhaseScalar};
use crate::scalar::Scalar;

/// `n = r² s` with `s` square-free; returns `(r, s)`.
pub fn split_square(n: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 1);
    }
    let (mut r, mut s, mut rest) = (1u64, 1u64, n);
    let mut p = 2u64;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        r *= p.pow(e / 2);
        if e % 2 == 1 {
            s *= p;
        }
        p += 1;
    }
    (r, s * rest)
}

#[derive(Clone, Default)]
pub struct SurdScalar {
    parts: BTreeMap<u64, PhaseScalar>,
}

impl SurdScalar {
    /// `√n`.
    pub fn sqrt(n: u64) -> SurdScalar {
        let (r, s) = split_square(n);
        SurdScalar::from_part(s, PhaseScalar::from_int(r as i64))
    }

    pub fn from_part(s: u64, c: PhaseScalar) -> SurdScalar {
        let mut out = SurdScalar::default();
        out.add_part(s, c);
        out
    }

    pub fn from_phase_scalar(c: PhaseScalar) -> SurdScalar {
        SurdScalar::from_part(1, c)
    }

    fn add_part(&mut self, s: u64, c: PhaseScalar) {
        let e = self.parts.entry(s).or_default();
        *e += &c;
        if e.is_formally_zero() {
            self.parts.remove(&s);
        }
    }

    pub fn parts(&self) -> &BTreeMap<u64, PhaseScalar> {
        &self.parts
    }

    /// Exactly zero in the square-free basis. Distinct surds can still be
    /// dependent over the cyclotomic coefficients (`√2 = e(1/8) + e(−1/8)`),
    /// so a `false` here is confirmed by the complex value before reporting.
    pub fn is_exact_zero(&self) -> bool {
        self.parts.values().all(PhaseScalar::value_is_zero)
    }
}

impl fmt::Debug for SurdScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SurdScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (s, c) in &self.parts {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *s == 1 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})·√{s}")?;
            }
        }
        Ok(())
    }
}

impl PartialEq for SurdScalar {
    fn eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_exact_zero()
    }
}

impl Add for SurdScalar {
    type Output = SurdScalar;
    fn add(mut self, rhs: SurdScalar) -> SurdScalar {
        for (s, c) in rhs.parts {
            self.add_part(s, c);
        }
        self
    }
}

impl Neg for SurdScalar {
    type Output = SurdScalar;
    fn neg(self) -> SurdScalar {
        SurdScalar { parts: self.parts.into_iter().map(|(s, c)| (s, -c)).collect() }
    }
}

impl Sub for SurdScalar {
    type Output = SurdScalar;
    fn sub(self, rhs: SurdScalar) -> SurdScalar {
        self + (-rhs)
    }
}

impl Mul for SurdScalar {
    type Output = SurdScalar;
    fn mul(self, rhs: SurdScalar) -> SurdScalar {
        let mut out = SurdScalar::default();
        for (s1, c1) in &self.parts {
            for (s2, c2) in &rhs.parts {
                let (r, s) = split_square(s1 * s2);
                out.add_part(s, (c1 * c2).scale(&BigRational::from_integer((r as i64).into())));
            }
        }
        out
    }
}

impl Zero for SurdScalar {
    fn zero() -> Self {
        SurdScalar::default()
    }
    fn is_zero(&self) -> bool {
        self.is_exact_zero()
    }
}

impl One for SurdScalar {
    fn one() -> Self {
        SurdScalar::from_phase_scalar(PhaseScalar::one())
    }
}

impl Scalar for SurdScalar {
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        SurdScalar { parts: self.parts.iter().map(|(s, c)| (*s, c.conj())).collect() }
    }
    fn from_phase(p: Phase) -> Self {
        SurdScalar::from_phase_scalar(PhaseScalar::from_phase(p))
    }
    fn from_rational(c: &BigRational) -> Self {
        SurdScalar::from_phase_scalar(PhaseScalar::from_rational(c.clone()))
    }
    fn to_complex(&self) -> Complex64 {
        self.parts.iter().map(|(s, c)| c.to_complex() * (*s as f64).sqrt()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_free_split() {
        assert_eq!(split_square(12), (2, 3));
        assert_eq!(split_square(50), (5, 2));
        assert_eq!(split_square(49), (7, 1));
        assert_eq!(split_square(1), (1, 1));
        assert_eq!(split_square(30), (1, 30));
    }

    #[test]
    fn surd_arithmetic() {
        let s2 = SurdScalar::sqrt(2);
        assert_eq!(s2.clone() * s2.clone(), SurdScalar::from_int(2));
        assert_eq!(SurdScalar::sqrt(6), SurdScalar::sqrt(2) * SurdScalar::sqrt(3));
        assert_eq!(SurdScalar::sqrt(8), SurdScalar::from_int(2) * SurdScalar::sqrt(2));
        assert!((SurdScalar::sqrt(3) - SurdScalar::sqrt(3)).is_exact_zero());
        assert!(!(SurdScalar::sqrt(3) - SurdScalar::sqrt(2)).is_exact_zero());
        let z = SurdScalar::sqrt(5) * SurdScalar::from_phase(Phase::from_ratio(1, 4));
        assert!((z.to_complex() - Complex64::new(0.0, 5f64.sqrt())).norm() < 1e-15);
        assert_eq!(z.conj() * z, SurdScalar::from_int(5));
    }
}
