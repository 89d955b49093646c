//! Rational phases `e^{2πi r}` and the rational group ring they span.
//!
//! A [`PhaseScalar`] is a finite sum `Σ c_r e^{2πi r}` with rational `c_r` and
//! `r ∈ [0, 1)`, stored formally. Equality compares complex values exactly:
//! with `N` the common denominator of the angles, both sides are read as
//! polynomials in `ζ_N` and reduced modulo the cyclotomic polynomial `Φ_N`.
//! So `1 + e(1/2)` equals zero and `e(1/3) + e(2/3)` equals `-1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A root of unity `e^{2πi r}` with `r` reduced into `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase {
    angle: Rational64,
}

impl Phase {
    pub fn one() -> Phase {
        Phase { angle: Rational64::zero() }
    }

    /// `e^{2πi r}` for an arbitrary rational `r`.
    pub fn from_angle(r: Rational64) -> Phase {
        Phase { angle: r - r.floor() }
    }

    /// `e^{2πi p/q}`.
    pub fn from_ratio(p: i64, q: i64) -> Phase {
        Phase::from_angle(Rational64::new(p, q))
    }

    /// `-1`.
    pub fn minus_one() -> Phase {
        Phase::from_ratio(1, 2)
    }

    /// The angle `r ∈ [0, 1)`.
    pub fn angle(&self) -> Rational64 {
        self.angle
    }

    pub fn is_one(&self) -> bool {
        self.angle.is_zero()
    }

    pub fn inv(self) -> Phase {
        Phase::from_angle(-self.angle)
    }

    pub fn conj(self) -> Phase {
        self.inv()
    }

    pub fn pow(self, n: i64) -> Phase {
        Phase::from_angle(self.angle * Rational64::from_integer(n))
    }

    pub fn to_complex(&self) -> Complex64 {
        let r = self.angle.to_f64().unwrap_or(0.0);
        let (s, c) = (2.0 * std::f64::consts::PI * r).sin_cos();
        Complex64::new(c, s)
    }
}

impl Mul for Phase {
    type Output = Phase;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Phase) -> Phase {
        Phase::from_angle(self.angle + rhs.angle)
    }
}

impl MulAssign for Phase {
    fn mul_assign(&mut self, rhs: Phase) {
        *self = *self * rhs;
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::one()
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({})", self.angle)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            write!(f, "1")
        } else {
            write!(f, "e({})", self.angle)
        }
    }
}

// Serialized as the angle string "p/q".
impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.angle.to_string())
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational64(&s).map(Phase::from_angle).map_err(serde::de::Error::custom)
    }
}

/// Parse `"p/q"` or `"p"` into an exact rational. Decimal notation is refused.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::MalformedRational(s.to_string());
    let parse_int = |u: &str| -> Result<BigInt> {
        let u = u.trim();
        if u.is_empty() || u.contains(['.', 'e', 'E']) {
            return Err(bad());
        }
        BigInt::from_str(u).map_err(|_| bad())
    };
    match t.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
        None => Ok(BigRational::from_integer(parse_int(t)?)),
    }
}

pub fn parse_rational64(s: &str) -> Result<Rational64> {
    let r = parse_rational(s)?;
    let n = r.numer().to_i64();
    let d = r.denom().to_i64();
    match (n, d) {
        (Some(n), Some(d)) => Ok(Rational64::new(n, d)),
        _ => Err(Error::MalformedRational(s.to_string())),
    }
}

pub fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Sign-folded phase of a single nonzero term `c·e(r)`: `r` if `c > 0`,
/// `r + 1/2` if `c < 0`.
pub fn term_phase(c: &BigRational, p: Phase) -> Phase {
    if c.is_negative() {
        p * Phase::minus_one()
    } else {
        p
    }
}

/// Coefficients of the cyclotomic polynomial `Φ_n`, lowest degree first.
fn cyclotomic(n: u64) -> Arc<Vec<i64>> {
    static MEMO: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = memo.lock().expect("cyclotomic memo poisoned").get(&n) {
        return p.clone();
    }
    // x^n − 1 divided by Φ_d for every proper divisor d.
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            poly = exact_div(&poly, &cyclotomic(d));
        }
    }
    let poly = Arc::new(poly);
    memo.lock().expect("cyclotomic memo poisoned").insert(n, poly.clone());
    poly
}

/// Quotient of integer polynomials by a monic divisor that divides exactly.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn lcm(a: u64, b: u64) -> u64 {
    num_integer::Integer::lcm(&a, &b)
}

/// Element of `ℚ(ζ_∞)`, written in the spanning set of rational phases.
#[derive(Clone, Default)]
pub struct PhaseScalar {
    terms: BTreeMap<Phase, BigRational>,
}

impl PhaseScalar {
    pub fn zero() -> PhaseScalar {
        PhaseScalar::default()
    }

    pub fn one() -> PhaseScalar {
        PhaseScalar::from_int(1)
    }

    pub fn from_rational(c: BigRational) -> PhaseScalar {
        PhaseScalar::term(Phase::one(), c)
    }

    pub fn from_int(n: i64) -> PhaseScalar {
        PhaseScalar::from_rational(int(n))
    }

    pub fn from_phase(p: Phase) -> PhaseScalar {
        PhaseScalar::term(p, BigRational::one())
    }

    pub fn term(p: Phase, c: BigRational) -> PhaseScalar {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(p, c);
        }
        PhaseScalar { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Phase, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, p: Phase, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn conj(&self) -> PhaseScalar {
        PhaseScalar {
            terms: self.terms.iter().map(|(p, c)| (p.conj(), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> PhaseScalar {
        if c.is_zero() {
            return PhaseScalar::zero();
        }
        PhaseScalar {
            terms: self.terms.iter().map(|(p, d)| (*p, d * c)).collect(),
        }
    }

    pub fn rotate(&self, q: Phase) -> PhaseScalar {
        PhaseScalar {
            terms: self.terms.iter().map(|(p, c)| (*p * q, c.clone())).collect(),
        }
    }

    /// The rational value, if the sum is supported on the trivial phase.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Phase::one()).cloned(),
            _ => None,
        }
    }

    pub fn single_term(&self) -> Option<(Phase, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(p, c)| (*p, c))
        } else {
            None
        }
    }

    /// Sign-folded phase of a single-term value.
    pub fn pure_phase(&self) -> Option<Phase> {
        self.single_term().map(|(p, c)| term_phase(c, p))
    }

    /// Whether the sum is formally empty (no stored terms).
    pub fn is_formally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `self / other` for a single-term divisor.
    pub fn div_single(&self, other: &PhaseScalar) -> Option<PhaseScalar> {
        let (p, c) = other.single_term()?;
        let inv = c.recip();
        Some(self.rotate(p.inv()).scale(&inv))
    }

    pub fn to_complex(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|(p, c)| p.to_complex() * rational_to_f64(c))
            .sum()
    }

    /// Common denominator of the angles.
    fn conductor(&self) -> u64 {
        self.terms.keys().fold(1u64, |n, p| lcm(n, *p.angle.denom() as u64))
    }

    /// Coefficients of the value in the basis `1, ζ_N, …, ζ_N^{φ(N)−1}`.
    fn reduced(&self) -> (u64, Vec<BigRational>) {
        let n = self.conductor();
        let mut coeffs = vec![BigRational::zero(); n as usize];
        for (p, c) in &self.terms {
            let k = (p.angle * Rational64::from_integer(n as i64)).to_integer() as usize;
            coeffs[k] += c;
        }
        let phi = cyclotomic(n);
        let deg = phi.len() - 1;
        for i in (deg..coeffs.len()).rev() {
            if coeffs[i].is_zero() {
                continue;
            }
            let c = coeffs[i].clone();
            for (j, &d) in phi.iter().enumerate() {
                if d != 0 {
                    coeffs[i - deg + j] -= &c * BigRational::from_integer(d.into());
                }
            }
        }
        coeffs.truncate(deg);
        (n, coeffs)
    }

    /// Exact test that the complex value vanishes.
    pub fn value_is_zero(&self) -> bool {
        if self.terms.len() <= 1 {
            return self.terms.is_empty();
        }
        // A value clearly away from zero in floating point is nonzero.
        let scale: f64 = self.terms.values().map(|c| rational_to_f64(c).abs()).sum();
        if self.to_complex().norm() > 1e-6 * scale {
            return false;
        }
        self.reduced().1.iter().all(Zero::is_zero)
    }

    /// Exact test that the value is real.
    pub fn is_real(&self) -> bool {
        (self - &self.conj()).value_is_zero()
    }

    /// The value as a rational number, if it is one.
    pub fn real_rational(&self) -> Option<BigRational> {
        if let Some(r) = self.as_rational() {
            return Some(r);
        }
        if let Some((p, c)) = self.single_term() {
            return if p.is_one() {
                Some(c.clone())
            } else if p == Phase::minus_one() {
                Some(-c.clone())
            } else {
                None
            };
        }
        let scale: f64 = self.terms.values().map(|c| rational_to_f64(c).abs()).sum();
        if self.to_complex().im.abs() > 1e-6 * scale {
            return None;
        }
        let (_, coeffs) = self.reduced();
        if coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(coeffs.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    /// `(r, c)` with `self = c·e(r)` and `c > 0`, decided exactly.
    ///
    /// The candidate angle is read off the floating-point argument with
    /// denominator `2N`, then confirmed by checking that `self·e(−r)` is a
    /// positive real (its imaginary part vanishes exactly).
    pub fn polar_phase(&self) -> Option<Phase> {
        if let Some((p, c)) = self.single_term() {
            return Some(term_phase(c, p));
        }
        let z = self.to_complex();
        if z.norm() < 1e-300 || self.value_is_zero() {
            return None;
        }
        let n = 2 * self.conductor() as i64;
        let turns = z.arg() / (2.0 * std::f64::consts::PI);
        let k = (turns * n as f64).round() as i64;
        let r = Phase::from_ratio(k, n);
        let w = self.rotate(r.inv());
        let imag = &w - &w.conj();
        if imag.value_is_zero() && w.to_complex().re > 0.0 {
            Some(r)
        } else {
            None
        }
    }
}

impl PartialEq for PhaseScalar {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms || (self - other).value_is_zero()
    }
}

impl Eq for PhaseScalar {}

impl Zero for PhaseScalar {
    fn zero() -> Self {
        PhaseScalar::zero()
    }
    fn is_zero(&self) -> bool {
        self.value_is_zero()
    }
}

impl One for PhaseScalar {
    fn one() -> Self {
        PhaseScalar::one()
    }
}

impl From<BigRational> for PhaseScalar {
    fn from(c: BigRational) -> Self {
        PhaseScalar::from_rational(c)
    }
}

impl From<Phase> for PhaseScalar {
    fn from(p: Phase) -> Self {
        PhaseScalar::from_phase(p)
    }
}

impl AddAssign<&PhaseScalar> for PhaseScalar {
    fn add_assign(&mut self, rhs: &PhaseScalar) {
        for (p, c) in &rhs.terms {
            self.add_term(*p, c.clone());
        }
    }
}

impl SubAssign<&PhaseScalar> for PhaseScalar {
    fn sub_assign(&mut self, rhs: &PhaseScalar) {
        for (p, c) in &rhs.terms {
            self.add_term(*p, -c.clone());
        }
    }
}

impl Add<&PhaseScalar> for &PhaseScalar {
    type Output = PhaseScalar;
    fn add(self, rhs: &PhaseScalar) -> PhaseScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&PhaseScalar> for &PhaseScalar {
    type Output = PhaseScalar;
    fn sub(self, rhs: &PhaseScalar) -> PhaseScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&PhaseScalar> for &PhaseScalar {
    type Output = PhaseScalar;
    fn mul(self, rhs: &PhaseScalar) -> PhaseScalar {
        let mut out = PhaseScalar::zero();
        for (p, c) in &self.terms {
            for (q, d) in &rhs.terms {
                out.add_term(*p * *q, c * d);
            }
        }
        out
    }
}

impl Neg for &PhaseScalar {
    type Output = PhaseScalar;
    fn neg(self) -> PhaseScalar {
        PhaseScalar {
            terms: self.terms.iter().map(|(p, c)| (*p, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<PhaseScalar> for PhaseScalar {
            type Output = PhaseScalar;
            fn $f(self, rhs: PhaseScalar) -> PhaseScalar {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&PhaseScalar> for PhaseScalar {
            type Output = PhaseScalar;
            fn $f(self, rhs: &PhaseScalar) -> PhaseScalar {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PhaseScalar {
    type Output = PhaseScalar;
    fn neg(self) -> PhaseScalar {
        -&self
    }
}

impl AddAssign for PhaseScalar {
    fn add_assign(&mut self, rhs: PhaseScalar) {
        *self += &rhs;
    }
}

impl SubAssign for PhaseScalar {
    fn sub_assign(&mut self, rhs: PhaseScalar) {
        *self -= &rhs;
    }
}

impl MulAssign<&PhaseScalar> for PhaseScalar {
    fn mul_assign(&mut self, rhs: &PhaseScalar) {
        *self = &*self * rhs;
    }
}

impl MulAssign for PhaseScalar {
    fn mul_assign(&mut self, rhs: PhaseScalar) {
        *self = &*self * &rhs;
    }
}

impl fmt::Debug for PhaseScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PhaseScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if p.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{p}")?;
            } else {
                write!(f, "{c}·{p}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    phase: Phase,
    coeff: String,
}

impl Serialize for PhaseScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(p, c)| TermRepr { phase: *p, coeff: c.to_string() })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PhaseScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<TermRepr>::deserialize(d)?;
        let mut out = PhaseScalar::zero();
        for t in v {
            let c = parse_rational(&t.coeff).map_err(serde::de::Error::custom)?;
            out.add_term(t.phase, c);
        }
        Ok(out)
    }
}
