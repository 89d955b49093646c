use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::normal::{add_into, right_mul_word, Terms};
use super::presentation::{Letter, Presentation};
use crate::error::{Error, Result};
use crate::phase::PhaseScalar;

/// A degree vector in `ℤ^m`.
pub type Degree = Vec<i64>;

/// Exponents of the normal monomial `(a₁*)^{p₁}…(a_m*)^{p_m} a₁^{q₁}…a_m^{q_m}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonomialKey {
    pub p: Vec<u32>,
    pub q: Vec<u32>,
}

impl MonomialKey {
    pub fn unit(m: usize) -> MonomialKey {
        MonomialKey { p: vec![0; m], q: vec![0; m] }
    }

    pub fn new(p: Vec<u32>, q: Vec<u32>) -> MonomialKey {
        assert_eq!(p.len(), q.len(), "exponent vectors differ in length");
        MonomialKey { p, q }
    }

    pub fn m(&self) -> usize {
        self.p.len()
    }

    /// `q − p`.
    pub fn degree(&self) -> Degree {
        self.q.iter().zip(&self.p).map(|(&q, &p)| q as i64 - p as i64).collect()
    }

    pub fn letter_count(&self) -> usize {
        self.p.iter().chain(&self.q).map(|&n| n as usize).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.letter_count() == 0
    }

    /// Canonical word: starred block then plain block, ascending index.
    pub fn word(&self) -> Vec<Letter> {
        let mut w = Vec::with_capacity(self.letter_count());
        for (j, &n) in self.p.iter().enumerate() {
            w.extend(std::iter::repeat_n(Letter::a_star(j), n as usize));
        }
        for (j, &n) in self.q.iter().enumerate() {
            w.extend(std::iter::repeat_n(Letter::a(j), n as usize));
        }
        w
    }
}

impl fmt::Display for MonomialKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (j, &n) in self.p.iter().enumerate() {
            match n {
                0 => {}
                1 => parts.push(format!("a{}*", j + 1)),
                _ => parts.push(format!("a{}*^{n}", j + 1)),
            }
        }
        for (j, &n) in self.q.iter().enumerate() {
            match n {
                0 => {}
                1 => parts.push(format!("a{}", j + 1)),
                _ => parts.push(format!("a{}^{n}", j + 1)),
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// A normal-ordered element of a twisted-Weyl algebra.
#[derive(Clone)]
pub struct AlgebraElement {
    pres: Arc<Presentation>,
    terms: Terms,
}

impl AlgebraElement {
    pub fn zero(pres: &Arc<Presentation>) -> AlgebraElement {
        AlgebraElement { pres: pres.clone(), terms: Terms::new() }
    }

    pub fn one(pres: &Arc<Presentation>) -> AlgebraElement {
        AlgebraElement::scalar(pres, PhaseScalar::one())
    }

    pub fn scalar(pres: &Arc<Presentation>, c: PhaseScalar) -> AlgebraElement {
        AlgebraElement::monomial(pres, MonomialKey::unit(pres.m()), c)
    }

    pub fn monomial(pres: &Arc<Presentation>, key: MonomialKey, c: PhaseScalar) -> AlgebraElement {
        assert_eq!(key.m(), pres.m(), "monomial has the wrong number of generators");
        let mut terms = Terms::new();
        add_into(&mut terms, key, c);
        AlgebraElement { pres: pres.clone(), terms }
    }

    /// `a_j` (zero-based `j`).
    pub fn generator(pres: &Arc<Presentation>, j: usize) -> Result<AlgebraElement> {
        pres.normal_order(&[Letter::a(j)])
    }

    /// `a_j*` (zero-based `j`).
    pub fn generator_star(pres: &Arc<Presentation>, j: usize) -> Result<AlgebraElement> {
        pres.normal_order(&[Letter::a_star(j)])
    }

    /// `N_j = a_j* a_j` (zero-based `j`).
    pub fn number(pres: &Arc<Presentation>, j: usize) -> Result<AlgebraElement> {
        pres.normal_order(&[Letter::a_star(j), Letter::a(j)])
    }

    pub(crate) fn from_terms(pres: &Arc<Presentation>, terms: Terms) -> AlgebraElement {
        AlgebraElement { pres: pres.clone(), terms }
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MonomialKey, &PhaseScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &MonomialKey) -> PhaseScalar {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_presentation(&self, other: &AlgebraElement) -> Result<()> {
        if Arc::ptr_eq(&self.pres, &other.pres) || self.pres == other.pres {
            Ok(())
        } else {
            Err(Error::PresentationMismatch)
        }
    }

    pub fn try_add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.same_presentation(other)?;
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            add_into(&mut terms, k.clone(), c.clone());
        }
        Ok(AlgebraElement { pres: self.pres.clone(), terms })
    }

    pub fn try_sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> AlgebraElement {
        self.scale(&-PhaseScalar::one())
    }

    pub fn scale(&self, c: &PhaseScalar) -> AlgebraElement {
        let mut terms = Terms::new();
        for (k, d) in &self.terms {
            add_into(&mut terms, k.clone(), d * c);
        }
        AlgebraElement { pres: self.pres.clone(), terms }
    }

    /// Graded product, normal-ordered.
    pub fn multiply(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.same_presentation(other)?;
        let theta = self.pres.theta();
        let mut out = Terms::new();
        for (k, c) in &other.terms {
            let partial = right_mul_word(theta, self.terms.clone(), &k.word());
            for (key, d) in partial {
                add_into(&mut out, key, &d * c);
            }
        }
        Ok(AlgebraElement { pres: self.pres.clone(), terms: out })
    }

    /// The `*`-involution.
    pub fn involute(&self) -> AlgebraElement {
        let theta = self.pres.theta();
        let mut out = Terms::new();
        for (k, c) in &self.terms {
            let word: Vec<Letter> = k.word().into_iter().rev().map(Letter::adjoint).collect();
            let mut seed = Terms::new();
            seed.insert(MonomialKey::unit(self.pres.m()), c.conj());
            for (key, d) in right_mul_word(theta, seed, &word) {
                add_into(&mut out, key, d);
            }
        }
        AlgebraElement { pres: self.pres.clone(), terms: out }
    }

    /// The homogeneous component of degree `k`.
    pub fn degree_component(&self, k: &[i64]) -> AlgebraElement {
        let terms = self
            .terms
            .iter()
            .filter(|(key, _)| key.degree() == k)
            .map(|(key, c)| (key.clone(), c.clone()))
            .collect();
        AlgebraElement { pres: self.pres.clone(), terms }
    }

    pub fn degrees(&self) -> BTreeSet<Degree> {
        self.terms.keys().map(MonomialKey::degree).collect()
    }

    /// The common degree of all monomials, if there is exactly one.
    pub fn homogeneous_degree(&self) -> Option<Degree> {
        let d = self.degrees();
        if d.len() == 1 {
            d.into_iter().next()
        } else {
            None
        }
    }

    pub fn max_letter_count(&self) -> usize {
        self.terms.keys().map(MonomialKey::letter_count).max().unwrap_or(0)
    }

    /// Each term as (coefficient, canonical word).
    pub fn to_words(&self) -> Vec<(PhaseScalar, Vec<Letter>)> {
        self.terms.iter().map(|(k, c)| (c.clone(), k.word())).collect()
    }

    pub fn to_serial(&self) -> Vec<SerialMonomial> {
        self.terms
            .iter()
            .map(|(k, c)| SerialMonomial { coeff: c.clone(), p: k.p.clone(), q: k.q.clone() })
            .collect()
    }

    pub fn from_serial(pres: &Arc<Presentation>, monomials: &[SerialMonomial]) -> Result<AlgebraElement> {
        let mut terms = Terms::new();
        for s in monomials {
            if s.p.len() != pres.m() || s.q.len() != pres.m() {
                return Err(Error::DimensionMismatch { expected: pres.m(), got: s.p.len().max(s.q.len()) });
            }
            add_into(&mut terms, MonomialKey::new(s.p.clone(), s.q.clone()), s.coeff.clone());
        }
        Ok(AlgebraElement { pres: pres.clone(), terms })
    }
}

/// One monomial as serialized: coefficient terms with exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerialMonomial {
    pub coeff: PhaseScalar,
    pub p: Vec<u32>,
    pub q: Vec<u32>,
}

impl Presentation {
    /// Normal form of a word in the generators.
    pub fn normal_order(self: &Arc<Self>, word: &[Letter]) -> Result<AlgebraElement> {
        if word.len() > self.max_word_len() {
            return Err(Error::WordTooLong { len: word.len(), max: self.max_word_len() });
        }
        if let Some(l) = word.iter().find(|l| l.index >= self.m()) {
            return Err(Error::IndexOutOfRange { index: l.index + 1, m: self.m() });
        }
        let mut seed = Terms::new();
        seed.insert(MonomialKey::unit(self.m()), PhaseScalar::one());
        Ok(AlgebraElement::from_terms(self, right_mul_word(self.theta(), seed, word)))
    }

    /// `∏_j a_j^{k_j⁺} · ∏_j (a_j*)^{k_j⁻}`, ascending index in each block.
    pub fn canonical_representative(self: &Arc<Self>, k: &[i64]) -> Result<AlgebraElement> {
        if k.len() != self.m() {
            return Err(Error::DimensionMismatch { expected: self.m(), got: k.len() });
        }
        let mut word = Vec::new();
        for (j, &kj) in k.iter().enumerate() {
            if kj > 0 {
                word.extend(std::iter::repeat_n(Letter::a(j), kj as usize));
            }
        }
        for (j, &kj) in k.iter().enumerate() {
            if kj < 0 {
                word.extend(std::iter::repeat_n(Letter::a_star(j), (-kj) as usize));
            }
        }
        let seed = {
            let mut t = Terms::new();
            t.insert(MonomialKey::unit(self.m()), PhaseScalar::one());
            t
        };
        Ok(AlgebraElement::from_terms(self, right_mul_word(self.theta(), seed, &word)))
    }
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_presentation(other).is_ok() && self.terms == other.terms
    }
}

impl Eq for AlgebraElement {}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                if k.is_unit() {
                    format!("({c})")
                } else if c.is_one() {
                    k.to_string()
                } else {
                    format!("({c})·{k}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

// Operator forms panic on a presentation mismatch; use the `try_` methods
// when the operands may come from different presentations.
impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_add(rhs).expect("adding elements of different presentations")
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_sub(rhs).expect("subtracting elements of different presentations")
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.neg_ref()
    }
}

impl std::ops::Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.multiply(rhs).expect("multiplying elements of different presentations")
    }
}
