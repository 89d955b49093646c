//! Seeded generators for property sweeps.

use std::sync::Arc;

use num_rational::Rational64;
use rand::seq::IndexedRandom;
use rand::Rng;

use crate::algebra::{monomials_of_degree, AlgebraElement, Letter, MonomialKey, Presentation, ThetaMatrix};
use crate::phase::{rat, Phase, PhaseScalar};

/// A phase with denominator in `1..=max_den`.
pub fn random_phase<R: Rng + ?Sized>(rng: &mut R, max_den: i64) -> Phase {
    let d = rng.random_range(1..=max_den.max(1));
    Phase::from_ratio(rng.random_range(0..d), d)
}

/// Up to two phase terms with small rational coefficients, never zero.
pub fn random_coefficient<R: Rng + ?Sized>(rng: &mut R) -> PhaseScalar {
    loop {
        let mut c = PhaseScalar::term(random_phase(rng, 8), rat(rng.random_range(-4..=4), rng.random_range(1..=3)));
        if rng.random_bool(0.3) {
            c += &PhaseScalar::term(random_phase(rng, 8), rat(rng.random_range(-3..=3), 1));
        }
        if !num_traits::Zero::is_zero(&c) {
            return c;
        }
    }
}

/// Random antisymmetric rational `Θ` with denominators `≤ max_den`.
pub fn random_theta<R: Rng + ?Sized>(rng: &mut R, m: usize, max_den: i64) -> ThetaMatrix {
    let mut rows = vec![vec![Rational64::from_integer(0); m]; m];
    for j in 0..m {
        for k in (j + 1)..m {
            let d = rng.random_range(1..=max_den.max(1));
            let r = Rational64::new(rng.random_range(-d..=d), d);
            rows[j][k] = r;
            rows[k][j] = -r;
        }
    }
    ThetaMatrix::new(rows).expect("antisymmetric by construction")
}

pub fn random_word<R: Rng + ?Sized>(rng: &mut R, m: usize, len: usize) -> Vec<Letter> {
    (0..len)
        .map(|_| Letter { index: rng.random_range(0..m), star: rng.random_bool(0.5) })
        .collect()
}

pub fn random_monomial<R: Rng + ?Sized>(rng: &mut R, m: usize, max_letters: usize) -> MonomialKey {
    let len = rng.random_range(0..=max_letters);
    let mut key = MonomialKey::unit(m);
    for _ in 0..len {
        let j = rng.random_range(0..m);
        if rng.random_bool(0.5) {
            key.p[j] += 1;
        } else {
            key.q[j] += 1;
        }
    }
    key
}

pub fn random_element<R: Rng + ?Sized>(
    rng: &mut R,
    pres: &Arc<Presentation>,
    max_terms: usize,
    max_letters: usize,
) -> AlgebraElement {
    let n = rng.random_range(1..=max_terms.max(1));
    let mut x = AlgebraElement::zero(pres);
    for _ in 0..n {
        let key = random_monomial(rng, pres.m(), max_letters);
        x = &x + &AlgebraElement::monomial(pres, key, random_coefficient(rng));
    }
    x
}

/// Random element of `A_k` built from normal monomials of degree `k`.
pub fn random_homogeneous<R: Rng + ?Sized>(
    rng: &mut R,
    pres: &Arc<Presentation>,
    k: &[i64],
    max_terms: usize,
    max_letters: usize,
) -> AlgebraElement {
    let pool = monomials_of_degree(k, max_letters);
    let mut x = AlgebraElement::zero(pres);
    if pool.is_empty() {
        return x;
    }
    let n = rng.random_range(1..=max_terms.max(1));
    for _ in 0..n {
        let key = pool.choose(rng).expect("nonempty").clone();
        x = &x + &AlgebraElement::monomial(pres, key, random_coefficient(rng));
    }
    x
}

/// A random degree vector with entries in `[-radius, radius]`.
pub fn random_degree<R: Rng + ?Sized>(rng: &mut R, m: usize, radius: i64) -> Vec<i64> {
    (0..m).map(|_| rng.random_range(-radius..=radius)).collect()
}
