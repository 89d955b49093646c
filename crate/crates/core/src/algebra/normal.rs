//! Normal ordering by right multiplication with single letters.
//!
//! A normal monomial `(a₁*)^{p₁}…(a_m*)^{p_m} a₁^{q₁}…a_m^{q_m}` times one more
//! letter is rewritten in closed form:
//!
//! * `· a_j` moves left past every `a_l`, `l > j`, picking up `λ_lj` each time.
//! * `· a_j*` moves past the plain block (`λ_jl` per `a_l`, `l ≠ j`) and then
//!   into the star block (`λ_lj` per `a_l*`, `l > j`). Crossing `a_j^{q_j}`
//!   also leaves the contraction term `q_j · λ_{j,>j} · a*^p a^{q−e_j}`.

use std::collections::BTreeMap;

use num_rational::{BigRational, Rational64};
use num_traits::Zero;

use super::element::MonomialKey;
use super::presentation::{Letter, ThetaMatrix};
use crate::phase::{Phase, PhaseScalar};

pub(crate) type Terms = BTreeMap<MonomialKey, PhaseScalar>;

pub(crate) fn add_into(terms: &mut Terms, key: MonomialKey, c: PhaseScalar) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&key) {
        Some(e) => {
            *e += &c;
            if e.is_zero() {
                terms.remove(&key);
            }
        }
        None => {
            terms.insert(key, c);
        }
    }
}

fn angle_sum(theta: &ThetaMatrix, pairs: impl Iterator<Item = (usize, usize, u32)>) -> Phase {
    let mut acc = Rational64::zero();
    for (j, l, n) in pairs {
        if n != 0 {
            acc += theta.get(j, l) * Rational64::from_integer(n as i64);
        }
    }
    Phase::from_angle(acc)
}

/// `key · letter` as a list of (phase, rational multiplicity, key).
pub(crate) fn right_mul_letter(
    theta: &ThetaMatrix,
    key: &MonomialKey,
    letter: Letter,
) -> Vec<(Phase, u32, MonomialKey)> {
    let m = theta.m();
    let j = letter.index;
    let twisted = !theta.is_zero();
    if !letter.star {
        let phase = if twisted {
            angle_sum(theta, ((j + 1)..m).map(|l| (l, j, key.q[l])))
        } else {
            Phase::one()
        };
        let mut next = key.clone();
        next.q[j] += 1;
        return vec![(phase, 1, next)];
    }

    let mut out = Vec::with_capacity(2);
    let major = if twisted {
        let through_plain = angle_sum(theta, (0..m).filter(|&l| l != j).map(|l| (j, l, key.q[l])));
        let into_stars = angle_sum(theta, ((j + 1)..m).map(|l| (l, j, key.p[l])));
        through_plain * into_stars
    } else {
        Phase::one()
    };
    let mut next = key.clone();
    next.p[j] += 1;
    out.push((major, 1, next));

    let qj = key.q[j];
    if qj > 0 {
        let phase = if twisted {
            angle_sum(theta, ((j + 1)..m).map(|l| (j, l, key.q[l])))
        } else {
            Phase::one()
        };
        let mut next = key.clone();
        next.q[j] -= 1;
        out.push((phase, qj, next));
    }
    out
}

pub(crate) fn right_mul_word(theta: &ThetaMatrix, terms: Terms, word: &[Letter]) -> Terms {
    let mut current = terms;
    for &letter in word {
        let mut next = Terms::new();
        for (key, c) in &current {
            for (phase, mult, k) in right_mul_letter(theta, key, letter) {
                let coeff = c.rotate(phase);
                let coeff = if mult == 1 { coeff } else { coeff.scale(&BigRational::from_integer(mult.into())) };
                add_into(&mut next, k, coeff);
            }
        }
        current = next;
    }
    current
}
