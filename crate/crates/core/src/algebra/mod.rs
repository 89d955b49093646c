//! The Weyl and twisted-Weyl `*`-algebras over the exact phase ring.
//!
//! Relations: `a_j a_j* = a_j* a_j + 1`, `a_j a_k = λ_jk a_k a_j` and
//! `a_j* a_k = λ_jk⁻¹ a_k a_j*` for `j ≠ k`, with `λ_jk = e^{2πiΘ_jk}`.
//! The grading gives `a_j` degree `e_j`.

mod element;
mod normal;
mod presentation;
mod rieffel;

pub use element::{AlgebraElement, Degree, MonomialKey, SerialMonomial};
pub use presentation::{
    parse_word, Family, FloatTheta, Letter, Presentation, PresentationConfig, ThetaMatrix, DEFAULT_MAX_WORD_LEN,
};
pub use rieffel::{lambda_cocycle, rieffel_involute, rieffel_product};

use std::sync::Arc;

use crate::error::Result;

pub fn normal_order(pres: &Arc<Presentation>, word: &[Letter]) -> Result<AlgebraElement> {
    pres.normal_order(word)
}

pub fn multiply(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    x.multiply(y)
}

pub fn involute(x: &AlgebraElement) -> AlgebraElement {
    x.involute()
}

pub fn degree_component(x: &AlgebraElement, k: &[i64]) -> AlgebraElement {
    x.degree_component(k)
}

/// Every normal monomial with exactly `len` letters, in key order.
pub fn monomials_of_length(m: usize, len: usize) -> Vec<MonomialKey> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; 2 * m];
    fill(&mut exps, 0, len as u32, &mut out, m);
    out.sort();
    out
}

fn fill(exps: &mut [u32], pos: usize, left: u32, out: &mut Vec<MonomialKey>, m: usize) {
    if pos == exps.len() - 1 {
        exps[pos] = left;
        out.push(MonomialKey::new(exps[..m].to_vec(), exps[m..].to_vec()));
        return;
    }
    for n in 0..=left {
        exps[pos] = n;
        fill(exps, pos + 1, left - n, out, m);
    }
}

/// Every normal monomial of degree `k` with at most `max_letters` letters.
pub fn monomials_of_degree(k: &[i64], max_letters: usize) -> Vec<MonomialKey> {
    let m = k.len();
    let base: usize = k.iter().map(|v| v.unsigned_abs() as usize).sum();
    let mut out = Vec::new();
    if base > max_letters {
        return out;
    }
    let spare = (max_letters - base) / 2;
    // p_j = k_j⁻ + s_j, q_j = k_j⁺ + s_j with Σ s_j ≤ spare.
    let mut s = vec![0u32; m];
    loop {
        let p = (0..m).map(|j| (-k[j]).max(0) as u32 + s[j]).collect();
        let q = (0..m).map(|j| k[j].max(0) as u32 + s[j]).collect();
        out.push(MonomialKey::new(p, q));
        let mut j = 0;
        loop {
            if j == m {
                out.sort();
                return out;
            }
            s[j] += 1;
            if s.iter().sum::<u32>() as usize <= spare {
                break;
            }
            s[j] = 0;
            j += 1;
        }
    }
}
