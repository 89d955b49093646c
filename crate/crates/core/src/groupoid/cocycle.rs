//! Phase-valued 2-cocycles and 1-cochains on finite groupoids.
//!
//! Conventions: `φ(αβ, γ) φ(α, β) = φ(α, βγ) φ(β, γ)` and
//! `∂ψ(α, β) = ψ(β) ψ(αβ)⁻¹ ψ(α)`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::FiniteGroupoid;
use crate::error::{Error, Result};
use crate::phase::Phase;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCocycle {
    fingerprint: u64,
    values: BTreeMap<(usize, usize), Phase>,
}

impl TwoCocycle {
    pub fn trivial(g: &FiniteGroupoid) -> TwoCocycle {
        TwoCocycle::from_fn(g, |_, _| Phase::one())
    }

    /// Values on every composable pair from a closure.
    pub fn from_fn(g: &FiniteGroupoid, mut f: impl FnMut(usize, usize) -> Phase) -> TwoCocycle {
        let values = g.composable_pairs().into_iter().map(|(a, b)| ((a, b), f(a, b))).collect();
        TwoCocycle { fingerprint: g.fingerprint(), values }
    }

    /// Values only where given; missing pairs make checks fail loudly.
    pub fn from_map(g: &FiniteGroupoid, values: BTreeMap<(usize, usize), Phase>) -> TwoCocycle {
        TwoCocycle { fingerprint: g.fingerprint(), values }
    }

    pub fn get(&self, a: usize, b: usize) -> Option<Phase> {
        self.values.get(&(a, b)).copied()
    }

    pub fn set(&mut self, a: usize, b: usize, p: Phase) {
        self.values.insert((a, b), p);
    }

    pub fn values(&self) -> &BTreeMap<(usize, usize), Phase> {
        &self.values
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn is_trivial(&self) -> bool {
        self.values.values().all(Phase::is_one)
    }

    pub fn mul(&self, other: &TwoCocycle) -> Result<TwoCocycle> {
        if self.fingerprint != other.fingerprint {
            return Err(Error::GroupoidMismatch);
        }
        let mut values = BTreeMap::new();
        for (k, v) in &self.values {
            let w = other.values.get(k).ok_or(Error::UndefinedPair(k.0, k.1))?;
            values.insert(*k, *v * *w);
        }
        Ok(TwoCocycle { fingerprint: self.fingerprint, values })
    }

    pub fn inverse(&self) -> TwoCocycle {
        TwoCocycle {
            fingerprint: self.fingerprint,
            values: self.values.iter().map(|(k, v)| (*k, v.inv())).collect(),
        }
    }

    pub fn to_record(&self, g: &FiniteGroupoid) -> Vec<CocycleEntry> {
        self.values
            .iter()
            .map(|(&(a, b), p)| CocycleEntry {
                pair: [
                    (g.arrow(a).g.clone(), g.objects()[g.arrow(a).source].clone()),
                    (g.arrow(b).g.clone(), g.objects()[g.arrow(b).source].clone()),
                ],
                angle: p.angle().to_string(),
            })
            .collect()
    }
}

/// Serialized cocycle value: the arrow pair as `(g, x)` labels and the angle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleEntry {
    pub pair: [(Vec<i64>, Vec<i64>); 2],
    pub angle: String,
}

/// Phase-valued function on arrows, equal to 1 on units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneCochain {
    fingerprint: u64,
    values: Vec<Phase>,
}

impl OneCochain {
    pub fn new(g: &FiniteGroupoid, values: Vec<Phase>) -> Result<OneCochain> {
        if values.len() != g.len() {
            return Err(Error::DimensionMismatch { expected: g.len(), got: values.len() });
        }
        if let Some(x) = (0..g.objects().len()).find(|&x| !values[g.unit(x)].is_one()) {
            return Err(Error::NotNormalized(format!("cochain is not 1 on the unit at {:?}", g.objects()[x])));
        }
        Ok(OneCochain { fingerprint: g.fingerprint(), values })
    }

    pub fn trivial(g: &FiniteGroupoid) -> OneCochain {
        OneCochain { fingerprint: g.fingerprint(), values: vec![Phase::one(); g.len()] }
    }

    /// From a closure; unit values are forced to 1.
    pub fn from_fn(g: &FiniteGroupoid, mut f: impl FnMut(usize) -> Phase) -> OneCochain {
        let values = (0..g.len()).map(|a| if g.is_unit(a) { Phase::one() } else { f(a) }).collect();
        OneCochain { fingerprint: g.fingerprint(), values }
    }

    pub fn get(&self, a: usize) -> Phase {
        self.values[a]
    }

    pub fn values(&self) -> &[Phase] {
        &self.values
    }

    pub fn mul(&self, other: &OneCochain) -> Result<OneCochain> {
        if self.fingerprint != other.fingerprint {
            return Err(Error::GroupoidMismatch);
        }
        Ok(OneCochain {
            fingerprint: self.fingerprint,
            values: self.values.iter().zip(&other.values).map(|(a, b)| *a * *b).collect(),
        })
    }

    pub fn inverse(&self) -> OneCochain {
        OneCochain { fingerprint: self.fingerprint, values: self.values.iter().map(|p| p.inv()).collect() }
    }
}

/// Result of an exhaustive cocycle check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleVerdict {
    pub passed: bool,
    pub triples_checked: usize,
    pub first_failure: Option<[usize; 3]>,
    pub unnormalized_pair: Option<(usize, usize)>,
}

fn fetch(phi: &TwoCocycle, a: usize, b: usize) -> Result<Phase> {
    phi.get(a, b).ok_or(Error::UndefinedPair(a, b))
}

/// Verify the cocycle identity on every composable triple and normalization
/// on every pair involving a unit.
pub fn check_cocycle(g: &FiniteGroupoid, phi: &TwoCocycle) -> Result<CocycleVerdict> {
    if phi.fingerprint() != g.fingerprint() {
        return Err(Error::GroupoidMismatch);
    }
    for (a, b) in g.composable_pairs() {
        fetch(phi, a, b)?;
    }
    let unnormalized_pair = g
        .composable_pairs()
        .into_iter()
        .find(|&(a, b)| (g.is_unit(a) || g.is_unit(b)) && !phi.get(a, b).is_some_and(|p| p.is_one()));
    let per_arrow: Vec<(usize, Option<[usize; 3]>)> = (0..g.len())
        .into_par_iter()
        .map(|a| {
            let mut count = 0;
            for &b in g.with_target(g.arrow(a).source) {
                let ab = g.compose(a, b).expect("closed under composition");
                for &c in g.with_target(g.arrow(b).source) {
                    count += 1;
                    let bc = g.compose(b, c).expect("closed under composition");
                    let lhs = phi.values[&(ab, c)] * phi.values[&(a, b)];
                    let rhs = phi.values[&(a, bc)] * phi.values[&(b, c)];
                    if lhs != rhs {
                        return (count, Some([a, b, c]));
                    }
                }
            }
            (count, None)
        })
        .collect();
    let triples_checked = per_arrow.iter().map(|r| r.0).sum();
    let first_failure = per_arrow.iter().find_map(|r| r.1);
    Ok(CocycleVerdict {
        passed: first_failure.is_none() && unnormalized_pair.is_none(),
        triples_checked,
        first_failure,
        unnormalized_pair,
    })
}

pub fn coboundary(g: &FiniteGroupoid, psi: &OneCochain) -> TwoCocycle {
    TwoCocycle::from_fn(g, |a, b| {
        let ab = g.compose(a, b).expect("composable");
        psi.get(b) * psi.get(ab).inv() * psi.get(a)
    })
}

fn require_cocycle(g: &FiniteGroupoid, phi: &TwoCocycle) -> Result<()> {
    let v = check_cocycle(g, phi)?;
    if let Some(t) = v.first_failure {
        return Err(Error::CocycleViolated(t));
    }
    if let Some((a, b)) = v.unnormalized_pair {
        return Err(Error::NotNormalized(format!("cocycle is not 1 on the unit pair ({a}, {b})")));
    }
    Ok(())
}

/// Contracting homotopy on one pair-groupoid block: with `x₀` the base,
/// `ψ(α) = φ(x₀ ← target α, α)`.
fn homotopy(g: &FiniteGroupoid, phi: &TwoCocycle, base: usize, arrows: impl Iterator<Item = usize>) -> Result<BTreeMap<usize, Phase>> {
    let mut out = BTreeMap::new();
    for a in arrows {
        let t = g.arrow(a).target;
        let iota = *g
            .between(base, t)
            .first()
            .ok_or_else(|| Error::NotPairGroupoid(format!("no arrow from {:?} to the base {:?}", g.objects()[t], g.objects()[base])))?;
        out.insert(a, fetch(phi, iota, a)?);
    }
    Ok(out)
}

fn lex_min(g: &FiniteGroupoid, objs: impl Iterator<Item = usize>) -> usize {
    objs.min_by(|&x, &y| g.objects()[x].cmp(&g.objects()[y])).expect("nonempty class")
}

/// `ψ` with `∂ψ = φ` on a pair groupoid, via the contracting homotopy at the
/// lexicographically smallest object.
pub fn trivialize_pair(g: &FiniteGroupoid, phi: &TwoCocycle) -> Result<OneCochain> {
    if !g.is_pair_groupoid() {
        return Err(Error::NotPairGroupoid("some ordered pair of objects is not joined by exactly one arrow".into()));
    }
    require_cocycle(g, phi)?;
    let base = lex_min(g, 0..g.objects().len());
    let psi = homotopy(g, phi, base, 0..g.len())?;
    OneCochain::new(g, psi.into_values().collect())
}

/// Nested equivalence relations `R_0 ⊆ R_1 ⊆ …` on the objects, each given by
/// a class label per object. Every block must be a full pair groupoid and the
/// deepest level must contain every arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    levels: Vec<Vec<usize>>,
}

impl Filtration {
    pub fn new(g: &FiniteGroupoid, levels: Vec<Vec<usize>>) -> Result<Filtration> {
        let n = g.objects().len();
        if levels.is_empty() {
            return Err(Error::InvalidFiltration("no levels".into()));
        }
        for (d, lv) in levels.iter().enumerate() {
            if lv.len() != n {
                return Err(Error::InvalidFiltration(format!("level {d} labels {} objects, expected {n}", lv.len())));
            }
            for x in 0..n {
                for y in 0..n {
                    let same = lv[x] == lv[y];
                    let joined = g.between(x, y).len();
                    if same && joined != 1 {
                        return Err(Error::InvalidFiltration(format!(
                            "level {d}: {:?} and {:?} share a block but are joined by {joined} arrows",
                            g.objects()[x],
                            g.objects()[y]
                        )));
                    }
                }
            }
            if d > 0 {
                let prev = &levels[d - 1];
                for x in 0..n {
                    for y in 0..n {
                        if prev[x] == prev[y] && lv[x] != lv[y] {
                            return Err(Error::FiltrationNotNested(d - 1));
                        }
                    }
                }
            }
        }
        let last = levels.last().expect("nonempty");
        if let Some(a) = g.arrows().iter().find(|a| last[a.source] != last[a.target]) {
            return Err(Error::InvalidFiltration(format!(
                "arrow ({:?}, {:?}) is outside the deepest level",
                a.g,
                g.objects()[a.source]
            )));
        }
        Ok(Filtration { levels })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, d: usize) -> &[usize] {
        &self.levels[d]
    }

    fn contains(&self, g: &FiniteGroupoid, d: usize, a: usize) -> bool {
        let lv = &self.levels[d];
        lv[g.arrow(a).source] == lv[g.arrow(a).target]
    }
}

/// Level-by-level trivialization along a filtration. Level `d + 1` starts from
/// the homotopy `ψ'` on each block, then corrects it by the 1-cocycle
/// `χ = ψ'·ψ_d⁻¹` on `R_d`, written as `χ(x ← y) = c(x)/c(y)`, so that the
/// result restricts to `ψ_d`. Returns `ψ_d` on the arrows of `R_d` per level.
pub fn trivialize_exhaustion_levels(
    g: &FiniteGroupoid,
    phi: &TwoCocycle,
    filtration: &Filtration,
) -> Result<Vec<BTreeMap<usize, Phase>>> {
    require_cocycle(g, phi)?;
    let n = g.objects().len();
    let bases = |d: usize| -> BTreeMap<usize, usize> {
        let lv = filtration.level(d);
        let mut best: BTreeMap<usize, usize> = BTreeMap::new();
        for x in 0..n {
            let e = best.entry(lv[x]).or_insert(x);
            if g.objects()[x] < g.objects()[*e] {
                *e = x;
            }
        }
        best
    };
    let level_psi = |d: usize| -> Result<BTreeMap<usize, Phase>> {
        let lv = filtration.level(d);
        let mut out = BTreeMap::new();
        for (class, base) in bases(d) {
            let arrows = (0..g.len()).filter(|&a| {
                let x = g.arrow(a);
                lv[x.source] == class && lv[x.target] == class
            });
            out.extend(homotopy(g, phi, base, arrows)?);
        }
        Ok(out)
    };

    let mut levels = vec![level_psi(0)?];
    for d in 0..filtration.depth() - 1 {
        let prime = level_psi(d + 1)?;
        let prev = &levels[d];
        let lv = filtration.level(d);
        let base_of = bases(d);
        let mut c = vec![Phase::one(); n];
        for (x, cx) in c.iter_mut().enumerate() {
            let b = base_of[&lv[x]];
            let a = g.between(x, b)[0];
            *cx = prime[&a] * prev[&a].inv();
        }
        let mut next = BTreeMap::new();
        for (&a, &p) in &prime {
            let arrow = g.arrow(a);
            next.insert(a, p * (c[arrow.target] * c[arrow.source].inv()).inv());
        }
        for (a, p) in prev {
            if next[a] != *p {
                return Err(Error::InvalidFiltration(format!("level {} does not restrict to level {d} at arrow {a}", d + 1)));
            }
        }
        debug_assert!(next.keys().all(|&a| filtration.contains(g, d + 1, a)));
        levels.push(next);
    }
    Ok(levels)
}

/// `ψ` with `∂ψ = φ`, built along the filtration; see
/// [`trivialize_exhaustion_levels`].
pub fn trivialize_exhaustion(g: &FiniteGroupoid, phi: &TwoCocycle, filtration: &Filtration) -> Result<OneCochain> {
    let levels = trivialize_exhaustion_levels(g, phi, filtration)?;
    let last = levels.into_iter().last().expect("at least one level");
    OneCochain::new(g, (0..g.len()).map(|a| last[&a]).collect())
}
