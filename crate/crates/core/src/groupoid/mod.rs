//! Finite groupoids with arrows labelled `(g, x)`: source `x`, target `θ_g(x)`,
//! and `(g₁, θ_{g₂}x)·(g₂, x) = (g₁ + g₂, x)`.

mod cocycle;
mod convolution;
mod transformation;
mod uhf;

pub use cocycle::{
    check_cocycle, coboundary, trivialize_exhaustion, trivialize_exhaustion_levels, trivialize_pair, CocycleVerdict,
    Filtration, OneCochain, TwoCocycle,
};
pub use convolution::{
    convolution, involution, matrix_unit_check, twist_by_cochain, ConvolutionElement, MatrixUnitReport,
};
pub use transformation::{transformation_groupoid, DroppedArrow, RestrictionReport};
pub use uhf::{tail_filtration, tensor_structure_check, StructureReport};

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::window::{add, is_zero, neg, Point};

/// Arrow `x → θ_g(x)` stored by object indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub g: Vec<i64>,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug)]
pub struct FiniteGroupoid {
    objects: Vec<Point>,
    object_index: HashMap<Point, usize>,
    arrows: Vec<Arrow>,
    by_label: HashMap<(Vec<i64>, usize), usize>,
    by_ends: HashMap<(usize, usize), Vec<usize>>,
    with_source: Vec<Vec<usize>>,
    with_target: Vec<Vec<usize>>,
    units: Vec<usize>,
    inverses: Vec<usize>,
    restriction: Option<RestrictionReport>,
    fingerprint: u64,
}

impl PartialEq for FiniteGroupoid {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects && self.arrows == other.arrows
    }
}

impl FiniteGroupoid {
    /// Build from objects and `(g, source, target)` triples, checking units,
    /// inverses and closure under composition.
    pub fn from_arrows(objects: Vec<Point>, arrows: Vec<Arrow>) -> Result<FiniteGroupoid> {
        if objects.is_empty() {
            return Err(Error::EmptyWindow);
        }
        let mut object_index = HashMap::new();
        for (i, p) in objects.iter().enumerate() {
            if object_index.insert(p.clone(), i).is_some() {
                return Err(Error::NotAGroupoid(format!("duplicate object {p:?}")));
            }
        }
        let n = objects.len();
        let mut by_label = HashMap::new();
        let mut by_ends: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        let mut with_source = vec![Vec::new(); n];
        let mut with_target = vec![Vec::new(); n];
        for (i, a) in arrows.iter().enumerate() {
            if a.source >= n || a.target >= n {
                return Err(Error::NotAGroupoid(format!("arrow {i} has an endpoint outside the object set")));
            }
            if by_label.insert((a.g.clone(), a.source), i).is_some() {
                return Err(Error::NotAGroupoid(format!(
                    "two arrows with label {:?} at {:?}",
                    a.g, objects[a.source]
                )));
            }
            by_ends.entry((a.target, a.source)).or_default().push(i);
            with_source[a.source].push(i);
            with_target[a.target].push(i);
        }
        let mut units = Vec::with_capacity(n);
        for (x, p) in objects.iter().enumerate() {
            let zero = vec![0; p.len()];
            match by_label.get(&(zero, x)) {
                Some(&u) if arrows[u].target == x => units.push(u),
                _ => return Err(Error::NotAGroupoid(format!("object {p:?} has no unit arrow"))),
            }
        }
        let mut inverses = Vec::with_capacity(arrows.len());
        for a in &arrows {
            match by_label.get(&(neg(&a.g), a.target)) {
                Some(&b) if arrows[b].target == a.source => inverses.push(b),
                _ => {
                    return Err(Error::NotAGroupoid(format!(
                        "arrow ({:?}, {:?}) has no inverse",
                        a.g, objects[a.source]
                    )))
                }
            }
        }
        let mut hasher = DefaultHasher::new();
        objects.hash(&mut hasher);
        arrows.hash(&mut hasher);
        let fingerprint = hasher.finish();
        let g = FiniteGroupoid {
            objects,
            object_index,
            arrows,
            by_label,
            by_ends,
            with_source,
            with_target,
            units,
            inverses,
            restriction: None,
            fingerprint,
        };
        for (a, b) in g.composable_pairs() {
            if g.compose(a, b).is_none() {
                return Err(Error::NotAGroupoid(format!("arrows {a} and {b} are composable but the composite is missing")));
            }
        }
        Ok(g)
    }

    pub(crate) fn with_restriction(mut self, report: RestrictionReport) -> FiniteGroupoid {
        self.restriction = Some(report);
        self
    }

    /// Pair groupoid on the points `0..n`: arrow `(x, y)` has target `x`,
    /// source `y` and label `y − x`.
    pub fn pair(n: usize) -> Result<FiniteGroupoid> {
        if n == 0 {
            return Err(Error::Precondition("pair groupoid needs at least one point".into()));
        }
        let objects: Vec<Point> = (0..n as i64).map(|i| vec![i]).collect();
        FiniteGroupoid::pair_on(objects)
    }

    /// Pair groupoid on arbitrary lattice points, labelled by `source − target`.
    pub fn pair_on(objects: Vec<Point>) -> Result<FiniteGroupoid> {
        let n = objects.len();
        let mut arrows = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let g = objects[y].iter().zip(&objects[x]).map(|(a, b)| a - b).collect();
                arrows.push(Arrow { g, source: y, target: x });
            }
        }
        FiniteGroupoid::from_arrows(objects, arrows)
    }

    pub fn objects(&self) -> &[Point] {
        &self.objects
    }

    pub fn object_index(&self, p: &[i64]) -> Option<usize> {
        self.object_index.get(p).copied()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn find(&self, g: &[i64], source: usize) -> Option<usize> {
        self.by_label.get(&(g.to_vec(), source)).copied()
    }

    /// Arrows with the given target and source.
    pub fn between(&self, target: usize, source: usize) -> &[usize] {
        self.by_ends.get(&(target, source)).map_or(&[], Vec::as_slice)
    }

    pub fn unit(&self, x: usize) -> usize {
        self.units[x]
    }

    pub fn is_unit(&self, a: usize) -> bool {
        is_zero(&self.arrows[a].g) && self.arrows[a].source == self.arrows[a].target
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn with_source(&self, x: usize) -> &[usize] {
        &self.with_source[x]
    }

    pub fn with_target(&self, x: usize) -> &[usize] {
        &self.with_target[x]
    }

    /// `a · b`, defined when `source(a) = target(b)`.
    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        let (x, y) = (&self.arrows[a], &self.arrows[b]);
        if x.source != y.target {
            return None;
        }
        let c = self.find(&add(&x.g, &y.g), y.source)?;
        (self.arrows[c].target == x.target).then_some(c)
    }

    /// All `(a, b)` with `source(a) = target(b)`, ordered by `a` then `b`.
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, x) in self.arrows.iter().enumerate() {
            for &b in &self.with_target[x.source] {
                out.push((a, b));
            }
        }
        out
    }

    pub fn restriction(&self) -> Option<&RestrictionReport> {
        self.restriction.as_ref()
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Exhaustive check of units, inverses and associativity.
    pub fn verify_axioms(&self) -> AxiomReport {
        let mut report = AxiomReport::default();
        for a in 0..self.arrows.len() {
            let x = &self.arrows[a];
            let inv = self.inverses[a];
            let ok_units = self.compose(self.units[x.target], a) == Some(a) && self.compose(a, self.units[x.source]) == Some(a);
            let ok_inv = self.compose(a, inv) == Some(self.units[x.target])
                && self.compose(inv, a) == Some(self.units[x.source]);
            report.unit_checks += 1;
            report.inverse_checks += 1;
            if !ok_units && report.failure.is_none() {
                report.failure = Some(format!("unit law fails at arrow {a}"));
            }
            if !ok_inv && report.failure.is_none() {
                report.failure = Some(format!("inverse law fails at arrow {a}"));
            }
        }
        let (count, failure) = self
            .arrows
            .par_iter()
            .enumerate()
            .map(|(a, x)| {
                let mut count = 0usize;
                for &b in &self.with_target[x.source] {
                    let ab = self.compose(a, b);
                    for &c in &self.with_target[self.arrows[b].source] {
                        count += 1;
                        let lhs = ab.and_then(|ab| self.compose(ab, c));
                        let rhs = self.compose(b, c).and_then(|bc| self.compose(a, bc));
                        if lhs.is_none() || lhs != rhs {
                            return (count, Some([a, b, c]));
                        }
                    }
                }
                (count, None)
            })
            .reduce(|| (0, None), |l, r| (l.0 + r.0, l.1.or(r.1)));
        report.triples_checked = count;
        if let Some(t) = failure {
            report.failure.get_or_insert(format!("associativity fails on triple {t:?}"));
        }
        report
    }

    /// Whether exactly one arrow joins every ordered pair of objects.
    pub fn is_pair_groupoid(&self) -> bool {
        let n = self.objects.len();
        self.arrows.len() == n * n && (0..n).all(|x| (0..n).all(|y| self.between(x, y).len() == 1))
    }

    /// The isomorphism onto the pair groupoid of the objects, arrow `↦`
    /// (target, source), when one exists.
    pub fn pair_isomorphism(&self) -> Option<Vec<(usize, usize)>> {
        self.is_pair_groupoid()
            .then(|| self.arrows.iter().map(|a| (a.target, a.source)).collect())
    }

    pub fn to_record(&self) -> GroupoidRecord {
        GroupoidRecord {
            objects: self.objects.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowRecord {
                    g: a.g.clone(),
                    x: self.objects[a.source].clone(),
                    target: self.objects[a.target].clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub unit_checks: usize,
    pub inverse_checks: usize,
    pub triples_checked: usize,
    pub failure: Option<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowRecord {
    pub g: Vec<i64>,
    pub x: Point,
    pub target: Point,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidRecord {
    pub objects: Vec<Point>,
    pub arrows: Vec<ArrowRecord>,
}

pub fn pair_groupoid(n: usize) -> Result<FiniteGroupoid> {
    FiniteGroupoid::pair(n)
}

#[cfg(test)]
mod tests;
