use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use super::{Arrow, FiniteGroupoid};
use crate::algebra::Presentation;
use crate::characters::{ActionKernel, Character};
use crate::error::{Error, Result};
use crate::window::{add, neg, validate_window, Point};

/// An arrow `(g, x)` whose target `θ_g(x)` left the window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DroppedArrow {
    pub g: Vec<i64>,
    pub x: Point,
    pub target: Point,
}

/// What truncating to a finite window did to the arrow set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RestrictionReport {
    pub dropped: Vec<DroppedArrow>,
    pub added_units: usize,
    pub added_inverses: usize,
    pub added_composites: usize,
}

impl RestrictionReport {
    /// Whether arrows were dropped or added beyond the requested bound.
    pub fn is_restriction(&self) -> bool {
        !self.dropped.is_empty()
    }
}

struct Action {
    pres: Arc<Presentation>,
    kernels: BTreeMap<Vec<i64>, ActionKernel>,
}

impl Action {
    fn apply(&mut self, g: &[i64], x: &[i64]) -> Result<Option<Point>> {
        if !self.kernels.contains_key(g) {
            self.kernels.insert(g.to_vec(), ActionKernel::canonical(&self.pres, g)?);
        }
        let Some(y) = self.kernels[g].apply(&Character::lattice(x))? else {
            return Ok(None);
        };
        y.as_lattice()
            .map(Some)
            .ok_or_else(|| Error::InconsistentWindow(format!("θ_{g:?}({x:?}) = {y} is not a lattice point")))
    }
}

/// The transformation groupoid of the partial action on a finite window.
///
/// Arrows `(g, x)` with `g` in the bound and `θ_g(x)` defined are kept when
/// the target stays in the window; the rest are dropped and reported. The
/// kept set is then closed under units, inverses and composition, each added
/// arrow being confirmed against the partial action.
pub fn transformation_groupoid(
    pres: &Arc<Presentation>,
    window: &[Point],
    group_bound: &[Vec<i64>],
) -> Result<FiniteGroupoid> {
    if window.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let m = pres.m();
    validate_window(window, m)?;
    if let Some(g) = group_bound.iter().find(|g| g.len() != m) {
        return Err(Error::InconsistentWindow(format!("group element {g:?} does not have dimension {m}")));
    }
    let index: BTreeMap<&Point, usize> = window.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut action = Action { pres: pres.clone(), kernels: BTreeMap::new() };
    let mut report = RestrictionReport::default();
    let mut arrows: BTreeMap<(Vec<i64>, usize), usize> = BTreeMap::new();

    let bound: BTreeSet<&Vec<i64>> = group_bound.iter().collect();
    for g in &bound {
        for (xi, x) in window.iter().enumerate() {
            if let Some(y) = action.apply(g, x)? {
                match index.get(&y) {
                    Some(&yi) => {
                        arrows.insert(((*g).clone(), xi), yi);
                    }
                    None => report.dropped.push(DroppedArrow { g: (*g).clone(), x: x.clone(), target: y }),
                }
            }
        }
    }

    let zero = vec![0; m];
    for xi in 0..window.len() {
        if arrows.insert((zero.clone(), xi), xi).is_none() {
            report.added_units += 1;
        }
    }
    loop {
        let mut fresh = Vec::new();
        for ((g, x), y) in &arrows {
            let ginv = neg(g);
            if !arrows.contains_key(&(ginv.clone(), *y)) {
                fresh.push((ginv, *y, *x, true));
            }
        }
        let by_source: BTreeMap<usize, Vec<(&Vec<i64>, usize)>> =
            arrows.iter().fold(BTreeMap::new(), |mut acc, ((g, x), y)| {
                acc.entry(*x).or_default().push((g, *y));
                acc
            });
        for ((g2, x), y) in &arrows {
            for (g1, z) in by_source.get(y).into_iter().flatten() {
                let g = add(g1, g2);
                if !arrows.contains_key(&(g.clone(), *x)) {
                    fresh.push((g, *x, *z, false));
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        for (g, x, y, inverse) in fresh {
            if arrows.contains_key(&(g.clone(), x)) {
                continue;
            }
            match action.apply(&g, &window[x])? {
                Some(t) if t == window[y] => {}
                other => {
                    return Err(Error::InconsistentWindow(format!(
                        "closure arrow ({g:?}, {:?}) should land at {:?} but the action gives {other:?}",
                        window[x], window[y]
                    )))
                }
            }
            arrows.insert((g, x), y);
            if inverse {
                report.added_inverses += 1;
            } else {
                report.added_composites += 1;
            }
        }
    }

    let list = arrows.into_iter().map(|((g, source), target)| Arrow { g, source, target }).collect();
    Ok(FiniteGroupoid::from_arrows(window.to_vec(), list)?.with_restriction(report))
}
