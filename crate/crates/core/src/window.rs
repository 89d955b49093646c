//! Finite windows of lattice points and degree boxes.

use crate::error::{Error, Result};

/// A lattice point of `ℕ^m` (or a degree in `ℤ^m`).
pub type Point = Vec<i64>;

/// All points of `∏_j [0, M_j]` in lexicographic order.
pub fn lattice_box(bounds: &[u32]) -> Vec<Point> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=b as i64).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// All of `[−r, r]^m` in lexicographic order.
pub fn degree_box(m: usize, radius: i64) -> Vec<Point> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|p: Point| {
                (-radius..=radius).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Check that the points are distinct, of dimension `m` and nonnegative.
pub fn validate_window(points: &[Point], m: usize) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for p in points {
        if p.len() != m {
            return Err(Error::InconsistentWindow(format!("point {p:?} does not have dimension {m}")));
        }
        if p.iter().any(|&v| v < 0) {
            return Err(Error::InconsistentWindow(format!("point {p:?} is not in ℕ^{m}")));
        }
        if !seen.insert(p) {
            return Err(Error::InconsistentWindow(format!("duplicate point {p:?}")));
        }
    }
    Ok(())
}

pub fn add(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[i64]) -> Point {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero(a: &[i64]) -> bool {
    a.iter().all(|&x| x == 0)
}
