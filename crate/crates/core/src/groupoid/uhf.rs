//! Tail-equivalence blocks on `∏_k [0, M_k]` and their matrix-algebra model.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{convolution, ConvolutionElement, Filtration, FiniteGroupoid, TwoCocycle};
use crate::error::{Error, Result};
use crate::phase::PhaseScalar;

/// Filtration by tail equivalence: at level `d` (zero-based) two points are
/// related when they agree in every coordinate after the first `d + 1`.
pub fn tail_filtration(g: &FiniteGroupoid) -> Result<Filtration> {
    let dim = g.objects().first().map_or(0, Vec::len);
    let levels = (0..dim)
        .map(|d| {
            let mut labels = BTreeMap::new();
            g.objects()
                .iter()
                .map(|p| {
                    let tail = p[d + 1..].to_vec();
                    let next = labels.len();
                    *labels.entry(tail).or_insert(next)
                })
                .collect()
        })
        .collect();
    Filtration::new(g, levels)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub factor_sizes: Vec<usize>,
    pub products_checked: usize,
    pub mismatches: usize,
    pub first_mismatch: Option<(usize, usize)>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

type Dense = Vec<Vec<i64>>;

fn kron(a: &Dense, b: &Dense) -> Dense {
    let (ra, ca, rb, cb) = (a.len(), a[0].len(), b.len(), b[0].len());
    let mut out = vec![vec![0; ca * cb]; ra * rb];
    for i in 0..ra {
        for j in 0..ca {
            if a[i][j] == 0 {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[i * rb + k][j * cb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![0; b[0].len()]; n];
    for i in 0..n {
        for (k, &aik) in a[i].iter().enumerate() {
            if aik != 0 {
                for (j, &bkj) in b[k].iter().enumerate() {
                    out[i][j] += aik * bkj;
                }
            }
        }
    }
    out
}

fn unit(n: usize, i: usize, j: usize) -> Dense {
    let mut e = vec![vec![0; n]; n];
    e[i][j] = 1;
    e
}

/// Compare the structure constants of the untwisted convolution algebra of the
/// pair groupoid on `∏_k [0, M_k]` with those of `⊗_k M_{M_k + 1}`, where the
/// arrow `x ← y` is sent to `⊗_k e_{x_k y_k}`.
pub fn tensor_structure_check(g: &FiniteGroupoid, bounds: &[u32]) -> Result<StructureReport> {
    let expected = crate::window::lattice_box(bounds);
    if g.objects() != expected.as_slice() || !g.is_pair_groupoid() {
        return Err(Error::NotPairGroupoid("expected the pair groupoid on the full product window".into()));
    }
    let sizes: Vec<usize> = bounds.iter().map(|&b| b as usize + 1).collect();
    let total: usize = sizes.iter().product();
    let tensor_of = |a: usize| -> Dense {
        let arrow = g.arrow(a);
        let (x, y) = (&g.objects()[arrow.target], &g.objects()[arrow.source]);
        let mut m = vec![vec![1]];
        for (k, &n) in sizes.iter().enumerate() {
            m = kron(&m, &unit(n, x[k] as usize, y[k] as usize));
        }
        m
    };
    let tensors: Vec<Dense> = (0..g.len()).map(tensor_of).collect();
    let mut arrow_at = BTreeMap::new();
    for a in 0..g.len() {
        let t = &tensors[a];
        let (r, c) = (0..total)
            .flat_map(|r| (0..total).map(move |c| (r, c)))
            .find(|&(r, c)| t[r][c] != 0)
            .expect("matrix unit is nonzero");
        arrow_at.insert((r, c), a);
    }
    let trivial = TwoCocycle::trivial(g);
    let mut report = StructureReport { factor_sizes: sizes, products_checked: 0, mismatches: 0, first_mismatch: None };
    for a in 0..g.len() {
        for b in 0..g.len() {
            report.products_checked += 1;
            let conv = convolution::<PhaseScalar>(
                g,
                &ConvolutionElement::delta(g, a),
                &ConvolutionElement::delta(g, b),
                &trivial,
            )?;
            let prod = matmul(&tensors[a], &tensors[b]);
            let mut model = ConvolutionElement::<PhaseScalar>::zero(g);
            for (r, row) in prod.iter().enumerate() {
                for (c, &v) in row.iter().enumerate() {
                    if v != 0 {
                        let d = ConvolutionElement::delta(g, arrow_at[&(r, c)]).scale(&PhaseScalar::from_int(v));
                        model = model.add(&d)?;
                    }
                }
            }
            if conv != model {
                report.mismatches += 1;
                report.first_mismatch.get_or_insert((a, b));
            }
        }
    }
    Ok(report)
}
