//! Local degrees of a map onto a stacky target, given by per-face matrices
//! into target charts.
//!
//! A chart is an orthant `R^d_{>=0}` mapping onto a target cone. When the
//! chart carries a fold, the target cone is its quotient by swapping the two
//! coordinates, and a target point has a two-element orbit in the chart.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::complex::{ConeComplex, ConeId};
use crate::cycles::TropicalCycle;
use crate::error::{Error, Result};
use crate::lattice;
use crate::morphism::ComplexMorphism;
use crate::rational::{from_i128, q, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetChart {
    pub name: String,
    pub dim: usize,
    /// `|Aut|` of a generic curve over the chart, the inverse of the target weight.
    pub aut_order: u64,
    pub fold: bool,
}

/// Linear map from a source face into a chart: `columns[j]` is the image of
/// the face's `j`-th ray (in the complex's ray order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceChart {
    pub chart: usize,
    pub columns: Vec<Vec<i64>>,
}

impl FaceChart {
    /// Rows of the matrix, one per chart coordinate.
    pub fn matrix(&self) -> Vec<Vec<i128>> {
        let d = self.columns.first().map_or(0, |c| c.len());
        (0..d)
            .map(|i| self.columns.iter().map(|c| i128::from(c[i])).collect())
            .collect()
    }

    pub fn det(&self) -> Result<i128> {
        let m = self.matrix();
        if m.len() != self.columns.len() {
            return Ok(0);
        }
        lattice::det(&m)
    }
}

#[derive(Debug, Clone)]
pub struct ChartedMap {
    pub source: Arc<ConeComplex>,
    pub charts: Vec<TargetChart>,
    /// Faces missing from the map are degenerate (rank-dropping).
    pub faces: BTreeMap<ConeId, FaceChart>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preimage {
    pub face: ConeId,
    /// Index into the orbit of the sample point.
    pub orbit_point: usize,
    pub coords: Vec<Q>,
    pub local_degree: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReport {
    pub degree: Q,
    pub preimages: Vec<Preimage>,
}

/// Solves `m x = b` for square nonsingular `m` over the rationals.
fn solve(m: &[Vec<i128>], b: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r: Vec<Q> = row.iter().map(|x| from_i128(*x)).collect();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let pivot = a[col].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot).skip(col) {
                    *x -= y * &f;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n].clone()).collect())
}

impl ChartedMap {
    /// Sum of `ω(σ)·aut(chart)·|det M_σ|` over faces `σ` and orbit points `p`
    /// with a solution `x > 0` of `M_σ x = p`.
    pub fn degree_at(
        &self,
        cycle: &TropicalCycle,
        chart: usize,
        point: &[Q],
    ) -> Result<DegreeReport> {
        let ch = self
            .charts
            .get(chart)
            .ok_or_else(|| Error::DomainMismatch(format!("no chart {chart}")))?;
        if point.len() != ch.dim {
            return Err(Error::DomainMismatch(format!(
                "chart {} has dimension {}",
                ch.name, ch.dim
            )));
        }
        if cycle.dim != ch.dim {
            return Err(Error::DomainMismatch(
                "cycle is not top-dimensional for the chart".into(),
            ));
        }
        if *cycle.complex != *self.source {
            return Err(Error::DomainMismatch(
                "cycle lives on a different complex".into(),
            ));
        }
        if point.iter().any(|x| !x.is_positive()) {
            return Err(Error::NonGenericSample(
                "point is not in the open chart".into(),
            ));
        }
        let mut orbit = vec![point.to_vec()];
        if ch.fold {
            let mut swapped = point.to_vec();
            swapped.swap(0, 1);
            if swapped == point {
                return Err(Error::NonGenericSample("point is fixed by the fold".into()));
            }
            orbit.push(swapped);
        }
        let mut degree = Q::zero();
        let mut preimages = Vec::new();
        for (&face, fc) in &self.faces {
            if fc.chart != chart {
                continue;
            }
            let det = fc.det()?;
            if det == 0 {
                continue;
            }
            let m = fc.matrix();
            for (k, p) in orbit.iter().enumerate() {
                let x = solve(&m, p).expect("nonsingular");
                if x.iter().any(|v| v.is_zero()) {
                    return Err(Error::NonGenericSample(format!(
                        "point lies on the image of a wall of {}",
                        self.source.cone(face).id
                    )));
                }
                if x.iter().all(|v| v.is_positive()) {
                    let local = cycle.weight(face) * q(ch.aut_order as i64) * from_i128(det.abs());
                    degree += &local;
                    preimages.push(Preimage {
                        face,
                        orbit_point: k,
                        coords: x,
                        local_degree: local,
                    });
                }
            }
        }
        Ok(DegreeReport { degree, preimages })
    }

    /// Transports the face charts along a refinement `f: Σ' → self.source`.
    pub fn refine(&self, f: &ComplexMorphism) -> Result<ChartedMap> {
        if *f.target != *self.source {
            return Err(Error::DomainMismatch(
                "refinement target differs from the map's source".into(),
            ));
        }
        let mut faces = BTreeMap::new();
        for s in f.source.cone_ids() {
            let t = f.image_cone(s);
            let Some(fc) = self.faces.get(&t) else {
                continue;
            };
            if f.source.cone(s).dim() != f.target.cone(t).dim() {
                continue;
            }
            let d = f.matrix(s);
            let dim = fc.columns.first().map_or(0, |c| c.len());
            let columns = (0..f.source.cone(s).dim())
                .map(|j| {
                    (0..dim)
                        .map(|i| {
                            fc.columns
                                .iter()
                                .zip(&d)
                                .map(|(col, drow)| col[i] * drow[j] as i64)
                                .sum()
                        })
                        .collect()
                })
                .collect();
            faces.insert(
                s,
                FaceChart {
                    chart: fc.chart,
                    columns,
                },
            );
        }
        Ok(ChartedMap {
            source: f.source.clone(),
            charts: self.charts.clone(),
            faces,
        })
    }
}
