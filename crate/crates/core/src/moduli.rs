//! Tropical `M_{0,n}` as the complex of compatible splits, with cross ratios,
//! forgetful maps to `M_{0,4}` and ψ representatives.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::affine::AffineStructure;
use crate::complex::{default_cone_id, ConeComplex, ConeId, ConeSpec, PLFunction, Ray, RayId};
use crate::cycles::{intersect, TropicalCycle};
use crate::error::{Error, Result};
use crate::morphism::ComplexMorphism;
use crate::rational::Q;

/// A split of `{1..n}` stored as the bitmask of the side containing mark 1
/// (bit `i-1` is mark `i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Split {
    pub n: usize,
    pub mask: u32,
}

impl Split {
    /// Normalizes either side of a split. `None` unless both sides have at
    /// least two marks.
    pub fn from_marks(n: usize, marks: &[usize]) -> Option<Self> {
        let full = full_mask(n);
        let mut mask = 0u32;
        for &m in marks {
            if m == 0 || m > n {
                return None;
            }
            mask |= 1 << (m - 1);
        }
        if mask & 1 == 0 {
            mask = full & !mask;
        }
        let k = mask.count_ones() as usize;
        (k >= 2 && k + 2 <= n).then_some(Split { n, mask })
    }

    pub fn contains(&self, mark: usize) -> bool {
        self.mask & (1 << (mark - 1)) != 0
    }

    pub fn side(&self) -> Vec<usize> {
        (1..=self.n).filter(|&m| self.contains(m)).collect()
    }

    pub fn other_side(&self) -> Vec<usize> {
        (1..=self.n).filter(|&m| !self.contains(m)).collect()
    }

    pub fn compatible(&self, other: &Split) -> bool {
        let (a, b) = (self.mask, other.mask);
        a & b == a || a & b == b || a | b == full_mask(self.n)
    }

    /// Smaller side first (the side with mark 1 on ties), e.g. `23|145`.
    pub fn label(&self) -> String {
        let (mut s, mut t) = (self.side(), self.other_side());
        if t.len() < s.len() {
            std::mem::swap(&mut s, &mut t);
        }
        let txt = |v: &[usize]| v.iter().map(|m| m.to_string()).collect::<String>();
        format!("{}|{}", txt(&s), txt(&t))
    }

    /// Smaller side as a sorted list, used for ordering.
    fn small_side(&self) -> Vec<usize> {
        let (s, t) = (self.side(), self.other_side());
        if t.len() < s.len() {
            t
        } else {
            s
        }
    }

    /// `Some(true)` if the split separates `p1 p3 | p2 p4`, `Some(false)` for
    /// `p1 p4 | p2 p3`, `None` otherwise.
    fn quartet(&self, p: [usize; 4]) -> Option<bool> {
        let s = p.map(|m| self.contains(m));
        if s[0] == s[1] || s[2] == s[3] {
            return None;
        }
        Some(s[0] == s[2])
    }
}

fn full_mask(n: usize) -> u32 {
    (1u32 << n) - 1
}

fn check_n(n: usize) -> Result<()> {
    if (4..=8).contains(&n) {
        Ok(())
    } else {
        Err(Error::OutOfRange(n))
    }
}

fn check_marks(n: usize, marks: &[usize]) -> Result<()> {
    for (i, &m) in marks.iter().enumerate() {
        if m == 0 || m > n {
            return Err(Error::InvalidMarks(format!("mark {m} is not in 1..={n}")));
        }
        if marks[..i].contains(&m) {
            return Err(Error::InvalidMarks(format!("mark {m} repeated")));
        }
    }
    Ok(())
}

/// All splits of `{1..n}` in canonical ray order.
pub fn splits(n: usize) -> Vec<Split> {
    let mut out: Vec<Split> = (0..(1u32 << n))
        .filter(|m| m & 1 == 1)
        .filter_map(|mask| {
            let k = mask.count_ones() as usize;
            (k >= 2 && k + 2 <= n).then_some(Split { n, mask })
        })
        .collect();
    out.sort_by_key(|s| (s.small_side().len(), s.small_side(), s.mask));
    out
}

/// The complex whose `k`-cones are the sets of `k` pairwise compatible splits.
pub fn build_m0n(n: usize) -> Result<ConeComplex> {
    check_n(n)?;
    let sp = splits(n);
    let rays: Vec<Ray> = sp
        .iter()
        .map(|s| Ray {
            id: s.label(),
            label: s.label(),
        })
        .collect();
    let mut sets: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..n - 3 {
        let mut next = Vec::new();
        for set in &frontier {
            let start = set.last().map_or(0, |l| l + 1);
            for j in start..sp.len() {
                if set.iter().all(|&i| sp[i].compatible(&sp[j])) {
                    let mut s = set.clone();
                    s.push(j);
                    next.push(s);
                }
            }
        }
        sets.extend(next.iter().cloned());
        frontier = next;
    }
    let specs = sets
        .into_iter()
        .map(|s| {
            let ids: Vec<String> = s.iter().map(|&i| rays[i].id.clone()).collect();
            ConeSpec {
                id: default_cone_id(&ids),
                rays: ids,
                aut: 1,
            }
        })
        .collect();
    ConeComplex::build(rays, specs)
}

/// The ray of `ρ_S` for either side `S` of a split.
pub fn split_ray(complex: &ConeComplex, n: usize, marks: &[usize]) -> Result<RayId> {
    let s = Split::from_marks(n, marks)
        .ok_or_else(|| Error::InvalidMarks(format!("{marks:?} is not a split of 1..={n}")))?;
    complex.ray_by_id(&s.label())
}

fn split_of(complex: &ConeComplex, n: usize, r: RayId) -> Split {
    let id = &complex.ray(r).id;
    let side: Vec<usize> = id
        .split('|')
        .next()
        .expect("split label")
        .chars()
        .map(|c| c.to_digit(10).expect("digit") as usize)
        .collect();
    Split::from_marks(n, &side).expect("valid split label")
}

/// Cross ratio with slope +1 on splits `p1 p3 | p2 p4`, −1 on `p1 p4 | p2 p3`.
pub fn cross_ratio(
    complex: &ConeComplex,
    n: usize,
    a: (usize, usize),
    b: (usize, usize),
) -> Result<PLFunction> {
    let p = [a.0, a.1, b.0, b.1];
    check_marks(n, &p)?;
    let slopes = complex.ray_ids().filter_map(|r| {
        split_of(complex, n, r)
            .quartet(p)
            .map(|same| (r, if same { 1 } else { -1 }))
    });
    Ok(PLFunction::from_slopes(slopes))
}

/// The three cross ratios of every four-element subset of marks.
pub fn cross_ratios(complex: &ConeComplex, n: usize) -> Result<Vec<PLFunction>> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for d in c + 1..=n {
                    out.push(cross_ratio(complex, n, (a, b), (c, d))?);
                    out.push(cross_ratio(complex, n, (a, c), (b, d))?);
                    out.push(cross_ratio(complex, n, (a, d), (b, c))?);
                }
            }
        }
    }
    Ok(out)
}

pub fn cross_ratio_structure(complex: Arc<ConeComplex>, n: usize) -> Result<AffineStructure> {
    check_n(n)?;
    let gens = cross_ratios(&complex, n)?;
    AffineStructure::global(complex, gens)
}

/// Forgets all marks but `p`, relabelling `p[i]` as mark `i+1` of `M_{0,4}`.
pub fn forgetful(
    source: Arc<ConeComplex>,
    n: usize,
    m04: Arc<ConeComplex>,
    p: [usize; 4],
) -> Result<ComplexMorphism> {
    check_marks(n, &p)?;
    let images = source
        .ray_ids()
        .map(|r| -> Result<BTreeMap<RayId, i64>> {
            let s = split_of(&source, n, r);
            let inside: Vec<usize> = (0..4)
                .filter(|&i| s.contains(p[i]))
                .map(|i| i + 1)
                .collect();
            if inside.len() != 2 {
                return Ok(BTreeMap::new());
            }
            Ok(BTreeMap::from([(split_ray(&m04, 4, &inside)?, 1)]))
        })
        .collect::<Result<Vec<_>>>()?;
    ComplexMorphism::new(source, m04, images)
}

/// `Σ_{S : i ∈ S, j,k ∉ S}` of the ray functions of `ρ_S`.
pub fn psi_representative_with(
    complex: &ConeComplex,
    n: usize,
    i: usize,
    j: usize,
    k: usize,
) -> Result<PLFunction> {
    check_marks(n, &[i, j, k])?;
    let slopes = complex.ray_ids().filter_map(|r| {
        let s = split_of(complex, n, r);
        let ok = if s.contains(i) {
            !s.contains(j) && !s.contains(k)
        } else {
            s.contains(j) && s.contains(k)
        };
        ok.then_some((r, -1))
    });
    Ok(PLFunction::from_slopes(slopes))
}

/// ψ representative with `j, k` the two smallest marks other than `i`.
pub fn psi_representative(complex: &ConeComplex, n: usize, i: usize) -> Result<PLFunction> {
    check_n(n)?;
    let mut others = (1..=n).filter(|&m| m != i);
    let (j, k) = (others.next().unwrap_or(0), others.next().unwrap_or(0));
    psi_representative_with(complex, n, i, j, k)
}

/// `M_{0,n}` with its cross-ratio structure, ready for ψ computations.
#[derive(Debug, Clone)]
pub struct M0n {
    pub n: usize,
    pub complex: Arc<ConeComplex>,
    pub structure: AffineStructure,
}

impl M0n {
    pub fn new(n: usize) -> Result<Self> {
        let complex = Arc::new(build_m0n(n)?);
        let structure = cross_ratio_structure(complex.clone(), n)?;
        Ok(M0n {
            n,
            complex,
            structure,
        })
    }

    pub fn fundamental_class(&self) -> TropicalCycle {
        TropicalCycle::fundamental_class(self.complex.clone()).expect("M0n is pure")
    }

    pub fn psi(&self, i: usize) -> Result<PLFunction> {
        psi_representative(&self.complex, self.n, i)
    }

    /// The 0-cycle degree of `∏ ψ_i^{a_i}` capped with the fundamental class.
    pub fn psi_degree(&self, exponents: &[usize]) -> Result<Q> {
        psi_degree_on(&self.structure, &self.fundamental_class(), exponents, |i| {
            self.psi(i)
        })
    }
}

/// Iterated intersection of representatives with `start`; shared with
/// refined complexes where the representatives are pulled back.
pub fn psi_degree_on(
    a: &AffineStructure,
    start: &TropicalCycle,
    exponents: &[usize],
    rep: impl Fn(usize) -> Result<PLFunction>,
) -> Result<Q> {
    let sum: usize = exponents.iter().sum();
    if sum != start.dim {
        return Err(Error::BadExponents(format!(
            "exponents sum to {sum}, expected {}",
            start.dim
        )));
    }
    let mut c = start.clone();
    let mut cache: HashMap<usize, PLFunction> = HashMap::new();
    for (idx, &e) in exponents.iter().enumerate() {
        let i = idx + 1;
        for _ in 0..e {
            let f = match cache.get(&i) {
                Some(f) => f.clone(),
                None => {
                    let f = rep(i)?;
                    cache.insert(i, f.clone());
                    f
                }
            };
            c = intersect(a, &f, &c)?;
        }
    }
    Ok(c.total())
}

/// Validates the exponent vector for `M_{0,n}` before computing.
pub fn psi_degree(m: &M0n, exponents: &[usize]) -> Result<Q> {
    if exponents.len() != m.n {
        return Err(Error::BadExponents(format!(
            "{} exponents for n = {}",
            exponents.len(),
            m.n
        )));
    }
    m.psi_degree(exponents)
}

/// Number of cones per dimension, for reports.
pub fn cone_counts(c: &ConeComplex) -> Vec<usize> {
    (0..=c.dim()).map(|k| c.cones_of_dim(k).len()).collect()
}

/// Values of all cross ratios on the maximal cone `sigma` have full rank.
pub fn spans_dual_lattice(a: &AffineStructure, sigma: ConeId) -> Result<bool> {
    let c = a.complex().cone(sigma).clone();
    let rows: Vec<Vec<i128>> = a
        .generators_at(sigma)
        .map(|g| {
            c.rays
                .iter()
                .map(|r| crate::rational::as_integer(&g.slope(*r)).unwrap_or(0))
                .collect()
        })
        .collect();
    let b = crate::lattice::hnf_basis(&rows, c.dim())?;
    let id: Vec<Vec<i128>> = (0..c.dim())
        .map(|i| (0..c.dim()).map(|j| i128::from(i == j)).collect())
        .collect();
    Ok(b == id)
}
