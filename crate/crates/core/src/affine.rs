//! Affine structures given as per-cone generator lists, and the lattice
//! questions asked of them: membership, combinatorial principality, torsor
//! sections on cells, closure and normality of subgroups.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};

use num_traits::Zero;

use crate::complex::{Cell, ConeComplex, ConeId, Domain, PLFunction, RayId};
use crate::cycles::TropicalCycle;
use crate::error::{Error, Result};
use crate::lattice::{self, Hnf, Vector};
use crate::morphism::ComplexMorphism;
use crate::rational::{common_denominator, from_i128, Q};

/// Integer data of an affine structure on the star of one cone.
#[derive(Debug)]
struct ConeLattice {
    star_rays: Vec<RayId>,
    /// Generator slope vectors over `star_rays`.
    gens: Vec<Vector>,
    full: Hnf,
    /// HNF of the generators restricted to the cone's rays.
    restricted: Hnf,
    vanishing: OnceLock<Vec<Vector>>,
}

impl ConeLattice {
    fn build(complex: &ConeComplex, sigma: ConeId, gens: &[&PLFunction]) -> Result<Self> {
        let star_rays = complex.star_rays(sigma)?;
        let mut rows = Vec::with_capacity(gens.len());
        for g in gens {
            let v = g.integer_vector(&star_rays).ok_or_else(|| {
                Error::DomainMismatch(format!(
                    "generator at {} has fractional slopes",
                    complex.cone(sigma).id
                ))
            })?;
            rows.push(v);
        }
        let full = Hnf::new(&rows, star_rays.len())?;
        let own_cols = positions(&star_rays, &complex.cone(sigma).rays);
        let restricted = Hnf::new(&select_cols(&rows, &own_cols), own_cols.len())?;
        Ok(ConeLattice {
            star_rays,
            gens: rows,
            full,
            restricted,
            vanishing: OnceLock::new(),
        })
    }

    fn combine(&self, mu: &[i128]) -> Result<Vector> {
        let mut v = vec![0i128; self.star_rays.len()];
        for (c, g) in mu.iter().zip(&self.gens) {
            for (x, y) in v.iter_mut().zip(g) {
                *x = x
                    .checked_add(c.checked_mul(*y).ok_or(Error::Overflow)?)
                    .ok_or(Error::Overflow)?;
            }
        }
        Ok(v)
    }

    /// Basis of the affine slope vectors vanishing on the cone itself.
    fn vanishing(&self) -> Result<&[Vector]> {
        if let Some(v) = self.vanishing.get() {
            return Ok(v);
        }
        let mut out = Vec::new();
        for mu in self.restricted.left_kernel() {
            out.push(self.combine(&mu)?);
        }
        let basis = lattice::hnf_basis(&out, self.star_rays.len())?;
        Ok(self.vanishing.get_or_init(|| basis))
    }
}

fn positions(all: &[RayId], sub: &[RayId]) -> Vec<usize> {
    sub.iter()
        .map(|r| all.binary_search(r).expect("cone rays lie in its star"))
        .collect()
}

fn select_cols(rows: &[Vector], cols: &[usize]) -> Vec<Vector> {
    rows.iter()
        .map(|r| cols.iter().map(|&c| r[c]).collect())
        .collect()
}

/// An affine structure: for each cone, a list of strict functions on its star
/// whose integer span (plus constants) is the group of affine functions there.
#[derive(Debug)]
pub struct AffineStructure {
    complex: Arc<ConeComplex>,
    pool: Vec<PLFunction>,
    at: Vec<Vec<usize>>,
    cache: Vec<OnceLock<Result<Arc<ConeLattice>>>>,
}

impl Clone for AffineStructure {
    fn clone(&self) -> Self {
        Self::from_pool(self.complex.clone(), self.pool.clone(), self.at.clone())
            .expect("already validated")
    }
}

impl AffineStructure {
    fn from_pool(
        complex: Arc<ConeComplex>,
        pool: Vec<PLFunction>,
        at: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if at.len() != complex.num_cones() {
            return Err(Error::DomainMismatch(
                "one generator list per cone is required".into(),
            ));
        }
        for (c, idx) in at.iter().enumerate() {
            let star = complex.star(ConeId(c))?;
            for &i in idx {
                let g = &pool[i];
                if !g.is_strict() {
                    return Err(Error::DomainMismatch(format!(
                        "generator at {} is not strict",
                        complex.cone(ConeId(c)).id
                    )));
                }
                if !g.domain.covers(star) {
                    return Err(Error::DomainMismatch(format!(
                        "generator at {} is not defined on the whole star",
                        complex.cone(ConeId(c)).id
                    )));
                }
            }
        }
        let cache = (0..complex.num_cones()).map(|_| OnceLock::new()).collect();
        Ok(AffineStructure {
            complex,
            pool,
            at,
            cache,
        })
    }

    /// One generator list per cone, in cone order.
    pub fn new(complex: Arc<ConeComplex>, per_cone: Vec<Vec<PLFunction>>) -> Result<Self> {
        let mut pool = Vec::new();
        let mut at = Vec::with_capacity(per_cone.len());
        for gens in per_cone {
            let start = pool.len();
            pool.extend(gens);
            at.push((start..pool.len()).collect());
        }
        Self::from_pool(complex, pool, at)
    }

    /// The same global functions generate the structure at every cone.
    pub fn global(complex: Arc<ConeComplex>, gens: Vec<PLFunction>) -> Result<Self> {
        let at = vec![(0..gens.len()).collect(); complex.num_cones()];
        Self::from_pool(complex, gens, at)
    }

    /// Only constants are affine.
    pub fn constants(complex: Arc<ConeComplex>) -> Self {
        let n = complex.num_cones();
        Self::from_pool(complex, Vec::new(), vec![Vec::new(); n]).expect("empty structure is valid")
    }

    /// Pulls a structure on `f.target` back to `f.source`.
    pub fn pullback(&self, f: &ComplexMorphism) -> Result<Self> {
        if *f.target != *self.complex {
            return Err(Error::DomainMismatch(
                "morphism target differs from the structure's complex".into(),
            ));
        }
        let pool = self
            .pool
            .iter()
            .map(|g| f.pullback(g))
            .collect::<Result<Vec<_>>>()?;
        let at = f
            .source
            .cone_ids()
            .map(|c| self.at[f.image_cone(c).0].clone())
            .collect();
        Self::from_pool(f.source.clone(), pool, at)
    }

    pub fn complex(&self) -> &Arc<ConeComplex> {
        &self.complex
    }

    pub fn generators_at(&self, sigma: ConeId) -> impl Iterator<Item = &PLFunction> {
        self.at[sigma.0].iter().map(|&i| &self.pool[i])
    }

    fn lattice(&self, sigma: ConeId) -> Result<Arc<ConeLattice>> {
        self.complex.check(sigma)?;
        self.cache[sigma.0]
            .get_or_init(|| {
                let gens: Vec<&PLFunction> = self.generators_at(sigma).collect();
                ConeLattice::build(&self.complex, sigma, &gens).map(Arc::new)
            })
            .clone()
    }

    fn check_domain(&self, f: &PLFunction, sigma: ConeId) -> Result<()> {
        if f.domain.covers(self.complex.star(sigma)?) {
            Ok(())
        } else {
            Err(Error::DomainMismatch(format!(
                "function is not defined on the star of {}",
                self.complex.cone(sigma).id
            )))
        }
    }

    /// Rank of the affine functions at `sigma` modulo constants.
    pub fn rank_at(&self, sigma: ConeId) -> Result<usize> {
        Ok(self.lattice(sigma)?.full.rank())
    }

    /// The affine slope lattice at `sigma`, as a subgroup of functions on the star.
    pub fn subgroup_at(&self, sigma: ConeId) -> Result<AffineSubgroup> {
        let l = self.lattice(sigma)?;
        Ok(AffineSubgroup {
            complex: self.complex.clone(),
            center: sigma,
            star_rays: l.star_rays.clone(),
            basis: l.full.basis(),
        })
    }

    pub fn is_affine(&self, f: &PLFunction, sigma: ConeId) -> Result<bool> {
        self.check_domain(f, sigma)?;
        let l = self.lattice(sigma)?;
        match f.integer_vector(&l.star_rays) {
            Some(v) => l.full.contains(&v),
            None => Ok(false),
        }
    }

    /// An affine function on the star of `sigma` agreeing with `f` on `sigma`.
    pub fn is_cp_at(&self, f: &PLFunction, sigma: ConeId) -> Result<Option<PLFunction>> {
        self.check_domain(f, sigma)?;
        let l = self.lattice(sigma)?;
        let own = &self.complex.cone(sigma).rays;
        let Some(t) = f.integer_vector(own) else {
            return Ok(None);
        };
        let Some(mu) = l.restricted.solve(&t)? else {
            return Ok(None);
        };
        let v = l.combine(&mu)?;
        let mut chi = PLFunction::from_integer_vector(&l.star_rays, &v).with_domain(Domain::Cones(
            self.complex.star(sigma)?.iter().copied().collect(),
        ));
        chi.constant = f.constant.clone();
        Ok(Some(chi))
    }

    /// An affine `χ` at `cell.sigma` with `χ + f` constant (in fact zero) on
    /// `cell.tau`.
    pub fn torsor_section(&self, f: &PLFunction, cell: Cell) -> Result<Option<PLFunction>> {
        let (sigma, tau) = (cell.sigma, cell.tau);
        self.complex.check(sigma)?;
        self.complex.check(tau)?;
        if !self.complex.is_face(tau, sigma) {
            return Err(Error::InvalidCell {
                sigma: self.complex.cone(sigma).id.clone(),
                tau: self.complex.cone(tau).id.clone(),
            });
        }
        self.check_domain(f, sigma)?;
        let l = self.lattice(sigma)?;
        let tau_rays = &self.complex.cone(tau).rays;
        let Some(t) = f.neg().integer_vector(tau_rays) else {
            return Ok(None);
        };
        let cols = positions(&l.star_rays, tau_rays);
        let h = Hnf::new(&select_cols(&l.gens, &cols), cols.len())?;
        let Some(mu) = h.solve(&t)? else {
            return Ok(None);
        };
        let v = l.combine(&mu)?;
        let mut chi = PLFunction::from_integer_vector(&l.star_rays, &v).with_domain(Domain::Cones(
            self.complex.star(sigma)?.iter().copied().collect(),
        ));
        chi.constant = -f.constant.clone();
        Ok(Some(chi))
    }

    pub fn torsor_section_exists(&self, f: &PLFunction, cell: Cell) -> Result<bool> {
        Ok(self.torsor_section(f, cell)?.is_some())
    }

    /// Checks every cell and collects the local Cartier data `−(χ + f)`.
    pub fn is_tropical_divisor(&self, f: &PLFunction, cells: &[Cell]) -> Result<DivisorCheck> {
        let mut data = Vec::with_capacity(cells.len());
        let mut ok = true;
        for &cell in cells {
            let section = self.torsor_section(f, cell)?;
            let datum = section.map(|chi| {
                let star: Vec<RayId> = self.complex.star_rays(cell.sigma).expect("checked");
                chi.add(f).neg().restrict(&star, chi.domain.clone())
            });
            ok &= datum.is_some();
            data.push((cell, datum));
        }
        Ok(DivisorCheck { ok, data })
    }

    /// Basis of the affine functions at `tau` that vanish on `tau`.
    pub fn vanishing_basis(&self, tau: ConeId) -> Result<Vec<PLFunction>> {
        let l = self.lattice(tau)?;
        Ok(l.vanishing()?
            .iter()
            .map(|v| PLFunction::from_integer_vector(&l.star_rays, v))
            .collect())
    }

    /// Restriction closure: each generator at `σ` is affine at every `δ ⊇ σ`.
    pub fn check_restriction_closure(&self) -> Result<Option<(ConeId, ConeId)>> {
        for s in self.complex.cone_ids() {
            for &d in self.complex.star(s)? {
                for g in self.generators_at(s) {
                    if !self.is_affine(g, d)? {
                        return Ok(Some((s, d)));
                    }
                }
            }
        }
        Ok(None)
    }
}

#[derive(Debug, Clone)]
pub struct DivisorCheck {
    pub ok: bool,
    /// Per cell, the local Cartier datum when a section exists.
    pub data: Vec<(Cell, Option<PLFunction>)>,
}

/// A subgroup of strict functions on the star of `center`, modulo constants,
/// given by a basis of integer slope vectors over `star_rays`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSubgroup {
    pub complex: Arc<ConeComplex>,
    pub center: ConeId,
    pub star_rays: Vec<RayId>,
    pub basis: Vec<Vector>,
}

impl AffineSubgroup {
    pub fn new(complex: Arc<ConeComplex>, center: ConeId, gens: &[PLFunction]) -> Result<Self> {
        let star_rays = complex.star_rays(center)?;
        let rows = gens
            .iter()
            .map(|g| {
                g.integer_vector(&star_rays).ok_or_else(|| {
                    Error::DomainMismatch("subgroup generators must be strict".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let basis = lattice::hnf_basis(&rows, star_rays.len())?;
        Ok(AffineSubgroup {
            complex,
            center,
            star_rays,
            basis,
        })
    }

    fn with_basis(&self, rows: &[Vector]) -> Result<Self> {
        Ok(AffineSubgroup {
            complex: self.complex.clone(),
            center: self.center,
            star_rays: self.star_rays.clone(),
            basis: lattice::hnf_basis(rows, self.star_rays.len())?,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn functions(&self) -> Vec<PLFunction> {
        self.basis
            .iter()
            .map(|v| PLFunction::from_integer_vector(&self.star_rays, v))
            .collect()
    }

    pub fn contains(&self, f: &PLFunction) -> Result<bool> {
        match f.integer_vector(&self.star_rays) {
            Some(v) => Hnf::new(&self.basis, self.star_rays.len())?.contains(&v),
            None => Ok(false),
        }
    }

    pub fn is_subgroup_of(&self, other: &AffineSubgroup) -> Result<bool> {
        lattice::is_sublattice(&self.basis, &other.basis, self.star_rays.len())
    }

    fn cols(&self, c: ConeId) -> Vec<usize> {
        positions(&self.star_rays, &self.complex.cone(c).rays)
    }

    /// Cones of the star of the given dimension.
    fn star_cones(&self, k: usize) -> Result<Vec<ConeId>> {
        Ok(self
            .complex
            .star(self.center)?
            .iter()
            .copied()
            .filter(|c| self.complex.cone(*c).dim() == k)
            .collect())
    }

    /// Pairing `Σ h(u_{ρ/τ})·w(ρ)` of a slope vector with the weight around `tau`.
    fn pairing(&self, h: &[i128], tau: ConeId, w: &TropicalCycle) -> Result<Q> {
        let mut s = Q::zero();
        for (rho, extra) in self.complex.upper_neighbors(tau)? {
            let col = self.star_rays.binary_search(&extra).expect("in star");
            s += from_i128(h[col]) * w.weight(rho);
        }
        Ok(s)
    }

    fn check_balanced(&self, w: &TropicalCycle) -> Result<()> {
        let n = self.star_rays.len();
        if w.dim == 0 {
            return Ok(());
        }
        for tau in self.star_cones(w.dim - 1)? {
            let cols = self.cols(tau);
            let h = Hnf::new(&select_cols(&self.basis, &cols), cols.len())?;
            for mu in h.left_kernel() {
                let mut v = vec![0i128; n];
                for (c, b) in mu.iter().zip(&self.basis) {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += c * y;
                    }
                }
                if !self.pairing(&v, tau, w)?.is_zero() {
                    return Err(Error::UnbalancedFundamentalClass(
                        self.complex.cone(tau).id.clone(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Functions matching some element of the subgroup on every cone of the star.
    pub fn cone_wise_matching(&self) -> Result<Self> {
        let n = self.star_rays.len();
        let mut lat: Vec<Vector> = (0..n)
            .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
            .collect();
        for &m in self.complex.star(self.center)? {
            if self.complex.star(m)?.len() != 1 {
                continue;
            }
            let own: BTreeSet<usize> = self.cols(m).into_iter().collect();
            let mut gens = self.basis.clone();
            for j in (0..n).filter(|j| !own.contains(j)) {
                gens.push((0..n).map(|i| i128::from(i == j)).collect());
            }
            lat = lattice::intersect(&lat, &gens, n)?;
        }
        self.with_basis(&lat)
    }

    /// `{φ ∈ CP_H : φ · w = 0}`, where `w` is the top-dimensional weight on
    /// the star.
    pub fn closure(&self, w: &TropicalCycle) -> Result<Self> {
        self.check_balanced(w)?;
        let cp = self.cone_wise_matching()?;
        if w.dim == 0 {
            return Ok(cp);
        }
        let taus = self.star_cones(w.dim - 1)?;
        if taus.is_empty() {
            return Ok(cp);
        }
        let n = self.star_rays.len();
        // Rational weights of each CP basis vector, one column per tau.
        let mut table: Vec<Vec<Q>> = Vec::with_capacity(cp.basis.len());
        for b in &cp.basis {
            let mut row = Vec::with_capacity(taus.len());
            for &tau in &taus {
                let cols = self.cols(tau);
                let h = Hnf::new(&select_cols(&self.basis, &cols), cols.len())?;
                let t: Vec<i128> = cols.iter().map(|&c| b[c]).collect();
                let mu = h.solve(&t)?.ok_or_else(|| {
                    Error::DomainMismatch("cone-wise matching basis fails to match".into())
                })?;
                let mut diff = b.clone();
                for (c, g) in mu.iter().zip(&self.basis) {
                    for (x, y) in diff.iter_mut().zip(g) {
                        *x -= c * y;
                    }
                }
                row.push(-self.pairing(&diff, tau, w)?);
            }
            table.push(row);
        }
        let mut int_table: Vec<Vector> = vec![Vec::with_capacity(taus.len()); table.len()];
        for j in 0..taus.len() {
            let d = common_denominator(table.iter().map(|r| &r[j]));
            for (i, r) in table.iter().enumerate() {
                let v = &r[j] * Q::from_integer(d.clone());
                int_table[i].push(crate::rational::as_integer(&v).ok_or(Error::Overflow)?);
            }
        }
        let ker = Hnf::new(&int_table, taus.len())?.left_kernel();
        let mut out = Vec::with_capacity(ker.len());
        for mu in ker {
            let mut v = vec![0i128; n];
            for (c, b) in mu.iter().zip(&cp.basis) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += c * y;
                }
            }
            out.push(v);
        }
        self.with_basis(&out)
    }

    pub fn is_normal(&self, w: &TropicalCycle) -> Result<bool> {
        let c = self.closure(w)?;
        lattice::same_lattice(&c.basis, &self.basis, self.star_rays.len())
    }
}

/// Restricts a cycle's weights to top cones of a star, for closure computations.
pub fn star_weight(c: &TropicalCycle, center: ConeId) -> Result<TropicalCycle> {
    let star: BTreeSet<ConeId> = c.complex.star(center)?.iter().copied().collect();
    let weights: BTreeMap<ConeId, Q> = c
        .weights()
        .iter()
        .filter(|(k, _)| star.contains(k))
        .map(|(k, v)| (*k, v.clone()))
        .collect();
    TropicalCycle::new(c.complex.clone(), c.dim, weights)
}
