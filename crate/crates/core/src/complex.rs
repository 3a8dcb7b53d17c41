//! Simplicial cone complexes with a unimodular integral structure.
//!
//! Every cone's lattice is generated by its rays, so a point of a cone is a
//! nonnegative coordinate vector on the cone's rays and a piecewise linear
//! function is a value per ray.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice;
use crate::morphism::ComplexMorphism;
use crate::rational::{q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RayId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    pub id: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub id: String,
    /// Sorted ray indices.
    pub rays: Vec<RayId>,
    pub aut_order: u64,
}

impl Cone {
    pub fn dim(&self) -> usize {
        self.rays.len()
    }

    pub fn contains_ray(&self, r: RayId) -> bool {
        self.rays.binary_search(&r).is_ok()
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        self.rays.iter().all(|r| other.contains_ray(*r))
    }
}

/// Raw cone input: an id, ray ids and an automorphism order.
#[derive(Debug, Clone)]
pub struct ConeSpec {
    pub id: String,
    pub rays: Vec<String>,
    pub aut: u64,
}

impl ConeSpec {
    pub fn new(id: impl Into<String>, rays: &[&str]) -> Self {
        ConeSpec {
            id: id.into(),
            rays: rays.iter().map(|s| s.to_string()).collect(),
            aut: 1,
        }
    }

    pub fn with_aut(mut self, aut: u64) -> Self {
        self.aut = aut;
        self
    }
}

#[derive(Debug, Clone)]
pub struct ConeComplex {
    rays: Vec<Ray>,
    cones: Vec<Cone>,
    ray_index: HashMap<String, RayId>,
    cone_index: HashMap<String, ConeId>,
    by_rays: HashMap<Vec<RayId>, ConeId>,
    /// For each cone, every cone containing it (itself included), sorted.
    stars: Vec<Vec<ConeId>>,
    vertex: ConeId,
    dim: usize,
}

impl PartialEq for ConeComplex {
    fn eq(&self, other: &Self) -> bool {
        self.rays == other.rays && self.cones == other.cones
    }
}

impl Eq for ConeComplex {}

impl ConeComplex {
    /// Validates raw incidence data. Every face of every cone, the vertex
    /// included, must be listed.
    pub fn build(rays: Vec<Ray>, cones: Vec<ConeSpec>) -> Result<Self> {
        let mut ray_index = HashMap::new();
        for (i, r) in rays.iter().enumerate() {
            if ray_index.insert(r.id.clone(), RayId(i)).is_some() {
                return Err(Error::DuplicateRay(r.id.clone()));
            }
        }
        let mut built = Vec::with_capacity(cones.len());
        let mut cone_index = HashMap::new();
        let mut by_rays = HashMap::new();
        for (i, spec) in cones.into_iter().enumerate() {
            let mut rs = Vec::with_capacity(spec.rays.len());
            for r in &spec.rays {
                rs.push(
                    *ray_index
                        .get(r)
                        .ok_or_else(|| Error::UnknownRay(r.clone()))?,
                );
            }
            rs.sort();
            if rs.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::DuplicateRay(format!(
                    "{} in cone {}",
                    spec.rays.join(","),
                    spec.id
                )));
            }
            if spec.aut == 0 {
                return Err(Error::StructurallyInvalid(format!(
                    "cone {} has automorphism order 0",
                    spec.id
                )));
            }
            if cone_index.insert(spec.id.clone(), ConeId(i)).is_some() {
                return Err(Error::DuplicateCone(spec.id));
            }
            if by_rays.insert(rs.clone(), ConeId(i)).is_some() {
                return Err(Error::DuplicateCone(spec.id));
            }
            built.push(Cone {
                id: spec.id,
                rays: rs,
                aut_order: spec.aut,
            });
        }
        let Some(&vertex) = by_rays.get(&Vec::new()) else {
            return Err(Error::NonClosedUnderFaces {
                cone: "(complex)".into(),
                face: "vertex".into(),
            });
        };
        // Faces of a cone are exactly the subsets of its rays. Checking the
        // codimension-one faces suffices by induction.
        for c in &built {
            for skip in 0..c.rays.len() {
                let face: Vec<RayId> = c
                    .rays
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != skip)
                    .map(|(_, r)| *r)
                    .collect();
                if !by_rays.contains_key(&face) {
                    let names: Vec<&str> = face.iter().map(|r| rays[r.0].id.as_str()).collect();
                    return Err(Error::NonClosedUnderFaces {
                        cone: c.id.clone(),
                        face: format!("{{{}}}", names.join(",")),
                    });
                }
            }
        }
        for (i, r) in rays.iter().enumerate() {
            if !by_rays.contains_key(&vec![RayId(i)]) {
                return Err(Error::NonClosedUnderFaces {
                    cone: r.id.clone(),
                    face: "ray cone".into(),
                });
            }
        }
        let mut stars = vec![Vec::new(); built.len()];
        for (j, big) in built.iter().enumerate() {
            for sub in subsets(&big.rays) {
                stars[by_rays[&sub].0].push(ConeId(j));
            }
        }
        for s in &mut stars {
            s.sort();
        }
        let dim = built.iter().map(Cone::dim).max().unwrap_or(0);
        Ok(ConeComplex {
            rays,
            cones: built,
            ray_index,
            cone_index,
            by_rays,
            stars,
            vertex,
            dim,
        })
    }

    /// Builds the complex generated by the given cones, adding every face.
    /// Generated faces get ids made from their ray ids and automorphism order 1
    /// unless `aut` names them.
    pub fn from_maximal(
        rays: Vec<Ray>,
        maximal: &[Vec<String>],
        aut: &HashMap<Vec<String>, u64>,
        names: &HashMap<Vec<String>, String>,
    ) -> Result<Self> {
        let pos: HashMap<&str, usize> = rays
            .iter()
            .enumerate()
            .map(|(i, r)| (r.id.as_str(), i))
            .collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for m in maximal {
            let mut idx = Vec::with_capacity(m.len());
            for r in m {
                idx.push(
                    *pos.get(r.as_str())
                        .ok_or_else(|| Error::UnknownRay(r.clone()))?,
                );
            }
            idx.sort();
            for s in subsets_usize(&idx) {
                seen.insert(s);
            }
        }
        for i in 0..rays.len() {
            seen.insert(vec![i]);
        }
        seen.insert(Vec::new());
        let mut ordered: Vec<Vec<usize>> = seen.into_iter().collect();
        ordered.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let specs = ordered
            .into_iter()
            .map(|idx| {
                let ids: Vec<String> = idx.iter().map(|&i| rays[i].id.clone()).collect();
                let id = names
                    .get(&ids)
                    .cloned()
                    .unwrap_or_else(|| default_cone_id(&ids));
                let a = aut.get(&ids).copied().unwrap_or(1);
                ConeSpec {
                    id,
                    rays: ids,
                    aut: a,
                }
            })
            .collect();
        Self::build(rays, specs)
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn ray(&self, r: RayId) -> &Ray {
        &self.rays[r.0]
    }

    pub fn cone(&self, c: ConeId) -> &Cone {
        &self.cones[c.0]
    }

    pub fn ray_ids(&self) -> impl Iterator<Item = RayId> {
        (0..self.rays.len()).map(RayId)
    }

    pub fn cone_ids(&self) -> impl Iterator<Item = ConeId> {
        (0..self.cones.len()).map(ConeId)
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn num_cones(&self) -> usize {
        self.cones.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex(&self) -> ConeId {
        self.vertex
    }

    pub fn ray_by_id(&self, id: &str) -> Result<RayId> {
        self.ray_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownRay(id.to_string()))
    }

    pub fn cone_by_id(&self, id: &str) -> Result<ConeId> {
        self.cone_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownCone(id.to_string()))
    }

    /// The cone spanned by exactly these rays, if it exists.
    pub fn cone_with_rays(&self, rays: &[RayId]) -> Option<ConeId> {
        let mut v = rays.to_vec();
        v.sort();
        v.dedup();
        self.by_rays.get(&v).copied()
    }

    pub fn ray_cone(&self, r: RayId) -> ConeId {
        self.by_rays[&vec![r]]
    }

    pub fn cones_of_dim(&self, k: usize) -> Vec<ConeId> {
        self.cone_ids()
            .filter(|c| self.cone(*c).dim() == k)
            .collect()
    }

    pub fn maximal_cones(&self) -> Vec<ConeId> {
        self.cone_ids()
            .filter(|c| self.stars[c.0].len() == 1)
            .collect()
    }

    pub fn is_pure(&self) -> bool {
        self.maximal_cones()
            .iter()
            .all(|c| self.cone(*c).dim() == self.dim)
    }

    pub fn check(&self, c: ConeId) -> Result<()> {
        if c.0 < self.cones.len() {
            Ok(())
        } else {
            Err(Error::UnknownCone(format!("#{}", c.0)))
        }
    }

    /// Cones containing `sigma`, itself included, in id order.
    pub fn star(&self, sigma: ConeId) -> Result<&[ConeId]> {
        self.check(sigma)?;
        Ok(&self.stars[sigma.0])
    }

    /// Rays of all cones in the star of `sigma`, sorted.
    pub fn star_rays(&self, sigma: ConeId) -> Result<Vec<RayId>> {
        let mut out: BTreeSet<RayId> = BTreeSet::new();
        for c in self.star(sigma)? {
            out.extend(self.cone(*c).rays.iter().copied());
        }
        Ok(out.into_iter().collect())
    }

    /// Cones of the star one dimension above `tau`, paired with their extra ray.
    pub fn upper_neighbors(&self, tau: ConeId) -> Result<Vec<(ConeId, RayId)>> {
        let t = self.cone(tau);
        let mut out = Vec::new();
        for &c in self.star(tau)? {
            let cone = self.cone(c);
            if cone.dim() == t.dim() + 1 {
                let extra = cone
                    .rays
                    .iter()
                    .find(|r| !t.contains_ray(**r))
                    .copied()
                    .expect("coface has an extra ray");
                out.push((c, extra));
            }
        }
        Ok(out)
    }

    pub fn faces(&self, sigma: ConeId) -> Vec<ConeId> {
        subsets(&self.cone(sigma).rays)
            .into_iter()
            .map(|s| self.by_rays[&s])
            .collect()
    }

    pub fn is_face(&self, tau: ConeId, sigma: ConeId) -> bool {
        self.cone(tau).is_face_of(self.cone(sigma))
    }

    /// Smallest cone containing both, if the union of rays spans a cone.
    pub fn join(&self, a: ConeId, b: ConeId) -> Option<ConeId> {
        let mut v: Vec<RayId> = self.cone(a).rays.clone();
        v.extend(self.cone(b).rays.iter().copied());
        self.cone_with_rays(&v)
    }

    pub fn meet(&self, a: ConeId, b: ConeId) -> ConeId {
        let cb = self.cone(b);
        let v: Vec<RayId> = self
            .cone(a)
            .rays
            .iter()
            .filter(|r| cb.contains_ray(**r))
            .copied()
            .collect();
        self.by_rays[&v]
    }

    /// Same rays, cones of dimension at most `k`.
    pub fn skeleton(&self, k: usize) -> ConeComplex {
        let specs = self
            .cones
            .iter()
            .filter(|c| c.dim() <= k)
            .map(|c| ConeSpec {
                id: c.id.clone(),
                rays: c.rays.iter().map(|r| self.rays[r.0].id.clone()).collect(),
                aut: c.aut_order,
            })
            .collect();
        Self::build(self.rays.clone(), specs).expect("skeleton of a valid complex is valid")
    }

    pub fn star_quotient(&self, tau: ConeId) -> Result<StarQuotient> {
        let t = self.cone(tau).clone();
        self.check(tau)?;
        let ups = self.upper_neighbors(tau)?;
        let mut rays = Vec::with_capacity(ups.len());
        let mut ray_source = Vec::with_capacity(ups.len());
        let mut ray_of_extra: HashMap<RayId, usize> = HashMap::new();
        for (i, (c, extra)) in ups.iter().enumerate() {
            let cone = self.cone(*c);
            rays.push(Ray {
                id: cone.id.clone(),
                label: self.ray(*extra).label.clone(),
            });
            ray_source.push(*extra);
            ray_of_extra.insert(*extra, i);
        }
        let mut specs = Vec::new();
        let mut cone_source = Vec::new();
        for &c in self.star(tau)? {
            let cone = self.cone(c);
            let qrays: Vec<String> = cone
                .rays
                .iter()
                .filter(|r| !t.contains_ray(**r))
                .map(|r| rays[ray_of_extra[r]].id.clone())
                .collect();
            specs.push(ConeSpec {
                id: cone.id.clone(),
                rays: qrays,
                aut: cone.aut_order,
            });
            cone_source.push(c);
        }
        let complex = ConeComplex::build(rays, specs)?;
        Ok(StarQuotient {
            tau,
            complex,
            ray_source,
            cone_source,
        })
    }

    /// Point on `cone` with the given coordinates on its rays.
    pub fn evaluate(&self, f: &PLFunction, cone: ConeId, coords: &[Q]) -> Result<Q> {
        self.check(cone)?;
        if !f.domain.contains(cone) {
            return Err(Error::OutsideDomain(self.cone(cone).id.clone()));
        }
        let c = self.cone(cone);
        if coords.len() != c.dim() {
            return Err(Error::DomainMismatch(format!(
                "cone {} has dimension {}, got {} coordinates",
                c.id,
                c.dim(),
                coords.len()
            )));
        }
        if coords.iter().any(|x| x.is_negative()) {
            return Err(Error::OutsideDomain(format!(
                "negative coordinate on {}",
                c.id
            )));
        }
        let mut v = f.constant.clone();
        for (r, x) in c.rays.iter().zip(coords) {
            v += f.slope(*r) * x;
        }
        Ok(v)
    }

    /// Inserts the ray `sum coords[i] * rays[i]` of `sigma` and returns the
    /// refined complex with the identity-on-support morphism back to `self`.
    pub fn stellar_subdivide(
        self: &Arc<Self>,
        sigma: ConeId,
        coords: &[i64],
    ) -> Result<(Arc<ConeComplex>, ComplexMorphism)> {
        self.check(sigma)?;
        let s = self.cone(sigma).clone();
        if s.dim() == 0 || coords.len() != s.dim() || coords.iter().any(|&x| x <= 0) {
            return Err(Error::NotInterior(s.id.clone()));
        }
        if s.dim() == 1 {
            if coords != [1] {
                return Err(Error::NotInterior(s.id.clone()));
            }
            return Ok((self.clone(), ComplexMorphism::identity(self.clone())));
        }
        let g = coords
            .iter()
            .fold(0i128, |a, &x| lattice::gcd(a, x as i128));
        if g != 1 {
            return Err(Error::NonPrimitiveRay(g as i64));
        }
        let mut new_id = format!("v{}", self.rays.len());
        while self.ray_index.contains_key(&new_id) {
            new_id.push('\'');
        }
        let coord_txt: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
        let mut rays = self.rays.clone();
        rays.push(Ray {
            id: new_id.clone(),
            label: format!("{}[{}]", s.id, coord_txt.join(",")),
        });
        let v = RayId(self.rays.len());
        let mut specs = Vec::new();
        let ids =
            |rs: &[RayId]| -> Vec<String> { rs.iter().map(|r| rays[r.0].id.clone()).collect() };
        for c in &self.cones {
            if !s.is_face_of(c) {
                specs.push(ConeSpec {
                    id: c.id.clone(),
                    rays: ids(&c.rays),
                    aut: c.aut_order,
                });
            }
        }
        for c in &self.cones {
            if s.is_face_of(c) {
                continue;
            }
            let mut u = c.rays.clone();
            u.extend(s.rays.iter().copied());
            if let Some(big) = self.cone_with_rays(&u) {
                let mut r = c.rays.clone();
                r.push(v);
                let names = ids(&r);
                specs.push(ConeSpec {
                    id: default_cone_id(&names),
                    rays: names,
                    aut: self.cone(big).aut_order,
                });
            }
        }
        let refined = Arc::new(ConeComplex::build(rays, specs)?);
        let mut images: Vec<BTreeMap<RayId, i64>> =
            self.ray_ids().map(|r| BTreeMap::from([(r, 1)])).collect();
        images.push(s.rays.iter().copied().zip(coords.iter().copied()).collect());
        let f = ComplexMorphism::new(refined.clone(), self.clone(), images)?;
        Ok((refined, f))
    }

    /// Canonical coordinate of a subset: string ids of its rays.
    pub fn ray_names(&self, rays: &[RayId]) -> Vec<String> {
        rays.iter().map(|r| self.rays[r.0].id.clone()).collect()
    }
}

pub fn default_cone_id(ray_ids: &[String]) -> String {
    if ray_ids.is_empty() {
        "0".to_string()
    } else {
        ray_ids.join("+")
    }
}

fn subsets(rays: &[RayId]) -> Vec<Vec<RayId>> {
    let n = rays.len();
    (0u32..(1 << n))
        .map(|mask| {
            (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| rays[i])
                .collect()
        })
        .collect()
}

fn subsets_usize(v: &[usize]) -> Vec<Vec<usize>> {
    let n = v.len();
    (0u32..(1 << n))
        .map(|mask| {
            (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| v[i])
                .collect()
        })
        .collect()
}

/// `Σ^τ/τ` together with the identification of its rays with the cones
/// one dimension above `τ`.
#[derive(Debug, Clone)]
pub struct StarQuotient {
    pub tau: ConeId,
    pub complex: ConeComplex,
    /// Quotient ray `i` is the image of this ray of the original complex.
    pub ray_source: Vec<RayId>,
    /// Quotient cone `j` is the image of this cone of the original complex.
    pub cone_source: Vec<ConeId>,
}

impl StarQuotient {
    /// Projects a function that is constant on `τ` to the quotient.
    pub fn project(&self, original: &ConeComplex, f: &PLFunction) -> Result<PLFunction> {
        for r in &original.cone(self.tau).rays {
            if !f.slope(*r).is_zero() {
                return Err(Error::DomainMismatch(format!(
                    "function is not constant on {}",
                    original.cone(self.tau).id
                )));
            }
        }
        for c in &self.cone_source {
            if !f.domain.contains(*c) {
                return Err(Error::DomainMismatch(format!(
                    "star of {} is not inside the domain",
                    original.cone(self.tau).id
                )));
            }
        }
        let slopes = self
            .ray_source
            .iter()
            .enumerate()
            .map(|(i, r)| (RayId(i), f.slope(*r)))
            .collect();
        Ok(PLFunction::new(slopes, f.constant.clone(), Domain::Whole))
    }

    /// The quotient cone that is the image of the original cone `c`.
    pub fn image_of(&self, c: ConeId) -> Option<ConeId> {
        self.cone_source.iter().position(|x| *x == c).map(ConeId)
    }
}

/// A cell `σ/τ` of the extended complex: `τ` is a face of `σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub sigma: ConeId,
    pub tau: ConeId,
}

impl Cell {
    pub fn new(complex: &ConeComplex, sigma: ConeId, tau: ConeId) -> Result<Self> {
        complex.check(sigma)?;
        complex.check(tau)?;
        if !complex.is_face(tau, sigma) {
            return Err(Error::InvalidCell {
                sigma: complex.cone(sigma).id.clone(),
                tau: complex.cone(tau).id.clone(),
            });
        }
        Ok(Cell { sigma, tau })
    }

    /// Every cell `σ/τ` of the complex.
    pub fn all(complex: &ConeComplex) -> Vec<Cell> {
        let mut out = Vec::new();
        for sigma in complex.cone_ids() {
            for tau in complex.faces(sigma) {
                out.push(Cell { sigma, tau });
            }
        }
        out.sort();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    Whole,
    Cones(BTreeSet<ConeId>),
}

impl Domain {
    pub fn contains(&self, c: ConeId) -> bool {
        match self {
            Domain::Whole => true,
            Domain::Cones(s) => s.contains(&c),
        }
    }

    pub fn covers(&self, cones: &[ConeId]) -> bool {
        cones.iter().all(|c| self.contains(*c))
    }

    pub fn intersect(&self, other: &Domain) -> Domain {
        match (self, other) {
            (Domain::Whole, d) | (d, Domain::Whole) => d.clone(),
            (Domain::Cones(a), Domain::Cones(b)) => {
                Domain::Cones(a.intersection(b).copied().collect())
            }
        }
    }
}

/// A piecewise linear function: a value on each primitive ray generator plus
/// a constant, defined on a set of cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLFunction {
    slopes: BTreeMap<RayId, Q>,
    pub constant: Q,
    pub domain: Domain,
}

impl PLFunction {
    pub fn new(slopes: BTreeMap<RayId, Q>, constant: Q, domain: Domain) -> Self {
        let slopes = slopes.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        PLFunction {
            slopes,
            constant,
            domain,
        }
    }

    pub fn zero() -> Self {
        Self::constant(Q::zero())
    }

    pub fn constant(c: Q) -> Self {
        PLFunction::new(BTreeMap::new(), c, Domain::Whole)
    }

    pub fn from_slopes<I: IntoIterator<Item = (RayId, i64)>>(it: I) -> Self {
        PLFunction::new(
            it.into_iter().map(|(r, v)| (r, q(v))).collect(),
            Q::zero(),
            Domain::Whole,
        )
    }

    /// Slope −1 on `r` and 0 elsewhere; its divisor is `+r`.
    pub fn ray_function(r: RayId) -> Self {
        Self::from_slopes([(r, -1)])
    }

    pub fn slope(&self, r: RayId) -> Q {
        self.slopes.get(&r).cloned().unwrap_or_else(Q::zero)
    }

    /// Nonzero slopes.
    pub fn slopes(&self) -> &BTreeMap<RayId, Q> {
        &self.slopes
    }

    pub fn is_strict(&self) -> bool {
        self.slopes.values().all(|v| v.is_integer())
    }

    pub fn is_constant_on(&self, cone: &Cone) -> bool {
        cone.rays.iter().all(|r| self.slope(*r).is_zero())
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn scale(&self, s: &Q) -> Self {
        PLFunction::new(
            self.slopes.iter().map(|(r, v)| (*r, v * s)).collect(),
            &self.constant * s,
            self.domain.clone(),
        )
    }

    pub fn add(&self, other: &PLFunction) -> Self {
        let mut slopes = self.slopes.clone();
        for (r, v) in &other.slopes {
            *slopes.entry(*r).or_insert_with(Q::zero) += v;
        }
        PLFunction::new(
            slopes,
            &self.constant + &other.constant,
            self.domain.intersect(&other.domain),
        )
    }

    pub fn neg(&self) -> Self {
        self.scale(&q(-1))
    }

    pub fn sub(&self, other: &PLFunction) -> Self {
        self.add(&other.neg())
    }

    /// Drops slopes outside `rays` and restricts the domain.
    pub fn restrict(&self, rays: &[RayId], domain: Domain) -> Self {
        PLFunction::new(
            self.slopes
                .iter()
                .filter(|(r, _)| rays.binary_search(r).is_ok())
                .map(|(r, v)| (*r, v.clone()))
                .collect(),
            self.constant.clone(),
            self.domain.intersect(&domain),
        )
    }

    /// Slopes on `rays` as integers, or `None` if any is fractional.
    pub fn integer_vector(&self, rays: &[RayId]) -> Option<Vec<i128>> {
        rays.iter()
            .map(|r| crate::rational::as_integer(&self.slope(*r)))
            .collect()
    }

    pub fn slope_vector(&self, rays: &[RayId]) -> Vec<Q> {
        rays.iter().map(|r| self.slope(*r)).collect()
    }

    pub fn from_integer_vector(rays: &[RayId], v: &[i128]) -> Self {
        PLFunction::new(
            rays.iter()
                .zip(v)
                .map(|(r, x)| (*r, crate::rational::from_i128(*x)))
                .collect(),
            Q::zero(),
            Domain::Whole,
        )
    }

    pub fn display<'a>(&'a self, complex: &'a ConeComplex) -> impl fmt::Display + 'a {
        PlDisplay { f: self, complex }
    }
}

struct PlDisplay<'a> {
    f: &'a PLFunction,
    complex: &'a ConeComplex,
}

impl fmt::Display for PlDisplay<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .f
            .slopes
            .iter()
            .map(|(r, v)| {
                format!(
                    "{}:{}",
                    self.complex.ray(*r).id,
                    crate::rational::format_q(v)
                )
            })
            .collect();
        if !self.f.constant.is_zero() {
            parts.push(format!(
                "const:{}",
                crate::rational::format_q(&self.f.constant)
            ));
        }
        if parts.is_empty() {
            write!(out, "0")
        } else {
            write!(out, "{}", parts.join(" "))
        }
    }
}
