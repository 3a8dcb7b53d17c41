//! Morphisms of cone complexes given by integral ray images.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::Zero;

use crate::affine::AffineStructure;
use crate::complex::{ConeComplex, ConeId, Domain, PLFunction, RayId};
use crate::cycles::TropicalCycle;
use crate::error::{Error, Result};
use crate::lattice;
use crate::rational::{from_i128, q, Q};

/// A map sending each source ray to a nonnegative integer combination of
/// target rays and each source cone into a target cone.
#[derive(Debug, Clone)]
pub struct ComplexMorphism {
    pub source: Arc<ConeComplex>,
    pub target: Arc<ConeComplex>,
    ray_images: Vec<BTreeMap<RayId, i64>>,
    cone_map: Vec<ConeId>,
    certified: bool,
}

impl ComplexMorphism {
    /// Derives the cone map as the smallest target cone containing the image
    /// of each source cone.
    pub fn new(
        source: Arc<ConeComplex>,
        target: Arc<ConeComplex>,
        ray_images: Vec<BTreeMap<RayId, i64>>,
    ) -> Result<Self> {
        if ray_images.len() != source.num_rays() {
            return Err(Error::StructurallyInvalid(format!(
                "{} ray images for {} source rays",
                ray_images.len(),
                source.num_rays()
            )));
        }
        let ray_images: Vec<BTreeMap<RayId, i64>> = ray_images
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| *v != 0).collect())
            .collect();
        for (i, img) in ray_images.iter().enumerate() {
            for (t, v) in img {
                if t.0 >= target.num_rays() {
                    return Err(Error::StructurallyInvalid(format!(
                        "image of {} uses an unknown target ray",
                        source.ray(RayId(i)).id
                    )));
                }
                if *v < 0 {
                    return Err(Error::StructurallyInvalid(format!(
                        "image of {} has a negative coefficient",
                        source.ray(RayId(i)).id
                    )));
                }
            }
        }
        let mut cone_map = Vec::with_capacity(source.num_cones());
        for c in source.cone_ids() {
            let support: BTreeSet<RayId> = source
                .cone(c)
                .rays
                .iter()
                .flat_map(|r| ray_images[r.0].keys().copied())
                .collect();
            let support: Vec<RayId> = support.into_iter().collect();
            let t = target.cone_with_rays(&support).ok_or_else(|| {
                Error::StructurallyInvalid(format!(
                    "image of cone {} is not contained in a cone",
                    source.cone(c).id
                ))
            })?;
            cone_map.push(t);
        }
        Ok(ComplexMorphism {
            source,
            target,
            ray_images,
            cone_map,
            certified: false,
        })
    }

    /// Like [`ComplexMorphism::new`] but with a prescribed cone map, which must
    /// contain each cone's image and respect faces.
    pub fn with_cone_map(
        source: Arc<ConeComplex>,
        target: Arc<ConeComplex>,
        ray_images: Vec<BTreeMap<RayId, i64>>,
        cone_map: Vec<ConeId>,
    ) -> Result<Self> {
        let mut f = Self::new(source, target, ray_images)?;
        if cone_map.len() != f.source.num_cones() {
            return Err(Error::StructurallyInvalid(
                "cone map has the wrong length".into(),
            ));
        }
        for c in f.source.cone_ids() {
            let given = cone_map[c.0];
            f.target.check(given)?;
            if !f.target.is_face(f.cone_map[c.0], given) {
                return Err(Error::StructurallyInvalid(format!(
                    "cone {} is sent to {} which does not contain its image",
                    f.source.cone(c).id,
                    f.target.cone(given).id
                )));
            }
        }
        for c in f.source.cone_ids() {
            for face in f.source.faces(c) {
                if !f.target.is_face(cone_map[face.0], cone_map[c.0]) {
                    return Err(Error::StructurallyInvalid(format!(
                        "cone map does not respect the face {} of {}",
                        f.source.cone(face).id,
                        f.source.cone(c).id
                    )));
                }
            }
        }
        f.cone_map = cone_map;
        Ok(f)
    }

    pub fn identity(complex: Arc<ConeComplex>) -> Self {
        let images = complex
            .ray_ids()
            .map(|r| BTreeMap::from([(r, 1)]))
            .collect();
        let mut f = Self::new(complex.clone(), complex, images).expect("identity is valid");
        f.certified = true;
        f
    }

    pub fn is_structurally_valid(&self) -> bool {
        Self::with_cone_map(
            self.source.clone(),
            self.target.clone(),
            self.ray_images.clone(),
            self.cone_map.clone(),
        )
        .is_ok()
    }

    pub fn ray_image(&self, r: RayId) -> &BTreeMap<RayId, i64> {
        &self.ray_images[r.0]
    }

    pub fn ray_images(&self) -> &[BTreeMap<RayId, i64>] {
        &self.ray_images
    }

    pub fn image_cone(&self, c: ConeId) -> ConeId {
        self.cone_map[c.0]
    }

    pub fn cone_map(&self) -> &[ConeId] {
        &self.cone_map
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// `self` followed by `g`.
    pub fn then(&self, g: &ComplexMorphism) -> Result<ComplexMorphism> {
        if !Arc::ptr_eq(&self.target, &g.source) && *self.target != *g.source {
            return Err(Error::StructurallyInvalid(
                "composition of mismatched morphisms".into(),
            ));
        }
        let images = self
            .ray_images
            .iter()
            .map(|img| {
                let mut out: BTreeMap<RayId, i64> = BTreeMap::new();
                for (t, a) in img {
                    for (u, b) in &g.ray_images[t.0] {
                        *out.entry(*u).or_insert(0) += a * b;
                    }
                }
                out
            })
            .collect();
        let cone_map = self.cone_map.iter().map(|c| g.cone_map[c.0]).collect();
        let mut h = Self::with_cone_map(self.source.clone(), g.target.clone(), images, cone_map)?;
        h.certified = self.certified && g.certified;
        Ok(h)
    }

    /// Matrix of the source cone's rays in the basis of its image cone:
    /// `m[i][j]` is the coefficient of the `i`-th image ray in the image of the
    /// `j`-th source ray.
    pub fn matrix(&self, c: ConeId) -> Vec<Vec<i128>> {
        let src = self.source.cone(c);
        let tgt = self.target.cone(self.cone_map[c.0]);
        tgt.rays
            .iter()
            .map(|t| {
                src.rays
                    .iter()
                    .map(|r| i128::from(*self.ray_images[r.0].get(t).unwrap_or(&0)))
                    .collect()
            })
            .collect()
    }

    /// Rank of the linear map on the cone.
    pub fn rank_on(&self, c: ConeId) -> Result<usize> {
        let m = self.matrix(c);
        let ncols = self.source.cone(c).dim();
        Ok(lattice::Hnf::new(&m, ncols)?.rank())
    }

    pub fn pullback(&self, f: &PLFunction) -> Result<PLFunction> {
        let domain = match &f.domain {
            Domain::Whole => Domain::Whole,
            Domain::Cones(cs) => {
                let set: BTreeSet<ConeId> = self
                    .source
                    .cone_ids()
                    .filter(|c| cs.contains(&self.cone_map[c.0]))
                    .collect();
                if set.is_empty() {
                    return Err(Error::DomainMismatch(
                        "function domain misses the image of the morphism".into(),
                    ));
                }
                Domain::Cones(set)
            }
        };
        let slopes = self
            .source
            .ray_ids()
            .map(|r| {
                let mut s = Q::zero();
                for (t, a) in &self.ray_images[r.0] {
                    s += f.slope(*t) * q(*a);
                }
                (r, s)
            })
            .collect();
        Ok(PLFunction::new(slopes, f.constant.clone(), domain))
    }

    /// True iff the pullback of every target generator at every image cone is
    /// affine at the source cone.
    pub fn check_linearity(&self, src: &AffineStructure, tgt: &AffineStructure) -> Result<bool> {
        if !self.is_structurally_valid() {
            return Err(Error::StructurallyInvalid(
                "cone map is inconsistent".into(),
            ));
        }
        for c in self.source.cone_ids() {
            let t = self.cone_map[c.0];
            for g in tgt.generators_at(t) {
                let pulled = self.pullback(g)?;
                if !src.is_affine(&pulled, c)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn certify(&mut self, src: &AffineStructure, tgt: &AffineStructure) -> Result<bool> {
        self.certified = self.check_linearity(src, tgt)?;
        Ok(self.certified)
    }

    /// Finds the source cone matching a cone of `complex` by ray ids.
    fn source_cone_for(&self, complex: &ConeComplex, c: ConeId) -> Result<ConeId> {
        if std::ptr::eq(complex, &*self.source) {
            return Ok(c);
        }
        let mut rays = Vec::new();
        for r in &complex.cone(c).rays {
            rays.push(self.source.ray_by_id(&complex.ray(*r).id)?);
        }
        self.source.cone_with_rays(&rays).ok_or_else(|| {
            Error::DomainMismatch(format!(
                "cone {} has no counterpart in the source",
                complex.cone(c).id
            ))
        })
    }

    /// Weight `c(σ)·|det M|·aut(F(σ))/aut(σ)` on each image cone of full rank.
    pub fn pushforward(&self, c: &TropicalCycle) -> Result<TropicalCycle> {
        if !self.certified {
            return Err(Error::NotCertified);
        }
        let k = c.dim;
        let mut out: BTreeMap<ConeId, Q> = BTreeMap::new();
        for (cone, w) in c.weights() {
            if w.is_zero() {
                continue;
            }
            let s = self.source_cone_for(&c.complex, *cone)?;
            let m = self.matrix(s);
            if lattice::Hnf::new(&m, k)?.rank() < k {
                continue;
            }
            let t = self.cone_map[s.0];
            if self.target.cone(t).dim() != k {
                return Err(Error::StructurallyInvalid(format!(
                    "cone {} maps with full rank into the larger cone {}",
                    self.source.cone(s).id,
                    self.target.cone(t).id
                )));
            }
            let d = lattice::det(&m)?.abs();
            let factor = from_i128(d) * q(self.target.cone(t).aut_order as i64)
                / q(self.source.cone(s).aut_order as i64);
            *out.entry(t).or_insert_with(Q::zero) += w * factor;
        }
        TropicalCycle::new(self.target.clone(), k, out)
    }

    /// Transports a cycle on the target of a refinement to its source: each
    /// cone of the same dimension as its image cone gets `c(image)/|det|`.
    pub fn refine_cycle(&self, c: &TropicalCycle) -> Result<TropicalCycle> {
        let k = c.dim;
        let mut out = BTreeMap::new();
        for s in self.source.cones_of_dim(k) {
            let t = self.cone_map[s.0];
            if self.target.cone(t).dim() != k {
                continue;
            }
            let w = c.weight(t);
            if w.is_zero() {
                continue;
            }
            let d = lattice::det(&self.matrix(s))?.abs();
            if d == 0 {
                continue;
            }
            out.insert(s, w / from_i128(d));
        }
        TropicalCycle::new(self.source.clone(), k, out)
    }
}
