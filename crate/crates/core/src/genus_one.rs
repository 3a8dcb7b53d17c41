//! The genus-one admissible-cover complex over `M_{0,5}`, its ψ class, and
//! the two forgetful maps to a model of `M_{1,2}`.
//!
//! Marks on the base are 1..=5. Mark 1 is the ramification point; a `ρ_{x|ij}`
//! ray lies over the `M_{0,5}` ray separating `{i, j}`, a `ρ_{x|1k}` ray over
//! the one separating `{1, k}`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;

use crate::affine::{AffineStructure, DivisorCheck};
use crate::complex::{Cell, ConeComplex, ConeId, ConeSpec, PLFunction, Ray, RayId};
use crate::cycles::{intersect, TropicalCycle};
use crate::degree::{ChartedMap, DegreeReport, FaceChart, TargetChart};
use crate::error::{Error, Result};
use crate::moduli::{self, M0n};
use crate::morphism::ComplexMorphism;
use crate::rational::{frac, q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RayKind {
    A,
    B,
    C,
    D,
}

impl RayKind {
    pub const ALL: [RayKind; 4] = [RayKind::A, RayKind::B, RayKind::C, RayKind::D];

    pub fn letter(self) -> &'static str {
        match self {
            RayKind::A => "a",
            RayKind::B => "b",
            RayKind::C => "c",
            RayKind::D => "d",
        }
    }

    /// Expansion of `br` along the ray.
    pub fn dilation(self) -> i64 {
        match self {
            RayKind::A => 3,
            RayKind::B => 1,
            RayKind::C | RayKind::D => 2,
        }
    }

    /// Flagged default: only the b-rays carry an extra involution.
    pub fn aut_order(self) -> u64 {
        match self {
            RayKind::B => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdmRayLabel {
    pub kind: RayKind,
    /// `{i, j} ⊂ {2,3,4,5}` for kinds a, b; `{1, k}` for kinds c, d.
    pub pair: (usize, usize),
}

impl AdmRayLabel {
    pub fn id(&self) -> String {
        format!("{}|{}{}", self.kind.letter(), self.pair.0, self.pair.1)
    }

    pub fn contains(&self, mark: usize) -> bool {
        self.pair.0 == mark || self.pair.1 == mark
    }
}

impl fmt::Display for AdmRayLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FaceKind {
    S1,
    S2,
    S3,
    S4,
    S5,
}

impl FaceKind {
    pub const ALL: [FaceKind; 5] = [
        FaceKind::S1,
        FaceKind::S2,
        FaceKind::S3,
        FaceKind::S4,
        FaceKind::S5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FaceKind::S1 => "s1",
            FaceKind::S2 => "s2",
            FaceKind::S3 => "s3",
            FaceKind::S4 => "s4",
            FaceKind::S5 => "s5",
        }
    }

    /// Fundamentalish weight: automorphisms, local Hurwitz numbers and
    /// expansion factors combined.
    pub fn weight(self) -> Q {
        match self {
            FaceKind::S1 | FaceKind::S2 | FaceKind::S5 => q(1),
            FaceKind::S3 => frac(1, 2),
            FaceKind::S4 => frac(1, 3),
        }
    }

    pub fn aut_order(self) -> u64 {
        match self {
            FaceKind::S3 | FaceKind::S5 => 2,
            _ => 1,
        }
    }

    /// Ray kinds bounding the face, in ray order.
    pub fn ray_kinds(self) -> (RayKind, RayKind) {
        match self {
            FaceKind::S1 => (RayKind::A, RayKind::C),
            FaceKind::S2 => (RayKind::B, RayKind::C),
            FaceKind::S3 => (RayKind::B, RayKind::D),
            FaceKind::S4 => (RayKind::A, RayKind::A),
            FaceKind::S5 => (RayKind::A, RayKind::B),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdmFaceLabel {
    pub kind: FaceKind,
    pub rays: [AdmRayLabel; 2],
}

/// How a face sits over the target of a forgetful map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FaceGroup {
    /// Both ends on one vertex of the target: the `(loop, bridge)` chart.
    SameVertex,
    /// Maps to the folded cone through an edge adjacent to the remembered end.
    External,
    /// Maps to the folded cone through the middle edge.
    Middle,
    /// Rank drops.
    Contracted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiFace {
    pub face: ConeId,
    pub group: FaceGroup,
    /// Rows of the 2×2 matrix; columns are the images of the non-b ray and
    /// the b ray, in that order.
    pub matrix: Option<[[i64; 2]; 2]>,
}

#[derive(Debug, Clone)]
pub struct CaseStudyTables {
    pub rays: Vec<AdmRayLabel>,
    pub faces: BTreeMap<ConeId, AdmFaceLabel>,
    /// Indexed by `i - 1` for `φ_i`.
    pub phi_faces: [Vec<PhiFace>; 2],
}

impl CaseStudyTables {
    pub fn ray_count(&self, kind: RayKind) -> usize {
        self.rays.iter().filter(|r| r.kind == kind).count()
    }

    pub fn face_count(&self, kind: FaceKind) -> usize {
        self.faces.values().filter(|f| f.kind == kind).count()
    }

    pub fn ray(&self, r: RayId) -> AdmRayLabel {
        self.rays[r.0]
    }

    pub fn phi_face(&self, i: usize, face: ConeId) -> Option<&PhiFace> {
        self.phi_faces
            .get(i.wrapping_sub(1))?
            .iter()
            .find(|p| p.face == face)
    }
}

/// The end kept by both forgetful maps besides the ramification point.
pub const REMEMBERED: usize = 2;

fn pairs() -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 2..=5 {
        for j in i + 1..=5 {
            v.push((i, j));
        }
    }
    v
}

fn complement(p: (usize, usize)) -> (usize, usize) {
    let rest: Vec<usize> = (2..=5).filter(|&m| m != p.0 && m != p.1).collect();
    (rest[0], rest[1])
}

fn adm_ray_labels() -> Vec<AdmRayLabel> {
    let mut v = Vec::new();
    for kind in [RayKind::A, RayKind::B] {
        v.extend(pairs().into_iter().map(|pair| AdmRayLabel { kind, pair }));
    }
    for kind in [RayKind::C, RayKind::D] {
        v.extend((2..=5).map(|k| AdmRayLabel { kind, pair: (1, k) }));
    }
    v
}

fn adm_face_labels() -> Vec<AdmFaceLabel> {
    let mut v = Vec::new();
    for (kind, x, y) in [
        (FaceKind::S1, RayKind::A, RayKind::C),
        (FaceKind::S2, RayKind::B, RayKind::C),
        (FaceKind::S3, RayKind::B, RayKind::D),
    ] {
        for p in pairs() {
            for k in 2..=5 {
                if k != p.0 && k != p.1 {
                    v.push(AdmFaceLabel {
                        kind,
                        rays: [
                            AdmRayLabel { kind: x, pair: p },
                            AdmRayLabel {
                                kind: y,
                                pair: (1, k),
                            },
                        ],
                    });
                }
            }
        }
    }
    for p in pairs() {
        let c = complement(p);
        if p < c {
            v.push(AdmFaceLabel {
                kind: FaceKind::S4,
                rays: [
                    AdmRayLabel {
                        kind: RayKind::A,
                        pair: p,
                    },
                    AdmRayLabel {
                        kind: RayKind::A,
                        pair: c,
                    },
                ],
            });
        }
    }
    for p in pairs() {
        v.push(AdmFaceLabel {
            kind: FaceKind::S5,
            rays: [
                AdmRayLabel {
                    kind: RayKind::A,
                    pair: p,
                },
                AdmRayLabel {
                    kind: RayKind::B,
                    pair: complement(p),
                },
            ],
        });
    }
    v
}

fn face_id(f: &AdmFaceLabel) -> String {
    format!("{}({},{})", f.kind.name(), f.rays[0], f.rays[1])
}

fn phi_face(i: usize, face: ConeId, label: &AdmFaceLabel) -> PhiFace {
    let m = REMEMBERED;
    let [x, y] = label.rays;
    let (group, matrix) = match label.kind {
        FaceKind::S3 => {
            if i == 1 || (!x.contains(m) && y.contains(m)) {
                (FaceGroup::SameVertex, Some([[0, 2], [1, 0]]))
            } else {
                (FaceGroup::Contracted, None)
            }
        }
        FaceKind::S2 => {
            if x.contains(m) {
                let mat = if i == 1 {
                    [[1, 0], [2, 2]]
                } else {
                    [[1, 1], [2, 1]]
                };
                (FaceGroup::External, Some(mat))
            } else if !y.contains(m) {
                let mat = if i == 1 {
                    [[1, 2], [2, 0]]
                } else {
                    [[1, 0], [2, 2]]
                };
                (FaceGroup::Middle, Some(mat))
            } else {
                (FaceGroup::Contracted, None)
            }
        }
        _ => (FaceGroup::Contracted, None),
    };
    PhiFace {
        face,
        group,
        matrix,
    }
}

/// The admissible-cover complex: 20 rays and 45 two-dimensional faces.
pub fn build_adm() -> (ConeComplex, CaseStudyTables) {
    let labels = adm_ray_labels();
    let rays: Vec<Ray> = labels
        .iter()
        .map(|l| Ray {
            id: l.id(),
            label: l.kind.letter().to_string(),
        })
        .collect();
    let face_labels = adm_face_labels();
    let mut specs = vec![ConeSpec::new("0", &[])];
    for l in &labels {
        let id = l.id();
        specs.push(ConeSpec::new(id.clone(), &[&id]).with_aut(l.kind.aut_order()));
    }
    for f in &face_labels {
        let a = f.rays[0].id();
        let b = f.rays[1].id();
        specs.push(ConeSpec::new(face_id(f), &[&a, &b]).with_aut(f.kind.aut_order()));
    }
    let complex = ConeComplex::build(rays, specs).expect("static data is a valid complex");
    let faces: BTreeMap<ConeId, AdmFaceLabel> = face_labels
        .iter()
        .map(|f| (complex.cone_by_id(&face_id(f)).expect("built above"), *f))
        .collect();
    let phi_faces = [1, 2].map(|i| faces.iter().map(|(c, l)| phi_face(i, *c, l)).collect());
    (
        complex,
        CaseStudyTables {
            rays: labels,
            faces,
            phi_faces,
        },
    )
}

/// Checks ray and face counts and the number of faces of each kind at each ray.
pub fn validate_adm(complex: &ConeComplex, tables: &CaseStudyTables) -> Result<()> {
    let fail = |m: String| Err(Error::StructurallyInvalid(m));
    let rays = [
        (RayKind::A, 6),
        (RayKind::B, 6),
        (RayKind::C, 4),
        (RayKind::D, 4),
    ];
    for (k, n) in rays {
        if tables.ray_count(k) != n {
            return fail(format!(
                "{} rays of kind {}",
                tables.ray_count(k),
                k.letter()
            ));
        }
    }
    let faces = [
        (FaceKind::S1, 12),
        (FaceKind::S2, 12),
        (FaceKind::S3, 12),
        (FaceKind::S4, 3),
        (FaceKind::S5, 6),
    ];
    for (k, n) in faces {
        if tables.face_count(k) != n {
            return fail(format!(
                "{} faces of kind {}",
                tables.face_count(k),
                k.name()
            ));
        }
    }
    if complex.num_rays() != 20 || complex.cones_of_dim(2).len() != 45 {
        return fail("expected 20 rays and 45 faces".into());
    }
    for r in complex.ray_ids() {
        let kind = tables.ray(r).kind;
        let mut got: BTreeMap<FaceKind, usize> = BTreeMap::new();
        for (c, _) in complex.upper_neighbors(complex.ray_cone(r))? {
            *got.entry(tables.faces[&c].kind).or_default() += 1;
        }
        let want: BTreeMap<FaceKind, usize> = incidence(kind).into_iter().collect();
        if got != want {
            return fail(format!("ray {} has incidences {got:?}", complex.ray(r).id));
        }
    }
    Ok(())
}

/// Faces of each kind containing a ray of the given kind.
pub fn incidence(kind: RayKind) -> Vec<(FaceKind, usize)> {
    match kind {
        RayKind::A => vec![(FaceKind::S1, 2), (FaceKind::S4, 1), (FaceKind::S5, 1)],
        RayKind::B => vec![(FaceKind::S2, 2), (FaceKind::S3, 2), (FaceKind::S5, 1)],
        RayKind::C => vec![(FaceKind::S1, 3), (FaceKind::S2, 3)],
        RayKind::D => vec![(FaceKind::S3, 3)],
    }
}

/// The case study assembled: the complex, `br`, and the pulled-back structure.
#[derive(Debug, Clone)]
pub struct Adm {
    pub complex: Arc<ConeComplex>,
    pub tables: CaseStudyTables,
    pub m05: M0n,
    pub br: ComplexMorphism,
    pub structure: AffineStructure,
}

impl Adm {
    pub fn new() -> Result<Self> {
        let (complex, tables) = build_adm();
        let complex = Arc::new(complex);
        let m05 = M0n::new(5)?;
        let images = complex
            .ray_ids()
            .map(|r| -> Result<BTreeMap<RayId, i64>> {
                let l = tables.ray(r);
                let t = moduli::split_ray(&m05.complex, 5, &[l.pair.0, l.pair.1])?;
                Ok(BTreeMap::from([(t, l.kind.dilation())]))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut br = ComplexMorphism::new(complex.clone(), m05.complex.clone(), images)?;
        let structure = m05.structure.pullback(&br)?;
        if !br.certify(&structure, &m05.structure)? {
            return Err(Error::NotCertified);
        }
        Ok(Adm {
            complex,
            tables,
            m05,
            br,
            structure,
        })
    }

    pub fn fundamentalish(&self) -> TropicalCycle {
        let w = self
            .tables
            .faces
            .iter()
            .map(|(c, l)| (*c, l.kind.weight()))
            .collect();
        TropicalCycle::new(self.complex.clone(), 2, w).expect("faces are 2-cones")
    }

    /// `br^*` of the ψ₁ representative on `M_{0,5}`; three times ψ₁.
    pub fn psi1_times_three(&self) -> Result<PLFunction> {
        let rep = moduli::psi_representative_with(&self.m05.complex, 5, 1, 2, 3)?;
        self.br.pullback(&rep)
    }

    pub fn psi1(&self) -> Result<PLFunction> {
        Ok(self.psi1_times_three()?.scale(&frac(1, 3)))
    }

    /// Torsor sections of `3ψ₁` on every cell; must pass before ψ is used.
    pub fn tropicalizability_gate(&self) -> Result<DivisorCheck> {
        let f = self.psi1_times_three()?;
        self.structure
            .is_tropical_divisor(&f, &Cell::all(&self.complex))
    }

    pub fn psi1_cap_fundamentalish(&self) -> Result<TropicalCycle> {
        intersect(&self.structure, &self.psi1()?, &self.fundamentalish())
    }

    /// `φ_i` on rays, and its face charts.
    pub fn forgetful_phi(&self, i: usize) -> Result<Forgetful> {
        if i != 1 && i != 2 {
            return Err(Error::InvalidMarks(format!("φ_{i} is not defined")));
        }
        let target = build_m12_target();
        let t = |id: &str| target.ray_by_id(id).expect("static target");
        let (sec, irr, e) = (t("sec"), t("irr"), t("E"));
        let m = REMEMBERED;
        let images: Vec<BTreeMap<RayId, i64>> = self
            .complex
            .ray_ids()
            .map(|r| {
                let l = self.tables.ray(r);
                match l.kind {
                    RayKind::A => BTreeMap::new(),
                    RayKind::B if i == 2 && l.contains(m) => BTreeMap::from([(e, 1)]),
                    RayKind::B => BTreeMap::from([(irr, 2)]),
                    RayKind::C if l.contains(m) => BTreeMap::new(),
                    RayKind::C => BTreeMap::from([(irr, 1), (e, 1)]),
                    RayKind::D if i == 1 || l.contains(m) => BTreeMap::from([(sec, 1)]),
                    RayKind::D => BTreeMap::new(),
                }
            })
            .collect();
        let skeleton = Arc::new(self.complex.skeleton(1));
        let mut morphism = ComplexMorphism::new(skeleton.clone(), target.clone(), images)?;
        let ok = morphism.certify(
            &AffineStructure::constants(skeleton),
            &AffineStructure::constants(target.clone()),
        )?;
        debug_assert!(ok);
        let mut faces = BTreeMap::new();
        for pf in &self.tables.phi_faces[i - 1] {
            let Some(mat) = pf.matrix else { continue };
            let chart = match pf.group {
                FaceGroup::SameVertex => SAME_VERTEX,
                _ => FOLDED,
            };
            // Complex ray order puts the b ray first.
            let other = vec![mat[0][0], mat[1][0]];
            let b = vec![mat[0][1], mat[1][1]];
            faces.insert(
                pf.face,
                FaceChart {
                    chart,
                    columns: vec![b, other],
                },
            );
        }
        Ok(Forgetful {
            index: i,
            remembered: m,
            morphism,
            charts: ChartedMap {
                source: self.complex.clone(),
                charts: m12_charts(),
                faces,
            },
        })
    }
}

#[derive(Debug, Clone)]
pub struct Forgetful {
    pub index: usize,
    pub remembered: usize,
    /// Defined on the 1-skeleton; pushes 1-cycles forward.
    pub morphism: ComplexMorphism,
    pub charts: ChartedMap,
}

impl Forgetful {
    /// The three regions of the target, in the order of the cases.
    pub fn cases(&self) -> [Region; 3] {
        if self.index == 1 {
            [
                Region::SameVertex,
                Region::FoldedOuter,
                Region::FoldedMiddle,
            ]
        } else {
            [
                Region::SameVertex,
                Region::FoldedMiddle,
                Region::FoldedOuter,
            ]
        }
    }

    /// Moves the map to a refinement `f` of the admissible-cover complex.
    pub fn refine(&self, f: &ComplexMorphism) -> Result<Forgetful> {
        let skeleton = Arc::new(f.source.skeleton(1));
        let images = f
            .source
            .ray_ids()
            .map(|r| {
                let mut img: BTreeMap<RayId, i64> = BTreeMap::new();
                for (s, a) in f.ray_image(r) {
                    for (t, b) in self.morphism.ray_image(*s) {
                        *img.entry(*t).or_default() += a * b;
                    }
                }
                img
            })
            .collect();
        let target = self.morphism.target.clone();
        let mut morphism = ComplexMorphism::new(skeleton.clone(), target.clone(), images)?;
        morphism.certify(
            &AffineStructure::constants(skeleton),
            &AffineStructure::constants(target),
        )?;
        Ok(Forgetful {
            index: self.index,
            remembered: self.remembered,
            morphism,
            charts: self.charts.refine(f)?,
        })
    }
}

pub const SAME_VERTEX: usize = 0;
pub const FOLDED: usize = 1;

/// Blown-up model of `M_{1,2}`: the cone where both marks share a vertex, and
/// the folded cone split along its diagonal `ρ_E`.
pub fn build_m12_target() -> Arc<ConeComplex> {
    let rays = ["sec", "irr", "E"]
        .iter()
        .map(|id| Ray {
            id: id.to_string(),
            label: id.to_string(),
        })
        .collect();
    let specs = vec![
        ConeSpec::new("0", &[]),
        ConeSpec::new("sec", &["sec"]),
        ConeSpec::new("irr", &["irr"]).with_aut(2),
        ConeSpec::new("E", &["E"]).with_aut(2),
        ConeSpec::new("irr+sec", &["irr", "sec"]).with_aut(2),
        ConeSpec::new("irr+E", &["irr", "E"]),
    ];
    Arc::new(ConeComplex::build(rays, specs).expect("static data is a valid complex"))
}

pub fn m12_charts() -> Vec<TargetChart> {
    vec![
        TargetChart {
            name: "same-vertex".into(),
            dim: 2,
            aut_order: 2,
            fold: false,
        },
        TargetChart {
            name: "folded".into(),
            dim: 2,
            aut_order: 1,
            fold: true,
        },
    ]
}

/// Image in the blown-up target of an integer point of a chart.
pub fn chart_to_target(chart: usize, x: &[i64]) -> BTreeMap<RayId, i64> {
    let target = build_m12_target();
    let t = |id: &str| target.ray_by_id(id).expect("static target");
    let mut out = BTreeMap::new();
    if chart == SAME_VERTEX {
        out.insert(t("irr"), x[0]);
        out.insert(t("sec"), x[1]);
    } else {
        out.insert(t("E"), x[0].min(x[1]));
        out.insert(t("irr"), (x[0] - x[1]).abs());
    }
    out.retain(|_, v| *v != 0);
    out
}

/// The unfolded orthant over the folded cone, next to the same-vertex cone.
pub fn orthant_model() -> Arc<ConeComplex> {
    let rays = ["irr_1", "irr_2", "sec"]
        .iter()
        .map(|id| Ray {
            id: id.to_string(),
            label: id.to_string(),
        })
        .collect();
    let maximal = vec![
        vec!["irr_1".to_string(), "irr_2".to_string()],
        vec!["irr_1".to_string(), "sec".to_string()],
    ];
    Arc::new(
        ConeComplex::from_maximal(rays, &maximal, &Default::default(), &Default::default())
            .expect("static data is a valid complex"),
    )
}

/// Subdivides the orthant along its diagonal and folds the result onto the
/// blown-up target. Returns the refined orthant, the refinement, and the fold.
pub fn blow_up_diagonal() -> Result<(Arc<ConeComplex>, ComplexMorphism, ComplexMorphism)> {
    let orthant = orthant_model();
    let o = |id: &str| orthant.ray_by_id(id).expect("static model");
    let quad = orthant
        .cone_with_rays(&[o("irr_1"), o("irr_2")])
        .expect("static model");
    let (refined, f) = orthant.stellar_subdivide(quad, &[1, 1])?;
    let target = build_m12_target();
    let t = |id: &str| target.ray_by_id(id).expect("static target");
    let images = refined
        .ray_ids()
        .map(|r| {
            let img = match refined.ray(r).id.as_str() {
                "irr_1" | "irr_2" => t("irr"),
                "sec" => t("sec"),
                _ => t("E"),
            };
            BTreeMap::from([(img, 1)])
        })
        .collect();
    let fold = ComplexMorphism::new(refined.clone(), target, images)?;
    Ok((refined, f, fold))
}

/// `Trop(ψ) = ½ ρ_irr` on the target.
pub fn trop_psi() -> TropicalCycle {
    let t = build_m12_target();
    let irr = t.ray_cone(t.ray_by_id("irr").expect("static target"));
    TropicalCycle::new(t, 1, BTreeMap::from([(irr, frac(1, 2))])).expect("static data")
}

/// `Trop(W) = ½ (ρ_irr + ρ_E)` on the target.
pub fn trop_w() -> TropicalCycle {
    let t = build_m12_target();
    let irr = t.ray_cone(t.ray_by_id("irr").expect("static target"));
    let e = t.ray_cone(t.ray_by_id("E").expect("static target"));
    TropicalCycle::new(t, 1, BTreeMap::from([(irr, frac(1, 2)), (e, frac(1, 2))]))
        .expect("static data")
}

/// Open regions of the target where the local degree count is uniform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    SameVertex,
    /// `x2 < x1/2` or `x2 > 2 x1` in the folded chart.
    FoldedOuter,
    /// `x1/2 < x2 < 2 x1`, off the diagonal.
    FoldedMiddle,
}

impl Region {
    pub fn name(self) -> &'static str {
        match self {
            Region::SameVertex => "same-vertex",
            Region::FoldedOuter => "folded-outer",
            Region::FoldedMiddle => "folded-middle",
        }
    }

    pub fn chart(self) -> usize {
        match self {
            Region::SameVertex => SAME_VERTEX,
            _ => FOLDED,
        }
    }

    /// Membership in the open region, away from every wall image.
    pub fn contains(self, p: &[Q]) -> bool {
        if p.len() != 2 || p.iter().any(|x| x <= &Q::zero()) {
            return false;
        }
        let (x1, x2) = (&p[0], &p[1]);
        let two = q(2);
        match self {
            Region::SameVertex => true,
            Region::FoldedOuter => x2 * &two < *x1 || *x2 > x1 * &two,
            Region::FoldedMiddle => x1 < &(x2 * &two) && x2 < &(x1 * &two) && x1 != x2,
        }
    }

    /// A random rational point of the region.
    pub fn sample(self, rng: &mut impl Rng) -> Vec<Q> {
        loop {
            let p: Vec<Q> = (0..2)
                .map(|_| frac(rng.gen_range(1..=60), rng.gen_range(1..=7)))
                .collect();
            if self.contains(&p) {
                return p;
            }
        }
    }
}

/// Degree of a charted map at a random point of `region`, resampling when a
/// point turns out to be non-generic.
pub fn sample_degree(
    map: &ChartedMap,
    cycle: &TropicalCycle,
    region: Region,
    rng: &mut impl Rng,
) -> Result<(Vec<Q>, DegreeReport)> {
    let mut last = None;
    for _ in 0..32 {
        let p = region.sample(rng);
        match map.degree_at(cycle, region.chart(), &p) {
            Ok(d) => return Ok((p, d)),
            Err(e @ Error::NonGenericSample(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("loop ran"))
}
