mod common;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trop_core::cycles::intersect;
use trop_core::genus_one::{self, Adm, FaceGroup, FaceKind, RayKind, Region};
use trop_core::lattice;
use trop_core::rational::{frac, q, Q};
use trop_core::{ConeId, Error, PLFunction, RayId};

fn adm() -> Adm {
    common::init();
    Adm::new().unwrap()
}

/// `Σ ω(σ)·|det br_σ|` over the faces above each cone of `M_{0,5}`: the
/// fundamentalish cycle covers the base with constant degree.
#[test]
fn br_degree_is_constant() {
    let a = adm();
    let f = a.fundamentalish();
    let mut over: BTreeMap<ConeId, Q> = BTreeMap::new();
    for (face, w) in f.weights() {
        let d = lattice::det(&a.br.matrix(*face)).unwrap().abs();
        *over.entry(a.br.image_cone(*face)).or_insert_with(|| q(0)) +=
            w * Q::from_integer(d.into());
    }
    assert_eq!(over.len(), 15);
    assert!(over.values().all(|d| *d == q(9)), "{over:?}");
}

/// Projection formula: the ψ cycle pushed down along `br` (no automorphism
/// factors, which the weights already carry) is `⅓ · 9 · ψ̂₁·[M_{0,5}]`.
#[test]
fn psi_cycle_satisfies_projection_formula() {
    let a = adm();
    let psi = a.psi1_cap_fundamentalish().unwrap();
    let mut down: BTreeMap<RayId, Q> = BTreeMap::new();
    for r in a.complex.ray_ids() {
        let w = psi.weight(a.complex.ray_cone(r));
        for (t, k) in a.br.ray_image(r) {
            *down.entry(*t).or_insert_with(|| q(0)) += &w * q(*k);
        }
    }
    let m5 = &a.m05;
    let base = intersect(&m5.structure, &m5.psi(1).unwrap(), &m5.fundamental_class()).unwrap();
    for t in m5.complex.ray_ids() {
        let want = base.weight(m5.complex.ray_cone(t)) * q(3);
        assert_eq!(
            down.get(&t).cloned().unwrap_or(q(0)),
            want,
            "{}",
            m5.complex.ray(t).id
        );
    }
}

#[test]
fn psi_coefficients() {
    let a = adm();
    let psi = a.psi1_cap_fundamentalish().unwrap();
    let by_kind = |k: RayKind| -> Vec<Q> {
        a.complex
            .ray_ids()
            .filter(|r| a.tables.ray(*r).kind == k)
            .map(|r| psi.weight(a.complex.ray_cone(r)))
            .collect()
    };
    assert_eq!(by_kind(RayKind::A), vec![frac(2, 3); 6]);
    assert_eq!(by_kind(RayKind::B), vec![q(1); 6]);
    assert_eq!(by_kind(RayKind::C), vec![q(0); 4]);
    assert_eq!(by_kind(RayKind::D), vec![q(0); 4]);
    assert_eq!(psi.weights().len(), 12);
}

#[test]
fn psi_is_independent_of_base_representative() {
    let a = adm();
    let f = a.fundamentalish();
    let first = a.psi1_cap_fundamentalish().unwrap();
    for (j, k) in [(2, 4), (3, 5), (4, 5)] {
        let rep = trop_core::moduli::psi_representative_with(&a.m05.complex, 5, 1, j, k).unwrap();
        let psi = a.br.pullback(&rep).unwrap().scale(&frac(1, 3));
        assert_eq!(intersect(&a.structure, &psi, &f).unwrap(), first);
    }
}

#[test]
fn tropicalizability_gate_passes() {
    let a = adm();
    let gate = a.tropicalizability_gate().unwrap();
    assert!(gate.ok);
    assert_eq!(gate.data.len(), trop_core::Cell::all(&a.complex).len());
    assert!(gate.data.iter().all(|(_, d)| d.is_some()));
}

#[test]
fn unscaled_ray_functions_are_not_principal() {
    let a = adm();
    let r = a.complex.ray_by_id("a|23").unwrap();
    let f = PLFunction::ray_function(r);
    match intersect(&a.structure, &f, &a.fundamentalish()) {
        Err(Error::NotCombinatoriallyPrincipal(_)) => {}
        other => panic!("{other:?}"),
    }
    assert!(a
        .structure
        .is_cp_at(&f.scale(&q(3)), a.complex.ray_cone(r))
        .unwrap()
        .is_some());
}

#[test]
fn table_data() {
    let (c, t) = genus_one::build_adm();
    assert_eq!(
        FaceKind::ALL.map(|k| k.weight()),
        [q(1), q(1), frac(1, 2), frac(1, 3), q(1)]
    );
    assert_eq!(RayKind::ALL.map(|k| k.dilation()), [3, 1, 2, 2]);
    for r in c.ray_ids() {
        if t.ray(r).kind == RayKind::C {
            let n = |k| {
                c.upper_neighbors(c.ray_cone(r))
                    .unwrap()
                    .iter()
                    .filter(|(f, _)| t.faces[f].kind == k)
                    .count()
            };
            assert_eq!((n(FaceKind::S1), n(FaceKind::S2)), (3, 3));
        }
    }
    for i in [1, 2] {
        let groups = |g: FaceGroup, k: FaceKind| {
            t.phi_faces[i - 1]
                .iter()
                .filter(|p| p.group == g && t.faces[&p.face].kind == k)
                .count()
        };
        assert_eq!(groups(FaceGroup::External, FaceKind::S2), 6);
        assert_eq!(groups(FaceGroup::Middle, FaceKind::S2), 3);
        assert_eq!(
            groups(FaceGroup::SameVertex, FaceKind::S3),
            if i == 1 { 12 } else { 3 }
        );
    }
}

#[test]
fn literal_face_matrices() {
    let (_, t) = genus_one::build_adm();
    let mut seen: Vec<[[i64; 2]; 2]> = t
        .phi_faces
        .iter()
        .flatten()
        .filter_map(|p| p.matrix)
        .collect();
    seen.sort();
    seen.dedup();
    assert_eq!(
        seen,
        vec![
            [[0, 2], [1, 0]],
            [[1, 0], [2, 2]],
            [[1, 1], [2, 1]],
            [[1, 2], [2, 0]]
        ]
    );
}

#[test]
fn phi_ray_behaviour() {
    let a = adm();
    let t = genus_one::build_m12_target();
    let irr = t.ray_by_id("irr").unwrap();
    let e = t.ray_by_id("E").unwrap();
    let phi1 = a.forgetful_phi(1).unwrap();
    let phi2 = a.forgetful_phi(2).unwrap();
    let mut to_e = 0;
    for r in a.complex.ray_ids() {
        let l = a.tables.ray(r);
        match l.kind {
            RayKind::A => {
                assert!(phi1.morphism.ray_image(r).is_empty());
                assert!(phi2.morphism.ray_image(r).is_empty());
            }
            RayKind::B => {
                assert_eq!(phi1.morphism.ray_image(r), &BTreeMap::from([(irr, 2)]));
                if phi2.morphism.ray_image(r) == &BTreeMap::from([(e, 1)]) {
                    to_e += 1;
                } else {
                    assert_eq!(phi2.morphism.ray_image(r), &BTreeMap::from([(irr, 2)]));
                }
            }
            _ => {}
        }
    }
    assert_eq!(to_e, 3);
}

#[test]
fn consistency_identities() {
    let a = adm();
    let psi = a.psi1_cap_fundamentalish().unwrap();
    let p1 = a
        .forgetful_phi(1)
        .unwrap()
        .morphism
        .pushforward(&psi)
        .unwrap();
    let p2 = a
        .forgetful_phi(2)
        .unwrap()
        .morphism
        .pushforward(&psi)
        .unwrap();
    let tp = genus_one::trop_psi();
    let tw = genus_one::trop_w();
    assert_eq!(p1, tp.scale(&q(24)));
    assert_eq!(p2, tp.add(&tw).unwrap().scale(&q(6)));
    assert_eq!(p1.total(), q(12));
    assert_eq!(p2.total(), q(9));
}

#[test]
fn degree_is_sample_independent() {
    let a = adm();
    let f = a.fundamentalish();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (i, want) in [(1, 24), (2, 6)] {
        let phi = a.forgetful_phi(i).unwrap();
        for region in [
            Region::SameVertex,
            Region::FoldedOuter,
            Region::FoldedMiddle,
        ] {
            for _ in 0..20 {
                let (p, d) = genus_one::sample_degree(&phi.charts, &f, region, &mut rng).unwrap();
                assert_eq!(d.degree, q(want), "φ{i} at {p:?}");
            }
        }
    }
}

#[test]
fn case_counts_match_descriptions() {
    let a = adm();
    let f = a.fundamentalish();
    let phi1 = a.forgetful_phi(1).unwrap();
    let phi2 = a.forgetful_phi(2).unwrap();
    let sv = phi1
        .charts
        .degree_at(&f, genus_one::SAME_VERTEX, &[q(2), q(3)])
        .unwrap();
    assert_eq!(sv.preimages.len(), 12);
    assert!(sv.preimages.iter().all(|p| p.local_degree == q(2)));
    let sv2 = phi2
        .charts
        .degree_at(&f, genus_one::SAME_VERTEX, &[q(2), q(3)])
        .unwrap();
    assert_eq!(sv2.preimages.len(), 3);
    // φ₂: six external preimages in the middle region, three middle ones outside it
    let mid = phi2
        .charts
        .degree_at(&f, genus_one::FOLDED, &[q(4), q(5)])
        .unwrap();
    assert_eq!(mid.preimages.len(), 6);
    let outer = phi2
        .charts
        .degree_at(&f, genus_one::FOLDED, &[q(1), q(7)])
        .unwrap();
    assert_eq!(outer.preimages.len(), 3);
    assert!(outer.preimages.iter().all(|p| p.local_degree == q(2)));
}

#[test]
fn region_membership() {
    assert!(Region::FoldedOuter.contains(&[q(1), q(3)]));
    assert!(!Region::FoldedOuter.contains(&[q(1), q(2)]));
    assert!(Region::FoldedMiddle.contains(&[q(3), q(4)]));
    assert!(!Region::FoldedMiddle.contains(&[q(3), q(3)]));
    assert!(!Region::SameVertex.contains(&[q(0), q(3)]));
}

#[test]
fn blow_up_model() {
    let (refined, f, fold) = genus_one::blow_up_diagonal().unwrap();
    let t = genus_one::build_m12_target();
    assert_eq!(refined.num_rays(), 4);
    assert!(fold.is_structurally_valid());
    // both halves of the split orthant fold onto the cone spanned by irr and E
    let ie = t.cone_by_id("irr+E").unwrap();
    let halves: Vec<_> = refined
        .cones_of_dim(2)
        .into_iter()
        .filter(|c| fold.image_cone(*c) == ie)
        .collect();
    assert_eq!(halves.len(), 2);
    for h in halves {
        assert_eq!(lattice::det(&fold.matrix(h)).unwrap().abs(), 1);
        assert_eq!(lattice::det(&f.matrix(h)).unwrap().abs(), 1);
    }
}
