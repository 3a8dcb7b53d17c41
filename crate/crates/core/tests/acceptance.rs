//! Runs the acceptance criteria and prints one PASS/FAIL line each.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use trop_core::affine::{star_weight, AffineSubgroup};
use trop_core::cli::run_command;
use trop_core::cycles::{audited_products, intersect};
use trop_core::genus_one::{self, Adm, FaceKind, RayKind, Region};
use trop_core::moduli::{self, psi_degree, psi_degree_on, M0n};
use trop_core::rational::{format_q, frac, q, Q};
use trop_core::{ConeComplex, PLFunction, RayId, TropicalCycle};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let out = run_command(["trop", "case-study", "genus1", "--report", "json"]);
    within(start, Duration::from_secs(1), "case study")?;
    let psi = out.report.value["psi_cycle"]
        .as_object()
        .ok_or("no psi_cycle in report")?
        .clone();
    let (c, t) = genus_one::build_adm();
    for r in c.ray_ids() {
        let label = t.ray(r);
        let want = match label.kind {
            RayKind::A => frac(2, 3),
            RayKind::B => q(1),
            RayKind::C | RayKind::D => q(0),
        };
        let got = psi.get(&label.id()).and_then(Value::as_str).unwrap_or("0");
        ensure(got == format_q(&want), || {
            format!("{}: got {got}, want {}", label.id(), format_q(&want))
        })?;
    }
    Ok(format!(
        "2/3 on 6 a-rays, 1 on 6 b-rays, 0 on 8 c/d-rays ({:?})",
        start.elapsed()
    ))
}

fn criterion_2(adm: &Adm) -> Outcome {
    let psi = adm.psi1_cap_fundamentalish().map_err(|e| e.to_string())?;
    let target = genus_one::build_m12_target();
    let ray = |id: &str| target.ray_cone(target.ray_by_id(id).unwrap());
    let one = |w: &[(&str, i64)]| -> TropicalCycle {
        TropicalCycle::new(
            target.clone(),
            1,
            w.iter().map(|(id, k)| (ray(id), q(*k))).collect(),
        )
        .unwrap()
    };
    let p1 = adm
        .forgetful_phi(1)
        .and_then(|p| p.morphism.pushforward(&psi))
        .map_err(|e| e.to_string())?;
    let p2 = adm
        .forgetful_phi(2)
        .and_then(|p| p.morphism.pushforward(&psi))
        .map_err(|e| e.to_string())?;
    ensure(p1 == one(&[("irr", 12)]), || {
        format!("phi1 pushforward {:?}", common::weights_by_id(&p1))
    })?;
    ensure(p2 == one(&[("irr", 6), ("E", 3)]), || {
        format!("phi2 pushforward {:?}", common::weights_by_id(&p2))
    })?;
    Ok("phi1 = 12 irr, phi2 = 6 irr + 3 E".into())
}

fn criterion_3(adm: &Adm) -> Outcome {
    let f = adm.fundamentalish();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut n = 0;
    for (i, want) in [(1, q(24)), (2, q(6))] {
        let phi = adm.forgetful_phi(i).map_err(|e| e.to_string())?;
        for region in phi.cases() {
            for _ in 0..3 {
                let (p, d) = genus_one::sample_degree(&phi.charts, &f, region, &mut rng)
                    .map_err(|e| e.to_string())?;
                ensure(d.degree == want, || {
                    format!(
                        "phi{i} {} at {:?}: {}",
                        region.name(),
                        p,
                        format_q(&d.degree)
                    )
                })?;
                n += 1;
            }
        }
    }
    Ok(format!("phi1 degree 24, phi2 degree 6 at {n} samples"))
}

fn criterion_4(adm: &Adm) -> Outcome {
    let psi = adm.psi1_cap_fundamentalish().map_err(|e| e.to_string())?;
    let tp = genus_one::trop_psi();
    let tw = genus_one::trop_w();
    let t = tp.complex.clone();
    let half = |ids: &[&str]| -> TropicalCycle {
        let w = ids
            .iter()
            .map(|id| (t.ray_cone(t.ray_by_id(id).unwrap()), frac(1, 2)))
            .collect();
        TropicalCycle::new(t.clone(), 1, w).unwrap()
    };
    ensure(tp == half(&["irr"]), || "Trop(psi) is not irr/2".into())?;
    ensure(tw == half(&["irr", "E"]), || {
        "Trop(W) is not (irr + E)/2".into()
    })?;
    let p1 = adm
        .forgetful_phi(1)
        .and_then(|p| p.morphism.pushforward(&psi))
        .map_err(|e| e.to_string())?;
    let p2 = adm
        .forgetful_phi(2)
        .and_then(|p| p.morphism.pushforward(&psi))
        .map_err(|e| e.to_string())?;
    ensure(p1 == tp.scale(&q(24)), || {
        "phi1 pushforward differs from 24 Trop(psi)".into()
    })?;
    let sum = tp.add(&tw).map_err(|e| e.to_string())?.scale(&q(6));
    ensure(p2 == sum, || {
        "phi2 pushforward differs from 6 (Trop(psi) + Trop(W))".into()
    })?;
    Ok("24 Trop(psi) and 6 (Trop(psi) + Trop(W))".into())
}

fn criterion_5(adm: &Adm) -> Outcome {
    let (c, t) = (&adm.complex, &adm.tables);
    let rays = RayKind::ALL.map(|k| t.ray_count(k));
    ensure(rays == [6, 6, 4, 4], || format!("ray kinds {rays:?}"))?;
    let faces = FaceKind::ALL.map(|k| t.face_count(k));
    ensure(faces == [12, 12, 12, 3, 6], || {
        format!("face kinds {faces:?}")
    })?;
    ensure(c.num_rays() == 20 && c.cones_of_dim(2).len() == 45, || {
        "not 20 rays and 45 faces".into()
    })?;
    let expected: BTreeMap<RayKind, Vec<(FaceKind, usize)>> = BTreeMap::from([
        (
            RayKind::A,
            vec![(FaceKind::S1, 2), (FaceKind::S4, 1), (FaceKind::S5, 1)],
        ),
        (
            RayKind::B,
            vec![(FaceKind::S2, 2), (FaceKind::S3, 2), (FaceKind::S5, 1)],
        ),
        (RayKind::C, vec![(FaceKind::S1, 3), (FaceKind::S2, 3)]),
        (RayKind::D, vec![(FaceKind::S3, 3)]),
    ]);
    for r in c.ray_ids() {
        let mut seen: BTreeMap<FaceKind, usize> = BTreeMap::new();
        for (f, _) in c
            .upper_neighbors(c.ray_cone(r))
            .map_err(|e| e.to_string())?
        {
            *seen.entry(t.faces[&f].kind).or_default() += 1;
        }
        let got: Vec<(FaceKind, usize)> = seen.into_iter().collect();
        ensure(got == expected[&t.ray(r).kind], || {
            format!("{}: incidences {got:?}", t.ray(r).id())
        })?;
    }
    let table = [
        (FaceKind::S1, q(1)),
        (FaceKind::S2, q(1)),
        (FaceKind::S3, frac(1, 2)),
        (FaceKind::S4, frac(1, 3)),
        (FaceKind::S5, q(1)),
    ];
    let f = adm.fundamentalish();
    for (face, label) in &t.faces {
        let want = &table.iter().find(|(k, _)| *k == label.kind).unwrap().1;
        ensure(&f.weight(*face) == want, || {
            format!(
                "{}: weight {}",
                c.cone(*face).id,
                format_q(&f.weight(*face))
            )
        })?;
    }
    genus_one::validate_adm(c, t).map_err(|e| e.to_string())?;
    Ok("(6,6,4,4) rays, (12,12,12,3,6) faces, incidences and weights match".into())
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for n in 4..=6 {
        let m = M0n::new(n).map_err(|e| e.to_string())?;
        for e in common::compositions(n, n - 3) {
            let d = psi_degree(&m, &e).map_err(|x| x.to_string())?;
            ensure(d == common::multinomial(n, &e), || {
                format!("n = {n}, {e:?}: {}", format_q(&d))
            })?;
            checked += 1;
        }
    }
    let m7 = M0n::new(7).map_err(|e| e.to_string())?;
    let mut all = common::compositions(7, 4);
    all.shuffle(&mut ChaCha8Rng::seed_from_u64(6));
    for e in all.iter().take(50) {
        let d = psi_degree(&m7, e).map_err(|x| x.to_string())?;
        ensure(d == common::multinomial(7, e), || {
            format!("n = 7, {e:?}: {}", format_q(&d))
        })?;
        checked += 1;
    }
    let mut ratios = 0;
    for n in 4..=7 {
        let m = if n == 7 {
            m7.clone()
        } else {
            M0n::new(n).map_err(|e| e.to_string())?
        };
        let fc = m.fundamental_class();
        for cr in moduli::cross_ratios(&m.complex, n).map_err(|e| e.to_string())? {
            let p = intersect(&m.structure, &cr, &fc).map_err(|e| e.to_string())?;
            ensure(p.weights().is_empty(), || {
                format!("a cross ratio on M0{n} has nonzero product")
            })?;
            ratios += 1;
        }
    }
    let m5 = M0n::new(5).map_err(|e| e.to_string())?;
    let h = m5
        .structure
        .subgroup_at(m5.complex.vertex())
        .map_err(|e| e.to_string())?;
    ensure(
        h.is_normal(&m5.fundamental_class())
            .map_err(|e| e.to_string())?,
        || "M05 not normal at the vertex".into(),
    )?;
    within(start, Duration::from_secs(30), "M0n suite")?;
    Ok(format!(
        "{checked} exponent vectors, {ratios} cross ratios, M05 normal ({:?})",
        start.elapsed()
    ))
}

fn criterion_7() -> Outcome {
    let c = common::four_ray_fan();
    let fc = TropicalCycle::fundamental_class(c.clone()).map_err(|e| e.to_string())?;
    let h = AffineSubgroup::new(
        c.clone(),
        c.vertex(),
        &[
            common::phi(1).sub(&common::phi(3)),
            common::phi(2).sub(&common::phi(4)),
        ],
    )
    .map_err(|e| e.to_string())?;
    let bar = h.closure(&fc).map_err(|e| e.to_string())?;
    ensure(bar.rank() == 3, || {
        format!("closure has rank {}", bar.rank())
    })?;
    let d34 = common::phi(3).sub(&common::phi(4));
    ensure(bar.contains(&d34).map_err(|e| e.to_string())?, || {
        "closure misses phi3 - phi4".into()
    })?;
    ensure(!h.contains(&d34).map_err(|e| e.to_string())?, || {
        "H already contains phi3 - phi4".into()
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let m5 = M0n::new(5).map_err(|e| e.to_string())?;
    let fan = common::single_vertex_fan(&["r1", "r2", "r3", "r4", "r5"]);
    for k in 0..100 {
        let (cx, center, pool): (Arc<ConeComplex>, _, Vec<PLFunction>) = if k % 2 == 0 {
            let pool = (1..5)
                .map(|i| {
                    PLFunction::ray_function(RayId(i)).sub(&PLFunction::ray_function(RayId(0)))
                })
                .collect();
            (fan.clone(), fan.vertex(), pool)
        } else {
            let v = m5.complex.vertex();
            (
                m5.complex.clone(),
                v,
                m5.structure.generators_at(v).cloned().collect(),
            )
        };
        let gens: Vec<PLFunction> = (0..rng.gen_range(0..=3))
            .map(|_| common::random_combination(&mut rng, &pool, 2))
            .collect();
        let h = AffineSubgroup::new(cx.clone(), center, &gens).map_err(|e| e.to_string())?;
        let w = star_weight(&TropicalCycle::fundamental_class(cx).unwrap(), center)
            .map_err(|e| e.to_string())?;
        let bar = h.closure(&w).map_err(|e| e.to_string())?;
        let again = bar.closure(&w).map_err(|e| e.to_string())?;
        ensure(again == bar, || {
            format!("fixture {k}: closure is not idempotent")
        })?;
        ensure(h.is_subgroup_of(&bar).map_err(|e| e.to_string())?, || {
            format!("fixture {k}: H not in closure")
        })?;
    }
    Ok("4-ray closure has rank 3 and contains phi3 - phi4; idempotent on 100 fixtures".into())
}

fn criterion_8(adm: &Adm) -> Outcome {
    let m = M0n::new(5).map_err(|e| e.to_string())?;
    let vectors = common::compositions(5, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..50 {
        let steps = rng.gen_range(1..=3);
        let f = common::random_refinement(&m.complex, &mut rng, steps);
        let a = m.structure.pullback(&f).map_err(|e| e.to_string())?;
        let fund = f
            .refine_cycle(&m.fundamental_class())
            .map_err(|e| e.to_string())?;
        for e in &vectors {
            let d = psi_degree_on(&a, &fund, e, |i| f.pullback(&m.psi(i)?))
                .map_err(|x| x.to_string())?;
            ensure(d == common::multinomial(5, e), || {
                format!("M05 refinement {k}, {e:?}: {}", format_q(&d))
            })?;
        }
    }
    let psi = adm.psi1().map_err(|e| e.to_string())?;
    let fund = adm.fundamentalish();
    let before = adm.psi1_cap_fundamentalish().map_err(|e| e.to_string())?;
    let phis = [adm.forgetful_phi(1).unwrap(), adm.forgetful_phi(2).unwrap()];
    for k in 0..50 {
        let steps = rng.gen_range(1..=3);
        let f = common::random_refinement(&adm.complex, &mut rng, steps);
        let a = adm.structure.pullback(&f).map_err(|e| e.to_string())?;
        let rf = f.refine_cycle(&fund).map_err(|e| e.to_string())?;
        let cycle = intersect(&a, &f.pullback(&psi).map_err(|e| e.to_string())?, &rf)
            .map_err(|e| e.to_string())?;
        for r in f.source.ray_ids() {
            let w = cycle.weight(f.source.ray_cone(r));
            let want = match adm.complex.ray_by_id(&f.source.ray(r).id) {
                Ok(r0) => before.weight(adm.complex.ray_cone(r0)),
                Err(_) => Q::from_integer(0.into()),
            };
            ensure(w == want, || {
                format!(
                    "Adm refinement {k}: ray {} has weight {}",
                    f.source.ray(r).id,
                    format_q(&w)
                )
            })?;
        }
        for phi in &phis {
            let refined = phi.refine(&f).map_err(|e| e.to_string())?;
            let src = &refined.morphism.source;
            let w = f
                .source
                .ray_ids()
                .map(|r| (src.ray_cone(r), cycle.weight(f.source.ray_cone(r))))
                .collect();
            let sk = TropicalCycle::new(src.clone(), 1, w).map_err(|e| e.to_string())?;
            let pushed = refined
                .morphism
                .pushforward(&sk)
                .map_err(|e| e.to_string())?;
            let want = phi
                .morphism
                .pushforward(&before)
                .map_err(|e| e.to_string())?;
            ensure(pushed == want, || {
                format!("Adm refinement {k}: phi{} pushforward changed", phi.index)
            })?;
            let deg = if phi.index == 1 { q(24) } else { q(6) };
            for region in [
                Region::SameVertex,
                Region::FoldedOuter,
                Region::FoldedMiddle,
            ] {
                let (p, d) = genus_one::sample_degree(&refined.charts, &rf, region, &mut rng)
                    .map_err(|e| e.to_string())?;
                ensure(d.degree == deg, || {
                    format!("Adm refinement {k}: phi{} at {p:?}", phi.index)
                })?;
            }
        }
    }
    Ok("50 subdivisions each of M05 and Adm leave every degree and total unchanged".into())
}

fn criterion_9(adm: &Adm) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let m4 = M0n::new(4).map_err(|e| e.to_string())?;
    let m5 = M0n::new(5).map_err(|e| e.to_string())?;
    let m5_psi = intersect(&m5.structure, &m5.psi(1).unwrap(), &m5.fundamental_class())
        .map_err(|e| e.to_string())?;
    let adm_psi = adm.psi1_cap_fundamentalish().map_err(|e| e.to_string())?;
    let cr4 = moduli::cross_ratios(&m4.complex, 4).unwrap();
    let cr5 = moduli::cross_ratios(&m5.complex, 5).unwrap();
    let fixtures: [(&str, &M0n, TropicalCycle, bool); 5] = [
        ("M04", &m4, m4.fundamental_class(), false),
        ("M05", &m5, m5.fundamental_class(), false),
        ("M05 psi", &m5, m5_psi, false),
        ("Adm", &m5, adm.fundamentalish(), true),
        ("Adm psi", &m5, adm_psi, true),
    ];
    for (name, m, cycle, on_adm) in fixtures {
        let gens = if m.n == 4 { &cr4 } else { &cr5 };
        let structure = if on_adm { &adm.structure } else { &m.structure };
        for k in 0..100 {
            let mut f = common::random_slopes(&mut rng, &m.complex, 3);
            let mut chi = common::random_combination(&mut rng, gens, 3);
            if on_adm {
                f = adm.br.pullback(&f).map_err(|e| e.to_string())?;
                chi = adm.br.pullback(&chi).map_err(|e| e.to_string())?;
            }
            let a =
                intersect(structure, &f, &cycle).map_err(|e| format!("{name} pair {k}: {e}"))?;
            let b = intersect(structure, &f.add(&chi), &cycle)
                .map_err(|e| format!("{name} pair {k}: {e}"))?;
            ensure(a == b, || format!("{name} pair {k}: products differ"))?;
        }
    }
    let n = audited_products();
    ensure(n > 0, || "no products were audited".into())?;
    Ok(format!(
        "representative independence on 5 fixtures; {n} audited products all balanced"
    ))
}

fn main() {
    common::init();
    let adm = Adm::new().expect("case-study complex");
    let criteria: Vec<(usize, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(|| criterion_2(&adm))),
        (3, Box::new(|| criterion_3(&adm))),
        (4, Box::new(|| criterion_4(&adm))),
        (5, Box::new(|| criterion_5(&adm))),
        (6, Box::new(criterion_6)),
        (7, Box::new(criterion_7)),
        (8, Box::new(|| criterion_8(&adm))),
        // last, so the audit count covers every earlier product
        (9, Box::new(|| criterion_9(&adm))),
    ];
    let mut failed = 0;
    for (i, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {i}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {i}: FAIL ({why})");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
