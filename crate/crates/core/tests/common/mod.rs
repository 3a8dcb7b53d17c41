#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;
use serde_json::Value;

use trop_core::affine::AffineStructure;
use trop_core::complex::{ConeComplex, ConeSpec, PLFunction, Ray, RayId};
use trop_core::cycles::{self, TropicalCycle};
use trop_core::genus_one::{self, Adm};
use trop_core::io;
use trop_core::moduli::{self, M0n};
use trop_core::morphism::ComplexMorphism;
use trop_core::rational::Q;

/// Turns on the balancing audit of every intersection product.
pub fn init() {
    cycles::set_audit(true);
}

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture(name: &str) -> PathBuf {
    fixtures_dir().join(name)
}

pub fn fixture_str(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

/// `(n-3)! / ∏ a_i!` computed with big integers.
pub fn multinomial(n: usize, exps: &[usize]) -> Q {
    let fact = |k: usize| -> BigInt { (1..=k).map(BigInt::from).product() };
    let den: BigInt = exps.iter().map(|&a| fact(a)).product();
    Q::new(fact(n - 3), den)
}

/// All vectors of `len` nonnegative entries summing to `total`.
pub fn compositions(len: usize, total: usize) -> Vec<Vec<usize>> {
    if len == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(len - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn single_vertex_fan(ids: &[&str]) -> Arc<ConeComplex> {
    let rays = ids
        .iter()
        .map(|i| Ray {
            id: i.to_string(),
            label: i.to_string(),
        })
        .collect();
    let mut specs = vec![ConeSpec::new("0", &[])];
    for id in ids {
        specs.push(ConeSpec::new(*id, &[id]));
    }
    Arc::new(ConeComplex::build(rays, specs).unwrap())
}

/// One vertex and four rays, with `φ_i` the slope-one function on ray `i`.
pub fn four_ray_fan() -> Arc<ConeComplex> {
    single_vertex_fan(&["r1", "r2", "r3", "r4"])
}

pub fn phi(i: usize) -> PLFunction {
    PLFunction::from_slopes([(RayId(i - 1), 1)])
}

/// The line-bundle base: a single ray `x`, with only constants affine at the
/// vertex and `x` affine along the ray.
pub fn line_bundle() -> (Arc<ConeComplex>, AffineStructure) {
    let c = single_vertex_fan(&["x"]);
    let x = PLFunction::from_slopes([(RayId(0), 1)]).with_domain(trop_core::Domain::Cones(
        c.star(c.ray_cone(RayId(0)))
            .unwrap()
            .iter()
            .copied()
            .collect(),
    ));
    let a = AffineStructure::new(c.clone(), vec![vec![], vec![x]]).unwrap();
    (c, a)
}

/// Unbalanced weight `(1, 1, 0)` on the rays of `M_{0,4}`.
pub fn m04_unbalanced(m: &M0n) -> TropicalCycle {
    let w = m
        .complex
        .ray_ids()
        .take(2)
        .map(|r| (m.complex.ray_cone(r), Q::from_integer(1.into())))
        .collect();
    TropicalCycle::new(m.complex.clone(), 1, w).unwrap()
}

/// Every bundled fixture, generated from the library.
pub fn bundled() -> Vec<(String, Value)> {
    let mut out = Vec::new();
    let m4 = M0n::new(4).unwrap();
    out.push(("m04.complex.json".into(), io::complex_to_json(&m4.complex)));
    out.push(("m04.affine.json".into(), io::affine_to_json(&m4.structure)));
    out.push((
        "m04_fundamental.cycle.json".into(),
        io::cycle_to_json(&m4.fundamental_class()),
    ));
    out.push((
        "m04_unbalanced.cycle.json".into(),
        io::cycle_to_json(&m04_unbalanced(&m4)),
    ));
    out.push((
        "m04_psi1.plfn.json".into(),
        io::plfn_to_json(&m4.complex, &m4.psi(1).unwrap()),
    ));

    let m5 = M0n::new(5).unwrap();
    out.push(("m05.complex.json".into(), io::complex_to_json(&m5.complex)));
    out.push(("m05.affine.json".into(), io::affine_to_json(&m5.structure)));
    out.push((
        "m05_fundamental.cycle.json".into(),
        io::cycle_to_json(&m5.fundamental_class()),
    ));
    out.push((
        "m05_psi1.plfn.json".into(),
        io::plfn_to_json(&m5.complex, &m5.psi(1).unwrap()),
    ));
    let f = moduli::forgetful(m5.complex.clone(), 5, m4.complex.clone(), [1, 2, 3, 4]).unwrap();
    out.push(("m05_to_m04.morphism.json".into(), io::morphism_to_json(&f)));

    out.push((
        "four_ray.complex.json".into(),
        io::complex_to_json(&four_ray_fan()),
    ));
    let (lb, la) = line_bundle();
    out.push(("line_bundle.complex.json".into(), io::complex_to_json(&lb)));
    out.push(("line_bundle.affine.json".into(), io::affine_to_json(&la)));

    let adm = Adm::new().unwrap();
    out.push(("adm.complex.json".into(), io::complex_to_json(&adm.complex)));
    out.push(("adm.affine.json".into(), io::affine_to_json(&adm.structure)));
    out.push((
        "adm_fundamentalish.cycle.json".into(),
        io::cycle_to_json(&adm.fundamentalish()),
    ));
    out.push((
        "adm_psi1.plfn.json".into(),
        io::plfn_to_json(&adm.complex, &adm.psi1().unwrap()),
    ));
    out.push((
        "adm_psi.cycle.json".into(),
        io::cycle_to_json(&adm.psi1_cap_fundamentalish().unwrap()),
    ));
    out.push((
        "adm_to_m05.morphism.json".into(),
        io::morphism_to_json(&adm.br),
    ));
    let phi1 = adm.forgetful_phi(1).unwrap();
    out.push((
        "adm_skeleton.complex.json".into(),
        io::complex_to_json(&phi1.morphism.source),
    ));
    out.push((
        "m12.complex.json".into(),
        io::complex_to_json(&genus_one::build_m12_target()),
    ));
    out.push((
        "adm_phi1.morphism.json".into(),
        io::morphism_to_json(&phi1.morphism),
    ));
    let phi2 = adm.forgetful_phi(2).unwrap();
    out.push((
        "adm_phi2.morphism.json".into(),
        io::morphism_to_json(&phi2.morphism),
    ));
    out
}

/// A random primitive positive integer vector of length `k`.
pub fn primitive_coords(rng: &mut impl Rng, k: usize) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=4)).collect();
        let g = v.iter().fold(0i64, |a, &b| num_integer::gcd(a, b));
        if g == 1 {
            return v;
        }
    }
}

/// Composite of `steps` stellar subdivisions of random top cones, as a
/// refinement onto `c`.
pub fn random_refinement(
    c: &Arc<ConeComplex>,
    rng: &mut impl Rng,
    steps: usize,
) -> ComplexMorphism {
    let mut total = ComplexMorphism::identity(c.clone());
    let mut cur = c.clone();
    for _ in 0..steps {
        let tops = cur.cones_of_dim(cur.dim());
        let sigma = tops[rng.gen_range(0..tops.len())];
        let coords = primitive_coords(rng, cur.cone(sigma).dim());
        let (next, f) = cur.stellar_subdivide(sigma, &coords).unwrap();
        total = f.then(&total).unwrap();
        cur = next;
    }
    total
}

/// A random integer combination of functions.
pub fn random_combination(rng: &mut impl Rng, gens: &[PLFunction], range: i64) -> PLFunction {
    let mut f = PLFunction::zero();
    for g in gens {
        let k = rng.gen_range(-range..=range);
        if k != 0 {
            f = f.add(&g.scale(&Q::from_integer(k.into())));
        }
    }
    f
}

/// Random integer slopes on every ray.
pub fn random_slopes(rng: &mut impl Rng, c: &ConeComplex, range: i64) -> PLFunction {
    PLFunction::from_slopes(c.ray_ids().map(|r| (r, rng.gen_range(-range..=range))))
}

pub fn weights_by_id(w: &TropicalCycle) -> BTreeMap<String, Q> {
    w.weights()
        .iter()
        .map(|(c, x)| (w.complex.cone(*c).id.clone(), x.clone()))
        .collect()
}
