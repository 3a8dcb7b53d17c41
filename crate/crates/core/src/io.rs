//! JSON formats: `complex.v1`, `plfn.v1`, `affine.v1`, `cycle.v1` and
//! `morphism.v1`. Rationals are `"p/q"` strings; ids are the string ids of
//! rays and cones.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::affine::AffineStructure;
use crate::complex::{ConeComplex, ConeId, ConeSpec, Domain, PLFunction, Ray, RayId};
use crate::cycles::TropicalCycle;
use crate::error::{Error, Result};
use crate::morphism::ComplexMorphism;
use crate::rational::{format_q, parse_q, Q};

fn obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::schema(path, "expected an object"))
}

fn arr<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::schema(path, "expected an array"))
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::schema(path, "expected a string"))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    m.get(key)
        .ok_or_else(|| Error::schema(path, format!("missing field {key:?}")))
}

fn rational(v: &Value, path: &str) -> Result<Q> {
    let s = string(v, path)?;
    parse_q(s).map_err(|e| Error::schema(path, e.to_string()))
}

fn integer(v: &Value, path: &str) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| Error::schema(path, "expected an integer"))
}

fn ray_ref(c: &ConeComplex, id: &str, path: &str) -> Result<RayId> {
    c.ray_by_id(id)
        .map_err(|_| Error::schema(path, format!("unknown ray {id:?}")))
}

fn cone_ref(c: &ConeComplex, id: &str, path: &str) -> Result<ConeId> {
    c.cone_by_id(id)
        .map_err(|_| Error::schema(path, format!("unknown cone {id:?}")))
}

pub fn complex_to_json(c: &ConeComplex) -> Value {
    let rays: Vec<Value> = c
        .rays()
        .iter()
        .map(|r| json!({"id": r.id, "label": r.label}))
        .collect();
    let cones: Vec<Value> = c
        .cones()
        .iter()
        .map(|k| json!({"id": k.id, "rays": c.ray_names(&k.rays), "aut": k.aut_order}))
        .collect();
    json!({"rays": rays, "cones": cones})
}

pub fn complex_from_json(v: &Value) -> Result<ConeComplex> {
    let m = obj(v, "$")?;
    let mut rays = Vec::new();
    for (i, r) in arr(field(m, "rays", "$")?, "$.rays")?.iter().enumerate() {
        let p = format!("$.rays[{i}]");
        let rm = obj(r, &p)?;
        let id = string(field(rm, "id", &p)?, &format!("{p}.id"))?.to_string();
        let label = match rm.get("label") {
            Some(l) => string(l, &format!("{p}.label"))?.to_string(),
            None => id.clone(),
        };
        rays.push(Ray { id, label });
    }
    let mut specs = Vec::new();
    for (i, k) in arr(field(m, "cones", "$")?, "$.cones")?.iter().enumerate() {
        let p = format!("$.cones[{i}]");
        let km = obj(k, &p)?;
        let id = string(field(km, "id", &p)?, &format!("{p}.id"))?.to_string();
        let mut rs = Vec::new();
        for (j, r) in arr(field(km, "rays", &p)?, &format!("{p}.rays"))?
            .iter()
            .enumerate()
        {
            rs.push(string(r, &format!("{p}.rays[{j}]"))?.to_string());
        }
        let aut = match km.get("aut") {
            Some(a) => {
                let n = integer(a, &format!("{p}.aut"))?;
                if n < 1 {
                    return Err(Error::schema(format!("{p}.aut"), "must be positive"));
                }
                n as u64
            }
            None => 1,
        };
        specs.push(ConeSpec { id, rays: rs, aut });
    }
    ConeComplex::build(rays, specs)
}

pub fn plfn_to_json(c: &ConeComplex, f: &PLFunction) -> Value {
    let slopes: Map<String, Value> = f
        .slopes()
        .iter()
        .map(|(r, v)| (c.ray(*r).id.clone(), Value::String(format_q(v))))
        .collect();
    let mut out = Map::new();
    out.insert("slopes".into(), Value::Object(slopes));
    out.insert("constant".into(), Value::String(format_q(&f.constant)));
    if let Domain::Cones(cs) = &f.domain {
        let ids: Vec<Value> = cs
            .iter()
            .map(|k| Value::String(c.cone(*k).id.clone()))
            .collect();
        out.insert("domain".into(), Value::Array(ids));
    }
    Value::Object(out)
}

/// A missing `domain` means the whole complex.
pub fn plfn_from_json(c: &ConeComplex, v: &Value, path: &str) -> Result<PLFunction> {
    let m = obj(v, path)?;
    let mut slopes = BTreeMap::new();
    if let Some(s) = m.get("slopes") {
        let sp = format!("{path}.slopes");
        for (k, x) in obj(s, &sp)? {
            let p = format!("{sp}.{k}");
            slopes.insert(ray_ref(c, k, &p)?, rational(x, &p)?);
        }
    }
    let constant = match m.get("constant") {
        Some(x) => rational(x, &format!("{path}.constant"))?,
        None => Q::from_integer(0.into()),
    };
    let domain = match m.get("domain") {
        None | Some(Value::Null) => Domain::Whole,
        Some(d) => {
            let dp = format!("{path}.domain");
            let mut set = BTreeSet::new();
            for (i, x) in arr(d, &dp)?.iter().enumerate() {
                let p = format!("{dp}[{i}]");
                set.insert(cone_ref(c, string(x, &p)?, &p)?);
            }
            Domain::Cones(set)
        }
    };
    Ok(PLFunction::new(slopes, constant, domain))
}

pub fn affine_to_json(a: &AffineStructure) -> Value {
    let c = a.complex();
    let m: Map<String, Value> = c
        .cone_ids()
        .map(|k| {
            let gens: Vec<Value> = a.generators_at(k).map(|g| plfn_to_json(c, g)).collect();
            (c.cone(k).id.clone(), Value::Array(gens))
        })
        .collect();
    Value::Object(m)
}

/// Cones missing from the map get no generators.
pub fn affine_from_json(c: Arc<ConeComplex>, v: &Value) -> Result<AffineStructure> {
    let m = obj(v, "$")?;
    let mut per_cone = vec![Vec::new(); c.num_cones()];
    for (k, gens) in m {
        let p = format!("$.{k}");
        let cone = cone_ref(&c, k, &p)?;
        for (i, g) in arr(gens, &p)?.iter().enumerate() {
            per_cone[cone.0].push(plfn_from_json(&c, g, &format!("{p}[{i}]"))?);
        }
    }
    AffineStructure::new(c, per_cone)
}

pub fn cycle_to_json(w: &TropicalCycle) -> Value {
    let weights: Map<String, Value> = w
        .weights()
        .iter()
        .map(|(k, x)| (w.complex.cone(*k).id.clone(), Value::String(format_q(x))))
        .collect();
    json!({"dim": w.dim, "weights": weights})
}

pub fn cycle_from_json(c: Arc<ConeComplex>, v: &Value) -> Result<TropicalCycle> {
    let m = obj(v, "$")?;
    let dim = integer(field(m, "dim", "$")?, "$.dim")?;
    if dim < 0 {
        return Err(Error::schema("$.dim", "must be nonnegative"));
    }
    let mut weights = BTreeMap::new();
    for (k, x) in obj(field(m, "weights", "$")?, "$.weights")? {
        let p = format!("$.weights.{k}");
        weights.insert(cone_ref(&c, k, &p)?, rational(x, &p)?);
    }
    TropicalCycle::new(c, dim as usize, weights)
}

pub fn morphism_to_json(f: &ComplexMorphism) -> Value {
    let (s, t) = (&f.source, &f.target);
    let ray_images: Map<String, Value> = s
        .ray_ids()
        .map(|r| {
            let img: Map<String, Value> = f
                .ray_image(r)
                .iter()
                .map(|(x, a)| (t.ray(*x).id.clone(), json!(a)))
                .collect();
            (s.ray(r).id.clone(), Value::Object(img))
        })
        .collect();
    let cone_map: Map<String, Value> = s
        .cone_ids()
        .map(|k| {
            (
                s.cone(k).id.clone(),
                Value::String(t.cone(f.image_cone(k)).id.clone()),
            )
        })
        .collect();
    json!({"cone_map": cone_map, "ray_images": ray_images})
}

/// Rays missing from `ray_images` are contracted. Without `cone_map` the
/// smallest containing cones are used.
pub fn morphism_from_json(
    source: Arc<ConeComplex>,
    target: Arc<ConeComplex>,
    v: &Value,
) -> Result<ComplexMorphism> {
    let m = obj(v, "$")?;
    let mut images = vec![BTreeMap::new(); source.num_rays()];
    for (k, img) in obj(field(m, "ray_images", "$")?, "$.ray_images")? {
        let p = format!("$.ray_images.{k}");
        let r = ray_ref(&source, k, &p)?;
        for (t, a) in obj(img, &p)? {
            let q = format!("{p}.{t}");
            images[r.0].insert(ray_ref(&target, t, &q)?, integer(a, &q)?);
        }
    }
    match m.get("cone_map") {
        None | Some(Value::Null) => ComplexMorphism::new(source, target, images),
        Some(cm) => {
            let cm = obj(cm, "$.cone_map")?;
            let mut map = Vec::with_capacity(source.num_cones());
            for k in source.cone_ids() {
                let id = &source.cone(k).id;
                let p = format!("$.cone_map.{id}");
                let t = cm
                    .get(id)
                    .ok_or_else(|| Error::schema("$.cone_map", format!("missing cone {id:?}")))?;
                map.push(cone_ref(&target, string(t, &p)?, &p)?);
            }
            ComplexMorphism::with_cone_map(source, target, images, map)
        }
    }
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::schema("$", format!("{}: {e}", path.display())))
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v).expect("values serialize");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_complex(path: &Path) -> Result<Arc<ConeComplex>> {
    Ok(Arc::new(complex_from_json(&read_json(path)?)?))
}

pub fn load_plfn(c: &ConeComplex, path: &Path) -> Result<PLFunction> {
    plfn_from_json(c, &read_json(path)?, "$")
}

pub fn load_affine(c: Arc<ConeComplex>, path: &Path) -> Result<AffineStructure> {
    affine_from_json(c, &read_json(path)?)
}

pub fn load_cycle(c: Arc<ConeComplex>, path: &Path) -> Result<TropicalCycle> {
    cycle_from_json(c, &read_json(path)?)
}

pub fn load_morphism(
    source: Arc<ConeComplex>,
    target: Arc<ConeComplex>,
    path: &Path,
) -> Result<ComplexMorphism> {
    morphism_from_json(source, target, &read_json(path)?)
}
