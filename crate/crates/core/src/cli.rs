//! Command-line surface. `run_command` never exits the process; it returns
//! an exit code and a structured report.
//!
//! Exit codes: 0 on success, 2 when a checked identity fails or a cycle is
//! unbalanced, 1 on usage, schema or other errors.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::affine::AffineStructure;
use crate::cycles::{intersect, TropicalCycle};
use crate::error::{Error, Result};
use crate::genus_one::{self, Adm, FaceKind, RayKind, Region};
use crate::io;
use crate::moduli::{self, M0n};
use crate::rational::{format_q, parse_q, q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "trop",
    about = "Exact tropical intersection theory on cone complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Cap {
    Fundamental,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Study {
    Genus1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegionArg {
    SameVertex,
    FoldedOuter,
    FoldedMiddle,
}

impl From<RegionArg> for Region {
    fn from(r: RegionArg) -> Self {
        match r {
            RegionArg::SameVertex => Region::SameVertex,
            RegionArg::FoldedOuter => Region::FoldedOuter,
            RegionArg::FoldedMiddle => Region::FoldedMiddle,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Builds M_{0,n} and optionally intersects ψ classes.
    M0n {
        #[arg(long)]
        n: usize,
        /// Writes the complex as complex.v1 JSON.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// A ψ class to intersect with; repeat for powers.
        #[arg(long)]
        psi: Vec<usize>,
        /// Cycle to cap with; only the fundamental class is supported.
        #[arg(long, value_enum, default_value = "fundamental")]
        #[allow(dead_code)]
        cap: Cap,
        /// Reports the degree of the ψ product and checks it.
        #[arg(long)]
        degree: bool,
        #[arg(long, value_enum, default_value = "json")]
        report: Format,
    },
    /// Checks a cycle for balancing against an affine structure.
    CheckBalanced {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        affine: PathBuf,
        #[arg(long)]
        cycle: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        report: Format,
    },
    /// Intersects a cycle with a combinatorially principal function.
    Intersect {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        affine: PathBuf,
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        cycle: PathBuf,
        /// Writes the product as cycle.v1 JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        report: Format,
    },
    /// Pushes a cycle forward along a morphism after certifying it.
    Pushforward {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        morphism: PathBuf,
        #[arg(long)]
        cycle: PathBuf,
        /// Structures to certify against; constants only when omitted.
        #[arg(long)]
        source_affine: Option<PathBuf>,
        #[arg(long)]
        target_affine: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        report: Format,
    },
    /// Local degree of a genus-one forgetful map at a point of the target.
    Degree {
        #[arg(long)]
        phi: usize,
        #[arg(long, value_enum)]
        region: RegionArg,
        /// A point `x1,x2` in the region's chart; sampled when omitted.
        #[arg(long)]
        point: Option<String>,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        report: Format,
    },
    /// Runs a bundled case study end to end.
    CaseStudy {
        #[arg(value_enum)]
        study: Study,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        report: Format,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub format: Format,
    pub value: Value,
}

impl Report {
    pub fn render(&self) -> String {
        match self.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.value).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = String::new();
                render_text(&self.value, 0, &mut s);
                s
            }
        }
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match x {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", scalar(x))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: Report,
}

/// Collects comparisons against expected constants.
#[derive(Default)]
struct Checks(Vec<Value>);

impl Checks {
    fn add(&mut self, name: &str, expected: String, got: String, origin: &str) -> bool {
        let pass = expected == got;
        self.0.push(json!({
            "name": name,
            "expected": expected,
            "got": got,
            "origin": origin,
            "pass": pass,
        }));
        pass
    }

    fn flag(&mut self, name: &str, ok: bool, origin: &str) -> bool {
        self.add(name, "true".into(), ok.to_string(), origin)
    }

    fn all_pass(&self) -> bool {
        self.0.iter().all(|c| c["pass"] == Value::Bool(true))
    }
}

pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            return Outcome {
                code,
                report: Report {
                    format: Format::Text,
                    value: Value::String(e.to_string()),
                },
            };
        }
    };
    let format = match &cli.command {
        Command::M0n { report, .. }
        | Command::CheckBalanced { report, .. }
        | Command::Intersect { report, .. }
        | Command::Pushforward { report, .. }
        | Command::Degree { report, .. }
        | Command::CaseStudy { report, .. } => *report,
    };
    match dispatch(cli.command) {
        Ok((code, value)) => Outcome {
            code,
            report: Report { format, value },
        },
        Err(e) => Outcome {
            code: 1,
            report: Report {
                format,
                value: error_value(&e),
            },
        },
    }
}

fn error_value(e: &Error) -> Value {
    match e {
        Error::Schema { path, msg } => json!({"error": "schema", "path": path, "message": msg}),
        other => json!({"error": other.to_string()}),
    }
}

fn dispatch(cmd: Command) -> Result<(i32, Value)> {
    match cmd {
        Command::M0n {
            n,
            emit,
            psi,
            degree,
            ..
        } => m0n(n, emit, &psi, degree),
        Command::CheckBalanced {
            complex,
            affine,
            cycle,
            ..
        } => {
            let c = io::load_complex(&complex)?;
            let a = io::load_affine(c.clone(), &affine)?;
            let w = io::load_cycle(c.clone(), &cycle)?;
            Ok(balance_report(&a, &w))
        }
        Command::Intersect {
            complex,
            affine,
            function,
            cycle,
            out,
            ..
        } => {
            let c = io::load_complex(&complex)?;
            let a = io::load_affine(c.clone(), &affine)?;
            let f = io::load_plfn(&c, &function)?;
            let w = io::load_cycle(c.clone(), &cycle)?;
            let product = intersect(&a, &f, &w)?;
            if let Some(p) = out {
                io::write_json(&p, &io::cycle_to_json(&product))?;
            }
            let (code, bal) = balance_report(&a, &product);
            Ok((
                code,
                json!({
                    "cycle": io::cycle_to_json(&product),
                    "total": format_q(&product.total()),
                    "balance": bal,
                }),
            ))
        }
        Command::Pushforward {
            source,
            target,
            morphism,
            cycle,
            source_affine,
            target_affine,
            out,
            ..
        } => {
            let s = io::load_complex(&source)?;
            let t = io::load_complex(&target)?;
            let mut f = io::load_morphism(s.clone(), t.clone(), &morphism)?;
            let w = io::load_cycle(s.clone(), &cycle)?;
            let sa = match source_affine {
                Some(p) => io::load_affine(s.clone(), &p)?,
                None => AffineStructure::constants(s.clone()),
            };
            let ta = match target_affine {
                Some(p) => io::load_affine(t.clone(), &p)?,
                None => AffineStructure::constants(t.clone()),
            };
            if !f.certify(&sa, &ta)? {
                return Ok((2, json!({"certified": false})));
            }
            let image = f.pushforward(&w)?;
            if let Some(p) = out {
                io::write_json(&p, &io::cycle_to_json(&image))?;
            }
            Ok((
                0,
                json!({
                    "certified": true,
                    "cycle": io::cycle_to_json(&image),
                    "total": format_q(&image.total()),
                }),
            ))
        }
        Command::Degree {
            phi,
            region,
            point,
            samples,
            seed,
            ..
        } => degree(phi, region.into(), point, samples, seed),
        Command::CaseStudy {
            study: Study::Genus1,
            seed,
            ..
        } => case_study_genus1(seed),
    }
}

fn balance_report(a: &AffineStructure, w: &TropicalCycle) -> (i32, Value) {
    let c = a.complex();
    match w.is_balanced(a) {
        Ok(b) => match b.witness {
            None => (0, json!({"balanced": true})),
            Some(u) => (
                2,
                json!({
                    "balanced": false,
                    "witness": {
                        "cone": c.cone(u.tau).id,
                        "function": io::plfn_to_json(c, &u.function),
                        "pairing": format_q(&u.pairing),
                    }
                }),
            ),
        },
        Err(e) => (1, error_value(&e)),
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// `(n-3)! / ∏ a_i!`.
pub fn multinomial_oracle(n: usize, exps: &[usize]) -> Q {
    let den: u128 = exps.iter().map(|&a| factorial(a)).product();
    Q::new(factorial(n - 3).into(), den.into())
}

fn m0n(n: usize, emit: Option<PathBuf>, psi: &[usize], degree: bool) -> Result<(i32, Value)> {
    let m = M0n::new(n)?;
    if let Some(p) = emit {
        io::write_json(&p, &io::complex_to_json(&m.complex))?;
    }
    let mut out = Map::new();
    out.insert("n".into(), json!(n));
    out.insert("rays".into(), json!(m.complex.num_rays()));
    out.insert(
        "cones_by_dim".into(),
        json!(moduli::cone_counts(&m.complex)),
    );
    if psi.is_empty() && !degree {
        return Ok((0, Value::Object(out)));
    }
    let mut exps = vec![0; n];
    for &i in psi {
        if i == 0 || i > n {
            return Err(Error::InvalidMarks(format!("ψ_{i} on M_(0,{n})")));
        }
        exps[i - 1] += 1;
    }
    out.insert("exponents".into(), json!(exps));
    if degree {
        let d = moduli::psi_degree(&m, &exps)?;
        let mut checks = Checks::default();
        let pass = checks.add(
            "degree",
            format_q(&multinomial_oracle(n, &exps)),
            format_q(&d),
            "oracle",
        );
        out.insert("degree".into(), Value::String(format_q(&d)));
        out.insert("checks".into(), Value::Array(checks.0));
        return Ok((if pass { 0 } else { 2 }, Value::Object(out)));
    }
    let mut c = m.fundamental_class();
    let mut balanced = true;
    for (idx, &e) in exps.iter().enumerate() {
        for _ in 0..e {
            c = intersect(&m.structure, &m.psi(idx + 1)?, &c)?;
            balanced &= c.is_balanced(&m.structure)?.is_balanced();
        }
    }
    out.insert("cycle".into(), io::cycle_to_json(&c));
    out.insert("balanced".into(), json!(balanced));
    Ok((if balanced { 0 } else { 2 }, Value::Object(out)))
}

fn parse_point(s: &str) -> Result<Vec<Q>> {
    s.split(',')
        .map(|x| parse_q(x.trim()).map_err(|e| Error::schema("--point", e.to_string())))
        .collect()
}

fn expected_degree(phi: usize) -> i64 {
    if phi == 1 {
        24
    } else {
        6
    }
}

fn degree_value(d: &crate::degree::DegreeReport, p: &[Q], adm: &Adm) -> Value {
    json!({
        "point": p.iter().map(format_q).collect::<Vec<_>>(),
        "degree": format_q(&d.degree),
        "preimages": d.preimages.iter().map(|x| json!({
            "face": adm.complex.cone(x.face).id,
            "orbit_point": x.orbit_point,
            "local_degree": format_q(&x.local_degree),
        })).collect::<Vec<_>>(),
    })
}

fn degree(
    phi: usize,
    region: Region,
    point: Option<String>,
    samples: usize,
    seed: u64,
) -> Result<(i32, Value)> {
    let adm = Adm::new()?;
    let f = adm.forgetful_phi(phi)?;
    let fc = adm.fundamentalish();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::new();
    let mut checks = Checks::default();
    let want = format_q(&q(expected_degree(phi)));
    match point {
        Some(s) => {
            let p = parse_point(&s)?;
            if !region.contains(&p) {
                return Err(Error::NonGenericSample(format!(
                    "{s} is not in region {}",
                    region.name()
                )));
            }
            let d = f.charts.degree_at(&fc, region.chart(), &p)?;
            checks.add("degree", want.clone(), format_q(&d.degree), "literature");
            results.push(degree_value(&d, &p, &adm));
        }
        None => {
            for _ in 0..samples {
                let (p, d) = genus_one::sample_degree(&f.charts, &fc, region, &mut rng)?;
                checks.add("degree", want.clone(), format_q(&d.degree), "literature");
                results.push(degree_value(&d, &p, &adm));
            }
        }
    }
    let code = if checks.all_pass() { 0 } else { 2 };
    Ok((
        code,
        json!({
            "phi": phi,
            "region": region.name(),
            "samples": results,
            "checks": checks.0,
        }),
    ))
}

fn cycle_by_ray(w: &TropicalCycle) -> Value {
    let c = &w.complex;
    let m: Map<String, Value> = c
        .ray_ids()
        .map(|r| {
            (
                c.ray(r).id.clone(),
                Value::String(format_q(&w.weight(c.ray_cone(r)))),
            )
        })
        .collect();
    Value::Object(m)
}

/// Runs the genus-one pipeline and compares every headline number.
pub fn case_study_genus1(seed: u64) -> Result<(i32, Value)> {
    let adm = Adm::new()?;
    let mut checks = Checks::default();
    let mut out = Map::new();

    let valid = genus_one::validate_adm(&adm.complex, &adm.tables).is_ok();
    checks.flag("adm_structure", valid, "literature");
    let rays: Map<String, Value> = RayKind::ALL
        .iter()
        .map(|k| (k.letter().to_string(), json!(adm.tables.ray_count(*k))))
        .collect();
    let faces: Map<String, Value> = FaceKind::ALL
        .iter()
        .map(|k| (k.name().to_string(), json!(adm.tables.face_count(*k))))
        .collect();
    let weights: Map<String, Value> = FaceKind::ALL
        .iter()
        .map(|k| (k.name().to_string(), Value::String(format_q(&k.weight()))))
        .collect();
    out.insert("ray_counts".into(), Value::Object(rays));
    out.insert("face_counts".into(), Value::Object(faces));
    out.insert("fundamentalish_weights".into(), Value::Object(weights));

    let fc = adm.fundamentalish();
    checks.flag(
        "fundamentalish_balanced",
        fc.is_balanced(&adm.structure)?.is_balanced(),
        "oracle",
    );
    let gate = adm.tropicalizability_gate()?;
    checks.flag("psi_tropicalizable", gate.ok, "literature");
    out.insert("gate_cells".into(), json!(gate.data.len()));

    let psi = adm.psi1_cap_fundamentalish()?;
    checks.flag(
        "psi_cycle_balanced",
        psi.is_balanced(&adm.structure)?.is_balanced(),
        "oracle",
    );
    out.insert("psi_cycle".into(), cycle_by_ray(&psi));
    for r in adm.complex.ray_ids() {
        let kind = adm.tables.ray(r).kind;
        let want = match kind {
            RayKind::A => "2/3",
            RayKind::B => "1",
            _ => "0",
        };
        let got = format_q(&psi.weight(adm.complex.ray_cone(r)));
        checks.add(
            &format!("psi_cycle[{}]", adm.complex.ray(r).id),
            want.into(),
            got,
            "literature",
        );
    }

    let psi_ref = genus_one::trop_psi();
    let w_ref = genus_one::trop_w();
    let mut pushes = Map::new();
    let mut degrees = Map::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in [1, 2] {
        let phi = adm.forgetful_phi(i)?;
        let image = phi.morphism.pushforward(&psi)?;
        pushes.insert(format!("phi{i}"), cycle_by_ray(&image));
        let (want, identity) = if i == 1 {
            ("12 irr", psi_ref.scale(&q(24)))
        } else {
            ("6 irr + 3 E", psi_ref.add(&w_ref)?.scale(&q(6)))
        };
        checks.add(
            &format!("pushforward_phi{i}"),
            want.into(),
            describe(&image),
            "literature",
        );
        checks.flag(&format!("identity_phi{i}"), image == identity, "literature");

        let mut cases = Vec::new();
        for (n, region) in phi.cases().into_iter().enumerate() {
            let mut samples = Vec::new();
            for _ in 0..3 {
                let (p, d) = genus_one::sample_degree(&phi.charts, &fc, region, &mut rng)?;
                checks.add(
                    &format!("degree_phi{i}_case{}", n + 1),
                    format_q(&q(expected_degree(i))),
                    format_q(&d.degree),
                    "literature",
                );
                samples.push(json!({
                    "point": p.iter().map(format_q).collect::<Vec<_>>(),
                    "degree": format_q(&d.degree),
                    "preimages": d.preimages.len(),
                }));
            }
            cases.push(json!({"case": n + 1, "region": region.name(), "samples": samples}));
        }
        degrees.insert(format!("phi{i}"), Value::Array(cases));
    }
    out.insert("pushforwards".into(), Value::Object(pushes));
    out.insert("degrees".into(), Value::Object(degrees));
    out.insert(
        "reference".into(),
        json!({"trop_psi": describe(&psi_ref), "trop_w": describe(&w_ref), "origin": "literature"}),
    );
    let pass = checks.all_pass();
    out.insert("checks".into(), Value::Array(checks.0));
    out.insert("pass".into(), json!(pass));
    Ok((if pass { 0 } else { 2 }, Value::Object(out)))
}

/// `"6 irr + 3 E"`-style rendering of a 1-cycle on the target.
fn describe(w: &TropicalCycle) -> String {
    let c = &w.complex;
    let mut parts = Vec::new();
    for r in c.ray_ids() {
        let x = w.weight(c.ray_cone(r));
        if x != q(0) {
            parts.push(format!("{} {}", format_q(&x), c.ray(r).id));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}
