use std::io::Read;
use std::path::Path;

use serde_json::{json, Value};

use bhf::catalog::{self, hf_genus1, parse_word, Genus1Fixture};
use bhf::dmod::{TypeD, TypeDD, UTypeD};
use bhf::f2u::F2UComplex;
use bhf::json::{catalog_ref, parse_document, to_json, Document, CATALOG_NAMES};
use bhf::knots::{self, CfkComplex};
use bhf::linalg::F2Complex;
use bhf::pairing::{mor_d_d, mor_d_ud, mor_dd_d, Side};
use bhf::pmc::Pmc;
use bhf::surface::{algebra, SurfaceAlgebra};

use crate::error::CliError;
use crate::render;
use crate::{Format, SideArg};

pub struct Output {
    json: Value,
    /// Preferred text rendering; falls back to a listing of `json`.
    text: Option<String>,
    pub gate_failed: bool,
}

impl Output {
    fn value(json: Value) -> Output {
        Output { json, text: None, gate_failed: false }
    }

    fn document(doc: &Document) -> Output {
        let json = serde_json::from_str(&to_json(doc)).expect("documents serialize to JSON");
        let text = render::document(doc, &json);
        Output { json, text, gate_failed: false }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("values serialize"),
            Format::Text => self.text.clone().unwrap_or_else(|| render::value(&self.json)),
        }
    }
}

fn load(input: &str) -> Result<Document, CliError> {
    if input == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        return Ok(parse_document(&text)?);
    }
    if input.starts_with("catalog:") {
        return Ok(catalog_ref(input)?);
    }
    if Path::new(input).is_file() {
        return Ok(parse_document(&std::fs::read_to_string(input)?)?);
    }
    catalog_ref(input).map_err(|_| CliError::Invalid(format!("`{input}` is neither a file nor a catalog entry")))
}

fn wrong_kind(input: &str, want: &str, doc: &Document) -> CliError {
    CliError::Invalid(format!("`{input}`: expected a {want} document, got {}", doc.kind()))
}

fn load_type_d(input: &str) -> Result<TypeD, CliError> {
    match load(input)? {
        Document::TypeD(m) => Ok(m),
        d => Err(wrong_kind(input, "type D", &d)),
    }
}

fn load_type_dd(input: &str) -> Result<TypeDD, CliError> {
    match load(input)? {
        Document::TypeDD(m) => Ok(m),
        d => Err(wrong_kind(input, "type DD", &d)),
    }
}

fn load_cfk(input: &str) -> Result<CfkComplex, CliError> {
    match load(input)? {
        Document::Cfk(c) => Ok(c),
        d => Err(wrong_kind(input, "knot complex", &d)),
    }
}

fn load_pmc(input: &str) -> Result<Pmc, CliError> {
    if let Some(z) = Pmc::standard(input) {
        return Ok(z);
    }
    match load(input)? {
        Document::Pmc(z) => Ok(z),
        d => Err(wrong_kind(input, "matched circle", &d)),
    }
}

fn parse_elem(alg: &SurfaceAlgebra, text: &str) -> Result<bhf::surface::Elem, CliError> {
    alg.parse_elem(text).map_err(|e| CliError::Invalid(e.to_string()))
}

pub fn algebra_info(pmc: &str) -> Result<Output, CliError> {
    let z = load_pmc(pmc)?;
    let alg = algebra(&z);
    let k = z.genus() as i64;
    let summands: serde_json::Map<String, Value> =
        (-k..=k).map(|i| (i.to_string(), json!(alg.summand_basis(i).len()))).collect();
    Ok(Output::value(json!({
        "pmc": z.to_string(),
        "genus": z.genus(),
        "dim": alg.dim(),
        "summands": summands,
    })))
}

pub fn algebra_basis(pmc: &str, summand: Option<i64>) -> Result<Output, CliError> {
    let z = load_pmc(pmc)?;
    let alg = algebra(&z);
    let idx: Vec<u32> = match summand {
        Some(i) => alg.summand_basis(i),
        None => (0..alg.dim() as u32).collect(),
    };
    let labels: Vec<String> = idx.into_iter().map(|i| alg.label(i)).collect();
    Ok(Output::value(json!({ "basis": labels })))
}

pub fn algebra_mul(pmc: &str, a: &str, b: &str) -> Result<Output, CliError> {
    let alg = algebra(&load_pmc(pmc)?);
    let p = alg.mul_elem(&parse_elem(&alg, a)?, &parse_elem(&alg, b)?);
    Ok(Output::value(json!({ "product": alg.format_elem(&p) })))
}

pub fn algebra_diff(pmc: &str, a: &str) -> Result<Output, CliError> {
    let alg = algebra(&load_pmc(pmc)?);
    let d = alg.diff_elem(&parse_elem(&alg, a)?);
    Ok(Output::value(json!({ "differential": alg.format_elem(&d) })))
}

pub fn dmod_check(input: &str) -> Result<Output, CliError> {
    // documents are d^2-checked while parsing
    let (kind, gens, arrows) = match load(input)? {
        Document::TypeD(m) => ("type-d", m.len(), m.arrow_count()),
        Document::TypeDD(m) => ("type-dd", m.len(), m.arrow_count()),
        Document::UTypeD(m) => ("type-d-u", m.len(), m.arrow_count()),
        d => return Err(wrong_kind(input, "module", &d)),
    };
    Ok(Output::value(json!({ "kind": kind, "generators": gens, "arrows": arrows, "d_squared": "ok" })))
}

pub fn dmod_reduce(input: &str) -> Result<Output, CliError> {
    let doc = match load(input)? {
        Document::TypeD(m) => Document::TypeD(m.reduce().sorted()),
        Document::TypeDD(m) => Document::TypeDD(m.reduce().sorted()),
        Document::UTypeD(m) => Document::UTypeD(m.reduce().sorted()),
        d => return Err(wrong_kind(input, "module", &d)),
    };
    Ok(Output::document(&doc))
}

pub fn dmod_iso(left: &str, right: &str) -> Result<Output, CliError> {
    let found = match (load(left)?, load(right)?) {
        (Document::TypeD(a), Document::TypeD(b)) => a.iso_check(&b)?,
        (Document::TypeDD(a), Document::TypeDD(b)) => a.iso_check(&b)?,
        (Document::UTypeD(a), Document::UTypeD(b)) => a.iso_check(&b)?,
        (a, b) => {
            return Err(CliError::Invalid(format!("cannot compare {} with {}", a.kind(), b.kind())));
        }
    };
    Ok(Output::value(json!({ "isomorphic": found.is_some() })))
}

fn f2_complex_json(c: &F2Complex) -> Value {
    let differential: Vec<[usize; 2]> = c.entries().map(|(s, d)| [s, d]).collect();
    json!({
        "schema": "bhf.f2-complex/1",
        "generators": c.names(),
        "differential": differential,
    })
}

fn rank_output(rank: usize) -> Output {
    Output { json: json!({ "rank": rank }), text: Some(format!("rank {rank}")), gate_failed: false }
}

pub fn pair(left: &str, right: &str, dd: Option<&str>, side: SideArg, homology: bool) -> Result<Output, CliError> {
    let m = load_type_d(left)?;
    match load(right)? {
        Document::TypeD(n) => {
            let n = match dd {
                Some(input) => {
                    let side = match side {
                        SideArg::Left => Side::Left,
                        SideArg::Right => Side::Right,
                    };
                    mor_dd_d(&load_type_dd(input)?, &n, side)?.module.reduce()
                }
                None => n,
            };
            let mor = mor_d_d(&m, &n)?;
            if homology {
                Ok(rank_output(mor.homology_rank()?))
            } else {
                mor.complex.check().map_err(|e| CliError::Gate(e.to_string()))?;
                Ok(Output::value(f2_complex_json(&mor.complex)))
            }
        }
        Document::UTypeD(p) => {
            if dd.is_some() {
                return Err(CliError::Usage("--dd is only supported with a type D right-hand module".into()));
            }
            let mor = mor_d_ud(&m, &p)?;
            gate_u(&mor.complex)?;
            if homology {
                Ok(Output::document(&Document::Homology(mor.complex.homology()?)))
            } else {
                Ok(Output::document(&Document::F2U(mor.complex)))
            }
        }
        d => Err(wrong_kind(right, "type D or type D over F2[U]", &d)),
    }
}

/// Computed complexes that fail `d² = 0` are internal errors, not bad input.
fn gate_u(c: &F2UComplex) -> Result<(), CliError> {
    c.check().map_err(|e| CliError::Gate(e.to_string()))
}

pub fn homology(input: &str, truncate: Option<u32>) -> Result<Output, CliError> {
    let c = match load(input)? {
        Document::F2U(c) => c,
        Document::Cfk(k) => k.to_f2u(),
        d => return Err(wrong_kind(input, "F2[U] complex", &d)),
    };
    let h = c.homology()?;
    Ok(match truncate {
        Some(n) => rank_output(h.truncated_rank(n)),
        None => Output::document(&Document::Homology(h)),
    })
}

pub fn knot_validate(input: &str) -> Result<Output, CliError> {
    let c = load_cfk(input)?;
    c.validate()?;
    Ok(Output::value(json!({ "valid": true, "generators": c.len(), "reduced": c.is_reduced() })))
}

pub fn knot_tau(input: &str) -> Result<Output, CliError> {
    let tau = load_cfk(input)?.tau()?;
    Ok(Output { json: json!({ "tau": tau }), text: Some(format!("tau {tau}")), gate_failed: false })
}

pub fn knot_alexander(input: &str) -> Result<Output, CliError> {
    let p = load_cfk(input)?.alexander_polynomial()?;
    let coefficients: serde_json::Map<String, Value> = p.0.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    Ok(Output {
        json: json!({ "alexander": p.to_string(), "coefficients": coefficients }),
        text: Some(p.to_string()),
        gate_failed: false,
    })
}

pub fn knot_classify(input: &str) -> Result<Output, CliError> {
    let c = load_cfk(input)?;
    let d = c.classify_arrows()?;
    let arrows = |v: &[knots::Arrow]| -> Vec<Value> {
        v.iter().map(|a| json!({ "src": c.name(a.src), "dst": c.name(a.dst), "length": a.length })).collect()
    };
    let diagonal: Vec<Value> =
        d.diagonal.iter().map(|e| json!({ "src": c.name(e.src), "upower": e.upower, "dst": c.name(e.dst) })).collect();
    Ok(Output::value(json!({
        "vertical": arrows(&d.vertical),
        "horizontal": arrows(&d.horizontal),
        "diagonal": diagonal,
    })))
}

pub fn knot_simplify(input: &str) -> Result<Output, CliError> {
    let c = load_cfk(input)?;
    c.validate()?;
    let (s, report) = c.simplify_basis()?;
    let change: Vec<Vec<Vec<u32>>> =
        report.change.iter().map(|row| row.iter().map(|p| p.exponents()).collect()).collect();
    let complex: Value = serde_json::from_str(&to_json(&Document::Cfk(s))).expect("documents serialize to JSON");
    Ok(Output::value(json!({
        "complex": complex,
        "xi0": report.xi0,
        "eta0": report.eta0,
        "change": change,
    })))
}

pub fn knot_cfd(input: &str, framing: i64) -> Result<Output, CliError> {
    let c = load_cfk(input)?;
    c.validate()?;
    let (s, _) = c.simplify_basis()?;
    let m = s.cfk_to_cfd(framing)?;
    if !m.verify_d2().is_empty() {
        return Err(CliError::Gate("type D module of the complement fails d^2 = 0".into()));
    }
    Ok(Output::document(&Document::TypeD(m.sorted())))
}

fn load_pattern(input: &str) -> Result<UTypeD, CliError> {
    if let Some(p) = knots::pattern(input) {
        return Ok(p);
    }
    match load(input)? {
        Document::UTypeD(p) => Ok(p),
        d => Err(wrong_kind(input, "type D over F2[U]", &d)),
    }
}

pub fn satellite(companion: &str, pattern: &str, framing: i64) -> Result<Output, CliError> {
    let c = load_cfk(companion)?;
    let p = load_pattern(pattern)?;
    let s = knots::satellite(&p, &c, framing)?;
    gate_u(&s.mor.complex)?;
    let h: Value =
        serde_json::from_str(&to_json(&Document::Homology(s.homology.clone()))).expect("documents serialize to JSON");
    Ok(Output {
        json: json!({ "generators": s.mor.complex.len(), "homology": h, "hat_rank": s.hat_rank }),
        text: Some(format!(
            "generators {}\nhomology {}\nhat rank {}",
            s.mor.complex.len(),
            s.homology,
            s.hat_rank
        )),
        gate_failed: false,
    })
}

pub fn hf3m(word: &str, start: &str, closing: &str) -> Result<Output, CliError> {
    let w = parse_word(word).map_err(|e| CliError::Invalid(e.to_string()))?;
    let torus = |s: &str| {
        Genus1Fixture::solid_torus(s)
            .ok_or_else(|| CliError::Invalid(format!("unknown solid torus `{s}` (expected inf, 0 or -1)")))
    };
    let fixture = Genus1Fixture { start: torus(start)?, closing: torus(closing)? };
    Ok(rank_output(hf_genus1(&w, &fixture)?))
}

pub fn catalog_list() -> Output {
    Output {
        json: json!({ "entries": CATALOG_NAMES }),
        text: Some(CATALOG_NAMES.join("\n")),
        gate_failed: false,
    }
}

pub fn catalog_dump(name: &str) -> Result<Output, CliError> {
    Ok(Output::document(&load(name)?))
}

type Check = (&'static str, fn() -> Result<bool, CliError>);

fn checks() -> Vec<Check> {
    vec![
        ("algebra d^2 = 0 on the torus", || {
            let alg = algebra(&Pmc::torus());
            Ok((0..alg.dim() as u32).all(|i| alg.diff_elem(&alg.diff(i)).is_zero()))
        }),
        ("solid tori fit in a short exact sequence", || Ok(catalog::solid_tori().check()?.short_exact())),
        ("catalog modules satisfy d^2 = 0", || {
            let mut ok = [catalog::h_infinity(), catalog::h_zero(), catalog::h_minus_one()]
                .iter()
                .all(|m| m.verify_d2().is_empty());
            for k in 1..=2 {
                ok &= catalog::handlebody(k)?.verify_d2().is_empty();
                ok &= catalog::dd_identity(&Pmc::split(k).expect("genus in range")).verify_d2().is_empty();
            }
            Ok(ok)
        }),
        ("Dehn twists satisfy d^2 = 0", || {
            Ok(catalog::Twist::ALL.iter().all(|&t| catalog::dehn_twist_dd(t).verify_d2().is_empty()))
        }),
        ("genus-2 underslides satisfy d^2 = 0", || {
            let z = Pmc::split(2).expect("genus in range");
            for s in catalog::ArcSlide::underslides(&z) {
                if !catalog::underslide_dd(&s).map_err(catalog::CatalogError::from)?.verify_d2().is_empty() {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
        ("Mor(H_inf, H_-1) has rank 1", || {
            Ok(mor_d_d(&catalog::h_infinity(), &catalog::h_minus_one())?.homology_rank()? == 1)
        }),
        ("lens spaces L(p,1) have rank p", || {
            let f = Genus1Fixture::default();
            for p in 1..=4 {
                if hf_genus1(&catalog::lens_word(p), &f)? != p {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
        ("S^3 has rank 1", || Ok(hf_genus1(&Default::default(), &Genus1Fixture::sphere())? == 1)),
        ("knot invariants of the trefoil and figure-eight", || {
            let t = CfkComplex::trefoil();
            let e = CfkComplex::figure_eight();
            Ok(t.tau()? == -1 && e.tau()? == 0 && t.alexander_polynomial()?.is_symmetric())
        }),
        ("cable of the trefoil", || {
            let s = knots::satellite(&knots::cable21(), &CfkComplex::trefoil(), -2)?;
            Ok(s.mor.complex.check().is_ok() && s.hat_rank == 5 && s.homology.free_rank == 1)
        }),
    ]
}

pub fn verify() -> Result<Output, CliError> {
    let mut rows = Vec::new();
    let mut failed = 0;
    for (name, check) in checks() {
        let (ok, detail) = match check() {
            Ok(ok) => (ok, None),
            Err(e) => (false, Some(e.to_string())),
        };
        failed += usize::from(!ok);
        rows.push(json!({ "name": name, "ok": ok, "error": detail }));
    }
    let passed = rows.len() - failed;
    let text = rows
        .iter()
        .map(|r| format!("[{}] {}", if r["ok"] == json!(true) { "PASS" } else { "FAIL" }, r["name"].as_str().unwrap_or("")))
        .chain(std::iter::once(format!("{passed} passed, {failed} failed")))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output {
        json: json!({ "passed": passed, "failed": failed, "checks": rows }),
        text: Some(text),
        gate_failed: failed > 0,
    })
}
