//! Versioned JSON documents for every input and output type, plus named
//! catalog references.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::catalog::{dd_identity, dehn_twist_dd, h_infinity, h_minus_one, h_zero, handlebody, make_arcslide, underslide_dd, Twist};
use crate::dmod::{Pair, Single, TensorElem, TypeD, TypeDD, UElem, UTypeD, WithU};
use crate::f2u::{F2UComplex, F2UDecomposition, Poly, Torsion};
use crate::knots::{cable21, CfkComplex, CfkGenerator, Parity};
use crate::pmc::{PairSet, Pmc};
use crate::strand::{AlgebraElement, StrandDiagram};
use crate::surface::{algebra, Elem, SurfaceAlgebra};

pub const PMC: &str = "bhf.pmc/1";
pub const ELEMENT: &str = "bhf.element/1";
pub const TYPE_D: &str = "bhf.type-d/1";
pub const TYPE_DD: &str = "bhf.type-dd/1";
pub const TYPE_D_U: &str = "bhf.type-d-u/1";
pub const CFK: &str = "bhf.cfk/1";
pub const F2U: &str = "bhf.f2u-complex/1";
pub const F2U_HOMOLOGY: &str = "bhf.f2u-homology/1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DocError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("validation error: {0}")]
    Validation(String),
}

fn invalid(e: impl std::fmt::Debug + std::fmt::Display) -> DocError {
    DocError::Validation(format!("{e:?}: {e}"))
}

/// Any document the command line reads or writes.
#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    Pmc(Pmc),
    Element(AlgebraElement),
    TypeD(TypeD),
    TypeDD(TypeDD),
    UTypeD(UTypeD),
    Cfk(CfkComplex),
    F2U(F2UComplex),
    Homology(F2UDecomposition),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Pmc(_) => PMC,
            Document::Element(_) => ELEMENT,
            Document::TypeD(_) => TYPE_D,
            Document::TypeDD(_) => TYPE_DD,
            Document::UTypeD(_) => TYPE_D_U,
            Document::Cfk(_) => CFK,
            Document::F2U(_) => F2U,
            Document::Homology(_) => F2U_HOMOLOGY,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PmcBody {
    genus: usize,
    matching: Vec<[usize; 2]>,
}

/// A circle given inline or by a standard name.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PmcRef {
    Named(String),
    Inline(PmcBody),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramDoc {
    n: u8,
    strands: Vec<[u8; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GenDoc<I> {
    name: String,
    idempotent: I,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeltaDoc<C> {
    src: String,
    coeff: C,
    dst: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    upower: Option<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CfkGenDoc {
    name: String,
    alexander: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parity: Option<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CfkEntryDoc {
    src: String,
    upower: u32,
    dst: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyEntryDoc {
    src: String,
    dst: String,
    poly: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TorsionDoc {
    exponent: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grading: Option<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "schema", deny_unknown_fields)]
enum Wire {
    #[serde(rename = "bhf.pmc/1")]
    Pmc { genus: usize, matching: Vec<[usize; 2]> },
    #[serde(rename = "bhf.element/1")]
    Element { n: u8, terms: Vec<DiagramDoc> },
    #[serde(rename = "bhf.type-d/1")]
    TypeD { algebra: PmcRef, generators: Vec<GenDoc<Vec<u8>>>, delta: Vec<DeltaDoc<String>> },
    #[serde(rename = "bhf.type-dd/1")]
    TypeDD { algebras: [PmcRef; 2], generators: Vec<GenDoc<[Vec<u8>; 2]>>, delta: Vec<DeltaDoc<Vec<[String; 2]>>> },
    #[serde(rename = "bhf.type-d-u/1")]
    UTypeD { algebra: PmcRef, generators: Vec<GenDoc<Vec<u8>>>, delta: Vec<DeltaDoc<String>> },
    #[serde(rename = "bhf.cfk/1")]
    Cfk { generators: Vec<CfkGenDoc>, differential: Vec<CfkEntryDoc> },
    #[serde(rename = "bhf.f2u-complex/1")]
    F2U {
        generators: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gradings: Option<Vec<i64>>,
        entries: Vec<PolyEntryDoc>,
    },
    #[serde(rename = "bhf.f2u-homology/1")]
    Homology {
        free_rank: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        free_gradings: Option<Vec<i64>>,
        torsion: Vec<TorsionDoc>,
        other_torsion: Vec<Vec<u32>>,
    },
}

fn pmc_body(z: &Pmc) -> PmcBody {
    PmcBody {
        genus: z.genus(),
        matching: z.pairs().into_iter().map(|(a, b)| [a as usize, b as usize]).collect(),
    }
}

fn pmc_from_body(b: &PmcBody) -> Result<Pmc, DocError> {
    let pairs: Vec<(usize, usize)> = b.matching.iter().map(|&[i, j]| (i, j)).collect();
    Pmc::new(b.genus, &pairs).map_err(invalid)
}

fn resolve_pmc(r: &PmcRef) -> Result<Pmc, DocError> {
    match r {
        PmcRef::Named(name) => Pmc::standard(name).ok_or_else(|| DocError::Schema(format!("unknown circle `{name}`"))),
        PmcRef::Inline(b) => pmc_from_body(b),
    }
}

fn idem_points(z: &Pmc, s: PairSet) -> Vec<u8> {
    let pairs = z.pairs();
    s.iter().map(|p| pairs[p].0).collect()
}

fn idem_from_points(z: &Pmc, pts: &[u8]) -> Result<PairSet, DocError> {
    let n = z.num_points() as u8;
    if let Some(&p) = pts.iter().find(|&&p| p == 0 || p > n) {
        return Err(DocError::Validation(format!("idempotent point {p} is not on the circle")));
    }
    Ok(PairSet::from_pairs(pts.iter().map(|&p| z.pair_of(p))))
}

fn elem(alg: &SurfaceAlgebra, text: &str) -> Result<Elem, DocError> {
    alg.parse_elem(text).map_err(invalid)
}

fn ensure_d2<E: std::fmt::Debug>(violations: Vec<E>) -> Result<(), DocError> {
    match violations.first() {
        None => Ok(()),
        Some(v) => Err(DocError::Validation(format!("d^2 != 0 ({} terms, first {v:?})", violations.len()))),
    }
}

fn to_wire(doc: &Document) -> Wire {
    match doc {
        Document::Pmc(z) => {
            let b = pmc_body(z);
            Wire::Pmc { genus: b.genus, matching: b.matching }
        }
        Document::Element(e) => Wire::Element {
            n: e.n(),
            terms: e
                .terms()
                .iter()
                .map(|d| DiagramDoc { n: d.n(), strands: d.strands().iter().map(|&(s, t)| [s, t]).collect() })
                .collect(),
        },
        Document::TypeD(m) => {
            let alg = m.algebra();
            let z = alg.pmc();
            Wire::TypeD {
                algebra: PmcRef::Inline(pmc_body(z)),
                generators: m
                    .generators()
                    .iter()
                    .map(|g| GenDoc { name: g.name.clone(), idempotent: idem_points(z, g.idempotent) })
                    .collect(),
                delta: m
                    .arrows()
                    .map(|(s, d, c)| DeltaDoc {
                        src: m.generators()[s].name.clone(),
                        coeff: alg.format_elem(c),
                        dst: m.generators()[d].name.clone(),
                        upower: None,
                    })
                    .collect(),
            }
        }
        Document::TypeDD(m) => {
            let (a1, a2) = m.algebras();
            let (z1, z2) = (a1.pmc(), a2.pmc());
            Wire::TypeDD {
                algebras: [PmcRef::Inline(pmc_body(z1)), PmcRef::Inline(pmc_body(z2))],
                generators: m
                    .generators()
                    .iter()
                    .map(|g| GenDoc {
                        name: g.name.clone(),
                        idempotent: [idem_points(z1, g.idempotent.0), idem_points(z2, g.idempotent.1)],
                    })
                    .collect(),
                delta: m
                    .arrows()
                    .map(|(s, d, c)| DeltaDoc {
                        src: m.generators()[s].name.clone(),
                        coeff: c.terms().iter().map(|&(l, r)| [a1.label(l), a2.label(r)]).collect(),
                        dst: m.generators()[d].name.clone(),
                        upower: None,
                    })
                    .collect(),
            }
        }
        Document::UTypeD(m) => {
            let alg = &m.ring().0;
            let z = alg.pmc();
            let mut delta = Vec::new();
            for (s, d, c) in m.arrows() {
                let mut by_power: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
                for &(b, p) in c.terms() {
                    by_power.entry(p).or_default().push(b);
                }
                for (p, bs) in by_power {
                    delta.push(DeltaDoc {
                        src: m.generators()[s].name.clone(),
                        coeff: alg.format_elem(&Elem::from_indices(bs)),
                        dst: m.generators()[d].name.clone(),
                        upower: Some(p),
                    });
                }
            }
            Wire::UTypeD {
                algebra: PmcRef::Inline(pmc_body(z)),
                generators: m
                    .generators()
                    .iter()
                    .map(|g| GenDoc { name: g.name.clone(), idempotent: idem_points(z, g.idempotent) })
                    .collect(),
                delta,
            }
        }
        Document::Cfk(c) => Wire::Cfk {
            generators: c
                .generators()
                .iter()
                .map(|g| CfkGenDoc { name: g.name.clone(), alexander: g.alexander, parity: g.parity.map(Parity::sign) })
                .collect(),
            differential: c
                .entries()
                .into_iter()
                .map(|e| CfkEntryDoc { src: c.name(e.src).into(), upower: e.upower, dst: c.name(e.dst).into() })
                .collect(),
        },
        Document::F2U(c) => Wire::F2U {
            generators: c.names().to_vec(),
            gradings: c.gradings().map(<[i64]>::to_vec),
            entries: c
                .entries()
                .map(|(s, d, p)| PolyEntryDoc { src: c.names()[s].clone(), dst: c.names()[d].clone(), poly: p.exponents() })
                .collect(),
        },
        Document::Homology(h) => Wire::Homology {
            free_rank: h.free_rank,
            free_gradings: h.free_gradings.clone(),
            torsion: h.torsion.iter().map(|t| TorsionDoc { exponent: t.exponent, grading: t.grading }).collect(),
            other_torsion: h.other_torsion.iter().map(Poly::exponents).collect(),
        },
    }
}

fn gen_index(names: &BTreeMap<&str, usize>, n: &str) -> Result<usize, DocError> {
    names.get(n).copied().ok_or_else(|| DocError::Validation(format!("unknown generator `{n}`")))
}

fn from_wire(w: Wire) -> Result<Document, DocError> {
    Ok(match w {
        Wire::Pmc { genus, matching } => Document::Pmc(pmc_from_body(&PmcBody { genus, matching })?),
        Wire::Element { n, terms } => {
            let ds = terms
                .into_iter()
                .map(|d| StrandDiagram::new(d.n, d.strands.into_iter().map(|[s, t]| (s, t)).collect()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(invalid)?;
            Document::Element(AlgebraElement::from_terms(n, ds).map_err(invalid)?)
        }
        Wire::TypeD { algebra: a, generators, delta } => {
            let alg = algebra(&resolve_pmc(&a)?);
            let mut m = TypeD::new(Single(alg.clone()));
            for g in generators {
                let i = idem_from_points(alg.pmc(), &g.idempotent)?;
                m.add_generator(g.name, i).map_err(invalid)?;
            }
            for d in delta {
                if d.upower.is_some() {
                    return Err(DocError::Schema("`upower` in a type D document".into()));
                }
                m.add_arrow_by_name(&d.src, &d.dst, elem(&alg, &d.coeff)?).map_err(invalid)?;
            }
            ensure_d2(m.verify_d2())?;
            Document::TypeD(m)
        }
        Wire::TypeDD { algebras: [l, r], generators, delta } => {
            let (a1, a2): (Arc<SurfaceAlgebra>, Arc<SurfaceAlgebra>) = (algebra(&resolve_pmc(&l)?), algebra(&resolve_pmc(&r)?));
            let mut m = TypeDD::new(Pair(a1.clone(), a2.clone()));
            for g in generators {
                let i = (idem_from_points(a1.pmc(), &g.idempotent[0])?, idem_from_points(a2.pmc(), &g.idempotent[1])?);
                m.add_generator(g.name, i).map_err(invalid)?;
            }
            for d in delta {
                if d.upower.is_some() {
                    return Err(DocError::Schema("`upower` in a type DD document".into()));
                }
                let terms = d
                    .coeff
                    .iter()
                    .map(|[x, y]| Ok((a1.by_label(x).map_err(invalid)?, a2.by_label(y).map_err(invalid)?)))
                    .collect::<Result<Vec<_>, DocError>>()?;
                m.add_arrow_by_name(&d.src, &d.dst, TensorElem::from_terms(terms)).map_err(invalid)?;
            }
            ensure_d2(m.verify_d2())?;
            Document::TypeDD(m)
        }
        Wire::UTypeD { algebra: a, generators, delta } => {
            let alg = algebra(&resolve_pmc(&a)?);
            let mut m = UTypeD::new(WithU(alg.clone()));
            for g in generators {
                let i = idem_from_points(alg.pmc(), &g.idempotent)?;
                m.add_generator(g.name, i).map_err(invalid)?;
            }
            for d in delta {
                let e = UElem::with_power(&elem(&alg, &d.coeff)?, d.upower.unwrap_or(0));
                m.add_arrow_by_name(&d.src, &d.dst, e).map_err(invalid)?;
            }
            ensure_d2(m.verify_d2())?;
            Document::UTypeD(m)
        }
        Wire::Cfk { generators, differential } => {
            let gens = generators
                .into_iter()
                .map(|g| {
                    let parity = match g.parity {
                        None => None,
                        Some(p) => Some(
                            Parity::from_sign(p).ok_or_else(|| DocError::Schema(format!("parity {p} is not +1 or -1")))?,
                        ),
                    };
                    Ok(CfkGenerator { name: g.name, alexander: g.alexander, parity })
                })
                .collect::<Result<Vec<_>, DocError>>()?;
            let mut c = CfkComplex::new(gens).map_err(invalid)?;
            for e in differential {
                c.add_entry_by_name(&e.src, e.upower, &e.dst).map_err(invalid)?;
            }
            c.validate().map_err(invalid)?;
            Document::Cfk(c)
        }
        Wire::F2U { generators, gradings, entries } => {
            let mut c = match gradings {
                Some(g) => F2UComplex::with_gradings(generators.clone(), g).map_err(invalid)?,
                None => F2UComplex::new(generators.clone()),
            };
            let names: BTreeMap<&str, usize> = generators.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
            if names.len() != generators.len() {
                return Err(DocError::Validation("duplicate generator names".into()));
            }
            for e in entries {
                let (s, d) = (gen_index(&names, &e.src)?, gen_index(&names, &e.dst)?);
                c.add_entry(s, d, &Poly::from_exponents(e.poly)).map_err(invalid)?;
            }
            c.check().map_err(invalid)?;
            Document::F2U(c)
        }
        Wire::Homology { free_rank, free_gradings, torsion, other_torsion } => Document::Homology(F2UDecomposition {
            free_rank,
            free_gradings,
            torsion: torsion.into_iter().map(|t| Torsion { exponent: t.exponent, grading: t.grading }).collect(),
            other_torsion: other_torsion.into_iter().map(Poly::from_exponents).collect(),
        }),
    })
}

/// Pretty JSON with keys in sorted order.
pub fn to_json(doc: &Document) -> String {
    let v: Value = serde_json::to_value(to_wire(doc)).expect("documents serialize");
    serde_json::to_string_pretty(&v).expect("values serialize")
}

/// Parses a JSON document, or a catalog reference such as
/// `catalog:h_minus1` (quoted or bare).
pub fn parse_document(text: &str) -> Result<Document, DocError> {
    let t = text.trim();
    if !t.starts_with('{') && !t.starts_with('"') {
        return catalog_ref(t);
    }
    let v: Value = serde_json::from_str(t).map_err(|e| DocError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if let Value::String(s) = &v {
        return catalog_ref(s);
    }
    match v.get("schema") {
        Some(Value::String(_)) => {}
        Some(_) => return Err(DocError::Schema("`schema` must be a string".into())),
        None => return Err(DocError::Schema("missing `schema` field".into())),
    }
    let w: Wire = serde_json::from_value(v).map_err(|e| DocError::Schema(e.to_string()))?;
    from_wire(w)
}

/// Names accepted by [`catalog_ref`], for `catalog dump` listings.
pub const CATALOG_NAMES: &[&str] = &[
    "torus",
    "split:<k>",
    "antipodal:<k>",
    "h_inf",
    "h_zero",
    "h_minus1",
    "handlebody:<k>",
    "dd_id:<circle>",
    "twist:<Tm|Tm'|Tl|Tl'>",
    "underslide:<circle>:<b1>:<c1>",
    "unknot",
    "trefoil",
    "figure8",
    "cable21",
];

pub fn catalog_ref(name: &str) -> Result<Document, DocError> {
    let name = name.strip_prefix("catalog:").unwrap_or(name);
    let unknown = || DocError::Schema(format!("unknown catalog entry `{name}`"));
    let genus = |k: &str| k.parse::<usize>().map_err(|_| unknown());
    if let Some(z) = Pmc::standard(name) {
        return Ok(Document::Pmc(z));
    }
    if let Some(c) = CfkComplex::builtin(name) {
        return Ok(Document::Cfk(c));
    }
    Ok(match name {
        "h_inf" => Document::TypeD(h_infinity()),
        "h_zero" => Document::TypeD(h_zero()),
        "h_minus1" => Document::TypeD(h_minus_one()),
        "cable21" => Document::UTypeD(cable21()),
        _ => {
            let (head, rest) = name.split_once(':').ok_or_else(unknown)?;
            match head {
                "handlebody" => Document::TypeD(handlebody(genus(rest)?).map_err(invalid)?),
                "dd_id" => Document::TypeDD(dd_identity(&Pmc::standard(rest).ok_or_else(unknown)?)),
                "twist" => Document::TypeDD(dehn_twist_dd(rest.parse::<Twist>().map_err(invalid)?)),
                "underslide" => {
                    let mut parts = rest.rsplitn(3, ':');
                    let (c1, b1) = (parts.next().ok_or_else(unknown)?, parts.next().ok_or_else(unknown)?);
                    let circle = parts.next().ok_or_else(unknown)?;
                    let z = Pmc::standard(circle).ok_or_else(unknown)?;
                    let p = |s: &str| s.parse::<u8>().map_err(|_| unknown());
                    let slide = make_arcslide(&z, p(b1)?, p(c1)?).map_err(invalid)?;
                    Document::TypeDD(underslide_dd(&slide).map_err(invalid)?)
                }
                _ => return Err(unknown()),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip(d: Document) {
        let text = to_json(&d);
        assert_eq!(parse_document(&text).unwrap(), d, "{text}");
        assert_eq!(to_json(&parse_document(&text).unwrap()), text);
    }

    #[test]
    fn torus_from_inline_matching() {
        let d = parse_document(r#"{"schema":"bhf.pmc/1","genus":1,"matching":[[1,3],[2,4]]}"#).unwrap();
        assert_eq!(d, Document::Pmc(Pmc::torus()));
    }

    #[test]
    fn fixed_point_is_a_validation_error() {
        let e = parse_document(r#"{"schema":"bhf.pmc/1","genus":1,"matching":[[1,1]]}"#).unwrap_err();
        assert!(matches!(&e, DocError::Validation(m) if m.starts_with("FixedPoint")), "{e}");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_document("{\n  \"schema\": \"bhf.pmc/1\",\n  \"genus\": 1,,\n}").unwrap_err();
        assert!(matches!(e, DocError::Syntax { line: 3, .. }), "{e}");
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(parse_document(r#"{"genus":1}"#), Err(DocError::Schema(_))));
        assert!(matches!(parse_document(r#"{"schema":"bhf.nope/1"}"#), Err(DocError::Schema(_))));
        assert!(matches!(parse_document("catalog:nope"), Err(DocError::Schema(_))));
    }

    #[test]
    fn catalog_reference_is_h_minus_one() {
        assert_eq!(parse_document("\"catalog:h_minus1\"").unwrap(), Document::TypeD(h_minus_one()));
        assert_eq!(parse_document("catalog:h_minus1").unwrap(), Document::TypeD(h_minus_one()));
    }

    #[test]
    fn module_with_bad_d2_rejected() {
        let text = r#"{"schema":"bhf.type-d/1","algebra":"torus",
            "generators":[{"name":"x","idempotent":[1]},{"name":"y","idempotent":[2]}],
            "delta":[{"src":"x","coeff":"rho1","dst":"y"},{"src":"y","coeff":"rho2","dst":"x"}]}"#;
        assert!(matches!(parse_document(text), Err(DocError::Validation(_))));
    }

    #[test]
    fn documents_round_trip() {
        let names = [
            "torus",
            "antipodal:2",
            "h_inf",
            "h_zero",
            "h_minus1",
            "handlebody:2",
            "dd_id:torus",
            "dd_id:split:2",
            "twist:Tm'",
            "underslide:split:2:3:2",
            "trefoil",
            "figure8",
            "unknot",
            "cable21",
        ];
        for n in names {
            round_trip(catalog_ref(n).unwrap());
        }
        let alg = algebra(&Pmc::torus());
        round_trip(Document::Element(alg.to_strands(&alg.parse_elem("rho1 + rho123").unwrap())));
        let mut c = F2UComplex::with_gradings(vec!["a".into(), "b".into()], vec![0, 1]).unwrap();
        c.add_entry(0, 1, &Poly::monomial(1)).unwrap();
        round_trip(Document::Homology(c.homology().unwrap()));
        round_trip(Document::F2U(c));
    }
}
