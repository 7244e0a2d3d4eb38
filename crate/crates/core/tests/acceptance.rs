//! One line per acceptance criterion; the test fails if any line does.

mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use bhf::catalog::{
    dd_identity, dehn_twist_dd, h_infinity, h_minus_one, h_zero, hf_genus1, lens_word, make_arcslide, solid_tori,
    underslide_dd, ArcSlide, Genus1Fixture, Twist, TwistWord,
};
use bhf::dmod::{Pair, TypeD, TypeDD};
use bhf::knots::{cable21, satellite, CfkComplex};
use bhf::pairing::{mor_d_d, mor_dd_d, Side};
use bhf::pmc::{PairSet, Pmc};
use bhf::surface::{algebra, Elem};
use common::{random_element, random_f2u};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Path algebra of the quiver `ι0 ⇉ ι1 → ι0` (arrows 1, 3 and 2) modulo
/// `ρ2ρ1 = ρ3ρ2 = 0`: a path is a run of consecutive arrows.
fn quiver_product(a: &str, b: &str) -> Option<String> {
    let run = |s: &str| -> (Option<(u8, u8)>, u8) {
        match s {
            "iota0" => (None, 0),
            "iota1" => (None, 1),
            _ => {
                let d: Vec<u8> = s.trim_start_matches("rho").bytes().map(|c| c - b'0').collect();
                (Some((d[0], *d.last().unwrap())), 0)
            }
        }
    };
    let start = |s: &str| match run(s) {
        (None, i) => i,
        (Some((f, _)), _) => u8::from(f == 2),
    };
    let end = |s: &str| match run(s) {
        (None, i) => i,
        (Some((_, l)), _) => u8::from(l != 2),
    };
    if end(a) != start(b) {
        return None;
    }
    match (run(a).0, run(b).0) {
        (None, _) => Some(b.to_string()),
        (_, None) => Some(a.to_string()),
        (Some((f, l)), Some((g, h))) if g == l + 1 => {
            Some(format!("rho{}", (f..=h).map(|d| d.to_string()).collect::<String>()))
        }
        _ => None,
    }
}

fn c1_torus_algebra() -> Outcome {
    let alg = algebra(&Pmc::torus());
    let summand = alg.summand_basis(0);
    ensure(summand.len() == 8, format!("dim {}", summand.len()))?;
    let labels = ["iota0", "iota1", "rho1", "rho2", "rho3", "rho12", "rho23", "rho123"];
    let idx: Vec<u32> = labels.iter().map(|l| alg.by_label(l).unwrap()).collect();
    let mut sorted = idx.clone();
    sorted.sort_unstable();
    let mut want = summand.clone();
    want.sort_unstable();
    ensure(sorted == want, "labels do not span the summand")?;
    for (i, a) in labels.iter().enumerate() {
        ensure(alg.diff(idx[i]).is_zero(), format!("d({a}) != 0"))?;
        for (j, b) in labels.iter().enumerate() {
            let got = alg.mul(idx[i], idx[j]);
            let expect = match quiver_product(a, b) {
                Some(p) => Elem::single(alg.by_label(&p).unwrap()),
                None => Elem::zero(),
            };
            ensure(got == expect, format!("{a}*{b}"))?;
        }
    }
    let (r1, r2, r3) = (alg.by_label("rho1").unwrap(), alg.by_label("rho2").unwrap(), alg.by_label("rho3").unwrap());
    ensure(alg.mul(r2, r1).is_zero() && alg.mul(r3, r2).is_zero(), "relations")?;
    Ok("dim 8, 64 products match the quiver algebra, d = 0".into())
}

fn c2_strand_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut violations = 0;
    let trials = 10_000;
    for t in 0..trials {
        let n = 1 + (t % 6) as u8;
        let (a, b, c) = (random_element(&mut rng, n, 3), random_element(&mut rng, n, 3), random_element(&mut rng, n, 3));
        let ab = a.multiply(&b).unwrap();
        violations += usize::from(!a.differential().differential().is_zero());
        let leibniz = a.differential().multiply(&b).unwrap().add(&a.multiply(&b.differential()).unwrap()).unwrap();
        violations += usize::from(ab.differential() != leibniz);
        violations += usize::from(ab.multiply(&c).unwrap() != a.multiply(&b.multiply(&c).unwrap()).unwrap());
    }
    let mut pairs = 0;
    for z in [Pmc::torus(), Pmc::split(2).unwrap(), Pmc::antipodal(2).unwrap()] {
        let alg = algebra(&z);
        let dim = alg.dim() as u32;
        let step = (dim / 60).max(1);
        for a in (0..dim).step_by(step as usize) {
            let sa = alg.to_strands(&Elem::single(a));
            violations += usize::from(alg.decompose(&sa.differential()).ok() != Some(alg.diff(a)));
            for b in (0..dim).step_by(step as usize) {
                let sb = alg.to_strands(&Elem::single(b));
                let prod = sa.multiply(&sb).unwrap();
                violations += usize::from(alg.decompose(&prod).ok() != Some(alg.mul(a, b)));
                pairs += 1;
            }
        }
    }
    ensure(violations == 0, format!("{violations} violations"))?;
    Ok(format!("{trials} random triples in A(n), n <= 6; {pairs} products in A(Z) for k <= 2; 0 violations"))
}

fn c3_triangle() -> Outcome {
    let r = solid_tori().check().map_err(|e| e.to_string())?;
    ensure(r.short_exact(), format!("{r:?}"))?;
    Ok(format!("F2 dimensions {:?}, short exact", r.dims))
}

fn c4_pairing() -> Outcome {
    let rank = mor_d_d(&h_infinity(), &h_minus_one()).map_err(|e| e.to_string())?.homology_rank().map_err(|e| e.to_string())?;
    ensure(rank == 1, format!("rank {rank}"))?;
    Ok("rank 1".into())
}

fn reduced_action(b: &TypeDD, m: &TypeD) -> TypeD {
    mor_dd_d(b, m, Side::Left).unwrap().module.reduce()
}

fn tori() -> [TypeD; 3] {
    [h_infinity(), h_zero(), h_minus_one()]
}

fn c5_identity() -> Outcome {
    let z = Pmc::torus();
    let id = dd_identity(&z);
    let central = id.restrict(|(s, _)| s.len() == 1).sorted();
    let t = algebra(&z);
    let mut want = TypeDD::new(Pair(t.clone(), t));
    want.add_generator("I[1]", (PairSet(1), PairSet(1))).unwrap();
    want.add_generator("I[2]", (PairSet(2), PairSet(2))).unwrap();
    want.arrow_label_terms("I[1]", "I[2]", &[("rho1", "rho3"), ("rho3", "rho1"), ("rho123", "rho123")]).unwrap();
    want.arrow_label_terms("I[2]", "I[1]", &[("rho2", "rho2")]).unwrap();
    ensure(central == want, "central summand differs")?;
    for h in tori() {
        ensure(reduced_action(&id, &h).iso_check(&h).unwrap().is_some(), "Mor(DD(Id), H) not isomorphic to H")?;
    }
    for z in [Pmc::split(2).unwrap(), Pmc::antipodal(2).unwrap()] {
        ensure(dd_identity(&z).verify_d2().is_empty(), format!("d^2 on {z}"))?;
    }
    Ok("central summand exact; identity on 3 solid tori; d^2 = 0 at genus 2".into())
}

fn c6_twists() -> Outcome {
    for t in Twist::ALL {
        ensure(dehn_twist_dd(t).verify_d2().is_empty(), format!("d^2 for {t}"))?;
        for h in tori() {
            let back = reduced_action(&dehn_twist_dd(t.inverse()), &reduced_action(&dehn_twist_dd(t), &h));
            ensure(back.iso_check(&h).unwrap().is_some(), format!("{t} then inverse"))?;
        }
    }
    Ok("4 bimodules, 12 round trips".into())
}

fn c7_genus1() -> Outcome {
    let rank = |w: &TwistWord, f: &Genus1Fixture| hf_genus1(w, f).map_err(|e| e.to_string());
    let s3 = rank(&TwistWord::default(), &Genus1Fixture::sphere())?;
    ensure(s3 == 1, format!("S^3 rank {s3}"))?;
    let s2s1 = rank(&TwistWord::default(), &Genus1Fixture::default())?;
    ensure(s2s1 == 2, format!("S^2 x S^1 rank {s2s1}"))?;
    let mut lens = Vec::new();
    for p in 2..=7 {
        let r = rank(&lens_word(p), &Genus1Fixture::default())?;
        ensure(r == p, format!("L({p},1) rank {r}"))?;
        lens.push(r);
    }
    Ok(format!("S^3 1, S^2 x S^1 2, L(p,1) for p = 2..7: {lens:?}"))
}

fn c8_knots() -> Outcome {
    let (t, f) = (CfkComplex::trefoil(), CfkComplex::figure_eight());
    let (tt, tf) = (t.tau().map_err(|e| e.to_string())?, f.tau().map_err(|e| e.to_string())?);
    ensure(tt == -1 && tf == 0, format!("tau {tt}, {tf}"))?;
    let (at, af) = (t.alexander_polynomial().map_err(|e| e.to_string())?, f.alexander_polynomial().map_err(|e| e.to_string())?);
    ensure(at.to_string() == "T - 1 + T^-1", at.to_string())?;
    ensure(af.to_string() == "-T + 3 - T^-1", af.to_string())?;
    ensure(at.is_symmetric() && af.is_symmetric() && at.eval_one() == 1 && af.eval_one() == 1, "normalization")?;
    Ok(format!("tau -1 and 0; {at}; {af}"))
}

fn c9_cfk_to_cfd() -> Outcome {
    let u = CfkComplex::unknot().cfk_to_cfd(0).map_err(|e| e.to_string())?;
    ensure(u.iso_check(&h_zero()).unwrap().is_some(), "unknot at 0")?;
    let m = CfkComplex::trefoil().cfk_to_cfd(1).map_err(|e| e.to_string())?;
    let i0 = PairSet(1);
    let i1 = PairSet(2);
    let want = bhf::catalog::torus_module(
        &[("a", i0), ("b", i0), ("c", i0), ("k", i1), ("l", i1), ("m1", i1), ("m2", i1), ("m3", i1)],
        &[
            ("a", "k", "rho1"),
            ("b", "k", "rho123"),
            ("c", "l", "rho3"),
            ("l", "b", "rho2"),
            ("c", "m1", "rho123"),
            ("m1", "m2", "rho23"),
            ("m2", "m3", "rho23"),
            ("m3", "a", "rho2"),
        ],
    )
    .unwrap();
    ensure(m.iso_check(&want).unwrap().is_some(), "trefoil at 1")?;
    let mut checked = 0;
    for c in [CfkComplex::unknot(), CfkComplex::trefoil(), CfkComplex::figure_eight()] {
        let (c, _) = c.simplify_basis().map_err(|e| e.to_string())?;
        for n in -4..=4 {
            ensure(c.cfk_to_cfd(n).map_err(|e| e.to_string())?.verify_d2().is_empty(), format!("d^2 at n = {n}"))?;
            checked += 1;
        }
    }
    Ok(format!("unknot and trefoil fixtures match; {checked} framed modules pass d^2 = 0"))
}

fn c10_satellite() -> Outcome {
    let t0 = Instant::now();
    let s = satellite(&cable21(), &CfkComplex::trefoil(), -2).map_err(|e| e.to_string())?;
    let secs = t0.elapsed().as_secs_f64();
    ensure(s.mor.basis.len() == 29, format!("{} generators", s.mor.basis.len()))?;
    ensure(s.homology.free_rank == 1 && s.homology.exponents() == vec![2, 1], s.homology.to_string())?;
    ensure(s.hat_rank == 5, format!("U = 0 rank {}", s.hat_rank))?;
    ensure(secs < 1.0, format!("{secs:.2} s"))?;
    Ok(format!("29 generators, {}, U = 0 rank 5", s.homology))
}

fn c11_underslides() -> Outcome {
    let mut count = 0;
    for z in [Pmc::split(2).unwrap(), Pmc::antipodal(2).unwrap()] {
        for s in ArcSlide::underslides(&z) {
            let m = underslide_dd(&s).map_err(|e| e.to_string())?;
            ensure(m.verify_d2().is_empty(), format!("{} over {} on {z}", s.b1, s.c1))?;
            count += 1;
        }
    }
    for (b, c, t) in [(3, 2, Twist::Mu), (3, 4, Twist::MuInv), (2, 1, Twist::Lambda), (2, 3, Twist::LambdaInv)] {
        let s = make_arcslide(&Pmc::torus(), b, c).map_err(|e| e.to_string())?;
        let m = underslide_dd(&s).map_err(|e| e.to_string())?.restrict(|(i, _)| i.len() == 1).reduce();
        ensure(m.iso_check(&dehn_twist_dd(t).reduce()).unwrap().is_some(), format!("{b} over {c} vs {t}"))?;
    }
    Ok(format!("{count} genus-2 underslides pass d^2 = 0; 4 genus-1 slides match twists"))
}

fn c12_snf() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let trials = 1000;
    let mut mismatches = 0;
    for _ in 0..trials {
        let (c, expected) = random_f2u(&mut rng, 8, 4);
        let h = c.homology().map_err(|e| e.to_string())?;
        mismatches += usize::from(h != expected);
        mismatches += (1..=6).filter(|&n| h.truncated_rank(n) != c.truncate(n).homology_rank().unwrap()).count();
    }
    ensure(mismatches == 0, format!("{mismatches} mismatches"))?;
    Ok(format!("{trials} random complexes, truncations 1..6, 0 mismatches"))
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        ("torus algebra", c1_torus_algebra),
        ("strand algebra properties", c2_strand_properties),
        ("surgery triangle", c3_triangle),
        ("pairing fixture", c4_pairing),
        ("DD identity", c5_identity),
        ("Dehn twists", c6_twists),
        ("genus-1 pipeline", c7_genus1),
        ("knot invariants", c8_knots),
        ("CFK to CFD", c9_cfk_to_cfd),
        ("satellite fixture", c10_satellite),
        ("underslides", c11_underslides),
        ("F2[U] normal form vs truncations", c12_snf),
    ];
    // the stdout handle is not captured by the harness, so the report shows on every run
    let mut out = std::io::stdout().lock();
    let start = Instant::now();
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => writeln!(out, "[PASS] {:>2}. {name} ({secs:.2} s): {detail}", i + 1).expect("stdout"),
            Err(why) => {
                writeln!(out, "[FAIL] {:>2}. {name} ({secs:.2} s): {why}", i + 1).expect("stdout");
                failed.push(i + 1);
            }
        }
    }
    let total = start.elapsed().as_secs_f64();
    writeln!(out, "total {total:.2} s").expect("stdout");
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
    assert!(total < 60.0, "took {total:.1} s");
}
