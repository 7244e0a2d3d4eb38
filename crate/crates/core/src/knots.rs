//! Knot Floer complexes `CFK⁻` over F2[U], their invariants, the passage to
//! bordered modules of knot complements, and satellites.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::dmod::{DmodError, TypeD, UElem, UTypeD, WithU};
use crate::f2u::{F2UComplex, F2UDecomposition, F2UError, Poly};
use crate::pairing::{mor_d_ud, MorUComplex, PairingError};
use crate::pmc::{PairSet, Pmc};
use crate::surface::algebra;

const IOTA0: PairSet = PairSet(1);
const IOTA1: PairSet = PairSet(2);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KnotError {
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("entry {src} -> U^{upower} {dst} raises the Alexander filtration")]
    FiltrationViolation { src: String, upower: u32, dst: String },
    #[error("entry {src} -> {dst} joins generators of equal parity")]
    ParityViolation { src: String, dst: String },
    #[error("d^2 != 0 ({0} nonzero entries)")]
    NotAComplex(usize),
    #[error("entry {src} -> {dst} keeps both the Alexander grading and the U power")]
    NotReduced { src: String, dst: String },
    #[error("basis is not {0} simplified")]
    NotSimplified(&'static str),
    #[error("greedy simplification stalled with {} excess arrows", .0.remaining)]
    CannotSimplify(Box<SimplifyFailure>),
    #[error("generator `{0}` has no parity")]
    ParityMissing(String),
    #[error("Euler characteristic {0} cannot be normalized")]
    NotSymmetric(String),
    #[error("homology has no free summand")]
    NoFreeSummand,
    #[error("basis change {0} is not filtered")]
    BadMove(String),
    #[error(transparent)]
    F2U(#[from] F2UError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Module(#[from] DmodError),
}

/// Maslov grading mod 2, written `+1` / `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    pub fn sign(self) -> i64 {
        match self {
            Parity::Plus => 1,
            Parity::Minus => -1,
        }
    }

    pub fn from_sign(s: i64) -> Option<Parity> {
        match s {
            1 => Some(Parity::Plus),
            -1 => Some(Parity::Minus),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfkGenerator {
    pub name: String,
    pub alexander: i64,
    pub parity: Option<Parity>,
}

/// One monomial `src -> U^upower dst` of the differential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Entry {
    pub src: usize,
    pub upower: u32,
    pub dst: usize,
}

/// A free F2[U] complex with an Alexander filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfkComplex {
    gens: Vec<CfkGenerator>,
    diff: BTreeMap<(usize, usize), Poly>,
}

/// An arrow between basis elements; `length` is the drop in `A` for
/// vertical arrows and the power of `U` for horizontal ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub src: usize,
    pub dst: usize,
    pub length: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ArrowDecomposition {
    pub vertical: Vec<Arrow>,
    pub horizontal: Vec<Arrow>,
    pub diagonal: Vec<Entry>,
}

impl ArrowDecomposition {
    pub fn len(&self) -> usize {
        self.vertical.len() + self.horizontal.len() + self.diagonal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Arrows beyond one per head and per tail, for `(vertical, horizontal)`.
    pub fn excess(&self, n: usize) -> (usize, usize) {
        let count = |arrows: &[Arrow]| {
            let (mut out, mut inc) = (vec![0usize; n], vec![0usize; n]);
            for a in arrows {
                out[a.src] += 1;
                inc[a.dst] += 1;
            }
            out.iter().chain(&inc).map(|&c| c.saturating_sub(1)).sum()
        };
        (count(&self.vertical), count(&self.horizontal))
    }

    fn touches(arrows: &[Arrow], g: usize) -> bool {
        arrows.iter().any(|a| a.src == g || a.dst == g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplifiedBasisReport {
    /// Row `i`: the new `i`-th basis element in terms of the old basis.
    pub change: Vec<Vec<Poly>>,
    pub vertically_simplified: bool,
    pub horizontally_simplified: bool,
    /// Generator with no vertical arrows.
    pub xi0: Option<String>,
    /// Generator with no horizontal arrows.
    pub eta0: Option<String>,
}

/// Best single-direction bases when no basis is simplified both ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplifyFailure {
    pub vertical: CfkComplex,
    pub horizontal: CfkComplex,
    pub remaining: usize,
}

/// A Laurent polynomial in `T` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Laurent(pub BTreeMap<i64, i64>);

impl Laurent {
    pub fn coeff(&self, k: i64) -> i64 {
        self.0.get(&k).copied().unwrap_or(0)
    }

    pub fn eval_one(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.0.iter().all(|(&k, &c)| self.coeff(-k) == c)
    }

    fn add_term(&mut self, k: i64, c: i64) {
        let e = self.0.entry(k).or_insert(0);
        *e += c;
        if *e == 0 {
            self.0.remove(&k);
        }
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (&k, &c)) in self.0.iter().rev().enumerate() {
            let mag = c.abs();
            match (i, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let var = match k {
                0 => String::new(),
                1 => "T".into(),
                _ => format!("T^{k}"),
            };
            if mag != 1 || k == 0 {
                write!(f, "{mag}")?;
            }
            f.write_str(&var)?;
        }
        Ok(())
    }
}

impl CfkComplex {
    pub fn new(gens: Vec<CfkGenerator>) -> Result<CfkComplex, KnotError> {
        let mut seen = BTreeSet::new();
        for g in &gens {
            if !seen.insert(g.name.as_str()) {
                return Err(KnotError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(CfkComplex { gens, diff: BTreeMap::new() })
    }

    /// Generators from `(name, A, parity sign)`.
    pub fn from_table(gens: &[(&str, i64, i64)], entries: &[(&str, u32, &str)]) -> Result<CfkComplex, KnotError> {
        let gens = gens
            .iter()
            .map(|&(n, a, p)| CfkGenerator { name: n.into(), alexander: a, parity: Parity::from_sign(p) })
            .collect();
        let mut c = CfkComplex::new(gens)?;
        for &(s, m, d) in entries {
            c.add_entry_by_name(s, m, d)?;
        }
        Ok(c)
    }

    pub fn generators(&self) -> &[CfkGenerator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.gens[i].name
    }

    pub fn index(&self, name: &str) -> Result<usize, KnotError> {
        self.gens.iter().position(|g| g.name == name).ok_or_else(|| KnotError::UnknownGenerator(name.into()))
    }

    /// Toggles the monomial `src -> U^upower dst`.
    pub fn add_entry(&mut self, src: usize, upower: u32, dst: usize) {
        let p = self.diff.entry((src, dst)).or_default();
        p.add_assign(&Poly::monomial(upower));
        if p.is_zero() {
            self.diff.remove(&(src, dst));
        }
    }

    pub fn add_entry_by_name(&mut self, src: &str, upower: u32, dst: &str) -> Result<(), KnotError> {
        let (s, d) = (self.index(src)?, self.index(dst)?);
        self.add_entry(s, upower, d);
        Ok(())
    }

    pub fn entries(&self) -> Vec<Entry> {
        self.diff
            .iter()
            .flat_map(|(&(src, dst), p)| p.exponents().into_iter().map(move |upower| Entry { src, upower, dst }))
            .collect()
    }

    /// All violated invariants: filtration, parity, `d² = 0`.
    pub fn violations(&self) -> Vec<KnotError> {
        let mut out = Vec::new();
        for e in self.entries() {
            let (s, d) = (&self.gens[e.src], &self.gens[e.dst]);
            if d.alexander - i64::from(e.upower) > s.alexander {
                out.push(KnotError::FiltrationViolation { src: s.name.clone(), upower: e.upower, dst: d.name.clone() });
            }
            if let (Some(p), Some(q)) = (s.parity, d.parity) {
                if p == q {
                    out.push(KnotError::ParityViolation { src: s.name.clone(), dst: d.name.clone() });
                }
            }
        }
        match self.to_f2u().d_squared_defect() {
            0 => {}
            k => out.push(KnotError::NotAComplex(k)),
        }
        out
    }

    pub fn validate(&self) -> Result<(), KnotError> {
        match self.violations().into_iter().next() {
            None => Ok(()),
            Some(e) => Err(e),
        }
    }

    fn names(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.name.clone()).collect()
    }

    /// The full complex, ungraded.
    pub fn to_f2u(&self) -> F2UComplex {
        let mut c = F2UComplex::new(self.names());
        for (&(s, d), p) in &self.diff {
            c.add_entry(s, d, p).expect("indices in range");
        }
        c
    }

    /// The associated graded complex `gCFK⁻`: the Alexander-homogeneous
    /// part of the differential, graded by `A` with `U` of degree `-1`.
    pub fn graded(&self) -> F2UComplex {
        let a: Vec<i64> = self.gens.iter().map(|g| g.alexander).collect();
        let mut c = F2UComplex::with_gradings(self.names(), a.clone()).expect("one grading per generator");
        for e in self.entries() {
            if a[e.dst] - i64::from(e.upower) == a[e.src] {
                c.add_entry(e.src, e.dst, &Poly::monomial(e.upower)).expect("indices in range");
            }
        }
        c
    }

    pub fn is_reduced(&self) -> bool {
        self.first_unreduced().is_none()
    }

    fn first_unreduced(&self) -> Option<Entry> {
        self.entries().into_iter().find(|e| e.upower == 0 && self.gens[e.src].alexander == self.gens[e.dst].alexander)
    }

    pub fn classify_arrows(&self) -> Result<ArrowDecomposition, KnotError> {
        if let Some(e) = self.first_unreduced() {
            return Err(KnotError::NotReduced { src: self.name(e.src).into(), dst: self.name(e.dst).into() });
        }
        let mut out = ArrowDecomposition::default();
        for e in self.entries() {
            let (a_src, a_dst) = (self.gens[e.src].alexander, self.gens[e.dst].alexander);
            if e.upower == 0 {
                let length = (a_src - a_dst) as u32;
                out.vertical.push(Arrow { src: e.src, dst: e.dst, length });
            } else if a_dst - i64::from(e.upower) == a_src {
                out.horizontal.push(Arrow { src: e.src, dst: e.dst, length: e.upower });
            } else {
                out.diagonal.push(e);
            }
        }
        Ok(out)
    }

    /// Replaces basis element `i` by `ξ_i + U^k ξ_j`. Allowed when the new
    /// term sits no higher in the filtration and parities agree.
    pub fn add_multiple(&self, i: usize, j: usize, k: u32) -> Result<CfkComplex, KnotError> {
        let (gi, gj) = (&self.gens[i], &self.gens[j]);
        let parity_ok = match (gi.parity, gj.parity) {
            (Some(p), Some(q)) => p == q,
            _ => true,
        };
        if i == j || gj.alexander - i64::from(k) > gi.alexander || !parity_ok {
            return Err(KnotError::BadMove(format!("{} += U^{k} {}", gi.name, gj.name)));
        }
        // D' = P D P^{-1}, P = 1 + U^k E_ij: row i += U^k row j, then column j += U^k column i
        let mut diff = self.diff.clone();
        let row_j: Vec<(usize, Poly)> =
            self.diff.range((j, 0)..(j + 1, 0)).map(|(&(_, t), p)| (t, p.shl(k))).collect();
        for (t, p) in row_j {
            toggle_poly(&mut diff, (i, t), &p);
        }
        let col_i: Vec<(usize, Poly)> =
            diff.iter().filter(|(&(_, t), _)| t == i).map(|(&(s, _), p)| (s, p.shl(k))).collect();
        for (s, p) in col_i {
            toggle_poly(&mut diff, (s, j), &p);
        }
        Ok(CfkComplex { gens: self.gens.clone(), diff })
    }

    /// Hill-climbs on elementary filtered moves until `score` is zero.
    fn greedy(
        &self,
        score: impl Fn(&ArrowDecomposition, usize) -> usize,
    ) -> Result<(CfkComplex, Vec<Vec<Poly>>, usize), KnotError> {
        let n = self.len();
        let mut cur = self.clone();
        let mut change: Vec<Vec<Poly>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { Poly::one() } else { Poly::zero() }).collect()).collect();
        let mut current = score(&cur.classify_arrows()?, n);
        // homogeneous moves first, then by U power
        let mut moves: Vec<(i64, u32, usize, usize)> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let (ai, aj) = (self.gens[i].alexander, self.gens[j].alexander);
                let k = (aj - ai).max(0) as u32;
                moves.push(((aj - i64::from(k) - ai).abs(), k, i, j));
            }
        }
        moves.sort_by(|x, y| (x.0, x.1, self.name(x.2), self.name(x.3)).cmp(&(y.0, y.1, self.name(y.2), self.name(y.3))));
        while current > 0 {
            let mut best: Option<(usize, CfkComplex, usize, usize, u32)> = None;
            for &(_, k, i, j) in &moves {
                let Ok(next) = cur.add_multiple(i, j, k) else { continue };
                let Ok(dec) = next.classify_arrows() else { continue };
                let s = score(&dec, n);
                if s < best.as_ref().map_or(current, |b| b.0) {
                    best = Some((s, next, i, j, k));
                }
            }
            let Some((s, next, i, j, k)) = best else { break };
            let row_j: Vec<Poly> = change[j].iter().map(|p| p.shl(k)).collect();
            for (c, p) in change[i].iter_mut().zip(row_j) {
                c.add_assign(&p);
            }
            cur = next;
            cur.gens[i].name.push('\'');
            current = s;
        }
        Ok((cur, change, current))
    }

    /// Looks for a basis that is both vertically and horizontally simplified.
    pub fn simplify_basis(&self) -> Result<(CfkComplex, SimplifiedBasisReport), KnotError> {
        let (c, change, remaining) = self.greedy(|d, n| {
            let (v, h) = d.excess(n);
            v + h
        })?;
        if remaining > 0 {
            let (vertical, _, _) = self.greedy(|d, n| d.excess(n).0)?;
            let (horizontal, _, _) = self.greedy(|d, n| d.excess(n).1)?;
            return Err(KnotError::CannotSimplify(Box::new(SimplifyFailure { vertical, horizontal, remaining })));
        }
        let (xi0, eta0) = c.distinguished()?;
        let report = SimplifiedBasisReport {
            change,
            vertically_simplified: true,
            horizontally_simplified: true,
            xi0: xi0.map(|i| c.name(i).to_string()),
            eta0: eta0.map(|i| c.name(i).to_string()),
        };
        Ok((c, report))
    }

    /// Least-named generators with no vertical, respectively no
    /// horizontal, arrows.
    fn distinguished(&self) -> Result<(Option<usize>, Option<usize>), KnotError> {
        let d = self.classify_arrows()?;
        let least = |arrows: &[Arrow]| {
            (0..self.len()).filter(|&g| !ArrowDecomposition::touches(arrows, g)).min_by_key(|&g| self.name(g))
        };
        Ok((least(&d.vertical), least(&d.horizontal)))
    }

    /// `τ = -max{grading of a free summand of H(gCFK⁻)}`.
    pub fn tau(&self) -> Result<i64, KnotError> {
        self.validate()?;
        let h = self.graded().homology()?;
        h.free_gradings.and_then(|g| g.into_iter().max()).map(|g| -g).ok_or(KnotError::NoFreeSummand)
    }

    /// `Σ ± T^A` over generators, normalized to be symmetric with value 1 at `T = 1`.
    pub fn alexander_polynomial(&self) -> Result<Laurent, KnotError> {
        self.validate()?;
        // the Euler characteristic of each graded piece of the hat complex
        // only sees the chain groups
        let mut poly = Laurent::default();
        for g in &self.gens {
            let p = g.parity.ok_or_else(|| KnotError::ParityMissing(g.name.clone()))?;
            poly.add_term(g.alexander, p.sign());
        }
        let sign = match poly.eval_one() {
            1 => 1,
            -1 => -1,
            _ => return Err(KnotError::NotSymmetric(poly.to_string())),
        };
        let poly = Laurent(poly.0.into_iter().map(|(k, c)| (k, sign * c)).collect());
        if !poly.is_symmetric() {
            return Err(KnotError::NotSymmetric(poly.to_string()));
        }
        Ok(poly)
    }

    /// The type D module of the `framing`-framed knot complement. The basis
    /// must already be simplified in both directions.
    pub fn cfk_to_cfd(&self, framing: i64) -> Result<TypeD, KnotError> {
        let d = self.classify_arrows()?;
        let (v, h) = d.excess(self.len());
        if v > 0 {
            return Err(KnotError::NotSimplified("vertically"));
        }
        if h > 0 {
            return Err(KnotError::NotSimplified("horizontally"));
        }
        let tau = self.tau()?;
        let (xi0, eta0) = self.distinguished()?;
        let (xi0, eta0) = (xi0.ok_or(KnotError::NotSimplified("vertically"))?, eta0.ok_or(KnotError::NotSimplified("horizontally"))?);

        let mut m = TypeD::new(crate::dmod::Single(algebra(&Pmc::torus())));
        for g in &self.gens {
            m.add_generator(g.name.clone(), IOTA0)?;
        }
        let chain = |m: &mut TypeD, tag: &str, len: u32| -> Result<Vec<String>, DmodError> {
            (1..=len)
                .map(|t| {
                    let name = format!("{tag}{t}");
                    m.add_generator(name.clone(), IOTA1)?;
                    Ok(name)
                })
                .collect()
        };
        for a in &d.vertical {
            let (x, y) = (self.name(a.src), self.name(a.dst));
            let k = chain(&mut m, &format!("kappa[{x}>{y}]"), a.length)?;
            m.arrow_labels(x, &k[0], "rho1")?;
            for w in k.windows(2) {
                m.arrow_labels(&w[1], &w[0], "rho23")?;
            }
            m.arrow_labels(y, k.last().expect("length >= 1"), "rho123")?;
        }
        for a in &d.horizontal {
            let (x, y) = (self.name(a.src), self.name(a.dst));
            let l = chain(&mut m, &format!("lambda[{x}>{y}]"), a.length)?;
            m.arrow_labels(x, &l[0], "rho3")?;
            for w in l.windows(2) {
                m.arrow_labels(&w[0], &w[1], "rho23")?;
            }
            m.arrow_labels(l.last().expect("length >= 1"), y, "rho2")?;
        }
        let (x, y) = (self.name(xi0), self.name(eta0));
        let len = (2 * tau - framing).unsigned_abs() as u32;
        let mu = chain(&mut m, "mu", len)?;
        match framing.cmp(&(2 * tau)) {
            std::cmp::Ordering::Less => {
                m.arrow_labels(x, &mu[0], "rho1")?;
                for w in mu.windows(2) {
                    m.arrow_labels(&w[1], &w[0], "rho23")?;
                }
                m.arrow_labels(y, &mu[mu.len() - 1], "rho3")?;
            }
            std::cmp::Ordering::Greater => {
                m.arrow_labels(x, &mu[0], "rho123")?;
                for w in mu.windows(2) {
                    m.arrow_labels(&w[0], &w[1], "rho23")?;
                }
                m.arrow_labels(&mu[mu.len() - 1], y, "rho2")?;
            }
            std::cmp::Ordering::Equal => m.arrow_labels(x, y, "rho12")?,
        }
        Ok(m)
    }

    /// `∂a = b`, `∂c = U b`; `A = 1, 0, -1`.
    pub fn trefoil() -> CfkComplex {
        CfkComplex::from_table(&[("a", 1, 1), ("b", 0, -1), ("c", -1, 1)], &[("a", 0, "b"), ("c", 1, "b")])
            .expect("fixture")
    }

    pub fn figure_eight() -> CfkComplex {
        CfkComplex::from_table(
            &[("a", 0, 1), ("b", 1, -1), ("c", -1, -1), ("d", 0, 1), ("e", 0, 1)],
            &[("a", 1, "b"), ("a", 0, "c"), ("b", 0, "d"), ("c", 1, "d"), ("e", 1, "b"), ("e", 0, "c")],
        )
        .expect("fixture")
    }

    pub fn unknot() -> CfkComplex {
        CfkComplex::from_table(&[("x", 0, 1)], &[]).expect("fixture")
    }

    /// Built-in knot by name: `unknot`, `trefoil`, `figure8`.
    pub fn builtin(name: &str) -> Option<CfkComplex> {
        match name {
            "unknot" => Some(CfkComplex::unknot()),
            "trefoil" => Some(CfkComplex::trefoil()),
            "figure8" => Some(CfkComplex::figure_eight()),
            _ => None,
        }
    }
}

fn toggle_poly(diff: &mut BTreeMap<(usize, usize), Poly>, key: (usize, usize), p: &Poly) {
    let e = diff.entry(key).or_default();
    e.add_assign(p);
    if e.is_zero() {
        diff.remove(&key);
    }
}

/// The `(2,1)` cable pattern in the solid torus, with `U` counting the
/// second basepoint.
pub fn cable21() -> UTypeD {
    let alg = algebra(&Pmc::torus());
    let mut m = UTypeD::new(WithU(alg.clone()));
    let e = |l: &str| alg.parse_elem(l).expect("torus label");
    let x = m.add_generator("x", IOTA1).expect("fixture");
    let y1 = m.add_generator("y1", IOTA0).expect("fixture");
    let y2 = m.add_generator("y2", IOTA0).expect("fixture");
    m.add_arrow(x, x, UElem::with_power(&e("rho23"), 2)).expect("fixture");
    m.add_arrow(y1, y2, UElem::with_power(&e("iota0"), 1)).expect("fixture");
    m.add_arrow(y1, x, UElem::with_power(&e("rho1"), 0)).expect("fixture");
    m.add_arrow(y2, x, UElem::with_power(&e("rho123"), 1)).expect("fixture");
    m
}

/// Pattern modules by name.
pub fn pattern(name: &str) -> Option<UTypeD> {
    (name == "cable21").then(cable21)
}

#[derive(Clone, Debug)]
pub struct Satellite {
    pub companion: TypeD,
    pub mor: MorUComplex,
    pub homology: F2UDecomposition,
    /// Rank after setting `U = 0`.
    pub hat_rank: usize,
}

/// `Mor(CFD(companion complement), pattern)` and its homology.
pub fn satellite(pattern: &UTypeD, companion: &CfkComplex, framing: i64) -> Result<Satellite, KnotError> {
    companion.validate()?;
    let (simplified, _) = companion.simplify_basis()?;
    let cfd = simplified.cfk_to_cfd(framing)?;
    let mor = mor_d_ud(&cfd, pattern)?;
    let homology = mor.complex.homology()?;
    let hat_rank = mor.complex.specialize_u0().homology_rank().map_err(PairingError::from)?;
    Ok(Satellite { companion: cfd, mor, homology, hat_rank })
}
