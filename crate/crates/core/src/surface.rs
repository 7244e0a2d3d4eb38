//! The surface algebra `A(Z)` of a pointed matched circle.
//!
//! Elements are stored in the basis `a(S,T,φ)`; every basis element keeps
//! its expansion as a sum of strand diagrams in `A(4k)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use thiserror::Error;

use crate::pmc::{Chord, ConnectedSum, PairSet, Pmc};
use crate::strand::{AlgebraElement, StrandDiagram};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("strand data is not M-admissible for this circle")]
    NotAdmissible,
    #[error("element is not in the surface algebra")]
    NotInAlgebra,
    #[error("chords in the set share a start pair or an end pair")]
    IncompatibleChordSet,
    #[error("ambient size {got} does not match the circle ({expected} points)")]
    AmbientMismatch { expected: usize, got: usize },
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
}

/// Index of a basis element `a(S,T,φ)` inside its algebra.
pub type BasisIdx = u32;

/// An F2-combination of basis elements, kept sorted and duplicate-free.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(Vec<BasisIdx>);

impl Elem {
    pub fn zero() -> Elem {
        Elem(Vec::new())
    }
    pub fn single(i: BasisIdx) -> Elem {
        Elem(vec![i])
    }
    /// Sums indices mod 2.
    pub fn from_indices(idx: impl IntoIterator<Item = BasisIdx>) -> Elem {
        let mut v: Vec<BasisIdx> = idx.into_iter().collect();
        v.sort_unstable();
        let mut out: Vec<BasisIdx> = Vec::with_capacity(v.len());
        for i in v {
            if out.last() == Some(&i) {
                out.pop();
            } else {
                out.push(i);
            }
        }
        Elem(out)
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn iter(&self) -> impl Iterator<Item = BasisIdx> + '_ {
        self.0.iter().copied()
    }
    pub fn indices(&self) -> &[BasisIdx] {
        &self.0
    }
    pub fn contains(&self, i: BasisIdx) -> bool {
        self.0.binary_search(&i).is_ok()
    }
    pub fn add(&self, other: &Elem) -> Elem {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Elem(out)
    }
    pub fn add_assign(&mut self, other: &Elem) {
        *self = self.add(other);
    }
    pub fn toggle(&mut self, i: BasisIdx) {
        match self.0.binary_search(&i) {
            Ok(p) => {
                self.0.remove(p);
            }
            Err(p) => self.0.insert(p, i),
        }
    }
}

/// One basis element `a(S,T,φ)`.
#[derive(Clone, Debug)]
pub struct BasisElement {
    /// Representative with every horizontal strand at the smaller point of its pair.
    pub canonical: StrandDiagram,
    /// All diagrams of the `a(·)` sum, sorted.
    pub expansion: Vec<StrandDiagram>,
    pub left: PairSet,
    pub right: PairSet,
    /// `|S|`, i.e. `k + i` for the summand `A(Z, i)`.
    pub weight: usize,
}

pub struct SurfaceAlgebra {
    pmc: Pmc,
    basis: Vec<BasisElement>,
    index: HashMap<StrandDiagram, BasisIdx>,
    idempotents: HashMap<PairSet, BasisIdx>,
    by_idem: HashMap<(PairSet, PairSet), Vec<BasisIdx>>,
    labels: HashMap<BasisIdx, &'static str>,
    mul_cache: RwLock<HashMap<(BasisIdx, BasisIdx), Elem>>,
    op_table: OnceLock<Vec<BasisIdx>>,
}

impl fmt::Debug for SurfaceAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SurfaceAlgebra({}, dim {})", self.pmc, self.basis.len())
    }
}

impl PartialEq for SurfaceAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.pmc == other.pmc
    }
}

impl Eq for SurfaceAlgebra {}

/// Named basis of `A(T², 0)` with the chord each non-idempotent comes from.
pub const TORUS_NAMES: [(&str, Option<(u8, u8)>); 8] = [
    ("iota0", None),
    ("iota1", None),
    ("rho1", Some((1, 2))),
    ("rho2", Some((2, 3))),
    ("rho3", Some((3, 4))),
    ("rho12", Some((1, 3))),
    ("rho23", Some((2, 4))),
    ("rho123", Some((1, 4))),
];

/// The shared, lazily built algebra of a circle.
pub fn algebra(pmc: &Pmc) -> Arc<SurfaceAlgebra> {
    static CACHE: OnceLock<Mutex<HashMap<Pmc, Arc<SurfaceAlgebra>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(a) = cache.lock().expect("algebra cache").get(pmc) {
        return a.clone();
    }
    let built = Arc::new(SurfaceAlgebra::build(pmc.clone()));
    cache.lock().expect("algebra cache").entry(pmc.clone()).or_insert(built).clone()
}

impl SurfaceAlgebra {
    fn build(pmc: Pmc) -> SurfaceAlgebra {
        let mut canon = Vec::new();
        for w in 0..=pmc.num_pairs() {
            enumerate_weight(&pmc, w, &mut canon);
        }
        canon.sort_by(|a: &StrandDiagram, b| (a.strands().len(), a).cmp(&(b.strands().len(), b)));
        let mut basis = Vec::with_capacity(canon.len());
        let mut index = HashMap::new();
        let mut idempotents = HashMap::new();
        let mut by_idem: HashMap<(PairSet, PairSet), Vec<BasisIdx>> = HashMap::new();
        for (i, c) in canon.into_iter().enumerate() {
            let i = i as BasisIdx;
            let left = pairs_of(&pmc, c.start_mask());
            let right = pairs_of(&pmc, c.end_mask());
            let expansion = expand(&pmc, &c);
            if c.is_idempotent() {
                idempotents.insert(left, i);
            }
            by_idem.entry((left, right)).or_default().push(i);
            index.insert(c.clone(), i);
            basis.push(BasisElement { weight: c.strands().len(), canonical: c, expansion, left, right });
        }
        let mut alg = SurfaceAlgebra {
            pmc,
            basis,
            index,
            idempotents,
            by_idem,
            labels: HashMap::new(),
            mul_cache: RwLock::new(HashMap::new()),
            op_table: OnceLock::new(),
        };
        if alg.pmc == Pmc::torus() {
            let mut labels = HashMap::new();
            for (name, chord) in TORUS_NAMES {
                let idx = match chord {
                    None => alg.idempotent(PairSet(if name == "iota0" { 1 } else { 2 })),
                    Some((s, t)) => {
                        let e = alg.chord_elem(Chord { start: s, end: t });
                        let found = e.iter().find(|&b| alg.basis[b as usize].weight == 1);
                        found.expect("torus chord")
                    }
                };
                labels.insert(idx, name);
            }
            alg.labels = labels;
        }
        alg
    }

    pub fn pmc(&self) -> &Pmc {
        &self.pmc
    }

    pub fn n(&self) -> u8 {
        self.pmc.num_points() as u8
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn get(&self, i: BasisIdx) -> &BasisElement {
        &self.basis[i as usize]
    }

    /// Basis of the summand `A(Z, i)`, i.e. weight `k + i`.
    pub fn summand_basis(&self, i: i64) -> Vec<BasisIdx> {
        let w = self.pmc.genus() as i64 + i;
        (0..self.basis.len() as BasisIdx).filter(|&b| self.basis[b as usize].weight as i64 == w).collect()
    }

    /// Basis elements `a` with `I(left)·a·I(right) = a`.
    pub fn corner(&self, left: PairSet, right: PairSet) -> &[BasisIdx] {
        self.by_idem.get(&(left, right)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The idempotent `I(s)` as a basis index.
    pub fn idempotent(&self, s: PairSet) -> BasisIdx {
        self.idempotents[&s]
    }

    pub fn is_idempotent(&self, i: BasisIdx) -> bool {
        self.basis[i as usize].canonical.is_idempotent()
    }

    /// All pair sets of a given size.
    pub fn pair_sets(&self, size: usize) -> Vec<PairSet> {
        let full = self.pmc.full_pair_set().0;
        (0..=full).map(PairSet).filter(|s| s.len() == size).collect()
    }

    /// The label of a basis element: a torus name when one applies, else strands.
    pub fn label(&self, i: BasisIdx) -> String {
        match self.labels.get(&i) {
            Some(name) => name.to_string(),
            None => self.basis[i as usize].canonical.to_string(),
        }
    }

    pub fn by_label(&self, label: &str) -> Result<BasisIdx, SurfaceError> {
        if let Some((&i, _)) = self.labels.iter().find(|(_, &n)| n == label) {
            return Ok(i);
        }
        (0..self.basis.len() as BasisIdx)
            .find(|&i| self.basis[i as usize].canonical.to_string() == label)
            .ok_or_else(|| SurfaceError::UnknownLabel(label.to_string()))
    }

    /// Parses `"rho1 + rho123"` style sums of labels.
    pub fn parse_elem(&self, text: &str) -> Result<Elem, SurfaceError> {
        let text = text.trim();
        if text == "0" {
            return Ok(Elem::zero());
        }
        let mut idx = Vec::new();
        for part in text.split('+') {
            idx.push(self.by_label(part.trim())?);
        }
        Ok(Elem::from_indices(idx))
    }

    pub fn format_elem(&self, e: &Elem) -> String {
        if e.is_zero() {
            return "0".into();
        }
        e.iter().map(|i| self.label(i)).collect::<Vec<_>>().join(" + ")
    }

    /// Canonical representative of the class of `d`, if `d` is admissible.
    pub fn canonicalize(&self, d: &StrandDiagram) -> Option<StrandDiagram> {
        canonicalize(&self.pmc, d)
    }

    /// Expands `a(S,T,φ)` for an admissible diagram.
    pub fn a_expand(&self, d: &StrandDiagram) -> Result<AlgebraElement, SurfaceError> {
        self.check_n(d.n())?;
        if canonicalize(&self.pmc, d).is_none() {
            return Err(SurfaceError::NotAdmissible);
        }
        let mut e = AlgebraElement::zero(self.n());
        for x in expand(&self.pmc, d) {
            e.toggle(x);
        }
        Ok(e)
    }

    fn check_n(&self, n: u8) -> Result<(), SurfaceError> {
        if n != self.n() {
            return Err(SurfaceError::AmbientMismatch { expected: self.n() as usize, got: n as usize });
        }
        Ok(())
    }

    /// Basis index of `a(S,T,φ)` given any diagram of its class.
    pub fn index_of(&self, d: &StrandDiagram) -> Option<BasisIdx> {
        canonicalize(&self.pmc, d).and_then(|c| self.index.get(&c).copied())
    }

    /// Writes an `A(4k)` element in the `a(·)` basis, or reports that it is
    /// not in `A(Z)`.
    pub fn decompose(&self, e: &AlgebraElement) -> Result<Elem, SurfaceError> {
        self.check_n(e.n())?;
        let mut groups: HashMap<BasisIdx, usize> = HashMap::new();
        for d in e.terms() {
            let i = self.index_of(d).ok_or(SurfaceError::NotInAlgebra)?;
            *groups.entry(i).or_default() += 1;
        }
        let mut out = Vec::with_capacity(groups.len());
        for (i, count) in groups {
            if count != self.basis[i as usize].expansion.len() {
                return Err(SurfaceError::NotInAlgebra);
            }
            out.push(i);
        }
        Ok(Elem::from_indices(out))
    }

    pub fn contains(&self, e: &AlgebraElement) -> bool {
        self.decompose(e).is_ok()
    }

    /// Expansion of an element as strand diagrams.
    pub fn to_strands(&self, e: &Elem) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.n());
        for i in e.iter() {
            for d in &self.basis[i as usize].expansion {
                out.toggle(d.clone());
            }
        }
        out
    }

    /// Product of two basis elements.
    pub fn mul(&self, a: BasisIdx, b: BasisIdx) -> Elem {
        let (ea, eb) = (&self.basis[a as usize], &self.basis[b as usize]);
        if ea.right != eb.left || ea.weight != eb.weight {
            return Elem::zero();
        }
        if self.is_idempotent(a) {
            return Elem::single(b);
        }
        if self.is_idempotent(b) {
            return Elem::single(a);
        }
        if let Some(p) = self.mul_cache.read().expect("mul cache").get(&(a, b)) {
            return p.clone();
        }
        let mut prod = AlgebraElement::zero(self.n());
        for x in &ea.expansion {
            let ends = x.end_mask();
            if let Some(y) = eb.expansion.iter().find(|y| y.start_mask() == ends) {
                if let Some(p) = x.compose(y) {
                    prod.toggle(p);
                }
            }
        }
        let p = self.decompose(&prod).expect("A(Z) is closed under multiplication");
        self.mul_cache.write().expect("mul cache").insert((a, b), p.clone());
        p
    }

    pub fn mul_elem(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out = Vec::new();
        for x in a.iter() {
            for y in b.iter() {
                out.extend(self.mul(x, y).iter());
            }
        }
        Elem::from_indices(out)
    }

    /// Differential of a basis element.
    pub fn diff(&self, a: BasisIdx) -> Elem {
        let d = AlgebraElement::from_terms(self.n(), self.basis[a as usize].expansion.iter().cloned())
            .expect("same ambient")
            .differential();
        self.decompose(&d).expect("A(Z) is closed under the differential")
    }

    pub fn diff_elem(&self, a: &Elem) -> Elem {
        Elem::from_indices(a.iter().flat_map(|x| self.diff(x).0))
    }

    /// `a(ρ)`: the chord with every admissible horizontal completion.
    pub fn chord_elem(&self, rho: Chord) -> Elem {
        self.chords_elem(&[rho]).expect("a single chord is always compatible")
    }

    /// `a(ρ₁,…,ρₙ)` for a set of chords with distinct start pairs and end pairs.
    pub fn chords_elem(&self, chords: &[Chord]) -> Result<Elem, SurfaceError> {
        let pmc = &self.pmc;
        let mut starts = PairSet::EMPTY;
        let mut ends = PairSet::EMPTY;
        let mut strands = Vec::new();
        for c in chords {
            if c.start >= c.end || c.end as usize > pmc.num_points() {
                return Err(SurfaceError::IncompatibleChordSet);
            }
            let (ps, pe) = (pmc.pair_of(c.start), pmc.pair_of(c.end));
            if starts.contains(ps) || ends.contains(pe) {
                return Err(SurfaceError::IncompatibleChordSet);
            }
            starts.insert(ps);
            ends.insert(pe);
            strands.push((c.start, c.end));
        }
        let used = starts.union(ends);
        let free: Vec<usize> = (0..pmc.num_pairs()).filter(|&p| !used.contains(p)).collect();
        let pairs = pmc.pairs();
        let mut out = Vec::new();
        for mask in 0u32..(1 << free.len()) {
            let mut s = strands.clone();
            for (bit, &p) in free.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    s.push((pairs[p].0, pairs[p].0));
                }
            }
            let d = StrandDiagram::new(self.n(), s).map_err(|_| SurfaceError::IncompatibleChordSet)?;
            out.push(self.index_of(&d).ok_or(SurfaceError::IncompatibleChordSet)?);
        }
        Ok(Elem::from_indices(out))
    }

    /// The sum of all indecomposable idempotents (the unit).
    pub fn unit(&self) -> Elem {
        Elem::from_indices(self.idempotents.values().copied())
    }

    /// Map from basis indices of `A(Z)` to those of `A(-Z)` given by
    /// `(s,t) -> (4k+1-t, 4k+1-s)`; an anti-homomorphism.
    pub fn op_table(&self) -> &[BasisIdx] {
        self.op_table.get_or_init(|| {
            let rev = algebra(&self.pmc.reverse());
            self.basis
                .iter()
                .map(|b| rev.index_of(&b.canonical.opposite()).expect("opposite of a basis element"))
                .collect()
        })
    }

    pub fn op(&self, i: BasisIdx) -> BasisIdx {
        self.op_table()[i as usize]
    }

    pub fn op_elem(&self, e: &Elem) -> Elem {
        Elem::from_indices(e.iter().map(|i| self.op(i)))
    }
}

fn pairs_of(pmc: &Pmc, mask: u64) -> PairSet {
    PairSet::from_pairs((1..=pmc.num_points() as u8).filter(|&p| mask >> p & 1 == 1).map(|p| pmc.pair_of(p)))
}

fn admissible(pmc: &Pmc, mask: u64) -> bool {
    (1..=pmc.num_points() as u8).all(|p| mask >> p & 1 == 0 || mask >> pmc.partner(p) & 1 == 0)
}

fn canonicalize(pmc: &Pmc, d: &StrandDiagram) -> Option<StrandDiagram> {
    if d.n() as usize != pmc.num_points() || !admissible(pmc, d.start_mask()) || !admissible(pmc, d.end_mask()) {
        return None;
    }
    let mut s: Vec<(u8, u8)> = d
        .strands()
        .iter()
        .map(|&(a, b)| if a == b { let m = a.min(pmc.partner(a)); (m, m) } else { (a, b) })
        .collect();
    s.sort_unstable();
    Some(StrandDiagram::from_sorted(d.n(), s))
}

/// Sum over subsets of the horizontal strands moved to their partners.
fn expand(pmc: &Pmc, d: &StrandDiagram) -> Vec<StrandDiagram> {
    let fixed: Vec<usize> = d.strands().iter().enumerate().filter(|(_, &(a, b))| a == b).map(|(i, _)| i).collect();
    let mut out = Vec::with_capacity(1 << fixed.len());
    for mask in 0u32..(1 << fixed.len()) {
        let mut s = d.strands().to_vec();
        for (bit, &i) in fixed.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                let m = pmc.partner(s[i].0);
                s[i] = (m, m);
            }
        }
        s.sort_unstable();
        out.push(StrandDiagram::from_sorted(d.n(), s));
    }
    out.sort();
    out
}

/// Canonical diagrams of weight `w`: admissible `S`, `T`, upward-veering,
/// horizontal strands only at the smaller point of a pair.
fn enumerate_weight(pmc: &Pmc, w: usize, out: &mut Vec<StrandDiagram>) {
    let n = pmc.num_points() as u8;
    let pairs = pmc.pairs();
    // choose w pairs, one point from each, for S
    let np = pmc.num_pairs();
    for pmask in 0u32..(1 << np) {
        if pmask.count_ones() as usize != w {
            continue;
        }
        let chosen: Vec<usize> = (0..np).filter(|&p| pmask >> p & 1 == 1).collect();
        for side in 0u32..(1 << w) {
            let mut starts: Vec<u8> = chosen
                .iter()
                .enumerate()
                .map(|(bit, &p)| if side >> bit & 1 == 1 { pairs[p].1 } else { pairs[p].0 })
                .collect();
            starts.sort_unstable();
            let mut cur = Vec::with_capacity(w);
            assign(pmc, n, &starts, 0, 0u64, PairSet::EMPTY, &mut cur, out);
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn assign(
    pmc: &Pmc,
    n: u8,
    starts: &[u8],
    k: usize,
    used_ends: u64,
    used_pairs: PairSet,
    cur: &mut Vec<(u8, u8)>,
    out: &mut Vec<StrandDiagram>,
) {
    if k == starts.len() {
        out.push(StrandDiagram::from_sorted(n, cur.clone()));
        return;
    }
    let s = starts[k];
    for t in s..=n {
        if used_ends >> t & 1 == 1 || used_pairs.contains(pmc.pair_of(t)) {
            continue;
        }
        if t == s && pmc.partner(s) < s {
            continue;
        }
        let mut up = used_pairs;
        up.insert(pmc.pair_of(t));
        cur.push((s, t));
        assign(pmc, n, starts, k + 1, used_ends | 1 << t, up, cur, out);
        cur.pop();
    }
}

/// Projection `A(Z1 # Z2) -> A(Z1) ⊗ A(Z2)` killing strands across the seam.
pub fn drop_w_projection(cs: &ConnectedSum, e: &AlgebraElement) -> BTreeSet<(StrandDiagram, StrandDiagram)> {
    let seam = cs.seam;
    let n1 = cs.left.num_points() as u8;
    let n2 = cs.right.num_points() as u8;
    let mut out = BTreeSet::new();
    for d in e.terms() {
        if d.strands().iter().any(|&(s, t)| s <= seam && t > seam) {
            continue;
        }
        let left: Vec<_> = d.strands().iter().copied().filter(|&(s, _)| s <= seam).collect();
        let right: Vec<_> = d.strands().iter().filter(|&&(s, _)| s > seam).map(|&(s, t)| (s - seam, t - seam)).collect();
        let pair = (StrandDiagram::from_sorted(n1, left), StrandDiagram::from_sorted(n2, right));
        if !out.remove(&pair) {
            out.insert(pair);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmc::connected_sum;

    fn torus() -> Arc<SurfaceAlgebra> {
        algebra(&Pmc::torus())
    }

    #[test]
    fn torus_summand_dimensions() {
        let a = torus();
        assert_eq!(a.summand_basis(0).len(), 8);
        assert_eq!(a.summand_basis(-1).len(), 1);
    }

    #[test]
    fn torus_relations() {
        let a = torus();
        let r = |s: &str| a.by_label(s).unwrap();
        assert!(a.mul(r("rho2"), r("rho1")).is_zero());
        assert!(a.mul(r("rho3"), r("rho2")).is_zero());
        assert_eq!(a.mul(r("rho1"), r("rho2")), Elem::single(r("rho12")));
        assert_eq!(a.mul(r("rho12"), r("rho3")), Elem::single(r("rho123")));
        assert!(a.mul(r("rho23"), r("rho23")).is_zero());
        assert!(a.mul(r("rho12"), r("rho12")).is_zero());
        for b in a.summand_basis(0) {
            assert!(a.diff(b).is_zero());
        }
    }

    #[test]
    fn chord_rho1_is_single_diagram() {
        let a = torus();
        let e = a.to_strands(&a.chord_elem(Chord { start: 1, end: 2 }));
        assert_eq!(e.terms().len(), 1);
        assert_eq!(e.terms().iter().next().unwrap().strands(), &[(1, 2)]);
    }

    #[test]
    fn idempotent_iota0_expansion() {
        let a = torus();
        let e = a.to_strands(&Elem::single(a.idempotent(PairSet(1))));
        let got: Vec<_> = e.terms().iter().map(|d| d.strands().to_vec()).collect();
        assert_eq!(got, vec![vec![(1, 1)], vec![(3, 3)]]);
    }

    #[test]
    fn a_expand_counts() {
        let z = Pmc::split(2).unwrap();
        let a = algebra(&z);
        // two horizontal strands at 2 and 5 (pairs {2,4} and {5,7}) plus a
        // moving strand 1 -> 8
        let d = StrandDiagram::new(8, vec![(1, 8), (2, 2), (5, 5)]).unwrap();
        assert_eq!(a.a_expand(&d).unwrap().terms().len(), 4);
        let bad = StrandDiagram::new(8, vec![(1, 1), (3, 3)]).unwrap();
        assert_eq!(a.a_expand(&bad), Err(SurfaceError::NotAdmissible));
    }

    #[test]
    fn opposite_swaps_rho1_rho3() {
        let a = torus();
        let r = |s: &str| a.by_label(s).unwrap();
        assert_eq!(a.op(r("rho1")), r("rho3"));
        assert_eq!(a.op(r("rho2")), r("rho2"));
        assert_eq!(a.op(r("rho12")), r("rho23"));
        assert_eq!(a.op(r("iota0")), r("iota1"));
        for i in 0..a.dim() as BasisIdx {
            assert_eq!(a.op(a.op(i)), i);
        }
    }

    #[test]
    fn drop_w_kills_seam_crossers() {
        let t = Pmc::torus();
        let cs = connected_sum(&t, &t).unwrap();
        let cross = AlgebraElement::from_diagram(StrandDiagram::new(8, vec![(3, 6)]).unwrap());
        assert!(drop_w_projection(&cs, &cross).is_empty());
        let local = AlgebraElement::from_diagram(StrandDiagram::new(8, vec![(1, 2), (6, 6)]).unwrap());
        let p = drop_w_projection(&cs, &local);
        assert_eq!(p.len(), 1);
        let (l, r) = p.iter().next().unwrap();
        assert_eq!(l.strands(), &[(1, 2)]);
        assert_eq!(r.strands(), &[(2, 2)]);
    }

    #[test]
    fn elem_arithmetic() {
        let a = Elem::from_indices([3, 1, 3, 2]);
        assert_eq!(a.indices(), &[1, 2]);
        assert!(a.add(&a).is_zero());
    }
}
