//! Type D structures, DD bimodules and U-weighted type D structures.
//!
//! All three share [`Module`], parameterised by the coefficient ring.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::pmc::PairSet;
use crate::surface::{BasisIdx, Elem, SurfaceAlgebra};

/// Nodes visited by [`Module::iso_check`] before giving up.
pub const ISO_NODE_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DmodError {
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("coefficient on {src} -> {dst} is not compatible with the idempotents")]
    IncompatibleCoefficient { src: String, dst: String },
    #[error("idempotent of `{0}` is not a set of pairs of the circle")]
    BadIdempotent(String),
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("isomorphism search exceeded {0} nodes")]
    CapExceeded(usize),
}

/// The coefficient ring of a module: multiplication, differential and
/// idempotent bookkeeping.
pub trait Coefficients: Clone + PartialEq + Debug + Send + Sync {
    type Elem: Clone + Eq + Ord + Hash + Debug + Default + Send + Sync;
    type Idem: Copy + Eq + Ord + Hash + Debug + Send + Sync;

    fn is_zero(e: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn diff(&self, a: &Self::Elem) -> Self::Elem;
    fn unit(&self, i: Self::Idem) -> Self::Elem;
    /// `I(src)·a·I(dst) = a`.
    fn compatible(&self, src: Self::Idem, a: &Self::Elem, dst: Self::Idem) -> bool;
    fn valid_idem(&self, i: Self::Idem) -> bool;
}

/// Coefficients in a single surface algebra.
#[derive(Clone, Debug)]
pub struct Single(pub Arc<SurfaceAlgebra>);

impl PartialEq for Single {
    fn eq(&self, other: &Self) -> bool {
        self.0.pmc() == other.0.pmc()
    }
}

impl Coefficients for Single {
    type Elem = Elem;
    type Idem = PairSet;

    fn is_zero(e: &Elem) -> bool {
        e.is_zero()
    }
    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        a.add(b)
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.0.mul_elem(a, b)
    }
    fn diff(&self, a: &Elem) -> Elem {
        self.0.diff_elem(a)
    }
    fn unit(&self, i: PairSet) -> Elem {
        Elem::single(self.0.idempotent(i))
    }
    fn compatible(&self, src: PairSet, a: &Elem, dst: PairSet) -> bool {
        a.iter().all(|b| {
            let e = self.0.get(b);
            e.left == src && e.right == dst
        })
    }
    fn valid_idem(&self, i: PairSet) -> bool {
        i.0 & !self.0.pmc().full_pair_set().0 == 0
    }
}

/// An F2-sum of pure tensors `a1 ⊗ a2` of basis elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorElem(Vec<(BasisIdx, BasisIdx)>);

impl TensorElem {
    pub fn from_terms(terms: impl IntoIterator<Item = (BasisIdx, BasisIdx)>) -> TensorElem {
        TensorElem(toggle_sorted(terms))
    }
    pub fn pure(a: &Elem, b: &Elem) -> TensorElem {
        TensorElem::from_terms(a.iter().flat_map(|x| b.iter().map(move |y| (x, y))))
    }
    pub fn terms(&self) -> &[(BasisIdx, BasisIdx)] {
        &self.0
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// Coefficients in `A1 ⊗ A2`.
#[derive(Clone, Debug)]
pub struct Pair(pub Arc<SurfaceAlgebra>, pub Arc<SurfaceAlgebra>);

impl PartialEq for Pair {
    fn eq(&self, other: &Self) -> bool {
        self.0.pmc() == other.0.pmc() && self.1.pmc() == other.1.pmc()
    }
}

impl Coefficients for Pair {
    type Elem = TensorElem;
    type Idem = (PairSet, PairSet);

    fn is_zero(e: &TensorElem) -> bool {
        e.is_zero()
    }
    fn add(&self, a: &TensorElem, b: &TensorElem) -> TensorElem {
        TensorElem::from_terms(a.0.iter().chain(&b.0).copied())
    }
    fn mul(&self, a: &TensorElem, b: &TensorElem) -> TensorElem {
        let mut out = Vec::new();
        for &(a1, a2) in &a.0 {
            for &(b1, b2) in &b.0 {
                let p1 = self.0.mul(a1, b1);
                if p1.is_zero() {
                    continue;
                }
                let p2 = self.1.mul(a2, b2);
                out.extend(p1.iter().flat_map(|x| p2.iter().map(move |y| (x, y))));
            }
        }
        TensorElem::from_terms(out)
    }
    fn diff(&self, a: &TensorElem) -> TensorElem {
        let mut out = Vec::new();
        for &(a1, a2) in &a.0 {
            out.extend(self.0.diff(a1).iter().map(|x| (x, a2)));
            out.extend(self.1.diff(a2).iter().map(|y| (a1, y)));
        }
        TensorElem::from_terms(out)
    }
    fn unit(&self, (i, j): (PairSet, PairSet)) -> TensorElem {
        TensorElem(vec![(self.0.idempotent(i), self.1.idempotent(j))])
    }
    fn compatible(&self, src: (PairSet, PairSet), a: &TensorElem, dst: (PairSet, PairSet)) -> bool {
        a.0.iter().all(|&(x, y)| {
            let (ex, ey) = (self.0.get(x), self.1.get(y));
            ex.left == src.0 && ex.right == dst.0 && ey.left == src.1 && ey.right == dst.1
        })
    }
    fn valid_idem(&self, (i, j): (PairSet, PairSet)) -> bool {
        i.0 & !self.0.pmc().full_pair_set().0 == 0 && j.0 & !self.1.pmc().full_pair_set().0 == 0
    }
}

/// An F2-sum of terms `U^m a`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UElem(Vec<(BasisIdx, u32)>);

impl UElem {
    pub fn from_terms(terms: impl IntoIterator<Item = (BasisIdx, u32)>) -> UElem {
        UElem(toggle_sorted(terms))
    }
    pub fn with_power(a: &Elem, m: u32) -> UElem {
        UElem::from_terms(a.iter().map(|x| (x, m)))
    }
    pub fn terms(&self) -> &[(BasisIdx, u32)] {
        &self.0
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// Coefficients in `A ⊗ F2[U]`.
#[derive(Clone, Debug)]
pub struct WithU(pub Arc<SurfaceAlgebra>);

impl PartialEq for WithU {
    fn eq(&self, other: &Self) -> bool {
        self.0.pmc() == other.0.pmc()
    }
}

impl Coefficients for WithU {
    type Elem = UElem;
    type Idem = PairSet;

    fn is_zero(e: &UElem) -> bool {
        e.is_zero()
    }
    fn add(&self, a: &UElem, b: &UElem) -> UElem {
        UElem::from_terms(a.0.iter().chain(&b.0).copied())
    }
    fn mul(&self, a: &UElem, b: &UElem) -> UElem {
        let mut out = Vec::new();
        for &(x, m) in &a.0 {
            for &(y, n) in &b.0 {
                out.extend(self.0.mul(x, y).iter().map(|z| (z, m + n)));
            }
        }
        UElem::from_terms(out)
    }
    fn diff(&self, a: &UElem) -> UElem {
        UElem::from_terms(a.0.iter().flat_map(|&(x, m)| self.0.diff(x).iter().map(move |z| (z, m)).collect::<Vec<_>>()))
    }
    fn unit(&self, i: PairSet) -> UElem {
        UElem(vec![(self.0.idempotent(i), 0)])
    }
    fn compatible(&self, src: PairSet, a: &UElem, dst: PairSet) -> bool {
        a.0.iter().all(|&(b, _)| {
            let e = self.0.get(b);
            e.left == src && e.right == dst
        })
    }
    fn valid_idem(&self, i: PairSet) -> bool {
        i.0 & !self.0.pmc().full_pair_set().0 == 0
    }
}

fn toggle_sorted<T: Ord + Copy>(terms: impl IntoIterator<Item = T>) -> Vec<T> {
    let mut v: Vec<T> = terms.into_iter().collect();
    v.sort_unstable();
    let mut out: Vec<T> = Vec::with_capacity(v.len());
    for t in v {
        if out.last() == Some(&t) {
            out.pop();
        } else {
            out.push(t);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator<I> {
    pub name: String,
    pub idempotent: I,
}

/// A free module with a differential `δ(x) = Σ c(x,y) ⊗ y`.
#[derive(Clone, Debug)]
pub struct Module<R: Coefficients> {
    ring: R,
    gens: Vec<Generator<R::Idem>>,
    by_name: HashMap<String, usize>,
    delta: BTreeMap<(usize, usize), R::Elem>,
}

pub type TypeD = Module<Single>;
pub type TypeDD = Module<Pair>;
pub type UTypeD = Module<WithU>;

/// A nonzero component of `δ∘δ` (with the algebra differential folded in).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation<E> {
    pub src: String,
    pub dst: String,
    pub residual: E,
}

impl<R: Coefficients> PartialEq for Module<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.gens == other.gens && self.delta == other.delta
    }
}

impl<R: Coefficients> Module<R> {
    pub fn new(ring: R) -> Self {
        Module { ring, gens: Vec::new(), by_name: HashMap::new(), delta: BTreeMap::new() }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn add_generator(&mut self, name: impl Into<String>, idempotent: R::Idem) -> Result<usize, DmodError> {
        let name = name.into();
        if self.by_name.contains_key(&name) {
            return Err(DmodError::DuplicateGenerator(name));
        }
        if !self.ring.valid_idem(idempotent) {
            return Err(DmodError::BadIdempotent(name));
        }
        self.by_name.insert(name.clone(), self.gens.len());
        self.gens.push(Generator { name, idempotent });
        Ok(self.gens.len() - 1)
    }

    /// Adds `coeff ⊗ dst` to `δ(src)` mod 2.
    pub fn add_arrow(&mut self, src: usize, dst: usize, coeff: R::Elem) -> Result<(), DmodError> {
        if !self.ring.compatible(self.gens[src].idempotent, &coeff, self.gens[dst].idempotent) {
            return Err(DmodError::IncompatibleCoefficient {
                src: self.gens[src].name.clone(),
                dst: self.gens[dst].name.clone(),
            });
        }
        self.add_unchecked(src, dst, &coeff);
        Ok(())
    }

    pub fn add_arrow_by_name(&mut self, src: &str, dst: &str, coeff: R::Elem) -> Result<(), DmodError> {
        let s = self.index(src)?;
        let d = self.index(dst)?;
        self.add_arrow(s, d, coeff)
    }

    fn add_unchecked(&mut self, src: usize, dst: usize, coeff: &R::Elem) {
        let cur = self.delta.remove(&(src, dst)).unwrap_or_default();
        let sum = self.ring.add(&cur, coeff);
        if !R::is_zero(&sum) {
            self.delta.insert((src, dst), sum);
        }
    }

    pub fn index(&self, name: &str) -> Result<usize, DmodError> {
        self.by_name.get(name).copied().ok_or_else(|| DmodError::UnknownGenerator(name.to_string()))
    }

    pub fn generators(&self) -> &[Generator<R::Idem>] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Nonzero coefficients keyed by `(src, dst)`.
    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize, &R::Elem)> {
        self.delta.iter().map(|(&(s, d), c)| (s, d, c))
    }

    pub fn coeff(&self, src: usize, dst: usize) -> Option<&R::Elem> {
        self.delta.get(&(src, dst))
    }

    pub fn arrow_count(&self) -> usize {
        self.delta.len()
    }

    /// Every nonzero component of `Σ c·c' ⊗ z + Σ d(c) ⊗ y`.
    pub fn verify_d2(&self) -> Vec<Violation<R::Elem>> {
        let n = self.gens.len();
        let mut out_of: Vec<Vec<(usize, &R::Elem)>> = vec![Vec::new(); n];
        for (&(s, d), c) in &self.delta {
            out_of[s].push((d, c));
        }
        let per_src: Vec<Vec<Violation<R::Elem>>> = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut acc: BTreeMap<usize, R::Elem> = BTreeMap::new();
                let mut push = |z: usize, e: R::Elem| {
                    let cur = acc.remove(&z).unwrap_or_default();
                    acc.insert(z, self.ring.add(&cur, &e));
                };
                for &(y, c) in &out_of[x] {
                    push(y, self.ring.diff(c));
                    for &(z, c2) in &out_of[y] {
                        push(z, self.ring.mul(c, c2));
                    }
                }
                acc.into_iter()
                    .filter(|(_, e)| !R::is_zero(e))
                    .map(|(z, residual)| Violation {
                        src: self.gens[x].name.clone(),
                        dst: self.gens[z].name.clone(),
                        residual,
                    })
                    .collect()
            })
            .collect();
        per_src.into_iter().flatten().collect()
    }

    /// Cancels every arrow whose coefficient is exactly the unit of its
    /// corner, least `(src, dst)` by name first.
    pub fn reduce(&self) -> Self {
        let n = self.gens.len();
        let mut alive = vec![true; n];
        let mut out: Vec<BTreeMap<usize, R::Elem>> = vec![BTreeMap::new(); n];
        let mut inc: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (&(s, d), c) in &self.delta {
            out[s].insert(d, c.clone());
            inc[d].insert(s);
        }
        loop {
            let mut best: Option<(usize, usize)> = None;
            for x in (0..n).filter(|&x| alive[x]) {
                let unit = self.ring.unit(self.gens[x].idempotent);
                for (&y, c) in &out[x] {
                    if y == x || self.gens[y].idempotent != self.gens[x].idempotent || *c != unit {
                        continue;
                    }
                    let key = (&self.gens[x].name, &self.gens[y].name);
                    if best.is_none_or(|(bx, by)| key < (&self.gens[bx].name, &self.gens[by].name)) {
                        best = Some((x, y));
                    }
                }
            }
            let Some((x, y)) = best else { break };
            let into_y: Vec<(usize, R::Elem)> =
                inc[y].iter().filter(|&&z| z != x && z != y).map(|&z| (z, out[z][&y].clone())).collect();
            let from_x: Vec<(usize, R::Elem)> =
                out[x].iter().filter(|(&w, _)| w != y && w != x).map(|(&w, c)| (w, c.clone())).collect();
            for (z, c1) in &into_y {
                for (w, c2) in &from_x {
                    let p = self.ring.mul(c1, c2);
                    if R::is_zero(&p) {
                        continue;
                    }
                    let cur = out[*z].remove(w).unwrap_or_default();
                    let sum = self.ring.add(&cur, &p);
                    if R::is_zero(&sum) {
                        inc[*w].remove(z);
                    } else {
                        out[*z].insert(*w, sum);
                        inc[*w].insert(*z);
                    }
                }
            }
            for g in [x, y] {
                alive[g] = false;
                for t in std::mem::take(&mut out[g]).into_keys() {
                    inc[t].remove(&g);
                }
                for s in std::mem::take(&mut inc[g]) {
                    out[s].remove(&g);
                }
            }
        }
        let mut m = Module::new(self.ring.clone());
        let mut new_idx = vec![usize::MAX; n];
        for g in (0..n).filter(|&g| alive[g]) {
            new_idx[g] = m.add_generator(self.gens[g].name.clone(), self.gens[g].idempotent).expect("names unique");
        }
        for s in (0..n).filter(|&s| alive[s]) {
            for (d, c) in &out[s] {
                m.delta.insert((new_idx[s], new_idx[*d]), c.clone());
            }
        }
        m
    }

    /// True if some arrow has a unit coefficient between distinct generators.
    pub fn is_reduced(&self) -> bool {
        !self.delta.iter().any(|(&(s, d), c)| {
            s != d
                && self.gens[s].idempotent == self.gens[d].idempotent
                && *c == self.ring.unit(self.gens[s].idempotent)
        })
    }

    /// Searches for a bijection of generators preserving idempotents and δ
    /// exactly. `Ok(Some(f))` maps generator `i` of `self` to `f[i]` of `other`.
    pub fn iso_check(&self, other: &Self) -> Result<Option<Vec<usize>>, DmodError> {
        if self.ring != other.ring {
            return Err(DmodError::AlgebraMismatch);
        }
        if self.len() != other.len() || self.delta.len() != other.delta.len() {
            return Ok(None);
        }
        let sig = |m: &Self, g: usize| {
            let outs: Vec<&R::Elem> = m.delta.range((g, 0)..(g + 1, 0)).map(|(_, c)| c).collect();
            let ins = m.delta.keys().filter(|&&(_, d)| d == g).count();
            let mut outs_sorted: Vec<_> = outs.into_iter().cloned().collect();
            outs_sorted.sort();
            (m.gens[g].idempotent, m.delta.get(&(g, g)).cloned(), outs_sorted, ins)
        };
        let sa: Vec<_> = (0..self.len()).map(|g| sig(self, g)).collect();
        let sb: Vec<_> = (0..other.len()).map(|g| sig(other, g)).collect();
        let mut ma = sa.clone();
        let mut mb = sb.clone();
        ma.sort();
        mb.sort();
        if ma != mb {
            return Ok(None);
        }
        let mut map = vec![usize::MAX; self.len()];
        let mut used = vec![false; other.len()];
        let mut nodes = 0usize;
        let found = self.iso_search(other, &sa, &sb, 0, &mut map, &mut used, &mut nodes)?;
        Ok(found.then_some(map))
    }

    #[allow(clippy::too_many_arguments)]
    fn iso_search<S: PartialEq>(
        &self,
        other: &Self,
        sa: &[S],
        sb: &[S],
        i: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        nodes: &mut usize,
    ) -> Result<bool, DmodError> {
        if i == self.len() {
            return Ok(true);
        }
        for j in 0..other.len() {
            if used[j] || sa[i] != sb[j] {
                continue;
            }
            *nodes += 1;
            if *nodes > ISO_NODE_CAP {
                return Err(DmodError::CapExceeded(ISO_NODE_CAP));
            }
            map[i] = j;
            let consistent = (0..i).all(|k| {
                self.delta.get(&(i, k)) == other.delta.get(&(j, map[k]))
                    && self.delta.get(&(k, i)) == other.delta.get(&(map[k], j))
            });
            if consistent {
                used[j] = true;
                if self.iso_search(other, sa, sb, i + 1, map, used, nodes)? {
                    return Ok(true);
                }
                used[j] = false;
            }
            map[i] = usize::MAX;
        }
        Ok(false)
    }

    /// Keeps only generators whose idempotent satisfies `keep`.
    pub fn restrict(&self, keep: impl Fn(R::Idem) -> bool) -> Self {
        let mut m = Module::new(self.ring.clone());
        let mut new_idx = vec![usize::MAX; self.len()];
        for (g, gen) in self.gens.iter().enumerate() {
            if keep(gen.idempotent) {
                new_idx[g] = m.add_generator(gen.name.clone(), gen.idempotent).expect("names unique");
            }
        }
        for (&(s, d), c) in &self.delta {
            if new_idx[s] != usize::MAX && new_idx[d] != usize::MAX {
                m.delta.insert((new_idx[s], new_idx[d]), c.clone());
            }
        }
        m
    }

    /// Renames generators; names not in the map are kept.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> Result<Self, DmodError> {
        let mut m = Module::new(self.ring.clone());
        for gen in &self.gens {
            m.add_generator(f(&gen.name), gen.idempotent)?;
        }
        m.delta = self.delta.clone();
        Ok(m)
    }

    /// Renames generators `g0, g1, …` in their current order.
    pub fn rename_sequential(&self) -> Self {
        let mut m = Module::new(self.ring.clone());
        for (i, gen) in self.gens.iter().enumerate() {
            m.add_generator(format!("g{i}"), gen.idempotent).expect("names unique");
        }
        m.delta = self.delta.clone();
        m
    }

    /// Same module with generators listed in name order.
    pub fn sorted(&self) -> Self {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.gens[a].name.cmp(&self.gens[b].name));
        let mut pos = vec![0; self.len()];
        let mut m = Module::new(self.ring.clone());
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
            m.add_generator(self.gens[old].name.clone(), self.gens[old].idempotent).expect("names unique");
        }
        for (&(s, d), c) in &self.delta {
            m.delta.insert((pos[s], pos[d]), c.clone());
        }
        m
    }

    /// Builds a module from parts, checking every coefficient.
    pub fn from_parts(
        ring: R,
        gens: impl IntoIterator<Item = (String, R::Idem)>,
        arrows: impl IntoIterator<Item = (usize, usize, R::Elem)>,
    ) -> Result<Self, DmodError> {
        let mut m = Module::new(ring);
        for (name, idem) in gens {
            m.add_generator(name, idem)?;
        }
        for (s, d, c) in arrows {
            m.add_arrow(s, d, c)?;
        }
        Ok(m)
    }
}

impl Module<WithU> {
    /// Forgets `U`, keeping only `U^0` terms.
    pub fn at_u_zero(&self) -> TypeD {
        let alg = self.ring.0.clone();
        let mut m = Module::new(Single(alg));
        for g in &self.gens {
            m.add_generator(g.name.clone(), g.idempotent).expect("names unique");
        }
        for (&(s, d), c) in &self.delta {
            let e = Elem::from_indices(c.0.iter().filter(|&&(_, p)| p == 0).map(|&(b, _)| b));
            if !e.is_zero() {
                m.delta.insert((s, d), e);
            }
        }
        m
    }
}

impl Module<Single> {
    pub fn algebra(&self) -> &Arc<SurfaceAlgebra> {
        &self.ring.0
    }

    /// Parses `"rho1 + rho3"` style coefficients for tests and fixtures.
    pub fn arrow_labels(&mut self, src: &str, dst: &str, coeff: &str) -> Result<(), DmodError> {
        let e = self.ring.0.parse_elem(coeff).map_err(|_| DmodError::IncompatibleCoefficient {
            src: src.to_string(),
            dst: dst.to_string(),
        })?;
        self.add_arrow_by_name(src, dst, e)
    }

    /// Embeds at `U^0`.
    pub fn with_u(&self) -> UTypeD {
        let mut m = Module::new(WithU(self.ring.0.clone()));
        for g in &self.gens {
            m.add_generator(g.name.clone(), g.idempotent).expect("names unique");
        }
        for (&(s, d), c) in &self.delta {
            m.delta.insert((s, d), UElem::with_power(c, 0));
        }
        m
    }
}

impl Module<Pair> {
    pub fn algebras(&self) -> (&Arc<SurfaceAlgebra>, &Arc<SurfaceAlgebra>) {
        (&self.ring.0, &self.ring.1)
    }

    /// The same bimodule with the two actions exchanged.
    pub fn swap_sides(&self) -> TypeDD {
        let mut m = Module::new(Pair(self.ring.1.clone(), self.ring.0.clone()));
        for g in &self.gens {
            m.add_generator(g.name.clone(), (g.idempotent.1, g.idempotent.0)).expect("names unique");
        }
        for (&(s, d), c) in &self.delta {
            m.delta.insert((s, d), TensorElem::from_terms(c.0.iter().map(|&(a, b)| (b, a))));
        }
        m
    }

    /// Parses torus-style labels on both sides, e.g. `("rho1", "rho3")` terms.
    pub fn arrow_label_terms(&mut self, src: &str, dst: &str, terms: &[(&str, &str)]) -> Result<(), DmodError> {
        let bad = || DmodError::IncompatibleCoefficient { src: src.to_string(), dst: dst.to_string() };
        let mut t = Vec::new();
        for (l, r) in terms {
            let a = self.ring.0.by_label(l).map_err(|_| bad())?;
            let b = self.ring.1.by_label(r).map_err(|_| bad())?;
            t.push((a, b));
        }
        self.add_arrow_by_name(src, dst, TensorElem::from_terms(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmc::Pmc;
    use crate::surface::algebra;

    fn torus() -> Single {
        Single(algebra(&Pmc::torus()))
    }

    const I0: PairSet = PairSet(1);
    const I1: PairSet = PairSet(2);

    #[test]
    fn infinity_module_squares_to_zero() {
        let mut m = TypeD::new(torus());
        m.add_generator("r", I1).unwrap();
        m.arrow_labels("r", "r", "rho23").unwrap();
        assert!(m.verify_d2().is_empty());
    }

    #[test]
    fn rho12_violation_reported() {
        let mut m = TypeD::new(torus());
        m.add_generator("x", I0).unwrap();
        m.add_generator("y", I1).unwrap();
        m.arrow_labels("x", "y", "rho1").unwrap();
        m.arrow_labels("y", "x", "rho2").unwrap();
        let v = m.verify_d2();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].src, "x");
        assert_eq!(v[0].dst, "x");
        assert_eq!(m.algebra().format_elem(&v[0].residual), "rho12");
    }

    #[test]
    fn incompatible_coefficient_rejected() {
        let mut m = TypeD::new(torus());
        m.add_generator("x", I0).unwrap();
        assert!(matches!(m.arrow_labels("x", "x", "rho1"), Err(DmodError::IncompatibleCoefficient { .. })));
        assert_eq!(m.add_generator("x", I1), Err(DmodError::DuplicateGenerator("x".into())));
    }

    #[test]
    fn unit_arrow_cancels_to_empty() {
        let mut m = TypeD::new(torus());
        m.add_generator("x", I0).unwrap();
        m.add_generator("y", I0).unwrap();
        m.arrow_labels("x", "y", "iota0").unwrap();
        let r = m.reduce();
        assert!(r.is_empty());
    }

    #[test]
    fn mixed_unit_not_cancelled() {
        let mut m = TypeD::new(torus());
        m.add_generator("x", I0).unwrap();
        m.add_generator("y", I0).unwrap();
        m.arrow_labels("x", "y", "iota0 + rho12").unwrap();
        assert_eq!(m.reduce().len(), 2);
    }

    #[test]
    fn zigzag_adds_product() {
        // z -rho1-> y <-1- x -rho2-> w  gives z -rho12-> w
        let mut m = TypeD::new(torus());
        for (n, i) in [("w", I0), ("x", I1), ("y", I1), ("z", I0)] {
            m.add_generator(n, i).unwrap();
        }
        m.arrow_labels("x", "y", "iota1").unwrap();
        m.arrow_labels("z", "y", "rho1").unwrap();
        m.arrow_labels("x", "w", "rho2").unwrap();
        let r = m.reduce();
        assert_eq!(r.len(), 2);
        let (z, w) = (r.index("z").unwrap(), r.index("w").unwrap());
        assert_eq!(r.algebra().format_elem(r.coeff(z, w).unwrap()), "rho12");
    }

    #[test]
    fn iso_witness_and_mismatch() {
        let mut a = TypeD::new(torus());
        a.add_generator("a", I0).unwrap();
        a.add_generator("b", I1).unwrap();
        a.arrow_labels("a", "b", "rho1 + rho3").unwrap();
        let b = a.rename(|n| format!("{n}'")).unwrap();
        assert_eq!(a.iso_check(&b).unwrap(), Some(vec![0, 1]));
        let mut c = TypeD::new(torus());
        c.add_generator("a", I0).unwrap();
        c.add_generator("b", I1).unwrap();
        c.arrow_labels("a", "b", "rho1").unwrap();
        assert_eq!(a.iso_check(&c).unwrap(), None);
    }

    #[test]
    fn u_module_d2_tracks_powers() {
        let alg = algebra(&Pmc::torus());
        let mut m = UTypeD::new(WithU(alg.clone()));
        m.add_generator("x", I1).unwrap();
        let rho23 = alg.by_label("rho23").unwrap();
        m.add_arrow(0, 0, UElem::from_terms([(rho23, 2)])).unwrap();
        assert!(m.verify_d2().is_empty());
        assert_eq!(m.at_u_zero().arrow_count(), 0);
    }
}
