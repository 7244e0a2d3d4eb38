//! Morphism complexes between type D structures and bimodules.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::dmod::{DmodError, Module, Single, TypeD, TypeDD, UTypeD};
use crate::f2u::{F2UComplex, Poly};
use crate::linalg::{F2Complex, LinalgError};
use crate::pmc::PairSet;
use crate::surface::{algebra, BasisIdx, Elem, SurfaceAlgebra};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairingError {
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("morphism complex fails d^2 = 0 ({0} residual terms)")]
    NotAComplex(usize),
    #[error(transparent)]
    Module(#[from] DmodError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Which action of a bimodule is paired with the module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A basis morphism `x ↦ a·y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorBasis {
    pub src: usize,
    pub coeff: BasisIdx,
    pub dst: usize,
}

#[derive(Clone, Debug)]
pub struct MorComplex {
    pub basis: Vec<MorBasis>,
    pub complex: F2Complex,
}

impl MorComplex {
    pub fn homology_rank(&self) -> Result<usize, PairingError> {
        Ok(self.complex.homology_rank()?)
    }
    pub fn index(&self, b: &MorBasis) -> Option<usize> {
        self.basis.iter().position(|x| x == b)
    }
}

#[derive(Clone, Debug)]
pub struct MorUComplex {
    pub basis: Vec<MorBasis>,
    pub complex: F2UComplex,
}

/// A module obtained by contracting a bimodule, with a record of any
/// passage to the opposite algebra.
#[derive(Clone, Debug)]
pub struct Contracted {
    pub module: TypeD,
    pub provenance: Vec<String>,
}

fn mor_name(alg: &SurfaceAlgebra, x: &str, a: BasisIdx, y: &str) -> String {
    format!("{x}>{}>{y}", alg.label(a))
}

/// Enumerates `(x, a, y)` with `a` in the corner `I(x)·A·I(y)`.
fn mor_basis(
    alg: &SurfaceAlgebra,
    src: impl Iterator<Item = (usize, PairSet)> + Clone,
    dst: impl Iterator<Item = (usize, PairSet)> + Clone,
) -> Vec<MorBasis> {
    let mut out = Vec::new();
    for (x, ix) in src {
        for (y, iy) in dst.clone() {
            out.extend(alg.corner(ix, iy).iter().map(|&coeff| MorBasis { src: x, coeff, dst: y }));
        }
    }
    out
}

fn out_arrows<R: crate::dmod::Coefficients>(m: &Module<R>) -> Vec<Vec<(usize, &R::Elem)>> {
    let mut out = vec![Vec::new(); m.len()];
    for (s, d, c) in m.arrows() {
        out[s].push((d, c));
    }
    out
}

fn in_arrows<R: crate::dmod::Coefficients>(m: &Module<R>) -> Vec<Vec<(usize, &R::Elem)>> {
    let mut inc = vec![Vec::new(); m.len()];
    for (s, d, c) in m.arrows() {
        inc[d].push((s, c));
    }
    inc
}

/// The F2 complex `Mor(M, N)` with `d f = ∂_N∘f + f∘∂_M`.
pub fn mor_d_d(m: &TypeD, n: &TypeD) -> Result<MorComplex, PairingError> {
    let alg = m.algebra().clone();
    if alg.pmc() != n.algebra().pmc() {
        return Err(PairingError::AlgebraMismatch);
    }
    let gm = m.generators();
    let gn = n.generators();
    let basis = mor_basis(
        &alg,
        gm.iter().enumerate().map(|(i, g)| (i, g.idempotent)),
        gn.iter().enumerate().map(|(i, g)| (i, g.idempotent)),
    );
    let index: HashMap<&MorBasis, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let n_out = out_arrows(n);
    let m_in = in_arrows(m);
    let rows: Vec<Vec<usize>> = basis
        .par_iter()
        .map(|f| {
            let mut t = Vec::new();
            let a = Elem::single(f.coeff);
            t.extend(alg.diff(f.coeff).iter().map(|c| index[&MorBasis { src: f.src, coeff: c, dst: f.dst }]));
            for &(z, b) in &n_out[f.dst] {
                let p = alg.mul_elem(&a, b);
                t.extend(p.iter().map(|c| index[&MorBasis { src: f.src, coeff: c, dst: z }]));
            }
            for &(w, c) in &m_in[f.src] {
                let p = alg.mul_elem(c, &a);
                t.extend(p.iter().map(|e| index[&MorBasis { src: w, coeff: e, dst: f.dst }]));
            }
            t
        })
        .collect();
    let names = basis.iter().map(|b| mor_name(&alg, &gm[b.src].name, b.coeff, &gn[b.dst].name)).collect();
    let mut complex = F2Complex::new(names);
    for (s, ts) in rows.into_iter().enumerate() {
        for t in ts {
            complex.toggle(s, t);
        }
    }
    match complex.d_squared_defect() {
        0 => Ok(MorComplex { basis, complex }),
        k => Err(PairingError::NotAComplex(k)),
    }
}

/// `Mor(M, P)` for a U-weighted module `P`, as a free F2[U] complex.
pub fn mor_d_ud(m: &TypeD, p: &UTypeD) -> Result<MorUComplex, PairingError> {
    let alg = m.algebra().clone();
    if alg.pmc() != p.ring().0.pmc() {
        return Err(PairingError::AlgebraMismatch);
    }
    let gm = m.generators();
    let gp = p.generators();
    let basis = mor_basis(
        &alg,
        gm.iter().enumerate().map(|(i, g)| (i, g.idempotent)),
        gp.iter().enumerate().map(|(i, g)| (i, g.idempotent)),
    );
    let index: HashMap<&MorBasis, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let p_out = out_arrows(p);
    let m_in = in_arrows(m);
    let names = basis.iter().map(|b| mor_name(&alg, &gm[b.src].name, b.coeff, &gp[b.dst].name)).collect();
    let mut complex = F2UComplex::new(names);
    for (s, f) in basis.iter().enumerate() {
        let a = Elem::single(f.coeff);
        let mut acc: BTreeMap<usize, Poly> = BTreeMap::new();
        let mut push = |t: usize, pw: u32| acc.entry(t).or_default().add_assign(&Poly::monomial(pw));
        for c in alg.diff(f.coeff).iter() {
            push(index[&MorBasis { src: f.src, coeff: c, dst: f.dst }], 0);
        }
        for &(z, ue) in &p_out[f.dst] {
            for &(b, pw) in ue.terms() {
                for c in alg.mul(f.coeff, b).iter() {
                    push(index[&MorBasis { src: f.src, coeff: c, dst: z }], pw);
                }
            }
        }
        for &(w, c) in &m_in[f.src] {
            for e in alg.mul_elem(c, &a).iter() {
                push(index[&MorBasis { src: w, coeff: e, dst: f.dst }], 0);
            }
        }
        for (t, poly) in acc {
            complex.add_entry(s, t, &poly).expect("indices in range");
        }
    }
    match complex.d_squared_defect() {
        0 => Ok(MorUComplex { basis, complex }),
        k => Err(PairingError::NotAComplex(k)),
    }
}

fn oriented(b: &TypeDD, side: Side) -> TypeDD {
    match side {
        Side::Left => b.clone(),
        Side::Right => b.swap_sides(),
    }
}

/// `Mor(B, M)`, pairing the `side` action of `B` with `M`. The remaining
/// action is contravariant, so the result lives over the opposite algebra,
/// i.e. the algebra of the reversed circle.
pub fn mor_dd_d(b: &TypeDD, m: &TypeD, side: Side) -> Result<Contracted, PairingError> {
    let b = oriented(b, side);
    let (a1, a2) = (b.ring().0.clone(), b.ring().1.clone());
    if a1.pmc() != m.algebra().pmc() {
        return Err(PairingError::AlgebraMismatch);
    }
    let rev = algebra(&a2.pmc().reverse());
    let gb = b.generators();
    let gm = m.generators();
    let basis = mor_basis(
        &a1,
        gb.iter().enumerate().map(|(i, g)| (i, g.idempotent.0)),
        gm.iter().enumerate().map(|(i, g)| (i, g.idempotent)),
    );
    let index: HashMap<&MorBasis, usize> = basis.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let m_out = out_arrows(m);
    let b_in = in_arrows(&b);
    let mut out = Module::new(Single(rev.clone()));
    for f in &basis {
        let idem = a2.pmc().reverse_pairs(gb[f.src].idempotent.1);
        out.add_generator(mor_name(&a1, &gb[f.src].name, f.coeff, &gm[f.dst].name), idem)?;
    }
    let rows: Vec<BTreeMap<usize, Elem>> = basis
        .par_iter()
        .map(|f| {
            let mut acc: BTreeMap<usize, Elem> = BTreeMap::new();
            let unit = rev.idempotent(a2.pmc().reverse_pairs(gb[f.src].idempotent.1));
            let a = Elem::single(f.coeff);
            for c in a1.diff(f.coeff).iter() {
                acc.entry(index[&MorBasis { src: f.src, coeff: c, dst: f.dst }]).or_default().toggle(unit);
            }
            for &(x2, c) in &m_out[f.dst] {
                for e in a1.mul_elem(&a, c).iter() {
                    acc.entry(index[&MorBasis { src: f.src, coeff: e, dst: x2 }]).or_default().toggle(unit);
                }
            }
            for &(b0, t) in &b_in[f.src] {
                for &(x1, x2) in t.terms() {
                    let op2 = a2.op(x2);
                    for e in a1.mul(x1, f.coeff).iter() {
                        acc.entry(index[&MorBasis { src: b0, coeff: e, dst: f.dst }]).or_default().toggle(op2);
                    }
                }
            }
            acc
        })
        .collect();
    for (s, row) in rows.into_iter().enumerate() {
        for (t, c) in row {
            if !c.is_zero() {
                out.add_arrow(s, t, c)?;
            }
        }
    }
    gate(&out)?;
    let provenance = vec![format!("opposite of the {} action", side_name(other(side)))];
    Ok(Contracted { module: out, provenance })
}

/// `Mor(M, B)`, pairing `M` with the `side` action of `B`; the remaining
/// action is kept as is.
pub fn mor_d_dd(m: &TypeD, b: &TypeDD, side: Side) -> Result<Contracted, PairingError> {
    let b = oriented(b, side);
    let (a1, a2): (Arc<SurfaceAlgebra>, Arc<SurfaceAlgebra>) = (b.ring().0.clone(), b.ring().1.clone());
    if a1.pmc() != m.algebra().pmc() {
        return Err(PairingError::AlgebraMismatch);
    }
    let gb = b.generators();
    let gm = m.generators();
    let basis = mor_basis(
        &a1,
        gm.iter().enumerate().map(|(i, g)| (i, g.idempotent)),
        gb.iter().enumerate().map(|(i, g)| (i, g.idempotent.0)),
    );
    let index: HashMap<&MorBasis, usize> = basis.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let b_out = out_arrows(&b);
    let m_in = in_arrows(m);
    let mut out = Module::new(Single(a2.clone()));
    for f in &basis {
        out.add_generator(mor_name(&a1, &gm[f.src].name, f.coeff, &gb[f.dst].name), gb[f.dst].idempotent.1)?;
    }
    let rows: Vec<BTreeMap<usize, Elem>> = basis
        .par_iter()
        .map(|f| {
            let mut acc: BTreeMap<usize, Elem> = BTreeMap::new();
            let unit = a2.idempotent(gb[f.dst].idempotent.1);
            let a = Elem::single(f.coeff);
            for c in a1.diff(f.coeff).iter() {
                acc.entry(index[&MorBasis { src: f.src, coeff: c, dst: f.dst }]).or_default().toggle(unit);
            }
            for &(b2, t) in &b_out[f.dst] {
                for &(x1, x2) in t.terms() {
                    for e in a1.mul(f.coeff, x1).iter() {
                        acc.entry(index[&MorBasis { src: f.src, coeff: e, dst: b2 }]).or_default().toggle(x2);
                    }
                }
            }
            for &(w, c) in &m_in[f.src] {
                for e in a1.mul_elem(c, &a).iter() {
                    acc.entry(index[&MorBasis { src: w, coeff: e, dst: f.dst }]).or_default().toggle(unit);
                }
            }
            acc
        })
        .collect();
    for (s, row) in rows.into_iter().enumerate() {
        for (t, c) in row {
            if !c.is_zero() {
                out.add_arrow(s, t, c)?;
            }
        }
    }
    gate(&out)?;
    Ok(Contracted { module: out, provenance: Vec::new() })
}

fn gate(m: &TypeD) -> Result<(), PairingError> {
    match m.verify_d2().len() {
        0 => Ok(()),
        k => Err(PairingError::NotAComplex(k)),
    }
}

fn other(side: Side) -> Side {
    match side {
        Side::Left => Side::Right,
        Side::Right => Side::Left,
    }
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
    }
}

/// Number of Mor basis elements: `Σ_{x,y} dim I(x)·A·I(y)`.
pub fn mor_basis_count(m: &TypeD, n: &TypeD) -> usize {
    let alg = m.algebra();
    m.generators()
        .iter()
        .flat_map(|x| n.generators().iter().map(move |y| alg.corner(x.idempotent, y.idempotent).len()))
        .sum()
}

/// Generator count of `Mor(B, M)` before reduction.
pub fn bimodule_mor_count(b: &TypeDD, m: &TypeD, side: Side) -> usize {
    let b = oriented(b, side);
    let alg = &b.ring().0;
    b.generators()
        .iter()
        .flat_map(|x| m.generators().iter().map(move |y| alg.corner(x.idempotent.0, y.idempotent).len()))
        .sum()
}
