//! Solid tori, the surgery triangle between them, and split handlebodies.

use std::collections::BTreeMap;

use crate::dmod::{DmodError, Single, TypeD};
use crate::linalg::{rank, BitRow, Echelon};
use crate::pairing::{mor_d_d, MorBasis, PairingError};
use crate::pmc::{Chord, PairSet, Pmc};
use crate::surface::{algebra, BasisIdx, Elem, SurfaceAlgebra};

const IOTA0: PairSet = PairSet(1);
const IOTA1: PairSet = PairSet(2);

/// A torus-algebra module from labelled generators and arrows.
pub fn torus_module(gens: &[(&str, PairSet)], arrows: &[(&str, &str, &str)]) -> Result<TypeD, DmodError> {
    let mut m = TypeD::new(Single(algebra(&Pmc::torus())));
    for (n, i) in gens {
        m.add_generator(*n, *i)?;
    }
    for (s, d, c) in arrows {
        m.arrow_labels(s, d, c)?;
    }
    Ok(m)
}

/// `∂r = ρ23 r`.
pub fn h_infinity() -> TypeD {
    torus_module(&[("r", IOTA1)], &[("r", "r", "rho23")]).expect("fixture")
}

/// `∂a = (ρ1 + ρ3) b`.
pub fn h_minus_one() -> TypeD {
    torus_module(&[("a", IOTA0), ("b", IOTA1)], &[("a", "b", "rho1 + rho3")]).expect("fixture")
}

/// `∂n = ρ12 n`.
pub fn h_zero() -> TypeD {
    torus_module(&[("n", IOTA0)], &[("n", "n", "rho12")]).expect("fixture")
}

/// A morphism of type D structures, `x ↦ Σ a·y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub images: BTreeMap<(usize, usize), Elem>,
}

impl ModuleMap {
    pub fn from_labels(src: &TypeD, dst: &TypeD, terms: &[(&str, &str, &str)]) -> Result<ModuleMap, DmodError> {
        let alg = src.algebra();
        let mut images: BTreeMap<(usize, usize), Elem> = BTreeMap::new();
        for (x, c, y) in terms {
            let (i, j) = (src.index(x)?, dst.index(y)?);
            let e = alg.parse_elem(c).map_err(|_| DmodError::UnknownGenerator(c.to_string()))?;
            images.entry((i, j)).or_default().add_assign(&e);
        }
        Ok(ModuleMap { images })
    }

    /// `d(f) = 0` in the morphism complex.
    pub fn is_chain_map(&self, src: &TypeD, dst: &TypeD) -> Result<bool, PairingError> {
        let c = mor_d_d(src, dst)?;
        let mut acc = BitRow::zeros(c.basis.len());
        for (&(x, y), e) in &self.images {
            for a in e.iter() {
                let i = c.index(&MorBasis { src: x, coeff: a, dst: y }).ok_or(PairingError::AlgebraMismatch)?;
                for &t in c.complex.targets(i) {
                    acc.flip(t);
                }
            }
        }
        Ok(acc.is_zero())
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &ModuleMap, alg: &SurfaceAlgebra) -> ModuleMap {
        let mut images: BTreeMap<(usize, usize), Elem> = BTreeMap::new();
        for (&(x, y), a) in &self.images {
            for (&(_, z), b) in g.images.range((y, 0)..(y + 1, 0)) {
                images.entry((x, z)).or_default().add_assign(&alg.mul_elem(a, b));
            }
        }
        images.retain(|_, e| !e.is_zero());
        ModuleMap { images }
    }

    /// The F2-linear map on underlying vector spaces `⊕ A·I(x)`.
    pub fn linear(&self, src: &TypeD, dst: &TypeD) -> Vec<BitRow> {
        let alg = src.algebra();
        let (sb, _) = vector_basis(src);
        let (_, db) = vector_basis(dst);
        sb.iter()
            .map(|&(c, x)| {
                let mut row = BitRow::zeros(db.len());
                for (&(_, y), a) in self.images.range((x, 0)..(x + 1, 0)) {
                    for t in alg.mul_elem(&Elem::single(c), a).iter() {
                        row.flip(db[&(t, y)]);
                    }
                }
                row
            })
            .collect()
    }
}

type VectorBasis = (Vec<(BasisIdx, usize)>, BTreeMap<(BasisIdx, usize), usize>);

/// Basis `c·x` of a module as an F2 vector space, with `c = c·I(x)`.
fn vector_basis(m: &TypeD) -> VectorBasis {
    let alg = m.algebra();
    let mut list = Vec::new();
    for (x, g) in m.generators().iter().enumerate() {
        for (c, b) in alg.basis().iter().enumerate() {
            if b.right == g.idempotent {
                list.push((c as BasisIdx, x));
            }
        }
    }
    let index = list.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    (list, index)
}

pub struct SolidTori {
    pub h_inf: TypeD,
    pub h_minus1: TypeD,
    pub h_zero: TypeD,
    /// `r ↦ b + ρ2 a`.
    pub phi: ModuleMap,
    /// `a ↦ n`, `b ↦ ρ2 n`.
    pub psi: ModuleMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleReport {
    pub d2_ok: bool,
    pub phi_chain_map: bool,
    pub psi_chain_map: bool,
    pub composite_zero: bool,
    pub phi_injective: bool,
    pub psi_surjective: bool,
    pub exact_middle: bool,
    /// F2 dimensions of the three modules.
    pub dims: [usize; 3],
}

impl TriangleReport {
    pub fn short_exact(&self) -> bool {
        self.d2_ok
            && self.phi_chain_map
            && self.psi_chain_map
            && self.composite_zero
            && self.phi_injective
            && self.psi_surjective
            && self.exact_middle
    }
}

pub fn solid_tori() -> SolidTori {
    let (h_inf, h_minus1, h_zero) = (h_infinity(), h_minus_one(), h_zero());
    let phi = ModuleMap::from_labels(&h_inf, &h_minus1, &[("r", "iota1", "b"), ("r", "rho2", "a")]).expect("fixture");
    let psi = ModuleMap::from_labels(&h_minus1, &h_zero, &[("a", "iota0", "n"), ("b", "rho2", "n")]).expect("fixture");
    SolidTori { h_inf, h_minus1, h_zero, phi, psi }
}

impl SolidTori {
    pub fn check(&self) -> Result<TriangleReport, PairingError> {
        let alg = self.h_inf.algebra().clone();
        let d2_ok = [&self.h_inf, &self.h_minus1, &self.h_zero].iter().all(|m| m.verify_d2().is_empty());
        let phi_chain_map = self.phi.is_chain_map(&self.h_inf, &self.h_minus1)?;
        let psi_chain_map = self.psi.is_chain_map(&self.h_minus1, &self.h_zero)?;
        let composite_zero = self.phi.then(&self.psi, &alg).images.is_empty();
        let lphi = self.phi.linear(&self.h_inf, &self.h_minus1);
        let lpsi = self.psi.linear(&self.h_minus1, &self.h_zero);
        let dims = [lphi.len(), lpsi.len(), vector_basis(&self.h_zero).0.len()];
        let rphi = rank(&lphi);
        let rpsi = rank(&lpsi);
        let phi_injective = rphi == dims[0];
        let psi_surjective = rpsi == dims[2];
        // ker ψ ⊇ im φ (composite zero) and equal dimensions
        let mut image = Echelon::new();
        for r in &lphi {
            image.insert(r);
        }
        let kernel = crate::linalg::kernel(&lpsi);
        let exact_middle = composite_zero && kernel.iter().all(|k| image.contains(k)) && kernel.len() == rphi;
        Ok(TriangleReport {
            d2_ok,
            phi_chain_map,
            psi_chain_map,
            composite_zero,
            phi_injective,
            psi_surjective,
            exact_middle,
            dims,
        })
    }
}

/// The genus-`k` handlebody: one generator over the algebra of the
/// reversed split circle, with `∂x = Σ a(ξ_i) x`.
pub fn handlebody(k: usize) -> Result<TypeD, DmodError> {
    let split = Pmc::split(k).map_err(|_| DmodError::BadIdempotent(format!("genus {k}")))?;
    let z = split.reverse();
    let alg = algebra(&z);
    let r = |p: usize| split.reverse_point(p as u8);
    let idem = PairSet::from_pairs((1..=k).map(|i| z.pair_of(r(4 * i - 3))));
    let unit = alg.idempotent(idem);
    let mut m = TypeD::new(Single(alg.clone()));
    m.add_generator("x", idem)?;
    let mut delta = Elem::zero();
    for i in 1..=k {
        let (a, b) = (r(4 * i - 1), r(4 * i - 3));
        let xi = alg.chord_elem(Chord { start: a, end: b });
        let part = alg.mul_elem(&alg.mul_elem(&Elem::single(unit), &xi), &Elem::single(unit));
        delta.add_assign(&part);
    }
    m.add_arrow(0, 0, delta)?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_is_short_exact() {
        let r = solid_tori().check().unwrap();
        assert_eq!(r.dims, [5, 8, 3]);
        assert!(r.short_exact(), "{r:?}");
    }

    #[test]
    fn broken_phi_detected() {
        let mut t = solid_tori();
        t.phi = ModuleMap::from_labels(&t.h_inf, &t.h_minus1, &[("r", "iota1", "b")]).unwrap();
        let r = t.check().unwrap();
        assert!(!r.phi_chain_map);
    }

    #[test]
    fn genus_one_handlebody_is_h_infinity() {
        let h = handlebody(1).unwrap();
        assert!(h.iso_check(&h_infinity()).unwrap().is_some());
    }

    #[test]
    fn genus_two_handlebody() {
        let h = handlebody(2).unwrap();
        assert!(h.verify_d2().is_empty());
        let alg = h.algebra();
        assert_eq!(h.coeff(0, 0).unwrap().len(), 2);
        assert_eq!(h.generators()[0].idempotent.len(), 2);
        assert_eq!(alg.pmc(), &Pmc::split(2).unwrap().reverse());
    }
}
