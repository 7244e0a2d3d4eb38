//! Arc-slides between pointed matched circles and the DD bimodules of
//! underslides.

use std::collections::HashSet;

use thiserror::Error;

use crate::dmod::{Pair, TensorElem, TypeDD};
use crate::pmc::{PairSet, Pmc};
use crate::surface::{algebra, BasisIdx, SurfaceAlgebra};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArcSlideError {
    #[error("points {0} and {1} are not adjacent")]
    NotAdjacent(u8, u8),
    #[error("points {0} and {1} are matched to each other")]
    SamePair(u8, u8),
    #[error("point {0} is not on the circle")]
    BadPoint(u8),
    #[error("overslide bimodules are not supported")]
    OverslideUnsupported,
    #[error("near-chord search left {0} nonzero terms in d^2")]
    ConstraintSearchFailed(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SlideKind {
    Underslide,
    Overslide,
}

/// Sliding the foot `b1` over the pair `C = {c1, c2}` at `c1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcSlide {
    pub source: Pmc,
    pub target: Pmc,
    pub b1: u8,
    pub c1: u8,
    /// Position of the new foot in the target.
    pub b1_prime: u8,
    pub kind: SlideKind,
    /// `point_map[p - 1]`: position in the target of source point `p`
    /// (`b1` goes to `b1'`).
    pub point_map: Vec<u8>,
}

pub fn make_arcslide(z: &Pmc, b1: u8, c1: u8) -> Result<ArcSlide, ArcSlideError> {
    let n = z.num_points() as u8;
    for p in [b1, c1] {
        if p == 0 || p > n {
            return Err(ArcSlideError::BadPoint(p));
        }
    }
    if b1.abs_diff(c1) != 1 {
        return Err(ArcSlideError::NotAdjacent(b1, c1));
    }
    if z.partner(b1) == c1 {
        return Err(ArcSlideError::SamePair(b1, c1));
    }
    let c2 = z.partner(c1);
    let (lo, hi) = (c1.min(c2), c1.max(c2));
    let kind = if lo < b1 && b1 < hi { SlideKind::Underslide } else { SlideKind::Overslide };
    // order of the target circle, with 0 standing for b1'
    let mut order: Vec<u8> = (1..=n).filter(|&p| p != b1).collect();
    let at = order.iter().position(|&p| p == c2).expect("c2 on circle");
    // the arc b1 -> c1 and the arc b1' -> c2 run in opposite directions
    order.insert(if b1 > c1 { at } else { at + 1 }, 0);
    let mut point_map = vec![0u8; n as usize];
    let mut b1_prime = 0;
    for (i, &p) in order.iter().enumerate() {
        let pos = i as u8 + 1;
        if p == 0 {
            b1_prime = pos;
            point_map[b1 as usize - 1] = pos;
        } else {
            point_map[p as usize - 1] = pos;
        }
    }
    let mut partner = vec![0u8; n as usize];
    for p in 1..=n {
        partner[point_map[p as usize - 1] as usize - 1] = point_map[z.partner(p) as usize - 1];
    }
    let target = Pmc::from_partner(z.genus(), partner).expect("arc-slides preserve validity");
    Ok(ArcSlide { source: z.clone(), target, b1, c1, b1_prime, kind, point_map })
}

impl ArcSlide {
    fn map(&self, p: u8) -> u8 {
        self.point_map[p as usize - 1]
    }

    /// Pair index in the target of a source pair.
    fn pair_image(&self, pair: usize) -> usize {
        let (u, _) = self.source.pairs()[pair];
        self.target.pair_of(self.map(u))
    }

    fn pairs_image(&self, s: PairSet) -> PairSet {
        PairSet::from_pairs(s.iter().map(|p| self.pair_image(p)))
    }

    /// Every underslide on `z`.
    pub fn underslides(z: &Pmc) -> Vec<ArcSlide> {
        let n = z.num_points() as u8;
        let mut out = Vec::new();
        for b1 in 1..=n {
            for c1 in [b1.wrapping_sub(1), b1 + 1] {
                if let Ok(s) = make_arcslide(z, b1, c1) {
                    if s.kind == SlideKind::Underslide {
                        out.push(s);
                    }
                }
            }
        }
        out
    }
}

/// Multiplicities of a diagram on the intervals of the circle with `gone`
/// merged into `into`; `flip` reads points in reversed coordinates.
fn projected_support(alg: &SurfaceAlgebra, b: BasisIdx, gone: u8, into: u8, flip: bool) -> Vec<u8> {
    let n = alg.n();
    let pos = |p: u8| {
        let p = if p == gone { into } else { p };
        p - 1 - u8::from(p > gone)
    };
    let mut v = vec![0u8; n as usize - 2];
    for &(s, t) in alg.get(b).canonical.strands() {
        let (s, t) = if flip { (n + 1 - t, n + 1 - s) } else { (s, t) };
        for m in v.iter_mut().take(pos(t) as usize).skip(pos(s) as usize) {
            *m += 1;
        }
    }
    v
}

/// `CFDD` of an underslide over `A(Z) ⊗ A(-Z')`.
///
/// Coefficients are the pairs of basis elements whose supports agree once
/// the short chords `[b1, c1]` and `[b1', c2]` are collapsed, keeping those
/// that do not factor through another generator. The result is checked to
/// satisfy `d² = 0`.
pub fn underslide_dd(slide: &ArcSlide) -> Result<TypeDD, ArcSlideError> {
    if slide.kind != SlideKind::Underslide {
        return Err(ArcSlideError::OverslideUnsupported);
    }
    let z = &slide.source;
    let zp = &slide.target;
    let (a1, a2) = (algebra(z), algebra(&zp.reverse()));
    let full = z.full_pair_set();
    let pb = z.pair_of(slide.b1);
    let pc = z.pair_of(slide.c1);
    let pairs = z.pairs();
    let name = |tag: &str, s: PairSet| {
        let pts: Vec<String> = s.iter().map(|p| pairs[p].0.to_string()).collect();
        format!("{tag}[{}]", pts.join(","))
    };
    // (name, s, t) with both in source pair labels
    let mut gens: Vec<(String, PairSet, PairSet)> = Vec::new();
    for s in (0..=full.0).map(PairSet) {
        gens.push((name("I", s), s, PairSet(full.0 & !s.0)));
    }
    let rest = full.0 & !(1 << pb) & !(1 << pc);
    for r in (0..=full.0).filter(|r| r & !rest == 0) {
        let s = PairSet(r | 1 << pc);
        let t = PairSet((rest & !r) | 1 << pc);
        gens.push((name("J", s), s, t));
    }
    let mut m = TypeDD::new(Pair(a1.clone(), a2.clone()));
    let idems: Vec<(PairSet, PairSet)> =
        gens.iter().map(|(_, s, t)| (*s, zp.reverse_pairs(slide.pairs_image(*t)))).collect();
    for ((n, _, _), &i) in gens.iter().zip(&idems) {
        m.add_generator(n.clone(), i).expect("distinct near-complementary pairs");
    }

    let c2 = z.partner(slide.c1);
    let sup1: Vec<Vec<u8>> =
        (0..a1.dim() as BasisIdx).map(|b| projected_support(&a1, b, slide.b1, slide.c1, false)).collect();
    let sup2: Vec<Vec<u8>> =
        (0..a2.dim() as BasisIdx).map(|b| projected_support(&a2, b, slide.b1_prime, slide.map(c2), true)).collect();

    let g = gens.len();
    let mut cand: Vec<Vec<Vec<(BasisIdx, BasisIdx)>>> = vec![vec![Vec::new(); g]; g];
    for x in 0..g {
        for y in 0..g {
            let (ix, iy) = (idems[x], idems[y]);
            for &u in a1.corner(ix.0, iy.0) {
                for &v in a2.corner(ix.1, iy.1) {
                    if (a1.is_idempotent(u) && a2.is_idempotent(v)) || sup1[u as usize] != sup2[v as usize] {
                        continue;
                    }
                    cand[x][y].push((u, v));
                }
            }
        }
    }
    let mut composite: HashSet<(usize, usize, BasisIdx, BasisIdx)> = HashSet::new();
    for x in 0..g {
        for w in 0..g {
            for &(u1, u2) in &cand[x][w] {
                for y in 0..g {
                    for &(v1, v2) in &cand[w][y] {
                        let p1 = a1.mul(u1, v1);
                        if p1.is_zero() {
                            continue;
                        }
                        let p2 = a2.mul(u2, v2);
                        for c1 in p1.iter() {
                            for c2 in p2.iter() {
                                composite.insert((x, y, c1, c2));
                            }
                        }
                    }
                }
            }
        }
    }
    for x in 0..g {
        for y in 0..g {
            let terms: Vec<(BasisIdx, BasisIdx)> =
                cand[x][y].iter().copied().filter(|&(u, v)| !composite.contains(&(x, y, u, v))).collect();
            if !terms.is_empty() {
                m.add_arrow(x, y, TensorElem::from_terms(terms)).expect("compatible by construction");
            }
        }
    }
    match m.verify_d2().len() {
        0 => Ok(m),
        k => Err(ArcSlideError::ConstraintSearchFailed(k)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{dehn_twist_dd, Twist};

    #[test]
    fn classification_on_the_torus() {
        let t = Pmc::torus();
        let kinds: Vec<(u8, u8, SlideKind)> =
            [(1, 2), (2, 1), (2, 3), (3, 2), (3, 4), (4, 3)].iter().map(|&(b, c)| (b, c, make_arcslide(&t, b, c).unwrap().kind)).collect();
        let under: Vec<(u8, u8)> =
            kinds.iter().filter(|k| k.2 == SlideKind::Underslide).map(|k| (k.0, k.1)).collect();
        assert_eq!(under, vec![(2, 1), (2, 3), (3, 2), (3, 4)]);
        for (b, c) in under {
            assert_eq!(make_arcslide(&t, b, c).unwrap().target, t);
        }
    }

    #[test]
    fn bad_slides_rejected() {
        let t = Pmc::torus();
        assert_eq!(make_arcslide(&t, 1, 3), Err(ArcSlideError::NotAdjacent(1, 3)));
        let s = Pmc::split(2).unwrap();
        assert_eq!(make_arcslide(&s, 4, 5).unwrap().kind, SlideKind::Overslide);
        assert!(matches!(underslide_dd(&make_arcslide(&t, 1, 2).unwrap()), Err(ArcSlideError::OverslideUnsupported)));
    }

    #[test]
    fn genus_one_generator_count() {
        let s = make_arcslide(&Pmc::torus(), 3, 2).unwrap();
        assert_eq!(underslide_dd(&s).unwrap().len(), 4 + 1);
    }

    #[test]
    fn genus_two_slides_multiply_genus_one_ranks() {
        use crate::catalog::{handlebody, hf_genus1, Genus1Fixture, TwistWord};
        use crate::pairing::{mor_d_d, mor_dd_d, Side};
        let z = Pmc::split(2).unwrap();
        let h = handlebody(2).unwrap();
        let inf = Genus1Fixture { start: crate::catalog::h_infinity(), closing: crate::catalog::h_infinity() };
        for (b, c, t) in [(3, 2, Twist::Mu), (2, 1, Twist::Lambda), (7, 8, Twist::MuInv), (6, 7, Twist::LambdaInv)] {
            let s = make_arcslide(&z, b, c).unwrap();
            assert_eq!(s.target, z);
            let m = mor_dd_d(&underslide_dd(&s).unwrap(), &h, Side::Left).unwrap().module.reduce();
            let rank = mor_d_d(&h, &m).unwrap().homology_rank().unwrap();
            assert_eq!(rank, 2 * hf_genus1(&TwistWord(vec![t]), &inf).unwrap(), "{b} over {c}");
        }
    }

    #[test]
    fn genus_one_underslides_are_twists() {
        for (b, c, t) in [(3, 2, Twist::Mu), (3, 4, Twist::MuInv), (2, 1, Twist::Lambda), (2, 3, Twist::LambdaInv)] {
            let s = make_arcslide(&Pmc::torus(), b, c).unwrap();
            let m = underslide_dd(&s).unwrap().restrict(|(i, _)| i.len() == 1).reduce();
            assert!(m.iso_check(&dehn_twist_dd(t).reduce()).unwrap().is_some(), "{b} over {c}");
        }
    }
}
