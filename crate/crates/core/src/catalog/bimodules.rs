//! The identity DD bimodule and the torus Dehn-twist bimodules.

use std::fmt;
use std::str::FromStr;

use crate::dmod::{Pair, TensorElem, TypeDD};
use crate::pmc::{Chord, PairSet, Pmc};
use crate::surface::{algebra, Elem, SurfaceAlgebra};

use super::CatalogError;

/// Name of the generator `I(s) ⊗ I'(s')`: the smaller points of the pairs in `s`.
pub(crate) fn idem_name(pmc: &Pmc, s: PairSet) -> String {
    let pairs = pmc.pairs();
    let pts: Vec<String> = s.iter().map(|p| pairs[p].0.to_string()).collect();
    format!("I[{}]", pts.join(","))
}

/// Terms of `e` with the given left idempotent, grouped by right idempotent.
pub(crate) fn split_by_right(alg: &SurfaceAlgebra, e: &Elem, left: PairSet) -> Vec<(PairSet, Elem)> {
    let mut groups: Vec<(PairSet, Elem)> = Vec::new();
    for b in e.iter() {
        let be = alg.get(b);
        if be.left != left {
            continue;
        }
        match groups.iter_mut().find(|(r, _)| *r == be.right) {
            Some((_, g)) => g.toggle(b),
            None => groups.push((be.right, Elem::single(b))),
        }
    }
    groups
}

/// The chord of `-Z` traversing `ρ` backwards.
pub(crate) fn reversed_chord(pmc: &Pmc, rho: Chord) -> Chord {
    Chord { start: pmc.reverse_point(rho.end), end: pmc.reverse_point(rho.start) }
}

/// `CFDD(Id)` over `A(Z) ⊗ A(-Z)`: generators `I(s) ⊗ I'(t)` with `t` the
/// complement of `s`, and `δ = Σ_ρ a(ρ) ⊗ a'(ρ)`.
pub fn dd_identity(z: &Pmc) -> TypeDD {
    let rz = z.reverse();
    let (a1, a2) = (algebra(z), algebra(&rz));
    let full = z.full_pair_set();
    let comp = |s: PairSet| z.reverse_pairs(PairSet(full.0 & !s.0));
    let mut m = TypeDD::new(Pair(a1.clone(), a2.clone()));
    let sets: Vec<PairSet> = (0..=full.0).map(PairSet).collect();
    for &s in &sets {
        m.add_generator(idem_name(z, s), (s, comp(s))).expect("distinct idempotents");
    }
    let chords: Vec<(Elem, Elem)> = z
        .chords()
        .into_iter()
        .map(|rho| (a1.chord_elem(rho), a2.chord_elem(reversed_chord(z, rho))))
        .collect();
    for (si, &s) in sets.iter().enumerate() {
        for (e1, e2) in &chords {
            for (j, left) in split_by_right(&a1, e1, s) {
                let right: Elem = Elem::from_indices(e2.iter().filter(|&b| {
                    let be = a2.get(b);
                    be.left == comp(s) && be.right == comp(j)
                }));
                if right.is_zero() {
                    continue;
                }
                let tj = sets.iter().position(|&t| t == j).expect("pair set");
                m.add_arrow(si, tj, TensorElem::pure(&left, &right)).expect("compatible by construction");
            }
        }
    }
    m
}

/// The four torus Dehn twists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Twist {
    Mu,
    MuInv,
    Lambda,
    LambdaInv,
}

impl Twist {
    pub const ALL: [Twist; 4] = [Twist::Mu, Twist::MuInv, Twist::Lambda, Twist::LambdaInv];

    pub fn inverse(self) -> Twist {
        match self {
            Twist::Mu => Twist::MuInv,
            Twist::MuInv => Twist::Mu,
            Twist::Lambda => Twist::LambdaInv,
            Twist::LambdaInv => Twist::Lambda,
        }
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Twist::Mu => "Tm",
            Twist::MuInv => "Tm'",
            Twist::Lambda => "Tl",
            Twist::LambdaInv => "Tl'",
        })
    }
}

impl FromStr for Twist {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Twist, CatalogError> {
        match s {
            "Tm" => Ok(Twist::Mu),
            "Tm'" => Ok(Twist::MuInv),
            "Tl" => Ok(Twist::Lambda),
            "Tl'" => Ok(Twist::LambdaInv),
            _ => Err(CatalogError::Unknown(s.to_string())),
        }
    }
}

const I0: PairSet = PairSet(1);
const I1: PairSet = PairSet(2);

type Arrow = (&'static str, &'static str, &'static [(&'static str, &'static str)]);
type Gen = (&'static str, (PairSet, PairSet));

/// Central-summand bimodule of a torus Dehn twist; `ρ` labels the first
/// algebra and `σ` the second.
pub fn dehn_twist_dd(which: Twist) -> TypeDD {
    let (gens, arrows): (&[Gen], &[Arrow]) = match which {
        Twist::Mu => (
            &[("p", (I0, I0)), ("q", (I1, I1)), ("r", (I1, I0))],
            &[
                ("p", "q", &[("rho1", "rho3"), ("rho123", "rho123")]),
                ("p", "r", &[("rho3", "rho12")]),
                ("q", "r", &[("rho23", "rho2")]),
                ("r", "p", &[("rho2", "iota0")]),
                ("r", "q", &[("iota1", "rho1")]),
            ],
        ),
        Twist::MuInv => (
            &[("p", (I0, I0)), ("q", (I1, I1)), ("r", (I1, I0))],
            &[
                ("p", "q", &[("rho1", "rho3"), ("rho123", "rho123")]),
                ("p", "r", &[("rho3", "iota0")]),
                ("q", "r", &[("iota1", "rho2")]),
                ("r", "p", &[("rho2", "rho12")]),
                ("r", "q", &[("rho23", "rho1")]),
            ],
        ),
        Twist::Lambda => (
            &[("p", (I0, I0)), ("q", (I1, I1)), ("s", (I0, I1))],
            &[
                ("p", "q", &[("rho3", "rho1"), ("rho123", "rho123")]),
                ("p", "s", &[("rho12", "rho3")]),
                ("q", "s", &[("rho2", "rho23")]),
                ("s", "q", &[("rho1", "iota1")]),
                ("s", "p", &[("iota0", "rho2")]),
            ],
        ),
        Twist::LambdaInv => (
            &[("p", (I0, I0)), ("q", (I1, I1)), ("s", (I0, I1))],
            &[
                ("p", "q", &[("rho3", "rho1"), ("rho123", "rho123")]),
                ("q", "s", &[("rho2", "iota1")]),
                ("p", "s", &[("iota0", "rho3")]),
                ("s", "q", &[("rho1", "rho23")]),
                ("s", "p", &[("rho12", "rho2")]),
            ],
        ),
    };
    let t = algebra(&Pmc::torus());
    let mut m = TypeDD::new(Pair(t.clone(), t));
    for (n, i) in gens {
        m.add_generator(*n, *i).expect("fixture");
    }
    for (s, d, terms) in arrows {
        m.arrow_label_terms(s, d, terms).expect("fixture");
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_identity_counts() {
        let m = dd_identity(&Pmc::torus());
        assert_eq!(m.len(), 4);
        assert!(m.verify_d2().is_empty());
    }

    #[test]
    fn torus_central_summand_matches_fixture() {
        let m = dd_identity(&Pmc::torus()).restrict(|(s, _)| s.len() == 1).sorted();
        let t = algebra(&Pmc::torus());
        let mut want = TypeDD::new(Pair(t.clone(), t));
        want.add_generator("I[1]", (I0, I0)).unwrap();
        want.add_generator("I[2]", (I1, I1)).unwrap();
        want.arrow_label_terms("I[1]", "I[2]", &[("rho1", "rho3"), ("rho3", "rho1"), ("rho123", "rho123")]).unwrap();
        want.arrow_label_terms("I[2]", "I[1]", &[("rho2", "rho2")]).unwrap();
        assert_eq!(m, want);
    }

    #[test]
    fn twists_square_to_zero() {
        for t in Twist::ALL {
            assert!(dehn_twist_dd(t).verify_d2().is_empty(), "{t}");
        }
    }

    #[test]
    fn deleting_an_arrow_breaks_d2() {
        let mut m = dehn_twist_dd(Twist::Mu);
        m.arrow_label_terms("r", "q", &[("iota1", "rho1")]).unwrap();
        assert!(!m.verify_d2().is_empty());
    }

    #[test]
    fn twist_names_round_trip() {
        for t in Twist::ALL {
            assert_eq!(t.to_string().parse::<Twist>().unwrap(), t);
        }
        assert!("Tx".parse::<Twist>().is_err());
    }
}
