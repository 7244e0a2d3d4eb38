mod common;

use std::sync::Arc;

use bhf::catalog::{dehn_twist_dd, h_infinity, h_minus_one, h_zero, Twist};
use bhf::pairing::{mor_d_d, mor_dd_d, Side};
use bhf::pmc::Pmc;
use bhf::surface::{algebra, BasisIdx, Elem, SurfaceAlgebra};
use common::{random_element, random_f2u};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn strand_d_squared(seed: u64, n in 1u8..=6) {
        let a = random_element(&mut rng(seed), n, 4);
        prop_assert!(a.differential().differential().is_zero());
    }

    #[test]
    fn strand_leibniz(seed: u64, n in 1u8..=6) {
        let mut r = rng(seed);
        let (a, b) = (random_element(&mut r, n, 3), random_element(&mut r, n, 3));
        let lhs = a.multiply(&b).unwrap().differential();
        let rhs = a.differential().multiply(&b).unwrap().add(&a.multiply(&b.differential()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn strand_associativity(seed: u64, n in 1u8..=6) {
        let mut r = rng(seed);
        let (a, b, c) = (random_element(&mut r, n, 3), random_element(&mut r, n, 3), random_element(&mut r, n, 3));
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

fn algebras() -> Vec<Arc<SurfaceAlgebra>> {
    [Pmc::torus(), Pmc::split(2).unwrap(), Pmc::antipodal(2).unwrap()].iter().map(algebra).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// Products and differentials computed in the ambient strand algebra
    /// land back in `A(Z)` and agree with the basis tables.
    #[test]
    fn surface_algebra_closed(which in 0usize..3, a: u32, b: u32) {
        let alg = &algebras()[which];
        let dim = alg.dim() as BasisIdx;
        let (a, b) = (a % dim, b % dim);
        let (sa, sb) = (alg.to_strands(&Elem::single(a)), alg.to_strands(&Elem::single(b)));
        let prod = sa.multiply(&sb).unwrap();
        prop_assert_eq!(alg.decompose(&prod).unwrap(), alg.mul(a, b));
        prop_assert_eq!(alg.decompose(&sa.differential()).unwrap(), alg.diff(a));
    }

    #[test]
    fn f2u_homology_matches_truncations(seed: u64) {
        let (c, expected) = random_f2u(&mut rng(seed), 8, 4);
        prop_assert_eq!(c.d_squared_defect(), 0);
        let h = c.homology().unwrap();
        prop_assert_eq!(&h, &expected);
        for n in 1..=6 {
            prop_assert_eq!(h.truncated_rank(n), c.truncate(n).homology_rank().unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Reduction keeps `d² = 0`, leaves no unit arrows and preserves the
    /// homology of morphisms out of every solid torus.
    #[test]
    fn reduce_invariants(word in prop::collection::vec(0usize..4, 0..4), start in 0usize..3) {
        let tori = [h_infinity(), h_zero(), h_minus_one()];
        let mut m = tori[start].clone();
        for &t in word.iter().rev() {
            m = mor_dd_d(&dehn_twist_dd(Twist::ALL[t]), &m, Side::Left).unwrap().module;
        }
        let r = m.reduce();
        prop_assert!(r.verify_d2().is_empty());
        prop_assert!(r.is_reduced());
        prop_assert!(r.len() <= m.len());
        for h in &tori {
            prop_assert_eq!(
                mor_d_d(h, &r).unwrap().homology_rank().unwrap(),
                mor_d_d(h, &m).unwrap().homology_rank().unwrap()
            );
        }
    }
}
