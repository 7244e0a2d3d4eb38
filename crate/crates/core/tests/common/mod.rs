//! Random inputs shared by the property suites.
#![allow(dead_code)]

use bhf::f2u::{F2UComplex, F2UDecomposition, Poly, Torsion};
use bhf::strand::{AlgebraElement, StrandDiagram};
use rand::seq::SliceRandom;
use rand::Rng;

/// A uniformly shaped random upward-veering diagram in `A(n)`.
pub fn random_diagram<R: Rng>(rng: &mut R, n: u8) -> StrandDiagram {
    loop {
        let k = rng.gen_range(0..=n as usize);
        let mut pts: Vec<u8> = (1..=n).collect();
        pts.shuffle(rng);
        let mut starts = pts[..k].to_vec();
        pts.shuffle(rng);
        let mut ends = pts[..k].to_vec();
        starts.sort_unstable();
        ends.sort_unstable();
        // sorted pairing is upward iff any pairing is possible; then permute
        if starts.iter().zip(&ends).any(|(s, t)| t < s) {
            continue;
        }
        let mut perm = ends.clone();
        perm.shuffle(rng);
        let strands: Vec<(u8, u8)> = starts.iter().copied().zip(perm).collect();
        if let Ok(d) = StrandDiagram::new(n, strands) {
            return d;
        }
    }
}

pub fn random_element<R: Rng>(rng: &mut R, n: u8, max_terms: usize) -> AlgebraElement {
    let k = rng.gen_range(1..=max_terms);
    AlgebraElement::from_terms(n, (0..k).map(|_| random_diagram(rng, n))).expect("same ambient")
}

/// A random F2[U] complex with known homology: a direct sum of free
/// generators and pairs `x -> U^k y`, conjugated by elementary basis
/// changes `e_i += U^j e_l`. Entries stay within degree `max_degree`.
pub fn random_f2u<R: Rng>(rng: &mut R, max_gens: usize, max_degree: u32) -> (F2UComplex, F2UDecomposition) {
    loop {
        let n = rng.gen_range(1..=max_gens);
        let mut d = vec![vec![Poly::zero(); n]; n];
        let mut free = 0;
        let mut torsion = Vec::new();
        let mut i = 0;
        while i < n {
            if i + 1 < n && rng.gen_bool(0.6) {
                let k = rng.gen_range(0..=max_degree);
                d[i][i + 1] = Poly::monomial(k);
                if k > 0 {
                    torsion.push(Torsion { exponent: k, grading: None });
                }
                i += 2;
            } else {
                free += 1;
                i += 1;
            }
        }
        if n >= 2 {
            for _ in 0..rng.gen_range(0..=3 * n) {
                let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if a == b {
                    continue;
                }
                let j = rng.gen_range(0..=1);
                // D' = P D P^-1 with P = 1 + U^j E_ab
                let row_b: Vec<Poly> = d[b].iter().map(|p| p.shl(j)).collect();
                for (x, p) in d[a].iter_mut().zip(row_b) {
                    x.add_assign(&p);
                }
                for row in d.iter_mut() {
                    let add = row[a].shl(j);
                    row[b].add_assign(&add);
                }
            }
        }
        if d.iter().flatten().any(|p| p.degree().is_some_and(|g| g > max_degree)) {
            continue;
        }
        let names = (0..n).map(|i| format!("g{i}")).collect();
        let mut c = F2UComplex::new(names);
        for (s, row) in d.iter().enumerate() {
            for (t, p) in row.iter().enumerate() {
                if !p.is_zero() {
                    c.add_entry(s, t, p).expect("in range");
                }
            }
        }
        torsion.sort_by(|a, b| b.cmp(a));
        let expected = F2UDecomposition { free_rank: free, free_gradings: None, torsion, other_torsion: vec![] };
        return (c, expected);
    }
}
