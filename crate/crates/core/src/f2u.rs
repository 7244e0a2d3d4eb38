//! Free chain complexes over F2[U] and their homology via Smith normal form.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::linalg::F2Complex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum F2UError {
    #[error("differential does not square to zero over F2[U] ({0} nonzero entries)")]
    NotAComplex(usize),
    #[error("entry {src} -> {dst} is not homogeneous for the grading")]
    InhomogeneousInput { src: String, dst: String },
    #[error("generator index {0} out of range")]
    BadIndex(usize),
    #[error("grading list has {got} entries, expected {expected}")]
    GradingLength { got: usize, expected: usize },
}

/// A polynomial over F2, bit `i` the coefficient of `U^i`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly(Vec<u64>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }
    pub fn one() -> Poly {
        Poly::monomial(0)
    }
    pub fn monomial(k: u32) -> Poly {
        let mut w = vec![0; k as usize / 64 + 1];
        w[k as usize / 64] = 1 << (k % 64);
        Poly(w)
    }
    pub fn from_exponents(exps: impl IntoIterator<Item = u32>) -> Poly {
        let mut p = Poly::zero();
        for e in exps {
            p.add_assign(&Poly::monomial(e));
        }
        p
    }
    pub fn exponents(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (i, &w) in self.0.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros();
                out.push(i as u32 * 64 + b);
                w &= w - 1;
            }
        }
        out
    }
    fn trim(mut self) -> Poly {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.0 == [1]
    }
    pub fn degree(&self) -> Option<u32> {
        let last = *self.0.last()?;
        Some((self.0.len() as u32 - 1) * 64 + 63 - last.leading_zeros())
    }
    /// Largest `k` with `U^k` dividing `self`.
    pub fn valuation(&self) -> Option<u32> {
        self.exponents().first().copied()
    }
    pub fn is_monomial(&self) -> bool {
        self.0.iter().map(|w| w.count_ones()).sum::<u32>() == 1
    }
    pub fn add_assign(&mut self, other: &Poly) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), 0);
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
        let t = std::mem::take(self).trim();
        *self = t;
    }
    pub fn add(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        p.add_assign(other);
        p
    }
    pub fn shl(&self, k: u32) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let (words, bits) = ((k / 64) as usize, k % 64);
        let mut out = vec![0u64; self.0.len() + words + 1];
        for (i, &w) in self.0.iter().enumerate() {
            out[i + words] ^= w << bits;
            if bits != 0 {
                out[i + words + 1] ^= w >> (64 - bits);
            }
        }
        Poly(out).trim()
    }
    /// `self / U^k`, discarding lower terms.
    pub fn shr(&self, k: u32) -> Poly {
        Poly::from_exponents(self.exponents().into_iter().filter(|&e| e >= k).map(|e| e - k))
    }
    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for e in self.exponents() {
            out.add_assign(&other.shl(e));
        }
        out
    }
    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut q = Poly::zero();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let s = rd - dd;
            q.add_assign(&Poly::monomial(s));
            r.add_assign(&d.shl(s));
        }
        (q, r)
    }
    /// Value at `U = 0`.
    pub fn constant(&self) -> bool {
        self.0.first().is_some_and(|w| w & 1 == 1)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "U".to_string(),
                _ => format!("U^{e}"),
            })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

/// A free F2[U] complex; `d(src) = Σ p·dst`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2UComplex {
    names: Vec<String>,
    gradings: Option<Vec<i64>>,
    entries: BTreeMap<(usize, usize), Poly>,
}

/// `F2[U]/U^exponent`, generated in `grading` when graded.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Torsion {
    pub exponent: u32,
    pub grading: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2UDecomposition {
    pub free_rank: usize,
    /// Sorted; present only for graded complexes.
    pub free_gradings: Option<Vec<i64>>,
    /// U-primary torsion, sorted by decreasing exponent.
    pub torsion: Vec<Torsion>,
    /// Torsion summands `F2[U]/p` with `p(0) = 1`; never arise from graded input.
    pub other_torsion: Vec<Poly>,
}

impl F2UDecomposition {
    /// `dim_F2 H(C ⊗ F2[U]/U^n)`.
    pub fn truncated_rank(&self, n: u32) -> usize {
        self.free_rank * n as usize + self.torsion.iter().map(|t| 2 * t.exponent.min(n) as usize).sum::<usize>()
    }
    pub fn exponents(&self) -> Vec<u32> {
        self.torsion.iter().map(|t| t.exponent).collect()
    }
}

impl fmt::Display for F2UDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match &self.free_gradings {
            Some(g) => parts.extend(g.iter().map(|a| format!("F2[U]{{{a}}}"))),
            None => parts.extend(std::iter::repeat_n("F2[U]".to_string(), self.free_rank)),
        }
        for t in &self.torsion {
            let base = if t.exponent == 1 { "F2".to_string() } else { format!("F2[U]/U^{}", t.exponent) };
            parts.push(match t.grading {
                Some(a) => format!("{base}{{{a}}}"),
                None => base,
            });
        }
        parts.extend(self.other_torsion.iter().map(|p| format!("F2[U]/({p})")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl F2UComplex {
    pub fn new(names: Vec<String>) -> F2UComplex {
        F2UComplex { names, gradings: None, entries: BTreeMap::new() }
    }

    pub fn with_gradings(names: Vec<String>, gradings: Vec<i64>) -> Result<F2UComplex, F2UError> {
        if gradings.len() != names.len() {
            return Err(F2UError::GradingLength { got: gradings.len(), expected: names.len() });
        }
        Ok(F2UComplex { names, gradings: Some(gradings), entries: BTreeMap::new() })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn gradings(&self) -> Option<&[i64]> {
        self.gradings.as_deref()
    }

    /// Adds `p·dst` to `d(src)`.
    pub fn add_entry(&mut self, src: usize, dst: usize, p: &Poly) -> Result<(), F2UError> {
        for i in [src, dst] {
            if i >= self.len() {
                return Err(F2UError::BadIndex(i));
            }
        }
        let cur = self.entries.remove(&(src, dst)).unwrap_or_default();
        let sum = cur.add(p);
        if !sum.is_zero() {
            self.entries.insert((src, dst), sum);
        }
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Poly)> {
        self.entries.iter().map(|(&(s, d), p)| (s, d, p))
    }

    pub fn entry(&self, src: usize, dst: usize) -> Option<&Poly> {
        self.entries.get(&(src, dst))
    }

    pub fn d_squared_defect(&self) -> usize {
        let mut acc: BTreeMap<(usize, usize), Poly> = BTreeMap::new();
        for (&(s, m), p) in &self.entries {
            for (&(_, t), q) in self.entries.range((m, 0)..(m + 1, 0)) {
                acc.entry((s, t)).or_default().add_assign(&p.mul(q));
            }
        }
        acc.values().filter(|p| !p.is_zero()).count()
    }

    pub fn check(&self) -> Result<(), F2UError> {
        match self.d_squared_defect() {
            0 => Ok(()),
            k => Err(F2UError::NotAComplex(k)),
        }
    }

    /// Every monomial `U^m` of an entry must satisfy `A(dst) - m = A(src)`.
    pub fn check_homogeneous(&self) -> Result<(), F2UError> {
        let Some(g) = &self.gradings else { return Ok(()) };
        for (&(s, d), p) in &self.entries {
            if p.exponents().into_iter().any(|m| g[d] - m as i64 != g[s]) {
                return Err(F2UError::InhomogeneousInput { src: self.names[s].clone(), dst: self.names[d].clone() });
            }
        }
        Ok(())
    }

    /// Drops all positive powers of `U`.
    pub fn specialize_u0(&self) -> F2Complex {
        let mut c = F2Complex::new(self.names.clone());
        for (&(s, d), p) in &self.entries {
            if p.constant() {
                c.toggle(s, d);
            }
        }
        c
    }

    /// The F2 complex `C/U^n` on generators `U^i x`, `i < n`.
    pub fn truncate(&self, n: u32) -> F2Complex {
        let k = self.len();
        let names = (0..n).flat_map(|i| self.names.iter().map(move |x| format!("U^{i}{x}"))).collect();
        let mut c = F2Complex::new(names);
        for (&(s, d), p) in &self.entries {
            for m in p.exponents() {
                for i in 0..n {
                    if i + m < n {
                        c.toggle(i as usize * k + s, (i + m) as usize * k + d);
                    }
                }
            }
        }
        c
    }

    /// Homology as free part plus torsion, graded when gradings are present.
    pub fn homology(&self) -> Result<F2UDecomposition, F2UError> {
        self.check()?;
        self.check_homogeneous()?;
        let n = self.len();
        // m[row][col]: coefficient of basis row in d(basis col)
        let mut m = vec![vec![Poly::zero(); n]; n];
        for (&(s, d), p) in &self.entries {
            m[d][s] = p.clone();
        }
        let mut row_gr: Vec<i64> = self.gradings.clone().unwrap_or_else(|| vec![0; n]);
        let mut col_gr = row_gr.clone();
        let mut diag: Vec<(Poly, i64)> = Vec::new();
        let mut t = 0;
        while t < n {
            let mut best: Option<(u32, usize, usize)> = None;
            for (i, row) in m.iter().enumerate().skip(t) {
                for (j, p) in row.iter().enumerate().skip(t) {
                    if let Some(deg) = p.degree() {
                        if best.is_none_or(|(bd, _, _)| deg < bd) {
                            best = Some((deg, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else { break };
            m.swap(t, pi);
            row_gr.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            col_gr.swap(t, pj);
            let piv = m[t][t].clone();
            let mut clean = true;
            for i in t + 1..n {
                if m[i][t].is_zero() {
                    continue;
                }
                let (q, r) = m[i][t].div_rem(&piv);
                for j in t..n {
                    let sub = q.mul(&m[t][j]);
                    m[i][j].add_assign(&sub);
                }
                clean &= r.is_zero();
            }
            for j in t + 1..n {
                if m[t][j].is_zero() {
                    continue;
                }
                let (q, r) = m[t][j].div_rem(&piv);
                for row in m.iter_mut().skip(t) {
                    let sub = q.mul(&row[t]);
                    row[j].add_assign(&sub);
                }
                clean &= r.is_zero();
            }
            if clean {
                diag.push((piv, row_gr[t]));
                t += 1;
            }
        }
        let r = diag.len();
        let mut torsion = Vec::new();
        let mut other_torsion = Vec::new();
        let graded = self.gradings.is_some();
        for (p, g) in &diag {
            let v = p.valuation().expect("nonzero pivot");
            if v > 0 {
                torsion.push(Torsion { exponent: v, grading: graded.then_some(*g) });
            }
            let rest = p.shr(v);
            if !rest.is_one() {
                other_torsion.push(rest);
            }
        }
        torsion.sort_by(|a, b| b.cmp(a));
        other_torsion.sort();
        let free_gradings = graded.then(|| {
            let mut kernel: Vec<i64> = col_gr[r..].to_vec();
            for (_, g) in &diag {
                let pos = kernel.iter().position(|x| x == g).expect("pivot row grading appears among kernel gradings");
                kernel.remove(pos);
            }
            kernel.sort();
            kernel
        });
        Ok(F2UDecomposition { free_rank: n - 2 * r, free_gradings, torsion, other_torsion })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|i| format!("g{i}")).collect()
    }

    #[test]
    fn poly_arithmetic() {
        let p = Poly::from_exponents([0, 2]);
        let q = Poly::from_exponents([0, 1]);
        assert_eq!(p.mul(&q).exponents(), vec![0, 1, 2, 3]);
        let (d, r) = p.mul(&q).add(&Poly::one()).div_rem(&q);
        assert_eq!(d, p);
        assert!(r.is_one());
        assert_eq!(Poly::monomial(130).degree(), Some(130));
        assert_eq!(Poly::monomial(130).shr(100), Poly::monomial(30));
        assert_eq!(Poly::from_exponents([3, 3]), Poly::zero());
    }

    #[test]
    fn trefoil_graded() {
        // a -> b, c -> U b with A = 1, 0, -1
        let mut c = F2UComplex::with_gradings(vec!["a".into(), "b".into(), "c".into()], vec![1, 0, -1]).unwrap();
        c.add_entry(2, 1, &Poly::monomial(1)).unwrap();
        let h = c.homology().unwrap();
        assert_eq!(h.free_rank, 1);
        assert_eq!(h.free_gradings, Some(vec![1]));
        assert_eq!(h.torsion, vec![Torsion { exponent: 1, grading: Some(0) }]);
        assert_eq!(c.specialize_u0().homology_rank().unwrap(), 3);
    }

    #[test]
    fn inhomogeneous_rejected() {
        let mut c = F2UComplex::with_gradings(names(2), vec![0, 0]).unwrap();
        c.add_entry(0, 1, &Poly::monomial(1)).unwrap();
        assert!(matches!(c.homology(), Err(F2UError::InhomogeneousInput { .. })));
    }

    #[test]
    fn non_primary_torsion_split_off() {
        let mut c = F2UComplex::new(names(2));
        c.add_entry(0, 1, &Poly::from_exponents([1, 2])).unwrap();
        let h = c.homology().unwrap();
        assert_eq!(h.free_rank, 0);
        assert_eq!(h.exponents(), vec![1]);
        assert_eq!(h.other_torsion, vec![Poly::from_exponents([0, 1])]);
    }

    fn dense_rank_free(c: &F2UComplex, n: u32) -> usize {
        c.truncate(n).homology_rank().unwrap()
    }

    proptest! {
        #[test]
        fn two_step_complex_matches_truncation(k in 1u32..5, extra in 0u32..3) {
            // x -> U^k y plus a free z, then a change of basis y' = y + U^extra z
            let mut c = F2UComplex::new(names(3));
            c.add_entry(0, 1, &Poly::monomial(k)).unwrap();
            c.add_entry(0, 2, &Poly::monomial(k + extra)).unwrap();
            let h = c.homology().unwrap();
            for n in 1..7 {
                prop_assert_eq!(h.truncated_rank(n), dense_rank_free(&c, n));
            }
        }
    }
}
