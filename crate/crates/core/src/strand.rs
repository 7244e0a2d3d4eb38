//! The strand algebras `A(n)`: upward-veering partial permutations over F2.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrandError {
    #[error("strand ({0},{1}) moves downward")]
    Downward(u8, u8),
    #[error("strand ({s},{t}) leaves the range 1..={n}")]
    OutOfRange { n: u8, s: u8, t: u8 },
    #[error("two strands share the point {0}")]
    Collision(u8),
    #[error("ambient sizes differ: {0} vs {1}")]
    AmbientMismatch(u8, u8),
}

/// A single upward-veering partial permutation of `{1..n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrandDiagram {
    n: u8,
    /// Sorted by start point.
    strands: Vec<(u8, u8)>,
}

impl StrandDiagram {
    pub fn new(n: u8, mut strands: Vec<(u8, u8)>) -> Result<Self, StrandError> {
        strands.sort_unstable();
        let mut starts = 0u64;
        let mut ends = 0u64;
        for &(s, t) in &strands {
            if s == 0 || t == 0 || s > n || t > n {
                return Err(StrandError::OutOfRange { n, s, t });
            }
            if t < s {
                return Err(StrandError::Downward(s, t));
            }
            if starts >> s & 1 == 1 {
                return Err(StrandError::Collision(s));
            }
            if ends >> t & 1 == 1 {
                return Err(StrandError::Collision(t));
            }
            starts |= 1 << s;
            ends |= 1 << t;
        }
        Ok(StrandDiagram { n, strands })
    }

    /// Constructor for strands already known to be valid and sorted.
    pub(crate) fn from_sorted(n: u8, strands: Vec<(u8, u8)>) -> Self {
        debug_assert!(StrandDiagram::new(n, strands.clone()).is_ok());
        StrandDiagram { n, strands }
    }

    /// A full-support diagram from a permutation of `1..=n` (`perm[i-1] = φ(i)`).
    ///
    /// This is the nilCoxeter case; strands may move downward here.
    pub fn permutation(perm: &[u8]) -> Result<Self, StrandError> {
        let n = perm.len() as u8;
        let mut seen = 0u64;
        for &t in perm {
            if t == 0 || t > n {
                return Err(StrandError::OutOfRange { n, s: 0, t });
            }
            if seen >> t & 1 == 1 {
                return Err(StrandError::Collision(t));
            }
            seen |= 1 << t;
        }
        let strands = perm.iter().enumerate().map(|(i, &t)| (i as u8 + 1, t)).collect();
        Ok(StrandDiagram { n, strands })
    }

    /// The identity diagram on a set of points.
    pub fn identity(n: u8, points: impl IntoIterator<Item = u8>) -> Self {
        let mut strands: Vec<_> = points.into_iter().map(|p| (p, p)).collect();
        strands.sort_unstable();
        StrandDiagram { n, strands }
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn strands(&self) -> &[(u8, u8)] {
        &self.strands
    }

    /// Bitmask of start points (bit `i` for point `i`).
    pub fn start_mask(&self) -> u64 {
        self.strands.iter().fold(0, |m, &(s, _)| m | 1 << s)
    }

    /// Bitmask of end points.
    pub fn end_mask(&self) -> u64 {
        self.strands.iter().fold(0, |m, &(_, t)| m | 1 << t)
    }

    pub fn is_idempotent(&self) -> bool {
        self.strands.iter().all(|&(s, t)| s == t)
    }

    /// Inverting pairs `(i, j)` of start points: `i < j` and `φ(j) < φ(i)`.
    pub fn inversions(&self) -> Vec<(u8, u8)> {
        let mut out = Vec::new();
        for (a, &(s1, t1)) in self.strands.iter().enumerate() {
            for &(s2, t2) in &self.strands[a + 1..] {
                if t2 < t1 {
                    out.push((s1, s2));
                }
            }
        }
        out
    }

    pub fn inversion_count(&self) -> usize {
        let mut c = 0;
        for (a, &(_, t1)) in self.strands.iter().enumerate() {
            c += self.strands[a + 1..].iter().filter(|&&(_, t2)| t2 < t1).count();
        }
        c
    }

    /// Product `self · other`, or `None` when it vanishes.
    pub fn compose(&self, other: &StrandDiagram) -> Option<StrandDiagram> {
        if self.end_mask() != other.start_mask() {
            return None;
        }
        let mut strands: Vec<(u8, u8)> = self
            .strands
            .iter()
            .map(|&(s, t)| {
                let &(_, u) = other.strands.iter().find(|&&(s2, _)| s2 == t).expect("matching start");
                (s, u)
            })
            .collect();
        strands.sort_unstable();
        let prod = StrandDiagram { n: self.n, strands };
        (prod.inversion_count() == self.inversion_count() + other.inversion_count()).then_some(prod)
    }

    /// Differential: resolve each crossing whose smoothing drops the
    /// inversion count by exactly one.
    pub fn differential(&self) -> Vec<StrandDiagram> {
        let inv = self.inversion_count();
        let mut out = Vec::new();
        for a in 0..self.strands.len() {
            for b in a + 1..self.strands.len() {
                if self.strands[b].1 >= self.strands[a].1 {
                    continue;
                }
                let mut strands = self.strands.clone();
                let ta = strands[a].1;
                strands[a].1 = strands[b].1;
                strands[b].1 = ta;
                let d = StrandDiagram { n: self.n, strands };
                if d.inversion_count() + 1 == inv {
                    out.push(d);
                }
            }
        }
        out
    }

    /// Point reflection `(s, t) -> (n+1-t, n+1-s)`.
    pub fn opposite(&self) -> StrandDiagram {
        let n = self.n;
        let mut strands: Vec<_> = self.strands.iter().map(|&(s, t)| (n + 1 - t, n + 1 - s)).collect();
        strands.sort_unstable();
        StrandDiagram { n, strands }
    }
}

impl fmt::Display for StrandDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (s, t)) in self.strands.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}>{t}")?;
        }
        write!(f, "]")
    }
}

/// An element of `A(n)`: an F2-set of strand diagrams.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraElement {
    n: u8,
    terms: BTreeSet<StrandDiagram>,
}

impl AlgebraElement {
    pub fn zero(n: u8) -> Self {
        AlgebraElement { n, terms: BTreeSet::new() }
    }

    pub fn from_diagram(d: StrandDiagram) -> Self {
        let n = d.n;
        AlgebraElement { n, terms: BTreeSet::from([d]) }
    }

    /// Sums diagrams mod 2.
    pub fn from_terms(n: u8, terms: impl IntoIterator<Item = StrandDiagram>) -> Result<Self, StrandError> {
        let mut e = AlgebraElement::zero(n);
        for d in terms {
            if d.n != n {
                return Err(StrandError::AmbientMismatch(n, d.n));
            }
            e.toggle(d);
        }
        Ok(e)
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn terms(&self) -> &BTreeSet<StrandDiagram> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn toggle(&mut self, d: StrandDiagram) {
        if !self.terms.remove(&d) {
            self.terms.insert(d);
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement, StrandError> {
        if self.n != other.n {
            return Err(StrandError::AmbientMismatch(self.n, other.n));
        }
        let terms = self.terms.symmetric_difference(&other.terms).cloned().collect();
        Ok(AlgebraElement { n: self.n, terms })
    }

    pub fn multiply(&self, other: &AlgebraElement) -> Result<AlgebraElement, StrandError> {
        if self.n != other.n {
            return Err(StrandError::AmbientMismatch(self.n, other.n));
        }
        let mut out = AlgebraElement::zero(self.n);
        for a in &self.terms {
            for b in &other.terms {
                if let Some(p) = a.compose(b) {
                    out.toggle(p);
                }
            }
        }
        Ok(out)
    }

    pub fn differential(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.n);
        for d in self.terms.iter().flat_map(StrandDiagram::differential) {
            out.toggle(d);
        }
        out
    }

    pub fn opposite(&self) -> AlgebraElement {
        AlgebraElement { n: self.n, terms: self.terms.iter().map(StrandDiagram::opposite).collect() }
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, d) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sd(n: u8, s: &[(u8, u8)]) -> StrandDiagram {
        StrandDiagram::new(n, s.to_vec()).unwrap()
    }

    #[test]
    fn inversion_count_example() {
        let p = StrandDiagram::permutation(&[3, 1, 2, 5, 4]).unwrap();
        assert_eq!(p.inversion_count(), 3);
        assert_eq!(p.inversions(), vec![(1, 2), (1, 3), (4, 5)]);
        assert_eq!(StrandDiagram::identity(4, [1, 3]).inversion_count(), 0);
    }

    #[test]
    fn nilcoxeter_relations() {
        let s = StrandDiagram::permutation(&[2, 1]).unwrap();
        assert!(s.compose(&s).is_none());
        assert_eq!(s.differential(), vec![StrandDiagram::identity(2, [1, 2])]);
        let t = sd(4, &[(1, 3), (2, 4)]);
        assert!(t.compose(&t).is_none());
    }

    #[test]
    fn single_strands_compose() {
        let a = sd(3, &[(1, 2)]);
        let b = sd(3, &[(2, 3)]);
        assert_eq!(a.compose(&b), Some(sd(3, &[(1, 3)])));
        assert_eq!(b.compose(&a), None);
    }

    #[test]
    fn double_crossing_is_zero() {
        // 1->2, 2->2 style: strands 1->3 and 2->2 cross once; composing
        // 2->2 with 3->3 keeps it; composing with a second crossing kills it
        let a = sd(4, &[(1, 3), (2, 2)]);
        let b = sd(4, &[(2, 4), (3, 3)]);
        // product has strands 1->3, 2->4: 0 inversions, inputs had 1 + 1
        assert_eq!(a.compose(&b), None);
    }

    #[test]
    fn transposition_differential() {
        let d = sd(3, &[(1, 2), (2, 3)]);
        assert!(d.differential().is_empty());
        let x = sd(3, &[(1, 3), (2, 2)]);
        assert_eq!(x.differential(), vec![sd(3, &[(1, 2), (2, 3)])]);
    }

    #[test]
    fn rejects_downward() {
        assert_eq!(StrandDiagram::new(3, vec![(2, 1)]), Err(StrandError::Downward(2, 1)));
        assert_eq!(StrandDiagram::new(3, vec![(1, 2), (2, 2)]), Err(StrandError::Collision(2)));
    }

    #[test]
    fn opposite_involution() {
        let d = sd(4, &[(1, 3), (2, 2)]);
        assert_eq!(d.opposite(), sd(4, &[(2, 4), (3, 3)]));
        assert_eq!(d.opposite().opposite(), d);
    }
}
