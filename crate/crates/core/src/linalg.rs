//! Dense linear algebra over F2 and F2 chain complexes.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("differential does not square to zero ({0} nonzero entries in d∘d)")]
    NotAComplex(usize),
}

/// A bit vector over F2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> BitRow {
        BitRow { len, words: vec![0; len.div_ceil(64)] }
    }
    pub fn from_ones(len: usize, ones: impl IntoIterator<Item = usize>) -> BitRow {
        let mut r = BitRow::zeros(len);
        for i in ones {
            r.flip(i);
        }
        r
    }
    pub fn len(&self) -> usize {
        self.len
    }
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }
    pub fn set(&mut self, i: usize, v: bool) {
        if self.get(i) != v {
            self.flip(i);
        }
    }
    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
    /// Lowest set index.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}

/// Row-echelon basis of a span, pivots at the lowest set bit.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(usize, BitRow)>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
    /// Reduces `v` against the basis; returns the remainder.
    pub fn reduce(&self, v: &BitRow) -> BitRow {
        let mut v = v.clone();
        for (p, r) in &self.rows {
            if v.get(*p) {
                v.xor_assign(r);
            }
        }
        v
    }
    /// Inserts `v`; returns `false` if it was already in the span.
    pub fn insert(&mut self, v: &BitRow) -> bool {
        let v = self.reduce(v);
        match v.first_one() {
            None => false,
            Some(p) => {
                for (_, r) in self.rows.iter_mut() {
                    if r.get(p) {
                        r.xor_assign(&v);
                    }
                }
                self.rows.push((p, v));
                true
            }
        }
    }
    pub fn contains(&self, v: &BitRow) -> bool {
        self.reduce(v).is_zero()
    }
}

/// Rank of a set of vectors.
pub fn rank(rows: &[BitRow]) -> usize {
    let mut e = Echelon::new();
    rows.iter().filter(|r| e.insert(r)).count()
}

/// Basis of the kernel of the map sending basis vector `i` to `images[i]`.
pub fn kernel(images: &[BitRow]) -> Vec<BitRow> {
    let n = images.len();
    // augmented rows [image | identity]
    let width = images.first().map_or(0, BitRow::len);
    let mut rows: Vec<(BitRow, BitRow)> =
        images.iter().enumerate().map(|(i, im)| (im.clone(), BitRow::from_ones(n, [i]))).collect();
    let mut out = Vec::new();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for i in 0..rows.len() {
        let (mut im, mut tag) = rows[i].clone();
        for &(p, j) in &pivots {
            if im.get(p) {
                im.xor_assign(&rows[j].0);
                tag.xor_assign(&rows[j].1);
            }
        }
        match im.first_one() {
            Some(p) if p < width => {
                rows[i] = (im, tag);
                pivots.push((p, i));
            }
            _ => out.push(tag),
        }
    }
    out
}

/// A finite chain complex over F2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Complex {
    names: Vec<String>,
    /// `d[i]` holds the targets of generator `i`, sorted.
    d: Vec<Vec<usize>>,
}

/// Homology with deterministic representative cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Homology {
    pub rank: usize,
    /// Each representative as a sorted list of generator indices.
    pub representatives: Vec<Vec<usize>>,
}

impl F2Complex {
    pub fn new(names: Vec<String>) -> F2Complex {
        let n = names.len();
        F2Complex { names, d: vec![Vec::new(); n] }
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

    /// Adds `dst` to `d(src)` mod 2.
    pub fn toggle(&mut self, src: usize, dst: usize) {
        let row = &mut self.d[src];
        match row.binary_search(&dst) {
            Ok(p) => {
                row.remove(p);
            }
            Err(p) => row.insert(p, dst),
        }
    }

    pub fn targets(&self, src: usize) -> &[usize] {
        &self.d[src]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.d.iter().enumerate().flat_map(|(s, ts)| ts.iter().map(move |&t| (s, t)))
    }

    fn image_rows(&self) -> Vec<BitRow> {
        let n = self.len();
        self.d.iter().map(|ts| BitRow::from_ones(n, ts.iter().copied())).collect()
    }

    /// Number of nonzero entries of `d∘d`.
    pub fn d_squared_defect(&self) -> usize {
        let n = self.len();
        let mut count = 0;
        for ts in &self.d {
            let mut acc = BitRow::zeros(n);
            for &t in ts {
                for &u in &self.d[t] {
                    acc.flip(u);
                }
            }
            count += acc.ones().count();
        }
        count
    }

    pub fn check(&self) -> Result<(), LinalgError> {
        match self.d_squared_defect() {
            0 => Ok(()),
            k => Err(LinalgError::NotAComplex(k)),
        }
    }

    pub fn homology_rank(&self) -> Result<usize, LinalgError> {
        self.check()?;
        Ok(self.len() - 2 * rank(&self.image_rows()))
    }

    pub fn homology(&self) -> Result<F2Homology, LinalgError> {
        self.check()?;
        let images = self.image_rows();
        let mut span = Echelon::new();
        for r in &images {
            span.insert(r);
        }
        let mut representatives = Vec::new();
        for z in kernel(&images) {
            if span.insert(&z) {
                representatives.push(z.ones().collect());
            }
        }
        Ok(F2Homology { rank: representatives.len(), representatives })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_differential_rank_is_size() {
        let c = F2Complex::new(vec!["a".into(), "b".into(), "c".into()]);
        assert_eq!(c.homology_rank().unwrap(), 3);
    }

    #[test]
    fn acyclic_pair() {
        let mut c = F2Complex::new(vec!["a".into(), "b".into()]);
        c.toggle(0, 1);
        let h = c.homology().unwrap();
        assert_eq!(h.rank, 0);
    }

    #[test]
    fn not_a_complex() {
        let mut c = F2Complex::new(vec!["a".into(), "b".into(), "c".into()]);
        c.toggle(0, 1);
        c.toggle(1, 2);
        assert_eq!(c.homology_rank(), Err(LinalgError::NotAComplex(1)));
    }

    #[test]
    fn kernel_of_sum_map() {
        // e0 -> v, e1 -> v, e2 -> 0
        let v = BitRow::from_ones(2, [0]);
        let k = kernel(&[v.clone(), v, BitRow::zeros(2)]);
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn representatives_are_cycles() {
        // a -> b, c, d -> b
        let mut c = F2Complex::new(vec!["a".into(), "b".into(), "c".into(), "d".into()]);
        c.toggle(0, 1);
        c.toggle(3, 1);
        let h = c.homology().unwrap();
        assert_eq!(h.rank, 2);
        for rep in &h.representatives {
            let mut acc = BitRow::zeros(4);
            for &g in rep {
                for &t in c.targets(g) {
                    acc.flip(t);
                }
            }
            assert!(acc.is_zero());
        }
    }
}
