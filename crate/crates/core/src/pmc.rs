//! Pointed matched circles.
//!
//! Points are numbered `1..=4k` in the order met when walking the oriented
//! circle starting just after the basepoint.

use std::fmt;

use thiserror::Error;

/// Largest supported genus; pair sets are stored in a `u32` bitmask.
pub const MAX_GENUS: usize = 15;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PmcError {
    #[error("genus must be between 1 and {MAX_GENUS}, got {0}")]
    BadGenus(usize),
    #[error("matching has {got} points, expected {expected}")]
    WrongSize { expected: usize, got: usize },
    #[error("point {0} is out of range")]
    OutOfRange(usize),
    #[error("point {0} is matched to itself")]
    FixedPoint(usize),
    #[error("matching is not an involution at point {0}")]
    NotInvolution(usize),
    #[error("surgered circle has {0} components, expected 1")]
    DisconnectedSurgery(usize),
}

/// A pointed matched circle of genus `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pmc {
    genus: usize,
    /// `partner[i - 1]` is the point matched with `i`.
    partner: Vec<u8>,
}

/// A chord `start -> end` with `start < end`; never crosses the basepoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chord {
    pub start: u8,
    pub end: u8,
}

impl Chord {
    pub fn new(start: u8, end: u8) -> Option<Chord> {
        (start < end).then_some(Chord { start, end })
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.start, self.end)
    }
}

/// A set of matched pairs, indexed by the order of their smaller points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairSet(pub u32);

impl PairSet {
    pub const EMPTY: PairSet = PairSet(0);

    pub fn contains(self, pair: usize) -> bool {
        self.0 >> pair & 1 == 1
    }
    pub fn insert(&mut self, pair: usize) {
        self.0 |= 1 << pair;
    }
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }
    pub fn union(self, other: PairSet) -> PairSet {
        PairSet(self.0 | other.0)
    }
    pub fn intersection(self, other: PairSet) -> PairSet {
        PairSet(self.0 & other.0)
    }
    pub fn from_pairs(pairs: impl IntoIterator<Item = usize>) -> PairSet {
        let mut s = PairSet::EMPTY;
        for p in pairs {
            s.insert(p);
        }
        s
    }
}

impl Pmc {
    /// Builds and validates a circle from a list of matched pairs.
    pub fn new(genus: usize, pairs: &[(usize, usize)]) -> Result<Pmc, PmcError> {
        if genus == 0 || genus > MAX_GENUS {
            return Err(PmcError::BadGenus(genus));
        }
        let n = 4 * genus;
        let mut partner = vec![0u8; n];
        for &(i, j) in pairs {
            for p in [i, j] {
                if p == 0 || p > n {
                    return Err(PmcError::OutOfRange(p));
                }
            }
            if i == j {
                return Err(PmcError::FixedPoint(i));
            }
            for (a, b) in [(i, j), (j, i)] {
                if partner[a - 1] != 0 && partner[a - 1] as usize != b {
                    return Err(PmcError::NotInvolution(a));
                }
                partner[a - 1] = b as u8;
            }
        }
        Pmc::from_partner(genus, partner)
    }

    /// Builds a circle from the full partner table (`partner[i-1] = M(i)`).
    pub fn from_partner(genus: usize, partner: Vec<u8>) -> Result<Pmc, PmcError> {
        if genus == 0 || genus > MAX_GENUS {
            return Err(PmcError::BadGenus(genus));
        }
        let n = 4 * genus;
        if partner.len() != n {
            return Err(PmcError::WrongSize { expected: n, got: partner.len() });
        }
        for (idx, &m) in partner.iter().enumerate() {
            let i = idx + 1;
            let m = m as usize;
            if m == 0 || m > n {
                return Err(PmcError::NotInvolution(i));
            }
            if m == i {
                return Err(PmcError::FixedPoint(i));
            }
            if partner[m - 1] as usize != i {
                return Err(PmcError::NotInvolution(i));
            }
        }
        let pmc = Pmc { genus, partner };
        let cycles = pmc.surgery_cycles();
        if cycles != 1 {
            return Err(PmcError::DisconnectedSurgery(cycles));
        }
        Ok(pmc)
    }

    /// Number of boundary components after surgery along every pair.
    ///
    /// The arc leaving point `i` arrives at `i+1` (cyclically), crosses the
    /// handle and leaves again from the partner of `i+1`.
    fn surgery_cycles(&self) -> usize {
        let n = self.num_points();
        let next = |i: usize| self.partner[i % n] as usize;
        let mut seen = vec![false; n + 1];
        let mut cycles = 0;
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = next(i);
            }
        }
        cycles
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn num_points(&self) -> usize {
        4 * self.genus
    }

    pub fn num_pairs(&self) -> usize {
        2 * self.genus
    }

    /// The matched partner `M(i)`.
    pub fn partner(&self, i: u8) -> u8 {
        self.partner[i as usize - 1]
    }

    /// Matched pairs `(smaller, larger)`, sorted by smaller point.
    pub fn pairs(&self) -> Vec<(u8, u8)> {
        (1..=self.num_points() as u8)
            .filter(|&i| i < self.partner(i))
            .map(|i| (i, self.partner(i)))
            .collect()
    }

    /// Index of the pair containing point `i`.
    pub fn pair_of(&self, i: u8) -> usize {
        let lo = i.min(self.partner(i));
        (1..lo).filter(|&j| j < self.partner(j)).count()
    }

    pub fn full_pair_set(&self) -> PairSet {
        PairSet((1u32 << self.num_pairs()) - 1)
    }

    /// Orientation reversal: point `i` becomes `4k+1-i`.
    pub fn reverse(&self) -> Pmc {
        let n = self.num_points() as u8;
        let partner = (1..=n).map(|i| n + 1 - self.partner(n + 1 - i)).collect();
        Pmc { genus: self.genus, partner }
    }

    /// Image of point `i` under reversal.
    pub fn reverse_point(&self, i: u8) -> u8 {
        self.num_points() as u8 + 1 - i
    }

    /// Image of a pair set under reversal, as a pair set of `self.reverse()`.
    pub fn reverse_pairs(&self, s: PairSet) -> PairSet {
        let rev = self.reverse();
        PairSet::from_pairs(
            s.iter().map(|p| rev.pair_of(self.reverse_point(self.pairs()[p].0))),
        )
    }

    /// All chords `(i, j)`, `i < j`, in lexicographic order.
    pub fn chords(&self) -> Vec<Chord> {
        let n = self.num_points() as u8;
        (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| Chord { start: i, end: j }))
            .collect()
    }

    pub fn split(k: usize) -> Result<Pmc, PmcError> {
        let pairs: Vec<_> = (1..=k)
            .flat_map(|i| [(4 * i - 3, 4 * i - 1), (4 * i - 2, 4 * i)])
            .collect();
        Pmc::new(k, &pairs)
    }

    pub fn antipodal(k: usize) -> Result<Pmc, PmcError> {
        let pairs: Vec<_> = (1..=2 * k).map(|i| (i, i + 2 * k)).collect();
        Pmc::new(k, &pairs)
    }

    pub fn torus() -> Pmc {
        Pmc::split(1).expect("torus circle is valid")
    }

    /// Parses `torus`, `split:k` or `antipodal:k`.
    pub fn standard(name: &str) -> Option<Pmc> {
        if name == "torus" {
            return Some(Pmc::torus());
        }
        let (kind, k) = name.split_once(':')?;
        let k: usize = k.parse().ok()?;
        match kind {
            "split" => Pmc::split(k).ok(),
            "antipodal" => Pmc::antipodal(k).ok(),
            _ => None,
        }
    }
}

impl fmt::Display for Pmc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "genus {} [", self.genus)?;
        for (idx, (a, b)) in self.pairs().into_iter().enumerate() {
            if idx > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}-{b}")?;
        }
        write!(f, "]")
    }
}

/// A connected sum `Z1 # Z2` with the seam recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectedSum {
    pub left: Pmc,
    pub right: Pmc,
    pub sum: Pmc,
    /// Points `1..=seam` come from `left`; the rest from `right`.
    pub seam: u8,
}

pub fn connected_sum(z1: &Pmc, z2: &Pmc) -> Result<ConnectedSum, PmcError> {
    let off = z1.num_points() as u8;
    let mut partner = z1.partner.clone();
    partner.extend(z2.partner.iter().map(|&p| p + off));
    let sum = Pmc::from_partner(z1.genus + z2.genus, partner)?;
    Ok(ConnectedSum { left: z1.clone(), right: z2.clone(), sum, seam: off })
}
