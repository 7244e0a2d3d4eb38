//! Closed 3-manifolds of Heegaard genus one from words in torus twists.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::dmod::TypeD;
use crate::pairing::{mor_d_d, mor_dd_d, Side};

use super::{dehn_twist_dd, h_infinity, h_minus_one, h_zero, CatalogError, Twist};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Genus1Error {
    #[error("unknown twist `{0}` (expected Tm, Tm', Tl or Tl')")]
    BadLetter(String),
}

/// A word `ψ_n ⋯ ψ_1`, stored left to right as written.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TwistWord(pub Vec<Twist>);

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Twist::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for TwistWord {
    type Err = Genus1Error;
    fn from_str(s: &str) -> Result<TwistWord, Genus1Error> {
        parse_word(s)
    }
}

pub fn parse_word(s: &str) -> Result<TwistWord, Genus1Error> {
    s.split_whitespace()
        .map(|w| w.parse::<Twist>().map_err(|_| Genus1Error::BadLetter(w.to_string())))
        .collect::<Result<Vec<_>, _>>()
        .map(TwistWord)
}

/// The two solid tori glued along the twisted boundary.
#[derive(Clone, Debug)]
pub struct Genus1Fixture {
    pub start: TypeD,
    pub closing: TypeD,
}

impl Default for Genus1Fixture {
    /// Both sides `H_0`: the empty word gives `S² × S¹` and `Tm^p` gives `L(p, 1)`.
    fn default() -> Self {
        Genus1Fixture { start: h_zero(), closing: h_zero() }
    }
}

impl Genus1Fixture {
    /// `H_{-1}` closed off by `H_∞`; the empty word gives `S³`.
    pub fn sphere() -> Self {
        Genus1Fixture { start: h_minus_one(), closing: h_infinity() }
    }

    /// Parses `inf`, `0` or `-1`.
    pub fn solid_torus(name: &str) -> Option<TypeD> {
        match name {
            "inf" => Some(h_infinity()),
            "0" => Some(h_zero()),
            "-1" => Some(h_minus_one()),
            _ => None,
        }
    }

    /// Applies the word to `start`, rightmost letter first, reducing after
    /// each step.
    pub fn twisted(&self, word: &TwistWord) -> Result<TypeD, CatalogError> {
        let mut m = self.start.clone();
        for t in word.0.iter().rev() {
            let next = mor_dd_d(&dehn_twist_dd(*t), &m, Side::Left)?.module.reduce();
            m = next.rename_sequential();
        }
        Ok(m)
    }
}

/// The word `Tm^p`.
pub fn lens_word(p: usize) -> TwistWord {
    TwistWord(vec![Twist::Mu; p])
}

/// Rank of `HF` of the closed manifold: `Mor(closing, ψ(start))`.
pub fn hf_genus1(word: &TwistWord, fixture: &Genus1Fixture) -> Result<usize, CatalogError> {
    let m = fixture.twisted(word)?;
    Ok(mor_d_d(&fixture.closing, &m)?.homology_rank()?)
}
