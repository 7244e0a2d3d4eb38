//! Combinatorial bordered Floer computations over F2.

// matrix code indexes rows and columns together
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod dmod;
pub mod f2u;
pub mod json;
pub mod knots;
pub mod linalg;
pub mod pairing;
pub mod pmc;
pub mod strand;
pub mod surface;
