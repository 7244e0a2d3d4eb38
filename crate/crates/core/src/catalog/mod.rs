//! Built-in modules and bimodules: solid tori, handlebodies, the identity
//! bimodule, torus Dehn twists, arc-slides and the genus-1 pipeline.

mod arcslide;
mod bimodules;
mod genus1;
mod tori;

pub use arcslide::{make_arcslide, underslide_dd, ArcSlide, ArcSlideError, SlideKind};
pub use bimodules::{dd_identity, dehn_twist_dd, Twist};
pub use genus1::{hf_genus1, lens_word, parse_word, Genus1Error, Genus1Fixture, TwistWord};
pub use tori::{
    h_infinity, h_minus_one, h_zero, handlebody, solid_tori, torus_module, ModuleMap, SolidTori, TriangleReport,
};

use thiserror::Error;

use crate::dmod::DmodError;
use crate::pairing::PairingError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error(transparent)]
    Module(#[from] DmodError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    ArcSlide(#[from] ArcSlideError),
    #[error(transparent)]
    Genus1(#[from] Genus1Error),
    #[error("unknown catalog entry `{0}`")]
    Unknown(String),
}
