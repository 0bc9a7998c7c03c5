//! Finite groups, twisted actions and group extensions.

mod ext;
mod table;
mod twisted;

pub use ext::{
    extension_from_twisted, find_homomorphic_section, intertwiner_check, intertwiner_hcompose, intertwiner_vcompose,
    is_split, reconstruction_map, round_trip, sections, twisted_from_surjection, Extension, RoundTrip,
};
pub use twisted::{inversion_action, semidirect, twisted_product, validate_twisted_action, RawTwisted, TwistedAction};

pub use table::{extend_from_generators, find_isomorphism, homomorphisms, GroupHom, GroupTable, RawGroup};
pub(crate) use table::{power_digits, tuple_name};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("not an action: {0}")]
    NotAnAction(String),
    #[error("homomorphism is not surjective")]
    NotSurjective,
    #[error("not a section: {0}")]
    NotASection(String),
    #[error("not an exact sequence: {0}")]
    NotExact(String),
    #[error("φ is not natural: `{g1}`, `{g2}` at `{h}`")]
    Law1Violation { g1: String, g2: String, h: String },
    #[error("cocycle law fails on `{g1}`, `{g2}`, `{g3}`")]
    Law2Violation { g1: String, g2: String, g3: String },
    #[error("unit normalization fails: {0}")]
    UnitLawViolation(String),
}
