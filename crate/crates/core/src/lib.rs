//! Exact virtual structure constants for projective spaces and projective
//! hypersurfaces, their mirror maps, and the Gromov–Witten invariants they
//! produce.

pub mod algebra;
pub mod cache;
pub mod closed;
pub mod error;
pub mod evaluate;
pub mod gf;
pub mod gmt;
pub mod iritani;
pub mod mirror;
pub mod model;
pub mod open;
pub mod oracle;
pub mod residue;
pub mod verify;

pub use error::{Error, Result};
pub use evaluate::Evaluator;
pub use model::{CorrelatorSpec, InsertionProfile, Model};
