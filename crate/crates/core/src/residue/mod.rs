//! Kernels and the polycircle iterated-residue evaluator.

mod engine;
mod kernels;
mod radii;

pub use engine::{
    ascending, descending, homogeneity_degree, iterated_residue, residue_stage, stage_sum, RationalSum,
};
pub use kernels::{kernel_e, kernel_f, kernel_f_parts, kernel_w, kernel_w_poly};
pub use radii::{default_radii, ProfileShape, RadiusProfile, Sector};
