//! Independent checks: stable-map localization residues for disk
//! invariants and numerical polycircle quadrature.

pub mod fixed_point;
pub mod quadrature;

pub use fixed_point::open_gw_fixed_point;
pub use quadrature::{contour_quadrature, QuadratureReport, QuadratureSpec};
