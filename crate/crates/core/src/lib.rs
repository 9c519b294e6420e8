//! Polarization tensors of planar inclusions, neutral and weakly neutral
//! coatings, imperfect-bonding parameters, confocal-ellipsoid potentials and
//! quadrature-domain identities.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod ellipsoid_potentials;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod layer_potentials;
pub mod linalg;
pub mod neutrality;
pub mod polarization;
pub mod quad;
pub mod quadrature_domains;

pub use error::{Error, Result};
