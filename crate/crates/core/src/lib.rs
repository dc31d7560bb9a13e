//! Exact arithmetic for crossed products of left-ordered groups, truncated Hahn series,
//! rational evaluation into series towers, and the endomorphism-ring model.

pub mod config;
pub mod crossed;
pub mod demo;
pub mod endo;
pub mod error;
pub mod expr;
pub mod group;
pub mod hahn;
pub mod magnus;
pub mod repr;
pub mod scalar;
pub mod skew_poly;
pub mod tower;

pub use error::{Error, Result};
pub use group::{Group, GroupElement, GroupSpec};
pub use scalar::Scalar;
