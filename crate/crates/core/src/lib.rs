#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]
//! Numerical differential geometry of curves on parameterized surfaces and
//! their images under conformal maps.
//!
//! The crate is organized bottom-up:
//!
//! - [`exprkit`] parses scalar fields and evaluates exact derivative jets.
//! - [`calculus`] holds the finite-difference oracle and arc-length
//!   reparameterization.
//! - [`geometry`] computes fundamental forms, Christoffel symbols, Frenet
//!   frames and normal/geodesic curvature.
//! - [`conformal`] measures how those quantities deviate across a conformal
//!   pair of surfaces.
//! - [`normalcurve`] decomposes position vectors in the Frenet frame and
//!   evaluates the normal and tangential component identities.
//! - [`grid`] runs point-wise evaluations data-parallel (feature `parallel`)
//!   or sequentially.

pub mod calculus;
pub mod conformal;
mod error;
pub mod exprkit;
pub mod fixtures;
pub mod geometry;
pub mod grid;
pub mod normalcurve;

pub use error::{GeomError, Result};

/// Three-vector used for positions, tangents and normals.
pub type Vec3 = nalgebra::Vector3<f64>;
pub type Mat3 = nalgebra::Matrix3<f64>;
