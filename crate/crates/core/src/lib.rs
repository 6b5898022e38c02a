//! Piecewise flat Finsler surfaces: triangulated surfaces whose faces are flat
//! triangles in (possibly different) Minkowski planes.
//!
//! The crate is `no_std` and only needs `alloc`. It covers
//!
//! - [`minkowski`]: planar Minkowski norms, their Hessian inner products,
//!   Cartan tensors and indicatrix arc length,
//! - [`surface`]: the triangle/gluing data model and its topology,
//! - [`geodesic`]: the edge-crossing solver, the face-to-face tracer and
//!   path-length minimization over a fixed edge sequence,
//! - [`cone`]: tangent cones at vertices, swept angles, vertex curvature and
//!   extension of geodesics through a vertex,
//! - [`classify`]: Landsberg/Berwald measurements, the indicatrix constant of a
//!   surface and the combinatorial Gauss-Bonnet check.
//!
//! [`builders`] has a handful of standard closed surfaces used by the tests and
//! the command-line tool.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

mod jet;
mod math;
mod optimize;

pub mod builders;
pub mod classify;
pub mod cone;
pub mod geodesic;
pub mod minkowski;
pub mod quadrature;
pub mod surface;
pub mod validation;
pub mod vec2;

pub use minkowski::{HessianInner, IndicatrixArc, MinkowskiNorm, NormError, Orientation};
pub use surface::{EdgeGlue, Surface, SurfaceError, Triangle};
pub use validation::{CheckResult, ValidationReport};
pub use vec2::{Mat2, Vec2};

/// Tolerance used when two unitized directions are compared.
pub const DIRECTION_TOL: f64 = 1e-9;
