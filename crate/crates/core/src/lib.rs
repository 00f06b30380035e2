//! Loewner-type parametric representation of univalent self-maps of the unit
//! disk with prescribed boundary regular fixed points.
//!
//! The numerical core is generic over [`scalar::Real`] (`f32` or `f64`);
//! experiments, configuration files and the CLI work in `f64`.

// `!(a < b)` rejects NaN along with the out-of-range case
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod evolution;
pub mod experiments;
pub mod generators;
pub mod geometry;
pub mod herglotz;
pub mod io;
mod linalg;
pub mod ode;
pub mod richardson;
pub mod scalar;

pub use error::{Error, Result};

/// Double-precision instantiations.
pub type Generator64 = generators::Generator<f64>;
pub type Schedule64 = evolution::Schedule<f64>;
pub type HerglotzFunction64 = herglotz::HerglotzFunction<f64>;
pub type PickFunction64 = herglotz::PickFunction<f64>;
pub type SolverConfig64 = ode::SolverConfig<f64>;
pub type DiskPoint64 = geometry::DiskPoint<f64>;
pub type BoundaryPoint64 = geometry::BoundaryPoint<f64>;

/// Single-precision instantiations.
pub type Generator32 = generators::Generator<f32>;
pub type Schedule32 = evolution::Schedule<f32>;
pub type HerglotzFunction32 = herglotz::HerglotzFunction<f32>;
pub type PickFunction32 = herglotz::PickFunction<f32>;
pub type SolverConfig32 = ode::SolverConfig<f32>;
pub type DiskPoint32 = geometry::DiskPoint<f32>;
pub type BoundaryPoint32 = geometry::BoundaryPoint<f32>;
