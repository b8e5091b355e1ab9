//! Finite element simulation of geometrically exact Cosserat rods using a two-node
//! SE(3)-interpolated Petrov-Galerkin element.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the `*64` aliases below
//! fix the double precision instantiation used by the benchmarks.

pub mod error;
pub mod liegroup;
pub mod rodcore;
pub mod assembly;
pub mod linalg;
pub mod solvers;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Pose64 = liegroup::Pose<f64>;
pub type Twist64 = liegroup::Twist<f64>;
pub type LieConfig64 = liegroup::LieConfig<f64>;
pub type NodalCoords64 = rodcore::NodalCoords<f64>;
pub type ConstitutiveLaw64 = rodcore::ConstitutiveLaw<f64>;
pub type RodModel64 = assembly::RodModel<f64>;
pub type LoadSpec64 = assembly::LoadSpec<f64>;
pub type RodDynamics64 = solvers::RodDynamics<f64>;
