//! Element integrals and their assembly into global vectors and band matrices.

pub mod element;
mod loads;
mod model;
mod quadrature;

pub use loads::{LineLoad, LoadSpec, PointLoad};
pub use model::{Diagnostics, RodModel, BANDWIDTH};
pub use quadrature::GaussLegendre;

/// Frame in which nodal angular velocities and virtual rotations are expressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FrameVariant {
    /// Body-fixed (K) frame.
    #[default]
    Body,
    /// Inertial (I) frame.
    Inertial,
}
