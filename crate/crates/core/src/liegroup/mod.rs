//! SO(3) and SE(3) exponential/logarithm maps, tangent operators and their derivatives.
//!
//! Rotation vectors use the axis-angle convention; twists are ordered `(v, omega)`.
//! Every closed form switches to its first-order expansion when the rotation angle
//! drops to `omega_crit`.

mod se3;
pub mod series;
mod so3;
mod tensor;

use nalgebra::{Matrix3, Vector3};

pub use se3::{Pose, Twist};
pub use so3::{skew, vee, LOG_TRACE_LIMIT};
pub use tensor::{levi_civita, Tensor3};

use crate::error::Result;
use crate::scalar::{lit, Scalar};

/// Default small-angle switch.
pub const OMEGA_CRIT: f64 = 1e-6;

/// Tunables of the Lie group kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LieConfig<T: Scalar> {
    pub omega_crit: T,
    /// Number of terms for the series reference implementations.
    pub series_terms: usize,
}

impl<T: Scalar> Default for LieConfig<T> {
    fn default() -> Self {
        Self { omega_crit: lit(OMEGA_CRIT), series_terms: 30 }
    }
}

pub fn exp_so3<T: Scalar>(psi: &Vector3<T>) -> Matrix3<T> {
    LieConfig::default().exp_so3(psi)
}

pub fn log_so3<T: Scalar>(a: &Matrix3<T>) -> Result<Vector3<T>> {
    LieConfig::default().log_so3(a)
}

pub fn tangent_so3<T: Scalar>(psi: &Vector3<T>) -> Matrix3<T> {
    LieConfig::default().tangent_so3(psi)
}

pub fn inv_tangent_so3<T: Scalar>(psi: &Vector3<T>) -> Result<Matrix3<T>> {
    LieConfig::default().inv_tangent_so3(psi)
}

pub fn exp_se3<T: Scalar>(theta: &Twist<T>) -> Pose<T> {
    LieConfig::default().exp_se3(theta)
}

pub fn log_se3<T: Scalar>(h: &Pose<T>) -> Result<Twist<T>> {
    LieConfig::default().log_se3(h)
}

pub fn d_exp_so3<T: Scalar>(psi: &Vector3<T>) -> Tensor3<T, 3, 3, 3> {
    LieConfig::default().d_exp_so3(psi)
}

pub fn d_log_so3<T: Scalar>(a: &Matrix3<T>) -> Result<Tensor3<T, 3, 3, 3>> {
    LieConfig::default().d_log_so3(a)
}

pub fn d_tangent_so3<T: Scalar>(psi: &Vector3<T>) -> Tensor3<T, 3, 3, 3> {
    LieConfig::default().d_tangent_so3(psi)
}

pub fn d_inv_tangent_so3<T: Scalar>(psi: &Vector3<T>) -> Result<Tensor3<T, 3, 3, 3>> {
    LieConfig::default().d_inv_tangent_so3(psi)
}

pub fn d_exp_se3<T: Scalar>(theta: &Twist<T>) -> Tensor3<T, 4, 4, 6> {
    LieConfig::default().d_exp_se3(theta)
}

pub fn d_log_se3<T: Scalar>(h: &Pose<T>) -> Result<Tensor3<T, 6, 4, 4>> {
    LieConfig::default().d_log_se3(h)
}
