use nalgebra::{Matrix3, Vector3};

use super::kinematics::StrainState;
use crate::liegroup::skew;
use crate::scalar::{lit, Scalar};

/// Linear elastic law `n = C_gamma (gamma - gamma0)`, `m = C_kappa (kappa - kappa0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstitutiveLaw<T: Scalar> {
    pub c_gamma: Matrix3<T>,
    pub c_kappa: Matrix3<T>,
    pub gamma0: Vector3<T>,
    pub kappa0: Vector3<T>,
}

impl<T: Scalar> ConstitutiveLaw<T> {
    /// Diagonal law for a straight, unshearable-at-rest reference with
    /// `C_gamma = diag(ke, ks, ks)` and `C_kappa = diag(kt, kb, kb)`.
    pub fn diagonal(ke: T, ks: T, kb: T, kt: T) -> Self {
        Self {
            c_gamma: Matrix3::from_diagonal(&Vector3::new(ke, ks, ks)),
            c_kappa: Matrix3::from_diagonal(&Vector3::new(kt, kb, kb)),
            gamma0: Vector3::x(),
            kappa0: Vector3::zeros(),
        }
    }

    /// Resultant contact force and moment in the body frame.
    pub fn stress(&self, s: &StrainState<T>) -> (Vector3<T>, Vector3<T>) {
        (self.c_gamma * (s.gamma - self.gamma0), self.c_kappa * (s.kappa - self.kappa0))
    }

    /// Strain energy per unit reference length.
    pub fn energy_density(&self, s: &StrainState<T>) -> T {
        let dg = s.gamma - self.gamma0;
        let dk = s.kappa - self.kappa0;
        (dg.dot(&(self.c_gamma * dg)) + dk.dot(&(self.c_kappa * dk))) * lit(0.5)
    }
}

/// Cross-section inertia per unit reference length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossSectionInertia<T: Scalar> {
    pub a_rho0: T,
    /// First moment of the density over the section (zero for centroidal lines).
    pub s_rho0: Vector3<T>,
    pub i_rho0: Matrix3<T>,
}

impl<T: Scalar> CrossSectionInertia<T> {
    pub fn centroidal(a_rho0: T, i_rho0: Matrix3<T>) -> Self {
        Self { a_rho0, s_rho0: Vector3::zeros(), i_rho0 }
    }

    pub fn s_tilde(&self) -> Matrix3<T> {
        skew(&self.s_rho0)
    }
}
