use nalgebra::{DVector, Matrix6, Vector3};

use crate::error::Result;
use crate::liegroup::{LieConfig, Pose};
use crate::scalar::{lit, Scalar};

/// Degrees of freedom per node: position followed by rotation vector.
pub const NODE_DOFS: usize = 6;

/// Position and rotation vector of one node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodalCoords<T: Scalar> {
    pub r: Vector3<T>,
    pub psi: Vector3<T>,
}

impl<T: Scalar> NodalCoords<T> {
    pub fn new(r: Vector3<T>, psi: Vector3<T>) -> Self {
        Self { r, psi }
    }

    /// Reads node `i` out of a global coordinate vector.
    pub fn from_global(q: &DVector<T>, i: usize) -> Self {
        let o = NODE_DOFS * i;
        Self::new(
            Vector3::new(q[o], q[o + 1], q[o + 2]),
            Vector3::new(q[o + 3], q[o + 4], q[o + 5]),
        )
    }

    pub fn write_global(&self, q: &mut DVector<T>, i: usize) {
        let o = NODE_DOFS * i;
        for k in 0..3 {
            q[o + k] = self.r[k];
            q[o + 3 + k] = self.psi[k];
        }
    }

    pub fn from_pose(lie: &LieConfig<T>, h: &Pose<T>) -> Result<Self> {
        Ok(Self::new(h.translation, lie.log_so3(&h.rotation)?))
    }

    pub fn pose(&self, lie: &LieConfig<T>) -> Pose<T> {
        node_pose(lie, self)
    }
}

pub fn node_pose<T: Scalar>(lie: &LieConfig<T>, n: &NodalCoords<T>) -> Pose<T> {
    Pose::new(lie.exp_so3(&n.psi), n.r)
}

/// Swaps a rotation vector of norm at least pi for its complement of norm `2 pi - |psi|`.
pub fn complement_update<T: Scalar>(psi: &Vector3<T>) -> Vector3<T> {
    let w = psi.norm();
    if w < T::pi() {
        return *psi;
    }
    psi * (T::one() - T::two_pi() / w)
}

/// Maps any rotation vector onto the equivalent one with norm at most pi.
pub fn wrap_rotation_vector<T: Scalar>(psi: &Vector3<T>) -> Vector3<T> {
    let w = psi.norm();
    if w <= T::pi() {
        return *psi;
    }
    let k = (w / T::two_pi()).round();
    psi * (T::one() - k * T::two_pi() / w)
}

/// Jacobian of [`complement_update`] for `|psi| >= pi`; identity otherwise.
pub fn complement_jacobian<T: Scalar>(psi: &Vector3<T>) -> nalgebra::Matrix3<T> {
    let w = psi.norm();
    if w < T::pi() {
        return nalgebra::Matrix3::identity();
    }
    let f = T::one() - T::two_pi() / w;
    nalgebra::Matrix3::identity() * f + psi * psi.transpose() * (T::two_pi() / (w * w * w))
}

/// `blockdiag(I, T^-1(psi))`, mapping nodal velocities `(v, omega)` to coordinate rates.
pub fn nodal_kinematic_map<T: Scalar>(lie: &LieConfig<T>, psi: &Vector3<T>) -> Result<Matrix6<T>> {
    let mut b = Matrix6::identity();
    b.fixed_view_mut::<3, 3>(3, 3).copy_from(&lie.inv_tangent_so3(psi)?);
    Ok(b)
}

/// Applies [`complement_update`] to every node of `q`; returns whether anything changed.
pub fn complement_update_all<T: Scalar>(q: &mut DVector<T>) -> bool {
    let mut changed = false;
    for i in 0..q.len() / NODE_DOFS {
        let mut n = NodalCoords::from_global(q, i);
        if n.psi.norm() >= T::pi() {
            n.psi = complement_update(&n.psi);
            n.write_global(q, i);
            changed = true;
        }
    }
    changed
}

pub(crate) fn half<T: Scalar>() -> T {
    lit(0.5)
}
