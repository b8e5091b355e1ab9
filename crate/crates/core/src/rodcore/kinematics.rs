use nalgebra::{Matrix4, SMatrix, Vector3};

use super::mesh::ElementGeometry;
use super::nodal::{node_pose, NodalCoords};
use crate::error::Result;
use crate::liegroup::{LieConfig, Pose, Tensor3, Twist};
use crate::scalar::{lit, Scalar};

/// Axial/shear strains `gamma` and curvatures `kappa`, both in the body frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrainState<T: Scalar> {
    pub gamma: Vector3<T>,
    pub kappa: Vector3<T>,
}

/// Derivative of the nodal pose with respect to `(r, psi)`.
pub fn node_pose_derivative<T: Scalar>(lie: &LieConfig<T>, psi: &Vector3<T>) -> [Matrix4<T>; 6] {
    let de = lie.d_exp_so3(psi);
    std::array::from_fn(|m| {
        let mut d = Matrix4::zeros();
        if m < 3 {
            d[(m, 3)] = T::one();
        } else {
            for i in 0..3 {
                for j in 0..3 {
                    d[(i, j)] = de[(i, j, m - 3)];
                }
            }
        }
        d
    })
}

/// `Log(H0^-1 H1)`.
pub fn relative_twist<T: Scalar>(lie: &LieConfig<T>, h0: &Pose<T>, h1: &Pose<T>) -> Result<Twist<T>> {
    lie.log_se3(&(h0.inverse() * *h1))
}

/// `H0 Exp(N1(xi) theta)`.
pub fn interpolate_pose<T: Scalar>(
    lie: &LieConfig<T>,
    h0: &Pose<T>,
    theta: &Twist<T>,
    geom: &ElementGeometry<T>,
    xi: T,
) -> Pose<T> {
    let (_, n1) = geom.shape(xi);
    *h0 * lie.exp_se3(&theta.scale(n1))
}

/// Interpolation about the element midpoint frame `R = H0 Exp(Log(H0^-1 H1)/2)`.
pub fn interpolate_pose_symmetric<T: Scalar>(
    lie: &LieConfig<T>,
    h0: &Pose<T>,
    h1: &Pose<T>,
    geom: &ElementGeometry<T>,
    xi: T,
) -> Result<Pose<T>> {
    let theta = relative_twist(lie, h0, h1)?;
    let r = *h0 * lie.exp_se3(&theta.scale(lit(0.5)));
    let ri = r.inverse();
    let l0 = lie.log_se3(&(ri * *h0))?;
    let l1 = lie.log_se3(&(ri * *h1))?;
    let (n0, n1) = geom.shape(xi);
    let x = l0.to_vector() * n0 + l1.to_vector() * n1;
    Ok(r * lie.exp_se3(&Twist::from_vector(&x)))
}

/// Strains of an element with relative twist `theta`: `theta / (dxi J)`.
pub fn element_strains<T: Scalar>(theta: &Twist<T>, geom: &ElementGeometry<T>) -> StrainState<T> {
    let s = T::one() / geom.length();
    StrainState { gamma: theta.v * s, kappa: theta.omega * s }
}

/// Nodal data and relative twist of one element, shared by all element level evaluations.
#[derive(Clone, Copy, Debug)]
pub struct ElementKinematics<T: Scalar> {
    pub geom: ElementGeometry<T>,
    pub nodes: [NodalCoords<T>; 2],
    pub h0: Pose<T>,
    pub h1: Pose<T>,
    pub theta: Twist<T>,
}

impl<T: Scalar> ElementKinematics<T> {
    pub fn new(
        lie: &LieConfig<T>,
        geom: ElementGeometry<T>,
        n0: NodalCoords<T>,
        n1: NodalCoords<T>,
    ) -> Result<Self> {
        let h0 = node_pose(lie, &n0);
        let h1 = node_pose(lie, &n1);
        let theta = relative_twist(lie, &h0, &h1)?;
        Ok(Self { geom, nodes: [n0, n1], h0, h1, theta })
    }

    pub fn pose_at(&self, lie: &LieConfig<T>, xi: T) -> Pose<T> {
        interpolate_pose(lie, &self.h0, &self.theta, &self.geom, xi)
    }

    pub fn strains(&self) -> StrainState<T> {
        element_strains(&self.theta, &self.geom)
    }

    /// `d theta / d q_e` with `q_e = (r0, psi0, r1, psi1)`.
    pub fn twist_jacobian(&self, lie: &LieConfig<T>) -> Result<SMatrix<T, 6, 12>> {
        let d0 = node_pose_derivative(lie, &self.nodes[0].psi);
        let d1 = node_pose_derivative(lie, &self.nodes[1].psi);
        let h0i = self.h0.inverse().to_homogeneous();
        let hrel_pose = self.h0.inverse() * self.h1;
        let hrel = hrel_pose.to_homogeneous();
        let dlog = lie.d_log_se3(&hrel_pose)?;
        let mut out = SMatrix::<T, 6, 12>::zeros();
        for m in 0..12 {
            let dh = if m < 6 { -(h0i * d0[m] * hrel) } else { h0i * d1[m - 6] };
            for i in 0..6 {
                let mut s = T::zero();
                for j in 0..3 {
                    for k in 0..4 {
                        s += dlog[(i, j, k)] * dh[(j, k)];
                    }
                }
                out[(i, m)] = s;
            }
        }
        Ok(out)
    }

    /// `d (gamma, kappa) / d q_e`.
    pub fn strain_jacobian(&self, lie: &LieConfig<T>) -> Result<SMatrix<T, 6, 12>> {
        Ok(self.twist_jacobian(lie)? / self.geom.length())
    }

    /// `d H(xi) / d q_e` given the twist Jacobian.
    pub fn pose_jacobian_with(
        &self,
        lie: &LieConfig<T>,
        xi: T,
        dtheta: &SMatrix<T, 6, 12>,
    ) -> [Matrix4<T>; 12] {
        let (_, n1) = self.geom.shape(xi);
        let x = self.theta.scale(n1);
        let e = lie.exp_se3(&x).to_homogeneous();
        let de = lie.d_exp_se3(&x);
        let h0 = self.h0.to_homogeneous();
        let d0 = node_pose_derivative(lie, &self.nodes[0].psi);
        let slices: [Matrix4<T>; 6] = std::array::from_fn(|n| de.slice(n) * n1);
        std::array::from_fn(|m| {
            let mut inner = Matrix4::zeros();
            for (n, s) in slices.iter().enumerate() {
                inner += s * dtheta[(n, m)];
            }
            let mut d = h0 * inner;
            if m < 6 {
                d += d0[m] * e;
            }
            d
        })
    }

    /// `d H(xi)_ij / d q_e,k` as a tensor.
    pub fn pose_jacobian(&self, lie: &LieConfig<T>, xi: T) -> Result<Tensor3<T, 4, 4, 12>> {
        let dtheta = self.twist_jacobian(lie)?;
        let d = self.pose_jacobian_with(lie, xi, &dtheta);
        Ok(Tensor3::from_fn(|i, j, k| d[k][(i, j)]))
    }
}
