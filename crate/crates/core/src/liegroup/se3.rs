use std::ops::Mul;

use nalgebra::{Matrix3, Matrix4, Vector3, Vector6};

use super::tensor::Tensor3;
use super::LieConfig;
use crate::error::Result;
use crate::scalar::Scalar;

/// Rigid transformation `(A, r)` acting as `x -> A x + r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose<T: Scalar> {
    pub rotation: Matrix3<T>,
    pub translation: Vector3<T>,
}

impl<T: Scalar> Pose<T> {
    pub fn new(rotation: Matrix3<T>, translation: Vector3<T>) -> Self {
        Self { rotation, translation }
    }

    pub fn identity() -> Self {
        Self::new(Matrix3::identity(), Vector3::zeros())
    }

    pub fn inverse(&self) -> Self {
        let at = self.rotation.transpose();
        Self::new(at, -(at * self.translation))
    }

    pub fn to_homogeneous(&self) -> Matrix4<T> {
        let mut h = Matrix4::identity();
        h.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.rotation);
        h.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.translation);
        h
    }

    pub fn from_homogeneous(h: &Matrix4<T>) -> Self {
        Self::new(h.fixed_view::<3, 3>(0, 0).into(), h.fixed_view::<3, 1>(0, 3).into())
    }

    pub fn transform_point(&self, x: &Vector3<T>) -> Vector3<T> {
        self.rotation * x + self.translation
    }
}

impl<T: Scalar> Mul for Pose<T> {
    type Output = Pose<T>;
    fn mul(self, rhs: Pose<T>) -> Pose<T> {
        Pose::new(self.rotation * rhs.rotation, self.rotation * rhs.translation + self.translation)
    }
}

impl<T: Scalar> Mul for &Pose<T> {
    type Output = Pose<T>;
    fn mul(self, rhs: &Pose<T>) -> Pose<T> {
        *self * *rhs
    }
}

/// Element of se(3) in `(v, omega)` ordering.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Twist<T: Scalar> {
    pub v: Vector3<T>,
    pub omega: Vector3<T>,
}

impl<T: Scalar> Twist<T> {
    pub fn new(v: Vector3<T>, omega: Vector3<T>) -> Self {
        Self { v, omega }
    }

    pub fn zeros() -> Self {
        Self::new(Vector3::zeros(), Vector3::zeros())
    }

    pub fn from_vector(x: &Vector6<T>) -> Self {
        Self::new(x.fixed_rows::<3>(0).into(), x.fixed_rows::<3>(3).into())
    }

    pub fn to_vector(&self) -> Vector6<T> {
        Vector6::new(self.v.x, self.v.y, self.v.z, self.omega.x, self.omega.y, self.omega.z)
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.v * s, self.omega * s)
    }

    pub fn as_array(&self) -> [T; 6] {
        [self.v.x, self.v.y, self.v.z, self.omega.x, self.omega.y, self.omega.z]
    }
}

impl<T: Scalar> LieConfig<T> {
    pub fn exp_se3(&self, theta: &Twist<T>) -> Pose<T> {
        let t = self.tangent_so3(&theta.omega);
        Pose::new(self.exp_so3(&theta.omega), t.transpose() * theta.v)
    }

    pub fn log_se3(&self, h: &Pose<T>) -> Result<Twist<T>> {
        let omega = self.log_so3(&h.rotation)?;
        let ti = self.inv_tangent_so3(&omega)?;
        Ok(Twist::new(ti.transpose() * h.translation, omega))
    }

    /// `d Exp(theta)_ij / d theta_k` in homogeneous 4x4 form.
    pub fn d_exp_se3(&self, theta: &Twist<T>) -> Tensor3<T, 4, 4, 6> {
        let de = self.d_exp_so3(&theta.omega);
        let t = self.tangent_so3(&theta.omega);
        let dt = self.d_tangent_so3(&theta.omega);
        let v = theta.v;
        let mut out = Tensor3::zeros();
        for i in 0..3 {
            for k in 0..3 {
                for j in 0..3 {
                    out[(i, j, k + 3)] = de[(i, j, k)];
                }
                out[(i, 3, k)] = t[(k, i)];
                let mut s = T::zero();
                for l in 0..3 {
                    s += v[l] * dt[(l, i, k)];
                }
                out[(i, 3, k + 3)] = s;
            }
        }
        out
    }

    /// `d Log(H)_i / d H_jk` with the 3x4 block of `H` treated as independent entries.
    pub fn d_log_se3(&self, h: &Pose<T>) -> Result<Tensor3<T, 6, 4, 4>> {
        let omega = self.log_so3(&h.rotation)?;
        let dl = self.d_log_so3(&h.rotation)?;
        let ti = self.inv_tangent_so3(&omega)?;
        let dti = self.d_inv_tangent_so3(&omega)?;
        let r = h.translation;
        // c[i][m] = sum_l r_l dTinv[l][i][m]
        let c = Matrix3::from_fn(|i, m| {
            let mut s = T::zero();
            for l in 0..3 {
                s += r[l] * dti[(l, i, m)];
            }
            s
        });
        let mut out = Tensor3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let mut s = T::zero();
                    for m in 0..3 {
                        s += c[(i, m)] * dl[(m, j, k)];
                    }
                    out[(i, j, k)] = s;
                    out[(i + 3, j, k)] = dl[(i, j, k)];
                }
                out[(i, j, 3)] = ti[(j, i)];
            }
        }
        Ok(out)
    }
}
