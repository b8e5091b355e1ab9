use nalgebra::{Matrix3, Vector3};

use super::tensor::{levi_civita, Tensor3};
use super::LieConfig;
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

/// Trace threshold below which the logarithm is refused (angle within ~3e-5 of pi).
pub const LOG_TRACE_LIMIT: f64 = -1.0 + 1e-9;

pub fn skew<T: Scalar>(w: &Vector3<T>) -> Matrix3<T> {
    let z = T::zero();
    Matrix3::new(z, -w.z, w.y, w.z, z, -w.x, -w.y, w.x, z)
}

/// Inverse of [`skew`]; rejects matrices whose symmetric part is not negligible.
pub fn vee<T: Scalar>(m: &Matrix3<T>) -> Result<Vector3<T>> {
    let sym = (m + m.transpose()).amax();
    let scale = m.amax().max(T::one());
    if sym > lit::<T>(1e-9) * scale {
        return Err(Error::NonSkewInput(to_f64(sym)));
    }
    Ok(vee_unchecked(m))
}

pub(crate) fn vee_unchecked<T: Scalar>(m: &Matrix3<T>) -> Vector3<T> {
    let h: T = lit(0.5);
    Vector3::new(
        (m[(2, 1)] - m[(1, 2)]) * h,
        (m[(0, 2)] - m[(2, 0)]) * h,
        (m[(1, 0)] - m[(0, 1)]) * h,
    )
}

/// `alpha = sin w / w` and `beta = 2 (1 - cos w) / w^2`.
pub(crate) fn alpha_beta<T: Scalar>(w: T) -> (T, T) {
    let half = w * lit(0.5);
    let s = half.sin() / half;
    (w.sin() / w, s * s)
}

/// Second derivative of a skew matrix squared: `d(W W)_ij / dw_k`.
pub(crate) fn d_skew_sq<T: Scalar>(wt: &Matrix3<T>, i: usize, j: usize, k: usize) -> T {
    let mut s = T::zero();
    for l in 0..3 {
        s += levi_civita::<T>(k, l, i) * wt[(l, j)] + wt[(i, l)] * levi_civita::<T>(k, j, l);
    }
    s
}

impl<T: Scalar> LieConfig<T> {
    pub fn exp_so3(&self, psi: &Vector3<T>) -> Matrix3<T> {
        let w = psi.norm();
        let wt = skew(psi);
        if w <= self.omega_crit {
            return Matrix3::identity() + wt;
        }
        let (a, b) = alpha_beta(w);
        Matrix3::identity() + wt * a + wt * wt * (b * lit(0.5))
    }

    pub fn log_so3(&self, a: &Matrix3<T>) -> Result<Vector3<T>> {
        let tr = a.trace();
        if tr <= lit(LOG_TRACE_LIMIT) {
            return Err(Error::AngleAtPi(to_f64(tr)));
        }
        let c = ((tr - T::one()) * lit(0.5)).clamp(-T::one(), T::one());
        let w = c.acos();
        // d = (A32 - A23, A13 - A31, A21 - A12)
        let d = vee_unchecked(&(a - a.transpose()));
        if w <= self.omega_crit {
            return Ok(d * lit::<T>(0.5));
        }
        Ok(d * (w / (lit::<T>(2.0) * w.sin())))
    }

    pub fn tangent_so3(&self, psi: &Vector3<T>) -> Matrix3<T> {
        let w = psi.norm();
        let wt = skew(psi);
        let h: T = lit(0.5);
        if w <= self.omega_crit {
            return Matrix3::identity() - wt * h;
        }
        let (a, b) = alpha_beta(w);
        Matrix3::identity() - wt * (b * h) + wt * wt * ((T::one() - a) / (w * w))
    }

    pub fn inv_tangent_so3(&self, psi: &Vector3<T>) -> Result<Matrix3<T>> {
        let w = psi.norm();
        let wt = skew(psi);
        let h: T = lit(0.5);
        if w <= self.omega_crit {
            return Ok(Matrix3::identity() + wt * h);
        }
        let g = self.gamma(w)?;
        Ok(Matrix3::identity() + wt * h + wt * wt * ((T::one() - g) / (w * w)))
    }

    /// `gamma = (w/2) cot(w/2)`, failing near the poles at `w = 2 pi k`.
    fn gamma(&self, w: T) -> Result<T> {
        let k = (w / T::two_pi()).round();
        if k >= T::one() && (w - k * T::two_pi()).abs() <= self.omega_crit {
            return Err(Error::TangentSingular(to_f64(w)));
        }
        let half = w * lit(0.5);
        Ok(half * half.cos() / half.sin())
    }

    /// `d Exp(psi)_ij / d psi_k`.
    pub fn d_exp_so3(&self, psi: &Vector3<T>) -> Tensor3<T, 3, 3, 3> {
        let w = psi.norm();
        if w <= self.omega_crit {
            return Tensor3::from_fn(|i, j, k| -levi_civita::<T>(i, j, k));
        }
        let wt = skew(psi);
        let wt2 = wt * wt;
        let (a, b) = alpha_beta(w);
        let w2 = w * w;
        let c1 = (w.cos() - a) / w2;
        let c2 = (a - b) / w2;
        let hb = b * lit(0.5);
        Tensor3::from_fn(|i, j, k| {
            -a * levi_civita::<T>(i, j, k)
                + c1 * wt[(i, j)] * psi[k]
                + c2 * wt2[(i, j)] * psi[k]
                + hb * d_skew_sq(&wt, i, j, k)
        })
    }

    /// `d Log(A)_i / d A_jk`, with the entries of `A` treated as independent.
    pub fn d_log_so3(&self, a: &Matrix3<T>) -> Result<Tensor3<T, 3, 3, 3>> {
        let tr = a.trace();
        if tr <= lit(LOG_TRACE_LIMIT) {
            return Err(Error::AngleAtPi(to_f64(tr)));
        }
        let c = ((tr - T::one()) * lit(0.5)).clamp(-T::one(), T::one());
        let w = c.acos();
        let h: T = lit(0.5);
        if w <= self.omega_crit {
            return Ok(Tensor3::from_fn(|i, j, k| -h * levi_civita::<T>(i, j, k)));
        }
        let s = w.sin();
        let d = vee_unchecked(&(a - a.transpose()));
        let c1 = (w * w.cos() - s) / (lit::<T>(4.0) * s * s * s);
        let c2 = w / (lit::<T>(2.0) * s);
        Ok(Tensor3::from_fn(|i, j, k| {
            let diag = if j == k { c1 * d[i] } else { T::zero() };
            diag - c2 * levi_civita::<T>(i, j, k)
        }))
    }

    /// `d T(psi)_ij / d psi_k`.
    pub fn d_tangent_so3(&self, psi: &Vector3<T>) -> Tensor3<T, 3, 3, 3> {
        let w = psi.norm();
        let h: T = lit(0.5);
        if w <= self.omega_crit {
            return Tensor3::from_fn(|i, j, k| h * levi_civita::<T>(i, j, k));
        }
        let wt = skew(psi);
        let wt2 = wt * wt;
        let (a, b) = alpha_beta(w);
        let w2 = w * w;
        let c1 = (b - a) / w2;
        let c2 = (T::one() - a) / w2;
        let c3 = (lit::<T>(3.0) * a - lit(2.0) - w.cos()) / (w2 * w2);
        Tensor3::from_fn(|i, j, k| {
            b * h * levi_civita::<T>(i, j, k)
                + c1 * wt[(i, j)] * psi[k]
                + c2 * d_skew_sq(&wt, i, j, k)
                + c3 * wt2[(i, j)] * psi[k]
        })
    }

    /// `d T^-1(psi)_ij / d psi_k`.
    pub fn d_inv_tangent_so3(&self, psi: &Vector3<T>) -> Result<Tensor3<T, 3, 3, 3>> {
        let w = psi.norm();
        let h: T = lit(0.5);
        if w <= self.omega_crit {
            return Ok(Tensor3::from_fn(|i, j, k| -h * levi_civita::<T>(i, j, k)));
        }
        let g = self.gamma(w)?;
        let wt = skew(psi);
        let wt2 = wt * wt;
        let w2 = w * w;
        let c1 = (T::one() - g) / w2;
        let c2 = (lit::<T>(0.25) - (g * (T::one() - g) + lit::<T>(2.0) * (T::one() - g)) / w2) / w2;
        Ok(Tensor3::from_fn(|i, j, k| {
            -h * levi_civita::<T>(i, j, k) + c1 * d_skew_sq(&wt, i, j, k) + c2 * wt2[(i, j)] * psi[k]
        }))
    }
}
