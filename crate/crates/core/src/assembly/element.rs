//! Element level internal force, tangent, mass and gyroscopic terms.

use nalgebra::{Matrix3, SMatrix, SVector, Vector3};

use super::quadrature::GaussLegendre;
use super::FrameVariant;
use crate::error::Result;
use crate::liegroup::{skew, LieConfig};
use crate::rodcore::{ConstitutiveLaw, CrossSectionInertia, ElementKinematics};
use crate::scalar::Scalar;

pub type Vector12<T> = SVector<T, 12>;
pub type Matrix12<T> = SMatrix<T, 12, 12>;

fn add3<T: Scalar>(f: &mut Vector12<T>, slot: usize, v: &Vector3<T>) {
    for k in 0..3 {
        f[3 * slot + k] += v[k];
    }
}

fn add3x12<T: Scalar>(k: &mut Matrix12<T>, slot: usize, d: &SMatrix<T, 3, 12>) {
    let mut view = k.fixed_view_mut::<3, 12>(3 * slot, 0);
    view += d;
}

fn add3x3<T: Scalar>(m: &mut Matrix12<T>, row: usize, col: usize, b: &Matrix3<T>) {
    let mut view = m.fixed_view_mut::<3, 3>(3 * row, 3 * col);
    view += b;
}

/// Internal force `f_int,e` ordered `(r0, psi0, r1, psi1)` and optionally `d f_int,e / d q_e`.
pub fn internal_force<T: Scalar>(
    lie: &LieConfig<T>,
    kin: &ElementKinematics<T>,
    law: &ConstitutiveLaw<T>,
    quad: &GaussLegendre<T>,
    variant: FrameVariant,
    with_jacobian: bool,
) -> Result<(Vector12<T>, Option<Matrix12<T>>)> {
    let geom = &kin.geom;
    let s = kin.strains();
    let (n, m) = law.stress(&s);
    let jr = geom.j;
    let gbar = s.gamma * jr;
    let kbar = s.kappa * jr;
    let dn = geom.shape_derivative();
    let dn = [dn.0, dn.1];
    let gxn = gbar.cross(&n);
    let src = gxn + kbar.cross(&m);

    let prep = if with_jacobian {
        let dtheta = kin.twist_jacobian(lie)?;
        let de = dtheta / geom.length();
        let dg: SMatrix<T, 3, 12> = de.fixed_rows::<3>(0).into();
        let dk: SMatrix<T, 3, 12> = de.fixed_rows::<3>(3).into();
        let dnv = law.c_gamma * dg;
        let dmv = law.c_kappa * dk;
        let dgxn = skew(&gbar) * dnv - skew(&n) * dg * jr;
        let dsrc = dgxn + skew(&kbar) * dmv - skew(&m) * dk * jr;
        Some((dtheta, dnv, dmv, dgxn, dsrc))
    } else {
        None
    };

    let mut f = Vector12::zeros();
    let mut kmat = Matrix12::zeros();
    for (xi, w) in quad.on_interval(geom.xi0, geom.xi1) {
        let (n0, n1) = geom.shape(xi);
        let nn = [n0, n1];
        let a = kin.pose_at(lie, xi).rotation;
        let an = a * n;
        match variant {
            FrameVariant::Body => {
                for i in 0..2 {
                    add3(&mut f, 2 * i, &(an * (w * dn[i])));
                    add3(&mut f, 2 * i + 1, &((m * dn[i] - src * nn[i]) * w));
                }
            }
            FrameVariant::Inertial => {
                let am = a * m;
                let agn = a * gxn;
                for i in 0..2 {
                    add3(&mut f, 2 * i, &(an * (w * dn[i])));
                    add3(&mut f, 2 * i + 1, &((am * dn[i] - agn * nn[i]) * w));
                }
            }
        }
        if let Some((dtheta, dnv, dmv, dgxn, dsrc)) = &prep {
            let da = kin.pose_jacobian_with(lie, xi, dtheta);
            let mut dan = a * dnv;
            for (c, d) in da.iter().enumerate() {
                let dr = d.fixed_view::<3, 3>(0, 0) * n;
                for k in 0..3 {
                    dan[(k, c)] += dr[k];
                }
            }
            match variant {
                FrameVariant::Body => {
                    for i in 0..2 {
                        add3x12(&mut kmat, 2 * i, &(dan * (w * dn[i])));
                        add3x12(&mut kmat, 2 * i + 1, &((dmv * dn[i] - dsrc * nn[i]) * w));
                    }
                }
                FrameVariant::Inertial => {
                    let mut dam = a * dmv;
                    let mut dagn = a * dgxn;
                    for (c, d) in da.iter().enumerate() {
                        let dr = d.fixed_view::<3, 3>(0, 0);
                        let (x, y) = (dr * m, dr * gxn);
                        for k in 0..3 {
                            dam[(k, c)] += x[k];
                            dagn[(k, c)] += y[k];
                        }
                    }
                    for i in 0..2 {
                        add3x12(&mut kmat, 2 * i, &(dan * (w * dn[i])));
                        add3x12(&mut kmat, 2 * i + 1, &((dam * dn[i] - dagn * nn[i]) * w));
                    }
                }
            }
        }
    }
    Ok((-f, prep.map(|_| -kmat)))
}

/// Consistent element mass matrix.
pub fn mass<T: Scalar>(
    lie: &LieConfig<T>,
    kin: &ElementKinematics<T>,
    inertia: &CrossSectionInertia<T>,
    quad: &GaussLegendre<T>,
    variant: FrameVariant,
) -> Matrix12<T> {
    let geom = &kin.geom;
    let st = inertia.s_tilde();
    let mut out = Matrix12::zeros();
    for (xi, w) in quad.on_interval(geom.xi0, geom.xi1) {
        let (n0, n1) = geom.shape(xi);
        let nn = [n0, n1];
        let a = kin.pose_at(lie, xi).rotation;
        let (rp, pr, pp) = match variant {
            FrameVariant::Body => (a * st.transpose(), st * a.transpose(), inertia.i_rho0),
            FrameVariant::Inertial => {
                let at = a.transpose();
                (a * st.transpose() * at, a * st * at, a * inertia.i_rho0 * at)
            }
        };
        let rr = Matrix3::identity() * inertia.a_rho0;
        for i in 0..2 {
            for k in 0..2 {
                let c = w * geom.j * nn[i] * nn[k];
                add3x3(&mut out, 2 * i, 2 * k, &(rr * c));
                add3x3(&mut out, 2 * i, 2 * k + 1, &(rp * c));
                add3x3(&mut out, 2 * i + 1, 2 * k, &(pr * c));
                add3x3(&mut out, 2 * i + 1, 2 * k + 1, &(pp * c));
            }
        }
    }
    out
}

/// Gyroscopic force with nodal angular velocities interpolated linearly.
pub fn gyroscopic<T: Scalar>(
    lie: &LieConfig<T>,
    kin: &ElementKinematics<T>,
    inertia: &CrossSectionInertia<T>,
    quad: &GaussLegendre<T>,
    variant: FrameVariant,
    omega: [Vector3<T>; 2],
) -> Vector12<T> {
    let geom = &kin.geom;
    let st = inertia.s_tilde();
    let mut out = Vector12::zeros();
    for (xi, w) in quad.on_interval(geom.xi0, geom.xi1) {
        let (n0, n1) = geom.shape(xi);
        let nn = [n0, n1];
        let om = omega[0] * n0 + omega[1] * n1;
        let ot = skew(&om);
        let a = kin.pose_at(lie, xi).rotation;
        let (fr, fp) = match variant {
            FrameVariant::Body => (a * ot * st.transpose() * om, ot * inertia.i_rho0 * om),
            FrameVariant::Inertial => {
                let at = a.transpose();
                (ot * a * st.transpose() * at * om, ot * a * inertia.i_rho0 * at * om)
            }
        };
        for i in 0..2 {
            let c = w * geom.j * nn[i];
            add3(&mut out, 2 * i, &(fr * c));
            add3(&mut out, 2 * i + 1, &(fp * c));
        }
    }
    out
}
