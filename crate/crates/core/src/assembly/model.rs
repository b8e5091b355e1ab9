use nalgebra::{DVector, Matrix3, Vector3};
use rayon::prelude::*;

use super::element::{self, Matrix12, Vector12};
use super::loads::{LoadSpec, PointLoad};
use super::quadrature::GaussLegendre;
use super::FrameVariant;
use crate::error::Result;
use crate::liegroup::{LieConfig, Pose};
use crate::linalg::BandMatrix;
use crate::rodcore::{
    node_pose, ConstitutiveLaw, CrossSectionInertia, ElementKinematics, Mesh, NodalCoords,
    StrainState, NODE_DOFS,
};
use crate::scalar::{lit, Scalar};

/// Half bandwidth of every global matrix (two nodes per element).
pub const BANDWIDTH: usize = 2 * NODE_DOFS - 1;

/// Element count above which element loops run on the rayon pool.
const PARALLEL_THRESHOLD: usize = 32;

/// Energies and momenta of a state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Diagnostics<T: Scalar> {
    pub kinetic: T,
    pub potential: T,
    pub linear_momentum: Vector3<T>,
    pub angular_momentum: Vector3<T>,
}

impl<T: Scalar> Diagnostics<T> {
    pub fn total_energy(&self) -> T {
        self.kinetic + self.potential
    }
}

/// Discretised rod: mesh, material, inertia and integration rule.
#[derive(Clone, Debug)]
pub struct RodModel<T: Scalar> {
    pub mesh: Mesh<T>,
    pub law: ConstitutiveLaw<T>,
    pub inertia: CrossSectionInertia<T>,
    pub quadrature: GaussLegendre<T>,
    pub variant: FrameVariant,
    pub lie: LieConfig<T>,
}

impl<T: Scalar> RodModel<T> {
    pub fn new(mesh: Mesh<T>, law: ConstitutiveLaw<T>, inertia: CrossSectionInertia<T>) -> Self {
        Self {
            mesh,
            law,
            inertia,
            quadrature: GaussLegendre::new(2),
            variant: FrameVariant::Body,
            lie: LieConfig::default(),
        }
    }

    pub fn with_variant(mut self, variant: FrameVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_quadrature(mut self, n: usize) -> Self {
        self.quadrature = GaussLegendre::new(n);
        self
    }

    pub fn n_nodes(&self) -> usize {
        self.mesh.n_nodes()
    }

    pub fn n_dofs(&self) -> usize {
        NODE_DOFS * self.n_nodes()
    }

    pub fn kinematics(&self, q: &DVector<T>, e: usize) -> Result<ElementKinematics<T>> {
        ElementKinematics::new(
            &self.lie,
            self.mesh.element(e),
            NodalCoords::from_global(q, e),
            NodalCoords::from_global(q, e + 1),
        )
    }

    fn map_elements<R: Send>(&self, f: impl Fn(usize) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
        let n = self.mesh.n_elements();
        if n >= PARALLEL_THRESHOLD {
            (0..n).into_par_iter().map(f).collect()
        } else {
            (0..n).map(f).collect()
        }
    }

    fn scatter(&self, parts: &[Vector12<T>]) -> DVector<T> {
        let mut out = DVector::zeros(self.n_dofs());
        for (e, p) in parts.iter().enumerate() {
            let mut view = out.rows_mut(NODE_DOFS * e, 12);
            view += p;
        }
        out
    }

    fn scatter_matrix(&self, parts: &[Matrix12<T>]) -> BandMatrix<T> {
        let mut out = BandMatrix::zeros(self.n_dofs(), BANDWIDTH, BANDWIDTH);
        for (e, p) in parts.iter().enumerate() {
            let o = NODE_DOFS * e;
            for i in 0..12 {
                for j in 0..12 {
                    out.add(o + i, o + j, p[(i, j)]);
                }
            }
        }
        out
    }

    /// Global internal force vector.
    pub fn internal_force(&self, q: &DVector<T>) -> Result<DVector<T>> {
        let parts = self.map_elements(|e| {
            let kin = self.kinematics(q, e)?;
            let (f, _) =
                element::internal_force(&self.lie, &kin, &self.law, &self.quadrature, self.variant, false)?;
            Ok(f)
        })?;
        Ok(self.scatter(&parts))
    }

    /// Global internal force and its derivative with respect to `q`.
    pub fn internal_force_and_jacobian(&self, q: &DVector<T>) -> Result<(DVector<T>, BandMatrix<T>)> {
        let parts = self.map_elements(|e| {
            let kin = self.kinematics(q, e)?;
            let (f, k) =
                element::internal_force(&self.lie, &kin, &self.law, &self.quadrature, self.variant, true)?;
            Ok((f, k.expect("jacobian requested")))
        })?;
        let (f, k): (Vec<_>, Vec<_>) = parts.into_iter().unzip();
        Ok((self.scatter(&f), self.scatter_matrix(&k)))
    }

    fn point_load_contribution(
        &self,
        node: &NodalCoords<T>,
        t: T,
        force: &Option<PointLoad<T>>,
        moment: &Option<PointLoad<T>>,
    ) -> [T; 6] {
        let h = node_pose(&self.lie, node);
        let mut out = [T::zero(); 6];
        if let Some(b) = force {
            let v = b(t, &h);
            out[..3].copy_from_slice(v.as_slice());
        }
        if let Some(c) = moment {
            let mut v = c(t, &h);
            if self.variant == FrameVariant::Inertial {
                v = h.rotation * v;
            }
            out[3..].copy_from_slice(v.as_slice());
        }
        out
    }

    /// Global external force vector at time (or load factor) `t`.
    pub fn external_force(&self, q: &DVector<T>, t: T, loads: &LoadSpec<T>) -> Result<DVector<T>> {
        let mut out = DVector::zeros(self.n_dofs());
        if loads.b.is_some() || loads.c.is_some() {
            let parts = self.map_elements(|e| {
                let kin = self.kinematics(q, e)?;
                let g = &kin.geom;
                let mut f = Vector12::zeros();
                for (xi, w) in self.quadrature.on_interval(g.xi0, g.xi1) {
                    let (n0, n1) = g.shape(xi);
                    let b = loads.b.as_ref().map(|b| b(xi, t)).unwrap_or_else(Vector3::zeros);
                    let mut c = loads.c.as_ref().map(|c| c(xi, t)).unwrap_or_else(Vector3::zeros);
                    if self.variant == FrameVariant::Inertial && loads.c.is_some() {
                        c = kin.pose_at(&self.lie, xi).rotation * c;
                    }
                    for (slot, nn) in [(0, n0), (2, n1)] {
                        let s = w * g.j * nn;
                        for k in 0..3 {
                            f[3 * slot + k] += b[k] * s;
                            f[3 * slot + 3 + k] += c[k] * s;
                        }
                    }
                }
                Ok(f)
            })?;
            out += self.scatter(&parts);
        }
        let last = self.n_nodes() - 1;
        for (node, b, c) in [(0, &loads.b0, &loads.c0), (last, &loads.b1, &loads.c1)] {
            let p = self.point_load_contribution(&NodalCoords::from_global(q, node), t, b, c);
            for k in 0..6 {
                out[NODE_DOFS * node + k] += p[k];
            }
        }
        Ok(out)
    }

    /// Adds `d f_ext / d q` of configuration dependent point loads to `k` (central differences).
    pub fn add_external_jacobian(&self, q: &DVector<T>, t: T, loads: &LoadSpec<T>, k: &mut BandMatrix<T>) {
        let last = self.n_nodes() - 1;
        for (node, b, c) in [(0, &loads.b0, &loads.c0), (last, &loads.b1, &loads.c1)] {
            if b.is_none() && c.is_none() {
                continue;
            }
            let base = NodalCoords::from_global(q, node);
            for m in 0..6 {
                let scale = if m < 3 { base.r.amax().max(T::one()) } else { T::one() };
                let h = scale * lit(1e-6);
                let mut p = base;
                let mut n = base;
                if m < 3 {
                    p.r[m] += h;
                    n.r[m] -= h;
                } else {
                    p.psi[m - 3] += h;
                    n.psi[m - 3] -= h;
                }
                let fp = self.point_load_contribution(&p, t, b, c);
                let fm = self.point_load_contribution(&n, t, b, c);
                for i in 0..6 {
                    let d = (fp[i] - fm[i]) / (h + h);
                    if d != T::zero() {
                        k.add(NODE_DOFS * node + i, NODE_DOFS * node + m, d);
                    }
                }
            }
        }
    }

    pub fn mass_matrix(&self, q: &DVector<T>) -> Result<BandMatrix<T>> {
        let parts = self.map_elements(|e| {
            let kin = self.kinematics(q, e)?;
            Ok(element::mass(&self.lie, &kin, &self.inertia, &self.quadrature, self.variant))
        })?;
        Ok(self.scatter_matrix(&parts))
    }

    /// Whether the mass matrix is independent of the configuration.
    pub fn constant_mass(&self) -> bool {
        self.variant == FrameVariant::Body && self.inertia.s_rho0 == Vector3::zeros()
    }

    pub fn gyroscopic_force(&self, q: &DVector<T>, u: &DVector<T>) -> Result<DVector<T>> {
        let parts = self.map_elements(|e| {
            let kin = self.kinematics(q, e)?;
            let om = [angular(u, e), angular(u, e + 1)];
            Ok(element::gyroscopic(&self.lie, &kin, &self.inertia, &self.quadrature, self.variant, om))
        })?;
        Ok(self.scatter(&parts))
    }

    /// Coordinate rates `q_dot = B(q) u`.
    pub fn coordinate_rates(&self, q: &DVector<T>, u: &DVector<T>) -> Result<DVector<T>> {
        let mut out = DVector::zeros(self.n_dofs());
        for i in 0..self.n_nodes() {
            let node = NodalCoords::from_global(q, i);
            let o = NODE_DOFS * i;
            let mut om = angular(u, i);
            if self.variant == FrameVariant::Inertial {
                om = self.lie.exp_so3(&node.psi).transpose() * om;
            }
            let pd = self.lie.inv_tangent_so3(&node.psi)? * om;
            for k in 0..3 {
                out[o + k] = u[o + k];
                out[o + 3 + k] = pd[k];
            }
        }
        Ok(out)
    }

    pub fn pose_at(&self, q: &DVector<T>, xi: T) -> Result<Pose<T>> {
        let e = self.mesh.locate(xi);
        Ok(self.kinematics(q, e)?.pose_at(&self.lie, xi))
    }

    pub fn element_strains(&self, q: &DVector<T>) -> Result<Vec<StrainState<T>>> {
        self.map_elements(|e| Ok(self.kinematics(q, e)?.strains()))
    }

    pub fn potential_energy(&self, q: &DVector<T>) -> Result<T> {
        let parts = self.map_elements(|e| {
            let kin = self.kinematics(q, e)?;
            Ok(self.law.energy_density(&kin.strains()) * kin.geom.length())
        })?;
        Ok(parts.into_iter().fold(T::zero(), |a, b| a + b))
    }

    pub fn diagnostics(&self, q: &DVector<T>, u: &DVector<T>) -> Result<Diagnostics<T>> {
        let m = self.mass_matrix(q)?;
        let kinetic = u.dot(&m.mul_vec(u)) * lit(0.5);
        let potential = self.potential_energy(q)?;
        let st = self.inertia.s_tilde();
        let mut lin = Vector3::zeros();
        let mut ang = Vector3::zeros();
        for e in 0..self.mesh.n_elements() {
            let kin = self.kinematics(q, e)?;
            let g = &kin.geom;
            for (xi, w) in self.quadrature.on_interval(g.xi0, g.xi1) {
                let (n0, n1) = g.shape(xi);
                let v = linear(u, e) * n0 + linear(u, e + 1) * n1;
                let om = angular(u, e) * n0 + angular(u, e + 1) * n1;
                let p = kin.pose_at(&self.lie, xi);
                let a = p.rotation;
                let (om_i, inertia_i): (Vector3<T>, Matrix3<T>) = match self.variant {
                    FrameVariant::Body => (a * om, a * self.inertia.i_rho0 * a.transpose()),
                    FrameVariant::Inertial => (om, a * self.inertia.i_rho0 * a.transpose()),
                };
                let mom = v * self.inertia.a_rho0 + a * st.transpose() * a.transpose() * om_i;
                lin += mom * (w * g.j);
                ang += (p.translation.cross(&mom) + inertia_i * om_i) * (w * g.j);
            }
        }
        Ok(Diagnostics { kinetic, potential, linear_momentum: lin, angular_momentum: ang })
    }
}

fn linear<T: Scalar>(u: &DVector<T>, i: usize) -> Vector3<T> {
    let o = NODE_DOFS * i;
    Vector3::new(u[o], u[o + 1], u[o + 2])
}

fn angular<T: Scalar>(u: &DVector<T>, i: usize) -> Vector3<T> {
    let o = NODE_DOFS * i + 3;
    Vector3::new(u[o], u[o + 1], u[o + 2])
}
