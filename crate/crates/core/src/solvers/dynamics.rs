use std::sync::OnceLock;

use nalgebra::{DVector, Vector3};

use super::bc::{constrained_indices, BoundaryCondition};
use super::ode::OdeSystem;
use crate::assembly::{LoadSpec, RodModel};
use crate::error::Result;
use crate::linalg::BandLu;
use crate::rodcore::{complement_jacobian, complement_update, NODE_DOFS};
use crate::scalar::Scalar;

/// Semi-discrete equations of motion `q' = B(q) u`, `M u' = f_int + f_ext - f_gyr` with
/// constraints enforced at acceleration level. State layout `y = (q, u)`.
pub struct RodDynamics<T: Scalar> {
    pub model: RodModel<T>,
    pub loads: LoadSpec<T>,
    pub bcs: Vec<BoundaryCondition<T>>,
    constrained: Vec<usize>,
    mass_lu: OnceLock<BandLu<T>>,
}

impl<T: Scalar> RodDynamics<T> {
    pub fn new(model: RodModel<T>, loads: LoadSpec<T>, bcs: Vec<BoundaryCondition<T>>) -> Self {
        let constrained = constrained_indices(&bcs);
        Self { model, loads, bcs, constrained, mass_lu: OnceLock::new() }
    }

    pub fn n_dofs(&self) -> usize {
        self.model.n_dofs()
    }

    /// Stacks `(q, u)` after projecting `u` onto the constraints at `t0`.
    pub fn initial_state(&self, t0: T, q0: &DVector<T>, u0: &DVector<T>) -> DVector<T> {
        let n = self.n_dofs();
        let mut q = q0.clone();
        let mut u = u0.clone();
        for b in &self.bcs {
            b.apply_coords(t0, &mut q);
            b.apply_velocity(t0, &mut u);
        }
        let mut y = DVector::zeros(2 * n);
        y.rows_mut(0, n).copy_from(&q);
        y.rows_mut(n, n).copy_from(&u);
        y
    }

    pub fn split(&self, y: &DVector<T>) -> (DVector<T>, DVector<T>) {
        let n = self.n_dofs();
        (y.rows(0, n).into(), y.rows(n, n).into())
    }

    fn constrained_mass(&self, q: &DVector<T>) -> Result<BandLu<T>> {
        let mut m = self.model.mass_matrix(q)?;
        for &i in &self.constrained {
            m.constrain(i);
        }
        m.lu()
    }

    /// Generalised accelerations for state `(q, u)` at time `t`.
    pub fn accelerations(&self, t: T, q: &DVector<T>, u: &DVector<T>) -> Result<DVector<T>> {
        let model = &self.model;
        let mut f = model.internal_force(q)? + model.external_force(q, t, &self.loads)?
            - model.gyroscopic_force(q, u)?;
        let mut ac = DVector::zeros(self.n_dofs());
        for b in &self.bcs {
            let a = b.acceleration(t);
            for k in 0..NODE_DOFS {
                if b.dofs[k] {
                    ac[NODE_DOFS * b.node + k] = a[k];
                }
            }
        }
        let has_motion = ac.amax() > T::zero();
        if has_motion {
            let m = model.mass_matrix(q)?;
            f -= m.mul_vec(&ac);
        }
        for &i in &self.constrained {
            f[i] = ac[i];
        }
        if model.constant_mass() {
            let lu = match self.mass_lu.get() {
                Some(lu) => lu,
                None => {
                    let lu = self.constrained_mass(q)?;
                    self.mass_lu.get_or_init(|| lu)
                }
            };
            Ok(lu.solve(&f))
        } else {
            Ok(self.constrained_mass(q)?.solve(&f))
        }
    }
}

impl<T: Scalar> OdeSystem<T> for RodDynamics<T> {
    fn dim(&self) -> usize {
        2 * self.n_dofs()
    }

    fn rhs(&self, t: T, y: &DVector<T>) -> Result<DVector<T>> {
        let n = self.n_dofs();
        let (q, u) = self.split(y);
        let qd = self.model.coordinate_rates(&q, &u)?;
        let ud = self.accelerations(t, &q, &u)?;
        let mut out = DVector::zeros(2 * n);
        out.rows_mut(0, n).copy_from(&qd);
        out.rows_mut(n, n).copy_from(&ud);
        Ok(out)
    }

    fn after_step(&self, _t: T, y: &mut DVector<T>, mut ydot: Option<&mut DVector<T>>) -> bool {
        let mut changed = false;
        for i in 0..self.model.n_nodes() {
            let o = NODE_DOFS * i + 3;
            let psi = Vector3::new(y[o], y[o + 1], y[o + 2]);
            if psi.norm() < T::pi() {
                continue;
            }
            if let Some(yd) = ydot.as_deref_mut() {
                let rate = complement_jacobian(&psi) * Vector3::new(yd[o], yd[o + 1], yd[o + 2]);
                for k in 0..3 {
                    yd[o + k] = rate[k];
                }
            }
            let c = complement_update(&psi);
            for k in 0..3 {
                y[o + k] = c[k];
            }
            changed = true;
        }
        changed
    }
}
