use std::sync::Arc;

use nalgebra::DVector;

use crate::rodcore::{NodalCoords, NODE_DOFS};
use crate::scalar::Scalar;

/// State of a prescribed node at one instant; velocities are `(v, omega)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrescribedMotion<T: Scalar> {
    pub coords: NodalCoords<T>,
    pub velocity: [T; 6],
    pub acceleration: [T; 6],
}

pub type MotionFn<T> = Arc<dyn Fn(T) -> PrescribedMotion<T> + Send + Sync>;

#[derive(Clone)]
pub enum BcKind<T: Scalar> {
    /// Degrees of freedom keep their initial values.
    Fixed,
    /// Degrees of freedom follow a given motion of time or load factor.
    Prescribed(MotionFn<T>),
}

/// Constraint on a subset of the six nodal degrees of freedom.
#[derive(Clone)]
pub struct BoundaryCondition<T: Scalar> {
    pub node: usize,
    pub dofs: [bool; 6],
    pub kind: BcKind<T>,
}

impl<T: Scalar> BoundaryCondition<T> {
    /// All six degrees of freedom fixed.
    pub fn clamp(node: usize) -> Self {
        Self { node, dofs: [true; 6], kind: BcKind::Fixed }
    }

    /// Position fixed, rotation free.
    pub fn pin(node: usize) -> Self {
        Self { node, dofs: [true, true, true, false, false, false], kind: BcKind::Fixed }
    }

    pub fn prescribed(
        node: usize,
        dofs: [bool; 6],
        motion: impl Fn(T) -> PrescribedMotion<T> + Send + Sync + 'static,
    ) -> Self {
        Self { node, dofs, kind: BcKind::Prescribed(Arc::new(motion)) }
    }

    /// Global indices of the constrained degrees of freedom.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..NODE_DOFS).filter(|&k| self.dofs[k]).map(|k| NODE_DOFS * self.node + k)
    }

    fn motion(&self, t: T) -> Option<PrescribedMotion<T>> {
        match &self.kind {
            BcKind::Fixed => None,
            BcKind::Prescribed(f) => Some(f(t)),
        }
    }

    /// Writes prescribed coordinates at `t` into `q`.
    pub fn apply_coords(&self, t: T, q: &mut DVector<T>) {
        if let Some(m) = self.motion(t) {
            let mut full = DVector::zeros(q.len());
            m.coords.write_global(&mut full, self.node);
            for i in self.indices() {
                q[i] = full[i];
            }
        }
    }

    /// Writes prescribed velocities (zero for fixed) into `u`.
    pub fn apply_velocity(&self, t: T, u: &mut DVector<T>) {
        let v = self.motion(t).map(|m| m.velocity).unwrap_or([T::zero(); 6]);
        for k in 0..NODE_DOFS {
            if self.dofs[k] {
                u[NODE_DOFS * self.node + k] = v[k];
            }
        }
    }

    pub fn acceleration(&self, t: T) -> [T; 6] {
        self.motion(t).map(|m| m.acceleration).unwrap_or([T::zero(); 6])
    }
}

pub(crate) fn constrained_indices<T: Scalar>(bcs: &[BoundaryCondition<T>]) -> Vec<usize> {
    let mut v: Vec<usize> = bcs.iter().flat_map(|b| b.indices().collect::<Vec<_>>()).collect();
    v.sort_unstable();
    v.dedup();
    v
}
