use nalgebra::DVector;

use crate::error::Result;
use crate::scalar::Scalar;

/// First-order system `y' = f(t, y)`.
pub trait OdeSystem<T: Scalar>: Sync {
    fn dim(&self) -> usize;

    fn rhs(&self, t: T, y: &DVector<T>) -> Result<DVector<T>>;

    /// Hook after every accepted step. May change the coordinate representation of `y`;
    /// `ydot`, when given, must be mapped consistently. Returns whether `y` changed.
    fn after_step(&self, _t: T, _y: &mut DVector<T>, _ydot: Option<&mut DVector<T>>) -> bool {
        false
    }
}

/// Step bookkeeping common to the integrators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evaluations: usize,
    pub jacobian_evaluations: usize,
    pub newton_iterations: usize,
}

/// Next output time after `t`, if any.
pub(crate) fn next_output<T: Scalar>(outputs: &[T], t: T) -> Option<T> {
    outputs.iter().copied().find(|&s| s > t)
}
