//! Newton statics and time integration of the semi-discrete rod equations.

mod bc;
mod dynamics;
mod gen_alpha;
mod ode;
mod rk;
mod statics;

pub use bc::{BcKind, BoundaryCondition, MotionFn, PrescribedMotion};
pub use dynamics::RodDynamics;
pub use gen_alpha::{gen_alpha_parameters, integrate_gen_alpha, GenAlphaSettings};
pub use ode::{IntegrationStats, OdeSystem};
pub use rk::{integrate_rk45, RkSettings};
pub use statics::{newton, solve_static, static_residual, IncrementRecord, StaticSettings};
