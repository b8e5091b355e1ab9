use std::sync::Arc;

use nalgebra::Vector3;

use crate::liegroup::Pose;
use crate::scalar::Scalar;

/// Point load at a rod end as a function of time (or load factor) and the current end pose.
pub type PointLoad<T> = Arc<dyn Fn(T, &Pose<T>) -> Vector3<T> + Send + Sync>;

/// Distributed load as a function of `(xi, t)`.
pub type LineLoad<T> = Arc<dyn Fn(T, T) -> Vector3<T> + Send + Sync>;

/// External loading. Forces `b` are inertial-frame vectors; moments `c` are body-frame vectors.
#[derive(Clone)]
pub struct LoadSpec<T: Scalar> {
    pub b: Option<LineLoad<T>>,
    pub c: Option<LineLoad<T>>,
    pub b0: Option<PointLoad<T>>,
    pub c0: Option<PointLoad<T>>,
    pub b1: Option<PointLoad<T>>,
    pub c1: Option<PointLoad<T>>,
}

impl<T: Scalar> Default for LoadSpec<T> {
    fn default() -> Self {
        Self { b: None, c: None, b0: None, c0: None, b1: None, c1: None }
    }
}

impl<T: Scalar> LoadSpec<T> {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn with_line_force(mut self, f: impl Fn(T, T) -> Vector3<T> + Send + Sync + 'static) -> Self {
        self.b = Some(Arc::new(f));
        self
    }

    pub fn with_line_moment(mut self, f: impl Fn(T, T) -> Vector3<T> + Send + Sync + 'static) -> Self {
        self.c = Some(Arc::new(f));
        self
    }

    pub fn with_tip_force(mut self, f: impl Fn(T, &Pose<T>) -> Vector3<T> + Send + Sync + 'static) -> Self {
        self.b1 = Some(Arc::new(f));
        self
    }

    pub fn with_tip_moment(mut self, f: impl Fn(T, &Pose<T>) -> Vector3<T> + Send + Sync + 'static) -> Self {
        self.c1 = Some(Arc::new(f));
        self
    }

    pub fn with_base_force(mut self, f: impl Fn(T, &Pose<T>) -> Vector3<T> + Send + Sync + 'static) -> Self {
        self.b0 = Some(Arc::new(f));
        self
    }

    pub fn with_base_moment(mut self, f: impl Fn(T, &Pose<T>) -> Vector3<T> + Send + Sync + 'static) -> Self {
        self.c0 = Some(Arc::new(f));
        self
    }
}
