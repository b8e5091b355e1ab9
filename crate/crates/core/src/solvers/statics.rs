use nalgebra::DVector;

use super::bc::{constrained_indices, BoundaryCondition};
use crate::assembly::{LoadSpec, RodModel};
use crate::error::{Error, Result};
use crate::rodcore::complement_update_all;
use crate::scalar::{from_usize, lit, to_f64, Scalar};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StaticSettings<T: Scalar> {
    pub increments: usize,
    /// Absolute tolerance on the max-norm of the free residual.
    pub atol: T,
    pub max_iterations: usize,
    /// Start each increment from a linear extrapolation of the previous two solutions.
    pub extrapolate: bool,
    /// Times a failed increment may be bisected, restarting from the last converged state.
    pub max_cutbacks: usize,
}

impl<T: Scalar> Default for StaticSettings<T> {
    fn default() -> Self {
        Self { increments: 20, atol: lit(1e-10), max_iterations: 50, extrapolate: true, max_cutbacks: 6 }
    }
}

/// Convergence record of one load increment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IncrementRecord<T: Scalar> {
    pub increment: usize,
    pub load_factor: T,
    /// Newton iterations summed over all sub-steps.
    pub iterations: usize,
    pub residual: T,
    /// 1 unless the increment had to be bisected.
    pub substeps: usize,
}

/// `f_int(q) + f_ext(q, t)` with constrained rows removed.
pub fn static_residual<T: Scalar>(
    model: &RodModel<T>,
    q: &DVector<T>,
    t: T,
    loads: &LoadSpec<T>,
    constrained: &[usize],
) -> Result<DVector<T>> {
    let mut r = model.internal_force(q)? + model.external_force(q, t, loads)?;
    for &i in constrained {
        r[i] = T::zero();
    }
    Ok(r)
}

/// Newton iteration for `f_int + f_ext = 0` at load factor `t`, starting from `q`.
pub fn newton<T: Scalar>(
    model: &RodModel<T>,
    q: &mut DVector<T>,
    t: T,
    loads: &LoadSpec<T>,
    bcs: &[BoundaryCondition<T>],
    settings: &StaticSettings<T>,
) -> Result<(usize, T)> {
    let constrained = constrained_indices(bcs);
    for b in bcs {
        b.apply_coords(t, q);
    }
    let mut iterations = 0;
    loop {
        let (fi, mut k) = model.internal_force_and_jacobian(q)?;
        let mut r = fi + model.external_force(q, t, loads)?;
        for &i in &constrained {
            r[i] = T::zero();
        }
        let res = r.amax();
        if !res.is_finite() {
            return Err(Error::NewtonDiverged { iterations, residual: f64::INFINITY });
        }
        if res <= settings.atol {
            return Ok((iterations, res));
        }
        if iterations >= settings.max_iterations {
            return Err(Error::NewtonDiverged { iterations, residual: to_f64(res) });
        }
        model.add_external_jacobian(q, t, loads, &mut k);
        for &i in &constrained {
            k.constrain(i);
        }
        let dq = k.solve(&r)?;
        *q -= dq;
        complement_update_all(q);
        iterations += 1;
    }
}

/// Moves `q` from the equilibrium at `t0` to `t1`, bisecting on failure.
fn advance<T: Scalar>(
    model: &RodModel<T>,
    q: &mut DVector<T>,
    (t0, t1): (T, T),
    loads: &LoadSpec<T>,
    bcs: &[BoundaryCondition<T>],
    settings: &StaticSettings<T>,
    depth: usize,
) -> Result<(usize, T, usize)> {
    let start = q.clone();
    match newton(model, q, t1, loads, bcs, settings) {
        Ok((iterations, residual)) => Ok((iterations, residual, 1)),
        Err(_) if depth < settings.max_cutbacks => {
            *q = start;
            let tm = (t0 + t1) * lit(0.5);
            let (i0, _, s0) = advance(model, q, (t0, tm), loads, bcs, settings, depth + 1)?;
            let (i1, residual, s1) = advance(model, q, (tm, t1), loads, bcs, settings, depth + 1)?;
            Ok((i0 + i1, residual, s0 + s1))
        }
        Err(e) => Err(e),
    }
}

/// Load-controlled static analysis; the load factor runs linearly from `1/n` to `1`.
///
/// `observer` receives every converged increment together with its coordinates.
pub fn solve_static<T: Scalar>(
    model: &RodModel<T>,
    q0: &DVector<T>,
    loads: &LoadSpec<T>,
    bcs: &[BoundaryCondition<T>],
    settings: &StaticSettings<T>,
    mut observer: impl FnMut(&IncrementRecord<T>, &DVector<T>),
) -> Result<(DVector<T>, Vec<IncrementRecord<T>>)> {
    let mut q = q0.clone();
    let mut previous: Option<DVector<T>> = None;
    let mut history = Vec::with_capacity(settings.increments);
    for k in 1..=settings.increments {
        let t0 = from_usize::<T>(k - 1) / from_usize::<T>(settings.increments);
        let t = from_usize::<T>(k) / from_usize::<T>(settings.increments);
        let converged = q.clone();
        let predicted = match (settings.extrapolate, &previous) {
            (true, Some(p)) => {
                q = &q * lit::<T>(2.0) - p;
                newton(model, &mut q, t, loads, bcs, settings).ok().map(|(i, r)| (i, r, 1))
            }
            _ => None,
        };
        let (iterations, residual, substeps) = match predicted {
            Some(r) => r,
            None => {
                q = converged.clone();
                advance(model, &mut q, (t0, t), loads, bcs, settings, 0)?
            }
        };
        let mut wrapped = q.clone();
        previous = if complement_update_all(&mut wrapped) { None } else { Some(converged) };
        q = wrapped;
        let rec = IncrementRecord { increment: k, load_factor: t, iterations, residual, substeps };
        observer(&rec, &q);
        history.push(rec);
    }
    Ok((q, history))
}
