//! Dormand-Prince 5(4) with PI step size control.

use nalgebra::DVector;

use super::ode::{next_output, IntegrationStats, OdeSystem};
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RkSettings<T: Scalar> {
    pub atol: T,
    pub rtol: T,
    /// Initial step; estimated when `None`.
    pub h0: Option<T>,
    pub h_max: T,
    pub max_steps: usize,
}

impl<T: Scalar> Default for RkSettings<T> {
    fn default() -> Self {
        Self { atol: lit(1e-8), rtol: lit(1e-8), h0: None, h_max: lit(f64::INFINITY), max_steps: 10_000_000 }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Difference between the fifth and fourth order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn error_norm<T: Scalar>(err: &DVector<T>, y0: &DVector<T>, y1: &DVector<T>, s: &RkSettings<T>) -> T {
    let mut sum = T::zero();
    for i in 0..err.len() {
        let sc = s.atol + s.rtol * y0[i].abs().max(y1[i].abs());
        let e = err[i] / sc;
        sum += e * e;
    }
    (sum / crate::scalar::from_usize(err.len().max(1))).sqrt()
}

fn initial_step<T: Scalar>(
    sys: &impl OdeSystem<T>,
    t: T,
    y: &DVector<T>,
    f0: &DVector<T>,
    s: &RkSettings<T>,
    stats: &mut IntegrationStats,
) -> Result<T> {
    let scale = |v: &DVector<T>| {
        let mut sum = T::zero();
        for i in 0..v.len() {
            let e = v[i] / (s.atol + s.rtol * y[i].abs());
            sum += e * e;
        }
        (sum / crate::scalar::from_usize(v.len().max(1))).sqrt()
    };
    let (d0, d1) = (scale(y), scale(f0));
    let h0 = if d0 < lit(1e-5) || d1 < lit(1e-5) { lit(1e-6) } else { d0 / d1 * lit(0.01) };
    let y1 = y + f0 * h0;
    let f1 = sys.rhs(t + h0, &y1)?;
    stats.rhs_evaluations += 1;
    let d2 = scale(&(f1 - f0)) / h0;
    let m = d1.max(d2);
    let h1 = if m <= lit(1e-15) { (h0 * lit(1e-3)).max(lit(1e-6)) } else { (lit::<T>(0.01) / m).powf(lit(0.2)) };
    Ok((h0 * lit(100.0)).min(h1).min(s.h_max))
}

/// Integrates from `t0` to `t_end`. The observer sees `t0`, every entry of `outputs`
/// (steps are shortened to hit them) or, when `outputs` is empty, every accepted step.
pub fn integrate_rk45<T: Scalar>(
    sys: &impl OdeSystem<T>,
    t0: T,
    y0: &DVector<T>,
    t_end: T,
    settings: &RkSettings<T>,
    outputs: &[T],
    mut observer: impl FnMut(T, &DVector<T>),
) -> Result<(DVector<T>, IntegrationStats)> {
    let mut stats = IntegrationStats::default();
    let mut t = t0;
    let mut y = y0.clone();
    observer(t, &y);
    let mut f = sys.rhs(t, &y)?;
    stats.rhs_evaluations += 1;
    let mut h = match settings.h0 {
        Some(h) => h,
        None => initial_step(sys, t, &y, &f, settings, &mut stats)?,
    };
    let beta: T = lit(0.04);
    let expo: T = lit::<T>(0.2) - beta * lit(0.75);
    let mut err_old: T = lit(1e-4);
    let mut last_rejected = false;
    let eps_t = lit::<T>(1e-12) * (t_end - t0).abs().max(T::one());
    while t < t_end - eps_t {
        if stats.accepted + stats.rejected >= settings.max_steps {
            return Err(Error::StepFailure { t: to_f64(t), reason: "step limit reached".into() });
        }
        let target = next_output(outputs, t + eps_t).map_or(t_end, |s| s.min(t_end));
        let hit = h >= target - t;
        let hs = if hit { target - t } else { h };
        if hs <= T::default_epsilon() * t.abs().max(T::one()) * lit(10.0) {
            return Err(Error::StepFailure { t: to_f64(t), reason: "step size underflow".into() });
        }
        let mut k: Vec<DVector<T>> = Vec::with_capacity(7);
        k.push(f.clone());
        for s in 1..7 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate() {
                if A[s][j] != 0.0 {
                    ys.axpy(hs * lit(A[s][j]), kj, T::one());
                }
            }
            k.push(sys.rhs(t + hs * lit(C[s]), &ys)?);
            stats.rhs_evaluations += 1;
            if s == 6 {
                // stage 7 is evaluated at the new solution
                let y_new = ys;
                let mut err = DVector::zeros(y.len());
                for (j, kj) in k.iter().enumerate() {
                    err.axpy(hs * lit(E[j]), kj, T::one());
                }
                let en = error_norm(&err, &y, &y_new, settings);
                if !en.is_finite() {
                    return Err(Error::StepFailure { t: to_f64(t), reason: "non-finite error estimate".into() });
                }
                if en <= T::one() {
                    let fac = (en.max(lit(1e-10)).powf(expo) / err_old.powf(beta) / lit(0.9))
                        .max(lit(0.1))
                        .min(lit(5.0));
                    let mut h_new = hs / fac;
                    if last_rejected {
                        h_new = h_new.min(hs);
                    }
                    err_old = en.max(lit(1e-4));
                    t = if hit { target } else { t + hs };
                    y = y_new;
                    f = k.pop().expect("seven stages");
                    if sys.after_step(t, &mut y, None) {
                        f = sys.rhs(t, &y)?;
                        stats.rhs_evaluations += 1;
                    }
                    stats.accepted += 1;
                    last_rejected = false;
                    if outputs.is_empty() || hit {
                        observer(t, &y);
                    }
                    h = if hit { h } else { h_new }.min(settings.h_max);
                } else {
                    let fac = (en.powf(expo) / lit(0.9)).min(lit(5.0));
                    h = hs / fac;
                    stats.rejected += 1;
                    last_rejected = true;
                }
            }
        }
    }
    Ok((y, stats))
}
