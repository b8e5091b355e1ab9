//! Generalized-alpha method for first-order systems with spectral radius `rho_inf`.

use nalgebra::{DMatrix, DVector};

use super::ode::{next_output, IntegrationStats, OdeSystem};
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenAlphaSettings<T: Scalar> {
    pub h: T,
    pub rho_inf: T,
    /// Componentwise tolerance on Newton updates of `y`, relative to `1 + |y_i|`.
    pub newton_tol: T,
    pub max_newton: usize,
}

impl<T: Scalar> Default for GenAlphaSettings<T> {
    fn default() -> Self {
        Self { h: lit(1e-3), rho_inf: lit(0.9), newton_tol: lit(1e-12), max_newton: 25 }
    }
}

/// `(alpha_m, alpha_f, gamma)` for a given high-frequency spectral radius.
pub fn gen_alpha_parameters<T: Scalar>(rho_inf: T) -> (T, T, T) {
    let one = T::one();
    let am = (lit::<T>(3.0) - rho_inf) / (one + rho_inf) * lit(0.5);
    let af = one / (one + rho_inf);
    (am, af, lit::<T>(0.5) + am - af)
}

/// Central difference Jacobian of the right-hand side.
fn jacobian<T: Scalar>(sys: &impl OdeSystem<T>, t: T, y: &DVector<T>) -> Result<DMatrix<T>> {
    let n = y.len();
    let mut j = DMatrix::zeros(n, n);
    for c in 0..n {
        let h = lit::<T>(1e-7) * y[c].abs().max(T::one());
        let mut p = y.clone();
        let mut m = y.clone();
        p[c] += h;
        m[c] -= h;
        let d = (sys.rhs(t, &p)? - sys.rhs(t, &m)?) / (h + h);
        j.set_column(c, &d);
    }
    Ok(j)
}

/// Fixed step integration from `t0` to `t_end` (the last step and steps crossing an
/// output time are shortened). Observer semantics as in the Runge-Kutta driver.
pub fn integrate_gen_alpha<T: Scalar>(
    sys: &impl OdeSystem<T>,
    t0: T,
    y0: &DVector<T>,
    t_end: T,
    settings: &GenAlphaSettings<T>,
    outputs: &[T],
    mut observer: impl FnMut(T, &DVector<T>),
) -> Result<(DVector<T>, IntegrationStats)> {
    let (am, af, gamma) = gen_alpha_parameters(settings.rho_inf);
    let mut stats = IntegrationStats::default();
    let mut t = t0;
    let mut y = y0.clone();
    observer(t, &y);
    let mut yd = sys.rhs(t, &y)?;
    stats.rhs_evaluations += 1;
    let n = y.len();
    let mut lu: Option<(T, nalgebra::LU<T, nalgebra::Dyn, nalgebra::Dyn>)> = None;
    let eps_t = lit::<T>(1e-12) * (t_end - t0).abs().max(T::one());
    while t < t_end - eps_t {
        let target = next_output(outputs, t + eps_t).map_or(t_end, |s| s.min(t_end));
        let hit = settings.h >= target - t - eps_t;
        let h = if hit { target - t } else { settings.h };
        let tf = t + af * h;
        // predictor: constant derivative
        let mut a = yd.clone();
        let mut converged = false;
        let mut fresh = false;
        for attempt in 0..2 {
            if lu.as_ref().is_none_or(|(hl, _)| *hl != h) || attempt == 1 {
                let yf = &y + (&yd * (h * (T::one() - gamma)) + &a * (h * gamma)) * af;
                let jf = jacobian(sys, tf, &yf)?;
                stats.jacobian_evaluations += 1;
                stats.rhs_evaluations += 2 * n;
                let m = DMatrix::identity(n, n) * am - jf * (af * h * gamma);
                lu = Some((h, m.lu()));
                fresh = true;
            }
            let (_, fac) = lu.as_ref().expect("factorised");
            let mut prev = T::zero();
            for it in 0..settings.max_newton {
                let yn1 = &y + (&yd * (T::one() - gamma) + &a * gamma) * h;
                let yf = &y + (&yn1 - &y) * af;
                let r = &yd + (&a - &yd) * am - sys.rhs(tf, &yf)?;
                stats.rhs_evaluations += 1;
                stats.newton_iterations += 1;
                let da = fac.solve(&r).ok_or(Error::SingularSystem)?;
                a -= &da;
                let mut size = T::zero();
                for i in 0..n {
                    size = size.max((da[i] * h * gamma).abs() / (T::one() + y[i].abs()));
                }
                if !size.is_finite() {
                    break;
                }
                if size <= settings.newton_tol {
                    converged = true;
                    break;
                }
                // slow contraction: refresh the iteration matrix
                if it >= 2 && size > prev * lit(0.5) && !fresh {
                    break;
                }
                prev = size;
            }
            if converged || fresh {
                break;
            }
            a = yd.clone();
        }
        if !converged {
            return Err(Error::StepFailure { t: to_f64(t), reason: "newton iteration did not converge".into() });
        }
        y += (&yd * (T::one() - gamma) + &a * gamma) * h;
        yd = a;
        t = if hit { target } else { t + h };
        sys.after_step(t, &mut y, Some(&mut yd));
        stats.accepted += 1;
        if outputs.is_empty() || hit {
            observer(t, &y);
        }
    }
    Ok((y, stats))
}
