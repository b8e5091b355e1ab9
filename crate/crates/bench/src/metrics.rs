//! Error measures against reference solutions and the uncoupled R3 x SO(3) element.

use nalgebra::{DVector, Vector3};
use rodsim_core::assembly::RodModel;
use rodsim_core::liegroup::{LieConfig, Pose};
use rodsim_core::rodcore::{ElementGeometry, NodalCoords, StrainState};
use rodsim_core::Result;

/// Discrete L2-type errors of centerline and orientation over `k` equidistant samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorReport {
    /// Centerline error, in length units.
    pub e_r: f64,
    /// Orientation error, in radians.
    pub e_psi: f64,
    pub k: usize,
}

/// Sample abscissae `xi_i = i / (k - 1)`.
pub fn sample_points(k: usize) -> Vec<f64> {
    assert!(k >= 2, "at least two samples required");
    (0..k).map(|i| i as f64 / (k - 1) as f64).collect()
}

/// `e_r = sqrt(sum |dr|^2) / k` and `e_psi = sqrt(sum |Log(A^T A*)|^2) / k`.
pub fn error_metrics(
    trial: impl Fn(f64) -> Result<Pose<f64>>,
    reference: impl Fn(f64) -> Result<Pose<f64>>,
    k: usize,
) -> Result<ErrorReport> {
    let lie = LieConfig::<f64>::default();
    let mut sr = 0.0;
    let mut sp = 0.0;
    for xi in sample_points(k) {
        let a = trial(xi)?;
        let b = reference(xi)?;
        sr += (a.translation - b.translation).norm_squared();
        sp += lie.log_so3(&(a.rotation.transpose() * b.rotation))?.norm_squared();
    }
    let kf = k as f64;
    Ok(ErrorReport { e_r: sr.sqrt() / kf, e_psi: sp.sqrt() / kf, k })
}

/// [`error_metrics`] between two discretisations of the same rod.
pub fn model_error(
    trial: (&RodModel<f64>, &DVector<f64>),
    reference: (&RodModel<f64>, &DVector<f64>),
    k: usize,
) -> Result<ErrorReport> {
    error_metrics(|xi| trial.0.pose_at(trial.1, xi), |xi| reference.0.pose_at(reference.1, xi), k)
}

/// Least squares slope of `log y` over `log x`; the sign is flipped so that decaying
/// errors give a positive rate.
pub fn convergence_rate(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    -sxy / sxx
}

/// Strains at `xi` of a two-node element that interpolates the centerline linearly and the
/// orientation geodesically, `A(xi) = A0 Exp(s psi01)`, independently of each other.
pub fn r3so3_baseline_strains(
    lie: &LieConfig<f64>,
    nodes: [&NodalCoords<f64>; 2],
    geom: &ElementGeometry<f64>,
    xi: f64,
) -> Result<StrainState<f64>> {
    let a0 = lie.exp_so3(&nodes[0].psi);
    let a1 = lie.exp_so3(&nodes[1].psi);
    let psi01 = lie.log_so3(&(a0.transpose() * a1))?;
    let (_, s) = geom.shape(xi);
    let a = a0 * lie.exp_so3(&(psi01 * s));
    let scale = 1.0 / geom.length();
    let dr: Vector3<f64> = nodes[1].r - nodes[0].r;
    Ok(StrainState { gamma: a.transpose() * dr * scale, kappa: psi01 * scale })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn straight(xi: f64) -> Result<Pose<f64>> {
        Ok(Pose::new(nalgebra::Matrix3::identity(), Vector3::new(xi, 0.0, 0.0)))
    }

    #[test]
    fn identical_solutions_have_zero_error() {
        let r = error_metrics(straight, straight, 100).unwrap();
        assert_eq!((r.e_r, r.e_psi), (0.0, 0.0));
    }

    #[test]
    fn constant_offset_gives_norm_over_sqrt_k() {
        let d = Vector3::new(0.3, -0.4, 1.2);
        for k in [2, 7, 100] {
            let r = error_metrics(
                |xi| straight(xi).map(|p| Pose::new(p.rotation, p.translation + d)),
                straight,
                k,
            )
            .unwrap();
            assert!((r.e_r - d.norm() / (k as f64).sqrt()).abs() < 1e-15);
            assert_eq!(r.e_psi, 0.0);
        }
    }

    #[test]
    fn constant_rotation_offset() {
        let lie = LieConfig::default();
        let w = Vector3::new(0.1, 0.2, -0.05);
        let rot = lie.exp_so3(&w);
        let r = error_metrics(|xi| straight(xi).map(|p| Pose::new(rot, p.translation)), straight, 50).unwrap();
        assert!((r.e_psi - w.norm() / 50f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rate_of_power_law() {
        let x = [4.0, 8.0, 16.0, 32.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-2.0)).collect();
        assert!((convergence_rate(&x, &y) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn baseline_on_straight_element_is_unstrained() {
        let lie = LieConfig::default();
        let geom = ElementGeometry { xi0: 0.0, xi1: 1.0, j: 2.0 };
        let n0 = NodalCoords::new(Vector3::zeros(), Vector3::zeros());
        let n1 = NodalCoords::new(Vector3::new(2.0, 0.0, 0.0), Vector3::zeros());
        for xi in [0.0, 0.3, 1.0] {
            let s = r3so3_baseline_strains(&lie, [&n0, &n1], &geom, xi).unwrap();
            assert!((s.gamma - Vector3::x()).amax() < 1e-15);
            assert!(s.kappa.amax() < 1e-15);
        }
    }

    #[test]
    fn baseline_on_quarter_circle_has_parasitic_shear() {
        let lie = LieConfig::default();
        let radius = 3.0;
        let length = 0.5 * std::f64::consts::PI * radius;
        let geom = ElementGeometry { xi0: 0.0, xi1: 1.0, j: length };
        let n0 = NodalCoords::new(Vector3::zeros(), Vector3::zeros());
        let n1 = NodalCoords::new(Vector3::new(radius, radius, 0.0), Vector3::new(0.0, 0.0, 0.5 * std::f64::consts::PI));
        let at = |xi| r3so3_baseline_strains(&lie, [&n0, &n1], &geom, xi).unwrap();
        let (a, m, b) = (at(0.0), at(0.5), at(1.0));
        // chord over arc length, rotated into the interpolated frame
        let ratio = 2.0 * std::f64::consts::SQRT_2 / std::f64::consts::PI;
        assert!((m.gamma - Vector3::new(ratio, 0.0, 0.0)).amax() < 1e-14);
        let c = 2.0 / std::f64::consts::PI;
        assert!((a.gamma - Vector3::new(c, c, 0.0)).amax() < 1e-14);
        assert!((b.gamma - Vector3::new(c, -c, 0.0)).amax() < 1e-14);
        for s in [a, m, b] {
            assert!((s.kappa - Vector3::new(0.0, 0.0, 1.0 / radius)).amax() < 1e-14);
        }
    }
}
