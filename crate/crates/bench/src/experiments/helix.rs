//! Straight rod loaded by a constant tip wrench into a two-coil helix. The exact solution
//! has constant strains and is representable by the element.

use std::f64::consts::PI;
use std::path::Path;

use nalgebra::{DVector, Matrix3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rodsim_core::assembly::{LoadSpec, RodModel};
use rodsim_core::liegroup::{LieConfig, Pose};
use rodsim_core::rodcore::{ConstitutiveLaw, CrossSectionInertia, Mesh, NodalCoords, StrainState};
use rodsim_core::solvers::{solve_static, static_residual, BoundaryCondition, StaticSettings};

use super::{check_config, interpolated_strain, last_node, straight_rod};
use crate::metrics::r3so3_baseline_strains;
use crate::error::BenchResult;
use crate::output::{Chart, Series, Table};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HelixConfig {
    pub coils: f64,
    pub radius: f64,
    pub height: f64,
    pub youngs_modulus: f64,
    pub shear_modulus: f64,
    pub n_el: usize,
    pub slenderness: Vec<f64>,
    pub tolerances: Vec<f64>,
    pub increments: Vec<usize>,
    pub max_iterations: usize,
    /// Bisections allowed for an increment whose Newton iteration fails.
    pub max_cutbacks: usize,
    /// Centerline samples written per slenderness.
    pub samples: usize,
}

impl Default for HelixConfig {
    fn default() -> Self {
        Self {
            coils: 2.0,
            radius: 10.0,
            height: 50.0,
            youngs_modulus: 1.0,
            shear_modulus: 0.5,
            n_el: 5,
            slenderness: vec![1e1, 1e2, 1e3, 1e4],
            tolerances: vec![1e-8, 1e-9, 1e-10, 1e-14],
            increments: vec![70, 100, 200, 500],
            max_iterations: 50,
            max_cutbacks: 6,
            samples: 201,
        }
    }
}

/// Closed form helix: centerline, Serret-Frenet frame and constant strains.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactHelix {
    pub radius: f64,
    /// Pitch parameter `h / (2 pi n R)`.
    pub c: f64,
    /// `d alpha / d xi = 2 pi n`.
    pub alpha_xi: f64,
    pub length: f64,
}

impl ExactHelix {
    pub fn new(coils: f64, radius: f64, height: f64) -> Self {
        let alpha_xi = 2.0 * PI * coils;
        let c = height / (radius * alpha_xi);
        Self { radius, c, alpha_xi, length: (1.0 + c * c).sqrt() * radius * alpha_xi }
    }

    pub fn centerline(&self, xi: f64) -> Vector3<f64> {
        let a = self.alpha_xi * xi;
        self.radius * Vector3::new(a.sin(), -a.cos(), self.c * a)
    }

    pub fn frame(&self, xi: f64) -> Matrix3<f64> {
        let a = self.alpha_xi * xi;
        let s = 1.0 / (1.0 + self.c * self.c).sqrt();
        let ex = Vector3::new(a.cos(), a.sin(), self.c) * s;
        let ey = Vector3::new(-a.sin(), a.cos(), 0.0);
        let ez = Vector3::new(-self.c * a.cos(), -self.c * a.sin(), 1.0) * s;
        Matrix3::from_columns(&[ex, ey, ez])
    }

    pub fn pose(&self, xi: f64) -> Pose<f64> {
        Pose::new(self.frame(xi), self.centerline(xi))
    }

    pub fn strains(&self) -> StrainState<f64> {
        let k = self.radius * self.alpha_xi * self.alpha_xi / (self.length * self.length);
        StrainState { gamma: Vector3::x(), kappa: Vector3::new(self.c, 0.0, 1.0) * k }
    }

    /// Body-frame tip moment `(kt c, 0, kb) R alpha_xi^2 / L^2` maintaining the helix.
    pub fn tip_moment(&self, law: &ConstitutiveLaw<f64>) -> Vector3<f64> {
        law.c_kappa * self.strains().kappa
    }

    /// Nodal coordinates of the exact solution on a uniform mesh.
    pub fn nodal_coordinates(&self, lie: &LieConfig<f64>, n_el: usize) -> BenchResult<DVector<f64>> {
        let mut q = DVector::zeros(6 * (n_el + 1));
        for i in 0..=n_el {
            NodalCoords::from_pose(lie, &self.pose(i as f64 / n_el as f64))?.write_global(&mut q, i);
        }
        Ok(q)
    }
}

#[derive(Clone, Debug)]
pub struct HelixRun {
    pub slenderness: f64,
    pub atol: f64,
    pub increments: usize,
    pub strains: Vec<StrainState<f64>>,
    /// `max |gamma - e_x|` over elements.
    pub gamma_error: f64,
    /// `max |kappa - kappa*| / |kappa*|` over elements.
    pub kappa_error: f64,
    pub tip_error: f64,
    /// Residual max-norm of the exact configuration under the final loads.
    pub exact_residual: f64,
    pub max_iterations: usize,
    pub centerline: Vec<(f64, Vector3<f64>)>,
}

#[derive(Clone, Debug)]
pub struct HelixReport {
    pub exact: ExactHelix,
    pub runs: Vec<HelixRun>,
    /// Quarter circle of the helix radius on one element: strains of the SE(3) interpolation
    /// next to those of the uncoupled R3 x SO(3) interpolation.
    pub baseline: Vec<BaselineSample>,
}

#[derive(Clone, Copy, Debug)]
pub struct BaselineSample {
    pub xi: f64,
    pub element: StrainState<f64>,
    pub baseline: StrainState<f64>,
}

/// Strains along a single element whose nodes lie on a quarter circle in the x-y plane.
pub fn quarter_circle_comparison(radius: f64, samples: usize) -> BenchResult<Vec<BaselineSample>> {
    let length = 0.5 * PI * radius;
    let law = ConstitutiveLaw::diagonal(1.0, 1.0, 1.0, 1.0);
    let model = RodModel::new(Mesh::uniform(1, length), law, CrossSectionInertia::centroidal(0.0, Matrix3::zeros()));
    let n0 = NodalCoords::new(Vector3::zeros(), Vector3::zeros());
    let n1 = NodalCoords::new(Vector3::new(radius, radius, 0.0), Vector3::new(0.0, 0.0, 0.5 * PI));
    let mut q = DVector::zeros(12);
    n0.write_global(&mut q, 0);
    n1.write_global(&mut q, 1);
    let kin = model.kinematics(&q, 0)?;
    let n = samples.max(3);
    (0..n)
        .map(|i| {
            // stay inside the element so the central difference does not cross its ends
            let xi = 1e-3 + (1.0 - 2e-3) * i as f64 / (n - 1) as f64;
            let baseline = r3so3_baseline_strains(&model.lie, [&n0, &n1], &kin.geom, xi)?;
            Ok(BaselineSample { xi, element: interpolated_strain(&model.lie, &kin, xi), baseline })
        })
        .collect()
}

pub fn circular_law(cfg: &HelixConfig, length: f64, slenderness: f64) -> ConstitutiveLaw<f64> {
    let r = 0.5 * length / slenderness;
    let a = PI * r * r;
    let i = 0.25 * PI * r.powi(4);
    let (e, g) = (cfg.youngs_modulus, cfg.shear_modulus);
    ConstitutiveLaw::diagonal(e * a, g * a, e * i, 2.0 * g * i)
}

fn run_one(cfg: &HelixConfig, exact: &ExactHelix, rho: f64, atol: f64, increments: usize) -> BenchResult<HelixRun> {
    let law = circular_law(cfg, exact.length, rho);
    let moment = exact.tip_moment(&law);
    let model = RodModel::new(Mesh::uniform(cfg.n_el, exact.length), law, CrossSectionInertia::centroidal(0.0, Matrix3::zeros()));
    let base = NodalCoords::from_pose(&model.lie, &exact.pose(0.0))?;
    let q0 = straight_rod(cfg.n_el + 1, exact.length, base.r, base.psi);
    let loads = LoadSpec::none().with_tip_moment(move |t, _| moment * t);
    let bcs = [BoundaryCondition::clamp(0)];
    let settings = StaticSettings { increments, atol, max_iterations: cfg.max_iterations, extrapolate: false, max_cutbacks: cfg.max_cutbacks };
    let (q, history) = solve_static(&model, &q0, &loads, &bcs, &settings, |_, _| {})?;
    let strains = model.element_strains(&q)?;
    let target = exact.strains();
    let gamma_error = strains.iter().map(|s| (s.gamma - target.gamma).amax()).fold(0.0, f64::max);
    let kappa_error = strains.iter().map(|s| (s.kappa - target.kappa).norm() / target.kappa.norm()).fold(0.0, f64::max);
    let tip_error = (last_node(&q).r - exact.centerline(1.0)).norm();
    let qe = exact.nodal_coordinates(&model.lie, cfg.n_el)?;
    let exact_residual = static_residual(&model, &qe, 1.0, &loads, &[0, 1, 2, 3, 4, 5])?.amax();
    let centerline = (0..cfg.samples.max(2))
        .map(|i| {
            let xi = i as f64 / (cfg.samples.max(2) - 1) as f64;
            model.pose_at(&q, xi).map(|p| (xi, p.translation))
        })
        .collect::<rodsim_core::Result<Vec<_>>>()?;
    Ok(HelixRun {
        slenderness: rho,
        atol,
        increments,
        strains,
        gamma_error,
        kappa_error,
        tip_error,
        exact_residual,
        max_iterations: history.iter().map(|r| r.iterations).max().unwrap_or(0),
        centerline,
    })
}

pub fn run(cfg: &HelixConfig) -> BenchResult<HelixReport> {
    check_config(
        cfg.slenderness.len() == cfg.tolerances.len() && cfg.slenderness.len() == cfg.increments.len(),
        || "helix: slenderness, tolerances and increments must have equal length".into(),
    )?;
    check_config(cfg.n_el > 0 && cfg.increments.iter().all(|&n| n > 0), || "helix: counts must be positive".into())?;
    check_config(cfg.coils > 0.0 && cfg.radius > 0.0 && cfg.height > 0.0, || "helix: geometry must be positive".into())?;
    let exact = ExactHelix::new(cfg.coils, cfg.radius, cfg.height);
    let runs = cfg
        .slenderness
        .par_iter()
        .zip(cfg.tolerances.par_iter())
        .zip(cfg.increments.par_iter())
        .map(|((&rho, &atol), &inc)| run_one(cfg, &exact, rho, atol, inc))
        .collect::<BenchResult<Vec<_>>>()?;
    let baseline = quarter_circle_comparison(cfg.radius, cfg.samples)?;
    Ok(HelixReport { exact, runs, baseline })
}

impl HelixReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&[
            "slenderness [-]",
            "atol [N]",
            "increments [-]",
            "gamma_error [-]",
            "kappa_rel_error [-]",
            "tip_error [m]",
            "exact_residual [N]",
            "max_newton_iterations [-]",
        ]);
        for r in &self.runs {
            t.push(vec![
                r.slenderness,
                r.atol,
                r.increments as f64,
                r.gamma_error,
                r.kappa_error,
                r.tip_error,
                r.exact_residual,
                r.max_iterations as f64,
            ]);
        }
        t
    }

    pub fn write(&self, dir: &Path) -> BenchResult<()> {
        self.table().write(&dir.join("helix_results.csv"))?;
        let mut chart = Chart::new("helix centerline, top view", "x [m]", "y [m]");
        for r in &self.runs {
            let mut t = Table::new(&["xi [-]", "x [m]", "y [m]", "z [m]", "x_exact [m]", "y_exact [m]", "z_exact [m]"]);
            for (xi, p) in &r.centerline {
                let e = self.exact.centerline(*xi);
                t.push(vec![*xi, p.x, p.y, p.z, e.x, e.y, e.z]);
            }
            t.write(&dir.join(format!("helix_centerline_rho{:e}.csv", r.slenderness)))?;
            chart = chart.with(Series::line(
                format!("rho={:e}", r.slenderness),
                r.centerline.iter().map(|(_, p)| (p.x, p.y)).collect(),
            ));
        }
        let exact: Vec<(f64, f64)> = (0..=400)
            .map(|i| self.exact.centerline(i as f64 / 400.0))
            .map(|p| (p.x, p.y))
            .collect();
        chart.with(Series::line("exact", exact)).write(&dir.join("helix_centerline.svg"))?;

        let mut t = Table::new(&[
            "xi [-]",
            "gamma1 [-]",
            "gamma2 [-]",
            "gamma3 [-]",
            "kappa1 [1/m]",
            "kappa2 [1/m]",
            "kappa3 [1/m]",
            "baseline_gamma1 [-]",
            "baseline_gamma2 [-]",
            "baseline_gamma3 [-]",
            "baseline_kappa1 [1/m]",
            "baseline_kappa2 [1/m]",
            "baseline_kappa3 [1/m]",
        ]);
        for b in &self.baseline {
            let mut row = vec![b.xi];
            row.extend(b.element.gamma.iter().chain(b.element.kappa.iter()));
            row.extend(b.baseline.gamma.iter().chain(b.baseline.kappa.iter()));
            t.push(row);
        }
        t.write(&dir.join("quarter_circle_strains.csv"))?;
        let pick = |f: fn(&BaselineSample) -> f64| self.baseline.iter().map(|b| (b.xi, f(b))).collect::<Vec<_>>();
        Chart::new("quarter circle element strains", "xi [-]", "strain [-]")
            .with(Series::line("gamma1 SE(3)", pick(|b| b.element.gamma.x)))
            .with(Series::line("gamma2 SE(3)", pick(|b| b.element.gamma.y)))
            .with(Series::line("gamma1 R3xSO(3)", pick(|b| b.baseline.gamma.x)))
            .with(Series::line("gamma2 R3xSO(3)", pick(|b| b.baseline.gamma.y)))
            .write(&dir.join("quarter_circle_strains.svg"))
    }

    /// Largest spread over `xi` of any strain component of the SE(3) element and of the baseline.
    pub fn baseline_spreads(&self) -> (f64, f64) {
        let spread = |f: &dyn Fn(&BaselineSample) -> StrainState<f64>| {
            let mut worst = 0.0f64;
            for c in 0..6 {
                let v = self.baseline.iter().map(|b| {
                    let s = f(b);
                    if c < 3 { s.gamma[c] } else { s.kappa[c - 3] }
                });
                let (lo, hi) = v.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
                worst = worst.max(hi - lo);
            }
            worst
        };
        (spread(&|b| b.element), spread(&|b| b.baseline))
    }

    pub fn summary(&self) -> Vec<String> {
        let mut out = vec![format!(
            "exact helix: length {:.6}, kappa = ({:.6e}, 0, {:.6e})",
            self.exact.length,
            self.exact.strains().kappa.x,
            self.exact.strains().kappa.z
        )];
        let (se3, r3) = self.baseline_spreads();
        out.push(format!("quarter circle element: strain spread over xi {se3:.2e} (SE(3)) vs {r3:.2e} (R3 x SO(3))"));
        for r in &self.runs {
            out.push(format!(
                "slenderness {:e}: gamma err {:.2e}, kappa rel err {:.2e}, tip err {:.2e}, exact residual {:.2e} (atol {:e}), newton max {}",
                r.slenderness, r.gamma_error, r.kappa_error, r.tip_error, r.exact_residual, r.atol, r.max_iterations
            ));
        }
        out
    }
}
