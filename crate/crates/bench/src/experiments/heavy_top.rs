//! Spinning rod pinned at one end under gravity. A rigid top started with these initial
//! velocities performs steady precession in the horizontal plane.

use std::f64::consts::PI;
use std::path::Path;
use std::time::Instant;

use nalgebra::{DVector, Matrix3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rodsim_core::assembly::{GaussLegendre, LoadSpec, RodModel};
use rodsim_core::rodcore::{ConstitutiveLaw, CrossSectionInertia, Mesh, NodalCoords, NODE_DOFS};
use rodsim_core::solvers::{
    integrate_gen_alpha, integrate_rk45, BoundaryCondition, GenAlphaSettings, RkSettings, RodDynamics,
};

use super::{check_config, last_node, straight_rod};
use crate::error::BenchResult;
use crate::output::{Chart, Series, Table};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeavyTopConfig {
    pub radius: f64,
    pub length: f64,
    pub density: f64,
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub gravity: f64,
    /// Spin rate about the rod axis.
    pub spin: f64,
    /// Stiffness reduction of the soft rod.
    pub soft_factor: f64,
    pub n_el: usize,
    pub rk_tol: f64,
    /// Tolerance of the calibration run defining the stiff-rod deviation bound.
    pub calibration_tol: f64,
    /// Relative margin added to the calibrated deviation.
    pub calibration_margin: f64,
    pub gen_alpha_step: f64,
    pub rho_inf: f64,
    pub gen_alpha_soft: bool,
    /// Number of equally spaced output times, including both ends.
    pub outputs: usize,
    /// Final time; one precession period when absent.
    pub t_end: Option<f64>,
}

impl Default for HeavyTopConfig {
    fn default() -> Self {
        Self {
            radius: 0.1,
            length: 0.5,
            density: 8000.0,
            youngs_modulus: 210e6,
            poisson_ratio: 1.0 / 3.0,
            gravity: 9.81,
            spin: 50.0 * PI,
            soft_factor: 1e3,
            n_el: 1,
            rk_tol: 1e-8,
            calibration_tol: 1e-10,
            calibration_margin: 0.1,
            gen_alpha_step: 1e-5,
            rho_inf: 0.9,
            gen_alpha_soft: true,
            outputs: 1001,
            t_end: None,
        }
    }
}

impl HeavyTopConfig {
    /// Precession rate `g L / (r^2 Omega)` of the rigid top.
    pub fn precession_rate(&self) -> f64 {
        self.gravity * self.length / (self.radius * self.radius * self.spin)
    }

    pub fn final_time(&self) -> f64 {
        self.t_end.unwrap_or(2.0 * PI / self.precession_rate())
    }

    /// Tip of the rigid top at time `t`.
    pub fn rigid_tip(&self, t: f64) -> Vector3<f64> {
        let a = self.precession_rate() * t;
        self.length * Vector3::new(a.cos(), a.sin(), 0.0)
    }

    pub fn model(&self, soft: bool) -> RodModel<f64> {
        let area = PI * self.radius * self.radius;
        let second = 0.25 * PI * self.radius.powi(4);
        let e = self.youngs_modulus;
        let g = e / (2.0 * (1.0 + self.poisson_ratio));
        let s = if soft { 1.0 / self.soft_factor } else { 1.0 };
        let law = ConstitutiveLaw::diagonal(s * e * area, s * g * area, s * e * second, s * 2.0 * g * second);
        let inertia = CrossSectionInertia::centroidal(
            self.density * area,
            Matrix3::from_diagonal(&Vector3::new(2.0, 1.0, 1.0)) * (self.density * second),
        );
        RodModel::new(Mesh::uniform(self.n_el, self.length), law, inertia)
    }

    /// Distributed weight per unit length.
    pub fn weight(&self) -> f64 {
        self.density * PI * self.radius * self.radius * self.gravity
    }

    pub fn dynamics(&self, soft: bool) -> RodDynamics<f64> {
        let w = self.weight();
        let loads = LoadSpec::none().with_line_force(move |_, _| Vector3::new(0.0, 0.0, -w));
        RodDynamics::new(self.model(soft), loads, vec![BoundaryCondition::pin(0)])
    }

    /// Straight rod along the first axis, rotating rigidly with `(Omega, 0, Omega_pr)`.
    pub fn initial_state(&self, sys: &RodDynamics<f64>) -> DVector<f64> {
        let n = self.n_el + 1;
        let q0 = straight_rod(n, self.length, Vector3::zeros(), Vector3::zeros());
        let omega = Vector3::new(self.spin, 0.0, self.precession_rate());
        let mut u0 = DVector::zeros(NODE_DOFS * n);
        for i in 0..n {
            let v = omega.cross(&NodalCoords::from_global(&q0, i).r);
            NodalCoords::new(v, omega).write_global(&mut u0, i);
        }
        sys.initial_state(0.0, &q0, &u0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integrator {
    RungeKutta,
    GeneralizedAlpha,
}

/// One time integration with sampled tip positions and balance quantities.
#[derive(Clone, Debug)]
pub struct TopRun {
    pub label: String,
    pub soft: bool,
    pub integrator: Integrator,
    pub times: Vec<f64>,
    pub tips: Vec<Vector3<f64>>,
    /// Per output: kinetic, elastic, gravitational energy.
    pub energies: Vec<[f64; 3]>,
    pub linear_momentum: Vec<Vector3<f64>>,
    pub angular_momentum: Vec<Vector3<f64>>,
    pub steps: usize,
    pub seconds: f64,
}

impl TopRun {
    pub fn max_deviation(&self, cfg: &HeavyTopConfig) -> f64 {
        self.times.iter().zip(&self.tips).map(|(&t, p)| (p - cfg.rigid_tip(t)).norm()).fold(0.0, f64::max)
    }

    pub fn max_difference(&self, other: &TopRun) -> f64 {
        assert_eq!(self.times.len(), other.times.len());
        self.tips.iter().zip(&other.tips).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&[
            "t [s]",
            "tip_x [m]",
            "tip_y [m]",
            "tip_z [m]",
            "kinetic_T [J]",
            "elastic_U [J]",
            "gravity_V [J]",
            "total_E [J]",
            "L_x [kg m/s]",
            "L_y [kg m/s]",
            "L_z [kg m/s]",
            "J_x [kg m^2/s]",
            "J_y [kg m^2/s]",
            "J_z [kg m^2/s]",
        ]);
        for k in 0..self.times.len() {
            let (p, e, l, j) = (self.tips[k], self.energies[k], self.linear_momentum[k], self.angular_momentum[k]);
            t.push(vec![self.times[k], p.x, p.y, p.z, e[0], e[1], e[2], e[0] + e[1] + e[2], l.x, l.y, l.z, j.x, j.y, j.z]);
        }
        t
    }
}

/// Potential of a constant vertical line load `-w e_z`.
fn gravity_potential(model: &RodModel<f64>, q: &DVector<f64>, w: f64) -> rodsim_core::Result<f64> {
    let quad = GaussLegendre::<f64>::new(3);
    let mut v = 0.0;
    for e in 0..model.mesh.n_elements() {
        let kin = model.kinematics(q, e)?;
        for (xi, wt) in quad.on_interval(kin.geom.xi0, kin.geom.xi1) {
            v += w * kin.pose_at(&model.lie, xi).translation.z * wt * kin.geom.j;
        }
    }
    Ok(v)
}

pub fn simulate(cfg: &HeavyTopConfig, soft: bool, integrator: Integrator, tol: f64, label: &str) -> BenchResult<TopRun> {
    let sys = cfg.dynamics(soft);
    let y0 = cfg.initial_state(&sys);
    let t_end = cfg.final_time();
    let n_out = cfg.outputs.max(2);
    let outputs: Vec<f64> = (1..n_out).map(|k| t_end * k as f64 / (n_out - 1) as f64).collect();
    let mut samples: Vec<(f64, DVector<f64>)> = Vec::with_capacity(n_out);
    let start = Instant::now();
    let stats = match integrator {
        Integrator::RungeKutta => {
            let s = RkSettings { atol: tol, rtol: tol, ..RkSettings::default() };
            integrate_rk45(&sys, 0.0, &y0, t_end, &s, &outputs, |t, y| samples.push((t, y.clone())))?.1
        }
        Integrator::GeneralizedAlpha => {
            let s = GenAlphaSettings { h: cfg.gen_alpha_step, rho_inf: cfg.rho_inf, ..GenAlphaSettings::default() };
            integrate_gen_alpha(&sys, 0.0, &y0, t_end, &s, &outputs, |t, y| samples.push((t, y.clone())))?.1
        }
    };
    let seconds = start.elapsed().as_secs_f64();
    let w = cfg.weight();
    let mut run = TopRun {
        label: label.to_string(),
        soft,
        integrator,
        times: Vec::new(),
        tips: Vec::new(),
        energies: Vec::new(),
        linear_momentum: Vec::new(),
        angular_momentum: Vec::new(),
        steps: stats.accepted,
        seconds,
    };
    for (t, y) in samples {
        let (q, u) = sys.split(&y);
        let d = sys.model.diagnostics(&q, &u)?;
        run.times.push(t);
        run.tips.push(last_node(&q).r);
        run.energies.push([d.kinetic, d.potential, gravity_potential(&sys.model, &q, w)?]);
        run.linear_momentum.push(d.linear_momentum);
        run.angular_momentum.push(d.angular_momentum);
    }
    Ok(run)
}

#[derive(Clone, Debug)]
pub struct HeavyTopReport {
    pub config: HeavyTopConfig,
    pub stiff_rk: TopRun,
    pub stiff_calibration: TopRun,
    pub stiff_gen_alpha: TopRun,
    pub soft_rk: TopRun,
    pub soft_gen_alpha: Option<TopRun>,
}

pub fn run(cfg: &HeavyTopConfig) -> BenchResult<HeavyTopReport> {
    check_config(cfg.n_el > 0 && cfg.outputs >= 2, || "heavy_top: need n_el > 0 and outputs >= 2".into())?;
    check_config(
        [cfg.radius, cfg.length, cfg.density, cfg.youngs_modulus, cfg.spin, cfg.soft_factor, cfg.rk_tol, cfg.calibration_tol, cfg.gen_alpha_step]
            .iter()
            .all(|&v| v > 0.0),
        || "heavy_top: physical parameters, tolerances and step must be positive".into(),
    )?;
    check_config((0.0..=1.0).contains(&cfg.rho_inf), || "heavy_top: rho_inf must lie in [0, 1]".into())?;
    use Integrator::*;
    let mut jobs = vec![
        (false, RungeKutta, cfg.rk_tol, "stiff RK"),
        (false, RungeKutta, cfg.calibration_tol, "stiff RK calibration"),
        (false, GeneralizedAlpha, 0.0, "stiff gen-alpha"),
        (true, RungeKutta, cfg.rk_tol, "soft RK"),
    ];
    if cfg.gen_alpha_soft {
        jobs.push((true, GeneralizedAlpha, 0.0, "soft gen-alpha"));
    }
    let mut runs = jobs
        .par_iter()
        .map(|&(soft, integ, tol, label)| simulate(cfg, soft, integ, tol, label))
        .collect::<BenchResult<Vec<_>>>()?
        .into_iter();
    let mut next = || runs.next().expect("one run per job");
    Ok(HeavyTopReport {
        config: cfg.clone(),
        stiff_rk: next(),
        stiff_calibration: next(),
        stiff_gen_alpha: next(),
        soft_rk: next(),
        soft_gen_alpha: if cfg.gen_alpha_soft { Some(next()) } else { None },
    })
}

impl HeavyTopReport {
    pub fn runs(&self) -> Vec<&TopRun> {
        let mut v = vec![&self.stiff_rk, &self.stiff_calibration, &self.stiff_gen_alpha, &self.soft_rk];
        v.extend(self.soft_gen_alpha.as_ref());
        v
    }

    /// Stiff-rod deviation bound from the calibration run.
    pub fn deviation_bound(&self) -> f64 {
        self.stiff_calibration.max_deviation(&self.config) * (1.0 + self.config.calibration_margin)
    }

    pub fn write(&self, dir: &Path) -> BenchResult<()> {
        let cfg = &self.config;
        let mut top = Chart::new("tip trajectory, top view", "x [m]", "y [m]");
        let mut side = Chart::new("tip height", "t [s]", "z [m]");
        for r in self.runs() {
            let name = r.label.replace(' ', "_").replace('-', "_");
            r.table().write(&dir.join(format!("heavy_top_{name}.csv")))?;
            top = top.with(Series::line(r.label.clone(), r.tips.iter().map(|p| (p.x, p.y)).collect()));
            side = side.with(Series::line(r.label.clone(), r.times.iter().zip(&r.tips).map(|(t, p)| (*t, p.z)).collect()));
        }
        let rigid: Vec<Vector3<f64>> = self.stiff_rk.times.iter().map(|&t| cfg.rigid_tip(t)).collect();
        top.with(Series::line("rigid", rigid.iter().map(|p| (p.x, p.y)).collect()))
            .write(&dir.join("heavy_top_trajectory.svg"))?;
        side.with(Series::line("rigid", self.stiff_rk.times.iter().map(|&t| (t, 0.0)).collect()))
            .write(&dir.join("heavy_top_height.svg"))?;
        let mut t = Table::labeled("run", &["max_deviation_from_rigid [m]", "steps [-]", "wall_time [s]"]);
        for r in self.runs() {
            t.push_labeled(&r.label, vec![r.max_deviation(cfg), r.steps as f64, r.seconds]);
        }
        t.write(&dir.join("heavy_top_summary.csv"))
    }

    pub fn summary(&self) -> Vec<String> {
        let cfg = &self.config;
        let mut out = vec![format!(
            "precession rate {:.6} rad/s, final time {:.6} s",
            cfg.precession_rate(),
            cfg.final_time()
        )];
        for r in self.runs() {
            out.push(format!(
                "{}: max deviation from rigid precession {:.3e} m, {} steps, {:.1} s",
                r.label,
                r.max_deviation(cfg),
                r.steps,
                r.seconds
            ));
        }
        out.push(format!("stiff deviation bound from calibration: {:.3e} m", self.deviation_bound()));
        out.push(format!("stiff RK vs gen-alpha max tip difference: {:.3e} m", self.stiff_rk.max_difference(&self.stiff_gen_alpha)));
        if let Some(s) = &self.soft_gen_alpha {
            out.push(format!("soft RK vs gen-alpha max tip difference: {:.3e} m", self.soft_rk.max_difference(s)));
        }
        out
    }
}
