//! Unconstrained, unloaded rod set into rotation and bending vibration. Energy and
//! momenta are recorded for both frame variants of the angular velocities.

use std::f64::consts::PI;
use std::path::Path;

use nalgebra::{DVector, Matrix3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rodsim_core::assembly::{FrameVariant, LoadSpec, RodModel};
use rodsim_core::rodcore::{ConstitutiveLaw, CrossSectionInertia, Mesh, NodalCoords, NODE_DOFS};
use rodsim_core::solvers::{integrate_rk45, RkSettings, RodDynamics};

use super::{check_config, straight_rod};
use crate::error::BenchResult;
use crate::output::{Chart, Series, Table};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConservationConfig {
    pub length: f64,
    pub n_el: usize,
    pub axial_stiffness: f64,
    pub shear_stiffness: f64,
    pub bending_stiffness: f64,
    pub torsional_stiffness: f64,
    /// Mass per unit length.
    pub line_density: f64,
    /// Polar rotary inertia per unit length; the two bending inertias are half of it.
    pub polar_inertia: f64,
    /// Initial rigid angular velocity.
    pub angular_velocity: [f64; 3],
    /// Amplitude of the initial transverse velocity `v sin(pi xi)` in the third direction.
    pub bending_velocity: f64,
    pub t_end: f64,
    pub tol: f64,
    pub outputs: usize,
    /// Quadrature orders for the virtual work consistency study.
    pub quadrature_orders: Vec<usize>,
}

impl Default for ConservationConfig {
    fn default() -> Self {
        Self {
            length: 1.0,
            n_el: 8,
            axial_stiffness: 1e4,
            shear_stiffness: 1e4,
            bending_stiffness: 10.0,
            torsional_stiffness: 10.0,
            line_density: 1.0,
            polar_inertia: 2e-4,
            angular_velocity: [2.0, 0.0, 3.0],
            bending_velocity: 1.0,
            t_end: 1.0,
            tol: 1e-10,
            outputs: 201,
            quadrature_orders: vec![2, 3, 4, 5, 6, 7, 8],
        }
    }
}

impl ConservationConfig {
    pub fn model(&self, variant: FrameVariant) -> RodModel<f64> {
        let law = ConstitutiveLaw::diagonal(
            self.axial_stiffness,
            self.shear_stiffness,
            self.bending_stiffness,
            self.torsional_stiffness,
        );
        let j = self.polar_inertia;
        let inertia = CrossSectionInertia::centroidal(self.line_density, Matrix3::from_diagonal(&Vector3::new(j, 0.5 * j, 0.5 * j)));
        RodModel::new(Mesh::uniform(self.n_el, self.length), law, inertia).with_variant(variant)
    }

    pub fn initial(&self) -> (DVector<f64>, DVector<f64>) {
        let n = self.n_el + 1;
        let q0 = straight_rod(n, self.length, Vector3::zeros(), Vector3::zeros());
        let w = Vector3::from(self.angular_velocity);
        let centre = Vector3::new(0.5 * self.length, 0.0, 0.0);
        let mut u0 = DVector::zeros(NODE_DOFS * n);
        for i in 0..n {
            let r = NodalCoords::from_global(&q0, i).r;
            let bend = self.bending_velocity * (PI * i as f64 / self.n_el as f64).sin();
            // at t = 0 every nodal frame is the identity, so body and inertial components agree
            let v = w.cross(&(r - centre)) + Vector3::new(0.0, 0.0, bend);
            NodalCoords::new(v, w).write_global(&mut u0, i);
        }
        (q0, u0)
    }
}

#[derive(Clone, Debug)]
pub struct VariantRun {
    pub variant: FrameVariant,
    pub times: Vec<f64>,
    pub energy: Vec<(f64, f64)>,
    pub linear_momentum: Vec<Vector3<f64>>,
    pub angular_momentum: Vec<Vector3<f64>>,
    pub final_state: (DVector<f64>, DVector<f64>),
    pub steps: usize,
}

fn max_rel<T>(v: &[T], f: impl Fn(&T, &T) -> f64, norm: f64) -> f64 {
    v.iter().map(|x| f(x, &v[0]) / norm).fold(0.0, f64::max)
}

impl VariantRun {
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.energy[0].0 + self.energy[0].1;
        max_rel(&self.energy, |a, b| ((a.0 + a.1) - (b.0 + b.1)).abs(), e0)
    }

    pub fn linear_momentum_drift(&self) -> f64 {
        max_rel(&self.linear_momentum, |a, b| (a - b).norm(), self.linear_momentum[0].norm())
    }

    pub fn angular_momentum_drift(&self) -> f64 {
        max_rel(&self.angular_momentum, |a, b| (a - b).norm(), self.angular_momentum[0].norm())
    }

    /// Largest elastic energy relative to the total energy, a measure of deformation.
    pub fn max_elastic_fraction(&self) -> f64 {
        self.energy.iter().map(|(t, u)| u / (t + u)).fold(0.0, f64::max)
    }
}

/// Relative mismatch `|u . f_int + dU/dt| / |dU/dt|` for a state and quadrature order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerResidual {
    pub order: usize,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct ConservationReport {
    pub config: ConservationConfig,
    pub body: VariantRun,
    pub inertial: VariantRun,
    pub power_residuals: Vec<PowerResidual>,
}

fn simulate(cfg: &ConservationConfig, variant: FrameVariant) -> BenchResult<VariantRun> {
    let sys = RodDynamics::new(cfg.model(variant), LoadSpec::none(), Vec::new());
    let (q0, u0) = cfg.initial();
    let y0 = sys.initial_state(0.0, &q0, &u0);
    let n_out = cfg.outputs.max(2);
    let outputs: Vec<f64> = (1..n_out).map(|k| cfg.t_end * k as f64 / (n_out - 1) as f64).collect();
    let settings = RkSettings { atol: cfg.tol, rtol: cfg.tol, ..RkSettings::default() };
    let mut samples = Vec::with_capacity(n_out);
    let (y, stats) = integrate_rk45(&sys, 0.0, &y0, cfg.t_end, &settings, &outputs, |t, y| samples.push((t, y.clone())))?;
    let mut run = VariantRun {
        variant,
        times: Vec::new(),
        energy: Vec::new(),
        linear_momentum: Vec::new(),
        angular_momentum: Vec::new(),
        final_state: sys.split(&y),
        steps: stats.accepted,
    };
    for (t, y) in samples {
        let (q, u) = sys.split(&y);
        let d = sys.model.diagnostics(&q, &u)?;
        run.times.push(t);
        run.energy.push((d.kinetic, d.potential));
        run.linear_momentum.push(d.linear_momentum);
        run.angular_momentum.push(d.angular_momentum);
    }
    Ok(run)
}

/// Power balance of the internal forces against the rate of the strain energy along the
/// motion through `(q, u)`, for several quadrature orders.
pub fn power_residuals(
    cfg: &ConservationConfig,
    variant: FrameVariant,
    q: &DVector<f64>,
    u: &DVector<f64>,
) -> BenchResult<Vec<PowerResidual>> {
    let base = cfg.model(variant);
    let qd = base.coordinate_rates(q, u)?;
    let h = 1e-6 / qd.amax().max(1.0);
    cfg.quadrature_orders
        .iter()
        .map(|&order| {
            let m = cfg.model(variant).with_quadrature(order);
            let du = (m.potential_energy(&(q + &qd * h))? - m.potential_energy(&(q - &qd * h))?) / (2.0 * h);
            let p = u.dot(&m.internal_force(q)?);
            Ok(PowerResidual { order, residual: (p + du).abs() / du.abs() })
        })
        .collect()
}

pub fn run(cfg: &ConservationConfig) -> BenchResult<ConservationReport> {
    check_config(cfg.n_el > 0 && cfg.t_end > 0.0 && cfg.tol > 0.0 && cfg.outputs >= 2, || {
        "conservation: need n_el > 0, t_end > 0, tol > 0 and outputs >= 2".into()
    })?;
    check_config(cfg.quadrature_orders.iter().all(|&o| o >= 1), || "conservation: quadrature orders must be >= 1".into())?;
    let mut runs = [FrameVariant::Body, FrameVariant::Inertial]
        .par_iter()
        .map(|&v| simulate(cfg, v))
        .collect::<BenchResult<Vec<_>>>()?;
    let inertial = runs.pop().expect("two runs");
    let body = runs.pop().expect("two runs");
    let (q, u) = &body.final_state;
    let power_residuals = power_residuals(cfg, FrameVariant::Body, q, u)?;
    Ok(ConservationReport { config: cfg.clone(), body, inertial, power_residuals })
}

impl ConservationReport {
    /// Whether the power residual decreases strictly with the quadrature order.
    pub fn power_residual_monotone(&self) -> bool {
        self.power_residuals.windows(2).all(|w| w[1].residual < w[0].residual)
    }

    pub fn write(&self, dir: &Path) -> BenchResult<()> {
        let mut chart = Chart::new("relative energy change", "t [s]", "(E - E0) / E0");
        for r in [&self.body, &self.inertial] {
            let name = match r.variant {
                FrameVariant::Body => "body",
                FrameVariant::Inertial => "inertial",
            };
            let mut t = Table::new(&[
                "t [s]",
                "kinetic_T [J]",
                "elastic_U [J]",
                "total_E [J]",
                "L_x [kg m/s]",
                "L_y [kg m/s]",
                "L_z [kg m/s]",
                "J_x [kg m^2/s]",
                "J_y [kg m^2/s]",
                "J_z [kg m^2/s]",
            ]);
            for k in 0..r.times.len() {
                let ((kin, pot), l, j) = (r.energy[k], r.linear_momentum[k], r.angular_momentum[k]);
                t.push(vec![r.times[k], kin, pot, kin + pot, l.x, l.y, l.z, j.x, j.y, j.z]);
            }
            t.write(&dir.join(format!("conservation_{name}.csv")))?;
            let e0 = r.energy[0].0 + r.energy[0].1;
            chart = chart.with(Series::line(
                name,
                r.times.iter().zip(&r.energy).map(|(t, (a, b))| (*t, (a + b - e0) / e0)).collect(),
            ));
        }
        chart.write(&dir.join("conservation_energy.svg"))?;
        let mut t = Table::new(&["quadrature_order [-]", "power_residual [-]"]);
        for p in &self.power_residuals {
            t.push(vec![p.order as f64, p.residual]);
        }
        t.write(&dir.join("conservation_power_residual.csv"))
    }

    pub fn summary(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, r) in [("body frame", &self.body), ("inertial frame", &self.inertial)] {
            out.push(format!(
                "{name}: energy drift {:.3e}, linear momentum drift {:.3e}, angular momentum drift {:.3e}, max elastic fraction {:.3e}, {} steps",
                r.energy_drift(),
                r.linear_momentum_drift(),
                r.angular_momentum_drift(),
                r.max_elastic_fraction(),
                r.steps
            ));
        }
        let res: Vec<String> = self.power_residuals.iter().map(|p| format!("{}:{:.6e}", p.order, p.residual)).collect();
        out.push(format!("power residual by quadrature order: {}", res.join(" ")));
        out.push(format!("monotone decrease: {}", self.power_residual_monotone()));
        out
    }
}
