//! Single-element cantilever loaded as in the cantilever experiment, then rotated about the
//! axis of the clamp by a prescribed rotation vector of the clamped node.

use std::f64::consts::PI;
use std::path::Path;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use rodsim_core::assembly::RodModel;
use rodsim_core::liegroup::LieConfig;
use rodsim_core::rodcore::{wrap_rotation_vector, CrossSectionInertia, Mesh, NodalCoords};
use rodsim_core::solvers::{solve_static, BoundaryCondition, PrescribedMotion, StaticSettings};

use super::cantilever::{self, CantileverConfig};
use super::{check_config, last_node, straight_rod};
use crate::error::BenchResult;
use crate::output::{Chart, Series, Table};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ObjectivityConfig {
    pub length: f64,
    pub youngs_modulus: f64,
    pub shear_modulus: f64,
    pub slenderness: f64,
    pub atol: f64,
    pub n_el: usize,
    pub load_increments: usize,
    pub rotation_increments: usize,
    /// Full turns of the clamped node about the first axis.
    pub turns: f64,
    pub max_iterations: usize,
    /// Bisections allowed for an increment whose Newton iteration fails.
    pub max_cutbacks: usize,
}

impl Default for ObjectivityConfig {
    fn default() -> Self {
        Self {
            length: 1e3,
            youngs_modulus: 1.0,
            shear_modulus: 0.5,
            slenderness: 1e2,
            atol: 1e-9,
            n_el: 1,
            load_increments: 50,
            rotation_increments: 450,
            turns: 10.0,
            max_iterations: 50,
            max_cutbacks: 6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IncrementState {
    pub increment: usize,
    /// Rotation angle of the clamped node about the first axis.
    pub angle: f64,
    pub potential: f64,
    pub tip: NodalCoords<f64>,
    pub tip_rotation: Matrix3<f64>,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub struct ObjectivityReport {
    pub config: ObjectivityConfig,
    pub states: Vec<IncrementState>,
}

pub fn run(cfg: &ObjectivityConfig) -> BenchResult<ObjectivityReport> {
    check_config(cfg.load_increments > 0 && cfg.rotation_increments > 0 && cfg.n_el > 0, || {
        "objectivity: increment and element counts must be positive".into()
    })?;
    let base = CantileverConfig {
        length: cfg.length,
        youngs_modulus: cfg.youngs_modulus,
        shear_modulus: cfg.shear_modulus,
        ..CantileverConfig::default()
    };
    let law = cantilever::stiffness(&base, cfg.slenderness);
    let kb = law.c_kappa[(1, 1)];
    let model = RodModel::new(Mesh::uniform(cfg.n_el, cfg.length), law, CrossSectionInertia::centroidal(0.0, Matrix3::zeros()));
    let total = cfg.load_increments + cfg.rotation_increments;
    let (nl, nr, nt) = (cfg.load_increments as f64, cfg.rotation_increments as f64, total as f64);
    let full = cantilever::loads(cfg.length, kb);
    // load factor 1 is reached after the load phase
    let scale = move |t: f64| (t * nt / nl).min(1.0);
    let (m, f) = (full.c1.clone().expect("tip moment"), full.b1.clone().expect("tip force"));
    let loads = rodsim_core::assembly::LoadSpec::none()
        .with_tip_moment(move |t, h| m(scale(t), h))
        .with_tip_force(move |t, h| f(scale(t), h));
    let total_angle = 2.0 * PI * cfg.turns;
    let angle = move |t: f64| ((t * nt - nl) / nr).clamp(0.0, 1.0) * total_angle;
    let clamp = BoundaryCondition::prescribed(0, [true; 6], move |t| PrescribedMotion {
        coords: NodalCoords::new(Vector3::zeros(), wrap_rotation_vector(&Vector3::new(angle(t), 0.0, 0.0))),
        velocity: [0.0; 6],
        acceleration: [0.0; 6],
    });
    let q0 = straight_rod(cfg.n_el + 1, cfg.length, Vector3::zeros(), Vector3::zeros());
    let settings =
        StaticSettings { increments: total, atol: cfg.atol, max_iterations: cfg.max_iterations, extrapolate: false, max_cutbacks: cfg.max_cutbacks };
    let lie = LieConfig::default();
    let mut states = Vec::with_capacity(total);
    let mut failure = None;
    solve_static(&model, &q0, &loads, &[clamp], &settings, |rec, q| {
        let tip = last_node(q);
        match model.potential_energy(q) {
            Ok(potential) => states.push(IncrementState {
                increment: rec.increment,
                angle: angle(rec.load_factor),
                potential,
                tip,
                tip_rotation: lie.exp_so3(&tip.psi),
                iterations: rec.iterations,
            }),
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    Ok(ObjectivityReport { config: cfg.clone(), states })
}

impl ObjectivityReport {
    fn rotation_phase(&self) -> &[IncrementState] {
        &self.states[self.config.load_increments - 1..]
    }

    /// `max |U - U_ref| / U_ref` over the rotation phase, `U_ref` at the end of loading.
    pub fn energy_variation(&self) -> f64 {
        let ph = self.rotation_phase();
        let u0 = ph[0].potential;
        ph.iter().map(|s| (s.potential - u0).abs() / u0).fold(0.0, f64::max)
    }

    /// Relative variation of the tip distance from the rotation axis.
    pub fn axis_distance_variation(&self) -> f64 {
        let ph = self.rotation_phase();
        let d = |s: &IncrementState| s.tip.r.yz().norm();
        let d0 = d(&ph[0]);
        ph.iter().map(|s| (d(s) - d0).abs() / d0).fold(0.0, f64::max)
    }

    /// `(|dr| / L, |Log(A^T A_ref)|)` between the final tip pose and the pose after loading.
    pub fn final_pose_error(&self) -> BenchResult<(f64, f64)> {
        let ph = self.rotation_phase();
        let (a, b) = (&ph[0], ph.last().expect("nonempty"));
        let dr = (b.tip.r - a.tip.r).norm() / self.config.length;
        let dpsi = LieConfig::default().log_so3(&(a.tip_rotation.transpose() * b.tip_rotation))?.norm();
        Ok((dr, dpsi))
    }

    /// Increments in the rotation phase where a tip rotation vector component jumps by more
    /// than `pi / 2`.
    pub fn rotation_vector_jumps(&self) -> usize {
        self.rotation_phase().windows(2).filter(|w| (w[1].tip.psi - w[0].tip.psi).amax() > 0.5 * PI).count()
    }

    /// Largest relative deviation of the tip step length from the chord of a rigid rotation
    /// by one angle increment.
    pub fn tip_step_deviation(&self) -> f64 {
        let ph = self.rotation_phase();
        let d = ph[0].tip.r.yz().norm();
        ph.windows(2)
            .map(|w| {
                let chord = 2.0 * d * (0.5 * (w[1].angle - w[0].angle)).sin();
                ((w[1].tip.r - w[0].tip.r).norm() - chord).abs() / chord
            })
            .fold(0.0, f64::max)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&[
            "increment [-]",
            "clamp_angle [rad]",
            "potential_energy [J]",
            "tip_x [m]",
            "tip_y [m]",
            "tip_z [m]",
            "tip_psi_1 [rad]",
            "tip_psi_2 [rad]",
            "tip_psi_3 [rad]",
            "tip_psi_norm [rad]",
            "newton_iterations [-]",
        ]);
        for s in &self.states {
            let (r, p) = (s.tip.r, s.tip.psi);
            t.push(vec![
                s.increment as f64,
                s.angle,
                s.potential,
                r.x,
                r.y,
                r.z,
                p.x,
                p.y,
                p.z,
                p.norm(),
                s.iterations as f64,
            ]);
        }
        t
    }

    pub fn write(&self, dir: &Path) -> BenchResult<()> {
        self.table().write(&dir.join("objectivity.csv"))?;
        let series = |f: &dyn Fn(&IncrementState) -> f64| -> Vec<(f64, f64)> {
            self.states.iter().map(|s| (s.increment as f64, f(s))).collect()
        };
        Chart::new("potential energy", "increment", "U")
            .with(Series::line("U", series(&|s| s.potential)))
            .write(&dir.join("objectivity_energy.svg"))?;
        let mut c = Chart::new("tip position", "increment", "r");
        for (i, n) in ["x", "y", "z"].iter().enumerate() {
            c = c.with(Series::line(*n, series(&|s| s.tip.r[i])));
        }
        c.write(&dir.join("objectivity_tip_position.svg"))?;
        let mut c = Chart::new("tip rotation vector", "increment", "psi");
        for (i, n) in ["psi_1", "psi_2", "psi_3"].iter().enumerate() {
            c = c.with(Series::scatter(*n, series(&|s| s.tip.psi[i])));
        }
        c.write(&dir.join("objectivity_tip_rotation.svg"))
    }

    pub fn summary(&self) -> Vec<String> {
        let (dr, dpsi) = self.final_pose_error().unwrap_or((f64::NAN, f64::NAN));
        vec![
            format!("increments: {}", self.states.len()),
            format!("relative potential energy variation during rotation: {:.3e}", self.energy_variation()),
            format!("relative variation of tip distance from axis: {:.3e}", self.axis_distance_variation()),
            format!("final vs loaded tip pose: |dr|/L {dr:.3e}, |dpsi| {dpsi:.3e}"),
            format!("tip rotation vector jumps (complement updates): {}", self.rotation_vector_jumps()),
            format!("tip step deviation from rigid chord: {:.3e}", self.tip_step_deviation()),
            format!("max newton iterations: {}", self.states.iter().map(|s| s.iterations).max().unwrap_or(0)),
        ]
    }
}
