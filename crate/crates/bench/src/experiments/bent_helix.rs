//! Cantilever rolled up by a spatially fixed moment while a dead out-of-plane tip force
//! makes it coil into a helix-like shape.

use std::f64::consts::PI;
use std::path::Path;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use rodsim_core::assembly::{LoadSpec, RodModel};
use rodsim_core::rodcore::{ConstitutiveLaw, CrossSectionInertia, Mesh, StrainState};
use rodsim_core::solvers::{solve_static, BoundaryCondition, StaticSettings};

use super::cantilever::strain_profile;
use super::{check_config, interpolated_strain, last_node, straight_rod};
use crate::error::BenchResult;
use crate::output::{Chart, Series, Table};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BentHelixConfig {
    pub length: f64,
    pub axial_stiffness: f64,
    pub shear_stiffness: f64,
    pub bending_stiffness: f64,
    pub torsional_stiffness: f64,
    /// Number of full circles the tip moment bends the rod into.
    pub circles: f64,
    pub tip_force: f64,
    pub n_el: usize,
    pub increments: usize,
    pub atol: f64,
    pub max_iterations: usize,
    /// Bisections allowed for an increment whose Newton iteration fails.
    pub max_cutbacks: usize,
    /// Strain samples per element in the strain profile output.
    pub strain_samples: usize,
}

impl Default for BentHelixConfig {
    fn default() -> Self {
        Self {
            length: 10.0,
            axial_stiffness: 1e4,
            shear_stiffness: 1e4,
            bending_stiffness: 1e2,
            torsional_stiffness: 1e2,
            circles: 10.0,
            tip_force: 50.0,
            n_el: 30,
            increments: 200,
            atol: 1e-8,
            max_iterations: 50,
            max_cutbacks: 6,
            strain_samples: 5,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BentHelixReport {
    pub config: BentHelixConfig,
    /// `(load factor, tip displacement)` per increment.
    pub tip: Vec<(f64, Vector3<f64>)>,
    pub iterations: Vec<usize>,
    pub strains: Vec<StrainState<f64>>,
    /// Strain profile sampled at several points inside each element, `(element, xi, strain)`.
    pub sampled_strains: Vec<(usize, f64, StrainState<f64>)>,
    /// Largest difference between the element strains and a finite difference of the
    /// interpolated pose at the sample points.
    pub fd_strain_deviation: f64,
}

pub fn run(cfg: &BentHelixConfig) -> BenchResult<BentHelixReport> {
    check_config(cfg.n_el > 0 && cfg.increments > 0 && cfg.strain_samples > 0, || {
        "bent_helix: counts must be positive".into()
    })?;
    let law = ConstitutiveLaw::diagonal(
        cfg.axial_stiffness,
        cfg.shear_stiffness,
        cfg.bending_stiffness,
        cfg.torsional_stiffness,
    );
    let model = RodModel::new(Mesh::uniform(cfg.n_el, cfg.length), law, CrossSectionInertia::centroidal(0.0, Matrix3::zeros()));
    let moment = 2.0 * PI * cfg.circles * cfg.bending_stiffness / cfg.length;
    let force = cfg.tip_force;
    let loads = LoadSpec::none()
        .with_tip_moment(move |t, h| h.rotation.transpose() * Vector3::new(0.0, 0.0, t * moment))
        .with_tip_force(move |t, _| Vector3::new(0.0, 0.0, t * force));
    let q0 = straight_rod(cfg.n_el + 1, cfg.length, Vector3::zeros(), Vector3::zeros());
    let r_tip0 = last_node(&q0).r;
    let settings =
        StaticSettings { increments: cfg.increments, atol: cfg.atol, max_iterations: cfg.max_iterations, extrapolate: false, max_cutbacks: cfg.max_cutbacks };
    let mut tip = Vec::with_capacity(cfg.increments);
    let mut iterations = Vec::with_capacity(cfg.increments);
    let (q, _) = solve_static(&model, &q0, &loads, &[BoundaryCondition::clamp(0)], &settings, |rec, q| {
        tip.push((rec.load_factor, last_node(q).r - r_tip0));
        iterations.push(rec.iterations);
    })?;
    let strains = model.element_strains(&q)?;
    let mut sampled_strains = Vec::new();
    let mut fd_strain_deviation = 0.0f64;
    for e in 0..cfg.n_el {
        let kin = model.kinematics(&q, e)?;
        for k in 0..cfg.strain_samples {
            let s = (k as f64 + 0.5) / cfg.strain_samples as f64;
            let xi = kin.geom.xi0 + s * kin.geom.delta();
            let fd = interpolated_strain(&model.lie, &kin, xi);
            let st = kin.strains();
            fd_strain_deviation = fd_strain_deviation.max((fd.gamma - st.gamma).amax()).max((fd.kappa - st.kappa).amax());
            sampled_strains.push((e, xi, st));
        }
    }
    Ok(BentHelixReport { config: cfg.clone(), tip, iterations, strains, sampled_strains, fd_strain_deviation })
}

impl BentHelixReport {
    /// Sign changes of the tip displacement in the third direction.
    pub fn sign_changes(&self) -> usize {
        let z: Vec<f64> = self.tip.iter().map(|(_, d)| d.z).filter(|z| *z != 0.0).collect();
        z.windows(2).filter(|w| w[0].signum() != w[1].signum()).count()
    }

    /// Peak `|z|` between consecutive sign changes.
    pub fn extrema(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut peak = 0.0f64;
        let mut sign = 0.0;
        for (_, d) in &self.tip {
            if d.z == 0.0 {
                continue;
            }
            if sign != 0.0 && d.z.signum() != sign {
                out.push(peak);
                peak = 0.0;
            }
            sign = d.z.signum();
            peak = peak.max(d.z.abs());
        }
        out.push(peak);
        out
    }

    /// Whether the peaks after the second one decrease monotonically.
    pub fn decaying(&self) -> bool {
        let e = self.extrema();
        e.len() >= 3 && e[1..].windows(2).all(|w| w[1] < w[0])
    }

    /// Largest spread (max - min) of any strain component over the samples of one element.
    pub fn within_element_spread(&self) -> f64 {
        let mut worst = 0.0f64;
        for e in 0..self.config.n_el {
            for c in 0..6 {
                let (lo, hi) = self
                    .sampled_strains
                    .iter()
                    .filter(|(k, _, _)| *k == e)
                    .map(|(_, _, x)| if c < 3 { x.gamma[c] } else { x.kappa[c - 3] })
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
                worst = worst.max(hi - lo);
            }
        }
        worst
    }

    pub fn write(&self, dir: &Path) -> BenchResult<()> {
        let mut t = Table::new(&["increment [-]", "load_factor [-]", "u_x [m]", "u_y [m]", "u_z [m]", "newton_iterations [-]"]);
        for (k, ((lf, d), it)) in self.tip.iter().zip(&self.iterations).enumerate() {
            t.push(vec![(k + 1) as f64, *lf, d.x, d.y, d.z, *it as f64]);
        }
        t.write(&dir.join("bent_helix_tip.csv"))?;
        strain_profile(&self.strains).write(&dir.join("bent_helix_strains.csv"))?;
        let mut s = Table::new(&["element [-]", "xi [-]", "gamma_1 [-]", "gamma_2 [-]", "gamma_3 [-]", "kappa_1 [1/m]", "kappa_2 [1/m]", "kappa_3 [1/m]"]);
        for (e, xi, st) in &self.sampled_strains {
            s.push(vec![*e as f64, *xi, st.gamma[0], st.gamma[1], st.gamma[2], st.kappa[0], st.kappa[1], st.kappa[2]]);
        }
        s.write(&dir.join("bent_helix_strain_samples.csv"))?;
        Chart::new("tip displacement u_z", "increment", "u_z [m]")
            .with(Series::line("u_z", self.tip.iter().enumerate().map(|(k, (_, d))| ((k + 1) as f64, d.z)).collect()))
            .write(&dir.join("bent_helix_tip.svg"))?;
        let n = self.strains.len() as f64;
        for (k, name) in ["gamma", "kappa"].iter().enumerate() {
            let mut c = Chart::new(&format!("final {name}"), "xi", name);
            for i in 0..3 {
                let pts = self
                    .strains
                    .iter()
                    .enumerate()
                    .flat_map(|(e, s)| {
                        let v = if k == 0 { s.gamma[i] } else { s.kappa[i] };
                        [(e as f64 / n, v), ((e + 1) as f64 / n, v)]
                    })
                    .collect();
                c = c.with(Series::line(format!("{name}_{}", i + 1), pts));
            }
            c.write(&dir.join(format!("bent_helix_{name}.svg")))?;
        }
        Ok(())
    }

    pub fn summary(&self) -> Vec<String> {
        let tip = self.tip.last().map(|(_, d)| *d).unwrap_or_default();
        vec![
            format!("increments: {}, max newton iterations {}", self.tip.len(), self.iterations.iter().max().unwrap_or(&0)),
            format!("final tip displacement: ({:.6e}, {:.6e}, {:.6e})", tip.x, tip.y, tip.z),
            format!("sign changes of u_z: {}, peaks decaying: {}", self.sign_changes(), self.decaying()),
            format!("peaks of |u_z|: {:?}", self.extrema().iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>()),
            format!("within-element strain spread: {:.3e}", self.within_element_spread()),
            format!("finite difference vs element strain deviation: {:.3e}", self.fd_strain_deviation),
        ]
    }
}
