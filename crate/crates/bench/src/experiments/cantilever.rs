//! Cantilever under a body-fixed tip moment and an out-of-plane follower tip force, for
//! several slenderness ratios, compared with a fine self-reference of the same element.

use std::path::Path;

use nalgebra::{DVector, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rodsim_core::assembly::{LoadSpec, RodModel};
use rodsim_core::rodcore::{ConstitutiveLaw, CrossSectionInertia, Mesh, StrainState};
use rodsim_core::solvers::{solve_static, BoundaryCondition, StaticSettings};

use super::{check_config, straight_rod};
use crate::error::BenchResult;
use crate::metrics::{convergence_rate, model_error, ErrorReport};
use crate::output::{Chart, Series, Table};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CantileverConfig {
    pub length: f64,
    pub youngs_modulus: f64,
    pub shear_modulus: f64,
    /// Slenderness ratios `L / w` of the square cross-section.
    pub slenderness: Vec<f64>,
    /// Newton tolerance for each slenderness ratio.
    pub tolerances: Vec<f64>,
    pub n_el: Vec<usize>,
    pub reference_n_el: usize,
    pub increments: usize,
    pub max_iterations: usize,
    /// Number of samples of the error measures.
    pub samples: usize,
    /// Slenderness used for the convergence rates and strain profiles.
    pub convergence_slenderness: f64,
    /// Smallest element count entering the convergence rate fit.
    pub rate_min_n_el: usize,
    pub profile_n_el: usize,
}

impl Default for CantileverConfig {
    fn default() -> Self {
        Self {
            length: 1e3,
            youngs_modulus: 1.0,
            shear_modulus: 0.5,
            slenderness: vec![1e1, 1e2, 1e3, 1e4],
            tolerances: vec![1e-8, 1e-9, 1e-10, 1e-14],
            n_el: vec![1, 2, 4, 8, 16, 32, 64],
            reference_n_el: 512,
            increments: 20,
            max_iterations: 50,
            samples: 100,
            convergence_slenderness: 1e3,
            rate_min_n_el: 4,
            profile_n_el: 4,
        }
    }
}

/// Converged cantilever for one slenderness and mesh.
#[derive(Clone, Debug)]
pub struct Solution {
    pub slenderness: f64,
    pub model: RodModel<f64>,
    pub q: DVector<f64>,
    /// Largest Newton iteration count over all increments.
    pub max_iterations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorRow {
    pub slenderness: f64,
    pub n_el: usize,
    pub error: ErrorReport,
    pub max_iterations: usize,
}

#[derive(Clone, Debug)]
pub struct CantileverReport {
    pub config: CantileverConfig,
    pub rows: Vec<ErrorRow>,
    /// Newton iteration maxima of the reference runs, per slenderness.
    pub reference_iterations: Vec<(f64, usize)>,
    /// Convergence rates `(r, psi)` at the convergence slenderness.
    pub rates: (f64, f64),
    pub profile: Vec<StrainState<f64>>,
    pub reference_profile: Vec<StrainState<f64>>,
}

/// Square cross-section stiffnesses `(EA, GA, EI, 2GI)`.
pub fn stiffness(cfg: &CantileverConfig, slenderness: f64) -> ConstitutiveLaw<f64> {
    let w = cfg.length / slenderness;
    let a = w * w;
    let i = w.powi(4) / 12.0;
    let (e, g) = (cfg.youngs_modulus, cfg.shear_modulus);
    ConstitutiveLaw::diagonal(e * a, g * a, e * i, 2.0 * g * i)
}

/// Tip moment `(0, 0, pi kb / 2L)` in the body frame and tip force `A (0, 0, pi kb / 2L^2)`.
pub fn loads(length: f64, kb: f64) -> LoadSpec<f64> {
    let m = 0.5 * std::f64::consts::PI * kb / length;
    let f = m / length;
    LoadSpec::none()
        .with_tip_moment(move |t, _| Vector3::new(0.0, 0.0, t * m))
        .with_tip_force(move |t, h| h.rotation * Vector3::new(0.0, 0.0, t * f))
}

pub fn solve(cfg: &CantileverConfig, slenderness: f64, atol: f64, n_el: usize) -> BenchResult<Solution> {
    let law = stiffness(cfg, slenderness);
    let kb = law.c_kappa[(1, 1)];
    let model = RodModel::new(Mesh::uniform(n_el, cfg.length), law, CrossSectionInertia::centroidal(0.0, nalgebra::Matrix3::zeros()));
    let q0 = straight_rod(n_el + 1, cfg.length, Vector3::zeros(), Vector3::zeros());
    let settings = StaticSettings { increments: cfg.increments, atol, max_iterations: cfg.max_iterations, extrapolate: true, max_cutbacks: 0 };
    let (q, history) =
        solve_static(&model, &q0, &loads(cfg.length, kb), &[BoundaryCondition::clamp(0)], &settings, |_, _| {})?;
    let max_iterations = history.iter().map(|r| r.iterations).max().unwrap_or(0);
    Ok(Solution { slenderness, model, q, max_iterations })
}

fn validate(cfg: &CantileverConfig) -> BenchResult<()> {
    check_config(cfg.slenderness.len() == cfg.tolerances.len(), || {
        "cantilever: slenderness and tolerances must have equal length".into()
    })?;
    check_config(cfg.slenderness.iter().chain(&cfg.tolerances).all(|&v| v > 0.0), || {
        "cantilever: slenderness and tolerances must be positive".into()
    })?;
    check_config(cfg.n_el.iter().all(|&n| n > 0) && cfg.reference_n_el > 0 && cfg.profile_n_el > 0, || {
        "cantilever: element counts must be positive".into()
    })?;
    check_config(cfg.samples >= 2 && cfg.increments > 0, || "cantilever: need samples >= 2 and increments > 0".into())?;
    check_config(cfg.slenderness.contains(&cfg.convergence_slenderness), || {
        "cantilever: convergence_slenderness must be one of the slenderness values".into()
    })
}

pub fn run(cfg: &CantileverConfig) -> BenchResult<CantileverReport> {
    validate(cfg)?;
    let per_rho: Vec<(Vec<ErrorRow>, usize, Option<(Vec<StrainState<f64>>, Vec<StrainState<f64>>)>)> = cfg
        .slenderness
        .par_iter()
        .zip(&cfg.tolerances)
        .map(|(&rho, &atol)| -> BenchResult<_> {
            let reference = solve(cfg, rho, atol, cfg.reference_n_el)?;
            let rows = cfg
                .n_el
                .par_iter()
                .map(|&n| -> BenchResult<ErrorRow> {
                    let s = solve(cfg, rho, atol, n)?;
                    let error = model_error((&s.model, &s.q), (&reference.model, &reference.q), cfg.samples)?;
                    Ok(ErrorRow { slenderness: rho, n_el: n, error, max_iterations: s.max_iterations })
                })
                .collect::<BenchResult<Vec<_>>>()?;
            let profile = if rho == cfg.convergence_slenderness {
                let s = solve(cfg, rho, atol, cfg.profile_n_el)?;
                Some((s.model.element_strains(&s.q)?, reference.model.element_strains(&reference.q)?))
            } else {
                None
            };
            Ok((rows, reference.max_iterations, profile))
        })
        .collect::<BenchResult<Vec<_>>>()?;

    let mut rows = Vec::new();
    let mut reference_iterations = Vec::new();
    let mut profiles = None;
    for ((r, it, p), &rho) in per_rho.into_iter().zip(&cfg.slenderness) {
        rows.extend(r);
        reference_iterations.push((rho, it));
        if p.is_some() {
            profiles = p;
        }
    }
    let fit: Vec<&ErrorRow> = rows
        .iter()
        .filter(|r| r.slenderness == cfg.convergence_slenderness && r.n_el >= cfg.rate_min_n_el)
        .collect();
    let n: Vec<f64> = fit.iter().map(|r| r.n_el as f64).collect();
    let er: Vec<f64> = fit.iter().map(|r| r.error.e_r).collect();
    let ep: Vec<f64> = fit.iter().map(|r| r.error.e_psi).collect();
    let rates = if n.len() >= 2 { (convergence_rate(&n, &er), convergence_rate(&n, &ep)) } else { (f64::NAN, f64::NAN) };
    let (profile, reference_profile) = profiles.expect("convergence slenderness validated");
    Ok(CantileverReport { config: cfg.clone(), rows, reference_iterations, rates, profile, reference_profile })
}

impl CantileverReport {
    pub fn row(&self, slenderness: f64, n_el: usize) -> Option<&ErrorRow> {
        self.rows.iter().find(|r| r.slenderness == slenderness && r.n_el == n_el)
    }

    /// Largest relative spread `(max - min) / min` of `(e_r, e_psi)` across slenderness
    /// ratios for one element count.
    pub fn locking_spread(&self, n_el: usize) -> Option<(f64, f64)> {
        let sel: Vec<&ErrorRow> = self.rows.iter().filter(|r| r.n_el == n_el).collect();
        if sel.len() < 2 {
            return None;
        }
        let spread = |f: &dyn Fn(&ErrorRow) -> f64| {
            let v: Vec<f64> = sel.iter().map(|r| f(r)).collect();
            let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            (hi - lo) / lo
        };
        Some((spread(&|r| r.error.e_r), spread(&|r| r.error.e_psi)))
    }

    pub fn error_table(&self) -> Table {
        let mut t = Table::new(&[
            "slenderness [-]",
            "n_el [-]",
            "e_r [m]",
            "e_psi [rad]",
            "k_times_e_psi [rad]",
            "max_newton_iterations [-]",
        ]);
        for r in &self.rows {
            let e = &r.error;
            t.push(vec![r.slenderness, r.n_el as f64, e.e_r, e.e_psi, e.e_psi * e.k as f64, r.max_iterations as f64]);
        }
        t
    }

    pub fn write(&self, dir: &Path) -> BenchResult<()> {
        self.error_table().write(&dir.join("cantilever_errors.csv"))?;
        strain_profile(&self.profile).write(&dir.join("cantilever_strains.csv"))?;
        strain_profile(&self.reference_profile).write(&dir.join("cantilever_strains_reference.csv"))?;
        let mut chart = Chart::new("cantilever convergence", "n_el", "error").log_log();
        for rho in &self.config.slenderness {
            let sel: Vec<&ErrorRow> = self.rows.iter().filter(|r| r.slenderness == *rho).collect();
            chart = chart
                .with(Series::line(format!("e_r, rho={rho:e}"), sel.iter().map(|r| (r.n_el as f64, r.error.e_r)).collect()))
                .with(Series::line(format!("e_psi, rho={rho:e}"), sel.iter().map(|r| (r.n_el as f64, r.error.e_psi)).collect()));
        }
        chart.write(&dir.join("cantilever_convergence.svg"))?;
        for (k, name) in ["gamma", "kappa"].iter().enumerate() {
            let pick = |s: &StrainState<f64>, i: usize| if k == 0 { s.gamma[i] } else { s.kappa[i] };
            let mut c = Chart::new(&format!("cantilever {name}"), "xi", name);
            for i in 0..3 {
                c = c
                    .with(Series::line(format!("{name}_{} n_el={}", i + 1, self.profile.len()), steps(&self.profile, |s| pick(s, i))))
                    .with(Series::line(
                        format!("{name}_{} reference", i + 1),
                        steps(&self.reference_profile, |s| pick(s, i)),
                    ));
            }
            c.write(&dir.join(format!("cantilever_{name}.svg")))?;
        }
        Ok(())
    }

    pub fn summary(&self) -> Vec<String> {
        let mut out = vec!["slenderness  n_el  e_r  e_psi  newton_max".to_string()];
        for r in &self.rows {
            out.push(format!(
                "{:e}  {}  {:.4e}  {:.4e}  {}",
                r.slenderness, r.n_el, r.error.e_r, r.error.e_psi, r.max_iterations
            ));
        }
        out.push(format!("convergence rates at slenderness {:e}: e_r {:.3}, e_psi {:.3}", self.config.convergence_slenderness, self.rates.0, self.rates.1));
        for n in [1, 64] {
            if let Some((a, b)) = self.locking_spread(n) {
                out.push(format!("relative spread across slenderness at n_el={n}: e_r {a:.2e}, e_psi {b:.2e}"));
            }
        }
        out.push("errors are measured against a self-reference of the same element; absolute values differ from an external reference".into());
        out.push("k * e_psi (orientation error without the 1/k factor) is listed in the CSV as well".into());
        out
    }
}

/// Piecewise constant strain profile, two rows per element.
pub fn strain_profile(strains: &[StrainState<f64>]) -> Table {
    let mut t = Table::new(&["xi [-]", "gamma_1 [-]", "gamma_2 [-]", "gamma_3 [-]", "kappa_1 [1/m]", "kappa_2 [1/m]", "kappa_3 [1/m]"]);
    let n = strains.len() as f64;
    for (e, s) in strains.iter().enumerate() {
        for xi in [e as f64 / n, (e + 1) as f64 / n] {
            t.push(vec![xi, s.gamma[0], s.gamma[1], s.gamma[2], s.kappa[0], s.kappa[1], s.kappa[2]]);
        }
    }
    t
}

fn steps(strains: &[StrainState<f64>], f: impl Fn(&StrainState<f64>) -> f64) -> Vec<(f64, f64)> {
    let n = strains.len() as f64;
    strains
        .iter()
        .enumerate()
        .flat_map(|(e, s)| [(e as f64 / n, f(s)), ((e + 1) as f64 / n, f(s))])
        .collect()
}
