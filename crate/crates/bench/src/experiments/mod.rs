//! The benchmark experiments. Each one has a serde config section, a `run` function
//! returning an in-memory report and a `write` method producing CSV and SVG files.

pub mod bent_helix;
pub mod cantilever;
pub mod conservation;
pub mod heavy_top;
pub mod helix;
pub mod objectivity;
pub mod selftest;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::{DVector, Matrix3, Vector3};
use rodsim_core::liegroup::LieConfig;
use rodsim_core::rodcore::{ElementKinematics, NodalCoords, StrainState, NODE_DOFS};

use crate::config::Config;
use crate::error::{BenchError, BenchResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Experiment {
    Cantilever,
    Helix,
    Objectivity,
    BentHelix,
    HeavyTop,
    Conservation,
    LiegroupSelftest,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Cantilever,
        Experiment::Helix,
        Experiment::Objectivity,
        Experiment::BentHelix,
        Experiment::HeavyTop,
        Experiment::Conservation,
        Experiment::LiegroupSelftest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Cantilever => "cantilever",
            Experiment::Helix => "helix",
            Experiment::Objectivity => "objectivity",
            Experiment::BentHelix => "bent-helix",
            Experiment::HeavyTop => "heavy-top",
            Experiment::Conservation => "conservation",
            Experiment::LiegroupSelftest => "liegroup-selftest",
        }
    }

    /// Name of the config section holding this experiment's parameters.
    pub fn section(self) -> &'static str {
        match self {
            Experiment::BentHelix => "bent_helix",
            Experiment::HeavyTop => "heavy_top",
            Experiment::LiegroupSelftest => "liegroup_selftest",
            other => other.name(),
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Experiment::Cantilever => "locking and convergence study of a cantilever under tip moment and follower force",
            Experiment::Helix => "straight rod loaded into a two-coil helix, compared with the exact solution",
            Experiment::Objectivity => "deformed single-element cantilever rotated ten times about its axis",
            Experiment::BentHelix => "cantilever rolled up into ten circles under an out-of-plane tip load",
            Experiment::HeavyTop => "spinning stiff and soft rods pinned at one end under gravity",
            Experiment::Conservation => "energy and momentum balance of a freely flying rod",
            Experiment::LiegroupSelftest => "closed forms, series and finite difference checks of the Lie group kernel",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Experiment::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| {
            let names: Vec<_> = Experiment::ALL.iter().map(|e| e.name()).collect();
            format!("unknown experiment '{s}', expected one of: {}", names.join(", "))
        })
    }
}

/// Runs one experiment, writes its files into `out` and returns summary lines.
pub fn run(exp: Experiment, config: &Config, out: &Path) -> BenchResult<Vec<String>> {
    std::fs::create_dir_all(out).map_err(|e| BenchError::io(out, e))?;
    match exp {
        Experiment::Cantilever => {
            let r = cantilever::run(&config.cantilever)?;
            r.write(out)?;
            Ok(r.summary())
        }
        Experiment::Helix => {
            let r = helix::run(&config.helix)?;
            r.write(out)?;
            Ok(r.summary())
        }
        Experiment::Objectivity => {
            let r = objectivity::run(&config.objectivity)?;
            r.write(out)?;
            Ok(r.summary())
        }
        Experiment::BentHelix => {
            let r = bent_helix::run(&config.bent_helix)?;
            r.write(out)?;
            Ok(r.summary())
        }
        Experiment::HeavyTop => {
            let r = heavy_top::run(&config.heavy_top)?;
            r.write(out)?;
            Ok(r.summary())
        }
        Experiment::Conservation => {
            let r = conservation::run(&config.conservation)?;
            r.write(out)?;
            Ok(r.summary())
        }
        Experiment::LiegroupSelftest => {
            let r = selftest::run(&config.liegroup_selftest)?;
            r.write(out)?;
            Ok(r.summary())
        }
    }
}

/// Coordinates of a straight rod with `n_nodes` nodes from `origin` along the first
/// column of `orientation`, all nodes sharing that orientation.
pub fn straight_rod(n_nodes: usize, length: f64, origin: Vector3<f64>, psi: Vector3<f64>) -> DVector<f64> {
    let a: Matrix3<f64> = rodsim_core::liegroup::exp_so3(&psi);
    let dir = a.column(0).into_owned();
    let mut q = DVector::zeros(NODE_DOFS * n_nodes);
    for i in 0..n_nodes {
        let s = length * i as f64 / (n_nodes - 1) as f64;
        NodalCoords::new(origin + dir * s, psi).write_global(&mut q, i);
    }
    q
}

pub(crate) fn check_config(ok: bool, msg: impl FnOnce() -> String) -> BenchResult<()> {
    if ok {
        Ok(())
    } else {
        Err(BenchError::Config(msg()))
    }
}

/// Tip node coordinates.
pub(crate) fn last_node(q: &DVector<f64>) -> NodalCoords<f64> {
    NodalCoords::from_global(q, q.len() / NODE_DOFS - 1)
}

/// Strains at `xi` from a central difference of the interpolated pose in `xi`.
pub fn interpolated_strain(lie: &LieConfig<f64>, kin: &ElementKinematics<f64>, xi: f64) -> StrainState<f64> {
    let h = 1e-6 * kin.geom.delta();
    let p = kin.pose_at(lie, xi + h).to_homogeneous();
    let m = kin.pose_at(lie, xi - h).to_homogeneous();
    let c = kin.pose_at(lie, xi).to_homogeneous();
    let d = c.try_inverse().expect("pose is invertible") * (p - m) / (2.0 * h * kin.geom.j);
    StrainState {
        gamma: Vector3::new(d[(0, 3)], d[(1, 3)], d[(2, 3)]),
        kappa: Vector3::new(d[(2, 1)], d[(0, 2)], d[(1, 0)]),
    }
}
