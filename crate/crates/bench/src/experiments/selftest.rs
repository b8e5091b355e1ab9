//! Randomised checks of the Lie group kernel against series expansions and finite
//! differences.

use std::f64::consts::PI;
use std::path::Path;
use std::time::Instant;

use nalgebra::{DMatrix, Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use rodsim_core::liegroup::series::{
    exp_series, hat_se3, hat_so3, inv_tangent_series, tangent_series, MAX_BERNOULLI_INDEX,
};
use rodsim_core::liegroup::{LieConfig, Pose, Tensor3, Twist};

use super::check_config;
use crate::error::BenchResult;
use crate::output::Table;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelftestConfig {
    pub samples: usize,
    pub seed: u64,
    pub series_terms: usize,
    pub fd_step: f64,
    pub round_trip_tol: f64,
    pub identity_tol: f64,
    pub derivative_rel_tol: f64,
    pub series_tol: f64,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            samples: 50,
            seed: 20_240_601,
            series_terms: MAX_BERNOULLI_INDEX + 1,
            fd_step: 1e-6,
            round_trip_tol: 1e-10,
            identity_tol: 1e-10,
            derivative_rel_tol: 1e-5,
            series_tol: 1e-11,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

#[derive(Clone, Debug)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
    pub samples: usize,
    pub seconds: f64,
}

fn rand_dir(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

fn rand_vec(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Vector3<f64> {
    rand_dir(rng) * rng.gen_range(lo..hi)
}

fn rel<const I: usize, const J: usize, const K: usize>(a: &Tensor3<f64, I, J, K>, b: &Tensor3<f64, I, J, K>) -> f64 {
    a.max_abs_diff(b) / b.max_abs().max(1.0)
}

fn fd3(f: impl Fn(&Vector3<f64>) -> Matrix3<f64>, x: &Vector3<f64>, h: f64) -> Tensor3<f64, 3, 3, 3> {
    let cols: Vec<Matrix3<f64>> = (0..3)
        .map(|k| {
            let e = Vector3::ith(k, h);
            (f(&(x + e)) - f(&(x - e))) / (2.0 * h)
        })
        .collect();
    Tensor3::from_fn(|i, j, k| cols[k][(i, j)])
}

fn dm<const R: usize, const C: usize>(m: &nalgebra::SMatrix<f64, R, C>) -> DMatrix<f64> {
    DMatrix::from_fn(R, C, |i, j| m[(i, j)])
}

pub fn run(cfg: &SelftestConfig) -> BenchResult<SelftestReport> {
    check_config(cfg.samples > 0 && cfg.fd_step > 0.0, || "liegroup_selftest: need samples > 0 and fd_step > 0".into())?;
    check_config(cfg.series_terms >= 30 && cfg.series_terms <= MAX_BERNOULLI_INDEX + 1, || {
        format!("liegroup_selftest: series_terms must lie in [30, {}]", MAX_BERNOULLI_INDEX + 1)
    })?;
    let start = Instant::now();
    let lie = LieConfig::<f64>::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let h = cfg.fd_step;
    let mut worst = [0.0f64; 13];
    let bump = |w: &mut [f64; 13], i: usize, v: f64| w[i] = w[i].max(if v.is_nan() { f64::INFINITY } else { v });
    for _ in 0..cfg.samples {
        let psi = rand_vec(&mut rng, 0.0, PI - 0.05);
        let a = lie.exp_so3(&psi);
        bump(&mut worst, 0, (lie.log_so3(&a)? - psi).amax());
        let b = lie.exp_so3(&rand_vec(&mut rng, 0.0, PI - 0.05));
        bump(&mut worst, 1, (lie.exp_so3(&lie.log_so3(&b)?) - b).amax());
        let theta = Twist::new(rand_vec(&mut rng, 0.0, 5.0), rand_vec(&mut rng, 0.0, PI - 0.05));
        bump(&mut worst, 2, (lie.log_se3(&lie.exp_se3(&theta))?.to_vector() - theta.to_vector()).amax());

        let wide = rand_vec(&mut rng, 0.0, 6.0);
        let t = lie.tangent_so3(&wide);
        bump(&mut worst, 3, (t * lie.inv_tangent_so3(&wide)? - Matrix3::identity()).amax());
        bump(&mut worst, 4, (lie.tangent_so3(&-wide) - t.transpose()).amax());

        let p = rand_vec(&mut rng, 0.0, 2.8);
        bump(&mut worst, 5, rel(&lie.d_exp_so3(&p), &fd3(|x| lie.exp_so3(x), &p, h)));
        bump(&mut worst, 6, rel(&lie.d_tangent_so3(&p), &fd3(|x| lie.tangent_so3(x), &p, h)));
        let fd = fd3(|x| lie.inv_tangent_so3(x).expect("regular argument"), &p, h);
        bump(&mut worst, 7, rel(&lie.d_inv_tangent_so3(&p)?, &fd));
        let ap = lie.exp_so3(&p);
        let cols: Vec<Vector3<f64>> = (0..9)
            .map(|c| {
                let (j, k) = (c / 3, c % 3);
                let (mut up, mut dn) = (ap, ap);
                up[(j, k)] += h;
                dn[(j, k)] -= h;
                (lie.log_so3(&up).expect("regular") - lie.log_so3(&dn).expect("regular")) / (2.0 * h)
            })
            .collect();
        let fd = Tensor3::from_fn(|i, j, k| cols[3 * j + k][i]);
        bump(&mut worst, 8, rel(&lie.d_log_so3(&ap)?, &fd));

        let th = Twist::new(rand_vec(&mut rng, 0.0, 3.0), rand_vec(&mut rng, 0.0, 2.8));
        let cols: Vec<nalgebra::Matrix4<f64>> = (0..6)
            .map(|k| {
                let e = nalgebra::Vector6::ith(k, h);
                let v = th.to_vector();
                (lie.exp_se3(&Twist::from_vector(&(v + e))).to_homogeneous()
                    - lie.exp_se3(&Twist::from_vector(&(v - e))).to_homogeneous())
                    / (2.0 * h)
            })
            .collect();
        let fd = Tensor3::from_fn(|i, j, k| cols[k][(i, j)]);
        bump(&mut worst, 9, rel(&lie.d_exp_se3(&th), &fd));
        let pose = lie.exp_se3(&th);
        let hm = pose.to_homogeneous();
        let mut cols = Vec::with_capacity(16);
        for j in 0..4 {
            for k in 0..4 {
                if j == 3 {
                    cols.push(nalgebra::Vector6::zeros());
                    continue;
                }
                let (mut up, mut dn) = (hm, hm);
                up[(j, k)] += h;
                dn[(j, k)] -= h;
                let f = |m| lie.log_se3(&Pose::from_homogeneous(&m)).expect("regular").to_vector();
                cols.push((f(up) - f(dn)) / (2.0 * h));
            }
        }
        let fd = Tensor3::from_fn(|i, j, k| cols[4 * j + k][i]);
        bump(&mut worst, 10, rel(&lie.d_log_se3(&pose)?, &fd));

        let s = rand_vec(&mut rng, 0.0, 2.0);
        let x = hat_so3(&s);
        let n = cfg.series_terms;
        let e1 = (dm(&lie.exp_so3(&s)) - exp_series(&x, n)).amax();
        let e2 = (dm(&lie.tangent_so3(&s)) - tangent_series(&x, n)).amax();
        let e3 = (dm(&lie.inv_tangent_so3(&s)?) - inv_tangent_series(&x, n)).amax();
        bump(&mut worst, 11, e1.max(e2).max(e3));
        let tw = Twist::new(rand_vec(&mut rng, 0.0, 2.0), s);
        bump(&mut worst, 12, (dm(&lie.exp_se3(&tw).to_homogeneous()) - exp_series(&hat_se3(&tw), n)).amax());
    }
    let names: [(&str, f64); 13] = [
        ("so3 log(exp(psi)) = psi", cfg.round_trip_tol),
        ("so3 exp(log(A)) = A", cfg.round_trip_tol),
        ("se3 log(exp(theta)) = theta", cfg.round_trip_tol),
        ("T(psi) T^-1(psi) = I", cfg.identity_tol),
        ("T(-psi) = T(psi)^T", cfg.identity_tol),
        ("d exp_so3 vs finite differences", cfg.derivative_rel_tol),
        ("d T vs finite differences", cfg.derivative_rel_tol),
        ("d T^-1 vs finite differences", cfg.derivative_rel_tol),
        ("d log_so3 vs finite differences", cfg.derivative_rel_tol),
        ("d exp_se3 vs finite differences", cfg.derivative_rel_tol),
        ("d log_se3 vs finite differences", cfg.derivative_rel_tol),
        ("so3 exp, T, T^-1 vs series", cfg.series_tol),
        ("se3 exp vs series", cfg.series_tol),
    ];
    let checks = names
        .iter()
        .zip(worst)
        .map(|(&(name, tolerance), max_error)| Check { name, max_error, tolerance })
        .collect();
    Ok(SelftestReport { checks, samples: cfg.samples, seconds: start.elapsed().as_secs_f64() })
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn write(&self, dir: &Path) -> BenchResult<()> {
        let mut t = Table::labeled("check", &["max_error [-]", "tolerance [-]", "passed [-]"]);
        for c in &self.checks {
            t.push_labeled(c.name, vec![c.max_error, c.tolerance, if c.passed() { 1.0 } else { 0.0 }]);
        }
        t.write(&dir.join("liegroup_selftest.csv"))
    }

    pub fn summary(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .checks
            .iter()
            .map(|c| {
                format!("{} {}: {:.3e} (tol {:.0e})", if c.passed() { "PASS" } else { "FAIL" }, c.name, c.max_error, c.tolerance)
            })
            .collect();
        out.push(format!("{} samples per check, {:.2} s", self.samples, self.seconds));
        out
    }
}
