use std::f64::consts::PI;

use nalgebra::{DVector, Matrix3, Vector3};
use rodsim_core::assembly::*;
use rodsim_core::rodcore::*;
use rodsim_core::solvers::*;
use rodsim_core::Result;

/// `y' = A y` for a fixed matrix.
struct Linear(nalgebra::DMatrix<f64>);

impl OdeSystem<f64> for Linear {
    fn dim(&self) -> usize {
        self.0.nrows()
    }
    fn rhs(&self, _t: f64, y: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(&self.0 * y)
    }
}

fn oscillator() -> (Linear, DVector<f64>) {
    let a = nalgebra::DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, -4.0, -0.1, 0.0, 0.0, 0.0, -0.5]);
    (Linear(a), DVector::from_vec(vec![1.0, 0.0, 2.0]))
}

fn exact(t: f64) -> DVector<f64> {
    let (sys, y0) = oscillator();
    (sys.0 * t).exp() * y0
}

#[test]
fn gen_alpha_parameters_for_rho_09() {
    let (am, af, g) = gen_alpha_parameters(0.9f64);
    assert!((am - 0.5 * 2.1 / 1.9).abs() < 1e-15);
    assert!((af - 1.0 / 1.9).abs() < 1e-15);
    assert!((g - (0.5 + am - af)).abs() < 1e-15);
}

#[test]
fn gen_alpha_is_second_order() {
    let (sys, y0) = oscillator();
    let mut errs = Vec::new();
    for h in [0.02, 0.01, 0.005] {
        let s = GenAlphaSettings { h, ..Default::default() };
        let (y, _) = integrate_gen_alpha(&sys, 0.0, &y0, 2.0, &s, &[], |_, _| {}).unwrap();
        errs.push((y - exact(2.0)).amax());
    }
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 2.0).abs() < 0.1, "observed order {order}");
    }
}

#[test]
fn rk45_meets_tolerance_and_hits_outputs() {
    let (sys, y0) = oscillator();
    let outputs: Vec<f64> = (1..=10).map(|i| 0.3 * i as f64).collect();
    let mut seen = Vec::new();
    let s = RkSettings { atol: 1e-10, rtol: 1e-10, ..Default::default() };
    let (y, stats) = integrate_rk45(&sys, 0.0, &y0, 3.0, &s, &outputs, |t, y| seen.push((t, y.clone()))).unwrap();
    assert!((y - exact(3.0)).amax() < 1e-8);
    assert_eq!(seen.len(), 11);
    for (t, y) in &seen[1..] {
        assert!((y - exact(*t)).amax() < 1e-8);
    }
    assert!(stats.accepted > 10);
}

fn straight_rod(n_el: usize, length: f64) -> (RodModel<f64>, DVector<f64>) {
    let law = ConstitutiveLaw::diagonal(1e4, 5e3, 10.0, 8.0);
    let inertia = CrossSectionInertia::centroidal(1.0, Matrix3::from_diagonal(&Vector3::new(0.02, 0.01, 0.01)));
    let model = RodModel::new(Mesh::uniform(n_el, length), law, inertia);
    let mut q = DVector::zeros(model.n_dofs());
    for i in 0..model.n_nodes() {
        NodalCoords::new(Vector3::new(length * model.mesh.xi[i], 0.0, 0.0), Vector3::zeros()).write_global(&mut q, i);
    }
    (model, q)
}

#[test]
fn pure_bending_rolls_into_exact_half_circle() {
    let length = 2.0;
    let (model, q0) = straight_rod(4, length);
    let kb = 10.0;
    let moment = PI * kb / length;
    let loads = LoadSpec::none().with_tip_moment(move |t, _| Vector3::new(0.0, 0.0, t * moment));
    let bcs = vec![BoundaryCondition::clamp(0)];
    let settings = StaticSettings { increments: 10, atol: 1e-9, max_iterations: 20, extrapolate: true, max_cutbacks: 0 };
    let (q, hist) = solve_static(&model, &q0, &loads, &bcs, &settings, |_, _| {}).unwrap();
    let radius = length / PI;
    for i in 0..model.n_nodes() {
        let s = length * model.mesh.xi[i];
        let r = NodalCoords::from_global(&q, i).r;
        let expected = Vector3::new(radius * (s / radius).sin(), radius * (1.0 - (s / radius).cos()), 0.0);
        assert!((r - expected).amax() < 1e-10, "node {i}: {r:?} vs {expected:?}");
    }
    assert!(hist.iter().all(|h| h.iterations <= 6), "{hist:?}");
}

#[test]
fn cutback_recovers_a_step_newton_cannot_take() {
    let length = 2.0;
    let (model, q0) = straight_rod(4, length);
    let moment = 1.8 * PI * 10.0 / length;
    let loads = LoadSpec::none().with_tip_moment(move |t, _| Vector3::new(0.0, 0.0, t * moment));
    let bcs = vec![BoundaryCondition::clamp(0)];
    let plain = StaticSettings { increments: 1, atol: 1e-9, max_iterations: 8, extrapolate: false, max_cutbacks: 0 };
    assert!(solve_static(&model, &q0, &loads, &bcs, &plain, |_, _| {}).is_err());
    let settings = StaticSettings { max_cutbacks: 6, ..plain };
    let (q, hist) = solve_static(&model, &q0, &loads, &bcs, &settings, |_, _| {}).unwrap();
    assert_eq!(hist.len(), 1);
    assert!(hist[0].substeps > 1);
    let radius = length / (1.8 * PI);
    let tip = NodalCoords::from_global(&q, 4).r;
    let expected = Vector3::new(radius * (1.8 * PI).sin(), radius * (1.0 - (1.8 * PI).cos()), 0.0);
    assert!((tip - expected).amax() < 1e-9, "{tip:?}");
}

#[test]
fn newton_converges_quadratically_with_follower_force() {
    let (model, q0) = straight_rod(8, 1.0);
    let loads = LoadSpec::none()
        .with_tip_force(|t, h| h.rotation * Vector3::new(0.0, 5.0 * t, 2.0 * t))
        .with_tip_moment(|t, _| Vector3::new(0.5 * t, 0.0, 3.0 * t));
    let bcs = vec![BoundaryCondition::clamp(0)];
    let settings = StaticSettings { increments: 5, atol: 1e-10, max_iterations: 12, extrapolate: true, max_cutbacks: 0 };
    let (_, hist) = solve_static(&model, &q0, &loads, &bcs, &settings, |_, _| {}).unwrap();
    assert!(hist.iter().all(|h| h.iterations <= 6), "{hist:?}");
}

#[test]
fn free_rod_conserves_linear_momentum() {
    let (model, q0) = straight_rod(3, 1.0);
    let n = model.n_dofs();
    let mut u0 = DVector::zeros(n);
    for i in 0..model.n_nodes() {
        u0[6 * i + 1] = 0.3 * i as f64 - 0.2;
        u0[6 * i + 3] = 2.0;
        u0[6 * i + 5] = 0.5 - 0.1 * i as f64;
    }
    let sys = RodDynamics::new(model, LoadSpec::none(), vec![]);
    let y0 = sys.initial_state(0.0, &q0, &u0);
    let s = RkSettings { atol: 1e-10, rtol: 1e-10, ..Default::default() };
    let mut diag = Vec::new();
    integrate_rk45(&sys, 0.0, &y0, 0.5, &s, &[0.1, 0.2, 0.3, 0.4, 0.5], |_, y| {
        let (q, u) = sys.split(y);
        diag.push(sys.model.diagnostics(&q, &u).unwrap());
    })
    .unwrap();
    let l0 = diag[0].linear_momentum;
    for d in &diag {
        assert!((d.linear_momentum - l0).amax() < 1e-8 * l0.amax().max(1.0));
    }
}
