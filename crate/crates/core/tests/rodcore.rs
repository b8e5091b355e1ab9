use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DVector, Matrix3, Vector3};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rodsim_core::liegroup::*;
use rodsim_core::rodcore::*;

fn lie() -> LieConfig<f64> {
    LieConfig::default()
}

/// Helix with `n` coils: centreline and Serret-Frenet type frame at `xi`.
fn helix(xi: f64) -> (Vector3<f64>, Matrix3<f64>, f64, f64) {
    let (n, r0, h) = (2.0, 10.0, 50.0);
    let c = h / (2.0 * PI * n * r0);
    let a = 2.0 * PI * n * xi;
    let s = (1.0 + c * c).sqrt();
    let r = Vector3::new(a.sin(), -a.cos(), c * a) * r0;
    let ex = Vector3::new(a.cos(), a.sin(), c) / s;
    let ey = Vector3::new(-a.sin(), a.cos(), 0.0);
    let ez = Vector3::new(-c * a.cos(), -c * a.sin(), 1.0) / s;
    let length = s * r0 * 2.0 * PI * n;
    (r, Matrix3::from_columns(&[ex, ey, ez]), c, length)
}

#[test]
fn helix_nodes_give_exact_strains() {
    let n_el = 5;
    let (_, _, c, length) = helix(0.0);
    let mesh = Mesh::uniform(n_el, length);
    let alpha_xi = 4.0 * PI;
    let kappa = Vector3::new(c, 0.0, 1.0) * (10.0 * alpha_xi * alpha_xi / (length * length));
    for e in 0..n_el {
        let g = mesh.element(e);
        let (r0, a0, _, _) = helix(g.xi0);
        let (r1, a1, _, _) = helix(g.xi1);
        let n0 = NodalCoords::from_pose(&lie(), &Pose::new(a0, r0)).unwrap();
        let n1 = NodalCoords::from_pose(&lie(), &Pose::new(a1, r1)).unwrap();
        let k = ElementKinematics::new(&lie(), g, n0, n1).unwrap();
        let s = k.strains();
        assert!((s.gamma - Vector3::x()).amax() < 1e-10, "{:?}", s.gamma);
        assert!((s.kappa - kappa).amax() < 1e-10, "{:?} vs {kappa:?}", s.kappa);
        // interpolated centreline and frame reproduce the helix inside the element
        for xi in [0.25, 0.5, 0.75].map(|t| g.xi0 + t * g.delta()) {
            let (r, a, _, _) = helix(xi);
            let p = k.pose_at(&lie(), xi);
            assert!((p.translation - r).amax() < 1e-9);
            assert!((p.rotation - a).amax() < 1e-10);
        }
    }
}

fn quarter_circle() -> ElementKinematics<f64> {
    let geom = ElementGeometry { xi0: 0.0, xi1: 1.0, j: FRAC_PI_2 };
    let n0 = NodalCoords::new(Vector3::zeros(), Vector3::new(0.0, -FRAC_PI_2, 0.0));
    let n1 = NodalCoords::new(Vector3::new(1.0, 0.0, 1.0), Vector3::zeros());
    ElementKinematics::new(&lie(), geom, n0, n1).unwrap()
}

/// Strains from a central difference of the interpolated pose in `xi`.
fn strain_by_differences(k: &ElementKinematics<f64>, xi: f64) -> (Vector3<f64>, Vector3<f64>) {
    let h = 1e-6;
    let p = k.pose_at(&lie(), xi);
    let dp = (k.pose_at(&lie(), xi + h).to_homogeneous() - k.pose_at(&lie(), xi - h).to_homogeneous())
        / (2.0 * h);
    let x = p.inverse().to_homogeneous() * dp / k.geom.j;
    let w = Matrix3::from_fn(|i, j| x[(i, j)]);
    (Vector3::new(x[(0, 3)], x[(1, 3)], x[(2, 3)]), vee(&w).unwrap())
}

#[test]
fn quarter_circle_strains_are_constant() {
    let k = quarter_circle();
    let s = k.strains();
    assert!((s.gamma - Vector3::x()).amax() < 1e-12);
    assert!((s.kappa - Vector3::y()).amax() < 1e-12);
    for i in 1..20 {
        let xi = i as f64 / 20.0;
        let (g, kap) = strain_by_differences(&k, xi);
        assert!((g - s.gamma).amax() < 1e-8);
        assert!((kap - s.kappa).amax() < 1e-8);
        // points lie on the unit circle about (1, 0, 0)
        let p = k.pose_at(&lie(), xi).translation;
        assert!(((p - Vector3::new(1.0, 0.0, 0.0)).norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn symmetric_interpolation_agrees_with_node_zero_interpolation() {
    let k = quarter_circle();
    for i in 0..=10 {
        let xi = i as f64 / 10.0;
        let a = k.pose_at(&lie(), xi);
        let b = interpolate_pose_symmetric(&lie(), &k.h0, &k.h1, &k.geom, xi).unwrap();
        assert!((a.to_homogeneous() - b.to_homogeneous()).amax() < 1e-12);
    }
}

fn random_element(rng: &mut ChaCha8Rng) -> ElementKinematics<f64> {
    let mut v = |s: f64| Vector3::new(rng.gen_range(-s..s), rng.gen_range(-s..s), rng.gen_range(-s..s));
    let geom = ElementGeometry { xi0: 0.2, xi1: 0.45, j: 3.0 };
    let n0 = NodalCoords::new(v(1.0), v(1.2));
    let n1 = NodalCoords::new(n0.r + Vector3::new(0.7, 0.1, -0.2) + v(0.2), n0.psi + v(0.6));
    ElementKinematics::new(&lie(), geom, n0, n1).unwrap()
}

fn perturbed(k: &ElementKinematics<f64>, m: usize, h: f64) -> ElementKinematics<f64> {
    let mut q = DVector::zeros(12);
    k.nodes[0].write_global(&mut q, 0);
    k.nodes[1].write_global(&mut q, 1);
    q[m] += h;
    ElementKinematics::new(&lie(), k.geom, NodalCoords::from_global(&q, 0), NodalCoords::from_global(&q, 1))
        .unwrap()
}

#[test]
fn strain_jacobian_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = 1e-6;
    for _ in 0..20 {
        let k = random_element(&mut rng);
        let jac = k.strain_jacobian(&lie()).unwrap();
        for m in 0..12 {
            let p = perturbed(&k, m, h).strains();
            let n = perturbed(&k, m, -h).strains();
            for i in 0..3 {
                let fd_g: f64 = (p.gamma[i] - n.gamma[i]) / (2.0 * h);
                let fd_k: f64 = (p.kappa[i] - n.kappa[i]) / (2.0 * h);
                assert!((jac[(i, m)] - fd_g).abs() < 1e-7 * fd_g.abs().max(1.0));
                assert!((jac[(i + 3, m)] - fd_k).abs() < 1e-7 * fd_k.abs().max(1.0));
            }
        }
    }
}

#[test]
fn pose_jacobian_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let h = 1e-6;
    for _ in 0..10 {
        let k = random_element(&mut rng);
        let xi = 0.3;
        let jac = k.pose_jacobian(&lie(), xi).unwrap();
        for m in 0..12 {
            let fd = (perturbed(&k, m, h).pose_at(&lie(), xi).to_homogeneous()
                - perturbed(&k, m, -h).pose_at(&lie(), xi).to_homogeneous())
                / (2.0 * h);
            for i in 0..4 {
                for j in 0..4 {
                    assert!((jac[(i, j, m)] - fd[(i, j)]).abs() < 1e-7);
                }
            }
        }
    }
}

#[test]
fn strains_invariant_under_rigid_motion() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let k = random_element(&mut rng);
    let g = Pose::new(exp_so3(&Vector3::new(0.4, -1.0, 2.0)), Vector3::new(5.0, -3.0, 1.0));
    let moved: Vec<_> = [k.h0, k.h1]
        .iter()
        .map(|h| NodalCoords::from_pose(&lie(), &(g * *h)).unwrap())
        .collect();
    let k2 = ElementKinematics::new(&lie(), k.geom, moved[0], moved[1]).unwrap();
    let (a, b) = (k.strains(), k2.strains());
    assert!((a.gamma - b.gamma).amax() < 1e-12);
    assert!((a.kappa - b.kappa).amax() < 1e-12);
}

#[test]
fn kinematic_map_converts_angular_velocity() {
    let psi = Vector3::new(0.3, 1.1, -0.8);
    let omega = Vector3::new(0.2, -0.5, 1.0);
    let b = nodal_kinematic_map(&lie(), &psi).unwrap();
    let psi_dot = b.fixed_view::<3, 3>(3, 3) * omega;
    // A^T dA/dt = skew(omega)
    let h = 1e-6;
    let da = (exp_so3(&(psi + psi_dot * h)) - exp_so3(&(psi - psi_dot * h))) / (2.0 * h);
    assert!((exp_so3(&psi).transpose() * da - skew(&omega)).amax() < 1e-8);
}

#[test]
fn complement_update_examples() {
    let psi = Vector3::new(1.5 * PI, 0.0, 0.0);
    assert!((complement_update(&psi) - Vector3::new(-0.5 * PI, 0.0, 0.0)).amax() < 1e-15);
    let small = Vector3::new(0.1, 0.2, 0.3);
    assert_eq!(complement_update(&small), small);
    let big = Vector3::new(0.0, 0.0, 20.0 * PI + 0.3);
    assert!((wrap_rotation_vector(&big) - Vector3::new(0.0, 0.0, 0.3)).amax() < 1e-12);
}

#[test]
fn complement_jacobian_matches_finite_differences() {
    let psi = Vector3::new(2.0, -2.5, 1.0);
    let j: Matrix3<f64> = complement_jacobian(&psi);
    let h = 1e-6;
    for k in 0..3 {
        let mut p = psi;
        let mut m = psi;
        p[k] += h;
        m[k] -= h;
        let d: Vector3<f64> = (complement_update(&p) - complement_update(&m)) / (2.0 * h);
        for i in 0..3 {
            assert!((j[(i, k)] - d[i]).abs() < 1e-8);
        }
    }
}

proptest! {
    #[test]
    fn prop_complement_preserves_rotation(x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0, s in 3.2f64..6.2) {
        let v = Vector3::new(x, y, z);
        prop_assume!(v.norm() > 1e-2);
        let psi = v / v.norm() * s;
        let c = complement_update(&psi);
        prop_assert!(c.norm() <= PI + 1e-12);
        prop_assert!((exp_so3(&c) - exp_so3(&psi)).amax() < 1e-12);
    }
}
