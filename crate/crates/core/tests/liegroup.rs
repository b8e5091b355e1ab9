use nalgebra::{DMatrix, Matrix3, Vector3};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rodsim_core::liegroup::series::*;
use rodsim_core::liegroup::*;
use rodsim_core::Error;

fn rand_vec(rng: &mut ChaCha8Rng, max_norm: f64) -> Vector3<f64> {
    loop {
        let v = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v * (max_norm * rng.gen_range(0.05..1.0) / n);
        }
    }
}

fn dm3(m: &Matrix3<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(3, 3, |i, j| m[(i, j)])
}

fn max_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

/// Central difference of a matrix valued function of a vector.
fn fd_vec<F: Fn(&Vector3<f64>) -> Matrix3<f64>>(f: F, x: &Vector3<f64>, h: f64) -> Tensor3<f64, 3, 3, 3> {
    let mut t = Tensor3::zeros();
    for k in 0..3 {
        let mut p = *x;
        let mut m = *x;
        p[k] += h;
        m[k] -= h;
        let d = (f(&p) - f(&m)) / (2.0 * h);
        for i in 0..3 {
            for j in 0..3 {
                t[(i, j, k)] = d[(i, j)];
            }
        }
    }
    t
}

fn rel_err<const I: usize, const J: usize, const K: usize>(
    a: &Tensor3<f64, I, J, K>,
    b: &Tensor3<f64, I, J, K>,
) -> f64 {
    a.max_abs_diff(b) / b.max_abs().max(1.0)
}

#[test]
fn skew_matches_cross_product() {
    let a = Vector3::new(0.3, -1.2, 2.0);
    let b = Vector3::new(-0.7, 0.4, 1.1);
    assert!((skew(&a) * b - a.cross(&b)).amax() < 1e-15);
    assert_eq!(vee(&skew(&a)).unwrap(), a);
    assert!(matches!(vee(&Matrix3::<f64>::identity()), Err(Error::NonSkewInput(_))));
}

#[test]
fn exp_of_zero_is_identity() {
    assert_eq!(exp_so3(&Vector3::<f64>::zeros()), Matrix3::identity());
}

#[test]
fn exp_quarter_turn_about_z() {
    let a = exp_so3(&Vector3::new(0.0, 0.0, std::f64::consts::FRAC_PI_2));
    let expected = Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
    assert!((a - expected).amax() < 1e-15);
}

#[test]
fn log_near_pi_recovers_axis_angle() {
    let psi = Vector3::new(std::f64::consts::PI - 1e-3, 0.0, 0.0);
    let back = log_so3(&exp_so3(&psi)).unwrap();
    assert!((back - psi).amax() < 1e-7);
}

#[test]
fn log_at_pi_is_refused() {
    let a = exp_so3(&Vector3::new(0.0, std::f64::consts::PI, 0.0));
    assert!(matches!(log_so3(&a), Err(Error::AngleAtPi(_))));
    assert!(matches!(d_log_so3(&a), Err(Error::AngleAtPi(_))));
}

#[test]
fn inverse_tangent_singular_at_two_pi() {
    let psi = Vector3::new(0.0, 0.0, 2.0 * std::f64::consts::PI);
    assert!(matches!(inv_tangent_so3(&psi), Err(Error::TangentSingular(_))));
    let psi = Vector3::new(4.0 * std::f64::consts::PI, 0.0, 0.0);
    assert!(matches!(d_inv_tangent_so3(&psi), Err(Error::TangentSingular(_))));
}

#[test]
fn exp_log_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let psi = rand_vec(&mut rng, std::f64::consts::PI - 0.05);
        let back = log_so3(&exp_so3(&psi)).unwrap();
        assert!((back - psi).amax() < 1e-10, "{psi:?}");
        let a = exp_so3(&psi);
        assert!((a.transpose() * a - Matrix3::identity()).amax() < 1e-14);
        assert!((a.determinant() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn se3_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let theta = Twist::new(rand_vec(&mut rng, 5.0), rand_vec(&mut rng, 3.0));
        let back = log_se3(&exp_se3(&theta)).unwrap();
        assert!((back.to_vector() - theta.to_vector()).amax() < 1e-10);
    }
}

#[test]
fn tangent_transpose_identity_and_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let psi = rand_vec(&mut rng, 6.0);
        let t = tangent_so3(&psi);
        assert!((tangent_so3(&-psi) - t.transpose()).amax() < 1e-14);
        let ti = inv_tangent_so3(&psi).unwrap();
        assert!((t * ti - Matrix3::identity()).amax() < 1e-10);
    }
}

#[test]
fn tangent_is_right_trivialised_derivative_of_exp() {
    // Exp(psi)^T dExp(psi)/dpsi . delta = skew(T(psi) delta)
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let psi = rand_vec(&mut rng, 3.0);
        let delta = rand_vec(&mut rng, 1.0);
        let h = 1e-6;
        let d = (exp_so3(&(psi + delta * h)) - exp_so3(&(psi - delta * h))) / (2.0 * h);
        let lhs = exp_so3(&psi).transpose() * d;
        let rhs = skew(&(tangent_so3(&psi) * delta));
        assert!((lhs - rhs).amax() < 1e-8);
    }
}

#[test]
fn branch_switch_is_continuous() {
    // Both branches evaluated at the same point just above the switch.
    let closed = LieConfig::<f64>::default();
    let first = LieConfig { omega_crit: 100.0 * OMEGA_CRIT, ..closed };
    let psi = Vector3::new(0.48, -0.6, 0.64) * (10.0 * OMEGA_CRIT);
    let a = closed.exp_so3(&psi);
    assert!((a - first.exp_so3(&psi)).amax() < 1e-10);
    assert!((closed.tangent_so3(&psi) - first.tangent_so3(&psi)).amax() < 1e-10);
    let ti = closed.inv_tangent_so3(&psi).unwrap() - first.inv_tangent_so3(&psi).unwrap();
    assert!(ti.amax() < 1e-10);
    assert!((closed.log_so3(&a).unwrap() - first.log_so3(&a).unwrap()).amax() < 1e-10);
    // derivative tensors agree to first order in the angle
    assert!(closed.d_exp_so3(&psi).max_abs_diff(&first.d_exp_so3(&psi)) < 1e-4);
    assert!(closed.d_tangent_so3(&psi).max_abs_diff(&first.d_tangent_so3(&psi)) < 1e-4);
    let d = closed.d_inv_tangent_so3(&psi).unwrap().max_abs_diff(&first.d_inv_tangent_so3(&psi).unwrap());
    assert!(d < 1e-4);
    let d = closed.d_log_so3(&a).unwrap().max_abs_diff(&first.d_log_so3(&a).unwrap());
    assert!(d < 1e-4);
}

#[test]
fn d_log_at_identity_is_minus_half_levi_civita() {
    let d = d_log_so3(&Matrix3::<f64>::identity()).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                assert_eq!(d[(i, j, k)], -0.5 * levi_civita::<f64>(i, j, k));
            }
        }
    }
}

#[test]
fn so3_derivatives_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = 1e-6;
    for _ in 0..50 {
        let psi = rand_vec(&mut rng, 2.8);
        let fd = fd_vec(exp_so3, &psi, h);
        assert!(rel_err(&d_exp_so3(&psi), &fd) < 1e-8);
        let fd = fd_vec(tangent_so3, &psi, h);
        assert!(rel_err(&d_tangent_so3(&psi), &fd) < 1e-8);
        let fd = fd_vec(|x| inv_tangent_so3(x).unwrap(), &psi, h);
        assert!(rel_err(&d_inv_tangent_so3(&psi).unwrap(), &fd) < 1e-8);
    }
}

#[test]
fn d_log_matches_finite_differences_and_inverts_d_exp() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cfg = LieConfig::<f64>::default();
    let h = 1e-7;
    for _ in 0..50 {
        let psi = rand_vec(&mut rng, 2.8);
        let a = exp_so3(&psi);
        let d = d_log_so3(&a).unwrap();
        let mut fd = Tensor3::<f64, 3, 3, 3>::zeros();
        for j in 0..3 {
            for k in 0..3 {
                let mut p = a;
                let mut m = a;
                p[(j, k)] += h;
                m[(j, k)] -= h;
                let dl = (cfg.log_so3(&p).unwrap() - cfg.log_so3(&m).unwrap()) / (2.0 * h);
                for i in 0..3 {
                    fd[(i, j, k)] = dl[i];
                }
            }
        }
        assert!(rel_err(&d, &fd) < 1e-7);
        let de = d_exp_so3(&psi);
        for i in 0..3 {
            for l in 0..3 {
                let mut s = 0.0;
                for j in 0..3 {
                    for k in 0..3 {
                        s += d[(i, j, k)] * de[(j, k, l)];
                    }
                }
                let expected = if i == l { 1.0 } else { 0.0 };
                assert!((s - expected).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn se3_derivatives_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let h = 1e-6;
    for _ in 0..50 {
        let theta = Twist::new(rand_vec(&mut rng, 3.0), rand_vec(&mut rng, 2.8));
        let d = d_exp_se3(&theta);
        let mut fd = Tensor3::<f64, 4, 4, 6>::zeros();
        for k in 0..6 {
            let mut p = theta.to_vector();
            let mut m = p;
            p[k] += h;
            m[k] -= h;
            let dh = (exp_se3(&Twist::from_vector(&p)).to_homogeneous()
                - exp_se3(&Twist::from_vector(&m)).to_homogeneous())
                / (2.0 * h);
            for i in 0..4 {
                for j in 0..4 {
                    fd[(i, j, k)] = dh[(i, j)];
                }
            }
        }
        assert!(rel_err(&d, &fd) < 1e-8);

        let pose = exp_se3(&theta);
        let d = d_log_se3(&pose).unwrap();
        let mut fd = Tensor3::<f64, 6, 4, 4>::zeros();
        for j in 0..3 {
            for k in 0..4 {
                let mut p = pose.to_homogeneous();
                let mut m = p;
                p[(j, k)] += h;
                m[(j, k)] -= h;
                let dl = (log_se3(&Pose::from_homogeneous(&p)).unwrap().to_vector()
                    - log_se3(&Pose::from_homogeneous(&m)).unwrap().to_vector())
                    / (2.0 * h);
                for i in 0..6 {
                    fd[(i, j, k)] = dl[i];
                }
            }
        }
        assert!(rel_err(&d, &fd) < 1e-7);
    }
}

#[test]
fn closed_forms_match_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let terms = MAX_BERNOULLI_INDEX + 1;
    for _ in 0..50 {
        let psi = rand_vec(&mut rng, 2.0);
        let x = hat_so3(&psi);
        assert!(max_diff(&dm3(&exp_so3(&psi)), &exp_series(&x, terms)) < 1e-11);
        assert!(max_diff(&dm3(&tangent_so3(&psi)), &tangent_series(&x, terms)) < 1e-11);
        let ti = inv_tangent_so3(&psi).unwrap();
        assert!(max_diff(&dm3(&ti), &inv_tangent_series(&x, terms)) < 1e-11);

        let theta = Twist::new(rand_vec(&mut rng, 2.0), psi);
        let h = exp_se3(&theta).to_homogeneous();
        let hs = exp_series(&hat_se3(&theta), terms);
        assert!(max_diff(&DMatrix::from_fn(4, 4, |i, j| h[(i, j)]), &hs) < 1e-11);
    }
}

#[test]
fn dexp_series_inverse_composes_to_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let x = DMatrix::from_fn(4, 4, |_, _| rng.gen_range(-0.3..0.3));
        let y = DMatrix::from_fn(4, 4, |_, _| rng.gen_range(-1.0..1.0));
        let back = dexp_inv_series(&x, &dexp_series(&x, &y, 40), 37);
        assert!(max_diff(&back, &y) < 1e-11);
    }
}

#[test]
fn dexp_series_is_derivative_of_exp_series() {
    // d/dt exp(X + tY) at t = 0 equals exp(X) dexp_{-X}(Y)
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let x = DMatrix::from_fn(3, 3, |_, _| rng.gen_range(-0.5..0.5));
    let y = DMatrix::from_fn(3, 3, |_, _| rng.gen_range(-1.0..1.0));
    let h = 1e-6;
    let fd = (exp_series(&(&x + &y * h), 40) - exp_series(&(&x - &y * h), 40)) / (2.0 * h);
    let an = exp_series(&x, 40) * dexp_series(&(-&x), &y, 40);
    assert!(max_diff(&fd, &an) < 1e-8);
}

#[test]
fn single_precision_instantiation() {
    let psi = Vector3::new(0.3f32, -0.2, 0.9);
    let back = log_so3(&exp_so3(&psi)).unwrap();
    assert!((back - psi).amax() < 1e-5);
    let t = tangent_so3(&psi) * inv_tangent_so3(&psi).unwrap();
    assert!((t - Matrix3::identity()).amax() < 1e-5);
}

proptest! {
    #[test]
    fn prop_log_exp_inverse(x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0, s in 0.0f64..3.0) {
        let v = Vector3::new(x, y, z);
        prop_assume!(v.norm() > 1e-3);
        let psi = v / v.norm() * s;
        let back = log_so3(&exp_so3(&psi)).unwrap();
        prop_assert!((back - psi).amax() < 1e-9);
    }

    #[test]
    fn prop_exp_is_rotation(x in -10.0f64..10.0, y in -10.0f64..10.0, z in -10.0f64..10.0) {
        let a = exp_so3(&Vector3::new(x, y, z));
        prop_assert!((a.transpose() * a - Matrix3::identity()).amax() < 1e-13);
    }

    #[test]
    fn prop_pose_inverse(x in -3.0f64..3.0, y in -3.0f64..3.0, v in -5.0f64..5.0) {
        let p = exp_se3(&Twist::new(Vector3::new(v, 1.0, -v), Vector3::new(x, y, 0.5)));
        let e = p * p.inverse();
        prop_assert!((e.rotation - Matrix3::identity()).amax() < 1e-13);
        prop_assert!(e.translation.amax() < 1e-13);
    }
}
