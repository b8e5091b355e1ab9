//! Truncated power series for exp, dexp, dexp^-1 and the tangent maps.
//!
//! Reference implementations for testing the closed forms; slow and not used by the solver.

use nalgebra::{DMatrix, Vector3};

use super::se3::Twist;
use super::so3::skew;
use crate::scalar::{from_usize, lit, Scalar};

/// Bernoulli numbers `B_0 ..= B_36` with `B_1 = -1/2`; odd entries above one vanish.
const BERNOULLI_EVEN: [f64; 19] = [
    1.0,
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
];

/// Largest index with a tabulated Bernoulli number.
pub const MAX_BERNOULLI_INDEX: usize = 36;

pub fn bernoulli<T: Scalar>(n: usize) -> T {
    match n {
        1 => lit(-0.5),
        n if n % 2 == 1 => T::zero(),
        n if n <= MAX_BERNOULLI_INDEX => lit(BERNOULLI_EVEN[n / 2]),
        _ => panic!("bernoulli number B_{n} not tabulated"),
    }
}

fn ad<T: Scalar>(x: &DMatrix<T>, y: &DMatrix<T>) -> DMatrix<T> {
    x * y - y * x
}

/// `sum_{i<terms} x^i / i!`
pub fn exp_series<T: Scalar>(x: &DMatrix<T>, terms: usize) -> DMatrix<T> {
    let n = x.nrows();
    let mut term = DMatrix::identity(n, n);
    let mut sum = term.clone();
    for i in 1..terms {
        term = &term * x / from_usize::<T>(i);
        sum += &term;
    }
    sum
}

/// `sum_{i<terms} ad_x^i(y) / (i+1)!`
pub fn dexp_series<T: Scalar>(x: &DMatrix<T>, y: &DMatrix<T>, terms: usize) -> DMatrix<T> {
    let mut term = y.clone();
    let mut sum = y.clone();
    for i in 1..terms {
        term = ad(x, &term) / from_usize::<T>(i + 1);
        sum += &term;
    }
    sum
}

/// `sum_{i<terms} B_i / i! ad_x^i(y)`
pub fn dexp_inv_series<T: Scalar>(x: &DMatrix<T>, y: &DMatrix<T>, terms: usize) -> DMatrix<T> {
    let mut pow = y.clone();
    let mut fact = T::one();
    let mut sum = y.clone();
    for i in 1..terms {
        pow = ad(x, &pow);
        fact *= from_usize::<T>(i);
        let b: T = bernoulli(i);
        if b != T::zero() {
            sum += &pow * (b / fact);
        }
    }
    sum
}

/// `sum_{i<terms} (-1)^i / (i+1)! b^i` for a boxed algebra element `b`.
pub fn tangent_series<T: Scalar>(b: &DMatrix<T>, terms: usize) -> DMatrix<T> {
    let n = b.nrows();
    let mut pow = DMatrix::identity(n, n);
    let mut sum = pow.clone();
    let mut coef = T::one();
    for i in 1..terms {
        pow = &pow * b;
        coef = -coef / from_usize::<T>(i + 1);
        sum += &pow * coef;
    }
    sum
}

/// `sum_{i<terms} (-1)^i B_i / i! b^i`
pub fn inv_tangent_series<T: Scalar>(b: &DMatrix<T>, terms: usize) -> DMatrix<T> {
    let n = b.nrows();
    let mut pow = DMatrix::identity(n, n);
    let mut sum = pow.clone();
    let mut fact = T::one();
    for i in 1..terms {
        pow = &pow * b;
        fact *= from_usize::<T>(i);
        let sign = if i % 2 == 0 { T::one() } else { -T::one() };
        let bi: T = bernoulli(i);
        if bi != T::zero() {
            sum += &pow * (sign * bi / fact);
        }
    }
    sum
}

/// so(3) element as a 3x3 matrix.
pub fn hat_so3<T: Scalar>(w: &Vector3<T>) -> DMatrix<T> {
    DMatrix::from_fn(3, 3, |i, j| skew(w)[(i, j)])
}

/// se(3) element as a 4x4 matrix.
pub fn hat_se3<T: Scalar>(theta: &Twist<T>) -> DMatrix<T> {
    let w = skew(&theta.omega);
    DMatrix::from_fn(4, 4, |i, j| match (i, j) {
        (3, _) => T::zero(),
        (i, 3) => theta.v[i],
        (i, j) => w[(i, j)],
    })
}

/// Matrix of `ad_theta` acting on `(v, omega)` coordinates.
pub fn box_se3<T: Scalar>(theta: &Twist<T>) -> DMatrix<T> {
    let w = skew(&theta.omega);
    let v = skew(&theta.v);
    DMatrix::from_fn(6, 6, |i, j| match (i < 3, j < 3) {
        (true, true) => w[(i, j)],
        (true, false) => v[(i, j - 3)],
        (false, true) => T::zero(),
        (false, false) => w[(i - 3, j - 3)],
    })
}
