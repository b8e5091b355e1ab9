//! Band matrix storage with a partial-pivoting LU solve.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Square matrix with `kl` sub- and `ku` super-diagonals.
#[derive(Clone, Debug, PartialEq)]
pub struct BandMatrix<T: Scalar> {
    n: usize,
    kl: usize,
    ku: usize,
    /// Row-major band with room for `kl` extra super-diagonals of pivoting fill.
    data: Vec<T>,
}

impl<T: Scalar> BandMatrix<T> {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self { n, kl, ku, data: vec![T::zero(); n * (2 * kl + ku + 1)] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn width(&self) -> usize {
        2 * self.kl + self.ku + 1
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width() + (j + self.kl - i)
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.kl >= i && j <= i + self.ku
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        if self.in_band(i, j) {
            self.data[self.idx(i, j)]
        } else {
            T::zero()
        }
    }

    pub fn add(&mut self, i: usize, j: usize, v: T) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band");
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band");
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    fn cols(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.kl)..(i + self.ku + 1).min(self.n)
    }

    /// Replaces row and column `i` by the unit vector (eliminated degree of freedom).
    pub fn constrain(&mut self, i: usize) {
        for j in self.cols(i) {
            self.set(i, j, T::zero());
            self.set(j, i, T::zero());
        }
        self.set(i, i, T::one());
    }

    pub fn scale(&mut self, s: T) {
        for v in &mut self.data {
            *v *= s;
        }
    }

    /// `self += s * other` for matrices of identical shape.
    pub fn axpy(&mut self, s: T, other: &Self) {
        assert!(self.n == other.n && self.kl == other.kl && self.ku == other.ku);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * *b;
        }
    }

    pub fn mul_vec(&self, x: &DVector<T>) -> DVector<T> {
        DVector::from_fn(self.n, |i, _| {
            let mut s = T::zero();
            for j in self.cols(i) {
                s += self.get(i, j) * x[j];
            }
            s
        })
    }

    pub fn to_dense(&self) -> DMatrix<T> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn lu(&self) -> Result<BandLu<T>> {
        let (n, kl) = (self.n, self.kl);
        let ku2 = self.ku + kl;
        let mut a = self.clone();
        let mut piv = vec![0usize; n];
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = a.data[a.idx(k, k)].abs();
            for i in k + 1..=last {
                let v = a.data[a.idx(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == T::zero() || !best.is_finite() {
                return Err(Error::SingularSystem);
            }
            piv[k] = p;
            let jmax = (k + ku2).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let (ik, ip) = (a.idx(k, j), a.idx(p, j));
                    a.data.swap(ik, ip);
                }
            }
            let d = a.data[a.idx(k, k)];
            for i in k + 1..=last {
                let ik = a.idx(i, k);
                let l = a.data[ik] / d;
                a.data[ik] = l;
                if l != T::zero() {
                    for j in k + 1..=jmax {
                        let (ij, kj) = (a.idx(i, j), a.idx(k, j));
                        let v = a.data[kj];
                        a.data[ij] -= l * v;
                    }
                }
            }
        }
        Ok(BandLu { a, piv })
    }

    pub fn solve(&self, b: &DVector<T>) -> Result<DVector<T>> {
        Ok(self.lu()?.solve(b))
    }
}

/// Factorisation produced by [`BandMatrix::lu`].
#[derive(Clone, Debug)]
pub struct BandLu<T: Scalar> {
    a: BandMatrix<T>,
    piv: Vec<usize>,
}

impl<T: Scalar> BandLu<T> {
    pub fn solve(&self, b: &DVector<T>) -> DVector<T> {
        let a = &self.a;
        let (n, kl) = (a.n, a.kl);
        let ku2 = a.ku + kl;
        let mut x = b.clone();
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                x.swap_rows(k, p);
            }
            let xk = x[k];
            for i in k + 1..=(k + kl).min(n - 1) {
                x[i] -= a.data[a.idx(i, k)] * xk;
            }
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..=(i + ku2).min(n - 1) {
                s -= a.data[a.idx(i, j)] * x[j];
            }
            x[i] = s / a.data[a.idx(i, i)];
        }
        x
    }
}
