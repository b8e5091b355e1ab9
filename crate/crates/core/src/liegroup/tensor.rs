use std::ops::{Index, IndexMut};

use nalgebra::SMatrix;

use crate::scalar::Scalar;

/// Dense third order tensor stored as `data[i][j][k]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tensor3<T, const I: usize, const J: usize, const K: usize> {
    pub data: [[[T; K]; J]; I],
}

impl<T: Scalar, const I: usize, const J: usize, const K: usize> Tensor3<T, I, J, K> {
    pub fn zeros() -> Self {
        Self { data: [[[T::zero(); K]; J]; I] }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut t = Self::zeros();
        for i in 0..I {
            for j in 0..J {
                for k in 0..K {
                    t.data[i][j][k] = f(i, j, k);
                }
            }
        }
        t
    }

    /// The `I x J` matrix obtained by fixing the last index.
    pub fn slice(&self, k: usize) -> SMatrix<T, I, J> {
        SMatrix::from_fn(|i, j| self.data[i][j][k])
    }

    /// Contraction over the last index, `sum_k t[i][j][k] x[k]`.
    pub fn contract(&self, x: &[T; K]) -> SMatrix<T, I, J> {
        SMatrix::from_fn(|i, j| {
            let mut s = T::zero();
            for k in 0..K {
                s += self.data[i][j][k] * x[k];
            }
            s
        })
    }

    pub fn max_abs(&self) -> T {
        let mut m = T::zero();
        for i in 0..I {
            for j in 0..J {
                for k in 0..K {
                    m = m.max(self.data[i][j][k].abs());
                }
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut m = T::zero();
        for i in 0..I {
            for j in 0..J {
                for k in 0..K {
                    m = m.max((self.data[i][j][k] - other.data[i][j][k]).abs());
                }
            }
        }
        m
    }
}

impl<T, const I: usize, const J: usize, const K: usize> Index<(usize, usize, usize)>
    for Tensor3<T, I, J, K>
{
    type Output = T;
    fn index(&self, (i, j, k): (usize, usize, usize)) -> &T {
        &self.data[i][j][k]
    }
}

impl<T, const I: usize, const J: usize, const K: usize> IndexMut<(usize, usize, usize)>
    for Tensor3<T, I, J, K>
{
    fn index_mut(&mut self, (i, j, k): (usize, usize, usize)) -> &mut T {
        &mut self.data[i][j][k]
    }
}

/// Levi-Civita symbol.
#[inline]
pub fn levi_civita<T: Scalar>(i: usize, j: usize, k: usize) -> T {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => T::one(),
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -T::one(),
        _ => T::zero(),
    }
}
