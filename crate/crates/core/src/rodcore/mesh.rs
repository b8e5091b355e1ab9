use crate::scalar::{from_usize, Scalar};

/// Partition of the reference interval `[0, 1]` with one reference length `J` per element.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh<T: Scalar> {
    pub xi: Vec<T>,
    pub j: Vec<T>,
}

/// Parameter range and reference length of a single element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElementGeometry<T: Scalar> {
    pub xi0: T,
    pub xi1: T,
    pub j: T,
}

impl<T: Scalar> Mesh<T> {
    /// Equidistant mesh of a straight reference configuration of given length.
    pub fn uniform(n_el: usize, length: T) -> Self {
        assert!(n_el > 0, "mesh needs at least one element");
        let xi = (0..=n_el).map(|i| from_usize::<T>(i) / from_usize::<T>(n_el)).collect();
        Self { xi, j: vec![length; n_el] }
    }

    /// Arbitrary breakpoints with `J` sampled from `j_of_xi` at element midpoints.
    pub fn with_reference_length(xi: Vec<T>, j_of_xi: impl Fn(T) -> T) -> Self {
        assert!(xi.len() >= 2, "mesh needs at least one element");
        let j = xi.windows(2).map(|w| j_of_xi((w[0] + w[1]) * super::nodal::half())).collect();
        Self { xi, j }
    }

    pub fn n_elements(&self) -> usize {
        self.j.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.xi.len()
    }

    pub fn element(&self, e: usize) -> ElementGeometry<T> {
        ElementGeometry { xi0: self.xi[e], xi1: self.xi[e + 1], j: self.j[e] }
    }

    /// Element containing `xi` (the last element owns the right end point).
    pub fn locate(&self, xi: T) -> usize {
        let n = self.n_elements();
        (0..n).find(|&e| xi < self.xi[e + 1]).unwrap_or(n - 1)
    }

    /// Total reference length `sum J * dxi`.
    pub fn length(&self) -> T {
        (0..self.n_elements()).fold(T::zero(), |s, e| s + self.element(e).length())
    }
}

impl<T: Scalar> ElementGeometry<T> {
    pub fn delta(&self) -> T {
        self.xi1 - self.xi0
    }

    pub fn length(&self) -> T {
        self.delta() * self.j
    }

    /// Linear shape functions `(N0, N1)` at `xi`.
    pub fn shape(&self, xi: T) -> (T, T) {
        let n1 = (xi - self.xi0) / self.delta();
        (T::one() - n1, n1)
    }

    /// Shape function derivatives `(N0', N1')` with respect to `xi`.
    pub fn shape_derivative(&self) -> (T, T) {
        let d = T::one() / self.delta();
        (-d, d)
    }
}
