use crate::error::Result;
use crate::linalg::{self, CoordinateSolver, Matrix, Vector};
use crate::scalar::Scalar;

use super::LieAlgebra;

/// Linear subspace of a coordinate space, stored as the nonzero rows of the
/// reduced row echelon form of its spanning set. Two subspaces are equal
/// exactly when their canonical bases are.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<S> {
    parent_dim: usize,
    basis: Vec<Vector<S>>,
}

impl<S: Scalar> Subspace<S> {
    pub fn span(parent_dim: usize, vectors: &[Vector<S>]) -> Self {
        let vectors: Vec<Vector<S>> = vectors.iter().filter(|v| !linalg::is_zero_vec(v)).cloned().collect();
        if vectors.is_empty() {
            return Self::zero(parent_dim);
        }
        let m = Matrix::from_rows(vectors);
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Self { parent_dim, basis }
    }

    pub fn zero(parent_dim: usize) -> Self {
        Self {
            parent_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(parent_dim: usize) -> Self {
        Self {
            parent_dim,
            basis: (0..parent_dim).map(|i| linalg::unit(parent_dim, i)).collect(),
        }
    }

    /// Span of the given coordinate axes.
    pub fn coordinate(parent_dim: usize, axes: &[usize]) -> Self {
        let v: Vec<Vector<S>> = axes.iter().map(|&i| linalg::unit(parent_dim, i)).collect();
        Self::span(parent_dim, &v)
    }

    pub fn parent_dim(&self) -> usize {
        self.parent_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.parent_dim
    }

    /// Canonical (echelon) basis.
    pub fn basis(&self) -> &[Vector<S>] {
        &self.basis
    }

    pub fn contains(&self, v: &[S]) -> bool {
        if linalg::is_zero_vec(v) {
            return true;
        }
        if self.basis.is_empty() {
            return !S::EXACT && v.iter().all(|x| x.negligible(1.0));
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows(rows).rank() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Self::span(self.parent_dim, &v)
    }

    pub fn with_vector(&self, v: &[S]) -> Self {
        let mut vs = self.basis.clone();
        vs.push(v.to_vec());
        Self::span(self.parent_dim, &vs)
    }

    /// Orthogonal complement with respect to the symmetric form `gram`.
    pub fn orthogonal_complement(&self, gram: &Matrix<S>) -> Self {
        if self.basis.is_empty() {
            return Self::full(self.parent_dim);
        }
        let rows: Vec<Vector<S>> = self.basis.iter().map(|b| gram.transpose().mul_vec(b)).collect();
        let ns = Matrix::from_rows(rows).nullspace();
        Self::span(self.parent_dim, &ns)
    }

    pub fn coordinates(&self, v: &[S]) -> Result<Vector<S>> {
        let tol = if S::EXACT {
            0.0
        } else {
            1e-9 * linalg::max_abs(v).to_f64().max(1.0)
        };
        CoordinateSolver::new(&self.basis, self.parent_dim)?.coordinates(v, tol)
    }

    /// `[U, V]` inside `alg`.
    pub fn bracket(alg: &LieAlgebra<S>, u: &Self, v: &Self) -> Self {
        let tol = alg.float_tol();
        let mut vs = Vec::with_capacity(u.dim() * v.dim());
        for a in &u.basis {
            for b in &v.basis {
                let w = alg.bracket_unchecked(a, b);
                // Float rounding must not masquerade as a new direction.
                let scale = linalg::max_abs(a).to_f64() * linalg::max_abs(b).to_f64();
                if S::EXACT || linalg::max_abs(&w).to_f64() > tol * scale {
                    vs.push(w);
                }
            }
        }
        Self::span(alg.dim(), &vs)
    }

    /// True when `[alg, self] ⊆ self`.
    pub fn is_ideal_in(&self, alg: &LieAlgebra<S>) -> bool {
        let n = alg.dim();
        (0..n).all(|i| {
            let ei = linalg::unit(n, i);
            self.basis.iter().all(|b| self.contains(&alg.bracket_unchecked(&ei, b)))
        })
    }

    /// True when `[self, self] ⊆ self`.
    pub fn is_subalgebra_of(&self, alg: &LieAlgebra<S>) -> bool {
        self.contains_subspace(&Self::bracket(alg, self, self))
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Subspace<T> {
        Subspace {
            parent_dim: self.parent_dim,
            basis: self.basis.iter().map(|v| v.iter().map(&f).collect()).collect(),
        }
    }
}
