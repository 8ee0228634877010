//! Left-invariant Riemannian geometry of a metric Lie algebra.
//!
//! The inner product is an arbitrary symmetric positive definite Gram matrix
//! `G`, so no square roots are ever needed: orthonormal-frame contractions
//! are written with `G⁻¹` instead.

mod curvature;
mod iwasawa;
mod sectional;

pub use curvature::CurvaturePackage;
pub use sectional::SectionalMinimum;

use std::sync::OnceLock;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::scalar::Scalar;

/// Lie algebra with a left-invariant inner product.
///
/// Invariants: `gram` is symmetric positive definite, the algebra satisfies
/// Jacobi. The curvature package is computed on first use.
#[derive(Debug, Clone)]
pub struct MetricLieAlgebra<S: Scalar> {
    alg: LieAlgebra<S>,
    gram: Matrix<S>,
    gram_inv: Matrix<S>,
    curvature: OnceLock<CurvaturePackage<S>>,
}

impl<S: Scalar> PartialEq for MetricLieAlgebra<S> {
    fn eq(&self, other: &Self) -> bool {
        self.alg == other.alg && self.gram == other.gram
    }
}

impl<S: Scalar> MetricLieAlgebra<S> {
    pub fn new(alg: LieAlgebra<S>, gram: Matrix<S>) -> Result<Self> {
        let n = alg.dim();
        if gram.rows() != n || gram.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: gram.rows(),
            });
        }
        check_spd(&gram)?;
        alg.ensure_jacobi()?;
        let gram_inv = gram.inverse()?;
        Ok(Self {
            alg,
            gram,
            gram_inv,
            curvature: OnceLock::new(),
        })
    }

    /// Declares the basis orthonormal.
    pub fn orthonormal(alg: LieAlgebra<S>) -> Result<Self> {
        let n = alg.dim();
        Self::new(alg, Matrix::identity(n))
    }

    pub fn alg(&self) -> &LieAlgebra<S> {
        &self.alg
    }

    pub fn gram(&self) -> &Matrix<S> {
        &self.gram
    }

    pub fn gram_inv(&self) -> &Matrix<S> {
        &self.gram_inv
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn name(&self) -> &str {
        self.alg.name()
    }

    pub fn labels(&self) -> &[String] {
        self.alg.labels()
    }

    pub fn is_orthonormal_basis(&self) -> bool {
        self.gram == Matrix::identity(self.dim())
    }

    pub fn inner(&self, x: &[S], y: &[S]) -> S {
        linalg::dot(x, &self.gram.mul_vec(y))
    }

    pub fn norm_sq(&self, x: &[S]) -> S {
        self.inner(x, x)
    }

    /// Vector dual to the covector `w`: `⟨flat⁻¹(w), y⟩ = w(y)`.
    pub fn sharp(&self, w: &[S]) -> Vector<S> {
        self.gram_inv.mul_vec(w)
    }

    /// Covector `y ↦ ⟨x, y⟩`.
    pub fn flat(&self, x: &[S]) -> Vector<S> {
        self.gram.transpose().mul_vec(x)
    }

    /// Adjoint of `a` with respect to the inner product: `G⁻¹ aᵀ G`.
    pub fn adjoint(&self, a: &Matrix<S>) -> Matrix<S> {
        self.gram_inv.mul(&a.transpose()).mul(&self.gram)
    }

    /// `(a + a^t) / 2`.
    pub fn symmetric_part(&self, a: &Matrix<S>) -> Matrix<S> {
        a.add(&self.adjoint(a)).scale(&S::half())
    }

    /// Same algebra with the Gram matrix replaced.
    pub fn with_gram(&self, gram: Matrix<S>) -> Result<Self> {
        Self::new(self.alg.clone(), gram)
    }

    /// Inner product multiplied by `t`.
    pub fn scaled(&self, t: &S) -> Result<Self> {
        self.with_gram(self.gram.scale(t))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.alg = self.alg.with_name(name);
        self
    }

    /// The subalgebra spanned by `basis` with the restricted inner product
    /// `Bᵀ G B`.
    pub fn restrict(&self, basis: &[Vector<S>], labels: Vec<String>) -> Result<Self> {
        let sub = self.alg.subalgebra(basis, labels)?;
        let k = basis.len();
        let gram = Matrix::from_fn(k, k, |a, b| self.inner(&basis[a], &basis[b]));
        Self::new(sub, gram)
    }

    /// Same geometry in float arithmetic.
    pub fn to_f64(&self) -> MetricLieAlgebra<f64> {
        MetricLieAlgebra::new(self.alg.to_f64(), self.gram.map(|x| x.to_f64()))
            .expect("float image of a valid metric algebra")
    }

    /// Connection, curvature and Ricci data (computed once).
    pub fn curvature_package(&self) -> &CurvaturePackage<S> {
        self.curvature.get_or_init(|| CurvaturePackage::compute(self))
    }

    fn check_len(&self, v: &[S]) -> Result<()> {
        if v.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            })
        }
    }
}

/// Symmetric positive definite test by elimination without pivoting: every
/// pivot must be strictly positive.
fn check_spd<S: Scalar>(g: &Matrix<S>) -> Result<()> {
    let n = g.rows();
    if !g.is_symmetric() && (S::EXACT || g.sub(&g.transpose()).max_abs() > 1e-12 * g.max_abs().max(1.0)) {
        return Err(Error::NotPositiveDefinite("not symmetric".into()));
    }
    let scale = g.max_abs().max(f64::MIN_POSITIVE);
    let mut m = g.clone();
    for k in 0..n {
        let p = m[(k, k)].clone();
        let ok = if S::EXACT {
            p.is_positive()
        } else {
            p.to_f64() > 1e-12 * scale
        };
        if !ok {
            return Err(Error::NotPositiveDefinite(format!(
                "pivot {k} is {}",
                p.to_exact_string()
            )));
        }
        let inv = p.recip();
        for r in k + 1..n {
            let f = m[(r, k)].clone() * inv.clone();
            if f.is_zero() {
                continue;
            }
            for c in k..n {
                let d = f.clone() * m[(k, c)].clone();
                m[(r, c)] -= d;
            }
        }
    }
    Ok(())
}

/// Lower-triangular `L` with `G = L Lᵀ` (float only).
pub(crate) fn cholesky(g: &Matrix<f64>) -> Matrix<f64> {
    let n = g.rows();
    let dm = nalgebra::DMatrix::from_fn(n, n, |r, c| g[(r, c)]);
    let ch = nalgebra::Cholesky::new(dm).expect("gram matrix is positive definite");
    let l = ch.l();
    Matrix::from_fn(n, n, |r, c| l[(r, c)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QSqrt2;

    fn q(s: &str) -> QSqrt2 {
        s.parse().unwrap()
    }

    #[test]
    fn gram_must_be_positive_definite() {
        let a = LieAlgebra::<QSqrt2>::abelian(2);
        let bad = Matrix::from_rows(vec![vec![q("1"), q("2")], vec![q("2"), q("1")]]);
        assert!(matches!(
            MetricLieAlgebra::new(a.clone(), bad),
            Err(Error::NotPositiveDefinite(_))
        ));
        let asym = Matrix::from_rows(vec![vec![q("1"), q("0")], vec![q("1"), q("1")]]);
        assert!(MetricLieAlgebra::new(a.clone(), asym).is_err());
        let good = Matrix::from_rows(vec![vec![q("2"), q("1")], vec![q("1"), q("r2")]]);
        assert!(MetricLieAlgebra::new(a, good).is_ok());
    }

    #[test]
    fn adjoint_is_metric_transpose() {
        let a = LieAlgebra::<QSqrt2>::abelian(2);
        let g = Matrix::from_rows(vec![vec![q("2"), q("1")], vec![q("1"), q("3")]]);
        let m = MetricLieAlgebra::new(a, g).unwrap();
        let t = Matrix::from_rows(vec![vec![q("1"), q("r2")], vec![q("0"), q("-1")]]);
        let ta = m.adjoint(&t);
        let (x, y) = (vec![q("1"), q("2")], vec![q("-3"), q("1/2")]);
        assert_eq!(m.inner(&ta.mul_vec(&x), &y), m.inner(&x, &t.mul_vec(&y)));
    }
}
