use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::Matrix;
use crate::scalar::Scalar;

use super::{cholesky, MetricLieAlgebra};

/// Smallest sectional curvature found by sampling, with the plane that
/// attains it (two vectors in basis coordinates, orthonormal for the metric).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectionalMinimum {
    pub value: f64,
    pub plane: [Vec<f64>; 2],
    pub samples: usize,
    /// Index of the sample that produced the minimum.
    pub sample_index: usize,
}

/// Curvature tensor `R_abcd = ⟨R(f_a, f_b) f_c, f_d⟩` in an orthonormal frame.
struct FrameTensor {
    n: usize,
    r: Vec<f64>,
}

impl FrameTensor {
    fn new<S: Scalar>(m: &MetricLieAlgebra<S>) -> (Self, Matrix<f64>) {
        let mf = m.to_f64();
        let n = mf.dim();
        // Columns of P = L⁻ᵀ are an orthonormal frame.
        let l = cholesky(mf.gram());
        let p = l.inverse().expect("Cholesky factor is invertible").transpose();
        let mut t = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for q in 0..n {
                        t[((i * n + j) * n + k) * n + q] = mf.curvature_component(i, j, k, q);
                    }
                }
            }
        }
        // Change each index to the frame in turn: O(n⁵).
        for axis in 0..4 {
            let stride = n.pow(3 - axis as u32);
            let mut out = vec![0.0; t.len()];
            for (idx, o) in out.iter_mut().enumerate() {
                let a = (idx / stride) % n;
                let base = idx - a * stride;
                let mut s = 0.0;
                for i in 0..n {
                    let pia = p[(i, a)];
                    if pia != 0.0 {
                        s += pia * t[base + i * stride];
                    }
                }
                *o = s;
            }
            t = out;
        }
        (Self { n, r: t }, p)
    }

    fn at(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let n = self.n;
        self.r[((a * n + b) * n + c) * n + d]
    }

    /// `Q_v(a, b) = R(a, v, v, b)`, symmetric.
    fn quadratic(&self, v: &DVector<f64>) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |a, b| {
            let mut s = 0.0;
            for c in 0..n {
                if v[c] == 0.0 {
                    continue;
                }
                for d in 0..n {
                    s += self.at(a, c, d, b) * v[c] * v[d];
                }
            }
            s
        })
    }

    /// Minimizer of `uᵀ Q u` over unit `u ⊥ v`.
    fn best_partner(&self, v: &DVector<f64>) -> (DVector<f64>, f64) {
        let q = self.quadratic(v);
        let q = (&q + q.transpose()) * 0.5;
        let n = self.n;
        let proj = DMatrix::identity(n, n) - v * v.transpose();
        let shift = 1.0 + q.abs().max() * n as f64;
        let mut m = &proj * &q * &proj;
        m += v * v.transpose() * shift;
        let eig = SymmetricEigen::new(m);
        let k = eig.eigenvalues.imin();
        let mut u = eig.eigenvectors.column(k).into_owned();
        u -= v * v.dot(&u);
        u /= u.norm();
        let val = u.dot(&(&q * &u));
        (u, val)
    }
}

fn sample_plane(n: usize, seed: u64, index: u64) -> (DVector<f64>, DVector<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut draw = || DVector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
    let mut u = draw();
    while u.norm() < 1e-8 {
        u = draw();
    }
    u /= u.norm();
    let mut v = draw();
    v -= &u * u.dot(&v);
    while v.norm() < 1e-8 {
        v = draw();
        v -= &u * u.dot(&v);
    }
    v /= v.norm();
    (u, v)
}

impl<S: Scalar> MetricLieAlgebra<S> {
    /// Minimum of the sectional curvature over `samples` seeded random
    /// 2-planes, each refined by `refine_steps` rounds of alternating exact
    /// minimization (fix one vector, replace the other by the minimizing
    /// unit vector orthogonal to it). Each round can only lower the value,
    /// so the result is an upper bound on the true minimum. Sample `i` uses
    /// ChaCha8 stream `i` of `seed`, so the output does not depend on the
    /// number of threads.
    pub fn min_sectional_sampled(&self, samples: usize, seed: u64, refine_steps: usize) -> SectionalMinimum {
        let samples = samples.max(1);
        let n = self.dim();
        if n < 2 {
            return SectionalMinimum {
                value: 0.0,
                plane: [vec![0.0; n], vec![0.0; n]],
                samples,
                sample_index: 0,
            };
        }
        let (tensor, frame) = FrameTensor::new(self);
        let best = (0..samples)
            .into_par_iter()
            .map(|idx| {
                let (mut u, mut v) = sample_plane(n, seed, idx as u64);
                let mut val = u.dot(&(tensor.quadratic(&v) * &u));
                for _ in 0..refine_steps {
                    let (nu, a) = tensor.best_partner(&v);
                    if a < val {
                        u = nu;
                        val = a;
                    }
                    let (nv, b) = tensor.best_partner(&u);
                    if b < val {
                        v = nv;
                        val = b;
                    }
                }
                (val, idx, u, v)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .expect("at least one sample");
        let (value, sample_index, u, v) = best;
        let to_basis =
            |w: &DVector<f64>| -> Vec<f64> { (0..n).map(|i| (0..n).map(|a| frame[(i, a)] * w[a]).sum()).collect() };
        SectionalMinimum {
            value,
            plane: [to_basis(&u), to_basis(&v)],
            samples,
            sample_index,
        }
    }
}
