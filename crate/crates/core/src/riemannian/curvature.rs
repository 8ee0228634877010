use rayon::prelude::*;

use crate::algebra::IDENTITY_TOL;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::report::{CheckRecord, Status, VerificationReport};
use crate::scalar::Scalar;

use super::MetricLieAlgebra;

/// Levi-Civita connection and curvature of a metric Lie algebra on its basis.
///
/// `nabla[i]` is the matrix of `y ↦ ∇_{e_i} y`; `riemann[i * n + j]` is the
/// matrix of `R(e_i, e_j)` with `R(x, y) = [∇_x, ∇_y] − ∇_{[x, y]}`. Every
/// ordered pair is computed independently, so the symmetry checks below are
/// not satisfied by construction.
#[derive(Debug, Clone)]
pub struct CurvaturePackage<S: Scalar> {
    dim: usize,
    nabla: Vec<Matrix<S>>,
    riemann: Vec<Matrix<S>>,
    ricci: Matrix<S>,
    scalar: S,
}

impl<S: Scalar> CurvaturePackage<S> {
    pub(crate) fn compute(m: &MetricLieAlgebra<S>) -> Self {
        let n = m.dim();
        let alg = m.alg();
        let g = m.gram();

        // C[i][j][l] = ⟨[e_i, e_j], e_l⟩
        let c: Vec<Vector<S>> = (0..n * n)
            .map(|ij| g.transpose().mul_vec(&alg.bracket_basis(ij / n, ij % n)))
            .collect();
        let cc = |i: usize, j: usize, l: usize| c[i * n + j][l].clone();

        // 2⟨∇_i e_j, e_l⟩ = C_ijl − C_jli + C_lij, then raise the index.
        let nabla: Vec<Matrix<S>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut k = Matrix::zeros(n, n);
                for j in 0..n {
                    for l in 0..n {
                        let v = cc(i, j, l) - cc(j, l, i) + cc(l, i, j);
                        if !v.is_zero() {
                            k[(l, j)] = v * S::half();
                        }
                    }
                }
                m.gram_inv().mul(&k)
            })
            .collect();

        let riemann: Vec<Matrix<S>> = (0..n * n)
            .into_par_iter()
            .map(|ij| {
                let (i, j) = (ij / n, ij % n);
                if i == j {
                    return Matrix::zeros(n, n);
                }
                let mut r = nabla[i].commutator(&nabla[j]);
                for (p, cp) in alg.bracket_basis(i, j).iter().enumerate() {
                    if !cp.is_zero() {
                        r = r.sub(&nabla[p].scale(cp));
                    }
                }
                r
            })
            .collect();

        // Ric(e_j) = Σ_{k,l} G⁻¹_kl R(e_j, e_k) e_l
        let ginv = m.gram_inv();
        let cols: Vec<Vector<S>> = (0..n)
            .into_par_iter()
            .map(|j| {
                let mut out = linalg::zeros(n);
                for k in 0..n {
                    let rjk = &riemann[j * n + k];
                    for l in 0..n {
                        let w = &ginv[(k, l)];
                        if w.is_zero() {
                            continue;
                        }
                        for (r, o) in out.iter_mut().enumerate() {
                            let x = &rjk[(r, l)];
                            if !x.is_zero() {
                                *o += w.clone() * x.clone();
                            }
                        }
                    }
                }
                out
            })
            .collect();
        let ricci = Matrix::from_columns(&cols, n);
        let scalar = ricci.trace();
        Self {
            dim: n,
            nabla,
            riemann,
            ricci,
            scalar,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Matrix of `∇_{e_i}`.
    pub fn nabla(&self, i: usize) -> &Matrix<S> {
        &self.nabla[i]
    }

    /// Matrix of `R(e_i, e_j)`.
    pub fn riemann(&self, i: usize, j: usize) -> &Matrix<S> {
        &self.riemann[i * self.dim + j]
    }

    pub fn ricci(&self) -> &Matrix<S> {
        &self.ricci
    }

    pub fn scalar_curvature(&self) -> &S {
        &self.scalar
    }

    /// Matrix of `∇_x`.
    pub fn nabla_along(&self, x: &[S]) -> Matrix<S> {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                out = out.add(&self.nabla[i].scale(xi));
            }
        }
        out
    }

    /// Matrix of `R(x, y)`.
    pub fn riemann_along(&self, x: &[S], y: &[S]) -> Matrix<S> {
        let n = self.dim;
        let mut out = Matrix::zeros(n, n);
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(j, v)| *j != i && !v.is_zero()) {
                out = out.add(&self.riemann[i * n + j].scale(&(xi.clone() * yj.clone())));
            }
        }
        out
    }
}

impl<S: Scalar> MetricLieAlgebra<S> {
    /// `∇_x y` for left-invariant fields.
    pub fn levi_civita(&self, x: &[S], y: &[S]) -> Result<Vector<S>> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.curvature_package().nabla_along(x).mul_vec(y))
    }

    /// `R(x, y) z = ∇_x ∇_y z − ∇_y ∇_x z − ∇_{[x, y]} z`.
    pub fn curvature(&self, x: &[S], y: &[S], z: &[S]) -> Result<Vector<S>> {
        self.check_len(x)?;
        self.check_len(y)?;
        self.check_len(z)?;
        Ok(self.curvature_package().riemann_along(x, y).mul_vec(z))
    }

    /// `⟨R(e_i, e_j) e_k, e_l⟩`.
    pub fn curvature_component(&self, i: usize, j: usize, k: usize, l: usize) -> S {
        let r = self.curvature_package().riemann(i, j).column(k);
        linalg::dot(&r, &self.gram().column(l))
    }

    /// Ricci operator `Ric(x) = Σ_a R(x, f_a) f_a` over an orthonormal frame.
    pub fn ricci_operator(&self) -> Matrix<S> {
        self.curvature_package().ricci().clone()
    }

    pub fn scalar_curvature(&self) -> S {
        self.curvature_package().scalar_curvature().clone()
    }

    /// `⟨R(x, y) y, x⟩ / (|x|²|y|² − ⟨x, y⟩²)`.
    pub fn sectional_curvature(&self, x: &[S], y: &[S]) -> Result<S> {
        let ryy = self.curvature(x, y, y)?;
        let num = self.inner(&ryy, x);
        let xy = self.inner(x, y);
        let den = self.norm_sq(x) * self.norm_sq(y) - xy.clone() * xy;
        let degenerate = if S::EXACT {
            den.is_zero()
        } else {
            den.to_f64() <= 1e-12 * (self.norm_sq(x) * self.norm_sq(y)).to_f64()
        };
        if degenerate {
            return Err(Error::Degenerate);
        }
        Ok(num / den)
    }

    /// Torsion, metric compatibility, curvature symmetries, first Bianchi
    /// identity and Ricci symmetry on all basis tuples.
    pub fn verify_identities(&self) -> VerificationReport {
        let n = self.dim();
        let p = self.curvature_package();
        let alg = self.alg();
        let g = self.gram();
        let labels = self.labels();
        let mut report = VerificationReport::new(format!("curvature identities of {}", self.name()));

        let mut t = Worst::new("torsion-free");
        for i in 0..n {
            for j in i + 1..n {
                let d = linalg::sub(
                    &linalg::sub(&p.nabla[i].column(j), &p.nabla[j].column(i)),
                    &alg.bracket_basis(i, j),
                );
                t.see(linalg::max_abs(&d), || format!("pair ({}, {})", labels[i], labels[j]));
            }
        }
        report.push(t.record());

        let mut mc = Worst::new("metric-compatible");
        for (nabla, label) in p.nabla.iter().zip(labels) {
            let gn = g.mul(nabla);
            let d = gn.add(&gn.transpose());
            mc.see(d.max_abs_exact(), || format!("direction {label}"));
        }
        report.push(mc.record());

        let mut skew12 = Worst::new("curvature-skew-first-pair");
        let mut skew34 = Worst::new("curvature-skew-last-pair");
        let mut pairs = Worst::new("curvature-pair-symmetry");
        // B_ij = G R(e_i, e_j), so (B_ij)_lk = ⟨R(e_i, e_j) e_k, e_l⟩.
        let b: Vec<Matrix<S>> = (0..n * n).into_par_iter().map(|ij| g.mul(&p.riemann[ij])).collect();
        for i in 0..n {
            for j in 0..n {
                let ij = i * n + j;
                if i < j {
                    let d = p.riemann[ij].add(&p.riemann[j * n + i]);
                    skew12.see(d.max_abs_exact(), || format!("pair ({}, {})", labels[i], labels[j]));
                }
                let d = b[ij].add(&b[ij].transpose());
                skew34.see(d.max_abs_exact(), || format!("pair ({}, {})", labels[i], labels[j]));
                for k in 0..n {
                    for l in 0..n {
                        if (k, l) <= (i, j) {
                            continue;
                        }
                        let d = b[ij][(l, k)].clone() - b[k * n + l][(j, i)].clone();
                        pairs.see(d.abs(), || {
                            format!("({}, {}, {}, {})", labels[i], labels[j], labels[k], labels[l])
                        });
                    }
                }
            }
        }
        report.push(skew12.record());
        report.push(skew34.record());
        report.push(pairs.record());

        let mut bianchi = Worst::new("first-bianchi");
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let s = linalg::add(
                        &linalg::add(&p.riemann[i * n + j].column(k), &p.riemann[j * n + k].column(i)),
                        &p.riemann[k * n + i].column(j),
                    );
                    bianchi.see(linalg::max_abs(&s), || {
                        format!("triple ({}, {}, {})", labels[i], labels[j], labels[k])
                    });
                }
            }
        }
        report.push(bianchi.record());

        let mut rs = Worst::new("ricci-symmetric");
        let gr = g.mul(&p.ricci);
        rs.see(gr.sub(&gr.transpose()).max_abs_exact(), || "G·Ric".into());
        report.push(rs.record());
        report
    }
}

impl<S: Scalar> MetricLieAlgebra<S> {
    /// `J² = −I`, `⟨Jx, Jy⟩ = ⟨x, y⟩` and `∇J = 0` (Kähler), the last as
    /// `∇_{e_i}(J e_j) − J ∇_{e_i} e_j = 0` on all basis pairs.
    pub fn verify_kahler(&self, j: &Matrix<S>) -> Result<VerificationReport> {
        let n = self.dim();
        if j.rows() != n || j.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: j.rows(),
            });
        }
        let labels = self.labels();
        let g = self.gram();
        let mut report = VerificationReport::new(format!("complex structure on {}", self.name()));

        let mut sq = Worst::new("j-squared");
        sq.see(j.mul(j).add(&Matrix::identity(n)).max_abs_exact(), || "J^2 + I".into());
        report.push(sq.record());

        let mut orth = Worst::new("j-orthogonal");
        orth.see(j.transpose().mul(g).mul(j).sub(g).max_abs_exact(), || {
            "J^t G J - G".into()
        });
        report.push(orth.record());

        let p = self.curvature_package();
        let mut par = Worst::new("j-parallel");
        for (nabla, label) in p.nabla.iter().zip(labels) {
            let d = nabla.commutator(j);
            par.see(d.max_abs_exact(), || format!("direction {label}"));
        }
        report.push(par.record());
        Ok(report)
    }
}

/// Running maximum of a residual with the first offending location.
pub(crate) struct Worst<S> {
    name: &'static str,
    worst: S,
    witness: Option<String>,
}

impl<S: Scalar> Worst<S> {
    pub(crate) fn new(name: &'static str) -> Self {
        Self {
            name,
            worst: S::zero(),
            witness: None,
        }
    }

    pub(crate) fn see(&mut self, r: S, at: impl FnOnce() -> String) {
        if self.witness.is_none() && !r.within(IDENTITY_TOL) {
            self.witness = Some(at());
        }
        if r > self.worst {
            self.worst = r;
        }
    }

    pub(crate) fn record(self) -> CheckRecord {
        let mut rec = CheckRecord::new(self.name, Status::from_bool(self.witness.is_none())).with_residual(&self.worst);
        if let Some(w) = self.witness {
            rec = rec.with_witness(w);
        }
        rec
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieAlgebra;
    use crate::scalar::QSqrt2;

    fn q(s: &str) -> QSqrt2 {
        s.parse().unwrap()
    }

    fn hyperbolic(c: &str) -> MetricLieAlgebra<QSqrt2> {
        let alg = LieAlgebra::builder("hyp", vec!["A".into(), "X".into()])
            .bracket(0, 1, &[(1, q(c))])
            .build()
            .unwrap();
        MetricLieAlgebra::orthonormal(alg).unwrap()
    }

    #[test]
    fn abelian_is_flat() {
        let m = MetricLieAlgebra::orthonormal(LieAlgebra::<QSqrt2>::abelian(3)).unwrap();
        assert!(m
            .levi_civita(&linalg::unit(3, 0), &linalg::unit(3, 1))
            .unwrap()
            .iter()
            .all(|x| x.is_zero()));
        assert!(m.ricci_operator().is_zero());
        assert_eq!(
            m.sectional_curvature(&linalg::unit(3, 0), &linalg::unit(3, 2)).unwrap(),
            q("0")
        );
    }

    #[test]
    fn hyperbolic_plane_curvature() {
        for c in ["1", "2", "r2", "2*r2"] {
            let m = hyperbolic(c);
            let (a, x) = (linalg::unit(2, 0), linalg::unit(2, 1));
            let c2 = q(c) * q(c);
            assert_eq!(m.sectional_curvature(&a, &x).unwrap(), -c2.clone());
            assert_eq!(linalg::dot(&m.curvature(&a, &x, &x).unwrap(), &a), -c2.clone());
            assert_eq!(m.scalar_curvature(), q("-2") * c2);
            assert!(m.verify_identities().strictly_passed());
        }
    }

    #[test]
    fn sectional_curvature_rejects_degenerate_planes() {
        let m = hyperbolic("1");
        let x = vec![q("1"), q("2")];
        assert!(matches!(
            m.sectional_curvature(&x, &linalg::scale(&q("3"), &x)),
            Err(Error::Degenerate)
        ));
    }

    #[test]
    fn torsion_free_on_sample() {
        let m = hyperbolic("r2");
        let (x, y) = (vec![q("1"), q("3")], vec![q("-2"), q("1/2")]);
        let d = linalg::sub(&m.levi_civita(&x, &y).unwrap(), &m.levi_civita(&y, &x).unwrap());
        assert_eq!(d, m.alg().bracket(&x, &y).unwrap());
    }
}
