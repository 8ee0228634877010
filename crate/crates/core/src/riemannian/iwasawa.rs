use nalgebra::{DMatrix, SymmetricEigen};

use crate::algebra::Subspace;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::report::{CheckRecord, Status, VerificationReport};
use crate::scalar::Scalar;

use super::{cholesky, MetricLieAlgebra};

impl<S: Scalar> MetricLieAlgebra<S> {
    /// `H₀` with `⟨H₀, x⟩ = tr(ad_x)` for all `x`.
    pub fn mean_curvature_vector(&self) -> Vector<S> {
        let n = self.dim();
        let traces: Vector<S> = (0..n).map(|i| self.alg().ad_basis(i).trace()).collect();
        self.sharp(&traces)
    }

    /// Orthogonal complement of `[s, s]`.
    pub fn derived_complement(&self) -> Subspace<S> {
        self.alg().derived_algebra().orthogonal_complement(self.gram())
    }

    /// Matrix of `ad_x` restricted to the invariant subspace `sub`, in the
    /// canonical basis of `sub`.
    pub fn restricted_ad(&self, x: &[S], sub: &Subspace<S>) -> Result<Matrix<S>> {
        let ad = self.alg().ad(x)?;
        let k = sub.dim();
        let cols: Vec<Vector<S>> = sub
            .basis()
            .iter()
            .map(|b| sub.coordinates(&ad.mul_vec(b)))
            .collect::<Result<_>>()?;
        Ok(Matrix::from_columns(&cols, k))
    }

    /// The three defining conditions of Iwasawa type, with
    /// `a := s ⊖ [s, s]`:
    /// (1) `a` abelian; (2) `ad_A` symmetric and nonzero for `0 ≠ A ∈ a`;
    /// (3) some `A₀ ∈ a` with `ad_{A₀}|[s, s]` positive definite.
    ///
    /// Condition (3) uses the joint eigenfunctionals of the commuting
    /// symmetric family `ad(a)|[s, s]` and is decided for `dim a ≤ 2`;
    /// larger `a` yields an indeterminate record.
    pub fn is_iwasawa_type(&self) -> Result<VerificationReport> {
        if !self.alg().series_analysis().is_solvable {
            return Err(Error::NotSolvable);
        }
        let alg = self.alg();
        let mut report = VerificationReport::new(format!("Iwasawa type of {}", self.name()));
        let a = self.derived_complement();
        let derived = alg.derived_algebra();
        let tol = if S::EXACT { 0.0 } else { 1e-9 };

        let abelian = Subspace::bracket(alg, &a, &a).is_zero();
        report.push(
            CheckRecord::new("a-abelian", Status::from_bool(abelian)).with_witness(format!("dim a = {}", a.dim())),
        );

        let ads: Vec<Matrix<S>> = a.basis().iter().map(|b| alg.ad(b).expect("length")).collect();
        let mut sym_resid = S::zero();
        for ad in &ads {
            let r = ad.sub(&self.adjoint(ad)).max_abs_exact();
            if r > sym_resid {
                sym_resid = r;
            }
        }
        let flat: Vec<Vector<S>> = ads.iter().map(|m| m.entries().to_vec()).collect();
        let injective = !a.is_zero() && Matrix::from_rows(flat).rank() == a.dim();
        let cond2 = sym_resid.within(tol) && injective;
        let mut rec = CheckRecord::new("ad-symmetric-nonzero", Status::from_bool(cond2)).with_residual(&sym_resid);
        if !injective {
            rec = rec.with_witness("ad vanishes on a nonzero element of a");
        }
        report.push(rec);

        if derived.is_zero() {
            report.push(CheckRecord::fail("positive-element").with_witness("[s, s] = 0"));
            return Ok(report);
        }
        if !(abelian && cond2) {
            report.push(
                CheckRecord::new("positive-element", Status::NotApplicable)
                    .with_witness("requires conditions (1) and (2)"),
            );
            return Ok(report);
        }

        report.push(self.positive_element(&a, &derived)?);
        Ok(report)
    }

    fn positive_element(&self, a: &Subspace<S>, derived: &Subspace<S>) -> Result<CheckRecord> {
        let k = derived.dim();
        let da = a.dim();
        // Restricted operators and the restricted Gram matrix, in floats.
        let restricted: Vec<Matrix<f64>> = a
            .basis()
            .iter()
            .map(|b| self.restricted_ad(b, derived).map(|m| m.map(|x| x.to_f64())))
            .collect::<Result<_>>()?;
        let gd = Matrix::from_fn(k, k, |i, j| {
            self.inner(&derived.basis()[i], &derived.basis()[j]).to_f64()
        });
        // In the orthonormal frame Lᵀ: M ↦ Lᵀ M L⁻ᵀ is symmetric.
        let l = cholesky(&gd);
        let lt = l.transpose();
        let lt_inv = lt.inverse().expect("Cholesky factor is invertible");
        let sym: Vec<DMatrix<f64>> = restricted
            .iter()
            .map(|m| {
                let s = lt.mul(m).mul(&lt_inv);
                let d = DMatrix::from_fn(k, k, |i, j| s[(i, j)]);
                (&d + d.transpose()) * 0.5
            })
            .collect();
        // Generic combination separates the joint eigenspaces.
        let weights: Vec<f64> = (0..da)
            .map(|i| 1.0 + 0.618_033_988_75 * (i as f64 + 1.0).sqrt())
            .collect();
        let mut generic = DMatrix::zeros(k, k);
        for (w, s) in weights.iter().zip(&sym) {
            generic += s * *w;
        }
        let eig = SymmetricEigen::new(generic);
        // Joint eigenfunctionals ℓ_j(A_b) = v_jᵀ S_b v_j.
        let funcs: Vec<Vec<f64>> = (0..k)
            .map(|j| {
                let v = eig.eigenvectors.column(j);
                sym.iter().map(|s| v.dot(&(s * v))).collect()
            })
            .collect();
        let scale = funcs.iter().flatten().fold(1.0_f64, |m, x| m.max(x.abs()));
        let margin = |dir: &[f64]| -> f64 {
            funcs
                .iter()
                .map(|f| f.iter().zip(dir).map(|(x, y)| x * y).sum::<f64>())
                .fold(f64::INFINITY, f64::min)
        };
        let candidates: Vec<Vec<f64>> = match da {
            1 => vec![vec![1.0], vec![-1.0]],
            2 => {
                let mut c = Vec::new();
                let perps: Vec<[f64; 2]> = funcs
                    .iter()
                    .flat_map(|f| {
                        let p = [-f[1], f[0]];
                        let nrm = (p[0] * p[0] + p[1] * p[1]).sqrt().max(f64::MIN_POSITIVE);
                        [[p[0] / nrm, p[1] / nrm], [-p[0] / nrm, -p[1] / nrm]]
                    })
                    .collect();
                for f in &funcs {
                    c.push(f.clone());
                }
                for (i, p) in perps.iter().enumerate() {
                    for q in &perps[i + 1..] {
                        c.push(vec![p[0] + q[0], p[1] + q[1]]);
                    }
                }
                c
            }
            _ => {
                return Ok(CheckRecord::new("positive-element", Status::Indeterminate)
                    .with_witness(format!("dim a = {da} exceeds the decided range")));
            }
        };
        let best = candidates
            .into_iter()
            .map(|d| (margin(&d), d))
            .max_by(|x, y| x.0.total_cmp(&y.0));
        match best {
            Some((m, dir)) if m > 1e-9 * scale => {
                let labels = self.labels();
                let mut a0 = vec![0.0; self.dim()];
                for (w, b) in dir.iter().zip(a.basis()) {
                    for (o, x) in a0.iter_mut().zip(b) {
                        *o += w * x.to_f64();
                    }
                }
                let desc: Vec<String> = a0
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| x.abs() > 1e-12)
                    .map(|(i, x)| format!("{x:.6}*{}", labels[i]))
                    .collect();
                Ok(CheckRecord::pass("positive-element")
                    .with_scalar("min-eigenvalue", &m)
                    .with_witness(format!("A0 = {}", desc.join(" + "))))
            }
            Some((m, _)) => Ok(CheckRecord::fail("positive-element")
                .with_scalar("best-min-eigenvalue", &m)
                .with_witness("no element of a is positive definite on [s, s]")),
            None => Ok(CheckRecord::fail("positive-element")),
        }
    }
}
