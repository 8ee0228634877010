//! Einstein metrics and algebraic Ricci solitons `Ric = cI + D`,
//! `D ∈ Der(s)`, on metric Lie algebras.

use std::fmt;

use serde::Serialize;

use crate::algebra::Subspace;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::report::{CheckRecord, Status, VerificationReport};
use crate::riemannian::MetricLieAlgebra;
use crate::scalar::Scalar;

/// Residual threshold for float soliton verdicts.
pub const SOLITON_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolitonStatus {
    Einstein,
    NontrivialSolvsoliton,
    NoneFound,
}

impl fmt::Display for SolitonStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolitonStatus::Einstein => "einstein",
            SolitonStatus::NontrivialSolvsoliton => "nontrivial_solvsoliton",
            SolitonStatus::NoneFound => "none_found",
        })
    }
}

/// Sign class of the soliton constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolitonType {
    Expanding,
    Steady,
    Shrinking,
}

impl SolitonType {
    pub fn of<S: Scalar>(c: &S) -> Self {
        let zero = if S::EXACT {
            c.is_zero()
        } else {
            c.to_f64().abs() <= SOLITON_TOL
        };
        if zero {
            SolitonType::Steady
        } else if c.is_negative() {
            SolitonType::Expanding
        } else {
            SolitonType::Shrinking
        }
    }
}

impl fmt::Display for SolitonType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolitonType::Expanding => "expanding",
            SolitonType::Steady => "steady",
            SolitonType::Shrinking => "shrinking",
        })
    }
}

/// Outcome of solving `Ric = cI + D`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonVerdict<S: Scalar> {
    pub status: SolitonStatus,
    /// Soliton constant `c` (not the model scale of the catalog algebras).
    pub soliton_constant: S,
    /// Zero exactly when the status is `Einstein`.
    pub derivation: Matrix<S>,
    /// Max-norm of `Ric − cI − D`.
    pub residual: S,
    /// Max-norm of the Leibniz defect of `D`.
    pub leibniz_residual: S,
    pub type_label: SolitonType,
    /// For nontrivial solvsolitons: the derived label "nongradient expanding".
    pub annotation: Option<String>,
}

impl<S: Scalar> SolitonVerdict<S> {
    pub fn to_record(&self) -> CheckRecord {
        let status = Status::from_bool(self.status != SolitonStatus::NoneFound);
        let mut rec = CheckRecord::new("soliton", status)
            .with_residual(&self.residual)
            .with_scalar("soliton_constant", &self.soliton_constant)
            .with_scalar("leibniz_residual", &self.leibniz_residual)
            .with_witness(format!("status: {}", self.status))
            .with_witness(format!("type: {}", self.type_label));
        if let Some(a) = &self.annotation {
            rec = rec.with_witness(a.clone());
        }
        rec
    }
}

/// Four-condition characterization of solvsolitons with `c < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LauretReport<S: Scalar> {
    pub soliton_constant: S,
    /// `(n, ⟨,⟩|n)` is a nilsoliton with constant `c`.
    pub nilsoliton: CheckRecord,
    /// `[a, a] = 0`.
    pub a_abelian: CheckRecord,
    /// `[ad_A, (ad_A)^t] = 0`.
    pub normal: CheckRecord,
    /// `⟨A, A⟩ = −(1/c) tr S(ad_A)²`.
    pub trace_condition: CheckRecord,
}

impl<S: Scalar> LauretReport<S> {
    pub fn conditions(&self) -> [&CheckRecord; 4] {
        [&self.nilsoliton, &self.a_abelian, &self.normal, &self.trace_condition]
    }

    pub fn overall(&self) -> bool {
        self.conditions().iter().all(|c| c.passed())
    }

    pub fn to_report(&self, subject: impl Into<String>) -> VerificationReport {
        let mut r = VerificationReport::new(subject);
        for c in self.conditions() {
            r.push(c.clone());
        }
        r
    }
}

/// Output of [`MetricLieAlgebra::rank_reduction`].
#[derive(Debug, Clone)]
pub struct RankReduction<S: Scalar> {
    /// `a' ⊕ n` with the restricted inner product.
    pub sub: MetricLieAlgebra<S>,
    /// Basis of `a' ⊕ n` in ambient coordinates.
    pub basis: Vec<Vector<S>>,
    /// `H₀ ∈ a'` when the ambient is Einstein of Iwasawa type and `a' ≠ 0`;
    /// `None` when those hypotheses fail.
    pub heber_einstein: Option<bool>,
    pub heber_note: String,
    pub soliton: SolitonVerdict<S>,
}

fn tol<S: Scalar>() -> f64 {
    if S::EXACT {
        0.0
    } else {
        SOLITON_TOL
    }
}

impl<S: Scalar> MetricLieAlgebra<S> {
    /// `λ` with `Ric = λI`, when the metric is Einstein.
    pub fn einstein_check(&self) -> Option<S> {
        let ric = self.ricci_operator();
        let n = self.dim();
        let lambda = ric.trace() / S::from_i64(n as i64);
        let d = ric.sub(&Matrix::identity(n).scale(&lambda));
        let ok = if S::EXACT {
            d.is_zero()
        } else {
            d.max_abs() <= 1e-9 * ric.max_abs().max(1.0)
        };
        ok.then_some(lambda)
    }

    /// Least-squares solution of `Ric = cI + D` over `c` and `D ∈ Der`.
    pub fn algebraic_soliton_solve(&self) -> SolitonVerdict<S> {
        let n = self.dim();
        if let Some(lambda) = self.einstein_check() {
            return SolitonVerdict {
                status: SolitonStatus::Einstein,
                type_label: SolitonType::of(&lambda),
                soliton_constant: lambda,
                derivation: Matrix::zeros(n, n),
                residual: S::zero(),
                leibniz_residual: S::zero(),
                annotation: None,
            };
        }
        let ric = self.ricci_operator();
        let der = self.alg().derivation_space();
        let mut cols: Vec<Vector<S>> = vec![Matrix::<S>::identity(n).entries().to_vec()];
        cols.extend(der.iter().map(|d| d.entries().to_vec()));
        let a = Matrix::from_columns(&cols, n * n);
        let x = a.least_squares(ric.entries());
        let c = x[0].clone();
        let d = combine_matrices(&x[1..], &der, n);
        self.verdict(ric, c, d)
    }

    /// `Ric − cI = D` with `c` fixed: least squares over `D ∈ Der` only.
    pub fn soliton_with_constant(&self, c: &S) -> SolitonVerdict<S> {
        let n = self.dim();
        let ric = self.ricci_operator();
        let target = ric.sub(&Matrix::identity(n).scale(c));
        let der = self.alg().derivation_space();
        let d = if der.is_empty() {
            Matrix::zeros(n, n)
        } else {
            let cols: Vec<Vector<S>> = der.iter().map(|d| d.entries().to_vec()).collect();
            let x = Matrix::from_columns(&cols, n * n).least_squares(target.entries());
            combine_matrices(&x, &der, n)
        };
        self.verdict(ric, c.clone(), d)
    }

    fn verdict(&self, ric: Matrix<S>, c: S, d: Matrix<S>) -> SolitonVerdict<S> {
        let n = self.dim();
        let residual = ric.sub(&Matrix::identity(n).scale(&c)).sub(&d).max_abs_exact();
        let leibniz_residual = self.alg().leibniz_residual(&d);
        let found = residual.within(tol::<S>()) && leibniz_residual.within(tol::<S>());
        let trivial = if S::EXACT {
            d.is_zero()
        } else {
            d.max_abs() <= SOLITON_TOL
        };
        let status = match (found, trivial) {
            (false, _) => SolitonStatus::NoneFound,
            (true, true) => SolitonStatus::Einstein,
            (true, false) => SolitonStatus::NontrivialSolvsoliton,
        };
        let type_label = SolitonType::of(&c);
        let solvable = self.alg().series_analysis().is_solvable;
        let annotation = (status == SolitonStatus::NontrivialSolvsoliton && solvable && c.is_negative())
            .then(|| "nongradient expanding Ricci soliton (derived from algebraic nontriviality)".to_string());
        SolitonVerdict {
            status,
            soliton_constant: c,
            derivation: d,
            residual,
            leibniz_residual,
            type_label,
            annotation,
        }
    }

    /// Nilradical `n`, its orthogonal complement `a`, and a basis of `a`.
    pub fn nilradical_split(&self) -> Result<(Subspace<S>, Subspace<S>)> {
        let nil = self.alg().nilradical()?;
        let a = nil.orthogonal_complement(self.gram());
        Ok((nil, a))
    }

    /// The four conditions characterizing solvsolitons with constant `c < 0`
    /// through the nilradical `n` and `a = s ⊖ n`. Quadratic conditions are
    /// checked on a basis of `a` and all pairwise sums.
    pub fn lauret_conditions(&self, c: &S) -> Result<LauretReport<S>> {
        if !c.is_negative() {
            return Err(Error::InvalidParameter(format!(
                "soliton constant must be negative, got {c}"
            )));
        }
        let (nil, a) = self.nilradical_split()?;
        let alg = self.alg();
        let t = tol::<S>();

        let nil_basis = nil.basis().to_vec();
        let nil_labels = nil_basis.iter().map(|v| alg.describe_vector(v)).collect();
        let nil_metric = self.restrict(&nil_basis, nil_labels)?;
        let nv = nil_metric.soliton_with_constant(c);
        let nilsoliton = CheckRecord::new(
            "nilsoliton-nilradical",
            Status::from_bool(nv.status != SolitonStatus::NoneFound),
        )
        .with_residual(&nv.residual)
        .with_witness(format!("dim n = {}", nil.dim()));

        let aa = Subspace::bracket(alg, &a, &a);
        let mut a_abelian = CheckRecord::new("a-abelian", Status::from_bool(aa.is_zero()));
        if let Some(v) = aa.basis().first() {
            a_abelian = a_abelian.with_witness(format!("[a, a] contains {}", alg.describe_vector(v)));
        }

        let mut probes: Vec<Vector<S>> = a.basis().to_vec();
        for i in 0..a.dim() {
            for j in i + 1..a.dim() {
                probes.push(linalg::add(&a.basis()[i], &a.basis()[j]));
            }
        }

        let mut worst_normal = S::zero();
        let mut normal_witness = None;
        let mut worst_trace = S::zero();
        let mut trace_witness = None;
        for p in &probes {
            let ad = alg.ad(p)?;
            let adt = self.adjoint(&ad);
            let r = ad.commutator(&adt).max_abs_exact();
            if normal_witness.is_none() && !r.within(t) {
                normal_witness = Some(format!("A = {}", alg.describe_vector(p)));
            }
            if r > worst_normal {
                worst_normal = r;
            }
            let s = self.symmetric_part(&ad);
            let rhs = -(s.mul(&s).trace() / c.clone());
            let r = (self.norm_sq(p) - rhs).abs();
            if trace_witness.is_none() && !r.within(t) {
                trace_witness = Some(format!("A = {}", alg.describe_vector(p)));
            }
            if r > worst_trace {
                worst_trace = r;
            }
        }
        let mk = |name: &str, worst: S, w: Option<String>| {
            let mut rec = CheckRecord::new(name, Status::from_bool(w.is_none())).with_residual(&worst);
            if let Some(w) = w {
                rec = rec.with_witness(w);
            }
            rec
        };
        Ok(LauretReport {
            soliton_constant: c.clone(),
            nilsoliton,
            a_abelian,
            normal: mk("ad-normal", worst_normal, normal_witness),
            trace_condition: mk("trace-condition", worst_trace, trace_witness),
        })
    }

    /// Restriction to `s' = a' ⊕ n` for a subspace `a'` of `a = s ⊖ n`,
    /// with the Einstein criterion `H₀ ∈ a'` (valid for Einstein metrics of
    /// Iwasawa type and `a' ≠ 0`) and a direct soliton solve on `s'`.
    pub fn rank_reduction(&self, a_prime: &Subspace<S>) -> Result<RankReduction<S>> {
        let (nil, a) = self.nilradical_split()?;
        if a_prime.parent_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: a_prime.parent_dim(),
            });
        }
        if !a.contains_subspace(a_prime) {
            return Err(Error::InvalidParameter(
                "a' is not contained in s minus the nilradical".into(),
            ));
        }
        let alg = self.alg();
        let mut basis = a_prime.basis().to_vec();
        basis.extend(nil.basis().iter().cloned());
        let labels: Vec<String> = basis.iter().map(|v| alg.describe_vector(v)).collect();
        let sub =
            self.restrict(&basis, labels)?
                .with_name(format!("{} reduced to a' of dim {}", self.name(), a_prime.dim()));

        let (heber_einstein, heber_note) = if a_prime.is_zero() {
            (None, "not applicable: a' = 0".to_string())
        } else if self.einstein_check().is_none() {
            (None, "not applicable: ambient metric is not Einstein".to_string())
        } else if !self.is_iwasawa_type()?.strictly_passed() {
            (
                None,
                "not applicable: ambient metric is not of Iwasawa type".to_string(),
            )
        } else {
            let h0 = self.mean_curvature_vector();
            let inside = a_prime.contains(&h0);
            (Some(inside), format!("H0 = {}", alg.describe_vector(&h0)))
        };
        let soliton = sub.algebraic_soliton_solve();
        Ok(RankReduction {
            sub,
            basis,
            heber_einstein,
            heber_note,
            soliton,
        })
    }
}

fn combine_matrices<S: Scalar>(coeffs: &[S], mats: &[Matrix<S>], n: usize) -> Matrix<S> {
    let mut out = Matrix::zeros(n, n);
    for (c, m) in coeffs.iter().zip(mats) {
        if !c.is_zero() {
            out = out.add(&m.scale(c));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieAlgebra;
    use crate::scalar::QSqrt2;

    fn q(s: &str) -> QSqrt2 {
        s.parse().unwrap()
    }

    fn heisenberg() -> MetricLieAlgebra<QSqrt2> {
        let alg = LieAlgebra::builder("heis", vec!["e1".into(), "e2".into(), "e3".into()])
            .bracket(0, 1, &[(2, q("1"))])
            .build()
            .unwrap();
        MetricLieAlgebra::orthonormal(alg).unwrap()
    }

    #[test]
    fn abelian_is_flat_einstein() {
        let m = MetricLieAlgebra::orthonormal(LieAlgebra::<QSqrt2>::abelian(3)).unwrap();
        assert_eq!(m.einstein_check(), Some(q("0")));
        let v = m.algebraic_soliton_solve();
        assert_eq!(v.status, SolitonStatus::Einstein);
        assert_eq!(v.type_label, SolitonType::Steady);
    }

    #[test]
    fn heisenberg_nilsoliton() {
        let m = heisenberg();
        assert!(m.einstein_check().is_none());
        let v = m.algebraic_soliton_solve();
        assert_eq!(v.status, SolitonStatus::NontrivialSolvsoliton);
        assert_eq!(v.soliton_constant, q("-3/2"));
        assert_eq!(v.derivation, Matrix::diagonal(&[q("1"), q("1"), q("2")]));
        assert!(v.residual.is_zero() && v.leibniz_residual.is_zero());
        assert_eq!(v.type_label, SolitonType::Expanding);
        // The nilradical is everything, so a = 0 and only condition (1) bites.
        let l = m.lauret_conditions(&q("-3/2")).unwrap();
        assert!(l.overall());
        assert!(!m.lauret_conditions(&q("-1")).unwrap().overall());
        assert!(matches!(m.lauret_conditions(&q("1")), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn hyperbolic_space_is_einstein_and_lauret() {
        // [A, X_i] = X_i: real hyperbolic space, Ric = -(n-1) I.
        let alg = LieAlgebra::builder("rh3", vec!["A".into(), "X".into(), "Y".into()])
            .bracket(0, 1, &[(1, q("1"))])
            .bracket(0, 2, &[(2, q("1"))])
            .build()
            .unwrap();
        let m = MetricLieAlgebra::orthonormal(alg).unwrap();
        assert_eq!(m.einstein_check(), Some(q("-2")));
        assert!(m.lauret_conditions(&q("-2")).unwrap().overall());
        assert!(!m.lauret_conditions(&q("-1")).unwrap().trace_condition.passed());
    }

    #[test]
    fn scale_equivariance() {
        let m = heisenberg();
        let c = m.algebraic_soliton_solve().soliton_constant;
        let m2 = m.scaled(&q("2")).unwrap();
        assert_eq!(m2.algebraic_soliton_solve().soliton_constant, c / q("2"));
    }
}
