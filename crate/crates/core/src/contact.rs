//! Almost contact metric structures on metric Lie algebras, the `h`-tensor,
//! (κ, μ)-nullity fitting, D-homothetic deformations, hypersurface-induced
//! structures and structure-preserving isomorphisms.
//!
//! All tensors are left-invariant, so everything reduces to linear algebra on
//! the Lie algebra. `dη(x, y) = −½ η([x, y])`.

use std::fmt;

use serde::Serialize;

use crate::algebra::IDENTITY_TOL;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::report::{CheckRecord, ScalarValue, Status, VerificationReport};
use crate::riemannian::MetricLieAlgebra;
use crate::scalar::Scalar;

/// `(η, ξ, φ)` on a metric Lie algebra, with `η` the metric dual of a unit `ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlmostContactStructure<S: Scalar> {
    base: MetricLieAlgebra<S>,
    xi: Vector<S>,
    eta: Vector<S>,
    phi: Matrix<S>,
}

impl<S: Scalar> AlmostContactStructure<S> {
    /// `η` is taken to be the metric dual of `ξ`.
    pub fn new(base: MetricLieAlgebra<S>, xi: Vector<S>, phi: Matrix<S>) -> Result<Self> {
        let eta = base.flat(&xi);
        Self::from_parts(base, xi, eta, phi)
    }

    /// Rejects a non-unit `ξ` and an `η` that is not its metric dual.
    pub fn from_parts(base: MetricLieAlgebra<S>, xi: Vector<S>, eta: Vector<S>, phi: Matrix<S>) -> Result<Self> {
        let n = base.dim();
        for len in [xi.len(), eta.len(), phi.rows(), phi.cols()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, got: len });
            }
        }
        let tol = tol_for::<S>();
        if !(base.norm_sq(&xi) - S::one()).within(tol) {
            return Err(Error::InvalidStructure("xi is not a unit vector".into()));
        }
        let dual = base.flat(&xi);
        if !linalg::max_abs(&linalg::sub(&dual, &eta)).within(tol) {
            return Err(Error::InvalidStructure("eta is not the metric dual of xi".into()));
        }
        Ok(Self { base, xi, eta, phi })
    }

    pub fn base(&self) -> &MetricLieAlgebra<S> {
        &self.base
    }

    pub fn xi(&self) -> &[S] {
        &self.xi
    }

    pub fn eta(&self) -> &[S] {
        &self.eta
    }

    pub fn phi(&self) -> &Matrix<S> {
        &self.phi
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// `Φ(x, y) = g(x, φy)` on the basis.
    pub fn fundamental_form(&self) -> Matrix<S> {
        self.base.gram().mul(&self.phi)
    }

    /// `dη(e_i, e_j) = −½ η([e_i, e_j])`.
    pub fn d_eta(&self) -> Matrix<S> {
        let n = self.dim();
        let alg = self.base.alg();
        Matrix::from_fn(n, n, |i, j| {
            -(linalg::dot(&self.eta, &alg.bracket_basis(i, j)) * S::half())
        })
    }

    /// Almost-contact identities, the associated-metric identity, `Φ = dη`
    /// and nondegeneracy of `dη` on `ker η`, in that order.
    pub fn validate_structure(&self) -> VerificationReport {
        let n = self.dim();
        let g = self.base.gram();
        let labels = self.base.labels();
        let id = Matrix::identity(n);
        let xi_eta = outer(&self.xi, &self.eta);
        let mut report = VerificationReport::new(format!("contact metric structure on {}", self.base.name()));

        let e = linalg::dot(&self.eta, &self.xi) - S::one();
        report.push(residual_record("eta-xi", e.abs(), None));

        let phi2 = self.phi.mul(&self.phi).add(&id).sub(&xi_eta);
        report.push(matrix_record("phi-squared", &phi2, labels));

        let px = self.phi.mul_vec(&self.xi);
        report.push(residual_record("phi-xi", linalg::max_abs(&px), None));

        let ep = self.phi.transpose().mul_vec(&self.eta);
        report.push(residual_record("eta-phi", linalg::max_abs(&ep), None));

        let compat = self
            .phi
            .transpose()
            .mul(g)
            .mul(&self.phi)
            .sub(&g.sub(&outer(&self.eta, &self.eta)));
        report.push(matrix_record("associated-metric", &compat, labels));

        let d = self.fundamental_form().sub(&self.d_eta());
        report.push(matrix_record("phi-equals-d-eta", &d, labels));

        report.push(self.nondegeneracy());
        report
    }

    /// `dη(ξ, ·) = 0` and `det(dη|ker η) ≠ 0`.
    fn nondegeneracy(&self) -> CheckRecord {
        let de = self.d_eta();
        let xi_contract = de.transpose().mul_vec(&self.xi);
        let tol = tol_for::<S>();
        if !linalg::max_abs(&xi_contract).within(tol) {
            return CheckRecord::fail("d-eta-nondegenerate").with_witness("d eta(xi, .) does not vanish");
        }
        let ker = Matrix::from_rows(vec![self.eta.clone()]).nullspace();
        let k = ker.len();
        let restricted = Matrix::from_fn(k, k, |a, b| linalg::dot(&ker[a], &de.mul_vec(&ker[b])));
        let det = restricted.determinant();
        let ok = if S::EXACT {
            !det.is_zero()
        } else {
            det.to_f64().abs() > 1e-9 * restricted.max_abs().max(1.0).powi(k as i32)
        };
        CheckRecord::new("d-eta-nondegenerate", Status::from_bool(ok)).with_scalar("det", &det)
    }

    pub fn is_contact_metric(&self) -> bool {
        self.validate_structure().passed()
    }

    /// `h = ½ L_ξ φ`, `(L_ξ φ)(x) = [ξ, φx] − φ[ξ, x]`.
    pub fn h_tensor(&self) -> Matrix<S> {
        let ad = self.base.alg().ad(&self.xi).expect("xi has the algebra dimension");
        ad.mul(&self.phi).sub(&self.phi.mul(&ad)).scale(&S::half())
    }

    /// `h` symmetric, `hξ = 0`, `tr h = 0`, `hφ + φh = 0`.
    pub fn h_properties(&self) -> VerificationReport {
        let h = self.h_tensor();
        let labels = self.base.labels();
        let mut report = VerificationReport::new(format!("h-tensor of {}", self.base.name()));
        report.push(matrix_record("h-symmetric", &h.sub(&self.base.adjoint(&h)), labels));
        report.push(residual_record("h-xi", linalg::max_abs(&h.mul_vec(&self.xi)), None));
        report.push(residual_record("h-trace", h.trace().abs(), None));
        report.push(matrix_record(
            "h-anticommutes-phi",
            &h.mul(&self.phi).add(&self.phi.mul(&h)),
            labels,
        ));
        report
    }

    /// Least-squares fit of `R(x, y)ξ = (κI + μh)(η(y)x − η(x)y)` over all
    /// basis pairs `i < j`.
    pub fn kappa_mu_fit(&self) -> KappaMuFit<S> {
        let n = self.dim();
        let h = self.h_tensor();
        let pkg = self.base.curvature_package();
        let mut rows: Vec<(Vector<S>, Vector<S>, Vector<S>)> = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                let rhs = pkg.riemann(i, j).mul_vec(&self.xi);
                let mut v = linalg::zeros(n);
                v[i] += self.eta[j].clone();
                v[j] -= self.eta[i].clone();
                let hv = h.mul_vec(&v);
                rows.push((rhs, v, hv));
            }
        }
        // Normal equations of the two-column system.
        let (mut aa, mut ab, mut bb, mut ar, mut br) = (S::zero(), S::zero(), S::zero(), S::zero(), S::zero());
        for (r, a, b) in &rows {
            aa += linalg::dot(a, a);
            ab += linalg::dot(a, b);
            bb += linalg::dot(b, b);
            ar += linalg::dot(a, r);
            br += linalg::dot(b, r);
        }
        let h_zero = if S::EXACT { h.is_zero() } else { h.max_abs() <= 1e-12 };
        let (kappa, mu) = if h_zero {
            let k = if aa.is_zero() { S::zero() } else { ar / aa };
            (k, MuValue::Indeterminate)
        } else {
            let det = aa.clone() * bb.clone() - ab.clone() * ab.clone();
            let degenerate = if S::EXACT {
                det.is_zero()
            } else {
                det.to_f64().abs() <= 1e-12 * (aa.to_f64() * bb.to_f64()).max(1e-300)
            };
            if degenerate {
                let k = if aa.is_zero() {
                    S::zero()
                } else {
                    ar.clone() / aa.clone()
                };
                (k, MuValue::Indeterminate)
            } else {
                let k = (bb.clone() * ar.clone() - ab.clone() * br.clone()) / det.clone();
                let m = (aa.clone() * br - ab * ar) / det;
                (k, MuValue::Value(m))
            }
        };
        let mut residual = S::zero();
        for (r, a, b) in &rows {
            let mut fit = linalg::scale(&kappa, a);
            if let MuValue::Value(m) = &mu {
                fit = linalg::axpy(&fit, m, b);
            }
            let d = linalg::max_abs(&linalg::sub(r, &fit));
            if d > residual {
                residual = d;
            }
        }
        KappaMuFit {
            kappa,
            mu,
            residual,
            equations_used: rows.len() * n,
        }
    }

    /// `(aη, ξ/a, φ, a g + a(a − 1) η⊗η)` for `a > 0`.
    pub fn d_homothetic(&self, a: &S) -> Result<Self> {
        if !a.is_positive() || a.is_zero() {
            return Err(Error::InvalidParameter(format!(
                "deformation parameter must be positive, got {a}"
            )));
        }
        let g = self.base.gram();
        let gbar = g
            .scale(a)
            .add(&outer(&self.eta, &self.eta).scale(&(a.clone() * (a.clone() - S::one()))));
        let base = self.base.with_gram(gbar)?;
        let xi = linalg::scale(&a.recip(), &self.xi);
        let eta = linalg::scale(a, &self.eta);
        Self::from_parts(base, xi, eta, self.phi.clone())
    }

    /// Verifies that `map` (column `k` = image of the `k`-th basis vector of
    /// `self`) is a Lie algebra isomorphism onto `dst`, an isometry, and
    /// intertwines `ξ`, `η` and `φ`.
    pub fn check_isomorphism(&self, map: &Matrix<S>, dst: &Self) -> Result<VerificationReport> {
        check_structure_isomorphism(map, self, dst)
    }
}

/// See [`AlmostContactStructure::check_isomorphism`].
pub fn check_structure_isomorphism<S: Scalar>(
    map: &Matrix<S>,
    src: &AlmostContactStructure<S>,
    dst: &AlmostContactStructure<S>,
) -> Result<VerificationReport> {
    let n = src.dim();
    if dst.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: dst.dim(),
        });
    }
    if map.rows() != n || map.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: map.rows().max(map.cols()),
        });
    }
    let det = map.determinant();
    if det.within(if S::EXACT { 0.0 } else { 1e-12 }) {
        return Err(Error::Singular);
    }
    let (sa, da) = (src.base.alg(), dst.base.alg());
    let sl = src.base.labels();
    let mut report = VerificationReport::new(format!("isomorphism {} -> {}", src.base.name(), dst.base.name()));

    let mut worst = S::zero();
    let mut witness = None;
    for i in 0..n {
        let fi = map.column(i);
        for j in i + 1..n {
            let lhs = map.mul_vec(&sa.bracket_basis(i, j));
            let rhs = da.bracket_unchecked(&fi, &map.column(j));
            let d = linalg::max_abs(&linalg::sub(&lhs, &rhs));
            if witness.is_none() && !d.within(IDENTITY_TOL) {
                witness = Some(format!("pair ({}, {})", sl[i], sl[j]));
            }
            if d > worst {
                worst = d;
            }
        }
    }
    report.push(residual_record("bracket-homomorphism", worst, witness));

    let pulled = map.transpose().mul(dst.base.gram()).mul(map);
    report.push(matrix_record("isometry", &pulled.sub(src.base.gram()), sl));

    let xi = linalg::sub(&map.mul_vec(&src.xi), &dst.xi);
    report.push(residual_record("xi", linalg::max_abs(&xi), None));

    let eta = linalg::sub(&map.transpose().mul_vec(&dst.eta), &src.eta);
    report.push(residual_record("eta", linalg::max_abs(&eta), None));

    let phi = map.mul(&src.phi).sub(&dst.phi.mul(map));
    report.push(matrix_record("phi", &phi, sl));
    Ok(report)
}

/// Structure induced on the hypersurface subalgebra `ambient ⊖ ℝN` by a
/// complex structure `J`: `ξ = −JN`, `η = ⟨·, ξ⟩`, `φx = Jx − η(x)N`.
///
/// `basis` fixes the basis of the subalgebra (each vector must be orthogonal
/// to `N`); without it the canonical basis of `N^⊥` is used. Returns the
/// structure and the basis used, in ambient coordinates.
pub fn induced_hypersurface_structure<S: Scalar>(
    ambient: &MetricLieAlgebra<S>,
    j: &Matrix<S>,
    normal: &[S],
    basis: Option<(Vec<Vector<S>>, Vec<String>)>,
) -> Result<(AlmostContactStructure<S>, Vec<Vector<S>>)> {
    let n = ambient.dim();
    if normal.len() != n || j.rows() != n || j.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: normal.len(),
        });
    }
    let tol = tol_for::<S>();
    let id = Matrix::identity(n);
    if !j.mul(j).add(&id).max_abs_exact().within(tol) {
        return Err(Error::InvalidComplexStructure("J^2 != -I".into()));
    }
    let g = ambient.gram();
    if !j.transpose().mul(g).mul(j).sub(g).max_abs_exact().within(tol) {
        return Err(Error::InvalidComplexStructure("J is not orthogonal".into()));
    }
    if !(ambient.norm_sq(normal) - S::one()).within(tol) {
        return Err(Error::InvalidParameter("normal vector is not a unit vector".into()));
    }

    let (basis, labels) = match basis {
        Some((b, l)) => {
            if b.len() + 1 != n {
                return Err(Error::DimensionMismatch {
                    expected: n - 1,
                    got: b.len(),
                });
            }
            if b.iter().any(|v| !ambient.inner(v, normal).within(tol)) {
                return Err(Error::InvalidParameter("basis vector not orthogonal to N".into()));
            }
            (b, l)
        }
        None => {
            let line = crate::algebra::Subspace::span(n, &[normal.to_vec()]);
            let perp = line.orthogonal_complement(g);
            let b = perp.basis().to_vec();
            let l = (0..b.len()).map(|i| format!("u{i}")).collect();
            (b, l)
        }
    };
    let sub = ambient.restrict(&basis, labels)?;
    let solver = linalg::CoordinateSolver::new(&basis, n)?;
    let ctol = if S::EXACT { 0.0 } else { 1e-9 };

    let xi_amb = linalg::scale(&-S::one(), &j.mul_vec(normal));
    let xi = solver
        .coordinates(&xi_amb, ctol)
        .map_err(|_| Error::InvalidStructure("xi = -JN is not tangent to the hypersurface".into()))?;
    let k = basis.len();
    let mut phi = Matrix::zeros(k, k);
    for (c, b) in basis.iter().enumerate() {
        let eta_b = ambient.inner(b, &xi_amb);
        let img = linalg::axpy(&j.mul_vec(b), &-eta_b, normal);
        let coords = solver
            .coordinates(&img, ctol)
            .map_err(|_| Error::InvalidStructure("phi does not preserve the hypersurface".into()))?;
        phi.set_column(c, &coords);
    }
    Ok((AlmostContactStructure::new(sub, xi, phi)?, basis))
}

/// Fitted (κ, μ) of the nullity condition.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaMuFit<S> {
    pub kappa: S,
    pub mu: MuValue<S>,
    /// Max-norm of the defect over all equation components.
    pub residual: S,
    pub equations_used: usize,
}

impl<S: Scalar> KappaMuFit<S> {
    /// Residual vanishes (exactly, or within `tol` for floats).
    pub fn is_kappa_mu_space(&self, tol: f64) -> bool {
        self.residual.within(tol)
    }

    pub fn to_record(&self, tol: f64) -> CheckRecord {
        let mut rec = CheckRecord::new("kappa-mu", Status::from_bool(self.is_kappa_mu_space(tol)))
            .with_residual(&self.residual)
            .with_scalar("kappa", &self.kappa);
        rec = match &self.mu {
            MuValue::Value(m) => rec.with_scalar("mu", m),
            MuValue::Indeterminate => rec.with_witness("mu indeterminate: h = 0"),
        };
        rec.with_witness(format!("equations used: {}", self.equations_used))
    }
}

/// μ is undetermined when the `h` column of the system vanishes.
#[derive(Debug, Clone, PartialEq)]
pub enum MuValue<S> {
    Value(S),
    Indeterminate,
}

impl<S: Scalar> MuValue<S> {
    pub fn value(&self) -> Option<&S> {
        match self {
            MuValue::Value(v) => Some(v),
            MuValue::Indeterminate => None,
        }
    }
}

impl<S: Scalar> fmt::Display for MuValue<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MuValue::Value(v) => write!(f, "{v}"),
            MuValue::Indeterminate => f.write_str("indeterminate"),
        }
    }
}

impl<S: Scalar> Serialize for MuValue<S> {
    fn serialize<Z: serde::Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        match self {
            MuValue::Value(v) => ScalarValue::of(v).serialize(s),
            MuValue::Indeterminate => s.serialize_str("indeterminate"),
        }
    }
}

fn tol_for<S: Scalar>() -> f64 {
    if S::EXACT {
        0.0
    } else {
        IDENTITY_TOL
    }
}

fn outer<S: Scalar>(a: &[S], b: &[S]) -> Matrix<S> {
    Matrix::from_fn(a.len(), b.len(), |i, j| a[i].clone() * b[j].clone())
}

fn residual_record<S: Scalar>(name: &str, r: S, witness: Option<String>) -> CheckRecord {
    let ok = r.within(tol_for::<S>()) && witness.is_none();
    let mut rec = CheckRecord::new(name, Status::from_bool(ok)).with_residual(&r);
    if let Some(w) = witness {
        rec = rec.with_witness(w);
    }
    rec
}

/// Max-norm of `d` with the first offending entry as witness.
fn matrix_record<S: Scalar>(name: &str, d: &Matrix<S>, labels: &[String]) -> CheckRecord {
    let tol = tol_for::<S>();
    let witness = (0..d.rows())
        .flat_map(|r| (0..d.cols()).map(move |c| (r, c)))
        .find(|&(r, c)| !d[(r, c)].within(tol))
        .map(|(r, c)| {
            let lab = |i: usize| labels.get(i).cloned().unwrap_or_else(|| i.to_string());
            format!("entry ({}, {}) = {}", lab(r), lab(c), d[(r, c)].to_exact_string())
        });
    residual_record(name, d.max_abs_exact(), witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieAlgebra;
    use crate::scalar::QSqrt2;

    fn q(s: &str) -> QSqrt2 {
        s.parse().unwrap()
    }

    /// Heisenberg algebra [X, Y] = 2ξ with its standard Sasakian structure.
    fn heisenberg_sasakian() -> AlmostContactStructure<QSqrt2> {
        let alg = LieAlgebra::builder("h3", vec!["xi".into(), "X".into(), "Y".into()])
            .bracket(1, 2, &[(0, q("2"))])
            .build()
            .unwrap();
        let m = MetricLieAlgebra::orthonormal(alg).unwrap();
        let mut phi = Matrix::zeros(3, 3);
        phi[(2, 1)] = q("1");
        phi[(1, 2)] = q("-1");
        AlmostContactStructure::new(m, linalg::unit(3, 0), phi).unwrap()
    }

    #[test]
    fn sasakian_heisenberg() {
        let s = heisenberg_sasakian();
        assert!(s.validate_structure().strictly_passed(), "{}", s.validate_structure());
        assert!(s.h_tensor().is_zero());
        let fit = s.kappa_mu_fit();
        assert_eq!(fit.kappa, q("1"));
        assert_eq!(fit.mu, MuValue::Indeterminate);
        assert!(fit.residual.is_zero());
    }

    #[test]
    fn abelian_is_almost_contact_only() {
        let m = MetricLieAlgebra::orthonormal(LieAlgebra::<QSqrt2>::abelian(3)).unwrap();
        let mut phi = Matrix::zeros(3, 3);
        phi[(2, 1)] = q("1");
        phi[(1, 2)] = q("-1");
        let s = AlmostContactStructure::new(m, linalg::unit(3, 0), phi).unwrap();
        let rep = s.validate_structure();
        for name in ["eta-xi", "phi-squared", "phi-xi", "eta-phi", "associated-metric"] {
            assert!(rep.check(name).unwrap().passed(), "{name}");
        }
        assert!(!rep.check("phi-equals-d-eta").unwrap().passed());
        assert!(!rep.check("d-eta-nondegenerate").unwrap().passed());
    }

    #[test]
    fn construction_rejects_bad_xi_and_eta() {
        let m = MetricLieAlgebra::orthonormal(LieAlgebra::<QSqrt2>::abelian(3)).unwrap();
        let phi = Matrix::zeros(3, 3);
        let two = linalg::scale(&q("2"), &linalg::unit(3, 0));
        assert!(matches!(
            AlmostContactStructure::new(m.clone(), two, phi.clone()),
            Err(Error::InvalidStructure(_))
        ));
        assert!(matches!(
            AlmostContactStructure::from_parts(m, linalg::unit(3, 0), linalg::unit(3, 1), phi),
            Err(Error::InvalidStructure(_))
        ));
    }

    #[test]
    fn d_homothetic_identity_and_inverse() {
        let s = heisenberg_sasakian();
        assert_eq!(s.d_homothetic(&q("1")).unwrap(), s);
        let back = s.d_homothetic(&q("3")).unwrap().d_homothetic(&q("1/3")).unwrap();
        assert_eq!(back, s);
        assert!(matches!(s.d_homothetic(&q("0")), Err(Error::InvalidParameter(_))));
        assert!(matches!(s.d_homothetic(&q("-1")), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn identity_is_an_isomorphism() {
        let s = heisenberg_sasakian();
        let rep = s.check_isomorphism(&Matrix::identity(3), &s).unwrap();
        assert!(rep.strictly_passed());
        assert!(matches!(
            s.check_isomorphism(&Matrix::zeros(3, 3), &s),
            Err(Error::Singular)
        ));
    }
}
