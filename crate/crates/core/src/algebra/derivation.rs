use crate::linalg::{self, Matrix, SparseEliminator, Vector};
use crate::scalar::Scalar;

use super::LieAlgebra;

impl<S: Scalar> LieAlgebra<S> {
    /// Basis of `Der(g)`.
    ///
    /// Unknown `D_lm` (coefficient of `e_l` in `D e_m`) sits in column
    /// `l * n + m`. For each `i < j` and output index `k` the Leibniz rule
    /// gives one row:
    /// `Σ_p c_ij^p D_kp − Σ_l c_lj^k D_li − Σ_l c_il^k D_lj = 0`.
    pub fn derivation_space(&self) -> Vec<Matrix<S>> {
        let n = self.dim();
        let mut elim = SparseEliminator::new(n * n);
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let mut row: Vec<(usize, S)> = Vec::new();
                    for p in 0..n {
                        let c = self.structure_constant(i, j, p);
                        if !c.is_zero() {
                            row.push((k * n + p, c.clone()));
                        }
                    }
                    for l in 0..n {
                        let a = self.structure_constant(l, j, k);
                        if !a.is_zero() {
                            row.push((l * n + i, -a.clone()));
                        }
                        let b = self.structure_constant(i, l, k);
                        if !b.is_zero() {
                            row.push((l * n + j, -b.clone()));
                        }
                    }
                    if !row.is_empty() {
                        elim.push(row);
                    }
                }
            }
        }
        elim.nullspace()
            .into_iter()
            .map(|v| Matrix::from_fn(n, n, |l, m| v[l * n + m].clone()))
            .collect()
    }

    /// Max-norm of `D[x, y] − [Dx, y] − [x, Dy]` over basis pairs.
    pub fn leibniz_residual(&self, d: &Matrix<S>) -> S {
        let n = self.dim();
        let mut worst = S::zero();
        for i in 0..n {
            let di = d.column(i);
            for j in i + 1..n {
                let dj = d.column(j);
                let (ei, ej) = (linalg::unit(n, i), linalg::unit(n, j));
                let lhs = d.mul_vec(&self.bracket_basis(i, j));
                let rhs = linalg::add(&self.bracket_unchecked(&di, &ej), &self.bracket_unchecked(&ei, &dj));
                let r = linalg::max_abs(&linalg::sub(&lhs, &rhs));
                if r > worst {
                    worst = r;
                }
            }
        }
        worst
    }

    pub fn is_derivation(&self, d: &Matrix<S>, tol: f64) -> bool {
        self.leibniz_residual(d).within(tol)
    }

    /// Coordinates of `d` in the derivation basis, when it lies in the span.
    pub fn derivation_coordinates(&self, basis: &[Matrix<S>], d: &Matrix<S>) -> Option<Vector<S>> {
        let n = self.dim();
        let flat: Vec<Vector<S>> = basis.iter().map(|m| m.entries().to_vec()).collect();
        let solver = linalg::CoordinateSolver::new(&flat, n * n).ok()?;
        let tol = if S::EXACT { 0.0 } else { 1e-9 * d.max_abs().max(1.0) };
        solver.coordinates(d.entries(), tol).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QSqrt2;
    use proptest::prelude::*;

    fn q(s: &str) -> QSqrt2 {
        s.parse().unwrap()
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("e{i}")).collect()
    }

    fn heisenberg() -> LieAlgebra<QSqrt2> {
        LieAlgebra::builder("heis", labels(3))
            .bracket(0, 1, &[(2, q("1"))])
            .build()
            .unwrap()
    }

    #[test]
    fn abelian_derivations_are_everything() {
        assert_eq!(LieAlgebra::<QSqrt2>::abelian(3).derivation_space().len(), 9);
    }

    #[test]
    fn affine_line_derivations() {
        let g = LieAlgebra::builder("aff", labels(2))
            .bracket(0, 1, &[(1, q("1"))])
            .build()
            .unwrap();
        let der = g.derivation_space();
        assert_eq!(der.len(), 2);
        for d in &der {
            // D maps everything into span{X}.
            assert!(d[(0, 0)].is_zero() && d[(0, 1)].is_zero());
            assert!(g.leibniz_residual(d).is_zero());
        }
    }

    #[test]
    fn heisenberg_derivations_close_under_commutator() {
        let h = heisenberg();
        let der = h.derivation_space();
        // gl(2) on span{e0, e1} plus the 2 maps into the center.
        assert_eq!(der.len(), 6);
        for a in &der {
            for b in &der {
                let c = a.commutator(b);
                assert!(h.leibniz_residual(&c).is_zero());
                assert!(h.derivation_coordinates(&der, &c).is_some());
            }
        }
        let not_der = Matrix::diagonal(&[q("1"), q("0"), q("0")]);
        assert!(!h.is_derivation(&not_der, 0.0));
        assert!(h.derivation_coordinates(&der, &not_der).is_none());
    }

    proptest! {
        #[test]
        fn inner_derivations_are_derivations(xs in proptest::collection::vec(-5i64..5, 3)) {
            let h = heisenberg();
            let x: Vec<QSqrt2> = xs.iter().map(|&v| QSqrt2::from_i64(v)).collect();
            let ad = h.ad(&x).unwrap();
            prop_assert!(h.leibniz_residual(&ad).is_zero());
            prop_assert!(h.derivation_coordinates(&h.derivation_space(), &ad).is_some());
        }
    }
}
