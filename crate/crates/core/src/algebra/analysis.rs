use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::Scalar;

use super::{LieAlgebra, Subspace};

/// Dimensions of the derived and lower central series, each listed down to
/// the point where it stabilizes (a trailing 0 means it reached zero).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    pub derived_dims: Vec<usize>,
    pub lower_central_dims: Vec<usize>,
    pub is_solvable: bool,
    pub is_nilpotent: bool,
}

impl SeriesReport {
    /// Derived length (number of brackets needed to reach zero).
    pub fn derived_length(&self) -> Option<usize> {
        self.is_solvable.then(|| self.derived_dims.len() - 1)
    }

    /// Nilpotency step.
    pub fn nilpotency_step(&self) -> Option<usize> {
        self.is_nilpotent.then(|| self.lower_central_dims.len() - 1)
    }
}

impl<S: Scalar> LieAlgebra<S> {
    pub fn derived_algebra(&self) -> Subspace<S> {
        let n = self.dim();
        let vs: Vec<_> = self
            .entries()
            .map(|e| {
                let mut v = linalg::zeros(n);
                for (k, c) in e.terms {
                    v[k] = c;
                }
                v
            })
            .collect();
        Subspace::span(n, &vs)
    }

    pub fn series_analysis(&self) -> SeriesReport {
        let n = self.dim();
        let full = Subspace::full(n);

        let mut derived = vec![full.clone()];
        loop {
            let last = derived.last().expect("nonempty");
            let next = Subspace::bracket(self, last, last);
            let done = next.dim() >= last.dim() || next.is_zero();
            derived.push(next);
            if done {
                break;
            }
        }
        let lower = self.lower_central_series(&full);

        let derived_dims: Vec<usize> = dedup_tail(derived.iter().map(|s| s.dim()).collect());
        let lower_central_dims = dedup_tail(lower.iter().map(|s| s.dim()).collect());
        SeriesReport {
            is_solvable: *derived_dims.last().expect("nonempty") == 0,
            is_nilpotent: *lower_central_dims.last().expect("nonempty") == 0,
            derived_dims,
            lower_central_dims,
        }
    }

    /// `C¹ = N`, `Cᵏ⁺¹ = [N, Cᵏ]` for a subalgebra `N`, until it stabilizes.
    pub fn lower_central_series(&self, sub: &Subspace<S>) -> Vec<Subspace<S>> {
        let mut series = vec![sub.clone()];
        loop {
            let last = series.last().expect("nonempty");
            let next = Subspace::bracket(self, sub, last);
            let done = next.dim() >= last.dim() || next.is_zero();
            series.push(next);
            if done {
                break;
            }
        }
        series
    }

    /// True when `sub` (a subalgebra) is nilpotent.
    pub fn is_nilpotent_subalgebra(&self, sub: &Subspace<S>) -> bool {
        self.lower_central_series(sub).last().is_some_and(|s| s.is_zero())
    }

    /// `ad_x` nilpotent, tested as `(ad_x)^dim = 0`.
    pub fn is_ad_nilpotent(&self, x: &[S]) -> bool {
        let ad = self.ad(x).expect("length checked by caller");
        let mut p = ad.clone();
        for _ in 1..self.dim() {
            p = p.mul(&ad);
            if p.entries().iter().all(|v| v.negligible(1.0)) {
                return true;
            }
        }
        p.entries().iter().all(|v| v.negligible(1.0))
    }

    /// Maximal nilpotent ideal of a solvable algebra.
    ///
    /// Starts from `[g, g]` and greedily adjoins basis vectors whose `ad` is
    /// nilpotent while the enlarged space stays a nilpotent ideal. The result
    /// is then checked: ideal, nilpotent, contains `[g, g]`, and no basis
    /// vector outside it extends it to a nilpotent ideal. Any failure of
    /// those checks is returned as an error rather than a wrong answer.
    pub fn nilradical(&self) -> Result<Subspace<S>> {
        if !self.series_analysis().is_solvable {
            return Err(Error::NotSolvable);
        }
        let n = self.dim();
        let derived = self.derived_algebra();
        let mut nil = derived.clone();
        for i in 0..n {
            let ei = linalg::unit(n, i);
            if let Some(ext) = self.nilpotent_ideal_extension(&nil, &ei) {
                nil = ext;
            }
        }

        if !nil.is_ideal_in(self) {
            return Err(Error::NilradicalVerification("result is not an ideal".into()));
        }
        if !self.is_nilpotent_subalgebra(&nil) {
            return Err(Error::NilradicalVerification("result is not nilpotent".into()));
        }
        if !nil.contains_subspace(&derived) {
            return Err(Error::NilradicalVerification("result misses [g, g]".into()));
        }
        for i in 0..n {
            let ei = linalg::unit(n, i);
            if self.nilpotent_ideal_extension(&nil, &ei).is_some() {
                return Err(Error::NilradicalVerification(format!(
                    "not maximal: {} extends it",
                    self.labels()[i]
                )));
            }
        }
        Ok(nil)
    }

    fn nilpotent_ideal_extension(&self, nil: &Subspace<S>, x: &[S]) -> Option<Subspace<S>> {
        if nil.contains(x) || !self.is_ad_nilpotent(x) {
            return None;
        }
        let ext = nil.with_vector(x);
        (ext.is_ideal_in(self) && self.is_nilpotent_subalgebra(&ext)).then_some(ext)
    }

    /// `B(x, y) = tr(ad_x ∘ ad_y)` on the basis.
    pub fn killing_form(&self) -> Matrix<S> {
        let n = self.dim();
        let ads: Vec<Matrix<S>> = (0..n).map(|i| self.ad_basis(i)).collect();
        let mut b = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                // tr(AB) = Σ_{k,l} A_kl B_lk
                let mut t = S::zero();
                for k in 0..n {
                    for l in 0..n {
                        let a = &ads[i][(k, l)];
                        let c = &ads[j][(l, k)];
                        if !a.is_zero() && !c.is_zero() {
                            t += a.clone() * c.clone();
                        }
                    }
                }
                b[(i, j)] = t.clone();
                b[(j, i)] = t;
            }
        }
        b
    }
}

fn dedup_tail(mut dims: Vec<usize>) -> Vec<usize> {
    while dims.len() >= 2 && dims[dims.len() - 1] == dims[dims.len() - 2] {
        dims.pop();
    }
    dims
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QSqrt2;

    fn q(s: &str) -> QSqrt2 {
        s.parse().unwrap()
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("e{i}")).collect()
    }

    #[test]
    fn abelian_series() {
        let a = LieAlgebra::<QSqrt2>::abelian(3);
        let s = a.series_analysis();
        assert!(s.is_solvable && s.is_nilpotent);
        assert_eq!(s.derived_length(), Some(1));
        assert_eq!(s.nilpotency_step(), Some(1));
        assert_eq!(a.nilradical().unwrap(), Subspace::full(3));
        assert!(a.killing_form().is_zero());
    }

    #[test]
    fn affine_line_algebra() {
        // [A, X] = X
        let g = LieAlgebra::builder("aff", labels(2))
            .bracket(0, 1, &[(1, q("1"))])
            .build()
            .unwrap();
        let s = g.series_analysis();
        assert!(s.is_solvable && !s.is_nilpotent);
        assert_eq!(s.derived_dims, vec![2, 1, 0]);
        assert_eq!(s.lower_central_dims, vec![2, 1]);
        assert_eq!(g.nilradical().unwrap(), Subspace::coordinate(2, &[1]));
        let b = g.killing_form();
        assert_eq!(b[(0, 0)], q("1"));
        assert!(b[(1, 1)].is_zero() && b[(0, 1)].is_zero());
    }

    #[test]
    fn non_solvable_nilradical_is_rejected() {
        // sl(2): [h,e]=2e, [h,f]=-2f, [e,f]=h
        let sl2 = LieAlgebra::builder("sl2", labels(3))
            .bracket(0, 1, &[(1, q("2"))])
            .bracket(0, 2, &[(2, q("-2"))])
            .bracket(1, 2, &[(0, q("1"))])
            .build()
            .unwrap();
        assert!(!sl2.series_analysis().is_solvable);
        assert!(matches!(sl2.nilradical(), Err(Error::NotSolvable)));
        // Killing form of sl(2): B(h,h) = 8, B(e,f) = 4.
        let b = sl2.killing_form();
        assert_eq!(b[(0, 0)], q("8"));
        assert_eq!(b[(1, 2)], q("4"));
    }
}
