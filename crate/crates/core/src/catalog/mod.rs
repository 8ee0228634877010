//! Named algebras: the contact family `g_{α,β}`, the solvable model `s(c)`
//! of the noncompact two-plane Grassmannian with its complex structure, the
//! hypersurface algebra `s_N`, the isomorphism `s_N → g_{0,2}`, the matrix
//! realization inside `so(2, n)`, and seeded random solvable algebras.
//!
//! The solvable model is parameterized by `m`, the number of `(Y, Z)` pairs.
//! The Grassmannian of 2-planes in `R^{k+2}` corresponds to `m = k − 2`.

mod matrix;
mod random;

pub use matrix::{build_so2n_iwasawa, verify_matrix_model, MatrixAlgebra, Root, RootDatum};
pub use random::random_solvable;

use crate::algebra::LieAlgebra;
use crate::contact::{induced_hypersurface_structure, AlmostContactStructure};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::riemannian::MetricLieAlgebra;
use crate::scalar::Scalar;

/// A catalog family with its parameters and their constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub name: &'static str,
    pub params: &'static [&'static str],
    pub constraints: &'static str,
    pub summary: &'static str,
}

pub const FAMILIES: &[Family] = &[
    Family {
        name: "g-alpha-beta",
        params: &["alpha", "beta", "n"],
        constraints: "n >= 2; beta > alpha >= 0 for the (kappa, mu) guarantee",
        summary: "contact metric algebra g_{alpha,beta} of dimension 2n+1",
    },
    Family {
        name: "solvable-model",
        params: &["c", "m"],
        constraints: "c > 0, m >= 1 (pairs Y_i, Z_i)",
        summary: "Kaehler solvable model s(c) of dimension 2m+4",
    },
    Family {
        name: "s-n",
        params: &["n"],
        constraints: "n >= 2",
        summary: "hypersurface algebra s_N in s(2*r2) with n-1 pairs, dimension 2n+1",
    },
    Family {
        name: "so2n-iwasawa",
        params: &["n", "c"],
        constraints: "n >= 3, c > 0",
        summary: "a + n of so(2,n) from explicit matrices, with the trace metric",
    },
    Family {
        name: "heisenberg",
        params: &[],
        constraints: "none",
        summary: "3-dimensional Heisenberg algebra [e1,e2] = e3, orthonormal",
    },
    Family {
        name: "random-solvable",
        params: &["seed"],
        constraints: "float backend only",
        summary: "seeded random solvable algebra with a random inner product",
    },
];

fn labels(prefix: &str, range: std::ops::RangeInclusive<usize>) -> impl Iterator<Item = String> + '_ {
    range.map(move |i| format!("{prefix}{i}"))
}

/// Parameter warnings for `g_{α,β}`: the algebra exists for all `(α, β)`,
/// the nullity values need `β > α ≥ 0`.
pub fn g_alpha_beta_warnings<S: Scalar>(alpha: &S, beta: &S) -> Vec<String> {
    let mut w = Vec::new();
    if alpha.is_negative() {
        w.push(format!(
            "alpha = {alpha} is negative; (kappa, mu) closed forms need alpha >= 0"
        ));
    }
    if beta <= alpha {
        w.push(format!(
            "beta = {beta} <= alpha = {alpha}; (kappa, mu) closed forms need beta > alpha"
        ));
    }
    w
}

/// `g_{α,β}` on the orthonormal basis `{ξ, X_1..X_n, Y_1..Y_n}` with
/// `φX_i = Y_i`, `φY_i = −X_i`, `φξ = 0`.
pub fn build_g_alpha_beta<S: Scalar>(alpha: &S, beta: &S, n: usize) -> Result<AlmostContactStructure<S>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("g_alpha_beta needs n >= 2, got {n}")));
    }
    let (a, b) = (alpha.clone(), beta.clone());
    let h = S::half();
    let two = S::from_i64(2);
    let a2h = h.clone() * a.clone() * a.clone();
    let b2h = h.clone() * b.clone() * b.clone();
    let abh = h * a.clone() * b.clone();
    let xi = 0;
    let x = |i: usize| i;
    let y = |i: usize| n + i;

    let mut names = vec!["xi".to_string()];
    names.extend(labels("X", 1..=n));
    names.extend(labels("Y", 1..=n));
    let mut bld = LieAlgebra::builder(format!("g_{{{alpha},{beta}}}(n={n})"), names);

    bld.add(xi, x(1), &[(x(2), -abh.clone()), (y(1), -a2h.clone())]);
    bld.add(xi, x(2), &[(x(1), abh.clone()), (y(2), -a2h.clone())]);
    bld.add(xi, y(1), &[(x(1), b2h.clone()), (y(2), -abh.clone())]);
    bld.add(xi, y(2), &[(x(2), b2h.clone()), (y(1), abh.clone())]);
    for i in 3..=n {
        bld.add(xi, x(i), &[(y(i), -a2h.clone())]);
        bld.add(xi, y(i), &[(x(i), b2h.clone())]);
    }
    for i in 2..=n {
        bld.add(x(1), x(i), &[(x(i), a.clone())]);
    }
    for i in (1..=n).filter(|&i| i != 2) {
        bld.add(y(2), y(i), &[(y(i), b.clone())]);
    }
    bld.add(x(1), y(1), &[(x(2), -b.clone()), (xi, two.clone())]);
    bld.add(x(2), y(1), &[(x(1), b.clone()), (y(2), -a.clone())]);
    bld.add(x(2), y(2), &[(y(1), a.clone()), (xi, two.clone())]);
    for i in 3..=n {
        bld.add(x(2), y(i), &[(x(i), b.clone())]);
        bld.add(x(i), y(1), &[(y(i), -a.clone())]);
        bld.add(x(i), y(i), &[(x(2), -b.clone()), (y(1), a.clone()), (xi, two.clone())]);
    }
    let metric = MetricLieAlgebra::orthonormal(bld.build()?)?;
    let dim = 2 * n + 1;
    let mut phi = Matrix::zeros(dim, dim);
    for i in 1..=n {
        phi[(y(i), x(i))] = S::one();
        phi[(x(i), y(i))] = -S::one();
    }
    AlmostContactStructure::new(metric, linalg::unit(dim, xi), phi)
}

/// `κ = 1 − (β² − α²)²/16`, `μ = 2 + (α² + β²)/2`.
pub fn closed_form_kappa_mu<S: Scalar>(alpha: &S, beta: &S) -> Result<(S, S)> {
    if beta <= alpha {
        return Err(Error::InvalidParameter(format!(
            "need beta > alpha, got alpha = {alpha}, beta = {beta}"
        )));
    }
    let a2 = alpha.clone() * alpha.clone();
    let b2 = beta.clone() * beta.clone();
    let d = b2.clone() - a2.clone();
    let kappa = S::one() - d.clone() * d / S::from_i64(16);
    let mu = S::from_i64(2) + (a2 + b2) / S::from_i64(2);
    Ok((kappa, mu))
}

/// `s(c)` with its orthonormal basis and complex structure `J`.
#[derive(Debug, Clone)]
pub struct SolvableModel<S: Scalar> {
    pub metric: MetricLieAlgebra<S>,
    pub j: Matrix<S>,
    pub model_scale: S,
    pub pairs: usize,
}

/// Basis positions in `s(c)`: `[A1, A2, X0, Y1..Ym, Z1..Zm, W0]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelIndex {
    pub pairs: usize,
}

impl ModelIndex {
    pub const A1: usize = 0;
    pub const A2: usize = 1;
    pub const X0: usize = 2;

    /// `Y_i`, 1-based.
    pub fn y(&self, i: usize) -> usize {
        2 + i
    }

    /// `Z_i`, 1-based.
    pub fn z(&self, i: usize) -> usize {
        2 + self.pairs + i
    }

    pub fn w0(&self) -> usize {
        3 + 2 * self.pairs
    }

    pub fn dim(&self) -> usize {
        4 + 2 * self.pairs
    }

    pub fn labels(&self) -> Vec<String> {
        let m = self.pairs;
        let mut l = vec!["A1".to_string(), "A2".into(), "X0".into()];
        l.extend(labels("Y", 1..=m));
        l.extend(labels("Z", 1..=m));
        l.push("W0".into());
        l
    }
}

/// `s(c)`: `[A1,X0] = cX0`, `[A1,Y_i] = −(c/2)Y_i`, `[A1,Z_i] = (c/2)Z_i`,
/// `[A2,Y_i] = (c/2)Y_i`, `[A2,Z_i] = (c/2)Z_i`, `[A2,W0] = cW0`,
/// `[X0,Y_i] = cZ_i`, `[Y_i,Z_i] = cW0`, orthonormal basis, and
/// `J: A1 ↦ −X0, A2 ↦ W0, Y_i ↦ Z_i` completed by `J² = −I`.
pub fn build_solvable_model<S: Scalar>(c: &S, m: usize) -> Result<SolvableModel<S>> {
    if !c.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "model scale must be positive, got {c}"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("need at least one pair (m >= 1)".into()));
    }
    let ix = ModelIndex { pairs: m };
    let (a1, a2, x0, w0) = (ModelIndex::A1, ModelIndex::A2, ModelIndex::X0, ix.w0());
    let ch = c.clone() * S::half();
    let mut b = LieAlgebra::builder(format!("s({c}), m={m}"), ix.labels());
    b.add(a1, x0, &[(x0, c.clone())]);
    b.add(a2, w0, &[(w0, c.clone())]);
    for i in 1..=m {
        let (y, z) = (ix.y(i), ix.z(i));
        b.add(a1, y, &[(y, -ch.clone())]);
        b.add(a1, z, &[(z, ch.clone())]);
        b.add(a2, y, &[(y, ch.clone())]);
        b.add(a2, z, &[(z, ch.clone())]);
        b.add(x0, y, &[(z, c.clone())]);
        b.add(y, z, &[(w0, c.clone())]);
    }
    let metric = MetricLieAlgebra::orthonormal(b.build()?)?;
    let n = ix.dim();
    let mut j = Matrix::zeros(n, n);
    let mut map = |from: usize, to: usize, sign: i64| j[(to, from)] = S::from_i64(sign);
    map(a1, x0, -1);
    map(x0, a1, 1);
    map(a2, w0, 1);
    map(w0, a2, -1);
    for i in 1..=m {
        map(ix.y(i), ix.z(i), 1);
        map(ix.z(i), ix.y(i), -1);
    }
    Ok(SolvableModel {
        metric,
        j,
        model_scale: c.clone(),
        pairs: m,
    })
}

/// `s_N = s(2√2) ⊖ ℝN` with `N = (−A1 − A2)/√2`, on the orthonormal basis
/// `{ξ, ξ⊥, T, Y_1..Y_{n−1}, Z_1..Z_{n−1}}` where `ξ = (−X0 + W0)/√2`,
/// `ξ⊥ = (−X0 − W0)/√2`, `T = (−A1 + A2)/√2`.
#[derive(Debug, Clone)]
pub struct HypersurfaceModel<S: Scalar> {
    pub ambient: SolvableModel<S>,
    pub normal: Vector<S>,
    /// Basis of `s_N` in ambient coordinates.
    pub basis: Vec<Vector<S>>,
    pub structure: AlmostContactStructure<S>,
}

impl<S: Scalar> HypersurfaceModel<S> {
    pub fn metric(&self) -> &MetricLieAlgebra<S> {
        self.structure.base()
    }

    /// `T` in ambient coordinates: `s_N = ℝT ⊕ n`.
    pub fn t_direction(&self) -> &[S] {
        &self.basis[2]
    }
}

/// Labels of the `s_N` basis for `n`.
pub fn s_n_labels(n: usize) -> Vec<String> {
    let mut l = vec!["xi".to_string(), "xi_perp".into(), "T".into()];
    l.extend(labels("Y", 1..=n - 1));
    l.extend(labels("Z", 1..=n - 1));
    l
}

/// Nonzero brackets of `s_N` on its orthonormal basis:
/// `[ξ,T] = 2ξ⊥`, `[ξ,Y_i] = −2Z_i`, `[ξ⊥,T] = 2ξ`, `[ξ⊥,Y_i] = −2Z_i`,
/// `[T,Y_i] = 2Y_i`, `[Z_i,Y_i] = 2ξ⊥ − 2ξ`.
pub fn s_n_bracket_table<S: Scalar>(n: usize) -> Result<LieAlgebra<S>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("s_N needs n >= 2, got {n}")));
    }
    let m = n - 1;
    let two = S::from_i64(2);
    let (xi, xp, t) = (0, 1, 2);
    let y = |i: usize| 2 + i;
    let z = |i: usize| 2 + m + i;
    let mut b = LieAlgebra::builder(format!("s_N table (n={n})"), s_n_labels(n));
    b.add(xi, t, &[(xp, two.clone())]);
    b.add(xp, t, &[(xi, two.clone())]);
    for i in 1..=m {
        b.add(xi, y(i), &[(z(i), -two.clone())]);
        b.add(xp, y(i), &[(z(i), -two.clone())]);
        b.add(t, y(i), &[(y(i), two.clone())]);
        b.add(z(i), y(i), &[(xp, two.clone()), (xi, -two.clone())]);
    }
    b.build()
}

pub fn build_s_n<S: Scalar>(n: usize) -> Result<HypersurfaceModel<S>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("s_N needs n >= 2, got {n}")));
    }
    let c = S::from_i64(2) * S::sqrt2();
    let ambient = build_solvable_model(&c, n - 1)?;
    let ix = ModelIndex { pairs: n - 1 };
    let dim = ix.dim();
    let r = S::sqrt2().recip();
    let combo = |terms: &[(usize, i64)]| -> Vector<S> {
        let mut v = linalg::zeros(dim);
        for &(k, s) in terms {
            v[k] = r.clone() * S::from_i64(s);
        }
        v
    };
    let normal = combo(&[(ModelIndex::A1, -1), (ModelIndex::A2, -1)]);
    let mut basis = vec![
        combo(&[(ModelIndex::X0, -1), (ix.w0(), 1)]),
        combo(&[(ModelIndex::X0, -1), (ix.w0(), -1)]),
        combo(&[(ModelIndex::A1, -1), (ModelIndex::A2, 1)]),
    ];
    basis.extend((1..n).map(|i| linalg::unit(dim, ix.y(i))));
    basis.extend((1..n).map(|i| linalg::unit(dim, ix.z(i))));
    let (structure, basis) =
        induced_hypersurface_structure(&ambient.metric, &ambient.j, &normal, Some((basis, s_n_labels(n))))?;
    let structure = AlmostContactStructure::new(
        structure.base().clone().with_name(format!("s_N (n={n})")),
        structure.xi().to_vec(),
        structure.phi().clone(),
    )?;
    let expected = s_n_bracket_table::<S>(n)?;
    let tol = if S::EXACT { 0.0 } else { 1e-9 };
    let k = structure.dim();
    for i in 0..k {
        for j in i + 1..k {
            let d = linalg::sub(
                &structure.base().alg().bracket_basis(i, j),
                &expected.bracket_basis(i, j),
            );
            if !linalg::max_abs(&d).within(tol) {
                return Err(Error::InvalidStructure(format!(
                    "s_N bracket [{}, {}] disagrees with its table",
                    expected.labels()[i],
                    expected.labels()[j]
                )));
            }
        }
    }
    Ok(HypersurfaceModel {
        ambient,
        normal,
        basis,
        structure,
    })
}

/// Linear map `s_N → g_{0,2}` (column `k` is the image of the `k`-th basis
/// vector of `s_N`): `ξ ↦ ξ̂`, `ξ⊥ ↦ X̂_2`, `T ↦ Ŷ_2`, `Y_1 ↦ Ŷ_1`,
/// `Y_i ↦ Ŷ_{i+1}`, `−Z_1 ↦ X̂_1`, `−Z_i ↦ X̂_{i+1}` (`i ≥ 2`).
pub fn s_n_isomorphism_map<S: Scalar>(n: usize) -> Result<Matrix<S>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("needs n >= 2, got {n}")));
    }
    let dim = 2 * n + 1;
    let m = n - 1;
    let hx = |i: usize| i;
    let hy = |i: usize| n + i;
    let mut map = Matrix::zeros(dim, dim);
    let mut set = |src: usize, dst: usize, sign: i64| map[(dst, src)] = S::from_i64(sign);
    set(0, 0, 1);
    set(1, hx(2), 1);
    set(2, hy(2), 1);
    set(3, hy(1), 1);
    set(3 + m, hx(1), -1);
    for i in 2..=m {
        set(2 + i, hy(i + 1), 1);
        set(2 + m + i, hx(i + 1), -1);
    }
    Ok(map)
}

/// Heisenberg algebra `[e1, e2] = e3`, orthonormal.
pub fn heisenberg<S: Scalar>() -> MetricLieAlgebra<S> {
    let alg = LieAlgebra::builder("heisenberg", vec!["e1".into(), "e2".into(), "e3".into()])
        .bracket(0, 1, &[(2, S::one())])
        .build()
        .expect("valid table");
    MetricLieAlgebra::orthonormal(alg).expect("Jacobi holds")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QSqrt2;

    fn q(s: &str) -> QSqrt2 {
        s.parse().unwrap()
    }

    #[test]
    fn g02_matches_reduced_table() {
        for n in 2..=5 {
            let s = build_g_alpha_beta(&q("0"), &q("2"), n).unwrap();
            let alg = s.base().alg();
            assert_eq!(alg.dim(), 2 * n + 1);
            assert_eq!(
                alg.bracket_basis(2, n + 2),
                linalg::scale(&q("2"), &linalg::unit(2 * n + 1, 0))
            );
            for i in 1..=n {
                assert_eq!(
                    alg.bracket_basis(0, n + i),
                    linalg::scale(&q("2"), &linalg::unit(2 * n + 1, i))
                );
            }
        }
    }

    #[test]
    fn g_alpha_beta_jacobi_for_degenerate_parameters() {
        for (a, b) in [("0", "0"), ("1", "3"), ("r2", "1/3"), ("-1", "2")] {
            let s = build_g_alpha_beta(&q(a), &q(b), 3).unwrap();
            assert!(s.base().alg().validate_jacobi().passed());
        }
        assert_eq!(g_alpha_beta_warnings(&q("1"), &q("1")).len(), 1);
        assert!(g_alpha_beta_warnings(&q("0"), &q("2")).is_empty());
        assert!(build_g_alpha_beta(&q("0"), &q("2"), 1).is_err());
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(closed_form_kappa_mu(&q("0"), &q("2")).unwrap(), (q("0"), q("4")));
        assert!(closed_form_kappa_mu(&q("2"), &q("2")).is_err());
    }

    #[test]
    fn model_brackets_and_j() {
        let c = q("2*r2");
        let s = build_solvable_model(&c, 2).unwrap();
        let ix = ModelIndex { pairs: 2 };
        let alg = s.metric.alg();
        assert_eq!(
            alg.bracket_basis(ix.y(1), ix.z(1)),
            linalg::scale(&c, &linalg::unit(8, ix.w0()))
        );
        let id = Matrix::<QSqrt2>::identity(8);
        assert!(s.j.mul(&s.j).add(&id).is_zero());
        assert!(build_solvable_model(&q("0"), 1).is_err());
    }

    #[test]
    fn s_n_structure() {
        let h = build_s_n::<QSqrt2>(3).unwrap();
        assert_eq!(h.structure.dim(), 7);
        assert_eq!(h.structure.xi(), linalg::unit::<QSqrt2>(7, 0).as_slice());
        let phi = h.structure.phi();
        // φ(ξ⊥) = T, φ(Y_i) = Z_i, φ(Z_i) = −Y_i.
        assert_eq!(phi.column(1), linalg::unit(7, 2));
        assert_eq!(phi.column(3), linalg::unit(7, 5));
        assert_eq!(phi.column(5), linalg::scale(&q("-1"), &linalg::unit(7, 3)));
    }

    #[test]
    fn isomorphism_map_is_signed_permutation() {
        let m = s_n_isomorphism_map::<QSqrt2>(4).unwrap();
        assert!(m.transpose().mul(&m).sub(&Matrix::identity(9)).is_zero());
    }

    #[test]
    fn swapped_target_images_break_the_bracket_check() {
        let n = 3;
        let src = build_s_n::<QSqrt2>(n).unwrap().structure;
        let dst = build_g_alpha_beta(&q("0"), &q("2"), n).unwrap();
        let m = s_n_isomorphism_map::<QSqrt2>(n).unwrap();
        assert!(src.check_isomorphism(&m, &dst).unwrap().strictly_passed());
        // Exchange the roles of the first and third Y-hat targets.
        let (y1, y3) = (n + 1, n + 3);
        let swapped = Matrix::from_fn(2 * n + 1, 2 * n + 1, |i, j| {
            let r = if i == y1 {
                y3
            } else if i == y3 {
                y1
            } else {
                i
            };
            m[(r, j)].clone()
        });
        let r = src.check_isomorphism(&swapped, &dst).unwrap();
        let rec = r.check("bracket-homomorphism").unwrap();
        assert!(!rec.passed());
        assert!(!rec.witnesses.is_empty());
    }
}
