//! Dense linear algebra over a [`Scalar`] field.
//!
//! Elimination is plain Gauss–Jordan. On the exact backend pivots are chosen
//! as the first nonzero entry (no tolerance anywhere); on floats the largest
//! entry in the column is used and entries below `1e-9 * max|A|` count as
//! zero.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, FLOAT_PIVOT_TOL};

/// Coordinate vector.
pub type Vector<S> = Vec<S>;

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Display> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.data[r * self.cols..(r + 1) * self.cols]
                .iter()
                .map(|x| x.to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics if rows have unequal lengths.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == m), "ragged matrix rows");
        Self {
            rows: n,
            cols: m,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector<S>], rows: usize) -> Self {
        Self::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn diagonal(diag: &[S]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn set_column(&mut self, c: usize, v: &[S]) {
        for (r, x) in v.iter().enumerate() {
            self[(r, c)] = x.clone();
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vector<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    /// `self * rhs - rhs * self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Largest absolute entry, as a float.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Largest absolute entry, in the field.
    pub fn max_abs_exact(&self) -> S {
        max_abs(&self.data)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let scale = self.max_abs();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..self.cols {
            if prow == self.rows {
                break;
            }
            let Some(p) = self.pick_pivot(prow, col, scale) else {
                if !S::EXACT {
                    for r in prow..self.rows {
                        self[(r, col)] = S::zero();
                    }
                }
                continue;
            };
            self.swap_rows(prow, p);
            let inv = self[(prow, col)].recip();
            for c in col..self.cols {
                let v = self[(prow, c)].clone() * inv.clone();
                self[(prow, c)] = v;
            }
            self[(prow, col)] = S::one();
            for r in 0..self.rows {
                if r == prow {
                    continue;
                }
                let f = self[(r, col)].clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..self.cols {
                    let pv = &self.data[prow * self.cols + c];
                    if pv.is_zero() {
                        continue;
                    }
                    let d = f.clone() * pv.clone();
                    self[(r, c)] -= d;
                }
                self[(r, col)] = S::zero();
            }
            pivots.push(col);
            prow += 1;
        }
        if !S::EXACT {
            for r in prow..self.rows {
                for c in 0..self.cols {
                    self[(r, c)] = S::zero();
                }
            }
        }
        pivots
    }

    fn pick_pivot(&self, from: usize, col: usize, scale: f64) -> Option<usize> {
        if S::EXACT {
            (from..self.rows).find(|&r| !self[(r, col)].is_zero())
        } else {
            let (best, val) = (from..self.rows)
                .map(|r| (r, self[(r, col)].to_f64().abs()))
                .fold((from, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            (val > FLOAT_PIVOT_TOL * scale.max(f64::MIN_POSITIVE)).then_some(best)
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column, in canonical
    /// (reduced echelon) form.
    pub fn nullspace(&self) -> Vec<Vector<S>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> S {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let scale = m.max_abs();
        let mut det = S::one();
        for col in 0..n {
            let Some(p) = m.pick_pivot(col, col, scale) else {
                return S::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let piv = m[(col, col)].clone();
            det *= piv.clone();
            let inv = piv.recip();
            for r in col + 1..n {
                let f = m[(r, col)].clone() * inv.clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let d = f.clone() * m[(col, c)].clone();
                    m[(r, c)] -= d;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Self::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                S::one()
            } else {
                S::zero()
            }
        });
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(n, n, |r, c| aug[(r, c + n)].clone()))
    }

    /// Solve `A x = b` for square nonsingular `A`.
    pub fn solve(&self, b: &[S]) -> Result<Vector<S>> {
        Ok(self.inverse()?.mul_vec(b))
    }

    /// Some solution of `A x = b` when one exists (free variables set to 0).
    pub fn solve_consistent(&self, b: &[S]) -> Option<Vector<S>> {
        assert_eq!(self.rows, b.len());
        let aug = Self::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                b[r].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    /// Least-squares solution through the normal equations. Rank-deficient
    /// systems get the solution with free variables set to zero.
    pub fn least_squares(&self, b: &[S]) -> Vector<S> {
        let at = self.transpose();
        let ata = at.mul(self);
        let atb = at.mul_vec(b);
        ata.solve_consistent(&atb)
            .expect("normal equations are always consistent")
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x.clone() * y.clone();
        }
    }
    acc
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vector<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vector<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn scale<S: Scalar>(s: &S, a: &[S]) -> Vector<S> {
    a.iter().map(|x| s.clone() * x.clone()).collect()
}

/// `a + s * b`.
pub fn axpy<S: Scalar>(a: &[S], s: &S, b: &[S]) -> Vector<S> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + s.clone() * y.clone())
        .collect()
}

pub fn zeros<S: Scalar>(n: usize) -> Vector<S> {
    vec![S::zero(); n]
}

pub fn unit<S: Scalar>(n: usize, i: usize) -> Vector<S> {
    let mut v = zeros(n);
    v[i] = S::one();
    v
}

pub fn is_zero_vec<S: Scalar>(v: &[S]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Largest absolute value, in the field.
pub fn max_abs<S: Scalar>(v: &[S]) -> S {
    v.iter()
        .map(|x| x.abs())
        .fold(S::zero(), |m, x| if x > m { x } else { m })
}

/// Linear combination `Σ coeffs[i] * vectors[i]`.
pub fn combine<S: Scalar>(coeffs: &[S], vectors: &[Vector<S>], dim: usize) -> Vector<S> {
    let mut out = zeros(dim);
    for (c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o += c.clone() * x.clone();
            }
        }
    }
    out
}

/// Express vectors in terms of a fixed independent family.
///
/// Built once per family; each query is a small back-substitution followed by
/// an exact (or tolerance) membership check.
#[derive(Clone)]
pub struct CoordinateSolver<S> {
    dim: usize,
    basis: Vec<Vector<S>>,
    rows: Vec<usize>,
    inv: Matrix<S>,
}

impl<S: Scalar> CoordinateSolver<S> {
    pub fn new(basis: &[Vector<S>], dim: usize) -> Result<Self> {
        let k = basis.len();
        if basis.iter().any(|b| b.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: basis.iter().map(|b| b.len()).find(|&l| l != dim).unwrap_or(0),
            });
        }
        if k == 0 {
            return Ok(Self {
                dim,
                basis: Vec::new(),
                rows: Vec::new(),
                inv: Matrix::zeros(0, 0),
            });
        }
        // Rows of B (dim x k) that form a nonsingular k x k block.
        let b = Matrix::from_columns(basis, dim);
        let (_, pivots) = b.transpose().rref();
        if pivots.len() < k {
            return Err(Error::Degenerate);
        }
        let block = Matrix::from_fn(k, k, |r, c| b[(pivots[r], c)].clone());
        let inv = block.inverse()?;
        Ok(Self {
            dim,
            basis: basis.to_vec(),
            rows: pivots,
            inv,
        })
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vector<S>] {
        &self.basis
    }

    /// Coordinates without the membership check.
    pub fn coordinates_unchecked(&self, v: &[S]) -> Vector<S> {
        let sel: Vec<S> = self.rows.iter().map(|&r| v[r].clone()).collect();
        self.inv.mul_vec(&sel)
    }

    /// Coordinates of `v`, or `NotInSpan` when `v` is outside the span (for
    /// floats: residual above `tol`).
    pub fn coordinates(&self, v: &[S], tol: f64) -> Result<Vector<S>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        let c = self.coordinates_unchecked(v);
        let back = combine(&c, &self.basis, self.dim);
        let resid = sub(&back, v);
        if resid.iter().all(|x| x.within(tol)) {
            Ok(c)
        } else {
            Err(Error::NotInSpan)
        }
    }

    pub fn contains(&self, v: &[S], tol: f64) -> bool {
        self.coordinates(v, tol).is_ok()
    }
}

/// Incremental row reduction for large sparse homogeneous systems.
///
/// Rows are pushed one at a time and reduced against the pivots found so
/// far; rows that vanish are dropped. The derivation equations are mostly
/// zero, so this is far cheaper than densifying.
#[derive(Debug, Clone)]
pub struct SparseEliminator<S> {
    cols: usize,
    // pivot column -> row (sorted by column, leading entry 1)
    pivots: std::collections::BTreeMap<usize, Vec<(usize, S)>>,
    scale: f64,
}

impl<S: Scalar> SparseEliminator<S> {
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            pivots: std::collections::BTreeMap::new(),
            scale: 0.0,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Push an equation given as (column, coefficient) pairs; duplicate
    /// columns are summed.
    pub fn push(&mut self, entries: impl IntoIterator<Item = (usize, S)>) {
        let mut row: std::collections::BTreeMap<usize, S> = std::collections::BTreeMap::new();
        for (c, v) in entries {
            assert!(c < self.cols, "column out of range");
            if v.is_zero() {
                continue;
            }
            *row.entry(c).or_insert_with(S::zero) += v;
        }
        if !S::EXACT {
            let m = row.values().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
            self.scale = self.scale.max(m);
        }
        let scale = self.scale;
        row.retain(|_, v| !v.negligible(scale));
        while let Some((&lead, _)) = row.iter().find(|(c, _)| self.pivots.contains_key(c)) {
            let f = row.remove(&lead).expect("lead present");
            for (c, v) in &self.pivots[&lead] {
                if *c == lead {
                    continue;
                }
                let e = row.entry(*c).or_insert_with(S::zero);
                *e -= f.clone() * v.clone();
            }
            row.retain(|_, v| !v.negligible(scale));
        }
        let Some((&lead, lv)) = row.iter().next() else {
            return;
        };
        let inv = lv.recip();
        let normalized: Vec<(usize, S)> = row
            .into_iter()
            .map(|(c, v)| (c, if c == lead { S::one() } else { v * inv.clone() }))
            .collect();
        self.pivots.insert(lead, normalized);
    }

    /// Basis of the solution space, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vector<S>> {
        // Back-substitute into reduced echelon form, last pivot first.
        let mut reduced: std::collections::BTreeMap<usize, std::collections::BTreeMap<usize, S>> =
            std::collections::BTreeMap::new();
        for (&p, row) in self.pivots.iter().rev() {
            let mut r: std::collections::BTreeMap<usize, S> = std::collections::BTreeMap::new();
            for (c, v) in row {
                if *c == p {
                    continue;
                }
                if let Some(sub) = reduced.get(c) {
                    for (c2, v2) in sub {
                        *r.entry(*c2).or_insert_with(S::zero) -= v.clone() * v2.clone();
                    }
                } else {
                    *r.entry(*c).or_insert_with(S::zero) += v.clone();
                }
            }
            r.retain(|_, v| !v.is_zero());
            // Pivot p equals -Σ r[c] x_c over free columns c.
            reduced.insert(p, r);
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !self.pivots.contains_key(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (&p, r) in &reduced {
                    if let Some(x) = r.get(&f) {
                        v[p] = -x.clone();
                    }
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QSqrt2;

    fn q(s: &str) -> QSqrt2 {
        s.parse().unwrap()
    }

    fn mat(rows: &[&[&str]]) -> Matrix<QSqrt2> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| q(s)).collect()).collect())
    }

    #[test]
    fn rref_and_nullspace_exact() {
        let a = mat(&[&["1", "2", "3"], &["2", "4", "6"], &["1", "r2", "0"]]);
        let (r, piv) = a.rref();
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(is_zero_vec(&a.mul_vec(&ns[0])));
    }

    #[test]
    fn determinant_and_inverse() {
        let a = mat(&[&["r2", "1"], &["1", "r2"]]);
        assert_eq!(a.determinant(), q("1"));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        let sing = mat(&[&["1", "r2"], &["r2", "2"]]);
        assert!(sing.determinant().is_zero());
        assert!(matches!(sing.inverse(), Err(Error::Singular)));
    }

    #[test]
    fn least_squares_recovers_exact_fit() {
        // Overdetermined but consistent: x = 2, y = -r2.
        let a = mat(&[&["1", "0"], &["0", "1"], &["1", "1"]]);
        let b = vec![q("2"), q("-r2"), q("2-r2")];
        assert_eq!(a.least_squares(&b), vec![q("2"), q("-r2")]);
    }

    #[test]
    fn float_rank_uses_relative_tolerance() {
        let a = Matrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0 + 1e-13]]);
        assert_eq!(a.rank(), 1);
        let b = Matrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.1]]);
        assert_eq!(b.rank(), 2);
    }

    #[test]
    fn sparse_eliminator_matches_dense_nullspace() {
        let a = mat(&[
            &["1", "0", "r2", "0"],
            &["0", "1", "1", "-1"],
            &["1", "1", "1+r2", "-1"],
        ]);
        let mut el = SparseEliminator::new(4);
        for r in 0..3 {
            el.push(a.row(r).iter().cloned().enumerate());
        }
        assert_eq!(el.rank(), 2);
        let ns = el.nullspace();
        assert_eq!(ns, a.nullspace());
        for v in &ns {
            assert!(is_zero_vec(&a.mul_vec(v)));
        }
    }

    #[test]
    fn coordinate_solver_membership() {
        let basis = vec![vec![q("1"), q("1"), q("0")], vec![q("0"), q("r2"), q("1")]];
        let cs = CoordinateSolver::new(&basis, 3).unwrap();
        let v = combine(&[q("3"), q("-1/2")], &basis, 3);
        assert_eq!(cs.coordinates(&v, 0.0).unwrap(), vec![q("3"), q("-1/2")]);
        assert!(!cs.contains(&[q("1"), q("0"), q("0")], 0.0));
        assert!(matches!(
            CoordinateSolver::new(&[basis[0].clone(), basis[0].clone()], 3),
            Err(Error::Degenerate)
        ));
    }
}
