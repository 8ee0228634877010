//! `so(2, n)` as `(n+2) × (n+2)` matrices: Cartan involution, the explicit
//! basis of `a ⊕ n`, its trace metric and complex structure, and the
//! restricted root decomposition. All arithmetic is in the active scalar
//! backend, so with `c ∈ Q(√2)` every comparison is exact.

use crate::algebra::{LieAlgebra, Subspace};
use crate::error::{Error, Result};
use crate::linalg::{self, CoordinateSolver, Matrix, Vector};
use crate::report::{CheckRecord, Status, VerificationReport};
use crate::riemannian::MetricLieAlgebra;
use crate::scalar::Scalar;

use super::{build_solvable_model, ModelIndex, SolvableModel};

/// `so(2, n) = {X : ᵗX I + I X = 0}` with `I = diag(−1, −1, 1, …, 1)`,
/// together with the matrices `A1, A2, X0, Y_i, Z_i, W0` spanning `a ⊕ n`.
#[derive(Debug, Clone)]
pub struct MatrixAlgebra<S: Scalar> {
    n: usize,
    c: S,
    i2n: Matrix<S>,
    /// Index pairs `(i, j)`, `i < j`, of the standard basis of `so(2, n)`.
    pairs: Vec<(usize, usize)>,
    so: LieAlgebra<S>,
    model: Vec<Matrix<S>>,
    model_labels: Vec<String>,
}

/// `n ≥ 3`, `c > 0`. The `a ⊕ n` basis is
/// `A1 = (c/2)((E13+E31) − (E24+E42))`, `A2 = (c/2)((E13+E31) + (E24+E42))`,
/// `X0 = (c/2)[[U,V,0],[V,U,0],[0,0,0]]`, `W0 = (c/2)[[−U,U,0],[−U,U,0],[0,0,0]]`,
/// and `Y_i`, `Z_i = (c/√2)[[0,0,E],[0,0,E],[ᵗE,−ᵗE,0]]` with `E = E_{2i}`,
/// resp. `E_{1i}`, in blocks of sizes `(2, 2, n−2)`.
pub fn build_so2n_iwasawa<S: Scalar>(n: usize, c: &S) -> Result<MatrixAlgebra<S>> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("so(2,n) model needs n >= 3, got {n}")));
    }
    if !c.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "model scale must be positive, got {c}"
        )));
    }
    let size = n + 2;
    let i2n = Matrix::diagonal(
        &(0..size)
            .map(|i| S::from_i64(if i < 2 { -1 } else { 1 }))
            .collect::<Vec<_>>(),
    );
    let mut pairs = Vec::new();
    let mut so_labels = Vec::new();
    let mut so_basis = Vec::new();
    for i in 0..size {
        for j in i + 1..size {
            let compact = (i < 2) == (j < 2);
            let mut m = Matrix::zeros(size, size);
            m[(i, j)] = S::one();
            m[(j, i)] = if compact { -S::one() } else { S::one() };
            pairs.push((i, j));
            so_labels.push(format!("{}{}_{}", if compact { "K" } else { "P" }, i + 1, j + 1));
            so_basis.push(m);
        }
    }
    let mut b = LieAlgebra::builder(format!("so(2,{n})"), so_labels);
    for p in 0..so_basis.len() {
        for q in p + 1..so_basis.len() {
            let br = so_basis[p].commutator(&so_basis[q]);
            let coords: Vec<(usize, S)> = pairs
                .iter()
                .enumerate()
                .map(|(k, &(i, j))| (k, br[(i, j)].clone()))
                .filter(|(_, v)| !v.is_zero())
                .collect();
            b.add(p, q, &coords);
        }
    }
    let so = b.build()?;

    let m = n - 2;
    let ch = c.clone() * S::half();
    let cr = c.clone() / S::sqrt2();
    let unit = |entries: &[(usize, usize, i64)], s: &S| {
        let mut x = Matrix::zeros(size, size);
        for &(i, j, v) in entries {
            x[(i, j)] = s.clone() * S::from_i64(v);
        }
        x
    };
    let mut model = vec![
        unit(&[(0, 2, 1), (2, 0, 1), (1, 3, -1), (3, 1, -1)], &ch),
        unit(&[(0, 2, 1), (2, 0, 1), (1, 3, 1), (3, 1, 1)], &ch),
        // U at (0,0) and (2,2) blocks, V at (0,2) and (2,0) blocks.
        unit(
            &[
                (0, 1, 1),
                (1, 0, -1),
                (2, 3, 1),
                (3, 2, -1),
                (0, 3, 1),
                (1, 2, 1),
                (2, 1, 1),
                (3, 0, 1),
            ],
            &ch,
        ),
    ];
    let yz = |row: usize, i: usize| {
        let col = 3 + i;
        unit(
            &[(row, col, 1), (2 + row, col, 1), (col, row, 1), (col, 2 + row, -1)],
            &cr,
        )
    };
    model.extend((1..=m).map(|i| yz(1, i)));
    model.extend((1..=m).map(|i| yz(0, i)));
    // −U at (0,0), (2,0) blocks; U at (0,2), (2,2) blocks.
    model.push(unit(
        &[
            (0, 1, -1),
            (1, 0, 1),
            (2, 1, -1),
            (3, 0, 1),
            (0, 3, 1),
            (1, 2, -1),
            (2, 3, 1),
            (3, 2, -1),
        ],
        &ch,
    ));
    Ok(MatrixAlgebra {
        n,
        c: c.clone(),
        i2n,
        pairs,
        so,
        model,
        model_labels: ModelIndex { pairs: m }.labels(),
    })
}

impl<S: Scalar> MatrixAlgebra<S> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.n + 2
    }

    pub fn model_scale(&self) -> &S {
        &self.c
    }

    /// `I_{2,n}`.
    pub fn i2n(&self) -> &Matrix<S> {
        &self.i2n
    }

    /// `so(2, n)` on its standard basis (`K` for `𝔨`, `P` for `𝔭` elements).
    pub fn so(&self) -> &LieAlgebra<S> {
        &self.so
    }

    /// Matrices `A1, A2, X0, Y_1..Y_m, Z_1..Z_m, W0` (`m = n − 2`).
    pub fn model_basis(&self) -> &[Matrix<S>] {
        &self.model
    }

    pub fn model_labels(&self) -> &[String] {
        &self.model_labels
    }

    pub fn membership_residual(&self, x: &Matrix<S>) -> S {
        x.transpose().mul(&self.i2n).add(&self.i2n.mul(x)).max_abs_exact()
    }

    /// `θ(X) = I X I`.
    pub fn theta(&self, x: &Matrix<S>) -> Matrix<S> {
        self.i2n.mul(x).mul(&self.i2n)
    }

    /// Coordinates in the standard basis of `so(2, n)`.
    pub fn so_coordinates(&self, x: &Matrix<S>) -> Result<Vector<S>> {
        if x.rows() != self.size() || x.cols() != self.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                got: x.rows(),
            });
        }
        if !self.membership_residual(x).within(tol::<S>()) {
            return Err(Error::NotInSpan);
        }
        Ok(self.pairs.iter().map(|&(i, j)| x[(i, j)].clone()).collect())
    }

    pub fn from_so_coordinates(&self, v: &[S]) -> Matrix<S> {
        let size = self.size();
        let mut x = Matrix::zeros(size, size);
        for (&(i, j), c) in self.pairs.iter().zip(v) {
            let compact = (i < 2) == (j < 2);
            x[(i, j)] = c.clone();
            x[(j, i)] = if compact { -c.clone() } else { c.clone() };
        }
        x
    }

    /// `𝔨 = {θ = +1}` and `𝔭 = {θ = −1}` in `so` coordinates.
    pub fn cartan_split(&self) -> (Subspace<S>, Subspace<S>) {
        let d = self.so.dim();
        let theta = Matrix::from_columns(
            &(0..d)
                .map(|k| {
                    let e = self.from_so_coordinates(&linalg::unit(d, k));
                    self.pairs
                        .iter()
                        .map(|&(i, j)| self.theta(&e)[(i, j)].clone())
                        .collect()
                })
                .collect::<Vec<Vector<S>>>(),
            d,
        );
        let id = Matrix::identity(d);
        let k = Subspace::span(d, &theta.sub(&id).nullspace());
        let p = Subspace::span(d, &theta.add(&id).nullspace());
        (k, p)
    }

    /// Membership, `θ = −ᵗX`, the `𝔨 ⊕ 𝔭` dimensions and the block shape of `𝔭`.
    pub fn verify_cartan(&self) -> VerificationReport {
        let mut r = VerificationReport::new(format!("Cartan data of so(2,{})", self.n));
        let d = self.so.dim();
        let basis: Vec<Matrix<S>> = (0..d).map(|k| self.from_so_coordinates(&linalg::unit(d, k))).collect();
        let worst = |f: &dyn Fn(&Matrix<S>) -> S, mats: &[Matrix<S>]| {
            mats.iter().map(f).fold(S::zero(), |a, b| if b > a { b } else { a })
        };
        let all: Vec<Matrix<S>> = basis.iter().chain(&self.model).cloned().collect();
        let mem = worst(&|x| self.membership_residual(x), &all);
        r.push(CheckRecord::new("membership", Status::from_bool(mem.is_zero())).with_residual(&mem));
        let th = worst(&|x| self.theta(x).add(&x.transpose()).max_abs_exact(), &all);
        r.push(CheckRecord::new("theta-minus-transpose", Status::from_bool(th.is_zero())).with_residual(&th));
        let (k, p) = self.cartan_split();
        let n = self.n;
        let dims_ok = k.dim() == 1 + n * (n - 1) / 2 && p.dim() == 2 * n && k.dim() + p.dim() == d;
        r.push(
            CheckRecord::new("k-p-dimensions", Status::from_bool(dims_ok)).with_witness(format!(
                "dim k = {}, dim p = {}",
                k.dim(),
                p.dim()
            )),
        );
        let off_block = p.basis().iter().all(|v| {
            let x = self.from_so_coordinates(v);
            (0..self.size()).all(|i| (0..self.size()).all(|j| (i < 2) != (j < 2) || x[(i, j)].is_zero()))
        });
        r.push(CheckRecord::new("p-off-diagonal-blocks", Status::from_bool(off_block)));
        r
    }

    /// Structure constants of the `a ⊕ n` matrix basis, computed from matrix
    /// commutators.
    pub fn model_bracket_algebra(&self) -> Result<LieAlgebra<S>> {
        let flat: Vec<Vector<S>> = self.model.iter().map(|x| x.entries().to_vec()).collect();
        let size = self.size();
        let solver = CoordinateSolver::new(&flat, size * size)?;
        let mut b = LieAlgebra::builder(format!("a+n in so(2,{})", self.n), self.model_labels.clone());
        for i in 0..self.model.len() {
            for j in i + 1..self.model.len() {
                let br = self.model[i].commutator(&self.model[j]);
                let coords = solver
                    .coordinates(br.entries(), tol::<S>())
                    .map_err(|_| Error::NotSubalgebra)?;
                let terms: Vec<(usize, S)> = coords.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
                b.add(i, j, &terms);
            }
        }
        b.build()
    }

    /// Compares every bracket of the matrix basis with the abstract model
    /// `s(c)` having `n − 2` pairs.
    pub fn compare_with_model(&self, model: &SolvableModel<S>) -> Result<CheckRecord> {
        let mine = self.model_bracket_algebra()?;
        let theirs = model.metric.alg();
        if theirs.dim() != mine.dim() {
            return Err(Error::DimensionMismatch {
                expected: mine.dim(),
                got: theirs.dim(),
            });
        }
        let mut worst = S::zero();
        let mut witness = None;
        for i in 0..mine.dim() {
            for j in i + 1..mine.dim() {
                let d = linalg::max_abs(&linalg::sub(&mine.bracket_basis(i, j), &theirs.bracket_basis(i, j)));
                if !d.within(tol::<S>()) && witness.is_none() {
                    witness = Some(format!("[{}, {}]", mine.labels()[i], mine.labels()[j]));
                }
                if d > worst {
                    worst = d;
                }
            }
        }
        let mut rec = CheckRecord::new("bracket-table", Status::from_bool(witness.is_none())).with_residual(&worst);
        if let Some(w) = witness {
            rec = rec.with_witness(w);
        }
        Ok(rec)
    }

    /// `⟨X, Y⟩ = (1/c²) tr(X_a Y_a) + (1/(2c²)) tr(ᵗX_n Y_n)` on the model basis
    /// (the first two basis matrices span `a`, the rest span `n`).
    pub fn trace_metric_gram(&self) -> Matrix<S> {
        let c2 = self.c.clone() * self.c.clone();
        let d = self.model.len();
        Matrix::from_fn(d, d, |i, j| {
            let (x, y) = (&self.model[i], &self.model[j]);
            match (i < 2, j < 2) {
                (true, true) => x.mul(y).trace() / c2.clone(),
                (false, false) => x.transpose().mul(y).trace() / (S::from_i64(2) * c2.clone()),
                _ => S::zero(),
            }
        })
    }

    /// Metric Lie algebra `a ⊕ n` with the trace metric.
    pub fn model_metric(&self) -> Result<MetricLieAlgebra<S>> {
        MetricLieAlgebra::new(self.model_bracket_algebra()?, self.trace_metric_gram())
    }

    /// `k'` with `B(X, Y) = k' tr(XY)` on `so(2, n)`; errors when the Killing
    /// form is not proportional to the trace form.
    pub fn killing_trace_ratio(&self) -> Result<S> {
        let b = self.so.killing_form();
        let d = self.so.dim();
        let mats: Vec<Matrix<S>> = (0..d).map(|k| self.from_so_coordinates(&linalg::unit(d, k))).collect();
        let tr = Matrix::from_fn(d, d, |i, j| mats[i].mul(&mats[j]).trace());
        let k = (0..d)
            .find(|&i| !tr[(i, i)].is_zero())
            .map(|i| b[(i, i)].clone() / tr[(i, i)].clone())
            .ok_or(Error::Degenerate)?;
        let resid = b.sub(&tr.scale(&k)).max_abs_exact();
        if !resid.within(tol::<S>() * b.max_abs().max(1.0)) {
            return Err(Error::InvalidStructure(
                "Killing form is not a multiple of tr(XY)".into(),
            ));
        }
        Ok(k)
    }

    /// `Z = E12 − E21`, spanning the center of `𝔨`.
    pub fn grading_element(&self) -> Matrix<S> {
        let mut z = Matrix::zeros(self.size(), self.size());
        z[(0, 1)] = S::one();
        z[(1, 0)] = -S::one();
        z
    }

    /// `(ad Z|𝔭)² = −id`.
    pub fn ad_z_squared_on_p(&self) -> CheckRecord {
        let z = self.grading_element();
        let (_, p) = self.cartan_split();
        let mut worst = S::zero();
        for v in p.basis() {
            let x = self.from_so_coordinates(v);
            let r = z.commutator(&z.commutator(&x)).add(&x).max_abs_exact();
            if r > worst {
                worst = r;
            }
        }
        CheckRecord::new("ad-z-squared", Status::from_bool(worst.within(tol::<S>()))).with_residual(&worst)
    }

    /// `J = π⁻¹ ∘ ad(Z) ∘ π` on the model basis, `π(X) = (X − θX)/2`.
    pub fn complex_structure(&self) -> Result<Matrix<S>> {
        let z = self.grading_element();
        let pi = |x: &Matrix<S>| x.sub(&self.theta(x)).scale(&S::half());
        let images: Vec<Vector<S>> = self.model.iter().map(|x| pi(x).entries().to_vec()).collect();
        let size = self.size();
        let solver = CoordinateSolver::new(&images, size * size)?;
        let d = self.model.len();
        let mut j = Matrix::zeros(d, d);
        for (k, x) in self.model.iter().enumerate() {
            let w = z.commutator(&pi(x));
            let coords = solver.coordinates(w.entries(), tol::<S>())?;
            j.set_column(k, &coords);
        }
        Ok(j)
    }

    /// `−⟨H, H⟩_𝔤` for the highest root `ε1 + ε2`, where `⟨X, Y⟩_𝔤 = (1/c²) tr(ᵗXY)`
    /// and `⟨H, H_λ⟩_𝔤 = λ(H)` on `a`.
    pub fn highest_root_curvature(&self) -> Result<S> {
        let (h1, h2) = self.cartan_generators();
        let c2 = self.c.clone() * self.c.clone();
        let ip = |x: &Matrix<S>, y: &Matrix<S>| x.transpose().mul(y).trace() / c2.clone();
        let g = Matrix::from_rows(vec![vec![ip(&h1, &h1), ip(&h1, &h2)], vec![ip(&h2, &h1), ip(&h2, &h2)]]);
        let coeff = g.solve(&[S::one(), S::one()])?;
        let h = h1.scale(&coeff[0]).add(&h2.scale(&coeff[1]));
        Ok(-ip(&h, &h))
    }

    /// `E13 + E31` and `E24 + E42`, dual to `ε1, ε2`.
    pub fn cartan_generators(&self) -> (Matrix<S>, Matrix<S>) {
        let s = self.size();
        let mut h1 = Matrix::zeros(s, s);
        h1[(0, 2)] = S::one();
        h1[(2, 0)] = S::one();
        let mut h2 = Matrix::zeros(s, s);
        h2[(1, 3)] = S::one();
        h2[(3, 1)] = S::one();
        (h1, h2)
    }

    /// Simultaneous eigenspaces of `ad(a)` over the candidate functionals
    /// `aε1 + bε2`, `|a|, |b| ≤ 2`. Errors unless the eigenspaces exhaust `𝔤`.
    pub fn root_space_decomposition(&self) -> Result<RootDatum<S>> {
        let (h1, h2) = self.cartan_generators();
        let ad1 = self.so.ad(&self.so_coordinates(&h1)?)?;
        let ad2 = self.so.ad(&self.so_coordinates(&h2)?)?;
        let d = self.so.dim();
        let id = Matrix::<S>::identity(d);
        let mut zero_space = None;
        let mut roots = Vec::new();
        let mut total = 0;
        for e1 in -2i64..=2 {
            for e2 in -2i64..=2 {
                let m1 = ad1.sub(&id.scale(&S::from_i64(e1)));
                let m2 = ad2.sub(&id.scale(&S::from_i64(e2)));
                let mut rows: Vec<Vector<S>> = (0..d).map(|i| m1.row(i).to_vec()).collect();
                rows.extend((0..d).map(|i| m2.row(i).to_vec()));
                let space = Subspace::span(d, &Matrix::from_rows(rows).nullspace());
                total += space.dim();
                if (e1, e2) == (0, 0) {
                    zero_space = Some(space);
                } else if !space.is_zero() {
                    roots.push(Root {
                        epsilon: [e1, e2],
                        space,
                    });
                }
            }
        }
        if total != d {
            return Err(Error::RootDecomposition(format!(
                "candidate eigenspaces have total dimension {total}, expected {d}"
            )));
        }
        Ok(RootDatum {
            zero_space: zero_space.expect("zero functional is a candidate"),
            roots,
        })
    }
}

/// A restricted root `e1 ε1 + e2 ε2` and its root space (in `so` coordinates).
#[derive(Debug, Clone)]
pub struct Root<S: Scalar> {
    pub epsilon: [i64; 2],
    pub space: Subspace<S>,
}

impl<S: Scalar> Root<S> {
    /// Coordinates `(p, q)` in the simple roots `α1 = ε1 − ε2`, `α2 = ε2`.
    pub fn simple_coordinates(&self) -> [i64; 2] {
        let [e1, e2] = self.epsilon;
        [e1, e1 + e2]
    }

    pub fn name(&self) -> String {
        let [p, q] = self.simple_coordinates();
        let sign = if p < 0 || (p == 0 && q < 0) { "-" } else { "" };
        let (p, q) = (p.abs(), q.abs());
        let term = |k: i64, s: &str| match k {
            0 => None,
            1 => Some(s.to_string()),
            k => Some(format!("{k}{s}")),
        };
        let parts: Vec<String> = [term(p, "a1"), term(q, "a2")].into_iter().flatten().collect();
        if parts.len() > 1 {
            format!("{sign}({})", parts.join("+"))
        } else {
            format!("{sign}{}", parts.join("+"))
        }
    }
}

/// Restricted roots of `so(2, n)` with respect to `a = span{E13+E31, E24+E42}`.
#[derive(Debug, Clone)]
pub struct RootDatum<S: Scalar> {
    pub zero_space: Subspace<S>,
    pub roots: Vec<Root<S>>,
}

impl<S: Scalar> RootDatum<S> {
    pub const SIMPLE: [[i64; 2]; 2] = [[1, -1], [0, 1]];
    /// `α1, α2, α1+α2, α1+2α2` in `ε` coordinates.
    pub const POSITIVE: [[i64; 2]; 4] = [[1, -1], [0, 1], [1, 0], [1, 1]];

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn get(&self, epsilon: [i64; 2]) -> Option<&Root<S>> {
        self.roots.iter().find(|r| r.epsilon == epsilon)
    }

    /// Dimensions of the positive root spaces, ordered as [`Self::POSITIVE`].
    pub fn positive_dims(&self) -> [usize; 4] {
        Self::POSITIVE.map(|e| self.get(e).map_or(0, |r| r.space.dim()))
    }

    pub fn closed_under_negation(&self) -> bool {
        self.roots.iter().all(|r| {
            self.get([-r.epsilon[0], -r.epsilon[1]])
                .is_some_and(|s| s.space.dim() == r.space.dim())
        })
    }

    /// Root set equals `{±α1, ±α2, ±(α1+α2), ±(α1+2α2)}`.
    pub fn matches_b2(&self) -> bool {
        self.len() == 8
            && Self::POSITIVE
                .iter()
                .all(|&[a, b]| self.get([a, b]).is_some() && self.get([-a, -b]).is_some())
    }

    fn space_of(&self, epsilon: [i64; 2]) -> Option<&Subspace<S>> {
        if epsilon == [0, 0] {
            Some(&self.zero_space)
        } else {
            self.get(epsilon).map(|r| &r.space)
        }
    }

    /// `[g_λ, g_μ] ⊆ g_{λ+μ}` on spanning pairs, for all computed spaces.
    pub fn grading_check(&self, so: &LieAlgebra<S>) -> CheckRecord {
        let mut all: Vec<([i64; 2], &Subspace<S>)> = vec![([0, 0], &self.zero_space)];
        all.extend(self.roots.iter().map(|r| (r.epsilon, &r.space)));
        let mut witness = None;
        let mut checked = 0usize;
        'outer: for (la, sa) in &all {
            for (lb, sb) in &all {
                let target = self.space_of([la[0] + lb[0], la[1] + lb[1]]);
                for x in sa.basis() {
                    for y in sb.basis() {
                        let br = so.bracket(x, y).expect("dimensions agree");
                        checked += 1;
                        let ok = match target {
                            Some(t) => t.contains(&br),
                            None => linalg::is_zero_vec(&br),
                        };
                        if !ok {
                            witness = Some(format!(
                                "[g{la:?}, g{lb:?}] leaves g{:?}",
                                [la[0] + lb[0], la[1] + lb[1]]
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
        let mut rec = CheckRecord::new("root-grading", Status::from_bool(witness.is_none()))
            .with_witness(format!("{checked} bracket pairs"));
        if let Some(w) = witness {
            rec = rec.with_witness(w);
        }
        rec
    }
}

fn tol<S: Scalar>() -> f64 {
    if S::EXACT {
        0.0
    } else {
        1e-9
    }
}

/// Full matrix-side verification for `(n, c)`: Cartan data, bracket table
/// against `s(c)` with `n − 2` pairs, orthonormality under the trace metric,
/// Killing proportionality, `(ad Z|𝔭)² = −id`, `J` agreement and the
/// highest-root curvature `−c²`.
pub fn verify_matrix_model<S: Scalar>(n: usize, c: &S) -> Result<VerificationReport> {
    let ma = build_so2n_iwasawa(n, c)?;
    let model = build_solvable_model(c, n - 2)?;
    let mut r = ma.verify_cartan();
    r.subject = format!("matrix model of s({c}) in so(2,{n})");
    r.push(ma.compare_with_model(&model)?);
    let g = ma.trace_metric_gram();
    let resid = g.sub(&Matrix::identity(g.rows())).max_abs_exact();
    r.push(CheckRecord::new("orthonormal-basis", Status::from_bool(resid.within(tol::<S>()))).with_residual(&resid));
    let k = ma.killing_trace_ratio()?;
    r.push(CheckRecord::new("killing-proportional", Status::from_bool(k.is_positive())).with_scalar("k_prime", &k));
    r.push(ma.ad_z_squared_on_p());
    let j = ma.complex_structure()?;
    let jr = j.sub(&model.j).max_abs_exact();
    r.push(CheckRecord::new("complex-structure", Status::from_bool(jr.within(tol::<S>()))).with_residual(&jr));
    let hc = ma.highest_root_curvature()?;
    let expected = -(c.clone() * c.clone());
    r.push(
        CheckRecord::new(
            "highest-root-curvature",
            Status::from_bool((hc.clone() - expected).within(tol::<S>())),
        )
        .with_scalar("value", &hc),
    );
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QSqrt2;

    #[test]
    fn matrix_model_n3() {
        let c: QSqrt2 = "2*r2".parse().unwrap();
        let r = verify_matrix_model(3, &c).unwrap();
        assert!(r.strictly_passed(), "{r:?}");
        let ma = build_so2n_iwasawa(3, &c).unwrap();
        assert_eq!(ma.killing_trace_ratio().unwrap(), QSqrt2::from_i64(3));
    }

    #[test]
    fn roots_of_so24() {
        let ma = build_so2n_iwasawa(4, &QSqrt2::one()).unwrap();
        let rd = ma.root_space_decomposition().unwrap();
        assert_eq!(rd.positive_dims(), [1, 2, 2, 1]);
        assert!(rd.matches_b2() && rd.closed_under_negation());
        assert!(rd.grading_check(ma.so()).passed());
        assert_eq!(rd.get([1, 1]).unwrap().name(), "(a1+2a2)");
        assert_eq!(rd.get([-1, 1]).unwrap().name(), "-a1");
    }

    #[test]
    fn rejects_small_n() {
        assert!(build_so2n_iwasawa(2, &QSqrt2::one()).is_err());
    }
}
