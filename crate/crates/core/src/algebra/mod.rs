//! Finite-dimensional real Lie algebras given by structure constants.

mod analysis;
mod derivation;
mod subspace;

pub use analysis::SeriesReport;
pub use subspace::Subspace;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{self, CoordinateSolver, Matrix, Vector};
use crate::report::{CheckRecord, Status, VerificationReport};
use crate::scalar::Scalar;

/// Absolute tolerance for float identity residuals (Jacobi, Leibniz, ...).
pub const IDENTITY_TOL: f64 = 1e-10;

/// One stored bracket `[e_i, e_j] = Σ terms` with `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketEntry<S> {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<(usize, S)>,
}

/// Lie algebra on a fixed basis.
///
/// Only `[e_i, e_j]` for `i < j` is stored; the opposite order is derived by
/// negation, so antisymmetry cannot be violated. A dense copy of the
/// structure constants is kept for the curvature kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra<S> {
    name: String,
    labels: Vec<String>,
    brackets: BTreeMap<(usize, usize), Vec<(usize, S)>>,
    dense: Vec<S>,
}

/// Accumulates bracket entries; repeated entries are summed.
#[derive(Debug, Clone)]
pub struct LieAlgebraBuilder<S> {
    name: String,
    labels: Vec<String>,
    raw: BTreeMap<(usize, usize), BTreeMap<usize, S>>,
    error: Option<Error>,
}

impl<S: Scalar> LieAlgebraBuilder<S> {
    /// Add `[e_i, e_j] += Σ coeff · e_k`. Order of `i, j` is free.
    pub fn bracket(mut self, i: usize, j: usize, terms: &[(usize, S)]) -> Self {
        self.add(i, j, terms);
        self
    }

    pub fn add(&mut self, i: usize, j: usize, terms: &[(usize, S)]) {
        let dim = self.labels.len();
        for &idx in [i, j].iter().chain(terms.iter().map(|(k, _)| k)) {
            if idx >= dim && self.error.is_none() {
                self.error = Some(Error::IndexOutOfRange { index: idx, dim });
            }
        }
        if i == j {
            if terms.iter().any(|(_, v)| !v.is_zero()) && self.error.is_none() {
                self.error = Some(Error::InvalidBracket {
                    i,
                    j,
                    reason: "[e_i, e_i] must vanish".into(),
                });
            }
            return;
        }
        let (a, b, sign) = if i < j { (i, j, false) } else { (j, i, true) };
        let slot = self.raw.entry((a, b)).or_default();
        for (k, v) in terms {
            let v = if sign { -v.clone() } else { v.clone() };
            *slot.entry(*k).or_insert_with(S::zero) += v;
        }
    }

    pub fn build(self) -> Result<LieAlgebra<S>> {
        if let Some(e) = self.error {
            return Err(e);
        }
        let dim = self.labels.len();
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        let mut brackets = BTreeMap::new();
        for (key, terms) in self.raw {
            let terms: Vec<(usize, S)> = terms.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            if !terms.is_empty() {
                brackets.insert(key, terms);
            }
        }
        Ok(LieAlgebra::from_canonical(self.name, self.labels, brackets))
    }
}

impl<S: Scalar> LieAlgebra<S> {
    pub fn builder(name: impl Into<String>, labels: Vec<String>) -> LieAlgebraBuilder<S> {
        LieAlgebraBuilder {
            name: name.into(),
            labels,
            raw: BTreeMap::new(),
            error: None,
        }
    }

    /// Abelian algebra of the given dimension with labels `e0, e1, ...`.
    pub fn abelian(dim: usize) -> Self {
        let labels = (0..dim).map(|i| format!("e{i}")).collect();
        Self::from_canonical(format!("abelian({dim})"), labels, BTreeMap::new())
    }

    fn from_canonical(name: String, labels: Vec<String>, brackets: BTreeMap<(usize, usize), Vec<(usize, S)>>) -> Self {
        let n = labels.len();
        let mut dense = vec![S::zero(); n * n * n];
        for (&(i, j), terms) in &brackets {
            for (k, v) in terms {
                dense[(i * n + j) * n + k] = v.clone();
                dense[(j * n + i) * n + k] = -v.clone();
            }
        }
        Self {
            name,
            labels,
            brackets,
            dense,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Stored brackets, `i < j`, nonzero terms only.
    pub fn entries(&self) -> impl Iterator<Item = BracketEntry<S>> + '_ {
        self.brackets.iter().map(|(&(i, j), terms)| BracketEntry {
            i,
            j,
            terms: terms.clone(),
        })
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// Coefficient of `e_k` in `[e_i, e_j]`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &S {
        let n = self.dim();
        &self.dense[(i * n + j) * n + k]
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector<S> {
        let n = self.dim();
        self.dense[(i * n + j) * n..(i * n + j + 1) * n].to_vec()
    }

    fn check_len(&self, v: &[S]) -> Result<()> {
        if v.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            })
        }
    }

    pub fn bracket(&self, x: &[S], y: &[S]) -> Result<Vector<S>> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[S], y: &[S]) -> Vector<S> {
        let mut out = linalg::zeros(self.dim());
        for (&(i, j), terms) in &self.brackets {
            let c = x[i].clone() * y[j].clone() - x[j].clone() * y[i].clone();
            if c.is_zero() {
                continue;
            }
            for (k, v) in terms {
                out[*k] += c.clone() * v.clone();
            }
        }
        out
    }

    /// Matrix of `y ↦ [x, y]`.
    pub fn ad(&self, x: &[S]) -> Result<Matrix<S>> {
        self.check_len(x)?;
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (&(i, j), terms) in &self.brackets {
            // [x, e_j] picks up x_i [e_i, e_j]; [x, e_i] picks up -x_j [e_i, e_j].
            for (k, v) in terms {
                if !x[i].is_zero() {
                    m[(*k, j)] += x[i].clone() * v.clone();
                }
                if !x[j].is_zero() {
                    m[(*k, i)] -= x[j].clone() * v.clone();
                }
            }
        }
        Ok(m)
    }

    pub fn ad_basis(&self, i: usize) -> Matrix<S> {
        let n = self.dim();
        Matrix::from_fn(n, n, |k, j| self.structure_constant(i, j, k).clone())
    }

    /// Checks the Jacobi identity on every basis triple `i < j < k` (the
    /// cyclic sum is alternating, so this covers all triples).
    pub fn validate_jacobi(&self) -> VerificationReport {
        let n = self.dim();
        let mut report = VerificationReport::new(format!("jacobi identity of {}", self.name));
        let mut worst = S::zero();
        let mut witness: Option<(usize, usize, usize, Vector<S>)> = None;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let sum = self.jacobi_triple(i, j, k);
                    let r = linalg::max_abs(&sum);
                    if r > worst {
                        worst = r.clone();
                    }
                    if witness.is_none() && !r.within(IDENTITY_TOL) {
                        witness = Some((i, j, k, sum));
                    }
                }
            }
        }
        let mut rec = CheckRecord::new("jacobi", Status::from_bool(witness.is_none())).with_residual(&worst);
        if let Some((i, j, k, sum)) = witness {
            let resid: Vec<String> = sum.iter().map(|x| x.to_exact_string()).collect();
            rec = rec.with_witness(format!(
                "triple ({i}, {j}, {k}) = ({}, {}, {}); cyclic sum [{}]",
                self.labels[i],
                self.labels[j],
                self.labels[k],
                resid.join(", ")
            ));
        }
        report.push(rec);
        report
    }

    /// Error unless the Jacobi identity holds.
    pub fn ensure_jacobi(&self) -> Result<()> {
        let rep = self.validate_jacobi();
        if rep.passed() {
            return Ok(());
        }
        let n = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let t = self.jacobi_triple(i, j, k);
                    if !t.iter().all(|x| x.within(IDENTITY_TOL)) {
                        return Err(Error::JacobiViolated(i, j, k));
                    }
                }
            }
        }
        unreachable!("failed report without witness")
    }

    fn jacobi_triple(&self, i: usize, j: usize, k: usize) -> Vector<S> {
        let n = self.dim();
        let (ei, ej, ek) = (linalg::unit(n, i), linalg::unit(n, j), linalg::unit(n, k));
        let a = self.bracket_unchecked(&self.bracket_basis(i, j), &ek);
        let b = self.bracket_unchecked(&self.bracket_basis(j, k), &ei);
        let c = self.bracket_unchecked(&self.bracket_basis(k, i), &ej);
        linalg::add(&linalg::add(&a, &b), &c)
    }

    /// The subalgebra spanned by `basis`, re-expressed on that basis.
    pub fn subalgebra(&self, basis: &[Vector<S>], labels: Vec<String>) -> Result<Self> {
        if labels.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                got: labels.len(),
            });
        }
        let solver = CoordinateSolver::new(basis, self.dim())?;
        let tol = self.float_tol();
        let mut b = Self::builder(format!("subalgebra of {}", self.name), labels);
        for a in 0..basis.len() {
            for c in a + 1..basis.len() {
                let br = self.bracket_unchecked(&basis[a], &basis[c]);
                let coords = solver.coordinates(&br, tol).map_err(|_| Error::NotSubalgebra)?;
                let terms: Vec<(usize, S)> = coords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.negligible(1.0))
                    .collect();
                b.add(a, c, &terms);
            }
        }
        b.build()
    }

    /// Human-readable linear combination of basis labels, e.g. `A1+2*A2`.
    pub fn describe_vector(&self, v: &[S]) -> String {
        let mut out = String::new();
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let label = &self.labels[i];
            let text = c.to_exact_string();
            let term = if *c == S::one() {
                label.clone()
            } else if *c == -S::one() {
                format!("-{label}")
            } else if text[1..].contains(['+', '-']) {
                format!("({text})*{label}")
            } else {
                format!("{text}*{label}")
            };
            if !out.is_empty() && !term.starts_with('-') {
                out.push('+');
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Parses a linear combination of basis labels such as `T`, `A1+2*A2`,
    /// `-r2*X0` or `(1+r2)*Y1`. Coefficients use the scalar grammar.
    pub fn parse_vector(&self, text: &str) -> Result<Vector<S>> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Format("empty linear combination".into()));
        }
        let mut out = linalg::zeros(self.dim());
        let mut depth = 0i32;
        let mut start = 0;
        let bytes = t.as_bytes();
        let mut terms = Vec::new();
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 && i > start && !matches!(bytes[i - 1], b'*' | b'/' | b'e' | b'E') => {
                    terms.push(&t[start..i]);
                    start = i;
                }
                _ => {}
            }
        }
        terms.push(&t[start..]);
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-S::one(), rest),
                None => (S::one(), term.strip_prefix('+').unwrap_or(term)),
            };
            let (coef, label) = match body.rfind('*') {
                Some(k) => {
                    let c = body[..k].trim_start_matches('(').trim_end_matches(')');
                    (S::parse_scalar(c)?, &body[k + 1..])
                }
                None => (S::one(), body),
            };
            let idx = self
                .label_index(label)
                .ok_or_else(|| Error::Format(format!("unknown basis label '{label}' in '{text}'")))?;
            out[idx] += sign * coef;
        }
        Ok(out)
    }

    /// Same algebra with converted scalars.
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LieAlgebra<T> {
        let brackets = self
            .brackets
            .iter()
            .map(|(&k, terms)| (k, terms.iter().map(|(i, v)| (*i, f(v))).collect()))
            .collect();
        LieAlgebra::from_canonical(self.name.clone(), self.labels.clone(), brackets)
    }

    pub fn to_f64(&self) -> LieAlgebra<f64> {
        self.map_scalars(|x| x.to_f64())
    }

    /// Membership tolerance scaled to the structure constants.
    pub(crate) fn float_tol(&self) -> f64 {
        if S::EXACT {
            0.0
        } else {
            let m = self.dense.iter().map(|x| x.to_f64().abs()).fold(1.0, f64::max);
            1e-9 * m
        }
    }
}
