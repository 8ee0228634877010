//! Algebra definition files (JSON) and linear-map files.
//!
//! Exact scalars are strings in the canonical `p/q+r/s*r2` grammar; floats
//! are written as 17-significant-digit strings. Integer JSON numbers are
//! accepted in either field, other numbers only in `float64` files.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::LieAlgebra;
use crate::contact::AlmostContactStructure;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::riemannian::MetricLieAlgebra;
use crate::scalar::{QSqrt2, Scalar};

/// A scalar as written in a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Text(String),
    Number(serde_json::Number),
}

impl ScalarText {
    pub fn of<S: Scalar>(v: &S) -> Self {
        ScalarText::Text(v.to_exact_string())
    }

    pub fn parse<S: Scalar>(&self) -> Result<S> {
        match self {
            ScalarText::Text(t) => Ok(S::parse_scalar(t)?),
            ScalarText::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(S::from_i64(i))
                } else if S::EXACT {
                    Err(Error::Format(format!(
                        "non-integer number {n} in an exact file; write it as a string"
                    )))
                } else {
                    Ok(S::parse_scalar(&n.to_string())?)
                }
            }
        }
    }
}

impl fmt::Display for ScalarText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarText::Text(t) => f.write_str(t),
            ScalarText::Number(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub k: usize,
    pub value: ScalarText,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketRecord {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<TermRecord>,
}

/// `"orthonormal"` or a full Gram matrix (rows).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricSpec {
    Named(String),
    Gram(Vec<Vec<ScalarText>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContactSpec {
    pub xi: Vec<ScalarText>,
    pub eta: Vec<ScalarText>,
    /// Rows of the matrix of `φ`.
    pub phi: Vec<Vec<ScalarText>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    #[serde(rename = "J")]
    pub j: Vec<Vec<ScalarText>>,
}

/// On-disk algebra definition. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: String,
    pub field: String,
    pub dim: usize,
    pub basis: Vec<String>,
    pub brackets: Vec<BracketRecord>,
    pub metric: MetricSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contact: Option<ContactSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexSpec>,
}

/// Linear map file: `matrix` rows, column `k` is the image of basis vector `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub field: String,
    pub matrix: Vec<Vec<ScalarText>>,
}

/// Parsed and validated contents of a definition file.
#[derive(Debug, Clone)]
pub struct Definition<S: Scalar> {
    pub metric: MetricLieAlgebra<S>,
    pub contact: Option<AlmostContactStructure<S>>,
    pub complex: Option<Matrix<S>>,
}

/// A definition in whichever backend its `field` names.
#[derive(Debug, Clone)]
pub enum LoadedDefinition {
    Exact(Box<Definition<QSqrt2>>),
    Float(Box<Definition<f64>>),
}

pub const FIELD_TAGS: [&str; 2] = [QSqrt2::FIELD_TAG, f64::FIELD_TAG];

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Format(format!(
            "at {path} (line {}, column {}): {inner}",
            inner.line(),
            inner.column()
        ))
    })
}

fn vector<S: Scalar>(v: &[ScalarText], n: usize, what: &str) -> Result<Vector<S>> {
    if v.len() != n {
        return Err(Error::Format(format!("{what}: expected {n} entries, got {}", v.len())));
    }
    v.iter().map(|x| x.parse()).collect()
}

fn matrix<S: Scalar>(rows: &[Vec<ScalarText>], n: usize, what: &str) -> Result<Matrix<S>> {
    if rows.len() != n {
        return Err(Error::Format(format!("{what}: expected {n} rows, got {}", rows.len())));
    }
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, r)| vector(r, n, &format!("{what} row {i}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(rows))
}

fn matrix_text<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<ScalarText>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(ScalarText::of).collect())
        .collect()
}

impl AlgebraFile {
    pub fn parse(text: &str) -> Result<Self> {
        let f: Self = from_json(text)?;
        if !FIELD_TAGS.contains(&f.field.as_str()) {
            return Err(Error::Format(format!(
                "field must be one of {FIELD_TAGS:?}, got {:?}",
                f.field
            )));
        }
        if f.basis.len() != f.dim {
            return Err(Error::Format(format!(
                "basis has {} labels but dim is {}",
                f.basis.len(),
                f.dim
            )));
        }
        if let MetricSpec::Named(n) = &f.metric {
            if n != "orthonormal" {
                return Err(Error::Format(format!(
                    "metric must be \"orthonormal\" or a matrix, got {n:?}"
                )));
            }
        }
        Ok(f)
    }

    /// Bracket table alone, without the Jacobi check or the metric.
    pub fn to_lie_algebra<S: Scalar>(&self) -> Result<LieAlgebra<S>> {
        if self.field != S::FIELD_TAG {
            return Err(Error::Format(format!(
                "file field is {:?}, requested backend is {:?}",
                self.field,
                S::FIELD_TAG
            )));
        }
        let mut b = LieAlgebra::builder(self.name.clone(), self.basis.clone());
        for (idx, br) in self.brackets.iter().enumerate() {
            let terms = br
                .terms
                .iter()
                .map(|t| Ok((t.k, t.value.parse::<S>()?)))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Format(format!("brackets[{idx}]: {e}")))?;
            b.add(br.i, br.j, &terms);
        }
        b.build()
    }

    /// Build in backend `S`; the file's `field` must match.
    pub fn to_definition<S: Scalar>(&self) -> Result<Definition<S>> {
        let n = self.dim;
        let alg = self.to_lie_algebra::<S>()?;
        let gram = match &self.metric {
            MetricSpec::Named(_) => Matrix::identity(n),
            MetricSpec::Gram(rows) => matrix(rows, n, "metric")?,
        };
        let metric = MetricLieAlgebra::new(alg, gram)?;
        let contact = self
            .contact
            .as_ref()
            .map(|c| {
                AlmostContactStructure::from_parts(
                    metric.clone(),
                    vector(&c.xi, n, "contact.xi")?,
                    vector(&c.eta, n, "contact.eta")?,
                    matrix(&c.phi, n, "contact.phi")?,
                )
            })
            .transpose()?;
        let complex = self
            .complex
            .as_ref()
            .map(|c| matrix(&c.j, n, "complex.J"))
            .transpose()?;
        Ok(Definition {
            metric,
            contact,
            complex,
        })
    }

    pub fn load(&self) -> Result<LoadedDefinition> {
        if self.field == QSqrt2::FIELD_TAG {
            self.to_definition().map(|d| LoadedDefinition::Exact(Box::new(d)))
        } else {
            self.to_definition().map(|d| LoadedDefinition::Float(Box::new(d)))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

impl<S: Scalar> Definition<S> {
    pub fn new(metric: MetricLieAlgebra<S>) -> Self {
        Self {
            metric,
            contact: None,
            complex: None,
        }
    }

    pub fn from_contact(s: AlmostContactStructure<S>) -> Self {
        Self {
            metric: s.base().clone(),
            contact: Some(s),
            complex: None,
        }
    }

    pub fn with_complex(mut self, j: Matrix<S>) -> Self {
        self.complex = Some(j);
        self
    }

    pub fn to_file(&self) -> AlgebraFile {
        let alg = self.metric.alg();
        let brackets = alg
            .entries()
            .map(|e| BracketRecord {
                i: e.i,
                j: e.j,
                terms: e
                    .terms
                    .iter()
                    .map(|(k, v)| TermRecord {
                        k: *k,
                        value: ScalarText::of(v),
                    })
                    .collect(),
            })
            .collect();
        let metric = if self.metric.is_orthonormal_basis() {
            MetricSpec::Named("orthonormal".into())
        } else {
            MetricSpec::Gram(matrix_text(self.metric.gram()))
        };
        AlgebraFile {
            name: alg.name().to_string(),
            field: S::FIELD_TAG.to_string(),
            dim: alg.dim(),
            basis: alg.labels().to_vec(),
            brackets,
            metric,
            contact: self.contact.as_ref().map(|c| ContactSpec {
                xi: c.xi().iter().map(ScalarText::of).collect(),
                eta: c.eta().iter().map(ScalarText::of).collect(),
                phi: matrix_text(c.phi()),
            }),
            complex: self.complex.as_ref().map(|j| ComplexSpec { j: matrix_text(j) }),
        }
    }
}

impl MapFile {
    pub fn parse(text: &str) -> Result<Self> {
        let f: Self = from_json(text)?;
        if !FIELD_TAGS.contains(&f.field.as_str()) {
            return Err(Error::Format(format!(
                "field must be one of {FIELD_TAGS:?}, got {:?}",
                f.field
            )));
        }
        Ok(f)
    }

    pub fn of<S: Scalar>(m: &Matrix<S>) -> Self {
        Self {
            field: S::FIELD_TAG.to_string(),
            matrix: matrix_text(m),
        }
    }

    pub fn to_matrix<S: Scalar>(&self) -> Result<Matrix<S>> {
        matrix(&self.matrix, self.matrix.len(), "matrix")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn round_trip_exact_contact() {
        let s = catalog::build_g_alpha_beta::<QSqrt2>(&"1/3".parse().unwrap(), &"r2".parse().unwrap(), 3).unwrap();
        let file = Definition::from_contact(s.clone()).to_file();
        let back = AlgebraFile::parse(&file.to_json()).unwrap();
        assert_eq!(back, file);
        let def = back.to_definition::<QSqrt2>().unwrap();
        assert_eq!(def.contact.unwrap(), s);
    }

    #[test]
    fn round_trip_gram_and_complex() {
        let m = catalog::build_solvable_model::<QSqrt2>(&"2*r2".parse().unwrap(), 1).unwrap();
        let scaled = m.metric.scaled(&"3/2".parse().unwrap()).unwrap();
        let file = Definition::new(scaled.clone()).with_complex(m.j.clone()).to_file();
        assert!(matches!(file.metric, MetricSpec::Gram(_)));
        let def = AlgebraFile::parse(&file.to_json())
            .unwrap()
            .to_definition::<QSqrt2>()
            .unwrap();
        assert_eq!(def.metric, scaled);
        assert_eq!(def.complex.unwrap(), m.j);
    }

    #[test]
    fn unknown_fields_and_bad_values_are_located() {
        let text = r#"{"name":"x","field":"exact-sqrt2","dim":1,"basis":["a"],"brackets":[],"metric":"orthonormal","extra":1}"#;
        let e = AlgebraFile::parse(text).unwrap_err().to_string();
        assert!(e.contains("extra"), "{e}");
        let text = r#"{"name":"x","field":"exact-sqrt2","dim":2,"basis":["a","b"],
            "brackets":[{"i":0,"j":1,"terms":[{"k":1,"value":0.5}]}],"metric":"orthonormal"}"#;
        let f = AlgebraFile::parse(text).unwrap();
        assert!(matches!(f.to_definition::<QSqrt2>(), Err(Error::Format(_))));
        let text = text.replace("exact-sqrt2", "float64");
        let f = AlgebraFile::parse(&text).unwrap();
        assert!(matches!(f.load().unwrap(), LoadedDefinition::Float(_)));
        assert!(AlgebraFile::parse(&text.replace("\"dim\":2", "\"dim\":3")).is_err());
    }

    #[test]
    fn map_file_round_trip() {
        let m = catalog::s_n_isomorphism_map::<QSqrt2>(2).unwrap();
        let f = MapFile::parse(&MapFile::of(&m).to_json()).unwrap();
        assert_eq!(f.to_matrix::<QSqrt2>().unwrap(), m);
    }
}
