//! Exact and floating-point verification of left-invariant geometry on
//! solvable Lie groups: contact metric structures, (κ, μ)-nullity, Ricci
//! solitons, and the algebras they are built on.
//!
//! Every algorithm is generic over [`Scalar`], implemented for the exact
//! field `ℚ(√2)` ([`QSqrt2`]) and for `f64`.

pub mod algebra;
pub mod catalog;
pub mod contact;
pub mod error;
pub mod format;
pub mod linalg;
pub mod report;
pub mod riemannian;
pub mod scalar;
pub mod soliton;

pub use algebra::{LieAlgebra, LieAlgebraBuilder, SeriesReport, Subspace};
pub use contact::{AlmostContactStructure, KappaMuFit, MuValue};
pub use error::{Error, Result, ScalarParseError};
pub use linalg::{Matrix, Vector};
pub use report::{CheckRecord, ScalarValue, Status, VerificationReport};
pub use riemannian::{CurvaturePackage, MetricLieAlgebra, SectionalMinimum};
pub use scalar::{QSqrt2, Scalar};
pub use soliton::{LauretReport, RankReduction, SolitonStatus, SolitonType, SolitonVerdict};
