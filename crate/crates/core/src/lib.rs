//! Exact verification of Hopf-Galois data.
//!
//! Everything is finite-dimensional linear algebra over an exact [`Field`]:
//! graded spaces with a bicharacter braiding, structure-constant Hopf
//! algebras, (co)module (co)algebras, the canonical map, descent data and the
//! quantum category attached to a principal bundle.

pub mod bundle;
pub mod catalog;
pub mod descent;
pub mod dsl;
pub mod field;
pub mod graded;
pub mod hopf;
pub mod limits;
pub mod matrix;
pub mod qcat;
pub mod report;

pub use field::{Field, Fp, ParseScalarError, Rational};
pub use graded::{braiding, compose, dualize, tensor, GradedSpace, Grading, GradingKind, Morphism, TypeError};
pub use limits::{
    coequaliser, equaliser, factor_through_coequaliser, factor_through_equaliser, is_isomorphism, Coequaliser,
    Equaliser, FactorizationError, IsoVerdict,
};
pub use hopf::{Algebra, Coalgebra, HopfAlgebra};
pub use matrix::Matrix;
pub use report::{Check, Report, Verdict};

pub type Q = Rational;
pub type QMatrix = Matrix<Rational>;
pub type QSpace = GradedSpace<Rational>;
pub type QMorphism = Morphism<Rational>;
pub type FpMatrix = Matrix<Fp>;
pub type FpSpace = GradedSpace<Fp>;
pub type FpMorphism = Morphism<Fp>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Factorization(#[from] FactorizationError),
    #[error("{0}")]
    Precondition(String),
}
