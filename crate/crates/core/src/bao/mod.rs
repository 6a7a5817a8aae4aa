//! Boolean algebras with operators: atom structures, complex algebras,
//! finite-cofinite sets, terms, additivity and representation checks.

mod additivity;
mod atom_set;
mod complex;
mod crpa;
mod fincof;
mod lift;
mod representation;
mod signature;
mod structure;
mod term;

pub use additivity::{check_complete_additivity, AdditivityVerdict, AdditivityWitness, SupremumOracle};
pub use atom_set::AtomSet;
pub use complex::ComplexAlgebra;
pub use crpa::{check_crpa2_schema, CrpaReport, CrpaVariant, PairVerdict};
pub use fincof::{FinCofSet, Polarity};
pub use lift::{diagonal_quotient_lift, generated_partition, is_simple};
pub use representation::{verify_complete_representation, RepresentationReport, SetAlgebraRepresentation};
pub use signature::{Operator, Signature};
pub use structure::{
    all_tuples, check_atom_structure_axioms, AtomStructureJson, AxiomCondition, AxiomViolation,
    BinaryRelation, FiniteAtomStructure,
};
pub use term::{eval_term, parse_term, Term};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaoError {
    #[error("invalid signature: {0}")]
    Signature(String),
    #[error("index {index} out of range for dimension {dimension}")]
    IndexOutOfRange { index: usize, dimension: usize },
    #[error("operator {0} is not enabled by the signature")]
    DisabledOperator(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed structure: {0}")]
    Shape(String),
    #[error("configuration error: missing relation: {0}")]
    MissingRelation(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unsupported query: {0}")]
    Unsupported(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
}
