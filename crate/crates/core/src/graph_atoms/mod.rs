//! Graphs, the relation-algebra atom structure `α(G)`, basic matrices,
//! labelled graphs in GG, and the truncated Ramsey kernel.

mod alpha;
mod graph;
mod labelled;
mod matrices;
mod ramsey;

pub use alpha::{check_ra_atom_structure, RaAtom, RaAtomStructure, RaCondition, RaViolation, IDENTITY};
pub use graph::{Graph, GraphSpec};
pub use labelled::{
    find_witness, gg_membership, gg_triangle, saturate_labelled_model, ExtensionTask, GgLabel, GgVerdict,
    LabelledGraph, Saturation,
};
pub use matrices::{ca_atoms_from_matrices, enumerate_basic_matrices, BasicMatrix};
pub use ramsey::{is_monochromatic, monochromatic_composition_witness, ramsey_kernel_check, RamseyReport, RamseyViolation};

use thiserror::Error;

use crate::bao::BaoError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("search budget of {0} nodes exceeded")]
    Budget(u64),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid graph: {0}")]
    Parse(String),
    #[error("incomplete labelling: {0}")]
    Incomplete(String),
    #[error(transparent)]
    Bao(#[from] BaoError),
}
