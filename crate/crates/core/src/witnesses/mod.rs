//! Explicit witness constructions: the finite–cofinite partition algebra,
//! the rational vector-space sequences and the step-by-step saturated
//! structure over the integers.

mod builder;
mod partition;
mod vector;

pub use builder::{
    builder_step, builder_verify, cantor_pair, cantor_unpair, decode_task, prec_element, prec_index, prec_least,
    replay_trace, run_builder, s_sequences, schedule_code, scheduled_task, AddedTuple, BuilderReport, BuilderTask, CofSet,
    ConditionCheck, GroupElement, Prescription, SaturatedState, TraceRecord, DISTINCT_BLOCKS, EXTENSIONS,
    PAIRWISE_DISJOINT, PERMUTATION_CLOSED, PRESCRIPTIONS,
};
pub use partition::{
    additivity_failure_certificate, concrete_partition, AdditivityCertificate, ConcretePartition, PaElement,
    PartitionAlgebra,
};
pub use vector::{
    in_y, neat_embedding_map_check, recovery_witnesses, singleton_recovery_check, FiniteSupportSeq,
    NeatEmbeddingReport, SingletonRecovery,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("replay mismatch: {0}")]
    Replay(String),
}
