//! Atom games: the Ehrenfeucht–Fraïssé game on atomic structures with its
//! back-and-forth systems, component products, and the clique-witness game
//! on relation-algebra atom structures.

mod ef;
mod square;
mod structure;

pub use ef::{
    bf_system_check, ef_decide, ef_system_equivalence_test, fixed_point_system_exists, fresh_atom_strategy_verify,
    verify_ef_certificate, BfClause, BfFailure, BfSystem, EfCertificate, EfOutcome, EquivalenceReport, ExistsMove,
    ForallMove, FreshAtomReport, Play, Player, Side,
};
pub use square::{
    square_game, square_game_brute_force, verify_square_certificate, AtomTable, Demand, ExplicitTable, Network,
    SquareOutcome, SquareStep,
};
pub use structure::{product_model, qf_type, AtomicPresentation, Component, ComponentSize, FiniteStructure, QfType};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("search budget of {0} positions exceeded")]
    Budget(u64),
    #[error("signature mismatch: {0}")]
    Signature(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}
