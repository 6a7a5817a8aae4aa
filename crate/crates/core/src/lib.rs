pub mod bao;
pub mod games;
pub mod graph_atoms;
pub mod witnesses;
