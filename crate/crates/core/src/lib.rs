pub mod bipartite;
pub mod classifier;
pub mod cli;
pub mod error;
pub mod harness;
pub mod numerics;
pub mod pencil;
pub mod states;
