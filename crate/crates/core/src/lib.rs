//! Deterministic LOCAL-model simulation of T-dominating-set algorithms on
//! labeled rings and graphs, with verification oracles and the two
//! indistinguishability harnesses (ring cut-and-paste and 8-colouring).

pub mod adversary;
pub mod algorithms;
pub mod cli;
pub mod graph;
pub mod reductions;
pub mod sim;
pub mod verify;
