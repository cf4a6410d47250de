//! Automorphism-assisted QAOA for unweighted MaxCut.
//!
//! The crate computes edge orbits of a graph's automorphism group, builds the
//! full and the orbit-reduced Ising Hamiltonians, simulates the QAOA ansatz on
//! a dense statevector and optimizes its angles with a derivative-free method.
//! Reverse-causal-cone coverage analysis and a small experiment harness sit on
//! top.

pub mod automorphism;
pub mod bits;
pub mod error;
pub mod graph;
pub mod hamiltonian;
pub mod harness;
pub mod optimizer;
pub mod rcc;
pub mod simulator;
mod unionfind;

pub use error::{Error, Result};
