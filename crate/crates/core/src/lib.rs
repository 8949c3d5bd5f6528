//! Multipartite entanglement diagnostics for ground states of 1+1D lattice
//! models, computed both exactly (von Neumann entropies) and from ditstring
//! probabilities (Shannon mutual information).
//!
//! The pipeline is: build a Hamiltonian ([`models`]), find its ground state
//! ([`solver`]), then evaluate entropies over a four-block partition of the
//! chain ([`entropy`]). [`filter`] and [`rotate`] refine the probability-based
//! estimates, and [`harness`] runs parameter sweeps.

pub mod entropy;
pub mod error;
pub mod filter;
pub mod harness;
pub mod hilbert;
pub mod models;
pub mod rotate;
pub mod solver;

pub use error::{Error, Result};
