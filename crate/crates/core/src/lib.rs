//! Causal structure discovery toolkit.
//!
//! * [`graph`]: DAGs, PDAGs, d-separation, Meek rules, essential graphs,
//!   Markov equivalence classes.
//! * [`ci`]: conditional-independence providers (graph oracle, covariance
//!   oracle, Fisher-z on samples) and marginal invariance tests.
//! * [`sem`]: linear-Gaussian structural equation models and interventions.
//! * [`discovery`]: PC, SP, GSP and GAS, minimal I-MAPs, interventional
//!   orientation.
//! * [`bench`]: structural Hamming distance, unfaithfulness volume, CI-count
//!   tables.
//! * [`io`]: JSON/CSV file formats (one-based node labels).
//!
//! Node indices are zero-based throughout the library.

pub mod bench;
pub mod ci;
pub mod discovery;
pub mod error;
pub mod graph;
pub mod io;
pub mod sem;

pub use error::{Error, Result};
