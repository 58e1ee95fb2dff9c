//! Microwave-optical quantum transduction models for distributing
//! multipartite entanglement over a star network.
//!
//! * [`transducer`]: conversion efficiency, cooperativity thresholds and the
//!   transducer's beam-splitter picture.
//! * [`channel`]: fiber loss and the erasure channel with its capacities.
//! * [`strategies`]: per-link success probabilities and capacity bounds of
//!   direct and teleportation-based distribution.
//! * [`quantumsim`]: Fock-state and qubit engines that re-derive the above.
//! * [`montecarlo`]: trial-level simulation of a whole star network.
//! * [`cli`]: the sweep, threshold, click and simulation commands.

pub mod channel;
pub mod cli;
pub mod error;
pub mod montecarlo;
pub mod quantumsim;
pub mod strategies;
pub mod transducer;

pub use error::{Error, Result};
