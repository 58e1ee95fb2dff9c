//! Brute-force state engines used as oracles for the closed-form models.
//!
//! [`fock`] handles two bosonic modes (transducer as beam splitter,
//! Hong-Ou-Mandel), [`herald`] the four-mode heralding station, and [`qubit`]
//! a small state-vector register for GHZ states and teleportation.

pub mod fock;
pub mod herald;
pub mod qubit;

pub use fock::{beam_splitter, transducer_output_state, FockTwoMode, ModeLabel};
pub use herald::{ies_swap_oracle, HeraldBranch, HeraldOutcome, PhotonClass};
pub use qubit::{
    make_ghz, measure_out_qubit, teleport, teleport_with_outcomes, BellOutcome, EprResource,
    MeasurementBasis, PureState,
};
