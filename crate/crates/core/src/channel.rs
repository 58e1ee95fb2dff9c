//! Optical fiber links and the quantum erasure channel.
//!
//! Every strategy reduces its per-link behaviour to an erasure channel with
//! some success probability `p`; the capacities below are shared by all of
//! them.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_fraction, Error, Result};

/// Attenuation length of telecom fiber at 1550 nm (0.2 dB/km), in km.
pub const DEFAULT_ATTENUATION_LENGTH_KM: f64 = 22.0;

/// One orchestrator-client fiber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberLink {
    pub length_km: f64,
    pub attenuation_length_km: f64,
}

impl FiberLink {
    pub fn new(length_km: f64, attenuation_length_km: f64) -> Result<Self> {
        if !length_km.is_finite() || length_km < 0.0 {
            return Err(Error::Domain(format!("link length {length_km} km must be >= 0")));
        }
        if !(attenuation_length_km > 0.0) || !attenuation_length_km.is_finite() {
            return Err(Error::Domain(format!(
                "attenuation length {attenuation_length_km} km must be > 0"
            )));
        }
        Ok(Self {
            length_km,
            attenuation_length_km,
        })
    }

    /// Link of the given length with the default attenuation length.
    pub fn telecom(length_km: f64) -> Result<Self> {
        Self::new(length_km, DEFAULT_ATTENUATION_LENGTH_KM)
    }

    /// Zero-length link.
    pub fn local() -> Self {
        Self {
            length_km: 0.0,
            attenuation_length_km: DEFAULT_ATTENUATION_LENGTH_KM,
        }
    }

    /// Photon survival over the whole link.
    pub fn transmittance(&self) -> f64 {
        survival(self, 1.0)
    }

    /// Photon survival from either end to the mid-point.
    pub fn half_transmittance(&self) -> f64 {
        survival(self, 0.5)
    }
}

/// Photon survival probability `exp(-fraction * l / L_o)` over a fraction of
/// the link.
pub fn survival(link: &FiberLink, fraction_of_length: f64) -> f64 {
    (-fraction_of_length * link.length_km / link.attenuation_length_km).exp()
}

/// Erasure channel: the input passes untouched with probability `p` and is
/// replaced by a flagged erasure symbol otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErasureChannel {
    success_prob: f64,
}

impl ErasureChannel {
    pub fn new(success_prob: f64) -> Result<Self> {
        check_fraction("success probability", success_prob)?;
        Ok(Self { success_prob })
    }

    pub fn success_prob(&self) -> f64 {
        self.success_prob
    }

    pub fn erasure_prob(&self) -> f64 {
        1.0 - self.success_prob
    }

    /// Samples one use of the channel: `true` if the input survived.
    pub fn transmit<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        rng.random::<f64>() < self.success_prob
    }
}

/// One branch of a channel output.
#[derive(Debug, Clone, PartialEq)]
pub enum ErasureBranch<S> {
    Intact(S),
    Erased,
}

/// Weighted mixture of an intact input and the erasure flag.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedOutcome<S> {
    pub branches: Vec<(f64, ErasureBranch<S>)>,
}

impl<S> MixedOutcome<S> {
    pub fn total_weight(&self) -> f64 {
        self.branches.iter().map(|(w, _)| w).sum()
    }

    pub fn erased_weight(&self) -> f64 {
        self.branches
            .iter()
            .filter(|(_, b)| matches!(b, ErasureBranch::Erased))
            .map(|(w, _)| w)
            .sum()
    }

    pub fn intact_weight(&self) -> f64 {
        self.total_weight() - self.erased_weight()
    }
}

/// Applies the channel to a state, producing both branches with their weights.
pub fn apply_erasure<S>(ch: &ErasureChannel, state: S) -> MixedOutcome<S> {
    MixedOutcome {
        branches: vec![
            (ch.success_prob, ErasureBranch::Intact(state)),
            (ch.erasure_prob(), ErasureBranch::Erased),
        ],
    }
}

/// One-way capacities below this are rounding noise of `2p - 1` at `p = 1/2`
/// and are reported as zero.
pub const ONE_WAY_CAPACITY_FLOOR: f64 = 4.0 * f64::EPSILON;

/// One-way quantum capacity `max{0, 2p - 1}`.
pub fn one_way_capacity(ch: &ErasureChannel) -> f64 {
    let c = 2.0 * ch.success_prob - 1.0;
    if c <= ONE_WAY_CAPACITY_FLOOR {
        0.0
    } else {
        c
    }
}

/// Two-way (classically assisted) quantum capacity `p`.
pub fn two_way_capacity(ch: &ErasureChannel) -> f64 {
    ch.success_prob
}
