//! Closed-form models of the four distribution strategies.
//!
//! * **DMD**: the ebits of the multipartite state itself are up-converted,
//!   sent and down-converted. Any lost ebit destroys the whole state.
//! * **Vanilla TMD**: microwave EPR pairs are distributed the same way and the
//!   state is teleported afterwards, so lost pairs can simply be regenerated.
//! * **IE-TMD**: the orchestrator's transducer generates microwave-optical
//!   pairs intrinsically; only the client down-converts.
//! * **IES-TMD**: both ends generate intrinsic pairs and a mid-point beam
//!   splitter with detectors heralds path entanglement between them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{one_way_capacity, two_way_capacity, ErasureChannel, FiberLink};
use crate::error::{Error, Result};
use crate::transducer::{efficiency, entropy_bits, ReducedParams, EPR_COOPERATIVITY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StrategyKind {
    #[serde(rename = "dmd")]
    Dmd,
    #[serde(rename = "vanilla-tmd")]
    VanillaTmd,
    #[serde(rename = "ie-tmd")]
    IeTmd,
    #[serde(rename = "ies-tmd")]
    IesTmd,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] = [
        StrategyKind::Dmd,
        StrategyKind::VanillaTmd,
        StrategyKind::IeTmd,
        StrategyKind::IesTmd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Dmd => "dmd",
            StrategyKind::VanillaTmd => "vanilla-tmd",
            StrategyKind::IeTmd => "ie-tmd",
            StrategyKind::IesTmd => "ies-tmd",
        }
    }

    /// Teleportation-based strategies can retry lost EPR pairs.
    pub fn is_teleported(self) -> bool {
        !matches!(self, StrategyKind::Dmd)
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "dmd" => Ok(StrategyKind::Dmd),
            "vanilla-tmd" | "vanilla" | "tmd" => Ok(StrategyKind::VanillaTmd),
            "ie-tmd" | "ie" => Ok(StrategyKind::IeTmd),
            "ies-tmd" | "ies" => Ok(StrategyKind::IesTmd),
            other => Err(Error::InvalidConfig(format!("unknown strategy '{other}'"))),
        }
    }
}

/// Hardware at both ends of one orchestrator-client link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkConfig {
    pub orchestrator: ReducedParams,
    pub client: ReducedParams,
    pub link: FiberLink,
}

impl LinkConfig {
    pub fn new(orchestrator: ReducedParams, client: ReducedParams, link: FiberLink) -> Self {
        Self {
            orchestrator,
            client,
            link,
        }
    }

    /// Identical transducers at both ends.
    pub fn symmetric(
        cooperativity: f64,
        extraction_optical: f64,
        extraction_microwave: f64,
        link: FiberLink,
    ) -> Result<Self> {
        let hw = ReducedParams::new(cooperativity, extraction_optical, extraction_microwave)?;
        Ok(Self::new(hw, hw, link))
    }

    /// Identical ideal-extraction transducers at both ends.
    pub fn ideal(cooperativity: f64, link: FiberLink) -> Result<Self> {
        Self::symmetric(cooperativity, 1.0, 1.0, link)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DetectorKind {
    /// Resolves one from two coincident photons.
    #[serde(rename = "counter")]
    PhotonCounter,
    /// Clicks on one or more photons without telling them apart.
    #[serde(rename = "spd")]
    SinglePhotonDetector,
}

impl FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "counter" | "photon-counter" => Ok(DetectorKind::PhotonCounter),
            "spd" | "single-photon-detector" => Ok(DetectorKind::SinglePhotonDetector),
            other => Err(Error::InvalidConfig(format!("unknown detector '{other}'"))),
        }
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DetectorKind::PhotonCounter => "counter",
            DetectorKind::SinglePhotonDetector => "spd",
        })
    }
}

/// How a finite detector efficiency enters the single-photon-detector click
/// probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SpdEfficiencyModel {
    /// Each arriving photon is seen independently with probability `eta_d`.
    #[default]
    #[serde(rename = "per-photon")]
    PerPhoton,
    /// The ideal click probability is scaled by `eta_d`.
    #[serde(rename = "scaled")]
    ScaledClick,
}

/// Mid-point detectors of the IES scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorModel {
    pub kind: DetectorKind,
    pub efficiency: f64,
    #[serde(default)]
    pub spd_model: SpdEfficiencyModel,
}

/// Detector efficiency of a gated InGaAs single-photon detector.
pub const REALISTIC_SPD_EFFICIENCY: f64 = 0.25;

impl DetectorModel {
    pub fn new(kind: DetectorKind, efficiency: f64) -> Result<Self> {
        crate::error::check_fraction("detector efficiency", efficiency)?;
        Ok(Self {
            kind,
            efficiency,
            spd_model: SpdEfficiencyModel::default(),
        })
    }

    pub fn photon_counter() -> Self {
        Self {
            kind: DetectorKind::PhotonCounter,
            efficiency: 1.0,
            spd_model: SpdEfficiencyModel::default(),
        }
    }

    pub fn ideal_spd() -> Self {
        Self {
            kind: DetectorKind::SinglePhotonDetector,
            efficiency: 1.0,
            spd_model: SpdEfficiencyModel::default(),
        }
    }

    pub fn with_spd_model(self, spd_model: SpdEfficiencyModel) -> Self {
        Self { spd_model, ..self }
    }

    /// Probability that at least one of `photons` photons is registered.
    pub fn sees_any(&self, photons: u32) -> f64 {
        1.0 - (1.0 - self.efficiency).powi(photons as i32)
    }
}

impl Default for DetectorModel {
    fn default() -> Self {
        Self::photon_counter()
    }
}

/// Per-link ebit probability with up-conversion, fiber and down-conversion:
/// `eta_up * eta_down * exp(-l / L_o)`.
pub fn ebit_prob_vanilla(cfg: &LinkConfig) -> f64 {
    efficiency(&cfg.orchestrator) * efficiency(&cfg.client) * cfg.link.transmittance()
}

/// Orchestrator efficiency used by IE-TMD: the intrinsic source is operated
/// no higher than the cooperativity giving a balanced splitter.
pub fn ie_orchestrator_efficiency(cfg: &LinkConfig) -> f64 {
    efficiency(&cfg.orchestrator.with_cooperativity_cap(EPR_COOPERATIVITY))
}

/// Per-link ebit probability with intrinsic generation at the orchestrator:
/// `S(eta_o) * eta_down * exp(-l / L_o)`.
pub fn ebit_prob_ie(cfg: &LinkConfig) -> f64 {
    entropy_bits(ie_orchestrator_efficiency(cfg)) * efficiency(&cfg.client) * cfg.link.transmittance()
}

/// Per-link ebit probability with intrinsic generation at both ends and a
/// mid-point heralding station: `S(eta) * 2(eta - eta^2) * exp(-l / 2L_o)`.
pub fn ebit_prob_ies(eta: f64, link: &FiberLink) -> f64 {
    entropy_bits(eta) * ies_counter_click_prob(eta) * link.half_transmittance()
}

/// Dispatches on the strategy. DMD shares the vanilla per-link formula; IES
/// uses the orchestrator efficiency for both ends.
pub fn ebit_prob(kind: StrategyKind, cfg: &LinkConfig) -> f64 {
    match kind {
        StrategyKind::Dmd | StrategyKind::VanillaTmd => ebit_prob_vanilla(cfg),
        StrategyKind::IeTmd => ebit_prob_ie(cfg),
        StrategyKind::IesTmd => ebit_prob_ies(efficiency(&cfg.orchestrator), &cfg.link),
    }
}

/// Probability that all `n` ebits of a persistency-one state arrive in a
/// single DMD attempt.
pub fn dmd_state_success_prob(p_link: f64, n_clients: usize) -> Result<f64> {
    if n_clients == 0 {
        return Err(Error::Domain("at least one client is required".into()));
    }
    crate::error::check_fraction("link probability", p_link)?;
    Ok(p_link.powi(n_clients as i32))
}

/// Capacity upper bound per link: one-way erasure capacity for DMD, two-way
/// for the teleportation-based strategies.
pub fn capacity_bound(kind: StrategyKind, cfg: &LinkConfig) -> f64 {
    let ch = ErasureChannel::new(ebit_prob(kind, cfg).clamp(0.0, 1.0))
        .expect("clamped probability is a valid erasure channel");
    if kind.is_teleported() {
        two_way_capacity(&ch)
    } else {
        one_way_capacity(&ch)
    }
}

/// Probability that exactly one of two equal-efficiency sources emits an
/// optical photon, i.e. that a photon counter heralds entanglement.
pub fn ies_counter_click_prob(eta: f64) -> f64 {
    2.0 * (eta - eta * eta)
}

/// Probability of a single-photon-detector click, including double-photon
/// events the detector cannot tell apart.
pub fn ies_spd_click_prob(eta: f64, det: &DetectorModel) -> f64 {
    let single = ies_counter_click_prob(eta);
    let double = eta * eta;
    match det.spd_model {
        SpdEfficiencyModel::PerPhoton => single * det.sees_any(1) + double * det.sees_any(2),
        SpdEfficiencyModel::ScaledClick => det.efficiency * (single + double),
    }
}

/// Fraction of single-photon-detector clicks that herald entanglement,
/// `2(1 - eta) / (2 - eta)`.
pub fn ies_herald_fidelity_fraction(eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::Domain(format!(
            "herald fraction undefined for eta = {eta}: no clicks"
        )));
    }
    Ok(2.0 * (1.0 - eta) / (2.0 - eta))
}
