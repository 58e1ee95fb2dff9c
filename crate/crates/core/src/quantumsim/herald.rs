//! Exact model of the mid-point heralding station.
//!
//! Two intrinsic sources, one at each end of the link, each emit
//! `sqrt(1 - eta)|0_M 0_O> + sqrt(eta)|1_M 1_O>`. The optical modes meet on
//! a balanced beam splitter followed by two detectors. The joint four-mode
//! state is built explicitly and every detection pattern is projected out,
//! so branch probabilities are exact rather than sampled.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::Serialize;

use super::fock::{beam_splitter_terms, FockTwoMode, ModeLabel, DEFAULT_CUTOFF};
use crate::error::{check_fraction, Result};
use crate::strategies::{DetectorKind, DetectorModel, SpdEfficiencyModel};

// Mode order in the joint register.
const MW_ORCH: usize = 0;
const OPT_ORCH: usize = 1;
const OPT_CLIENT: usize = 2;
const MW_CLIENT: usize = 3;

type Occupation = [usize; 4];

/// Physical class of a detection pattern, by total optical photon number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PhotonClass {
    NoPhoton,
    /// Exactly one source emitted: the microwave modes share one photon.
    Single,
    /// Both sources emitted: the microwave modes hold `|1, 1>`.
    Double,
}

impl PhotonClass {
    fn from_count(n: usize) -> Self {
        match n {
            0 => PhotonClass::NoPhoton,
            1 => PhotonClass::Single,
            _ => PhotonClass::Double,
        }
    }
}

/// One projective detection pattern and the microwave state it leaves.
#[derive(Debug, Clone, PartialEq)]
pub struct HeraldBranch {
    /// Photon numbers at the two beam-splitter output ports.
    pub pattern: (usize, usize),
    pub class: PhotonClass,
    pub probability: f64,
    /// Post-measurement state of (orchestrator microwave, client microwave).
    pub microwave_state: FockTwoMode,
    /// Probability that the detector accepts this pattern as a herald.
    pub accept_probability: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassProbabilities {
    pub no_photon: f64,
    pub single: f64,
    pub double: f64,
}

/// One sampled run of the station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledHerald {
    pub branch: usize,
    pub class: PhotonClass,
    pub accepted: bool,
}

impl SampledHerald {
    /// An accepted herald that really carries one shared photon.
    pub fn is_genuine(&self) -> bool {
        self.accepted && self.class == PhotonClass::Single
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeraldOutcome {
    pub branches: Vec<HeraldBranch>,
    pub classes: ClassProbabilities,
    /// Probability that the detector reports a herald.
    pub accept_probability: f64,
    /// Probability of a reported herald coming from a single-photon pattern.
    pub genuine_accept_probability: f64,
    pub sampled: SampledHerald,
}

impl HeraldOutcome {
    pub fn false_herald_probability(&self) -> f64 {
        self.accept_probability - self.genuine_accept_probability
    }

    /// Sampled branch's microwave state.
    pub fn sampled_state(&self) -> &FockTwoMode {
        &self.branches[self.sampled.branch].microwave_state
    }
}

fn accept_probability(pattern: (usize, usize), det: &DetectorModel) -> f64 {
    let (k1, k2) = pattern;
    let q = 1.0 - det.efficiency;
    let miss = |k: usize| q.powi(k as i32);
    match det.kind {
        // Exactly one photon registered overall.
        DetectorKind::PhotonCounter => {
            let k = k1 + k2;
            if k == 0 {
                0.0
            } else {
                k as f64 * det.efficiency * q.powi(k as i32 - 1)
            }
        }
        // Exactly one of the two detectors fires.
        DetectorKind::SinglePhotonDetector => match det.spd_model {
            SpdEfficiencyModel::PerPhoton => (1.0 - miss(k1)) * miss(k2) + miss(k1) * (1.0 - miss(k2)),
            SpdEfficiencyModel::ScaledClick => {
                if (k1 > 0) != (k2 > 0) {
                    det.efficiency
                } else {
                    0.0
                }
            }
        },
    }
}

fn source_terms(eta: f64) -> [(usize, Complex64); 2] {
    [
        (0, Complex64::new((1.0 - eta).sqrt(), 0.0)),
        (1, Complex64::new(eta.sqrt(), 0.0)),
    ]
}

/// Builds the joint state, interferes the optical modes and enumerates every
/// detection pattern. One pattern is also sampled with `rng_seed`, including
/// the detector's own efficiency.
pub fn ies_swap_oracle(
    eta_orchestrator: f64,
    eta_client: f64,
    detector: &DetectorModel,
    rng_seed: u64,
) -> Result<HeraldOutcome> {
    check_fraction("eta_orchestrator", eta_orchestrator)?;
    check_fraction("eta_client", eta_client)?;
    check_fraction("detector efficiency", detector.efficiency)?;

    let mut joint: BTreeMap<Occupation, Complex64> = BTreeMap::new();
    for (n_o, a_o) in source_terms(eta_orchestrator) {
        for (n_c, a_c) in source_terms(eta_client) {
            let mut occ = [0; 4];
            occ[MW_ORCH] = n_o;
            occ[OPT_ORCH] = n_o;
            occ[OPT_CLIENT] = n_c;
            occ[MW_CLIENT] = n_c;
            *joint.entry(occ).or_default() += a_o * a_c;
        }
    }

    let mut mixed: BTreeMap<Occupation, Complex64> = BTreeMap::new();
    for (occ, amp) in &joint {
        for ((d1, d2), out) in beam_splitter_terms(occ[OPT_ORCH], occ[OPT_CLIENT], 0.5) {
            let mut next = *occ;
            next[OPT_ORCH] = d1;
            next[OPT_CLIENT] = d2;
            *mixed.entry(next).or_default() += amp * out;
        }
    }

    // Group by detection pattern.
    let mut by_pattern: BTreeMap<(usize, usize), Vec<((usize, usize), Complex64)>> = BTreeMap::new();
    for (occ, amp) in &mixed {
        if amp.norm_sqr() < 1e-30 {
            continue;
        }
        by_pattern
            .entry((occ[OPT_ORCH], occ[OPT_CLIENT]))
            .or_default()
            .push(((occ[MW_ORCH], occ[MW_CLIENT]), *amp));
    }

    let mut branches = Vec::with_capacity(by_pattern.len());
    for (pattern, terms) in by_pattern {
        let probability: f64 = terms.iter().map(|(_, a)| a.norm_sqr()).sum();
        let scale = 1.0 / probability.sqrt();
        let normalized: Vec<_> = terms.iter().map(|&(n, a)| (n, a * scale)).collect();
        let microwave_state = FockTwoMode::from_terms(
            DEFAULT_CUTOFF,
            (ModeLabel::Microwave, ModeLabel::Microwave),
            &normalized,
        )?;
        branches.push(HeraldBranch {
            pattern,
            class: PhotonClass::from_count(pattern.0 + pattern.1),
            probability,
            microwave_state,
            accept_probability: accept_probability(pattern, detector),
        });
    }

    let class_sum = |c: PhotonClass| -> f64 {
        branches.iter().filter(|b| b.class == c).map(|b| b.probability).sum()
    };
    let classes = ClassProbabilities {
        no_photon: class_sum(PhotonClass::NoPhoton),
        single: class_sum(PhotonClass::Single),
        double: class_sum(PhotonClass::Double),
    };
    let accept_probability = branches.iter().map(|b| b.probability * b.accept_probability).sum();
    let genuine_accept_probability = branches
        .iter()
        .filter(|b| b.class == PhotonClass::Single)
        .map(|b| b.probability * b.accept_probability)
        .sum();

    let mut rng = Xoshiro256PlusPlus::seed_from_u64(rng_seed);
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut chosen = branches.len() - 1;
    for (i, b) in branches.iter().enumerate() {
        acc += b.probability;
        if u < acc {
            chosen = i;
            break;
        }
    }
    let accepted = rng.random::<f64>() < branches[chosen].accept_probability;
    let sampled = SampledHerald {
        branch: chosen,
        class: branches[chosen].class,
        accepted,
    };

    Ok(HeraldOutcome {
        branches,
        classes,
        accept_probability,
        genuine_accept_probability,
        sampled,
    })
}
