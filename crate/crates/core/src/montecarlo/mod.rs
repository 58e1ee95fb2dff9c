//! Trial-level simulation of entanglement distribution on a star network.
//!
//! A trial distributes one ebit (DMD) or one EPR pair (TMD variants) to every
//! client. Each `(trial, link)` pair draws from its own random substream,
//! derived from the seed, so results do not depend on evaluation order.

mod config;
mod report;

pub use config::{parse_config, write_config};
pub use report::{wilson_interval, Comparison, ComparisonRow, HeraldStats, LinkStats, TrialReport};

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantumsim::{ies_swap_oracle, make_ghz, teleport, EprResource, PureState};
use crate::strategies::{
    ebit_prob, ie_orchestrator_efficiency, DetectorKind, DetectorModel, LinkConfig,
    SpdEfficiencyModel, StrategyKind,
};
use crate::transducer::{efficiency, entropy_bits};

pub const DEFAULT_MAX_ATTEMPTS: u64 = 100_000;

/// Fewest trials for which the 3-sigma comparison is meaningful.
pub const MIN_COMPARISON_TRIALS: u64 = 10_000;

/// How attempts on different links are laid out in time. Only affects the
/// reported number of rounds, never the outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Schedule {
    #[default]
    #[serde(rename = "parallel")]
    Parallel,
    #[serde(rename = "sequential")]
    Sequential,
}

/// Where fiber loss acts in the heralded scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum IesLossModel {
    /// The emission pattern reaches the mid-point as a whole with probability
    /// `exp(-l / 2L_o)`.
    #[default]
    #[serde(rename = "formula")]
    Formula,
    /// Each emitted optical photon survives its half of the link
    /// independently. A pair that loses one photon then looks like a single.
    #[serde(rename = "photon")]
    PhotonLevel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    pub strategy: StrategyKind,
    pub links: Vec<LinkConfig>,
    pub detector: DetectorModel,
    pub max_attempts_per_epr: u64,
    pub rng_seed: u64,
    pub schedule: Schedule,
    pub ies_loss: IesLossModel,
}

impl NetworkConfig {
    /// `n` identical links with default settings.
    pub fn homogeneous(strategy: StrategyKind, link: LinkConfig, n_clients: usize, rng_seed: u64) -> Self {
        Self {
            strategy,
            links: vec![link; n_clients],
            detector: DetectorModel::default(),
            max_attempts_per_epr: DEFAULT_MAX_ATTEMPTS,
            rng_seed,
            schedule: Schedule::default(),
            ies_loss: IesLossModel::default(),
        }
    }

    pub fn n_clients(&self) -> usize {
        self.links.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.links.is_empty() {
            return Err(Error::InvalidConfig("at least one client link is required".into()));
        }
        if self.max_attempts_per_epr == 0 {
            return Err(Error::InvalidConfig("max_attempts must be >= 1".into()));
        }
        crate::error::check_fraction("detector efficiency", self.detector.efficiency)?;
        Ok(())
    }
}

/// Per-attempt outcome probabilities of one link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AttemptProbabilities {
    /// An EPR pair (or ebit) is established.
    pub success: f64,
    /// A herald is accepted although no entanglement was shared.
    pub false_herald: f64,
}

/// Per-attempt statistics of the heralding station.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationProbabilities {
    pub counter: f64,
    pub spd: f64,
    /// Accepted heralds (by the configured detector) carrying one photon.
    pub genuine: f64,
    pub accepted: f64,
}

/// Closed-form station statistics of an IES link; `None` for other strategies.
pub fn station_probabilities(cfg: &NetworkConfig, link: usize) -> Option<StationProbabilities> {
    if cfg.strategy != StrategyKind::IesTmd {
        return None;
    }
    let l = &cfg.links[link];
    let (eta_o, eta_c) = (efficiency(&l.orchestrator), efficiency(&l.client));
    let s = l.link.half_transmittance();
    let det = &cfg.detector;
    let single = eta_o * (1.0 - eta_c) + (1.0 - eta_o) * eta_c;
    let double = eta_o * eta_c;
    let q = 1.0 - det.efficiency;
    let counter = |k: i32| k as f64 * det.efficiency * q.powi(k - 1);
    let spd = |k: i32| match det.spd_model {
        SpdEfficiencyModel::PerPhoton => 1.0 - q.powi(k),
        SpdEfficiencyModel::ScaledClick => det.efficiency,
    };
    // probability that `f` accepts whatever reaches the station
    let rate = |f: &dyn Fn(i32) -> f64| -> (f64, f64) {
        let genuine = single * s * f(1);
        let pairs = match cfg.ies_loss {
            IesLossModel::Formula => double * s * f(2),
            IesLossModel::PhotonLevel => double * (2.0 * s * (1.0 - s) * f(1) + s * s * f(2)),
        };
        (genuine, genuine + pairs)
    };
    let (counter_genuine, counter_all) = rate(&counter);
    let (spd_genuine, spd_all) = rate(&spd);
    let (genuine, accepted) = match det.kind {
        DetectorKind::PhotonCounter => (counter_genuine, counter_all),
        DetectorKind::SinglePhotonDetector => (spd_genuine, spd_all),
    };
    Some(StationProbabilities {
        counter: counter_all,
        spd: spd_all,
        genuine,
        accepted,
    })
}

/// Closed-form per-attempt probabilities under the simulator's own model,
/// including detector efficiency and asymmetric heralding sources. With ideal
/// detectors and identical transducers the success probability equals
/// [`ebit_prob`].
pub fn analytic_attempt(cfg: &NetworkConfig, link: usize) -> AttemptProbabilities {
    match station_probabilities(cfg, link) {
        Some(st) => AttemptProbabilities {
            success: entropy_bits(efficiency(&cfg.links[link].orchestrator)) * st.genuine,
            false_herald: st.accepted - st.genuine,
        },
        None => AttemptProbabilities {
            success: ebit_prob(cfg.strategy, &cfg.links[link]),
            false_herald: 0.0,
        },
    }
}

/// Probability that a link ends a trial with an established pair, given the
/// retry budget.
pub fn analytic_establish(cfg: &NetworkConfig, link: usize) -> f64 {
    let a = analytic_attempt(cfg, link);
    if !cfg.strategy.is_teleported() {
        return a.success;
    }
    let stop = a.success + a.false_herald;
    if stop <= 0.0 {
        return 0.0;
    }
    let m = cfg.max_attempts_per_epr.min(i32::MAX as u64) as i32;
    a.success / stop * (1.0 - (1.0 - stop).powi(m))
}

/// Sampling model of one link, precomputed from its configuration.
#[derive(Debug, Clone)]
enum LinkModel {
    /// Up-conversion, fiber, down-conversion in sequence.
    Converted { up: f64, fiber: f64, down: f64 },
    /// Intrinsic pair at the orchestrator, fiber, down-conversion.
    Intrinsic { yield_: f64, fiber: f64, down: f64 },
    Heralded(HeraldedLink),
}

#[derive(Debug, Clone)]
struct HeraldedLink {
    eta_o: f64,
    eta_c: f64,
    // exact class probabilities (none, single) from the four-mode oracle
    p_none: f64,
    p_single: f64,
    half_fiber: f64,
    yield_: f64,
    detector: DetectorModel,
    loss: IesLossModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Attempt {
    Success,
    Failure,
    FalseHerald,
}

#[derive(Debug, Clone, Copy, Default)]
struct Clicks {
    counter: bool,
    spd: bool,
    genuine: bool,
}

fn bernoulli<R: Rng>(rng: &mut R, p: f64) -> bool {
    rng.random::<f64>() < p
}

impl LinkModel {
    fn build(strategy: StrategyKind, link: &LinkConfig, cfg: &NetworkConfig) -> Result<Self> {
        Ok(match strategy {
            StrategyKind::Dmd | StrategyKind::VanillaTmd => LinkModel::Converted {
                up: efficiency(&link.orchestrator),
                fiber: link.link.transmittance(),
                down: efficiency(&link.client),
            },
            StrategyKind::IeTmd => LinkModel::Intrinsic {
                yield_: entropy_bits(ie_orchestrator_efficiency(link)),
                fiber: link.link.transmittance(),
                down: efficiency(&link.client),
            },
            StrategyKind::IesTmd => {
                let (eta_o, eta_c) = (efficiency(&link.orchestrator), efficiency(&link.client));
                let oracle = ies_swap_oracle(eta_o, eta_c, &cfg.detector, 0)?;
                LinkModel::Heralded(HeraldedLink {
                    eta_o,
                    eta_c,
                    p_none: oracle.classes.no_photon,
                    p_single: oracle.classes.single,
                    half_fiber: link.link.half_transmittance(),
                    yield_: entropy_bits(eta_o),
                    detector: cfg.detector,
                    loss: cfg.ies_loss,
                })
            }
        })
    }

    fn attempt<R: Rng>(&self, rng: &mut R, clicks: &mut Clicks) -> Attempt {
        match self {
            LinkModel::Converted { up, fiber, down } => {
                if bernoulli(rng, *up) && bernoulli(rng, *fiber) && bernoulli(rng, *down) {
                    Attempt::Success
                } else {
                    Attempt::Failure
                }
            }
            LinkModel::Intrinsic { yield_, fiber, down } => {
                if bernoulli(rng, *yield_) && bernoulli(rng, *fiber) && bernoulli(rng, *down) {
                    Attempt::Success
                } else {
                    Attempt::Failure
                }
            }
            LinkModel::Heralded(h) => h.attempt(rng, clicks),
        }
    }
}

impl HeraldedLink {
    fn attempt<R: Rng>(&self, rng: &mut R, clicks: &mut Clicks) -> Attempt {
        // (photons emitted, photons reaching the station)
        let (emitted, arrived) = match self.loss {
            IesLossModel::Formula => {
                let u: f64 = rng.random();
                let emitted = if u < self.p_none {
                    0
                } else if u < self.p_none + self.p_single {
                    1
                } else {
                    2
                };
                let arrived = if emitted > 0 && bernoulli(rng, self.half_fiber) { emitted } else { 0 };
                (emitted, arrived)
            }
            IesLossModel::PhotonLevel => {
                let mut emitted = 0;
                let mut arrived = 0;
                for eta in [self.eta_o, self.eta_c] {
                    if bernoulli(rng, eta) {
                        emitted += 1;
                        if bernoulli(rng, self.half_fiber) {
                            arrived += 1;
                        }
                    }
                }
                (emitted, arrived)
            }
        };

        // Photons leave the balanced splitter through one port (a lone photon
        // or a bunched pair), so at most one detector is lit.
        let det = &self.detector;
        let registered = (0..arrived).filter(|_| bernoulli(rng, det.efficiency)).count();
        let counter = registered == 1;
        let spd = match det.spd_model {
            SpdEfficiencyModel::PerPhoton => registered >= 1,
            SpdEfficiencyModel::ScaledClick => arrived >= 1 && bernoulli(rng, det.efficiency),
        };
        let accepted = match det.kind {
            DetectorKind::PhotonCounter => counter,
            DetectorKind::SinglePhotonDetector => spd,
        };
        let genuine = accepted && emitted == 1 && arrived == 1;
        *clicks = Clicks { counter, spd, genuine };

        if !accepted {
            Attempt::Failure
        } else if !genuine {
            Attempt::FalseHerald
        } else if bernoulli(rng, self.yield_) {
            Attempt::Success
        } else {
            Attempt::Failure
        }
    }
}

/// 64-bit finalizer used to derive substream seeds.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent generator for one `(link, trial)` pair.
pub fn substream(seed: u64, link: usize, trial: u64) -> Xoshiro256PlusPlus {
    let h = mix64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let h = mix64(h ^ (link as u64).wrapping_mul(0xd1b5_4a32_d192_ed03));
    let h = mix64(h ^ trial.wrapping_mul(0xa24b_aed4_963e_e407));
    Xoshiro256PlusPlus::seed_from_u64(h)
}

/// How one link ended in one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LinkOutcome {
    Established,
    /// No success (DMD: the single attempt failed; TMD: budget exhausted).
    Failed,
    /// Stopped on a herald that carried no entanglement.
    Corrupted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct LinkRun {
    outcome: LinkOutcome,
    attempts: u64,
    first_success: bool,
}

fn run_link<R: Rng>(
    model: &LinkModel,
    retries: bool,
    max_attempts: u64,
    rng: &mut R,
    acc: &mut LinkStats,
) -> LinkRun {
    let budget = if retries { max_attempts } else { 1 };
    let mut first_success = false;
    let mut attempts = 0;
    let mut outcome = LinkOutcome::Failed;
    while attempts < budget {
        let mut clicks = Clicks::default();
        let result = model.attempt(rng, &mut clicks);
        attempts += 1;
        acc.herald.counter_clicks += clicks.counter as u64;
        acc.herald.spd_clicks += clicks.spd as u64;
        acc.herald.genuine_heralds += clicks.genuine as u64;
        if attempts == 1 {
            first_success = result == Attempt::Success;
        }
        match result {
            Attempt::Success => {
                outcome = LinkOutcome::Established;
                break;
            }
            Attempt::FalseHerald => {
                acc.herald.false_heralds += 1;
                outcome = LinkOutcome::Corrupted;
                break;
            }
            Attempt::Failure => {}
        }
    }
    LinkRun {
        outcome,
        attempts,
        first_success,
    }
}

fn link_models(cfg: &NetworkConfig) -> Result<Vec<LinkModel>> {
    cfg.links
        .iter()
        .map(|l| LinkModel::build(cfg.strategy, l, cfg))
        .collect()
}

/// One distribution round of every link, using trial index `trial`.
pub fn distribute_once(cfg: &NetworkConfig, trial: u64) -> Result<Vec<LinkOutcome>> {
    cfg.validate()?;
    let models = link_models(cfg)?;
    let mut scratch = LinkStats::default();
    Ok(models
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let mut rng = substream(cfg.rng_seed, i, trial);
            run_link(m, cfg.strategy.is_teleported(), cfg.max_attempts_per_epr, &mut rng, &mut scratch).outcome
        })
        .collect())
}

/// Runs `trials` independent distributions of the whole network.
pub fn run_trials(cfg: &NetworkConfig, trials: u64) -> Result<TrialReport> {
    cfg.validate()?;
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be >= 1".into()));
    }
    let models = link_models(cfg)?;
    let n = models.len();
    let retries = cfg.strategy.is_teleported();
    let mut stats = vec![LinkStats::default(); n];
    let mut state_successes = 0u64;
    let mut rounds = 0u64;

    for trial in 0..trials {
        let mut all = true;
        let mut trial_rounds = 0u64;
        for (i, model) in models.iter().enumerate() {
            let mut rng = substream(cfg.rng_seed, i, trial);
            let run = run_link(model, retries, cfg.max_attempts_per_epr, &mut rng, &mut stats[i]);
            stats[i].record(&run);
            all &= run.outcome == LinkOutcome::Established;
            trial_rounds = match cfg.schedule {
                Schedule::Parallel => trial_rounds.max(run.attempts),
                Schedule::Sequential => trial_rounds + run.attempts,
            };
        }
        state_successes += all as u64;
        rounds += trial_rounds;
    }

    Ok(TrialReport::assemble(cfg, trials, stats, state_successes, rounds))
}

/// Runs the simulation and compares every rate with its closed form.
pub fn empirical_vs_analytic(cfg: &NetworkConfig, trials: u64) -> Result<Comparison> {
    if trials < MIN_COMPARISON_TRIALS {
        return Err(Error::InvalidConfig(format!(
            "comparison needs at least {MIN_COMPARISON_TRIALS} trials, got {trials}"
        )));
    }
    let report = run_trials(cfg, trials)?;
    Ok(Comparison::build(cfg, &report))
}

/// Distributes one EPR pair per client, then teleports `multipartite` over
/// them. Returns the fidelity of the clients' joint state with the input.
pub fn teleport_after_distribution(cfg: &NetworkConfig, multipartite: &PureState, seed: u64) -> Result<f64> {
    if multipartite.num_qubits() != cfg.n_clients() {
        return Err(Error::ResourceMismatch {
            expected: multipartite.num_qubits(),
            got: cfg.n_clients(),
        });
    }
    let mut run_cfg = cfg.clone();
    run_cfg.rng_seed = seed;
    let outcomes = distribute_once(&run_cfg, 0)?;
    let missing: Vec<usize> = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| **o != LinkOutcome::Established)
        .map(|(i, _)| i)
        .collect();
    if !missing.is_empty() {
        return Err(Error::DistributionIncomplete(missing));
    }
    let resources = vec![EprResource::Ideal; outcomes.len()];
    let delivered = teleport(multipartite, &resources, seed)?;
    delivered.fidelity(multipartite)
}

/// GHZ state over all clients of `cfg`, teleported after distribution.
pub fn distribute_ghz(cfg: &NetworkConfig, seed: u64) -> Result<f64> {
    teleport_after_distribution(cfg, &make_ghz(cfg.n_clients())?, seed)
}
