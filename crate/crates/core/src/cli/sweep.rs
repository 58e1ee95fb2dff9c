//! Closed-form grids written as CSV.

use std::fmt::Write as _;

use crate::channel::{one_way_capacity, two_way_capacity, ErasureChannel, FiberLink};
use crate::error::{Error, Result};
use crate::strategies::{
    ebit_prob, ies_counter_click_prob, ies_herald_fidelity_fraction, ies_spd_click_prob, DetectorKind,
    DetectorModel, LinkConfig, StrategyKind, REALISTIC_SPD_EFFICIENCY,
};
use crate::transducer::{efficiency, ReducedParams, DIRECT_LINK_COOPERATIVITY, EPR_COOPERATIVITY};

/// Cells within this distance of `p = 1/2` are marked as contour cells.
pub const CONTOUR_TOLERANCE: f64 = 1e-3;

/// One grid axis.
#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    Log { min: f64, max: f64, points: usize },
    Linear { min: f64, max: f64, points: usize },
    Fixed(f64),
}

impl Axis {
    pub fn validate(&self, name: &str) -> Result<()> {
        match *self {
            Axis::Log { min, max, points } | Axis::Linear { min, max, points } => {
                if points < 2 {
                    return Err(Error::InvalidConfig(format!("{name}: at least 2 points required")));
                }
                if !(min < max) || !min.is_finite() || !max.is_finite() {
                    return Err(Error::InvalidConfig(format!("{name}: need min < max, got {min} .. {max}")));
                }
                if matches!(self, Axis::Log { .. }) && min <= 0.0 {
                    return Err(Error::InvalidConfig(format!("{name}: log axis needs min > 0")));
                }
                Ok(())
            }
            Axis::Fixed(x) if x.is_finite() => Ok(()),
            Axis::Fixed(x) => Err(Error::InvalidConfig(format!("{name}: invalid value {x}"))),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            Axis::Fixed(x) => vec![x],
            Axis::Linear { min, max, points } => {
                let step = (max - min) / (points - 1) as f64;
                (0..points)
                    .map(|i| if i + 1 == points { max } else { min + step * i as f64 })
                    .collect()
            }
            Axis::Log { min, max, points } => {
                let (a, b) = (min.log10(), max.log10());
                (0..points)
                    .map(|i| {
                        if i == 0 {
                            return min;
                        }
                        if i + 1 == points {
                            return max;
                        }
                        let e = a + (b - a) * i as f64 / (points - 1) as f64;
                        // land decades exactly on powers of ten
                        let e = if (e - e.round()).abs() < 1e-9 { e.round() } else { e };
                        10f64.powf(e)
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub strategies: Vec<StrategyKind>,
    pub cooperativity: Axis,
    pub length_km: Axis,
    pub zeta_o: f64,
    pub zeta_m: f64,
    pub attenuation_length_km: f64,
    pub detector: DetectorModel,
    /// Also evaluate at the two threshold cooperativities when they fall
    /// inside the cooperativity range.
    pub include_thresholds: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            strategies: StrategyKind::ALL.to_vec(),
            cooperativity: Axis::Log {
                min: 1e-5,
                max: 1e1,
                points: 61,
            },
            length_km: Axis::Linear {
                min: 0.0,
                max: 100.0,
                points: 101,
            },
            zeta_o: 1.0,
            zeta_m: 1.0,
            attenuation_length_km: crate::channel::DEFAULT_ATTENUATION_LENGTH_KM,
            detector: DetectorModel::photon_counter(),
            include_thresholds: true,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.strategies.is_empty() {
            return Err(Error::InvalidConfig("no strategy selected".into()));
        }
        self.cooperativity.validate("cooperativity")?;
        self.length_km.validate("length")?;
        ReducedParams::new(1.0, self.zeta_o, self.zeta_m)?;
        FiberLink::new(0.0, self.attenuation_length_km)?;
        Ok(())
    }

    /// Cooperativity values in ascending order, thresholds merged in.
    pub fn cooperativities(&self) -> Vec<f64> {
        let mut cs = self.cooperativity.values();
        if self.include_thresholds {
            let (lo, hi) = (cs[0], cs[cs.len() - 1]);
            for t in [EPR_COOPERATIVITY, DIRECT_LINK_COOPERATIVITY] {
                if lo <= t && t <= hi && !cs.contains(&t) {
                    cs.push(t);
                }
            }
        }
        cs.sort_by(f64::total_cmp);
        cs.dedup();
        cs
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub const SWEEP_HEADER: &str = "strategy,C,l_km,zeta_o,zeta_m,eta,probability,capacity_bound,extra,contour_half";

/// Cartesian product strategy x C x l of the per-link probability and its
/// capacity bound.
pub fn sweep_csv(spec: &SweepSpec) -> Result<String> {
    spec.validate()?;
    let cs = spec.cooperativities();
    let ls = spec.length_km.values();
    let mut out = String::with_capacity(128 * cs.len() * ls.len() * spec.strategies.len());
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for &kind in &spec.strategies {
        for &c in &cs {
            for &l in &ls {
                let link = LinkConfig::symmetric(
                    c,
                    spec.zeta_o,
                    spec.zeta_m,
                    FiberLink::new(l, spec.attenuation_length_km)?,
                )?;
                let eta = efficiency(&link.orchestrator);
                let (p, extra) = match kind {
                    StrategyKind::IesTmd => (ebit_prob(kind, &link) * spec.detector.efficiency, spec.detector.kind.to_string()),
                    _ => (ebit_prob(kind, &link), String::new()),
                };
                let ch = ErasureChannel::new(p.clamp(0.0, 1.0))?;
                let capacity = if kind.is_teleported() {
                    two_way_capacity(&ch)
                } else {
                    one_way_capacity(&ch)
                };
                let contour = (p - 0.5).abs() <= CONTOUR_TOLERANCE;
                let _ = writeln!(
                    out,
                    "{kind},{},{},{},{},{},{},{},{extra},{contour}",
                    num(c),
                    num(l),
                    num(spec.zeta_o),
                    num(spec.zeta_m),
                    num(eta),
                    num(p),
                    num(capacity),
                );
            }
        }
    }
    Ok(out)
}

pub const CLICKS_HEADER: &str = "C,eta,counter,spd_ideal,spd_realistic,det_eff,herald_fraction";

/// Click probabilities at the heralding station versus cooperativity. The
/// realistic column uses `spec.detector`'s efficiency and SPD model.
pub fn clicks_csv(spec: &SweepSpec) -> Result<String> {
    spec.validate()?;
    let ideal = DetectorModel::ideal_spd();
    let realistic = DetectorModel {
        kind: DetectorKind::SinglePhotonDetector,
        ..spec.detector
    };
    let mut out = String::new();
    out.push_str(CLICKS_HEADER);
    out.push('\n');
    for c in spec.cooperativities() {
        let eta = efficiency(&ReducedParams::new(c, spec.zeta_o, spec.zeta_m)?);
        let fraction = ies_herald_fidelity_fraction(eta).map(num).unwrap_or_else(|_| "nan".into());
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{fraction}",
            num(c),
            num(eta),
            num(ies_counter_click_prob(eta)),
            num(ies_spd_click_prob(eta, &ideal)),
            num(ies_spd_click_prob(eta, &realistic)),
            num(realistic.efficiency),
        );
    }
    Ok(out)
}

/// Default detector of the click table.
pub fn realistic_spd() -> DetectorModel {
    DetectorModel {
        kind: DetectorKind::SinglePhotonDetector,
        efficiency: REALISTIC_SPD_EFFICIENCY,
        spd_model: Default::default(),
    }
}
