use std::fmt::Write as _;

use serde::Serialize;

use super::{analytic_attempt, analytic_establish, station_probabilities, LinkOutcome, LinkRun, NetworkConfig};
use crate::strategies::StrategyKind;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `n` at 95% confidence.
pub fn wilson_interval(successes: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct HeraldStats {
    pub counter_clicks: u64,
    pub spd_clicks: u64,
    /// Accepted heralds from a single emitted and arrived photon.
    pub genuine_heralds: u64,
    /// Accepted heralds without shared entanglement.
    pub false_heralds: u64,
}

impl HeraldStats {
    fn add(&mut self, o: &HeraldStats) {
        self.counter_clicks += o.counter_clicks;
        self.spd_clicks += o.spd_clicks;
        self.genuine_heralds += o.genuine_heralds;
        self.false_heralds += o.false_heralds;
    }
}

/// Raw per-link counters.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LinkStats {
    pub first_attempt_successes: u64,
    pub established: u64,
    pub exhausted: u64,
    pub corrupted: u64,
    pub attempts: u64,
    pub herald: HeraldStats,
    // second moments for the attempts-per-EPR ratio estimator
    pub(crate) sum_attempts_sq: f64,
    pub(crate) sum_attempts_established: f64,
}

impl LinkStats {
    pub(super) fn record(&mut self, run: &LinkRun) {
        self.first_attempt_successes += run.first_success as u64;
        self.attempts += run.attempts;
        let a = run.attempts as f64;
        self.sum_attempts_sq += a * a;
        match run.outcome {
            LinkOutcome::Established => {
                self.established += 1;
                self.sum_attempts_established += a;
            }
            LinkOutcome::Failed => self.exhausted += 1,
            LinkOutcome::Corrupted => self.corrupted += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub strategy: StrategyKind,
    pub n_clients: usize,
    pub trials: u64,
    /// Fraction of trials whose first attempt on the link succeeded.
    pub per_link_success_rate: Vec<f64>,
    pub per_link_wilson_95: Vec<(f64, f64)>,
    /// Fraction of trials in which the link ended with an EPR pair (DMD: the
    /// single attempt succeeded).
    pub per_link_establish_rate: Vec<f64>,
    pub state_success_rate: f64,
    pub state_wilson_95: (f64, f64),
    /// Total attempts divided by established pairs, over all links.
    pub mean_attempts_per_epr: Option<f64>,
    pub mean_rounds_per_trial: f64,
    pub herald_stats: HeraldStats,
    pub links: Vec<LinkStats>,
}

impl TrialReport {
    pub(super) fn assemble(
        cfg: &NetworkConfig,
        trials: u64,
        links: Vec<LinkStats>,
        state_successes: u64,
        rounds: u64,
    ) -> Self {
        let n = trials as f64;
        let mut herald_stats = HeraldStats::default();
        for l in &links {
            herald_stats.add(&l.herald);
        }
        let attempts: u64 = links.iter().map(|l| l.attempts).sum();
        let established: u64 = links.iter().map(|l| l.established).sum();
        Self {
            strategy: cfg.strategy,
            n_clients: links.len(),
            trials,
            per_link_success_rate: links.iter().map(|l| l.first_attempt_successes as f64 / n).collect(),
            per_link_wilson_95: links
                .iter()
                .map(|l| wilson_interval(l.first_attempt_successes, trials))
                .collect(),
            per_link_establish_rate: links.iter().map(|l| l.established as f64 / n).collect(),
            state_success_rate: state_successes as f64 / n,
            state_wilson_95: wilson_interval(state_successes, trials),
            mean_attempts_per_epr: (established > 0).then(|| attempts as f64 / established as f64),
            mean_rounds_per_trial: rounds as f64 / n,
            herald_stats,
            links,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub quantity: String,
    pub analytic: f64,
    pub empirical: f64,
    pub abs_diff: f64,
    /// Standard error of the empirical estimate under the analytic value.
    pub sigma: f64,
    /// Deviation beyond three standard errors (or any deviation when the
    /// analytic value is deterministic).
    pub flagged: bool,
}

impl ComparisonRow {
    fn new(quantity: String, analytic: f64, empirical: f64, sigma: f64) -> Self {
        let abs_diff = (empirical - analytic).abs();
        let flagged = if sigma > 0.0 { abs_diff > 3.0 * sigma } else { abs_diff > 1e-12 };
        Self {
            quantity,
            analytic,
            empirical,
            abs_diff,
            sigma,
            flagged,
        }
    }

    fn binomial(quantity: String, analytic: f64, hits: u64, n: u64) -> Self {
        let sigma = (analytic * (1.0 - analytic) / n as f64).sqrt();
        Self::new(quantity, analytic, hits as f64 / n as f64, sigma)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub report: TrialReport,
    pub rows: Vec<ComparisonRow>,
}

impl Comparison {
    pub(super) fn build(cfg: &NetworkConfig, report: &TrialReport) -> Self {
        let trials = report.trials;
        let tmd = cfg.strategy.is_teleported();
        let mut rows = Vec::new();
        let mut state = 1.0;

        for (i, l) in report.links.iter().enumerate() {
            let attempt = analytic_attempt(cfg, i);
            rows.push(ComparisonRow::binomial(
                format!("link {i} success rate"),
                attempt.success,
                l.first_attempt_successes,
                trials,
            ));
            let establish = analytic_establish(cfg, i);
            state *= establish;
            if !tmd {
                continue;
            }
            rows.push(ComparisonRow::binomial(
                format!("link {i} establish rate"),
                establish,
                l.established,
                trials,
            ));
            if attempt.success > 0.0 && l.established > 0 {
                rows.push(attempts_row(i, attempt.success, l, trials));
            }
            if let Some(station) = station_probabilities(cfg, i) {
                rows.push(ComparisonRow::binomial(
                    format!("link {i} counter click rate"),
                    station.counter,
                    l.herald.counter_clicks,
                    l.attempts,
                ));
                rows.push(ComparisonRow::binomial(
                    format!("link {i} spd click rate"),
                    station.spd,
                    l.herald.spd_clicks,
                    l.attempts,
                ));
                let accepted = l.herald.genuine_heralds + l.herald.false_heralds;
                if station.accepted > 0.0 && accepted > 0 {
                    rows.push(ComparisonRow::binomial(
                        format!("link {i} genuine herald fraction"),
                        station.genuine / station.accepted,
                        l.herald.genuine_heralds,
                        accepted,
                    ));
                }
            }
        }
        rows.push(ComparisonRow::binomial(
            "state success rate".into(),
            state,
            (report.state_success_rate * trials as f64).round() as u64,
            trials,
        ));

        Self {
            report: report.clone(),
            rows,
        }
    }

    pub fn any_flagged(&self) -> bool {
        self.rows.iter().any(|r| r.flagged)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("comparison serializes")
    }

    /// Fixed-width human-readable summary.
    pub fn to_text(&self) -> String {
        let r = &self.report;
        let mut out = String::new();
        let _ = writeln!(out, "strategy            {}", r.strategy);
        let _ = writeln!(out, "clients             {}", r.n_clients);
        let _ = writeln!(out, "trials              {}", r.trials);
        let _ = writeln!(
            out,
            "state success rate  {:.6} (95% CI {:.6} .. {:.6})",
            r.state_success_rate, r.state_wilson_95.0, r.state_wilson_95.1
        );
        match r.mean_attempts_per_epr {
            Some(m) => {
                let _ = writeln!(out, "attempts per EPR    {m:.6}");
            }
            None => {
                let _ = writeln!(out, "attempts per EPR    n/a");
            }
        }
        let _ = writeln!(out, "rounds per trial    {:.6}", r.mean_rounds_per_trial);
        let h = &r.herald_stats;
        let _ = writeln!(
            out,
            "heralds             counter {} spd {} genuine {} false {}",
            h.counter_clicks, h.spd_clicks, h.genuine_heralds, h.false_heralds
        );
        for (i, (rate, ci)) in r.per_link_success_rate.iter().zip(&r.per_link_wilson_95).enumerate() {
            let _ = writeln!(out, "link {i:<3}            {rate:.6} (95% CI {:.6} .. {:.6})", ci.0, ci.1);
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<34} {:>14} {:>14} {:>12} {:>12}  flag",
            "quantity", "analytic", "empirical", "|diff|", "sigma"
        );
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{:<34} {:>14.8} {:>14.8} {:>12.3e} {:>12.3e}  {}",
                row.quantity,
                row.analytic,
                row.empirical,
                row.abs_diff,
                row.sigma,
                if row.flagged { "FLAG" } else { "ok" }
            );
        }
        out
    }
}

/// Mean attempts per established pair against `1 / s`, with a delta-method
/// standard error for the ratio estimator.
fn attempts_row(i: usize, success: f64, l: &LinkStats, trials: u64) -> ComparisonRow {
    let n = trials as f64;
    let ratio = l.attempts as f64 / l.established as f64;
    let mean_e = l.established as f64 / n;
    let var = (l.sum_attempts_sq - 2.0 * ratio * l.sum_attempts_established + ratio * ratio * l.established as f64) / n;
    let sigma = (var.max(0.0) / n).sqrt() / mean_e;
    ComparisonRow::new(format!("link {i} attempts per EPR"), 1.0 / success, ratio, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_contains_estimate() {
        for (k, n) in [(0, 10), (10, 10), (3, 7), (500, 1000), (1, 1_000_000)] {
            let (lo, hi) = wilson_interval(k, n);
            let p = k as f64 / n as f64;
            assert!(lo <= p && p <= hi && 0.0 <= lo && hi <= 1.0);
        }
        // textbook value: 50/100 -> (0.4038, 0.5962)
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.403_831_7).abs() < 1e-6 && (hi - 0.596_168_3).abs() < 1e-6);
    }

    #[test]
    fn deterministic_rows_flag_any_difference() {
        assert!(!ComparisonRow::binomial("x".into(), 1.0, 10, 10).flagged);
        assert!(ComparisonRow::binomial("x".into(), 1.0, 9, 10).flagged);
        assert!(!ComparisonRow::binomial("x".into(), 0.5, 520, 1000).flagged);
        assert!(ComparisonRow::binomial("x".into(), 0.5, 600, 1000).flagged);
    }
}
