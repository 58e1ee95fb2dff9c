//! Flat `key = value` network description.
//!
//! ```text
//! file     := line*
//! line     := blank | comment | section | entry
//! comment  := '#' text                       (also allowed after a value)
//! section  := '[default]' | '[link ' INDEX ']'
//! entry    := KEY '=' VALUE
//! ```
//!
//! Entries before the first section configure the network:
//! `strategy`, `n_clients`, `seed`, `max_attempts`, `detector`, `det_eff`,
//! `spd_model` (`per-photon` | `scaled`), `schedule` (`parallel` |
//! `sequential`), `ies_loss` (`formula` | `photon`).
//!
//! Entries inside `[default]` and `[link N]` describe links: `length_km`,
//! `att_length_km`, `orchestrator.cooperativity`, `orchestrator.zeta_o`,
//! `orchestrator.zeta_m`, the same three under `client.`, and the shorthands
//! `cooperativity`, `zeta_o`, `zeta_m` which set both ends. A link starts from
//! `C = 1`, `zeta = 1`, `l = 0`, `L_o = 22`, then takes `[default]`, then its
//! own section, each applied in file order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use super::{IesLossModel, NetworkConfig, Schedule, DEFAULT_MAX_ATTEMPTS};
use crate::channel::{FiberLink, DEFAULT_ATTENUATION_LENGTH_KM};
use crate::error::{Error, Result};
use crate::strategies::{DetectorKind, DetectorModel, LinkConfig, SpdEfficiencyModel, StrategyKind};
use crate::transducer::ReducedParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Top,
    Default,
    Link(usize),
}

struct Entry {
    line: usize,
    key: String,
    value: String,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::ConfigParse {
        line,
        message: message.into(),
    }
}

fn parse_value<T: FromStr>(e: &Entry) -> Result<T> {
    e.value
        .parse()
        .map_err(|_| parse_err(e.line, format!("invalid value '{}' for '{}'", e.value, e.key)))
}

fn parse_fraction(e: &Entry) -> Result<f64> {
    let x: f64 = parse_value(e)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(parse_err(e.line, format!("'{}' must lie in [0, 1], got {x}", e.key)));
    }
    Ok(x)
}

fn parse_nonneg(e: &Entry) -> Result<f64> {
    let x: f64 = parse_value(e)?;
    if !x.is_finite() || x < 0.0 {
        return Err(parse_err(e.line, format!("'{}' must be >= 0, got {x}", e.key)));
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy)]
struct LinkDraft {
    orchestrator: [f64; 3],
    client: [f64; 3],
    length_km: f64,
    att_length_km: f64,
}

impl Default for LinkDraft {
    fn default() -> Self {
        Self {
            orchestrator: [1.0, 1.0, 1.0],
            client: [1.0, 1.0, 1.0],
            length_km: 0.0,
            att_length_km: DEFAULT_ATTENUATION_LENGTH_KM,
        }
    }
}

impl LinkDraft {
    fn apply(&mut self, e: &Entry) -> Result<()> {
        let (target, field) = match e.key.split_once('.') {
            Some((end, field)) => (Some(end), field),
            None => (None, e.key.as_str()),
        };
        let slot = match field {
            "cooperativity" => 0,
            "zeta_o" => 1,
            "zeta_m" => 2,
            "length_km" if target.is_none() => {
                self.length_km = parse_nonneg(e)?;
                return Ok(());
            }
            "att_length_km" if target.is_none() => {
                let x = parse_nonneg(e)?;
                if x == 0.0 {
                    return Err(parse_err(e.line, "'att_length_km' must be > 0"));
                }
                self.att_length_km = x;
                return Ok(());
            }
            _ => return Err(parse_err(e.line, format!("unknown link key '{}'", e.key))),
        };
        let x = if slot == 0 { parse_nonneg(e)? } else { parse_fraction(e)? };
        match target {
            None => {
                self.orchestrator[slot] = x;
                self.client[slot] = x;
            }
            Some("orchestrator") => self.orchestrator[slot] = x,
            Some("client") => self.client[slot] = x,
            Some(other) => return Err(parse_err(e.line, format!("unknown link end '{other}'"))),
        }
        Ok(())
    }

    fn build(&self) -> Result<LinkConfig> {
        let hw = |p: [f64; 3]| ReducedParams::new(p[0], p[1], p[2]);
        Ok(LinkConfig::new(
            hw(self.orchestrator)?,
            hw(self.client)?,
            FiberLink::new(self.length_km, self.att_length_km)?,
        ))
    }
}

fn parse_section(header: &str, line: usize) -> Result<Section> {
    let inner = header
        .strip_prefix('[')
        .and_then(|h| h.strip_suffix(']'))
        .ok_or_else(|| parse_err(line, format!("malformed section header '{header}'")))?
        .trim();
    if inner == "default" {
        return Ok(Section::Default);
    }
    let index = inner
        .strip_prefix("link")
        .map(str::trim)
        .ok_or_else(|| parse_err(line, format!("unknown section '{inner}'")))?;
    index
        .parse()
        .map(Section::Link)
        .map_err(|_| parse_err(line, format!("invalid link index '{index}'")))
}

/// Parses a network description. Errors carry 1-based line numbers.
pub fn parse_config(text: &str) -> Result<NetworkConfig> {
    let mut sections: BTreeMap<Section, Vec<Entry>> = BTreeMap::new();
    let mut section_lines: BTreeMap<Section, usize> = BTreeMap::new();
    let mut current = Section::Top;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content.starts_with('[') {
            current = parse_section(content, line)?;
            if section_lines.insert(current, line).is_some() {
                return Err(parse_err(line, format!("duplicate section '{content}'")));
            }
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("expected 'key = value', got '{content}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(parse_err(line, "empty key or value"));
        }
        let entries = sections.entry(current).or_default();
        if entries.iter().any(|e| e.key == key) {
            return Err(parse_err(line, format!("duplicate key '{key}'")));
        }
        entries.push(Entry {
            line,
            key: key.to_string(),
            value: value.to_string(),
        });
    }

    let mut strategy = None;
    let mut n_clients: Option<(usize, usize)> = None;
    let mut rng_seed = 0u64;
    let mut max_attempts = DEFAULT_MAX_ATTEMPTS;
    let mut detector_kind = DetectorKind::PhotonCounter;
    let mut det_eff = 1.0;
    let mut spd_model = SpdEfficiencyModel::default();
    let mut schedule = Schedule::default();
    let mut ies_loss = IesLossModel::default();

    for e in sections.get(&Section::Top).into_iter().flatten() {
        let bad = |what: &str| parse_err(e.line, format!("unknown {what} '{}'", e.value));
        match e.key.as_str() {
            "strategy" => strategy = Some(StrategyKind::from_str(&e.value).map_err(|_| bad("strategy"))?),
            "n_clients" => {
                let n: usize = parse_value(e)?;
                if n == 0 {
                    return Err(parse_err(e.line, "n_clients must be >= 1"));
                }
                n_clients = Some((n, e.line));
            }
            "seed" => rng_seed = parse_value(e)?,
            "max_attempts" => {
                max_attempts = parse_value(e)?;
                if max_attempts == 0 {
                    return Err(parse_err(e.line, "max_attempts must be >= 1"));
                }
            }
            "detector" => detector_kind = DetectorKind::from_str(&e.value).map_err(|_| bad("detector"))?,
            "det_eff" => det_eff = parse_fraction(e)?,
            "spd_model" => {
                spd_model = match e.value.as_str() {
                    "per-photon" => SpdEfficiencyModel::PerPhoton,
                    "scaled" => SpdEfficiencyModel::ScaledClick,
                    _ => return Err(bad("spd_model")),
                }
            }
            "schedule" => {
                schedule = match e.value.as_str() {
                    "parallel" => Schedule::Parallel,
                    "sequential" => Schedule::Sequential,
                    _ => return Err(bad("schedule")),
                }
            }
            "ies_loss" => {
                ies_loss = match e.value.as_str() {
                    "formula" => IesLossModel::Formula,
                    "photon" => IesLossModel::PhotonLevel,
                    _ => return Err(bad("ies_loss")),
                }
            }
            other => return Err(parse_err(e.line, format!("unknown key '{other}'"))),
        }
    }

    let strategy = strategy.ok_or_else(|| parse_err(text.lines().count().max(1), "missing 'strategy'"))?;
    let max_link = section_lines
        .keys()
        .filter_map(|s| match s {
            Section::Link(i) => Some(*i),
            _ => None,
        })
        .max();
    let n = match (n_clients, max_link) {
        (Some((n, _)), Some(i)) if i >= n => {
            return Err(parse_err(
                section_lines[&Section::Link(i)],
                format!("link {i} out of range for n_clients = {n}"),
            ))
        }
        (Some((n, _)), _) => n,
        (None, Some(i)) => {
            for k in 0..=i {
                if !section_lines.contains_key(&Section::Link(k)) {
                    return Err(parse_err(
                        section_lines[&Section::Link(i)],
                        format!("link {k} is missing; set n_clients or list every link"),
                    ));
                }
            }
            i + 1
        }
        (None, None) => return Err(parse_err(1, "missing 'n_clients' and no [link N] sections")),
    };

    let mut base = LinkDraft::default();
    for e in sections.get(&Section::Default).into_iter().flatten() {
        base.apply(e)?;
    }
    let mut links = Vec::with_capacity(n);
    for i in 0..n {
        let mut draft = base;
        for e in sections.get(&Section::Link(i)).into_iter().flatten() {
            draft.apply(e)?;
        }
        links.push(draft.build()?);
    }

    let detector = DetectorModel::new(detector_kind, det_eff)?.with_spd_model(spd_model);
    let cfg = NetworkConfig {
        strategy,
        links,
        detector,
        max_attempts_per_epr: max_attempts,
        rng_seed,
        schedule,
        ies_loss,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Writes `cfg` with every link spelled out. Floats use the shortest
/// representation that parses back to the same value.
pub fn write_config(cfg: &NetworkConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "strategy = {}", cfg.strategy);
    let _ = writeln!(out, "n_clients = {}", cfg.n_clients());
    let _ = writeln!(out, "seed = {}", cfg.rng_seed);
    let _ = writeln!(out, "max_attempts = {}", cfg.max_attempts_per_epr);
    let _ = writeln!(out, "detector = {}", cfg.detector.kind);
    let _ = writeln!(out, "det_eff = {:?}", cfg.detector.efficiency);
    let _ = writeln!(
        out,
        "spd_model = {}",
        match cfg.detector.spd_model {
            SpdEfficiencyModel::PerPhoton => "per-photon",
            SpdEfficiencyModel::ScaledClick => "scaled",
        }
    );
    let _ = writeln!(
        out,
        "schedule = {}",
        match cfg.schedule {
            Schedule::Parallel => "parallel",
            Schedule::Sequential => "sequential",
        }
    );
    let _ = writeln!(
        out,
        "ies_loss = {}",
        match cfg.ies_loss {
            IesLossModel::Formula => "formula",
            IesLossModel::PhotonLevel => "photon",
        }
    );
    for (i, l) in cfg.links.iter().enumerate() {
        let _ = writeln!(out, "\n[link {i}]");
        let _ = writeln!(out, "length_km = {:?}", l.link.length_km);
        let _ = writeln!(out, "att_length_km = {:?}", l.link.attenuation_length_km);
        for (end, p) in [("orchestrator", &l.orchestrator), ("client", &l.client)] {
            let _ = writeln!(out, "{end}.cooperativity = {:?}", p.cooperativity);
            let _ = writeln!(out, "{end}.zeta_o = {:?}", p.extraction_optical);
            let _ = writeln!(out, "{end}.zeta_m = {:?}", p.extraction_microwave);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# three clients, one of them far away
strategy = ies-tmd
n_clients = 3
seed = 42
detector = spd
det_eff = 0.25   # gated detector

[default]
cooperativity = 0.171572875253809
length_km = 10

[link 2]
length_km = 50
client.zeta_o = 0.9
";

    #[test]
    fn sample_parses_with_layering() {
        let cfg = parse_config(SAMPLE).unwrap();
        assert_eq!(cfg.strategy, StrategyKind::IesTmd);
        assert_eq!(cfg.n_clients(), 3);
        assert_eq!(cfg.rng_seed, 42);
        assert_eq!(cfg.detector.kind, DetectorKind::SinglePhotonDetector);
        assert_eq!(cfg.detector.efficiency, 0.25);
        assert_eq!(cfg.max_attempts_per_epr, DEFAULT_MAX_ATTEMPTS);
        assert_eq!(cfg.links[0].link.length_km, 10.0);
        assert_eq!(cfg.links[2].link.length_km, 50.0);
        assert_eq!(cfg.links[2].client.extraction_optical, 0.9);
        assert_eq!(cfg.links[2].orchestrator.extraction_optical, 1.0);
        assert_eq!(cfg.links[1].client.cooperativity, 0.171572875253809);
    }

    #[test]
    fn round_trip_is_exact() {
        let cfg = parse_config(SAMPLE).unwrap();
        let text = write_config(&cfg);
        assert_eq!(parse_config(&text).unwrap(), cfg);
        assert_eq!(write_config(&parse_config(&text).unwrap()), text);
    }

    #[test]
    fn links_alone_define_the_network() {
        let cfg = parse_config("strategy = dmd\n[link 0]\n[link 1]\nlength_km = 3\n").unwrap();
        assert_eq!(cfg.n_clients(), 2);
        assert!(parse_config("strategy = dmd\n[link 1]\n").is_err());
    }

    fn line_of(text: &str) -> usize {
        match parse_config(text) {
            Err(Error::ConfigParse { line, .. }) => line,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_point_at_the_line() {
        assert_eq!(line_of("strategy = dmd\nn_clients = 2\nbogus = 1\n"), 3);
        assert_eq!(line_of("strategy = warp\n"), 1);
        assert_eq!(line_of("strategy = dmd\nn_clients = 1\n\n[link 0]\nzeta_o = 1.5\n"), 5);
        assert_eq!(line_of("strategy = dmd\nn_clients = 1\n[link 0]\nlength_km\n"), 4);
        assert_eq!(line_of("strategy = dmd\nn_clients = 1\n[link 3]\n"), 3);
        assert_eq!(line_of("strategy = dmd\nn_clients = 1\n[lnk 0]\n"), 3);
        assert_eq!(line_of("strategy = dmd\nstrategy = dmd\nn_clients = 1\n"), 2);
        assert_eq!(line_of("strategy = dmd\nn_clients = 0\n"), 2);
        assert_eq!(line_of("strategy = dmd\nn_clients = 1\n[default]\nclient.length_km = 1\n"), 4);
        assert_eq!(line_of("strategy = dmd\nn_clients = 1\n[default]\natt_length_km = 0\n"), 4);
        assert!(matches!(parse_config("n_clients = 1\n"), Err(Error::ConfigParse { .. })));
    }
}
