//! Line-oriented `key=value` experiment files.

use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use relaysel::markov::{Construction, STATE_CAP};
use relaysel::{Capacity, Policy};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Analytic,
    MonteCarlo,
    Both,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Analytic => "analytic",
            Mode::MonteCarlo => "montecarlo",
            Mode::Both => "both",
        }
    }

    pub fn analytic(self) -> bool {
        matches!(self, Mode::Analytic | Mode::Both)
    }

    pub fn montecarlo(self) -> bool {
        matches!(self, Mode::MonteCarlo | Mode::Both)
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [Mode::Analytic, Mode::MonteCarlo, Mode::Both]
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| "expected analytic, montecarlo or both".into())
    }
}

/// SNR sweep `start:step:stop` in dB, both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrGrid {
    pub start: f64,
    pub step: f64,
    pub stop: f64,
}

impl SnrGrid {
    pub fn values(&self) -> Vec<f64> {
        if self.step == 0.0 {
            return vec![self.start];
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| round9(self.start + i as f64 * self.step)).collect()
    }
}

fn round9(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

impl fmt::Display for SnrGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.step, self.stop)
    }
}

impl FromStr for SnrGrid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| format!("`{p}` is not a number")))
            .collect::<std::result::Result<_, _>>()?;
        let grid = match parts[..] {
            [x] => SnrGrid { start: x, step: 0.0, stop: x },
            [start, step, stop] => SnrGrid { start, step, stop },
            _ => return Err("expected `start:step:stop` or a single value".into()),
        };
        if !grid.start.is_finite() || !grid.stop.is_finite() || !grid.step.is_finite() {
            return Err("grid values must be finite".into());
        }
        if grid.step < 0.0 || grid.stop < grid.start || (grid.step == 0.0 && grid.stop != grid.start) {
            return Err("need step > 0 and stop >= start".into());
        }
        Ok(grid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warmup {
    /// 10% of the slots, at least 1000 and at most half.
    Auto,
    Percent(f64),
    Slots(u64),
}

impl Warmup {
    pub fn slots(self, total: u64) -> u64 {
        match self {
            Warmup::Auto => relaysel::sim::default_warmup(total),
            Warmup::Percent(p) => (total as f64 * p / 100.0).floor() as u64,
            Warmup::Slots(n) => n,
        }
    }
}

impl fmt::Display for Warmup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warmup::Auto => f.write_str("auto"),
            Warmup::Percent(p) => write!(f, "{p}%"),
            Warmup::Slots(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for Warmup {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(Warmup::Auto);
        }
        if let Some(p) = s.strip_suffix('%') {
            let p: f64 = p.trim().parse().map_err(|_| format!("`{s}` is not a percentage"))?;
            return if (0.0..100.0).contains(&p) { Ok(Warmup::Percent(p)) } else { Err("percentage must be in [0, 100)".into()) };
        }
        s.parse().map(Warmup::Slots).map_err(|_| "expected `auto`, a percentage or a slot count".into())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub name: String,
    pub mode: Mode,
    pub policies: Vec<Policy>,
    pub snr: SnrGrid,
    pub relays: Vec<usize>,
    pub capacities: Vec<Capacity>,
    /// Target rate `r0` in bits per channel use.
    pub rate: f64,
    pub slots: u64,
    pub warmup: Warmup,
    pub seed: u64,
    pub chain: Construction,
    pub output: Option<PathBuf>,
}

impl Default for Experiment {
    fn default() -> Self {
        Self {
            name: "experiment".into(),
            mode: Mode::MonteCarlo,
            policies: vec![Policy::MinPower],
            snr: SnrGrid { start: 0.0, step: 5.0, stop: 30.0 },
            relays: vec![2],
            capacities: vec![Capacity::Finite(2)],
            rate: 1.0,
            slots: 1_000_000,
            warmup: Warmup::Auto,
            seed: 42,
            chain: Construction::Protocol,
            output: None,
        }
    }
}

fn list<T>(value: &str, item: impl Fn(&str) -> std::result::Result<T, String>) -> std::result::Result<Vec<T>, String> {
    let items: Vec<T> = value.split(',').map(|v| item(v.trim())).collect::<std::result::Result<_, _>>()?;
    if items.is_empty() {
        return Err("list is empty".into());
    }
    Ok(items)
}

fn capacity(s: &str) -> std::result::Result<Capacity, String> {
    match s {
        "inf" => Ok(Capacity::Unbounded),
        _ => match s.parse::<u32>() {
            Ok(l) if l > 0 => Ok(Capacity::Finite(l)),
            _ => Err(format!("`{s}` is not a positive buffer size or `inf`")),
        },
    }
}

fn chain_name(c: Construction) -> &'static str {
    match c {
        Construction::Protocol => "protocol",
        Construction::ClosedForm => "closed-form",
    }
}

const KEYS: &[&str] =
    &["name", "mode", "policy", "snr", "K", "L", "r0", "slots", "warmup", "seed", "chain", "output"];

/// Parses and validates an experiment description.
pub fn parse_config(text: &str) -> Result<Experiment> {
    let mut exp = Experiment::default();
    let mut seen: Vec<(&str, usize)> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| CliError::config(Some(line), content, "expected `key=value`"))?;
        let key = match key {
            "policies" => "policy",
            k => k,
        };
        let known = KEYS.iter().find(|&&k| k == key).ok_or_else(|| CliError::config(Some(line), key, "unknown key"))?;
        if seen.iter().any(|(k, _)| k == known) {
            return Err(CliError::config(Some(line), key, "given twice"));
        }
        seen.push((known, line));
        let bad = |m: String| CliError::config(Some(line), key, m);
        match key {
            "name" => exp.name = value.to_string(),
            "mode" => exp.mode = value.parse().map_err(bad)?,
            "policy" => {
                exp.policies = list(value, |p| p.parse::<Policy>().map_err(|e| e.to_string())).map_err(bad)?;
            }
            "snr" => exp.snr = value.parse().map_err(bad)?,
            "K" => {
                exp.relays = list(value, |k| match k.parse::<usize>() {
                    Ok(k) if k > 0 => Ok(k),
                    _ => Err(format!("`{k}` is not a positive relay count")),
                })
                .map_err(bad)?;
            }
            "L" => exp.capacities = list(value, capacity).map_err(bad)?,
            "r0" => {
                exp.rate = match value.parse::<f64>() {
                    Ok(r) if r > 0.0 && r.is_finite() => r,
                    _ => return Err(bad(format!("`{value}` is not a positive rate"))),
                }
            }
            "slots" => {
                exp.slots = match value.parse::<u64>() {
                    Ok(n) if n > 0 => n,
                    _ => return Err(bad(format!("`{value}` is not a positive slot count"))),
                }
            }
            "warmup" => exp.warmup = value.parse().map_err(bad)?,
            "seed" => exp.seed = value.parse().map_err(|_| bad(format!("`{value}` is not a 64-bit seed")))?,
            "chain" => {
                exp.chain = match value {
                    "protocol" => Construction::Protocol,
                    "closed-form" => Construction::ClosedForm,
                    _ => return Err(bad("expected protocol or closed-form".into())),
                }
            }
            "output" => exp.output = Some(PathBuf::from(value)),
            _ => unreachable!(),
        }
    }
    let line_of = |key: &str| seen.iter().find(|(k, _)| *k == key).map(|&(_, l)| l);
    validate(&exp, &line_of)?;
    Ok(exp)
}

fn validate(exp: &Experiment, line_of: &dyn Fn(&str) -> Option<usize>) -> Result<()> {
    if exp.warmup.slots(exp.slots) >= exp.slots {
        return Err(CliError::config(line_of("warmup"), "warmup", "warmup must be shorter than the run"));
    }
    if exp.mode.analytic() {
        let key = if line_of("L").is_some() { "L" } else { "mode" };
        if !exp.policies.contains(&Policy::MinPower) {
            return Err(CliError::config(line_of("policy"), "policy", "analytic mode models min-power only"));
        }
        for &cap in &exp.capacities {
            let Capacity::Finite(l) = cap else {
                return Err(CliError::config(line_of(key), key, "analytic mode needs finite buffers"));
            };
            for &k in &exp.relays {
                let states = (l as f64 + 1.0).powi(k as i32);
                if states > STATE_CAP as f64 {
                    return Err(CliError::config(
                        line_of(key),
                        key,
                        format!("K={k} L={l} gives {states} states, above the analytic cap of {STATE_CAP}"),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Renders an experiment in the format read by [`parse_config`].
pub fn serialize(exp: &Experiment) -> String {
    let mut out = String::new();
    let join = |items: Vec<String>| items.join(",");
    let _ = writeln!(out, "name={}", exp.name);
    let _ = writeln!(out, "mode={}", exp.mode.name());
    let _ = writeln!(out, "policy={}", join(exp.policies.iter().map(|p| p.name().to_string()).collect()));
    let _ = writeln!(out, "snr={}", exp.snr);
    let _ = writeln!(out, "K={}", join(exp.relays.iter().map(|k| k.to_string()).collect()));
    let _ = writeln!(out, "L={}", join(exp.capacities.iter().map(|c| c.to_string()).collect()));
    let _ = writeln!(out, "r0={}", exp.rate);
    let _ = writeln!(out, "slots={}", exp.slots);
    let _ = writeln!(out, "warmup={}", exp.warmup);
    let _ = writeln!(out, "seed={}", exp.seed);
    let _ = writeln!(out, "chain={}", chain_name(exp.chain));
    if let Some(p) = &exp.output {
        let _ = writeln!(out, "output={}", p.display());
    }
    out
}
