//! Grid expansion, parallel evaluation and CSV output.

use std::io::Write;

use rayon::prelude::*;
use relaysel::markov::{build_matrix, outage_analytic, steady_state, StationaryDistribution, TransitionMatrix};
use relaysel::sim::derive_seed;
use relaysel::{Capacity, NetworkConfig, Policy, SimConfig};

use crate::config::Experiment;
use crate::error::{CliError, Result};

/// Environment variable holding the worker thread count.
pub const WORKERS_ENV: &str = "RELAYSEL_WORKERS";

pub const CSV_HEADER: [&str; 11] = [
    "policy",
    "K",
    "L",
    "snr_db",
    "mode",
    "outage",
    "outage_stderr",
    "throughput_bpcu",
    "power_gain_db",
    "slots",
    "seed",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RowMode {
    Analytic,
    MonteCarlo,
}

impl RowMode {
    pub fn name(self) -> &'static str {
        match self {
            RowMode::Analytic => "analytic",
            RowMode::MonteCarlo => "montecarlo",
        }
    }
}

/// One evaluated grid point. Analytic rows carry no standard error, power
/// gain, slot count or seed.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub policy: Policy,
    pub relays: usize,
    pub capacity: Capacity,
    pub snr_db: f64,
    pub mode: RowMode,
    pub outage: f64,
    pub outage_stderr: Option<f64>,
    pub throughput: f64,
    pub power_gain_db: Option<f64>,
    pub slots: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy)]
struct Job {
    policy: Policy,
    relays: usize,
    capacity: Capacity,
    snr_index: usize,
    snr_db: f64,
    mode: RowMode,
}

fn capacity_key(c: Capacity) -> u64 {
    match c {
        Capacity::Finite(l) => l as u64,
        Capacity::Unbounded => u64::MAX,
    }
}

fn policy_index(p: Policy) -> u64 {
    Policy::ALL.iter().position(|&q| q == p).unwrap_or(0) as u64
}

fn jobs(exp: &Experiment) -> Vec<Job> {
    let mut policies = exp.policies.clone();
    policies.sort();
    policies.dedup();
    let mut relays = exp.relays.clone();
    relays.sort_unstable();
    relays.dedup();
    let mut capacities = exp.capacities.clone();
    capacities.sort_by_key(|&c| capacity_key(c));
    capacities.dedup();
    let snrs = exp.snr.values();

    let mut out = Vec::new();
    for &policy in &policies {
        for &k in &relays {
            for &capacity in &capacities {
                for (snr_index, &snr_db) in snrs.iter().enumerate() {
                    let mut modes = Vec::new();
                    if exp.mode.analytic() && policy == Policy::MinPower {
                        modes.push(RowMode::Analytic);
                    }
                    if exp.mode.montecarlo() {
                        modes.push(RowMode::MonteCarlo);
                    }
                    out.extend(modes.into_iter().map(|mode| Job { policy, relays: k, capacity, snr_index, snr_db, mode }));
                }
            }
        }
    }
    out
}

/// Seed of one Monte Carlo grid point. It depends only on the point's own
/// coordinates, so growing the grid leaves existing points unchanged.
pub fn point_seed(base: u64, policy: Policy, relays: usize, capacity: Capacity, snr_index: usize) -> u64 {
    [policy_index(policy), relays as u64, capacity_key(capacity), snr_index as u64]
        .into_iter()
        .fold(base, derive_seed)
}

fn analytic_throughput(a: &TransitionMatrix, pi: &StationaryDistribution, rate: f64) -> f64 {
    let Some(space) = a.space() else { return f64::NAN };
    let mut delivered = 0.0;
    for (i, &p) in pi.pi.iter().enumerate() {
        let from: u32 = space.state(i).iter().sum();
        for (j, w) in a.support(i) {
            let to: u32 = space.state(j).iter().sum();
            if j != i && to <= from {
                delivered += p * w;
            }
        }
    }
    rate * delivered
}

fn evaluate(exp: &Experiment, job: &Job) -> Result<ResultRow> {
    let network = NetworkConfig::new(job.relays, job.capacity, exp.rate, job.snr_db)?;
    let row = ResultRow {
        policy: job.policy,
        relays: job.relays,
        capacity: job.capacity,
        snr_db: job.snr_db,
        mode: job.mode,
        outage: 0.0,
        outage_stderr: None,
        throughput: 0.0,
        power_gain_db: None,
        slots: None,
        seed: None,
    };
    match job.mode {
        RowMode::Analytic => {
            let a = build_matrix(&network, network.source_power_max, exp.chain)?;
            let pi = steady_state(&a)?;
            Ok(ResultRow {
                outage: outage_analytic(&a, &pi),
                throughput: analytic_throughput(&a, &pi, exp.rate),
                ..row
            })
        }
        RowMode::MonteCarlo => {
            let seed = point_seed(exp.seed, job.policy, job.relays, job.capacity, job.snr_index);
            let mut cfg = SimConfig::new(job.policy, network, exp.slots, seed);
            cfg.warmup_slots = exp.warmup.slots(exp.slots);
            let m = relaysel::run(&cfg)?;
            Ok(ResultRow {
                outage: m.outage_probability,
                outage_stderr: Some(m.outage_stderr),
                throughput: m.throughput,
                power_gain_db: Some(m.power_reduction_db),
                slots: Some(exp.slots),
                seed: Some(seed),
                ..row
            })
        }
    }
}

fn worker_count() -> Option<usize> {
    std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse().ok()).filter(|&n| n > 0)
}

/// Evaluates every grid point. Rows come back in canonical order (policy,
/// K, L, SNR, then analytic before Monte Carlo) whatever the thread count.
pub fn run_experiment(exp: &Experiment) -> Result<Vec<ResultRow>> {
    let jobs = jobs(exp);
    let work = || jobs.par_iter().map(|job| evaluate(exp, job)).collect::<Result<Vec<_>>>();
    match worker_count() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::config(None, WORKERS_ENV, e.to_string()))?
            .install(work),
        None => work(),
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl ResultRow {
    pub fn record(&self) -> [String; 11] {
        [
            self.policy.name().to_string(),
            self.relays.to_string(),
            self.capacity.to_string(),
            self.snr_db.to_string(),
            self.mode.name().to_string(),
            self.outage.to_string(),
            opt(self.outage_stderr),
            self.throughput.to_string(),
            opt(self.power_gain_db),
            opt(self.slots),
            opt(self.seed),
        ]
    }
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}
