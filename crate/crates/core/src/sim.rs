//! Slot-level Monte Carlo engine.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{BufferState, ChannelState, NetworkConfig};
use crate::policies::{
    select_bound, select_max_link, select_max_max, select_max_min, select_min_power, select_sor, Decision, Link, Policy,
};

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub policy: Policy,
    pub network: NetworkConfig,
    /// Total slots, warmup included.
    pub slots: u64,
    pub warmup_slots: u64,
    pub seed: u64,
    /// Transmit at the power caps instead of the minimum required powers.
    pub fixed_power_reference: bool,
}

impl SimConfig {
    /// Warmup defaults to 10% of the slots, at least 1000 but never more
    /// than half the run.
    pub fn new(policy: Policy, network: NetworkConfig, slots: u64, seed: u64) -> Self {
        Self {
            policy,
            network,
            slots,
            warmup_slots: default_warmup(slots),
            seed,
            fixed_power_reference: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.network.validate()?;
        if self.slots == 0 || self.warmup_slots >= self.slots {
            return Err(Error::Config(format!(
                "need slots > warmup_slots, got {} and {}",
                self.slots, self.warmup_slots
            )));
        }
        Ok(())
    }

    pub fn measured_slots(&self) -> u64 {
        self.slots - self.warmup_slots
    }
}

pub fn default_warmup(slots: u64) -> u64 {
    (slots / 10).max(1000).min(slots / 2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimMetrics {
    pub policy: Policy,
    /// Measured slots (warmup excluded).
    pub slots: u64,
    pub outage_probability: f64,
    pub outage_stderr: f64,
    /// Bits per channel use.
    pub throughput: f64,
    pub power_reduction_db: f64,
    pub delivered_packets: u64,
    /// Packets the source got into some relay.
    pub injected_packets: u64,
    pub outage_slots: u64,
    pub successive_slots: u64,
    pub single_slots: u64,
    pub ic_slots: u64,
    pub backlog_start: u64,
    pub backlog_end: u64,
}

/// Powers of every measured non-outage slot, in order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PowerTrace {
    pub fixed_reference: bool,
    /// Measured slot index of each entry.
    pub slots: Vec<u64>,
    /// Total transmit power spent in that slot.
    pub totals: Vec<f64>,
}

/// Average of `10 log10(fixed / adapted)` over the slots of two traces
/// produced from the same configuration and seed.
pub fn power_reduction(adapted: &PowerTrace, fixed: &PowerTrace) -> Result<f64> {
    if adapted.fixed_reference || !fixed.fixed_reference {
        return Err(Error::Usage("expected an adapted trace and a fixed-power trace".into()));
    }
    if adapted.slots != fixed.slots {
        return Err(Error::Usage("traces come from different runs".into()));
    }
    Ok(mean_gain_db(adapted.totals.iter().zip(&fixed.totals).map(|(&a, &f)| (a, f))))
}

fn mean_gain_db(pairs: impl Iterator<Item = (f64, f64)>) -> f64 {
    let (mut sum, mut n) = (0.0, 0u64);
    for (adapted, fixed) in pairs {
        sum += 10.0 * (fixed / adapted).log10();
        n += 1;
    }
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Mixes a base seed with a grid index.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    mix(seed ^ mix(index))
}

/// Applies one slot of a buffered single-slot policy: the decision and the
/// buffer state after it. Outage leaves the buffers unchanged.
pub fn step(policy: Policy, ch: &ChannelState, buffers: &BufferState, cfg: &NetworkConfig) -> Result<(Decision, BufferState)> {
    let d = match policy {
        Policy::MinPower => select_min_power(ch, buffers, cfg),
        Policy::MaxLink => select_max_link(ch, buffers, cfg),
        Policy::Bound => return Ok((select_bound(ch, cfg), buffers.clone())),
        _ => return Err(Error::Usage(format!("`{policy}` is not a single-slot buffered policy"))),
    };
    let mut next = buffers.clone();
    apply(&d.link, &mut next);
    Ok((d, next))
}

fn apply(link: &Link, buffers: &mut BufferState) {
    match *link {
        Link::Outage => {}
        Link::SingleSr { receiver } => buffers.push(receiver),
        Link::SingleRd { transmitter } => buffers.pop(transmitter),
        Link::Successive { transmitter, receiver } => {
            buffers.pop(transmitter);
            buffers.push(receiver);
        }
    }
}

/// Outcome of one decision unit: a slot, or a two-slot frame.
#[derive(Debug, Clone, Copy, Default)]
struct Trial {
    slots: u32,
    outage: u32,
    successive: u32,
    single: u32,
    delivered: u32,
    injected: u32,
    ic: u32,
    /// `(spent, cap)` total powers of a non-outage slot.
    power: Option<(f64, f64)>,
}

struct SorSlot {
    /// Relay holding this slot's packet, if the source hop succeeded.
    holder: Option<usize>,
    measured: bool,
}

struct Engine<'a> {
    cfg: &'a SimConfig,
    rng: ChaCha8Rng,
    channel: ChannelState,
    buffers: BufferState,
    sor: Option<SorSlot>,
}

impl<'a> Engine<'a> {
    fn new(cfg: &'a SimConfig) -> Self {
        let net = &cfg.network;
        Self {
            cfg,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            channel: ChannelState::zeros(net.relays),
            buffers: BufferState::empty(net.relays, net.capacity),
            sor: None,
        }
    }

    fn draw(&mut self) {
        self.channel.redraw(&self.cfg.network, &mut self.rng);
    }

    /// Runs one decision unit. Returns the trial it resolved and whether
    /// that trial falls in the measured window.
    fn advance(&mut self, measured: bool) -> Option<(Trial, bool)> {
        let net = &self.cfg.network;
        self.draw();
        match self.cfg.policy {
            Policy::MinPower | Policy::MaxLink | Policy::Bound => {
                let (d, next) = step(self.cfg.policy, &self.channel, &self.buffers, net).expect("single-slot policy");
                self.buffers = next;
                let mut t = Trial { slots: 1, ic: d.ic_applied as u32, ..Trial::default() };
                match d.link {
                    Link::Outage => t.outage = 1,
                    Link::SingleSr { .. } => {
                        t.single = 1;
                        t.injected = 1;
                    }
                    Link::SingleRd { .. } => {
                        t.single = 1;
                        t.delivered = 1;
                    }
                    Link::Successive { .. } => {
                        t.successive = 1;
                        t.injected = 1;
                        t.delivered = 1;
                    }
                }
                if !d.is_outage() {
                    let cap = d.fixed_power(net);
                    let spent = if self.cfg.fixed_power_reference { cap } else { d.total_power() };
                    t.power = Some((spent, cap));
                }
                Some((t, measured))
            }
            Policy::MaxMin | Policy::MaxMax => {
                let d = if self.cfg.policy == Policy::MaxMin {
                    select_max_min(&self.channel, net)
                } else {
                    select_max_max(&self.channel, net)
                };
                let mut t = Trial { slots: 2, injected: d.first_hop_ok as u32, ..Trial::default() };
                if self.cfg.policy == Policy::MaxMin {
                    // The frame stands or falls as a whole.
                    if d.delivered() {
                        t.single = 2;
                        t.delivered = 1;
                    } else {
                        t.outage = 2;
                    }
                } else {
                    let ok = d.first_hop_ok as u32 + d.second_hop_ok as u32;
                    t.single = ok;
                    t.outage = 2 - ok;
                    t.delivered = d.second_hop_ok as u32;
                }
                Some((t, measured))
            }
            Policy::Sor => {
                let prev = self.sor.take();
                let d = select_sor(&self.channel, prev.as_ref().and_then(|s| s.holder), net);
                self.sor = Some(SorSlot { holder: d.receiver.filter(|_| d.source_ok), measured });
                prev.map(|s| (sor_trial(s.holder.is_some(), d.relay_ok), s.measured))
            }
        }
    }

    /// Resolves a packet still held by a relay after the last slot.
    fn finish(&mut self) -> Option<(Trial, bool)> {
        let last = self.sor.take()?;
        let relay_ok = match last.holder {
            Some(t) => {
                self.draw();
                select_sor(&self.channel, Some(t), &self.cfg.network).relay_ok
            }
            None => false,
        };
        Some((sor_trial(last.holder.is_some(), relay_ok), last.measured))
    }
}

fn sor_trial(source_ok: bool, relay_ok: bool) -> Trial {
    let delivered = source_ok && relay_ok;
    Trial {
        slots: 1,
        outage: !delivered as u32,
        successive: delivered as u32,
        injected: source_ok as u32,
        delivered: delivered as u32,
        ..Trial::default()
    }
}

#[derive(Default)]
struct Accumulator {
    trials: u64,
    sum_x: f64,
    sum_x2: f64,
    slots: u64,
    outage: u64,
    successive: u64,
    single: u64,
    delivered: u64,
    injected: u64,
    ic: u64,
    trace: PowerTrace,
    gain_sum: f64,
}

impl Accumulator {
    fn add(&mut self, t: &Trial) {
        let x = t.outage as f64 / t.slots as f64;
        self.trials += 1;
        self.sum_x += x;
        self.sum_x2 += x * x;
        if let Some((spent, cap)) = t.power {
            self.trace.slots.push(self.slots);
            self.trace.totals.push(spent);
            self.gain_sum += 10.0 * (cap / spent).log10();
        }
        self.slots += t.slots as u64;
        self.outage += t.outage as u64;
        self.successive += t.successive as u64;
        self.single += t.single as u64;
        self.delivered += t.delivered as u64;
        self.injected += t.injected as u64;
        self.ic += t.ic as u64;
    }
}

pub fn run(cfg: &SimConfig) -> Result<SimMetrics> {
    run_traced(cfg).map(|(m, _)| m)
}

/// Like [`run`], also returning the per-slot power trace.
pub fn run_traced(cfg: &SimConfig) -> Result<(SimMetrics, PowerTrace)> {
    cfg.validate()?;
    let slots_per_unit = if cfg.policy.is_two_slot() { 2 } else { 1 };
    let warmup_units = cfg.warmup_slots / slots_per_unit;
    let measured_units = cfg.measured_slots().div_ceil(slots_per_unit);

    let mut engine = Engine::new(cfg);
    let mut acc = Accumulator::default();
    acc.trace.fixed_reference = cfg.fixed_power_reference;
    let record = |r: Option<(Trial, bool)>, acc: &mut Accumulator| {
        if let Some((t, true)) = r {
            acc.add(&t);
        }
    };
    for _ in 0..warmup_units {
        let r = engine.advance(false);
        record(r, &mut acc);
    }
    let backlog_start = engine.buffers.total();
    for _ in 0..measured_units {
        let r = engine.advance(true);
        record(r, &mut acc);
    }
    let r = engine.finish();
    record(r, &mut acc);

    let n = acc.trials.max(1) as f64;
    let mean = acc.sum_x / n;
    let var = if acc.trials > 1 { ((acc.sum_x2 - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    let counted = acc.trace.totals.len();
    let metrics = SimMetrics {
        policy: cfg.policy,
        slots: acc.slots,
        outage_probability: acc.outage as f64 / acc.slots.max(1) as f64,
        outage_stderr: (var / n).sqrt(),
        throughput: cfg.network.rate * acc.delivered as f64 / acc.slots.max(1) as f64,
        power_reduction_db: if counted == 0 { 0.0 } else { acc.gain_sum / counted as f64 },
        delivered_packets: acc.delivered,
        injected_packets: acc.injected,
        outage_slots: acc.outage,
        successive_slots: acc.successive,
        single_slots: acc.single,
        ic_slots: acc.ic,
        backlog_start,
        backlog_end: engine.buffers.total(),
    };
    Ok((metrics, acc.trace))
}
