//! Relay-selection policies.
//!
//! `select_min_power` is the buffer-aided successive policy with power
//! adaptation and inter-relay interference cancellation. The remaining
//! selectors are the fixed-power baselines it is compared against.
//!
//! Ties are always broken toward the lowest relay index, or the
//! lexicographically lowest `(transmitter, receiver)` pair.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::model::{decodable, sinr, BufferState, ChannelState, NetworkConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Policy {
    MinPower,
    MaxLink,
    MaxMin,
    MaxMax,
    Sor,
    Bound,
}

impl Policy {
    pub const ALL: [Policy; 6] =
        [Policy::MinPower, Policy::MaxLink, Policy::MaxMin, Policy::MaxMax, Policy::Sor, Policy::Bound];

    pub fn name(self) -> &'static str {
        match self {
            Policy::MinPower => "min-power",
            Policy::MaxLink => "max-link",
            Policy::MaxMin => "max-min",
            Policy::MaxMax => "max-max",
            Policy::Sor => "sor",
            Policy::Bound => "bound",
        }
    }

    /// Policies that split every packet over a source slot and a relay slot.
    pub fn is_two_slot(self) -> bool {
        matches!(self, Policy::MaxMin | Policy::MaxMax)
    }

    /// Policies whose selection depends on relay buffer occupancy.
    pub fn uses_buffers(self) -> bool {
        matches!(self, Policy::MinPower | Policy::MaxLink)
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Policy::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown policy `{s}`")))
    }
}

/// Which links carry a packet in the current slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Link {
    Outage,
    /// Source to relay `receiver`.
    SingleSr { receiver: usize },
    /// Relay `transmitter` to destination.
    SingleRd { transmitter: usize },
    /// Source to `receiver` and `transmitter` to destination in the same slot.
    Successive { transmitter: usize, receiver: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub link: Link,
    pub source_power: f64,
    pub relay_power: f64,
    pub ic_applied: bool,
}

impl Decision {
    pub fn outage() -> Self {
        Self { link: Link::Outage, source_power: 0.0, relay_power: 0.0, ic_applied: false }
    }

    pub fn is_outage(&self) -> bool {
        self.link == Link::Outage
    }

    pub fn total_power(&self) -> f64 {
        self.source_power + self.relay_power
    }

    /// Sum of the power caps of the nodes active under this decision.
    pub fn fixed_power(&self, cfg: &NetworkConfig) -> f64 {
        match self.link {
            Link::Outage => 0.0,
            Link::SingleSr { .. } => cfg.source_power_max,
            Link::SingleRd { .. } => cfg.relay_power_max,
            Link::Successive { .. } => cfg.source_power_max + cfg.relay_power_max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerAllocation {
    pub source_power: f64,
    pub relay_power: f64,
    pub ic_applied: bool,
    pub feasible: bool,
}

impl PowerAllocation {
    pub fn total(&self) -> f64 {
        self.source_power + self.relay_power
    }

    fn infeasible(ic_applied: bool) -> Self {
        Self { source_power: f64::INFINITY, relay_power: f64::INFINITY, ic_applied, feasible: false }
    }
}

fn within(power: f64, cap: f64) -> bool {
    power.is_finite() && power <= cap
}

/// Returns 0 when relay `t`'s signal is strong enough at relay `r` to be
/// decoded and cancelled before decoding the source, 1 otherwise.
pub fn ic_indicator(
    ch: &ChannelState,
    source_power: f64,
    relay_power: f64,
    t: usize,
    r: usize,
    capture_ratio: f64,
    noise: f64,
) -> u8 {
    let iri = sinr(ch.rr(t, r), relay_power, &[(ch.sr(r), source_power)], noise);
    if relay_power > 0.0 && decodable(iri, capture_ratio) {
        0
    } else {
        1
    }
}

/// Minimum powers for the pair `(t, r)` when the receiving relay cancels the
/// inter-relay interference: both constraints met with equality.
pub fn min_power_ic(ch: &ChannelState, t: usize, r: usize, cfg: &NetworkConfig) -> PowerAllocation {
    let g0 = cfg.capture_ratio;
    let n_r = cfg.relay_noise[r];
    let n_d = cfg.destination_noise;
    let source_power = g0 * n_r / ch.sr(r);
    let relay_power = (g0 * n_d / ch.rd(t)).max(n_r * g0 * (g0 + 1.0) / ch.rr(t, r));
    let feasible = within(source_power, cfg.source_power_max) && within(relay_power, cfg.relay_power_max);
    PowerAllocation { source_power, relay_power, ic_applied: true, feasible }
}

/// Minimum powers for the pair `(t, r)` when the interference is treated as
/// noise at relay `r`.
pub fn min_power_noic(ch: &ChannelState, t: usize, r: usize, cfg: &NetworkConfig) -> PowerAllocation {
    let g0 = cfg.capture_ratio;
    let n_r = cfg.relay_noise[r];
    let relay_power = g0 * cfg.destination_noise / ch.rd(t);
    let source_power = g0 * (ch.rr(t, r) * relay_power + n_r) / ch.sr(r);
    let feasible = within(relay_power, cfg.relay_power_max) && within(source_power, cfg.source_power_max);
    if !relay_power.is_finite() || !source_power.is_finite() {
        return PowerAllocation::infeasible(false);
    }
    PowerAllocation { source_power, relay_power, ic_applied: false, feasible }
}

/// Smallest relay power cap for which interference cancellation is
/// feasible on the pair `(t, r)`.
pub fn ic_threshold(ch: &ChannelState, t: usize, r: usize, cfg: &NetworkConfig) -> f64 {
    let g0 = cfg.capture_ratio;
    let n_r = cfg.relay_noise[r];
    let n_d = cfg.destination_noise;
    let via_rr = n_r / ch.rr(t, r);
    g0 * (g0 * (g0 * n_d / ch.rd(t) + via_rr) + via_rr)
}

pub fn ic_feasibility_check(ch: &ChannelState, t: usize, r: usize, cfg: &NetworkConfig) -> bool {
    let threshold = ic_threshold(ch, t, r, cfg);
    threshold.is_finite() && cfg.relay_power_max >= threshold
}

/// Cheapest feasible power allocation for the successive pair `(t, r)`.
/// On equal sums the cancelling branch wins.
pub fn min_power_pair(ch: &ChannelState, t: usize, r: usize, cfg: &NetworkConfig) -> PowerAllocation {
    let noic = min_power_noic(ch, t, r, cfg);
    if ic_feasibility_check(ch, t, r, cfg) {
        let ic = min_power_ic(ch, t, r, cfg);
        match (ic.feasible, noic.feasible) {
            (true, true) if ic.total() <= noic.total() => return ic,
            (true, false) => return ic,
            _ => {}
        }
    }
    if noic.feasible {
        noic
    } else {
        PowerAllocation::infeasible(false)
    }
}

/// Min-power selection. Any feasible successive pair is preferred over a
/// single link; among pairs the smallest total power wins. Without a
/// feasible pair the single link needing the least power is used.
pub fn select_min_power(ch: &ChannelState, buffers: &BufferState, cfg: &NetworkConfig) -> Decision {
    let k = cfg.relays;
    let mut best: Option<(f64, Decision)> = None;
    for t in (0..k).filter(|&t| buffers.can_transmit(t)) {
        for r in (0..k).filter(|&r| r != t && buffers.can_receive(r)) {
            let alloc = min_power_pair(ch, t, r, cfg);
            if alloc.feasible && best.as_ref().is_none_or(|(sum, _)| alloc.total() < *sum) {
                let d = Decision {
                    link: Link::Successive { transmitter: t, receiver: r },
                    source_power: alloc.source_power,
                    relay_power: alloc.relay_power,
                    ic_applied: alloc.ic_applied,
                };
                best = Some((alloc.total(), d));
            }
        }
    }
    if let Some((_, d)) = best {
        return d;
    }

    let g0 = cfg.capture_ratio;
    let mut single: Option<Decision> = None;
    let mut consider = |d: Decision| {
        if single.as_ref().is_none_or(|s| d.total_power() < s.total_power()) {
            single = Some(d);
        }
    };
    for r in (0..k).filter(|&r| buffers.can_receive(r)) {
        let p = g0 * cfg.relay_noise[r] / ch.sr(r);
        if within(p, cfg.source_power_max) {
            consider(Decision { link: Link::SingleSr { receiver: r }, source_power: p, relay_power: 0.0, ic_applied: false });
        }
    }
    for t in (0..k).filter(|&t| buffers.can_transmit(t)) {
        let p = g0 * cfg.destination_noise / ch.rd(t);
        if within(p, cfg.relay_power_max) {
            consider(Decision { link: Link::SingleRd { transmitter: t }, source_power: 0.0, relay_power: p, ic_applied: false });
        }
    }
    single.unwrap_or_else(Decision::outage)
}

fn argmax(values: impl Iterator<Item = (usize, f64)>) -> Option<(usize, f64)> {
    values.fold(None, |best, (i, v)| match best {
        Some((_, bv)) if v <= bv => best,
        _ => Some((i, v)),
    })
}

/// Outcome of a policy that uses a source slot followed by a relay slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSlotDecision {
    pub receiver: usize,
    pub transmitter: usize,
    pub first_hop_ok: bool,
    pub second_hop_ok: bool,
}

impl TwoSlotDecision {
    pub fn delivered(&self) -> bool {
        self.first_hop_ok && self.second_hop_ok
    }
}

fn sr_ok(ch: &ChannelState, r: usize, cfg: &NetworkConfig) -> bool {
    decodable(sinr(ch.sr(r), cfg.source_power_max, &[], cfg.relay_noise[r]), cfg.capture_ratio)
}

fn rd_ok(ch: &ChannelState, t: usize, cfg: &NetworkConfig) -> bool {
    decodable(sinr(ch.rd(t), cfg.relay_power_max, &[], cfg.destination_noise), cfg.capture_ratio)
}

/// Best end-to-end path: `argmax_k min(g_SR[k], g_RD[k])`, at full power.
pub fn select_max_min(ch: &ChannelState, cfg: &NetworkConfig) -> TwoSlotDecision {
    let (k, _) = argmax((0..cfg.relays).map(|k| (k, ch.sr(k).min(ch.rd(k))))).expect("at least one relay");
    TwoSlotDecision { receiver: k, transmitter: k, first_hop_ok: sr_ok(ch, k, cfg), second_hop_ok: rd_ok(ch, k, cfg) }
}

/// Best SR link for reception and best RD link for transmission, buffers
/// ignored (every relay can always receive and transmit).
pub fn select_max_max(ch: &ChannelState, cfg: &NetworkConfig) -> TwoSlotDecision {
    let (r, _) = argmax((0..cfg.relays).map(|k| (k, ch.sr(k)))).expect("at least one relay");
    let (t, _) = argmax((0..cfg.relays).map(|k| (k, ch.rd(k)))).expect("at least one relay");
    TwoSlotDecision { receiver: r, transmitter: t, first_hop_ok: sr_ok(ch, r, cfg), second_hop_ok: rd_ok(ch, t, cfg) }
}

/// Strongest available link at full power.
pub fn select_max_link(ch: &ChannelState, buffers: &BufferState, cfg: &NetworkConfig) -> Decision {
    let mut best: Option<(f64, Link)> = None;
    let mut offer = |g: f64, link: Link| {
        if best.is_none_or(|(bg, _)| g > bg) {
            best = Some((g, link));
        }
    };
    for r in buffers.receivers() {
        offer(ch.sr(r), Link::SingleSr { receiver: r });
    }
    for t in buffers.transmitters() {
        offer(ch.rd(t), Link::SingleRd { transmitter: t });
    }
    single_at_full_power(best.map(|(_, l)| l), ch, cfg)
}

fn single_at_full_power(link: Option<Link>, ch: &ChannelState, cfg: &NetworkConfig) -> Decision {
    match link {
        Some(Link::SingleSr { receiver }) if sr_ok(ch, receiver, cfg) => Decision {
            link: Link::SingleSr { receiver },
            source_power: cfg.source_power_max,
            relay_power: 0.0,
            ic_applied: false,
        },
        Some(Link::SingleRd { transmitter }) if rd_ok(ch, transmitter, cfg) => Decision {
            link: Link::SingleRd { transmitter },
            source_power: 0.0,
            relay_power: cfg.relay_power_max,
            ic_applied: false,
        },
        _ => Decision::outage(),
    }
}

/// Selection bound: successive pair chosen by `max min(g_SR[r], g_RD[t])`
/// with no inter-relay interference and no buffer limits, falling back to
/// the strongest single link.
pub fn select_bound(ch: &ChannelState, cfg: &NetworkConfig) -> Decision {
    let k = cfg.relays;
    let mut best: Option<(f64, usize, usize)> = None;
    for t in 0..k {
        for r in (0..k).filter(|&r| r != t) {
            let score = ch.sr(r).min(ch.rd(t));
            if best.is_none_or(|(b, _, _)| score > b) {
                best = Some((score, t, r));
            }
        }
    }
    if let Some((_, t, r)) = best {
        if sr_ok(ch, r, cfg) && rd_ok(ch, t, cfg) {
            return Decision {
                link: Link::Successive { transmitter: t, receiver: r },
                source_power: cfg.source_power_max,
                relay_power: cfg.relay_power_max,
                ic_applied: false,
            };
        }
    }
    let all = BufferState::from_levels(vec![1; k], crate::model::Capacity::Unbounded).expect("unbounded");
    select_max_link(ch, &all, cfg)
}

/// Outcome of one successive-opportunistic-relaying slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SorDecision {
    /// Relay forwarding the packet it received in the previous slot.
    pub transmitter: Option<usize>,
    pub receiver: Option<usize>,
    pub ic_applied: bool,
    /// The receiving relay decoded the source packet.
    pub source_ok: bool,
    /// The destination decoded the forwarded packet.
    pub relay_ok: bool,
}

/// Bufferless successive relaying. The relay that received in the previous
/// slot forwards now and cannot receive; every other relay competes with
/// `min(g_SR, g_RD)` if it can cancel the interference, else with
/// `min(g_SR / g_RR, g_RD)`.
pub fn select_sor(ch: &ChannelState, prev_transmitter: Option<usize>, cfg: &NetworkConfig) -> SorDecision {
    let (ps, pr) = (cfg.source_power_max, cfg.relay_power_max);
    let cancels = |k: usize| match prev_transmitter {
        Some(t) => ic_indicator(ch, ps, pr, t, k, cfg.capture_ratio, cfg.relay_noise[k]) == 0,
        None => true,
    };
    let candidates = (0..cfg.relays).filter(|&k| Some(k) != prev_transmitter).map(|k| {
        let score = match prev_transmitter {
            Some(t) if !cancels(k) => (ch.sr(k) / ch.rr(t, k)).min(ch.rd(k)),
            _ => ch.sr(k).min(ch.rd(k)),
        };
        (k, score)
    });
    let receiver = argmax(candidates).map(|(k, _)| k);

    let relay_ok = prev_transmitter.is_some_and(|t| rd_ok(ch, t, cfg));
    let (ic_applied, source_ok) = match (receiver, prev_transmitter) {
        (Some(r), Some(t)) => {
            let ic = cancels(r);
            let interferers = if ic { vec![] } else { vec![(ch.rr(t, r), pr)] };
            (ic, decodable(sinr(ch.sr(r), ps, &interferers, cfg.relay_noise[r]), cfg.capture_ratio))
        }
        (Some(r), None) => (false, sr_ok(ch, r, cfg)),
        (None, _) => (false, false),
    };
    SorDecision { transmitter: prev_transmitter, receiver, ic_applied, source_ok, relay_ok }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Capacity;

    fn cfg(k: usize, cap: f64) -> NetworkConfig {
        NetworkConfig::new(k, Capacity::Finite(2), 1.0, 0.0).unwrap().with_power(cap)
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    /// All gains 1 except RR = `rr`.
    fn pair_channels(rr: f64) -> ChannelState {
        ChannelState::from_gains(vec![1.0, 1.0], vec![1.0, 1.0], |_, _| rr)
    }

    #[test]
    fn indicator_at_operating_point() {
        let ch = pair_channels(1.0);
        assert_eq!(ic_indicator(&ch, 3.0, 12.0, 0, 1, 3.0, 1.0), 0);
        assert_eq!(ic_indicator(&ch, 3.0, 0.0, 0, 1, 3.0, 1.0), 1);
        assert_eq!(ic_indicator(&pair_channels(1e12), 3.0, 1.0, 0, 1, 3.0, 1.0), 0);
        assert_eq!(ic_indicator(&ch, 3.0, 11.9, 0, 1, 3.0, 1.0), 1);
    }

    #[test]
    fn ic_branch_powers() {
        let c = cfg(2, 200.0);
        let a = min_power_ic(&pair_channels(1.0), 0, 1, &c);
        assert!(close(a.source_power, 3.0) && close(a.relay_power, 12.0) && a.feasible && a.ic_applied);
        let b = min_power_ic(&pair_channels(0.1), 0, 1, &c);
        assert!(close(b.relay_power, 120.0));

        let mut tiny = c.clone();
        tiny.capture_ratio = 1e-9;
        let z = min_power_ic(&pair_channels(1.0), 0, 1, &tiny);
        assert!(z.source_power < 1e-8 && z.relay_power < 1e-8);
    }

    #[test]
    fn noic_branch_powers() {
        let c = cfg(2, 200.0);
        let a = min_power_noic(&pair_channels(0.1), 0, 1, &c);
        assert!(close(a.relay_power, 3.0) && close(a.source_power, 3.9) && !a.ic_applied);
        let b = min_power_noic(&pair_channels(1.0), 0, 1, &c);
        assert!(close(b.relay_power, 3.0) && close(b.source_power, 12.0));
        let c0 = min_power_noic(&pair_channels(1e-15), 0, 1, &c);
        assert!((c0.source_power - 3.0).abs() < 1e-12);
    }

    #[test]
    fn feasibility_threshold() {
        let ch = pair_channels(1.0);
        assert!(close(ic_threshold(&ch, 0, 1, &cfg(2, 1.0)), 39.0));
        assert!(ic_feasibility_check(&ch, 0, 1, &cfg(2, 40.0)));
        assert!(!ic_feasibility_check(&ch, 0, 1, &cfg(2, 38.0)));
        assert!(ic_feasibility_check(&ch, 0, 1, &cfg(2, f64::INFINITY)));
        assert!(!ic_feasibility_check(&pair_channels(0.0), 0, 1, &cfg(2, f64::INFINITY)));
    }

    #[test]
    fn pair_branch_choice() {
        let weak = min_power_pair(&pair_channels(0.1), 0, 1, &cfg(2, 200.0));
        assert!(!weak.ic_applied && close(weak.total(), 6.9));
        let tie = min_power_pair(&pair_channels(1.0), 0, 1, &cfg(2, 200.0));
        assert!(tie.ic_applied && close(tie.total(), 15.0));
        assert!(!min_power_pair(&pair_channels(1.0), 0, 1, &cfg(2, 2.0)).feasible);
    }

    #[test]
    fn zero_gain_is_infeasible() {
        let ch = ChannelState::from_gains(vec![0.0, 1.0], vec![1.0, 0.0], |_, _| 1.0);
        let c = cfg(2, f64::INFINITY);
        assert!(!min_power_noic(&ch, 1, 0, &c).feasible);
        assert!(!min_power_ic(&ch, 1, 0, &c).feasible);
        assert!(!min_power_pair(&ch, 1, 0, &c).feasible);
        assert!(min_power_pair(&ch, 0, 1, &c).feasible);
    }

    #[test]
    fn min_power_picks_cheaper_direction() {
        let c = cfg(2, 200.0);
        // 0 -> 1 has strong links, 1 -> 0 weak ones.
        let ch = ChannelState::from_gains(vec![0.5, 2.0], vec![2.0, 0.5], |_, _| 0.1);
        let b = BufferState::from_levels(vec![1, 1], Capacity::Finite(2)).unwrap();
        let d = select_min_power(&ch, &b, &c);
        let fwd = min_power_pair(&ch, 0, 1, &c).total();
        let rev = min_power_pair(&ch, 1, 0, &c).total();
        assert!(fwd < rev);
        assert_eq!(d.link, Link::Successive { transmitter: 0, receiver: 1 });
        assert!(close(d.total_power(), fwd));
    }

    #[test]
    fn min_power_empty_buffers_and_outage() {
        let c = cfg(2, 200.0);
        let ch = ChannelState::from_gains(vec![0.5, 2.0], vec![3.0, 3.0], |_, _| 1.0);
        let empty = BufferState::empty(2, Capacity::Finite(2));
        let d = select_min_power(&ch, &empty, &c);
        assert_eq!(d.link, Link::SingleSr { receiver: 1 });
        assert!(close(d.source_power, 1.5));

        let dead = ChannelState::uniform(2, 1e-6);
        let mid = BufferState::from_levels(vec![1, 1], Capacity::Finite(2)).unwrap();
        assert!(select_min_power(&dead, &mid, &c).is_outage());
    }

    #[test]
    fn min_power_falls_back_to_cheapest_single() {
        let mut c = cfg(2, 10.0);
        c.relay_power_max = 10.0;
        // Pair 0->1 blocked by a weak SR to relay 1; pair 1->0 blocked by weak RD of relay 1.
        let ch = ChannelState::from_gains(vec![2.0, 0.01], vec![0.6, 0.01], |_, _| 1.0);
        let b = BufferState::from_levels(vec![1, 1], Capacity::Finite(2)).unwrap();
        let d = select_min_power(&ch, &b, &c);
        assert_eq!(d.link, Link::SingleSr { receiver: 0 });
        assert!(close(d.source_power, 1.5));
    }

    #[test]
    fn max_min_examples() {
        let c = cfg(2, 100.0);
        let ch = ChannelState::from_gains(vec![0.9, 0.2], vec![0.5, 0.8], |_, _| 1.0);
        assert_eq!(select_max_min(&ch, &c).receiver, 0);
        assert_eq!(select_max_min(&ChannelState::uniform(3, 0.4), &c).receiver, 0);
        let one = ChannelState::from_gains(vec![0.01], vec![5.0], |_, _| 1.0);
        let d = select_max_min(&one, &cfg(1, 100.0));
        assert_eq!(d.receiver, 0);
        assert!(!d.first_hop_ok && d.second_hop_ok && !d.delivered());
    }

    #[test]
    fn max_max_examples() {
        let c = cfg(2, 100.0);
        let ch = ChannelState::from_gains(vec![0.3, 0.9], vec![0.7, 0.1], |_, _| 1.0);
        let d = select_max_max(&ch, &c);
        assert_eq!((d.receiver, d.transmitter), (1, 0));
        let u = select_max_max(&ChannelState::uniform(3, 1.0), &c);
        assert_eq!((u.receiver, u.transmitter), (0, 0));
        let one = select_max_max(&ChannelState::uniform(1, 1.0), &cfg(1, 100.0));
        assert_eq!((one.receiver, one.transmitter), (0, 0));
    }

    #[test]
    fn max_link_examples() {
        let c = cfg(2, 100.0);
        let ch = ChannelState::from_gains(vec![0.5, 0.1], vec![0.4, 0.45], |_, _| 1.0);
        let mid = BufferState::from_levels(vec![1, 1], Capacity::Finite(2)).unwrap();
        assert_eq!(select_max_link(&ch, &mid, &c).link, Link::SingleSr { receiver: 0 });

        let full = BufferState::from_levels(vec![2, 2], Capacity::Finite(2)).unwrap();
        assert_eq!(select_max_link(&ch, &full, &c).link, Link::SingleRd { transmitter: 1 });
        let empty = BufferState::empty(2, Capacity::Finite(2));
        assert_eq!(select_max_link(&ch, &empty, &c).link, Link::SingleSr { receiver: 0 });

        let low = cfg(2, 1.0);
        assert!(select_max_link(&ch, &mid, &low).is_outage());
    }

    #[test]
    fn sor_examples() {
        let c = cfg(3, 1000.0);
        // Strong RR: both candidates cancel, reduces to max-min over relays 1 and 2.
        let ch = ChannelState::from_gains(vec![1.0, 0.6, 0.9], vec![1.0, 0.9, 0.5], |_, _| 50.0);
        let d = select_sor(&ch, Some(0), &c);
        assert!(d.ic_applied);
        assert_eq!(d.receiver, Some(1));

        // K = 2: the receiver is forced.
        let two = ChannelState::from_gains(vec![5.0, 0.001], vec![5.0, 5.0], |_, _| 0.001);
        let d2 = select_sor(&two, Some(0), &cfg(2, 1000.0));
        assert_eq!(d2.receiver, Some(1));
        assert!(d2.relay_ok && !d2.source_ok);

        // Non-cancelling candidate scores min(g_SR / g_RR, g_RD) = min(1, g_RD).
        let weak = ChannelState::from_gains(vec![1.0, 0.2, 0.3], vec![1.0, 0.8, 0.9], |_, _| 0.2);
        let d3 = select_sor(&weak, Some(0), &cfg(3, 1.0));
        assert!(!d3.ic_applied);
        assert_eq!(d3.receiver, Some(2));
    }

    #[test]
    fn bound_examples() {
        let c = cfg(2, 100.0);
        let ch = ChannelState::from_gains(vec![0.3, 0.9], vec![0.7, 0.1], |_, _| 1e6);
        let d = select_bound(&ch, &c);
        assert_eq!(d.link, Link::Successive { transmitter: 0, receiver: 1 });
        // IRI ignored: SINR at the receiver equals its SNR despite a huge RR gain.
        assert!(sr_ok(&ch, 1, &c));

        let deep = ChannelState::from_gains(vec![0.01, 0.5], vec![0.01, 0.001], |_, _| 1.0);
        assert_eq!(select_bound(&deep, &c).link, Link::SingleSr { receiver: 1 });
        assert!(select_bound(&ChannelState::uniform(2, 1e-5), &c).is_outage());
    }

    #[test]
    fn policy_names_round_trip() {
        for p in Policy::ALL {
            assert_eq!(p.name().parse::<Policy>().unwrap(), p);
        }
        assert!("best".parse::<Policy>().is_err());
    }
}
