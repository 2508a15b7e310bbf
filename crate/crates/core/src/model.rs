//! Physical-layer model: network configuration, block-fading channel
//! realizations, relay buffers and the SINR capture test.

use rand::Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// SINR threshold that supports `rate` bits per channel use over the
/// two-hop link: `2^(2 r0) - 1`.
pub fn derive_capture_ratio(rate: f64) -> Result<f64> {
    if rate.is_nan() || rate <= 0.0 || !rate.is_finite() {
        return Err(Error::Config(format!("rate must be positive, got {rate}")));
    }
    Ok(2f64.powf(2.0 * rate) - 1.0)
}

/// Relay buffer capacity in packets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Capacity {
    Finite(u32),
    Unbounded,
}

impl Capacity {
    pub fn finite(self) -> Option<u32> {
        match self {
            Capacity::Finite(l) => Some(l),
            Capacity::Unbounded => None,
        }
    }
}

impl std::fmt::Display for Capacity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Capacity::Finite(l) => write!(f, "{l}"),
            Capacity::Unbounded => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub relays: usize,
    pub capacity: Capacity,
    /// Target spectral efficiency `r0` in bits per channel use.
    pub rate: f64,
    /// Capture ratio `gamma0` (linear).
    pub capture_ratio: f64,
    pub source_power_max: f64,
    pub relay_power_max: f64,
    /// Receiver noise at each relay.
    pub relay_noise: Vec<f64>,
    pub destination_noise: f64,
    pub mean_gain_sr: f64,
    pub mean_gain_rd: f64,
    pub mean_gain_rr: f64,
}

impl NetworkConfig {
    /// Unit noise and unit mean gains everywhere; both power caps equal to
    /// the transmit SNR `snr_db`.
    pub fn new(relays: usize, capacity: Capacity, rate: f64, snr_db: f64) -> Result<Self> {
        let power = db_to_linear(snr_db);
        let cfg = Self {
            relays,
            capacity,
            rate,
            capture_ratio: derive_capture_ratio(rate)?,
            source_power_max: power,
            relay_power_max: power,
            relay_noise: vec![1.0; relays],
            destination_noise: 1.0,
            mean_gain_sr: 1.0,
            mean_gain_rd: 1.0,
            mean_gain_rr: 1.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Sets both power caps to `power` (linear).
    pub fn with_power(mut self, power: f64) -> Self {
        self.source_power_max = power;
        self.relay_power_max = power;
        self
    }

    pub fn with_snr_db(self, snr_db: f64) -> Self {
        self.with_power(db_to_linear(snr_db))
    }

    pub fn validate(&self) -> Result<()> {
        if self.relays == 0 {
            return Err(Error::Config("at least one relay is required".into()));
        }
        if self.capacity == Capacity::Finite(0) {
            return Err(Error::Config("buffer capacity must be positive".into()));
        }
        if self.relay_noise.len() != self.relays {
            return Err(Error::Config(format!(
                "expected {} relay noise values, got {}",
                self.relays,
                self.relay_noise.len()
            )));
        }
        let positives = [
            ("rate", self.rate),
            ("capture ratio", self.capture_ratio),
            ("source power", self.source_power_max),
            ("relay power", self.relay_power_max),
            ("destination noise", self.destination_noise),
            ("mean SR gain", self.mean_gain_sr),
            ("mean RD gain", self.mean_gain_rd),
            ("mean RR gain", self.mean_gain_rr),
        ];
        for (name, v) in positives.into_iter().chain(self.relay_noise.iter().map(|&n| ("relay noise", n))) {
            // Power caps may be +inf (uncapped), everything else must be finite.
            if v.is_nan() || v <= 0.0 || (v.is_infinite() && !name.ends_with("power")) {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }
}

/// One block-fading realization of every link power gain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelState {
    relays: usize,
    sr: Vec<f64>,
    rd: Vec<f64>,
    /// Row-major `relays x relays`, transmitter first; diagonal unused (0).
    rr: Vec<f64>,
}

impl ChannelState {
    pub fn zeros(relays: usize) -> Self {
        Self {
            relays,
            sr: vec![0.0; relays],
            rd: vec![0.0; relays],
            rr: vec![0.0; relays * relays],
        }
    }

    /// Builds a realization from explicit gains; `rr(t, r)` is queried for
    /// every `t != r`.
    pub fn from_gains(sr: Vec<f64>, rd: Vec<f64>, rr: impl Fn(usize, usize) -> f64) -> Self {
        assert_eq!(sr.len(), rd.len(), "SR and RD gain vectors differ in length");
        let relays = sr.len();
        let mut out = Self { relays, sr, rd, rr: vec![0.0; relays * relays] };
        for t in 0..relays {
            for r in 0..relays {
                if t != r {
                    out.rr[t * relays + r] = rr(t, r);
                }
            }
        }
        out
    }

    /// Every link has gain `g`.
    pub fn uniform(relays: usize, g: f64) -> Self {
        Self::from_gains(vec![g; relays], vec![g; relays], |_, _| g)
    }

    pub fn relays(&self) -> usize {
        self.relays
    }

    pub fn sr(&self, k: usize) -> f64 {
        self.sr[k]
    }

    pub fn rd(&self, k: usize) -> f64 {
        self.rd[k]
    }

    pub fn rr(&self, t: usize, r: usize) -> f64 {
        debug_assert_ne!(t, r);
        self.rr[t * self.relays + r]
    }

    pub fn set_sr(&mut self, k: usize, g: f64) {
        self.sr[k] = g;
    }

    pub fn set_rd(&mut self, k: usize, g: f64) {
        self.rd[k] = g;
    }

    pub fn set_rr(&mut self, t: usize, r: usize, g: f64) {
        assert_ne!(t, r);
        self.rr[t * self.relays + r] = g;
    }

    /// Multiplies every gain by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.sr.iter_mut().chain(out.rd.iter_mut()).chain(out.rr.iter_mut()).for_each(|g| *g *= c);
        out
    }

    /// Overwrites this realization with a fresh independent draw.
    pub fn redraw<R: Rng + ?Sized>(&mut self, cfg: &NetworkConfig, rng: &mut R) {
        debug_assert_eq!(self.relays, cfg.relays);
        let k = self.relays;
        for i in 0..k {
            self.sr[i] = cfg.mean_gain_sr * rng.sample::<f64, _>(Exp1);
            self.rd[i] = cfg.mean_gain_rd * rng.sample::<f64, _>(Exp1);
        }
        for t in 0..k {
            for r in 0..k {
                if t != r {
                    self.rr[t * k + r] = cfg.mean_gain_rr * rng.sample::<f64, _>(Exp1);
                }
            }
        }
    }
}

/// Draws one realization: every gain exponential with its class mean,
/// independent of every other link and of previous slots.
pub fn draw_channels<R: Rng + ?Sized>(cfg: &NetworkConfig, rng: &mut R) -> ChannelState {
    let mut ch = ChannelState::zeros(cfg.relays);
    ch.redraw(cfg, rng);
    ch
}

/// Per-relay queue occupancies.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BufferState {
    levels: Vec<u32>,
    capacity: Capacity,
}

impl BufferState {
    pub fn empty(relays: usize, capacity: Capacity) -> Self {
        Self { levels: vec![0; relays], capacity }
    }

    pub fn from_levels(levels: Vec<u32>, capacity: Capacity) -> Result<Self> {
        if let Capacity::Finite(l) = capacity {
            if let Some(&bad) = levels.iter().find(|&&x| x > l) {
                return Err(Error::Config(format!("occupancy {bad} exceeds capacity {l}")));
            }
        }
        Ok(Self { levels, capacity })
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn relays(&self) -> usize {
        self.levels.len()
    }

    pub fn capacity(&self) -> Capacity {
        self.capacity
    }

    /// Member of the transmitter set: holds at least one packet.
    pub fn can_transmit(&self, k: usize) -> bool {
        self.levels[k] > 0
    }

    /// Member of the receiver set: has room for another packet.
    pub fn can_receive(&self, k: usize) -> bool {
        match self.capacity {
            Capacity::Finite(l) => self.levels[k] < l,
            Capacity::Unbounded => true,
        }
    }

    pub fn transmitters(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.levels.len()).filter(|&k| self.can_transmit(k))
    }

    pub fn receivers(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.levels.len()).filter(|&k| self.can_receive(k))
    }

    pub fn total(&self) -> u64 {
        self.levels.iter().map(|&l| l as u64).sum()
    }

    /// Stores a packet at relay `k`. Panics if the buffer is full.
    pub fn push(&mut self, k: usize) {
        assert!(self.can_receive(k), "relay {k} buffer is full");
        self.levels[k] += 1;
    }

    /// Removes a packet from relay `k`. Panics if the buffer is empty.
    pub fn pop(&mut self, k: usize) {
        assert!(self.can_transmit(k), "relay {k} buffer is empty");
        self.levels[k] -= 1;
    }
}

/// `g P / (sum_j g_j P_j + n)`.
pub fn sinr(signal_gain: f64, signal_power: f64, interferers: &[(f64, f64)], noise: f64) -> f64 {
    let interference: f64 = interferers.iter().map(|&(g, p)| g * p).sum();
    signal_gain * signal_power / (interference + noise)
}

/// Capture test; equality counts as success.
pub fn decodable(sinr_value: f64, capture_ratio: f64) -> bool {
    sinr_value >= capture_ratio
}
