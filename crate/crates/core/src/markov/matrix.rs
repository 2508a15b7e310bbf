use crate::error::{Error, Result};
use crate::markov::space::{count_links, StateSpace};
use crate::model::{Capacity, NetworkConfig};
use crate::quad;

/// Dense row-stochastic transition matrix, `A[i][j] = P(s_i -> s_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    dim: usize,
    data: Vec<f64>,
    space: Option<StateSpace>,
}

impl TransitionMatrix {
    /// Wraps an explicit square matrix given by rows.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Config("transition matrix must be square".into()));
        }
        Ok(Self { dim, data: rows.into_iter().flatten().collect(), space: None })
    }

    fn zeros(space: StateSpace) -> Self {
        let dim = space.len();
        Self { dim, data: vec![0.0; dim * dim], space: Some(space) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn space(&self) -> Option<&StateSpace> {
        self.space.as_ref()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// Nonzero entries of row `i` as `(column, probability)`.
    pub fn support(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.row(i).iter().copied().enumerate().filter(|&(_, p)| p > 0.0)
    }

    pub fn max_row_sum_deviation(&self) -> f64 {
        (0..self.dim).map(|i| (self.row(i).iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// How the per-state transition probabilities are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    /// Closed-form single-link and successive probabilities at a common
    /// nominal power, rescaled per row to be stochastic.
    ClosedForm,
    /// Per-slot link-state model of the min-power protocol.
    Protocol,
}

pub fn build_matrix(cfg: &NetworkConfig, power: f64, construction: Construction) -> Result<TransitionMatrix> {
    match construction {
        Construction::ClosedForm => build_matrix_closed_form(cfg, power),
        Construction::Protocol => build_matrix_protocol(cfg, power),
    }
}

fn finite_space(cfg: &NetworkConfig) -> Result<StateSpace> {
    cfg.validate()?;
    match cfg.capacity {
        Capacity::Finite(l) => StateSpace::new(cfg.relays, l),
        Capacity::Unbounded => Err(Error::UnboundedCapacity),
    }
}

fn check_power(power: f64) -> Result<()> {
    if power > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("nominal power must be positive, got {power}")))
    }
}

/// Transition targets reachable from `levels`, in a fixed order.
struct Targets {
    /// `(relay, target)` for source -> relay links.
    sr: Vec<(usize, usize)>,
    /// `(relay, target)` for relay -> destination links.
    rd: Vec<(usize, usize)>,
    /// `(transmitter, receiver, target)`.
    pairs: Vec<(usize, usize, usize)>,
}

fn targets(space: &StateSpace, levels: &[u32]) -> Targets {
    let l = space.capacity();
    let k = levels.len();
    let mut buf = levels.to_vec();
    let mut moved = |delta: &[(usize, i64)]| {
        for &(i, d) in delta {
            buf[i] = (buf[i] as i64 + d) as u32;
        }
        let idx = space.index(&buf).expect("neighbour inside the state space");
        for &(i, d) in delta {
            buf[i] = (buf[i] as i64 - d) as u32;
        }
        idx
    };
    let sr = (0..k).filter(|&r| levels[r] < l).map(|r| (r, moved(&[(r, 1)]))).collect();
    let rd = (0..k).filter(|&t| levels[t] > 0).map(|t| (t, moved(&[(t, -1)]))).collect();
    let mut pairs = Vec::new();
    for t in (0..k).filter(|&t| levels[t] > 0) {
        for r in (0..k).filter(|&r| r != t && levels[r] < l) {
            pairs.push((t, r, moved(&[(t, -1), (r, 1)])));
        }
    }
    Targets { sr, rd, pairs }
}

/// Closed-form construction at nominal transmit SNR `power` (unit-mean
/// gains, unit noise). Every single-link target gets
/// `(1 - q^Dns) / n`, every successive target `(1 - q^(2 Ds)) / (N - n)`
/// with `q = 1 - exp(-(2^(2 r0) - 1) / power)`. The two outage terms
/// `n/N q^Dns + (N-n)/N q^(2 Ds)` form the diagonal and the off-diagonal
/// mass is rescaled so that the row sums to one.
pub fn build_matrix_closed_form(cfg: &NetworkConfig, power: f64) -> Result<TransitionMatrix> {
    check_power(power)?;
    let space = finite_space(cfg)?;
    let q = -(-cfg.capture_ratio / power).exp_m1();
    let mut a = TransitionMatrix::zeros(space.clone());
    for (i, levels) in space.iter().enumerate() {
        let counts = count_links(levels, space.capacity());
        let tg = targets(&space, levels);
        let (n, ns) = (counts.single as f64, counts.successive as f64);
        let total = n + ns;
        let single_ok = 1.0 - q.powi(counts.single as i32);
        let pair_ok = 1.0 - q.powi(2 * counts.successive as i32);
        let mut outage = n / total * q.powi(counts.single as i32);
        if counts.successive > 0 {
            outage += ns / total * q.powi(2 * counts.successive as i32);
        }

        let row = a.row_mut(i);
        for &(_, j) in tg.sr.iter().chain(tg.rd.iter()) {
            row[j] += single_ok / n;
        }
        for &(_, _, j) in &tg.pairs {
            row[j] += pair_ok / ns;
        }
        let off: f64 = row.iter().sum();
        if off > 0.0 {
            let scale = (1.0 - outage) / off;
            row.iter_mut().for_each(|p| *p *= scale);
            let rest: f64 = row.iter().sum();
            row[i] = (1.0 - rest).max(0.0);
        } else {
            row[i] = 1.0;
        }
    }
    Ok(a)
}

/// Per-link quantities shared by every state of the protocol model.
#[derive(Debug, Clone)]
pub struct LinkModel {
    /// P(source -> relay link clears the capture ratio at full power).
    pub sr_up: f64,
    /// P(relay -> destination link clears the capture ratio at full power).
    pub rd_up: f64,
    /// P(successive pair infeasible | both of its hops are up).
    pub pair_blocked: f64,
    relays: usize,
    /// `win_sr[a * (K+1) + b]`: P(a given up SR link needs the least power
    /// among `a` up SR links and `b` up RD links).
    win_sr: Vec<f64>,
    win_rd: Vec<f64>,
}

impl LinkModel {
    pub fn new(cfg: &NetworkConfig) -> Result<Self> {
        cfg.validate()?;
        let n_r = cfg.relay_noise[0];
        if cfg.relay_noise.iter().any(|&n| n != n_r) {
            return Err(Error::Config("the protocol chain needs a common relay noise level".into()));
        }
        let g0 = cfg.capture_ratio;
        let n_d = cfg.destination_noise;
        let (ps, pr) = (cfg.source_power_max, cfg.relay_power_max);
        let (mu_sr, mu_rd, mu_rr) = (cfg.mean_gain_sr, cfg.mean_gain_rd, cfg.mean_gain_rr);

        let tau_s = g0 * n_r / ps;
        let tau_r = g0 * n_d / pr;
        let sr_up = (-tau_s / mu_sr).exp();
        let rd_up = (-tau_r / mu_rd).exp();

        // Given both hops up, the pair fails iff cancellation is ruled out
        // (g_RR below a g_RD-dependent threshold) and the no-cancellation
        // source power exceeds its cap. The source excess over its threshold
        // is exponential, so only g_RD and g_RR are integrated.
        let blocked_at = |g_rd: f64| -> f64 {
            let slack = pr - g0.powi(3) * n_d / g_rd;
            let theta = if slack > 0.0 { g0 * (g0 + 1.0) * n_r / slack } else { f64::INFINITY };
            let beta = g0 * g0 * n_d / (g_rd * ps * mu_sr);
            let not_ic = -(-theta / mu_rr).exp_m1();
            let rate = 1.0 / mu_rr + beta;
            not_ic - (-(-theta * rate).exp_m1()) / (1.0 + beta * mu_rr)
        };
        let pair_blocked = quad::integrate(|v: f64| blocked_at(tau_r - mu_rd * (-v).ln_1p()), 0.0, 1.0 - 1e-15, 1e-12)
            .clamp(0.0, 1.0);

        // Required power is g0 n / g; for an up link g = tau + Exp(mu), so
        // g / n is a shifted exponential with shift g0 / cap.
        let (shift_s, rate_s) = (g0 / ps, n_r / mu_sr);
        let (shift_r, rate_r) = (g0 / pr, n_d / mu_rd);
        let cdf = |x: f64, shift: f64, rate: f64| if x > shift { -(-(x - shift) * rate).exp_m1() } else { 0.0 };
        let k = cfg.relays;
        let side = k + 1;
        let mut win_sr = vec![0.0; side * side];
        let mut win_rd = vec![0.0; side * side];
        for a in 0..=k {
            for b in 0..=k {
                if a > 0 {
                    win_sr[a * side + b] = if b == 0 || shift_s == shift_r && rate_s == rate_r {
                        1.0 / (a + b) as f64
                    } else {
                        quad::integrate(
                            |v: f64| v.powi(a as i32 - 1) * cdf(shift_s - (-v).ln_1p() / rate_s, shift_r, rate_r).powi(b as i32),
                            0.0,
                            1.0 - 1e-15,
                            1e-12,
                        )
                    };
                }
                if b > 0 {
                    win_rd[a * side + b] = (1.0 - a as f64 * win_sr[a * side + b]) / b as f64;
                }
            }
        }
        Ok(Self { sr_up, rd_up, pair_blocked, relays: k, win_sr, win_rd })
    }

    pub fn win_sr(&self, up_sr: usize, up_rd: usize) -> f64 {
        self.win_sr[up_sr * (self.relays + 1) + up_rd]
    }

    pub fn win_rd(&self, up_sr: usize, up_rd: usize) -> f64 {
        self.win_rd[up_sr * (self.relays + 1) + up_rd]
    }
}

/// Link-state model of the min-power protocol with both power caps at
/// `power`. Each eligible link is independently up with its full-power
/// success probability. A successive pair is available when both of its hops
/// are up and it survives inter-relay interference; available pairs are
/// used with equal probability. Otherwise the cheapest up single link is
/// used, and with no link up the state is unchanged.
pub fn build_matrix_protocol(cfg: &NetworkConfig, power: f64) -> Result<TransitionMatrix> {
    check_power(power)?;
    let cfg = cfg.clone().with_power(power);
    let space = finite_space(&cfg)?;
    let model = LinkModel::new(&cfg)?;
    let mut a = TransitionMatrix::zeros(space.clone());

    let mut up_sr = Vec::with_capacity(cfg.relays);
    let mut up_rd = Vec::with_capacity(cfg.relays);
    for (i, levels) in space.iter().enumerate() {
        let tg = targets(&space, levels);
        let row = a.row_mut(i);
        let (ns, nr) = (tg.sr.len(), tg.rd.len());
        for sr_mask in 0u32..(1 << ns) {
            up_sr.clear();
            up_sr.extend((0..ns).filter(|b| sr_mask >> b & 1 == 1).map(|b| tg.sr[b]));
            let p_sr = model.sr_up.powi(up_sr.len() as i32) * (1.0 - model.sr_up).powi((ns - up_sr.len()) as i32);
            for rd_mask in 0u32..(1 << nr) {
                up_rd.clear();
                up_rd.extend((0..nr).filter(|b| rd_mask >> b & 1 == 1).map(|b| tg.rd[b]));
                let p = p_sr * model.rd_up.powi(up_rd.len() as i32) * (1.0 - model.rd_up).powi((nr - up_rd.len()) as i32);
                if p == 0.0 {
                    continue;
                }
                if up_sr.is_empty() && up_rd.is_empty() {
                    row[i] += p;
                    continue;
                }
                let candidates = tg
                    .pairs
                    .iter()
                    .filter(|&&(t, r, _)| up_rd.iter().any(|&(k, _)| k == t) && up_sr.iter().any(|&(k, _)| k == r));
                let m = candidates.clone().count();
                let all_blocked = model.pair_blocked.powi(m as i32);
                if m > 0 {
                    let each = p * (1.0 - all_blocked) / m as f64;
                    for &(_, _, j) in candidates {
                        row[j] += each;
                    }
                }
                let fallback = p * all_blocked;
                let (a_up, b_up) = (up_sr.len(), up_rd.len());
                for &(_, j) in &up_sr {
                    row[j] += fallback * model.win_sr(a_up, b_up);
                }
                for &(_, j) in &up_rd {
                    row[j] += fallback * model.win_rd(a_up, b_up);
                }
            }
        }
    }
    Ok(a)
}
