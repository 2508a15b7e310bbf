#![allow(dead_code)]

use relaysel::markov::TransitionMatrix;
use relaysel::model::{ChannelState, NetworkConfig};
use relaysel::policies::ic_feasibility_check;

/// Stationary distribution by repeated `pi <- pi A` from the uniform vector,
/// on the sparse support of `A`.
pub fn power_iteration(a: &TransitionMatrix, max_steps: usize) -> Vec<f64> {
    let n = a.dim();
    let rows: Vec<Vec<(usize, f64)>> = (0..n).map(|i| a.support(i).collect()).collect();
    let mut pi = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    for _ in 0..max_steps {
        next.iter_mut().for_each(|x| *x = 0.0);
        for (i, row) in rows.iter().enumerate() {
            let p = pi[i];
            for &(j, x) in row {
                next[j] += p * x;
            }
        }
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= total);
        let change = pi.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        std::mem::swap(&mut pi, &mut next);
        if change < 1e-16 {
            break;
        }
    }
    pi
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Whether `(ps, pr)` lets the destination decode relay `t` and relay `r`
/// decode the source, using cancellation only where the feasibility check
/// admits it.
pub fn pair_point_feasible(ch: &ChannelState, t: usize, r: usize, cfg: &NetworkConfig, ps: f64, pr: f64) -> bool {
    let g0 = cfg.capture_ratio;
    let n_r = cfg.relay_noise[r];
    if ps > cfg.source_power_max || pr > cfg.relay_power_max {
        return false;
    }
    if ch.rd(t) * pr < g0 * cfg.destination_noise {
        return false;
    }
    let (g_sr, g_rr) = (ch.sr(r), ch.rr(t, r));
    let plain = g_sr * ps >= g0 * (g_rr * pr + n_r);
    let cancelled = ic_feasibility_check(ch, t, r, cfg) && g_rr * pr >= g0 * (g_sr * ps + n_r) && g_sr * ps >= g0 * n_r;
    plain || cancelled
}

/// Smallest `ps + pr` over the grid `{0, step, 2 step, ..}^2` inside
/// `[0, bound]^2`, searching only sums below `below`.
pub fn grid_min_sum(
    ch: &ChannelState,
    t: usize,
    r: usize,
    cfg: &NetworkConfig,
    bound: f64,
    step: f64,
    below: f64,
) -> Option<f64> {
    let n = (bound / step).round() as usize;
    let mut best: Option<f64> = None;
    for i in 0..=n {
        let ps = i as f64 * step;
        if ps >= below {
            break;
        }
        for j in 0..=n {
            let pr = j as f64 * step;
            if ps + pr >= below || best.is_some_and(|b| ps + pr >= b) {
                break;
            }
            if pair_point_feasible(ch, t, r, cfg, ps, pr) {
                best = Some(ps + pr);
                break;
            }
        }
    }
    best
}
