use crate::error::{Error, Result};
use crate::markov::matrix::build_matrix_protocol;
use crate::markov::solve::{outage_analytic, steady_state};
use crate::model::{derive_capture_ratio, Capacity, NetworkConfig};

/// High-SNR outage of the min-power chain with large buffers:
/// `2K / (K(K+1)) * q^(2K)` with `q = 1 - exp(-(2^(2 r0) - 1) / P)`.
pub fn asymptotic_outage(relays: usize, rate: f64, power: f64) -> Result<f64> {
    ln_asymptotic_outage(relays, rate, power).map(f64::exp)
}

fn ln_asymptotic_outage(relays: usize, rate: f64, power: f64) -> Result<f64> {
    if relays == 0 || power.is_nan() || power <= 0.0 {
        return Err(Error::Config("asymptotic outage needs relays > 0 and positive power".into()));
    }
    let ln_q = (-(-derive_capture_ratio(rate)? / power).exp_m1()).ln();
    let k = relays as f64;
    Ok((2.0 / (k + 1.0)).ln() + 2.0 * k * ln_q)
}

/// `-(log P_out(high) - log P_out(low)) / (log high - log low)`.
pub fn slope(power_low: f64, outage_low: f64, power_high: f64, outage_high: f64) -> f64 {
    -(outage_high.ln() - outage_low.ln()) / (power_high.ln() - power_low.ln())
}

/// Closed-form asymptotic slope between two powers.
pub fn asymptotic_slope(relays: usize, rate: f64, power_low: f64, power_high: f64) -> Result<f64> {
    check_range(power_low, power_high)?;
    let lo = ln_asymptotic_outage(relays, rate, power_low)?;
    let hi = ln_asymptotic_outage(relays, rate, power_high)?;
    Ok(-(hi - lo) / (power_high.ln() - power_low.ln()))
}

/// Log-log outage slope of the protocol chain between two powers. Falls
/// back to the closed-form asymptotic when the chain cannot be built or an
/// outage value underflows.
pub fn diversity_slope(cfg: &NetworkConfig, power_low: f64, power_high: f64) -> Result<f64> {
    check_range(power_low, power_high)?;
    let chain = |p: f64| -> Option<f64> {
        let a = build_matrix_protocol(cfg, p).ok()?;
        let pi = steady_state(&a).ok()?;
        Some(outage_analytic(&a, &pi)).filter(|&o| o > f64::MIN_POSITIVE)
    };
    if matches!(cfg.capacity, Capacity::Finite(_)) {
        if let (Some(lo), Some(hi)) = (chain(power_low), chain(power_high)) {
            return Ok(slope(power_low, lo, power_high, hi));
        }
    }
    asymptotic_slope(cfg.relays, cfg.rate, power_low, power_high)
}

fn check_range(power_low: f64, power_high: f64) -> Result<()> {
    if power_low > 0.0 && power_high > power_low {
        Ok(())
    } else {
        Err(Error::Config(format!("need 0 < low < high, got {power_low} and {power_high}")))
    }
}
