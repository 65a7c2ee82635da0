//! SNR, analytic OOK bit-error rate and a bit-level Monte Carlo estimator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::positive;
use crate::optics::OpticsConfig;

pub const MIN_MC_BITS: u64 = 10_000;
const SHARD_BITS: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// AWGN variance, W.
    pub sigma2: f64,
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        positive("noise.sigma2", self.sigma2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BerMethod {
    Analytic,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerResult {
    pub ber: f64,
    pub snr: f64,
    pub method: BerMethod,
    pub mc_trials: u64,
    pub mc_stderr: f64,
    pub seed: Option<u64>,
}

/// Gaussian tail probability `P(X > x)` for standard normal `X`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

pub fn ook_snr(gain: f64, p_tx: f64, oc: &OpticsConfig, nm: &NoiseModel) -> f64 {
    (oc.responsivity * gain).powi(2) * p_tx / nm.sigma2
}

pub fn ber_from_snr(snr: f64) -> BerResult {
    BerResult {
        ber: q_function(snr.max(0.0).sqrt()),
        snr,
        method: BerMethod::Analytic,
        mc_trials: 0,
        mc_stderr: 0.0,
        seed: None,
    }
}

pub fn ber_ook(gain: f64, p_tx: f64, oc: &OpticsConfig, nm: &NoiseModel) -> BerResult {
    ber_from_snr(ook_snr(gain, p_tx, oc, nm))
}

/// Simulates equiprobable OOK bits through `y = R G x + w`, with on-level
/// `x = 2 sqrt(P)` and the threshold midway between the noiseless levels.
pub fn monte_carlo_ber(
    gain: f64,
    p_tx: f64,
    oc: &OpticsConfig,
    nm: &NoiseModel,
    n_bits: u64,
    seed: u64,
) -> Result<BerResult> {
    nm.validate()?;
    let level = oc.responsivity * gain * 2.0 * p_tx.sqrt();
    let errors = count_errors(level, nm.sigma2.sqrt(), n_bits, seed, Exec::default())?;
    Ok(mc_result(errors, n_bits, ook_snr(gain, p_tx, oc, nm), seed))
}

/// Same detector driven directly by an SNR, in units where `sigma = 1`.
pub fn monte_carlo_ber_snr(snr: f64, n_bits: u64, seed: u64) -> Result<BerResult> {
    monte_carlo_ber_snr_with(snr, n_bits, seed, Exec::default())
}

pub fn monte_carlo_ber_snr_with(snr: f64, n_bits: u64, seed: u64, exec: Exec) -> Result<BerResult> {
    if !(snr >= 0.0) {
        return Err(Error::validation("snr", format!("must be >= 0 (got {snr})")));
    }
    let errors = count_errors(2.0 * snr.sqrt(), 1.0, n_bits, seed, exec)?;
    Ok(mc_result(errors, n_bits, snr, seed))
}

fn mc_result(errors: u64, n_bits: u64, snr: f64, seed: u64) -> BerResult {
    let p = errors as f64 / n_bits as f64;
    BerResult {
        ber: p,
        snr,
        method: BerMethod::MonteCarlo,
        mc_trials: n_bits,
        mc_stderr: (p * (1.0 - p) / n_bits as f64).sqrt(),
        seed: Some(seed),
    }
}

/// Bits are split into fixed-size shards; shard `k` draws from ChaCha8
/// stream `k` of `seed`, so the count does not depend on `exec`.
fn count_errors(level: f64, sigma: f64, n_bits: u64, seed: u64, exec: Exec) -> Result<u64> {
    if n_bits < MIN_MC_BITS {
        return Err(Error::InsufficientTrials { got: n_bits, min: MIN_MC_BITS });
    }
    let shards = n_bits.div_ceil(SHARD_BITS) as usize;
    let threshold = level / 2.0;
    let counts = exec.map(shards, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let bits = SHARD_BITS.min(n_bits - k as u64 * SHARD_BITS);
        let mut errs = 0u64;
        for _ in 0..bits {
            let one: bool = rng.random();
            let w: f64 = rng.sample(StandardNormal);
            let y = if one { level } else { 0.0 } + sigma * w;
            if (y > threshold) != one {
                errs += 1;
            }
        }
        errs
    });
    Ok(counts.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_basics() {
        assert_eq!(q_function(0.0), 0.5);
        assert!((q_function(-1.7) - (1.0 - q_function(1.7))).abs() < 1e-15);
        assert!((q_function(3.0902) - 1.0e-3).abs() < 1e-6);
    }

    #[test]
    fn zero_snr_is_coin_flip() {
        assert_eq!(ber_from_snr(0.0).ber, 0.5);
        assert!((ber_from_snr(9.5493).ber - 1e-3).abs() < 1e-6);
    }

    #[test]
    fn too_few_bits() {
        assert!(matches!(
            monte_carlo_ber_snr(1.0, 9_999, 1),
            Err(Error::InsufficientTrials { got: 9_999, min: 10_000 })
        ));
    }

    #[test]
    fn sharding_is_exec_independent() {
        let a = monte_carlo_ber_snr_with(4.0, 300_001, 9, Exec::Sequential).unwrap();
        let b = monte_carlo_ber_snr_with(4.0, 300_001, 9, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
