//! Laplace mechanism and sensitivity calculus for count-based estimators.
//!
//! Every private operation in this crate reduces to one pattern: compute a
//! statistic, bound how much one changed sample can move it (its
//! sensitivity), and add `Lap(sensitivity / epsilon)` noise. Sensitivities
//! carry a provenance tag so callers can tell an analytic bound from a
//! table scan or from the exhaustive test oracle.

use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::math;
use crate::rng::uniform_f64;
use crate::samples::{Histogram, SampleSet, Symbol};

/// The privacy budget `epsilon > 0`. Infinite epsilon degenerates to the
/// non-private estimator (zero noise).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivacyParams {
    epsilon: f64,
}

impl PrivacyParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon > 0.0 && !epsilon.is_nan() {
            Ok(PrivacyParams { epsilon })
        } else {
            Err(Error::InvalidParameter { what: "epsilon must be > 0" })
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// How a sensitivity value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Closed-form bound.
    Analytic,
    /// Scan over the estimator's full per-count value table.
    TableScan,
    /// Exhaustive enumeration of neighboring datasets (test oracle).
    Exhaustive,
}

/// An upper bound on how far one replaced sample can move an estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityBound {
    delta: f64,
    provenance: Provenance,
}

impl SensitivityBound {
    pub fn new(delta: f64, provenance: Provenance) -> Result<Self> {
        if delta >= 0.0 && delta.is_finite() {
            Ok(SensitivityBound { delta, provenance })
        } else {
            Err(Error::InvalidParameter { what: "sensitivity must be finite and >= 0" })
        }
    }

    pub(crate) fn unchecked(delta: f64, provenance: Provenance) -> Self {
        debug_assert!(delta >= 0.0);
        SensitivityBound { delta, provenance }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }
}

/// A noised estimate together with everything needed to audit it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivateEstimate {
    /// The released value (raw estimate plus Laplace noise).
    pub value: f64,
    /// The estimator output before noising.
    pub raw_value: f64,
    /// Laplace scale `b = delta / epsilon`.
    pub noise_scale: f64,
    pub epsilon: f64,
    pub sensitivity: SensitivityBound,
}

/// One draw from the Laplace distribution with density `(1/2b) e^{-|x|/b}`.
///
/// Inverse-CDF from a single uniform draw, so a seeded generator reproduces
/// the exact noise sequence.
pub fn laplace_noise<R: RngCore + ?Sized>(scale: f64, rng: &mut R) -> Result<f64> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::InvalidScale { scale });
    }
    // u in (0, 1); p = u - 1/2 in (-1/2, 1/2) keeps ln(1 - 2|p|) finite.
    let mut u = uniform_f64(rng);
    while u == 0.0 {
        u = uniform_f64(rng);
    }
    let p = u - 0.5;
    let sign = if p < 0.0 { -1.0 } else { 1.0 };
    Ok(-scale * sign * math::ln_1p(-2.0 * math::abs(p)))
}

/// Log-density of `Lap(center, scale)` at `x`.
pub fn laplace_log_density(x: f64, center: f64, scale: f64) -> f64 {
    -math::abs(x - center) / scale - math::ln(2.0 * scale)
}

/// Releases `value + Lap(delta / epsilon)`. Zero sensitivity (or infinite
/// epsilon) releases the value exactly.
pub fn privatize<R: RngCore + ?Sized>(
    value: f64,
    sensitivity: SensitivityBound,
    eps: PrivacyParams,
    rng: &mut R,
) -> Result<PrivateEstimate> {
    let noise_scale = sensitivity.delta() / eps.epsilon();
    let noise = if noise_scale == 0.0 { 0.0 } else { laplace_noise(noise_scale, rng)? };
    Ok(PrivateEstimate {
        value: value + noise,
        raw_value: value,
        noise_scale,
        epsilon: eps.epsilon(),
        sensitivity,
    })
}

/// Runs an estimator on `batches` disjoint contiguous sample batches, noises
/// each at full `epsilon`, and releases the median.
///
/// One changed sample touches exactly one batch, so the release is
/// epsilon-private by parallel composition; the median damps the failure
/// probability of a single noised batch.
pub fn median_amplify<F, R>(
    estimator: F,
    samples: &SampleSet,
    batches: usize,
    delta_per_batch: SensitivityBound,
    eps: PrivacyParams,
    rng: &mut R,
) -> Result<PrivateEstimate>
where
    F: Fn(&Histogram) -> f64,
    R: RngCore + ?Sized,
{
    if batches == 0 || batches % 2 == 0 {
        return Err(Error::InvalidConfiguration { reason: "batch count must be odd and >= 1" });
    }
    if (batches as u64) > samples.n() {
        return Err(Error::InvalidConfiguration { reason: "batch count exceeds sample size" });
    }
    let batch_size = samples.as_slice().len() / batches;
    let noise_scale = delta_per_batch.delta() / eps.epsilon();

    let mut noised: Vec<(f64, f64)> = Vec::with_capacity(batches);
    for b in 0..batches {
        let chunk = &samples.as_slice()[b * batch_size..(b + 1) * batch_size];
        let raw = estimator(&Histogram::from_symbols(chunk));
        let noise = if noise_scale == 0.0 { 0.0 } else { laplace_noise(noise_scale, rng)? };
        noised.push((raw + noise, raw));
    }
    noised.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (value, raw_value) = noised[batches / 2];
    Ok(PrivateEstimate {
        value,
        raw_value,
        noise_scale,
        epsilon: eps.epsilon(),
        sensitivity: delta_per_batch,
    })
}

/// Sensitivity of an additive estimator `sum_x g(N_x)` from its per-count
/// table `g(0..=n)`: replacing one sample decrements one count and increments
/// another, so the output moves by at most `2 max_j |g(j+1) - g(j)|`.
pub fn additive_sensitivity(table: &[f64]) -> SensitivityBound {
    let mut max_step = 0.0f64;
    for w in table.windows(2) {
        let step = math::abs(w[1] - w[0]);
        if step > max_step {
            max_step = step;
        }
    }
    SensitivityBound::unchecked(2.0 * max_step, Provenance::TableScan)
}

const ORACLE_STATE_LIMIT: u64 = 1_000_000;

/// Exact sensitivity by exhaustive enumeration: the maximum of
/// `|f(X) - f(Y)|` over all dataset pairs in `[k]^n` differing in one
/// position. Test oracle only; refuses when `k^n` exceeds the guard.
pub fn brute_sensitivity_oracle<F>(estimator: F, n: usize, k: usize) -> Result<SensitivityBound>
where
    F: Fn(&SampleSet) -> f64,
{
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter { what: "oracle needs n >= 1 and k >= 1" });
    }
    let states = (k as u64)
        .checked_pow(n as u32)
        .filter(|&s| s <= ORACLE_STATE_LIMIT)
        .ok_or(Error::OracleTooLarge {
            states: (k as f64).powi(n as i32) as u64,
            limit: ORACLE_STATE_LIMIT,
        })?;

    // Evaluate every dataset once, indexed by its base-k encoding.
    let mut values = Vec::with_capacity(states as usize);
    let mut digits = vec![0u32; n];
    for idx in 0..states {
        let mut rest = idx;
        for d in digits.iter_mut() {
            *d = (rest % k as u64) as u32;
            rest /= k as u64;
        }
        let set = SampleSet::new(digits.iter().map(|&d| Symbol(d)).collect());
        values.push(estimator(&set));
    }

    let mut delta = 0.0f64;
    let mut stride = 1u64;
    for _pos in 0..n {
        for idx in 0..states {
            let digit = (idx / stride) % k as u64;
            let base = values[idx as usize];
            for other in 0..k as u64 {
                if other == digit {
                    continue;
                }
                let neighbor = idx + (other as i64 - digit as i64) as u64 * stride;
                let diff = math::abs(base - values[neighbor as usize]);
                if diff > delta {
                    delta = diff;
                }
            }
        }
        stride *= k as u64;
    }
    Ok(SensitivityBound::unchecked(delta, Provenance::Exhaustive))
}
