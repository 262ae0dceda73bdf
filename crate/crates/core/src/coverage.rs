//! Smoothed Good–Toulmin support-coverage estimation and the support-size
//! reduction built on it.
//!
//! The estimator extrapolates the number of distinct symbols that `m` draws
//! would reveal from a sample of size `n`, by summing the fingerprint with
//! alternating-sign coefficients damped by a Poisson tail:
//!
//! `S_hat = sum_i phi_i (1 + (-t)^i P(Z >= i))`,   `t = (m - n)/n`,  `Z ~ Poisson(r)`.
//!
//! Raw powers of `t` overflow doubles near `i ~ 1000`, so coefficients are
//! assembled in log-magnitude plus sign form. The Poisson smoothing mean `r`
//! comes either from the theory rule `ln(3/alpha)` or from the empirical
//! rule used for benchmark horizons.

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::math;
use crate::privacy::{privatize, PrivacyParams, PrivateEstimate, Provenance, SensitivityBound};
use crate::samples::{Fingerprint, Histogram, SampleSet};

/// How the Poisson smoothing mean is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RMode {
    /// `r = ln(3/alpha)` for a target accuracy `alpha`.
    Theory { alpha: f64 },
    /// `r = (1/2t) ln(n (t+1)^2 / (t-1))`, defined for extrapolation
    /// factors `t > 1`.
    Empirical,
}

/// A chosen smoothing mean, with a flag set when the empirical rule was
/// outside its domain and the `ln 3` fallback was used instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RChoice {
    pub r: f64,
    pub fallback: bool,
}

/// Picks the Poisson smoothing mean for sample size `n` and extrapolation
/// factor `t`.
pub fn choose_r(n: u64, t: f64, mode: RMode) -> Result<RChoice> {
    match mode {
        RMode::Theory { alpha } => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::InvalidParameter { what: "alpha must lie in (0, 1)" });
            }
            Ok(RChoice { r: math::ln(3.0 / alpha), fallback: false })
        }
        RMode::Empirical => {
            if t > 1.0 {
                let r = math::ln(n as f64 * (t + 1.0) * (t + 1.0) / (t - 1.0)) / (2.0 * t);
                Ok(RChoice { r, fallback: false })
            } else {
                // The empirical rule is undefined at t <= 1; fall back to the
                // theory rule at alpha = 1.
                Ok(RChoice { r: math::ln(3.0), fallback: true })
            }
        }
    }
}

/// Estimator parameters for one `(n, m)` extrapolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgtConfig {
    n: u64,
    m: u64,
    t: f64,
    r: f64,
    r_fallback: bool,
}

impl SgtConfig {
    /// Builds a configuration, choosing `r` by the given rule.
    pub fn new(n: u64, m: u64, mode: RMode) -> Result<Self> {
        if n < 1 || m < n {
            return Err(Error::InvalidConfiguration { reason: "need m >= n >= 1" });
        }
        let t = (m - n) as f64 / n as f64;
        let choice = choose_r(n, t, mode)?;
        Ok(SgtConfig { n, m, t, r: choice.r, r_fallback: choice.fallback })
    }

    /// Builds a configuration with an explicit smoothing mean.
    pub fn with_r(n: u64, m: u64, r: f64) -> Result<Self> {
        if n < 1 || m < n {
            return Err(Error::InvalidConfiguration { reason: "need m >= n >= 1" });
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter { what: "smoothing mean r must be positive" });
        }
        let t = (m - n) as f64 / n as f64;
        Ok(SgtConfig { n, m, t, r, r_fallback: false })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// Extrapolation factor `t = (m - n)/n`.
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn r_fallback(&self) -> bool {
        self.r_fallback
    }

    /// The coefficient of `phi_i`: `1 + (-t)^i P(Z >= i)`, assembled in log
    /// space. Bounded by `1 + e^{r(t-1)}` whenever `m >= 2n`.
    pub fn coefficient(&self, i: u64) -> f64 {
        if i == 0 {
            return 2.0; // 1 + P(Z >= 0), never used by the estimator
        }
        if self.t == 0.0 {
            return 1.0;
        }
        let ln_mag = i as f64 * math::ln(self.t) + ln_poisson_tail(self.r, i);
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        1.0 + sign * math::exp(ln_mag)
    }
}

/// A support-coverage estimate and its normalized form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageEstimate {
    /// Estimated number of distinct symbols in `m` draws.
    pub value: f64,
    /// `value / m`.
    pub normalized: f64,
    pub n: u64,
    pub m: u64,
}

/// Upper tail `P(Z >= i)` of a Poisson(`r`) variable, by direct term
/// accumulation with relative truncation at 1e-15.
pub fn poisson_tail(r: f64, i: u64) -> f64 {
    assert!(r > 0.0 && r.is_finite(), "poisson mean must be positive");
    if i == 0 {
        return 1.0;
    }
    // First term e^{-r} r^i / i! in log form, then the ratio recurrence
    // term_{k+1} = term_k * r / (k + 1).
    let ln_first = -r + i as f64 * math::ln(r) - math::ln_factorial(i);
    let mut term = math::exp(ln_first);
    let mut sum = term;
    let mut k = i;
    loop {
        k += 1;
        term *= r / k as f64;
        sum += term;
        if term <= 1e-15 * sum {
            break;
        }
    }
    sum.min(1.0)
}

/// `ln P(Z >= i)`, stable even where the tail underflows a double.
fn ln_poisson_tail(r: f64, i: u64) -> f64 {
    if i == 0 {
        return 0.0;
    }
    if (i as f64) <= r {
        // Tail is at least ~1/2 here; the linear-space value is exact enough.
        return math::ln(poisson_tail(r, i));
    }
    // ln(first term) + ln(1 + r/(i+1) + r^2/((i+1)(i+2)) + ...); the ratio
    // series converges geometrically because r < i + 1.
    let ln_first = -r + i as f64 * math::ln(r) - math::ln_factorial(i);
    let mut series = 1.0f64;
    let mut prod = 1.0f64;
    let mut k = i;
    loop {
        k += 1;
        prod *= r / k as f64;
        series += prod;
        if prod <= 1e-15 * series {
            break;
        }
    }
    ln_first + math::ln(series)
}

/// The smoothed Good–Toulmin estimate of the coverage `S_m` from a sample
/// fingerprint.
pub fn sgt_estimate(fp: &Fingerprint, cfg: &SgtConfig) -> Result<CoverageEstimate> {
    if fp.n() != cfg.n {
        return Err(Error::SampleSizeMismatch { expected: cfg.n, got: fp.n() });
    }
    let mut value = 0.0;
    if cfg.t == 0.0 {
        // Every coefficient collapses to 1: the observed distinct count.
        value = fp.distinct() as f64;
    } else {
        let ln_t = math::ln(cfg.t);
        for (i, phi) in fp.iter_nonzero() {
            let ln_mag = math::ln(phi as f64) + i as f64 * ln_t + ln_poisson_tail(cfg.r, i);
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            value += phi as f64 + sign * math::exp(ln_mag);
        }
    }
    Ok(CoverageEstimate {
        value,
        normalized: value / cfg.m as f64,
        n: cfg.n,
        m: cfg.m,
    })
}

/// Sensitivity of the normalized estimate `S_hat / m`: one replaced sample
/// moves at most two fingerprint entries, each worth at most the maximum
/// coefficient `1 + e^{r(t-1)}`.
pub fn sgt_sensitivity(cfg: &SgtConfig) -> SensitivityBound {
    let delta = 2.0 / cfg.m as f64 * (1.0 + math::exp(cfg.r * (cfg.t - 1.0)));
    SensitivityBound::unchecked(delta, Provenance::Analytic)
}

/// Sensitivity of the unnormalized estimate, `m` times the normalized bound.
pub fn sgt_sensitivity_unnormalized(cfg: &SgtConfig) -> SensitivityBound {
    let delta = 2.0 * (1.0 + math::exp(cfg.r * (cfg.t - 1.0)));
    SensitivityBound::unchecked(delta, Provenance::Analytic)
}

/// Releases the normalized support coverage `S_m / m` under
/// `eps`-differential privacy.
pub fn private_support_coverage<R: RngCore + ?Sized>(
    samples: &SampleSet,
    m: u64,
    eps: PrivacyParams,
    mode: RMode,
    rng: &mut R,
) -> Result<PrivateEstimate> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let cfg = SgtConfig::new(samples.n(), m, mode)?;
    let fp = Fingerprint::from_samples(samples);
    let est = sgt_estimate(&fp, &cfg)?;
    privatize(est.normalized, sgt_sensitivity(&cfg), eps, rng)
}

/// A support-size estimate together with its derivation record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportSizeEstimate {
    /// Final estimate, clamped to `[observed distinct, k]`.
    pub value: f64,
    /// Estimate before clamping (and after noising, if private).
    pub raw_value: f64,
    pub observed_distinct: u64,
    /// Coverage horizon `m = ceil(k ln(3/alpha))` used by the reduction.
    pub m: u64,
    /// Whether the oversampled branch released the noised distinct count
    /// directly instead of extrapolating.
    pub bypass: bool,
    pub noise_scale: f64,
    pub epsilon: Option<f64>,
    pub sensitivity: SensitivityBound,
}

/// Estimates the support size of a distribution promised to have all nonzero
/// probabilities at least `1/k`, by estimating the coverage at horizon
/// `m = ceil(k ln(3/alpha))` with smoothing mean `r = ln(3/alpha)`.
///
/// When the sample is already large (`n > (1/2) k ln(3/alpha)`) the
/// extrapolation is unnecessary: the observed distinct count is released
/// instead, with sensitivity 2 (a replaced sample removes at most one
/// distinct symbol and adds at most one).
pub fn support_size_estimate<R: RngCore + ?Sized>(
    samples: &SampleSet,
    k: u64,
    alpha: f64,
    eps: Option<PrivacyParams>,
    rng: &mut R,
) -> Result<SupportSizeEstimate> {
    if k < 2 {
        return Err(Error::InvalidParameter { what: "support-size estimation needs k >= 2" });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter { what: "alpha must lie in (0, 1)" });
    }
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = samples.n();
    let r = math::ln(3.0 / alpha);
    let m = math::ceil(k as f64 * r) as u64;
    let hist = Histogram::from_samples(samples);
    let observed = hist.distinct();

    let bypass = (n as f64) > 0.5 * k as f64 * r;
    let (sensitivity, noise_scale, epsilon, noised) = if bypass {
        let delta = SensitivityBound::unchecked(2.0, Provenance::Analytic);
        match eps {
            Some(e) => {
                let p = privatize(observed as f64, delta, e, rng)?;
                (delta, p.noise_scale, Some(e.epsilon()), p.value)
            }
            None => (delta, 0.0, None, observed as f64),
        }
    } else {
        let cfg = SgtConfig::with_r(n, m.max(n), r)?;
        let fp = Fingerprint::from_histogram(&hist);
        let est = sgt_estimate(&fp, &cfg)?;
        let delta = sgt_sensitivity_unnormalized(&cfg);
        match eps {
            Some(e) => {
                let p = privatize(est.value, delta, e, rng)?;
                (delta, p.noise_scale, Some(e.epsilon()), p.value)
            }
            None => (delta, 0.0, None, est.value),
        }
    };

    let value = noised.max(observed as f64).min(k as f64);
    Ok(SupportSizeEstimate {
        value,
        raw_value: noised,
        observed_distinct: observed,
        m,
        bypass,
        noise_scale,
        epsilon,
        sensitivity,
    })
}
