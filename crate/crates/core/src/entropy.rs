//! Entropy estimators and their private versions.
//!
//! Three non-private estimators, all additive over per-count tables and
//! therefore functions of the fingerprint alone:
//!
//! * plug-in: the entropy of the empirical distribution,
//! * Miller–Madow: plug-in plus the `(K-1)/(2n)` first-order bias correction,
//! * polynomial: small counts contribute an unbiased falling-factorial
//!   estimate of a low-degree polynomial approximation of `x ln(1/x)`,
//!   large counts a bias-corrected plug-in term.
//!
//! The polynomial branch exists because it trades a little bias for a much
//! smaller per-count sensitivity, which is what the Laplace noise scale is
//! calibrated to. Values are nats throughout.

use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::math;
use crate::privacy::{privatize, PrivacyParams, PrivateEstimate, Provenance, SensitivityBound};
use crate::privacy::additive_sensitivity;
use crate::samples::{Fingerprint, Histogram};

/// Which estimator produced an [`EntropyEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyMethod {
    PlugIn,
    MillerMadow,
    Poly,
}

/// A non-private entropy estimate in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEstimate {
    pub value: f64,
    pub method: EntropyMethod,
    pub n: u64,
}

/// Threshold rule: counts up to `ceil(THRESHOLD_LOG_FACTOR * ln n)` take the
/// polynomial branch.
pub const THRESHOLD_LOG_FACTOR: f64 = 2.0;
/// The approximation interval extends to `INTERVAL_WIDTH_FACTOR * T / n`, so
/// counts near the threshold still sit well inside it.
pub const INTERVAL_WIDTH_FACTOR: f64 = 4.0;
/// Default multiplier in the degree rule `L = round(mult * ln k)`.
pub const DEFAULT_DEGREE_MULTIPLIER: f64 = 1.2;

/// Configuration of the polynomial estimator for one `(k, n)` pair.
///
/// `coeffs[l]` is the monomial coefficient of `z^l` where `z = x /
/// interval_hi` rescales the approximation interval `[0, interval_hi]` to
/// `[0, 1]`; the rescaling keeps the falling-factorial evaluation of the
/// per-count table numerically tame.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyConfig {
    /// Polynomial degree `L`.
    pub degree: usize,
    /// Multiplier used by the degree rule.
    pub degree_multiplier: f64,
    /// Counts `<= threshold` use the polynomial branch.
    pub threshold: u64,
    /// Upper end of the approximation interval for `x ln(1/x)`.
    pub interval_hi: f64,
    /// Monomial coefficients in the rescaled variable `z`.
    pub coeffs: Vec<f64>,
    /// Measured uniform approximation error over a dense grid.
    pub approx_error: f64,
    /// Sensitivity trade-off exponent; the sanity target is `n^lambda / n`.
    pub lambda: f64,
    /// Sample size this configuration was built for.
    pub n: u64,
    /// Alphabet size this configuration was built for.
    pub k: u64,
}

/// Entropy of the empirical distribution, `sum_x (N_x/n) ln(n/N_x)`.
pub fn empirical_entropy(hist: &Histogram) -> Result<EntropyEstimate> {
    if hist.n() == 0 {
        return Err(Error::EmptySample);
    }
    let fp = Fingerprint::from_histogram(hist);
    let n = fp.n() as f64;
    let value = fp
        .iter_nonzero()
        .map(|(i, phi)| phi as f64 * plugin_term(i, n))
        .sum();
    Ok(EntropyEstimate { value, method: EntropyMethod::PlugIn, n: hist.n() })
}

#[inline]
fn plugin_term(count: u64, n: f64) -> f64 {
    let p = count as f64 / n;
    -p * math::ln(p)
}

/// Analytic sensitivity of the plug-in estimator: replacing one sample moves
/// two counts by one, each worth at most `max(1/n, ln(n)/n)`.
pub fn empirical_entropy_sensitivity(n: u64) -> Result<SensitivityBound> {
    if n < 2 {
        return Err(Error::InvalidParameter { what: "plug-in sensitivity needs n >= 2" });
    }
    let nf = n as f64;
    let delta = 2.0 * (1.0 / nf).max(math::ln(nf) / nf);
    Ok(SensitivityBound::unchecked(delta, Provenance::Analytic))
}

/// Plug-in estimate plus the `(K - 1)/(2n)` bias correction, where `K` is
/// the observed distinct count.
pub fn miller_madow(hist: &Histogram) -> Result<EntropyEstimate> {
    let plug = empirical_entropy(hist)?;
    let correction = (hist.distinct() as f64 - 1.0) / (2.0 * hist.n() as f64);
    Ok(EntropyEstimate {
        value: plug.value + correction,
        method: EntropyMethod::MillerMadow,
        n: hist.n(),
    })
}

/// Builds the polynomial-estimator configuration for alphabet size `k` and
/// sample size `n`.
///
/// Degree rule `L = max(1, round(degree_multiplier * ln k))`; threshold
/// `T = ceil(2 ln n)`; coefficients from Chebyshev interpolation of
/// `x ln(1/x)` on `[0, 4T/n]`, with the realized uniform error measured on a
/// dense grid and recorded in the configuration.
pub fn build_poly_config(k: u64, n: u64, degree_multiplier: f64, lambda: f64) -> Result<PolyConfig> {
    if k < 2 || n < 2 {
        return Err(Error::InvalidParameter { what: "polynomial estimator needs k >= 2 and n >= 2" });
    }
    if !(degree_multiplier > 0.0) || !degree_multiplier.is_finite() {
        return Err(Error::InvalidParameter { what: "degree multiplier must be positive" });
    }
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidParameter { what: "lambda must lie in (0, 1]" });
    }
    let degree = (math::round(degree_multiplier * math::ln(k as f64)) as i64).max(1) as usize;
    let threshold = math::ceil(THRESHOLD_LOG_FACTOR * math::ln(n as f64)) as u64;
    let interval_hi = INTERVAL_WIDTH_FACTOR * threshold as f64 / n as f64;

    let phi = |x: f64| if x > 0.0 { -x * math::ln(x) } else { 0.0 };
    let coeffs = chebyshev_monomial_fit(degree, interval_hi, phi);

    // Realized uniform error of the interpolant, endpoint to endpoint.
    let grid = 10_000;
    let mut approx_error = 0.0f64;
    for g in 0..=grid {
        let x = interval_hi * g as f64 / grid as f64;
        let err = math::abs(eval_monomial(&coeffs, x / interval_hi) - phi(x));
        if err > approx_error {
            approx_error = err;
        }
    }

    Ok(PolyConfig {
        degree,
        degree_multiplier,
        threshold,
        interval_hi,
        coeffs,
        approx_error,
        lambda,
        n,
        k,
    })
}

/// Interpolates `f` at the `degree + 1` Chebyshev nodes mapped onto
/// `[0, hi]` and returns monomial coefficients in `z = x / hi`.
fn chebyshev_monomial_fit<F: Fn(f64) -> f64>(degree: usize, hi: f64, f: F) -> Vec<f64> {
    let terms = degree + 1;
    let nf = terms as f64;
    let pi = core::f64::consts::PI;

    // Values at the Chebyshev points of the first kind.
    let mut fvals = Vec::with_capacity(terms);
    for j in 0..terms {
        let u = math::cos(pi * (j as f64 + 0.5) / nf);
        let z = 0.5 * (u + 1.0);
        fvals.push(f(hi * z));
    }

    // Chebyshev-basis coefficients via the discrete cosine sum.
    let mut cheb = vec![0.0f64; terms];
    for (m, c) in cheb.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, fv) in fvals.iter().enumerate() {
            acc += fv * math::cos(pi * m as f64 * (j as f64 + 0.5) / nf);
        }
        *c = 2.0 * acc / nf;
    }
    cheb[0] *= 0.5;

    // Accumulate T_m(2z - 1) in the monomial basis via the recurrence.
    let mut coeffs = vec![0.0f64; terms];
    let mut t_prev = vec![0.0f64; terms]; // T_0 = 1
    t_prev[0] = 1.0;
    let mut t_curr = vec![0.0f64; terms]; // T_1 = 2z - 1
    if terms > 1 {
        t_curr[0] = -1.0;
        t_curr[1] = 2.0;
    }
    for i in 0..terms {
        coeffs[i] += cheb[0] * t_prev[i];
    }
    if terms > 1 {
        for i in 0..terms {
            coeffs[i] += cheb[1] * t_curr[i];
        }
    }
    for m in 2..terms {
        // T_{m} = 2 (2z - 1) T_{m-1} - T_{m-2}
        let mut t_next = vec![0.0f64; terms];
        for i in 0..terms {
            if t_curr[i] != 0.0 {
                if i + 1 < terms {
                    t_next[i + 1] += 4.0 * t_curr[i];
                }
                t_next[i] -= 2.0 * t_curr[i];
            }
            t_next[i] -= t_prev[i];
        }
        for i in 0..terms {
            coeffs[i] += cheb[m] * t_next[i];
        }
        t_prev = t_curr;
        t_curr = t_next;
    }
    coeffs
}

fn eval_monomial(coeffs: &[f64], z: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

impl PolyConfig {
    /// Evaluates the fitted polynomial at a probability value `x`.
    pub fn eval_poly_at(&self, x: f64) -> f64 {
        eval_monomial(&self.coeffs, x / self.interval_hi)
    }

    /// The per-count table value `g(j)`; `g(0) = 0` since absent symbols
    /// contribute nothing to the sum.
    ///
    /// For `1 <= j <= threshold` this is the unbiased falling-factorial
    /// estimate of the polynomial: `sum_l a_l (j)_l / (n)_l`, evaluated in
    /// the rescaled basis so every multiplicative factor stays near unity.
    /// Above the threshold it is the bias-corrected plug-in term
    /// `(j/n) ln(n/j) + 1/(2n)`.
    pub fn per_count_value(&self, j: u64) -> f64 {
        if j == 0 {
            return 0.0;
        }
        let n = self.n as f64;
        if j > self.threshold {
            return plugin_term(j, n) + 1.0 / (2.0 * n);
        }
        // sum_l coeffs[l] * prod_{v<l} (j - v) / ((n - v) * interval_hi)
        let mut acc = self.coeffs[0];
        let mut factor = 1.0;
        for (l, &c) in self.coeffs.iter().enumerate().skip(1) {
            let v = (l - 1) as f64;
            let jf = j as f64;
            if jf - v <= 0.0 {
                break; // falling factorial vanished; higher terms are zero
            }
            factor *= (jf - v) / ((n - v) * self.interval_hi);
            acc += c * factor;
        }
        acc
    }

    /// The full per-count table `g(0..=n)`, as scanned for sensitivity.
    pub fn count_table(&self) -> Vec<f64> {
        (0..=self.n).map(|j| self.per_count_value(j)).collect()
    }

    /// The sensitivity target `n^lambda / n` this configuration is compared
    /// against.
    pub fn lambda_sensitivity_target(&self) -> f64 {
        math::powf(self.n as f64, self.lambda) / self.n as f64
    }
}

/// Polynomial-approximation entropy estimate: `sum_x g(N_x)` over the
/// observed symbols, with `g` from [`PolyConfig::per_count_value`].
pub fn poly_entropy(hist: &Histogram, config: &PolyConfig) -> Result<EntropyEstimate> {
    if hist.n() == 0 {
        return Err(Error::EmptySample);
    }
    if hist.n() != config.n {
        return Err(Error::SampleSizeMismatch { expected: config.n, got: hist.n() });
    }
    let fp = Fingerprint::from_histogram(hist);
    let value = fp
        .iter_nonzero()
        .map(|(i, phi)| phi as f64 * config.per_count_value(i))
        .sum();
    Ok(EntropyEstimate { value, method: EntropyMethod::Poly, n: hist.n() })
}

/// Table-scan sensitivity of the polynomial estimator over its full
/// per-count table `g(0..=n)`.
pub fn poly_sensitivity(config: &PolyConfig) -> SensitivityBound {
    additive_sensitivity(&config.count_table())
}

/// Which estimator a private entropy release uses.
#[derive(Debug, Clone, Copy)]
pub enum PrivateEntropyMethod<'a> {
    PlugIn,
    Poly(&'a PolyConfig),
}

/// Releases an entropy estimate under `eps`-differential privacy: the chosen
/// estimator plus `Lap(delta / eps)` with `delta` from the matching
/// sensitivity routine.
pub fn private_entropy<R: RngCore + ?Sized>(
    hist: &Histogram,
    method: PrivateEntropyMethod<'_>,
    eps: PrivacyParams,
    rng: &mut R,
) -> Result<PrivateEstimate> {
    match method {
        PrivateEntropyMethod::PlugIn => {
            let raw = empirical_entropy(hist)?;
            let delta = empirical_entropy_sensitivity(hist.n())?;
            privatize(raw.value, delta, eps, rng)
        }
        PrivateEntropyMethod::Poly(config) => {
            let raw = poly_entropy(hist, config)?;
            let delta = poly_sensitivity(config);
            privatize(raw.value, delta, eps, rng)
        }
    }
}
