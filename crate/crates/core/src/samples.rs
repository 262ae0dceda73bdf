//! Sample containers and exact property computation on known distributions.
//!
//! Symbols are dense integer ids assigned at ingestion, which lets histograms
//! live in flat count arrays and fingerprints index directly by multiplicity.
//! Exact entropy, support size, support coverage, and total variation distance
//! on explicit probability vectors provide the ground truth that benchmark
//! runs and lower-bound constructions compare against.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::math;
use crate::rng::uniform_f64;

/// A domain element, interned to a dense id in `[0, distinct_count)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

/// An ordered sequence of i.i.d. draws.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SampleSet {
    symbols: Vec<Symbol>,
}

impl SampleSet {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        SampleSet { symbols }
    }

    /// Sample size `n`.
    pub fn n(&self) -> u64 {
        self.symbols.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn iter(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols.iter().copied()
    }
}

/// Per-symbol multiplicities of a sample: the map `x -> N_x`.
///
/// Stored densely by symbol id; ids that never occurred hold an implicit
/// count of zero and are skipped by [`Histogram::iter`]. The invariant
/// `sum of counts == n` holds by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: Vec<u64>,
    n: u64,
    distinct: u64,
}

impl Histogram {
    pub fn from_samples(samples: &SampleSet) -> Self {
        Self::from_symbols(samples.as_slice())
    }

    pub fn from_symbols(symbols: &[Symbol]) -> Self {
        let width = symbols.iter().map(|s| s.0 as usize + 1).max().unwrap_or(0);
        let mut counts = vec![0u64; width];
        for s in symbols {
            counts[s.0 as usize] += 1;
        }
        Self::from_counts(counts)
    }

    /// Builds from dense per-symbol counts; zero entries mean the symbol was
    /// never observed.
    pub fn from_counts(counts: Vec<u64>) -> Self {
        let n = counts.iter().sum();
        let distinct = counts.iter().filter(|&&c| c > 0).count() as u64;
        Histogram { counts, n, distinct }
    }

    /// Total sample size `n`.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of distinct observed symbols.
    pub fn distinct(&self) -> u64 {
        self.distinct
    }

    pub fn count(&self, symbol: Symbol) -> u64 {
        self.counts.get(symbol.0 as usize).copied().unwrap_or(0)
    }

    pub fn max_count(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Observed symbols and their positive counts.
    pub fn iter(&self) -> impl Iterator<Item = (Symbol, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (Symbol(i as u32), c))
    }
}

/// The fingerprint (profile) of a sample: `phi[i]` counts the symbols that
/// appear exactly `i` times. Sufficient statistic for every estimator in this
/// crate, with the invariant `sum_i i * phi[i] == n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    phi: Vec<u64>,
    n: u64,
}

impl Fingerprint {
    pub fn from_histogram(hist: &Histogram) -> Self {
        let width = hist.max_count() as usize + 1;
        let mut phi = vec![0u64; width];
        for (_, c) in hist.iter() {
            phi[c as usize] += 1;
        }
        phi[0] = 0;
        Fingerprint { phi, n: hist.n() }
    }

    pub fn from_samples(samples: &SampleSet) -> Self {
        Self::from_histogram(&Histogram::from_samples(samples))
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `phi_i`: the number of symbols observed exactly `i` times.
    pub fn phi(&self, i: u64) -> u64 {
        self.phi.get(i as usize).copied().unwrap_or(0)
    }

    /// Observed distinct count, `sum_i phi_i`.
    pub fn distinct(&self) -> u64 {
        self.phi.iter().sum()
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.phi
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &p)| p > 0)
            .map(|(i, _)| i as u64)
            .unwrap_or(0)
    }

    /// Multiplicities with `phi_i > 0`, in increasing order of `i`.
    pub fn iter_nonzero(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.phi
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &p)| p > 0)
            .map(|(i, &p)| (i as u64, p))
    }
}

/// An explicit probability vector over `k` symbols; the benchmark ground
/// truth and the raw material of lower-bound instances.
///
/// `min_prob_floor` records membership in the class of distributions whose
/// nonzero probabilities all sit at or above `1/k`; support-size estimation
/// is only well posed on that class.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
    min_prob_floor: Option<f64>,
}

const SUM_TOLERANCE: f64 = 1e-12;

impl DiscreteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::validate(&probs, None)?;
        Ok(DiscreteDistribution { probs, min_prob_floor: None })
    }

    /// Like [`DiscreteDistribution::new`], additionally requiring every
    /// nonzero entry to be at least `floor`.
    pub fn with_floor(probs: Vec<f64>, floor: f64) -> Result<Self> {
        Self::validate(&probs, Some(floor))?;
        Ok(DiscreteDistribution { probs, min_prob_floor: Some(floor) })
    }

    /// Normalizes non-negative weights into a distribution.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidDistribution { reason: "weights must have a positive finite sum" });
        }
        let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
        Self::new(probs)
    }

    pub fn uniform(k: usize) -> Self {
        assert!(k >= 1, "uniform distribution needs k >= 1");
        let p = 1.0 / k as f64;
        DiscreteDistribution { probs: vec![p; k], min_prob_floor: Some(p) }
    }

    pub fn point_mass(k: usize, at: usize) -> Self {
        assert!(at < k, "point mass index out of range");
        let mut probs = vec![0.0; k];
        probs[at] = 1.0;
        DiscreteDistribution { probs, min_prob_floor: None }
    }

    fn validate(probs: &[f64], floor: Option<f64>) -> Result<()> {
        let mut total = 0.0;
        for &p in probs {
            if !(p >= 0.0) || !p.is_finite() {
                return Err(Error::InvalidDistribution { reason: "entries must be non-negative and finite" });
            }
            if let Some(fl) = floor {
                if p > 0.0 && p < fl * (1.0 - 1e-12) {
                    return Err(Error::InvalidDistribution { reason: "nonzero entry below the declared floor" });
                }
            }
            total += p;
        }
        if math::abs(total - 1.0) > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution { reason: "entries must sum to 1 within 1e-12" });
        }
        Ok(())
    }

    /// Support size parameter `k` (vector length, including zero entries).
    pub fn k(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn min_prob_floor(&self) -> Option<f64> {
        self.min_prob_floor
    }

    /// Number of symbols with strictly positive probability.
    pub fn support_size(&self) -> u64 {
        self.probs.iter().filter(|&&p| p > 0.0).count() as u64
    }

    /// Shannon entropy in nats; zero-probability terms contribute nothing.
    pub fn entropy(&self) -> f64 {
        let mut h = 0.0;
        for &p in &self.probs {
            if p > 0.0 {
                h -= p * math::ln(p);
            }
        }
        h
    }

    /// Expected number of distinct symbols in `m` fresh draws:
    /// `sum_x (1 - (1 - p(x))^m)`.
    pub fn support_coverage(&self, m: u64) -> f64 {
        let mf = m as f64;
        let mut total = 0.0;
        for &p in &self.probs {
            if p > 0.0 {
                // 1 - (1-p)^m, computed as -expm1(m ln(1-p)) to stay exact
                // for tiny p and large m.
                total -= math::exp_m1(mf * math::ln_1p(-p));
            }
        }
        total
    }

    /// Precomputed cumulative table for repeated categorical draws.
    pub fn sampler(&self) -> CategoricalSampler {
        let mut cum = Vec::with_capacity(self.probs.len());
        let mut acc = 0.0;
        for &p in &self.probs {
            acc += p;
            cum.push(acc);
        }
        CategoricalSampler { cum, probs: self.probs.clone() }
    }

    /// `n` i.i.d. draws using the provided generator state.
    pub fn sample_n<R: RngCore + ?Sized>(&self, n: u64, rng: &mut R) -> SampleSet {
        self.sampler().sample_n(n, rng)
    }

    /// Deterministic sampling: a fixed seed yields an identical sequence.
    pub fn sample_seeded(&self, n: u64, seed: u64) -> SampleSet {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        self.sample_n(n, &mut rng)
    }
}

/// Inverse-CDF categorical sampler over a fixed distribution.
#[derive(Debug, Clone)]
pub struct CategoricalSampler {
    cum: Vec<f64>,
    probs: Vec<f64>,
}

impl CategoricalSampler {
    pub fn draw<R: RngCore + ?Sized>(&self, rng: &mut R) -> Symbol {
        let total = *self.cum.last().expect("sampler over empty distribution");
        let u = uniform_f64(rng) * total;
        let mut idx = self.cum.partition_point(|&c| c <= u);
        if idx >= self.cum.len() {
            idx = self.cum.len() - 1;
        }
        // Zero-probability symbols have zero-width intervals; never land there.
        while self.probs[idx] == 0.0 && idx > 0 {
            idx -= 1;
        }
        Symbol(idx as u32)
    }

    pub fn sample_n<R: RngCore + ?Sized>(&self, n: u64, rng: &mut R) -> SampleSet {
        let mut symbols = Vec::with_capacity(n as usize);
        for _ in 0..n {
            symbols.push(self.draw(rng));
        }
        SampleSet::new(symbols)
    }
}

/// Total variation distance `(1/2) sum |p(x) - q(x)|`, padding the shorter
/// vector with zeros.
pub fn tv_distance(p: &DiscreteDistribution, q: &DiscreteDistribution) -> f64 {
    let (pp, qq) = (p.probs(), q.probs());
    let len = pp.len().max(qq.len());
    let mut acc = 0.0;
    for i in 0..len {
        let a = pp.get(i).copied().unwrap_or(0.0);
        let b = qq.get(i).copied().unwrap_or(0.0);
        acc += math::abs(a - b);
    }
    0.5 * acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn symbols(ids: &[u32]) -> SampleSet {
        SampleSet::new(ids.iter().map(|&i| Symbol(i)).collect())
    }

    #[test]
    fn histogram_tallies_multiplicities() {
        let h = Histogram::from_samples(&symbols(&[0, 0, 1]));
        assert_eq!(h.count(Symbol(0)), 2);
        assert_eq!(h.count(Symbol(1)), 1);
        assert_eq!(h.n(), 3);
        assert_eq!(h.distinct(), 2);
    }

    #[test]
    fn histogram_of_empty_sample() {
        let h = Histogram::from_samples(&symbols(&[]));
        assert_eq!(h.n(), 0);
        assert_eq!(h.distinct(), 0);
        assert_eq!(h.iter().count(), 0);
    }

    #[test]
    fn histogram_sum_matches_drawn_sample() {
        let dist = DiscreteDistribution::uniform(4);
        let s = dist.sample_seeded(1000, 11);
        let h = Histogram::from_samples(&s);
        // Independent tally oracle over the drawn sequence.
        let mut manual = [0u64; 4];
        for sym in s.iter() {
            manual[sym.0 as usize] += 1;
        }
        assert_eq!(h.n(), 1000);
        for (i, &c) in manual.iter().enumerate() {
            assert_eq!(h.count(Symbol(i as u32)), c);
        }
    }

    #[test]
    fn fingerprint_by_definition() {
        let h = Histogram::from_samples(&symbols(&[0, 0, 1]));
        let f = Fingerprint::from_histogram(&h);
        assert_eq!(f.phi(1), 1);
        assert_eq!(f.phi(2), 1);
        assert_eq!(f.phi(3), 0);
        assert_eq!(f.distinct(), 2);
    }

    #[test]
    fn fingerprint_single_symbol() {
        let h = Histogram::from_counts(vec![5]);
        let f = Fingerprint::from_histogram(&h);
        assert_eq!(f.phi(5), 1);
        assert_eq!((1..5).map(|i| f.phi(i)).sum::<u64>(), 0);
        assert_eq!(f.max_multiplicity(), 5);
    }

    #[test]
    fn fingerprint_mass_identity_on_draws() {
        let dist = DiscreteDistribution::uniform(50);
        let s = dist.sample_seeded(200, 3);
        let f = Fingerprint::from_samples(&s);
        let mass: u64 = f.iter_nonzero().map(|(i, p)| i * p).sum();
        assert_eq!(mass, 200);
    }

    #[test]
    fn entropy_of_uniform_and_point_mass() {
        assert!((DiscreteDistribution::uniform(2).entropy() - core::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(DiscreteDistribution::point_mass(3, 1).entropy(), 0.0);
    }

    #[test]
    fn entropy_grouping_identity() {
        // 2/3 on one symbol, 1/3 spread uniformly over 1023 others:
        // H = h(2/3) + (1/3) ln 1023.
        let k = 1024usize;
        let mut probs = vec![1.0 / (3.0 * 1023.0); k];
        probs[0] = 2.0 / 3.0;
        let d = DiscreteDistribution::new(probs).unwrap();
        let binary = -(2.0 / 3.0) * (2.0f64 / 3.0).ln() - (1.0 / 3.0) * (1.0f64 / 3.0).ln();
        let expected = binary + (1.0 / 3.0) * 1023.0f64.ln();
        assert!((d.entropy() - expected).abs() < 1e-12);
    }

    #[test]
    fn support_size_counts_positive_entries() {
        assert_eq!(DiscreteDistribution::uniform(7).support_size(), 7);
        let d = DiscreteDistribution::new(vec![0.5, 0.0, 0.5]).unwrap();
        assert_eq!(d.support_size(), 2);
    }

    #[test]
    fn coverage_small_cases() {
        let u2 = DiscreteDistribution::uniform(2);
        assert!((u2.support_coverage(1) - 1.0).abs() < 1e-15);
        assert!((u2.support_coverage(2) - 1.5).abs() < 1e-15);
        assert_eq!(u2.support_coverage(0), 0.0);
    }

    #[test]
    fn coverage_uniform_100_matches_closed_form() {
        let d = DiscreteDistribution::uniform(100);
        let expected = 100.0 * (1.0 - 0.99f64.powi(100));
        assert!((d.support_coverage(100) - expected).abs() < 1e-9);
    }

    #[test]
    fn coverage_matches_monte_carlo_distinct_count() {
        let d = DiscreteDistribution::uniform(100);
        let exact = d.support_coverage(100);
        let trials = 100_000u32;
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        let sampler = d.sampler();
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..trials {
            let h = Histogram::from_samples(&sampler.sample_n(100, &mut rng));
            let dcount = h.distinct() as f64;
            sum += dcount;
            sumsq += dcount * dcount;
        }
        let mean = sum / trials as f64;
        let var = (sumsq / trials as f64 - mean * mean).max(0.0);
        let se = (var / trials as f64).sqrt();
        assert!(
            (mean - exact).abs() <= 3.0 * se + 1e-9,
            "MC mean {mean} vs exact {exact} (se {se})"
        );
    }

    #[test]
    fn tv_distance_examples() {
        let p = DiscreteDistribution::uniform(100);
        assert_eq!(tv_distance(&p, &p), 0.0);
        let q = DiscreteDistribution::uniform(90);
        assert!((tv_distance(&p, &q) - 0.1).abs() < 1e-12);
        let a = DiscreteDistribution::new(vec![1.0, 0.0]).unwrap();
        let b = DiscreteDistribution::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(tv_distance(&a, &b), 1.0);
    }

    #[test]
    fn sampling_point_mass_and_determinism() {
        let d = DiscreteDistribution::point_mass(4, 2);
        let s = d.sample_seeded(5, 0);
        assert_eq!(s.as_slice(), &[Symbol(2); 5]);

        let u = DiscreteDistribution::uniform(10);
        assert_eq!(u.sample_seeded(100, 42), u.sample_seeded(100, 42));
        assert_ne!(u.sample_seeded(100, 42), u.sample_seeded(100, 43));
    }

    #[test]
    fn sampling_frequencies_near_expected() {
        let d = DiscreteDistribution::uniform(4);
        let s = d.sample_seeded(100_000, 5);
        let h = Histogram::from_samples(&s);
        for i in 0..4 {
            let freq = h.count(Symbol(i)) as f64 / 100_000.0;
            assert!((freq - 0.25).abs() < 0.01, "symbol {i} freq {freq}");
        }
    }

    #[test]
    fn zero_probability_symbols_never_drawn() {
        let d = DiscreteDistribution::new(vec![0.0, 0.5, 0.0, 0.5, 0.0]).unwrap();
        let s = d.sample_seeded(10_000, 8);
        let h = Histogram::from_samples(&s);
        assert_eq!(h.count(Symbol(0)), 0);
        assert_eq!(h.count(Symbol(2)), 0);
        assert_eq!(h.count(Symbol(4)), 0);
    }

    #[test]
    fn distribution_validation() {
        assert!(DiscreteDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(DiscreteDistribution::new(vec![1.5, -0.5]).is_err());
        assert!(DiscreteDistribution::with_floor(vec![0.9, 0.1], 0.2).is_err());
        assert!(DiscreteDistribution::with_floor(vec![0.8, 0.2], 0.2).is_ok());
        assert!(DiscreteDistribution::from_weights(vec![1.0, 1.0, 2.0]).is_ok());
        assert!(DiscreteDistribution::from_weights(vec![0.0; 3]).is_err());
    }
}
