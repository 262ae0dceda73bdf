//! Hard instance pairs and the coupling-based sample floor for private
//! estimation.
//!
//! Each constructor builds two explicit distributions whose property values
//! differ while their total variation distance is small. Any private
//! estimator accurate enough to tell them apart needs, via a maximal
//! coupling of the two sample sequences, at least `1/(eps * tv)` samples.
//! The pairs store the exact gap and distance of what was actually built,
//! recomputed from the vectors rather than quoted from the nominal formula.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::privacy::PrivacyParams;
use crate::samples::{tv_distance, DiscreteDistribution};

/// Which property a hard pair separates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyTag {
    Coverage { m: u64 },
    SupportSize,
    Entropy,
}

/// A pair of distributions that are close in total variation but far in
/// property value.
#[derive(Debug, Clone, PartialEq)]
pub struct HardPair {
    pub p: DiscreteDistribution,
    pub q: DiscreteDistribution,
    pub property: PropertyTag,
    /// Exact absolute property difference of the built pair.
    pub gap: f64,
    /// Exact total variation distance of the built pair.
    pub tv: f64,
    /// The nominal separation parameter (alpha or eta) used to build it.
    pub eta_or_alpha: f64,
}

/// Coverage pair at horizon `m`: a uniform distribution over
/// `round(m(1+alpha))` symbols versus one that moves a `alpha/(1+alpha)`
/// lump onto a single extra symbol. Total variation `alpha/(1+alpha)`,
/// coverage gap of order `alpha * m`.
pub fn coverage_pair(m: u64, alpha: f64) -> Result<HardPair> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter { what: "alpha must lie in (0, 1)" });
    }
    if m < 2 {
        return Err(Error::InvalidParameter { what: "coverage pair needs m >= 2" });
    }
    let wide = math::round(m as f64 * (1.0 + alpha)) as usize;
    // Symbols 0..wide for the uniform side; index `wide` is the lump symbol.
    let mut p_probs = vec![1.0 / wide as f64; wide];
    p_probs.push(0.0);
    let mut q_probs = vec![0.0; wide + 1];
    let base = 1.0 / (m as f64 * (1.0 + alpha));
    for q in q_probs.iter_mut().take(m as usize) {
        *q = base;
    }
    q_probs[wide] = alpha / (1.0 + alpha);

    let p = DiscreteDistribution::new(p_probs)?;
    let q = normalize_residual(q_probs)?;
    let gap = math::abs(q.support_coverage(m) - p.support_coverage(m));
    let tv = tv_distance(&p, &q);
    Ok(HardPair { p, q, property: PropertyTag::Coverage { m }, gap, tv, eta_or_alpha: alpha })
}

/// Repairs the last entry so the vector sums to exactly what validation
/// expects; per-element float rounding otherwise accumulates past 1e-12 for
/// large supports.
fn normalize_residual(mut probs: Vec<f64>) -> Result<DiscreteDistribution> {
    let sum: f64 = probs.iter().sum();
    let drift = sum - 1.0;
    if let Some(last) = probs.iter_mut().rev().find(|p| **p > 0.0) {
        *last -= drift;
    }
    DiscreteDistribution::new(probs)
}

/// Support-size pair over the class with probability floor `1/k`: uniform
/// over `k` versus uniform over `floor((1-alpha)k)`. Total variation `alpha`
/// (up to the rounding of the smaller support), gap `k - floor((1-alpha)k)`.
pub fn supportsize_pair(k: u64, alpha: f64) -> Result<HardPair> {
    if !(alpha >= 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter { what: "alpha must lie in [0, 1)" });
    }
    let narrow = math::floor((1.0 - alpha) * k as f64) as usize;
    if narrow < 1 {
        return Err(Error::InvalidParameter { what: "(1 - alpha) k must be at least 1" });
    }
    let p = DiscreteDistribution::uniform(k as usize);
    let mut q_probs = vec![1.0 / narrow as f64; narrow];
    q_probs.extend(core::iter::repeat(0.0).take(k as usize - narrow));
    let q = DiscreteDistribution::new(q_probs)?;
    let gap = math::abs(p.support_size() as f64 - q.support_size() as f64);
    let tv = tv_distance(&p, &q);
    Ok(HardPair { p, q, property: PropertyTag::SupportSize, gap, tv, eta_or_alpha: alpha })
}

/// Entropy pair over `k` symbols: probability `2/3` versus `(2-eta)/3` on
/// the first symbol, the rest uniform. Total variation `eta/3` exactly,
/// entropy gap of order `eta ln k`.
pub fn entropy_pair(k: u64, eta: f64) -> Result<HardPair> {
    if k < 3 {
        return Err(Error::InvalidParameter { what: "entropy pair needs k >= 3" });
    }
    if !(eta > 0.0 && eta < 2.0) {
        return Err(Error::InvalidParameter { what: "eta must lie in (0, 2)" });
    }
    let rest = (k - 1) as usize;
    let mut p_probs = vec![(1.0 / 3.0) / rest as f64; k as usize];
    p_probs[0] = 2.0 / 3.0;
    let mut q_probs = vec![((1.0 + eta) / 3.0) / rest as f64; k as usize];
    q_probs[0] = (2.0 - eta) / 3.0;

    let p = normalize_residual(p_probs)?;
    let q = normalize_residual(q_probs)?;
    let gap = math::abs(q.entropy() - p.entropy());
    let tv = tv_distance(&p, &q);
    Ok(HardPair { p, q, property: PropertyTag::Entropy, gap, tv, eta_or_alpha: eta })
}

/// The coupling floor: any `eps`-private estimator that distinguishes the
/// pair needs at least `ceil(1 / (eps * tv))` samples. Constant-free, so a
/// floor rather than a tight bound.
pub fn dp_sample_floor(pair: &HardPair, eps: &PrivacyParams) -> Result<u64> {
    if pair.tv <= 0.0 {
        return Err(Error::Indistinguishable);
    }
    let raw = 1.0 / (eps.epsilon() * pair.tv);
    // Snap near-integers before taking the ceiling so 1/(0.1) style float
    // residue cannot bump the floor by one.
    let snapped = if math::abs(raw - math::round(raw)) < 1e-9 * raw.max(1.0) {
        math::round(raw)
    } else {
        math::ceil(raw)
    };
    Ok(snapped as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coverage_pair_tv_and_gap() {
        let pair = coverage_pair(1000, 0.2).unwrap();
        assert!((pair.tv - 0.2 / 1.2).abs() < 1e-12);
        let ratio = pair.gap / (0.2 * 1000.0);
        assert!((0.3..=1.1).contains(&ratio), "gap ratio {ratio}");
        // The stored fields match independent recomputation.
        assert!((pair.tv - tv_distance(&pair.p, &pair.q)).abs() < 1e-15);
        let re_gap = (pair.q.support_coverage(1000) - pair.p.support_coverage(1000)).abs();
        assert!((pair.gap - re_gap).abs() < 1e-9);
    }

    #[test]
    fn coverage_pair_gap_shrinks_with_alpha() {
        let gaps: Vec<f64> = [0.2, 0.1, 0.05]
            .iter()
            .map(|&a| coverage_pair(1000, a).unwrap().gap)
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "gaps {gaps:?}");
    }

    #[test]
    fn supportsize_pair_examples() {
        let pair = supportsize_pair(100, 0.1).unwrap();
        assert_eq!(pair.gap, 10.0);
        assert!((pair.tv - 0.1).abs() < 1e-12);

        let pair = supportsize_pair(77, 0.0).unwrap();
        assert_eq!(pair.gap, 0.0);
        assert_eq!(pair.tv, 0.0);
        assert_eq!(pair.p, pair.q);

        let pair = supportsize_pair(1000, 0.25).unwrap();
        assert!((pair.tv - 0.25).abs() < 1e-12);
    }

    #[test]
    fn entropy_pair_examples() {
        let eta = 0.3;
        let pair = entropy_pair(1024, eta).unwrap();
        assert!((pair.tv - eta / 3.0).abs() < 1e-12);

        // eta = alpha / ln k puts the gap near alpha.
        let alpha = 0.1;
        let eta = alpha / 1024.0f64.ln();
        let pair = entropy_pair(1024, eta).unwrap();
        assert!(
            pair.gap >= 0.2 * alpha && pair.gap <= 2.0 * alpha,
            "gap {} outside [{}, {}]",
            pair.gap,
            0.2 * alpha,
            2.0 * alpha
        );

        // Gap recomputation from exact entropies.
        let re_gap = (pair.q.entropy() - pair.p.entropy()).abs();
        assert!((pair.gap - re_gap).abs() < 1e-12);

        assert!(entropy_pair(1024, 0.0).is_err());
        assert!(entropy_pair(2, 0.1).is_err());
    }

    #[test]
    fn floor_examples() {
        let eps = PrivacyParams::new(1.0).unwrap();

        let pair = supportsize_pair(100, 0.1).unwrap();
        assert_eq!(dp_sample_floor(&pair, &eps).unwrap(), 10);

        // tv = 1/2 at eps = 1 floors at 2.
        let half = supportsize_pair(2, 0.5).unwrap();
        assert!((half.tv - 0.5).abs() < 1e-12);
        assert_eq!(dp_sample_floor(&half, &eps).unwrap(), 2);

        // Coverage pair: ceil((1 + alpha)/alpha).
        let pair = coverage_pair(1000, 0.2).unwrap();
        assert_eq!(dp_sample_floor(&pair, &eps).unwrap(), 6);

        // Entropy pair at eta = alpha/ln k: ceil(3 ln k / alpha).
        let alpha = 0.1;
        let k = 1024u64;
        let pair = entropy_pair(k, alpha / (k as f64).ln()).unwrap();
        let expected = (3.0 * (k as f64).ln() / alpha).ceil() as u64;
        assert_eq!(dp_sample_floor(&pair, &eps).unwrap(), expected);

        // Identical pair has no floor.
        let same = supportsize_pair(10, 0.0).unwrap();
        assert!(matches!(dp_sample_floor(&same, &eps), Err(Error::Indistinguishable)));
    }

    #[test]
    fn floor_monotone_in_eps_and_tv() {
        let pair_loose = supportsize_pair(100, 0.2).unwrap();
        let pair_tight = supportsize_pair(100, 0.05).unwrap();
        let weak = PrivacyParams::new(0.5).unwrap();
        let strong = PrivacyParams::new(2.0).unwrap();
        // Larger eps or larger tv can only lower the floor.
        assert!(
            dp_sample_floor(&pair_loose, &strong).unwrap()
                <= dp_sample_floor(&pair_loose, &weak).unwrap()
        );
        assert!(
            dp_sample_floor(&pair_loose, &weak).unwrap()
                <= dp_sample_floor(&pair_tight, &weak).unwrap()
        );
    }

    #[test]
    fn pairs_are_valid_distributions() {
        for pair in [
            coverage_pair(500, 0.33).unwrap(),
            supportsize_pair(321, 0.17).unwrap(),
            entropy_pair(999, 0.05).unwrap(),
        ] {
            // Construction already validated; re-validate through the public
            // constructor as a belt check.
            assert!(DiscreteDistribution::new(pair.p.probs().to_vec()).is_ok());
            assert!(DiscreteDistribution::new(pair.q.probs().to_vec()).is_ok());
        }
    }
}
