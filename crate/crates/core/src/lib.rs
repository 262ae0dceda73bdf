//! Differentially private estimation of symmetric distribution properties.
//!
//! Given samples from an unknown discrete distribution, this crate estimates
//! Shannon entropy, support size, and support coverage, and privatizes each
//! estimate by adding Laplace noise calibrated to the estimator's sensitivity
//! (the largest output change when one sample is replaced). The estimators are
//! sublinear-sample methods: the smoothed Good–Toulmin extrapolator for support
//! coverage and a polynomial-approximation estimator for entropy, alongside the
//! classical plug-in and Miller–Madow baselines.
//!
//! The crate is `no_std`-compatible (`alloc` required). Disable the default
//! `std` feature and enable `libm` for no_std builds.
//!
//! ```
//! use inspectre_core::samples::{DiscreteDistribution, Histogram};
//! use inspectre_core::entropy::{empirical_entropy, empirical_entropy_sensitivity};
//! use inspectre_core::privacy::{privatize, PrivacyParams};
//! use rand_core::SeedableRng;
//!
//! let dist = DiscreteDistribution::uniform(100);
//! let samples = dist.sample_seeded(10_000, 7);
//! let hist = Histogram::from_samples(&samples);
//!
//! let raw = empirical_entropy(&hist).unwrap();
//! let delta = empirical_entropy_sensitivity(hist.n()).unwrap();
//! let eps = PrivacyParams::new(1.0).unwrap();
//! let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
//! let private = privatize(raw.value, delta, eps, &mut rng).unwrap();
//! assert_eq!(private.noise_scale, delta.delta() / 1.0);
//! ```

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("inspectre-core requires either the `std` or the `libm` feature");

pub mod coverage;
pub mod entropy;
pub mod error;
pub mod lowerbounds;
pub(crate) mod math;
pub mod privacy;
pub mod rng;
pub mod samples;

pub use error::{Error, Result};
