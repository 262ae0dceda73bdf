//! Seeding and uniform-variate helpers shared by samplers and mechanisms.
//!
//! All randomness in this crate flows through caller-provided [`RngCore`]
//! states, so results are reproducible from seeds alone. The helpers here
//! keep the bit-level mapping from generator output to variates fixed,
//! independent of any upstream rand-crate conventions.

use rand_core::RngCore;

/// Uniform draw in `[0, 1)` with 53 random bits.
#[inline]
pub fn uniform_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[inline]
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent stream seed from a master seed and a label path.
///
/// Used by experiment runners to give every (grid point, estimator,
/// iteration) cell its own generator, so parallel scheduling cannot change
/// results.
pub fn derive_seed(master: u64, stream: &[u64]) -> u64 {
    let mut state = splitmix64(master ^ 0xA076_1D64_78BD_642F);
    for &word in stream {
        state = splitmix64(state ^ splitmix64(word));
    }
    state
}
