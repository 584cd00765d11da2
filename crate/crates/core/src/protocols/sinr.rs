//! SINR-style broadcast baseline: round-robin eligibility classes thinned by
//! a density coin.

use rand::Rng;

/// Whether transmitter `v` (1-based) transmits in round `round` (1-based).
///
/// `v` is eligible when `round ≡ v (mod dilution)` and then transmits with
/// probability `1/density`. The coin is drawn only for eligible rounds.
pub fn sinr_step<R: Rng + ?Sized>(
    v: usize,
    round: usize,
    density: usize,
    dilution: usize,
    rng: &mut R,
) -> bool {
    debug_assert!(density >= 1 && dilution >= 1);
    round % dilution == v % dilution && (density == 1 || rng.gen_range(0..density) == 0)
}
