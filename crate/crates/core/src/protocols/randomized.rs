//! Phase-decaying random transmission schedule.

use rand::Rng;

use crate::characterize::{fallback_levels, Characterization};
use crate::error::{Error, Result};
use crate::rng;
use crate::schedule::Schedule;

const STREAM_SALT: u64 = 0x5241_4e44; // "RAND"

#[derive(Debug, Clone)]
pub struct RandomizedParams {
    pub characterization: Characterization,
    pub seed: u64,
    /// Size the level loop from `Ā_w ≤ n − 1` instead of the measured `Ā`.
    pub fallback_mode: bool,
    pub m_override: Option<usize>,
}

impl RandomizedParams {
    pub fn new(characterization: Characterization, seed: u64) -> Self {
        Self { characterization, seed, fallback_mode: false, m_override: None }
    }

    /// Slots per phase.
    pub fn m(&self) -> usize {
        self.m_override.unwrap_or(self.characterization.m)
    }

    /// Number of phases for a layer of `n` transmitters.
    pub fn phases(&self, n: usize) -> usize {
        let levels = if self.fallback_mode {
            fallback_levels(n, self.characterization.b)
        } else {
            self.characterization.levels
        };
        levels + 1
    }
}

/// Phase `i` (0-based) contributes `m` slots in which every transmitter is
/// included independently with probability `1/b^i`.
///
/// Transmitter `v` draws from its own substream of the seed, consuming one
/// uniform per slot in phase-major, slot-minor order, so the schedule is a
/// pure function of `(params, n)`.
pub fn randomized_schedule(params: &RandomizedParams, n: usize) -> Result<Schedule> {
    if params.m_override == Some(0) {
        return Err(Error::InvalidParameter("m_override must be at least 1".into()));
    }
    let m = params.m();
    let phases = params.phases(n);
    let b = params.characterization.b;
    let total = phases * m;
    let mut slots = vec![Vec::new(); total];
    let seed = rng::mix(params.seed, STREAM_SALT);
    for v in 0..n {
        let mut stream = rng::substream(seed, v as u64);
        for phase in 0..phases {
            let p = b.powi(-(phase as i32));
            for j in 0..m {
                if stream.gen::<f64>() < p {
                    slots[phase * m + j].push(v);
                }
            }
        }
    }
    Schedule::new(n, slots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affectance::encode_radio_network;
    use crate::characterize::characterize;

    fn params(c: f64, m: usize) -> RandomizedParams {
        let star = encode_radio_network(5, &vec![vec![0, 1, 2, 3, 4]; 5]).unwrap();
        let mut ch = characterize(&star, Some(c)).unwrap();
        ch.abar = 4.0;
        ch.levels = crate::characterize::ceil_log(8.0, ch.b);
        ch.phases = ch.levels + 1;
        RandomizedParams { characterization: ch, seed: 11, fallback_mode: false, m_override: Some(m) }
    }

    #[test]
    fn shape_for_abar_four() {
        let p = params(2.0, 3);
        let s = randomized_schedule(&p, 5).unwrap();
        assert_eq!(s.len(), 33);
        for slot in &s.slots()[..3] {
            assert_eq!(slot, &vec![0, 1, 2, 3, 4]);
        }
    }

    #[test]
    fn low_affectance_gives_one_full_phase() {
        let mut p = params(2.0, 4);
        p.characterization.abar = 0.5;
        p.characterization.levels = crate::characterize::ceil_log(1.0, 1.25);
        p.characterization.phases = 1;
        let s = randomized_schedule(&p, 5).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.slots().iter().all(|slot| slot.len() == 5));
    }

    #[test]
    fn fallback_phase_count() {
        let mut p = params(2.0, 1);
        p.fallback_mode = true;
        assert_eq!(p.phases(42), 21);
        assert_eq!(randomized_schedule(&p, 42).unwrap().len(), 21);
    }

    #[test]
    fn reproducible_and_seed_sensitive() {
        let p = params(2.0, 3);
        assert_eq!(randomized_schedule(&p, 5).unwrap(), randomized_schedule(&p, 5).unwrap());
        let mut q = p.clone();
        q.seed = 12;
        assert_ne!(randomized_schedule(&p, 5).unwrap(), randomized_schedule(&q, 5).unwrap());
        q.m_override = Some(0);
        assert!(randomized_schedule(&q, 5).is_err());
    }
}
