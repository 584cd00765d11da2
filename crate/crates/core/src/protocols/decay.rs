//! Decay, the classic Radio Network broadcast policy.

use rand::Rng;

/// Period of the Decay counter: `2⌈log₂ Δ⌉`, floored at 1.
pub fn decay_period(max_in_degree: usize) -> usize {
    let log = (max_in_degree.max(1) as f64).log2().ceil() as usize;
    (2 * log).max(1)
}

/// Per-transmitter Decay state.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecayState {
    pub counter: usize,
    pub transmit: bool,
}

impl DecayState {
    /// Advances one slot and returns whether the node transmits in it.
    ///
    /// At the start of each period the node becomes active; an active node
    /// transmits and then drops out with probability 1/2.
    pub fn step<R: Rng + ?Sized>(&mut self, period: usize, rng: &mut R) -> bool {
        if self.counter == 0 {
            self.transmit = true;
        }
        let sends = self.transmit;
        if sends && rng.gen_bool(0.5) {
            self.transmit = false;
        }
        self.counter += 1;
        if self.counter >= period {
            self.counter = 0;
        }
        sends
    }
}
