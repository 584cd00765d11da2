//! Deterministic schedule by the method of conditional expectations.
//!
//! Receivers are bucketed by maximum average affectance: bucket 0 holds
//! `Ā_w ≤ 1/2` and bucket `r ≥ 1` holds `b^{r−1}/2 < Ā_w ≤ b^r/2`. Slots
//! cycle through the buckets with transmission probability `p = b^{−r}`,
//! restarting at `r = 0` once `p ≤ 1/(2bĀ)`, which happens exactly when `r`
//! passes `max{⌈log_b(2Ā)⌉, 0}`. Within a slot the transmitters are fixed one
//! at a time in ascending order, each time keeping the branch with the larger
//! expected number of selected pending receivers in the current bucket (ties
//! go to silent), with undecided transmitters treated as transmitting with
//! probability `p`. Receivers selected by the finished slot leave their
//! bucket; the loop ends when all buckets are empty.
//!
//! A round whose bucket is already empty would produce an all-silent slot and
//! is skipped without emitting one.

use serde::Serialize;

use crate::affectance::Instance;
use crate::characterize::{ceil_log, Characterization};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::protocols::expectation::{ReceiverView, Uniforms, DEFAULT_MC_SAMPLES, K_EXACT};
use crate::rng;
use crate::schedule::Schedule;

/// How the conditional expectations are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectationMode {
    /// Full enumeration of the relevant undecided transmitters (at most [`K_EXACT`]).
    Exact,
    /// Paired Monte Carlo estimate with common random numbers.
    MonteCarlo { samples: usize, seed: u64 },
}

impl ExpectationMode {
    pub fn monte_carlo(seed: u64) -> Self {
        ExpectationMode::MonteCarlo { samples: DEFAULT_MC_SAMPLES, seed }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DeterministicOptions {
    pub mode: ExpectationMode,
    pub exec: Exec,
}

impl Default for DeterministicOptions {
    fn default() -> Self {
        Self { mode: ExpectationMode::Exact, exec: Exec::default() }
    }
}

/// One greedy decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreedyStep {
    /// 1-based slot number.
    pub slot: usize,
    pub transmitter: usize,
    pub p: f64,
    pub e_true: f64,
    pub e_false: f64,
    pub transmit: bool,
}

impl GreedyStep {
    /// `max{E_true, E_false} ≥ p·E_true + (1−p)·E_false`, up to `tol`.
    pub fn dominates_average(&self, tol: f64) -> bool {
        self.e_true.max(self.e_false) + tol >= self.p * self.e_true + (1.0 - self.p) * self.e_false
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlotSummary {
    pub slot: usize,
    /// Bucket index targeted by this slot.
    pub round: usize,
    pub p: f64,
    /// Pending receivers in the bucket at the start of the slot.
    pub pending: usize,
    /// Expected number of them selected by a fully random slot.
    pub expected: f64,
    /// Number actually selected by the chosen slot.
    pub selected: usize,
}

#[derive(Debug, Clone)]
pub struct DeterministicOutcome {
    pub schedule: Schedule,
    /// Receiver buckets at initialization, indexed by round.
    pub buckets: Vec<Vec<usize>>,
    pub steps: Vec<GreedyStep>,
    pub slots: Vec<SlotSummary>,
}

/// Slot cap: `10·(1 + ⌈log₂ n⌉·(levels + 1))`.
pub fn termination_guard(n: usize, levels: usize) -> usize {
    10 * (1 + ceil_log(n as f64, 2.0) * (levels + 1))
}

/// Receiver buckets for `ch`: bucket `r` is the smallest `r` with `2Ā_w ≤ b^r`.
pub fn receiver_buckets(ch: &Characterization) -> Vec<Vec<usize>> {
    let mut buckets = vec![Vec::new(); ch.levels + 1];
    for (w, &a) in ch.abar_w.iter().enumerate() {
        let r = ceil_log(2.0 * a, ch.b).min(ch.levels);
        buckets[r].push(w);
    }
    buckets
}

/// The schedule alone, evaluated in `mode` with the default executor.
pub fn deterministic_schedule(
    inst: &Instance,
    ch: &Characterization,
    mode: ExpectationMode,
) -> Result<Schedule> {
    let opts = DeterministicOptions { mode, ..Default::default() };
    deterministic_schedule_with(inst, ch, &opts).map(|o| o.schedule)
}

pub fn deterministic_schedule_with(
    inst: &Instance,
    ch: &Characterization,
    opts: &DeterministicOptions,
) -> Result<DeterministicOutcome> {
    let n = inst.n();
    if ch.abar_w.len() != n {
        return Err(Error::InvalidParameter("characterization belongs to another instance".into()));
    }
    if let ExpectationMode::MonteCarlo { samples: 0, .. } = opts.mode {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    let views: Vec<ReceiverView> = (0..n).map(|w| ReceiverView::new(inst, w)).collect();
    let initial = receiver_buckets(ch);
    let mut buckets = initial.clone();
    let guard = termination_guard(n, ch.levels);

    let mut schedule = Schedule::empty(n);
    let mut steps = Vec::new();
    let mut slots = Vec::new();
    // Starting past the last level forces a reset to p = 1 on the first slot.
    let mut round = ch.levels + 1;
    while buckets.iter().any(|b| !b.is_empty()) {
        if round > ch.levels {
            round = 0;
        }
        if buckets[round].is_empty() {
            round += 1;
            continue;
        }
        let slot = schedule.len() + 1;
        if slot > guard {
            let pending = buckets.iter().map(Vec::len).sum();
            return Err(Error::NonTermination { slots: guard, pending });
        }
        let p = ch.b.powi(-(round as i32));
        let pending = buckets[round].clone();
        let eval = Evaluator { views: &views, mode: opts.mode, p, slot };

        let mut prefix: Vec<bool> = Vec::with_capacity(n);
        let start = eval.uniforms(0);
        let mut prob = opts
            .exec
            .map(&pending, |&w| eval.probability(w, &prefix, start.as_ref()))
            .into_iter()
            .collect::<Result<Vec<f64>>>()?;
        let expected = prob.iter().sum();

        for i in 0..n {
            let affected: Vec<usize> =
                (0..pending.len()).filter(|&k| views[pending[k]].involves(i)).collect();
            let uniforms = eval.uniforms(i + 1);
            let mut on = prefix.clone();
            on.push(true);
            let mut off = prefix.clone();
            off.push(false);
            let branches = opts.exec.map(&affected, |&k| -> Result<(f64, f64)> {
                let w = pending[k];
                Ok((
                    eval.probability(w, &on, uniforms.as_ref())?,
                    eval.probability(w, &off, uniforms.as_ref())?,
                ))
            });
            let branches = branches.into_iter().collect::<Result<Vec<(f64, f64)>>>()?;

            let (mut e_true, mut e_false) = (0.0, 0.0);
            let mut next = branches.iter().zip(&affected).peekable();
            for (k, &q) in prob.iter().enumerate() {
                match next.peek() {
                    Some(&(&(t, f), &a)) if a == k => {
                        e_true += t;
                        e_false += f;
                        next.next();
                    }
                    _ => {
                        e_true += q;
                        e_false += q;
                    }
                }
            }
            let transmit = e_true > e_false;
            for (&(t, f), &k) in branches.iter().zip(&affected) {
                prob[k] = if transmit { t } else { f };
            }
            prefix.push(transmit);
            steps.push(GreedyStep { slot, transmitter: i, p, e_true, e_false, transmit });
        }

        let before = buckets[round].len();
        buckets[round].retain(|&w| !inst.is_selected(&prefix, w));
        slots.push(SlotSummary {
            slot,
            round,
            p,
            pending: before,
            expected,
            selected: before - buckets[round].len(),
        });
        schedule.push_mask(&prefix);
        round += 1;
    }
    Ok(DeterministicOutcome { schedule, buckets: initial, steps, slots })
}

struct Evaluator<'a> {
    views: &'a [ReceiverView],
    mode: ExpectationMode,
    p: f64,
    slot: usize,
}

impl Evaluator<'_> {
    /// Uniforms for greedy step `step` of this slot (Monte Carlo only).
    fn uniforms(&self, step: usize) -> Option<Uniforms> {
        match self.mode {
            ExpectationMode::Exact => None,
            ExpectationMode::MonteCarlo { samples, seed } => {
                let key = rng::mix(rng::mix(seed, self.slot as u64), step as u64);
                Some(Uniforms::generate(samples, self.views.len(), key))
            }
        }
    }

    fn probability(&self, w: usize, prefix: &[bool], uniforms: Option<&Uniforms>) -> Result<f64> {
        match uniforms {
            None => self.views[w]
                .exact(prefix, self.p)
                .map_err(|relevant| Error::Capacity { receiver: w + 1, relevant, limit: K_EXACT }),
            Some(u) => Ok(self.views[w].sampled(prefix, self.p, u)),
        }
    }
}
