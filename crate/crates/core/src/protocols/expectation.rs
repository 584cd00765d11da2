//! Selection probabilities under a partial transmit/silent assignment.
//!
//! Transmitters below the assignment frontier act as decided; every other
//! transmitter transmits independently with probability `p`. Only transmitters
//! that can change receiver `w`'s outcome need to be randomized: those in
//! `F_w` and those with nonzero affectance on some link into `w`. That set,
//! restricted to undecided transmitters, is the relevant set `R_w`.

use rand::Rng;

use crate::affectance::Instance;
use crate::error::{Error, Result};
use crate::rng;

/// Largest `|R_w|` enumerated exactly (`2^20` outcomes).
pub const K_EXACT: usize = 20;

/// Default sample count for the Monte Carlo engine.
pub const DEFAULT_MC_SAMPLES: usize = 4096;

/// Decisions for transmitters `0..frontier`; the rest are undecided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAssignment {
    n: usize,
    decided: Vec<bool>,
}

impl PartialAssignment {
    pub fn new(n: usize) -> Self {
        Self { n, decided: Vec::with_capacity(n) }
    }

    /// Assignment with the given decisions for `0..prefix.len()`.
    pub fn from_prefix(n: usize, prefix: &[bool]) -> Self {
        assert!(prefix.len() <= n);
        Self { n, decided: prefix.to_vec() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of decided transmitters.
    pub fn frontier(&self) -> usize {
        self.decided.len()
    }

    pub fn state(&self, u: usize) -> Option<bool> {
        self.decided.get(u).copied()
    }

    /// Decides the next transmitter.
    pub fn push(&mut self, transmit: bool) {
        assert!(self.decided.len() < self.n, "assignment already complete");
        self.decided.push(transmit);
    }

    pub fn prefix(&self) -> &[bool] {
        &self.decided
    }
}

/// Receiver `w` projected onto its relevant transmitters.
#[derive(Debug, Clone)]
pub(crate) struct ReceiverView {
    /// Ascending transmitter indices that can influence `w`.
    relevant: Vec<usize>,
    /// Per link `(v,w)`: position of `v` in `relevant` and the column
    /// `(position of u, a(u,(v,w)))`, ascending in `u`.
    links: Vec<(usize, Vec<(usize, f64)>)>,
}

impl ReceiverView {
    pub(crate) fn new(inst: &Instance, w: usize) -> Self {
        let topo = inst.topology();
        let mut relevant: Vec<usize> = topo.neighbors(w).to_vec();
        for id in topo.link_ids(w) {
            relevant.extend(inst.matrix().column(id).iter().map(|&(u, _)| u));
        }
        relevant.sort_unstable();
        relevant.dedup();
        let pos = |u: usize| relevant.binary_search(&u).unwrap();
        let links = topo
            .neighbors(w)
            .iter()
            .zip(topo.link_ids(w))
            .map(|(&v, id)| {
                let col = inst.matrix().column(id).iter().map(|&(u, a)| (pos(u), a)).collect();
                (pos(v), col)
            })
            .collect();
        Self { relevant, links }
    }

    pub(crate) fn involves(&self, u: usize) -> bool {
        self.relevant.binary_search(&u).is_ok()
    }

    /// Same predicate as [`Instance::is_selected`], on the projected state.
    fn selected(&self, state: &[bool]) -> bool {
        self.links.iter().any(|(v, col)| {
            if !state[*v] {
                return false;
            }
            let mut total = 0.0;
            for &(u, a) in col {
                if state[u] {
                    total += a;
                }
            }
            total < 1.0
        })
    }

    /// Splits relevant positions into a state vector (decided entries filled)
    /// and the list of free positions.
    fn project(&self, prefix: &[bool]) -> (Vec<bool>, Vec<usize>) {
        let mut state = vec![false; self.relevant.len()];
        let mut free = Vec::new();
        for (k, &u) in self.relevant.iter().enumerate() {
            match prefix.get(u) {
                Some(&on) => state[k] = on,
                None => free.push(k),
            }
        }
        (state, free)
    }

    /// Exact probability by enumerating the outcomes of the free transmitters.
    /// `Err(count)` when more than [`K_EXACT`] are free and `0 < p < 1`.
    pub(crate) fn exact(&self, prefix: &[bool], p: f64) -> std::result::Result<f64, usize> {
        let (mut state, free) = self.project(prefix);
        if free.is_empty() || p >= 1.0 || p <= 0.0 {
            for &k in &free {
                state[k] = p >= 1.0;
            }
            return Ok(if self.selected(&state) { 1.0 } else { 0.0 });
        }
        if free.len() > K_EXACT {
            return Err(free.len());
        }
        let r = free.len();
        let weight: Vec<f64> = (0..=r)
            .map(|k| p.powi(k as i32) * (1.0 - p).powi((r - k) as i32))
            .collect();
        // Gray-code walk: one free transmitter flips per outcome.
        let mut on = 0usize;
        let mut total = 0.0;
        for g in 0u32..(1u32 << r) {
            if g > 0 {
                let bit = g.trailing_zeros() as usize;
                let k = free[bit];
                state[k] = !state[k];
                if state[k] {
                    on += 1;
                } else {
                    on -= 1;
                }
            }
            if self.selected(&state) {
                total += weight[on];
            }
        }
        // rounding can push a certain event a few ulps past 1
        Ok(total.min(1.0))
    }

    /// Monte Carlo estimate: free transmitter `u` transmits in sample `s` iff
    /// `uniforms.get(s, u) < p`.
    pub(crate) fn sampled(&self, prefix: &[bool], p: f64, uniforms: &Uniforms) -> f64 {
        let (mut state, free) = self.project(prefix);
        let mut hits = 0usize;
        for s in 0..uniforms.samples {
            for &k in &free {
                state[k] = uniforms.get(s, self.relevant[k]) < p;
            }
            if self.selected(&state) {
                hits += 1;
            }
        }
        hits as f64 / uniforms.samples as f64
    }
}

/// Fixed per-(sample, transmitter) uniforms shared by paired evaluations.
#[derive(Debug, Clone)]
pub(crate) struct Uniforms {
    samples: usize,
    n: usize,
    values: Vec<f64>,
}

impl Uniforms {
    pub(crate) fn generate(samples: usize, n: usize, seed: u64) -> Self {
        let mut stream = rng::substream(seed, 0);
        let values = (0..samples * n).map(|_| stream.gen::<f64>()).collect();
        Self { samples, n, values }
    }

    fn get(&self, sample: usize, u: usize) -> f64 {
        self.values[sample * self.n + u]
    }
}

/// Exact probability that receiver `w` is selected when undecided
/// transmitters transmit independently with probability `p`.
pub fn exact_selection_probability(
    inst: &Instance,
    w: usize,
    assign: &PartialAssignment,
    p: f64,
) -> Result<f64> {
    check_args(inst, w, assign, p)?;
    ReceiverView::new(inst, w)
        .exact(assign.prefix(), p)
        .map_err(|relevant| Error::Capacity { receiver: w + 1, relevant, limit: K_EXACT })
}

/// Monte Carlo estimate of [`exact_selection_probability`] from `samples`
/// draws seeded by `seed`.
pub fn mc_selection_probability(
    inst: &Instance,
    w: usize,
    assign: &PartialAssignment,
    p: f64,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    check_args(inst, w, assign, p)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    let uniforms = Uniforms::generate(samples, inst.n(), seed);
    Ok(ReceiverView::new(inst, w).sampled(assign.prefix(), p, &uniforms))
}

fn check_args(inst: &Instance, w: usize, assign: &PartialAssignment, p: f64) -> Result<()> {
    if w >= inst.n() {
        return Err(Error::IndexOutOfRange { index: w + 1, n: inst.n() });
    }
    if assign.n() != inst.n() {
        return Err(Error::InvalidParameter(format!(
            "assignment over {} transmitters for an instance with {}",
            assign.n(),
            inst.n()
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("probability {p} outside [0,1]")));
    }
    Ok(())
}
