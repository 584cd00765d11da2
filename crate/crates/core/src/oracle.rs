//! Exhaustive reference computations for small instances.
//!
//! These are deliberately naive and serve as ground truth for the fast paths
//! in [`crate::characterize`] and the schedule generators.

use crate::affectance::Instance;
use crate::error::{Error, Result};
use crate::schedule::Schedule;

/// Largest `n` accepted by [`brute_force_min_selective`].
pub const MAX_BRUTE_FORCE_N: usize = 10;

/// `Ā_w` straight from the definition: the maximum over every nonempty
/// `F ⊆ F_w` of `Σ_{v∈F} Σ_u a(u,(v,w)) / |F|`.
///
/// Exponential in `|F_w|`; panics above 24 neighbors.
pub fn brute_force_max_avg_affectance(inst: &Instance, w: usize) -> f64 {
    let f = inst.topology().neighbors(w);
    assert!(f.len() <= 24, "subset enumeration over {} neighbors", f.len());
    let loads: Vec<f64> = f
        .iter()
        .map(|&v| (0..inst.n()).map(|u| inst.affectance(u, (v, w)).unwrap()).sum())
        .collect();
    let mut best = f64::NEG_INFINITY;
    for subset in 1u32..(1 << f.len()) {
        let (sum, count) = loads
            .iter()
            .enumerate()
            .filter(|(k, _)| subset & (1 << k) != 0)
            .fold((0.0, 0usize), |(s, c), (_, &l)| (s + l, c + 1));
        best = best.max(sum / count as f64);
    }
    best
}

/// A shortest selective schedule with at most `max_slots` slots, or `None`.
///
/// Candidate slots are ordered by their membership bitmask (transmitter `u`
/// is bit `u`); shorter schedules are tried first and the first hit in that
/// order is returned. Slots whose covered receiver set is contained in
/// another slot's are skipped, which never lengthens the optimum.
pub fn brute_force_min_selective(inst: &Instance, max_slots: usize) -> Result<Option<Schedule>> {
    let n = inst.n();
    if n > MAX_BRUTE_FORCE_N {
        return Err(Error::Budget { n, limit: MAX_BRUTE_FORCE_N });
    }
    let full: u32 = (1 << n) - 1;

    let mut first_for_cover: Vec<Option<u32>> = vec![None; 1 << n];
    let mut mask = vec![false; n];
    for subset in 1u32..=full {
        for (u, m) in mask.iter_mut().enumerate() {
            *m = subset & (1 << u) != 0;
        }
        let cover = (0..n)
            .filter(|&w| inst.is_selected(&mask, w))
            .fold(0u32, |acc, w| acc | (1 << w));
        if cover != 0 && first_for_cover[cover as usize].is_none() {
            first_for_cover[cover as usize] = Some(subset);
        }
    }
    let covers: Vec<u32> = (1..=full).filter(|&c| first_for_cover[c as usize].is_some()).collect();
    let mut candidates: Vec<(u32, u32)> = covers
        .iter()
        .filter(|&&c| !covers.iter().any(|&o| o != c && o & c == c))
        .map(|&c| (first_for_cover[c as usize].unwrap(), c))
        .collect();
    candidates.sort_unstable();

    let mut chosen = Vec::new();
    for len in 1..=max_slots {
        if search(&candidates, 0, len, 0, full, &mut chosen) {
            let slots = chosen
                .iter()
                .map(|&k| {
                    let subset = candidates[k].0;
                    (0..n).filter(|&u| subset & (1 << u) != 0).collect()
                })
                .collect();
            return Schedule::new(n, slots).map(Some);
        }
    }
    Ok(None)
}

fn search(
    candidates: &[(u32, u32)],
    start: usize,
    remaining: usize,
    covered: u32,
    full: u32,
    chosen: &mut Vec<usize>,
) -> bool {
    if covered == full {
        return true;
    }
    if remaining == 0 {
        return false;
    }
    for k in start..candidates.len() {
        chosen.push(k);
        if search(candidates, k + 1, remaining - 1, covered | candidates[k].1, full, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}
