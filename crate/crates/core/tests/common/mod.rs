#![allow(dead_code)]

use layercast::{AffectanceMatrix, Instance, LayerTopology};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random layer with `n` transmitters and receivers, neighborhoods of size
/// `1..=max_degree`, and each possible interferer present with probability
/// `density`. Values are uniform on `[0, 1]` with occasional exact 0.5 and 1.
pub fn random_instance(n: usize, max_degree: usize, density: f64, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<usize> = (0..n).collect();
    let mut links = Vec::new();
    for w in 0..n {
        let k = rng.gen_range(1..=max_degree.min(n));
        for &v in all.choose_multiple(&mut rng, k) {
            links.push((v, w));
        }
    }
    let topo = LayerTopology::new(n, links.iter().copied()).unwrap();
    let mut entries = Vec::new();
    for &(v, w) in &links {
        for u in 0..n {
            if u == v || !rng.gen_bool(density) {
                continue;
            }
            let a = match rng.gen_range(0..10) {
                0 => 1.0,
                1 => 0.5,
                _ => rng.gen::<f64>(),
            };
            entries.push((u, (v, w), a));
        }
    }
    let matrix = AffectanceMatrix::new(&topo, entries).unwrap();
    Instance::new(topo, matrix)
}

/// Probability that `w` is selected, by enumerating every outcome of the
/// undecided transmitters `frontier..n` through `Instance::is_selected`.
pub fn enumerate_selection_probability(inst: &Instance, w: usize, prefix: &[bool], p: f64) -> f64 {
    let n = inst.n();
    let free = n - prefix.len();
    assert!(free <= 16, "enumeration oracle limited to 16 free transmitters");
    let mut total = 0.0;
    let mut active = vec![false; n];
    active[..prefix.len()].copy_from_slice(prefix);
    for bits in 0u32..(1 << free) {
        let mut weight = 1.0;
        for k in 0..free {
            let on = bits >> k & 1 == 1;
            active[prefix.len() + k] = on;
            weight *= if on { p } else { 1.0 - p };
        }
        if inst.is_selected(&active, w) {
            total += weight;
        }
    }
    total
}

/// Independent per-slot recomputation of who a schedule selects.
pub fn covered_by_slots(inst: &Instance, slots: &[Vec<usize>]) -> Vec<bool> {
    let n = inst.n();
    let mut covered = vec![false; n];
    for slot in slots {
        let mut active = vec![false; n];
        for &u in slot {
            active[u] = true;
        }
        for w in 0..n {
            let topo = inst.topology();
            let hit = topo.neighbors(w).iter().any(|&v| {
                active[v] && {
                    let total: f64 = (0..n)
                        .filter(|&u| active[u])
                        .map(|u| inst.affectance(u, (v, w)).unwrap())
                        .sum();
                    total < 1.0
                }
            });
            covered[w] |= hit;
        }
    }
    covered
}
