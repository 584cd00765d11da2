mod common;

use common::{covered_by_slots, enumerate_selection_probability, random_instance};
use layercast::characterize::{base_for, failure_constant};
use layercast::oracle::brute_force_max_avg_affectance;
use layercast::protocols::deterministic::receiver_buckets;
use layercast::protocols::{
    deterministic_schedule, exact_selection_probability, mc_selection_probability, randomized_schedule,
    ExpectationMode, PartialAssignment, RandomizedParams,
};
use layercast::sim::{run_schedule, sweep, ProtocolSpec, SweepInstance, SweepOptions};
use layercast::{characterize, encode_radio_network, mask_of, max_avg_affectance_w, AffectanceMatrix, Instance, Schedule};
use proptest::prelude::*;

fn dyadic(inst: &Instance) -> Instance {
    let topo = inst.topology().clone();
    let entries: Vec<_> = inst.entries().map(|(u, l, a)| (u, l, (a * 1024.0).round() / 1024.0)).collect();
    let matrix = AffectanceMatrix::new(&topo, entries).unwrap();
    Instance::new(topo, matrix)
}

fn without_outgoing(inst: &Instance, silent: usize) -> Instance {
    let topo = inst.topology().clone();
    let entries: Vec<_> = inst.entries().filter(|&(u, _, _)| u != silent).collect();
    let matrix = AffectanceMatrix::new(&topo, entries).unwrap();
    Instance::new(topo, matrix)
}

fn subset(n: usize, bits: u64) -> Vec<bool> {
    (0..n).map(|u| bits >> u & 1 == 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn additivity_over_disjoint_sets(seed in any::<u64>(), n in 1usize..9, t1 in any::<u64>(), t2 in any::<u64>()) {
        let raw = random_instance(n, n, 0.7, seed);
        let t2 = t2 & !t1;
        for inst in [dyadic(&raw), raw] {
            let exact = inst.entries().all(|(_, _, a)| (a * 1024.0).fract() == 0.0);
            let (a, b) = (subset(n, t1), subset(n, t2));
            let both: Vec<bool> = a.iter().zip(&b).map(|(x, y)| *x || *y).collect();
            for link in inst.topology().links() {
                let whole = inst.total_affectance(&both, link).unwrap();
                let parts = inst.total_affectance(&a, link).unwrap() + inst.total_affectance(&b, link).unwrap();
                if exact {
                    prop_assert_eq!(whole, parts);
                } else {
                    prop_assert!((whole - parts).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn affectance_is_monotone_in_the_active_set(seed in any::<u64>(), n in 1usize..9, t in any::<u64>(), extra in any::<u64>()) {
        let inst = random_instance(n, n, 0.7, seed);
        let small = subset(n, t);
        let large = subset(n, t | extra);
        for link in inst.topology().links() {
            prop_assert!(inst.total_affectance(&small, link).unwrap() <= inst.total_affectance(&large, link).unwrap());
            if inst.is_successful(&large, link).unwrap() && small[link.0] {
                prop_assert!(inst.is_successful(&small, link).unwrap());
            }
        }
    }

    #[test]
    fn singleton_collapse_matches_subset_enumeration(seed in any::<u64>(), n in 1usize..14) {
        let inst = random_instance(n, n.min(12), 0.6, seed);
        for w in 0..n {
            let fast = max_avg_affectance_w(&inst, w).unwrap();
            let slow = brute_force_max_avg_affectance(&inst, w);
            prop_assert!((fast - slow).abs() <= 1e-12 * slow.abs().max(1.0));
        }
    }

    #[test]
    fn verify_selective_agrees_with_slot_reevaluation(seed in any::<u64>(), n in 1usize..8, masks in prop::collection::vec(any::<u64>(), 0..6)) {
        let inst = random_instance(n, n, 0.5, seed);
        let slots: Vec<Vec<usize>> = masks.iter().map(|&m| (0..n).filter(|u| m >> u & 1 == 1).collect()).collect();
        let schedule = Schedule::new(n, slots.clone()).unwrap();
        let report = inst.verify_selective(&schedule);
        let covered = covered_by_slots(&inst, &slots);
        for w in 0..n {
            prop_assert_eq!(report.covered.contains(&w), covered[w]);
            prop_assert_eq!(report.uncovered.contains(&w), !covered[w]);
        }
    }

    #[test]
    fn exact_probability_matches_outcome_enumeration(seed in any::<u64>(), n in 1usize..9, decided in 0usize..9, bits in any::<u64>(), p in 0.0f64..=1.0) {
        let inst = random_instance(n, n, 0.6, seed);
        let prefix = subset(decided.min(n), bits);
        let assign = PartialAssignment::from_prefix(n, &prefix);
        for w in 0..n {
            let q = exact_selection_probability(&inst, w, &assign, p).unwrap();
            let oracle = enumerate_selection_probability(&inst, w, &prefix, p);
            prop_assert!((0.0..=1.0).contains(&q));
            prop_assert!((q - oracle).abs() <= 1e-12, "w={} q={} oracle={}", w, q, oracle);
        }
    }

    #[test]
    fn transmitting_without_interference_never_hurts(seed in any::<u64>(), n in 2usize..9, bits in any::<u64>(), p in 0.05f64..0.95) {
        let inst = without_outgoing(&random_instance(n, n, 0.6, seed), 0);
        let rest = subset(n, bits);
        let mut off = rest.clone();
        off[0] = false;
        let mut on = rest;
        on[0] = true;
        let decided = 1 + (bits as usize >> 32) % n;
        for w in 0..n {
            if !inst.topology().neighbors(w).contains(&0) {
                continue;
            }
            let lo = exact_selection_probability(&inst, w, &PartialAssignment::from_prefix(n, &off[..decided]), p).unwrap();
            let hi = exact_selection_probability(&inst, w, &PartialAssignment::from_prefix(n, &on[..decided]), p).unwrap();
            prop_assert!(hi >= lo - 1e-12, "w={} lo={} hi={}", w, lo, hi);
        }
    }

    #[test]
    fn radio_network_encoding_selects_exactly_one(n in 1usize..7, hoods in prop::collection::vec(1u64..64, 6), t in any::<u64>()) {
        let neighborhoods: Vec<Vec<usize>> = hoods[..n]
            .iter()
            .map(|&h| {
                let set: Vec<usize> = (0..n).filter(|u| h >> u & 1 == 1).collect();
                if set.is_empty() { vec![0] } else { set }
            })
            .collect();
        let inst = encode_radio_network(n, &neighborhoods).unwrap();
        let active = subset(n, t);
        for w in 0..n {
            let hits = neighborhoods[w].iter().filter(|&&v| active[v]).count();
            prop_assert_eq!(inst.is_selected(&active, w), hits == 1);
        }
    }

    #[test]
    fn randomized_schedule_shape(seed in any::<u64>(), n in 1usize..12, s in any::<u64>()) {
        let inst = random_instance(n, n, 0.5, seed);
        let ch = characterize(&inst, None).unwrap();
        let sched = randomized_schedule(&RandomizedParams::new(ch.clone(), s), n).unwrap();
        prop_assert_eq!(sched.len(), ch.phases * ch.m);
        let full: Vec<usize> = (0..n).collect();
        for slot in &sched.slots()[..ch.m] {
            prop_assert_eq!(slot, &full);
        }
    }

    #[test]
    fn bucket_partition_is_sound(seed in any::<u64>(), n in 1usize..12) {
        let inst = random_instance(n, n, 0.6, seed);
        let ch = characterize(&inst, None).unwrap();
        let buckets = receiver_buckets(&ch);
        let mut seen = vec![0; n];
        for bucket in &buckets {
            for &w in bucket {
                seen[w] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&k| k == 1));
    }

    #[test]
    fn runs_replay_and_coverage_grows(seed in any::<u64>(), n in 1usize..9, s in any::<u64>()) {
        let inst = random_instance(n, n, 0.5, seed);
        let ch = characterize(&inst, None).unwrap();
        let sched = randomized_schedule(&RandomizedParams::new(ch, s), n).unwrap();
        let record = run_schedule(&inst, &sched);
        prop_assert!(record.replays(&inst));
        if let Some(r) = record.completion_round() {
            prop_assert!(r <= sched.len());
        }
        let mut last = 0;
        for j in (0..=sched.len()).step_by(sched.len().div_ceil(8).max(1)) {
            let covered = covered_by_slots(&inst, &sched.slots()[..j]);
            let count = covered.iter().filter(|&&c| c).count();
            prop_assert!(count >= last);
            last = count;
            for w in 0..n {
                prop_assert_eq!(covered[w], record.first_success[w].is_some_and(|f| f <= j));
            }
        }
    }
}

#[test]
fn constants_in_range_for_c_up_to_one_hundred() {
    for k in 1..=990 {
        let c = 1.0 + k as f64 * 0.1;
        let b = base_for(c);
        let d = failure_constant(b);
        assert!(b > 1.0 && b < 1.5, "c = {c}");
        assert!(d < 1.0, "c = {c}");
    }
}

#[test]
fn greedy_dominance_and_determinism_on_random_instances() {
    for seed in 0..40 {
        let n = 2 + seed as usize % 6;
        let inst = random_instance(n, n, 0.6, seed);
        let ch = characterize(&inst, None).unwrap();
        let opts = layercast::protocols::DeterministicOptions::default();
        let out = layercast::protocols::deterministic_schedule_with(&inst, &ch, &opts).unwrap();
        for step in &out.steps {
            assert!(step.dominates_average(1e-12), "seed {seed}: {step:?}");
        }
        assert!(inst.verify_selective(&out.schedule).is_selective());
        let again = deterministic_schedule(&inst, &ch, ExpectationMode::Exact).unwrap();
        assert_eq!(again.to_text(), out.schedule.to_text());
    }
}

#[test]
fn monte_carlo_tracks_exact_within_five_standard_errors() {
    let samples = 4096;
    let mut checked = 0;
    for trial in 0..100u64 {
        let n = 2 + trial as usize % 7;
        let inst = random_instance(n, n, 0.6, 1000 + trial);
        let decided = trial as usize % n;
        let prefix = subset(decided, trial.wrapping_mul(0x9e37_79b9));
        let assign = PartialAssignment::from_prefix(n, &prefix);
        let p = 0.1 + 0.8 * (trial as f64 / 100.0);
        let w = trial as usize % n;
        let exact = exact_selection_probability(&inst, w, &assign, p).unwrap();
        let mc = mc_selection_probability(&inst, w, &assign, p, samples, trial).unwrap();
        let se = (exact * (1.0 - exact) / samples as f64).sqrt();
        assert!((mc - exact).abs() <= 5.0 * se + 1e-12, "trial {trial}: mc {mc} exact {exact}");
        checked += 1;
    }
    assert_eq!(checked, 100);
}

#[test]
fn seed_change_leaves_other_runs_untouched() {
    let inst = random_instance(7, 4, 0.5, 3);
    let instances = [SweepInstance::new("r7", inst)];
    let protocols = [ProtocolSpec::randomized(), ProtocolSpec::Decay, ProtocolSpec::Sinr { density: None, dilution: None }];
    let opts = SweepOptions::default();
    let a = sweep(&instances, &protocols, &[1, 2, 3], &opts).unwrap();
    let b = sweep(&instances, &protocols, &[1, 77, 3], &opts).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        if x.row.seed != 2 {
            assert_eq!(x.row, y.row);
        }
    }
}

#[test]
fn mask_helper_marks_members() {
    assert_eq!(mask_of(4, &[1, 3]), vec![false, true, false, true]);
}
