//! Invariants checked on random instances and random feasible matchings.

mod common;

use std::collections::HashMap;

use common::{literal_blocking_pairs, matching_fits, reference_delta, reference_pairs, set_fits};
use lcsm_core::generate::{generate, GeneratorConfig};
use lcsm_core::io::{read_instance, write_instance};
use lcsm_core::model::{blocking_pairs, is_feasible_matching, is_feasible_set, Instance, Matching};
use lcsm_core::oracle::random_feasible;
use lcsm_core::popularity::{
    apply_structure, correspondence, decompose, delta, reduced_decomposition, rewritten_delta, Side, TieBreak, Vertex,
};
use lcsm_core::stable::solve_stable_traced;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config() -> impl Strategy<Value = GeneratorConfig> {
    (any::<u64>(), 1usize..=7, 1usize..=4, 1u32..=3, 0.2f64..=1.0, 0usize..=3, 1usize..=3, 0.3f64..=1.0, any::<bool>())
        .prop_map(|(seed, r, h, cap, density, depth, branching, tightness, partition)| GeneratorConfig {
            seed,
            n_residents: r,
            n_hospitals: h,
            max_capacity: cap,
            edge_density: density,
            max_tree_depth: depth,
            class_branching: branching,
            quota_tightness: tightness,
            partition,
        })
}

/// An instance plus two random feasible matchings.
fn triple() -> impl Strategy<Value = (Instance, Matching, Matching)> {
    (config(), any::<u64>()).prop_map(|(c, seed)| {
        let inst = generate(&c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_feasible(&inst, &mut rng);
        let b = random_feasible(&inst, &mut rng);
        (inst, a, b)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn generated_instances_round_trip(c in config()) {
        let inst = generate(&c).unwrap();
        let text = write_instance(&inst);
        let again = read_instance(&text).unwrap();
        prop_assert_eq!(&again, &inst);
        prop_assert_eq!(write_instance(&again), text);
    }

    #[test]
    fn random_matchings_are_feasible((inst, a, b) in triple()) {
        prop_assert!(is_feasible_matching(&inst, &a) && matching_fits(&inst, &a));
        prop_assert!(is_feasible_matching(&inst, &b) && matching_fits(&inst, &b));
    }

    #[test]
    fn feasibility_is_downward_closed((inst, a, _b) in triple()) {
        for h in 0..inst.num_hospitals() {
            let set = a.residents_of(h);
            prop_assert_eq!(is_feasible_set(&inst, h, &set).unwrap(), set_fits(&inst, h, &set));
            for skip in 0..set.len() {
                let sub: Vec<usize> = set.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &r)| r).collect();
                prop_assert!(is_feasible_set(&inst, h, &sub).unwrap());
            }
        }
        for (r, _) in a.pairs() {
            let mut smaller = a.clone();
            smaller.assign(r, None);
            prop_assert!(is_feasible_matching(&inst, &smaller));
        }
    }

    #[test]
    fn blocking_pairs_match_the_definition((inst, a, _b) in triple()) {
        prop_assert_eq!(blocking_pairs(&inst, &a).unwrap(), literal_blocking_pairs(&inst, &a));
    }

    #[test]
    fn deferred_acceptance_is_stable_and_bounded(c in config()) {
        let inst = generate(&c).unwrap();
        let run = solve_stable_traced(&inst);
        prop_assert!(is_feasible_matching(&inst, &run.matching));
        prop_assert!(literal_blocking_pairs(&inst, &run.matching).is_empty());
        prop_assert!(run.proposals <= inst.num_edges());
    }

    #[test]
    fn correspondence_is_a_symmetric_cross_pairing((inst, a, b) in triple()) {
        let corr = correspondence(&inst, &a, &b, TieBreak::default()).unwrap();
        for h in 0..inst.num_hospitals() {
            let (ma, mb) = (a.residents_of(h), b.residents_of(h));
            let hc = &corr.hospitals[h];
            let mut paired = 0;
            for (r, p) in hc.paired() {
                prop_assert_eq!(hc.get(p), Some(r));
                prop_assert!(ma.contains(&r) != ma.contains(&p));
                prop_assert!(mb.contains(&r) != mb.contains(&p));
                paired += 1;
            }
            prop_assert_eq!(paired % 2, 0);
            let mut expected: Vec<(usize, usize)> = reference_pairs(&inst, h, &ma, &mb);
            expected.sort();
            let mut got: Vec<(usize, usize)> = hc.paired().filter(|(r, _)| ma.contains(r)).collect();
            got.sort();
            prop_assert_eq!(got, expected);
        }
    }

    #[test]
    fn delta_is_antisymmetric_and_zero_on_itself((inst, a, b) in triple()) {
        let ab = delta(&inst, &a, &b).unwrap();
        let ba = delta(&inst, &b, &a).unwrap();
        prop_assert_eq!(ab.delta, -ba.delta);
        prop_assert_eq!(delta(&inst, &a, &a).unwrap().delta, 0);
        prop_assert_eq!(ab.delta, reference_delta(&inst, &a, &b));
    }

    #[test]
    fn tally_bounds_and_rewrite((inst, a, b) in triple()) {
        let t = delta(&inst, &a, &b).unwrap();
        let sum: i64 = t.per_resident.iter().map(|&v| v as i64).sum::<i64>()
            + t.per_hospital.iter().map(|x| x.vote).sum::<i64>();
        prop_assert_eq!(sum, t.delta);
        for (h, x) in t.per_hospital.iter().enumerate() {
            prop_assert!(x.vote.unsigned_abs() <= (inst.capacity(h) - x.common - x.vacant) as u64);
        }
        let dec = decompose(&inst, &a, &b).unwrap();
        prop_assert_eq!(rewritten_delta(&dec), t.delta);
        prop_assert_eq!(rewritten_delta(&reduced_decomposition(&dec)), t.delta);
    }

    #[test]
    fn decomposition_covers_once_and_swaps_stay_feasible((inst, a, b) in triple()) {
        let dec = decompose(&inst, &a, &b).unwrap();
        let corr = correspondence(&inst, &a, &b, TieBreak::default()).unwrap();
        let mut seen: HashMap<(usize, usize, bool), usize> = HashMap::new();
        for s in &dec.structures {
            for e in &s.edges {
                *seen.entry((e.resident, e.hospital, e.side == Side::Current)).or_default() += 1;
                prop_assert_eq!(e.side == Side::Current, a.contains(e.resident, e.hospital));
                prop_assert_eq!(e.side == Side::Rival, b.contains(e.resident, e.hospital));
            }
            for slot in s.hospital_slots() {
                if let (Some(x), Some(y)) = (slot.rival, slot.current) {
                    prop_assert_eq!(corr.get(slot.hospital, s.edges[x].resident), Some(s.edges[y].resident));
                }
            }
            let walk = s.walk();
            for (i, e) in s.edges.iter().enumerate() {
                let ends = [walk[i], walk[i + 1]];
                prop_assert!(ends.contains(&Vertex::Resident(e.resident)));
                prop_assert!(ends.contains(&Vertex::Hospital(e.hospital)));
            }
            prop_assert!(is_feasible_matching(&inst, &apply_structure(&a, s)));
        }
        let expected = (0..inst.num_residents())
            .filter(|&r| a.hospital_of(r) != b.hospital_of(r))
            .map(|r| a.hospital_of(r).is_some() as usize + b.hospital_of(r).is_some() as usize)
            .sum::<usize>();
        prop_assert_eq!(seen.len(), expected);
        prop_assert!(seen.values().all(|&n| n == 1));
    }
}
