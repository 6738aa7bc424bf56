use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vsp_exact::{base_system, minimal_times, solve_exact, Propagator, SolveOptions};
use vsp_testkit::{positive_pairs, push_up, random_small_instance};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    /// Every node's bound is at most the objective of every schedule found
    /// below it.
    #[test]
    fn bounds_never_exceed_descendant_leaves(seed: u64) {
        let inst = random_small_instance(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        prop_assume!(positive_pairs(&inst).len() <= 14);
        let opts = SolveOptions { record_trace: true, exhaustive: true, ..Default::default() };
        let result = solve_exact(&inst, &opts).unwrap();
        let trace = &result.trace;
        let mut best_below = vec![f64::INFINITY; trace.len()];
        // parents precede children, so one reverse sweep suffices
        for id in (0..trace.len()).rev() {
            if let Some(leaf) = trace[id].leaf_objective {
                best_below[id] = best_below[id].min(leaf);
            }
            if let Some(p) = trace[id].parent {
                prop_assert!(p < id);
                best_below[p] = best_below[p].min(best_below[id]);
            }
        }
        for (node, best) in trace.iter().zip(&best_below) {
            prop_assert!(node.bound <= *best);
        }
        let pruned = solve_exact(&inst, &SolveOptions::default()).unwrap();
        prop_assert_eq!(pruned.objective, result.objective);
        prop_assert!(pruned.nodes <= result.nodes);
    }

    /// Incremental propagation agrees with the batch solution after random
    /// additions and undos.
    #[test]
    fn propagator_tracks_batch_solution(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_small_instance(&mut rng, 5);
        let (mut system, map) = base_system(&inst, None);
        let Ok(mut prop) = Propagator::new(&system) else { return Ok(()) };
        let pairs = positive_pairs(&inst);
        let mut marks = Vec::new();
        let mut snapshots = Vec::new();
        for &(a, b, s) in &pairs {
            let (va, vb) = (map.var(a), map.var(b));
            let (x, y) = if rng.random_bool(0.5) { (va, vb) } else { (vb, va) };
            let mark = prop.mark();
            let mut candidate = system.clone();
            candidate.add(x, y, s);
            let batch = minimal_times(&candidate);
            let added = prop.add(x, y, s);
            prop_assert_eq!(added, batch.is_ok());
            if added {
                prop_assert_eq!(prop.times(), &batch.unwrap()[..]);
                marks.push(mark);
                snapshots.push(system.clone());
                system = candidate;
            }
        }
        while let (Some(mark), Some(earlier)) = (marks.pop(), snapshots.pop()) {
            prop.undo(mark);
            prop_assert_eq!(prop.times(), &minimal_times(&earlier).unwrap()[..]);
        }
    }
}

/// Minimal times lie below every feasible assignment of a decided system.
#[test]
fn minimal_times_dominate_random_feasible_assignments() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut systems = 0;
    while systems < 25 {
        let inst = random_small_instance(&mut rng, 5);
        let (mut system, map) = base_system(&inst, None);
        for (a, b, s) in positive_pairs(&inst) {
            let (va, vb) = (map.var(a), map.var(b));
            if rng.random_bool(0.5) {
                system.add(va, vb, s);
            } else {
                system.add(vb, va, s);
            }
        }
        let Ok(minimal) = minimal_times(&system) else { continue };
        systems += 1;
        let diffs: Vec<_> = system.constraints().iter().map(|k| (k.x, k.y, k.c)).collect();
        let mut accepted = 0;
        for _ in 0..100_000 {
            let start: Vec<i64> = minimal.iter().map(|&m| m + rng.random_range(-60..=40)).collect();
            if let Some(t) = push_up(start, &diffs) {
                assert!(system.is_satisfied_by(&t));
                assert!(minimal.iter().zip(&t).all(|(m, v)| m <= v));
                accepted += 1;
                if accepted == 200 {
                    break;
                }
            }
        }
        assert_eq!(accepted, 200, "too few feasible samples");
    }
}
