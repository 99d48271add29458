use proptest::prelude::*;

use selfadjust::analysis::{audit_access, sol_potential, PotentialLedger, WeightMap};
use selfadjust::harness::{Workload, WorkloadKind};
use selfadjust::locality::{synthesize_local, verify_local};
use selfadjust::{Key, Transformer, TreeArena};

fn tree_and_accesses() -> impl Strategy<Value = (Vec<Key>, Vec<Key>)> {
    (1usize..40).prop_flat_map(|n| {
        (
            Just((1..=n as Key).collect::<Vec<_>>()).prop_shuffle(),
            prop::collection::vec(1..=n as Key, 1..30),
        )
    })
}

fn transformer() -> impl Strategy<Value = Transformer> {
    prop::sample::select(Transformer::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn accesses_keep_a_valid_bst((order, accesses) in tree_and_accesses(), t in transformer()) {
        let mut tree = TreeArena::from_insertion_order(&order).unwrap();
        let keys = tree.in_order();
        for s in accesses {
            let depth = tree.depth(s).unwrap();
            let (path, after) = t.access(&mut tree, s).unwrap();
            prop_assert_eq!(path.len(), depth + 1);
            prop_assert_eq!(after.len(), path.len());
            prop_assert_eq!(tree.root_key(), Some(s));
            prop_assert!(tree.validate_bst());
            prop_assert_eq!(tree.in_order(), keys.clone());
        }
    }

    #[test]
    fn ledger_tracks_the_potential((order, accesses) in tree_and_accesses(), t in transformer(), seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut tree = TreeArena::from_insertion_order(&order).unwrap();
        let w = WeightMap::random(order.len(), &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let mut ledger = PotentialLedger::new(&tree, w.clone()).unwrap();
        for s in accesses {
            let out = ledger.access(&mut tree, t, s).unwrap();
            let phi = sol_potential(&tree, &w).unwrap();
            prop_assert!((ledger.phi() - phi).abs() <= 1e-7 * phi.abs().max(1.0));
            prop_assert!((out.phi_after - phi).abs() <= 1e-7 * phi.abs().max(1.0));
            let slacks = audit_access(t, &out.weights, &out.path, &out.after).unwrap();
            prop_assert!(slacks.failures().is_empty(), "{:?}", slacks);
        }
    }

    #[test]
    fn synthesized_decompositions_verify((order, accesses) in tree_and_accesses(), t in transformer()) {
        let mut tree = TreeArena::from_insertion_order(&order).unwrap();
        for s in accesses {
            let (path, after) = t.access(&mut tree, s).unwrap();
            let dec = synthesize_local(&path, &after).unwrap();
            prop_assert_eq!(verify_local(&path, &after, &dec, dec.window()).unwrap(), None);
        }
    }

    #[test]
    fn workloads_are_deterministic(n in 1usize..200, m in 0usize..300, seed in any::<u64>(), alpha in 0.1f64..3.0) {
        for kind in [WorkloadKind::Sequential, WorkloadKind::Uniform, WorkloadKind::Zipf(alpha), WorkloadKind::PermutationRepeat] {
            let w = Workload::new(kind, n, m, seed);
            let a = w.keys().unwrap();
            prop_assert_eq!(a.len(), m);
            prop_assert!(a.iter().all(|&k| k >= 1 && k <= n as Key));
            prop_assert_eq!(a, w.keys().unwrap());
        }
    }
}
