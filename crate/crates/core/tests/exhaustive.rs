//! Exhaustive small-instance checks against brute-force oracles.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use selfadjust::analysis::{sol_potential, WeightMap};
use selfadjust::fixtures::{all_paths, all_trees};
use selfadjust::{AfterTree, Key, Side, Transformer, TreeArena};

const CATALAN: [usize; 8] = [1, 1, 2, 5, 14, 42, 132, 429];

fn random_tree(n: usize, seed: u64) -> TreeArena {
    let mut keys: Vec<Key> = (1..=n as Key).collect();
    keys.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    TreeArena::from_insertion_order(&keys).unwrap()
}

/// `shape` over `1..=len` relabelled onto the sorted `keys`.
fn relabel(shape: &TreeArena, keys: &[Key]) -> TreeArena {
    let mut sorted = keys.to_vec();
    sorted.sort_unstable();
    let map = |k: Key| sorted[k as usize - 1];
    let links: Vec<(Key, Option<Key>, Side)> = shape
        .nodes()
        .iter()
        .map(|n| match n.parent {
            None => (map(n.key), None, Side::Left),
            Some(p) => {
                let pk = shape.key(p);
                (
                    map(n.key),
                    Some(map(pk)),
                    if n.key < pk { Side::Left } else { Side::Right },
                )
            }
        })
        .collect();
    TreeArena::build(&links).unwrap()
}

fn subtree_sets(t: &TreeArena) -> HashMap<Key, BTreeSet<Key>> {
    t.in_order()
        .into_iter()
        .map(|k| (k, t.subtree_keys(k).unwrap().into_iter().collect()))
        .collect()
}

#[test]
fn tree_enumeration_is_catalan() {
    for (n, &c) in CATALAN.iter().enumerate().skip(1) {
        let trees = all_trees(n);
        assert_eq!(trees.len(), c, "n = {n}");
        let distinct: BTreeSet<String> = trees.iter().map(|t| t.to_string()).collect();
        assert_eq!(distinct.len(), c);
        assert!(trees
            .iter()
            .all(|t| t.validate_bst() && t.in_order() == (1..=n as Key).collect::<Vec<_>>()));
    }
}

#[test]
fn every_after_tree_restructures_correctly() {
    // Every path of length ≤ 5 inside a random tree, replaced by every BST on
    // the path keys rooted at the accessed key.
    let mut checked = 0;
    for seed in 0..40 {
        let base = random_tree(15, seed);
        for s in 1..=15 {
            let path = base.search_path(s).unwrap();
            if path.len() > 5 {
                continue;
            }
            let on_path: BTreeSet<Key> = path.keys().iter().copied().collect();
            let before = subtree_sets(&base);
            for shape in all_trees(path.len()) {
                let a = relabel(&shape, path.keys());
                if a.root_key() != Some(s) {
                    continue;
                }
                let after = AfterTree::new(&path, a.clone()).unwrap();
                let mut t = base.clone();
                t.apply_restructure(&path, &after).unwrap();
                checked += 1;
                assert!(t.validate_bst());
                assert_eq!(t.in_order(), base.in_order());
                assert_eq!(t.root_key(), Some(s));
                let now = subtree_sets(&t);
                for (k, set) in &before {
                    if !on_path.contains(k) {
                        assert_eq!(&now[k], set, "pendent subtree of {k} changed");
                    }
                }
                for k in path.keys() {
                    let induced: BTreeSet<Key> = now[k].intersection(&on_path).copied().collect();
                    let expected: BTreeSet<Key> = a.subtree_keys(*k).unwrap().into_iter().collect();
                    assert_eq!(induced, expected);
                }
            }
        }
    }
    assert!(checked > 1000, "{checked}");
}

#[test]
fn potential_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=7 {
        let w = WeightMap::random(n, &mut rng);
        for t in all_trees(n) {
            let brute: f64 = (1..=n as Key)
                .map(|k| {
                    t.subtree_keys(k)
                        .unwrap()
                        .iter()
                        .map(|&x| w.get(x))
                        .sum::<f64>()
                        .log2()
                })
                .sum();
            let phi = sol_potential(&t, &w).unwrap();
            assert!((phi - brute).abs() <= 1e-9 * brute.abs().max(1.0));
        }
    }
}

#[test]
fn rotate_to_root_equals_single_rotations() {
    for len in 1..=10 {
        for path in all_paths(len) {
            let mut t = path.to_tree();
            let s = path.accessed();
            while t.root_key() != Some(s) {
                t.rotate_up(s).unwrap();
            }
            assert!(
                t.same_shape(&Transformer::RotateToRoot.apply(&path)),
                "{:?}",
                path.keys()
            );
        }
    }
}

#[test]
fn transformers_produce_valid_after_trees() {
    for len in 1..=10 {
        for path in all_paths(len) {
            for t in Transformer::ALL {
                let a = t.apply(&path);
                assert!(a.validate_bst());
                assert_eq!(a.root_key(), Some(path.accessed()));
                assert_eq!(a.len(), path.len());
            }
        }
    }
}
