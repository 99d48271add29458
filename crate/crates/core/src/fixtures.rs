//! Small hand-built instances shared by tests and the CLI.

use crate::bst::{AfterTree, BeforePath, Key, Side, TreeArena, TreeBuilder};

/// A twelve-node access with four side alternations: keys `a..g = 1..7`,
/// `s = 8`, `v..y = 9..12`. The after-tree has five leaves, `{a,c,f,v,y}`
/// is subtree-disjoint and `{d,e,g}`, `{b,f}`, `{x,y}`, `{w}` are monotone.
pub fn illustrative_access() -> (BeforePath, AfterTree) {
    use Side::*;
    let path = BeforePath::new(vec![12, 11, 1, 2, 3, 10, 4, 5, 6, 7, 9, 8]).expect("search path");
    let mut b = TreeBuilder::new(path.keys().iter().copied());
    b.root(8)
        .link(8, Left, 4)
        .link(4, Right, 5)
        .link(5, Right, 7)
        .link(7, Left, 6)
        .link(4, Left, 2)
        .link(2, Left, 1)
        .link(2, Right, 3)
        .link(8, Right, 10)
        .link(10, Left, 9)
        .link(10, Right, 12)
        .link(12, Left, 11);
    let after = AfterTree::new(&path, b.build().expect("valid tree")).expect("after-tree");
    (path, after)
}

/// Every search path with `len` nodes, as side patterns over keys `1..=len`.
pub fn all_paths(len: usize) -> impl Iterator<Item = BeforePath> {
    let edges = len.saturating_sub(1);
    (0u64..1 << edges).map(move |mask| {
        let sides: Vec<Side> = (0..edges)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    Side::Right
                } else {
                    Side::Left
                }
            })
            .collect();
        BeforePath::from_sides(&sides)
    })
}

fn shapes(lo: Key, hi: Key) -> Vec<Vec<(Key, Option<Key>, Side)>> {
    if lo > hi {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for r in lo..=hi {
        let (left, right) = (shapes(lo, r - 1), shapes(r + 1, hi));
        for l in &left {
            for rt in &right {
                let mut links = vec![(r, None, Side::Left)];
                for (sub, side) in [(l, Side::Left), (rt, Side::Right)] {
                    links.extend(sub.iter().map(|&(k, p, sd)| match p {
                        None => (k, Some(r), side),
                        _ => (k, p, sd),
                    }));
                }
                out.push(links);
            }
        }
    }
    out
}

/// Every BST over `1..=n`.
pub fn all_trees(n: usize) -> Vec<TreeArena> {
    if n == 0 {
        return Vec::new();
    }
    shapes(1, n as Key)
        .iter()
        .map(|links| TreeArena::build(links).expect("valid shape"))
        .collect()
}
