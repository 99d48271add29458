use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::bst::{BeforePath, Key, Side, TreeArena};
use crate::error::{Error, Result};

/// Edges of the path whose endpoints lie on opposite sides of `s`; the edge
/// into `s` never counts.
pub fn side_alternations(path: &BeforePath) -> usize {
    let s = path.accessed();
    let k = path.keys();
    k[..k.len() - 1]
        .windows(2)
        .filter(|w| (w[0] < s) != (w[1] < s))
        .count()
}

/// `Z_i = {a_i, a_{i+1}}` for each alternation along the reversed path
/// `a_1, a_2, …` (without `s`), and their union `Z_P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZigzagSets {
    /// `(i, a_i, a_{i+1})` with `i` counted from 1.
    pub pairs: Vec<(usize, Key, Key)>,
    pub union: Vec<Key>,
}

pub fn zigzag_sets(path: &BeforePath) -> ZigzagSets {
    let s = path.accessed();
    let a: Vec<Key> = path.keys().iter().rev().skip(1).copied().collect();
    let pairs: Vec<(usize, Key, Key)> = a
        .windows(2)
        .enumerate()
        .filter(|(_, w)| (w[0] < s) != (w[1] < s))
        .map(|(i, w)| (i + 1, w[0], w[1]))
        .collect();
    let mut union: Vec<Key> = pairs.iter().flat_map(|p| [p.1, p.2]).collect();
    union.sort_unstable();
    union.dedup();
    ZigzagSets { pairs, union }
}

/// After-tree nodes other than `s` grouped by side and by right-depth
/// (keys above `s`) or left-depth (keys below `s`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotonePartition {
    pub left: BTreeMap<usize, Vec<Key>>,
    pub right: BTreeMap<usize, Vec<Key>>,
}

impl MonotonePartition {
    pub fn l_left(&self) -> usize {
        self.left.len()
    }

    pub fn l_right(&self) -> usize {
        self.right.len()
    }

    pub fn classes(&self) -> usize {
        self.left.len() + self.right.len()
    }

    /// All classes, left side first.
    pub fn sets(&self) -> impl Iterator<Item = (Side, usize, &Vec<Key>)> {
        self.left
            .iter()
            .map(|(d, v)| (Side::Left, *d, v))
            .chain(self.right.iter().map(|(d, v)| (Side::Right, *d, v)))
    }
}

/// Side depth of every key in one pass, indexed by node id.
fn side_depths(tree: &TreeArena) -> (Vec<usize>, Vec<usize>) {
    let mut l = vec![0; tree.len()];
    let mut r = vec![0; tree.len()];
    for id in tree.pre_order() {
        let n = tree.node(id);
        if let Some(c) = n.left {
            l[c] = l[id] + 1;
            r[c] = r[id];
        }
        if let Some(c) = n.right {
            l[c] = l[id];
            r[c] = r[id] + 1;
        }
    }
    (l, r)
}

pub fn monotone_partition(after: &TreeArena) -> MonotonePartition {
    let s = after.root_key().expect("non-empty after-tree");
    let (ld, rd) = side_depths(after);
    let mut part = MonotonePartition {
        left: BTreeMap::new(),
        right: BTreeMap::new(),
    };
    for id in after.pre_order() {
        let k = after.key(id);
        if k < s {
            part.left.entry(ld[id]).or_default().push(k);
        } else if k > s {
            part.right.entry(rd[id]).or_default().push(k);
        }
    }
    for v in part.left.values_mut().chain(part.right.values_mut()) {
        v.sort_unstable();
    }
    part
}

/// No element of `xs` is an ancestor of another in `tree`.
pub fn is_subtree_disjoint(tree: &TreeArena, xs: &[Key]) -> bool {
    let set: HashSet<Key> = xs.iter().copied().collect();
    if set.len() != xs.len() {
        return false;
    }
    xs.iter().all(|&x| {
        let mut id = match tree.id(x) {
            Some(id) => id,
            None => return false,
        };
        while let Some(p) = tree.node(id).parent {
            if set.contains(&tree.key(p)) {
                return false;
            }
            id = p;
        }
        true
    })
}

/// All of `xs` on one side of the root and at one side depth.
pub fn is_monotone(after: &TreeArena, xs: &[Key]) -> bool {
    let Some(s) = after.root_key() else {
        return false;
    };
    let Some(&first) = xs.first() else {
        return true;
    };
    if first == s || xs.iter().any(|&x| (x < s) != (first < s) || x == s) {
        return false;
    }
    let side = if first > s { Side::Right } else { Side::Left };
    let depth = |x| after.side_depth(x, side).ok();
    let d0 = depth(first);
    d0.is_some() && xs.iter().all(|&x| depth(x) == d0)
}

/// Partition of `P \ {s}` into subtree-disjoint and monotone sets, with the
/// budgets `k ≥ #disjoint` and `ℓ ≥ #monotone` used in the bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub disjoint: Vec<Vec<Key>>,
    pub monotone: Vec<Vec<Key>>,
    pub k: usize,
    pub l: usize,
}

impl Decomposition {
    /// After-tree leaves as one subtree-disjoint set, the remaining nodes by
    /// monotone class.
    pub fn leaves_and_classes(path: &BeforePath, after: &TreeArena) -> Self {
        let s = path.accessed();
        let leaves: Vec<Key> = after.leaves().into_iter().filter(|&k| k != s).collect();
        let leaf_set: HashSet<Key> = leaves.iter().copied().collect();
        let monotone: Vec<Vec<Key>> = monotone_partition(after)
            .sets()
            .map(|(_, _, v)| {
                v.iter()
                    .copied()
                    .filter(|k| !leaf_set.contains(k))
                    .collect::<Vec<_>>()
            })
            .filter(|v| !v.is_empty())
            .collect();
        Decomposition {
            l: monotone.len(),
            k: 1,
            disjoint: vec![leaves],
            monotone,
        }
    }

    /// Nodes grouped by depth in the after-tree; each depth class is
    /// subtree-disjoint. `k` is fixed to `⌈log₂(1+|P|)⌉ + 1`.
    pub fn depth_classes(path: &BeforePath, after: &TreeArena) -> Self {
        let depths = after.depths();
        let mut by_depth: BTreeMap<usize, Vec<Key>> = BTreeMap::new();
        for (id, &d) in depths.iter().enumerate() {
            if d > 0 {
                by_depth.entry(d).or_default().push(after.key(id));
            }
        }
        Decomposition {
            disjoint: by_depth.into_values().collect(),
            monotone: Vec::new(),
            k: ceil_log2(1 + path.len()) + 1,
            l: 0,
        }
    }

    /// Checks that the sets partition `P \ {s}`, have the declared kind and
    /// fit the budgets.
    pub fn validate(&self, path: &BeforePath, after: &TreeArena) -> Result<()> {
        let s = path.accessed();
        let mut seen = HashSet::new();
        for &k in self.disjoint.iter().chain(&self.monotone).flatten() {
            if k == s || !seen.insert(k) || path.depth_of(k).is_none() {
                return Err(Error::Precondition(format!(
                    "key {k} misplaced in decomposition"
                )));
            }
        }
        if seen.len() + 1 != path.len() {
            return Err(Error::Precondition(
                "decomposition does not cover P \\ {s}".into(),
            ));
        }
        if self.disjoint.len() > self.k || self.monotone.len() > self.l {
            return Err(Error::Precondition(
                "decomposition exceeds its budget".into(),
            ));
        }
        if !self.disjoint.iter().all(|d| is_subtree_disjoint(after, d)) {
            return Err(Error::NotSubtreeDisjoint);
        }
        if !self.monotone.iter().all(|m| is_monotone(after, m)) {
            return Err(Error::NotMonotone);
        }
        Ok(())
    }

    /// Union of all sets.
    pub fn keys(&self) -> Vec<Key> {
        self.disjoint
            .iter()
            .chain(&self.monotone)
            .flatten()
            .copied()
            .collect()
    }
}

pub fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}
