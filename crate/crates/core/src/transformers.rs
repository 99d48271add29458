//! Before-path to after-tree algorithms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bst::{AfterTree, BeforePath, Key, Side, TreeArena, TreeBuilder};
use crate::error::{Error, Result};

/// Path keys on each side of the accessed element, deepest first.
///
/// `right` is therefore increasing in key and `left` decreasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideSplit {
    pub s: Key,
    pub left: Vec<Key>,
    pub right: Vec<Key>,
}

impl SideSplit {
    pub fn new(path: &BeforePath) -> Self {
        let s = path.accessed();
        let mut left = Vec::new();
        let mut right = Vec::new();
        for &k in path.keys().iter().rev().skip(1) {
            if k < s {
                left.push(k);
            } else {
                right.push(k);
            }
        }
        SideSplit { s, left, right }
    }

    /// Keys of `side`, deepest first.
    pub fn side(&self, side: Side) -> &[Key] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Transformer {
    RotateToRoot,
    Splay,
    SplayClassic,
    PathBalance,
    Block3,
}

impl Transformer {
    pub const ALL: [Transformer; 5] = [
        Transformer::RotateToRoot,
        Transformer::Splay,
        Transformer::SplayClassic,
        Transformer::PathBalance,
        Transformer::Block3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Transformer::RotateToRoot => "rotate-to-root",
            Transformer::Splay => "splay",
            Transformer::SplayClassic => "splay-classic",
            Transformer::PathBalance => "path-balance",
            Transformer::Block3 => "block3",
        }
    }

    pub fn apply(self, path: &BeforePath) -> AfterTree {
        match self {
            Transformer::RotateToRoot => rotate_to_root(path),
            Transformer::Splay => splay_global(path),
            Transformer::SplayClassic => splay_classic(path),
            Transformer::PathBalance => path_balance(path),
            Transformer::Block3 => block3_depth_halving(path),
        }
    }

    /// Searches for `s`, restructures the path in place and returns the
    /// before-path and after-tree of the access.
    pub fn access(self, tree: &mut TreeArena, s: Key) -> Result<(BeforePath, AfterTree)> {
        let path = tree.search_path(s)?;
        let after = self.apply(&path);
        tree.apply_restructure(&path, &after)?;
        Ok((path, after))
    }
}

impl fmt::Display for Transformer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Transformer {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Transformer::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}

/// Collects parent links and finishes an after-tree; every transformer in
/// this module produces valid trees by construction.
struct Links {
    builder: TreeBuilder,
}

impl Links {
    fn new(path: &BeforePath) -> Self {
        let mut builder = TreeBuilder::new(path.keys().iter().copied());
        builder.root(path.accessed());
        Links { builder }
    }

    fn link(&mut self, parent: Key, side: Side, child: Key) {
        self.builder.link(parent, side, child);
    }

    /// Chains `keys` (top first) below `top` on `first`, continuing on `rest`.
    fn chain(&mut self, top: Key, first: Side, rest: Side, keys: &[Key]) {
        let mut parent = top;
        let mut side = first;
        for &k in keys {
            self.link(parent, side, k);
            parent = k;
            side = rest;
        }
    }

    fn finish(self, path: &BeforePath) -> AfterTree {
        let tree = self.builder.build().expect("transformer output is a BST");
        AfterTree::new(path, tree).expect("transformer output is an after-tree")
    }
}

/// Side of `s` a subtree hangs on, and the direction pointing back toward `s`.
fn inward(side: Side) -> Side {
    side.flip()
}

/// Roots `s`; each side becomes a chain in before-path ancestor order.
pub fn rotate_to_root(path: &BeforePath) -> AfterTree {
    let split = SideSplit::new(path);
    let mut links = Links::new(path);
    for side in [Side::Left, Side::Right] {
        let top_first: Vec<Key> = split.side(side).iter().rev().copied().collect();
        links.chain(split.s, side, inward(side), &top_first);
    }
    links.finish(path)
}

/// Splay in its global form: rotate-to-root, then for every pair
/// `(v_{2i+1}, v_{2i+2})` of the reversed path that lies on one side of `s`,
/// lift `v_{2i+2}` out of its chain and hang it outward below `v_{2i+1}`.
pub fn splay_global(path: &BeforePath) -> AfterTree {
    let s = path.accessed();
    let rev: Vec<Key> = path.keys().iter().rev().copied().collect();
    let mut lifted = std::collections::HashSet::new();
    let mut pairs = Vec::new();
    let mut i = 1;
    while i + 1 < rev.len() {
        let (a, b) = (rev[i], rev[i + 1]);
        if (a < s) == (b < s) {
            lifted.insert(b);
            pairs.push((a, b));
        }
        i += 2;
    }
    let split = SideSplit::new(path);
    let mut links = Links::new(path);
    for side in [Side::Left, Side::Right] {
        let top_first: Vec<Key> = split
            .side(side)
            .iter()
            .rev()
            .copied()
            .filter(|k| !lifted.contains(k))
            .collect();
        links.chain(s, side, inward(side), &top_first);
    }
    for (a, b) in pairs {
        let side = if b > s { Side::Right } else { Side::Left };
        links.link(a, side, b);
    }
    links.finish(path)
}

/// Bottom-up zig / zig-zig / zig-zag rotations on the path tree.
pub fn splay_classic(path: &BeforePath) -> AfterTree {
    let s = path.accessed();
    let mut t = path.to_tree();
    while let Some(p) = t.parent_key(s) {
        match t.parent_key(p) {
            None => t.rotate_up(s).expect("has parent"),
            Some(g) => {
                let x_left = t.left_key(p) == Some(s);
                let p_left = t.left_key(g) == Some(p);
                if x_left == p_left {
                    t.rotate_up(p).expect("has parent");
                    t.rotate_up(s).expect("has parent");
                } else {
                    t.rotate_up(s).expect("has parent");
                    t.rotate_up(s).expect("has parent");
                }
            }
        }
    }
    AfterTree::new(path, t).expect("rotations preserve the key set")
}

/// Roots `s`; each side becomes a lower-median balanced BST.
pub fn path_balance(path: &BeforePath) -> AfterTree {
    fn place(links: &mut Links, parent: Key, side: Side, keys: &[Key]) {
        if keys.is_empty() {
            return;
        }
        let mid = (keys.len() - 1) / 2;
        links.link(parent, side, keys[mid]);
        place(links, keys[mid], Side::Left, &keys[..mid]);
        place(links, keys[mid], Side::Right, &keys[mid + 1..]);
    }
    let split = SideSplit::new(path);
    let mut links = Links::new(path);
    let mut left = split.left.clone();
    left.sort_unstable();
    let mut right = split.right.clone();
    right.sort_unstable();
    place(&mut links, split.s, Side::Left, &left);
    place(&mut links, split.s, Side::Right, &right);
    links.finish(path)
}

/// Strict depth-halving by blocks of three.
///
/// Per side, with `b_1..b_m` ordered outward from `s` (deepest first), the
/// nodes are grouped from the bottom into blocks of three; a remainder of one
/// or two nodes sits on top. The outermost member of each block forms a spine
/// hanging inward from `s`, the other two members of block `j` hang outward
/// below the spine node of block `j - 1`, and the lowest block is a chain.
pub fn block3_depth_halving(path: &BeforePath) -> AfterTree {
    let split = SideSplit::new(path);
    let mut links = Links::new(path);
    for side in [Side::Left, Side::Right] {
        let b = split.side(side);
        let m = b.len();
        if m == 0 {
            continue;
        }
        let blocks = m / 3;
        let inner = inward(side);
        // Spine, top first: remainder nodes, then block maxima from the top.
        let mut spine: Vec<Key> = b[3 * blocks..].iter().rev().copied().collect();
        spine.extend((1..=blocks).rev().map(|j| b[3 * j - 1]));
        links.chain(split.s, side, inner, &spine);
        if blocks >= 1 {
            links.chain(b[2], inner, inner, &[b[1], b[0]]);
        }
        for j in 2..=blocks {
            let anchor = b[3 * (j - 1) - 1];
            links.link(anchor, side, b[3 * j - 2]);
            links.link(b[3 * j - 2], inner, b[3 * j - 3]);
        }
    }
    links.finish(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(keys: &[Key]) -> BeforePath {
        BeforePath::new(keys.to_vec()).unwrap()
    }

    fn shape(t: &TreeArena) -> String {
        t.to_string()
    }

    #[test]
    fn registry_round_trips() {
        for t in Transformer::ALL {
            assert_eq!(t.name().parse::<Transformer>().unwrap(), t);
        }
        assert!("splay-topdown".parse::<Transformer>().is_err());
    }

    #[test]
    fn rotate_to_root_examples() {
        assert_eq!(shape(&rotate_to_root(&p(&[3, 2, 1]))), "1(-,3(2,-))");
        assert_eq!(shape(&rotate_to_root(&p(&[3, 1, 2]))), "2(1,3)");
        assert_eq!(shape(&rotate_to_root(&p(&[4]))), "4");
    }

    #[test]
    fn splay_global_examples() {
        assert_eq!(shape(&splay_global(&p(&[3, 2, 1]))), "1(-,2(-,3))");
        assert_eq!(shape(&splay_global(&p(&[3, 1, 2]))), "2(1,3)");
        assert_eq!(shape(&splay_global(&p(&[2, 1]))), "1(-,2)");
    }

    #[test]
    fn splay_classic_examples() {
        assert_eq!(shape(&splay_classic(&p(&[3, 2, 1]))), "1(-,2(-,3))");
        assert_eq!(shape(&splay_classic(&p(&[7]))), "7");
    }

    #[test]
    fn splay_views_agree_on_all_short_paths() {
        for len in 1..=10usize {
            for mask in 0..(1u32 << (len - 1)) {
                let sides: Vec<Side> = (0..len - 1)
                    .map(|i| {
                        if mask >> i & 1 == 1 {
                            Side::Right
                        } else {
                            Side::Left
                        }
                    })
                    .collect();
                let path = BeforePath::from_sides(&sides);
                assert!(
                    splay_global(&path).same_shape(&splay_classic(&path)),
                    "mismatch on {:?}",
                    path.keys()
                );
            }
        }
    }

    #[test]
    fn path_balance_example_and_depth() {
        let a = path_balance(&p(&[5, 4, 3, 2, 1]));
        assert_eq!(shape(&a), "1(-,3(2,4(-,5)))");
        assert_eq!(a.height(), 3);
        for k in 0..=6u32 {
            let n = 1usize << k;
            let t = TreeArena::left_path(n);
            let a = path_balance(&t.search_path(1).unwrap());
            assert_eq!(a.height(), k as usize);
        }
    }

    #[test]
    fn block3_examples() {
        let a = block3_depth_halving(&p(&[7, 6, 5, 4, 3, 2, 1]));
        assert_eq!(shape(&a), "1(-,7(4(3(2,-),6(5,-)),-))");
        let a = block3_depth_halving(&p(&[4, 3, 2, 1]));
        assert_eq!(shape(&a), "1(-,4(3(2,-),-))");
        assert_eq!(shape(&block3_depth_halving(&p(&[9]))), "9");
    }

    #[test]
    fn block3_mirrors_on_the_left() {
        let a = block3_depth_halving(&p(&[1, 2, 3, 4, 5, 6, 7]));
        assert_eq!(shape(&a), "7(1(-,4(2(-,3),5(-,6))),-)");
    }

    #[test]
    fn access_restructures_in_place() {
        let mut t = TreeArena::left_path(3);
        let (path, _) = Transformer::RotateToRoot.access(&mut t, 1).unwrap();
        assert_eq!(path.len(), 3);
        assert_eq!(shape(&t), "1(-,3(2,-))");
        let (path, _) = Transformer::Splay.access(&mut t, 1).unwrap();
        assert_eq!(path.len(), 1);
    }
}
