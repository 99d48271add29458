//! Arena-backed binary search trees, search paths and path restructuring.
//!
//! A minimally self-adjusting access extracts the search path to `s`,
//! replaces it by an after-tree rooted at `s` on the same keys, and relinks
//! every pendent subtree into the unique empty slot whose key interval
//! contains it.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Key = i64;
pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub key: Key,
    pub left: Option<NodeId>,
    pub right: Option<NodeId>,
    pub parent: Option<NodeId>,
}

impl Node {
    fn detached(key: Key) -> Self {
        Node {
            key,
            left: None,
            right: None,
            parent: None,
        }
    }

    pub fn child(&self, side: Side) -> Option<NodeId> {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
        }
    }

    fn child_mut(&mut self, side: Side) -> &mut Option<NodeId> {
        match side {
            Side::Left => &mut self.left,
            Side::Right => &mut self.right,
        }
    }
}

/// Index-based BST over distinct integer keys.
///
/// Node ids are stable for the lifetime of the arena: restructuring only
/// rewires links, so per-node data computed before an access can be compared
/// index-for-index with data computed after it.
#[derive(Clone, Debug)]
pub struct TreeArena {
    nodes: Vec<Node>,
    root: Option<NodeId>,
    index: HashMap<Key, NodeId>,
}

/// Incremental construction of a tree from explicit parent/child links.
#[derive(Debug)]
pub struct TreeBuilder {
    arena: TreeArena,
    error: Option<Error>,
}

impl TreeBuilder {
    pub fn new<I: IntoIterator<Item = Key>>(keys: I) -> Self {
        let mut arena = TreeArena {
            nodes: Vec::new(),
            root: None,
            index: HashMap::new(),
        };
        let mut error = None;
        for k in keys {
            if arena.index.contains_key(&k) {
                error.get_or_insert(Error::DuplicateKey(k));
                continue;
            }
            arena.index.insert(k, arena.nodes.len());
            arena.nodes.push(Node::detached(k));
        }
        TreeBuilder { arena, error }
    }

    pub fn root(&mut self, key: Key) -> &mut Self {
        match self.arena.index.get(&key) {
            Some(&id) => self.arena.root = Some(id),
            None => {
                self.error.get_or_insert(Error::KeyAbsent(key));
            }
        }
        self
    }

    pub fn link(&mut self, parent: Key, side: Side, child: Key) -> &mut Self {
        let (p, c) = match (self.arena.index.get(&parent), self.arena.index.get(&child)) {
            (Some(&p), Some(&c)) => (p, c),
            (None, _) => {
                self.error.get_or_insert(Error::KeyAbsent(parent));
                return self;
            }
            (_, None) => {
                self.error.get_or_insert(Error::KeyAbsent(child));
                return self;
            }
        };
        if self.arena.nodes[p].child(side).is_some() {
            self.error.get_or_insert(Error::Disconnected(format!(
                "slot {side:?} of {parent} assigned twice"
            )));
            return self;
        }
        if self.arena.nodes[c].parent.is_some() {
            self.error
                .get_or_insert(Error::Disconnected(format!("key {child} has two parents")));
            return self;
        }
        *self.arena.nodes[p].child_mut(side) = Some(c);
        self.arena.nodes[c].parent = Some(p);
        self
    }

    /// Finishes construction, checking connectivity and key order.
    pub fn build(self) -> Result<TreeArena> {
        if let Some(e) = self.error {
            return Err(e);
        }
        let arena = self.arena;
        arena.check()?;
        Ok(arena)
    }
}

/// Root-to-accessed-element search path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeforePath {
    keys: Vec<Key>,
}

impl BeforePath {
    /// Validates that `keys` is a search path: each entry lies strictly inside
    /// the key interval the search for the last entry has narrowed to.
    pub fn new(keys: Vec<Key>) -> Result<Self> {
        let Some(&s) = keys.last() else {
            return Err(Error::InvalidPath("empty path".into()));
        };
        let (mut lo, mut hi) = (Key::MIN, Key::MAX);
        let mut seen = HashSet::with_capacity(keys.len());
        for &k in &keys {
            if !seen.insert(k) {
                return Err(Error::DuplicateKey(k));
            }
            if k <= lo && lo != Key::MIN || k >= hi && hi != Key::MAX {
                return Err(Error::InvalidPath(format!("key {k} outside ({lo}, {hi})")));
            }
            if s < k {
                hi = k;
            } else if s > k {
                lo = k;
            }
        }
        Ok(BeforePath { keys })
    }

    /// Builds the canonical search path with the given side sequence (one side
    /// per non-accessed node, root first). Keys below `s` are numbered
    /// upward from 1 in path order, keys above `s` downward from `n`.
    pub fn from_sides(sides: &[Side]) -> Self {
        let n = sides.len() as Key + 1;
        let lefts = sides.iter().filter(|&&d| d == Side::Left).count() as Key;
        let s = lefts + 1;
        let (mut next_low, mut next_high) = (1, n);
        let mut keys: Vec<Key> = sides
            .iter()
            .map(|d| match d {
                Side::Left => {
                    next_low += 1;
                    next_low - 1
                }
                Side::Right => {
                    next_high -= 1;
                    next_high + 1
                }
            })
            .collect();
        keys.push(s);
        BeforePath { keys }
    }

    pub fn keys(&self) -> &[Key] {
        &self.keys
    }

    pub fn accessed(&self) -> Key {
        *self.keys.last().expect("non-empty")
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Number of ancestors of `key` within the path, d(x).
    pub fn depth_of(&self, key: Key) -> Option<usize> {
        self.keys.iter().position(|&k| k == key)
    }

    /// Side of each key relative to the accessed element (`None` for `s`).
    pub fn side_of(&self, key: Key) -> Option<Side> {
        let s = self.accessed();
        match key.cmp(&s) {
            std::cmp::Ordering::Less => Some(Side::Left),
            std::cmp::Ordering::Greater => Some(Side::Right),
            std::cmp::Ordering::Equal => None,
        }
    }

    /// Edge directions taken by the search, one per edge.
    pub fn directions(&self) -> Vec<Side> {
        self.keys
            .windows(2)
            .map(|w| if w[1] < w[0] { Side::Left } else { Side::Right })
            .collect()
    }

    /// The path itself as a (degenerate) tree.
    pub fn to_tree(&self) -> TreeArena {
        let mut b = TreeBuilder::new(self.keys.iter().copied());
        b.root(self.keys[0]);
        for w in self.keys.windows(2) {
            let side = if w[1] < w[0] { Side::Left } else { Side::Right };
            b.link(w[0], side, w[1]);
        }
        b.build().expect("search path forms a valid tree")
    }
}

/// Replacement tree for a search path: same keys, rooted at the accessed key.
#[derive(Clone, Debug)]
pub struct AfterTree(TreeArena);

impl AfterTree {
    pub fn new(path: &BeforePath, tree: TreeArena) -> Result<Self> {
        if tree.len() != path.len() || path.keys().iter().any(|k| !tree.contains(*k)) {
            return Err(Error::AfterMismatch("key sets differ".into()));
        }
        if tree.root_key() != Some(path.accessed()) {
            return Err(Error::AfterMismatch(format!(
                "root is {:?}, expected {}",
                tree.root_key(),
                path.accessed()
            )));
        }
        Ok(AfterTree(tree))
    }

    pub fn into_inner(self) -> TreeArena {
        self.0
    }
}

impl Deref for AfterTree {
    type Target = TreeArena;
    fn deref(&self) -> &TreeArena {
        &self.0
    }
}

impl TreeArena {
    /// Builds a tree from `(key, parent, side)` triples; the side of the root
    /// entry is ignored.
    pub fn build(shape: &[(Key, Option<Key>, Side)]) -> Result<Self> {
        let mut b = TreeBuilder::new(shape.iter().map(|t| t.0));
        let mut roots = shape.iter().filter(|t| t.1.is_none());
        match (roots.next(), roots.next()) {
            (Some(r), None) => {
                b.root(r.0);
            }
            (None, _) => return Err(Error::Disconnected("no root".into())),
            (Some(_), Some(_)) => return Err(Error::Disconnected("several roots".into())),
        }
        for &(k, p, side) in shape {
            if let Some(p) = p {
                b.link(p, side, k);
            }
        }
        b.build()
    }

    /// Left-leaning path over `1..=n`: `n` is the root and `1` the leaf.
    pub fn left_path(n: usize) -> Self {
        Self::chain((1..=n as Key).rev(), Side::Left)
    }

    /// Right-leaning path over `1..=n`: `1` is the root.
    pub fn right_path(n: usize) -> Self {
        Self::chain(1..=n as Key, Side::Right)
    }

    fn chain<I: Iterator<Item = Key> + Clone>(keys: I, side: Side) -> Self {
        let mut b = TreeBuilder::new(keys.clone());
        let v: Vec<Key> = keys.collect();
        b.root(v[0]);
        for w in v.windows(2) {
            b.link(w[0], side, w[1]);
        }
        b.build().expect("chain is a valid tree")
    }

    /// Unbalanced BST obtained by inserting `keys` in order.
    pub fn from_insertion_order(keys: &[Key]) -> Result<Self> {
        let mut t = TreeArena {
            nodes: Vec::with_capacity(keys.len()),
            root: None,
            index: HashMap::with_capacity(keys.len()),
        };
        for &k in keys {
            if t.index.contains_key(&k) {
                return Err(Error::DuplicateKey(k));
            }
            let id = t.nodes.len();
            t.nodes.push(Node::detached(k));
            t.index.insert(k, id);
            let Some(mut cur) = t.root else {
                t.root = Some(id);
                continue;
            };
            loop {
                let side = if k < t.nodes[cur].key {
                    Side::Left
                } else {
                    Side::Right
                };
                match t.nodes[cur].child(side) {
                    Some(next) => cur = next,
                    None => {
                        *t.nodes[cur].child_mut(side) = Some(id);
                        t.nodes[id].parent = Some(cur);
                        break;
                    }
                }
            }
        }
        Ok(t)
    }

    /// Perfectly balanced BST over `1..=n` (lower-median roots).
    pub fn balanced(n: usize) -> Self {
        fn fill(lo: Key, hi: Key, order: &mut Vec<Key>) {
            if lo > hi {
                return;
            }
            let mid = lo + (hi - lo) / 2;
            order.push(mid);
            fill(lo, mid - 1, order);
            fill(mid + 1, hi, order);
        }
        let mut order = Vec::with_capacity(n);
        fill(1, n as Key, &mut order);
        Self::from_insertion_order(&order).expect("distinct keys")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> Option<NodeId> {
        self.root
    }

    pub fn root_key(&self) -> Option<Key> {
        self.root.map(|r| self.nodes[r].key)
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn id(&self, key: Key) -> Option<NodeId> {
        self.index.get(&key).copied()
    }

    pub fn contains(&self, key: Key) -> bool {
        self.index.contains_key(&key)
    }

    pub fn key(&self, id: NodeId) -> Key {
        self.nodes[id].key
    }

    fn expect_id(&self, key: Key) -> Result<NodeId> {
        self.id(key).ok_or(Error::KeyAbsent(key))
    }

    pub fn child_key(&self, key: Key, side: Side) -> Option<Key> {
        let id = self.id(key)?;
        self.nodes[id].child(side).map(|c| self.nodes[c].key)
    }

    pub fn left_key(&self, key: Key) -> Option<Key> {
        self.child_key(key, Side::Left)
    }

    pub fn right_key(&self, key: Key) -> Option<Key> {
        self.child_key(key, Side::Right)
    }

    pub fn parent_key(&self, key: Key) -> Option<Key> {
        let id = self.id(key)?;
        self.nodes[id].parent.map(|p| self.nodes[p].key)
    }

    /// All keys in increasing order.
    pub fn in_order(&self) -> Vec<Key> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = Vec::new();
        let mut cur = self.root;
        while cur.is_some() || !stack.is_empty() {
            while let Some(c) = cur {
                stack.push(c);
                cur = self.nodes[c].left;
            }
            let c = stack.pop().expect("non-empty");
            out.push(self.nodes[c].key);
            cur = self.nodes[c].right;
        }
        out
    }

    /// Node ids in pre-order (parents before children).
    pub fn pre_order(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack: Vec<NodeId> = self.root.into_iter().collect();
        while let Some(c) = stack.pop() {
            out.push(c);
            let n = &self.nodes[c];
            stack.extend(n.right);
            stack.extend(n.left);
        }
        out
    }

    /// Keys of the subtree rooted at `key`, increasing.
    pub fn subtree_keys(&self, key: Key) -> Result<Vec<Key>> {
        let id = self.expect_id(key)?;
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(c) = stack.pop() {
            out.push(self.nodes[c].key);
            stack.extend(self.nodes[c].left);
            stack.extend(self.nodes[c].right);
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Sum of `weight` over every subtree, indexed by node id.
    pub fn subtree_sums(&self, weight: impl Fn(Key) -> f64) -> Vec<f64> {
        let mut sums = vec![0.0; self.len()];
        for &id in self.pre_order().iter().rev() {
            let n = &self.nodes[id];
            let mut s = weight(n.key);
            if let Some(l) = n.left {
                s += sums[l];
            }
            if let Some(r) = n.right {
                s += sums[r];
            }
            sums[id] = s;
        }
        sums
    }

    /// Subtree sizes, indexed by node id.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        self.subtree_sums(|_| 1.0)
            .into_iter()
            .map(|s| s as usize)
            .collect()
    }

    /// Number of edges from the root to `key`.
    pub fn depth(&self, key: Key) -> Result<usize> {
        let mut id = self.expect_id(key)?;
        let mut d = 0;
        while let Some(p) = self.nodes[id].parent {
            d += 1;
            id = p;
        }
        Ok(d)
    }

    /// Depth of every node, indexed by node id.
    pub fn depths(&self) -> Vec<usize> {
        let mut d = vec![0; self.len()];
        for id in self.pre_order() {
            if let Some(p) = self.nodes[id].parent {
                d[id] = d[p] + 1;
            }
        }
        d
    }

    /// Largest depth (edges) over all nodes; 0 for a single node.
    pub fn height(&self) -> usize {
        self.depths().into_iter().max().unwrap_or(0)
    }

    /// Ancestors of `key`, root first, excluding `key` itself.
    pub fn ancestors(&self, key: Key) -> Result<Vec<Key>> {
        let mut id = self.expect_id(key)?;
        let mut out = Vec::new();
        while let Some(p) = self.nodes[id].parent {
            out.push(self.nodes[p].key);
            id = p;
        }
        out.reverse();
        Ok(out)
    }

    /// Number of `side`-going edges on the root-to-`key` path.
    pub fn side_depth(&self, key: Key, side: Side) -> Result<usize> {
        let mut id = self.expect_id(key)?;
        let mut count = 0;
        while let Some(p) = self.nodes[id].parent {
            if self.nodes[p].child(side) == Some(id) {
                count += 1;
            }
            id = p;
        }
        Ok(count)
    }

    pub fn right_depth(&self, key: Key) -> Result<usize> {
        self.side_depth(key, Side::Right)
    }

    pub fn left_depth(&self, key: Key) -> Result<usize> {
        self.side_depth(key, Side::Left)
    }

    /// Leaf keys in increasing order.
    pub fn leaves(&self) -> Vec<Key> {
        let mut out: Vec<Key> = self
            .nodes
            .iter()
            .filter(|n| n.left.is_none() && n.right.is_none())
            .map(|n| n.key)
            .collect();
        out.sort_unstable();
        out
    }

    /// Root-to-`s` search path.
    pub fn search_path(&self, s: Key) -> Result<BeforePath> {
        let mut keys = Vec::new();
        let mut cur = self.root;
        while let Some(c) = cur {
            let k = self.nodes[c].key;
            keys.push(k);
            if k == s {
                return Ok(BeforePath { keys });
            }
            cur = if s < k {
                self.nodes[c].left
            } else {
                self.nodes[c].right
            };
        }
        Err(Error::KeyAbsent(s))
    }

    /// True iff every structural invariant holds.
    pub fn validate_bst(&self) -> bool {
        self.check().is_ok()
    }

    fn check(&self) -> Result<()> {
        if self.nodes.is_empty() {
            return if self.root.is_none() {
                Ok(())
            } else {
                Err(Error::Disconnected("root in empty tree".into()))
            };
        }
        let root = self
            .root
            .ok_or_else(|| Error::Disconnected("no root".into()))?;
        if self.nodes[root].parent.is_some() {
            return Err(Error::Disconnected("root has a parent".into()));
        }
        for (id, n) in self.nodes.iter().enumerate() {
            if self.index.get(&n.key) != Some(&id) {
                return Err(Error::Disconnected(format!("index stale for {}", n.key)));
            }
            for c in [n.left, n.right].into_iter().flatten() {
                if self.nodes[c].parent != Some(id) {
                    return Err(Error::Disconnected(format!(
                        "child {} of {} disagrees on parent",
                        self.nodes[c].key, n.key
                    )));
                }
            }
            if let Some(p) = n.parent {
                let pn = &self.nodes[p];
                if pn.left != Some(id) && pn.right != Some(id) {
                    return Err(Error::Disconnected(format!(
                        "{} is not a child of its parent {}",
                        n.key, pn.key
                    )));
                }
            }
        }
        // Reachability from the root plus in-order monotonicity; a cycle or a
        // detached component shows up as a short traversal.
        let mut seen = 0usize;
        let mut prev: Option<Key> = None;
        let mut stack = Vec::new();
        let mut cur = Some(root);
        while cur.is_some() || !stack.is_empty() {
            while let Some(c) = cur {
                stack.push(c);
                cur = self.nodes[c].left;
                if stack.len() > self.nodes.len() {
                    return Err(Error::Disconnected("cycle".into()));
                }
            }
            let c = stack.pop().expect("non-empty");
            seen += 1;
            if seen > self.nodes.len() {
                return Err(Error::Disconnected("cycle".into()));
            }
            let k = self.nodes[c].key;
            if let Some(p) = prev {
                if p >= k {
                    return Err(Error::OrderViolation(k));
                }
            }
            prev = Some(k);
            cur = self.nodes[c].right;
        }
        if seen != self.nodes.len() {
            return Err(Error::Disconnected(format!(
                "{} of {} nodes reachable",
                seen,
                self.nodes.len()
            )));
        }
        Ok(())
    }

    /// Structural equality: same keys, same root, same parent of every key.
    pub fn same_shape(&self, other: &TreeArena) -> bool {
        self.len() == other.len()
            && self.root_key() == other.root_key()
            && self.nodes.iter().all(|n| {
                other.id(n.key).is_some_and(|o| {
                    let on = other.node(o);
                    on.left.map(|c| other.key(c)) == n.left.map(|c| self.key(c))
                        && on.right.map(|c| other.key(c)) == n.right.map(|c| self.key(c))
                })
            })
    }

    /// Replaces the downward path `path` (parent to child, consecutive) by
    /// `replacement`, a BST over exactly the path keys. The replacement root
    /// takes the place of the path's top node and every subtree hanging off
    /// the path is relinked into the unique empty slot of the replacement
    /// whose key interval contains it.
    pub fn replace_path(&mut self, path: &[Key], replacement: &TreeArena) -> Result<()> {
        if path.is_empty() {
            return Err(Error::InvalidPath("empty path".into()));
        }
        let ids: Vec<NodeId> = path
            .iter()
            .map(|&k| self.expect_id(k))
            .collect::<Result<_>>()?;
        for w in ids.windows(2) {
            if self.nodes[w[1]].parent != Some(w[0]) {
                return Err(Error::InvalidPath(format!(
                    "{} is not a child of {}",
                    self.nodes[w[1]].key, self.nodes[w[0]].key
                )));
            }
        }
        if replacement.len() != path.len() || path.iter().any(|k| !replacement.contains(*k)) {
            return Err(Error::AfterMismatch(
                "replacement keys differ from path".into(),
            ));
        }
        let mut sorted: Vec<Key> = path.to_vec();
        sorted.sort_unstable();
        let rank = |k: Key| sorted.binary_search(&k).expect("path key");

        let on_path: HashSet<NodeId> = ids.iter().copied().collect();
        let mut gaps: Vec<Option<NodeId>> = vec![None; path.len() + 1];
        for &id in &ids {
            let n = &self.nodes[id];
            let r = rank(n.key);
            if let Some(c) = n.left.filter(|c| !on_path.contains(c)) {
                gaps[r] = Some(c);
            }
            if let Some(c) = n.right.filter(|c| !on_path.contains(c)) {
                gaps[r + 1] = Some(c);
            }
        }

        let top = ids[0];
        let above = self.nodes[top].parent;
        let above_side = above.map(|p| {
            if self.nodes[p].left == Some(top) {
                Side::Left
            } else {
                Side::Right
            }
        });

        for &k in path {
            let rid = replacement.id(k).expect("checked");
            let rn = replacement.node(rid);
            let id = self.index[&k];
            let r = rank(k);
            let left = match rn.left {
                Some(c) => Some(self.index[&replacement.key(c)]),
                None => gaps[r],
            };
            let right = match rn.right {
                Some(c) => Some(self.index[&replacement.key(c)]),
                None => gaps[r + 1],
            };
            self.nodes[id].left = left;
            self.nodes[id].right = right;
            for c in [left, right].into_iter().flatten() {
                self.nodes[c].parent = Some(id);
            }
        }
        let new_top = self.index[&replacement.root_key().expect("non-empty")];
        self.nodes[new_top].parent = above;
        match (above, above_side) {
            (Some(p), Some(side)) => *self.nodes[p].child_mut(side) = Some(new_top),
            _ => self.root = Some(new_top),
        }
        Ok(())
    }

    /// Single rotation lifting `key` above its parent.
    pub fn rotate_up(&mut self, key: Key) -> Result<()> {
        let x = self.expect_id(key)?;
        let p = self.nodes[x]
            .parent
            .ok_or_else(|| Error::Precondition(format!("{key} is the root")))?;
        let g = self.nodes[p].parent;
        if self.nodes[p].left == Some(x) {
            let b = self.nodes[x].right;
            self.nodes[p].left = b;
            self.nodes[x].right = Some(p);
            if let Some(b) = b {
                self.nodes[b].parent = Some(p);
            }
        } else {
            let b = self.nodes[x].left;
            self.nodes[p].right = b;
            self.nodes[x].left = Some(p);
            if let Some(b) = b {
                self.nodes[b].parent = Some(p);
            }
        }
        self.nodes[p].parent = Some(x);
        self.nodes[x].parent = g;
        match g {
            Some(g) if self.nodes[g].left == Some(p) => self.nodes[g].left = Some(x),
            Some(g) => self.nodes[g].right = Some(x),
            None => self.root = Some(x),
        }
        Ok(())
    }

    /// Applies an access restructuring: `path` must be the search path of its
    /// last key in this tree and `after` an after-tree for it.
    pub fn apply_restructure(&mut self, path: &BeforePath, after: &AfterTree) -> Result<()> {
        if after.root_key() != Some(path.accessed()) {
            return Err(Error::AfterMismatch(
                "after-tree root is not the accessed key".into(),
            ));
        }
        if self.root_key() != Some(path.keys()[0]) {
            return Err(Error::InvalidPath("path does not start at the root".into()));
        }
        self.replace_path(path.keys(), after)
    }
}

impl fmt::Display for TreeArena {
    /// Parenthesised form, e.g. `2(1,3)`; `-` marks an empty child.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &TreeArena, id: Option<NodeId>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let Some(id) = id else { return write!(f, "-") };
            let n = t.node(id);
            write!(f, "{}", n.key)?;
            if n.left.is_some() || n.right.is_some() {
                write!(f, "(")?;
                go(t, n.left, f)?;
                write!(f, ",")?;
                go(t, n.right, f)?;
                write!(f, ")")?;
            }
            Ok(())
        }
        go(self, self.root, f)
    }
}
