use serde::{Deserialize, Serialize};

use crate::bst::{Key, NodeId, TreeArena};
use crate::error::{Error, Result};
use crate::transformers::Transformer;

/// `x·log₂x` with `f(0) = 0`.
pub fn f(x: usize) -> f64 {
    if x == 0 {
        0.0
    } else {
        x as f64 * (x as f64).log2()
    }
}

/// Maximal left-leaning runs of the subtree rooted at `top`, each increasing.
pub fn wings_below(tree: &TreeArena, top: Option<NodeId>) -> Vec<Vec<Key>> {
    let mut out = Vec::new();
    let mut stack: Vec<NodeId> = top.into_iter().collect();
    while let Some(head) = stack.pop() {
        let mut wing = Vec::new();
        let mut cur = Some(head);
        while let Some(c) = cur {
            wing.push(tree.key(c));
            stack.extend(tree.node(c).right);
            cur = tree.node(c).left;
        }
        wing.reverse();
        out.push(wing);
    }
    out
}

pub fn wing_partition(tree: &TreeArena) -> Vec<Vec<Key>> {
    wings_below(tree, tree.root())
}

pub fn wing_potential_below(tree: &TreeArena, top: Option<NodeId>) -> f64 {
    wings_below(tree, top).iter().map(|w| f(w.len())).sum()
}

/// `Σ |w|·log₂|w|` over the wing partition.
pub fn wing_potential(tree: &TreeArena) -> f64 {
    wing_potential_below(tree, tree.root())
}

/// Wing count against `m·k`, where `k` is the number of leaves and `m`
/// counts the levels of right edges, `1 + max right-depth`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WingCount {
    pub wings: usize,
    pub levels: usize,
    pub leaves: usize,
}

impl WingCount {
    pub fn holds(&self) -> bool {
        self.wings <= self.levels * self.leaves
    }
}

pub fn check_wing_count(tree: &TreeArena) -> WingCount {
    let levels = 1 + tree
        .nodes()
        .iter()
        .map(|n| tree.right_depth(n.key).expect("present"))
        .max()
        .unwrap_or(0);
    WingCount {
        wings: wing_partition(tree).len(),
        levels,
        leaves: tree.leaves().len(),
    }
}

/// Outcome of a sequential run `1, 2, …, n` from the left path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WingRun {
    pub n: usize,
    pub total_cost: usize,
    pub phi_start: f64,
    pub phi_end: f64,
    /// Minimum over accesses of
    /// `(φ_i − φ_{i−1}) − (Σ_{w ∈ wp(A''_i)} f(|w|) − f(|P'_i|))`.
    pub min_slack: f64,
}

/// One step of the telescoping inequality. `before` is the tree that accesses
/// key `i`; on the first access it is the starting tree, later its root must
/// be `i − 1`. `after_tree` is the restructured tree.
pub fn wing_step(
    before: &TreeArena,
    i: Key,
    after: &TreeArena,
    after_tree: &TreeArena,
    path_len: usize,
    first: bool,
) -> Result<(f64, f64, f64)> {
    let (r_prev, p_prime) = if first {
        (before.root(), path_len)
    } else {
        let root = before
            .root()
            .ok_or_else(|| Error::Precondition("empty tree".into()))?;
        if before.key(root) != i - 1 {
            return Err(Error::Precondition("run is not sequential".into()));
        }
        (before.node(root).right, path_len - 1)
    };
    if after_tree.root_key() != Some(i) {
        return Err(Error::Precondition(
            "accessed key is not the new root".into(),
        ));
    }
    let phi_prev = wing_potential_below(before, r_prev);
    let phi_next = wing_potential_below(
        after_tree,
        after_tree.node(after_tree.root().expect("root")).right,
    );
    let a_right = after.id(i).and_then(|id| after.node(id).right);
    let bound = wing_potential_below(after, a_right) - f(p_prime);
    Ok((phi_prev, phi_next, (phi_next - phi_prev) - bound))
}

/// Accesses `1..=n` in order starting from the left path over `[n]`.
pub fn check_wing_telescoping(t: Transformer, n: usize) -> Result<WingRun> {
    if n == 0 {
        return Err(Error::Precondition("empty run".into()));
    }
    let mut tree = TreeArena::left_path(n);
    let mut run = WingRun {
        n,
        total_cost: 0,
        phi_start: wing_potential(&tree),
        phi_end: 0.0,
        min_slack: f64::INFINITY,
    };
    for i in 1..=n as Key {
        let before = tree.clone();
        let (path, after) = t.access(&mut tree, i)?;
        run.total_cost += path.len();
        let (_, phi_next, slack) = wing_step(&before, i, &after, &tree, path.len(), i == 1)?;
        run.min_slack = run.min_slack.min(slack);
        run.phi_end = phi_next;
    }
    Ok(run)
}
