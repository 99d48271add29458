use std::collections::HashMap;

use crate::analysis::weights::WeightMap;
use crate::bst::{AfterTree, BeforePath, Key, NodeId, TreeArena};
use crate::error::{Error, Result};
use crate::transformers::Transformer;

fn weight_of(w: &WeightMap, key: Key) -> Result<f64> {
    w.try_get(key).ok_or(Error::KeyAbsent(key))
}

fn checked_sums(tree: &TreeArena, w: &WeightMap) -> Result<Vec<f64>> {
    if let Some(n) = tree.nodes().iter().find(|n| w.try_get(n.key).is_none()) {
        return Err(Error::KeyAbsent(n.key));
    }
    Ok(tree.subtree_sums(|k| w.get(k)))
}

/// Φ_T = Σ log₂ w(T(a)).
pub fn sol_potential(tree: &TreeArena, w: &WeightMap) -> Result<f64> {
    Ok(checked_sums(tree, w)?.into_iter().map(f64::log2).sum())
}

/// Φ_T(X) = Σ_{a ∈ X} log₂ w(T(a)).
pub fn partial_potential(tree: &TreeArena, w: &WeightMap, xs: &[Key]) -> Result<f64> {
    let sums = checked_sums(tree, w)?;
    xs.iter()
        .map(|&k| {
            tree.id(k)
                .map(|id| sums[id].log2())
                .ok_or(Error::KeyAbsent(k))
        })
        .sum()
}

/// Subtree weights of the path nodes before and after one access, plus the
/// pendent-subtree weights needed to evaluate other after-trees.
#[derive(Clone, Debug)]
pub struct AccessWeights {
    pub s: Key,
    /// W.
    pub total: f64,
    /// w(s).
    pub w_s: f64,
    /// w(T(a)) for each path key.
    pub before: HashMap<Key, f64>,
    /// w(T'(a)) for each path key.
    pub after: HashMap<Key, f64>,
    sorted: Vec<Key>,
    key_w: Vec<f64>,
    gaps: Vec<f64>,
}

impl AccessWeights {
    /// Computes everything from scratch in O(n).
    pub fn compute(
        tree: &TreeArena,
        path: &BeforePath,
        after: &TreeArena,
        w: &WeightMap,
    ) -> Result<Self> {
        let sums = checked_sums(tree, w)?;
        Self::from_sums(tree, &sums, path, after, w)
    }

    fn from_sums(
        tree: &TreeArena,
        sums: &[f64],
        path: &BeforePath,
        after: &TreeArena,
        w: &WeightMap,
    ) -> Result<Self> {
        let mut sorted = path.keys().to_vec();
        sorted.sort_unstable();
        let key_w = sorted
            .iter()
            .map(|&k| weight_of(w, k))
            .collect::<Result<Vec<_>>>()?;
        let mut gaps = vec![0.0; sorted.len() + 1];
        let mut before = HashMap::with_capacity(path.len());
        let ids: Vec<NodeId> = path
            .keys()
            .iter()
            .map(|&k| tree.id(k).ok_or(Error::KeyAbsent(k)))
            .collect::<Result<_>>()?;
        for (i, &id) in ids.iter().enumerate() {
            let node = tree.node(id);
            let next = ids.get(i + 1).copied();
            let r = sorted.binary_search(&node.key).expect("path key");
            if let Some(c) = node.left.filter(|&c| Some(c) != next) {
                gaps[r] = sums[c];
            }
            if let Some(c) = node.right.filter(|&c| Some(c) != next) {
                gaps[r + 1] = sums[c];
            }
            before.insert(node.key, sums[id]);
        }
        let s = path.accessed();
        let mut aw = AccessWeights {
            s,
            total: w.total(),
            w_s: weight_of(w, s)?,
            before,
            after: HashMap::new(),
            sorted,
            key_w,
            gaps,
        };
        aw.after = aw.weights_in(after)?;
        Ok(aw)
    }

    /// w(T''(a)) for every path key when the path is replaced by `other`.
    pub fn weights_in(&self, other: &TreeArena) -> Result<HashMap<Key, f64>> {
        if other.len() != self.sorted.len() {
            return Err(Error::AfterMismatch(
                "tree is not over the path keys".into(),
            ));
        }
        let mut out = HashMap::with_capacity(other.len());
        let mut by_id = vec![0.0; other.len()];
        for &id in other.pre_order().iter().rev() {
            let n = other.node(id);
            let r = self
                .sorted
                .binary_search(&n.key)
                .map_err(|_| Error::AfterMismatch(format!("key {} not on the path", n.key)))?;
            let l = n.left.map_or(self.gaps[r], |c| by_id[c]);
            let rr = n.right.map_or(self.gaps[r + 1], |c| by_id[c]);
            by_id[id] = self.key_w[r] + l + rr;
            out.insert(n.key, by_id[id]);
        }
        Ok(out)
    }

    /// Same access with a different after-tree.
    pub fn with_after(&self, other: &TreeArena) -> Result<Self> {
        let mut aw = self.clone();
        aw.after = self.weights_in(other)?;
        Ok(aw)
    }

    /// w(T(s)).
    pub fn w_ts(&self) -> f64 {
        self.before[&self.s]
    }

    /// Φ_T(X).
    pub fn phi_before(&self, xs: &[Key]) -> f64 {
        xs.iter().map(|k| self.before[k].log2()).sum()
    }

    /// Φ_{T'}(X).
    pub fn phi_after(&self, xs: &[Key]) -> f64 {
        xs.iter().map(|k| self.after[k].log2()).sum()
    }

    /// Φ_T(X) − Φ_{T'}(X), summed term by term.
    pub fn delta(&self, xs: &[Key]) -> f64 {
        xs.iter()
            .map(|k| (self.before[k] / self.after[k]).log2())
            .sum()
    }

    /// log₂(W / w(s)).
    pub fn log_w_over_s(&self) -> f64 {
        (self.total / self.w_s).log2()
    }

    /// log₂(W / w(T(s))).
    pub fn log_w_over_ts(&self) -> f64 {
        (self.total / self.w_ts()).log2()
    }
}

/// Result of one access under a potential ledger.
#[derive(Clone, Debug)]
pub struct AccessOutcome {
    pub path: BeforePath,
    pub after: AfterTree,
    pub weights: AccessWeights,
    pub phi_before: f64,
    pub phi_after: f64,
}

/// Tracks subtree weights and the total potential of a tree across accesses
/// in O(|P|) per access.
#[derive(Clone, Debug)]
pub struct PotentialLedger {
    weights: WeightMap,
    sums: Vec<f64>,
    phi: f64,
}

impl PotentialLedger {
    pub fn new(tree: &TreeArena, weights: WeightMap) -> Result<Self> {
        let sums = checked_sums(tree, &weights)?;
        let phi = sums.iter().map(|s| s.log2()).sum();
        Ok(PotentialLedger { weights, sums, phi })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn weights(&self) -> &WeightMap {
        &self.weights
    }

    /// w(T(key)) in the tracked tree.
    pub fn subtree_weight(&self, tree: &TreeArena, key: Key) -> Option<f64> {
        tree.id(key).map(|id| self.sums[id])
    }

    /// Accesses `s` in `tree` with `t`, restructuring the tree in place.
    pub fn access(
        &mut self,
        tree: &mut TreeArena,
        t: Transformer,
        s: Key,
    ) -> Result<AccessOutcome> {
        let path = tree.search_path(s)?;
        let after = t.apply(&path);
        self.apply(tree, path, after)
    }

    /// Replaces `path` by `after` in `tree` and updates the ledger.
    pub fn apply(
        &mut self,
        tree: &mut TreeArena,
        path: BeforePath,
        after: AfterTree,
    ) -> Result<AccessOutcome> {
        let weights = AccessWeights::from_sums(tree, &self.sums, &path, &after, &self.weights)?;
        tree.apply_restructure(&path, &after)?;
        let phi_before = self.phi;
        let mut change = 0.0;
        for &k in path.keys() {
            let id = tree.id(k).expect("path key");
            let (b, a) = (weights.before[&k], weights.after[&k]);
            change += (a / b).log2();
            self.sums[id] = a;
        }
        self.phi += change;
        Ok(AccessOutcome {
            path,
            after,
            weights,
            phi_before,
            phi_after: self.phi,
        })
    }
}
