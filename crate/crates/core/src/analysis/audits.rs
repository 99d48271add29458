use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::analysis::decompose::{
    is_monotone, is_subtree_disjoint, monotone_partition, zigzag_sets, Decomposition,
};
use crate::analysis::potential::AccessWeights;
use crate::bst::{BeforePath, Key, TreeArena};
use crate::error::{Error, Result};
use crate::transformers::{rotate_to_root, Transformer};

/// Floating-point tolerance for every slack.
pub const TOLERANCE: f64 = 1e-6;

/// `2 + 8·log(W/w(T(s))) + Φ_T(X) − Φ_{T'}(X) − |X|` for a subtree-disjoint `X`.
pub fn check_lemma_disjoint(aw: &AccessWeights, after: &TreeArena, xs: &[Key]) -> Result<f64> {
    if !is_subtree_disjoint(after, xs) {
        return Err(Error::NotSubtreeDisjoint);
    }
    Ok(2.0 + 8.0 * aw.log_w_over_ts() + aw.delta(xs) - xs.len() as f64)
}

/// `Φ_T(X) − Φ_{T'}(X) + log(W/w(s))` for a monotone `X`. Also checks that
/// `T'(a) ⊆ T(b)` whenever `a` is the next member of `X` below `b` on the path.
pub fn check_lemma_monotone(
    aw: &AccessWeights,
    path: &BeforePath,
    after: &TreeArena,
    xs: &[Key],
) -> Result<f64> {
    if !is_monotone(after, xs) {
        return Err(Error::NotMonotone);
    }
    let mut ordered: Vec<Key> = xs.to_vec();
    ordered.sort_by_key(|&k| path.depth_of(k));
    let before = path_intervals(path);
    let after_iv = tree_intervals(after);
    for w in ordered.windows(2) {
        let (b, a) = (w[0], w[1]);
        let (lo_a, hi_a) = after_iv[&a];
        let (lo_b, hi_b) = before[&b];
        if lo_a < lo_b || hi_a > hi_b {
            return Err(Error::Precondition(format!(
                "after-subtree of {a} is not inside the before-subtree of {b}"
            )));
        }
    }
    Ok(aw.delta(xs) + aw.log_w_over_s())
}

/// Open key interval spanned by each path node's subtree before the access.
fn path_intervals(path: &BeforePath) -> HashMap<Key, (Key, Key)> {
    let s = path.accessed();
    let (mut lo, mut hi) = (Key::MIN, Key::MAX);
    let mut out = HashMap::with_capacity(path.len());
    for &k in path.keys() {
        out.insert(k, (lo, hi));
        if s < k {
            hi = k;
        } else if s > k {
            lo = k;
        }
    }
    out
}

/// Open key interval spanned by each node's subtree in `tree`, using
/// unbounded outer limits.
fn tree_intervals(tree: &TreeArena) -> HashMap<Key, (Key, Key)> {
    let mut by_id = vec![(Key::MIN, Key::MAX); tree.len()];
    let mut out = HashMap::with_capacity(tree.len());
    for id in tree.pre_order() {
        let n = tree.node(id);
        let (lo, hi) = by_id[id];
        if let Some(c) = n.left {
            by_id[c] = (lo, n.key);
        }
        if let Some(c) = n.right {
            by_id[c] = (n.key, hi);
        }
        out.insert(n.key, (lo, hi));
    }
    out
}

/// Zig-zag slacks against the rotate-to-root tree.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZigzagAudit {
    /// Minimum over alternations of
    /// `Φ(Z_i) − Φ''(Z_i) + log(w(T(a_{i+1}))/w(T(a_i))) − 2`; `+∞` if none.
    pub min_pair: f64,
    /// `Φ(Z_P) − Φ''(Z_P) + 2log(W/w(s)) + 2log(W/w(T(s))) − |Z_P|`.
    pub aggregate: f64,
    pub z_p: usize,
}

/// `rtr` must carry the rotate-to-root after-tree of the access.
pub fn check_zigzag_claim(rtr: &AccessWeights, path: &BeforePath) -> ZigzagAudit {
    let z = zigzag_sets(path);
    let min_pair = z
        .pairs
        .iter()
        .map(|&(_, a, b)| rtr.delta(&[a, b]) + (rtr.before[&b] / rtr.before[&a]).log2() - 2.0)
        .fold(f64::INFINITY, f64::min);
    let aggregate = rtr.delta(&z.union) + 2.0 * rtr.log_w_over_s() + 2.0 * rtr.log_w_over_ts()
        - z.union.len() as f64;
    ZigzagAudit {
        min_pair,
        aggregate,
        z_p: z.union.len(),
    }
}

fn validated<'a>(
    dec: &'a Decomposition,
    path: &BeforePath,
    after: &TreeArena,
) -> Result<&'a Decomposition> {
    dec.validate(path, after)?;
    Ok(dec)
}

/// `Φ_T(S) − Φ_{T'}(S) + 2k + (8k+ℓ)·log(W/w(s)) − Σ|D_i|` with `S` the
/// union of the decomposition.
pub fn check_theorem_bound(
    aw: &AccessWeights,
    path: &BeforePath,
    after: &TreeArena,
    dec: &Decomposition,
) -> Result<f64> {
    let dec = validated(dec, path, after)?;
    let (k, l) = (dec.k as f64, dec.l as f64);
    let lhs: usize = dec.disjoint.iter().map(Vec::len).sum();
    Ok(aw.delta(&dec.keys()) + 2.0 * k + (8.0 * k + l) * aw.log_w_over_s() - lhs as f64)
}

/// The two-step bound: rotate to the root, then rearrange. Adds `|Z_P|` on
/// the left and the zig-zag terms `2log(W/w(s)) + 2log(W/w(T(s)))` on the
/// right of [`check_theorem_bound`].
pub fn check_fused_bound(
    aw: &AccessWeights,
    path: &BeforePath,
    after: &TreeArena,
    dec: &Decomposition,
) -> Result<f64> {
    let base = check_theorem_bound(aw, path, after, dec)?;
    let z_p = zigzag_sets(path).union.len() as f64;
    Ok(base + 2.0 * aw.log_w_over_s() + 2.0 * aw.log_w_over_ts() - z_p)
}

/// Decomposition used for each algorithm's bound.
pub fn canonical_decomposition(
    t: Transformer,
    path: &BeforePath,
    after: &TreeArena,
) -> Decomposition {
    match t {
        Transformer::PathBalance => Decomposition::depth_classes(path, after),
        _ => Decomposition::leaves_and_classes(path, after),
    }
}

/// Every slack for one access. Missing audits (no set to audit) are `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditSlacks {
    pub lemma1: f64,
    pub lemma2: f64,
    pub zigzag_pair: f64,
    pub zigzag_aggregate: f64,
    pub decomposition_bound: f64,
    pub fused_bound: f64,
}

impl AuditSlacks {
    pub fn min(&self) -> f64 {
        [
            self.lemma1,
            self.lemma2,
            self.zigzag_pair,
            self.zigzag_aggregate,
            self.decomposition_bound,
            self.fused_bound,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
    }

    pub fn zigzag(&self) -> f64 {
        self.zigzag_pair.min(self.zigzag_aggregate)
    }

    pub fn theorem(&self) -> f64 {
        self.decomposition_bound.min(self.fused_bound)
    }

    /// Name and value of each slack below `-TOLERANCE`.
    pub fn failures(&self) -> Vec<(&'static str, f64)> {
        [
            ("lemma1", self.lemma1),
            ("lemma2", self.lemma2),
            ("zigzag_pair", self.zigzag_pair),
            ("zigzag_aggregate", self.zigzag_aggregate),
            ("decomposition_bound", self.decomposition_bound),
            ("fused_bound", self.fused_bound),
        ]
        .into_iter()
        .filter(|(_, v)| *v < -TOLERANCE)
        .collect()
    }
}

/// Runs every audit on one access: the subtree-disjoint bound on each
/// disjoint set of the canonical decomposition, the monotone bound on every
/// monotone class of the after-tree, the zig-zag claim against
/// rotate-to-root, and both decomposition bounds.
pub fn audit_access(
    t: Transformer,
    aw: &AccessWeights,
    path: &BeforePath,
    after: &TreeArena,
) -> Result<AuditSlacks> {
    let dec = canonical_decomposition(t, path, after);
    let mut lemma1 = f64::INFINITY;
    for d in &dec.disjoint {
        lemma1 = lemma1.min(check_lemma_disjoint(aw, after, d)?);
    }
    let mut lemma2 = f64::INFINITY;
    for (_, _, m) in monotone_partition(after).sets() {
        lemma2 = lemma2.min(check_lemma_monotone(aw, path, after, m)?);
    }
    let rtr = aw.with_after(&rotate_to_root(path))?;
    let z = check_zigzag_claim(&rtr, path);
    Ok(AuditSlacks {
        lemma1,
        lemma2,
        zigzag_pair: z.min_pair,
        zigzag_aggregate: z.aggregate,
        decomposition_bound: check_theorem_bound(aw, path, after, &dec)?,
        fused_bound: check_fused_bound(aw, path, after, &dec)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::weights::WeightMap;
    use crate::transformers::splay_global;

    fn access(path: &[Key], t: Transformer, n: usize) -> (BeforePath, TreeArena, AccessWeights) {
        let path = BeforePath::new(path.to_vec()).unwrap();
        let tree = path.to_tree();
        let after = t.apply(&path).into_inner();
        let aw = AccessWeights::compute(&tree, &path, &after, &WeightMap::uniform(n)).unwrap();
        (path, after, aw)
    }

    #[test]
    fn empty_sets_give_the_constant_terms() {
        let (_, after, aw) = access(&[3, 2, 1], Transformer::Splay, 3);
        let s1 = check_lemma_disjoint(&aw, &after, &[]).unwrap();
        // T(s) = {1}, so the constant is 2 + 8·log(3).
        assert!((s1 - 2.0 - 8.0 * 3f64.log2()).abs() < 1e-12);
        let path = BeforePath::new(vec![3, 2, 1]).unwrap();
        let s2 = check_lemma_monotone(&aw, &path, &after, &[]).unwrap();
        assert!((s2 - 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn lemma1_rejects_nested_sets() {
        let (_, after, aw) = access(&[3, 2, 1], Transformer::RotateToRoot, 3);
        assert_eq!(
            check_lemma_disjoint(&aw, &after, &[3, 2]).unwrap_err(),
            Error::NotSubtreeDisjoint
        );
    }

    #[test]
    fn singleton_with_unchanged_subtree() {
        // 2 keeps its subtree {2} when splaying 1 up a zig-zag to 3.
        let (_, after, aw) = access(&[3, 1, 2], Transformer::Splay, 3);
        let slack = check_lemma_disjoint(&aw, &after, &[3]).unwrap();
        assert!(slack >= 1.0);
    }

    #[test]
    fn zigzag_pair_slack_small_case() {
        let path = BeforePath::new(vec![3, 1, 2]).unwrap();
        let tree = path.to_tree();
        let rtr = rotate_to_root(&path).into_inner();
        let aw = AccessWeights::compute(&tree, &path, &rtr, &WeightMap::uniform(3)).unwrap();
        let z = check_zigzag_claim(&aw, &path);
        // Φ(Z) − Φ''(Z) = log 3 + log 2, ratio w(T(3))/w(T(1)) = 3/2.
        let expected = 3f64.log2() + 1.0 + (1.5f64).log2() - 2.0;
        assert!((z.min_pair - expected).abs() < 1e-12);
        assert!(z.min_pair >= 0.0 && z.aggregate >= 0.0);
    }

    #[test]
    fn no_alternation_is_vacuous() {
        let path = BeforePath::new(vec![4, 3, 2, 1]).unwrap();
        let tree = path.to_tree();
        let rtr = rotate_to_root(&path).into_inner();
        let aw = AccessWeights::compute(&tree, &path, &rtr, &WeightMap::uniform(4)).unwrap();
        let z = check_zigzag_claim(&aw, &path);
        assert_eq!(z.min_pair, f64::INFINITY);
        // Only the bound terms remain: 2·log(4/1) + 2·log(4/1).
        assert!((z.aggregate - 8.0).abs() < 1e-12);
    }

    #[test]
    fn single_node_theorem_slack() {
        let (path, after, aw) = access(&[1], Transformer::Splay, 1);
        let dec = canonical_decomposition(Transformer::Splay, &path, &after);
        assert!(check_theorem_bound(&aw, &path, &after, &dec).unwrap() >= 2.0);
    }

    #[test]
    fn illustrative_access_audits() {
        let (path, after) = crate::fixtures::illustrative_access();
        let tree = path.to_tree();
        let aw = AccessWeights::compute(&tree, &path, &after, &WeightMap::uniform(12)).unwrap();
        let slacks = audit_access(Transformer::Splay, &aw, &path, &after).unwrap();
        assert!(slacks.failures().is_empty(), "{slacks:?}");
        let spl = splay_global(&path);
        let aw = aw.with_after(&spl).unwrap();
        let slacks = audit_access(Transformer::Splay, &aw, &path, &spl).unwrap();
        assert!(slacks.failures().is_empty(), "{slacks:?}");
    }
}
