use serde::{Deserialize, Serialize};

use crate::analysis::potential::sol_potential;
use crate::analysis::weights::WeightMap;
use crate::bst::{BeforePath, Key, Side, TreeArena};
use crate::error::{Error, Result};

/// Potential increase forced by a heavy/light weighting of the path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdversarialReport {
    /// Node of maximum right-depth (left-depth) in the after-tree.
    pub x: Key,
    pub side: Side,
    /// Side depth of `x`.
    pub k: usize,
    pub heavy: f64,
    /// Φ' − Φ over the whole path.
    pub gap: f64,
    /// `k·log(K/|P|) − |P|·log|P|`.
    pub lower_bound: f64,
    /// `2 + 16·log(W/w(s))`.
    pub budget: f64,
    pub total: f64,
    pub w_s: f64,
}

impl AdversarialReport {
    pub fn meets_lower_bound(&self) -> bool {
        self.gap >= self.lower_bound - 1e-6
    }

    pub fn exceeds_budget(&self) -> bool {
        self.gap > self.budget
    }
}

/// Gives weight `heavy` to `x` and its ancestors on the path and weight 1 to
/// the proper descendants of `x`, where `x` has the largest side depth in the
/// after-tree. The path is taken to be the whole tree.
pub fn adversarial_weights(
    path: &BeforePath,
    after: &TreeArena,
    heavy: f64,
) -> Result<(WeightMap, AdversarialReport)> {
    if path.len() < 2 {
        return Err(Error::Precondition("path needs at least two nodes".into()));
    }
    if !(heavy >= 1.0 && heavy.is_finite()) {
        return Err(Error::Precondition(
            "heavy weight must be finite and at least 1".into(),
        ));
    }
    let s = path.accessed();
    let mut best: Option<(usize, Key, Side)> = None;
    for &k in path.keys() {
        let side = match k.cmp(&s) {
            std::cmp::Ordering::Greater => Side::Right,
            std::cmp::Ordering::Less => Side::Left,
            std::cmp::Ordering::Equal => continue,
        };
        let depth = after.side_depth(k, side)?;
        if best.is_none_or(|b| depth > b.0) {
            best = Some((depth, k, side));
        }
    }
    let (k, x, side) = best.expect("path has a non-accessed node");
    let ix = path.depth_of(x).expect("x on path");
    let weights = WeightMap::new(
        path.keys()
            .iter()
            .enumerate()
            .map(|(i, &key)| (key, if i <= ix { heavy } else { 1.0 }))
            .collect(),
    )?;
    let before = path.to_tree();
    let gap = sol_potential(after, &weights)? - sol_potential(&before, &weights)?;
    let p = path.len() as f64;
    let total = weights.total();
    let w_s = weights.get(s);
    let report = AdversarialReport {
        x,
        side,
        k,
        heavy,
        gap,
        lower_bound: k as f64 * (heavy / p).log2() - p * p.log2(),
        budget: 2.0 + 16.0 * (total / w_s).log2(),
        total,
        w_s,
    };
    Ok((weights, report))
}
