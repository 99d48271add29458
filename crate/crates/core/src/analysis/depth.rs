use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bst::{BeforePath, Key, TreeArena};
use crate::error::{Error, Result};

/// Ancestor and descendant changes of one path node, counted within the path.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LostGained {
    pub lost_ancestors: usize,
    pub gained_ancestors: usize,
    pub lost_descendants: usize,
    pub gained_descendants: usize,
}

/// Per-node changes for every path key, with `d(x)` (ancestors in the path).
pub fn all_lost_gained(
    path: &BeforePath,
    after: &TreeArena,
) -> Result<Vec<(Key, usize, LostGained)>> {
    let pos: HashMap<Key, usize> = path
        .keys()
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, i))
        .collect();
    if after.len() != path.len() || after.nodes().iter().any(|n| !pos.contains_key(&n.key)) {
        return Err(Error::AfterMismatch(
            "after-tree keys differ from the path".into(),
        ));
    }
    let mut out: Vec<LostGained> = vec![LostGained::default(); path.len()];
    let mut kept_desc = vec![0usize; path.len()];
    for n in after.nodes() {
        let px = pos[&n.key];
        let mut kept = 0;
        let mut cur = n.parent;
        while let Some(id) = cur {
            let py = pos[&after.key(id)];
            if py < px {
                kept += 1;
                kept_desc[py] += 1;
            } else {
                out[px].gained_ancestors += 1;
                out[py].gained_descendants += 1;
            }
            cur = after.node(id).parent;
        }
        out[px].lost_ancestors = px - kept;
    }
    let len = path.len();
    Ok(path
        .keys()
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let mut lg = out[i];
            lg.lost_descendants = len - 1 - i - kept_desc[i];
            (k, i, lg)
        })
        .collect())
}

pub fn lost_gained(path: &BeforePath, after: &TreeArena, x: Key) -> Result<LostGained> {
    let i = path.depth_of(x).ok_or(Error::KeyAbsent(x))?;
    Ok(all_lost_gained(path, after)?[i].2)
}

/// First node violating a depth-halving condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalvingWitness {
    pub key: Key,
    pub depth: usize,
    pub lost_ancestors: usize,
    pub gained_descendants: usize,
    /// Required number of lost ancestors, `(½+ε)·d(x) − c`.
    pub required: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalvingReport {
    pub holds: bool,
    pub witness: Option<HalvingWitness>,
}

/// Every non-accessed path node loses at least `(½+ε)·d(x) − c` ancestors
/// and gains at most `d` descendants.
pub fn depth_halving_conditions(
    path: &BeforePath,
    after: &TreeArena,
    eps: f64,
    c: f64,
    d: usize,
) -> Result<HalvingReport> {
    let s = path.accessed();
    for (key, depth, lg) in all_lost_gained(path, after)? {
        if key == s {
            continue;
        }
        let required = (0.5 + eps) * depth as f64 - c;
        if (lg.lost_ancestors as f64) < required || lg.gained_descendants > d {
            return Ok(HalvingReport {
                holds: false,
                witness: Some(HalvingWitness {
                    key,
                    depth,
                    lost_ancestors: lg.lost_ancestors,
                    gained_descendants: lg.gained_descendants,
                    required,
                }),
            });
        }
    }
    Ok(HalvingReport {
        holds: true,
        witness: None,
    })
}

/// Smallest `lost/d(x)` over non-accessed nodes with `d(x) ≥ 1`, and the
/// largest number of gained descendants. `(1, 0)` for a single-node path.
pub fn halving_stats(path: &BeforePath, after: &TreeArena) -> Result<(f64, usize)> {
    let s = path.accessed();
    let mut ratio = 1.0f64;
    let mut gained = 0;
    for (key, depth, lg) in all_lost_gained(path, after)? {
        if key != s && depth > 0 {
            ratio = ratio.min(lg.lost_ancestors as f64 / depth as f64);
        }
        if key != s {
            gained = gained.max(lg.gained_descendants);
        }
    }
    Ok((ratio, gained))
}
