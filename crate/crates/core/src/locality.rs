//! Local decompositions: bounded-window sequences of path rearrangements
//! that turn a before-path into its after-tree.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analysis::decompose::monotone_partition;
use crate::bst::{BeforePath, Key, Side, TreeArena, TreeBuilder};
use crate::error::{Error, Result};

/// One rearrangement: the downward path `path` of the current tree is
/// replaced by `replacement`, a BST on the same keys.
#[derive(Clone, Debug)]
pub struct Step {
    pub path: Vec<Key>,
    pub replacement: TreeArena,
}

#[derive(Clone, Debug, Default)]
pub struct LocalDecomposition {
    pub steps: Vec<Step>,
}

impl LocalDecomposition {
    /// Largest step.
    pub fn window(&self) -> usize {
        self.steps.iter().map(|s| s.path.len()).max().unwrap_or(0)
    }

    /// The whole path in a single step.
    pub fn one_shot(path: &BeforePath, after: &TreeArena) -> Self {
        LocalDecomposition {
            steps: vec![Step {
                path: path.keys().to_vec(),
                replacement: after.clone(),
            }],
        }
    }

    /// Steps as `{"path": [...], "replacement": "<tree>"}` for debugging.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.steps
                .iter()
                .map(|s| serde_json::json!({ "path": s.path, "replacement": s.replacement.to_string() }))
                .collect(),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// The first step does not contain the accessed key.
    Start,
    /// Step `i + 1` adds no new key.
    Progress(usize),
    /// Steps `i` and `i + 1` share no key.
    Overlap(usize),
    /// A key dropped after step `i` reappears in step `j > i + 1`.
    NoRevisit(usize, usize),
    /// Step `i` is longer than the window.
    WindowSize(usize),
    /// The replay does not end in the after-tree.
    WrongResult,
}

impl Violation {
    pub fn label(&self) -> &'static str {
        match self {
            Violation::Start => "start",
            Violation::Progress(_) => "progress",
            Violation::Overlap(_) => "overlap",
            Violation::NoRevisit(..) => "no-revisit",
            Violation::WindowSize(_) => "window-size",
            Violation::WrongResult => "result",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Start => write!(f, "start"),
            Violation::Progress(i) => write!(f, "progress at step {}", i + 1),
            Violation::Overlap(i) => write!(f, "overlap between steps {i} and {}", i + 1),
            Violation::NoRevisit(i, j) => write!(
                f,
                "no-revisit: key dropped after step {i} reappears in step {j}"
            ),
            Violation::WindowSize(i) => write!(f, "window-size at step {i}"),
            Violation::WrongResult => write!(f, "replay does not reach the after-tree"),
        }
    }
}

/// Replays `dec` from the path tree and checks the five conditions in step
/// order, then the final tree. `Ok(None)` means valid.
pub fn verify_local(
    before: &BeforePath,
    after: &TreeArena,
    dec: &LocalDecomposition,
    window: usize,
) -> Result<Option<Violation>> {
    let sets: Vec<HashSet<Key>> = dec
        .steps
        .iter()
        .map(|s| s.path.iter().copied().collect())
        .collect();
    if let Some(first) = sets.first() {
        if !first.contains(&before.accessed()) {
            return Ok(Some(Violation::Start));
        }
    }
    let mut q = before.to_tree();
    for (i, step) in dec.steps.iter().enumerate() {
        if step.path.len() > window {
            return Ok(Some(Violation::WindowSize(i)));
        }
        if i > 0 {
            let (prev, cur) = (&sets[i - 1], &sets[i]);
            if cur.is_subset(prev) {
                return Ok(Some(Violation::Progress(i - 1)));
            }
            if prev.is_disjoint(cur) {
                return Ok(Some(Violation::Overlap(i - 1)));
            }
        }
        if i >= 2 {
            for h in 0..i - 1 {
                let dropped = sets[h].difference(&sets[h + 1]);
                if dropped.into_iter().any(|k| sets[i].contains(k)) {
                    return Ok(Some(Violation::NoRevisit(h, i)));
                }
            }
        }
        q.replace_path(&step.path, &step.replacement)?;
    }
    Ok((!q.same_shape(after)).then_some(Violation::WrongResult))
}

/// Builds a decomposition bottom-up along the path. After processing
/// `x_j..x_k`, every processed node whose after-subtree lies inside the
/// processed set (minus `s`) is final; the remaining processed nodes are
/// active and sit on a chain with the largest key on top. Each step takes the
/// next path node together with the active chain.
pub fn synthesize_local(before: &BeforePath, after: &TreeArena) -> Result<LocalDecomposition> {
    let keys = before.keys();
    let k = keys.len();
    if after.len() != k
        || keys.iter().any(|&x| !after.contains(x))
        || after.root_key() != Some(before.accessed())
    {
        return Err(Error::AfterMismatch(
            "after-tree does not fit the path".into(),
        ));
    }
    let s = before.accessed();
    let pos: HashMap<Key, usize> = keys.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    // Smallest path position inside each after-subtree.
    let mut minpos: HashMap<Key, usize> = HashMap::with_capacity(k);
    for &id in after.pre_order().iter().rev() {
        let n = after.node(id);
        let mut m = pos[&n.key];
        for c in [n.left, n.right].into_iter().flatten() {
            m = m.min(minpos[&after.key(c)]);
        }
        minpos.insert(n.key, m);
    }
    let in_x = |x: Key, j: usize| pos[&x] >= j;
    let inactive = |x: Key, j: usize| x != s && minpos[&x] >= j;
    let active = |j: usize| -> Vec<Key> {
        let mut v: Vec<Key> = keys[j..]
            .iter()
            .copied()
            .filter(|&x| !inactive(x, j))
            .collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    };

    let mut steps = Vec::new();
    for j in (0..k.saturating_sub(1)).rev() {
        let prev_active = active(j + 1);
        let mut step_keys = vec![keys[j]];
        step_keys.extend(prev_active.iter().copied());
        let target = target_tree(
            after,
            &keys[j..],
            &active(j),
            |x| inactive(x, j),
            |x| in_x(x, j),
        )?;
        steps.push(Step {
            replacement: induce(&target, &step_keys)?,
            path: step_keys,
        });
    }
    Ok(LocalDecomposition { steps })
}

/// Target arrangement of the processed keys: the active chain with each
/// maximal final after-subtree hanging in its key gap.
fn target_tree(
    after: &TreeArena,
    processed: &[Key],
    chain: &[Key],
    inactive: impl Fn(Key) -> bool,
    in_x: impl Fn(Key) -> bool,
) -> Result<TreeArena> {
    let mut b = TreeBuilder::new(processed.iter().copied());
    b.root(chain[0]);
    for w in chain.windows(2) {
        b.link(w[0], Side::Left, w[1]);
    }
    let mut ascending = chain.to_vec();
    ascending.reverse();
    for &x in processed.iter().filter(|&&x| inactive(x)) {
        let parent = after.parent_key(x).expect("only the root lacks a parent");
        if in_x(parent) && inactive(parent) {
            let side = if x < parent { Side::Left } else { Side::Right };
            b.link(parent, side, x);
        } else {
            let below = ascending.partition_point(|&a| a < x);
            if below == 0 {
                b.link(ascending[0], Side::Left, x);
            } else {
                b.link(ascending[below - 1], Side::Right, x);
            }
        }
    }
    b.build()
}

/// The tree on `keys` in which each key hangs below its nearest ancestor
/// among `keys` in `tree`.
fn induce(tree: &TreeArena, keys: &[Key]) -> Result<TreeArena> {
    let set: HashSet<Key> = keys.iter().copied().collect();
    let mut b = TreeBuilder::new(keys.iter().copied());
    for &x in keys {
        let mut cur = tree.parent_key(x);
        while let Some(p) = cur.filter(|p| !set.contains(p)) {
            cur = tree.parent_key(p);
        }
        match cur {
            Some(p) => {
                b.link(p, if x < p { Side::Left } else { Side::Right }, x);
            }
            None => {
                b.root(x);
            }
        }
    }
    b.build()
}

/// Monotone classes of the after-tree against twice the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneBound {
    pub window: usize,
    pub classes: usize,
    pub bound: usize,
}

impl MonotoneBound {
    pub fn holds(&self) -> bool {
        self.classes <= self.bound
    }
}

/// Requires `dec` to be valid for `(before, after)`.
pub fn monotone_bound_from_local(
    before: &BeforePath,
    after: &TreeArena,
    dec: &LocalDecomposition,
) -> Result<MonotoneBound> {
    let window = dec.window();
    if let Some(v) = verify_local(before, after, dec, window)? {
        return Err(Error::Precondition(format!("invalid decomposition: {v}")));
    }
    Ok(MonotoneBound {
        window,
        classes: monotone_partition(after).classes(),
        bound: 2 * window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transformers::{rotate_to_root, splay_global, Transformer};

    fn tree(shape: &str) -> TreeArena {
        // Only used for tiny literal trees in these tests.
        match shape {
            "1(-,2)" => {
                let mut b = TreeBuilder::new([1, 2]);
                b.root(1).link(1, Side::Right, 2);
                b.build().unwrap()
            }
            "1(-,3)" => {
                let mut b = TreeBuilder::new([1, 3]);
                b.root(1).link(1, Side::Right, 3);
                b.build().unwrap()
            }
            "3" => TreeArena::from_insertion_order(&[3]).unwrap(),
            "1(-,3(2,-))" => {
                let mut b = TreeBuilder::new([1, 2, 3]);
                b.root(1).link(1, Side::Right, 3).link(3, Side::Left, 2);
                b.build().unwrap()
            }
            _ => unreachable!(),
        }
    }

    fn all_paths(max_len: usize) -> Vec<BeforePath> {
        let mut out = Vec::new();
        for len in 1..=max_len {
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
                out.push(BeforePath::from_sides(&sides));
            }
        }
        out
    }

    #[test]
    fn one_shot_is_valid() {
        let path = BeforePath::new(vec![5, 4, 3, 2, 1]).unwrap();
        let a = splay_global(&path);
        let dec = LocalDecomposition::one_shot(&path, &a);
        assert_eq!(verify_local(&path, &a, &dec, 5).unwrap(), None);
        let wrong = LocalDecomposition::one_shot(&path, &rotate_to_root(&path));
        assert_eq!(
            verify_local(&path, &a, &wrong, 5).unwrap(),
            Some(Violation::WrongResult)
        );
        let mb = monotone_bound_from_local(&path, &a, &dec).unwrap();
        assert_eq!(mb.bound, 10);
        assert!(mb.holds());
    }

    #[test]
    fn single_node_needs_no_steps() {
        let path = BeforePath::new(vec![1]).unwrap();
        let a = rotate_to_root(&path);
        let dec = synthesize_local(&path, &a).unwrap();
        assert!(dec.steps.is_empty());
        assert_eq!(verify_local(&path, &a, &dec, 1).unwrap(), None);
    }

    #[test]
    fn synthesized_decompositions_replay() {
        for path in all_paths(10) {
            for t in [
                Transformer::RotateToRoot,
                Transformer::Splay,
                Transformer::Block3,
            ] {
                let a = t.apply(&path);
                let dec = synthesize_local(&path, &a).unwrap();
                let m = monotone_partition(&a);
                let w = dec.window();
                assert_eq!(
                    verify_local(&path, &a, &dec, w).unwrap(),
                    None,
                    "{t} {:?}",
                    path.keys()
                );
                assert!(
                    w <= m.l_left() + m.l_right() + 2,
                    "{t} {:?} window {w}",
                    path.keys()
                );
                if t == Transformer::RotateToRoot && path.len() > 1 {
                    assert_eq!(w, 2);
                }
            }
        }
    }

    #[test]
    fn disjoint_steps_violate_overlap() {
        let path = BeforePath::new(vec![3, 2, 1]).unwrap();
        let dec = LocalDecomposition {
            steps: vec![
                Step {
                    path: vec![2, 1],
                    replacement: tree("1(-,2)"),
                },
                Step {
                    path: vec![3],
                    replacement: tree("3"),
                },
            ],
        };
        let a = rotate_to_root(&path);
        assert_eq!(
            verify_local(&path, &a, &dec, 3).unwrap(),
            Some(Violation::Overlap(0))
        );
    }

    #[test]
    fn revisiting_a_dropped_key_is_rejected() {
        let path = BeforePath::new(vec![4, 3, 2, 1]).unwrap();
        let dec = LocalDecomposition {
            steps: vec![
                Step {
                    path: vec![2, 1],
                    replacement: tree("1(-,2)"),
                },
                Step {
                    path: vec![3, 1],
                    replacement: tree("1(-,3)"),
                },
                Step {
                    path: vec![1, 3, 2],
                    replacement: tree("1(-,3(2,-))"),
                },
            ],
        };
        let a = rotate_to_root(&path);
        let v = verify_local(&path, &a, &dec, 4).unwrap();
        assert_eq!(v, Some(Violation::NoRevisit(0, 2)));
        assert_eq!(v.unwrap().label(), "no-revisit");
    }

    #[test]
    fn shrunken_window_is_rejected() {
        let path = BeforePath::new(vec![9, 1, 8, 2, 7, 3, 6, 4, 5]).unwrap();
        let a = splay_global(&path);
        let dec = synthesize_local(&path, &a).unwrap();
        let w = dec.window();
        assert!(matches!(
            verify_local(&path, &a, &dec, w - 1).unwrap(),
            Some(Violation::WindowSize(_))
        ));
    }

    #[test]
    fn steps_must_be_paths() {
        let path = BeforePath::new(vec![3, 2, 1]).unwrap();
        let dec = LocalDecomposition {
            steps: vec![Step {
                path: vec![3, 1],
                replacement: tree("1(-,3)"),
            }],
        };
        assert!(verify_local(&path, &rotate_to_root(&path), &dec, 3).is_err());
    }
}
