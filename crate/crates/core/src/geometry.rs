//! Height diagrams: the geometric view of BSTs and Greedy BST.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::weights::WeightMap;
use crate::bst::{Key, Side, TreeArena, TreeBuilder};
use crate::error::{Error, Result};

/// Heights are shifted down by their minimum once they pass this value.
const RENORMALIZE_ABOVE: u64 = 1 << 48;

/// `h: [n] → ℕ`, stored at index `a − 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HeightDiagram {
    h: Vec<u64>,
}

/// Open interval `(lo, hi)` around a key; `0` and `n + 1` stand for ±∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Neighborhood {
    pub lo: Key,
    pub hi: Key,
}

impl Neighborhood {
    /// Keys of `[n]` inside the interval, as a closed range.
    pub fn keys(&self) -> std::ops::RangeInclusive<Key> {
        self.lo + 1..=self.hi - 1
    }
}

impl HeightDiagram {
    pub fn new(h: Vec<u64>) -> Self {
        HeightDiagram { h }
    }

    /// `h(a) = H − depth(a)` for a tree over `1..=n`.
    pub fn from_tree(tree: &TreeArena) -> Result<Self> {
        let n = tree.len();
        if tree
            .in_order()
            .iter()
            .enumerate()
            .any(|(i, &k)| k != i as Key + 1)
        {
            return Err(Error::Precondition("tree keys must be 1..=n".into()));
        }
        let depths = tree.depths();
        let big_h = depths.iter().copied().max().unwrap_or(0);
        let mut h = vec![0; n];
        for (id, d) in depths.into_iter().enumerate() {
            h[tree.key(id) as usize - 1] = (big_h - d) as u64;
        }
        Ok(HeightDiagram { h })
    }

    /// Distinct heights in random order; always tree-structured.
    pub fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Self {
        let mut h: Vec<u64> = (0..n as u64).collect();
        h.shuffle(rng);
        HeightDiagram { h }
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn heights(&self) -> &[u64] {
        &self.h
    }

    pub fn height(&self, a: Key) -> Result<u64> {
        self.check(a)?;
        Ok(self.h[a as usize - 1])
    }

    fn check(&self, a: Key) -> Result<()> {
        if a < 1 || a as usize > self.h.len() {
            Err(Error::OutOfRange(a, self.h.len()))
        } else {
            Ok(())
        }
    }

    /// Every key interval has a unique maximum.
    pub fn has_tree_structure(&self) -> bool {
        let mut stack: Vec<u64> = Vec::new();
        for &x in &self.h {
            while stack.last().is_some_and(|&t| t < x) {
                stack.pop();
            }
            if stack.last() == Some(&x) {
                return false;
            }
            stack.push(x);
        }
        true
    }

    /// The tree whose root is the unique maximum, recursively.
    pub fn to_tree(&self) -> Result<TreeArena> {
        if !self.has_tree_structure() {
            return Err(Error::NotTreeStructured);
        }
        let n = self.h.len();
        let mut b = TreeBuilder::new(1..=n as Key);
        let mut stack: Vec<usize> = Vec::new();
        let mut parent: Vec<Option<(usize, Side)>> = vec![None; n];
        for i in 0..n {
            let mut last = None;
            while stack.last().is_some_and(|&t| self.h[t] < self.h[i]) {
                last = stack.pop();
            }
            if let Some(l) = last {
                parent[l] = Some((i, Side::Left));
            }
            if let Some(&t) = stack.last() {
                parent[i] = Some((t, Side::Right));
            }
            stack.push(i);
        }
        if let Some(&root) = stack.first() {
            b.root(root as Key + 1);
        }
        for (c, p) in parent.iter().enumerate() {
            if let Some((p, side)) = *p {
                b.link(p as Key + 1, side, c as Key + 1);
            }
        }
        b.build()
    }

    /// Keys `b` such that the rectangle spanned by `(a, ∞)` and `(b, h(b))`
    /// holds no other point; the point of `a` itself blocks. Increasing.
    pub fn stair(&self, a: Key) -> Result<Vec<Key>> {
        self.check(a)?;
        let i = a as usize - 1;
        let mut left = Vec::new();
        let mut best = self.h[i];
        for j in (0..i).rev() {
            if self.h[j] > best {
                left.push(j as Key + 1);
                best = self.h[j];
            }
        }
        left.reverse();
        left.push(a);
        let mut best = self.h[i];
        for j in i + 1..self.h.len() {
            if self.h[j] > best {
                left.push(j as Key + 1);
                best = self.h[j];
            }
        }
        Ok(left)
    }

    /// Maximal open interval around `a` with no other key at height ≥ `h(a)`.
    pub fn neighborhood(&self, a: Key) -> Result<Neighborhood> {
        self.check(a)?;
        let i = a as usize - 1;
        let ha = self.h[i];
        let lo = (0..i)
            .rev()
            .find(|&j| self.h[j] >= ha)
            .map_or(0, |j| j as Key + 1);
        let hi = (i + 1..self.h.len())
            .find(|&j| self.h[j] >= ha)
            .map_or(self.h.len() as Key + 1, |j| j as Key + 1);
        Ok(Neighborhood { lo, hi })
    }

    fn max_height(&self) -> u64 {
        self.h.iter().copied().max().unwrap_or(0)
    }

    /// Greedy BST: lifts the stair of `s` to `H + 1`. Returns the new diagram
    /// and the access cost `|stair|`.
    pub fn greedy_access(&self, s: Key) -> Result<(HeightDiagram, usize)> {
        let stair = self.stair(s)?;
        let mut h = self.h.clone();
        let top = self.max_height() + 1;
        for &b in &stair {
            h[b as usize - 1] = top;
        }
        if top > RENORMALIZE_ABOVE {
            let min = h.iter().copied().min().unwrap_or(0);
            h.iter_mut().for_each(|x| *x -= min);
        }
        Ok((HeightDiagram { h }, stair.len()))
    }

    /// `Σ_{a ∈ X} log₂ w(N_h(a) ∩ [n])`.
    pub fn partial_potential(&self, w: &WeightMap, xs: &[Key]) -> Result<f64> {
        xs.iter()
            .map(|&a| {
                let nb = self.neighborhood(a)?;
                Ok(w.range(nb.lo + 1, nb.hi - 1).log2())
            })
            .sum()
    }

    /// Φ_h over all keys.
    pub fn potential(&self, w: &WeightMap) -> Result<f64> {
        let all: Vec<Key> = (1..=self.h.len() as Key).collect();
        self.partial_potential(w, &all)
    }

    /// Serializes as a comma-separated row of heights.
    pub fn to_csv_row(&self) -> String {
        self.h
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

pub fn geometric_potential(h: &HeightDiagram, w: &WeightMap) -> Result<f64> {
    h.potential(w)
}

/// Neighborhoods after the access are pairwise disjoint on `[n]`.
pub fn is_neighborhood_disjoint(after: &HeightDiagram, xs: &[Key]) -> Result<bool> {
    let mut ivs: Vec<Neighborhood> = xs
        .iter()
        .map(|&a| after.neighborhood(a))
        .collect::<Result<_>>()?;
    ivs.sort_by_key(|nb| nb.lo);
    Ok(ivs.windows(2).all(|p| p[0].hi - 1 < p[1].lo + 1))
}

/// Slacks of the neighborhood-disjoint bound on the odd- and even-indexed
/// halves of the stair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricAudit {
    pub odd_disjoint: bool,
    pub even_disjoint: bool,
    pub slack_odd: f64,
    pub slack_even: f64,
}

impl GeometricAudit {
    pub fn min_slack(&self) -> f64 {
        self.slack_odd.min(self.slack_even)
    }
}

/// `2 + 8·log(W/w(N_h(s))) + Φ_h(X) − Φ_{h'}(X) − |X|` for `X` the odd and
/// the even positions of the stair of `s` in key order.
pub fn check_geometric_access_lemma(
    h: &HeightDiagram,
    h_after: &HeightDiagram,
    s: Key,
    w: &WeightMap,
) -> Result<GeometricAudit> {
    if h.len() != h_after.len() {
        return Err(Error::Precondition("diagrams differ in size".into()));
    }
    let stair = h.stair(s)?;
    let nb = h.neighborhood(s)?;
    let base = 2.0 + 8.0 * (w.total() / w.range(nb.lo + 1, nb.hi - 1)).log2();
    let odd: Vec<Key> = stair.iter().copied().step_by(2).collect();
    let even: Vec<Key> = stair.iter().copied().skip(1).step_by(2).collect();
    let slack =
        |xs: &[Key]| -> Result<f64> {
            Ok(base + h.partial_potential(w, xs)?
                - h_after.partial_potential(w, xs)?
                - xs.len() as f64)
        };
    Ok(GeometricAudit {
        odd_disjoint: is_neighborhood_disjoint(h_after, &odd)?,
        even_disjoint: is_neighborhood_disjoint(h_after, &even)?,
        slack_odd: slack(&odd)?,
        slack_even: slack(&even)?,
    })
}
