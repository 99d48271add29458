//! Generators for restructurings that halve depths (or nearly so) yet defeat
//! the access lemma, each paired with a property report.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::adversarial::{adversarial_weights, AdversarialReport};
use crate::analysis::decompose::{monotone_partition, side_alternations};
use crate::analysis::depth::{all_lost_gained, depth_halving_conditions, HalvingWitness};
use crate::bst::{AfterTree, BeforePath, Key, Side, TreeArena};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// Alternating runs of growing length; every node loses half its
    /// ancestors, but `z` and the leaf count are `Θ(√n)`.
    Fig2Left,
    /// One-sided path regrouped into `√n` blocks.
    Fig2Right,
    /// Zigzag path whose after-tree halves every depth but has a right spine
    /// of length `Θ(n)`.
    Fig3,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Fig2Left, Family::Fig2Right, Family::Fig3];

    pub fn name(self) -> &'static str {
        match self {
            Family::Fig2Left => "fig2-left",
            Family::Fig2Right => "fig2-right",
            Family::Fig3 => "fig3",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidWorkload(format!("unknown family `{s}`")))
    }
}

pub const MIN_N: usize = 16;

/// Epsilons for which fig2-left must violate the depth-halving conditions.
pub const HALVING_EPSILONS: [f64; 5] = [0.25, 1.0 / 6.0, 0.1, 0.05, 0.02];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub family: Family,
    pub n: usize,
    pub z: usize,
    pub leaves: usize,
    pub l_left: usize,
    pub l_right: usize,
    pub checks: Vec<PropertyCheck>,
    /// `(ε, witness)` for the depth-halving conditions with `c = 4, d = 2`.
    pub halving: Vec<(f64, Option<HalvingWitness>)>,
    /// Heavy/light weighting with `K = n⁴`.
    pub adversarial: Option<AdversarialReport>,
}

impl CounterexampleReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn check(name: &str, holds: bool, detail: String) -> PropertyCheck {
    PropertyCheck {
        name: name.to_string(),
        holds,
        detail,
    }
}

type Links = Vec<(Key, Option<Key>, Side)>;

/// Appends `keys` as a chain hanging off `top` (if any), each next key being
/// the `side` child of the previous one.
fn chain(links: &mut Links, top: Option<(Key, Side)>, keys: &[Key], side: Side) {
    let mut parent = top;
    for &k in keys {
        links.push((k, parent.map(|p| p.0), parent.map_or(Side::Left, |p| p.1)));
        parent = Some((k, side));
    }
}

fn split_sides(path: &BeforePath) -> (Vec<Key>, Vec<Key>) {
    let s = path.accessed();
    let body = &path.keys()[..path.len() - 1];
    (
        body.iter().copied().filter(|&k| k < s).collect(),
        body.iter().copied().filter(|&k| k > s).collect(),
    )
}

fn fig2_left(n: usize) -> Result<(BeforePath, TreeArena)> {
    let mut sides = Vec::with_capacity(n - 1);
    let mut runs = Vec::new();
    let mut u = 1;
    while sides.len() < n - 1 {
        for side in [Side::Left, Side::Right] {
            let len = u.min(n - 1 - sides.len());
            if len == 0 {
                break;
            }
            if side == Side::Left {
                runs.push(len);
            }
            sides.extend(std::iter::repeat_n(side, len));
        }
        u += 1;
    }
    let path = BeforePath::from_sides(&sides);
    let s = path.accessed();
    let (left, right) = split_sides(&path);
    let mut links: Links = vec![(s, None, Side::Left)];
    chain(&mut links, Some((s, Side::Right)), &right, Side::Left);
    // Left side: chain of right children in path order, except that in every
    // run of length ≥ 3 the first two nodes hang below the third.
    let mut tail = (s, Side::Left);
    let mut it = left.iter().copied();
    for len in runs {
        let run: Vec<Key> = it.by_ref().take(len).collect();
        if len >= 3 {
            links.push((run[2], Some(tail.0), tail.1));
            links.push((run[1], Some(run[2]), Side::Left));
            links.push((run[0], Some(run[1]), Side::Left));
            chain(
                &mut links,
                Some((run[2], Side::Right)),
                &run[3..],
                Side::Right,
            );
        } else {
            chain(&mut links, Some(tail), &run, Side::Right);
        }
        tail = (*run.last().expect("non-empty run"), Side::Right);
    }
    Ok((path, TreeArena::build(&links)?))
}

fn block_len(n: usize) -> usize {
    (n as f64).sqrt().ceil() as usize
}

fn fig2_right(n: usize) -> Result<(BeforePath, TreeArena)> {
    let path = BeforePath::from_sides(&vec![Side::Right; n - 1]);
    let b = block_len(n);
    let keys: Vec<Key> = (2..=n as Key).collect();
    let groups: Vec<&[Key]> = keys.chunks(b).collect();
    let mut links: Links = vec![(1, None, Side::Left)];
    let mut spine = (1, Side::Right);
    for g in groups.iter().rev() {
        links.push((g[0], Some(spine.0), spine.1));
        let rest: Vec<Key> = g[1..].iter().rev().copied().collect();
        chain(&mut links, Some((g[0], Side::Right)), &rest, Side::Left);
        spine = (g[0], Side::Left);
    }
    Ok((path, TreeArena::build(&links)?))
}

fn fig3(n: usize) -> Result<(BeforePath, TreeArena)> {
    let sides: Vec<Side> = (0..n - 1)
        .map(|i| if i % 2 == 0 { Side::Right } else { Side::Left })
        .collect();
    let path = BeforePath::from_sides(&sides);
    let s = path.accessed();
    let (left, r) = split_sides(&path);
    let mut links: Links = vec![(s, None, Side::Left)];
    chain(&mut links, Some((s, Side::Left)), &left, Side::Right);
    // Right side by path rank: pairs (r[2i-2], r[2i-1]) from the top and the
    // i-th smallest key r[m-i] interleave into a long right spine.
    let m = r.len();
    let k = m / 3;
    let mut attach = (s, Side::Right);
    for i in 1..=k {
        let (p, u, v) = (r[2 * i - 2], r[2 * i - 1], r[m - i]);
        links.push((u, Some(attach.0), attach.1));
        links.push((p, Some(u), Side::Right));
        links.push((v, Some(u), Side::Left));
        attach = (v, Side::Right);
    }
    chain(&mut links, Some(attach), &r[2 * k..m - k], Side::Left);
    Ok((path, TreeArena::build(&links)?))
}

/// Builds an instance of `family` over `n` keys.
pub fn generate(family: Family, n: usize) -> Result<(BeforePath, AfterTree)> {
    if n < MIN_N {
        return Err(Error::Precondition(format!(
            "{family} needs n ≥ {MIN_N}, got {n}"
        )));
    }
    let (path, tree) = match family {
        Family::Fig2Left => fig2_left(n)?,
        Family::Fig2Right => fig2_right(n)?,
        Family::Fig3 => fig3(n)?,
    };
    let after = AfterTree::new(&path, tree)?;
    Ok((path, after))
}

/// Generates the instance and checks the family's properties.
pub fn gen_counterexample(
    family: Family,
    n: usize,
) -> Result<(BeforePath, AfterTree, CounterexampleReport)> {
    let (path, after) = generate(family, n)?;
    let s = path.accessed();
    let mono = monotone_partition(&after);
    let z = side_alternations(&path);
    let leaves = after.leaves().len();
    let sqrt_n = (n as f64).sqrt();
    let lg: Vec<_> = all_lost_gained(&path, &after)?
        .into_iter()
        .filter(|(k, _, _)| *k != s)
        .collect();
    let mut checks = Vec::new();
    let mut halving = Vec::new();
    let mut adversarial = None;
    match family {
        Family::Fig2Left => {
            let bad = lg.iter().find(|(_, d, g)| g.lost_ancestors < d / 2);
            checks.push(check(
                "loses at least half of its ancestors",
                bad.is_none(),
                format!("{bad:?}"),
            ));
            let max_gain = lg
                .iter()
                .map(|(_, _, g)| g.gained_descendants)
                .max()
                .unwrap_or(0);
            checks.push(check(
                "gains at most 2 descendants",
                max_gain <= 2,
                format!("max {max_gain}"),
            ));
            checks.push(check(
                "leaves + z ≤ 8√n",
                (leaves + z) as f64 <= 8.0 * sqrt_n,
                format!("{leaves} + {z} vs {:.1}", 8.0 * sqrt_n),
            ));
            for eps in HALVING_EPSILONS {
                halving.push((
                    eps,
                    depth_halving_conditions(&path, &after, eps, 4.0, 2)?.witness,
                ));
            }
        }
        Family::Fig2Right => {
            let bad = lg
                .iter()
                .find(|(_, d, g)| (g.lost_ancestors as f64) < *d as f64 - 2.0 * sqrt_n);
            checks.push(check(
                "loses at least d(x) − 2√n ancestors",
                bad.is_none(),
                format!("{bad:?}"),
            ));
            // The accessed key becomes everyone's ancestor; it is not counted.
            let max_gain = lg
                .iter()
                .map(|(_, _, g)| g.gained_ancestors.saturating_sub(1))
                .max()
                .unwrap_or(0);
            checks.push(check(
                "gains at most 1 ancestor besides the accessed key",
                max_gain <= 1,
                format!("max {max_gain}"),
            ));
            checks.push(check("z = 0", z == 0, format!("z = {z}")));
            checks.push(check(
                "leaves ≤ 4√n",
                leaves as f64 <= 4.0 * sqrt_n,
                format!("{leaves} vs {:.1}", 4.0 * sqrt_n),
            ));
        }
        Family::Fig3 => {
            let depths = after.depths();
            let bad = path
                .keys()
                .iter()
                .enumerate()
                .find(|&(d, k)| depths[after.id(*k).expect("key present")] > d.div_ceil(2) + 2);
            checks.push(check(
                "after-depth ≤ ⌈d(x)/2⌉ + 2",
                bad.is_none(),
                format!("{bad:?}"),
            ));
            let (_, rep) = adversarial_weights(&path, &after, (n as f64).powi(4))?;
            checks.push(check(
                "some key has side depth ≥ n/8",
                rep.k * 8 >= n,
                format!("max side depth {}", rep.k),
            ));
            adversarial = Some(rep);
        }
    }
    let report = CounterexampleReport {
        family,
        n,
        z,
        leaves,
        l_left: mono.l_left(),
        l_right: mono.l_right(),
        checks,
        halving,
        adversarial,
    };
    Ok((path, after, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_families_pass_at_small_and_medium_n() {
        for family in Family::ALL {
            for n in [16, 17, 64, 100, 256] {
                let (path, after, rep) = gen_counterexample(family, n).unwrap();
                assert_eq!(path.len(), n);
                assert!(after.validate_bst());
                assert!(rep.all_pass(), "{family} n={n}: {:?}", rep.checks);
            }
        }
    }

    #[test]
    fn fig2_right_shape_at_16() {
        let (_, after) = generate(Family::Fig2Right, 16).unwrap();
        // Blocks of 4 over 2..=16: {2..5}, {6..9}, {10..13}, {14,15,16}.
        assert_eq!(
            after.to_string(),
            "1(-,14(10(6(2(-,5(4(3,-),-)),9(8(7,-),-)),13(12(11,-),-)),16(15,-)))"
        );
    }

    #[test]
    fn fig3_halves_depths() {
        let (path, after) = generate(Family::Fig3, 16).unwrap();
        for (d, &k) in path.keys().iter().enumerate() {
            assert!(after.depth(k).unwrap() <= d.div_ceil(2) + 2);
        }
    }

    #[test]
    fn fig2_left_violates_halving_with_a_witness() {
        let (_, _, rep) = gen_counterexample(Family::Fig2Left, 1024).unwrap();
        let w = rep
            .halving
            .iter()
            .find(|(e, _)| *e == 0.1)
            .unwrap()
            .1
            .unwrap();
        assert!((w.lost_ancestors as f64) < w.required);
    }

    #[test]
    fn fig3_adversarial_gap_beats_the_budget() {
        let (_, _, rep) = gen_counterexample(Family::Fig3, 1024).unwrap();
        let a = rep.adversarial.unwrap();
        assert!(a.exceeds_budget(), "{a:?}");
        assert!(a.k * 8 >= 1024);
    }

    #[test]
    fn too_small() {
        assert!(generate(Family::Fig3, 15).is_err());
        assert!("fig4".parse::<Family>().is_err());
        assert_eq!("fig2-left".parse::<Family>().unwrap(), Family::Fig2Left);
    }
}
