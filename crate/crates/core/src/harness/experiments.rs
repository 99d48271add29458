use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::record::AuditSelection;
use crate::analysis::weights::WeightMap;
use crate::analysis::wings::{check_wing_telescoping, WingRun};
use crate::bst::{Key, TreeArena};
use crate::error::{Error, Result};
use crate::geometry::{check_geometric_access_lemma, HeightDiagram};
use crate::harness::run::{run, InitialTree, RunConfig, WeightScheme};
use crate::harness::workload::{Workload, WorkloadKind};
use crate::par;
use crate::transformers::Transformer;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub m: usize,
    pub total_cost: usize,
    /// `C / ((n + m)·log₂ n)`.
    pub k: f64,
    /// Smallest per-access slack of the path-balance bound.
    pub min_slack: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    /// Least-squares fit `K ≈ slope·log₂log₂n + intercept`.
    pub slope: f64,
    pub intercept: f64,
    /// Largest `|K − fit| / fit`.
    pub max_rel_residual: f64,
}

impl ScalingReport {
    /// `K(n_max)/K(n_min)` against the growth allowed by `log₂log₂n`.
    pub fn growth(&self) -> Option<(f64, f64)> {
        let (a, b) = (self.rows.first()?, self.rows.last()?);
        let ll = |n: usize| (n as f64).log2().log2();
        Some((b.k / a.k, ll(b.n) / ll(a.n) + 0.5))
    }
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

/// Path-balance on `m = n` uniform accesses with uniform weights, for
/// `n = 2^e` over `exps`, with the per-access bound audited.
pub fn pathbalance_scaling(exps: RangeInclusive<u32>, seed: u64) -> Result<ScalingReport> {
    if exps.is_empty() || *exps.start() == 0 {
        return Err(Error::Precondition("grid needs exponents ≥ 1".into()));
    }
    let grid: Vec<usize> = exps.map(|e| 1usize << e).collect();
    let audits = AuditSelection {
        theorem: true,
        ..AuditSelection::NONE
    };
    let rows = par::try_map(&grid, |&n| {
        let cfg = RunConfig::new(
            Transformer::PathBalance,
            Workload::new(WorkloadKind::Uniform, n, n, seed),
        )
        .weights(WeightScheme::Uniform)
        .audits(audits);
        let r = run(&cfg)?;
        Ok::<_, Error>(ScalingRow {
            n,
            m: n,
            total_cost: r.aggregates.total_cost,
            k: r.aggregates.k_statistic.expect("m = n > 0"),
            min_slack: r.aggregates.min_slack_theorem,
        })
    })?;
    let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).log2().log2()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.k).collect();
    let (slope, intercept) = least_squares(&xs, &ys);
    let max_rel_residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let fit = slope * x + intercept;
            ((y - fit) / fit).abs()
        })
        .fold(0.0, f64::max);
    Ok(ScalingReport {
        rows,
        slope,
        intercept,
        max_rel_residual,
    })
}

/// Algorithms for the sequential-access experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SequentialAlgo {
    Tree(Transformer),
    Greedy,
}

impl FromStr for SequentialAlgo {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(SequentialAlgo::Greedy),
            other => other.parse().map(SequentialAlgo::Tree),
        }
    }
}

impl fmt::Display for SequentialAlgo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequentialAlgo::Tree(t) => write!(f, "{t}"),
            SequentialAlgo::Greedy => f.write_str("greedy"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequentialReport {
    pub algorithm: String,
    pub n: usize,
    pub total_cost: usize,
    /// Wing-potential telescoping, for tree algorithms.
    pub wings: Option<WingRun>,
}

/// Greedy on the diagram of the left path, accessing `1..=n`.
pub fn greedy_sequential(n: usize) -> Result<usize> {
    let mut h = HeightDiagram::from_tree(&TreeArena::left_path(n))?;
    let mut total = 0;
    for s in 1..=n as Key {
        let (next, cost) = h.greedy_access(s)?;
        total += cost;
        h = next;
    }
    Ok(total)
}

/// Accesses `1..=n` in order starting from the left path over `[n]`.
pub fn sequential(algo: SequentialAlgo, n: usize) -> Result<SequentialReport> {
    let (total_cost, wings) = match algo {
        SequentialAlgo::Greedy => (greedy_sequential(n)?, None),
        SequentialAlgo::Tree(t) => {
            let w = check_wing_telescoping(t, n)?;
            (w.total_cost, Some(w))
        }
    };
    Ok(SequentialReport {
        algorithm: algo.to_string(),
        n,
        total_cost,
        wings,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreedyRow {
    pub access_index: usize,
    pub key: Key,
    pub cost: usize,
    pub slack_odd: f64,
    pub slack_even: f64,
    pub disjoint: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreedyReport {
    pub n: usize,
    pub total_cost: usize,
    pub min_slack: Option<f64>,
    pub all_disjoint: bool,
    pub rows: Vec<GreedyRow>,
}

/// Greedy over `workload` with uniform weights, auditing the geometric
/// access lemma on every access. The starting diagram is that of the
/// workload's default initial tree.
pub fn greedy_run(workload: &Workload) -> Result<GreedyReport> {
    let keys = workload.keys()?;
    let n = workload.n;
    let tree = InitialTree::default_for(workload.kind).build(n, workload.seed)?;
    let mut h = HeightDiagram::from_tree(&tree)?;
    let w = WeightMap::uniform(n);
    let mut rows = Vec::with_capacity(keys.len());
    for (i, &s) in keys.iter().enumerate() {
        let (next, cost) = h.greedy_access(s)?;
        let audit = check_geometric_access_lemma(&h, &next, s, &w)?;
        rows.push(GreedyRow {
            access_index: i,
            key: s,
            cost,
            slack_odd: audit.slack_odd,
            slack_even: audit.slack_even,
            disjoint: audit.odd_disjoint && audit.even_disjoint,
        });
        h = next;
    }
    Ok(GreedyReport {
        n,
        total_cost: rows.iter().map(|r| r.cost).sum(),
        min_slack: rows
            .iter()
            .map(|r| r.slack_odd.min(r.slack_even))
            .reduce(f64::min),
        all_disjoint: rows.iter().all(|r| r.disjoint),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_squares_recovers_a_line() {
        let (a, b) = least_squares(&[1.0, 2.0, 3.0], &[5.0, 7.0, 9.0]);
        assert!((a - 2.0).abs() < 1e-12 && (b - 3.0).abs() < 1e-12);
    }

    #[test]
    fn small_scaling_grid() {
        let r = pathbalance_scaling(6..=8, 3).unwrap();
        assert_eq!(r.rows.len(), 3);
        for row in &r.rows {
            assert_eq!(row.m, row.n);
            let k = row.total_cost as f64 / (2.0 * row.n as f64 * (row.n as f64).log2());
            assert!((row.k - k).abs() < 1e-12);
            assert!(row.min_slack.unwrap() >= -1e-6);
        }
        assert!(pathbalance_scaling(0..=3, 0).is_err());
    }

    #[test]
    fn sequential_costs() {
        let n = 256;
        let greedy = sequential(SequentialAlgo::Greedy, n).unwrap();
        assert!(greedy.total_cost <= 16 * n);
        let splay = sequential("splay".parse().unwrap(), n).unwrap();
        assert!(splay.total_cost <= 16 * n);
        let w = splay.wings.unwrap();
        assert!(w.min_slack >= -1e-6);
        let rtr = sequential(SequentialAlgo::Tree(Transformer::RotateToRoot), n).unwrap();
        assert!(rtr.total_cost >= n * n / 4);
    }

    #[test]
    fn greedy_run_audits_every_access() {
        let r = greedy_run(&Workload::new(WorkloadKind::Uniform, 64, 200, 2)).unwrap();
        assert_eq!(r.rows.len(), 200);
        assert!(r.all_disjoint);
        assert!(r.min_slack.unwrap() >= -1e-6);
        let seq = greedy_run(&Workload::new(WorkloadKind::Sequential, 64, 64, 0)).unwrap();
        assert_eq!(seq.total_cost, greedy_sequential(64).unwrap());
    }
}
