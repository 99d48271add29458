use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::analysis::potential::PotentialLedger;
use crate::analysis::record::{AccessRecord, AuditSelection};
use crate::analysis::weights::WeightMap;
use crate::analysis::TOLERANCE;
use crate::bst::{Key, TreeArena};
use crate::error::{Error, Result};
use crate::harness::rng_for;
use crate::harness::workload::{Workload, WorkloadKind};
use crate::transformers::Transformer;

const TREE_STREAM: u64 = 2;
const WEIGHT_STREAM: u64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightScheme {
    Uniform,
    /// Log-uniform in the default random weight range.
    Random,
}

impl FromStr for WeightScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(WeightScheme::Uniform),
            "random" => Ok(WeightScheme::Random),
            other => Err(Error::InvalidWorkload(format!(
                "unknown weight scheme `{other}`"
            ))),
        }
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightScheme::Uniform => "uniform",
            WeightScheme::Random => "random",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitialTree {
    LeftPath,
    Balanced,
    /// BST from a uniformly random insertion order.
    RandomInsertion,
}

impl InitialTree {
    /// Left path for sequential workloads, random insertion order otherwise.
    pub fn default_for(kind: WorkloadKind) -> Self {
        match kind {
            WorkloadKind::Sequential => InitialTree::LeftPath,
            _ => InitialTree::RandomInsertion,
        }
    }

    pub fn build(self, n: usize, seed: u64) -> Result<TreeArena> {
        Ok(match self {
            InitialTree::LeftPath => TreeArena::left_path(n),
            InitialTree::Balanced => TreeArena::balanced(n),
            InitialTree::RandomInsertion => {
                let mut order: Vec<Key> = (1..=n as Key).collect();
                order.shuffle(&mut rng_for(seed, TREE_STREAM));
                TreeArena::from_insertion_order(&order)?
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub algorithm: Transformer,
    pub workload: Workload,
    pub weights: WeightScheme,
    pub audits: AuditSelection,
    pub initial: InitialTree,
}

impl RunConfig {
    pub fn new(algorithm: Transformer, workload: Workload) -> Self {
        RunConfig {
            algorithm,
            workload,
            weights: WeightScheme::Uniform,
            audits: AuditSelection::NONE,
            initial: InitialTree::default_for(workload.kind),
        }
    }

    pub fn weights(mut self, w: WeightScheme) -> Self {
        self.weights = w;
        self
    }

    pub fn audits(mut self, a: AuditSelection) -> Self {
        self.audits = a;
        self
    }

    pub fn initial(mut self, t: InitialTree) -> Self {
        self.initial = t;
        self
    }
}

/// An access whose audit slack fell below the tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditFailure {
    pub audit: String,
    pub slack: f64,
    pub record: AccessRecord,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub accesses: usize,
    pub total_cost: usize,
    pub min_slack_lemma1: Option<f64>,
    pub min_slack_lemma2: Option<f64>,
    pub min_slack_zigzag: Option<f64>,
    pub min_slack_theorem: Option<f64>,
    pub min_lost_ratio: Option<f64>,
    pub max_gained: Option<usize>,
    /// Total cost divided by `(n + m)·log₂ n`.
    pub k_statistic: Option<f64>,
}

fn fold_min(acc: Option<f64>, x: Option<f64>) -> Option<f64> {
    match (acc, x) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

impl Aggregates {
    pub fn from_rows(rows: &[AccessRecord], n: usize) -> Self {
        let mut a = Aggregates {
            accesses: rows.len(),
            ..Default::default()
        };
        for r in rows {
            a.total_cost += r.cost;
            a.min_slack_lemma1 = fold_min(a.min_slack_lemma1, r.slack_lemma1);
            a.min_slack_lemma2 = fold_min(a.min_slack_lemma2, r.slack_lemma2);
            a.min_slack_zigzag = fold_min(a.min_slack_zigzag, r.slack_zigzag);
            a.min_slack_theorem = fold_min(a.min_slack_theorem, r.slack_theorem);
            a.min_lost_ratio = fold_min(a.min_lost_ratio, r.lost_min_ratio);
            a.max_gained = a.max_gained.max(r.gained_max);
        }
        if !rows.is_empty() && n >= 2 {
            a.k_statistic =
                Some(a.total_cost as f64 / ((n + rows.len()) as f64 * (n as f64).log2()));
        }
        a
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub rows: Vec<AccessRecord>,
    pub aggregates: Aggregates,
    pub failures: Vec<AuditFailure>,
}

/// Executes the workload, auditing each access as selected. Audit failures
/// are collected in the report rather than aborting the run.
pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    let keys = cfg.workload.keys()?;
    let n = cfg.workload.n;
    let seed = cfg.workload.seed;
    let mut tree = cfg.initial.build(n, seed)?;
    let weights = match cfg.weights {
        WeightScheme::Uniform => WeightMap::uniform(n),
        WeightScheme::Random => WeightMap::random(n, &mut rng_for(seed, WEIGHT_STREAM)),
    };
    let mut ledger = PotentialLedger::new(&tree, weights)?;
    let mut rows = Vec::with_capacity(keys.len());
    let mut failures = Vec::new();
    for (i, &s) in keys.iter().enumerate() {
        let out = ledger.access(&mut tree, cfg.algorithm, s)?;
        let (rec, slacks) = AccessRecord::build(i, cfg.algorithm, &out, cfg.audits)?;
        if let Some(sl) = slacks {
            for (audit, slack) in sl.failures() {
                failures.push(AuditFailure {
                    audit: audit.to_string(),
                    slack,
                    record: rec.clone(),
                });
            }
        }
        rows.push(rec);
    }
    let aggregates = Aggregates::from_rows(&rows, n);
    Ok(RunReport {
        config: cfg.clone(),
        rows,
        aggregates,
        failures,
    })
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Minimum selected slack, if any audit ran.
    pub fn min_slack(&self) -> Option<f64> {
        let a = &self.aggregates;
        [
            a.min_slack_lemma1,
            a.min_slack_lemma2,
            a.min_slack_zigzag,
            a.min_slack_theorem,
        ]
        .into_iter()
        .fold(None, fold_min)
    }

    pub fn within_tolerance(&self) -> bool {
        self.passed() && self.min_slack().is_none_or(|s| s >= -TOLERANCE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(t: Transformer, kind: WorkloadKind, n: usize, m: usize) -> RunConfig {
        RunConfig::new(t, Workload::new(kind, n, m, 11))
    }

    #[test]
    fn empty_run_gives_empty_report() {
        for t in Transformer::ALL {
            let r = run(&cfg(t, WorkloadKind::Uniform, 10, 0)).unwrap();
            assert!(r.rows.is_empty());
            assert_eq!(r.aggregates.total_cost, 0);
            assert_eq!(r.aggregates.k_statistic, None);
        }
    }

    #[test]
    fn sequential_contrast_at_1024() {
        let n = 1024;
        let splay = run(&cfg(Transformer::Splay, WorkloadKind::Sequential, n, n)).unwrap();
        assert!(
            splay.aggregates.total_cost <= 16 * n,
            "{}",
            splay.aggregates.total_cost
        );
        let rtr = run(&cfg(
            Transformer::RotateToRoot,
            WorkloadKind::Sequential,
            n,
            n,
        ))
        .unwrap();
        assert!(
            rtr.aggregates.total_cost >= n * n / 4,
            "{}",
            rtr.aggregates.total_cost
        );
    }

    #[test]
    fn audited_run_is_deterministic_and_clean() {
        let c = cfg(Transformer::Splay, WorkloadKind::Zipf(1.0), 63, 300)
            .weights(WeightScheme::Random)
            .audits(AuditSelection::ALL);
        let a = run(&c).unwrap();
        assert_eq!(a, run(&c).unwrap());
        assert_eq!(a.rows.len(), 300);
        assert!(a.within_tolerance(), "{:?}", a.failures.first());
        assert_eq!(a.aggregates, Aggregates::from_rows(&a.rows, 63));
    }

    #[test]
    fn seeds_change_the_run() {
        let a = run(&cfg(Transformer::Splay, WorkloadKind::Uniform, 63, 50)).unwrap();
        let mut c = cfg(Transformer::Splay, WorkloadKind::Uniform, 63, 50);
        c.workload.seed = 12;
        assert_ne!(a.rows, run(&c).unwrap().rows);
    }
}
