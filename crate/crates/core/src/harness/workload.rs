use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bst::Key;
use crate::error::{Error, Result};
use crate::harness::rng_for;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum WorkloadKind {
    /// `1, 2, …, n`, wrapping around.
    Sequential,
    Uniform,
    /// Key `r` drawn with probability proportional to `r^-α`.
    Zipf(f64),
    /// One random permutation of `[n]`, repeated.
    PermutationRepeat,
}

impl WorkloadKind {
    /// Parses a CLI name; `alpha` is only used by `zipf`.
    pub fn parse(name: &str, alpha: f64) -> Result<Self> {
        match name {
            "sequential" => Ok(WorkloadKind::Sequential),
            "uniform" | "uniform-random" => Ok(WorkloadKind::Uniform),
            "zipf" if alpha > 0.0 && alpha.is_finite() => Ok(WorkloadKind::Zipf(alpha)),
            "zipf" => Err(Error::InvalidWorkload(format!(
                "zipf exponent {alpha} must be positive"
            ))),
            "permutation-repeat" => Ok(WorkloadKind::PermutationRepeat),
            other => Err(Error::InvalidWorkload(format!(
                "unknown workload `{other}`"
            ))),
        }
    }
}

impl fmt::Display for WorkloadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WorkloadKind::Sequential => write!(f, "sequential"),
            WorkloadKind::Uniform => write!(f, "uniform"),
            WorkloadKind::Zipf(a) => write!(f, "zipf({a})"),
            WorkloadKind::PermutationRepeat => write!(f, "permutation-repeat"),
        }
    }
}

impl FromStr for WorkloadKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        WorkloadKind::parse(s, 1.0)
    }
}

/// Deterministic access sequence over `[n]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Workload {
    pub kind: WorkloadKind,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
}

const WORKLOAD_STREAM: u64 = 1;

impl Workload {
    pub fn new(kind: WorkloadKind, n: usize, m: usize, seed: u64) -> Self {
        Workload { kind, n, m, seed }
    }

    pub fn keys(&self) -> Result<Vec<Key>> {
        if self.n == 0 && self.m > 0 {
            return Err(Error::InvalidWorkload("no keys to access".into()));
        }
        let n = self.n;
        let mut rng: ChaCha8Rng = rng_for(self.seed, WORKLOAD_STREAM);
        Ok(match self.kind {
            WorkloadKind::Sequential => (0..self.m).map(|i| (i % n) as Key + 1).collect(),
            WorkloadKind::Uniform => (0..self.m).map(|_| rng.gen_range(1..=n as Key)).collect(),
            WorkloadKind::Zipf(alpha) => {
                let mut cdf: Vec<f64> = (1..=n).map(|r| (r as f64).powf(-alpha)).collect();
                let mut acc = 0.0;
                for c in cdf.iter_mut() {
                    acc += *c;
                    *c = acc;
                }
                (0..self.m)
                    .map(|_| {
                        let u = rng.gen::<f64>() * acc;
                        (cdf.partition_point(|&c| c < u).min(n - 1) + 1) as Key
                    })
                    .collect()
            }
            WorkloadKind::PermutationRepeat => {
                let mut perm: Vec<Key> = (1..=n as Key).collect();
                perm.shuffle(&mut rng);
                (0..self.m).map(|i| perm[i % n]).collect()
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_in_range() {
        for kind in [
            WorkloadKind::Sequential,
            WorkloadKind::Uniform,
            WorkloadKind::Zipf(1.0),
            WorkloadKind::PermutationRepeat,
        ] {
            let w = Workload::new(kind, 50, 500, 9);
            let a = w.keys().unwrap();
            assert_eq!(a, w.keys().unwrap());
            assert_eq!(a.len(), 500);
            assert!(a.iter().all(|&k| (1..=50).contains(&k)));
        }
    }

    #[test]
    fn sequential_wraps() {
        let w = Workload::new(WorkloadKind::Sequential, 3, 7, 0);
        assert_eq!(w.keys().unwrap(), vec![1, 2, 3, 1, 2, 3, 1]);
    }

    #[test]
    fn zipf_favours_small_ranks() {
        let a = Workload::new(WorkloadKind::Zipf(1.0), 100, 20_000, 1)
            .keys()
            .unwrap();
        let ones = a.iter().filter(|&&k| k == 1).count();
        let hundreds = a.iter().filter(|&&k| k == 100).count();
        // P(1) = 1/H_100 ≈ 0.193, P(100) ≈ 0.0019.
        assert!((3000..4800).contains(&ones), "{ones}");
        assert!(hundreds < 100);
    }

    #[test]
    fn permutation_repeat_visits_everything_once_per_round() {
        let mut a = Workload::new(WorkloadKind::PermutationRepeat, 20, 20, 4)
            .keys()
            .unwrap();
        a.sort_unstable();
        assert_eq!(a, (1..=20).collect::<Vec<_>>());
    }

    #[test]
    fn invalid_workloads() {
        assert!(WorkloadKind::parse("zipf", 0.0).is_err());
        assert!(WorkloadKind::parse("working-set", 1.0).is_err());
        assert!(Workload::new(WorkloadKind::Uniform, 0, 3, 0)
            .keys()
            .is_err());
        assert!(Workload::new(WorkloadKind::Uniform, 0, 0, 0)
            .keys()
            .unwrap()
            .is_empty());
    }
}
