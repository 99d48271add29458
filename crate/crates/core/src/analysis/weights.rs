use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bst::Key;
use crate::error::{Error, Result};

/// Positive weights over a sorted key set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightMap {
    keys: Vec<Key>,
    w: Vec<f64>,
    total: f64,
    contiguous: bool,
}

/// Range used for random weights; bounds the conditioning of the audits.
pub const RANDOM_WEIGHT_RANGE: (f64, f64) = (1e-3, 1e6);

impl WeightMap {
    pub fn new(mut pairs: Vec<(Key, f64)>) -> Result<Self> {
        pairs.sort_by_key(|p| p.0);
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateKey(w[0].0));
            }
        }
        if let Some(&(k, _)) = pairs.iter().find(|p| !(p.1 > 0.0 && p.1.is_finite())) {
            return Err(Error::NonPositiveWeight(k));
        }
        let contiguous = pairs
            .first()
            .zip(pairs.last())
            .is_some_and(|(a, b)| (b.0 - a.0) as usize + 1 == pairs.len());
        let (keys, w): (Vec<Key>, Vec<f64>) = pairs.into_iter().unzip();
        let total = w.iter().sum();
        Ok(WeightMap {
            keys,
            w,
            total,
            contiguous,
        })
    }

    pub fn from_fn(keys: impl IntoIterator<Item = Key>, f: impl Fn(Key) -> f64) -> Result<Self> {
        Self::new(keys.into_iter().map(|k| (k, f(k))).collect())
    }

    /// Weight 1 on every key of `1..=n`.
    pub fn uniform(n: usize) -> Self {
        Self::from_fn(1..=n as Key, |_| 1.0).expect("unit weights are valid")
    }

    /// Log-uniform weights on `lo..hi` over `1..=n`.
    pub fn random_in<R: Rng>(n: usize, lo: f64, hi: f64, rng: &mut R) -> Self {
        let (a, b) = (lo.ln(), hi.ln());
        let pairs = (1..=n as Key)
            .map(|k| (k, rng.gen_range(a..b).exp()))
            .collect();
        Self::new(pairs).expect("positive weights")
    }

    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        Self::random_in(n, RANDOM_WEIGHT_RANGE.0, RANDOM_WEIGHT_RANGE.1, rng)
    }

    fn position(&self, key: Key) -> Option<usize> {
        if self.contiguous {
            let i = key.checked_sub(*self.keys.first()?)?;
            (0..self.keys.len() as i64)
                .contains(&i)
                .then_some(i as usize)
        } else {
            self.keys.binary_search(&key).ok()
        }
    }

    /// Weight of `key`; panics if the key is unknown.
    pub fn get(&self, key: Key) -> f64 {
        self.try_get(key)
            .unwrap_or_else(|| panic!("no weight for key {key}"))
    }

    pub fn try_get(&self, key: Key) -> Option<f64> {
        self.position(key).map(|i| self.w[i])
    }

    /// W, the sum of all weights.
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn keys(&self) -> &[Key] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Weight of the keys in the closed range `lo..=hi`, summed directly.
    pub fn range(&self, lo: Key, hi: Key) -> f64 {
        let a = self.keys.partition_point(|&k| k < lo);
        let b = self.keys.partition_point(|&k| k <= hi);
        self.w[a..b.max(a)].iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_bad_weights() {
        assert_eq!(
            WeightMap::new(vec![(1, 1.0), (2, 0.0)]).unwrap_err(),
            Error::NonPositiveWeight(2)
        );
        assert!(WeightMap::new(vec![(1, f64::NAN)]).is_err());
        assert!(WeightMap::new(vec![(1, 1.0), (1, 2.0)]).is_err());
    }

    #[test]
    fn lookups() {
        let w = WeightMap::new(vec![(10, 2.0), (3, 1.0), (7, 4.0)]).unwrap();
        assert_eq!(w.get(7), 4.0);
        assert_eq!(w.try_get(8), None);
        assert_eq!(w.total(), 7.0);
        assert_eq!(w.range(4, 10), 6.0);
        let u = WeightMap::uniform(5);
        assert_eq!(u.try_get(0), None);
        assert_eq!(u.try_get(6), None);
        assert_eq!(u.range(2, 4), 3.0);
    }

    #[test]
    fn random_weights_stay_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let w = WeightMap::random(1000, &mut rng);
        let (lo, hi) = RANDOM_WEIGHT_RANGE;
        assert!(w.keys().iter().all(|&k| (lo..hi).contains(&w.get(k))));
    }
}
