//! Workloads, run orchestration, experiments, counterexample families and
//! report emission.

pub mod counterexample;
pub mod emit;
pub mod experiments;
pub mod run;
pub mod workload;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use run::{run, InitialTree, RunConfig, RunReport, WeightScheme};
pub use workload::{Workload, WorkloadKind};

/// Independent ChaCha stream `stream` under `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
