//! Potentials, set decompositions and the per-access audits.

pub mod adversarial;
pub mod audits;
pub mod decompose;
pub mod depth;
pub mod potential;
pub mod record;
pub mod weights;
pub mod wings;

pub use audits::{audit_access, AuditSlacks, TOLERANCE};
pub use decompose::{monotone_partition, side_alternations, zigzag_sets, Decomposition};
pub use potential::{
    partial_potential, sol_potential, AccessOutcome, AccessWeights, PotentialLedger,
};
pub use record::{AccessRecord, AuditSelection};
pub use weights::WeightMap;
