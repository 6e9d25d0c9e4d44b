//! Experiment plumbing: instance files, ratio reports and property suites.

pub mod format;
pub mod lemmas;
pub mod report;

use thiserror::Error;

use crate::instances::InstanceError;
use crate::online::AlgorithmError;
use crate::opt::OptError;

pub use format::{parse_instance, serialize_instance, FormatError, InstanceFile};
pub use lemmas::{run_suite, Counterexample, Suite, SuiteReport};
pub use report::{random_instance, ratio_batch, ratio_report, BatchSpec, BatchOutcome, RatioReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Algorithm(#[from] AlgorithmError),
    #[error(transparent)]
    Opt(#[from] OptError),
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
}

/// Seed of trial `trial` in a run seeded with `seed`. Trials get unrelated
/// streams so that results do not depend on how trials are scheduled.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
