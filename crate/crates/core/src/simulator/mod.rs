//! Bit-exact map, shuffle and reduce.
//!
//! A run is: build a [`ComputationPlan`], let every server map the values in
//! its plan with [`map_oracle`], encode the shuffle ([`cdc_shuffle`] or
//! [`scdc_shuffle`]), decode it at the receivers ([`deliver`]), check the
//! result with [`reduce_verify`], and account for it with [`measure_loads`].

mod loads;
mod oracle;
mod plan;
mod reduce;
mod shuffle;

use std::collections::BTreeSet;
use std::fmt;

use bitvec::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use loads::{measure_loads, LoadReport};
pub use oracle::map_oracle;
pub use plan::{exchange_set, minimum_computation_plan, scdc_computation_plan, ComputationPlan};
pub use reduce::{reduce_verify, Failure, FailureKind, VerificationFailure, VerificationReport};
pub use shuffle::{cdc_shuffle, deliver, encode_cdc, encode_scdc, scdc_shuffle, ServerStore, ShuffleOutcome, Transmission};

/// Bits of one intermediate value or one part of it.
pub type Payload = BitVec<u8, Lsb0>;

/// Identifies the intermediate value `v_{q,n}` (function `q`, file `n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IvId {
    pub q: usize,
    pub n: usize,
}

impl fmt::Display for IvId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v[{},{}]", self.q, self.n)
    }
}

/// One equal-sized piece of an intermediate value inside a transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub iv: IvId,
    /// 0-based part index.
    pub index: usize,
    /// Number of equal parts the value is split into.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("server {server} lacks side information {missing:?} needed by a transmission from server {sender}")]
    MissingSideInformation { server: usize, sender: usize, missing: Vec<IvId> },
    #[error("plan asks server {server} to map {iv}, but its file is not stored there")]
    NotStored { server: usize, iv: IvId },
    #[error("split plan covers {found} rounds per subset, expected eta1*eta2 = {expected}")]
    PlanSize { expected: u64, found: u64 },
    #[error("split plan is for r = {found}, cluster has r = {expected}")]
    PlanRedundancy { expected: usize, found: usize },
    #[error("malformed transmission from server {sender}: {reason}")]
    Malformed { sender: usize, reason: String },
}

pub(crate) fn ivs_for(functions: &BTreeSet<usize>, files: impl IntoIterator<Item = usize> + Clone) -> BTreeSet<IvId> {
    functions
        .iter()
        .flat_map(|&q| files.clone().into_iter().map(move |n| IvId { q, n }))
        .collect()
}
