//! Cluster parameters and their validation.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{binomial, lcm_upto};

/// The tuple `(K, Q, N, r, T, eta1, eta2)` describing a cluster.
///
/// Servers, files and functions are numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClusterConfig {
    /// Number of servers `K`.
    pub k: usize,
    /// Number of output functions `Q`.
    pub q: usize,
    /// Number of input files `N`.
    pub n: usize,
    /// Load redundancy: each file is stored on exactly `r` servers.
    pub r: usize,
    /// Size of every intermediate value in bits.
    pub t: usize,
    /// Files per `r`-subset batch.
    pub eta1: usize,
    /// Output functions per server.
    pub eta2: usize,
}

/// One broken invariant of a [`ClusterConfig`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotPositive { field: &'static str },
    RedundancyOutOfRange { r: usize, k: usize },
    FileCount { n: usize, subsets: u64, eta1: usize },
    FunctionCount { q: usize, k: usize, eta2: usize },
    BitWidth { t: usize, lcm: u64 },
}

impl Violation {
    fn is_range(&self) -> bool {
        matches!(self, Violation::NotPositive { .. } | Violation::RedundancyOutOfRange { .. })
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotPositive { field } => write!(f, "{field} must be positive"),
            Violation::RedundancyOutOfRange { r, k } => write!(f, "r = {r} is outside [1:{k}]"),
            Violation::FileCount { n, subsets, eta1 } => {
                write!(f, "N = {n} is not C(K,r)*eta1 = {subsets}*{eta1}")
            }
            Violation::FunctionCount { q, k, eta2 } => write!(f, "Q = {q} is not K*eta2 = {k}*{eta2}"),
            Violation::BitWidth { t, lcm } => {
                write!(f, "T = {t} is not divisible by lcm(1..r) = {lcm}")
            }
        }
    }
}

fn join(violations: &[Violation]) -> String {
    violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Every invariant a config breaks. `Range` takes precedence when both kinds occur.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("range error: {}", join(.violations))]
    Range { violations: Vec<Violation> },
    #[error("divisibility error: {}", join(.violations))]
    Divisibility { violations: Vec<Violation> },
}

impl ConfigError {
    pub fn violations(&self) -> &[Violation] {
        match self {
            ConfigError::Range { violations } | ConfigError::Divisibility { violations } => violations,
        }
    }
}

impl ClusterConfig {
    /// Builds a config from `(K, Q, N, r, T)`, deriving `eta1 = N / C(K, r)`
    /// and `eta2 = Q / K` by floor division. Use [`ClusterConfig::validate`]
    /// to learn whether the divisions were exact.
    pub fn from_shape(k: usize, q: usize, n: usize, r: usize, t: usize) -> Self {
        let subsets = if r <= k { binomial(k as u64, r as u64) } else { 0 };
        let eta1 = (n as u64).checked_div(subsets).unwrap_or(0) as usize;
        let eta2 = q.checked_div(k).unwrap_or(0);
        ClusterConfig { k, q, n, r, t, eta1, eta2 }
    }

    /// Like [`ClusterConfig::from_shape`] with the smallest admissible `T`.
    pub fn from_shape_min_bits(k: usize, q: usize, n: usize, r: usize) -> Self {
        Self::from_shape(k, q, n, r, lcm_upto(r as u64) as usize)
    }

    pub fn validate(self) -> Result<ValidatedConfig, ConfigError> {
        let mut violations = Vec::new();
        for (field, value) in [
            ("K", self.k),
            ("Q", self.q),
            ("N", self.n),
            ("T", self.t),
            ("eta1", self.eta1),
            ("eta2", self.eta2),
        ] {
            if value == 0 {
                violations.push(Violation::NotPositive { field });
            }
        }
        let r_ok = (1..=self.k).contains(&self.r);
        if !r_ok {
            violations.push(Violation::RedundancyOutOfRange { r: self.r, k: self.k });
        }
        if r_ok {
            let subsets = binomial(self.k as u64, self.r as u64);
            if subsets.checked_mul(self.eta1 as u64) != Some(self.n as u64) {
                violations.push(Violation::FileCount { n: self.n, subsets, eta1: self.eta1 });
            }
            let lcm = lcm_upto(self.r as u64);
            if !(self.t as u64).is_multiple_of(lcm) {
                violations.push(Violation::BitWidth { t: self.t, lcm });
            }
        }
        if self.k.checked_mul(self.eta2) != Some(self.q) {
            violations.push(Violation::FunctionCount { q: self.q, k: self.k, eta2: self.eta2 });
        }

        if violations.is_empty() {
            Ok(ValidatedConfig(self))
        } else if violations.iter().any(Violation::is_range) {
            Err(ConfigError::Range { violations })
        } else {
            Err(ConfigError::Divisibility { violations })
        }
    }
}

/// A [`ClusterConfig`] whose invariants have been checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ValidatedConfig(ClusterConfig);

impl Deref for ValidatedConfig {
    type Target = ClusterConfig;

    fn deref(&self) -> &ClusterConfig {
        &self.0
    }
}

impl ValidatedConfig {
    pub fn config(&self) -> ClusterConfig {
        self.0
    }

    /// `N * Q`, the number of intermediate values.
    pub fn nq(&self) -> u64 {
        self.n as u64 * self.q as u64
    }

    /// `N * Q * T`, the normaliser of the communication load.
    pub fn total_bits(&self) -> u64 {
        self.nq() * self.t as u64
    }

    /// `r * N * Q / K`: intermediate values each server maps for its own functions, summed.
    pub fn local_computations(&self) -> u64 {
        self.r as u64 * self.n as u64 * self.eta2 as u64
    }

    /// Number of `(r+1)`-subsets of servers, `C(K, r+1)`.
    pub fn shuffle_groups(&self) -> u64 {
        binomial(self.k as u64, self.r as u64 + 1)
    }
}

impl fmt::Display for ClusterConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "K={} Q={} N={} r={} T={} eta1={} eta2={}",
            self.k, self.q, self.n, self.r, self.t, self.eta1, self.eta2
        )
    }
}
