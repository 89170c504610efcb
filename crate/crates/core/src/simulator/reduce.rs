use std::fmt;

use thiserror::Error;

use crate::placement::Placement;

use super::{map_oracle, IvId, Payload, ServerStore};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FailureKind {
    Missing,
    Corrupted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Failure {
    pub server: usize,
    pub iv: IvId,
    pub kind: FailureKind,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            FailureKind::Missing => "missing",
            FailureKind::Corrupted => "corrupted",
        };
        write!(f, "server {}: {} {}", self.server, self.iv, what)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("reduce verification failed for {} value(s): {}", .failures.len(), summary(.failures))]
pub struct VerificationFailure {
    pub failures: Vec<Failure>,
}

fn summary(failures: &[Failure]) -> String {
    let shown: Vec<String> = failures.iter().take(8).map(ToString::to_string).collect();
    let more = if failures.len() > 8 { format!(", ... ({} more)", failures.len() - 8) } else { String::new() };
    format!("{}{more}", shown.join(", "))
}

/// Values each server reduced with, by origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ServerReduce {
    pub server: usize,
    pub local: usize,
    pub decoded: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub per_server: Vec<ServerReduce>,
    /// Stand-in output per function: the XOR of its `N` intermediate values.
    pub outputs: Vec<(usize, Payload)>,
}

/// Checks that every server holds, for each of its functions, all `N`
/// values bit-identical to the oracle, then folds each function's values
/// into its stand-in output.
pub fn reduce_verify(
    stores: &[ServerStore],
    placement: &Placement,
    seed: u64,
) -> Result<VerificationReport, VerificationFailure> {
    let cfg = placement.config();
    let mut failures = Vec::new();
    let mut per_server = Vec::with_capacity(cfg.k);
    let mut outputs = Vec::with_capacity(cfg.q);
    for server in 1..=cfg.k {
        let store = &stores[server - 1];
        let mut tally = ServerReduce { server, local: 0, decoded: 0 };
        for &q in placement.functions_of(server) {
            let mut folded = Payload::repeat(false, cfg.t);
            for n in 1..=cfg.n {
                let iv = IvId { q, n };
                let value = match (store.computed.get(&iv), store.decoded.get(&iv)) {
                    (Some(v), _) => {
                        tally.local += 1;
                        v
                    }
                    (None, Some(v)) => {
                        tally.decoded += 1;
                        v
                    }
                    (None, None) => {
                        failures.push(Failure { server, iv, kind: FailureKind::Missing });
                        continue;
                    }
                };
                if *value != map_oracle(seed, iv, cfg.t) {
                    failures.push(Failure { server, iv, kind: FailureKind::Corrupted });
                }
                folded ^= value.as_bitslice();
            }
            outputs.push((q, folded));
        }
        per_server.push(tally);
    }
    if failures.is_empty() {
        outputs.sort_by_key(|(q, _)| *q);
        Ok(VerificationReport { per_server, outputs })
    } else {
        Err(VerificationFailure { failures })
    }
}
