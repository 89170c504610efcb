use crate::config::ValidatedConfig;
use crate::rational::{from_count, Rational};

use super::{ComputationPlan, Transmission};

/// Loads a run actually incurred.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadReport {
    /// Shuffle bits over `Q N T`.
    pub communication_load: Rational,
    /// `sum_k |C_k|`. Simulated plans map whole values, so this is an integer.
    pub computation_count: u64,
    pub transmissions: usize,
    pub bits_sent: u64,
    /// Bits sent by each server, in server order.
    pub bits_per_server: Vec<u64>,
    /// `|C_k|` in server order.
    pub computations_per_server: Vec<u64>,
}

pub fn measure_loads(cfg: &ValidatedConfig, log: &[Transmission], plan: &ComputationPlan) -> LoadReport {
    let mut bits_per_server = vec![0u64; cfg.k];
    for tx in log {
        bits_per_server[tx.sender - 1] += tx.bits() as u64;
    }
    let bits_sent = bits_per_server.iter().sum();
    LoadReport {
        communication_load: from_count(bits_sent) / from_count(cfg.total_bits()),
        computation_count: plan.total(),
        transmissions: log.len(),
        bits_sent,
        bits_per_server,
        computations_per_server: plan.per_server_counts(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ClusterConfig;
    use crate::placement::Placement;
    use crate::rational::{frac, int};
    use crate::simulator::{map_oracle, IvId, Part};

    #[test]
    fn local_only_at_full_redundancy() {
        let cfg = ClusterConfig::from_shape(10, 10, 2520, 10, 2520).validate().unwrap();
        let p = Placement::new(&cfg);
        let report = measure_loads(&cfg, &[], &ComputationPlan::local_only(&p));
        assert_eq!(report.communication_load, int(0));
        assert_eq!(report.computation_count, 25200);
    }

    #[test]
    fn one_whole_unicast() {
        let cfg = ClusterConfig::from_shape(4, 4, 12, 2, 8).validate().unwrap();
        let p = Placement::new(&cfg);
        let iv = IvId { q: 1, n: 7 };
        let tx = Transmission {
            sender: 2,
            audience: vec![1],
            subset: vec![1, 2, 3],
            split_size: 1,
            composition: vec![Part { iv, index: 0, count: 1 }],
            payload: map_oracle(0, iv, 8),
        };
        let report = measure_loads(&cfg, &[tx], &ComputationPlan::local_only(&p));
        assert_eq!(report.communication_load, frac(1, 48));
        assert_eq!(report.bits_per_server, vec![0, 8, 0, 0]);
    }
}
