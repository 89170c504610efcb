use std::collections::BTreeSet;

use crate::combinatorics::subsets_of_size;
use crate::lp::SplitPlan;
use crate::placement::Placement;

use super::{ivs_for, IvId, SimError};

/// The set `C_k` of intermediate values each server maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputationPlan {
    per_server: Vec<BTreeSet<IvId>>,
}

impl ComputationPlan {
    pub fn new(per_server: Vec<BTreeSet<IvId>>) -> Self {
        ComputationPlan { per_server }
    }

    /// Only `C_{M_k, W_k}`: each server maps its own functions on its own files.
    pub fn local_only(placement: &Placement) -> Self {
        let k = placement.config().k;
        ComputationPlan {
            per_server: (1..=k).map(|s| ivs_for(placement.functions_of(s), placement.files_of(s).iter().copied())).collect(),
        }
    }

    /// `C_k` for a 1-based server index.
    pub fn server(&self, server: usize) -> &BTreeSet<IvId> {
        &self.per_server[server - 1]
    }

    pub fn servers(&self) -> usize {
        self.per_server.len()
    }

    /// `sum_k |C_k|`.
    pub fn total(&self) -> u64 {
        self.per_server.iter().map(|c| c.len() as u64).sum()
    }

    pub fn per_server_counts(&self) -> Vec<u64> {
        self.per_server.iter().map(|c| c.len() as u64).collect()
    }

    /// Checks that every planned value's file is stored on its server.
    pub fn check_local(&self, placement: &Placement) -> Result<(), SimError> {
        for (i, set) in self.per_server.iter().enumerate() {
            if let Some(iv) = set.iter().find(|iv| !placement.stores(i + 1, iv.n)) {
                return Err(SimError::NotStored { server: i + 1, iv: *iv });
            }
        }
        Ok(())
    }

    fn insert(&mut self, server: usize, iv: IvId) {
        self.per_server[server - 1].insert(iv);
    }
}

/// `V^i_{S \ {i}}`: values for `W_i` whose files sit on every server of `S \ {i}`.
///
/// When `|S| = r + 1` this is the batch of `S \ {i}` crossed with `W_i`, i.e.
/// `eta1 * eta2` values stored nowhere else.
pub fn exchange_set(placement: &Placement, subset: &[usize], i: usize) -> BTreeSet<IvId> {
    debug_assert!(subset.len() >= 2 && subset.contains(&i));
    let others: Vec<usize> = subset.iter().copied().filter(|&s| s != i).collect();
    let functions = placement.functions_of(i);
    if let Some(batch) = placement.batch_for(&others) {
        return ivs_for(functions, batch.files.iter().copied());
    }
    let mut files = placement.files_of(others[0]).clone();
    for &j in &others[1..] {
        files.retain(|n| placement.files_of(j).contains(n));
    }
    ivs_for(functions, files)
}

/// Exchange sets of every member of `subset`, sorted, in member order.
pub(crate) fn exchange_lists(placement: &Placement, subset: &[usize]) -> Vec<Vec<IvId>> {
    subset.iter().map(|&i| exchange_set(placement, subset, i).into_iter().collect()).collect()
}

/// Fewest computations CDC needs: `C_i = C_{M_i,W_i}` plus, for every
/// `(r+1)`-subset `S` containing `i`, the exchange sets of the other members.
pub fn minimum_computation_plan(placement: &Placement) -> ComputationPlan {
    let cfg = placement.config();
    let mut plan = ComputationPlan::local_only(placement);
    for subset in subsets_of_size(cfg.k, cfg.r + 1) {
        for &k in &subset {
            let needed = exchange_set(placement, &subset, k);
            for &i in subset.iter().filter(|&&i| i != k) {
                for &iv in &needed {
                    plan.insert(i, iv);
                }
            }
        }
    }
    plan
}

pub(crate) fn check_split_plan(placement: &Placement, split: &SplitPlan) -> Result<(), SimError> {
    let cfg = placement.config();
    if split.r() != cfg.r {
        return Err(SimError::PlanRedundancy { expected: cfg.r, found: split.r() });
    }
    let expected = (cfg.eta1 * cfg.eta2) as u64;
    if split.total() != expected {
        return Err(SimError::PlanSize { expected, found: split.total() });
    }
    Ok(())
}

/// Sender of the unicast that serves a lone leftover member: the lowest
/// server of the subset other than the receiver.
pub(crate) fn unicast_sender(subset: &[usize], receiver: usize) -> usize {
    subset.iter().copied().find(|&s| s != receiver).expect("subset has at least two members")
}

/// Computations S-CDC needs under an integer split plan.
///
/// Round `m` of subset `S` (the `m`-th value of every exchange set) uses the
/// split size [`SplitPlan::split_for_round`] picks. The subset is cut in
/// ascending order into groups of `split + 1`; a group of two or more runs a
/// CDC exchange, so each member maps its partners' values, and a lone member
/// is served by unicast from [`unicast_sender`].
pub fn scdc_computation_plan(placement: &Placement, split: &SplitPlan) -> Result<ComputationPlan, SimError> {
    check_split_plan(placement, split)?;
    let cfg = placement.config();
    let mut plan = ComputationPlan::local_only(placement);
    for subset in subsets_of_size(cfg.k, cfg.r + 1) {
        let lists = exchange_lists(placement, &subset);
        for m in 0..split.total() {
            let size = split.split_for_round(m).expect("round within plan");
            for group in subset.chunks(size + 1) {
                if let [lone] = group {
                    let pos = subset.iter().position(|s| s == lone).unwrap();
                    plan.insert(unicast_sender(&subset, *lone), lists[pos][m as usize]);
                    continue;
                }
                for &k in group {
                    let pos = subset.iter().position(|&s| s == k).unwrap();
                    let iv = lists[pos][m as usize];
                    for &i in group.iter().filter(|&&i| i != k) {
                        plan.insert(i, iv);
                    }
                }
            }
        }
    }
    Ok(plan)
}
