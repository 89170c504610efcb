use serde::{Deserialize, Serialize};

use crate::rational::{frac, int, Rational};

use super::LpError;

/// Per-subset cost of one S-CDC transmission round at a given split size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitCosts {
    /// Split size `r'`: coded groups have `r' + 1` members.
    pub split_size: usize,
    /// Number of full groups, `floor((r + 1) / (r' + 1))`.
    pub groups: usize,
    /// Leftover split size `(r + 1) - groups * (r' + 1) - 1`. `-1` means no
    /// leftover, `0` a single server served by unicast.
    pub leftover: i64,
    /// Intermediate values mapped per round and per `(r+1)`-subset.
    pub comp_per_iv: Rational,
    /// Bits sent per round and per `(r+1)`-subset, in units of `T`.
    pub comm_per_iv: Rational,
}

/// Group cost of a coded exchange among `size + 1` servers: `(size(size+1), (size+1)/size)`.
fn coded_group(size: i64) -> (Rational, Rational) {
    (int(size * (size + 1)), frac(size + 1, size))
}

/// Costs of split size `split` inside `(r+1)`-subsets.
pub fn split_costs(r: usize, split: usize) -> Result<SplitCosts, LpError> {
    if split == 0 || split > r {
        return Err(LpError::SplitOutOfRange { split, r });
    }
    let groups = (r + 1) / (split + 1);
    let leftover = (r + 1) as i64 - (groups * (split + 1)) as i64 - 1;
    let (group_comp, group_comm) = coded_group(split as i64);
    let (left_comp, left_comm) = match leftover {
        -1 => (int(0), int(0)),
        // A lone server receives whole values by unicast from one storer.
        0 => (int(1), int(1)),
        size => coded_group(size),
    };
    let g = int(groups as i64);
    Ok(SplitCosts {
        split_size: split,
        groups,
        leftover,
        comp_per_iv: g * group_comp + left_comp,
        comm_per_iv: g * group_comm + left_comm,
    })
}

/// Integer S-CDC plan: `count(l)` transmission rounds per `(r+1)`-subset use
/// split size `l`, for `l` in `[1:r]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    counts: Vec<u64>,
}

impl SplitPlan {
    /// `counts[l - 1]` rounds at split size `l`; the length fixes `r`.
    pub fn new(counts: Vec<u64>) -> Self {
        SplitPlan { counts }
    }

    /// All `rounds` on split size `split` for redundancy `r`.
    pub fn single(r: usize, split: usize, rounds: u64) -> Self {
        let mut counts = vec![0; r];
        counts[split - 1] = rounds;
        SplitPlan { counts }
    }

    /// Builds a plan from `(split, count)` pairs; repeated splits accumulate.
    pub fn from_pairs(r: usize, pairs: impl IntoIterator<Item = (usize, u64)>) -> Result<Self, LpError> {
        let mut counts = vec![0; r];
        for (split, count) in pairs {
            if split == 0 || split > r {
                return Err(LpError::SplitOutOfRange { split, r });
            }
            counts[split - 1] += count;
        }
        Ok(SplitPlan { counts })
    }

    pub fn r(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, split: usize) -> u64 {
        self.counts[split - 1]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `(split, count)` for every split size with a nonzero count, ascending.
    pub fn entries(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (i + 1, c))
    }

    /// Split size used by round `round` (0-based) when rounds are handed out
    /// to split sizes in ascending order.
    pub fn split_for_round(&self, round: u64) -> Option<usize> {
        let mut end = 0;
        for (split, count) in self.entries() {
            end += count;
            if round < end {
                return Some(split);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_formulas_at_r5() {
        let expect = [
            (5, 1, -1, int(30), frac(6, 5)),
            (4, 1, 0, int(21), frac(9, 4)),
            (3, 1, 1, int(14), frac(10, 3)),
            (2, 2, -1, int(12), int(3)),
            (1, 3, -1, int(6), int(6)),
        ];
        for (split, groups, leftover, comp, comm) in expect {
            let c = split_costs(5, split).unwrap();
            assert_eq!((c.groups, c.leftover, c.comp_per_iv, c.comm_per_iv), (groups, leftover, comp, comm), "r'={split}");
        }
    }

    #[test]
    fn full_split_is_plain_cdc() {
        for r in 1..=12usize {
            let c = split_costs(r, r).unwrap();
            assert_eq!(c.comp_per_iv, int((r * (r + 1)) as i64));
            assert_eq!(c.comm_per_iv, frac((r + 1) as i64, r as i64));
        }
    }

    #[test]
    fn unicast_split_costs_one_per_member() {
        for r in 1..=12usize {
            let c = split_costs(r, 1).unwrap();
            assert_eq!(c.comp_per_iv, int(r as i64 + 1));
            assert_eq!(c.comm_per_iv, int(r as i64 + 1));
        }
    }

    #[test]
    fn cost_invariants() {
        for r in 1..=12usize {
            for split in 1..=r {
                let c = split_costs(r, split).unwrap();
                assert!(c.comp_per_iv >= int(split as i64));
                assert!(c.comm_per_iv >= frac(r as i64 + 1, r as i64));
                assert!((-1..split as i64).contains(&c.leftover));
            }
        }
    }

    #[test]
    fn out_of_range() {
        assert!(split_costs(5, 0).is_err());
        assert!(split_costs(5, 6).is_err());
    }

    #[test]
    fn rounds_go_to_ascending_splits() {
        let plan = SplitPlan::from_pairs(5, [(5, 2), (2, 3)]).unwrap();
        assert_eq!(plan.total(), 5);
        let splits: Vec<_> = (0..6).map(|m| plan.split_for_round(m)).collect();
        assert_eq!(splits, [Some(2), Some(2), Some(2), Some(5), Some(5), None]);
        assert!(SplitPlan::from_pairs(2, [(3, 1)]).is_err());
    }
}
