use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::config::ValidatedConfig;
use crate::rational::{decimal, exact, from_count, int, Rational};

use super::{solve_small_lp, split_costs, Constraint, LpError, LpSolution, Sense, SmallLp, SplitPlan};

fn solve_for_budget(cfg: &ValidatedConfig, lp: SmallLp, budget: Rational) -> Result<LpSolution, LpError> {
    match solve_small_lp(&lp) {
        Ok(solution) => Ok(LpSolution { budget: Some(budget), ..solution }),
        Err(LpError::Infeasible) => Err(LpError::BudgetInfeasible { budget, minimum: cfg.nq() }),
        Err(e) => Err(e),
    }
}

/// Lower bound on the communication load of any locally decodable shuffle
/// within `budget` total computations:
///
/// ```text
/// min  sum_l z_l / (NQ)
/// s.t. sum_l l   z_l >= (K - r) NQ / K          (every server gets what it lacks)
///      sum_l l^2 z_l + r NQ / K <= budget       (shuffle plus local computations)
/// ```
///
/// over `l in [1:r]`, with `z_l` the number of `l`-type transmissions of
/// weight `T`. Fractional `z_l` models partial computation.
pub fn lower_bound(cfg: &ValidatedConfig, budget: Rational) -> Result<LpSolution, LpError> {
    let nq = from_count(cfg.nq());
    let splits: Vec<i64> = (1..=cfg.r as i64).collect();
    let lp = SmallLp {
        objective: splits.iter().map(|_| int(1) / nq).collect(),
        constraints: vec![
            Constraint::new(
                splits.iter().map(|&l| int(l)).collect(),
                Sense::Ge,
                from_count((cfg.k - cfg.r) as u64) * nq / int(cfg.k as i64),
            ),
            Constraint::new(
                splits.iter().map(|&l| int(l * l)).collect(),
                Sense::Le,
                budget - from_count(cfg.local_computations()),
            ),
        ],
    };
    solve_for_budget(cfg, lp, budget)
}

/// Optimal fractional S-CDC plan for `budget`:
///
/// ```text
/// min  C(K, r+1) sum_l z_l Comm(l) / (NQ)
/// s.t. sum_l z_l = eta1 eta2
///      C(K, r+1) sum_l z_l Comp(l) + r NQ / K <= budget
/// ```
pub fn scdc_optimize(cfg: &ValidatedConfig, budget: Rational) -> Result<LpSolution, LpError> {
    let groups = from_count(cfg.shuffle_groups());
    let nq = from_count(cfg.nq());
    let costs = (1..=cfg.r).map(|l| split_costs(cfg.r, l)).collect::<Result<Vec<_>, _>>()?;
    let lp = SmallLp {
        objective: costs.iter().map(|c| groups * c.comm_per_iv / nq).collect(),
        constraints: vec![
            Constraint::new(vec![int(1); cfg.r], Sense::Eq, from_count((cfg.eta1 * cfg.eta2) as u64)),
            Constraint::new(
                costs.iter().map(|c| groups * c.comp_per_iv).collect(),
                Sense::Le,
                budget - from_count(cfg.local_computations()),
            ),
        ],
    };
    solve_for_budget(cfg, lp, budget)
}

/// Communication load and total computation S-CDC incurs with an integer plan.
pub fn scdc_predicted(cfg: &ValidatedConfig, plan: &SplitPlan) -> Result<(Rational, u64), LpError> {
    if plan.r() != cfg.r {
        return Err(LpError::SplitOutOfRange { split: plan.r(), r: cfg.r });
    }
    let expected = (cfg.eta1 * cfg.eta2) as u64;
    if plan.total() != expected {
        return Err(LpError::PlanSize { expected, found: plan.total() });
    }
    let mut comm = Rational::zero();
    let mut comp = Rational::zero();
    for (split, count) in plan.entries() {
        let c = split_costs(cfg.r, split)?;
        comm += from_count(count) * c.comm_per_iv;
        comp += from_count(count) * c.comp_per_iv;
    }
    let groups = from_count(cfg.shuffle_groups());
    let computation = groups * comp + from_count(cfg.local_computations());
    debug_assert!(computation.is_integer());
    Ok((groups * comm / from_count(cfg.nq()), *computation.numer() as u64))
}

/// Integer plan derived from an S-CDC vertex by flooring the larger split size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundedPlan {
    pub plan: SplitPlan,
    /// Communication load of `plan`.
    pub objective: Rational,
    /// Total computations of `plan`, local ones included.
    pub computation: u64,
    pub budget: Option<Rational>,
    /// Whether `computation` still fits the budget after rounding.
    pub within_budget: bool,
}

/// With two nonzero weights `z_a, z_b` (`a < b`) sets `z_b <- floor(z_b)` and
/// `z_a <- eta1 eta2 - floor(z_b)`; integer vertices pass through. The
/// rounded plan's computation is re-checked against the solution's budget.
pub fn round_plan(solution: &LpSolution, cfg: &ValidatedConfig) -> Result<RoundedPlan, LpError> {
    let support: Vec<(usize, Rational)> = solution.nonzero().map(|(l, z)| (l, *z)).collect();
    let rounds = (cfg.eta1 * cfg.eta2) as u64;
    let floor = |z: &Rational| (*z.floor().numer()).max(0) as u64;
    let pairs = match support.as_slice() {
        [] => vec![],
        [(l, z)] => vec![(*l, floor(z))],
        [(low, _), (high, z_high)] => {
            let kept = floor(z_high).min(rounds);
            vec![(*low, rounds - kept), (*high, kept)]
        }
        more => return Err(LpError::UnexpectedSupport { count: more.len() }),
    };
    let plan = SplitPlan::from_pairs(cfg.r, pairs)?;
    let (objective, computation) = scdc_predicted(cfg, &plan)?;
    let within_budget = solution.budget.is_none_or(|b| from_count(computation) <= b);
    Ok(RoundedPlan { plan, objective, computation, budget: solution.budget, within_budget })
}

/// `{"weights": [{"ell", "z"}], "objective", "objective_decimal", "computation", "budget", "within_budget"}`
impl Serialize for RoundedPlan {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let weights: Vec<_> = (1..=self.plan.r()).map(|l| json!({"ell": l, "z": self.plan.count(l)})).collect();
        let mut s = serializer.serialize_struct("RoundedPlan", 6)?;
        s.serialize_field("weights", &weights)?;
        s.serialize_field("objective", &exact(&self.objective))?;
        s.serialize_field("objective_decimal", &decimal(&self.objective))?;
        s.serialize_field("computation", &self.computation)?;
        s.serialize_field("budget", &self.budget.as_ref().map(exact))?;
        s.serialize_field("within_budget", &self.within_budget)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ClusterConfig;
    use crate::rational::frac;

    fn cfg(k: usize, q: usize, n: usize, r: usize) -> ValidatedConfig {
        ClusterConfig::from_shape_min_bits(k, q, n, r).validate().unwrap()
    }

    fn flagship() -> ValidatedConfig {
        cfg(10, 10, 2520, 5)
    }

    #[test]
    fn lower_bound_small_cluster() {
        let c = cfg(4, 4, 12, 2);
        let at_cdc = lower_bound(&c, int(72)).unwrap();
        assert_eq!(at_cdc.objective, frac(1, 4));
        assert_eq!(at_cdc.weights, vec![int(0), int(12)]);
        let tight = lower_bound(&c, int(60)).unwrap();
        assert_eq!(tight.objective, frac(3, 8));
        assert_eq!(tight.weights, vec![int(12), int(6)]);
    }

    #[test]
    fn lower_bound_flagship_spots() {
        let c = flagship();
        assert_eq!(lower_bound(&c, int(75600)).unwrap().objective, frac(1, 10));
        assert_eq!(lower_bound(&c, int(40000)).unwrap().objective, frac(89, 378));
        let floor = lower_bound(&c, int(25200)).unwrap();
        assert_eq!(floor.objective, frac(1, 2));
        assert_eq!(floor.nonzero().map(|(l, _)| l).collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn budget_below_nq_is_infeasible() {
        let c = flagship();
        let err = lower_bound(&c, int(25199)).unwrap_err();
        assert_eq!(err, LpError::BudgetInfeasible { budget: int(25199), minimum: 25200 });
        assert!(matches!(scdc_optimize(&c, int(20000)), Err(LpError::BudgetInfeasible { .. })));
    }

    #[test]
    fn scdc_flagship_spots() {
        let c = flagship();
        let full = scdc_optimize(&c, int(75600)).unwrap();
        assert_eq!(full.weights, vec![int(0), int(0), int(0), int(0), int(10)]);
        assert_eq!(full.objective, frac(1, 10));
        let mid = scdc_optimize(&c, int(40000)).unwrap();
        assert_eq!(mid.weights, vec![int(0), frac(1780, 189), int(0), int(0), frac(110, 189)]);
        assert_eq!(mid.objective, frac(76, 315));
        let low = scdc_optimize(&c, int(25200)).unwrap();
        assert_eq!(low.weights, vec![int(10), int(0), int(0), int(0), int(0)]);
        assert_eq!(low.objective, frac(1, 2));
    }

    #[test]
    fn scdc_at_full_redundancy_needs_no_shuffle() {
        let c = cfg(4, 4, 2, 4);
        let s = scdc_optimize(&c, int(8)).unwrap();
        assert_eq!(s.objective, int(0));
        assert_eq!(s.weights, vec![int(0), int(0), int(0), int(2)]);
    }

    #[test]
    fn rounding_floors_the_larger_split() {
        let c = flagship();
        let mid = scdc_optimize(&c, int(40000)).unwrap();
        let rounded = round_plan(&mid, &c).unwrap();
        assert_eq!(rounded.plan, SplitPlan::single(5, 2, 10));
        assert_eq!(rounded.objective, frac(1, 4));
        assert_eq!(rounded.computation, 37800);
        assert!(rounded.within_budget);

        let full = scdc_optimize(&c, int(75600)).unwrap();
        let passed = round_plan(&full, &c).unwrap();
        assert_eq!(passed.plan, SplitPlan::single(5, 5, 10));
        assert_eq!(passed.objective, frac(1, 10));
        assert_eq!(passed.computation, 75600);
    }

    #[test]
    fn rounding_direct_rule() {
        let c = cfg(10, 10, 2520, 5);
        let sol = LpSolution {
            weights: vec![frac(18, 5), frac(32, 5), int(0), int(0), int(0)],
            objective: int(0),
            feasible: true,
            budget: None,
        };
        let rounded = round_plan(&sol, &c).unwrap();
        assert_eq!((rounded.plan.count(1), rounded.plan.count(2)), (4, 6));
        assert!(rounded.within_budget);
    }

    #[test]
    fn rounding_rejects_wide_support() {
        let c = flagship();
        let sol = LpSolution { weights: vec![int(3), int(3), int(4), int(0), int(0)], objective: int(0), feasible: true, budget: None };
        assert_eq!(round_plan(&sol, &c), Err(LpError::UnexpectedSupport { count: 3 }));
    }

    #[test]
    fn rounding_reports_budget_violation() {
        let c = flagship();
        // Only possible when the floor moves mass to a costlier split; forge one.
        let sol = LpSolution {
            weights: vec![int(0), int(0), int(0), frac(19, 2), frac(1, 2)],
            objective: int(0),
            feasible: true,
            budget: Some(int(50000)),
        };
        let rounded = round_plan(&sol, &c).unwrap();
        assert_eq!(rounded.plan, SplitPlan::single(5, 4, 10));
        assert_eq!(rounded.computation, 210 * 210 + 12600);
        assert!(!rounded.within_budget);
    }

    #[test]
    fn predicted_loads_for_integer_plans() {
        let c = flagship();
        assert_eq!(scdc_predicted(&c, &SplitPlan::single(5, 2, 10)).unwrap(), (frac(1, 4), 25200 + 12600));
        assert_eq!(scdc_predicted(&c, &SplitPlan::single(5, 1, 10)).unwrap(), (frac(1, 2), 12600 + 12600));
        assert!(matches!(
            scdc_predicted(&c, &SplitPlan::single(5, 1, 9)),
            Err(LpError::PlanSize { expected: 10, found: 9 })
        ));
    }

    #[test]
    fn json_shapes() {
        let c = flagship();
        let mid = scdc_optimize(&c, int(40000)).unwrap();
        let v = serde_json::to_value(&mid).unwrap();
        assert_eq!(v["budget"], "40000");
        assert_eq!(v["objective"], "76/315");
        assert_eq!(v["weights"][1], json!({"ell": 2, "z_num": 1780, "z_den": 189}));
        let r = serde_json::to_value(round_plan(&mid, &c).unwrap()).unwrap();
        assert_eq!(r["weights"][1], json!({"ell": 2, "z": 10}));
        assert_eq!(r["computation"], 37800);
    }
}
