use cdc_core::analysis::{cdc_fit, cdc_min_computation, figure3_series, optimal_comm_load};
use cdc_core::lp::{lower_bound, round_plan, scdc_optimize, solve_small_lp, Constraint, LpError, Sense, SmallLp};
use cdc_core::rational::{frac, from_count, int};
use cdc_core::{binomial, ClusterConfig, Rational, ValidatedConfig};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg(k: usize, q: usize, n: usize, r: usize) -> ValidatedConfig {
    ClusterConfig::from_shape_min_bits(k, q, n, r).validate().unwrap()
}

fn flagship() -> ValidatedConfig {
    cfg(10, 10, 2520, 5)
}

/// Leibniz determinant.
fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut total = int(0);
    for perm in (0..n).permutations(n) {
        let inversions = (0..n).tuple_combinations().filter(|&(i, j)| perm[i] > perm[j]).count();
        let term: Rational = (0..n).map(|i| m[i][perm[i]]).product();
        if inversions % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

struct Row {
    coeffs: Vec<Rational>,
    sense: Sense,
    rhs: Rational,
}

fn holds(row: &Row, x: &[Rational]) -> bool {
    let lhs: Rational = row.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
    match row.sense {
        Sense::Le => lhs <= row.rhs,
        Sense::Ge => lhs >= row.rhs,
        Sense::Eq => lhs == row.rhs,
    }
}

/// Minimum over all basic solutions found by Cramer's rule; assumes the
/// program is bounded below.
fn oracle_min(objective: &[Rational], rows: &[Row]) -> Option<Rational> {
    let n = objective.len();
    let mut best: Option<Rational> = None;
    for size in 0..=rows.len().min(n) {
        for support in (0..n).combinations(size) {
            for active in (0..rows.len()).combinations(size) {
                let a: Vec<Vec<Rational>> =
                    active.iter().map(|&i| support.iter().map(|&j| rows[i].coeffs[j]).collect()).collect();
                let d = if size == 0 { int(1) } else { det(&a) };
                if d == int(0) {
                    continue;
                }
                let mut x = vec![int(0); n];
                for (col, &j) in support.iter().enumerate() {
                    let mut replaced = a.clone();
                    for (r, &i) in active.iter().enumerate() {
                        replaced[r][col] = rows[i].rhs;
                    }
                    x[j] = det(&replaced) / d;
                }
                if x.iter().any(|v| *v < int(0)) || !rows.iter().all(|r| holds(r, &x)) {
                    continue;
                }
                let value: Rational = objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                if best.is_none_or(|b| value < b) {
                    best = Some(value);
                }
            }
        }
    }
    best
}

/// Split costs recomputed from the group arithmetic: `j` full groups of
/// `s + 1` and `rem` leftover members.
fn costs(r: usize, s: usize) -> (Rational, Rational) {
    let j = ((r + 1) / (s + 1)) as i64;
    let rem = ((r + 1) % (s + 1)) as i64;
    let s = s as i64;
    let (mut comp, mut comm) = (int(j * s * (s + 1)), frac(j * (s + 1), s));
    match rem {
        0 => {}
        1 => {
            comp += int(1);
            comm += int(1);
        }
        _ => {
            let t = rem - 1;
            comp += int(t * (t + 1));
            comm += frac(t + 1, t);
        }
    }
    (comp, comm)
}

fn oracle_lower_bound(c: &ValidatedConfig, budget: Rational) -> Option<Rational> {
    let (k, r) = (c.k as i64, c.r);
    let nq = from_count(c.nq());
    let objective = vec![int(1) / nq; r];
    let rows = vec![
        Row { coeffs: (1..=r).map(|l| int(l as i64)).collect(), sense: Sense::Ge, rhs: int(k - r as i64) * nq / int(k) },
        Row {
            coeffs: (1..=r).map(|l| int((l * l) as i64)).collect(),
            sense: Sense::Le,
            rhs: budget - int(r as i64) * nq / int(k),
        },
    ];
    oracle_min(&objective, &rows)
}

fn oracle_scdc(c: &ValidatedConfig, budget: Rational) -> Option<Rational> {
    let r = c.r;
    let nq = from_count(c.nq());
    let groups = from_count(binomial(c.k as u64, r as u64 + 1));
    let objective: Vec<Rational> = (1..=r).map(|s| groups * costs(r, s).1 / nq).collect();
    let rows = vec![
        Row { coeffs: vec![int(1); r], sense: Sense::Eq, rhs: int((c.eta1 * c.eta2) as i64) },
        Row {
            coeffs: (1..=r).map(|s| groups * costs(r, s).0).collect(),
            sense: Sense::Le,
            rhs: budget - int(r as i64) * nq / int(c.k as i64),
        },
    ];
    oracle_min(&objective, &rows)
}

#[test]
fn split_costs_from_group_arithmetic() {
    let expected = [(30, frac(6, 5)), (21, frac(9, 4)), (14, frac(10, 3)), (12, int(3)), (6, int(6))];
    for (s, (comp, comm)) in (1..=5).rev().zip(expected) {
        assert_eq!(costs(5, s), (int(comp), comm), "split {s}");
        let lib = cdc_core::lp::split_costs(5, s).unwrap();
        assert_eq!((lib.comp_per_iv, lib.comm_per_iv), (int(comp), comm));
    }
}

#[test]
fn flagship_spot_values_match_oracle() {
    let c = flagship();
    let spots = [
        (75600, frac(1, 10), frac(1, 10)),
        (40000, frac(89, 378), frac(76, 315)),
        (25200, frac(1, 2), frac(1, 2)),
    ];
    for (budget, lb, lp) in spots {
        let b = int(budget);
        assert_eq!(oracle_lower_bound(&c, b), Some(lb));
        assert_eq!(oracle_scdc(&c, b), Some(lp));
        assert_eq!(lower_bound(&c, b).unwrap().objective, lb, "budget {budget}");
        assert_eq!(scdc_optimize(&c, b).unwrap().objective, lp, "budget {budget}");
    }
    let lb = lower_bound(&c, int(40000)).unwrap();
    assert_eq!(lb.weights, vec![int(0), int(5200), frac(2200, 3), int(0), int(0)]);
    let p = scdc_optimize(&c, int(40000)).unwrap();
    assert_eq!(p.weights, vec![int(0), frac(1780, 189), int(0), int(0), frac(110, 189)]);
    let rounded = round_plan(&p, &c).unwrap();
    assert_eq!(rounded.objective, frac(1, 4));
    assert_eq!(rounded.computation, 37800);
    assert!(rounded.within_budget);
}

#[test]
fn small_config_lower_bound() {
    let c = cfg(4, 4, 12, 2);
    let at72 = lower_bound(&c, int(72)).unwrap();
    assert_eq!(at72.objective, frac(1, 4));
    assert_eq!(at72.weights, vec![int(0), int(12)]);
    let at60 = lower_bound(&c, int(60)).unwrap();
    assert_eq!(at60.objective, frac(3, 8));
    assert_eq!(at60.weights, vec![int(12), int(6)]);
}

#[test]
fn programs_agree_with_oracle_on_random_configs() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..30 {
        let k = rng.gen_range(2..=7);
        let r = rng.gen_range(1..=k);
        let c = cfg(k, k * rng.gen_range(1..=2), binomial(k as u64, r as u64) as usize * rng.gen_range(1..=2), r);
        let lo = c.nq() as i64;
        let hi = cdc_min_computation(&c) as i64;
        let budget = frac(rng.gen_range(lo * 4..=hi * 4 + 4), 4);
        assert_eq!(lower_bound(&c, budget).ok().map(|s| s.objective), oracle_lower_bound(&c, budget), "{} {budget}", *c);
        assert_eq!(scdc_optimize(&c, budget).ok().map(|s| s.objective), oracle_scdc(&c, budget), "{} {budget}", *c);
    }
}

#[test]
fn below_nq_is_infeasible() {
    let c = flagship();
    for b in [int(20000), int(25199), frac(503999, 20)] {
        assert!(matches!(lower_bound(&c, b), Err(LpError::BudgetInfeasible { .. })));
        assert!(matches!(scdc_optimize(&c, b), Err(LpError::BudgetInfeasible { .. })));
        assert!(cdc_fit(&c, b).is_err());
    }
}

#[test]
fn anchor_identities() {
    let mut configs = vec![flagship()];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    while configs.len() < 21 {
        let k = rng.gen_range(2..=8);
        let r = rng.gen_range(1..=k);
        configs.push(cfg(k, k * rng.gen_range(1..=3), binomial(k as u64, r as u64) as usize * rng.gen_range(1..=3), r));
    }
    for c in configs {
        let top = from_count(cdc_min_computation(&c));
        let star = optimal_comm_load(c.k, c.r).unwrap();
        assert_eq!(lower_bound(&c, top).unwrap().objective, star, "{}", *c);
        assert_eq!(scdc_optimize(&c, top).unwrap().objective, star, "{}", *c);
        let bottom = from_count(c.nq());
        let unicast = frac((c.k - c.r) as i64, c.k as i64);
        assert_eq!(lower_bound(&c, bottom).unwrap().objective, unicast, "{}", *c);
        assert_eq!(scdc_optimize(&c, bottom).unwrap().objective, unicast, "{}", *c);
    }
}

#[test]
fn sweep_ordering_and_monotonicity() {
    let c = flagship();
    let budgets: Vec<Rational> = (0..=120).map(|i| int(25200) + frac(50400 * i, 120)).collect();
    let rows = figure3_series(&c, &budgets).unwrap();
    let mut previous: Option<Rational> = None;
    for row in &rows {
        let lb = row.lower_bound.as_ref().unwrap().objective;
        let p = row.scdc.as_ref().unwrap();
        let rounded = row.scdc_rounded.as_ref().unwrap();
        assert!(lb <= p.objective && p.objective <= rounded.objective, "budget {}", row.budget);
        assert!(row.cdc_fit.unwrap().1 >= p.objective, "budget {}", row.budget);
        assert!(rounded.within_budget);
        assert_eq!(p.weights[2], int(0), "dominated split 3 used at {}", row.budget);
        assert!(p.nonzero().count() <= 2);
        if let Some(prev) = previous {
            assert!(p.objective <= prev);
        }
        previous = Some(p.objective);
    }
}

#[test]
fn cdc_fit_spots() {
    let c = flagship();
    assert_eq!(cdc_fit(&c, int(60000)).unwrap(), (2, frac(2, 5)));
    assert_eq!(cdc_fit(&c, int(40000)).unwrap(), (1, frac(9, 10)));
    assert_eq!(cdc_fit(&c, int(75600)).unwrap(), (5, frac(1, 10)));
}

/// 0/1 rows keep every vertex on the half-integer lattice, so a grid of step
/// 1/2 under the cap contains all of them.
#[test]
fn solver_matches_half_integer_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..25 {
        let n = rng.gen_range(1..=5);
        let cap = rng.gen_range(1..=3i64);
        let mut constraints = vec![Constraint::new(vec![int(1); n], Sense::Le, int(cap))];
        for _ in 0..rng.gen_range(0..=2) {
            let coeffs: Vec<Rational> = (0..n).map(|_| int(rng.gen_range(0..=1i64))).collect();
            let sense = [Sense::Le, Sense::Ge, Sense::Eq][rng.gen_range(0..3)];
            constraints.push(Constraint::new(coeffs, sense, int(rng.gen_range(0..=cap))));
        }
        let objective: Vec<Rational> = (0..n).map(|_| int(rng.gen_range(-5..=5i64))).collect();
        let lp = SmallLp { objective, constraints };
        let mut grid_best: Option<Rational> = None;
        for halves in (0..n).map(|_| 0..=2 * cap).multi_cartesian_product() {
            let x: Vec<Rational> = halves.iter().map(|&h| frac(h, 2)).collect();
            if lp.is_feasible(&x) {
                let v = lp.value(&x);
                grid_best = Some(grid_best.map_or(v, |b: Rational| b.min(v)));
            }
        }
        match solve_small_lp(&lp) {
            Ok(sol) => {
                assert!(lp.is_feasible(&sol.weights));
                assert_eq!(Some(sol.objective), grid_best, "{lp:?}");
            }
            Err(e) => assert_eq!(grid_best, None, "{e} on {lp:?}"),
        }
    }
}
