//! Closed-form loads, the CDC-fit scheme, and the trade-off curve series.

use rayon::prelude::*;
use thiserror::Error;

use crate::config::{ClusterConfig, ValidatedConfig};
use crate::lp::{self, LpError, LpSolution, RoundedPlan};
use crate::rational::{frac, from_count, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("r = {r} is outside [1:{k}]")]
    Range { r: usize, k: usize },
    #[error("budget {} is below the minimum NQ = {minimum}", crate::rational::exact(.budget))]
    BudgetInfeasible { budget: Rational, minimum: u64 },
}

/// `L*(r) = (K - r) / (r K)`.
pub fn optimal_comm_load(k: usize, r: usize) -> Result<Rational, AnalysisError> {
    if r == 0 || r > k {
        return Err(AnalysisError::Range { r, k });
    }
    Ok(frac((k - r) as i64, (r * k) as i64))
}

/// Fewest map computations CDC needs, `r N Q (K - r + 1) / K`.
pub fn cdc_min_computation(cfg: &ValidatedConfig) -> u64 {
    per_server_min_computation(cfg) * cfg.k as u64
}

/// `r N Q (K - r + 1) / K^2`: per server, `C(K-1, r) r eta1 eta2` shuffle
/// values plus `eta2 r N / K` local ones.
pub fn per_server_min_computation(cfg: &ValidatedConfig) -> u64 {
    let (k, r) = (cfg.k as u64, cfg.r as u64);
    let shuffle = crate::binomial(k - 1, r) * r * (cfg.eta1 * cfg.eta2) as u64;
    let local = cfg.eta2 as u64 * r * cfg.n as u64 / k;
    shuffle + local
}

/// Computations when every server maps all functions on all its files: `r N Q`.
pub fn naive_computation(cfg: &ValidatedConfig) -> u64 {
    (cfg.r * cfg.n * cfg.q) as u64
}

/// Computations CDC needs at redundancy `r'` on a cluster of `K` servers,
/// `r' (K - r' + 1) N Q / K`, as an exact rational.
fn cdc_cost_at(k: usize, nq: u64, r: usize) -> Rational {
    from_count((r * (k - r + 1)) as u64) * from_count(nq) / int(k as i64)
}

/// CDC-fit: run CDC at the largest `r* <= r` whose computation fits `budget`.
/// Returns `r*` and `L*(r*)`.
pub fn cdc_fit(cfg: &ValidatedConfig, budget: Rational) -> Result<(usize, Rational), AnalysisError> {
    let r_star = (1..=cfg.r)
        .rev()
        .find(|&r| cdc_cost_at(cfg.k, cfg.nq(), r) <= budget)
        .ok_or(AnalysisError::BudgetInfeasible { budget, minimum: cfg.nq() })?;
    Ok((r_star, optimal_comm_load(cfg.k, r_star)?))
}

/// One point of a trade-off curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradeoffPoint {
    pub r: usize,
    pub computation: u64,
    pub communication: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Figure1Point {
    pub r: usize,
    pub comp_min: u64,
    pub comp_naive: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Scheme {
    /// Minimum computations of CDC.
    CdcMin,
    /// CDC where servers map everything they store.
    Naive,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::CdcMin => "cdc-min",
            Scheme::Naive => "naive",
        }
    }
}

/// Configs of the family `(K, Q, N, r)` for every `r` in `[1:K]` whose
/// divisibility conditions hold.
pub fn feasible_family(k: usize, q: usize, n: usize) -> Vec<ValidatedConfig> {
    (1..=k)
        .filter_map(|r| ClusterConfig::from_shape_min_bits(k, q, n, r).validate().ok())
        .collect()
}

pub fn figure1_series(k: usize, q: usize, n: usize) -> Vec<Figure1Point> {
    feasible_family(k, q, n)
        .iter()
        .map(|c| Figure1Point { r: c.r, comp_min: cdc_min_computation(c), comp_naive: naive_computation(c) })
        .collect()
}

/// Communication load against computation, for the minimum-computation
/// CDC curve and the naive one, in that order, each ascending in `r`.
pub fn figure2_series(k: usize, q: usize, n: usize) -> Vec<(Scheme, TradeoffPoint)> {
    let family = feasible_family(k, q, n);
    let mut out = Vec::with_capacity(family.len() * 2);
    for (scheme, cost) in [
        (Scheme::CdcMin, cdc_min_computation as fn(&ValidatedConfig) -> u64),
        (Scheme::Naive, naive_computation),
    ] {
        for c in &family {
            let communication = optimal_comm_load(c.k, c.r).expect("validated r");
            out.push((scheme, TradeoffPoint { r: c.r, computation: cost(c), communication }));
        }
    }
    out
}

/// S-CDC, its rounded plan, CDC-fit and the lower bound at one budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Figure3Row {
    pub budget: Rational,
    /// `(r*, L)`, or `None` below the minimum budget.
    pub cdc_fit: Option<(usize, Rational)>,
    pub scdc: Option<LpSolution>,
    pub scdc_rounded: Option<RoundedPlan>,
    pub lower_bound: Option<LpSolution>,
}

impl Figure3Row {
    pub fn feasible(&self) -> bool {
        self.cdc_fit.is_some()
    }
}

fn infeasible_as_none<T>(r: Result<T, LpError>) -> Result<Option<T>, LpError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(LpError::BudgetInfeasible { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn figure3_row(cfg: &ValidatedConfig, budget: Rational) -> Result<Figure3Row, LpError> {
    let scdc = infeasible_as_none(lp::scdc_optimize(cfg, budget))?;
    let scdc_rounded = scdc.as_ref().map(|s| lp::round_plan(s, cfg)).transpose()?;
    Ok(Figure3Row {
        budget,
        cdc_fit: cdc_fit(cfg, budget).ok(),
        scdc,
        scdc_rounded,
        lower_bound: infeasible_as_none(lp::lower_bound(cfg, budget))?,
    })
}

/// `steps` evenly spaced budgets from `min` to `max`, both included.
pub fn budget_grid(min: Rational, max: Rational, steps: usize) -> Vec<Rational> {
    match steps {
        0 => vec![],
        1 => vec![min],
        _ => {
            let step = (max - min) / int((steps - 1) as i64);
            (0..steps).map(|i| min + step * int(i as i64)).collect()
        }
    }
}

/// Default sweep: 60 budgets from `NQ` to the CDC minimum.
pub fn default_budgets(cfg: &ValidatedConfig) -> Vec<Rational> {
    budget_grid(from_count(cfg.nq()), from_count(cdc_min_computation(cfg)), 60)
}

/// Rows in budget order; points are evaluated in parallel.
pub fn figure3_series(cfg: &ValidatedConfig, budgets: &[Rational]) -> Result<Vec<Figure3Row>, LpError> {
    budgets.par_iter().map(|&b| figure3_row(cfg, b)).collect()
}
