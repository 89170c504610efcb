//! Exact solver for tiny linear programs by basic-feasible-solution enumeration.
//!
//! Minimises `c . x` over `x >= 0` subject to at most [`MAX_CONSTRAINTS`]
//! rows. Every vertex of such a polyhedron has at most `m` nonzero
//! coordinates, so trying each support `S` with `|S| <= m` against each
//! equally sized row set `R`, solving `A[R, S] x_S = b_R` exactly, and
//! keeping the feasible solutions visits every vertex. Unboundedness is
//! decided the same way on the normalised recession cone.

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::rational::{int, Rational};

use super::{LpError, LpSolution};

pub const MAX_CONSTRAINTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, sense: Sense, rhs: Rational) -> Self {
        Constraint { coeffs, sense, rhs }
    }

    fn lhs(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum()
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs(x);
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Ge => lhs >= self.rhs,
            Sense::Eq => lhs == self.rhs,
        }
    }
}

/// `min objective . x` s.t. `constraints`, `x >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallLp {
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

impl SmallLp {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.iter().all(|v| !v.is_negative()) && self.constraints.iter().all(|c| c.holds(x))
    }

    pub fn value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

pub fn solve_small_lp(lp: &SmallLp) -> Result<LpSolution, LpError> {
    let n = lp.num_vars();
    if lp.constraints.len() > MAX_CONSTRAINTS {
        return Err(LpError::TooManyConstraints { given: lp.constraints.len() });
    }
    if let Some(c) = lp.constraints.iter().find(|c| c.coeffs.len() != n) {
        return Err(LpError::Shape { expected: n, found: c.coeffs.len() });
    }
    let (weights, objective) = best_vertex(lp).ok_or(LpError::Infeasible)?;
    if recedes_downhill(lp) {
        return Err(LpError::Unbounded);
    }
    Ok(LpSolution { weights, objective, feasible: true, budget: None })
}

/// Best vertex by objective; ties go to the vertex whose weights, read from
/// the last variable down, are lexicographically largest.
fn best_vertex(lp: &SmallLp) -> Option<(Vec<Rational>, Rational)> {
    let n = lp.num_vars();
    let m = lp.constraints.len();
    let mut best: Option<(Vec<Rational>, Rational)> = None;
    for size in 0..=m.min(n) {
        for support in (0..n).combinations(size) {
            for rows in (0..m).combinations(size) {
                let Some(x) = vertex_on(lp, &support, &rows) else { continue };
                if !lp.is_feasible(&x) {
                    continue;
                }
                let value = lp.value(&x);
                let better = match &best {
                    None => true,
                    Some((bx, bv)) => value < *bv || (value == *bv && x.iter().rev().gt(bx.iter().rev())),
                };
                if better {
                    best = Some((x, value));
                }
            }
        }
    }
    best
}

/// Solves `A[rows, support] x = b[rows]` with the other coordinates zero.
fn vertex_on(lp: &SmallLp, support: &[usize], rows: &[usize]) -> Option<Vec<Rational>> {
    let mut system: Vec<Vec<Rational>> = rows
        .iter()
        .map(|&i| {
            let c = &lp.constraints[i];
            let mut row: Vec<Rational> = support.iter().map(|&j| c.coeffs[j]).collect();
            row.push(c.rhs);
            row
        })
        .collect();
    let solution = solve_square(&mut system)?;
    let mut x = vec![Rational::zero(); lp.num_vars()];
    for (&j, v) in support.iter().zip(solution) {
        x[j] = v;
    }
    Some(x)
}

/// Gauss-Jordan elimination on an augmented `s x (s+1)` matrix. `None` if singular.
pub(crate) fn solve_square(system: &mut [Vec<Rational>]) -> Option<Vec<Rational>> {
    let s = system.len();
    for col in 0..s {
        let pivot = (col..s).find(|&r| !system[r][col].is_zero())?;
        system.swap(col, pivot);
        let p = system[col][col];
        for v in system[col].iter_mut() {
            *v /= p;
        }
        let pivot_row = system[col].clone();
        for (r, row) in system.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= factor * pv;
                }
            }
        }
    }
    Some(system.iter().map(|row| row[s]).collect())
}

/// True if some recession direction `d >= 0` with `A d (sense) 0` lowers the
/// objective. Directions are normalised by `sum d = 1`, which keeps the
/// auxiliary program bounded.
fn recedes_downhill(lp: &SmallLp) -> bool {
    let n = lp.num_vars();
    if n == 0 {
        return false;
    }
    let mut constraints: Vec<Constraint> = lp
        .constraints
        .iter()
        .map(|c| Constraint::new(c.coeffs.clone(), c.sense, Rational::zero()))
        .collect();
    constraints.push(Constraint::new(vec![int(1); n], Sense::Eq, int(1)));
    let cone = SmallLp { objective: lp.objective.clone(), constraints };
    matches!(best_vertex(&cone), Some((_, v)) if v.is_negative())
}
