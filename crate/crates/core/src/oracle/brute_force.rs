use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::nelder_mead::{minimize, SimplexOptions};
use crate::error::{invalid, Result};
use crate::poly::Polynomial;
use crate::solver::ProblemSpec;
use crate::supnorm::{constraint_value, maximize, sup_sum_squares};

/// Largest degree the oracle accepts.
pub const ORACLE_MAX_DEGREE: usize = 5;
pub const ORACLE_MIN_BUDGET: usize = 1000;
pub const DEFAULT_RESTARTS: usize = 50;

/// Share of the budget spent on exploring all restarts.
const EXPLORE_SHARE: f64 = 0.2;
/// Number of incumbents refined with the remaining budget.
const REFINED: usize = 4;

/// Grid density used inside the search loop; the reported value is always
/// recomputed with [`sup_sum_squares`].
const SEARCH_GRID_DENSITY: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best_value: f64,
    /// Best family found, rescaled to be feasible.
    pub best_coeffs: BTreeMap<usize, Polynomial>,
    pub evaluations: usize,
    pub seed: u64,
}

/// Layout of the search vector: for each index `j`, `j + 1` coefficients of
/// `P_j` in powers of `x / b`.
struct Layout {
    indices: Vec<usize>,
    b: f64,
    weighted: bool,
}

impl Layout {
    fn dim(&self) -> usize {
        self.indices.iter().map(|j| j + 1).sum()
    }

    fn polys(&self, c: &[f64]) -> Vec<Polynomial> {
        let mut offset = 0;
        self.indices
            .iter()
            .map(|&j| {
                let p =
                    Polynomial::new(c[offset..offset + j + 1].to_vec()).compose_scale(1.0 / self.b);
                offset += j + 1;
                p
            })
            .collect()
    }

    fn objective(&self, polys: &[Polynomial]) -> f64 {
        self.indices
            .iter()
            .zip(polys)
            .map(|(&j, p)| p.coeff(j).powi(2))
            .sum()
    }

    /// Scale-free ratio of the objective to the constraint sup.
    fn ratio(&self, c: &[f64]) -> f64 {
        let polys = self.polys(c);
        let num = self.objective(&polys);
        if num == 0.0 {
            return 0.0;
        }
        let degree = 2 * self.indices.last().copied().unwrap_or(0) + 2 * usize::from(self.weighted);
        let (sup, _) = maximize(
            |x| constraint_value(&polys, self.b, self.weighted, x),
            -self.b,
            self.b,
            SEARCH_GRID_DENSITY * (degree + 1),
        );
        if sup > 0.0 {
            num / sup
        } else {
            0.0
        }
    }
}

/// Multi-start derivative-free maximization of
/// `R(c) = sum_j m_j(c)^2 / sup_{|x| <= b} W(x) sum_j P_j(x, c)^2`.
///
/// `R` is invariant under scaling of `c`, so its maximum is the optimum of the
/// constrained problem. A fifth of the budget explores all restart points
/// (drawn from `seed`); the rest refines the best few. Runs are parallel and
/// merged in a fixed order, so the result depends only on
/// `(spec, budget, seed)`.
pub fn brute_force_max(spec: &ProblemSpec, budget: usize, seed: u64) -> Result<OracleResult> {
    brute_force_with_restarts(spec, budget, seed, DEFAULT_RESTARTS)
}

pub fn brute_force_with_restarts(
    spec: &ProblemSpec,
    budget: usize,
    seed: u64,
    restarts: usize,
) -> Result<OracleResult> {
    if spec.n() > ORACLE_MAX_DEGREE {
        return invalid(format!(
            "oracle supports degrees up to {ORACLE_MAX_DEGREE}, got {}",
            spec.n()
        ));
    }
    if budget < ORACLE_MIN_BUDGET {
        return invalid(format!(
            "oracle budget must be at least {ORACLE_MIN_BUDGET}"
        ));
    }
    let restarts = restarts.clamp(1, budget / 200);
    let layout = Layout {
        indices: spec.indices().to_vec(),
        b: spec.b(),
        weighted: spec.kind().is_weighted(),
    };
    let dim = layout.dim();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<Vec<f64>> = (0..restarts)
        .map(|_| unit_ball_point(&mut rng, dim))
        .collect();

    // exploration: every start gets a short search
    let explore_budget = (budget as f64 * EXPLORE_SHARE) as usize / restarts;
    let mut explored: Vec<(f64, Vec<f64>, usize)> = starts
        .into_par_iter()
        .map(|x0| local_search(&layout, x0, explore_budget))
        .collect();
    let mut evaluations: usize = explored.iter().map(|r| r.2).sum();

    // refinement: the best incumbents share what is left
    sort_best_first(&mut explored);
    let keep = REFINED.min(explored.len());
    let refine_budget = budget.saturating_sub(evaluations) / keep;
    let mut runs: Vec<(f64, Vec<f64>, usize)> = explored
        .into_iter()
        .take(keep)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(_, x0, _)| local_search(&layout, x0, refine_budget))
        .collect();
    evaluations += runs.iter().map(|r| r.2).sum::<usize>();
    sort_best_first(&mut runs);
    let best_x = runs.swap_remove(0).1;

    let polys = layout.polys(&best_x);
    let sup = sup_sum_squares(&polys, layout.b, layout.weighted)?.sup;
    let scale = if sup > 0.0 { 1.0 / sup.sqrt() } else { 0.0 };
    let polys: Vec<Polynomial> = polys.iter().map(|p| p.scale(scale)).collect();
    let best_value = layout.objective(&polys);
    Ok(OracleResult {
        best_value,
        best_coeffs: layout.indices.iter().copied().zip(polys).collect(),
        evaluations,
        seed,
    })
}

/// Descending by value; the sort is stable, so ties keep start order.
fn sort_best_first(runs: &mut [(f64, Vec<f64>, usize)]) {
    runs.sort_by(|a, b| b.0.total_cmp(&a.0));
}

/// Repeated simplex runs from the incumbent until the budget is spent or
/// three consecutive runs stop improving.
fn local_search(layout: &Layout, x0: Vec<f64>, budget: usize) -> (f64, Vec<f64>, usize) {
    let mut x = x0;
    let mut best = layout.ratio(&x);
    let mut used = 1;
    let mut step = 0.5;
    let mut stale = 0;
    while used < budget && stale < 3 {
        let run = minimize(
            |c| -layout.ratio(c),
            &x,
            SimplexOptions {
                step,
                ftol: 1e-13,
                xtol: 1e-9,
                max_evaluations: budget - used,
            },
        );
        used += run.evaluations;
        let value = -run.value;
        if value > best * (1.0 + 1e-12) {
            stale = 0;
        } else {
            stale += 1;
        }
        if value > best {
            best = value;
            x = normalize(run.x);
        }
        step = (step * 0.5).max(1e-3);
    }
    (best, x, used)
}

/// Rescales to unit Euclidean norm; the ratio is scale invariant.
fn normalize(mut x: Vec<f64>) -> Vec<f64> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    x
}

/// A random point of the unit ball: random direction, radius `u^{1/dim}`.
fn unit_ball_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let direction = loop {
        let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        if x.iter().any(|v| v.abs() > 1e-3) {
            break normalize(x);
        }
    };
    let radius = rng.random::<f64>().powf(1.0 / dim as f64);
    direction.into_iter().map(|v| v * radius).collect()
}
