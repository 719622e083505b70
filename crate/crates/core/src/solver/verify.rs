//! Feasibility and optimality checks for a candidate solution.

use super::{ExtremalSolution, ProblemSpec};
use crate::canonical::{l2_norms, support_measure};
use crate::error::{invalid, Result};
use crate::supnorm::{constraint_value, sup_sum_squares, SupNormReport};

/// Pass/fail thresholds used by [`verify_solution`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed excess of the constraint sup over 1.
    pub feasibility: f64,
    /// Allowed relative spread of `k_j` over the active set.
    pub equimax: f64,
    /// Allowed deviation from 1 of the constraint at the dual support points.
    pub attainment: f64,
    /// Allowed `|objective * k_n - 1|`.
    pub duality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            feasibility: 1e-8,
            equimax: 1e-9,
            attainment: 1e-8,
            duality: 1e-8,
        }
    }
}

/// Residuals of a candidate solution. The dual-measure fields are `None` when
/// the solution carries no dual canonical moments (second kind).
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub constraint_sup: SupNormReport,
    /// Sum of squared leading coefficients recomputed from the polynomials.
    pub objective: f64,
    pub equimax_spread: Option<f64>,
    pub support_attainment: Option<f64>,
    pub duality_residual: Option<f64>,
    pub feasible: bool,
    pub equimax_ok: bool,
    pub attainment_ok: bool,
    pub duality_ok: bool,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.feasible && self.equimax_ok && self.attainment_ok && self.duality_ok
    }
}

pub fn verify_solution(sol: &ExtremalSolution, spec: &ProblemSpec) -> Result<VerificationReport> {
    verify_with(sol, spec, &Tolerances::default())
}

impl ExtremalSolution {
    pub fn verify_with(&self, spec: &ProblemSpec, tol: &Tolerances) -> Result<VerificationReport> {
        verify_with(self, spec, tol)
    }
}

fn verify_with(
    sol: &ExtremalSolution,
    spec: &ProblemSpec,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    if !sol.polys.keys().copied().eq(spec.indices().iter().copied()) {
        return invalid("solution polynomials do not match the index set");
    }
    let b = spec.b();
    let weighted = spec.kind().is_weighted();
    let polys = sol.poly_list();
    let constraint_sup = sup_sum_squares(&polys, b, weighted)?;
    let objective = sol.leading_objective();

    let (mut equimax_spread, mut support_attainment, mut duality_residual) = (None, None, None);
    if let Some(cm) = &sol.dual_moments {
        let n = spec.n();
        let norms = l2_norms(cm, n)?;
        let active: Vec<f64> = sol.active_set.iter().map(|&j| norms[j - 1]).collect();
        let max = active.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = active.iter().copied().fold(f64::INFINITY, f64::min);
        equimax_spread = Some(if active.is_empty() {
            0.0
        } else {
            (max - min) / min
        });

        let measure = support_measure(cm)?;
        support_attainment = Some(
            measure
                .points
                .iter()
                .map(|&x| (constraint_value(&polys, b, weighted, x) - 1.0).abs())
                .fold(0.0, f64::max),
        );
        duality_residual = Some((objective * norms[n - 1] - 1.0).abs());
    }

    let within = |v: Option<f64>, t: f64| v.is_none_or(|v| v.is_finite() && v <= t);
    Ok(VerificationReport {
        feasible: constraint_sup.sup <= 1.0 + tol.feasibility,
        equimax_ok: within(equimax_spread, tol.equimax),
        attainment_ok: within(support_attainment, tol.attainment),
        duality_ok: within(duality_residual, tol.duality),
        constraint_sup,
        objective,
        equimax_spread,
        support_attainment,
        duality_residual,
    })
}
